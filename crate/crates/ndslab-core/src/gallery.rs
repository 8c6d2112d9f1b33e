//! Reference systems with attached, executable expectations.
//!
//! Each scenario bundles a map sequence, distinguished rational points, the
//! declared uniform limit when one exists, and a list of expected verdicts
//! that can be replayed for regression testing.

use serde_json::{json, Map, Value};

use crate::classify::{
    check_def1, check_def2, check_def3, check_def4, check_def5, limit_cycle_crosscheck,
    VerdictStatus,
};
use crate::error::{Error, Result};
use crate::families::{theorem4_f_map, theorem4_g_map};
use crate::plmap::PLMap;
use crate::rational::Rational;
use crate::sequence::MapSequence;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d).unwrap()
}

/// Default tolerance schedule used by gallery expectations.
pub fn default_eps_schedule() -> Vec<Rational> {
    vec![r(1, 4), r(1, 20), r(1, 100)]
}

/// The orbit of `1/59` under the tent map is exactly eventually periodic
/// with period 29 and visits every even multiple of `1/59`, which makes it
/// the gallery's stand-in for a dense-orbit point.
pub fn dense_orbit_standin() -> Rational {
    r(1, 59)
}

/// Optional construction parameters for `build_scenario`.
#[derive(Clone, Debug, Default)]
pub struct ScenarioParams {
    /// Height of the flat shoulder for `example_iii` (must be < 2/3).
    pub y: Option<Rational>,
    /// Distinguished point on the flat shoulder for `example_iv`
    /// (must lie strictly between 2/3 and 5/6).
    pub proxy_point: Option<Rational>,
    /// Offset into the rational enumeration for `example_v`.
    pub enumeration_offset: Option<u64>,
}

/// One executable expectation attached to a scenario.
#[derive(Clone, Debug)]
pub enum Expectation {
    Def1 {
        point: Rational,
        r_max: u64,
        horizon: u64,
        eps: Rational,
        want: VerdictStatus,
        want_r: Option<u64>,
    },
    Def2 {
        point: Rational,
        r: u64,
        horizon: u64,
        want: VerdictStatus,
    },
    /// Definition 2 refuted for every r up to r_max.
    Def2SweepRefuted {
        point: Rational,
        r_max: u64,
        horizon: u64,
    },
    Def3 {
        point: Rational,
        horizon: u64,
        want: VerdictStatus,
        want_n: Option<u64>,
    },
    Def4 {
        point: Rational,
        r: u64,
        horizon: u64,
        want: VerdictStatus,
    },
    Def4SweepRefuted {
        point: Rational,
        r_max: u64,
        horizon: u64,
    },
    Def5 {
        point: Rational,
        r_max: u64,
        horizon: u64,
        eps_schedule: Vec<Rational>,
        want: VerdictStatus,
        want_r: Option<u64>,
        want_cycle: Option<Vec<Rational>>,
    },
    /// `g_n ∘ F_n = F_{n+1}` as canonical map equality for n = 1..=upto.
    CompositionLaw { upto: u64 },
    /// `f_1^n` equals the closed form `F_n` for n = 1..=upto.
    WindowMatchesClosedForm { upto: u64 },
    /// Exact sup distances to the limit are strictly decreasing.
    ConvergenceMonotone { upto: u64 },
    /// Alternating pins: `f_1^{2m}(0) = 0` and `f_1^{2m+1}(0) = q_{m+1}`.
    StructuralPins { upto_m: u64 },
    /// The def-5 certificate cycle is a periodic cycle of the declared
    /// limit map.
    LimitCycleCrosscheckDef5 {
        point: Rational,
        r_max: u64,
        horizon: u64,
        eps_schedule: Vec<Rational>,
    },
    /// Exact fixed points of the declared limit map.
    FixedPointsOfLimit { want_points: Vec<Rational> },
}

/// Outcome of replaying one expectation.
#[derive(Clone, Debug)]
pub struct ExpectationResult {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

impl ExpectationResult {
    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("label".into(), json!(self.label));
        obj.insert("passed".into(), json!(self.passed));
        obj.insert("detail".into(), json!(self.detail));
        Value::Object(obj)
    }
}

/// A gallery scenario.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub id: String,
    pub system: MapSequence,
    pub points: Vec<(String, Rational)>,
    pub expectations: Vec<(String, Expectation)>,
}

impl Scenario {
    pub fn declared_limit(&self) -> Option<&PLMap> {
        self.system.declared_limit()
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("id".into(), json!(self.id));
        obj.insert("system".into(), self.system.to_spec_json());
        obj.insert(
            "points".into(),
            json!(self
                .points
                .iter()
                .map(|(label, p)| json!({ "label": label, "value": p.to_string() }))
                .collect::<Vec<_>>()),
        );
        Value::Object(obj)
    }
}

/// All gallery ids, in build order.
pub fn gallery_ids() -> Vec<&'static str> {
    vec![
        "tent_auto",
        "example_ii",
        "example_iii",
        "example_iv",
        "example_v",
        "theorem4",
        "uc_detour",
    ]
}

/// Build a gallery scenario by id.
pub fn build_scenario(id: &str, params: &ScenarioParams) -> Result<Scenario> {
    let eps = default_eps_schedule();
    let standin = dense_orbit_standin();
    match id {
        "tent_auto" => {
            let system = MapSequence::constant(PLMap::tent())?;
            let points = vec![
                ("fixed".to_string(), r(2, 3)),
                ("two_cycle".to_string(), r(2, 5)),
                ("five_cycle".to_string(), r(2, 11)),
                ("long_cycle".to_string(), standin.clone()),
                ("endpoint".to_string(), r(0, 1)),
            ];
            let expectations = vec![
                (
                    "def1 holds at the fixed point".to_string(),
                    Expectation::Def1 {
                        point: r(2, 3),
                        r_max: 4,
                        horizon: 100,
                        eps: r(1, 100),
                        want: VerdictStatus::HoldsExactly,
                        want_r: Some(1),
                    },
                ),
                (
                    "def2 holds on the exact 2-cycle".to_string(),
                    Expectation::Def2 {
                        point: r(2, 5),
                        r: 2,
                        horizon: 100,
                        want: VerdictStatus::HoldsExactly,
                    },
                ),
                (
                    "def5 reports the exact 5-cycle".to_string(),
                    Expectation::Def5 {
                        point: r(2, 11),
                        r_max: 5,
                        horizon: 200,
                        eps_schedule: eps.clone(),
                        want: VerdictStatus::HoldsExactly,
                        want_r: Some(5),
                        want_cycle: None,
                    },
                ),
                (
                    "def3 returns at the left endpoint".to_string(),
                    Expectation::Def3 {
                        point: r(0, 1),
                        horizon: 10,
                        want: VerdictStatus::HoldsExactly,
                        want_n: Some(1),
                    },
                ),
                (
                    "def5 refutes small periods on the long cycle".to_string(),
                    Expectation::Def5 {
                        point: standin.clone(),
                        r_max: 8,
                        horizon: 2000,
                        eps_schedule: eps.clone(),
                        want: VerdictStatus::RefutedAt,
                        want_r: None,
                        want_cycle: None,
                    },
                ),
            ];
            Ok(Scenario {
                id: id.to_string(),
                system,
                points,
                expectations,
            })
        }
        "example_ii" => {
            let system =
                MapSequence::eventually_constant(vec![PLMap::identity()], PLMap::tent())?;
            let p = standin.clone();
            let points = vec![("transitive_standin".to_string(), p.clone())];
            let expectations = vec![
                (
                    "def3 holds immediately (first map is the identity)".to_string(),
                    Expectation::Def3 {
                        point: p.clone(),
                        horizon: 2000,
                        want: VerdictStatus::HoldsExactly,
                        want_n: Some(1),
                    },
                ),
                (
                    "def1 refuted".to_string(),
                    Expectation::Def1 {
                        point: p.clone(),
                        r_max: 8,
                        horizon: 2000,
                        eps: r(1, 100),
                        want: VerdictStatus::RefutedAt,
                        want_r: None,
                    },
                ),
                (
                    "def2 refuted for all small r".to_string(),
                    Expectation::Def2SweepRefuted {
                        point: p.clone(),
                        r_max: 4,
                        horizon: 2000,
                    },
                ),
                (
                    "def4 refuted for all small r".to_string(),
                    Expectation::Def4SweepRefuted {
                        point: p.clone(),
                        r_max: 4,
                        horizon: 2000,
                    },
                ),
                (
                    "def5 refuted".to_string(),
                    Expectation::Def5 {
                        point: p,
                        r_max: 8,
                        horizon: 2000,
                        eps_schedule: eps.clone(),
                        want: VerdictStatus::RefutedAt,
                        want_r: None,
                        want_cycle: None,
                    },
                ),
            ];
            Ok(Scenario {
                id: id.to_string(),
                system,
                points,
                expectations,
            })
        }
        "example_iii" => {
            let y = params.y.clone().unwrap_or_else(|| standin.clone());
            if !(y > r(0, 1) && y < r(2, 3)) {
                return Err(Error::BadParams(format!(
                    "example_iii needs 0 < y < 2/3, got {y}"
                )));
            }
            let f1 = PLMap::from_anchors(vec![
                (r(0, 1), r(0, 1)),
                (y.clone(), y.clone()),
                (r(5, 6), y.clone()),
                (r(1, 1), r(1, 1)),
            ])?;
            let system = MapSequence::eventually_constant(vec![f1], PLMap::tent())?;
            let p = r(2, 3);
            let points = vec![
                ("pseudo_periodic".to_string(), p.clone()),
                ("shoulder_height".to_string(), y),
            ];
            let expectations = vec![
                (
                    "def1 holds at the tail-map fixed point".to_string(),
                    Expectation::Def1 {
                        point: p.clone(),
                        r_max: 8,
                        horizon: 2000,
                        eps: r(1, 100),
                        want: VerdictStatus::HoldsExactly,
                        want_r: Some(1),
                    },
                ),
                (
                    "def2 refuted for all small r".to_string(),
                    Expectation::Def2SweepRefuted {
                        point: p.clone(),
                        r_max: 4,
                        horizon: 2000,
                    },
                ),
                (
                    "def3 finds no return".to_string(),
                    Expectation::Def3 {
                        point: p.clone(),
                        horizon: 2000,
                        want: VerdictStatus::ConsistentUpTo,
                        want_n: None,
                    },
                ),
                (
                    "def4 refuted for all small r".to_string(),
                    Expectation::Def4SweepRefuted {
                        point: p.clone(),
                        r_max: 4,
                        horizon: 2000,
                    },
                ),
                (
                    "def5 refuted".to_string(),
                    Expectation::Def5 {
                        point: p,
                        r_max: 8,
                        horizon: 2000,
                        eps_schedule: eps.clone(),
                        want: VerdictStatus::RefutedAt,
                        want_r: None,
                        want_cycle: None,
                    },
                ),
            ];
            Ok(Scenario {
                id: id.to_string(),
                system,
                points,
                expectations,
            })
        }
        "example_iv" => {
            let proxy = params.proxy_point.clone().unwrap_or_else(|| r(7, 10));
            if !(proxy > r(2, 3) && proxy < r(5, 6)) {
                return Err(Error::BadParams(format!(
                    "example_iv needs 2/3 < proxy < 5/6, got {proxy}"
                )));
            }
            let f1 = PLMap::from_anchors(vec![
                (r(0, 1), r(0, 1)),
                (r(2, 3), r(2, 3)),
                (r(5, 6), r(2, 3)),
                (r(1, 1), r(1, 1)),
            ])?;
            let system = MapSequence::eventually_constant(vec![f1], PLMap::tent())?;
            let points = vec![("asymptotic_only".to_string(), proxy.clone())];
            let expectations = vec![
                (
                    "def5 holds with the fixed cycle {2/3}".to_string(),
                    Expectation::Def5 {
                        point: proxy.clone(),
                        r_max: 4,
                        horizon: 200,
                        eps_schedule: eps.clone(),
                        want: VerdictStatus::HoldsExactly,
                        want_r: Some(1),
                        want_cycle: Some(vec![r(2, 3)]),
                    },
                ),
                (
                    "def1 refuted".to_string(),
                    Expectation::Def1 {
                        point: proxy.clone(),
                        r_max: 8,
                        horizon: 200,
                        eps: r(1, 100),
                        want: VerdictStatus::RefutedAt,
                        want_r: None,
                    },
                ),
                (
                    "def2 refuted for all small r".to_string(),
                    Expectation::Def2SweepRefuted {
                        point: proxy.clone(),
                        r_max: 4,
                        horizon: 200,
                    },
                ),
                (
                    "def3 finds no return".to_string(),
                    Expectation::Def3 {
                        point: proxy.clone(),
                        horizon: 200,
                        want: VerdictStatus::ConsistentUpTo,
                        want_n: None,
                    },
                ),
                (
                    "def4 refuted for all small r".to_string(),
                    Expectation::Def4SweepRefuted {
                        point: proxy,
                        r_max: 4,
                        horizon: 200,
                    },
                ),
            ];
            Ok(Scenario {
                id: id.to_string(),
                system,
                points,
                expectations,
            })
        }
        "example_v" => {
            let offset = params.enumeration_offset.unwrap_or(0);
            let system = MapSequence::example_v(offset);
            let p = r(0, 1);
            let points = vec![("pivot".to_string(), p.clone())];
            let expectations = vec![
                (
                    "def4 holds structurally with r = 2".to_string(),
                    Expectation::Def4 {
                        point: p.clone(),
                        r: 2,
                        horizon: 600,
                        want: VerdictStatus::HoldsExactly,
                    },
                ),
                (
                    "def1 refuted".to_string(),
                    Expectation::Def1 {
                        point: p.clone(),
                        r_max: 4,
                        horizon: 600,
                        eps: r(1, 4),
                        want: VerdictStatus::RefutedAt,
                        want_r: None,
                    },
                ),
                (
                    "def2 refuted for all small r".to_string(),
                    Expectation::Def2SweepRefuted {
                        point: p.clone(),
                        r_max: 4,
                        horizon: 600,
                    },
                ),
                (
                    "def5 refuted at tolerance 1/4".to_string(),
                    Expectation::Def5 {
                        point: p,
                        r_max: 2,
                        horizon: 600,
                        eps_schedule: vec![r(1, 2), r(1, 4)],
                        want: VerdictStatus::RefutedAt,
                        want_r: None,
                        want_cycle: None,
                    },
                ),
                (
                    "alternating pins hold exactly".to_string(),
                    Expectation::StructuralPins { upto_m: 100 },
                ),
            ];
            Ok(Scenario {
                id: id.to_string(),
                system,
                points,
                expectations,
            })
        }
        "theorem4" => {
            let system = MapSequence::theorem_four();
            let p = r(1, 2);
            let points = vec![
                ("limit_fixed_point".to_string(), p.clone()),
                ("generic".to_string(), r(1, 3)),
            ];
            let expectations = vec![
                (
                    "composition identity".to_string(),
                    Expectation::CompositionLaw { upto: 50 },
                ),
                (
                    "windows collapse to the closed form".to_string(),
                    Expectation::WindowMatchesClosedForm { upto: 30 },
                ),
                (
                    "sup distances to the limit strictly decrease".to_string(),
                    Expectation::ConvergenceMonotone { upto: 50 },
                ),
                (
                    "def5 reports the 2-cycle {1, 0}".to_string(),
                    Expectation::Def5 {
                        point: p.clone(),
                        r_max: 2,
                        horizon: 500,
                        eps_schedule: eps.clone(),
                        want: VerdictStatus::ConsistentUpTo,
                        want_r: Some(2),
                        want_cycle: Some(vec![r(1, 1), r(0, 1)]),
                    },
                ),
                (
                    "def5 refutes an asymptotic fixed point".to_string(),
                    Expectation::Def5 {
                        point: p.clone(),
                        r_max: 1,
                        horizon: 500,
                        eps_schedule: eps.clone(),
                        want: VerdictStatus::RefutedAt,
                        want_r: Some(1),
                        want_cycle: None,
                    },
                ),
                (
                    "certificate cycle is a limit-map cycle".to_string(),
                    Expectation::LimitCycleCrosscheckDef5 {
                        point: p.clone(),
                        r_max: 2,
                        horizon: 500,
                        eps_schedule: eps.clone(),
                    },
                ),
                (
                    "limit map fixes exactly 1/2".to_string(),
                    Expectation::FixedPointsOfLimit {
                        want_points: vec![r(1, 2)],
                    },
                ),
                (
                    "def2 refuted at the limit fixed point".to_string(),
                    Expectation::Def2SweepRefuted {
                        point: p.clone(),
                        r_max: 2,
                        horizon: 500,
                    },
                ),
                (
                    "def3 finds no return for the limit fixed point".to_string(),
                    Expectation::Def3 {
                        point: p.clone(),
                        horizon: 500,
                        want: VerdictStatus::ConsistentUpTo,
                        want_n: None,
                    },
                ),
                (
                    "def4 refuted at the limit fixed point".to_string(),
                    Expectation::Def4SweepRefuted {
                        point: p,
                        r_max: 2,
                        horizon: 500,
                    },
                ),
            ];
            Ok(Scenario {
                id: id.to_string(),
                system,
                points,
                expectations,
            })
        }
        "uc_detour" => {
            // Prefix detours 0 through 1/2 before the constant tail fixes
            // it: block returns with r = 2 hold while step periodicity
            // fails for every r. Witnesses the missing arrow 4 -> 2 in the
            // uniformly convergent mode.
            let f1 = PLMap::from_anchors(vec![
                (r(0, 1), r(1, 2)),
                (r(1, 2), r(1, 1)),
                (r(1, 1), r(0, 1)),
            ])?;
            let f2 = PLMap::from_anchors(vec![
                (r(0, 1), r(1, 1)),
                (r(1, 2), r(0, 1)),
                (r(1, 1), r(1, 1)),
            ])?;
            let system = MapSequence::eventually_constant(vec![f1, f2], PLMap::tent())?;
            let p = r(0, 1);
            let points = vec![("detoured".to_string(), p.clone())];
            let expectations = vec![
                (
                    "def4 holds with r = 2".to_string(),
                    Expectation::Def4 {
                        point: p.clone(),
                        r: 2,
                        horizon: 100,
                        want: VerdictStatus::HoldsExactly,
                    },
                ),
                (
                    "def2 refuted for every small r".to_string(),
                    Expectation::Def2SweepRefuted {
                        point: p.clone(),
                        r_max: 6,
                        horizon: 100,
                    },
                ),
                (
                    "def5 holds with the fixed cycle {0}".to_string(),
                    Expectation::Def5 {
                        point: p.clone(),
                        r_max: 2,
                        horizon: 100,
                        eps_schedule: eps.clone(),
                        want: VerdictStatus::HoldsExactly,
                        want_r: Some(1),
                        want_cycle: Some(vec![r(0, 1)]),
                    },
                ),
                (
                    "def1 holds at the tail fixed point".to_string(),
                    Expectation::Def1 {
                        point: p.clone(),
                        r_max: 2,
                        horizon: 100,
                        eps: r(1, 100),
                        want: VerdictStatus::HoldsExactly,
                        want_r: Some(1),
                    },
                ),
                (
                    "def3 returns at step 2".to_string(),
                    Expectation::Def3 {
                        point: p,
                        horizon: 100,
                        want: VerdictStatus::HoldsExactly,
                        want_n: Some(2),
                    },
                ),
            ];
            Ok(Scenario {
                id: id.to_string(),
                system,
                points,
                expectations,
            })
        }
        other => Err(Error::UnknownScenario(other.to_string())),
    }
}

/// Exact `sup |g_n - (1-x)|` for n = 1..=n_max.
pub fn convergence_table(n_max: u64) -> Vec<(u64, Rational)> {
    let limit = PLMap::one_minus_x();
    (1..=n_max)
        .map(|n| (n, theorem4_g_map(n).sup_distance(&limit)))
        .collect()
}

/// Replay every expectation of a scenario.
pub fn scenario_expectations(s: &Scenario) -> Result<Vec<ExpectationResult>> {
    let mut out = Vec::with_capacity(s.expectations.len());
    for (label, exp) in &s.expectations {
        let (passed, detail) = run_expectation(s, exp)?;
        out.push(ExpectationResult {
            label: label.clone(),
            passed,
            detail,
        });
    }
    Ok(out)
}

fn status_name(v: VerdictStatus) -> &'static str {
    v.as_str()
}

fn run_expectation(s: &Scenario, exp: &Expectation) -> Result<(bool, String)> {
    let seq = &s.system;
    Ok(match exp {
        Expectation::Def1 {
            point,
            r_max,
            horizon,
            eps,
            want,
            want_r,
        } => {
            let v = check_def1(seq, point, *r_max, *horizon, eps)?;
            let mut ok = v.status == *want;
            if let Some(wr) = want_r {
                ok &= v.r == Some(*wr);
            }
            (ok, format!("def1 at {point}: {}", status_name(v.status)))
        }
        Expectation::Def2 {
            point,
            r,
            horizon,
            want,
        } => {
            let v = check_def2(seq, point, *r, *horizon)?;
            (
                v.status == *want,
                format!("def2 r={r} at {point}: {}", status_name(v.status)),
            )
        }
        Expectation::Def2SweepRefuted {
            point,
            r_max,
            horizon,
        } => {
            let mut ok = true;
            for r in 1..=*r_max {
                let v = check_def2(seq, point, r, *horizon)?;
                ok &= v.refuted();
            }
            (ok, format!("def2 refuted for r = 1..={r_max} at {point}"))
        }
        Expectation::Def3 {
            point,
            horizon,
            want,
            want_n,
        } => {
            let v = check_def3(seq, point, *horizon)?;
            let mut ok = v.status == *want;
            if let Some(wn) = want_n {
                ok &= v.r == Some(*wn);
            }
            (ok, format!("def3 at {point}: {}", status_name(v.status)))
        }
        Expectation::Def4 {
            point,
            r,
            horizon,
            want,
        } => {
            let v = check_def4(seq, point, *r, *horizon)?;
            (
                v.status == *want,
                format!("def4 r={r} at {point}: {}", status_name(v.status)),
            )
        }
        Expectation::Def4SweepRefuted {
            point,
            r_max,
            horizon,
        } => {
            let mut ok = true;
            for r in 1..=*r_max {
                let v = check_def4(seq, point, r, *horizon)?;
                ok &= v.refuted();
            }
            (ok, format!("def4 refuted for r = 1..={r_max} at {point}"))
        }
        Expectation::Def5 {
            point,
            r_max,
            horizon,
            eps_schedule,
            want,
            want_r,
            want_cycle,
        } => {
            let v = check_def5(seq, point, *r_max, *horizon, eps_schedule)?;
            let mut ok = v.status == *want;
            if let Some(wr) = want_r {
                ok &= v.r == Some(*wr);
            }
            if let Some(wc) = want_cycle {
                ok &= v.cycle() == Some(wc.as_slice());
            }
            (
                ok,
                format!(
                    "def5 at {point}: {} (r = {:?})",
                    status_name(v.status),
                    v.r
                ),
            )
        }
        Expectation::CompositionLaw { upto } => {
            let mut ok = true;
            for n in 1..=*upto {
                ok &= theorem4_g_map(n).compose(&theorem4_f_map(n)) == theorem4_f_map(n + 1);
            }
            (ok, format!("g_n∘F_n = F_(n+1) for n = 1..={upto}"))
        }
        Expectation::WindowMatchesClosedForm { upto } => {
            let mut ok = true;
            for n in 1..=*upto {
                ok &= seq.window_compose(1, n)? == theorem4_f_map(n);
            }
            (ok, format!("f_1^n = F_n for n = 1..={upto}"))
        }
        Expectation::ConvergenceMonotone { upto } => {
            let table = convergence_table(*upto);
            let mut ok = true;
            for w in table.windows(2) {
                ok &= w[0].1 > w[1].1;
            }
            // Frozen values: 1/4 at n = 1, 1/(n+3) afterwards.
            ok &= table[0].1 == r(1, 4);
            for (n, d) in &table {
                ok &= *d == Rational::new(1, (*n + 3) as i64).unwrap();
            }
            (ok, format!("sup |g_n - (1-x)| strictly decreasing, n = 1..={upto}"))
        }
        Expectation::StructuralPins { upto_m } => {
            let traj = seq.trajectory(&Rational::zero(), 2 * upto_m + 1)?;
            let mut ok = true;
            for m in 1..=*upto_m {
                ok &= traj.value(2 * m).is_zero();
                ok &= traj.value(2 * m - 1)
                    == &crate::enumeration::unit_rational(m);
            }
            (ok, format!("pins hold for m = 1..={upto_m}"))
        }
        Expectation::LimitCycleCrosscheckDef5 {
            point,
            r_max,
            horizon,
            eps_schedule,
        } => {
            let v = check_def5(seq, point, *r_max, *horizon, eps_schedule)?;
            let limit = s
                .declared_limit()
                .ok_or_else(|| Error::BadParams("scenario declares no limit".into()))?;
            let ok = match v.cycle() {
                Some(cycle) => limit_cycle_crosscheck(cycle, limit),
                None => false,
            };
            (ok, format!("certificate cycle at {point} crosschecked against the limit"))
        }
        Expectation::FixedPointsOfLimit { want_points } => {
            let limit = s
                .declared_limit()
                .ok_or_else(|| Error::BadParams("scenario declares no limit".into()))?;
            let fps = limit.fixed_points();
            let ok = fps.points == *want_points && fps.segments.is_empty();
            (ok, "fixed points of the declared limit".to_string())
        }
    })
}
