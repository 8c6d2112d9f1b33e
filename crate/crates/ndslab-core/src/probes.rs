//! Finite-evidence probes for transitivity, dense orbits, sensitivity, and
//! a composite chaos report.
//!
//! Probes work over rational grids and finite horizons. An `Evidenced`
//! outcome always carries exact, re-checkable witnesses; the negative
//! outcome only states that no evidence was found below the horizon, since
//! the probed properties are topological and undecidable from finite data.

use serde_json::{json, Map, Value};

use crate::classify::{check_def5, VerdictStatus};
use crate::error::{Error, Result};
use crate::plmap::IntervalQ;
use crate::rational::{dist, Rational};
use crate::sequence::{MapSequence, Trajectory};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeKind {
    Transitivity,
    DenseOrbit,
    Sensitivity,
    Devaney,
}

impl ProbeKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProbeKind::Transitivity => "transitivity",
            ProbeKind::DenseOrbit => "dense_orbit",
            ProbeKind::Sensitivity => "sensitivity",
            ProbeKind::Devaney => "devaney",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeOutcome {
    Evidenced,
    RefutedOnGrid,
    NoEvidenceUpTo,
}

impl ProbeOutcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProbeOutcome::Evidenced => "evidenced",
            ProbeOutcome::RefutedOnGrid => "refuted_on_grid",
            ProbeOutcome::NoEvidenceUpTo => "no_evidence_up_to",
        }
    }
}

/// A pair of grid cells connected by an iterate: the image of `u` under
/// `f_1^n` overlaps `v` with nonempty interior.
#[derive(Clone, Debug)]
pub struct TransitWitness {
    pub u: IntervalQ,
    pub v: IntervalQ,
    pub n: u64,
    pub image: IntervalQ,
}

/// A separation witness: `|f_1^n(x) - f_1^n(y)| > delta` exactly.
#[derive(Clone, Debug)]
pub struct SeparationWitness {
    pub x: Rational,
    pub y: Rational,
    pub n: u64,
    pub separation: Rational,
}

#[derive(Clone, Debug)]
pub enum ProbeDetails {
    Transitivity {
        witnesses: Vec<TransitWitness>,
        failing_pair: Option<(IntervalQ, IntervalQ)>,
    },
    DenseOrbit {
        eps: Rational,
        cells: u64,
        missed_cell: Option<u64>,
    },
    Sensitivity {
        delta: Rational,
        smallest_eps: Rational,
        witnesses: Vec<SeparationWitness>,
        failing_sample: Option<Rational>,
    },
    Devaney {
        transitivity: Box<ProbeReport>,
        ap_consistent: u64,
        ap_total: u64,
        sensitivity: Box<ProbeReport>,
    },
}

#[derive(Clone, Debug)]
pub struct ProbeReport {
    pub kind: ProbeKind,
    pub outcome: ProbeOutcome,
    pub grid: Option<u64>,
    pub horizon: Option<u64>,
    pub details: ProbeDetails,
}

impl ProbeReport {
    /// Wire form: `{"kind", "outcome", "grid", "horizon", "witnesses"}`
    /// plus detail fields.
    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("kind".into(), json!(self.kind.as_str()));
        obj.insert("outcome".into(), json!(self.outcome.as_str()));
        if let Some(g) = self.grid {
            obj.insert("grid".into(), json!(g));
        }
        if let Some(h) = self.horizon {
            obj.insert("horizon".into(), json!(h));
        }
        match &self.details {
            ProbeDetails::Transitivity {
                witnesses,
                failing_pair,
            } => {
                obj.insert(
                    "witnesses".into(),
                    json!(witnesses
                        .iter()
                        .map(|w| json!({
                            "u": [w.u.lo().to_string(), w.u.hi().to_string()],
                            "v": [w.v.lo().to_string(), w.v.hi().to_string()],
                            "n": w.n,
                            "image": [w.image.lo().to_string(), w.image.hi().to_string()],
                        }))
                        .collect::<Vec<_>>()),
                );
                if let Some((u, v)) = failing_pair {
                    obj.insert(
                        "failing_pair".into(),
                        json!({
                            "u": [u.lo().to_string(), u.hi().to_string()],
                            "v": [v.lo().to_string(), v.hi().to_string()],
                        }),
                    );
                }
            }
            ProbeDetails::DenseOrbit {
                eps,
                cells,
                missed_cell,
            } => {
                obj.insert("eps".into(), json!(eps.to_string()));
                obj.insert("cells".into(), json!(cells));
                if let Some(c) = missed_cell {
                    obj.insert("missed_cell".into(), json!(c));
                }
            }
            ProbeDetails::Sensitivity {
                delta,
                smallest_eps,
                witnesses,
                failing_sample,
            } => {
                obj.insert("delta".into(), json!(delta.to_string()));
                obj.insert("smallest_eps".into(), json!(smallest_eps.to_string()));
                obj.insert(
                    "witnesses".into(),
                    json!(witnesses
                        .iter()
                        .map(|w| json!({
                            "x": w.x.to_string(),
                            "y": w.y.to_string(),
                            "n": w.n,
                            "separation": w.separation.to_string(),
                        }))
                        .collect::<Vec<_>>()),
                );
                if let Some(s) = failing_sample {
                    obj.insert("failing_sample".into(), json!(s.to_string()));
                }
            }
            ProbeDetails::Devaney {
                transitivity,
                ap_consistent,
                ap_total,
                sensitivity,
            } => {
                obj.insert("transitivity".into(), transitivity.to_json());
                obj.insert(
                    "asymptotic_periodicity_density".into(),
                    json!({
                        "consistent_or_better": ap_consistent,
                        "grid_points": ap_total,
                    }),
                );
                obj.insert("sensitivity".into(), sensitivity.to_json());
                obj.insert(
                    "note".into(),
                    json!("sub-reports are independent finite evidence; no implication among them is claimed"),
                );
            }
        }
        Value::Object(obj)
    }
}

fn grid_cells(k: u64) -> Vec<IntervalQ> {
    (0..k)
        .map(|j| {
            IntervalQ::new(
                Rational::from_bigint(j.into(), k.into()).unwrap(),
                Rational::from_bigint((j + 1).into(), k.into()).unwrap(),
            )
            .unwrap()
        })
        .collect()
}

/// Transitivity probe over all pairs of `1/k` grid cells: for each pair
/// `(U, V)` search the least `n <= horizon` whose image `f_1^n(U)` overlaps
/// `V` with nonempty interior. Images of intervals are computed exactly by
/// iterating the interval image one map at a time.
pub fn transitivity_probe(seq: &MapSequence, k: u64, horizon: u64) -> Result<ProbeReport> {
    if k < 2 || horizon < 1 {
        return Err(Error::BadParams("need grid k >= 2 and horizon >= 1".into()));
    }
    let cells = grid_cells(k);
    let mut witnesses = Vec::new();
    for u in &cells {
        // Image chain of u, reused across all target cells.
        let mut chain = Vec::with_capacity(horizon as usize);
        let mut img = u.clone();
        for n in 1..=horizon {
            img = seq.map_at(n)?.image_interval(&img)?;
            chain.push(img.clone());
        }
        for v in &cells {
            match chain.iter().position(|img| img.interior_overlaps(v)) {
                Some(idx) => witnesses.push(TransitWitness {
                    u: u.clone(),
                    v: v.clone(),
                    n: idx as u64 + 1,
                    image: chain[idx].clone(),
                }),
                None => {
                    return Ok(ProbeReport {
                        kind: ProbeKind::Transitivity,
                        outcome: ProbeOutcome::NoEvidenceUpTo,
                        grid: Some(k),
                        horizon: Some(horizon),
                        details: ProbeDetails::Transitivity {
                            witnesses,
                            failing_pair: Some((u.clone(), v.clone())),
                        },
                    })
                }
            }
        }
    }
    Ok(ProbeReport {
        kind: ProbeKind::Transitivity,
        outcome: ProbeOutcome::Evidenced,
        grid: Some(k),
        horizon: Some(horizon),
        details: ProbeDetails::Transitivity {
            witnesses,
            failing_pair: None,
        },
    })
}

/// Dense-orbit probe: the orbit values must meet the interior of every
/// `eps`-cell `(j*eps, (j+1)*eps)`. Interiors are used because density is
/// about meeting nonempty open sets.
pub fn dense_orbit_probe(t: &Trajectory, eps: &Rational) -> Result<ProbeReport> {
    if eps <= &Rational::zero() {
        return Err(Error::BadParams("eps must be positive".into()));
    }
    // number of cells = ceil(1/eps)
    let inv = Rational::one() / eps.clone();
    let mut cells = inv.floor_int();
    if Rational::from_bigint(cells.clone(), 1.into()).unwrap() < inv {
        cells += 1;
    }
    let cells = num::ToPrimitive::to_u64(&cells)
        .ok_or_else(|| Error::BadParams("eps is too small".into()))?;
    let mut missed = None;
    for j in 0..cells {
        let lo = eps * &Rational::from_bigint(j.into(), 1.into()).unwrap();
        let hi = eps * &Rational::from_bigint((j + 1).into(), 1.into()).unwrap();
        let hit = t.values().iter().any(|v| v > &lo && v < &hi);
        if !hit {
            missed = Some(j);
            break;
        }
    }
    Ok(ProbeReport {
        kind: ProbeKind::DenseOrbit,
        outcome: if missed.is_none() {
            ProbeOutcome::Evidenced
        } else {
            ProbeOutcome::NoEvidenceUpTo
        },
        grid: Some(cells),
        horizon: Some(t.horizon()),
        details: ProbeDetails::DenseOrbit {
            eps: eps.clone(),
            cells,
            missed_cell: missed,
        },
    })
}

/// Shrinking perturbation radii used by the sensitivity search.
fn sensitivity_eps_schedule() -> Vec<Rational> {
    vec![
        Rational::new(1, 4).unwrap(),
        Rational::new(1, 16).unwrap(),
        Rational::new(1, 128).unwrap(),
    ]
}

/// Sensitivity probe: for every sample point `x` on the `1/sample_k` grid
/// and every radius `eps` of the shrinking schedule, search perturbed
/// points `y` on a `1/pert_k` subgrid of `(x-eps, x+eps)` whose trajectory
/// separates from `x`'s by strictly more than `delta` within the horizon.
/// `Evidenced` requires a witness for every sample at the smallest radius.
pub fn sensitivity_probe(
    seq: &MapSequence,
    delta: &Rational,
    sample_k: u64,
    pert_k: u64,
    horizon: u64,
) -> Result<ProbeReport> {
    if delta <= &Rational::zero() {
        return Err(Error::BadParams("delta must be positive".into()));
    }
    if sample_k < 2 || pert_k < 2 || horizon < 1 {
        return Err(Error::BadParams(
            "need sample_k >= 2, pert_k >= 2, horizon >= 1".into(),
        ));
    }
    let schedule = sensitivity_eps_schedule();
    let smallest = schedule[schedule.len() - 1].clone();
    let mut witnesses = Vec::new();
    let mut failing_sample = None;

    'samples: for j in 0..=sample_k {
        let x = Rational::from_bigint(j.into(), sample_k.into()).unwrap();
        let tx = seq.trajectory(&x, horizon)?;
        for eps in &schedule {
            let mut found: Option<SeparationWitness> = None;
            'search: for i in 1..=pert_k {
                let step = eps * &Rational::from_bigint(i.into(), pert_k.into()).unwrap();
                for y in [&x + &step, &x - &step] {
                    if !y.in_unit_interval() || y == x {
                        continue;
                    }
                    // Walk both trajectories until they separate.
                    let mut vy = y.clone();
                    for n in 1..=horizon {
                        vy = seq.map_at(n)?.eval(&vy)?;
                        let sep = dist(tx.value(n), &vy);
                        if &sep > delta {
                            found = Some(SeparationWitness {
                                x: x.clone(),
                                y: y.clone(),
                                n,
                                separation: sep,
                            });
                            break 'search;
                        }
                    }
                }
            }
            match found {
                Some(w) => {
                    if eps == &smallest {
                        witnesses.push(w);
                    }
                }
                None => {
                    failing_sample = Some(x);
                    break 'samples;
                }
            }
        }
    }

    Ok(ProbeReport {
        kind: ProbeKind::Sensitivity,
        outcome: if failing_sample.is_none() {
            ProbeOutcome::Evidenced
        } else {
            ProbeOutcome::NoEvidenceUpTo
        },
        grid: Some(sample_k),
        horizon: Some(horizon),
        details: ProbeDetails::Sensitivity {
            delta: delta.clone(),
            smallest_eps: smallest,
            witnesses,
            failing_sample,
        },
    })
}

/// Parameters of the composite report.
#[derive(Clone, Debug)]
pub struct DevaneyParams {
    pub transitivity_grid: u64,
    pub transitivity_horizon: u64,
    pub ap_grid_denominator: u64,
    pub ap_r_max: u64,
    pub ap_horizon: u64,
    pub ap_eps_schedule: Vec<Rational>,
    pub sensitivity_delta: Rational,
    pub sensitivity_sample_k: u64,
    pub sensitivity_pert_k: u64,
    pub sensitivity_horizon: u64,
}

impl Default for DevaneyParams {
    fn default() -> Self {
        DevaneyParams {
            transitivity_grid: 16,
            transitivity_horizon: 20,
            ap_grid_denominator: 17,
            ap_r_max: 8,
            ap_horizon: 200,
            ap_eps_schedule: vec![
                Rational::new(1, 4).unwrap(),
                Rational::new(1, 20).unwrap(),
                Rational::new(1, 100).unwrap(),
            ],
            sensitivity_delta: Rational::new(1, 4).unwrap(),
            sensitivity_sample_k: 16,
            sensitivity_pert_k: 8,
            sensitivity_horizon: 200,
        }
    }
}

/// Composite report: transitivity evidence, density of asymptotically
/// periodic points over a rational grid (fraction classified consistent or
/// better), and sensitivity evidence. The three parts are independent; no
/// implication among them is claimed.
pub fn devaney_report(seq: &MapSequence, params: &DevaneyParams) -> Result<ProbeReport> {
    let transitivity =
        transitivity_probe(seq, params.transitivity_grid, params.transitivity_horizon)?;
    let den = params.ap_grid_denominator;
    if den < 2 {
        return Err(Error::BadParams("ap grid denominator must be >= 2".into()));
    }
    let mut consistent = 0u64;
    for j in 0..=den {
        let x = Rational::from_bigint(j.into(), den.into()).unwrap();
        let v = check_def5(seq, &x, params.ap_r_max, params.ap_horizon, &params.ap_eps_schedule)?;
        if v.status != VerdictStatus::RefutedAt {
            consistent += 1;
        }
    }
    let total = den + 1;
    let sensitivity = sensitivity_probe(
        seq,
        &params.sensitivity_delta,
        params.sensitivity_sample_k,
        params.sensitivity_pert_k,
        params.sensitivity_horizon,
    )?;
    // Density is evidenced when at least three quarters of the grid points
    // are consistent or better.
    let ap_evidenced = 4 * consistent >= 3 * total;
    let outcome = if transitivity.outcome == ProbeOutcome::Evidenced
        && ap_evidenced
        && sensitivity.outcome == ProbeOutcome::Evidenced
    {
        ProbeOutcome::Evidenced
    } else {
        ProbeOutcome::NoEvidenceUpTo
    };
    Ok(ProbeReport {
        kind: ProbeKind::Devaney,
        outcome,
        grid: None,
        horizon: None,
        details: ProbeDetails::Devaney {
            transitivity: Box::new(transitivity),
            ap_consistent: consistent,
            ap_total: total,
            sensitivity: Box::new(sensitivity),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plmap::PLMap;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn tent_seq() -> MapSequence {
        MapSequence::constant(PLMap::tent()).unwrap()
    }

    fn id_seq() -> MapSequence {
        MapSequence::constant(PLMap::identity()).unwrap()
    }

    #[test]
    fn tent_is_transitivity_evidenced() {
        let rep = transitivity_probe(&tent_seq(), 16, 20).unwrap();
        assert_eq!(rep.outcome, ProbeOutcome::Evidenced);
        if let ProbeDetails::Transitivity { witnesses, .. } = &rep.details {
            assert_eq!(witnesses.len(), 16 * 16);
        } else {
            panic!("wrong details");
        }
    }

    #[test]
    fn identity_is_not_transitivity_evidenced() {
        let rep = transitivity_probe(&id_seq(), 2, 100).unwrap();
        assert_eq!(rep.outcome, ProbeOutcome::NoEvidenceUpTo);
        if let ProbeDetails::Transitivity { failing_pair, .. } = &rep.details {
            let (u, v) = failing_pair.as_ref().unwrap();
            assert_eq!(u, &IntervalQ::new(r(0, 1), r(1, 2)).unwrap());
            assert_eq!(v, &IntervalQ::new(r(1, 2), r(1, 1)).unwrap());
        } else {
            panic!("wrong details");
        }
    }

    #[test]
    fn theorem_four_contracts_away_from_middle_cells() {
        let t4 = MapSequence::theorem_four();
        let rep = transitivity_probe(&t4, 4, 100).unwrap();
        assert_eq!(rep.outcome, ProbeOutcome::NoEvidenceUpTo);
    }

    #[test]
    fn transitivity_witness_replay() {
        let rep = transitivity_probe(&tent_seq(), 8, 20).unwrap();
        let seq = tent_seq();
        if let ProbeDetails::Transitivity { witnesses, .. } = &rep.details {
            for w in witnesses {
                let mut img = w.u.clone();
                for n in 1..=w.n {
                    img = seq.map_at(n).unwrap().image_interval(&img).unwrap();
                }
                assert_eq!(img, w.image);
                assert!(img.interior_overlaps(&w.v));
            }
        } else {
            panic!("wrong details");
        }
    }

    #[test]
    fn dense_orbit_examples() {
        // Orbit of 1/59 under the tent map covers every 1/20 cell.
        let t = tent_seq().trajectory(&r(1, 59), 5000).unwrap();
        let rep = dense_orbit_probe(&t, &r(1, 20)).unwrap();
        assert_eq!(rep.outcome, ProbeOutcome::Evidenced);

        // Identity stays put.
        let t = id_seq().trajectory(&r(1, 2), 100).unwrap();
        let rep = dense_orbit_probe(&t, &r(1, 4)).unwrap();
        assert_eq!(rep.outcome, ProbeOutcome::NoEvidenceUpTo);

        // Contraction toward the endpoints leaves middle cells unvisited.
        let t = MapSequence::theorem_four().trajectory(&r(1, 2), 1000).unwrap();
        let rep = dense_orbit_probe(&t, &r(1, 4)).unwrap();
        assert_eq!(rep.outcome, ProbeOutcome::NoEvidenceUpTo);
    }

    #[test]
    fn sensitivity_examples() {
        let rep = sensitivity_probe(&tent_seq(), &r(1, 4), 16, 8, 200).unwrap();
        assert_eq!(rep.outcome, ProbeOutcome::Evidenced);

        let rep = sensitivity_probe(&id_seq(), &r(1, 4), 8, 4, 100).unwrap();
        assert_eq!(rep.outcome, ProbeOutcome::NoEvidenceUpTo);

        let rep = sensitivity_probe(&MapSequence::theorem_four(), &r(1, 4), 8, 4, 200).unwrap();
        assert_eq!(rep.outcome, ProbeOutcome::NoEvidenceUpTo);
    }

    #[test]
    fn sensitivity_witness_replay() {
        let seq = tent_seq();
        let rep = sensitivity_probe(&seq, &r(1, 4), 8, 4, 100).unwrap();
        if let ProbeDetails::Sensitivity { witnesses, delta, .. } = &rep.details {
            assert!(!witnesses.is_empty());
            for w in witnesses {
                let tx = seq.trajectory(&w.x, w.n).unwrap();
                let ty = seq.trajectory(&w.y, w.n).unwrap();
                let sep = dist(tx.value(w.n), ty.value(w.n));
                assert_eq!(sep, w.separation);
                assert!(&sep > delta);
            }
        } else {
            panic!("wrong details");
        }
    }

    #[test]
    fn grid_refinement_keeps_tent_evidenced() {
        for k in [4, 8, 16] {
            let rep = transitivity_probe(&tent_seq(), k, 20).unwrap();
            assert_eq!(rep.outcome, ProbeOutcome::Evidenced, "k = {k}");
        }
        for n in [20, 40] {
            let rep = transitivity_probe(&tent_seq(), 8, n).unwrap();
            assert_eq!(rep.outcome, ProbeOutcome::Evidenced, "N = {n}");
        }
    }

    #[test]
    fn devaney_composites() {
        let params = DevaneyParams::default();
        let rep = devaney_report(&tent_seq(), &params).unwrap();
        assert_eq!(rep.outcome, ProbeOutcome::Evidenced);

        let rep = devaney_report(&id_seq(), &params).unwrap();
        assert_eq!(rep.outcome, ProbeOutcome::NoEvidenceUpTo);
        if let ProbeDetails::Devaney {
            transitivity,
            ap_consistent,
            ap_total,
            sensitivity,
        } = &rep.details
        {
            // Everything is fixed under the identity: density holds, the
            // dynamic probes find nothing.
            assert_eq!(ap_consistent, ap_total);
            assert_eq!(transitivity.outcome, ProbeOutcome::NoEvidenceUpTo);
            assert_eq!(sensitivity.outcome, ProbeOutcome::NoEvidenceUpTo);
        } else {
            panic!("wrong details");
        }
    }

    #[test]
    fn probe_json_shape() {
        let rep = transitivity_probe(&id_seq(), 2, 5).unwrap();
        let j = rep.to_json();
        assert_eq!(j["kind"], "transitivity");
        assert_eq!(j["outcome"], "no_evidence_up_to");
        assert_eq!(j["grid"], 2);
        assert_eq!(j["horizon"], 5);
    }
}
