//! Map sequences, iteration windows, exact trajectories, and omega-limit
//! estimates.
//!
//! A `MapSequence` is a total rule `n -> f_n` (n >= 1) of surjective
//! piecewise-linear maps. The window `f_i^n = f_{i+n-1} ∘ ... ∘ f_i` is
//! computed by exact composition; trajectories are computed incrementally by
//! evaluation, which agrees with window evaluation (tested property).

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::families::{example_v_map, theorem4_f_map, theorem4_g_map};
use crate::plmap::PLMap;
use crate::rational::{dist, Rational};

/// Built-in closed-form families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    /// `f_1 = F_1`, `f_n = g_{n-1}` for `n > 1`; uniform limit `1 - x`.
    TheoremFour,
    /// Alternating constraint maps over the rational enumeration:
    /// `f_{2m-1}(0) = q_{m+offset}`, `f_{2m}(q_{m+offset}) = 0`.
    ExampleV { offset: u64 },
}

/// Total rule generating the sequence.
#[derive(Clone, Debug)]
pub enum SequenceRule {
    Constant(PLMap),
    EventuallyConstant { prefix: Vec<PLMap>, tail: PLMap },
    Family(FamilyKind),
    /// Same shape as `EventuallyConstant`; kept as a distinct wire-level
    /// variant because explicit lists must always carry a tail rule.
    Explicit { maps: Vec<PLMap>, tail: PLMap },
}

/// A nonautonomous system on `[0,1]`: the rule plus an optional declared
/// uniform limit.
#[derive(Clone, Debug)]
pub struct MapSequence {
    rule: SequenceRule,
    limit: Option<PLMap>,
    cache: Arc<Mutex<HashMap<u64, PLMap>>>,
}

fn require_surjective(map: &PLMap, index: u64) -> Result<()> {
    if map.is_surjective() {
        Ok(())
    } else {
        Err(Error::NonSurjective { index })
    }
}

impl MapSequence {
    pub fn constant(map: PLMap) -> Result<Self> {
        require_surjective(&map, 1)?;
        Ok(MapSequence {
            limit: Some(map.clone()),
            rule: SequenceRule::Constant(map),
            cache: Arc::new(Mutex::new(HashMap::new())),
        })
    }

    pub fn eventually_constant(prefix: Vec<PLMap>, tail: PLMap) -> Result<Self> {
        for (i, m) in prefix.iter().enumerate() {
            require_surjective(m, i as u64 + 1)?;
        }
        require_surjective(&tail, prefix.len() as u64 + 1)?;
        Ok(MapSequence {
            limit: Some(tail.clone()),
            rule: SequenceRule::EventuallyConstant { prefix, tail },
            cache: Arc::new(Mutex::new(HashMap::new())),
        })
    }

    pub fn explicit(maps: Vec<PLMap>, tail: PLMap) -> Result<Self> {
        for (i, m) in maps.iter().enumerate() {
            require_surjective(m, i as u64 + 1)?;
        }
        require_surjective(&tail, maps.len() as u64 + 1)?;
        Ok(MapSequence {
            limit: Some(tail.clone()),
            rule: SequenceRule::Explicit { maps, tail },
            cache: Arc::new(Mutex::new(HashMap::new())),
        })
    }

    pub fn theorem_four() -> Self {
        MapSequence {
            rule: SequenceRule::Family(FamilyKind::TheoremFour),
            limit: Some(PLMap::one_minus_x()),
            cache: Arc::new(Mutex::new(HashMap::new())),
        }
    }

    pub fn example_v(offset: u64) -> Self {
        MapSequence {
            rule: SequenceRule::Family(FamilyKind::ExampleV { offset }),
            limit: None,
            cache: Arc::new(Mutex::new(HashMap::new())),
        }
    }

    pub fn rule(&self) -> &SequenceRule {
        &self.rule
    }

    /// The claimed uniform limit, when one is declared.
    pub fn declared_limit(&self) -> Option<&PLMap> {
        self.limit.as_ref()
    }

    /// For rules with an eventually constant tail, the tail map and the
    /// prefix length after which it takes over.
    pub fn tail_map(&self) -> Option<(&PLMap, u64)> {
        match &self.rule {
            SequenceRule::Constant(m) => Some((m, 0)),
            SequenceRule::EventuallyConstant { prefix, tail } => {
                Some((tail, prefix.len() as u64))
            }
            SequenceRule::Explicit { maps, tail } => Some((tail, maps.len() as u64)),
            SequenceRule::Family(_) => None,
        }
    }

    /// Structural exact-return guarantee: `f_1^{kr}(x) = x` for every `k`,
    /// certified by the rule's construction rather than by finite scanning.
    /// The alternating constraint family pins `0` back to itself every two
    /// steps by construction.
    pub fn certified_return_period(&self, x: &Rational) -> Option<u64> {
        match &self.rule {
            SequenceRule::Family(FamilyKind::ExampleV { .. }) if x.is_zero() => Some(2),
            _ => None,
        }
    }

    /// The exact `n`-th map of the sequence (`n >= 1`). Family-generated
    /// maps are checked against the standing surjectivity assumption at
    /// access and memoized.
    pub fn map_at(&self, n: u64) -> Result<PLMap> {
        assert!(n >= 1, "map index is 1-based");
        match &self.rule {
            SequenceRule::Constant(m) => Ok(m.clone()),
            SequenceRule::EventuallyConstant { prefix, tail } => Ok(prefix
                .get((n - 1) as usize)
                .unwrap_or(tail)
                .clone()),
            SequenceRule::Explicit { maps, tail } => {
                Ok(maps.get((n - 1) as usize).unwrap_or(tail).clone())
            }
            SequenceRule::Family(kind) => {
                if let Some(m) = self.cache.lock().unwrap().get(&n) {
                    return Ok(m.clone());
                }
                let m = match kind {
                    FamilyKind::TheoremFour => {
                        if n == 1 {
                            theorem4_f_map(1)
                        } else {
                            theorem4_g_map(n - 1)
                        }
                    }
                    FamilyKind::ExampleV { offset } => example_v_map(n, *offset),
                };
                require_surjective(&m, n)?;
                // Idempotent fill: concurrent computations insert equal maps.
                self.cache.lock().unwrap().insert(n, m.clone());
                Ok(m)
            }
        }
    }

    /// Exact window `f_i^n`; `n = 0` yields the identity.
    pub fn window_compose(&self, i: u64, n: u64) -> Result<PLMap> {
        assert!(i >= 1, "window start is 1-based");
        if n == 0 {
            return Ok(PLMap::identity());
        }
        let mut acc = self.map_at(i)?;
        for k in 1..n {
            acc = self.map_at(i + k)?.compose(&acc);
        }
        Ok(acc)
    }

    /// Exact trajectory `x, f_1^1(x), ..., f_1^N(x)` computed incrementally.
    pub fn trajectory(&self, x: &Rational, horizon: u64) -> Result<Trajectory> {
        if !x.in_unit_interval() {
            return Err(Error::OutOfUnitInterval {
                value: x.to_string(),
            });
        }
        let mut values = Vec::with_capacity(horizon as usize + 1);
        values.push(x.clone());
        for n in 0..horizon {
            let next = self.map_at(n + 1)?.eval(&values[n as usize])?;
            values.push(next);
        }
        Ok(Trajectory {
            start: x.clone(),
            values,
        })
    }

    /// Wire form of the system; see `from_spec_json`.
    pub fn to_spec_json(&self) -> Value {
        let mut obj = Map::new();
        match &self.rule {
            SequenceRule::Constant(m) => {
                obj.insert("rule".into(), json!("constant"));
                obj.insert("maps".into(), json!([m]));
            }
            SequenceRule::EventuallyConstant { prefix, tail } => {
                obj.insert("rule".into(), json!("eventually_constant"));
                obj.insert("maps".into(), json!(prefix));
                obj.insert("tail".into(), json!(tail));
            }
            SequenceRule::Explicit { maps, tail } => {
                obj.insert("rule".into(), json!("explicit"));
                obj.insert("maps".into(), json!(maps));
                obj.insert("tail".into(), json!(tail));
            }
            SequenceRule::Family(FamilyKind::TheoremFour) => {
                obj.insert("rule".into(), json!("family"));
                obj.insert("family".into(), json!("theorem4"));
            }
            SequenceRule::Family(FamilyKind::ExampleV { offset }) => {
                obj.insert("rule".into(), json!("family"));
                obj.insert("family".into(), json!("example5"));
                if *offset != 0 {
                    obj.insert("offset".into(), json!(offset));
                }
            }
        }
        if let Some(limit) = &self.limit {
            obj.insert("limit".into(), json!(limit));
        }
        Value::Object(obj)
    }

    /// Parses the system-spec wire form:
    /// `{"rule": "constant"|"eventually_constant"|"family"|"explicit",
    ///   "maps": [...], "tail": ..., "family": "theorem4"|"example5",
    ///   "limit": ...?}`.
    pub fn from_spec_json(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::BadSystemSpec("expected a JSON object".into()))?;
        let rule = obj
            .get("rule")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::BadSystemSpec("missing \"rule\"".into()))?;
        let parse_maps = |key: &str| -> Result<Vec<PLMap>> {
            let v = obj
                .get(key)
                .ok_or_else(|| Error::BadSystemSpec(format!("missing \"{key}\"")))?;
            Ok(serde_json::from_value(v.clone())?)
        };
        let parse_tail = || -> Result<PLMap> {
            let v = obj
                .get("tail")
                .ok_or_else(|| Error::BadSystemSpec("missing \"tail\"".into()))?;
            Ok(serde_json::from_value(v.clone())?)
        };
        let mut seq = match rule {
            "constant" => {
                let maps = parse_maps("maps")?;
                if maps.len() != 1 {
                    return Err(Error::BadSystemSpec(
                        "constant rule expects exactly one map".into(),
                    ));
                }
                MapSequence::constant(maps.into_iter().next().unwrap())?
            }
            "eventually_constant" => {
                MapSequence::eventually_constant(parse_maps("maps")?, parse_tail()?)?
            }
            "explicit" => MapSequence::explicit(parse_maps("maps")?, parse_tail()?)?,
            "family" => {
                let family = obj
                    .get("family")
                    .and_then(Value::as_str)
                    .ok_or_else(|| Error::BadSystemSpec("missing \"family\"".into()))?;
                match family {
                    "theorem4" => MapSequence::theorem_four(),
                    "example5" => {
                        let offset = obj.get("offset").and_then(Value::as_u64).unwrap_or(0);
                        MapSequence::example_v(offset)
                    }
                    other => {
                        return Err(Error::BadSystemSpec(format!("unknown family {other:?}")))
                    }
                }
            }
            other => return Err(Error::BadSystemSpec(format!("unknown rule {other:?}"))),
        };
        if let Some(v) = obj.get("limit") {
            seq.limit = Some(serde_json::from_value(v.clone())?);
        }
        Ok(seq)
    }
}

/// Exact trajectory of a point.
#[derive(Clone, Debug)]
pub struct Trajectory {
    start: Rational,
    values: Vec<Rational>,
}

impl Trajectory {
    pub fn start(&self) -> &Rational {
        &self.start
    }

    /// `values[n] = f_1^n(start)`; index 0 is the start itself.
    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, n: u64) -> &Rational {
        &self.values[n as usize]
    }

    /// Number of steps `N` (the value list has length `N + 1`).
    pub fn horizon(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    /// CSV wire form: header `n,value_num,value_den`, one row per step.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,value_num,value_den\n");
        for (n, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{n},{},{}\n", v.numer(), v.denom()));
        }
        out
    }
}

/// One omega-limit cluster: a representative value and the largest observed
/// distance from it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaCluster {
    pub representative: Rational,
    pub radius: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OmegaVerdict {
    FiniteAtTolerance,
    NotFiniteAtTolerance,
}

/// Finite-horizon estimate of the omega-limit set.
#[derive(Clone, Debug)]
pub struct OmegaEstimate {
    pub clusters: Vec<OmegaCluster>,
    pub verdict: OmegaVerdict,
}

pub(crate) struct GreedyCluster {
    pub rep: Rational,
    pub members: Vec<Rational>,
}

impl GreedyCluster {
    pub fn radius(&self) -> Rational {
        self.members
            .iter()
            .map(|m| dist(m, &self.rep))
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

/// Greedy tolerance clustering: clusters are seeded in sequence order and a
/// value joins the first cluster whose representative is within `tol`.
pub(crate) fn greedy_clusters(values: &[Rational], tol: &Rational) -> Vec<GreedyCluster> {
    let mut clusters: Vec<GreedyCluster> = Vec::new();
    for v in values {
        match clusters.iter_mut().find(|c| &dist(v, &c.rep) <= tol) {
            Some(c) => c.members.push(v.clone()),
            None => clusters.push(GreedyCluster {
                rep: v.clone(),
                members: vec![v.clone()],
            }),
        }
    }
    clusters
}

/// Greedy clustering of the trajectory tail into `tol`-balls. The verdict is
/// `FiniteAtTolerance` iff the cluster count is the same on both halves of
/// the tail; overlapping balls are merged so the reported balls are pairwise
/// disjoint.
pub fn omega_limit_estimate(
    t: &Trajectory,
    tail_fraction: &Rational,
    tol: &Rational,
) -> Result<OmegaEstimate> {
    if !(tail_fraction > &Rational::zero() && tail_fraction <= &Rational::one()) {
        return Err(Error::BadParams(format!(
            "tail fraction {tail_fraction} must lie in (0, 1]"
        )));
    }
    if tol <= &Rational::zero() {
        return Err(Error::BadParams(format!("tolerance {tol} must be positive")));
    }
    let n = t.horizon();
    // ceil(tail_fraction * N)
    let scaled = tail_fraction * &Rational::from_bigint(n.into(), 1.into()).unwrap();
    let mut tail_len = scaled.floor_int();
    if Rational::from_bigint(tail_len.clone(), 1.into()).unwrap() < scaled {
        tail_len += 1;
    }
    let tail_len = num::ToPrimitive::to_usize(&tail_len).unwrap_or(usize::MAX);
    if tail_len < 4 {
        return Err(Error::InsufficientData(format!(
            "omega tail has {tail_len} points, need at least 4"
        )));
    }
    let values = t.values();
    let tail = &values[values.len() - tail_len..];

    let mut clusters = greedy_clusters(tail, tol);
    // Merge overlapping balls until pairwise disjoint.
    loop {
        let mut merged_any = false;
        let mut i = 0;
        while i < clusters.len() {
            let mut j = i + 1;
            while j < clusters.len() {
                let ri = clusters[i].radius();
                let rj = clusters[j].radius();
                if dist(&clusters[i].rep, &clusters[j].rep) <= ri + rj {
                    let absorbed = clusters.remove(j);
                    clusters[i].members.extend(absorbed.members);
                    merged_any = true;
                } else {
                    j += 1;
                }
            }
            i += 1;
        }
        if !merged_any {
            break;
        }
    }

    let half = tail.len() / 2;
    let count_first = greedy_clusters(&tail[..half], tol).len();
    let count_second = greedy_clusters(&tail[half..], tol).len();
    let verdict = if count_first == count_second {
        OmegaVerdict::FiniteAtTolerance
    } else {
        OmegaVerdict::NotFiniteAtTolerance
    };

    let mut out: Vec<OmegaCluster> = clusters
        .iter()
        .map(|c| OmegaCluster {
            representative: c.rep.clone(),
            radius: c.radius(),
        })
        .collect();
    out.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(OmegaEstimate {
        clusters: out,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::theorem4_f_map;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn map_at_families_and_constant() {
        let t4 = MapSequence::theorem_four();
        assert_eq!(t4.map_at(1).unwrap(), theorem4_f_map(1));
        assert_eq!(t4.map_at(2).unwrap(), theorem4_g_map(1));
        assert_eq!(t4.map_at(6).unwrap(), theorem4_g_map(5));

        let tent = MapSequence::constant(PLMap::tent()).unwrap();
        assert_eq!(tent.map_at(37).unwrap(), PLMap::tent());
    }

    #[test]
    fn map_at_is_deterministic() {
        let t4 = MapSequence::theorem_four();
        assert_eq!(t4.map_at(9).unwrap(), t4.map_at(9).unwrap());
        let ev = MapSequence::example_v(0);
        assert_eq!(ev.map_at(7).unwrap(), ev.map_at(7).unwrap());
    }

    #[test]
    fn constructors_reject_non_surjective_maps() {
        let flat = PLMap::constant(r(1, 2)).unwrap();
        assert!(MapSequence::constant(flat.clone()).is_err());
        assert!(MapSequence::eventually_constant(vec![flat.clone()], PLMap::tent()).is_err());
        assert!(MapSequence::explicit(vec![PLMap::tent()], flat).is_err());
    }

    #[test]
    fn window_zero_is_identity() {
        let t4 = MapSequence::theorem_four();
        assert_eq!(t4.window_compose(3, 0).unwrap(), PLMap::identity());
    }

    #[test]
    fn window_of_theorem_four_collapses_to_closed_form() {
        let t4 = MapSequence::theorem_four();
        for n in 1..=50 {
            assert_eq!(t4.window_compose(1, n).unwrap(), theorem4_f_map(n));
        }
    }

    #[test]
    fn declared_limit_soundness() {
        let t4 = MapSequence::theorem_four();
        let limit = t4.declared_limit().unwrap().clone();
        let mut prev: Option<Rational> = None;
        for n in 1..=50i64 {
            let d = t4.map_at(n as u64 + 1).unwrap().sup_distance(&limit);
            assert_eq!(d, r(1, n + 3));
            if let Some(p) = prev {
                assert!(d < p);
            }
            prev = Some(d);
        }
    }

    #[test]
    fn explicit_rule_behaves_like_its_list_then_tail() {
        let seq = MapSequence::explicit(
            vec![PLMap::one_minus_x(), PLMap::identity()],
            PLMap::tent(),
        )
        .unwrap();
        assert_eq!(seq.map_at(1).unwrap(), PLMap::one_minus_x());
        assert_eq!(seq.map_at(2).unwrap(), PLMap::identity());
        assert_eq!(seq.map_at(3).unwrap(), PLMap::tent());
        assert_eq!(seq.map_at(99).unwrap(), PLMap::tent());
        let v = seq.to_spec_json();
        assert_eq!(v["rule"], "explicit");
        let back = MapSequence::from_spec_json(&v).unwrap();
        assert_eq!(back.map_at(1).unwrap(), PLMap::one_minus_x());
        assert_eq!(back.map_at(9).unwrap(), PLMap::tent());
    }

    #[test]
    fn window_of_tent_squared() {
        let tent = MapSequence::constant(PLMap::tent()).unwrap();
        let w = tent.window_compose(1, 2).unwrap();
        assert_eq!(w, PLMap::tent().compose(&PLMap::tent()));
        assert_eq!(w.nodes().len(), 5);
    }

    #[test]
    fn cocycle_law_spot() {
        let t4 = MapSequence::theorem_four();
        let lhs = t4.window_compose(1, 5).unwrap();
        let rhs = t4
            .window_compose(3, 3)
            .unwrap()
            .compose(&t4.window_compose(1, 2).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn trajectory_examples() {
        let t4 = MapSequence::theorem_four();
        let t = t4.trajectory(&r(1, 2), 5).unwrap();
        assert_eq!(t.value(5), &r(1, 12));
        assert_eq!(t.value(0), &r(1, 2));

        let tent = MapSequence::constant(PLMap::tent()).unwrap();
        let t = tent.trajectory(&r(2, 3), 10).unwrap();
        assert!(t.values().iter().all(|v| v == &r(2, 3)));

        let id = MapSequence::constant(PLMap::identity()).unwrap();
        let t = id.trajectory(&r(3, 7), 4).unwrap();
        assert!(t.values().iter().all(|v| v == &r(3, 7)));

        assert!(t4.trajectory(&r(3, 2), 5).is_err());
    }

    #[test]
    fn trajectory_csv_shape() {
        let id = MapSequence::constant(PLMap::identity()).unwrap();
        let t = id.trajectory(&r(1, 3), 2).unwrap();
        assert_eq!(t.to_csv(), "n,value_num,value_den\n0,1,3\n1,1,3\n2,1,3\n");
    }

    #[test]
    fn omega_estimate_constant_tail() {
        let tent = MapSequence::constant(PLMap::tent()).unwrap();
        let t = tent.trajectory(&r(2, 3), 40).unwrap();
        let est = omega_limit_estimate(&t, &r(1, 2), &r(1, 100)).unwrap();
        assert_eq!(est.verdict, OmegaVerdict::FiniteAtTolerance);
        assert_eq!(est.clusters.len(), 1);
        assert_eq!(est.clusters[0].representative, r(2, 3));
        assert_eq!(est.clusters[0].radius, r(0, 1));
    }

    #[test]
    fn omega_estimate_five_cycle() {
        let tent = MapSequence::constant(PLMap::tent()).unwrap();
        let t = tent.trajectory(&r(2, 11), 200).unwrap();
        let est = omega_limit_estimate(&t, &r(1, 2), &r(1, 100)).unwrap();
        assert_eq!(est.verdict, OmegaVerdict::FiniteAtTolerance);
        let reps: Vec<Rational> = est.clusters.iter().map(|c| c.representative.clone()).collect();
        assert_eq!(reps, vec![r(2, 11), r(4, 11), r(6, 11), r(8, 11), r(10, 11)]);
        assert!(est.clusters.iter().all(|c| c.radius.is_zero()));
    }

    #[test]
    fn omega_estimate_theorem_four_two_cycle() {
        let t4 = MapSequence::theorem_four();
        let t = t4.trajectory(&r(1, 2), 200).unwrap();
        let est = omega_limit_estimate(&t, &r(1, 2), &r(1, 50)).unwrap();
        assert_eq!(est.verdict, OmegaVerdict::FiniteAtTolerance);
        assert_eq!(est.clusters.len(), 2);
        assert!(dist(&est.clusters[0].representative, &r(0, 1)) < r(1, 50));
        assert!(dist(&est.clusters[1].representative, &r(1, 1)) < r(1, 50));
    }

    #[test]
    fn omega_estimate_requires_enough_tail() {
        let tent = MapSequence::constant(PLMap::tent()).unwrap();
        let t = tent.trajectory(&r(2, 3), 4).unwrap();
        assert!(matches!(
            omega_limit_estimate(&t, &r(1, 2), &r(1, 100)),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn spec_json_round_trip() {
        let t4 = MapSequence::theorem_four();
        let v = t4.to_spec_json();
        let back = MapSequence::from_spec_json(&v).unwrap();
        assert_eq!(back.map_at(5).unwrap(), t4.map_at(5).unwrap());
        assert_eq!(back.declared_limit(), t4.declared_limit());

        let ec = MapSequence::eventually_constant(vec![PLMap::identity()], PLMap::tent()).unwrap();
        let v = ec.to_spec_json();
        let back = MapSequence::from_spec_json(&v).unwrap();
        assert_eq!(back.map_at(1).unwrap(), PLMap::identity());
        assert_eq!(back.map_at(2).unwrap(), PLMap::tent());

        assert!(MapSequence::from_spec_json(&serde_json::json!({"rule": "nope"})).is_err());
    }
}
