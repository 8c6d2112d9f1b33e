//! Classifiers for the five periodicity notions, with machine-checkable
//! verdicts.
//!
//! The notions quantify over infinitely many steps, so finite computation
//! returns `HoldsExactly` only through a closure argument: an eventually
//! constant sequence whose trajectory is exactly eventually periodic, or a
//! structural pin guaranteed by a family's construction. Otherwise verdicts
//! are `ConsistentUpTo` (no violation found below the horizon at the given
//! tolerance) or `RefutedAt` (a concrete, re-checkable violation).

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::plmap::PLMap;
use crate::rational::{dist, simplest_in_interval, Rational};
use crate::sequence::{greedy_clusters, MapSequence, Trajectory};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictStatus {
    HoldsExactly,
    ConsistentUpTo,
    RefutedAt,
}

impl VerdictStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictStatus::HoldsExactly => "holds_exactly",
            VerdictStatus::ConsistentUpTo => "consistent_up_to",
            VerdictStatus::RefutedAt => "refuted_at",
        }
    }
}

/// Certificate for an asymptotic cycle: the cycle is phase-aligned with the
/// trajectory (`cycle[i]` is the target of steps `s ≡ i (mod r)`), and each
/// `(eps, n0)` row asserts `d(f_1^s(x), cycle[s mod r]) < eps` for every
/// step `n0 <= s <= checked_horizon`.
#[derive(Clone, Debug)]
pub struct CycleCertificate {
    pub r: u64,
    pub cycle: Vec<Rational>,
    pub eps_table: Vec<(Rational, u64)>,
    pub checked_horizon: u64,
}

#[derive(Clone, Debug)]
pub enum Evidence {
    /// Cycle certificate with tolerance rows.
    Certificate(CycleCertificate),
    /// The trajectory is exactly periodic from `from_step` on, and the
    /// closure argument extends this to all steps.
    ExactCycle { cycle: Vec<Rational>, from_step: u64 },
    /// Exact return every `period` steps guaranteed by the sequence rule's
    /// construction.
    StructuralReturn { period: u64 },
    /// Exact return of the starting point at step `n`.
    ReturnAt { n: u64 },
    /// No exact return found below the horizon (membership stays open).
    NoReturnFound,
    /// Concrete violation: at step/block `n` the observed `lhs` differs
    /// from the required `rhs` (exactly, or beyond the stated tolerance).
    Refutation {
        n: u64,
        lhs: Rational,
        rhs: Rational,
        n_other: Option<u64>,
        detail: String,
    },
    /// Witness tuple checked at tolerance over the tail blocks.
    WitnessTuple {
        witnesses: Vec<Rational>,
        eps: Rational,
        from_block: u64,
    },
    /// The tail map's exact orbit of the point never returns within `r_max`
    /// steps, refuting pseudo-periodicity for all periods up to `r_max`.
    NoExactCycleUnderTail {
        orbit_prefix: Vec<Rational>,
        r_max: u64,
    },
}

/// Three-valued classifier output with re-checkable evidence.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub definition: u8,
    pub status: VerdictStatus,
    pub horizon: u64,
    pub tolerance: Option<Rational>,
    pub r: Option<u64>,
    pub evidence: Evidence,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.status == VerdictStatus::HoldsExactly
    }

    pub fn refuted(&self) -> bool {
        self.status == VerdictStatus::RefutedAt
    }

    pub fn certificate(&self) -> Option<&CycleCertificate> {
        match &self.evidence {
            Evidence::Certificate(c) => Some(c),
            _ => None,
        }
    }

    /// The cycle claimed by the verdict, when one is present.
    pub fn cycle(&self) -> Option<&[Rational]> {
        match &self.evidence {
            Evidence::Certificate(c) => Some(&c.cycle),
            Evidence::ExactCycle { cycle, .. } => Some(cycle),
            _ => None,
        }
    }

    /// Wire form:
    /// `{"definition", "status", "r", "cycle", "eps_table", "horizon",
    ///   "tolerance", "refutation"?}` with rationals as `p/q` strings.
    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("definition".into(), json!(self.definition));
        obj.insert("status".into(), json!(self.status.as_str()));
        obj.insert("horizon".into(), json!(self.horizon));
        if let Some(tol) = &self.tolerance {
            obj.insert("tolerance".into(), json!(tol.to_string()));
        }
        if let Some(r) = self.r {
            obj.insert("r".into(), json!(r));
        }
        if let Some(cycle) = self.cycle() {
            obj.insert(
                "cycle".into(),
                json!(cycle.iter().map(|c| c.to_string()).collect::<Vec<_>>()),
            );
        }
        match &self.evidence {
            Evidence::Certificate(cert) => {
                obj.insert(
                    "eps_table".into(),
                    json!(cert
                        .eps_table
                        .iter()
                        .map(|(eps, n0)| json!([eps.to_string(), n0]))
                        .collect::<Vec<_>>()),
                );
            }
            Evidence::ExactCycle { from_step, .. } => {
                obj.insert("from_step".into(), json!(from_step));
            }
            Evidence::StructuralReturn { period } => {
                obj.insert("structural_period".into(), json!(period));
            }
            Evidence::ReturnAt { n } => {
                obj.insert("return_n".into(), json!(n));
            }
            Evidence::NoReturnFound => {
                obj.insert("detail".into(), json!("no exact return below horizon"));
            }
            Evidence::Refutation {
                n,
                lhs,
                rhs,
                n_other,
                detail,
            } => {
                let mut refut = Map::new();
                refut.insert("n".into(), json!(n));
                refut.insert("lhs".into(), json!(lhs.to_string()));
                refut.insert("rhs".into(), json!(rhs.to_string()));
                if let Some(m) = n_other {
                    refut.insert("n_other".into(), json!(m));
                }
                obj.insert("refutation".into(), Value::Object(refut));
                obj.insert("detail".into(), json!(detail));
            }
            Evidence::WitnessTuple {
                witnesses,
                eps,
                from_block,
            } => {
                obj.insert(
                    "witnesses".into(),
                    json!(witnesses.iter().map(|w| w.to_string()).collect::<Vec<_>>()),
                );
                obj.insert("witness_eps".into(), json!(eps.to_string()));
                obj.insert("from_block".into(), json!(from_block));
            }
            Evidence::NoExactCycleUnderTail {
                orbit_prefix,
                r_max,
            } => {
                obj.insert(
                    "tail_orbit_prefix".into(),
                    json!(orbit_prefix
                        .iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()),
                );
                obj.insert("r_max".into(), json!(r_max));
                obj.insert(
                    "detail".into(),
                    json!("point is not exactly periodic under the tail map for any period up to r_max"),
                );
            }
        }
        Value::Object(obj)
    }
}

/// True iff `f` cyclically maps each cycle point to the next:
/// `f(x_i) = x_{i+1 mod r}` exactly for all `i`. Cycle must be nonempty.
pub fn limit_cycle_crosscheck(cycle: &[Rational], f: &PLMap) -> bool {
    if cycle.is_empty() {
        return false;
    }
    cycle.iter().enumerate().all(|(i, x)| {
        match f.eval(x) {
            Ok(y) => y == cycle[(i + 1) % cycle.len()],
            Err(_) => false,
        }
    })
}

/// Exact orbit of `x` under `g`, up to `steps` applications.
fn tail_orbit(g: &PLMap, x: &Rational, steps: u64) -> Result<Vec<Rational>> {
    let mut orbit = vec![x.clone()];
    for _ in 0..steps {
        let next = g.eval(orbit.last().unwrap())?;
        orbit.push(next);
    }
    Ok(orbit)
}

/// Pseudo-periodicity (definition 1): witnesses `x_1 = x, ..., x_r` with
/// single-step maps carrying each witness toward the next at every late
/// block.
///
/// For sequences with a constant tail `g` the quantifier structure forces
/// `g(x_i) = x_{i+1}` exactly, so membership reduces to exact
/// `g`-periodicity of `x` and is decided. Family rules fall back to witness
/// search at tolerance `eps`: candidate witnesses come from clustering the
/// late single-map images, then every condition is re-verified.
pub fn check_def1(
    seq: &MapSequence,
    x: &Rational,
    r_max: u64,
    horizon: u64,
    eps: &Rational,
) -> Result<Verdict> {
    if r_max < 1 {
        return Err(Error::BadParams("r_max must be at least 1".into()));
    }
    if horizon < 2 * r_max {
        return Err(Error::BadParams(
            "horizon must be at least 2 * r_max".into(),
        ));
    }
    if eps <= &Rational::zero() {
        return Err(Error::BadParams("eps must be positive".into()));
    }
    if !x.in_unit_interval() {
        return Err(Error::OutOfUnitInterval {
            value: x.to_string(),
        });
    }

    if let Some((tail, _)) = seq.tail_map() {
        // Exact reduction through the constant tail.
        let orbit = tail_orbit(tail, x, r_max)?;
        for r in 1..=r_max {
            if orbit[r as usize] == *x {
                return Ok(Verdict {
                    definition: 1,
                    status: VerdictStatus::HoldsExactly,
                    horizon,
                    tolerance: None,
                    r: Some(r),
                    evidence: Evidence::ExactCycle {
                        cycle: orbit[..r as usize].to_vec(),
                        from_step: 0,
                    },
                });
            }
        }
        return Ok(Verdict {
            definition: 1,
            status: VerdictStatus::RefutedAt,
            horizon,
            tolerance: None,
            r: None,
            evidence: Evidence::NoExactCycleUnderTail {
                orbit_prefix: orbit,
                r_max,
            },
        });
    }

    // Witness-search mode for family rules.
    let mut first_refutation: Option<(u64, Evidence)> = None;
    for r in 1..=r_max {
        match def1_witness_search(seq, x, r, horizon, eps)? {
            Ok(evidence) => {
                return Ok(Verdict {
                    definition: 1,
                    status: VerdictStatus::ConsistentUpTo,
                    horizon,
                    tolerance: Some(eps.clone()),
                    r: Some(r),
                    evidence,
                })
            }
            Err(evidence) => {
                if first_refutation.is_none() {
                    first_refutation = Some((r, evidence));
                }
            }
        }
    }
    let (r, evidence) = first_refutation.expect("at least one r was scanned");
    Ok(Verdict {
        definition: 1,
        status: VerdictStatus::RefutedAt,
        horizon,
        tolerance: Some(eps.clone()),
        r: Some(r),
        evidence,
    })
}

/// Candidate witnesses for slot `i+1` from the late images of slot `i`.
fn def1_candidates(values: &[(u64, Rational)], eps: &Rational) -> Vec<Rational> {
    let vals: Vec<Rational> = values.iter().map(|(_, v)| v.clone()).collect();
    let clusters = greedy_clusters(&vals, eps);
    if clusters.len() != 1 {
        return Vec::new();
    }
    let rep = clusters[0].rep.clone();
    let lo = (&rep - eps).max(Rational::zero());
    let hi = (&rep + eps).min(Rational::one());
    let snap = simplest_in_interval(&lo, &hi);
    let mut cands = vec![snap, rep];
    cands.dedup();
    cands
}

/// Depth-first search over witness tuples for one candidate period.
/// Returns `Ok(evidence)` when a tuple verifies at tolerance on every late
/// block, `Err(evidence)` with a concrete violation otherwise.
fn def1_witness_search(
    seq: &MapSequence,
    x: &Rational,
    r: u64,
    horizon: u64,
    eps: &Rational,
) -> Result<std::result::Result<Evidence, Evidence>> {
    // Blocks n with all indices n*r + i (1 <= i <= r) inside the horizon.
    let n_hi = horizon / r;
    let n_hi = if n_hi * r + r > horizon { n_hi.saturating_sub(1) } else { n_hi };
    let n_lo = (n_hi / 2).max(1);
    if n_hi < n_lo + 1 {
        return Err(Error::BadParams(
            "horizon leaves too few blocks for witness search".into(),
        ));
    }

    // images[i] = late images f_{n r + i}(w_i); built slot by slot.
    fn images_of(
        seq: &MapSequence,
        w: &Rational,
        r: u64,
        i: u64,
        n_lo: u64,
        n_hi: u64,
    ) -> Result<Vec<(u64, Rational)>> {
        let mut out = Vec::with_capacity((n_hi - n_lo + 1) as usize);
        for n in n_lo..=n_hi {
            let m = seq.map_at(n * r + i)?;
            out.push((n, m.eval(w)?));
        }
        Ok(out)
    }

    // Verify d(images, target) < eps on every late block.
    fn verify(
        images: &[(u64, Rational)],
        target: &Rational,
        eps: &Rational,
    ) -> std::result::Result<(), (u64, Rational)> {
        for (n, v) in images {
            if &dist(v, target) >= eps {
                return Err((*n, v.clone()));
            }
        }
        Ok(())
    }

    // Depth-first over candidate tuples (at most two candidates per slot).
    struct Frame {
        witness: Rational,
        images: Vec<(u64, Rational)>,
        candidates: Vec<Rational>,
        next_candidate: usize,
    }

    let mut first_violation: Option<Evidence> = None;
    let x_images = images_of(seq, x, r, 1.min(r), n_lo, n_hi)?;

    // r = 1: single condition d(f_{n+1-ish}(x), x) — the wrap applied to x
    // itself; no free witnesses.
    if r == 1 {
        return Ok(match verify(&x_images, x, eps) {
            Ok(()) => Ok(Evidence::WitnessTuple {
                witnesses: vec![x.clone()],
                eps: eps.clone(),
                from_block: n_lo,
            }),
            Err((n, v)) => Err(Evidence::Refutation {
                n,
                lhs: v,
                rhs: x.clone(),
                n_other: None,
                detail: format!("d(f_(n*{r}+1)(x), x) >= {eps} at block n={n}"),
            }),
        });
    }

    let mut stack: Vec<Frame> = vec![Frame {
        witness: x.clone(),
        images: x_images,
        candidates: Vec::new(),
        next_candidate: 0,
    }];
    // Seed candidates for slot 2 from the images of x.
    stack[0].candidates = def1_candidates(&stack[0].images, eps);
    if stack[0].candidates.is_empty() {
        let (diam_lo, diam_hi) = spread(&stack[0].images);
        return Ok(Err(Evidence::Refutation {
            n: diam_hi.0,
            lhs: diam_hi.1,
            rhs: diam_lo.1,
            n_other: Some(diam_lo.0),
            detail: format!(
                "late images of witness 1 do not settle within eps={eps} for r={r}"
            ),
        }));
    }

    while let Some(top) = stack.last_mut() {
        if top.next_candidate >= top.candidates.len() {
            stack.pop();
            continue;
        }
        let cand = top.candidates[top.next_candidate].clone();
        top.next_candidate += 1;
        // The images of the current top slot must approach the candidate.
        if let Err((n, v)) = verify(&top.images, &cand, eps) {
            if first_violation.is_none() {
                first_violation = Some(Evidence::Refutation {
                    n,
                    lhs: v,
                    rhs: cand.clone(),
                    n_other: None,
                    detail: format!(
                        "candidate witness {cand} misses a late image for r={r}"
                    ),
                });
            }
            continue;
        }
        let depth = stack.len() as u64; // slots filled beyond x
        if depth == r - 1 {
            // Last free slot chosen; check the wrap back to x.
            let wrap_images = images_of(seq, &cand, r, r, n_lo, n_hi)?;
            match verify(&wrap_images, x, eps) {
                Ok(()) => {
                    let mut witnesses = vec![x.clone()];
                    witnesses.extend(stack.iter().skip(1).map(|f| f.witness.clone()));
                    witnesses.push(cand);
                    return Ok(Ok(Evidence::WitnessTuple {
                        witnesses,
                        eps: eps.clone(),
                        from_block: n_lo,
                    }));
                }
                Err((n, v)) => {
                    if first_violation.is_none() {
                        first_violation = Some(Evidence::Refutation {
                            n,
                            lhs: v,
                            rhs: x.clone(),
                            n_other: None,
                            detail: format!("wrap condition back to x fails for r={r}"),
                        });
                    }
                    continue;
                }
            }
        }
        // Push the next slot.
        let images = images_of(seq, &cand, r, depth + 1, n_lo, n_hi)?;
        let candidates = def1_candidates(&images, eps);
        if candidates.is_empty() {
            if first_violation.is_none() {
                let (diam_lo, diam_hi) = spread(&images);
                first_violation = Some(Evidence::Refutation {
                    n: diam_hi.0,
                    lhs: diam_hi.1,
                    rhs: diam_lo.1,
                    n_other: Some(diam_lo.0),
                    detail: format!(
                        "late images of witness {} do not settle within eps={eps} for r={r}",
                        depth + 1
                    ),
                });
            }
            continue;
        }
        stack.push(Frame {
            witness: cand,
            images,
            candidates,
            next_candidate: 0,
        });
    }

    Ok(Err(first_violation.unwrap_or(Evidence::NoReturnFound)))
}

/// Extremal (step, value) pairs of a nonempty indexed sequence.
fn spread(values: &[(u64, Rational)]) -> ((u64, Rational), (u64, Rational)) {
    let mut lo = values[0].clone();
    let mut hi = values[0].clone();
    for (n, v) in values {
        if *v < lo.1 {
            lo = (*n, v.clone());
        }
        if *v > hi.1 {
            hi = (*n, v.clone());
        }
    }
    (lo, hi)
}

/// Step-periodicity (definition 2): `f_1^{n+r}(x) = f_1^n(x)` for all
/// `n >= 0`, i.e. the trajectory is exactly `r`-periodic from step 0.
pub fn check_def2(seq: &MapSequence, x: &Rational, r: u64, horizon: u64) -> Result<Verdict> {
    if r < 1 || horizon <= r {
        return Err(Error::BadParams("need r >= 1 and horizon > r".into()));
    }
    let traj = seq.trajectory(x, horizon)?;
    let v = traj.values();
    for n in 0..=(horizon - r) {
        let (a, b) = (&v[(n + r) as usize], &v[n as usize]);
        if a != b {
            return Ok(Verdict {
                definition: 2,
                status: VerdictStatus::RefutedAt,
                horizon,
                tolerance: None,
                r: Some(r),
                evidence: Evidence::Refutation {
                    n,
                    lhs: a.clone(),
                    rhs: b.clone(),
                    n_other: None,
                    detail: format!("f_1^{}(x) != f_1^{}(x)", n + r, n),
                },
            });
        }
    }
    // Exactly periodic on the whole checked range.
    let closure = seq
        .tail_map()
        .map(|(_, prefix_len)| prefix_len + r <= horizon)
        .unwrap_or(false);
    Ok(Verdict {
        definition: 2,
        status: if closure {
            VerdictStatus::HoldsExactly
        } else {
            VerdictStatus::ConsistentUpTo
        },
        horizon,
        tolerance: None,
        r: Some(r),
        evidence: Evidence::ExactCycle {
            cycle: v[..r as usize].to_vec(),
            from_step: 0,
        },
    })
}

/// Return periodicity (definition 3): `f_1^n(x) = x` for some `n >= 1`.
/// Purely existential, so the negative verdict only states that no return
/// was found below the horizon.
pub fn check_def3(seq: &MapSequence, x: &Rational, horizon: u64) -> Result<Verdict> {
    if horizon < 1 {
        return Err(Error::BadParams("horizon must be at least 1".into()));
    }
    let traj = seq.trajectory(x, horizon)?;
    for n in 1..=horizon {
        if traj.value(n) == x {
            return Ok(Verdict {
                definition: 3,
                status: VerdictStatus::HoldsExactly,
                horizon,
                tolerance: None,
                r: Some(n),
                evidence: Evidence::ReturnAt { n },
            });
        }
    }
    Ok(Verdict {
        definition: 3,
        status: VerdictStatus::ConsistentUpTo,
        horizon,
        tolerance: None,
        r: None,
        evidence: Evidence::NoReturnFound,
    })
}

/// Block-return periodicity (definition 4): `f_1^{rn}(x) = x` for every
/// `n >= 1`.
pub fn check_def4(seq: &MapSequence, x: &Rational, r: u64, horizon: u64) -> Result<Verdict> {
    if r < 1 || horizon < r {
        return Err(Error::BadParams("need r >= 1 and horizon >= r".into()));
    }
    let traj = seq.trajectory(x, horizon)?;
    let mut k = 1;
    while k * r <= horizon {
        let v = traj.value(k * r);
        if v != x {
            return Ok(Verdict {
                definition: 4,
                status: VerdictStatus::RefutedAt,
                horizon,
                tolerance: None,
                r: Some(r),
                evidence: Evidence::Refutation {
                    n: k,
                    lhs: v.clone(),
                    rhs: x.clone(),
                    n_other: None,
                    detail: format!("f_1^{}(x) != x", k * r),
                },
            });
        }
        k += 1;
    }
    // All multiples below the horizon return exactly. Try to certify.
    if let Some(period) = seq.certified_return_period(x) {
        if r % period == 0 {
            return Ok(Verdict {
                definition: 4,
                status: VerdictStatus::HoldsExactly,
                horizon,
                tolerance: None,
                r: Some(r),
                evidence: Evidence::StructuralReturn { period },
            });
        }
    }
    if let Some((_, prefix_len)) = seq.tail_map() {
        // Some verified full block [kr, (k+1)r] beyond the prefix proves
        // g^r(x) = x, which closes the induction.
        let mut k = 0;
        let closed = loop {
            if (k + 1) * r > horizon {
                break false;
            }
            if k * r >= prefix_len {
                break true;
            }
            k += 1;
        };
        if closed {
            let from = k * r;
            return Ok(Verdict {
                definition: 4,
                status: VerdictStatus::HoldsExactly,
                horizon,
                tolerance: None,
                r: Some(r),
                evidence: Evidence::ExactCycle {
                    cycle: traj.values()[from as usize..(from + r) as usize].to_vec(),
                    from_step: from,
                },
            });
        }
    }
    Ok(Verdict {
        definition: 4,
        status: VerdictStatus::ConsistentUpTo,
        horizon,
        tolerance: None,
        r: Some(r),
        evidence: Evidence::ExactCycle {
            cycle: vec![x.clone()],
            from_step: 0,
        },
    })
}

enum PerR {
    Holds(CycleCertificate),
    Consistent(CycleCertificate),
    Refuted(Evidence),
    Degenerate,
}

/// Asymptotic periodicity (definition 5): the residue-class subsequences of
/// the trajectory converge to a cycle `x_1, ..., x_r`.
///
/// For each candidate period the residue classes of the trajectory tail are
/// clustered; candidate targets are cluster representatives snapped to the
/// simplest rational within tolerance; candidates are then verified against
/// the whole trajectory, recording the least `n_0` for every tolerance in
/// the schedule. A class refutes its period when it keeps a spread wider
/// than twice the smallest tolerance late in the tail, or when its
/// last-quarter diameter strictly exceeds the preceding quarter's and the
/// smallest tolerance. The smallest consistent period is reported; reported
/// cycle points must be pairwise distinct.
pub fn check_def5(
    seq: &MapSequence,
    x: &Rational,
    r_max: u64,
    horizon: u64,
    eps_schedule: &[Rational],
) -> Result<Verdict> {
    if r_max < 1 {
        return Err(Error::BadParams("r_max must be at least 1".into()));
    }
    if horizon < 10 * r_max {
        return Err(Error::InsufficientData(
            "horizon must be at least 10 * r_max".into(),
        ));
    }
    if eps_schedule.is_empty() {
        return Err(Error::BadParams("eps schedule must be nonempty".into()));
    }
    for w in eps_schedule.windows(2) {
        if w[0] <= w[1] {
            return Err(Error::BadParams(
                "eps schedule must be strictly decreasing".into(),
            ));
        }
    }
    if eps_schedule[eps_schedule.len() - 1] <= Rational::zero() {
        return Err(Error::BadParams("tolerances must be positive".into()));
    }
    let min_eps = &eps_schedule[eps_schedule.len() - 1];
    let traj = seq.trajectory(x, horizon)?;

    let mut first_refutation: Option<(u64, Evidence)> = None;
    for r in 1..=r_max {
        match def5_for_r(seq, &traj, r, eps_schedule, min_eps)? {
            PerR::Holds(cert) => {
                return Ok(Verdict {
                    definition: 5,
                    status: VerdictStatus::HoldsExactly,
                    horizon,
                    tolerance: Some(min_eps.clone()),
                    r: Some(r),
                    evidence: Evidence::Certificate(cert),
                })
            }
            PerR::Consistent(cert) => {
                return Ok(Verdict {
                    definition: 5,
                    status: VerdictStatus::ConsistentUpTo,
                    horizon,
                    tolerance: Some(min_eps.clone()),
                    r: Some(r),
                    evidence: Evidence::Certificate(cert),
                })
            }
            PerR::Refuted(evidence) => {
                if first_refutation.is_none() {
                    first_refutation = Some((r, evidence));
                }
            }
            PerR::Degenerate => {}
        }
    }
    let (r, evidence) = first_refutation
        .expect("r = 1 is never degenerate, so a refutation must have been recorded");
    Ok(Verdict {
        definition: 5,
        status: VerdictStatus::RefutedAt,
        horizon,
        tolerance: Some(min_eps.clone()),
        r: Some(r),
        evidence,
    })
}

fn def5_for_r(
    seq: &MapSequence,
    traj: &Trajectory,
    r: u64,
    eps_schedule: &[Rational],
    min_eps: &Rational,
) -> Result<PerR> {
    let horizon = traj.horizon();
    let values = traj.values();
    let tail_start = horizon / 2;

    // Exact closure: eventually constant sequence + exactly eventually
    // r-periodic trajectory persists forever.
    if let Some((_, prefix_len)) = seq.tail_map() {
        let mut stable_from: u64 = 0;
        for s in (0..=(horizon - r)).rev() {
            if values[(s + r) as usize] != values[s as usize] {
                stable_from = s + 1;
                break;
            }
        }
        if stable_from.max(prefix_len) + r <= horizon {
            let cycle = phase_aligned_cycle(values, stable_from, r);
            if !pairwise_distinct(&cycle) {
                return Ok(PerR::Degenerate);
            }
            let eps_table = eps_table_for(values, &cycle, r, eps_schedule)
                .expect("an exactly periodic tail verifies every tolerance");
            return Ok(PerR::Holds(CycleCertificate {
                r,
                cycle,
                eps_table,
                checked_horizon: horizon,
            }));
        }
    }

    // Residue classes over the tail.
    let mut classes: Vec<Vec<(u64, Rational)>> = vec![Vec::new(); r as usize];
    for s in tail_start..=horizon {
        classes[(s % r) as usize].push((s, values[s as usize].clone()));
    }
    if classes.iter().any(|c| c.len() < 4) {
        return Err(Error::InsufficientData(format!(
            "residue classes for r={r} have fewer than 4 tail points"
        )));
    }

    // Refutation rules per class.
    for (i, class) in classes.iter().enumerate() {
        let q = class.len() / 4;
        let q4 = &class[class.len() - q..];
        let q3 = &class[class.len() - 2 * q..class.len() - q];
        let (lo4, hi4) = spread(q4);
        let diam4 = &hi4.1 - &lo4.1;
        // A late window wider than 2*eps cannot be covered by any single
        // eps-ball, whatever the candidate target.
        let two_eps = min_eps + min_eps;
        if diam4 > two_eps {
            return Ok(PerR::Refuted(Evidence::Refutation {
                n: hi4.0,
                lhs: hi4.1,
                rhs: lo4.1,
                n_other: Some(lo4.0),
                detail: format!(
                    "residue class {i} (mod {r}) keeps a spread wider than 2*eps={two_eps} in the last quarter"
                ),
            }));
        }
        let (lo3, hi3) = spread(q3);
        let diam3 = &hi3.1 - &lo3.1;
        if diam4 > diam3 && &diam4 > min_eps {
            return Ok(PerR::Refuted(Evidence::Refutation {
                n: hi4.0,
                lhs: hi4.1,
                rhs: lo4.1,
                n_other: Some(lo4.0),
                detail: format!(
                    "residue class {i} (mod {r}) fails to contract: last-quarter diameter {diam4} exceeds preceding {diam3} and eps={min_eps}"
                ),
            }));
        }
    }

    // Candidate targets per class, verified against the whole trajectory.
    let mut targets: Vec<Rational> = Vec::with_capacity(r as usize);
    for class in classes.iter() {
        let vals: Vec<Rational> = class.iter().map(|(_, v)| v.clone()).collect();
        let clusters = greedy_clusters(&vals, min_eps);
        // Prefer the cluster tracking the latest behavior.
        let last_value = &vals[vals.len() - 1];
        let mut order: Vec<usize> = (0..clusters.len()).collect();
        order.sort_by_key(|&ci| {
            let contains_last = clusters[ci].members.iter().any(|m| m == last_value);
            if contains_last {
                0
            } else {
                1
            }
        });
        let mut chosen: Option<Rational> = None;
        'cluster: for ci in order {
            let rep = clusters[ci].rep.clone();
            let lo = (&rep - min_eps).max(Rational::zero());
            let hi = (&rep + min_eps).min(Rational::one());
            let mut cands = vec![simplest_in_interval(&lo, &hi), rep];
            cands.dedup();
            for cand in cands {
                if class_verifies(class, &cand, min_eps) {
                    chosen = Some(cand);
                    break 'cluster;
                }
            }
        }
        match chosen {
            Some(t) => targets.push(t),
            None => {
                // Every candidate leaves a late violation.
                let (n, v) = class[class.len() - 1].clone();
                let rep = greedy_clusters(&vals, min_eps)[0].rep.clone();
                return Ok(PerR::Refuted(Evidence::Refutation {
                    n,
                    lhs: v,
                    rhs: rep,
                    n_other: None,
                    detail: format!(
                        "no candidate target covers the tail of a residue class (mod {r}) at eps={min_eps}"
                    ),
                }));
            }
        }
    }
    if !pairwise_distinct(&targets) {
        return Ok(PerR::Degenerate);
    }
    match eps_table_for(values, &targets, r, eps_schedule) {
        Some(eps_table) => Ok(PerR::Consistent(CycleCertificate {
            r,
            cycle: targets,
            eps_table,
            checked_horizon: horizon,
        })),
        None => {
            let (n, v) = (horizon, values[horizon as usize].clone());
            Ok(PerR::Refuted(Evidence::Refutation {
                n,
                lhs: v,
                rhs: targets[(horizon % r) as usize].clone(),
                n_other: None,
                detail: format!(
                    "final trajectory value misses its target at the smallest tolerance for r={r}"
                ),
            }))
        }
    }
}

/// Cycle values read off the trajectory, aligned so that entry `i` is the
/// value of steps `s ≡ i (mod r)` once the trajectory is periodic.
fn phase_aligned_cycle(values: &[Rational], stable_from: u64, r: u64) -> Vec<Rational> {
    (0..r)
        .map(|i| {
            let offset = (i + r - (stable_from % r)) % r;
            values[(stable_from + offset) as usize].clone()
        })
        .collect()
}

fn pairwise_distinct(values: &[Rational]) -> bool {
    for (i, a) in values.iter().enumerate() {
        for b in values.iter().skip(i + 1) {
            if a == b {
                return false;
            }
        }
    }
    true
}

/// True when all class values from some step on lie strictly within eps of
/// the candidate, with at least the final value covered.
fn class_verifies(class: &[(u64, Rational)], cand: &Rational, eps: &Rational) -> bool {
    dist(&class[class.len() - 1].1, cand) < *eps
}

/// For each tolerance, the least step `n_0` such that every step
/// `n_0 <= s <= N` satisfies `d(x_s, target(s mod r)) < eps`. Returns None
/// if even the final step misses the smallest tolerance.
fn eps_table_for(
    values: &[Rational],
    targets: &[Rational],
    r: u64,
    eps_schedule: &[Rational],
) -> Option<Vec<(Rational, u64)>> {
    let horizon = values.len() as u64 - 1;
    let mut table = Vec::with_capacity(eps_schedule.len());
    for eps in eps_schedule {
        let mut n0: u64 = 0;
        for s in (0..=horizon).rev() {
            let target = &targets[(s % r) as usize];
            if &dist(&values[s as usize], target) >= eps {
                if s == horizon {
                    return None;
                }
                n0 = s + 1;
                break;
            }
        }
        table.push((eps.clone(), n0));
    }
    Some(table)
}
