//! Randomized invariants for the exact piecewise-linear algebra and the
//! sequence engine.

use proptest::prelude::*;

use ndslab_core::families::{theorem4_f_map, theorem4_g_map};
use ndslab_core::plmap::{IntervalQ, PLMap};
use ndslab_core::rational::{dist, Rational};
use ndslab_core::sequence::MapSequence;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d).unwrap()
}

fn unit_rational() -> impl Strategy<Value = Rational> {
    (0u32..=40, 1u32..=40).prop_map(|(a, b)| {
        let num = a.min(b);
        Rational::new(num as i64, b as i64).unwrap()
    })
}

/// Random canonical PL map with up to four interior breakpoints.
fn plmap() -> impl Strategy<Value = PLMap> {
    (
        prop::collection::btree_set((1u32..=31, 2u32..=32), 0..=4),
        prop::collection::vec(unit_rational(), 6),
    )
        .prop_map(|(raw_xs, ys)| {
            let mut xs: Vec<Rational> = raw_xs
                .into_iter()
                .filter(|(n, d)| n < d)
                .map(|(n, d)| Rational::new(n as i64, d as i64).unwrap())
                .collect();
            xs.sort();
            xs.dedup();
            xs.truncate(4);
            let mut anchors = vec![(Rational::zero(), ys[0].clone())];
            for (i, x) in xs.iter().enumerate() {
                anchors.push((x.clone(), ys[i + 1].clone()));
            }
            anchors.push((Rational::one(), ys[5].clone()));
            PLMap::from_anchors(anchors).expect("generated anchors are valid")
        })
}

/// Random surjective map drawn from a pool of shapes.
fn surjective_map() -> impl Strategy<Value = PLMap> {
    prop_oneof![
        Just(PLMap::tent()),
        Just(PLMap::identity()),
        Just(PLMap::one_minus_x()),
        (1u64..=6).prop_map(theorem4_g_map),
        (1u64..=6).prop_map(theorem4_f_map),
        // Monotone interpolation 0 -> 1 through one interior anchor.
        ((1u32..=15, 16u32..=31), unit_rational()).prop_map(|((n, d), y)| {
            PLMap::from_anchors(vec![
                (Rational::zero(), Rational::zero()),
                (Rational::new(n as i64, d as i64).unwrap(), y),
                (Rational::one(), Rational::one()),
            ])
            .map(|m| if m.is_surjective() { m } else { PLMap::identity() })
            .unwrap_or_else(|_| PLMap::identity())
        }),
    ]
}

/// Random sequence paired with a window-size cap that keeps composition
/// node growth affordable for maps that double their segment count.
fn sequence_with_cap() -> impl Strategy<Value = (MapSequence, u64)> {
    prop_oneof![
        surjective_map().prop_map(|m| {
            let cap = if m.nodes().len() > 2 { 10 } else { 16 };
            (MapSequence::constant(m).unwrap(), cap)
        }),
        (
            prop::collection::vec(surjective_map(), 1..=3),
            surjective_map()
        )
            .prop_map(|(prefix, tail)| {
                (MapSequence::eventually_constant(prefix, tail).unwrap(), 10)
            }),
        Just((MapSequence::theorem_four(), 16)),
        (0u64..=3).prop_map(|off| (MapSequence::example_v(off), 16)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn composition_is_associative(f in plmap(), g in plmap(), h in plmap()) {
        let lhs = h.compose(&g.compose(&f));
        let rhs = h.compose(&g).compose(&f);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn eval_commutes_with_composition(f in plmap(), g in plmap(), x in unit_rational()) {
        let composed = g.compose(&f);
        prop_assert_eq!(
            composed.eval(&x).unwrap(),
            g.eval(&f.eval(&x).unwrap()).unwrap()
        );
    }

    #[test]
    fn sup_distance_is_a_metric(f in plmap(), g in plmap(), h in plmap()) {
        // symmetry
        prop_assert_eq!(f.sup_distance(&g), g.sup_distance(&f));
        // identity of indiscernibles
        prop_assert_eq!(f.sup_distance(&g).is_zero(), f == g);
        prop_assert!(f.sup_distance(&f).is_zero());
        // triangle inequality
        let fg = f.sup_distance(&g);
        let gh = g.sup_distance(&h);
        let fh = f.sup_distance(&h);
        prop_assert!(fh <= fg + gh);
    }

    #[test]
    fn sup_distance_dominates_grid_oracle(f in plmap(), g in plmap()) {
        let exact = f.sup_distance(&g);
        let grid: u32 = 1000;
        let mut best = Rational::zero();
        for j in 0..=grid {
            let x = r(j as i64, grid as i64);
            let d = dist(&f.eval(&x).unwrap(), &g.eval(&x).unwrap());
            if d > best {
                best = d;
            }
        }
        // The grid never exceeds the exact sup, and misses it by at most
        // the grid modulus of continuity (max joint slope / grid).
        prop_assert!(best <= exact);
        let slope_bound = max_abs_slope(&f) + max_abs_slope(&g);
        prop_assert!(&exact - &best <= slope_bound / r(grid as i64, 1));
    }

    #[test]
    fn fixed_points_are_exact_and_complete(f in plmap()) {
        let fps = f.fixed_points();
        for p in &fps.points {
            prop_assert_eq!(f.eval(p).unwrap(), p.clone());
        }
        for seg in &fps.segments {
            prop_assert_eq!(f.eval(seg.lo()).unwrap(), seg.lo().clone());
            prop_assert_eq!(f.eval(seg.hi()).unwrap(), seg.hi().clone());
            let mid = (seg.lo() + seg.hi()) / r(2, 1);
            prop_assert_eq!(f.eval(&mid).unwrap(), mid.clone());
        }
        // No sign change of f(x) - x on a grid outside reported solutions.
        let grid: i64 = 1000;
        let mut prev: Option<(Rational, Rational)> = None;
        for j in 0..=grid {
            let x = r(j, grid);
            let d = f.eval(&x).unwrap() - x.clone();
            if let Some((px, pd)) = prev {
                let sign_change = (pd < Rational::zero() && d > Rational::zero())
                    || (pd > Rational::zero() && d < Rational::zero());
                if sign_change {
                    let covered = fps.points.iter().any(|p| p >= &px && p <= &x)
                        || fps
                            .segments
                            .iter()
                            .any(|s| s.lo() <= &x && s.hi() >= &px);
                    prop_assert!(covered, "sign change in [{px}, {x}] not covered");
                }
            }
            prev = Some((x, d));
        }
    }

    #[test]
    fn image_interval_matches_oracle(f in plmap(), a in unit_rational(), b in unit_rational()) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let j = IntervalQ::new(lo.clone(), hi.clone()).unwrap();
        let img = f.image_interval(&j).unwrap();
        // Oracle: min/max over the endpoints and the nodes inside j.
        let mut candidates = vec![f.eval(&lo).unwrap(), f.eval(&hi).unwrap()];
        for (x, y) in f.nodes() {
            if x > &lo && x < &hi {
                candidates.push(y.clone());
            }
        }
        let omin = candidates.iter().min().unwrap().clone();
        let omax = candidates.iter().max().unwrap().clone();
        prop_assert_eq!(img.lo(), &omin);
        prop_assert_eq!(img.hi(), &omax);
        // Grid sampling stays inside the image.
        for k in 0..=32i64 {
            let x = &lo + &((&hi - &lo) * r(k, 32));
            let v = f.eval(&x).unwrap();
            prop_assert!(&v >= img.lo() && &v <= img.hi());
        }
    }

    #[test]
    fn cocycle_law((seq, cap) in sequence_with_cap(), i in 1u64..=8, n in 0u64..=8, m in 0u64..=8) {
        let (n, m) = if n + m > cap { (n.min(cap / 2), m.min(cap / 2)) } else { (n, m) };
        let whole = seq.window_compose(i, n + m).unwrap();
        let first = seq.window_compose(i, n).unwrap();
        let second = seq.window_compose(i + n, m).unwrap();
        prop_assert_eq!(whole, second.compose(&first));
    }

    #[test]
    fn trajectory_matches_window_evaluation((seq, cap) in sequence_with_cap(), x in unit_rational(), upto in 1u64..=20) {
        let upto = upto.min(cap.min(12));
        let traj = seq.trajectory(&x, upto).unwrap();
        for n in 0..=upto {
            let w = seq.window_compose(1, n).unwrap();
            prop_assert_eq!(traj.value(n), &w.eval(&x).unwrap());
        }
    }

    #[test]
    fn omega_clusters_are_disjoint_and_cover_the_tail(
        (seq, _) in sequence_with_cap(),
        x in unit_rational(),
        tol_den in 10i64..=200,
    ) {
        use ndslab_core::sequence::{omega_limit_estimate, OmegaVerdict};
        let horizon = 80u64;
        let tol = r(1, tol_den);
        let traj = seq.trajectory(&x, horizon).unwrap();
        let est = omega_limit_estimate(&traj, &r(1, 2), &tol).unwrap();
        // Balls are pairwise disjoint.
        for (i, a) in est.clusters.iter().enumerate() {
            for b in est.clusters.iter().skip(i + 1) {
                let gap = dist(&a.representative, &b.representative);
                prop_assert!(gap > &a.radius + &b.radius);
            }
        }
        // When declared finite, every tail value lies in some ball.
        if est.verdict == OmegaVerdict::FiniteAtTolerance {
            let tail_len = 40usize;
            for v in &traj.values()[traj.values().len() - tail_len..] {
                prop_assert!(est
                    .clusters
                    .iter()
                    .any(|c| dist(v, &c.representative) <= c.radius));
            }
        }
    }
}

fn max_abs_slope(f: &PLMap) -> Rational {
    let mut best = Rational::zero();
    for w in f.nodes().windows(2) {
        let slope = ((&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0)).abs();
        if slope > best {
            best = slope;
        }
    }
    best
}

/// Deterministic fine-grid scan of the sup-distance and fixed-point
/// invariants at 10^4 resolution over representative map pairs. Broad
/// pairwise coverage runs in the randomized suite above at 10^3.
#[test]
fn fine_grid_oracles_on_reference_maps() {
    let pairs: Vec<(PLMap, PLMap)> = vec![
        (PLMap::tent(), PLMap::one_minus_x()),
        (theorem4_g_map(1), PLMap::one_minus_x()),
        (theorem4_g_map(2), PLMap::one_minus_x()),
        (PLMap::tent().compose(&PLMap::tent()), PLMap::tent()),
    ];
    let grid: i64 = 10_000;
    for (f, g) in &pairs {
        let exact = f.sup_distance(g);
        let mut best = Rational::zero();
        for j in 0..=grid {
            let x = r(j, grid);
            let d = dist(&f.eval(&x).unwrap(), &g.eval(&x).unwrap());
            assert!(d <= exact, "grid exceeded exact sup");
            if d > best {
                best = d;
            }
        }
        let bound = (max_abs_slope(f) + max_abs_slope(g)) / r(grid, 1);
        assert!(&exact - &best <= bound);
    }
    // Fixed-point completeness at the same resolution.
    let reference: Vec<PLMap> = vec![
        PLMap::tent(),
        PLMap::identity(),
        PLMap::one_minus_x(),
        theorem4_g_map(1),
        theorem4_f_map(2),
        theorem4_g_map(3).compose(&theorem4_f_map(3)),
    ];
    for f in &reference {
        let fps = f.fixed_points();
        for p in &fps.points {
            assert_eq!(&f.eval(p).unwrap(), p);
        }
        let mut prev: Option<(Rational, Rational)> = None;
        for j in 0..=grid {
            let x = r(j, grid);
            let d = f.eval(&x).unwrap() - x.clone();
            if let Some((px, pd)) = prev {
                let sign_change = (pd < Rational::zero() && d > Rational::zero())
                    || (pd > Rational::zero() && d < Rational::zero());
                if sign_change {
                    let covered = fps.points.iter().any(|p| p >= &px && p <= &x)
                        || fps.segments.iter().any(|s| s.lo() <= &x && s.hi() >= &px);
                    assert!(covered, "uncovered sign change in [{px}, {x}]");
                }
            }
            prev = Some((x, d));
        }
    }
}
