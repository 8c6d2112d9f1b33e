//! Closed-form map families used by the built-in sequences.
//!
//! `theorem4_g_map(n)` and `theorem4_f_map(n)` are three- and two-branch
//! piecewise-linear maps with the key algebraic property
//! `g_n ∘ F_n = F_{n+1}`; the `g_n` converge uniformly to `x -> 1 - x`.
//! `example_v_map(k)` builds surjective maps pinned through prescribed
//! points of the rational enumeration.

use num::BigInt;

use crate::enumeration::unit_rational;
use crate::plmap::PLMap;
use crate::rational::Rational;

fn ri(n: u64) -> Rational {
    Rational::from_bigint(BigInt::from(n), BigInt::from(1)).expect("nonzero denominator")
}

fn frac(num: u64, den: u64) -> Rational {
    Rational::from_bigint(BigInt::from(num), BigInt::from(den)).expect("nonzero denominator")
}

/// Raw branch formula of `g_n` (branches numbered 1..=3 left to right).
/// Exposed so tests can check branch agreement at the seams independently
/// of the node representation.
pub fn g_branch_value(n: u64, branch: u8, x: &Rational) -> Rational {
    assert!(n >= 1);
    let one = Rational::one();
    if n % 2 == 1 {
        match branch {
            1 => &one - &(frac(n + 1, n + 2) * x.clone()),
            2 => (-x + &ri(n * n + 2 * n + 2)) / ri((n + 1) * (n + 2)),
            3 => frac(n + 2, n + 1) * (&one - x),
            _ => panic!("branch out of range"),
        }
    } else {
        match branch {
            1 => &one - &(frac(n + 2, n + 1) * x.clone()),
            2 => -(x / &ri((n + 1) * (n + 2))) + frac(1, n + 2),
            3 => frac(n + 1, n + 2) * (&one - x),
            _ => panic!("branch out of range"),
        }
    }
}

/// Interior breakpoints of `g_n`, left to right.
pub fn g_breakpoints(n: u64) -> [Rational; 2] {
    assert!(n >= 1);
    if n % 2 == 1 {
        [frac(1, n + 2), frac(2, n + 3)]
    } else {
        [frac(n + 1, n + 3), frac(n + 1, n + 2)]
    }
}

/// Raw branch formula of `F_n` (branches numbered 1..=2).
pub fn f_branch_value(n: u64, branch: u8, x: &Rational) -> Rational {
    assert!(n >= 1);
    let one = Rational::one();
    if n % 2 == 1 {
        match branch {
            1 => x / &ri(n + 1),
            2 => ri(n + 1) * x.clone() - ri(n),
            _ => panic!("branch out of range"),
        }
    } else {
        match branch {
            1 => &one - &(x / &ri(n + 1)),
            2 => ri(n + 1) - ri(n + 1) * x.clone(),
            _ => panic!("branch out of range"),
        }
    }
}

/// Interior breakpoint of `F_n`.
pub fn f_breakpoint(n: u64) -> Rational {
    assert!(n >= 1);
    frac(n + 1, n + 2)
}

/// The map `g_n` as a canonical `PLMap`.
pub fn theorem4_g_map(n: u64) -> PLMap {
    let [b1, b2] = g_breakpoints(n);
    let anchors = vec![
        (Rational::zero(), g_branch_value(n, 1, &Rational::zero())),
        (b1.clone(), g_branch_value(n, 1, &b1)),
        (b2.clone(), g_branch_value(n, 3, &b2)),
        (Rational::one(), g_branch_value(n, 3, &Rational::one())),
    ];
    PLMap::from_anchors(anchors).expect("family anchors are valid")
}

/// The map `F_n` as a canonical `PLMap`.
pub fn theorem4_f_map(n: u64) -> PLMap {
    let b = f_breakpoint(n);
    let anchors = vec![
        (Rational::zero(), f_branch_value(n, 1, &Rational::zero())),
        (b.clone(), f_branch_value(n, 1, &b)),
        (Rational::one(), f_branch_value(n, 2, &Rational::one())),
    ];
    PLMap::from_anchors(anchors).expect("family anchors are valid")
}

/// Surjective map with `f(0) = c` (used at odd positions of the
/// alternating constraint sequence).
pub fn pinned_from_zero(c: &Rational) -> PLMap {
    if c.is_zero() {
        return PLMap::tent();
    }
    if *c == Rational::one() {
        return PLMap::from_anchors(vec![
            (Rational::zero(), Rational::one()),
            (frac(1, 2), Rational::zero()),
            (Rational::one(), Rational::one()),
        ])
        .expect("valid anchors");
    }
    PLMap::from_anchors(vec![
        (Rational::zero(), c.clone()),
        (frac(1, 2), Rational::zero()),
        (Rational::one(), Rational::one()),
    ])
    .expect("valid anchors")
}

/// Surjective map with `f(c) = 0` (used at even positions).
pub fn pinned_to_zero(c: &Rational) -> PLMap {
    if c.is_zero() {
        return PLMap::tent();
    }
    if *c == Rational::one() {
        return PLMap::one_minus_x();
    }
    PLMap::from_anchors(vec![
        (Rational::zero(), Rational::one()),
        (c.clone(), Rational::zero()),
        (Rational::one(), Rational::one()),
    ])
    .expect("valid anchors")
}

/// The `k`-th map of the alternating constraint sequence: odd `k = 2m-1`
/// sends `0` to the `m`-th enumerated rational, even `k = 2m` sends that
/// rational to `0`. `offset` shifts the enumeration start.
pub fn example_v_map(k: u64, offset: u64) -> PLMap {
    assert!(k >= 1);
    let m = k.div_ceil(2);
    let q = unit_rational(m + offset);
    if k % 2 == 1 {
        pinned_from_zero(&q)
    } else {
        pinned_to_zero(&q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::dist;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn g1_nodes_match_figure() {
        let g1 = theorem4_g_map(1);
        let expected: Vec<(Rational, Rational)> = vec![
            (r(0, 1), r(1, 1)),
            (r(1, 3), r(7, 9)),
            (r(1, 2), r(3, 4)),
            (r(1, 1), r(0, 1)),
        ];
        assert_eq!(g1.nodes(), expected.as_slice());
        assert_eq!(g1.eval(&r(1, 3)).unwrap(), r(7, 9));
    }

    #[test]
    fn g2_nodes_match_figure() {
        let g2 = theorem4_g_map(2);
        let expected: Vec<(Rational, Rational)> = vec![
            (r(0, 1), r(1, 1)),
            (r(3, 5), r(1, 5)),
            (r(3, 4), r(3, 16)),
            (r(1, 1), r(0, 1)),
        ];
        assert_eq!(g2.nodes(), expected.as_slice());
    }

    #[test]
    fn f1_and_f2_nodes() {
        let f1 = theorem4_f_map(1);
        let expected: Vec<(Rational, Rational)> = vec![
            (r(0, 1), r(0, 1)),
            (r(2, 3), r(1, 3)),
            (r(1, 1), r(1, 1)),
        ];
        assert_eq!(f1.nodes(), expected.as_slice());

        let f2 = theorem4_f_map(2);
        let expected: Vec<(Rational, Rational)> = vec![
            (r(0, 1), r(1, 1)),
            (r(3, 4), r(3, 4)),
            (r(1, 1), r(0, 1)),
        ];
        assert_eq!(f2.nodes(), expected.as_slice());
    }

    #[test]
    fn branch_formulas_agree_at_seams_spot() {
        for n in 1..=12u64 {
            let [b1, b2] = g_breakpoints(n);
            assert_eq!(g_branch_value(n, 1, &b1), g_branch_value(n, 2, &b1));
            assert_eq!(g_branch_value(n, 2, &b2), g_branch_value(n, 3, &b2));
            let fb = f_breakpoint(n);
            assert_eq!(f_branch_value(n, 1, &fb), f_branch_value(n, 2, &fb));
        }
    }

    #[test]
    fn composition_identity_spot() {
        // g_n(F_n(1/2)) must equal F_{n+1}(1/2); the n=1 instance passes
        // through F_1(1/2)=1/4 and g_1(1/4)=5/6.
        let f1 = theorem4_f_map(1);
        let g1 = theorem4_g_map(1);
        let x = r(1, 2);
        assert_eq!(f1.eval(&x).unwrap(), r(1, 4));
        assert_eq!(g1.eval(&r(1, 4)).unwrap(), r(5, 6));
        assert_eq!(g1.compose(&f1), theorem4_f_map(2));
        assert_eq!(theorem4_f_map(2).eval(&x).unwrap(), r(5, 6));
    }

    #[test]
    fn sup_distance_to_reflection() {
        let refl = PLMap::one_minus_x();
        assert_eq!(theorem4_g_map(1).sup_distance(&refl), r(1, 4));
        for n in 2..=20u64 {
            let d = theorem4_g_map(n).sup_distance(&refl);
            assert_eq!(d, Rational::new(1, (n + 3) as i64).unwrap());
        }
    }

    #[test]
    fn trajectory_values_of_one_half() {
        // F_5(1/2) = 1/12 on the shallow branch.
        assert_eq!(theorem4_f_map(5).eval(&r(1, 2)).unwrap(), r(1, 12));
        // Distance to the 2-cycle endpoints shrinks like x/(n+1).
        for n in 3..=30u64 {
            let v = theorem4_f_map(n).eval(&r(1, 2)).unwrap();
            let target = if n % 2 == 1 { r(0, 1) } else { r(1, 1) };
            assert_eq!(dist(&v, &target), r(1, 2) / ri(n + 1));
        }
    }

    #[test]
    fn family_maps_are_surjective() {
        for n in 1..=30u64 {
            assert!(theorem4_g_map(n).is_surjective(), "g_{n}");
            assert!(theorem4_f_map(n).is_surjective(), "F_{n}");
        }
    }

    #[test]
    fn example_v_maps_satisfy_pins_and_are_surjective() {
        for m in 1..=40u64 {
            let q = unit_rational(m);
            let odd = example_v_map(2 * m - 1, 0);
            let even = example_v_map(2 * m, 0);
            assert_eq!(odd.eval(&Rational::zero()).unwrap(), q, "f_(2m-1)(0) = q_m");
            assert_eq!(even.eval(&q).unwrap(), Rational::zero(), "f_(2m)(q_m) = 0");
            assert!(odd.is_surjective());
            assert!(even.is_surjective());
        }
    }
}
