//! Enumeration of the rationals in `[0,1]`.
//!
//! Calkin-Wilf order filtered to the unit interval, with 0 and 1 prepended:
//! `0, 1, 1/2, 1/3, 2/3, 1/4, 3/5, 2/5, 3/4, 1/5, ...`
//! Every rational in `[0,1]` appears exactly once.

use num::BigInt;

use crate::rational::Rational;

/// Iterator over the enumeration described above.
pub struct UnitRationals {
    emitted_head: usize,
    state: Rational,
}

impl UnitRationals {
    pub fn new() -> Self {
        UnitRationals {
            emitted_head: 0,
            state: Rational::one(),
        }
    }
}

impl Default for UnitRationals {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for UnitRationals {
    type Item = Rational;

    fn next(&mut self) -> Option<Rational> {
        match self.emitted_head {
            0 => {
                self.emitted_head = 1;
                return Some(Rational::zero());
            }
            1 => {
                self.emitted_head = 2;
                return Some(Rational::one());
            }
            _ => {}
        }
        // Calkin-Wilf successor q -> 1/(2*floor(q) - q + 1), keeping only
        // values strictly inside (0,1). The walk starts at 1/1 which was
        // already emitted as the prepended head.
        loop {
            let fl = self.state.floor_int();
            let two_floor = Rational::from_bigint(fl * BigInt::from(2), BigInt::from(1))
                .expect("nonzero denominator");
            self.state =
                Rational::one() / (two_floor - self.state.clone() + Rational::one());
            if self.state < Rational::one() {
                return Some(self.state.clone());
            }
        }
    }
}

/// The `i`-th term of the enumeration, 1-based.
pub fn unit_rational(index: u64) -> Rational {
    assert!(index >= 1, "enumeration is 1-based");
    UnitRationals::new()
        .nth(index as usize - 1)
        .expect("infinite iterator")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn first_terms_are_frozen() {
        let got: Vec<Rational> = UnitRationals::new().take(10).collect();
        let expected = vec![
            r(0, 1),
            r(1, 1),
            r(1, 2),
            r(1, 3),
            r(2, 3),
            r(1, 4),
            r(3, 5),
            r(2, 5),
            r(3, 4),
            r(1, 5),
        ];
        assert_eq!(got, expected);
    }

    #[test]
    fn no_repeats_in_long_prefix() {
        let mut seen = std::collections::HashSet::new();
        for q in UnitRationals::new().take(3000) {
            assert!(q.in_unit_interval());
            assert!(seen.insert(q.to_string()), "duplicate in enumeration");
        }
    }

    #[test]
    fn indexed_access_matches_iterator() {
        assert_eq!(unit_rational(1), r(0, 1));
        assert_eq!(unit_rational(2), r(1, 1));
        assert_eq!(unit_rational(5), r(2, 3));
        assert_eq!(unit_rational(10), r(1, 5));
    }
}
