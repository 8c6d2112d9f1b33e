//! The Sharkovsky ordering of the natural numbers:
//! `3 ≻ 5 ≻ 7 ≻ ... ≻ 2·3 ≻ 2·5 ≻ ... ≻ 2^n·3 ≻ 2^n·5 ≻ ... ≻ 2^n ≻ ... ≻ 4 ≻ 2 ≻ 1`.
//!
//! Blocks of numbers with odd part > 1 come first, ordered by increasing
//! power of two and, within a block, by increasing odd part; the pure powers
//! of two come last in decreasing order.

/// Decompose `k = 2^a * q` with `q` odd.
fn decompose(k: u64) -> (u32, u64) {
    assert!(k >= 1);
    let a = k.trailing_zeros();
    (a, k >> a)
}

/// True iff `l` strictly precedes `m` in the Sharkovsky ordering
/// (`l ≻ m`). Distinct integers are always comparable; `l = m` is false.
pub fn sharkovsky_precedes(l: u64, m: u64) -> bool {
    if l == m {
        return false;
    }
    let (al, ql) = decompose(l);
    let (am, qm) = decompose(m);
    match (ql > 1, qm > 1) {
        // Both in odd-part blocks: earlier block (smaller power) wins,
        // then smaller odd part.
        (true, true) => (al, ql) < (am, qm),
        // Odd-part blocks precede every power of two.
        (true, false) => true,
        (false, true) => false,
        // Pure powers of two compare in decreasing order.
        (false, false) => al > am,
    }
}
