//! Counting polynomials, `q -> 1` limits and brute-force oracles over prime
//! fields.

mod oracle;
mod poly;

pub use oracle::{brute_count, compare_counts, BruteKind, CompareReport, CompareRow};
pub use poly::{
    bigint_json, gauss_binomial, gauss_factorial, gauss_number, serialize_bigint, IntPolynomial, LimitResult,
};

use crate::scheme::Torification;

/// `Σ_cells (q-1)^dim q^affine`, which equals `Σ (q-1)^{d_i}` over the tori
/// of the subset refinement of every cell.
pub fn torification_poly(t: &Torification) -> IntPolynomial {
    let qm1 = IntPolynomial::q_minus_one();
    t.cells()
        .iter()
        .map(|c| &qm1.pow(c.dim as u32) * &IntPolynomial::monomial(c.affine))
        .sum()
}

/// See [`IntPolynomial::vanishing_order_and_limit`].
pub fn vanishing_order_and_limit(p: &IntPolynomial) -> crate::Result<LimitResult> {
    p.vanishing_order_and_limit()
}
