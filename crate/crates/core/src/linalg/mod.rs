//! Exact linear algebra over the rationals: reduced row echelon forms,
//! kernels, and the subspace calculus every other module is built on.

mod matrix;
mod rational;
mod subspace;

pub use matrix::RatMatrix;
pub use rational::{
    format_rational, format_vector, int_vector, is_zero_vector, normalize_line, parse_rational, parse_vector,
    proportional, rat, ratio, serde_vector, serde_vectors, unit_vector, zero_vector, RatVector, Rational,
};
pub use subspace::Subspace;

use num_traits::{One, Zero};

/// Reduced row echelon form with zero rows dropped, plus the pivot columns.
pub fn rref(m: &RatMatrix) -> (RatMatrix, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        a.swap_rows(p, r);
        let lead = a.get(r, c).clone();
        if !lead.is_one() {
            a.scale_row(r, &lead);
        }
        for i in 0..rows {
            if i != r {
                let f = a.get(i, c).clone();
                if !f.is_zero() {
                    a.axpy_row(i, r, &f);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate_rows(r);
    (a, pivots)
}

/// `{ v : M v = 0 }` in canonical form.
pub fn kernel(m: &RatMatrix) -> Subspace {
    let cols = m.cols();
    let (r, pivots) = rref(m);
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let basis = (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|free| {
            let mut v = zero_vector(cols);
            v[free] = Rational::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(row, free).clone();
            }
            v
        })
        .collect();
    Subspace::span(cols, basis)
}

/// Inner product of two rational vectors.
pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

/// Linear combination `sum coeffs[i] * vectors[i]`.
pub fn combine(len: usize, coeffs: &[Rational], vectors: &[RatVector]) -> RatVector {
    let mut out = zero_vector(len);
    for (c, v) in coeffs.iter().zip(vectors) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            if !x.is_zero() {
                *o += c * x;
            }
        }
    }
    out
}
