//! Random instances for self-tests and property suites.

use rand::Rng;

use crate::field::FieldSpec;
use crate::lattice::LatticeBasis;
use crate::matrix::RatMatrix;
use crate::poly::Poly;
use crate::ratfunc::{LaurentTail, RatFunc};

pub fn random_poly<R: Rng + ?Sized>(rng: &mut R, field: FieldSpec, max_deg: usize) -> Poly {
    let q = field.p();
    Poly::from_coeffs(field, (0..=max_deg).map(|_| rng.gen_range(0..q)))
}

/// `f / x^k` with `deg f <= max_deg` and `k <= max_shift`.
pub fn random_ratfunc<R: Rng + ?Sized>(rng: &mut R, field: FieldSpec, max_deg: usize, max_shift: usize) -> RatFunc {
    let num = RatFunc::from_poly(random_poly(rng, field, max_deg));
    let k = rng.gen_range(0..=max_shift) as i64;
    num.shift(-k)
}

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, field: FieldSpec, d: usize, max_deg: usize) -> RatMatrix {
    let rows = (0..d)
        .map(|_| (0..d).map(|_| random_ratfunc(rng, field, max_deg, max_deg)).collect())
        .collect();
    RatMatrix::from_rows(field, rows).expect("square")
}

/// A nonsingular lattice with entries `f / x^k`, `deg f, k <= max_deg`.
pub fn random_lattice<R: Rng + ?Sized>(rng: &mut R, field: FieldSpec, d: usize, max_deg: usize) -> LatticeBasis {
    loop {
        if let Ok(l) = LatticeBasis::new(random_matrix(rng, field, d, max_deg)) {
            return l;
        }
    }
}

/// A random lattice with its first column rescaled by a power of `x` to make
/// `|det| = 1`.
pub fn random_unimodular<R: Rng + ?Sized>(rng: &mut R, field: FieldSpec, d: usize, max_deg: usize) -> LatticeBasis {
    let l = random_lattice(rng, field, d, max_deg);
    let mut shift = vec![0; d];
    shift[0] = -l.det_exponent();
    let scaled = l.basis().mul(&RatMatrix::x_diagonal(field, &shift)).expect("square");
    LatticeBasis::new(scaled).expect("nonsingular")
}

pub fn random_tail<R: Rng + ?Sized>(rng: &mut R, field: FieldSpec, max_len: usize) -> LaurentTail {
    let q = field.p();
    let len = rng.gen_range(0..=max_len);
    LaurentTail::new(field, (0..len).map(|_| rng.gen_range(0..q)))
}
