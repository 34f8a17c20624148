//! Exhaustive enumeration of lattice points in boxes and a brute-force
//! covering check.

use super::{minima, LatticeBasis};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ratfunc::{vec_norm, AbsValue, RatFunc};

/// Upper bound on the number of candidate vectors `enumerate_in_box` will
/// generate before giving up with `TooLarge`.
pub const ENUMERATION_LIMIT: u64 = 1 << 22;

/// All polynomials of degree `<= max_deg` (including zero), in a fixed order.
fn polys_up_to(field: crate::field::FieldSpec, max_deg: usize) -> Vec<Poly> {
    let q = field.p() as usize;
    let n = max_deg + 1;
    let total = q.pow(n as u32);
    (0..total)
        .map(|mut idx| {
            let coeffs = (0..n).map(|_| {
                let c = (idx % q) as u32;
                idx /= q;
                c
            });
            Poly::from_coeffs(field, coeffs)
        })
        .collect()
}

fn in_box(v: &[RatFunc], radius: &[i64]) -> bool {
    v.iter()
        .zip(radius)
        .all(|(c, &r)| c.abs() <= AbsValue::Power(r))
}

/// Every nonzero `v ∈ Λ` with `|v_i| <= q^{r_i}` for all `i`.
///
/// The box is the unit cube for `x^{-r} Λ`. With a reduced basis `c_j` of
/// that lattice (`‖c_j‖ = q^{e_j}`), `‖Σ a_j c_j‖ = max |a_j| q^{e_j}`, so the
/// box points are exactly the combinations with `deg a_j <= -e_j`.
pub fn enumerate_in_box(lattice: &LatticeBasis, radius: &[i64]) -> Result<Vec<Vec<RatFunc>>> {
    let d = lattice.dim();
    if radius.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: radius.len(),
        });
    }
    let f = lattice.field();
    let neg: Vec<i64> = radius.iter().map(|r| -r).collect();
    let scaled = lattice.x_scaled(&neg)?;
    let prof = minima(&scaled)?;
    let active: Vec<usize> = (0..d).filter(|&j| prof.exponents[j] <= 0).collect();
    if active.is_empty() {
        return Ok(Vec::new());
    }
    let q = f.p() as u64;
    let mut total: u64 = 1;
    for &j in &active {
        let n = (1 - prof.exponents[j]) as u32;
        total = q
            .checked_pow(n)
            .and_then(|c| total.checked_mul(c))
            .filter(|&t| t <= ENUMERATION_LIMIT)
            .ok_or_else(|| Error::TooLarge(format!("box holds more than {ENUMERATION_LIMIT} candidates")))?;
    }
    let choices: Vec<Vec<Poly>> = active
        .iter()
        .map(|&j| polys_up_to(f, (-prof.exponents[j]) as usize))
        .collect();
    let cols: Vec<Vec<RatFunc>> = active.iter().map(|&j| prof.reduced_basis.column(j)).collect();
    let back: Vec<RatFunc> = radius.iter().map(|&r| RatFunc::x_pow(f, r)).collect();

    let mut out = Vec::new();
    let mut idx = vec![0usize; active.len()];
    loop {
        if idx.iter().any(|&i| i != 0) {
            let mut v = vec![RatFunc::zero(f); d];
            for (k, col) in cols.iter().enumerate() {
                let a = &choices[k][idx[k]];
                if a.is_zero() {
                    continue;
                }
                let a = RatFunc::from_poly(a.clone());
                for i in 0..d {
                    v[i] = &v[i] + &(&a * &col[i]);
                }
            }
            let v: Vec<RatFunc> = v.iter().zip(&back).map(|(c, b)| c * b).collect();
            if in_box(&v, radius) {
                out.push(v);
            }
        }
        // odometer
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(out);
            }
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Does the box `|v_i| <= q^{r_i}` contain a nonzero lattice vector?
/// Equivalent to `λ_1(x^{-r} Λ) <= 1`.
pub fn has_point_in_box(lattice: &LatticeBasis, radius: &[i64]) -> Result<bool> {
    if radius.len() != lattice.dim() {
        return Err(Error::DimensionMismatch {
            expected: lattice.dim(),
            found: radius.len(),
        });
    }
    let neg: Vec<i64> = radius.iter().map(|r| -r).collect();
    Ok(minima(&lattice.x_scaled(&neg)?)?.first() <= 0)
}

/// Brute-force test of `Λ + q^r O^d = K~^d`.
///
/// Test points are `t = Σ s_j c_j` over a reduced basis `c_j` with `s_j` a
/// fractional tail; every class of `K~^d / Λ` has such a representative. A
/// digit of `s_j` at `x^{-k}` moves `t` by at most `q^{e_j - k}`, so only the
/// digits with `k < e_j - r` (and `k <= precision`) can change whether `t`
/// is within `q^r` of `Λ`. For each test point the nearest lattice vectors
/// are searched by enumeration in the ball of radius `max(‖t‖, q^r)`.
pub fn covering_oracle(lattice: &LatticeBasis, r: i64, precision: i64) -> Result<bool> {
    let prof = minima(lattice)?;
    let e_d = prof.last();
    let required = r.abs() + e_d + 2;
    if precision < required {
        return Err(Error::PrecisionTooLow {
            given: precision,
            required,
        });
    }
    let f = lattice.field();
    let d = lattice.dim();
    let q = f.p() as u64;
    let digits: Vec<usize> = prof
        .exponents
        .iter()
        .map(|&e| (e - r - 1).clamp(0, precision) as usize)
        .collect();
    let total_digits: usize = digits.iter().sum();
    let points = q
        .checked_pow(total_digits as u32)
        .filter(|&n| n <= ENUMERATION_LIMIT)
        .ok_or_else(|| Error::TooLarge("too many covering test points".into()))?;

    let cols = prof.reduced_basis.columns();
    for idx in 0..points {
        let mut rest = idx;
        let mut t = vec![RatFunc::zero(f); d];
        for (j, &nd) in digits.iter().enumerate() {
            for k in 1..=nd {
                let c = (rest % q) as u32;
                rest /= q;
                if c == 0 {
                    continue;
                }
                let s = RatFunc::monomial(f, c, -(k as i64));
                for i in 0..d {
                    t[i] = &t[i] + &(&s * &cols[j][i]);
                }
            }
        }
        if !within(lattice, &t, r)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Is `t` within `q^r` of some lattice vector?
fn within(lattice: &LatticeBasis, t: &[RatFunc], r: i64) -> Result<bool> {
    let bound = AbsValue::Power(r);
    let nt = vec_norm(t)?;
    if nt <= bound {
        return Ok(true);
    }
    // any v with ‖t - v‖ <= q^r < ‖t‖ has ‖v‖ = ‖t‖
    let e = nt.exponent().expect("nonzero");
    let candidates = enumerate_in_box(lattice, &vec![e; t.len()])?;
    Ok(candidates.iter().any(|v| {
        let diff: Vec<RatFunc> = t.iter().zip(v).map(|(a, b)| a - b).collect();
        vec_norm(&diff).map(|n| n <= bound).unwrap_or(false)
    }))
}
