//! Dense univariate polynomials over F_p.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::field::FieldSpec;

/// A polynomial in `F_p[x]`, coefficients stored lowest degree first.
///
/// Always canonical: no trailing zero coefficient, and the zero polynomial is
/// the empty sequence. `degree()` of zero is `None`, which orders below every
/// finite degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: FieldSpec,
    coeffs: Vec<u32>,
}

impl Poly {
    pub fn zero(field: FieldSpec) -> Self {
        Self {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: FieldSpec) -> Self {
        Self::constant(field, 1)
    }

    pub fn constant(field: FieldSpec, c: u32) -> Self {
        Self::monomial(field, c, 0)
    }

    /// `c * x^k`
    pub fn monomial(field: FieldSpec, c: u32, k: usize) -> Self {
        let c = c % field.p();
        if c == 0 {
            return Self::zero(field);
        }
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c;
        Self { field, coeffs }
    }

    pub fn x_pow(field: FieldSpec, k: usize) -> Self {
        Self::monomial(field, 1, k)
    }

    /// Builds a polynomial from coefficients (lowest degree first), reducing
    /// each mod p and trimming.
    pub fn from_coeffs(field: FieldSpec, coeffs: impl IntoIterator<Item = u32>) -> Self {
        let coeffs = coeffs.into_iter().map(|c| c % field.p()).collect();
        let mut p = Self { field, coeffs };
        p.trim();
        p
    }

    pub fn from_signed(field: FieldSpec, coeffs: &[i64]) -> Self {
        Self::from_coeffs(field, coeffs.iter().map(|&c| field.reduce(c)))
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    #[inline]
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    #[inline]
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    #[inline]
    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn lead(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Lowest index with a nonzero coefficient, i.e. the largest k with x^k | self.
    pub fn x_valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    pub fn scale(&self, c: u32) -> Self {
        let f = self.field;
        Self::from_coeffs(f, self.coeffs.iter().map(|&a| f.mul(a, c)))
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0; k];
        coeffs.extend_from_slice(&self.coeffs);
        Self {
            field: self.field,
            coeffs,
        }
    }

    /// Divides by `x^k`, discarding the low coefficients.
    pub fn shift_down(&self, k: usize) -> Self {
        Self::from_coeffs(self.field, self.coeffs.iter().skip(k).copied())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.field.inv(self.lead()))
    }

    /// Euclidean division: returns `(q, r)` with `self = q * div + r`, `deg r < deg div`.
    pub fn div_rem(&self, div: &Poly) -> (Poly, Poly) {
        assert!(!div.is_zero(), "polynomial division by zero");
        debug_assert_eq!(self.field, div.field);
        let f = self.field;
        let dd = div.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Poly::zero(f), self.clone());
        }
        let inv_lead = f.inv(div.lead());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u32; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = f.mul(rem[i + dd], inv_lead);
            if c == 0 {
                continue;
            }
            quot[i] = c;
            for (j, &dj) in div.coeffs.iter().enumerate() {
                rem[i + j] = f.sub(rem[i + j], f.mul(c, dj));
            }
        }
        rem.truncate(dd);
        (Poly::from_coeffs(f, quot), Poly::from_coeffs(f, rem))
    }

    pub fn rem(&self, div: &Poly) -> Poly {
        self.div_rem(div).1
    }

    /// Monic greatest common divisor (zero iff both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Is this `c * x^k` for some nonzero constant `c`?
    pub fn is_monomial(&self) -> bool {
        !self.is_zero() && self.coeffs.iter().filter(|&&c| c != 0).count() == 1
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        debug_assert_eq!(self.field, rhs.field);
        let f = self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs(f, (0..n).map(|i| f.add(self.coeff(i), rhs.coeff(i))))
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        debug_assert_eq!(self.field, rhs.field);
        let f = self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs(f, (0..n).map(|i| f.sub(self.coeff(i), rhs.coeff(i))))
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        debug_assert_eq!(self.field, rhs.field);
        let f = self.field;
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(f);
        }
        let p = f.p() as u64;
        let mut acc = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u64 * b as u64) % p;
            }
        }
        Poly::from_coeffs(f, acc.into_iter().map(|c| c as u32))
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = self.field;
        Poly::from_coeffs(f, self.coeffs.iter().map(|&c| f.neg(c)))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    /// Prints in the grammar accepted by [`crate::parse`]: highest degree first,
    /// coefficients in `0..p`, e.g. `2*x^3+x+1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str("+")?;
            }
            first = false;
            match (c, k) {
                (_, 0) => write!(f, "{c}")?,
                (1, 1) => f.write_str("x")?,
                (1, _) => write!(f, "x^{k}")?,
                (_, 1) => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.field.p(), self)
    }
}
