//! Rational functions in `K = F_p(x)` and the valuation `|f| = q^{deg num - deg den}`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::poly::Poly;

/// A value of the absolute value on `K`: either `0` or `q^e`.
///
/// The derived order puts `Zero` below every `Power`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AbsValue {
    Zero,
    Power(i64),
}

impl AbsValue {
    pub const ONE: AbsValue = AbsValue::Power(0);

    pub fn exponent(self) -> Option<i64> {
        match self {
            AbsValue::Zero => None,
            AbsValue::Power(e) => Some(e),
        }
    }

    pub fn is_zero(self) -> bool {
        self == AbsValue::Zero
    }

    /// Multiplies by `q^k`.
    pub fn scale(self, k: i64) -> AbsValue {
        match self {
            AbsValue::Zero => AbsValue::Zero,
            AbsValue::Power(e) => AbsValue::Power(e + k),
        }
    }
}

impl Mul for AbsValue {
    type Output = AbsValue;
    fn mul(self, rhs: AbsValue) -> AbsValue {
        match (self, rhs) {
            (AbsValue::Power(a), AbsValue::Power(b)) => AbsValue::Power(a + b),
            _ => AbsValue::Zero,
        }
    }
}

impl fmt::Display for AbsValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbsValue::Zero => f.write_str("0"),
            AbsValue::Power(e) => write!(f, "q^{e}"),
        }
    }
}

/// An element of `F_p(x)` in lowest terms with a monic denominator; zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        let field = num.field();
        if num.is_zero() {
            return Self::zero(field);
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        if !den.is_monic() {
            let c = field.inv(den.lead());
            num = num.scale(c);
            den = den.scale(c);
        }
        Self { num, den }
    }

    pub fn zero(field: FieldSpec) -> Self {
        Self {
            num: Poly::zero(field),
            den: Poly::one(field),
        }
    }

    pub fn one(field: FieldSpec) -> Self {
        Self::from_poly(Poly::one(field))
    }

    pub fn constant(field: FieldSpec, c: u32) -> Self {
        Self::from_poly(Poly::constant(field, c))
    }

    pub fn from_poly(num: Poly) -> Self {
        let den = Poly::one(num.field());
        Self { num, den }
    }

    /// `c * x^k` for any integer `k`.
    pub fn monomial(field: FieldSpec, c: u32, k: i64) -> Self {
        if k >= 0 {
            Self::from_poly(Poly::monomial(field, c, k as usize))
        } else {
            Self::normalized(Poly::constant(field, c), Poly::x_pow(field, (-k) as usize))
        }
    }

    pub fn x_pow(field: FieldSpec, k: i64) -> Self {
        Self::monomial(field, 1, k)
    }

    #[inline]
    pub fn field(&self) -> FieldSpec {
        self.num.field()
    }

    #[inline]
    pub fn num(&self) -> &Poly {
        &self.num
    }

    #[inline]
    pub fn den(&self) -> &Poly {
        &self.den
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn abs(&self) -> AbsValue {
        match self.num.degree() {
            None => AbsValue::Zero,
            Some(n) => AbsValue::Power(n as i64 - self.den.degree().unwrap() as i64),
        }
    }

    /// `|f| <= 1`, i.e. membership in the valuation ring O.
    pub fn in_o(&self) -> bool {
        self.abs() <= AbsValue::ONE
    }

    /// `|f| = 1`, i.e. membership in the unit group U.
    pub fn is_unit(&self) -> bool {
        self.abs() == AbsValue::ONE
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &RatFunc) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: i64) -> Self {
        self * &RatFunc::x_pow(self.field(), k)
    }

    pub fn scale(&self, c: u32) -> Self {
        Self::normalized(self.num.scale(c), self.den.clone())
    }

    /// `(rho(f), pi(f))` with `rho = log_q |f|` and `f = x^rho * pi(f)`.
    pub fn rho_pi(&self) -> Result<(i64, RatFunc)> {
        match self.abs() {
            AbsValue::Zero => Err(Error::ZeroInput),
            AbsValue::Power(e) => Ok((e, self.shift(-e))),
        }
    }

    /// Splits `f = [f] + <f>` into its polynomial part and its fractional part
    /// (`|<f>| < 1`).
    pub fn split_integer_fractional(&self) -> (Poly, RatFunc) {
        let (q, r) = self.num.div_rem(&self.den);
        (q, Self::normalized(r, self.den.clone()))
    }

    pub fn integer_part(&self) -> Poly {
        self.num.div_rem(&self.den).0
    }

    pub fn fractional_part(&self) -> RatFunc {
        self.split_integer_fractional().1
    }

    /// The coefficients of `x^{-1}, ..., x^{-n}` in the Laurent expansion of `<f>`.
    pub fn fractional_digits(&self, n: usize) -> Vec<u32> {
        let f = self.field();
        let den = &self.den;
        let dd = den.degree().unwrap();
        let inv_lead = f.inv(den.lead());
        let mut r = self.num.rem(den);
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            r = r.shift(1);
            let c = if r.degree() == Some(dd) {
                f.mul(r.lead(), inv_lead)
            } else {
                0
            };
            if c != 0 {
                r = &r - &den.scale(c);
            }
            out.push(c);
        }
        out
    }

    /// The finite Laurent tail of `<f>`; requires the reduced denominator of
    /// `<f>` to be a power of `x`.
    pub fn tail(&self) -> Result<LaurentTail> {
        let frac = self.fractional_part();
        if frac.is_zero() {
            return Ok(LaurentTail::zero(self.field()));
        }
        if !frac.den.is_monomial() {
            return Err(Error::NotFiniteTail);
        }
        let h = frac.den.degree().unwrap();
        // frac = num / x^h, deg num < h: a_j is the coefficient of x^{h-j}
        let coeffs = (1..=h).map(|j| frac.num.coeff(h - j)).collect::<Vec<_>>();
        Ok(LaurentTail::new(self.field(), coeffs))
    }
}

impl Add<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::normalized(&self.num + &rhs.num, self.den.clone());
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunc::normalized(num, &self.den * &rhs.den)
    }
}

impl Sub<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero(self.field());
        }
        RatFunc::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: &RatFunc) -> RatFunc {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |p: &Poly| p.coeffs().iter().filter(|&&c| c != 0).count() > 1;
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if wrap(&self.num) {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        if wrap(&self.den) {
            write!(f, "/({})", self.den)
        } else {
            write!(f, "/{}", self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc[{}]({})", self.field().p(), self)
    }
}

/// A finite Laurent tail `a_1 x^{-1} + ... + a_h x^{-h}`.
///
/// Trailing zeros are trimmed, so `len()` is `denom` of the element.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentTail {
    field: FieldSpec,
    coeffs: Vec<u32>,
}

impl LaurentTail {
    pub fn new(field: FieldSpec, coeffs: impl IntoIterator<Item = u32>) -> Self {
        let mut coeffs: Vec<u32> = coeffs.into_iter().map(|c| c % field.p()).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { field, coeffs }
    }

    pub fn zero(field: FieldSpec) -> Self {
        Self {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// `(a_1, ..., a_h)`.
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// Tail length `h` (the `denom`).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `a_j` for 1-based `j`; zero outside `1..=h`.
    pub fn coeff(&self, j: usize) -> u32 {
        if j == 0 {
            return 0;
        }
        self.coeffs.get(j - 1).copied().unwrap_or(0)
    }

    /// The first `n` coefficients, zero padded.
    pub fn padded(&self, n: usize) -> Vec<u32> {
        (1..=n).map(|j| self.coeff(j)).collect()
    }

    pub fn abs(&self) -> AbsValue {
        match self.coeffs.iter().position(|&c| c != 0) {
            None => AbsValue::Zero,
            Some(i) => AbsValue::Power(-(i as i64 + 1)),
        }
    }

    pub fn to_ratfunc(&self) -> RatFunc {
        let f = self.field;
        let h = self.coeffs.len();
        if h == 0 {
            return RatFunc::zero(f);
        }
        let num = Poly::from_coeffs(f, (0..h).map(|k| self.coeff(h - k)));
        RatFunc::new(num, Poly::x_pow(f, h)).expect("x^h is nonzero")
    }
}

impl fmt::Display for LaurentTail {
    /// Prints as a sum of `c/x^j` terms in the ratfunc grammar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str("+")?;
            }
            first = false;
            match i + 1 {
                1 => write!(f, "{c}/x")?,
                j => write!(f, "{c}/x^{j}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentTail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentTail[{}]{:?}", self.field.p(), self.coeffs)
    }
}

/// `max_i |v_i|`.
pub fn vec_norm(v: &[RatFunc]) -> Result<AbsValue> {
    v.iter().map(RatFunc::abs).max().ok_or(Error::EmptyVector)
}

/// `prod_i |v_i|`.
pub fn product_norm(v: &[RatFunc]) -> Result<AbsValue> {
    if v.is_empty() {
        return Err(Error::EmptyVector);
    }
    Ok(v.iter().map(RatFunc::abs).fold(AbsValue::ONE, |a, b| a * b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    fn poly(p: u32, c: &[u32]) -> Poly {
        Poly::from_coeffs(f(p), c.iter().copied())
    }

    fn rat(p: u32, n: &[u32], d: &[u32]) -> RatFunc {
        RatFunc::new(poly(p, n), poly(p, d)).unwrap()
    }

    #[test]
    fn abs_examples() {
        assert_eq!(rat(3, &[1, 0, 0, 1], &[1]).abs(), AbsValue::Power(3));
        assert_eq!(RatFunc::zero(f(3)).abs(), AbsValue::Zero);
        assert_eq!(rat(3, &[0, 0, 1], &[1, 0, 0, 1]).abs(), AbsValue::Power(-1));
    }

    #[test]
    fn abs_order() {
        assert!(AbsValue::Zero < AbsValue::Power(-100));
        assert!(AbsValue::Power(-1) < AbsValue::Power(2));
        assert_eq!(AbsValue::Zero * AbsValue::Power(3), AbsValue::Zero);
        assert_eq!(AbsValue::Power(-1) * AbsValue::Power(3), AbsValue::Power(2));
    }

    #[test]
    fn canonical_form() {
        // (2x+2)/(2x^2+2x) = 1/x over F_3
        let r = rat(3, &[2, 2], &[0, 2, 2]);
        assert_eq!(r.num(), &poly(3, &[1]));
        assert_eq!(r.den(), &poly(3, &[0, 1]));
        assert!(RatFunc::new(poly(3, &[1]), Poly::zero(f(3))).is_err());
    }

    #[test]
    fn rho_pi_examples() {
        let fld = f(3);
        assert_eq!(RatFunc::x_pow(fld, 2).rho_pi().unwrap(), (2, RatFunc::one(fld)));
        let g = rat(3, &[1, 1], &[0, 1]);
        assert_eq!(g.rho_pi().unwrap(), (0, g.clone()));
        assert_eq!(RatFunc::x_pow(fld, -3).rho_pi().unwrap(), (-3, RatFunc::one(fld)));
        assert_eq!(RatFunc::zero(fld).rho_pi(), Err(Error::ZeroInput));
    }

    #[test]
    fn split_examples() {
        let fld = f(3);
        let (i, fr) = rat(3, &[1, 0, 1], &[0, 1]).split_integer_fractional();
        assert_eq!(i, poly(3, &[0, 1]));
        assert_eq!(fr, RatFunc::x_pow(fld, -1));
        let (i, fr) = RatFunc::x_pow(fld, 3).split_integer_fractional();
        assert_eq!(i, Poly::x_pow(fld, 3));
        assert!(fr.is_zero());
        let g = rat(3, &[1], &[1, 1]);
        let (i, fr) = g.split_integer_fractional();
        assert!(i.is_zero());
        assert_eq!(fr, g);
    }

    #[test]
    fn tail_examples() {
        let fld = f(3);
        let theta = &(&RatFunc::x_pow(fld, -1) + &RatFunc::x_pow(fld, -2)) + &RatFunc::x_pow(fld, -4);
        let t = theta.tail().unwrap();
        assert_eq!(t.coeffs(), &[1, 1, 0, 1]);
        assert_eq!(t.len(), 4);
        assert_eq!(t.to_ratfunc(), theta);
        assert!(RatFunc::x_pow(fld, 2).tail().unwrap().is_empty());
        assert_eq!(rat(3, &[1], &[1, 1]).tail(), Err(Error::NotFiniteTail));
    }

    #[test]
    fn fractional_digits_match_tail() {
        let fld = f(3);
        let theta = LaurentTail::new(fld, [2, 0, 1, 1]).to_ratfunc();
        let shifted = &theta + &RatFunc::x_pow(fld, 3);
        assert_eq!(shifted.fractional_digits(6), vec![2, 0, 1, 1, 0, 0]);
        // 1/(x+1) = x^-1 - x^-2 + x^-3 - ...
        assert_eq!(rat(3, &[1], &[1, 1]).fractional_digits(4), vec![1, 2, 1, 2]);
    }

    #[test]
    fn norms() {
        let fld = f(3);
        let x = RatFunc::x_pow(fld, 1);
        let xi = RatFunc::x_pow(fld, -1);
        let z = RatFunc::zero(fld);
        assert_eq!(vec_norm(&[x.clone(), xi.clone()]), Ok(AbsValue::Power(1)));
        assert_eq!(vec_norm(&[z.clone(), z.clone()]), Ok(AbsValue::Zero));
        let xi2 = RatFunc::x_pow(fld, -2);
        assert_eq!(vec_norm(&[xi2.clone(), xi2.clone()]), Ok(AbsValue::Power(-2)));
        assert_eq!(vec_norm(&[]), Err(Error::EmptyVector));
        assert_eq!(product_norm(&[xi.clone(), xi.clone(), xi.clone()]), Ok(AbsValue::Power(-3)));
        assert_eq!(product_norm(&[x.clone(), z]), Ok(AbsValue::Zero));
        assert_eq!(product_norm(&[RatFunc::x_pow(fld, 2), xi]), Ok(AbsValue::Power(1)));
        assert_eq!(product_norm(&[]), Err(Error::EmptyVector));
    }
}
