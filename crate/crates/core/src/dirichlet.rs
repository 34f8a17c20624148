//! Improved Dirichlet approximation: for `θ_1, ..., θ_n ∈ x^{-1}O` and
//! budgets `t_i >= 0`, nonzero `b_i` with `|b_i| <= q^{t_i}` and `a` with
//! `|Σ b_i θ_i - a| <= q^{-(Σ t_i + n)}`.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::poly::Poly;
use crate::polymat::{hankel_block, nullspace_fp, FpMatrix};
use crate::ratfunc::{AbsValue, LaurentTail, RatFunc};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletInstance {
    field: FieldSpec,
    thetas: Vec<LaurentTail>,
    ts: Vec<usize>,
}

impl DirichletInstance {
    pub fn new(field: FieldSpec, thetas: Vec<LaurentTail>, ts: Vec<usize>) -> Result<Self> {
        if thetas.is_empty() {
            return Err(Error::EmptyVector);
        }
        if thetas.len() != ts.len() {
            return Err(Error::DimensionMismatch {
                expected: thetas.len(),
                found: ts.len(),
            });
        }
        if let Some(t) = thetas.iter().find(|t| t.field() != field) {
            return Err(Error::FieldMismatch(field.p(), t.field().p()));
        }
        Ok(Self { field, thetas, ts })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn n(&self) -> usize {
        self.thetas.len()
    }

    pub fn thetas(&self) -> &[LaurentTail] {
        &self.thetas
    }

    pub fn ts(&self) -> &[usize] {
        &self.ts
    }

    /// `Σ t_i + n`: the guaranteed exponent of approximation.
    pub fn target(&self) -> usize {
        self.ts.iter().sum::<usize>() + self.n()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletSolution {
    pub bs: Vec<Poly>,
    pub a: Poly,
    /// `|Σ b_i θ_i - a|`.
    pub achieved: AbsValue,
}

impl fmt::Display for DirichletSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bs: Vec<String> = self.bs.iter().map(Poly::to_string).collect();
        write!(f, "b {} a {} err {}", bs.join(" "), self.a, self.achieved)
    }
}

/// The `(Σ t_i + n - 1) x (Σ t_i + n)` matrix whose row `s` maps the stacked
/// coefficients of `(b_1, ..., b_n)` to the coefficient of `x^{-s}` in
/// `Σ b_i θ_i`.
pub fn theta_matrix(inst: &DirichletInstance) -> Result<FpMatrix> {
    let m = inst.target() - 1;
    let mut blocks = inst
        .thetas
        .iter()
        .zip(&inst.ts)
        .map(|(th, &t)| hankel_block(th, 1, m, t + 1));
    let first = blocks.next().expect("n >= 1")?;
    blocks.try_fold(first, |acc, b| acc.hstack(&b?))
}

fn combination(inst: &DirichletInstance, bs: &[Poly]) -> RatFunc {
    inst.thetas
        .iter()
        .zip(bs)
        .fold(RatFunc::zero(inst.field), |acc, (th, b)| {
            &acc + &(&RatFunc::from_poly(b.clone()) * &th.to_ratfunc())
        })
}

pub fn dirichlet_solve(inst: &DirichletInstance) -> Result<DirichletSolution> {
    let theta = theta_matrix(inst)?;
    let kernel = nullspace_fp(&theta);
    let v = kernel.first().expect("more columns than rows");
    let mut bs = Vec::with_capacity(inst.n());
    let mut off = 0;
    for &t in &inst.ts {
        bs.push(Poly::from_coeffs(inst.field, v[off..off + t + 1].iter().copied()));
        off += t + 1;
    }
    let (a, frac) = combination(inst, &bs).split_integer_fractional();
    Ok(DirichletSolution {
        bs,
        a,
        achieved: frac.abs(),
    })
}

/// Recomputes both inequalities and the recorded error exactly.
pub fn dirichlet_verify(inst: &DirichletInstance, sol: &DirichletSolution) -> Result<bool> {
    if sol.bs.len() != inst.n() {
        return Err(Error::DimensionMismatch {
            expected: inst.n(),
            found: sol.bs.len(),
        });
    }
    if sol.bs.iter().all(Poly::is_zero) {
        return Ok(false);
    }
    let within_budget = sol
        .bs
        .iter()
        .zip(&inst.ts)
        .all(|(b, &t)| b.degree().is_none_or(|d| d <= t));
    let err = (&combination(inst, &sol.bs) - &RatFunc::from_poly(sol.a.clone())).abs();
    Ok(within_budget && err == sol.achieved && err <= AbsValue::Power(-(inst.target() as i64)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_ratfunc;

    fn tail(p: u32, s: &str) -> LaurentTail {
        parse_ratfunc(FieldSpec::new(p).unwrap(), s).unwrap().tail().unwrap()
    }

    #[test]
    fn single_target() {
        let f2 = FieldSpec::new(2).unwrap();
        let inst = DirichletInstance::new(f2, vec![tail(2, "1/x")], vec![0]).unwrap();
        let sol = dirichlet_solve(&inst).unwrap();
        assert_eq!(sol.bs, vec![Poly::one(f2)]);
        assert!(sol.a.is_zero());
        assert_eq!(sol.achieved, AbsValue::Power(-1));
        assert!(dirichlet_verify(&inst, &sol).unwrap());

        let inst = DirichletInstance::new(f2, vec![tail(2, "1/x+1/x^3")], vec![1]).unwrap();
        let sol = dirichlet_solve(&inst).unwrap();
        assert!(dirichlet_verify(&inst, &sol).unwrap());
        assert!(sol.achieved <= AbsValue::Power(-2));
        // x θ = 1 + 1/x^2
        let hand = DirichletSolution {
            bs: vec![Poly::x_pow(f2, 1)],
            a: Poly::one(f2),
            achieved: AbsValue::Power(-2),
        };
        assert!(dirichlet_verify(&inst, &hand).unwrap());
    }

    #[test]
    fn forged_solutions_fail() {
        let f2 = FieldSpec::new(2).unwrap();
        let inst = DirichletInstance::new(f2, vec![tail(2, "1/x+1/x^3")], vec![1]).unwrap();
        let zero = DirichletSolution {
            bs: vec![Poly::zero(f2)],
            a: Poly::zero(f2),
            achieved: AbsValue::Zero,
        };
        assert!(!dirichlet_verify(&inst, &zero).unwrap());
        let over = DirichletSolution {
            bs: vec![Poly::x_pow(f2, 2)],
            a: Poly::from_coeffs(f2, [0, 1]),
            achieved: AbsValue::Power(-1),
        };
        assert!(!dirichlet_verify(&inst, &over).unwrap());
        let short = DirichletSolution {
            bs: vec![],
            a: Poly::zero(f2),
            achieved: AbsValue::Zero,
        };
        assert!(matches!(dirichlet_verify(&inst, &short), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn two_targets_against_exhaustive_search() {
        let f3 = FieldSpec::new(3).unwrap();
        let inst = DirichletInstance::new(f3, vec![tail(3, "1/x+1/x^2"), tail(3, "1/x^2")], vec![1, 0]).unwrap();
        let th = theta_matrix(&inst).unwrap();
        assert_eq!((th.rows(), th.cols()), (2, 3));
        let sol = dirichlet_solve(&inst).unwrap();
        assert!(dirichlet_verify(&inst, &sol).unwrap());

        let mut good = Vec::new();
        for c0 in 0..3 {
            for c1 in 0..3 {
                for c2 in 0..3 {
                    if (c0, c1, c2) == (0, 0, 0) {
                        continue;
                    }
                    let bs = vec![Poly::from_coeffs(f3, [c0, c1]), Poly::constant(f3, c2)];
                    let frac = combination(&inst, &bs).fractional_part();
                    if frac.abs() <= AbsValue::Power(-3) {
                        good.push(bs);
                    }
                }
            }
        }
        assert!(!good.is_empty());
        assert!(good.contains(&sol.bs));
    }

    #[test]
    fn bad_shapes() {
        let f2 = FieldSpec::new(2).unwrap();
        assert!(DirichletInstance::new(f2, vec![], vec![]).is_err());
        assert!(DirichletInstance::new(f2, vec![tail(2, "1/x")], vec![0, 1]).is_err());
        assert!(DirichletInstance::new(f2, vec![tail(3, "1/x")], vec![0]).is_err());
    }
}
