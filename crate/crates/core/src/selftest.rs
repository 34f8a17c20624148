//! A quick invariant suite runnable from the command line.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dirichlet::{dirichlet_solve, dirichlet_verify, DirichletInstance};
use crate::field::FieldSpec;
use crate::lattice::{covering_oracle, covrad_cube, is_well_rounded, minima, verify_profile};
use crate::minkmu::{mu_brute_oracle, mu_exact, MuInstance};
use crate::mordell::{is_admissible, wr_box_certificate};
use crate::orbit::{find_wellrounded_shift, DEFAULT_CAP};
use crate::random::{random_lattice, random_tail, random_unimodular};
use crate::ratfunc::{AbsValue, LaurentTail};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub cases: usize,
}

fn check(name: &'static str, cases: usize, mut f: impl FnMut(usize) -> bool) -> Check {
    let passed = (0..cases).all(&mut f);
    Check { name, passed, cases }
}

/// Runs every check with a fixed seed; the result does not depend on timing
/// or thread count.
pub fn run_selftest(seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f2 = FieldSpec::new(2).expect("prime");
    let f3 = FieldSpec::new(3).expect("prime");
    let fields = [f2, f3];
    let mut out = Vec::new();

    out.push(check("minima_profile", 40, |i| {
        let l = random_lattice(&mut rng, fields[i % 2], 2 + i % 3, 3);
        minima(&l).map(|p| verify_profile(&l, &p).is_ok()).unwrap_or(false)
    }));
    out.push(check("covrad_vs_oracle", 6, |i| {
        let l = random_lattice(&mut rng, f2, 2, 1);
        let r = covrad_cube(&l).ok().and_then(AbsValue::exponent).unwrap_or(0);
        let e_d = minima(&l).map(|p| p.last()).unwrap_or(0);
        let prec = r.abs().max((r - 1).abs()) + e_d + 2 + (i as i64 % 2);
        covering_oracle(&l, r, prec) == Ok(true) && covering_oracle(&l, r - 1, prec) == Ok(false)
    }));
    out.push(check("wellround_shift", 10, |i| {
        let l = random_unimodular(&mut rng, fields[i % 2], 2 + i % 2, 2);
        find_wellrounded_shift(&l, DEFAULT_CAP)
            .and_then(|a| is_well_rounded(&l.x_scaled(a.entries())?))
            .unwrap_or(false)
    }));
    out.push(check("wr_box_admissible", 6, |i| {
        let l = random_unimodular(&mut rng, f3, 2 + i % 2, 2);
        wr_box_certificate(&l, DEFAULT_CAP)
            .and_then(|(_, b)| is_admissible(&l, &b))
            .unwrap_or(false)
    }));
    out.push(check("mu_standard", 4, |i| {
        let f = fields[i % 2];
        let inst = if i < 2 {
            MuInstance::dim2(LaurentTail::zero(f))
        } else {
            MuInstance::dim3(LaurentTail::zero(f), LaurentTail::zero(f)).expect("same field")
        };
        mu_exact(&inst).map(|r| r.value) == Ok(AbsValue::Power(-(inst.d() as i64)))
    }));
    out.push(check("mu_vs_oracle", 6, |i| {
        let f = fields[i % 2];
        let inst = MuInstance::dim3(random_tail(&mut rng, f, 2), random_tail(&mut rng, f, 2)).expect("same field");
        let a = mu_exact(&inst).map(|r| r.value);
        let b = mu_brute_oracle(&inst, inst.h() + 1).map(|r| r.value);
        a.is_ok() && a == b
    }));
    out.push(check("dirichlet", 20, |i| {
        let f = fields[i % 2];
        let n = 1 + i % 3;
        let thetas = (0..n).map(|_| random_tail(&mut rng, f, 8)).collect();
        let ts = (0..n).map(|k| (i + k) % 4).collect();
        DirichletInstance::new(f, thetas, ts)
            .and_then(|inst| dirichlet_verify(&inst, &dirichlet_solve(&inst)?))
            .unwrap_or(false)
    }));
    out
}
