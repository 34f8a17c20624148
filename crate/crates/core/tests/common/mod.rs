#![allow(dead_code)]

use ffgeom::minkmu::MuInstance;
use ffgeom::poly::Poly;
use ffgeom::{AbsValue, FieldSpec, LaurentTail, RatFunc};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn field(p: u32) -> FieldSpec {
    FieldSpec::new(p).unwrap()
}

pub fn parse(p: u32, s: &str) -> RatFunc {
    ffgeom::parse::parse_ratfunc(field(p), s).unwrap()
}

pub fn tail(p: u32, s: &str) -> LaurentTail {
    parse(p, s).tail().unwrap()
}

/// All nonzero polynomials of degree below `h`.
pub fn multipliers(f: FieldSpec, h: usize) -> Vec<Poly> {
    let q = f.p() as u64;
    (1..q.pow(h as u32))
        .map(|mut idx| {
            Poly::from_coeffs(
                f,
                (0..h).map(|_| {
                    let c = (idx % q) as u32;
                    idx /= q;
                    c
                }),
            )
        })
        .collect()
}

/// `min(|α||β| q^{-1}, min_N |N| |<Nθ - α>| |<Nφ - β>|)` for one grid
/// translate, straight from rational-function arithmetic.
pub fn grid_inf(inst: &MuInstance, alpha: &RatFunc, beta: Option<&RatFunc>) -> AbsValue {
    let f = inst.field();
    let theta = inst.theta().to_ratfunc();
    let phi = inst.phi().map(LaurentTail::to_ratfunc);
    let gamma = AbsValue::Power(-1);
    let mut best = alpha.abs() * beta.map_or(AbsValue::ONE, RatFunc::abs) * gamma;
    for n in multipliers(f, inst.h()) {
        let n = RatFunc::from_poly(n);
        let mut v = n.abs() * (&(&n * &theta) - alpha).fractional_part().abs();
        if let (Some(p), Some(b)) = (&phi, beta) {
            v = v * (&(&n * p) - b).fractional_part().abs();
        }
        if v < best {
            best = v;
        }
    }
    best
}
