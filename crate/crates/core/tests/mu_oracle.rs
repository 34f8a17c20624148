//! The decision procedure against direct evaluation of the sup-inf, at tail
//! lengths where the digit walk branches below its task prefixes.

mod common;

use common::{field, grid_inf, rng};
use ffgeom::minkmu::{mu_brute_oracle, mu_exact, mu_exact_with, MuInstance, MuStrategy};
use ffgeom::random::random_tail;
use ffgeom::{AbsValue, LaurentTail};
use rand::Rng;

fn full_length_tail<R: Rng>(r: &mut R, p: u32, h: usize) -> LaurentTail {
    let mut c: Vec<u32> = (0..h).map(|_| r.gen_range(0..p)).collect();
    c[h - 1] = r.gen_range(1..p);
    LaurentTail::new(field(p), c)
}

#[test]
fn deep_binary_instances() {
    let mut r = rng(21);
    for h in [5usize, 6, 7] {
        for _ in 0..4 {
            let inst = MuInstance::dim3(full_length_tail(&mut r, 2, h), random_tail(&mut r, field(2), h)).unwrap();
            let fast = mu_exact(&inst).unwrap();
            let full = mu_exact_with(&inst, MuStrategy::Full).unwrap();
            let slow = mu_brute_oracle(&inst, h + 1).unwrap();
            assert_eq!(fast.value, slow.value, "{inst:?}");
            assert_eq!(full.value, slow.value, "{inst:?}");
        }
    }
}

#[test]
fn deep_ternary_instances() {
    let mut r = rng(22);
    for _ in 0..3 {
        let inst = MuInstance::dim3(full_length_tail(&mut r, 3, 5), random_tail(&mut r, field(3), 5)).unwrap();
        let fast = mu_exact(&inst).unwrap();
        assert_eq!(fast.value, mu_brute_oracle(&inst, 6).unwrap().value, "{inst:?}");
    }
}

#[test]
fn witnesses_survive_direct_evaluation() {
    let mut r = rng(23);
    for i in 0..20 {
        let p = [2, 3][i % 2];
        let inst = MuInstance::dim3(random_tail(&mut r, field(p), 6), random_tail(&mut r, field(p), 6)).unwrap();
        let res = mu_exact(&inst).unwrap();
        let w = res.witness.unwrap();
        let inf = grid_inf(&inst, &w.grid_alpha(), w.grid_beta().as_ref());
        assert_eq!(inf, res.value, "{inst:?}");
    }
}

#[test]
fn dimension_two_oracle() {
    let mut r = rng(24);
    for i in 0..30 {
        let p = [2, 3][i % 2];
        let inst = MuInstance::dim2(random_tail(&mut r, field(p), 6));
        assert_eq!(mu_exact(&inst).unwrap().value, AbsValue::Power(-2));
        assert_eq!(mu_brute_oracle(&inst, inst.h() + 2).unwrap().value, AbsValue::Power(-2));
    }
}
