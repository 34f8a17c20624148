//! End-to-end acceptance run: one line per criterion, nonzero exit if any
//! criterion fails.

mod common;

use std::time::Instant;

use common::{field, grid_inf, rng, tail};
use ffgeom::dirichlet::{dirichlet_solve, dirichlet_verify, DirichletInstance};
use ffgeom::lattice::{
    covering_oracle, covrad_body, covrad_cube, has_point_in_box, is_well_rounded, minima, verify_profile,
    ConvexBody, LatticeBasis,
};
use ffgeom::matrix::RatMatrix;
use ffgeom::minkmu::{mu_brute_oracle, mu_decision_with, mu_exact, MuInstance, MuStrategy};
use ffgeom::mordell::{is_admissible, kappa_search, wr_box_certificate};
use ffgeom::orbit::{find_wellrounded_shift, DEFAULT_CAP};
use ffgeom::random::{random_lattice, random_matrix, random_tail, random_unimodular};
use ffgeom::{AbsValue, FieldSpec, LaurentTail};
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fields() -> [FieldSpec; 2] {
    [field(2), field(3)]
}

/// A body `h O^d` whose volume exponent is exactly `vol`.
fn body_with_volume<R: Rng>(r: &mut R, f: FieldSpec, d: usize, max_deg: usize, vol: i64) -> ConvexBody {
    loop {
        let m = random_matrix(r, f, d, max_deg);
        let Ok(det) = m.det() else { continue };
        let Some(e) = det.abs().exponent() else { continue };
        let mut shift = vec![0; d];
        shift[0] = vol - e;
        let h = m.mul(&RatMatrix::x_diagonal(f, &shift)).unwrap();
        return ConvexBody::new(h).unwrap();
    }
}

fn c1_mu_examples() -> Outcome {
    let cases = [
        ("1/x+1/x^2+1/x^4", "1/x+1/x^2+1/x^3+1/x^4+1/x^5+1/x^6+1/x^7+1/x^8+1/x^9+1/x^10"),
        (
            "2/x^3+2/x^6+1/x^7+2/x^8+1/x^9+2/x^10",
            "1/x+1/x^2+1/x^3+1/x^5+2/x^6+1/x^9+2/x^10",
        ),
    ];
    let mut notes = Vec::new();
    let mut ok = true;
    for (i, (th, ph)) in cases.iter().enumerate() {
        let inst = MuInstance::dim3(tail(3, th), tail(3, ph)).unwrap();
        ensure(inst.h() == 10, || format!("example {} has h = {}", i + 1, inst.h()))?;
        let t0 = Instant::now();
        let r = mu_exact(&inst).map_err(|e| e.to_string())?;
        let pruned = t0.elapsed();
        let t_star = -r.value.exponent().unwrap();

        // the full path must agree at the failing threshold and the one below
        let t0 = Instant::now();
        let above = mu_decision_with(&inst, t_star + 1, MuStrategy::Full).map_err(|e| e.to_string())?;
        let at = mu_decision_with(&inst, t_star, MuStrategy::Full).map_err(|e| e.to_string())?;
        let full_time = t0.elapsed();
        ensure(at && !above, || format!("example {}: full path disagrees at T = {}", i + 1, t_star + 1))?;

        // the witness translate stays above q^-(T*+1) against every multiplier
        let w = r.witness.expect("failing threshold has a witness");
        let inf = grid_inf(&inst, &w.grid_alpha(), w.grid_beta().as_ref());
        ensure(inf > AbsValue::Power(-(t_star + 1)), || format!("example {}: witness inf {}", i + 1, inf))?;

        let verdict = if r.value == AbsValue::Power(-3) {
            "matches q^-3"
        } else {
            ok = false;
            "expected q^-3"
        };
        notes.push(format!(
            "ex{}: mu {} {verdict}, pruned {:.2}s, full {:.2}s, witness inf {}",
            i + 1,
            r.value,
            pruned.as_secs_f64(),
            full_time.as_secs_f64(),
            inf
        ));
    }
    if ok {
        Ok(notes.join("; "))
    } else {
        Err(notes.join("; "))
    }
}

fn c2_mu_baseline() -> Outcome {
    for f in fields() {
        for d in [2usize, 3] {
            let z = LaurentTail::zero(f);
            let inst = if d == 2 {
                MuInstance::dim2(z)
            } else {
                MuInstance::dim3(z.clone(), z).unwrap()
            };
            let want = AbsValue::Power(-(d as i64));
            let got = mu_exact(&inst).map_err(|e| e.to_string())?.value;
            let oracle = mu_brute_oracle(&inst, 3).map_err(|e| e.to_string())?.value;
            ensure(got == want && oracle == want, || {
                format!("q={} d={d}: mu {got}, oracle {oracle}", f.p())
            })?;
        }
    }
    Ok("4 cases".into())
}

fn c3_mink2() -> Outcome {
    let mut r = rng(3);
    for i in 0..50 {
        let f = fields()[i % 2];
        let inst = MuInstance::dim2(random_tail(&mut r, f, 6));
        let v = mu_exact(&inst).map_err(|e| e.to_string())?.value;
        ensure(v == AbsValue::Power(-2), || format!("theta {}: mu {v}", inst.theta()))?;
    }
    Ok("50 instances".into())
}

fn c4_oracle_equivalence() -> Outcome {
    let f2 = field(2);
    let mut count = 0;
    for a in 0..8u32 {
        for b in 0..8u32 {
            let t = |v: u32| LaurentTail::new(f2, (0..3).map(|k| (v >> k) & 1));
            let inst = MuInstance::dim3(t(a), t(b)).unwrap();
            let fast = mu_exact(&inst).map_err(|e| e.to_string())?.value;
            let slow = mu_brute_oracle(&inst, inst.h() + 2).map_err(|e| e.to_string())?.value;
            ensure(fast == slow, || {
                format!("theta {} phi {}: {fast} vs oracle {slow}", inst.theta(), inst.phi().unwrap())
            })?;
            count += 1;
        }
    }
    let f3 = field(3);
    let mut r = rng(4);
    for _ in 0..200 {
        let inst = MuInstance::dim3(random_tail(&mut r, f3, 4), random_tail(&mut r, f3, 4)).unwrap();
        let fast = mu_exact(&inst).map_err(|e| e.to_string())?.value;
        let slow = mu_brute_oracle(&inst, inst.h() + 1).map_err(|e| e.to_string())?.value;
        ensure(fast == slow, || {
            format!("theta {} phi {}: {fast} vs oracle {slow}", inst.theta(), inst.phi().unwrap())
        })?;
        count += 1;
    }
    Ok(format!("{count} instances, 0 mismatches"))
}

fn corpus() -> Vec<LatticeBasis> {
    let mut r = rng(5);
    (0..500)
        .map(|i| random_lattice(&mut r, fields()[i % 2], 2 + i % 3, 5))
        .collect()
}

fn c5_mink2nd(corpus: &[LatticeBasis]) -> Outcome {
    for l in corpus {
        let p = minima(l).map_err(|e| e.to_string())?;
        let det = l.basis().det().map_err(|e| e.to_string())?.abs().exponent().unwrap();
        let sum: i64 = p.exponents.iter().sum();
        ensure(sum == det, || format!("sum {sum} vs det exponent {det}"))?;
    }
    Ok(format!("{} lattices", corpus.len()))
}

fn c6_ugh(corpus: &[LatticeBasis]) -> Outcome {
    for l in corpus {
        let p = minima(l).map_err(|e| e.to_string())?;
        verify_profile(l, &p)?;
    }
    Ok(format!("{} lattices", corpus.len()))
}

fn c7_covrad() -> Outcome {
    let mut r = rng(7);
    let mut done = 0;
    let mut i = 0;
    while done < 50 {
        i += 1;
        let f = fields()[i % 2];
        let l = random_lattice(&mut r, f, 2 + i % 2, 2);
        let p = minima(&l).map_err(|e| e.to_string())?;
        if p.exponents.iter().any(|e| !(-3..=3).contains(e)) {
            continue;
        }
        let e = covrad_cube(&l).map_err(|e| e.to_string())?.exponent().unwrap();
        let prec = e.abs().max((e - 1).abs()) + p.last() + 2;
        let covers = covering_oracle(&l, e, prec).map_err(|e| e.to_string())?;
        let below = covering_oracle(&l, e - 1, prec).map_err(|e| e.to_string())?;
        ensure(covers && !below, || format!("covrad q^{e}: oracle {covers} / {below}"))?;
        done += 1;
    }
    Ok("50 lattices".into())
}

fn c8_minkowski_convex() -> Outcome {
    let mut r = rng(8);
    for i in 0..500 {
        let f = fields()[i % 2];
        let d = 2 + i % 2;
        let l = random_unimodular(&mut r, f, d, 3);
        let vol = r.gen_range(-(d as i64 - 1)..=2);
        let body = body_with_volume(&mut r, f, d, 3, vol);
        let pulled = body.pull_back(&l).map_err(|e| e.to_string())?;
        ensure(has_point_in_box(&pulled, &vec![0; d]).map_err(|e| e.to_string())?, || {
            "no lattice point in a body of volume >= q^-(d-1)".into()
        })?;
        // the point itself: a shortest vector of h^{-1} L, lying in L after h
        let v = minima(&pulled).map_err(|e| e.to_string())?.reduced_basis.column(0);
        let hv = body.shape().mul_vec(&v).map_err(|e| e.to_string())?;
        ensure(l.contains(&hv).unwrap() && body.contains(&hv).unwrap(), || "bad witness point".into())?;
    }
    Ok("500 pairs, 0 counterexamples".into())
}

fn c9_inf_covrad() -> Outcome {
    let mut r = rng(9);
    for i in 0..50 {
        let f = fields()[i % 2];
        let d = 2 + i % 2;
        let body = body_with_volume(&mut r, f, d, 3, 0);
        let lat = LatticeBasis::new(body.shape().clone()).unwrap();
        let c = covrad_body(&lat, &body).map_err(|e| e.to_string())?;
        ensure(c == AbsValue::Power(-1), || format!("covrad(hR^d, C) = {c}"))?;
    }
    for i in 0..50 {
        let f = fields()[i % 2];
        let d = 2 + i % 2;
        let body = body_with_volume(&mut r, f, d, 3, 0);
        let l = random_unimodular(&mut r, f, d, 3);
        let c = covrad_body(&l, &body).map_err(|e| e.to_string())?;
        ensure(c >= AbsValue::Power(-1), || format!("covrad(L, C) = {c}"))?;
    }
    Ok("50 + 50 cases".into())
}

fn c10_wellround() -> Outcome {
    let mut r = rng(10);
    let mut max_norm = 0;
    for i in 0..100 {
        let l = random_unimodular(&mut r, fields()[i % 2], 2 + i % 2, 4);
        let a = find_wellrounded_shift(&l, DEFAULT_CAP).map_err(|e| e.to_string())?;
        let shifted = l.x_scaled(a.entries()).unwrap();
        ensure(is_well_rounded(&shifted).unwrap(), || format!("shift {a} not well rounded"))?;
        let p = minima(&shifted).unwrap();
        verify_profile(&shifted, &p)?;
        max_norm = max_norm.max(a.max_norm());
    }
    Ok(format!("100 lattices, max |a| = {max_norm}"))
}

fn c11_mordell() -> Outcome {
    let mut r = rng(11);
    for i in 0..20 {
        let d = 2 + i % 2;
        let l = random_unimodular(&mut r, fields()[i % 2], d, 3);
        let k = kappa_search(&l, 6).map_err(|e| e.to_string())?;
        let best = k.best_volume_exponent();
        ensure(best == Some(-(d as i64)) && k.bound_confirmed, || format!("kappa exponent {best:?}"))?;
        let (a, b) = wr_box_certificate(&l, DEFAULT_CAP).map_err(|e| e.to_string())?;
        ensure(is_admissible(&l, &b).unwrap(), || format!("certificate box {b} for shift {a}"))?;
    }
    Ok("20 lattices".into())
}

fn c12_dirichlet() -> Outcome {
    let mut r = rng(12);
    for i in 0..100 {
        let f = fields()[i % 2];
        let n = r.gen_range(1..=3);
        let thetas = (0..n).map(|_| random_tail(&mut r, f, 12)).collect();
        let ts = (0..n).map(|_| r.gen_range(0..=5)).collect();
        let inst = DirichletInstance::new(f, thetas, ts).unwrap();
        let sol = dirichlet_solve(&inst).map_err(|e| e.to_string())?;
        ensure(dirichlet_verify(&inst, &sol).unwrap(), || format!("{inst:?}: {sol}"))?;
    }
    Ok("100 instances".into())
}

fn main() {
    let corpus = corpus();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("mu examples, q = 3", Box::new(c1_mu_examples)),
        ("mu(R^d) = q^-d", Box::new(c2_mu_baseline)),
        ("mu = q^-2 in dimension 2", Box::new(c3_mink2)),
        ("mu_exact = brute-force oracle", Box::new(c4_oracle_equivalence)),
        ("sum of minima = det exponent", Box::new(|| c5_mink2nd(&corpus))),
        ("u g h = diag(x^lambda)", Box::new(|| c6_ugh(&corpus))),
        ("covering radius vs oracle", Box::new(c7_covrad)),
        ("bodies of volume >= q^-(d-1) meet L", Box::new(c8_minkowski_convex)),
        ("covrad of volume-one bodies", Box::new(c9_inf_covrad)),
        ("well-rounded shifts, cap 10", Box::new(c10_wellround)),
        ("kappa = q^-d, window 6", Box::new(c11_mordell)),
        ("improved Dirichlet", Box::new(c12_dirichlet)),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let res = std::panic::catch_unwind(std::panic::AssertUnwindSafe(f))
            .unwrap_or_else(|_| Err("panicked".into()));
        let secs = t0.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({detail}) [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
