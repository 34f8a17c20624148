//! Admissible boxes and the Mordell function `κ`.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{has_point_in_box, LatticeBasis};
use crate::orbit::{find_wellrounded_shift, WeightVector};

/// The box `{v : |v_i| <= q^{e_i}}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoxExponents(Vec<i64>);

impl BoxExponents {
    pub fn new(exponents: Vec<i64>) -> Self {
        Self(exponents)
    }

    /// `B(0, q^{-n}) x B(0, 1) x ... x B(0, 1)`.
    pub fn b0(d: usize, n: i64) -> Self {
        let mut e = vec![0; d];
        e[0] = -n;
        Self(e)
    }

    pub fn exponents(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `log_q Vol`.
    pub fn volume_exponent(&self) -> i64 {
        self.0.iter().sum()
    }
}

impl fmt::Display for BoxExponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Does the box meet the lattice only at `0`?
pub fn is_admissible(lattice: &LatticeBasis, b: &BoxExponents) -> Result<bool> {
    Ok(!has_point_in_box(lattice, b.exponents())?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KappaSearch {
    /// `None` when no box inside the window is admissible (the lattice has
    /// a vector shorter than `q^{-window}`).
    pub best_box: Option<BoxExponents>,
    /// No admissible box with volume exponent `>= -(d-1)` inside the window.
    pub bound_confirmed: bool,
}

impl KappaSearch {
    pub fn best_volume_exponent(&self) -> Option<i64> {
        self.best_box.as_ref().map(BoxExponents::volume_exponent)
    }
}

/// Exponent vectors in `[-w, w]^d` with the given sum, lexicographic.
fn level(d: usize, w: i64, sum: i64) -> Vec<Vec<i64>> {
    fn rec(d: usize, w: i64, sum: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        let left = (d - cur.len()) as i64;
        if left == 0 {
            if sum == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for e in -w..=w {
            let rest = sum - e;
            if rest < -w * (left - 1) || rest > w * (left - 1) {
                continue;
            }
            cur.push(e);
            rec(d, w, rest, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, w, sum, &mut Vec::with_capacity(d), &mut out);
    out
}

/// Largest admissible volume over boxes with exponents in
/// `[-window, window]`.
///
/// Levels `Σ e_i = d·window, d·window - 1, ...` are scanned downward; within
/// a level the lexicographically first admissible box wins.
pub fn kappa_search(lattice: &LatticeBasis, window: i64) -> Result<KappaSearch> {
    lattice.require_unimodular()?;
    let d = lattice.dim();
    if window < d as i64 {
        return Err(Error::BadDimensions(format!("window {window} below dimension {d}")));
    }
    let top = d as i64 * window;
    for sum in (-top..=top).rev() {
        let cands = level(d, window, sum);
        let flags = cands
            .par_iter()
            .map(|e| is_admissible(lattice, &BoxExponents(e.clone())))
            .collect::<Result<Vec<bool>>>()?;
        if let Some(i) = flags.iter().position(|&ok| ok) {
            return Ok(KappaSearch {
                best_box: Some(BoxExponents(cands[i].clone())),
                bound_confirmed: sum < -(d as i64 - 1),
            });
        }
    }
    Ok(KappaSearch {
        best_box: None,
        bound_confirmed: true,
    })
}

/// A shift `a` with `x^a Λ` well rounded and the admissible box
/// `(-1 - a_1, ..., -1 - a_d)` of volume `q^{-d}` it yields.
pub fn wr_box_certificate(lattice: &LatticeBasis, cap: u32) -> Result<(WeightVector, BoxExponents)> {
    lattice.require_unimodular()?;
    let a = find_wellrounded_shift(lattice, cap)?;
    let b = BoxExponents(a.entries().iter().map(|ai| -1 - ai).collect());
    Ok((a, b))
}
