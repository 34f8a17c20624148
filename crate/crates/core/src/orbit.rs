//! Weighted norms `‖v‖_a = ‖x^a v‖`, Minkowski flags, and the search for a
//! diagonal shift `a ∈ Z_0^d` that makes `x^a Λ` well rounded.

use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::{minima, wedge, LatticeBasis, MinimaProfile};
use crate::ratfunc::{AbsValue, RatFunc};

pub const DEFAULT_CAP: u32 = 10;

/// An integer weight vector with zero sum.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightVector(Vec<i64>);

impl WeightVector {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.iter().sum::<i64>() != 0 {
            return Err(Error::BadWeight);
        }
        Ok(Self(entries))
    }

    pub fn zero(d: usize) -> Self {
        Self(vec![0; d])
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn max_norm(&self) -> i64 {
        self.0.iter().map(|a| a.abs()).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

/// `‖v‖_a = max_i q^{a_i} |v_i|`.
pub fn weighted_norm(v: &[RatFunc], a: &WeightVector) -> AbsValue {
    v.iter()
        .zip(a.entries())
        .map(|(c, &w)| c.abs().scale(w))
        .max()
        .unwrap_or(AbsValue::Zero)
}

fn check_weight(lattice: &LatticeBasis, a: &WeightVector) -> Result<()> {
    lattice.require_unimodular()?;
    if a.entries().len() != lattice.dim() {
        return Err(Error::DimensionMismatch {
            expected: lattice.dim(),
            found: a.entries().len(),
        });
    }
    Ok(())
}

/// Successive minima of `Λ` under `‖·‖_a`, i.e. the minima of `x^a Λ`.
pub fn weighted_minima(lattice: &LatticeBasis, a: &WeightVector) -> Result<MinimaProfile> {
    check_weight(lattice, a)?;
    minima(&lattice.x_scaled(a.entries())?)
}

/// The Minkowski flag of `x^a Λ`: the subspaces spanned by the first `k`
/// reduced basis vectors, for each `k` where the minima jump.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinkowskiFlag {
    /// Minima exponents of `x^a Λ`.
    pub exponents: Vec<i64>,
    /// Dimensions `k < d` after which `e_k < e_{k+1}`.
    pub breaks: Vec<usize>,
    /// `‖c_1 ∧ ... ∧ c_k‖` for `k = 1..d-1` over the reduced basis of `x^a Λ`.
    pub prefix_wedge_norms: Vec<AbsValue>,
}

impl MinkowskiFlag {
    pub fn is_trivial(&self) -> bool {
        self.breaks.is_empty()
    }

    /// Largest wedge norm over the flag's subspaces; `q^0` for the trivial flag.
    pub fn flag_norm(&self) -> AbsValue {
        self.breaks
            .iter()
            .map(|&k| self.prefix_wedge_norms[k - 1])
            .max()
            .unwrap_or(AbsValue::ONE)
    }

    /// Number of distinct minima values.
    pub fn distinct_minima(&self) -> usize {
        self.breaks.len() + 1
    }
}

pub fn minkowski_flag(lattice: &LatticeBasis, a: &WeightVector) -> Result<MinkowskiFlag> {
    let prof = weighted_minima(lattice, a)?;
    Ok(flag_of_profile(&prof))
}

fn flag_of_profile(prof: &MinimaProfile) -> MinkowskiFlag {
    let d = prof.exponents.len();
    let breaks = (1..d)
        .filter(|&k| prof.exponents[k - 1] < prof.exponents[k])
        .collect();
    let cols = prof.reduced_basis.columns();
    let prefix_wedge_norms = (1..d)
        .map(|k| wedge(&cols[..k]).map(|w| w.norm()).expect("reduced columns are independent"))
        .collect();
    MinkowskiFlag {
        exponents: prof.exponents.clone(),
        breaks,
        prefix_wedge_norms,
    }
}

/// Which search stage produced a shift.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchStage {
    Greedy,
    Exhaustive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftSearch {
    pub shift: WeightVector,
    pub stage: SearchStage,
    /// Greedy moves taken (each one recorded as the distinct-minima count after it).
    pub greedy_trace: Vec<usize>,
}

fn spread(e: &[i64]) -> i64 {
    e.last().unwrap() - e.first().unwrap()
}

/// One greedy move from the current flag: the coordinates where the vectors
/// below the first break attain their norm get `+(d - s)`, all others `-s`,
/// with `s` the size of that coordinate set.
fn greedy_direction(prof: &MinimaProfile, a: &[i64]) -> Option<Vec<i64>> {
    let d = a.len();
    let k = (1..d).find(|&k| prof.exponents[k - 1] < prof.exponents[k])?;
    let mut support = vec![false; d];
    for j in 0..k {
        let col = prof.reduced_basis.column(j);
        let norm = AbsValue::Power(prof.exponents[j]);
        for (i, c) in col.iter().enumerate() {
            if c.abs() == norm {
                support[i] = true;
            }
        }
    }
    let s = support.iter().filter(|&&b| b).count() as i64;
    if s == 0 || s == d as i64 {
        return None;
    }
    Some(
        support
            .iter()
            .zip(a)
            .map(|(&inside, &ai)| if inside { ai + (d as i64 - s) } else { ai - s })
            .collect(),
    )
}

/// Searches for `a ∈ Z_0^d` with `‖a‖_∞ <= cap` and `x^a Λ` well rounded.
///
/// A greedy descent on the flag runs first; a move is kept only if it does
/// not increase the number of distinct minima and strictly shrinks the gap
/// `e_d - e_1`. If greedy stalls, all of `Z_0^d ∩ [-cap, cap]^d` is scanned
/// in order of `‖a‖_∞`, then lexicographically.
pub fn search_wellrounded_shift(lattice: &LatticeBasis, cap: u32) -> Result<ShiftSearch> {
    lattice.require_unimodular()?;
    let d = lattice.dim();
    let cap = cap as i64;
    let mut a = vec![0i64; d];
    let mut prof = minima(lattice)?;
    let mut trace = Vec::new();
    let mut best = (flag_of_profile(&prof).distinct_minima(), spread(&prof.exponents), a.clone());
    loop {
        if spread(&prof.exponents) == 0 {
            return Ok(ShiftSearch {
                shift: WeightVector(a),
                stage: SearchStage::Greedy,
                greedy_trace: trace,
            });
        }
        let Some(next) = greedy_direction(&prof, &a) else {
            break;
        };
        if next.iter().any(|v| v.abs() > cap) {
            break;
        }
        let next_prof = minima(&lattice.x_scaled(&next)?)?;
        let cur_distinct = flag_of_profile(&prof).distinct_minima();
        let next_distinct = flag_of_profile(&next_prof).distinct_minima();
        if next_distinct > cur_distinct || spread(&next_prof.exponents) >= spread(&prof.exponents) {
            break;
        }
        trace.push(next_distinct);
        a = next;
        prof = next_prof;
        let key = (next_distinct, spread(&prof.exponents), a.clone());
        if key < best {
            best = key;
        }
    }

    for norm in 0..=cap {
        for cand in shell(d, norm) {
            let p = minima(&lattice.x_scaled(&cand)?)?;
            if spread(&p.exponents) == 0 {
                return Ok(ShiftSearch {
                    shift: WeightVector(cand),
                    stage: SearchStage::Exhaustive,
                    greedy_trace: trace,
                });
            }
            let key = (flag_of_profile(&p).distinct_minima(), spread(&p.exponents), cand);
            if key < best {
                best = key;
            }
        }
    }
    Err(Error::NotFoundAtCap {
        cap: cap as u32,
        best: WeightVector(best.2),
    })
}

/// Convenience wrapper returning only the shift.
pub fn find_wellrounded_shift(lattice: &LatticeBasis, cap: u32) -> Result<WeightVector> {
    Ok(search_wellrounded_shift(lattice, cap)?.shift)
}

/// Zero-sum integer vectors with `‖a‖_∞ = norm`, in lexicographic order.
fn shell(d: usize, norm: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(d);
    fn go(d: usize, norm: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        let sum: i64 = cur.iter().sum();
        let left = (d - cur.len()) as i64;
        if left == 0 {
            if sum == 0 && cur.iter().map(|a| a.abs()).max().unwrap_or(0) == norm {
                out.push(cur.clone());
            }
            return;
        }
        // remaining entries must be able to bring the sum back to zero
        for v in -norm..=norm {
            let s = sum + v;
            if s.abs() > (left - 1) * norm {
                continue;
            }
            cur.push(v);
            go(d, norm, cur, out);
            cur.pop();
        }
    }
    go(d, norm, &mut cur, &mut out);
    out
}
