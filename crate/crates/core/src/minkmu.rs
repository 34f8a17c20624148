//! The Minkowski function `μ` of unipotent lattices
//!
//! ```text
//! Λ_θ = [[1, θ], [0, 1]] R^2,   Λ_{θ,φ} = [[1, 0, θ], [0, 1, φ], [0, 0, 1]] R^3
//! ```
//!
//! for `θ, φ` with finite Laurent tails of length at most `h`.
//!
//! For `d = 3`, `μ ≤ q^{-T}` holds iff every grid remainder `(α, β)` with
//! `|α| |β| q^{-1} > q^{-T}` admits a nonzero `N`, `deg N = m <= h - 1`, with
//! `|<Nθ> - α| |<Nφ> - β| <= q^{-(m+T)}`. Coefficients of `α` past index `h`
//! never meet a coefficient of `<Nθ>`, so the adversary's best choice there
//! is a nonzero digit at `x^{-(h+1)}`; with it, writing `A_N` for the number
//! of leading digits `α'` shares with `<Nθ>` (at most `h`),
//! `|<Nθ> - α| = q^{-(A_N + 1)}`. So `N` covers `(α', β')` iff `β'` shares at
//! least `L_N = m + T - 2 - A_N` leading digits with `<Nφ>`: a cylinder in
//! `β'`-space. The case `d = 2` is the same with no `β` and
//! `L_N = m + T - 1 - A_N <= 0` required.
//!
//! Deciding whether the cylinders cover all of `β'`-space is done on a
//! `q`-ary prefix trie with incremental "full" propagation. The default
//! strategy walks `α'` as a digit tree, handing each `N` its cylinder the
//! moment its digits leave `α'`'s, and prunes subtrees that are already
//! covered. The `Full` strategy checks every `α'` independently.
//! [`HankelSystems`] decides single pairs through the stacked Hankel linear
//! systems; [`mu_brute_oracle`] evaluates the defining sup-inf directly.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::lattice::LatticeBasis;
use crate::matrix::RatMatrix;
use crate::poly::Poly;
use crate::polymat::{hankel_block, left_nullspace_fp, FpMatrix};
use crate::ratfunc::{AbsValue, LaurentTail, RatFunc};

/// Upper bound on `q^h` (number of multipliers `N`) and on trie size.
const MAX_TABLE: u64 = 1 << 24;

/// A unipotent lattice with finite tails: `Λ_θ` (d = 2) or `Λ_{θ,φ}` (d = 3).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuInstance {
    field: FieldSpec,
    theta: LaurentTail,
    phi: Option<LaurentTail>,
    h: usize,
}

impl MuInstance {
    pub fn dim2(theta: LaurentTail) -> Self {
        let h = theta.len().max(1);
        Self {
            field: theta.field(),
            theta,
            phi: None,
            h,
        }
    }

    pub fn dim3(theta: LaurentTail, phi: LaurentTail) -> Result<Self> {
        if theta.field() != phi.field() {
            return Err(Error::FieldMismatch(theta.field().p(), phi.field().p()));
        }
        let h = theta.len().max(phi.len()).max(1);
        Ok(Self {
            field: theta.field(),
            theta,
            phi: Some(phi),
            h,
        })
    }

    /// Builds an instance from rational functions whose fractional parts have
    /// power-of-`x` denominators; polynomial parts do not change the lattice.
    pub fn from_ratfuncs(theta: &RatFunc, phi: Option<&RatFunc>) -> Result<Self> {
        let t = theta.tail()?;
        match phi {
            None => Ok(Self::dim2(t)),
            Some(p) => Self::dim3(t, p.tail()?),
        }
    }

    /// Uses a tail length `h` larger than the actual denominators.
    pub fn with_h(mut self, h: usize) -> Result<Self> {
        let need = self.theta.len().max(self.phi.as_ref().map_or(0, LaurentTail::len)).max(1);
        if h < need {
            return Err(Error::BadDimensions(format!("h = {h} below tail length {need}")));
        }
        self.h = h;
        Ok(self)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn d(&self) -> usize {
        if self.phi.is_some() {
            3
        } else {
            2
        }
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn theta(&self) -> &LaurentTail {
        &self.theta
    }

    pub fn phi(&self) -> Option<&LaurentTail> {
        self.phi.as_ref()
    }
}

/// The basis with identity block and last column `(θ, [φ,] 1)`.
pub fn make_unipotent_lattice(inst: &MuInstance) -> LatticeBasis {
    let f = inst.field;
    let d = inst.d();
    let mut m = RatMatrix::identity(f, d);
    m[(0, d - 1)] = inst.theta.to_ratfunc();
    if let Some(phi) = &inst.phi {
        m[(1, d - 1)] = phi.to_ratfunc();
    }
    LatticeBasis::new(m).expect("unipotent matrices are nonsingular")
}

/// A grid remainder that no `N` covers at the failing threshold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuWitness {
    /// The threshold `T` for which `μ <= q^{-T}` fails.
    pub threshold: i64,
    /// First `h` digits of `α` (`P` digits for the brute-force oracle).
    pub alpha: LaurentTail,
    pub beta: Option<LaurentTail>,
    /// Digit position of the appended adversarial term (`h + 1`); `None`
    /// when the remainders are used as given.
    pub tail_digit: Option<usize>,
}

impl MuWitness {
    fn remainder(&self, t: &LaurentTail) -> RatFunc {
        let r = t.to_ratfunc();
        match self.tail_digit {
            Some(k) => &r + &RatFunc::x_pow(t.field(), -(k as i64)),
            None => r,
        }
    }

    /// The grid translate `α` itself.
    pub fn grid_alpha(&self) -> RatFunc {
        self.remainder(&self.alpha)
    }

    pub fn grid_beta(&self) -> Option<RatFunc> {
        self.beta.as_ref().map(|b| self.remainder(b))
    }
}

impl fmt::Display for MuWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "uncovered alpha={}", self.grid_alpha())?;
        if let Some(b) = self.grid_beta() {
            write!(f, " beta={b}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuResult {
    /// `μ = q^{-T*}`.
    pub value: AbsValue,
    pub witness: Option<MuWitness>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MuStrategy {
    /// Digit-tree walk over `α'` with covered-subtree pruning.
    #[default]
    Pruned,
    /// Every normalized `α'` checked independently.
    Full,
}

/// Per-multiplier data: `N` ranges over nonzero polynomials of degree `< h`.
struct Multipliers {
    q: u32,
    h: usize,
    /// depth of the β trie: `h` for d = 3, `0` for d = 2
    hb: usize,
    /// `d - 1`
    codim: i64,
    width: u32,
    deg: Vec<u8>,
    theta: Vec<u128>,
    /// prefix values of `<Nφ>`, `hb + 1` per multiplier
    phi_prefix: Vec<u32>,
}

fn digit_width(q: u32) -> u32 {
    32 - (q - 1).leading_zeros()
}

impl Multipliers {
    fn build(inst: &MuInstance) -> Result<Self> {
        let f = inst.field;
        let q = f.p();
        let h = inst.h;
        let hb = if inst.phi.is_some() { h } else { 0 };
        let width = digit_width(q);
        let too_large = || Error::TooLarge(format!("q = {q}, h = {h}"));
        let count = (q as u64).checked_pow(h as u32).ok_or_else(too_large)?;
        if count > MAX_TABLE || h as u32 * width > 128 {
            return Err(too_large());
        }
        // trie size is about q^hb, below the same bound
        let count = count as usize;

        // <Nθ>_i = sum_j N_j θ_{i+j}: the h x h Hankel matrix applied to N
        let h_theta = hankel_block(&inst.theta, 1, h, h)?;
        let h_phi = match &inst.phi {
            Some(p) => Some(hankel_block(p, 1, h, h)?),
            None => None,
        };
        let mut deg = Vec::with_capacity(count - 1);
        let mut theta = Vec::with_capacity(count - 1);
        let mut phi_prefix = Vec::with_capacity((count - 1) * (hb + 1));
        let mut coeffs = vec![0u32; h];
        for _ in 1..count {
            // increment base-q counter N_0 + N_1 q + ...
            for c in coeffs.iter_mut() {
                *c += 1;
                if *c < q {
                    break;
                }
                *c = 0;
            }
            let m = coeffs.iter().rposition(|&c| c != 0).expect("nonzero") as u8;
            deg.push(m);
            theta.push(pack(&h_theta.mul_vec(&coeffs), width));
            match &h_phi {
                Some(hp) => {
                    let digits = hp.mul_vec(&coeffs);
                    let mut v = 0u32;
                    phi_prefix.push(0);
                    for &dg in &digits {
                        v = v * q + dg;
                        phi_prefix.push(v);
                    }
                }
                None => phi_prefix.push(0),
            }
        }
        Ok(Self {
            q,
            h,
            hb,
            codim: if inst.phi.is_some() { 2 } else { 1 },
            width,
            deg,
            theta,
            phi_prefix,
        })
    }

    fn len(&self) -> usize {
        self.deg.len()
    }

    #[inline]
    fn theta_digit(&self, n: usize, k: usize) -> u32 {
        ((self.theta[n] >> (k as u32 * self.width)) & ((1u128 << self.width) - 1)) as u32
    }

    /// Leading digits shared by `<Nθ>` and the packed `α'`, capped at `cap`.
    #[inline]
    fn agreement(&self, n: usize, alpha: u128, cap: usize) -> usize {
        let x = self.theta[n] ^ alpha;
        if x == 0 {
            return cap;
        }
        ((x.trailing_zeros() / self.width) as usize).min(cap)
    }

    /// Marks the cylinder that `N` covers when it shares exactly `a` digits
    /// with `α'`.
    #[inline]
    fn mark_cylinder(&self, cover: &mut Cover, n: usize, agree: usize, t: i64) {
        let need = self.deg[n] as i64 + t - self.codim - agree as i64;
        if need <= 0 {
            cover.mark(0, 0);
        } else if need as usize <= self.hb {
            let l = need as usize;
            cover.mark(l, self.phi_prefix[n * (self.hb + 1) + l]);
        }
    }

    /// The cylinder of `β'` covered by the `N = 0` term once `a = log_q |α|^{-1}`
    /// is known: zero prefix of length `T - (d-1) - a`. Returns `true` when
    /// everything is covered.
    fn mark_auto(&self, cover: &mut Cover, a: usize, t: i64) -> bool {
        let z = t - self.codim - a as i64;
        if z <= 0 {
            return true;
        }
        if z as usize <= self.hb {
            cover.mark(z as usize, 0);
        }
        false
    }
}

fn pack(digits: &[u32], width: u32) -> u128 {
    digits
        .iter()
        .enumerate()
        .fold(0u128, |acc, (i, &dg)| acc | ((dg as u128) << (i as u32 * width)))
}

/// Covered region of `β'`-space as a union of prefix cylinders, kept in a
/// complete `q`-ary trie. A node is full if it is marked or all of its
/// children are full; fullness changes are propagated to the root on every
/// mark and unmark, so `root_full` is O(1).
struct Cover {
    q: u32,
    depth: usize,
    offsets: Vec<usize>,
    marks: Vec<u32>,
    full_children: Vec<u32>,
    log: Vec<(usize, u32)>,
}

impl Cover {
    fn new(q: u32, depth: usize) -> Self {
        let mut offsets = Vec::with_capacity(depth + 2);
        let mut acc = 0usize;
        let mut level = 1usize;
        for _ in 0..=depth {
            offsets.push(acc);
            acc += level;
            level *= q as usize;
        }
        offsets.push(acc);
        Self {
            q,
            depth,
            offsets,
            marks: vec![0; acc],
            full_children: vec![0; acc],
            log: Vec::new(),
        }
    }

    #[inline]
    fn idx(&self, l: usize, v: u32) -> usize {
        self.offsets[l] + v as usize
    }

    #[inline]
    fn full(&self, l: usize, v: u32) -> bool {
        let i = self.idx(l, v);
        self.marks[i] > 0 || (l < self.depth && self.full_children[i] == self.q)
    }

    fn mark(&mut self, l: usize, v: u32) {
        let was = self.full(l, v);
        let i = self.idx(l, v);
        self.marks[i] += 1;
        self.log.push((l, v));
        if was {
            return;
        }
        let (mut l, mut v) = (l, v);
        while l > 0 {
            let (pl, pv) = (l - 1, v / self.q);
            let before = self.full(pl, pv);
            let pi = self.idx(pl, pv);
            self.full_children[pi] += 1;
            if before || !self.full(pl, pv) {
                return;
            }
            l = pl;
            v = pv;
        }
    }

    fn unmark(&mut self, l: usize, v: u32) {
        let i = self.idx(l, v);
        let was = self.full(l, v);
        self.marks[i] -= 1;
        if !was || self.full(l, v) {
            return;
        }
        let (mut l, mut v) = (l, v);
        while l > 0 {
            let (pl, pv) = (l - 1, v / self.q);
            let before = self.full(pl, pv);
            let pi = self.idx(pl, pv);
            self.full_children[pi] -= 1;
            if !before || self.full(pl, pv) {
                return;
            }
            l = pl;
            v = pv;
        }
    }

    fn checkpoint(&self) -> usize {
        self.log.len()
    }

    fn rollback(&mut self, cp: usize) {
        while self.log.len() > cp {
            let (l, v) = self.log.pop().unwrap();
            self.unmark(l, v);
        }
    }

    fn root_full(&self) -> bool {
        self.full(0, 0)
    }

    /// Digits `β_1..β_depth` of some point outside every cylinder.
    fn find_uncovered(&self) -> Option<Vec<u32>> {
        if self.root_full() {
            return None;
        }
        let mut digits = Vec::with_capacity(self.depth);
        let (mut l, mut v) = (0usize, 0u32);
        while l < self.depth {
            let c = (0..self.q)
                .find(|&c| !self.full(l + 1, v * self.q + c))
                .expect("a non-full node has a non-full child");
            digits.push(c);
            v = v * self.q + c;
            l += 1;
        }
        Some(digits)
    }
}

struct Uncovered {
    alpha: Vec<u32>,
    beta: Vec<u32>,
}

/// Decision engine for one instance; precomputed tables are shared across
/// thresholds.
pub struct MuDecider {
    inst: MuInstance,
    mult: Multipliers,
    strategy: MuStrategy,
}

impl MuDecider {
    pub fn new(inst: &MuInstance, strategy: MuStrategy) -> Result<Self> {
        Ok(Self {
            mult: Multipliers::build(inst)?,
            inst: inst.clone(),
            strategy,
        })
    }

    pub fn instance(&self) -> &MuInstance {
        &self.inst
    }

    /// `μ <= q^{-T}`, with an uncovered remainder when it fails.
    pub fn decide(&self, t: i64) -> Result<std::result::Result<(), MuWitness>> {
        if t < 0 {
            return Err(Error::BadThreshold(t));
        }
        if t <= self.inst.d() as i64 {
            return Ok(Ok(()));
        }
        let found = match self.strategy {
            MuStrategy::Pruned => self.search_pruned(t),
            MuStrategy::Full => self.search_full(t),
        };
        Ok(match found {
            None => Ok(()),
            Some(u) => Err(self.witness(t, u)),
        })
    }

    fn witness(&self, t: i64, u: Uncovered) -> MuWitness {
        let f = self.inst.field;
        MuWitness {
            threshold: t,
            alpha: LaurentTail::new(f, u.alpha),
            beta: self.inst.phi.as_ref().map(|_| LaurentTail::new(f, u.beta)),
            tail_digit: Some(self.inst.h + 1),
        }
    }

    /// Normalized `α'` (first nonzero digit 1, or zero) in ascending order of
    /// their base-`q` value with `α_1` least significant. Scaling `(α', β')`
    /// and `N` by the same constant preserves coverage.
    fn search_full(&self, t: i64) -> Option<Uncovered> {
        let m = &self.mult;
        let (q, h) = (m.q, m.h);
        let total = (q as usize).pow(h as u32);
        (0..total)
            .into_par_iter()
            .filter(|&idx| {
                let mut rest = idx;
                while rest > 0 && rest % q as usize == 0 {
                    rest /= q as usize;
                }
                rest == 0 || rest % q as usize == 1
            })
            .map_init(
                || Cover::new(q, m.hb),
                |cover, idx| {
                    let mut digits = vec![0u32; h];
                    let mut rest = idx;
                    for dg in digits.iter_mut() {
                        *dg = (rest % q as usize) as u32;
                        rest /= q as usize;
                    }
                    let a = digits.iter().position(|&c| c != 0).map_or(h + 1, |i| i + 1);
                    if m.mark_auto(cover, a, t) {
                        cover.rollback(0);
                        return None;
                    }
                    let packed = pack(&digits, m.width);
                    for n in 0..m.len() {
                        let agree = m.agreement(n, packed, h);
                        m.mark_cylinder(cover, n, agree, t);
                        if cover.root_full() {
                            break;
                        }
                    }
                    let res = cover.find_uncovered().map(|beta| Uncovered {
                        alpha: digits.clone(),
                        beta,
                    });
                    cover.rollback(0);
                    res
                },
            )
            .find_map_first(|r| r)
    }

    /// Tasks are fixed `α'` prefixes (first nonzero digit 1 followed by up to
    /// three free digits, plus the zero remainder), each finished by a
    /// depth-first walk.
    fn search_pruned(&self, t: i64) -> Option<Uncovered> {
        let m = &self.mult;
        let (q, h) = (m.q, m.h);
        let mut tasks: Vec<Vec<u32>> = Vec::new();
        for p in 1..=h {
            let extra = (h - p).min(3);
            for mut idx in 0..(q as usize).pow(extra as u32) {
                let mut prefix = vec![0u32; p];
                prefix[p - 1] = 1;
                for _ in 0..extra {
                    prefix.push((idx % q as usize) as u32);
                    idx /= q as usize;
                }
                tasks.push(prefix);
            }
        }
        tasks.push(vec![0u32; h]);
        tasks
            .par_iter()
            .map_init(
                || Cover::new(q, m.hb),
                |cover, prefix| {
                    let res = self.run_task(cover, prefix, t);
                    cover.rollback(0);
                    res
                },
            )
            .find_map_first(|r| r)
    }

    fn run_task(&self, cover: &mut Cover, prefix: &[u32], t: i64) -> Option<Uncovered> {
        let m = &self.mult;
        let h = m.h;
        let k = prefix.len();
        let a = prefix.iter().position(|&c| c != 0).map_or(h + 1, |i| i + 1);
        if m.mark_auto(cover, a, t) {
            return None;
        }
        let packed = pack(prefix, m.width);
        let mut alive = Vec::new();
        for n in 0..m.len() {
            let agree = m.agreement(n, packed, k);
            if agree < k {
                m.mark_cylinder(cover, n, agree, t);
            } else {
                alive.push(n as u32);
            }
        }
        let mut alpha = prefix.to_vec();
        self.walk(cover, &mut alpha, &alive, t)
    }

    fn walk(&self, cover: &mut Cover, alpha: &mut Vec<u32>, alive: &[u32], t: i64) -> Option<Uncovered> {
        if cover.root_full() {
            return None;
        }
        let m = &self.mult;
        let k = alpha.len();
        if k == m.h {
            let cp = cover.checkpoint();
            for &n in alive {
                m.mark_cylinder(cover, n as usize, m.h, t);
            }
            let res = cover.find_uncovered().map(|beta| Uncovered {
                alpha: alpha.clone(),
                beta,
            });
            cover.rollback(cp);
            return res;
        }
        let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); m.q as usize];
        for &n in alive {
            buckets[m.theta_digit(n as usize, k) as usize].push(n);
        }
        for c in 0..m.q {
            let cp = cover.checkpoint();
            for (other, bucket) in buckets.iter().enumerate() {
                if other as u32 == c {
                    continue;
                }
                for &n in bucket {
                    m.mark_cylinder(cover, n as usize, k, t);
                }
            }
            alpha.push(c);
            let res = self.walk(cover, alpha, &buckets[c as usize], t);
            alpha.pop();
            cover.rollback(cp);
            if res.is_some() {
                return res;
            }
        }
        None
    }
}

/// `μ(Λ_inst) <= q^{-T}`.
pub fn mu_decision(inst: &MuInstance, t: i64) -> Result<bool> {
    mu_decision_with(inst, t, MuStrategy::default())
}

pub fn mu_decision_with(inst: &MuInstance, t: i64, strategy: MuStrategy) -> Result<bool> {
    if t < 0 {
        return Err(Error::BadThreshold(t));
    }
    if t <= inst.d() as i64 {
        return Ok(true);
    }
    Ok(MuDecider::new(inst, strategy)?.decide(t)?.is_ok())
}

/// Exact `μ = q^{-T*}`: scans `T = d + 1, d + 2, ...` until the decision
/// fails. The scan ends by `T = 2h + 3` since the remainder `α = β = x^{-1}`
/// (plus the adversarial digit) is never covered beyond `2h + 2`.
pub fn mu_exact(inst: &MuInstance) -> Result<MuResult> {
    mu_exact_with(inst, MuStrategy::default())
}

pub fn mu_exact_with(inst: &MuInstance, strategy: MuStrategy) -> Result<MuResult> {
    let decider = MuDecider::new(inst, strategy)?;
    let d = inst.d() as i64;
    let cap = 2 * inst.h as i64 + 3;
    for t in d + 1..=cap {
        if let Err(w) = decider.decide(t)? {
            return Ok(MuResult {
                value: AbsValue::Power(-(t - 1)),
                witness: Some(w),
            });
        }
    }
    unreachable!("the decision fails by T = 2h + 3")
}

/// Stacked Hankel systems
///
/// ```text
/// [ θ_1 .. θ_{m+1}     ]          [ α_1 .. α_k   ]
/// [  ⋮                 ]   N  =   [ β_1 .. β_l   ]
/// [ φ_1 .. φ_{m+1}     ]
/// [  ⋮                 ]
/// ```
///
/// with `k` θ-rows and `l = m + T - 2 - k` φ-rows, stored as their parity
/// checks (left kernels): the right-hand side is reachable iff every parity
/// check annihilates it.
pub struct HankelSystems {
    inst: MuInstance,
    t: i64,
    /// `(m, k, l, parity checks)`
    systems: Vec<(usize, usize, usize, Vec<Vec<u32>>)>,
}

impl HankelSystems {
    pub fn new(inst: &MuInstance, t: i64) -> Result<Self> {
        if t < 0 {
            return Err(Error::BadThreshold(t));
        }
        let h = inst.h;
        let codim = inst.d() as i64 - 1;
        let mut systems = Vec::new();
        for m in 0..h {
            for k in 0..=h {
                let l = (m as i64 + t - codim - k as i64).max(0) as usize;
                let l = if inst.phi.is_none() {
                    if l > 0 {
                        continue;
                    }
                    0
                } else {
                    l
                };
                if l > h {
                    continue;
                }
                let top = hankel_block(&inst.theta, 1, k, m + 1)?;
                let stacked = match &inst.phi {
                    Some(phi) => top.vstack(&hankel_block(phi, 1, l, m + 1)?)?,
                    None => top,
                };
                let checks = if stacked.rows() == 0 {
                    Vec::new()
                } else {
                    left_nullspace_fp(&stacked)
                };
                systems.push((m, k, l, checks));
            }
        }
        Ok(Self {
            inst: inst.clone(),
            t,
            systems,
        })
    }

    /// Is the remainder pair (first `h` digits, adversarial digit appended)
    /// covered at this threshold?
    pub fn covers(&self, alpha: &[u32], beta: Option<&[u32]>) -> bool {
        let h = self.inst.h;
        let f = self.inst.field;
        let lead = |v: &[u32]| v.iter().take(h).position(|&c| c != 0).map_or(h + 1, |i| i + 1) as i64;
        let mut auto = lead(alpha) + 1;
        if let Some(b) = beta {
            auto += lead(b);
        }
        if auto >= self.t {
            return true;
        }
        let digit = |v: &[u32], i: usize| v.get(i).copied().unwrap_or(0);
        self.systems.iter().any(|(_, k, l, checks)| {
            let rhs: Vec<u32> = (0..*k)
                .map(|i| digit(alpha, i))
                .chain((0..*l).map(|i| beta.map_or(0, |b| digit(b, i))))
                .collect();
            checks.iter().all(|w| {
                w.iter()
                    .zip(&rhs)
                    .fold(0u32, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
                    == 0
            })
        })
    }

    /// Direct solve of one stacked system; `Some(N)` gives the multiplier's
    /// coefficients (degree at most `m`).
    pub fn solve(&self, m: usize, k: usize, alpha: &[u32], beta: &[u32]) -> Result<Option<Vec<u32>>> {
        let h = self.inst.h;
        let l = (m as i64 + self.t - self.inst.d() as i64 + 1 - k as i64).max(0) as usize;
        if m >= h || k > h || l > h {
            return Err(Error::BadDimensions(format!("m = {m}, k = {k}, l = {l}")));
        }
        let mut sys = hankel_block(&self.inst.theta, 1, k, m + 1)?;
        if let Some(phi) = &self.inst.phi {
            sys = sys.vstack(&hankel_block(phi, 1, l, m + 1)?)?;
        }
        let rhs: Vec<u32> = (0..k)
            .map(|i| alpha.get(i).copied().unwrap_or(0))
            .chain((0..l).map(|i| beta.get(i).copied().unwrap_or(0)))
            .collect();
        if sys.rows() == 0 {
            return Ok(Some(vec![0; m + 1]));
        }
        crate::polymat::solve_fp(&sys, &rhs)
    }
}

/// Exhaustive decision through the Hankel systems; exponential in `2h`, for
/// small instances only.
pub fn mu_decision_by_systems(inst: &MuInstance, t: i64) -> Result<bool> {
    if t <= inst.d() as i64 {
        return Ok(true);
    }
    let sys = HankelSystems::new(inst, t)?;
    let q = inst.field.p() as u64;
    let h = inst.h;
    let dims = if inst.phi.is_some() { 2 * h } else { h };
    let total = q
        .checked_pow(dims as u32)
        .filter(|&n| n <= MAX_TABLE)
        .ok_or_else(|| Error::TooLarge("exhaustive Hankel check".into()))?;
    Ok((0..total).into_par_iter().all(|mut idx| {
        let mut digits = Vec::with_capacity(dims);
        for _ in 0..dims {
            digits.push((idx % q) as u32);
            idx /= q;
        }
        let (a, b) = digits.split_at(h);
        sys.covers(a, inst.phi.as_ref().map(|_| b))
    }))
}

/// Direct evaluation of
/// `sup_{α,β} min(|α||β| q^{-1}, min_{N} |N| |<Nθ> - α| |<Nφ> - β|)`
/// over all remainders with `precision` digits and all nonzero `N` of degree
/// below `h`, with `<Nθ>` from rational-function arithmetic.
pub fn mu_brute_oracle(inst: &MuInstance, precision: usize) -> Result<MuResult> {
    let h = inst.h;
    if precision < h + 1 {
        return Err(Error::PrecisionTooLow {
            given: precision as i64,
            required: h as i64 + 1,
        });
    }
    let f = inst.field;
    let q = f.p() as u64;
    let d3 = inst.phi.is_some();
    let space = q
        .checked_pow(precision as u32)
        .filter(|&n| n <= MAX_TABLE)
        .ok_or_else(|| Error::TooLarge("oracle remainder space".into()))?;
    let pairs = if d3 { space.checked_mul(space) } else { Some(space) }
        .filter(|&n| n <= 1 << 34)
        .ok_or_else(|| Error::TooLarge("oracle pair space".into()))?;
    let _ = pairs;

    let theta = inst.theta.to_ratfunc();
    let phi = inst.phi.as_ref().map(LaurentTail::to_ratfunc);
    // (deg N, digits of <Nθ>, digits of <Nφ>)
    let mut mults: Vec<(i64, Vec<u32>, Vec<u32>)> = Vec::new();
    for idx in 1..q.pow(h as u32) {
        let mut rest = idx;
        let coeffs: Vec<u32> = (0..h)
            .map(|_| {
                let c = (rest % q) as u32;
                rest /= q;
                c
            })
            .collect();
        let n = RatFunc::from_poly(Poly::from_coeffs(f, coeffs));
        let deg = n.abs().exponent().expect("nonzero");
        let nt = (&n * &theta).fractional_part().fractional_digits(precision);
        let np = match &phi {
            Some(p) => (&n * p).fractional_part().fractional_digits(precision),
            None => Vec::new(),
        };
        mults.push((deg, nt, np));
    }
    let tail = |mut idx: u64| -> Vec<u32> {
        (0..precision)
            .map(|_| {
                let c = (idx % q) as u32;
                idx /= q;
                c
            })
            .collect()
    };
    let dist = |a: &[u32], b: &[u32]| -> AbsValue {
        match a.iter().zip(b).position(|(x, y)| x != y) {
            Some(i) => AbsValue::Power(-(i as i64 + 1)),
            None => AbsValue::Zero,
        }
    };
    let size = |a: &[u32]| -> AbsValue {
        match a.iter().position(|&x| x != 0) {
            Some(i) => AbsValue::Power(-(i as i64 + 1)),
            None => AbsValue::Zero,
        }
    };
    let gamma = AbsValue::Power(-1);

    let best = (0..space)
        .into_par_iter()
        .map(|ai| {
            let alpha = tail(ai);
            let a_abs = size(&alpha);
            let e_theta: Vec<AbsValue> = mults
                .iter()
                .map(|(deg, nt, _)| dist(nt, &alpha).scale(*deg))
                .collect();
            let mut best: Option<(AbsValue, u64)> = None;
            let betas = if d3 { space } else { 1 };
            for bi in 0..betas {
                let beta = tail(bi);
                let mut val = if d3 { a_abs * size(&beta) * gamma } else { a_abs * gamma };
                for (j, (_, _, np)) in mults.iter().enumerate() {
                    let v = if d3 { e_theta[j] * dist(np, &beta) } else { e_theta[j] };
                    if v < val {
                        val = v;
                    }
                }
                if best.is_none_or(|(b, _)| val > b) {
                    best = Some((val, bi));
                }
            }
            let (v, bi) = best.expect("at least one beta");
            (v, ai, bi)
        })
        .reduce(
            || (AbsValue::Zero, u64::MAX, u64::MAX),
            |x, y| {
                // larger value wins; ties go to the smaller alpha index
                if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) {
                    y
                } else {
                    x
                }
            },
        );
    let (value, ai, bi) = best;
    let exp = value.exponent().expect("the sup is positive");
    Ok(MuResult {
        value,
        witness: Some(MuWitness {
            threshold: -exp + 1,
            alpha: LaurentTail::new(f, tail(ai)),
            beta: if d3 { Some(LaurentTail::new(f, tail(bi))) } else { None },
            tail_digit: None,
        }),
    })
}

/// Full stacked Hankel matrix used by the decision for multipliers of degree
/// at most `m`: `h` θ-rows over `h` φ-rows (θ only for d = 2).
pub fn stacked_hankel(inst: &MuInstance, m: usize) -> Result<FpMatrix> {
    let top = hankel_block(&inst.theta, 1, inst.h, m + 1)?;
    match &inst.phi {
        Some(phi) => top.vstack(&hankel_block(phi, 1, inst.h, m + 1)?),
        None => Ok(top),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_ratfunc;

    fn f(p: u32) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    fn tail(p: u32, text: &str) -> LaurentTail {
        parse_ratfunc(f(p), text).unwrap().tail().unwrap()
    }

    #[test]
    fn lattice_shape() {
        let inst = MuInstance::dim3(LaurentTail::zero(f(2)), LaurentTail::zero(f(2))).unwrap();
        assert_eq!(make_unipotent_lattice(&inst), LatticeBasis::standard(f(2), 3).unwrap());
        let inst = MuInstance::dim2(tail(2, "1/x"));
        let lat = make_unipotent_lattice(&inst);
        assert_eq!(lat.basis()[(0, 1)], RatFunc::x_pow(f(2), -1));
        assert_eq!(lat.basis()[(1, 0)], RatFunc::zero(f(2)));
    }

    #[test]
    fn standard_lattice_decisions() {
        let inst = MuInstance::dim3(LaurentTail::zero(f(3)), LaurentTail::zero(f(3))).unwrap();
        assert!(mu_decision(&inst, 3).unwrap());
        assert!(!mu_decision(&inst, 4).unwrap());
        assert!(mu_decision(&inst, 1).unwrap());
        assert_eq!(mu_decision(&inst, -1), Err(Error::BadThreshold(-1)));
    }

    #[test]
    fn dim2_value() {
        let inst = MuInstance::dim2(tail(2, "1/x"));
        let r = mu_exact(&inst).unwrap();
        assert_eq!(r.value, AbsValue::Power(-2));
        assert_eq!(mu_brute_oracle(&inst, 3).unwrap().value, AbsValue::Power(-2));
        assert!(matches!(mu_brute_oracle(&inst, 1), Err(Error::PrecisionTooLow { .. })));
    }

    #[test]
    fn zero_tails_oracle() {
        let inst = MuInstance::dim3(LaurentTail::zero(f(2)), LaurentTail::zero(f(2))).unwrap();
        assert_eq!(mu_brute_oracle(&inst, 2).unwrap().value, AbsValue::Power(-3));
        assert_eq!(mu_exact(&inst).unwrap().value, AbsValue::Power(-3));
    }

    #[test]
    fn cover_trie_propagation() {
        let mut c = Cover::new(2, 2);
        assert!(!c.root_full());
        c.mark(1, 0);
        assert!(!c.root_full());
        c.mark(2, 2);
        assert!(!c.root_full());
        assert_eq!(c.find_uncovered(), Some(vec![1, 1]));
        let cp = c.checkpoint();
        c.mark(2, 3);
        assert!(c.root_full());
        c.rollback(cp);
        assert!(!c.root_full());
        c.mark(1, 1);
        assert!(c.root_full());
        c.rollback(0);
        assert!(!c.root_full());
        assert!(c.marks.iter().all(|&m| m == 0));
        assert!(c.full_children.iter().all(|&m| m == 0));
    }

    #[test]
    fn strategies_agree_small() {
        let fld = f(3);
        let insts = [
            MuInstance::dim3(tail(3, "1/x+2/x^3"), tail(3, "1/x^2")).unwrap(),
            MuInstance::dim3(tail(3, "2/x^2"), tail(3, "1/x+1/x^2+1/x^3")).unwrap(),
            MuInstance::dim2(tail(3, "1/x+2/x^3")),
        ];
        for inst in &insts {
            assert_eq!(inst.field(), fld);
            for t in 3..=2 * inst.h() as i64 + 3 {
                let a = mu_decision_with(inst, t, MuStrategy::Pruned).unwrap();
                let b = mu_decision_with(inst, t, MuStrategy::Full).unwrap();
                let c = mu_decision_by_systems(inst, t).unwrap();
                assert_eq!(a, b, "{inst:?} T={t}");
                assert_eq!(a, c, "{inst:?} T={t}");
            }
        }
    }

    #[test]
    fn strategies_agree_deep() {
        // deep enough that the digit walk branches below the task prefixes
        let insts = [
            MuInstance::dim3(tail(2, "1/x+1/x^4+1/x^7+1/x^8"), tail(2, "1/x^2+1/x^3+1/x^5+1/x^8")).unwrap(),
            MuInstance::dim3(tail(2, "1/x^3+1/x^6"), tail(2, "1/x+1/x^2+1/x^7+1/x^8")).unwrap(),
            MuInstance::dim2(tail(2, "1/x+1/x^2+1/x^5+1/x^8")),
        ];
        for inst in &insts {
            for t in 4..=9 {
                let a = mu_decision_with(inst, t, MuStrategy::Pruned).unwrap();
                let b = mu_decision_with(inst, t, MuStrategy::Full).unwrap();
                let c = mu_decision_by_systems(inst, t).unwrap();
                assert_eq!((a, b), (c, c), "{inst:?} T={t}");
            }
        }
        let inst = MuInstance::dim3(tail(3, "1/x+2/x^3+1/x^5+2/x^6"), tail(3, "2/x^2+1/x^4+1/x^6")).unwrap();
        for t in 4..=7 {
            let a = MuDecider::new(&inst, MuStrategy::Pruned).unwrap().decide(t).unwrap();
            let b = MuDecider::new(&inst, MuStrategy::Full).unwrap().decide(t).unwrap();
            assert_eq!(a.is_ok(), b.is_ok(), "T={t}");
            let sys = HankelSystems::new(&inst, t).unwrap();
            for w in [a, b].into_iter().filter_map(|r| r.err()) {
                let beta = w.beta.as_ref().unwrap().padded(inst.h());
                assert!(!sys.covers(&w.alpha.padded(inst.h()), Some(&beta)));
            }
        }
    }

    #[test]
    fn witness_is_uncovered_by_systems() {
        let inst = MuInstance::dim3(tail(2, "1/x+1/x^3"), tail(2, "1/x^2+1/x^3")).unwrap();
        let r = mu_exact(&inst).unwrap();
        let w = r.witness.unwrap();
        let sys = HankelSystems::new(&inst, w.threshold).unwrap();
        let alpha = w.alpha.padded(inst.h());
        let beta = w.beta.as_ref().unwrap().padded(inst.h());
        assert!(!sys.covers(&alpha, Some(&beta)));
    }

    #[test]
    fn periodicity_in_n() {
        // <(N + x^h M) θ> = <N θ>
        let fld = f(3);
        let theta = tail(3, "2/x+1/x^3").to_ratfunc();
        let h = 3;
        let n = RatFunc::from_poly(Poly::from_coeffs(fld, [1, 2]));
        let m = RatFunc::from_poly(Poly::from_coeffs(fld, [2, 0, 1]));
        let shifted = &n + &(&m * &RatFunc::x_pow(fld, h));
        assert_eq!(
            (&n * &theta).fractional_part(),
            (&shifted * &theta).fractional_part()
        );
    }
}
