//! Lattices `gR^d` in `K~^d`: successive minima, reduced bases and the
//! `u g h = diag(x^{e_1}, ..., x^{e_d})` decomposition.

mod body;
mod enumerate;
mod file;
mod wedge;

pub use body::{covrad_body, covrad_cube, minima_body, ConvexBody};
pub use enumerate::{covering_oracle, enumerate_in_box, has_point_in_box, ENUMERATION_LIMIT};
pub use file::{format_lattice_file, parse_lattice_file};
pub use wedge::{wedge, wedge_orthogonality, WedgeVector};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::matrix::RatMatrix;
use crate::polymat::{column_reduce, poly_mat_det, PolyMatrix};
use crate::ratfunc::{vec_norm, AbsValue, RatFunc};

/// A lattice `Λ = gR^d`, given by a nonsingular basis matrix whose columns
/// generate `Λ` over `R = F_p[x]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    basis: RatMatrix,
    det_exponent: i64,
}

impl LatticeBasis {
    pub fn new(basis: RatMatrix) -> Result<Self> {
        if !basis.is_square() {
            return Err(Error::NotSquare {
                rows: basis.rows(),
                cols: basis.cols(),
            });
        }
        if basis.rows() < 2 {
            return Err(Error::BadDimensions("lattice dimension must be at least 2".into()));
        }
        let det_exponent = basis.det()?.abs().exponent().ok_or(Error::SingularMatrix)?;
        Ok(Self {
            basis,
            det_exponent,
        })
    }

    /// The standard lattice `R^d`.
    pub fn standard(field: FieldSpec, d: usize) -> Result<Self> {
        Self::new(RatMatrix::identity(field, d))
    }

    /// `diag(x^{k_1}, ..., x^{k_d}) R^d`.
    pub fn x_diagonal(field: FieldSpec, exps: &[i64]) -> Result<Self> {
        Self::new(RatMatrix::x_diagonal(field, exps))
    }

    pub fn field(&self) -> FieldSpec {
        self.basis.field()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    /// `log_q |det g|`.
    pub fn det_exponent(&self) -> i64 {
        self.det_exponent
    }

    pub fn is_unimodular(&self) -> bool {
        self.det_exponent == 0
    }

    pub(crate) fn require_unimodular(&self) -> Result<()> {
        if self.is_unimodular() {
            Ok(())
        } else {
            Err(Error::NotUnimodular(self.det_exponent))
        }
    }

    /// The lattice `m Λ` for a nonsingular `d x d` matrix `m`.
    pub fn transformed(&self, m: &RatMatrix) -> Result<LatticeBasis> {
        if m.rows() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: m.rows(),
            });
        }
        LatticeBasis::new(m.mul(&self.basis)?)
    }

    /// `x^a Λ = diag(x^{a_1}, ..., x^{a_d}) Λ`.
    pub fn x_scaled(&self, exps: &[i64]) -> Result<LatticeBasis> {
        if exps.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: exps.len(),
            });
        }
        let d = RatMatrix::x_diagonal(self.field(), exps);
        LatticeBasis::new(d.mul(&self.basis)?)
    }

    /// `g v` for a coefficient vector `v` in `R^d` (or `K^d`).
    pub fn point(&self, coeffs: &[RatFunc]) -> Result<Vec<RatFunc>> {
        self.basis.mul_vec(coeffs)
    }

    /// Is `v` a lattice vector, i.e. is `g^{-1} v` integral?
    pub fn contains(&self, v: &[RatFunc]) -> Result<bool> {
        let c = self.basis.inverse()?.mul_vec(v)?;
        Ok(c.iter().all(RatFunc::is_poly))
    }
}

/// Successive minima `λ_i = q^{e_i}` of a lattice together with a reduced
/// (orthogonal) basis realizing them and the `u g h` decomposition.
#[derive(Clone, Debug)]
pub struct MinimaProfile {
    /// Ascending `(e_1, ..., e_d)`.
    pub exponents: Vec<i64>,
    /// `g h`; column `j` has norm `q^{e_j}`.
    pub reduced_basis: RatMatrix,
    /// Entries in O, `|det u| = 1`, and `u g h = diag(x^{e_1}, ..., x^{e_d})`.
    pub transform_u: RatMatrix,
    /// Unimodular over R with determinant 1.
    pub transform_h: PolyMatrix,
}

impl MinimaProfile {
    pub fn lambda(&self, i: usize) -> AbsValue {
        AbsValue::Power(self.exponents[i])
    }

    pub fn last(&self) -> i64 {
        *self.exponents.last().expect("dimension >= 2")
    }

    pub fn first(&self) -> i64 {
        self.exponents[0]
    }
}

/// Successive minima via column reduction of the denominator-cleared basis.
///
/// With `D` the monic lcm of all denominators, `D g` is a polynomial matrix;
/// its column-reduced form has column degrees `deg D + e_i`.
pub fn minima(lattice: &LatticeBasis) -> Result<MinimaProfile> {
    let f = lattice.field();
    let g = &lattice.basis;
    let den = g.common_denominator();
    let shift = den.degree().expect("denominator is nonzero") as i64;
    let cleared = g.scaled_to_poly(&den);
    let crf = column_reduce(&cleared)?;
    let exponents: Vec<i64> = crf.col_degrees.iter().map(|&c| c as i64 - shift).collect();

    let den_inv = RatFunc::from_poly(den).inv()?;
    let mut reduced_basis = RatMatrix::from_poly_matrix(&crf.reduced);
    for i in 0..reduced_basis.rows() {
        for j in 0..reduced_basis.cols() {
            reduced_basis[(i, j)] = &reduced_basis[(i, j)] * &den_inv;
        }
    }
    // u = (B diag(x^{-e}))^{-1}; the normalized columns have unit norm and an
    // invertible leading matrix, so u has entries in O.
    let neg: Vec<i64> = exponents.iter().map(|e| -e).collect();
    let normalized = reduced_basis.mul(&RatMatrix::x_diagonal(f, &neg))?;
    let transform_u = normalized.inverse()?;
    Ok(MinimaProfile {
        exponents,
        reduced_basis,
        transform_u,
        transform_h: crf.transform,
    })
}

/// A shortest nonzero vector and its norm `λ_1`.
pub fn shortest_vector(lattice: &LatticeBasis) -> Result<(Vec<RatFunc>, AbsValue)> {
    let prof = minima(lattice)?;
    let v = prof.reduced_basis.column(0);
    let n = vec_norm(&v)?;
    Ok((v, n))
}

/// `ℓ(Λ)`, the length of a shortest nonzero vector.
pub fn shortest_length(lattice: &LatticeBasis) -> Result<AbsValue> {
    Ok(AbsValue::Power(minima(lattice)?.first()))
}

/// All successive minima of a unimodular lattice equal 1.
pub fn is_well_rounded(lattice: &LatticeBasis) -> Result<bool> {
    lattice.require_unimodular()?;
    let prof = minima(lattice)?;
    Ok(prof.exponents.iter().all(|&e| e == 0))
}

/// Checks every structural claim of a [`MinimaProfile`] against its lattice:
/// the exponent sum, orthogonality of the reduced basis, unimodularity of
/// `h`, and the exact `u g h` identity with `u` in `GL_d(O)`, `|det u| = 1`.
/// Returns a description of the first failed check.
pub fn verify_profile(lattice: &LatticeBasis, prof: &MinimaProfile) -> std::result::Result<(), String> {
    let f = lattice.field();
    let d = lattice.dim();
    if prof.exponents.windows(2).any(|w| w[0] > w[1]) {
        return Err("exponents not ascending".into());
    }
    if prof.exponents.iter().sum::<i64>() != lattice.det_exponent() {
        return Err("exponent sum differs from det exponent".into());
    }
    let h_det = poly_mat_det(&prof.transform_h).map_err(|e| e.to_string())?;
    if !h_det.is_one() {
        return Err(format!("det h = {h_det}, expected 1"));
    }
    let h = RatMatrix::from_poly_matrix(&prof.transform_h);
    let gh = lattice.basis().mul(&h).map_err(|e| e.to_string())?;
    if gh != prof.reduced_basis {
        return Err("reduced basis is not g h".into());
    }
    let cols = prof.reduced_basis.columns();
    for (j, c) in cols.iter().enumerate() {
        if vec_norm(c).map_err(|e| e.to_string())? != AbsValue::Power(prof.exponents[j]) {
            return Err(format!("column {j} norm differs from λ_{}", j + 1));
        }
    }
    if !wedge_orthogonality(&cols).map_err(|e| e.to_string())? {
        return Err("reduced basis is not orthogonal".into());
    }
    let u = &prof.transform_u;
    if !u.entries_in_o() {
        return Err("u has an entry outside O".into());
    }
    if u.det().map_err(|e| e.to_string())?.abs() != AbsValue::ONE {
        return Err("|det u| != 1".into());
    }
    let ugh = u.mul(&gh).map_err(|e| e.to_string())?;
    if ugh != RatMatrix::x_diagonal(f, &prof.exponents) {
        return Err("u g h is not diag(x^e)".into());
    }
    if d != prof.exponents.len() {
        return Err("wrong number of exponents".into());
    }
    Ok(())
}
