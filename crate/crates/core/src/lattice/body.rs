use super::{minima, LatticeBasis};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::matrix::RatMatrix;
use crate::ratfunc::{AbsValue, RatFunc};

/// The convex body `C = h O^d` for a nonsingular `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexBody {
    shape: RatMatrix,
    shape_inv: RatMatrix,
    volume_exponent: i64,
}

impl ConvexBody {
    pub fn new(shape: RatMatrix) -> Result<Self> {
        if !shape.is_square() {
            return Err(Error::NotSquare {
                rows: shape.rows(),
                cols: shape.cols(),
            });
        }
        let volume_exponent = shape.det()?.abs().exponent().ok_or(Error::SingularMatrix)?;
        let shape_inv = shape.inverse()?;
        Ok(Self {
            shape,
            shape_inv,
            volume_exponent,
        })
    }

    /// The unit cube `O^d`.
    pub fn cube(field: FieldSpec, d: usize) -> Result<Self> {
        Self::new(RatMatrix::identity(field, d))
    }

    pub fn shape(&self) -> &RatMatrix {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.shape.rows()
    }

    /// `log_q Vol(C) = log_q |det h|`.
    pub fn volume_exponent(&self) -> i64 {
        self.volume_exponent
    }

    pub fn contains(&self, v: &[RatFunc]) -> Result<bool> {
        Ok(self.shape_inv.mul_vec(v)?.iter().all(RatFunc::in_o))
    }

    /// The lattice `h^{-1} Λ`, whose sup-norm geometry is the `C`-gauge
    /// geometry of `Λ`.
    pub fn pull_back(&self, lattice: &LatticeBasis) -> Result<LatticeBasis> {
        if lattice.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: lattice.dim(),
            });
        }
        lattice.transformed(&self.shape_inv)
    }
}

/// Covering radius with respect to `O^d`: `q^{-1} λ_d(Λ)`.
pub fn covrad_cube(lattice: &LatticeBasis) -> Result<AbsValue> {
    Ok(AbsValue::Power(minima(lattice)?.last() - 1))
}

/// Covering radius with respect to `C = h O^d`: `q^{-1} λ_d(h^{-1} Λ)`.
pub fn covrad_body(lattice: &LatticeBasis, body: &ConvexBody) -> Result<AbsValue> {
    covrad_cube(&body.pull_back(lattice)?)
}

/// Successive minima exponents of `Λ` with respect to the gauge of `C`.
pub fn minima_body(lattice: &LatticeBasis, body: &ConvexBody) -> Result<Vec<i64>> {
    Ok(minima(&body.pull_back(lattice)?)?.exponents)
}
