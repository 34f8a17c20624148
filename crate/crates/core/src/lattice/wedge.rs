use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::ratfunc::{vec_norm, AbsValue, RatFunc};

/// `v_1 ∧ ... ∧ v_k` in coordinates: `φ_J` for each k-subset `J` of rows
/// (0-based, ascending), i.e. the `k x k` minor on rows `J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeVector {
    pub grade: usize,
    pub coords: BTreeMap<Vec<usize>, RatFunc>,
}

impl WedgeVector {
    /// `max_J |φ_J|`.
    pub fn norm(&self) -> AbsValue {
        self.coords
            .values()
            .map(RatFunc::abs)
            .max()
            .unwrap_or(AbsValue::Zero)
    }

    /// The subsets `J` with `φ_J != 0`.
    pub fn support(&self) -> Vec<Vec<usize>> {
        self.coords
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(j, _)| j.clone())
            .collect()
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn wedge(vectors: &[Vec<RatFunc>]) -> Result<WedgeVector> {
    let k = vectors.len();
    let Some(first) = vectors.first() else {
        return Err(Error::EmptyVector);
    };
    let d = first.len();
    if vectors.iter().any(|v| v.len() != d) || k > d {
        return Err(Error::BadDimensions(format!("{k} vectors of length {d}")));
    }
    let field = first[0].field();
    let mut coords = BTreeMap::new();
    for rows in subsets(d, k) {
        let minor: Vec<Vec<RatFunc>> = rows
            .iter()
            .map(|&i| vectors.iter().map(|v| v[i].clone()).collect())
            .collect();
        let det = RatMatrix::from_rows(field, minor)?.det()?;
        coords.insert(rows, det);
    }
    Ok(WedgeVector { grade: k, coords })
}

/// `‖v_1 ∧ ... ∧ v_m‖ = Π ‖v_i‖`.
pub fn wedge_orthogonality(vectors: &[Vec<RatFunc>]) -> Result<bool> {
    let w = wedge(vectors)?.norm();
    if w.is_zero() {
        return Err(Error::DependentVectors);
    }
    let mut prod = AbsValue::ONE;
    for v in vectors {
        prod = prod * vec_norm(v)?;
    }
    Ok(w == prod)
}
