//! The linear maps `T_p : B^{⊗k} → B^{⊗l}` attached to noncrossing
//! partitions, as dense matrices in the normalized basis.
//!
//! Multi-indices are ordered row-major across tensor factors (the first
//! factor is the most significant digit), each factor using the canonical
//! basis order of [`MultiMatrixAlgebra`]. With that convention
//! `T_{p⊗q}` is the Kronecker product `T_p ⊗ T_q`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::algebra::{BasisIndex, MultiMatrixAlgebra, ScaledUnit};
use crate::partition::{self, Partition, PartitionError};

/// Largest number of matrix entries `n^{k+l}` built by default.
pub const DEFAULT_MAX_ENTRIES: usize = 1 << 24;

/// Singular values below this fraction of the largest count as zero.
pub const RANK_THRESHOLD: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TensorMapError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("size limit exceeded: map needs {entries} entries, limit is {limit}")]
    SizeLimit { entries: u128, limit: usize },
    #[error("state is not a δ-form; composition law needs a δ-form algebra")]
    NotDeltaForm,
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TensorMap {
    domain_power: usize,
    codomain_power: usize,
    dim: usize,
    matrix: DMatrix<f64>,
}

/// JSON form of a matrix: row-major `data`, rows indexed by lower
/// multi-indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl TensorMap {
    pub fn domain_power(&self) -> usize {
        self.domain_power
    }

    pub fn codomain_power(&self) -> usize {
        self.codomain_power
    }

    /// `dim B`.
    pub fn algebra_dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// `T_q T_p` where `self = T_p` is applied first.
    pub fn then(&self, after: &TensorMap) -> Result<TensorMap, TensorMapError> {
        if self.codomain_power != after.domain_power || self.dim != after.dim {
            return Err(TensorMapError::Shape(format!(
                "cannot compose B^⊗{} → B^⊗{} with B^⊗{} → B^⊗{}",
                self.domain_power, self.codomain_power, after.domain_power, after.codomain_power
            )));
        }
        Ok(TensorMap {
            domain_power: self.domain_power,
            codomain_power: after.codomain_power,
            dim: self.dim,
            matrix: &after.matrix * &self.matrix,
        })
    }

    pub fn tensor(&self, other: &TensorMap) -> TensorMap {
        TensorMap {
            domain_power: self.domain_power + other.domain_power,
            codomain_power: self.codomain_power + other.codomain_power,
            dim: self.dim,
            matrix: self.matrix.kronecker(&other.matrix),
        }
    }

    /// Hermitian adjoint; all entries are real, so this is the transpose.
    pub fn adjoint(&self) -> TensorMap {
        TensorMap {
            domain_power: self.codomain_power,
            codomain_power: self.domain_power,
            dim: self.dim,
            matrix: self.matrix.transpose(),
        }
    }

    pub fn scaled(&self, factor: f64) -> TensorMap {
        TensorMap {
            matrix: &self.matrix * factor,
            ..self.clone()
        }
    }

    /// `max |a_ij − b_ij|`; infinite when the shapes differ.
    pub fn max_deviation(&self, other: &TensorMap) -> f64 {
        if self.matrix.shape() != other.matrix.shape() {
            return f64::INFINITY;
        }
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Frobenius pairing `trace(other† self)`.
    pub fn frobenius_inner(&self, other: &TensorMap) -> f64 {
        self.matrix.dot(&other.matrix)
    }

    pub fn to_json(&self) -> MatrixJson {
        let (rows, cols) = self.matrix.shape();
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            data.extend(self.matrix.row(r).iter());
        }
        MatrixJson { rows, cols, data }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in self.matrix.row_iter() {
            let cells: Vec<String> = row.iter().map(|x| format!("{x}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Basis legend `(α, i, j)`, 1-based, in canonical order.
pub fn basis_legend(algebra: &MultiMatrixAlgebra) -> Vec<[usize; 3]> {
    algebra
        .basis()
        .into_iter()
        .map(|b| [b.block + 1, b.row + 1, b.col + 1])
        .collect()
}

/// `δ_p^{α,β}(ij, rs) = Π_v ψ((b_v^↓)* b_v^↑)` over the blocks of `p`, where
/// `b_v^↑` (`b_v^↓`) multiplies the basis elements on the block's upper
/// (lower) points left to right, and an empty product is `1_B`.
pub fn delta_coefficient(
    algebra: &MultiMatrixAlgebra,
    p: &Partition,
    upper: &[BasisIndex],
    lower: &[BasisIndex],
) -> Result<f64, TensorMapError> {
    if upper.len() != p.upper_count() || lower.len() != p.lower_count() {
        return Err(TensorMapError::Shape(format!(
            "NC({},{}) needs {}+{} indices, got {}+{}",
            p.upper_count(),
            p.lower_count(),
            p.upper_count(),
            p.lower_count(),
            upper.len(),
            lower.len()
        )));
    }
    if let Some(bad) = upper.iter().chain(lower).find(|&&x| !algebra.is_valid(x)) {
        return Err(TensorMapError::Shape(format!("basis index {bad:?} out of range")));
    }
    Ok(coefficient(algebra, &p.blocks(), upper, lower))
}

fn coefficient(
    algebra: &MultiMatrixAlgebra,
    blocks: &[partition::Block],
    upper: &[BasisIndex],
    lower: &[BasisIndex],
) -> f64 {
    let mut value = 1.0;
    for block in blocks {
        let up = algebra.product(block.upper.iter().map(|&i| upper[i]));
        if up == ScaledUnit::Zero {
            return 0.0;
        }
        let down = algebra.product(block.lower.iter().map(|&j| lower[j]));
        value *= algebra.pairing(down, up);
        if value == 0.0 {
            return 0.0;
        }
    }
    value
}

fn checked_entries(dim: usize, points: usize, limit: usize) -> Result<usize, TensorMapError> {
    let entries = (dim as u128).checked_pow(points as u32).unwrap_or(u128::MAX);
    if entries > limit as u128 {
        return Err(TensorMapError::SizeLimit { entries, limit });
    }
    Ok(entries as usize)
}

/// Decodes every multi-index of length `power` in canonical order.
fn multi_indices(algebra: &MultiMatrixAlgebra, power: usize) -> Vec<Vec<BasisIndex>> {
    let basis = algebra.basis();
    let n = basis.len();
    let total = n.pow(power as u32);
    (0..total)
        .map(|mut code| {
            let mut idx = vec![basis[0]; power];
            for slot in idx.iter_mut().rev() {
                *slot = basis[code % n];
                code /= n;
            }
            idx
        })
        .collect()
}

pub fn build_map(algebra: &MultiMatrixAlgebra, p: &Partition) -> Result<TensorMap, TensorMapError> {
    build_map_with_limit(algebra, p, DEFAULT_MAX_ENTRIES)
}

/// Matrix of `T_p`: entry (lower multi-index, upper multi-index) is the
/// coefficient `δ_p`.
pub fn build_map_with_limit(
    algebra: &MultiMatrixAlgebra,
    p: &Partition,
    max_entries: usize,
) -> Result<TensorMap, TensorMapError> {
    let (k, l) = (p.upper_count(), p.lower_count());
    let n = algebra.dim();
    checked_entries(n, k + l, max_entries)?;
    let blocks = p.blocks();
    let uppers = multi_indices(algebra, k);
    let lowers = multi_indices(algebra, l);
    let mut matrix = DMatrix::zeros(lowers.len(), uppers.len());
    for (r, lower) in lowers.iter().enumerate() {
        for (c, upper) in uppers.iter().enumerate() {
            matrix[(r, c)] = coefficient(algebra, &blocks, upper, lower);
        }
    }
    Ok(TensorMap {
        domain_power: k,
        codomain_power: l,
        dim: n,
        matrix,
    })
}

/// Deviation `max |T_{qp} − δ^{−cy(p,q)} T_q T_p|` for `p` on top of `q`.
pub fn verify_composition(
    algebra: &MultiMatrixAlgebra,
    p: &Partition,
    q: &Partition,
) -> Result<f64, TensorMapError> {
    let delta = algebra.is_delta_form().ok_or(TensorMapError::NotDeltaForm)?;
    let comp = p.compose(q)?;
    let tp = build_map(algebra, p)?;
    let tq = build_map(algebra, q)?;
    let direct = build_map(algebra, &comp.result)?;
    let via = tp.then(&tq)?.scaled(delta.powi(-(comp.cycles as i32)));
    Ok(direct.max_deviation(&via))
}

/// Numerical rank of the Gram matrix `G_pq = trace(T_q† T_p)`.
pub fn gram_rank(maps: &[TensorMap]) -> Result<usize, TensorMapError> {
    let Some(first) = maps.first() else {
        return Ok(0);
    };
    if let Some(m) = maps.iter().find(|m| {
        (m.domain_power, m.codomain_power, m.dim) != (first.domain_power, first.codomain_power, first.dim)
    }) {
        return Err(TensorMapError::Shape(format!(
            "maps B^⊗{} → B^⊗{} and B^⊗{} → B^⊗{} cannot share a Gram matrix",
            first.domain_power, first.codomain_power, m.domain_power, m.codomain_power
        )));
    }
    let size = maps.len();
    let mut gram = DMatrix::zeros(size, size);
    for a in 0..size {
        for b in a..size {
            let g = maps[a].frobenius_inner(&maps[b]);
            gram[(a, b)] = g;
            gram[(b, a)] = g;
        }
    }
    let singular = gram.svd(false, false).singular_values;
    let largest = singular.iter().copied().fold(0.0, f64::max);
    if largest == 0.0 {
        return Ok(0);
    }
    Ok(singular.iter().filter(|&&s| s > RANK_THRESHOLD * largest).count())
}

/// Builds `T_p` for every `p ∈ NC(k, l)` in enumeration order.
pub fn maps_for(algebra: &MultiMatrixAlgebra, upper: usize, lower: usize) -> Result<Vec<TensorMap>, TensorMapError> {
    partition::enumerate(upper, lower)?
        .iter()
        .map(|p| build_map(algebra, p))
        .collect()
}

/// `|NC(k, l)|`, the dimension of `Hom(u^{⊗k}, u^{⊗l})` once `dim B ≥ 4`.
pub fn hom_dimension(upper: usize, lower: usize) -> Result<u64, TensorMapError> {
    Ok(partition::count(upper, lower, partition::DEFAULT_MAX_POINTS)?)
}
