//! Finite-dimensional C*-algebras `B = ⊕_α M_{n_α}(ℂ)` with a faithful
//! state `ψ = ⊕_α Tr(Q_α ·)`, where each `Q_α` is given by its eigenvalues in
//! a diagonalizing basis.
//!
//! Vectors of `B` are written in the orthonormal basis
//! `b_ij^α = ψ(e_jj^α)^{-1/2} e_ij^α`, enumerated block by block, then row,
//! then column.

use serde::{Deserialize, Serialize};

/// Relative tolerance for comparing state masses and `Tr(Q^{-1})` values.
pub const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AlgebraError {
    #[error("algebra has no blocks")]
    Empty,
    #[error("block {block}: size must be at least 1")]
    ZeroSize { block: usize },
    #[error("block {block}: expected {expected} eigenvalues, got {got}")]
    EigenvalueCount {
        block: usize,
        expected: usize,
        got: usize,
    },
    #[error("block {block}: eigenvalue {value} is not strictly positive")]
    NonPositive { block: usize, value: f64 },
    #[error("state has total mass {0}, expected 1")]
    Mass(f64),
    #[error("basis index out of range")]
    Index,
}

/// One summand `M_n(ℂ)` with the diagonal of its density `Q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixBlock {
    pub size: usize,
    pub q: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AlgebraRepr", into = "AlgebraRepr")]
pub struct MultiMatrixAlgebra {
    blocks: Vec<MatrixBlock>,
    offsets: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct AlgebraRepr {
    blocks: Vec<MatrixBlock>,
}

impl TryFrom<AlgebraRepr> for MultiMatrixAlgebra {
    type Error = AlgebraError;
    fn try_from(r: AlgebraRepr) -> Result<Self, AlgebraError> {
        MultiMatrixAlgebra::new(r.blocks)
    }
}

impl From<MultiMatrixAlgebra> for AlgebraRepr {
    fn from(a: MultiMatrixAlgebra) -> Self {
        AlgebraRepr { blocks: a.blocks }
    }
}

/// Matrix unit `e_ij^α` (or its normalized version), all indices 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisIndex {
    pub block: usize,
    pub row: usize,
    pub col: usize,
}

impl BasisIndex {
    pub fn new(block: usize, row: usize, col: usize) -> Self {
        BasisIndex { block, row, col }
    }
}

/// A scalar multiple of a matrix unit, the algebra unit, or zero. Products
/// of basis elements always land in one of these.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScaledUnit {
    Zero,
    One,
    Unit { coef: f64, index: BasisIndex },
}

/// One factor of the coarsest decomposition into δ-form pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaFactor {
    /// Indices of the original blocks making up this factor.
    pub blocks: Vec<usize>,
    /// Mass `ψ(1_{B_i})` of the factor before renormalization.
    pub weight: f64,
    /// The factor with its renormalized state.
    pub algebra: MultiMatrixAlgebra,
    pub delta: f64,
}

pub(crate) fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

impl MultiMatrixAlgebra {
    pub fn new(blocks: Vec<MatrixBlock>) -> Result<Self, AlgebraError> {
        if blocks.is_empty() {
            return Err(AlgebraError::Empty);
        }
        let mut mass = 0.0;
        for (block, b) in blocks.iter().enumerate() {
            if b.size == 0 {
                return Err(AlgebraError::ZeroSize { block });
            }
            if b.q.len() != b.size {
                return Err(AlgebraError::EigenvalueCount {
                    block,
                    expected: b.size,
                    got: b.q.len(),
                });
            }
            if let Some(&value) = b.q.iter().find(|&&v| !(v > 0.0 && v.is_finite())) {
                return Err(AlgebraError::NonPositive { block, value });
            }
            mass += b.q.iter().sum::<f64>();
        }
        if !approx_eq(mass, 1.0) {
            return Err(AlgebraError::Mass(mass));
        }
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut dim = 0;
        for b in &blocks {
            offsets.push(dim);
            dim += b.size * b.size;
        }
        Ok(MultiMatrixAlgebra { blocks, offsets })
    }

    /// `ℂⁿ` with the uniform state.
    pub fn uniform_diagonal(n: usize) -> Result<Self, AlgebraError> {
        let w = 1.0 / n as f64;
        Self::new(vec![MatrixBlock { size: 1, q: vec![w] }; n])
    }

    /// `ℂⁿ` with the given point masses.
    pub fn diagonal(weights: &[f64]) -> Result<Self, AlgebraError> {
        Self::new(
            weights
                .iter()
                .map(|&w| MatrixBlock { size: 1, q: vec![w] })
                .collect(),
        )
    }

    /// A single `M_n(ℂ)` with `Q = diag(q)`.
    pub fn full_matrix(q: &[f64]) -> Result<Self, AlgebraError> {
        Self::new(vec![MatrixBlock {
            size: q.len(),
            q: q.to_vec(),
        }])
    }

    pub fn blocks(&self) -> &[MatrixBlock] {
        &self.blocks
    }

    /// `dim B = Σ n_α²`.
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.size * b.size).sum()
    }

    /// `Q_{i,α} = ψ(e_ii^α)`.
    pub fn weight(&self, block: usize, i: usize) -> f64 {
        self.blocks[block].q[i]
    }

    pub fn is_valid(&self, x: BasisIndex) -> bool {
        x.block < self.blocks.len() && x.row < self.blocks[x.block].size && x.col < self.blocks[x.block].size
    }

    /// Basis indices in canonical order.
    pub fn basis(&self) -> Vec<BasisIndex> {
        let mut out = Vec::with_capacity(self.dim());
        for (block, b) in self.blocks.iter().enumerate() {
            for row in 0..b.size {
                for col in 0..b.size {
                    out.push(BasisIndex { block, row, col });
                }
            }
        }
        out
    }

    /// Position of a basis element in the canonical order.
    pub fn position(&self, x: BasisIndex) -> usize {
        self.offsets[x.block] + x.row * self.blocks[x.block].size + x.col
    }

    pub fn index_at(&self, pos: usize) -> BasisIndex {
        let block = self.offsets.partition_point(|&o| o <= pos) - 1;
        let n = self.blocks[block].size;
        let r = pos - self.offsets[block];
        BasisIndex {
            block,
            row: r / n,
            col: r % n,
        }
    }

    /// `ψ(e_ij^α) = δ_ij Q_{i,α}`.
    pub fn state_value(&self, x: BasisIndex) -> Result<f64, AlgebraError> {
        if !self.is_valid(x) {
            return Err(AlgebraError::Index);
        }
        Ok(if x.row == x.col {
            self.weight(x.block, x.row)
        } else {
            0.0
        })
    }

    /// `ψ(x)` for a scaled unit; `ψ(b_ii^α) = Q_{i,α}^{1/2}`.
    pub fn state(&self, x: ScaledUnit) -> f64 {
        match x {
            ScaledUnit::Zero => 0.0,
            ScaledUnit::One => 1.0,
            ScaledUnit::Unit { coef, index } if index.row == index.col => {
                coef * self.weight(index.block, index.row).sqrt()
            }
            ScaledUnit::Unit { .. } => 0.0,
        }
    }

    /// Product of matrix units, `e_ij^α e_kl^β = δ_αβ δ_jk e_il^α`.
    pub fn mul_units(&self, x: BasisIndex, y: BasisIndex) -> Option<BasisIndex> {
        (x.block == y.block && x.col == y.row).then_some(BasisIndex {
            block: x.block,
            row: x.row,
            col: y.col,
        })
    }

    /// Product of normalized basis elements:
    /// `b_ij^α b_kl^β = δ_αβ δ_jk ψ(e_jj^α)^{-1/2} b_il^α`.
    pub fn mul_basis(&self, x: BasisIndex, y: BasisIndex) -> ScaledUnit {
        match self.mul_units(x, y) {
            Some(index) => ScaledUnit::Unit {
                coef: self.weight(x.block, x.col).powf(-0.5),
                index,
            },
            None => ScaledUnit::Zero,
        }
    }

    /// Multiplies a running product (in normalized coordinates) on the right
    /// by the basis element `b_y`.
    pub fn mul_scaled(&self, x: ScaledUnit, y: BasisIndex) -> ScaledUnit {
        match x {
            ScaledUnit::Zero => ScaledUnit::Zero,
            ScaledUnit::One => ScaledUnit::Unit {
                coef: 1.0,
                index: y,
            },
            ScaledUnit::Unit { coef, index } => match self.mul_basis(index, y) {
                ScaledUnit::Unit { coef: c, index } => ScaledUnit::Unit {
                    coef: coef * c,
                    index,
                },
                other => other,
            },
        }
    }

    /// Ordered product of normalized basis elements; `One` when empty.
    pub fn product(&self, elements: impl IntoIterator<Item = BasisIndex>) -> ScaledUnit {
        elements
            .into_iter()
            .fold(ScaledUnit::One, |acc, y| self.mul_scaled(acc, y))
    }

    /// `ψ(y* x)` for two scaled units in normalized coordinates. Basis
    /// elements are real, so `(c·b_rs)* = c·ψ(e_ss)^{-1/2} e_sr`.
    pub fn pairing(&self, y: ScaledUnit, x: ScaledUnit) -> f64 {
        match (y, x) {
            (ScaledUnit::Zero, _) | (_, ScaledUnit::Zero) => 0.0,
            (ScaledUnit::One, x) => self.state(x),
            (ScaledUnit::Unit { coef, index }, ScaledUnit::One) => {
                // ψ(b_rs*) = ψ(b_sr) scaled, nonzero only on the diagonal.
                if index.row == index.col {
                    coef * self.weight(index.block, index.row).sqrt()
                } else {
                    0.0
                }
            }
            (ScaledUnit::Unit { coef: cy, index: iy }, ScaledUnit::Unit { coef: cx, index: ix }) => {
                // b_rs* b_ij = ψ(e_ss)^{-1/2} ψ(e_jj)^{-1/2} e_sr e_ij, and
                // ψ(e_sr e_ij) = δ_ri δ_sj Q_s.
                if iy.block == ix.block && iy.row == ix.row && iy.col == ix.col {
                    cy * cx
                } else {
                    0.0
                }
            }
        }
    }

    /// `Tr(Q_α^{-1})` for one block.
    pub fn inverse_trace(&self, block: usize) -> f64 {
        self.blocks[block].q.iter().map(|q| q.recip()).sum()
    }

    /// `ψ(1_α) = Tr(Q_α)`.
    pub fn block_mass(&self, block: usize) -> f64 {
        self.blocks[block].q.iter().sum()
    }

    /// `Some(δ)` when `Tr(Q_α^{-1})` is the same for every block.
    pub fn is_delta_form(&self) -> Option<f64> {
        let first = self.inverse_trace(0);
        (1..self.blocks.len())
            .all(|a| approx_eq(self.inverse_trace(a), first))
            .then_some(first)
    }

    /// Coarsest splitting `B = ⊕ B_i` such that each renormalized
    /// restriction `ψ_i` is a `δ_i`-form.
    ///
    /// Renormalizing a union of blocks by its mass `w` scales every
    /// `Tr(Q_α^{-1})` in it by the same `w`, so blocks can share a factor
    /// exactly when their raw `Tr(Q_α^{-1})` agree. Factors are listed in
    /// order of their first block.
    pub fn decompose_by_delta(&self) -> Vec<DeltaFactor> {
        let mut groups: Vec<(f64, Vec<usize>)> = Vec::new();
        for a in 0..self.blocks.len() {
            let t = self.inverse_trace(a);
            match groups.iter_mut().find(|(rep, _)| approx_eq(*rep, t)) {
                Some((_, members)) => members.push(a),
                None => groups.push((t, vec![a])),
            }
        }
        groups
            .into_iter()
            .map(|(t, members)| self.factor(members, t))
            .collect()
    }

    fn factor(&self, members: Vec<usize>, inverse_trace: f64) -> DeltaFactor {
        let weight: f64 = members.iter().map(|&a| self.block_mass(a)).sum();
        let blocks = members
            .iter()
            .map(|&a| MatrixBlock {
                size: self.blocks[a].size,
                q: self.blocks[a].q.iter().map(|q| q / weight).collect(),
            })
            .collect();
        let algebra = MultiMatrixAlgebra::new(blocks)
            .expect("renormalized restriction of a valid state is valid");
        DeltaFactor {
            blocks: members,
            weight,
            algebra,
            delta: inverse_trace * weight,
        }
    }

    /// Coordinates of the matrix unit `e_ij^α` in the normalized basis:
    /// `e_ij^α = ψ(e_jj^α)^{1/2} b_ij^α`.
    pub fn unit_vector(&self, x: BasisIndex) -> Vec<f64> {
        let mut v = vec![0.0; self.dim()];
        v[self.position(x)] = self.weight(x.block, x.col).sqrt();
        v
    }

    /// `⟨x, y⟩ = ψ(y* x)` for vectors given in normalized coordinates.
    ///
    /// Evaluated through the matrix units: with `x = Σ x_ij e_ij`,
    /// `ψ(y* x) = Σ_{α,i,j} conj(y_ij) x_ij Q_{j,α}`.
    pub fn inner_product(&self, x: &[f64], y: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dim());
        assert_eq!(y.len(), self.dim());
        let mut sum = 0.0;
        for (pos, idx) in self.basis().into_iter().enumerate() {
            let q = self.weight(idx.block, idx.col);
            let scale = q.powf(-0.5);
            let (xu, yu) = (x[pos] * scale, y[pos] * scale);
            sum += xu * yu * q;
        }
        sum
    }

    /// Coordinates of `1_B = Σ e_ii^α`.
    pub fn unit_element(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.dim()];
        for (block, b) in self.blocks.iter().enumerate() {
            for i in 0..b.size {
                let idx = BasisIndex::new(block, i, i);
                v[self.position(idx)] = b.q[i].sqrt();
            }
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4() -> MultiMatrixAlgebra {
        MultiMatrixAlgebra::uniform_diagonal(4).unwrap()
    }

    fn m2_uniform() -> MultiMatrixAlgebra {
        MultiMatrixAlgebra::full_matrix(&[0.5, 0.5]).unwrap()
    }

    #[test]
    fn validation() {
        assert_eq!(MultiMatrixAlgebra::new(vec![]), Err(AlgebraError::Empty));
        assert!(matches!(
            MultiMatrixAlgebra::diagonal(&[0.5, 0.6]),
            Err(AlgebraError::Mass(_))
        ));
        assert!(matches!(
            MultiMatrixAlgebra::diagonal(&[1.5, -0.5]),
            Err(AlgebraError::NonPositive { .. })
        ));
        let bad = MatrixBlock {
            size: 2,
            q: vec![1.0],
        };
        assert!(matches!(
            MultiMatrixAlgebra::new(vec![bad]),
            Err(AlgebraError::EigenvalueCount { .. })
        ));
        let json = r#"{"blocks": [{"size": 2, "q": [0.25, 0.25]}, {"size": 1, "q": [0.5]}]}"#;
        let a: MultiMatrixAlgebra = serde_json::from_str(json).unwrap();
        assert_eq!(a.dim(), 5);
        let back: MultiMatrixAlgebra =
            serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<MultiMatrixAlgebra>(r#"{"blocks":[{"size":1,"q":[0.0]}]}"#).is_err());
    }

    #[test]
    fn state_values() {
        let a = MultiMatrixAlgebra::full_matrix(&[0.25, 0.75]).unwrap();
        assert_eq!(a.state_value(BasisIndex::new(0, 0, 0)).unwrap(), 0.25);
        assert_eq!(a.state_value(BasisIndex::new(0, 0, 1)).unwrap(), 0.0);
        assert_eq!(c4().state_value(BasisIndex::new(0, 0, 0)).unwrap(), 0.25);
        assert!(a.state_value(BasisIndex::new(1, 0, 0)).is_err());
        let total: f64 = (0..4).map(|b| c4().state_value(BasisIndex::new(b, 0, 0)).unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn products() {
        let a = MultiMatrixAlgebra::full_matrix(&[0.2, 0.3, 0.5]).unwrap();
        assert_eq!(
            a.mul_units(BasisIndex::new(0, 0, 1), BasisIndex::new(0, 1, 2)),
            Some(BasisIndex::new(0, 0, 2))
        );
        assert_eq!(a.mul_units(BasisIndex::new(0, 0, 1), BasisIndex::new(0, 0, 2)), None);
        let c = c4();
        assert_eq!(c.mul_basis(BasisIndex::new(0, 0, 0), BasisIndex::new(1, 0, 0)), ScaledUnit::Zero);
        match c.mul_basis(BasisIndex::new(0, 0, 0), BasisIndex::new(0, 0, 0)) {
            ScaledUnit::Unit { coef, index } => {
                assert!((coef - 2.0).abs() < 1e-15);
                assert_eq!(index, BasisIndex::new(0, 0, 0));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn delta_forms() {
        for n in 1..7 {
            let d = MultiMatrixAlgebra::uniform_diagonal(n).unwrap().is_delta_form().unwrap();
            assert!((d - n as f64).abs() < 1e-9);
        }
        assert!((m2_uniform().is_delta_form().unwrap() - 4.0).abs() < 1e-12);
        assert_eq!(MultiMatrixAlgebra::diagonal(&[1.0 / 3.0, 2.0 / 3.0]).unwrap().is_delta_form(), None);
        // A single block is always a δ-form.
        let d = MultiMatrixAlgebra::full_matrix(&[1.0 / 3.0, 2.0 / 3.0]).unwrap().is_delta_form().unwrap();
        assert!((d - 4.5).abs() < 1e-12);
    }

    #[test]
    fn decomposition_of_a_delta_form_is_trivial() {
        let factors = m2_uniform().decompose_by_delta();
        assert_eq!(factors.len(), 1);
        assert_eq!(factors[0].algebra, m2_uniform());
        assert!((factors[0].delta - 4.0).abs() < 1e-12);
    }

    #[test]
    fn decomposition_splits_by_inverse_trace() {
        // ℂ³ and ℂ⁵, each with mass 1/2.
        let mut w = vec![1.0 / 6.0; 3];
        w.extend([0.1; 5]);
        let a = MultiMatrixAlgebra::diagonal(&w).unwrap();
        let factors = a.decompose_by_delta();
        assert_eq!(factors.len(), 2);
        assert_eq!(factors[0].blocks, vec![0, 1, 2]);
        assert_eq!(factors[1].blocks, vec![3, 4, 5, 6, 7]);
        assert!((factors[0].delta - 3.0).abs() < 1e-9);
        assert!((factors[1].delta - 5.0).abs() < 1e-9);
        for f in &factors {
            assert!((f.algebra.is_delta_form().unwrap() - f.delta).abs() < 1e-9);
        }
    }

    #[test]
    fn mixed_matrix_and_diagonal_blocks() {
        // ℂ² ⊕ M_2 with every eigenvalue 1/4: Tr(Q^{-1}) is 4, 4, 8.
        let a = MultiMatrixAlgebra::new(vec![
            MatrixBlock { size: 1, q: vec![0.25] },
            MatrixBlock { size: 1, q: vec![0.25] },
            MatrixBlock { size: 2, q: vec![0.25, 0.25] },
        ])
        .unwrap();
        let factors = a.decompose_by_delta();
        assert_eq!(factors.len(), 2);
        assert!((factors[0].delta - 2.0).abs() < 1e-12);
        assert!((factors[1].delta - 4.0).abs() < 1e-12);
        assert_eq!(factors[1].algebra, m2_uniform());
    }

    #[test]
    fn normalized_basis_is_orthonormal() {
        let a = MultiMatrixAlgebra::new(vec![
            MatrixBlock { size: 2, q: vec![0.1, 0.3] },
            MatrixBlock { size: 1, q: vec![0.6] },
        ])
        .unwrap();
        let n = a.dim();
        for x in 0..n {
            for y in 0..n {
                let mut ex = vec![0.0; n];
                let mut ey = vec![0.0; n];
                ex[x] = 1.0;
                ey[y] = 1.0;
                let ip = a.inner_product(&ex, &ey);
                assert!((ip - if x == y { 1.0 } else { 0.0 }).abs() < 1e-14);
            }
        }
        for idx in a.basis() {
            let e = a.unit_vector(idx);
            let ip = a.inner_product(&e, &e);
            assert!((ip - a.weight(idx.block, idx.col)).abs() < 1e-14);
        }
        let one = a.unit_element();
        assert!((a.inner_product(&one, &one) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn positions_round_trip() {
        let a = MultiMatrixAlgebra::new(vec![
            MatrixBlock { size: 2, q: vec![0.1, 0.3] },
            MatrixBlock { size: 1, q: vec![0.2] },
            MatrixBlock { size: 3, q: vec![0.1, 0.1, 0.2] },
        ])
        .unwrap();
        for (pos, idx) in a.basis().into_iter().enumerate() {
            assert_eq!(a.position(idx), pos);
            assert_eq!(a.index_at(pos), idx);
        }
    }
}
