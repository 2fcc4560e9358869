use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::{BlockMatrix, RatMatrix};
use super::permutation::Permutation;
use super::psd::{is_psd_exact, PsdVerdict};
use crate::error::{Error, Result};
use crate::poly::rational::{int, Rational};

/// A linear map `Mₙ → Mₙ` stored through its Choi blocks `block(i, j) = Φ(E_ij)`.
///
/// Only real, hermiticity-preserving maps are representable:
/// `block(j, i) = block(i, j)ᵀ` is checked on construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LinearMapRepr", into = "LinearMapRepr")]
pub struct LinearMap {
    n: usize,
    blocks: Vec<RatMatrix>,
}

#[derive(Serialize, Deserialize)]
struct LinearMapRepr {
    n: usize,
    blocks: Vec<Vec<RatMatrix>>,
}

impl TryFrom<LinearMapRepr> for LinearMap {
    type Error = Error;
    fn try_from(r: LinearMapRepr) -> Result<Self> {
        if r.blocks.len() != r.n {
            return Err(Error::DimensionMismatch { expected: r.n, found: r.blocks.len() });
        }
        LinearMap::from_blocks(r.n, r.blocks.into_iter().flatten().collect())
    }
}

impl From<LinearMap> for LinearMapRepr {
    fn from(m: LinearMap) -> Self {
        let n = m.n;
        let mut rows = Vec::with_capacity(n);
        let mut it = m.blocks.into_iter();
        for _ in 0..n {
            rows.push(it.by_ref().take(n).collect());
        }
        Self { n, blocks: rows }
    }
}

/// CP / CCP verdicts of a map, each with exact evidence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapClassification {
    pub completely_positive: PsdVerdict,
    pub completely_copositive: PsdVerdict,
}

impl MapClassification {
    pub fn is_completely_positive(&self) -> bool {
        self.completely_positive.is_psd()
    }

    pub fn is_completely_copositive(&self) -> bool {
        self.completely_copositive.is_psd()
    }
}

impl LinearMap {
    /// Blocks in row-major order: `blocks[i*n + j] = Φ(E_ij)`.
    pub fn from_blocks(n: usize, blocks: Vec<RatMatrix>) -> Result<Self> {
        if n == 0 || blocks.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: blocks.len() });
        }
        if let Some(b) = blocks.iter().find(|b| b.dim() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: b.dim() });
        }
        let map = Self { n, blocks };
        for i in 0..n {
            for j in i..n {
                if *map.block(j, i) != map.block(i, j).transpose() {
                    return Err(Error::NotHermiticityPreserving(i, j));
                }
            }
        }
        Ok(map)
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> RatMatrix) -> Result<Self> {
        Self::from_blocks(n, (0..n * n).map(|k| f(k / n, k % n)).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| RatMatrix::unit(n, i, j)).expect("identity preserves hermiticity")
    }

    pub fn transpose_map(n: usize) -> Self {
        Self::from_fn(n, |i, j| RatMatrix::unit(n, j, i)).expect("transpose preserves hermiticity")
    }

    /// `A ↦ V A Vᵀ`.
    pub fn congruence(v: &RatMatrix) -> Self {
        let vt = v.transpose();
        let n = v.dim();
        Self::from_fn(n, |i, j| v.matmul(&RatMatrix::unit(n, i, j)).and_then(|m| m.matmul(&vt)).unwrap())
            .expect("congruences preserve hermiticity")
    }

    /// `A ↦ V Aᵀ Vᵀ`.
    pub fn transpose_congruence(v: &RatMatrix) -> Self {
        let vt = v.transpose();
        let n = v.dim();
        Self::from_fn(n, |i, j| v.matmul(&RatMatrix::unit(n, j, i)).and_then(|m| m.matmul(&vt)).unwrap())
            .expect("congruences preserve hermiticity")
    }

    /// Recovers the map whose Choi matrix is `c`.
    pub fn from_choi(c: &BlockMatrix) -> Result<Self> {
        let n = c.block_dim();
        Self::from_fn(n, |i, j| c.block(i, j))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn block(&self, i: usize, j: usize) -> &RatMatrix {
        &self.blocks[i * self.n + j]
    }

    pub fn apply(&self, a: &RatMatrix) -> Result<RatMatrix> {
        if a.dim() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: a.dim() });
        }
        let mut out = RatMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let coeff = a.get(i, j);
                if coeff.is_zero() {
                    continue;
                }
                out = &out + &self.block(i, j).scale(coeff);
            }
        }
        Ok(out)
    }

    /// `C_Φ = Σ |i⟩⟨j| ⊗ Φ(|i⟩⟨j|)`.
    pub fn choi(&self) -> BlockMatrix {
        let n = self.n;
        let m = RatMatrix::from_fn(n * n, |r, c| self.block(r / n, c / n).get(r % n, c % n).clone());
        BlockMatrix::new(n, m).expect("n² × n² by construction")
    }

    /// `W_Φ = C_Φ / n`.
    pub fn witness(&self) -> BlockMatrix {
        self.choi().scale(&Rational::new(1.into(), (self.n as i64).into()))
    }

    pub fn choi_and_witness(&self) -> (BlockMatrix, BlockMatrix) {
        let c = self.choi();
        let w = c.scale(&Rational::new(1.into(), (self.n as i64).into()));
        (c, w)
    }

    /// CP iff `C_Φ ⪰ 0`; CCP iff `C_Φ^Γ ⪰ 0`.
    pub fn classify(&self) -> MapClassification {
        let c = self.choi();
        let completely_positive = is_psd_exact(c.matrix()).expect("Choi matrices of these maps are symmetric");
        let completely_copositive =
            is_psd_exact(c.partial_transpose().matrix()).expect("Choi matrices of these maps are symmetric");
        MapClassification { completely_positive, completely_copositive }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a + b).collect();
        Ok(Self { n: self.n, blocks })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { n: self.n, blocks: self.blocks.iter().map(|b| b.scale(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(RatMatrix::is_zero)
    }

    /// `Some(c)` when `self = c · other` (with `other` nonzero).
    pub fn ratio_to(&self, other: &Self) -> Option<Rational> {
        if self.n != other.n {
            return None;
        }
        let (pos, pivot) = other
            .blocks
            .iter()
            .flat_map(|b| b.entries().iter())
            .enumerate()
            .find(|(_, x)| !x.is_zero())?;
        let mine = self.blocks.iter().flat_map(|b| b.entries().iter()).nth(pos)?;
        let c = mine / pivot;
        (other.scale(&c) == *self).then_some(c)
    }

    /// The map `Σ_{maps}`; errors on an empty list or mixed dimensions.
    pub fn sum<'a>(maps: impl IntoIterator<Item = &'a LinearMap>) -> Result<Self> {
        let mut it = maps.into_iter();
        let first = it.next().ok_or_else(|| Error::InvalidParameter("empty sum of maps".into()))?.clone();
        it.try_fold(first, |acc, m| acc.checked_add(m))
    }
}

pub(crate) fn check_qi_hou_params(n: usize, k: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("n = {n}: need n >= 3")));
    }
    if k == 0 || k >= n {
        return Err(Error::InvalidParameter(format!("k = {k}: need 1 <= k <= n-1 = {}", n - 1)));
    }
    Ok(())
}

/// The map `A ↦ diag(b) − A` with `b_i = (n−1)·a_ii + a_{σ(i)σ(i)}` and
/// `σ(i) = i + k (mod n)`.
pub fn qi_hou_map(n: usize, k: usize) -> Result<LinearMap> {
    check_qi_hou_params(n, k)?;
    let sigma = Permutation::shift(n, k);
    LinearMap::from_fn(n, |i, j| {
        let mut block = RatMatrix::zeros(n);
        if i == j {
            // E_ii contributes n−1 to b_i and 1 to every b_l with σ(l) = i
            *block.entry_mut(i, i) += int(n as i64 - 1);
            let l = sigma.inverse().apply(i);
            *block.entry_mut(l, l) += Rational::one();
        }
        *block.entry_mut(i, j) -= Rational::one();
        block
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(v: &[i64]) -> RatMatrix {
        RatMatrix::diagonal(&v.iter().map(|&x| int(x)).collect::<Vec<_>>())
    }

    #[test]
    fn qi_hou_on_matrix_units() {
        let m = qi_hou_map(3, 1).unwrap();
        assert_eq!(m.apply(&RatMatrix::unit(3, 0, 0)).unwrap(), diag(&[1, 0, 1]));
        let m = qi_hou_map(4, 2).unwrap();
        assert_eq!(m.apply(&RatMatrix::unit(4, 2, 2)).unwrap(), diag(&[1, 0, 2, 0]));
    }

    #[test]
    fn qi_hou_on_identity() {
        for n in 3..=7 {
            for k in 1..n {
                let m = qi_hou_map(n, k).unwrap();
                let out = m.apply(&RatMatrix::identity(n)).unwrap();
                assert_eq!(out, RatMatrix::identity(n).scale(&int(n as i64 - 1)), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn qi_hou_parameters() {
        assert!(qi_hou_map(2, 1).is_err());
        assert!(qi_hou_map(4, 0).is_err());
        assert!(qi_hou_map(4, 4).is_err());
    }

    #[test]
    fn apply_edge_cases() {
        let m = qi_hou_map(3, 1).unwrap();
        assert!(m.apply(&RatMatrix::zeros(3)).unwrap().is_zero());
        assert!(m.apply(&RatMatrix::identity(4)).is_err());
    }

    #[test]
    fn identity_map_choi() {
        let (c, w) = LinearMap::identity(2).choi_and_witness();
        let expected = RatMatrix::from_ints(4, &[1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1]);
        assert_eq!(c.matrix(), &expected);
        assert_eq!(w.matrix(), &expected.scale(&crate::poly::ratio(1, 2)));
        let swap = RatMatrix::from_ints(4, &[1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1]);
        assert_eq!(c.partial_transpose().matrix(), &swap);
    }

    #[test]
    fn qi_hou_choi_blocks() {
        let c = qi_hou_map(3, 1).unwrap().choi();
        assert_eq!(c.block(0, 0), diag(&[1, 0, 1]));
        assert_eq!(c.block(1, 1), diag(&[1, 1, 0]));
        assert_eq!(c.block(2, 2), diag(&[0, 1, 1]));
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(c.block(i, j), RatMatrix::unit(3, i, j).scale(&int(-1)));
                }
            }
        }
    }

    #[test]
    fn choi_trace() {
        for n in 3..=6 {
            for k in 1..n {
                let m = qi_hou_map(n, k).unwrap();
                let direct: Rational = (0..n).map(|i| m.block(i, i).trace()).sum();
                assert_eq!(m.choi().matrix().trace(), direct);
                assert_eq!(direct, int((n * (n - 1)) as i64));
            }
        }
    }

    #[test]
    fn rejects_non_hermiticity_preserving_blocks() {
        let blocks = vec![RatMatrix::unit(2, 0, 1), RatMatrix::zeros(2), RatMatrix::zeros(2), RatMatrix::zeros(2)];
        assert!(matches!(LinearMap::from_blocks(2, blocks), Err(Error::NotHermiticityPreserving(0, 0))));
    }

    #[test]
    fn classification() {
        let id = LinearMap::identity(3).classify();
        assert!(id.is_completely_positive());
        assert!(!id.is_completely_copositive());
        let t = LinearMap::transpose_map(3).classify();
        assert!(!t.is_completely_positive());
        assert!(t.is_completely_copositive());
        let q = qi_hou_map(4, 1).unwrap();
        let class = q.classify();
        assert!(!class.is_completely_positive());
        assert!(!class.is_completely_copositive());
        let c = q.choi();
        assert!(class.completely_positive.verify(c.matrix()));
        assert!(class.completely_copositive.verify(c.partial_transpose().matrix()));
    }

    #[test]
    fn json_shape_and_roundtrip() {
        let m = qi_hou_map(3, 2).unwrap();
        let v = serde_json::to_value(&m).unwrap();
        assert_eq!(v["n"], 3);
        assert_eq!(v["blocks"][0][1][0][1], "-1");
        let back: LinearMap = serde_json::from_value(v).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn map_algebra() {
        let m = qi_hou_map(4, 1).unwrap();
        assert_eq!(m.scale(&int(3)).ratio_to(&m), Some(int(3)));
        assert_eq!(LinearMap::identity(4).ratio_to(&m), None);
        assert_eq!(LinearMap::from_choi(&m.choi()).unwrap(), m);
        let sum = LinearMap::sum([&m, &m]).unwrap();
        assert_eq!(sum, m.scale(&int(2)));
    }
}
