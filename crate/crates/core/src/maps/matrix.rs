use std::fmt;
use std::ops::{Add, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::rational::{format_rational, parse_rational, Rational};

/// Dense square matrix of rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    dim: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        Self { dim, data: vec![Rational::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    /// Matrix unit `E_ij` (0-based).
    pub fn unit(dim: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(dim);
        m.set(i, j, Rational::one());
        m
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Rational) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        let data = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        Self { dim, data }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::InvalidParameter("empty matrix".into()));
        }
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
            }
            data.extend(row);
        }
        Ok(Self { dim, data })
    }

    /// Integer entries, row-major; for tests and small literals.
    pub fn from_ints(dim: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), dim * dim);
        Self::from_fn(dim, |i, j| Rational::from_integer(entries[i * dim + j].into()))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.data[i * self.dim + j] = value;
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut Rational {
        &mut self.data[i * self.dim + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Rational]> {
        self.data.chunks(self.dim)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (i + 1..self.dim).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> Rational {
        (0..self.dim).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        *out.entry_mut(i, j) += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `vᵀ M v`.
    pub fn quadratic_form(&self, v: &[Rational]) -> Result<Rational> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: v.len() });
        }
        let mut total = Rational::zero();
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() && !vj.is_zero() {
                    total += vi * a * vj;
                }
            }
        }
        Ok(total)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() })
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim, found: other.dim })
        }
    }

    pub(crate) fn entries(&self) -> &[Rational] {
        &self.data
    }
}

impl Add for &RatMatrix {
    type Output = RatMatrix;
    fn add(self, rhs: &RatMatrix) -> RatMatrix {
        self.checked_add(rhs).expect("matrix dimensions differ")
    }
}

impl Sub for &RatMatrix {
    type Output = RatMatrix;
    fn sub(self, rhs: &RatMatrix) -> RatMatrix {
        self.checked_sub(rhs).expect("matrix dimensions differ")
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(format_rational).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for RatMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self.rows().map(|r| r.iter().map(format_rational).collect()).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        let rows = rows
            .into_iter()
            .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        RatMatrix::from_rows(rows).map_err(D::Error::custom)
    }
}

/// An `n² × n²` matrix read as an `n × n` array of `n × n` blocks, i.e. an
/// operator on `Cⁿ ⊗ Cⁿ` with row index `i*n + k` for `|i⟩ ⊗ |k⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BlockMatrixRepr", into = "BlockMatrixRepr")]
pub struct BlockMatrix {
    block_dim: usize,
    matrix: RatMatrix,
}

#[derive(Serialize, Deserialize)]
struct BlockMatrixRepr {
    block_dim: usize,
    entries: RatMatrix,
}

impl TryFrom<BlockMatrixRepr> for BlockMatrix {
    type Error = Error;
    fn try_from(r: BlockMatrixRepr) -> Result<Self> {
        BlockMatrix::new(r.block_dim, r.entries)
    }
}

impl From<BlockMatrix> for BlockMatrixRepr {
    fn from(b: BlockMatrix) -> Self {
        Self { block_dim: b.block_dim, entries: b.matrix }
    }
}

impl BlockMatrix {
    pub fn new(block_dim: usize, matrix: RatMatrix) -> Result<Self> {
        if block_dim == 0 || block_dim * block_dim != matrix.dim() {
            return Err(Error::DimensionMismatch { expected: block_dim * block_dim, found: matrix.dim() });
        }
        Ok(Self { block_dim, matrix })
    }

    pub fn zeros(block_dim: usize) -> Self {
        Self { block_dim, matrix: RatMatrix::zeros(block_dim * block_dim) }
    }

    pub fn block_dim(&self) -> usize {
        self.block_dim
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> RatMatrix {
        self.matrix
    }

    /// Entry `⟨i,k| B |j,l⟩`.
    pub fn get(&self, i: usize, k: usize, j: usize, l: usize) -> &Rational {
        let n = self.block_dim;
        self.matrix.get(i * n + k, j * n + l)
    }

    pub fn block(&self, i: usize, j: usize) -> RatMatrix {
        RatMatrix::from_fn(self.block_dim, |k, l| self.get(i, k, j, l).clone())
    }

    /// Transposes every block in place, i.e. transposes the second tensor factor.
    pub fn partial_transpose(&self) -> Self {
        let n = self.block_dim;
        let matrix = RatMatrix::from_fn(n * n, |r, c| {
            let (i, k) = (r / n, r % n);
            let (j, l) = (c / n, c % n);
            self.get(i, l, j, k).clone()
        });
        Self { block_dim: n, matrix }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { block_dim: self.block_dim, matrix: self.matrix.scale(c) }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.block_dim != other.block_dim {
            return Err(Error::DimensionMismatch { expected: self.block_dim, found: other.block_dim });
        }
        Ok(Self { block_dim: self.block_dim, matrix: self.matrix.checked_add(&other.matrix)? })
    }
}
