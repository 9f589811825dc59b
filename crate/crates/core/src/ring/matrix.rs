use std::fmt;
use std::ops::{Index, IndexMut};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::poly::Poly;
use super::registry::{VarKind, VarRegistry};
use super::sample::RatSampler;
use super::Rat;
use crate::error::{Error, Result};

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Self {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape {
                expected: format!("rows of length {c}"),
                got: "ragged rows".into(),
            });
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn map<U: Clone>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        &mut self.data[r * self.cols + c]
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| self.data[r * self.cols + c].to_string())
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Rational matrices

impl Matrix<Rat> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, Rat::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { Rat::one() } else { Rat::zero() })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape {
                expected: format!("{} rows", self.cols),
                got: format!("{} rows", other.rows),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        if v.len() != self.cols {
            return Err(Error::Dimension {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .fold(Rat::zero(), |acc, x| acc + x)
            })
            .collect())
    }

    pub fn trace(&self) -> Rat {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)].clone())
            .fold(Rat::zero(), |a, b| a + b)
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = self[(row, col)].recip();
            for c in col..self.cols {
                let v = &self[(row, c)] * &inv;
                self[(row, c)] = v;
            }
            for r in 0..self.rows {
                if r == row || self[(r, col)].is_zero() {
                    continue;
                }
                let factor = self[(r, col)].clone();
                for c in col..self.cols {
                    if self[(row, c)].is_zero() {
                        continue;
                    }
                    let v = &self[(row, c)] * &factor;
                    self[(r, c)] -= v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right kernel `{v : M v = 0}`. Each vector has a 1 at its
    /// free column and zeros at the other free columns, so its first nonzero
    /// entry is 1.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rat::zero(); self.cols];
                v[f] = Rat::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -m[(i, f)].clone();
                }
                let lead = v.iter().find(|x| !x.is_zero()).cloned().unwrap();
                v.iter().map(|x| x / &lead).collect()
            })
            .collect()
    }

    /// Determinant by fraction-field elimination.
    pub fn det(&self) -> Result<Rat> {
        if self.rows != self.cols {
            return Err(Error::Shape {
                expected: "square matrix".into(),
                got: format!("{}x{}", self.rows, self.cols),
            });
        }
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Rat::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !m[(r, k)].is_zero()) else {
                return Ok(Rat::zero());
            };
            if p != k {
                m.swap_rows(p, k);
                det = -det;
            }
            let pivot = m[(k, k)].clone();
            det *= &pivot;
            for r in k + 1..n {
                if m[(r, k)].is_zero() {
                    continue;
                }
                let f = &m[(r, k)] / &pivot;
                for c in k..n {
                    let v = &m[(k, c)] * &f;
                    m[(r, c)] -= v;
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.rows;
        if n != self.cols {
            return Err(Error::Singular);
        }
        let mut aug = Self::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self[(r, c)].clone()
            } else if c - n == r {
                Rat::one()
            } else {
                Rat::zero()
            }
        });
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Ok(Self::from_fn(n, n, |r, c| aug[(r, c + n)].clone()))
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (0..r).all(|c| self[(r, c)] == self[(c, r)]))
    }
}

// ---------------------------------------------------------------------------
// Polynomial matrices

/// How [`Matrix::<Poly>::rank_with`] decides the generic rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankStrategy {
    /// Fraction-free elimination over the polynomial ring.
    Symbolic,
    /// Maximum rank over `trials` seeded random rational points.
    Random { seed: u64, trials: usize },
}

impl Matrix<Poly> {
    pub fn zeros_poly(reg: &Arc<VarRegistry>, rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, Poly::zero(reg))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Poly::is_zero)
    }

    pub fn rank_with(&self, strategy: RankStrategy) -> Result<usize> {
        match strategy {
            RankStrategy::Symbolic => Ok(self.bareiss_rank()),
            RankStrategy::Random { seed, trials } => self.random_rank(seed, trials),
        }
    }

    /// Generic rank by fraction-free (Bareiss) elimination with full
    /// pivoting. The pivot is the nonzero entry of lowest total degree, ties
    /// broken by lowest column and then lowest row.
    pub fn bareiss_rank(&self) -> usize {
        self.bareiss().0
    }

    /// Determinant of a square polynomial matrix by Bareiss elimination.
    pub fn bareiss_det(&self) -> Result<Poly> {
        if self.rows != self.cols {
            return Err(Error::Shape {
                expected: "square matrix".into(),
                got: format!("{}x{}", self.rows, self.cols),
            });
        }
        if self.rows == 0 {
            return Err(Error::Shape {
                expected: "nonempty matrix".into(),
                got: "0x0".into(),
            });
        }
        let (rank, last_pivot, sign) = self.bareiss();
        let reg = self.data[0].registry().clone();
        if rank < self.rows {
            return Ok(Poly::zero(&reg));
        }
        Ok(if sign { last_pivot } else { -&last_pivot })
    }

    /// Returns (rank, last pivot, even permutation parity).
    fn bareiss(&self) -> (usize, Poly, bool) {
        let mut m = self.clone();
        let reg = match m.data.first() {
            Some(p) => p.registry().clone(),
            None => return (0, Poly::one(&Arc::new(VarRegistry::new())), true),
        };
        let mut prev = Poly::one(&reg);
        let mut even = true;
        let n = m.rows.min(m.cols);
        let mut rank = 0;
        for k in 0..n {
            let mut best: Option<(u32, usize, usize)> = None;
            for c in k..m.cols {
                for r in k..m.rows {
                    let e = &m[(r, c)];
                    if e.is_zero() {
                        continue;
                    }
                    let d = e.total_degree();
                    if best.is_none_or(|(bd, _, _)| d < bd) {
                        best = Some((d, r, c));
                    }
                }
            }
            let Some((_, pr, pc)) = best else {
                break;
            };
            if pr != k {
                m.swap_rows(pr, k);
                even = !even;
            }
            if pc != k {
                m.swap_cols(pc, k);
                even = !even;
            }
            let pivot = m[(k, k)].clone();
            for r in k + 1..m.rows {
                let a_rk = m[(r, k)].clone();
                for c in k + 1..m.cols {
                    let mut v = &pivot * &m[(r, c)];
                    if !a_rk.is_zero() {
                        v.sub_assign_ref(&(&a_rk * &m[(k, c)]));
                    }
                    m[(r, c)] = v.div_exact(&prev).expect("Bareiss division is exact");
                }
                m[(r, k)] = Poly::zero(&reg);
            }
            prev = pivot;
            rank += 1;
        }
        (rank, prev, even)
    }

    /// Evaluates every entry at a rational assignment.
    pub fn eval_rat(&self, assignment: &std::collections::BTreeMap<usize, Rat>) -> Result<Matrix<Rat>> {
        let data = self
            .data
            .iter()
            .map(|p| p.eval_rat(assignment))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Maximum rank over `trials` random rational points for the coordinate
    /// variables. Any other variable must already be substituted.
    pub fn random_rank(&self, seed: u64, trials: usize) -> Result<usize> {
        let Some(first) = self.data.first() else {
            return Ok(0);
        };
        let reg = first.registry().clone();
        let mut stray: Vec<String> = self
            .data
            .iter()
            .flat_map(|p| p.non_coordinate_names())
            .collect();
        stray.sort();
        stray.dedup();
        if !stray.is_empty() {
            return Err(Error::UnsampledParameters(stray));
        }
        let coords = reg.ids_of_kind(VarKind::Coordinate);
        let mut sampler = RatSampler::new(seed);
        let mut best = 0;
        for _ in 0..trials.max(1) {
            let point = sampler.point(&coords);
            best = best.max(self.eval_rat(&point)?.rank());
        }
        Ok(best)
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (0..=r).all(|c| self[(r, c)] == -&self[(c, r)]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_poly, rat};

    fn rm(rows: &[&[i64]]) -> Matrix<Rat> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat(x, 1)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn nullspace_of_identity_is_trivial() {
        assert!(Matrix::<Rat>::identity(3).nullspace().is_empty());
    }

    #[test]
    fn nullspace_of_zero_matrix_is_everything() {
        let ns = Matrix::<Rat>::zeros(2, 3).nullspace();
        assert_eq!(ns.len(), 3);
    }

    #[test]
    fn nullspace_vectors_are_annihilated() {
        let m = rm(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let ns = m.nullspace();
        assert_eq!(ns.len() + m.rank(), 4);
        for v in &ns {
            assert!(m.mul_vec(v).unwrap().iter().all(Zero::is_zero));
            assert_eq!(v.iter().find(|x| !x.is_zero()).unwrap(), &rat(1, 1));
        }
    }

    #[test]
    fn det_and_inverse() {
        let m = rm(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(m.det().unwrap(), rat(18, 1));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(3));
        assert!(rm(&[&[1, 2], &[2, 4]]).inverse().is_err());
    }

    #[test]
    fn heisenberg_commutator_rank() {
        let reg = VarRegistry::for_algebra(3, &[] as &[&str]).unwrap();
        let x3 = parse_poly("x3", &reg).unwrap();
        let z = Poly::zero(&reg);
        let m = Matrix::from_rows(vec![
            vec![z.clone(), x3.clone(), z.clone()],
            vec![-&x3, z.clone(), z.clone()],
            vec![z.clone(), z.clone(), z.clone()],
        ])
        .unwrap();
        assert_eq!(m.bareiss_rank(), 2);
        assert_eq!(m.random_rank(3, 5).unwrap(), 2);
        assert!(m.is_antisymmetric());
    }

    #[test]
    fn bareiss_det_matches_expansion() {
        let reg = VarRegistry::for_algebra(3, &[] as &[&str]).unwrap();
        let p = |s: &str| parse_poly(s, &reg).unwrap();
        let m = Matrix::from_rows(vec![
            vec![p("x1"), p("x2"), p("0")],
            vec![p("x2"), p("x3"), p("1")],
            vec![p("0"), p("1"), p("x1")],
        ])
        .unwrap();
        // x1*(x3*x1 - 1) - x2*(x2*x1)
        let expected = p("x1^2*x3 - x1 - x1*x2^2");
        assert_eq!(m.bareiss_det().unwrap(), expected);
    }

    #[test]
    fn random_rank_refuses_parameters() {
        let reg = VarRegistry::for_algebra(2, &["lambda2"]).unwrap();
        let p = |s: &str| parse_poly(s, &reg).unwrap();
        let m = Matrix::from_rows(vec![vec![p("0"), p("lambda2*x1")], vec![p("-lambda2*x1"), p("0")]])
            .unwrap();
        assert!(matches!(m.random_rank(0, 5), Err(Error::UnsampledParameters(_))));
        assert_eq!(m.bareiss_rank(), 2);
    }
}
