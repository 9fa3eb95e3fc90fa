//! Dense exact matrices with rank, kernel, solve and inverse.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::scalar::{GaussianRational, Rational, Scalar};
use super::LinalgError;

/// Row-major dense matrix over an exact field.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// Matrix over Q(i).
pub type ExactMatrix = Matrix<GaussianRational>;
/// Matrix over Q.
pub type RationalMatrix = Matrix<Rational>;

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from rows; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::Ragged);
        }
        let n = rows.len();
        Ok(Matrix { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    /// Builds a matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<T>]) -> Result<Self, LinalgError> {
        if columns.iter().any(|c| c.len() != rows) {
            return Err(LinalgError::Ragged);
        }
        Ok(Self::from_fn(rows, columns.len(), |r, c| columns[c][r].clone()))
    }

    pub fn diagonal(entries: &[T]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (k, e) in entries.iter().enumerate() {
            m[(k, k)] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    /// Entrywise conjugate.
    pub fn conj(&self) -> Self {
        self.map(Scalar::conj)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.mul_ref(s))
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    fn check_same_shape(&self, other: &Self) -> Result<(), LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: (self.rows, self.cols),
                found: (other.rows, other.cols),
            });
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: (self.cols, other.cols),
                found: (other.rows, other.cols),
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
                        out[(r, c)] += &a.mul_ref(b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch { expected: (self.cols, 1), found: (v.len(), 1) });
        }
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = T::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &a.mul_ref(b);
                    }
                }
                acc
            })
            .collect())
    }

    /// Stacks `other` to the right of `self`.
    pub fn hstack(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.rows != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: (self.rows, other.cols),
                found: (other.rows, other.cols),
            });
        }
        Ok(Self::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                other[(r, c - self.cols)].clone()
            }
        }))
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: (other.rows, self.cols),
                found: (other.rows, other.cols),
            });
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix { rows: self.rows + other.rows, cols: self.cols, data })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Exact rank by fraction-free (Bareiss) elimination.
    ///
    /// Each row is first scaled by the lcm of its denominators so that the
    /// elimination runs over Z (or Z[i]) and every division by the previous
    /// pivot is exact.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        for r in 0..a.rows {
            let l = a
                .row(r)
                .iter()
                .map(Scalar::denominator_lcm)
                .fold(BigInt::one(), |acc, d| acc.lcm(&d));
            if !l.is_one() {
                let s = T::from_rational(Rational::from_integer(l));
                for c in 0..a.cols {
                    a[(r, c)] *= &s;
                }
            }
        }
        a.bareiss().0
    }

    /// Bareiss forward elimination in place. Returns `(rank, sign of row permutation)`.
    fn bareiss(&mut self) -> (usize, bool) {
        let mut prev = T::one();
        let mut rank = 0;
        let mut negated = false;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(p) = (rank..self.rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            if p != rank {
                self.swap_rows(p, rank);
                negated = !negated;
            }
            let pivot = self[(rank, col)].clone();
            for r in rank + 1..self.rows {
                let factor = self[(r, col)].clone();
                for c in col + 1..self.cols {
                    let mut v = self[(r, c)].mul_ref(&pivot);
                    if !factor.is_zero() {
                        v -= &factor.mul_ref(&self[(rank, c)]);
                    }
                    v /= &prev;
                    self[(r, c)] = v;
                }
                self[(r, col)] = T::zero();
            }
            prev = pivot;
            rank += 1;
        }
        (rank, negated)
    }

    /// Exact determinant of a square matrix via Bareiss elimination.
    pub fn determinant(&self) -> Result<T, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols });
        }
        if self.rows == 0 {
            return Ok(T::one());
        }
        let mut a = self.clone();
        let (rank, negated) = a.bareiss();
        if rank < self.rows {
            return Ok(T::zero());
        }
        let d = a[(self.rows - 1, self.cols - 1)].clone();
        Ok(if negated { -d } else { d })
    }

    /// Reduced row echelon form; returns the reduced matrix and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..a.cols {
            if row == a.rows {
                break;
            }
            let Some(p) = (row..a.rows).find(|&r| !a[(r, col)].is_zero()) else {
                continue;
            };
            a.swap_rows(p, row);
            let inv = T::one() / a[(row, col)].clone();
            for c in col..a.cols {
                if !a[(row, c)].is_zero() {
                    a[(row, c)] *= &inv;
                }
            }
            let pivot_row: Vec<(usize, T)> = (col..a.cols)
                .filter(|&c| !a[(row, c)].is_zero())
                .map(|c| (c, a[(row, c)].clone()))
                .collect();
            for r in 0..a.rows {
                if r == row || a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone();
                for (c, v) in &pivot_row {
                    a[(r, *c)] -= &factor.mul_ref(v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (a, pivots)
    }

    /// A basis of the right null space `{v : self * v = 0}`.
    ///
    /// The basis is the standard one read off the reduced row echelon form:
    /// one vector per free column, with a 1 in that column.
    pub fn kernel_basis(&self) -> Vec<Vec<T>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![T::zero(); self.cols];
                v[f] = T::one();
                for (k, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(k, f)].clone();
                }
                v
            })
            .collect()
    }

    /// One exact solution `x` of `self * x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &Self) -> Result<Option<Self>, LinalgError> {
        if b.rows != self.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: (self.rows, b.cols),
                found: (b.rows, b.cols),
            });
        }
        let (r, pivots) = self.hstack(b)?.rref();
        if pivots.last().is_some_and(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = Self::zeros(self.cols, b.cols);
        for (k, &p) in pivots.iter().enumerate() {
            for c in 0..b.cols {
                x[(p, c)] = r[(k, self.cols + c)].clone();
            }
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Result<Self, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let (r, pivots) = self.hstack(&Self::identity(n))?.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(LinalgError::Singular);
        }
        Ok(Self::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
    }
}

impl RationalMatrix {
    /// Embeds a rational matrix into Q(i).
    pub fn to_gaussian(&self) -> ExactMatrix {
        self.map(|x| GaussianRational::real(x.clone()))
    }
}

impl ExactMatrix {
    /// Real part when every entry is real, `None` otherwise.
    pub fn to_rational(&self) -> Option<RationalMatrix> {
        if self.data.iter().all(GaussianRational::is_real) {
            Some(self.map(|x| x.re.clone()))
        } else {
            None
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        &mut self.data[r * self.cols + c]
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    /// Panics on a shape mismatch; use [`Matrix::try_mul`] to get an error instead.
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.try_mul(rhs).expect("matrix shape mismatch")
    }
}

impl<T: Scalar> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Whether `vectors` are linearly independent.
pub fn independent<T: Scalar>(len: usize, vectors: &[Vec<T>]) -> bool {
    if vectors.is_empty() {
        return true;
    }
    match Matrix::from_columns(len, vectors) {
        Ok(m) => m.rank() == vectors.len(),
        Err(_) => false,
    }
}

/// `a + s * b`, entrywise.
pub fn axpy<T: Scalar>(a: &[T], s: &T, b: &[T]) -> Vec<T> {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let mut out = x.clone();
            if !y.is_zero() && !s.is_zero() {
                out += &s.mul_ref(y);
            }
            out
        })
        .collect()
}

pub fn scale_vec<T: Scalar>(s: &T, v: &[T]) -> Vec<T> {
    v.iter().map(|x| s.mul_ref(x)).collect()
}

pub fn is_zero_vec<T: Scalar>(v: &[T]) -> bool {
    v.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_ints(re, im)
    }

    fn gm(rows: &[&[i64]]) -> ExactMatrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| g(x, 0)).collect()).collect()).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(ExactMatrix::identity(4).rank(), 4);
        assert_eq!(ExactMatrix::zeros(3, 5).rank(), 0);
        assert_eq!(gm(&[&[1, 1], &[2, 2]]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(ExactMatrix::identity(3).kernel_basis().is_empty());
        assert_eq!(ExactMatrix::zeros(2, 3).kernel_basis().len(), 3);
        let k = gm(&[&[1, 1, 0], &[0, 0, 1]]).kernel_basis();
        assert_eq!(k.len(), 1);
        // proportional to (1, -1, 0)
        let v = &k[0];
        assert!(v[2].is_zero());
        assert_eq!(v[0].clone() + v[1].clone(), g(0, 0));
        assert!(!v[0].is_zero());
    }

    #[test]
    fn solve_examples() {
        let b = gm(&[&[3], &[-1]]);
        assert_eq!(ExactMatrix::identity(2).solve(&b).unwrap().unwrap(), b);

        let m = gm(&[&[1, 1]]);
        let rhs = gm(&[&[3]]);
        let x = m.solve(&rhs).unwrap().unwrap();
        assert_eq!(&m * &x, rhs);

        assert!(gm(&[&[1], &[1]]).solve(&gm(&[&[1], &[2]])).unwrap().is_none());
        assert!(matches!(
            gm(&[&[1], &[1]]).solve(&gm(&[&[1]])),
            Err(LinalgError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(ExactMatrix::identity(3).inverse().unwrap(), ExactMatrix::identity(3));
        let d = Matrix::diagonal(&[g(2, 0), GaussianRational::from_parts((1, 3), (0, 1))]);
        let want = Matrix::diagonal(&[GaussianRational::from_parts((1, 2), (0, 1)), g(3, 0)]);
        assert_eq!(d.inverse().unwrap(), want);
        assert!(matches!(gm(&[&[1, 2], &[2, 4]]).inverse(), Err(LinalgError::Singular)));
        assert!(matches!(ExactMatrix::zeros(2, 3).inverse(), Err(LinalgError::NotSquare { .. })));
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let m = Matrix::from_rows(vec![
            vec![g(1, 1), g(2, 0), g(0, -1)],
            vec![g(0, 0), g(3, 2), g(1, 0)],
            vec![g(4, 0), g(0, 1), g(2, -2)],
        ])
        .unwrap();
        let e = |r: usize, c: usize| m[(r, c)].clone();
        let minor = |r1, r2, c1, c2| e(r1, c1) * e(r2, c2) - e(r1, c2) * e(r2, c1);
        let cof = e(0, 0) * minor(1, 2, 1, 2) - e(0, 1) * minor(1, 2, 0, 2) + e(0, 2) * minor(1, 2, 0, 1);
        assert_eq!(m.determinant().unwrap(), cof);
    }

    fn gauss_matrix(rows: usize, cols: usize) -> impl Strategy<Value = ExactMatrix> {
        proptest::collection::vec((-3i64..4, -3i64..4, 1i64..4), rows * cols).prop_map(move |v| {
            Matrix::from_fn(rows, cols, |r, c| {
                let (a, b, d) = v[r * cols + c];
                GaussianRational::from_parts((a, d), (b, 1))
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn rank_nullity(m in (1usize..6, 1usize..6).prop_flat_map(|(r, c)| gauss_matrix(r, c))) {
            let kernel = m.kernel_basis();
            prop_assert_eq!(m.rank() + kernel.len(), m.cols());
            prop_assert_eq!(m.rref().1.len(), m.rank());
            for v in &kernel {
                prop_assert!(is_zero_vec(&m.mul_vec(v).unwrap()));
            }
            prop_assert!(independent(m.cols(), &kernel));
        }

        #[test]
        fn solve_agrees_with_inverse(m in gauss_matrix(4, 4), b in gauss_matrix(4, 2)) {
            if m.rank() == 4 {
                let inv = m.inverse().unwrap();
                prop_assert_eq!(&m * &inv, ExactMatrix::identity(4));
                prop_assert_eq!(m.solve(&b).unwrap().unwrap(), &inv * &b);
            } else {
                prop_assert!(m.determinant().unwrap().is_zero());
            }
        }
    }
}
