//! Lie algebras as structure-constant tensors.
//!
//! Only brackets `[e_i, e_j]` with `i < j` are stored; the rest follow from
//! antisymmetry. All indices in this module are 0-based.

use std::fmt;

use thiserror::Error;

use crate::linalg::{axpy, is_zero_vec, Field, LinalgError, Matrix, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("bracket index pair ({i},{j}) must satisfy i < j")]
    IndexOrder { i: usize, j: usize },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("vector of length {found} given to algebra of dimension {dim}")]
    DimensionMismatch { dim: usize, found: usize },
    #[error("Jacobi identity fails on {} triple(s), first at {}", .0.len(), .0[0])]
    Jacobi(Vec<JacobiViolation>),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[inline]
fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Raw structure constants: a table of `[e_i, e_j]` for `i < j`, not yet checked for Jacobi.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StructureConstants<T> {
    dim: usize,
    table: Vec<Vec<T>>,
}

impl<T: Scalar> StructureConstants<T> {
    pub fn zero(dim: usize) -> Self {
        let pairs = dim * dim.saturating_sub(1) / 2;
        StructureConstants { dim, table: vec![vec![T::zero(); dim]; pairs] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn check_index(&self, index: usize) -> Result<(), LieError> {
        if index >= self.dim {
            return Err(LieError::IndexOutOfRange { index, dim: self.dim });
        }
        Ok(())
    }

    /// Sets `c_{ij}^k`; requires `i < j`.
    pub fn set(&mut self, i: usize, j: usize, k: usize, value: T) -> Result<(), LieError> {
        self.check_index(i)?;
        self.check_index(j)?;
        self.check_index(k)?;
        if i >= j {
            return Err(LieError::IndexOrder { i, j });
        }
        let p = pair_index(self.dim, i, j);
        self.table[p][k] = value;
        Ok(())
    }

    /// Adds `value * e_k` to `[e_i, e_j]`, accepting either index order.
    pub fn add_bracket(&mut self, i: usize, j: usize, k: usize, value: T) -> Result<(), LieError> {
        self.check_index(i)?;
        self.check_index(j)?;
        self.check_index(k)?;
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.table[pair_index(self.dim, i, j)][k] += &value,
            std::cmp::Ordering::Greater => self.table[pair_index(self.dim, j, i)][k] -= &value,
            std::cmp::Ordering::Equal => {
                if !value.is_zero() {
                    return Err(LieError::IndexOrder { i, j });
                }
            }
        }
        Ok(())
    }

    /// `[e_i, e_j]` in coordinates.
    pub fn basis_bracket(&self, i: usize, j: usize) -> Vec<T> {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.table[pair_index(self.dim, i, j)].clone(),
            std::cmp::Ordering::Greater => {
                self.table[pair_index(self.dim, j, i)].iter().map(|x| -x.clone()).collect()
            }
            std::cmp::Ordering::Equal => vec![T::zero(); self.dim],
        }
    }

    fn bracket_with_basis(&self, x: &[T], j: usize) -> Vec<T> {
        let mut out = vec![T::zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() || i == j {
                continue;
            }
            out = axpy(&out, xi, &self.basis_bracket(i, j));
        }
        out
    }
}

/// A triple `(i, j, k)` whose cyclic sum `[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]` is nonzero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JacobiViolation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub cyclic_sum: Vec<String>,
}

impl fmt::Display for JacobiViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{}) -> [{}]", self.i + 1, self.j + 1, self.k + 1, self.cyclic_sum.join(", "))
    }
}

/// Every triple `i < j < k` on which the Jacobi identity fails; empty iff it holds.
pub fn jacobi_defect<T: Scalar>(c: &StructureConstants<T>) -> Vec<JacobiViolation> {
    let n = c.dim;
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let a = c.bracket_with_basis(&c.basis_bracket(i, j), k);
                let b = c.bracket_with_basis(&c.basis_bracket(j, k), i);
                let d = c.bracket_with_basis(&c.basis_bracket(k, i), j);
                let sum: Vec<T> =
                    a.into_iter().zip(b).zip(d).map(|((x, y), z)| x + y + z).collect();
                if !is_zero_vec(&sum) {
                    out.push(JacobiViolation {
                        i,
                        j,
                        k,
                        cyclic_sum: sum.iter().map(ToString::to_string).collect(),
                    });
                }
            }
        }
    }
    out
}

/// A finite-dimensional Lie algebra over Q or Q(i). The Jacobi identity is checked on construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LieAlgebra<T> {
    constants: StructureConstants<T>,
}

impl<T: Scalar> LieAlgebra<T> {
    pub fn new(constants: StructureConstants<T>) -> Result<Self, LieError> {
        let defects = jacobi_defect(&constants);
        if !defects.is_empty() {
            return Err(LieError::Jacobi(defects));
        }
        Ok(LieAlgebra { constants })
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra { constants: StructureConstants::zero(dim) }
    }

    /// Builds from `(i, j, k, c)` entries meaning `[e_i, e_j] += c e_k`, either index order allowed.
    pub fn from_brackets(dim: usize, entries: &[(usize, usize, usize, T)]) -> Result<Self, LieError> {
        let mut c = StructureConstants::zero(dim);
        for (i, j, k, v) in entries {
            c.add_bracket(*i, *j, *k, v.clone())?;
        }
        Self::new(c)
    }

    pub fn dim(&self) -> usize {
        self.constants.dim
    }

    pub fn field(&self) -> Field {
        T::FIELD
    }

    pub fn constants(&self) -> &StructureConstants<T> {
        &self.constants
    }

    /// `c_{ij}^k`.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> T {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.constants.table[pair_index(self.dim(), i, j)][k].clone(),
            std::cmp::Ordering::Greater => -self.constants.table[pair_index(self.dim(), j, i)][k].clone(),
            std::cmp::Ordering::Equal => T::zero(),
        }
    }

    pub fn basis_bracket(&self, i: usize, j: usize) -> Vec<T> {
        self.constants.basis_bracket(i, j)
    }

    /// Nonzero brackets `(i, j, [e_i, e_j])` with `i < j`, in lexicographic order.
    pub fn nonzero_brackets(&self) -> impl Iterator<Item = (usize, usize, &[T])> + '_ {
        let n = self.dim();
        (0..n)
            .flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
            .map(move |(i, j)| (i, j, self.constants.table[pair_index(n, i, j)].as_slice()))
            .filter(|(_, _, v)| !is_zero_vec(v))
    }

    pub fn is_abelian(&self) -> bool {
        self.nonzero_brackets().next().is_none()
    }

    fn check_len(&self, v: &[T]) -> Result<(), LieError> {
        if v.len() != self.dim() {
            return Err(LieError::DimensionMismatch { dim: self.dim(), found: v.len() });
        }
        Ok(())
    }

    /// `[x, y]` for coordinate vectors.
    pub fn bracket(&self, x: &[T], y: &[T]) -> Result<Vec<T>, LieError> {
        self.check_len(x)?;
        self.check_len(y)?;
        let n = self.dim();
        let mut out = vec![T::zero(); n];
        for i in 0..n {
            for j in i + 1..n {
                let mut w = x[i].mul_ref(&y[j]);
                w -= &x[j].mul_ref(&y[i]);
                if w.is_zero() {
                    continue;
                }
                out = axpy(&out, &w, &self.constants.table[pair_index(n, i, j)]);
            }
        }
        Ok(out)
    }

    /// Matrix of `ad_x = [x, .]`.
    pub fn ad(&self, x: &[T]) -> Result<Matrix<T>, LieError> {
        self.check_len(x)?;
        let cols: Vec<Vec<T>> =
            (0..self.dim()).map(|j| self.constants.bracket_with_basis(x, j)).collect();
        Ok(Matrix::from_columns(self.dim(), &cols)?)
    }

    /// Center `{x : [x, e_j] = 0 for all j}`, the kernel of the stacked adjoint map.
    pub fn center(&self) -> Subspace<T> {
        let n = self.dim();
        // Intersect ker [., e_j] over j, one block at a time.
        let mut basis: Vec<Vec<T>> = Subspace::full(n).basis;
        for j in 0..n {
            if basis.is_empty() {
                break;
            }
            let images: Vec<Vec<T>> = basis.iter().map(|x| self.constants.bracket_with_basis(x, j)).collect();
            if images.iter().all(|v| is_zero_vec(v)) {
                continue;
            }
            let m = Matrix::from_columns(n, &images).expect("lengths match");
            basis = m
                .kernel_basis()
                .iter()
                .map(|coeffs| {
                    let mut v = vec![T::zero(); n];
                    for (c, x) in coeffs.iter().zip(&basis) {
                        if !c.is_zero() {
                            v = axpy(&v, c, x);
                        }
                    }
                    v
                })
                .collect();
        }
        Subspace { ambient_dim: n, basis }
    }

    /// `[g, g]`.
    pub fn derived_algebra(&self) -> Subspace<T> {
        Subspace::span(self.dim(), self.nonzero_brackets().map(|(_, _, v)| v.to_vec()).collect())
    }

    /// `g = g_1 ⊇ g_2 = [g, g] ⊇ g_3 = [g_2, g] ⊇ ...` up to stabilization.
    ///
    /// The last entry is either the zero subspace (nilpotent) or the first term
    /// equal to its predecessor.
    pub fn lower_central_series(&self) -> Vec<Subspace<T>> {
        let n = self.dim();
        let mut series = vec![Subspace::full(n)];
        loop {
            let last = series.last().expect("series is never empty");
            if last.dim() == 0 {
                break;
            }
            let mut spanning = Vec::new();
            for x in &last.basis {
                for j in 0..n {
                    let v = self.constants.bracket_with_basis(x, j);
                    if !is_zero_vec(&v) {
                        spanning.push(v);
                    }
                }
            }
            let next = Subspace::span(n, spanning);
            let stable = next.dim() == last.dim();
            if !stable {
                series.push(next);
            } else {
                break;
            }
        }
        series
    }

    /// `Some(k)` when the algebra is k-step nilpotent (abelian is 1-step, the zero algebra 0-step).
    pub fn nilpotency_step(&self) -> Option<usize> {
        let series = self.lower_central_series();
        (series.last().map(Subspace::dim) == Some(0)).then(|| series.len() - 1)
    }

    /// The same algebra written in the basis given by the columns of `p`.
    ///
    /// An isomorphic image satisfies Jacobi, so the result is not re-validated.
    pub fn change_basis(&self, p: &Matrix<T>) -> Result<Self, LieError> {
        let n = self.dim();
        if p.rows() != n || p.cols() != n {
            return Err(LieError::DimensionMismatch { dim: n, found: p.rows() });
        }
        let inv = p.inverse()?;
        // t1[a][j][k] = Σ_i p_ia c_ij^k
        let mut t1 = vec![vec![vec![T::zero(); n]; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let bij = self.basis_bracket(i, j);
                if is_zero_vec(&bij) {
                    continue;
                }
                for a in 0..n {
                    let pia = &p[(i, a)];
                    if pia.is_zero() {
                        continue;
                    }
                    for (k, c) in bij.iter().enumerate() {
                        if !c.is_zero() {
                            t1[a][j][k] += &pia.mul_ref(c);
                        }
                    }
                }
            }
        }
        let mut c = StructureConstants::zero(n);
        for a in 0..n {
            for b in a + 1..n {
                // t2[k] = Σ_j p_jb t1[a][j][k]
                let mut t2 = vec![T::zero(); n];
                for j in 0..n {
                    let pjb = &p[(j, b)];
                    if pjb.is_zero() {
                        continue;
                    }
                    for (k, v) in t1[a][j].iter().enumerate() {
                        if !v.is_zero() {
                            t2[k] += &pjb.mul_ref(v);
                        }
                    }
                }
                if !is_zero_vec(&t2) {
                    c.table[pair_index(n, a, b)] = inv.mul_vec(&t2)?;
                }
            }
        }
        Ok(LieAlgebra { constants: c })
    }

    /// Applies `f` to every structure constant, e.g. to complexify a rational algebra.
    pub fn map_scalars<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Result<LieAlgebra<U>, LieError> {
        let table = self.constants.table.iter().map(|v| v.iter().map(&f).collect()).collect();
        LieAlgebra::new(StructureConstants { dim: self.dim(), table })
    }

    /// As [`map_scalars`](Self::map_scalars) for a field embedding `f`, which preserves Jacobi.
    pub(crate) fn embed<U: Scalar>(&self, f: impl Fn(&T) -> U) -> LieAlgebra<U> {
        let table = self.constants.table.iter().map(|v| v.iter().map(&f).collect()).collect();
        LieAlgebra { constants: StructureConstants { dim: self.dim(), table } }
    }
}

/// A linear subspace of `T^n`, stored as a list of independent vectors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace<T> {
    ambient_dim: usize,
    basis: Vec<Vec<T>>,
}

impl<T: Scalar> Subspace<T> {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim)
            .map(|k| {
                let mut v = vec![T::zero(); ambient_dim];
                v[k] = T::one();
                v
            })
            .collect();
        Subspace { ambient_dim, basis }
    }

    /// Span of arbitrary vectors; the basis is the nonzero rows of their reduced echelon form.
    pub fn span(ambient_dim: usize, vectors: Vec<Vec<T>>) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient_dim);
        }
        let m = Matrix::from_rows(vectors).expect("vectors of equal length");
        let (r, pivots) = m.rref();
        let basis = (0..pivots.len()).map(|k| r.row(k).to_vec()).collect();
        Subspace { ambient_dim, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<T>] {
        &self.basis
    }

    pub fn contains(&self, v: &[T]) -> bool {
        if is_zero_vec(v) {
            return true;
        }
        let mut vs = self.basis.clone();
        vs.push(v.to_vec());
        Matrix::from_rows(vs).map(|m| m.rank() == self.dim()).unwrap_or(false)
    }

    pub fn contains_subspace(&self, other: &Subspace<T>) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Rational;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    /// Iwasawa X-frame, 0-based: [X1,X2]=X3, [X4,X5]=-X3, [X2,X4]=X6, [X5,X1]=X6.
    fn iwasawa() -> LieAlgebra<Rational> {
        LieAlgebra::from_brackets(
            6,
            &[(0, 1, 2, q(1)), (3, 4, 2, q(-1)), (1, 3, 5, q(1)), (4, 0, 5, q(1))],
        )
        .unwrap()
    }

    fn unit(n: usize, k: usize) -> Vec<Rational> {
        let mut v = vec![q(0); n];
        v[k] = q(1);
        v
    }

    #[test]
    fn bracket_examples() {
        let g = iwasawa();
        assert_eq!(g.bracket(&unit(6, 0), &unit(6, 1)).unwrap(), unit(6, 2));
        assert_eq!(g.bracket(&unit(6, 4), &unit(6, 0)).unwrap(), unit(6, 5));
        let x: Vec<Rational> = (1..=6).map(q).collect();
        assert!(is_zero_vec(&g.bracket(&x, &x).unwrap()));
        assert!(matches!(g.bracket(&x[..3], &x), Err(LieError::DimensionMismatch { .. })));
    }

    #[test]
    fn jacobi_examples() {
        assert!(jacobi_defect(iwasawa().constants()).is_empty());
        assert!(jacobi_defect(&StructureConstants::<Rational>::zero(5)).is_empty());

        // c_12^3 = c_13^4 = c_34^1 = 1 (1-based): the (2,3,4) cyclic sum is
        // [[e3,e4],e2] = [e1,e2] = e3.
        let mut c = StructureConstants::zero(4);
        c.set(0, 1, 2, q(1)).unwrap();
        c.set(0, 2, 3, q(1)).unwrap();
        c.set(2, 3, 0, q(1)).unwrap();
        let defects = jacobi_defect(&c);
        assert!(!defects.is_empty());
        assert!(defects.iter().any(|d| (d.i, d.j, d.k) == (1, 2, 3)));
        assert!(matches!(LieAlgebra::new(c), Err(LieError::Jacobi(_))));
    }

    #[test]
    fn structure_constants_reject_bad_indices() {
        let mut c = StructureConstants::<Rational>::zero(3);
        assert!(matches!(c.set(1, 1, 0, q(1)), Err(LieError::IndexOrder { .. })));
        assert!(matches!(c.set(2, 1, 0, q(1)), Err(LieError::IndexOrder { .. })));
        assert!(matches!(c.set(0, 3, 0, q(1)), Err(LieError::IndexOutOfRange { .. })));
    }

    #[test]
    fn lower_central_series_examples() {
        let dims: Vec<usize> = iwasawa().lower_central_series().iter().map(Subspace::dim).collect();
        assert_eq!(dims, vec![6, 2, 0]);
        assert_eq!(iwasawa().nilpotency_step(), Some(2));
        let ab = LieAlgebra::<Rational>::abelian(4);
        let dims: Vec<usize> = ab.lower_central_series().iter().map(Subspace::dim).collect();
        assert_eq!(dims, vec![4, 0]);
        // so(3): [e1,e2]=e3, [e2,e3]=e1, [e3,e1]=e2 is perfect, never nilpotent.
        let so3 = LieAlgebra::from_brackets(3, &[(0, 1, 2, q(1)), (1, 2, 0, q(1)), (2, 0, 1, q(1))])
            .unwrap();
        assert_eq!(so3.nilpotency_step(), None);
        assert_eq!(so3.lower_central_series().len(), 1);
    }

    #[test]
    fn center_examples() {
        let z = iwasawa().center();
        assert_eq!(z.dim(), 2);
        assert!(z.contains(&unit(6, 2)) && z.contains(&unit(6, 5)));
        assert_eq!(LieAlgebra::<Rational>::abelian(3).center().dim(), 3);
        let h3 = LieAlgebra::from_brackets(3, &[(0, 1, 2, q(1))]).unwrap();
        let z = h3.center();
        assert_eq!(z.dim(), 1);
        assert!(z.contains(&unit(3, 2)));
    }

    #[test]
    fn change_basis_round_trip() {
        let g = iwasawa();
        let p = Matrix::from_fn(6, 6, |r, c| if r == c { q(1) } else if r < c { q((r + c) as i64 % 3) } else { q(0) });
        let h = g.change_basis(&p).unwrap();
        let back = h.change_basis(&p.inverse().unwrap()).unwrap();
        assert_eq!(back, g);
        assert_eq!(h.nilpotency_step(), Some(2));
    }

    /// Random tensors on 4 generators with entries in {-1,0,1}.
    fn raw_tensor() -> impl Strategy<Value = StructureConstants<Rational>> {
        proptest::collection::vec(prop_oneof![4 => Just(0i64), 1 => Just(1), 1 => Just(-1)], 6 * 4)
            .prop_map(|v| {
                let mut c = StructureConstants::zero(4);
                let mut it = v.into_iter();
                for i in 0..4 {
                    for j in i + 1..4 {
                        for k in 0..4 {
                            c.set(i, j, k, q(it.next().unwrap())).unwrap();
                        }
                    }
                }
                c
            })
    }

    proptest! {
        #[test]
        fn construction_accepts_iff_jacobi(c in raw_tensor()) {
            let defects = jacobi_defect(&c);
            prop_assert_eq!(LieAlgebra::new(c).is_ok(), defects.is_empty());
        }

        #[test]
        fn center_is_central(c in raw_tensor()) {
            if let Ok(g) = LieAlgebra::new(c) {
                for z in g.center().basis() {
                    for j in 0..4 {
                        prop_assert!(is_zero_vec(&g.bracket(z, &unit(4, j)).unwrap()));
                    }
                }
                if g.nilpotency_step().is_some_and(|k| k <= 2) {
                    for i in 0..4 { for j in 0..4 { for k in 0..4 {
                        let inner = g.bracket(&unit(4, i), &unit(4, j)).unwrap();
                        prop_assert!(is_zero_vec(&g.bracket(&inner, &unit(4, k)).unwrap()));
                    }}}
                }
            }
        }
    }
}
