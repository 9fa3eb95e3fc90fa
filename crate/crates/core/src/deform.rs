//! Infinitesimal deformations of a quasi-Kähler Chern-flat structure.
//!
//! Unknowns are the entries of a real endomorphism `L` (`L e_b = Σ_a L_ab e_a`),
//! subject to `LJ = −JL` and `L[X,Y] = −[LX,Y] = −[X,LY]`, modulo inner
//! directions `[X, ·]`.

use num_traits::Zero;
use thiserror::Error;

use crate::acs::{self, AcsError, AlmostComplexStructure, Witness};
use crate::lie::LieAlgebra;
use crate::linalg::{LinalgError, Matrix, Rational, RationalMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeformError {
    #[error("precondition failed: not quasi-Kähler Chern-flat ({0})")]
    NotQkChernFlat(Witness),
    #[error("inner direction ad(e{0}) does not solve the deformation equations")]
    InnerNotInKernel(usize),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Acs(#[from] AcsError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Solutions of the deformation equations and the inner directions inside them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeformationSpace {
    pub kernel_basis: Vec<RationalMatrix>,
    pub inner_basis: Vec<RationalMatrix>,
    pub inner_rank: usize,
    /// Real dimension of the quotient.
    pub quotient_dim: usize,
}

impl DeformationSpace {
    pub fn kernel_dim(&self) -> usize {
        self.kernel_basis.len()
    }
}

fn vectorize(l: &RationalMatrix) -> Vec<Rational> {
    l.entries().to_vec()
}

fn unvectorize(n: usize, v: &[Rational]) -> RationalMatrix {
    Matrix::from_fn(n, n, |a, b| v[a * n + b].clone())
}

/// The linear system in the `n²` entries of `L`, with zero and repeated rows dropped.
pub fn deformation_system(g: &LieAlgebra<Rational>, j: &AlmostComplexStructure) -> RationalMatrix {
    let n = g.dim();
    let jm = j.matrix();
    let var = |a: usize, b: usize| a * n + b;
    let mut rows: Vec<Vec<Rational>> = Vec::new();

    // (LJ + JL)_{ab} = Σ_c L_ac J_cb + J_ac L_cb
    for a in 0..n {
        for b in 0..n {
            let mut row = vec![Rational::zero(); n * n];
            for c in 0..n {
                row[var(a, c)] += &jm[(c, b)];
                row[var(c, b)] += &jm[(a, c)];
            }
            rows.push(row);
        }
    }
    // (L[e_i,e_j] + [L e_i, e_j])_a = Σ_k c_ij^k L_ak + Σ_c L_ci c_cj^a
    for i in 0..n {
        for jj in 0..n {
            let bij = g.basis_bracket(i, jj);
            for a in 0..n {
                let mut row = vec![Rational::zero(); n * n];
                for (k, c) in bij.iter().enumerate() {
                    row[var(a, k)] += c;
                }
                for c in 0..n {
                    row[var(c, i)] += &g.structure_constant(c, jj, a);
                }
                rows.push(row);
            }
        }
    }
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    rows.sort();
    rows.dedup();
    if rows.is_empty() {
        return RationalMatrix::zeros(0, n * n);
    }
    Matrix::from_rows(rows).expect("rows have equal length")
}

/// Computes the solution space, the inner directions, and the quotient dimension.
pub fn deformation_space(g: &LieAlgebra<Rational>, j: &AlmostComplexStructure) -> Result<DeformationSpace, DeformError> {
    let verdict = acs::is_qk_chern_flat(g, j)?;
    if let Some(w) = verdict.brackets {
        return Err(DeformError::NotQkChernFlat(w));
    }
    let n = g.dim();
    let system = deformation_system(g, j);
    let kernel = system.kernel_basis();
    let kernel_basis: Vec<RationalMatrix> = kernel.iter().map(|v| unvectorize(n, v)).collect();

    let mut inner_basis = Vec::with_capacity(n);
    for k in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[k] = Rational::from_integer(1.into());
        let ad = g.ad(&e).expect("length matches");
        if !system.mul_vec(&vectorize(&ad))?.iter().all(Zero::is_zero) {
            return Err(DeformError::InnerNotInKernel(k));
        }
        inner_basis.push(ad);
    }
    let inner_rows: Vec<Vec<Rational>> = inner_basis.iter().map(vectorize).collect();
    let inner_rank = rank_of(&inner_rows);
    let quotient_dim = kernel.len() - inner_rank;

    let mut stacked = kernel.clone();
    stacked.extend(inner_rows);
    let other = rank_of(&stacked) - inner_rank;
    if other != quotient_dim {
        return Err(DeformError::Inconsistent(format!(
            "quotient dimension {quotient_dim} from the kernel, {other} from the stacked rank"
        )));
    }
    Ok(DeformationSpace { kernel_basis, inner_basis, inner_rank, quotient_dim })
}

fn rank_of(rows: &[Vec<Rational>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    Matrix::from_rows(rows.to_vec()).expect("rows have equal length").rank()
}

/// Whether every kernel element kills `[g,g]` and maps `g` into the center.
pub fn structural_constraints_check(d: &DeformationSpace, g: &LieAlgebra<Rational>) -> bool {
    let derived = g.derived_algebra();
    let center = g.center();
    d.kernel_basis.iter().all(|l| {
        derived.basis().iter().all(|x| l.mul_vec(x).expect("length matches").iter().all(Zero::is_zero))
            && l.columns().iter().all(|c| center.contains(c))
    })
}

/// Whether `L ↦ JL` preserves the solution space, so the quotient is a complex vector space.
pub fn is_j_stable(d: &DeformationSpace, j: &AlmostComplexStructure) -> bool {
    let span = crate::lie::Subspace::span(
        d.kernel_basis.first().map_or(0, |l| l.rows() * l.cols()),
        d.kernel_basis.iter().map(vectorize).collect(),
    );
    d.kernel_basis.iter().all(|l| span.contains(&vectorize(&(j.matrix() * l))))
}

/// The matrix of `Y ↦ −2 J [x, Y]`, checked against `ad(2 J x)`.
pub fn lie_derivative_direction(
    g: &LieAlgebra<Rational>,
    j: &AlmostComplexStructure,
    x: &[Rational],
) -> Result<RationalMatrix, DeformError> {
    let verdict = acs::is_qk_chern_flat(g, j)?;
    if let Some(w) = verdict.brackets {
        return Err(DeformError::NotQkChernFlat(w));
    }
    let ad = g.ad(x).map_err(AcsError::from)?;
    let minus_two = Rational::from_integer((-2).into());
    let l = (j.matrix() * &ad).scale(&minus_two);
    let two_jx: Vec<Rational> = j.apply(x).iter().map(|v| v * Rational::from_integer(2.into())).collect();
    if l != g.ad(&two_jx).map_err(AcsError::from)? {
        return Err(DeformError::Inconsistent("-2 J ad(x) differs from ad(2 J x)".into()));
    }
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::catalog;

    fn space(name: &str) -> (DeformationSpace, LieAlgebra<Rational>, AlmostComplexStructure) {
        let e = catalog(name).unwrap();
        let j = e.j.unwrap();
        (deformation_space(&e.algebra, &j).unwrap(), e.algebra, j)
    }

    #[test]
    fn iwasawa_is_rigid() {
        let (d, g, j) = space("iwasawa_j3");
        assert_eq!(d.quotient_dim, 0);
        assert_eq!(d.kernel_dim(), d.inner_rank);
        assert!(structural_constraints_check(&d, &g));
        assert!(is_j_stable(&d, &j));
    }

    #[test]
    fn abelian_counts() {
        for n in 1..=3 {
            let (d, g, _) = space(&format!("abelian({})", 2 * n));
            assert_eq!(d.quotient_dim, 2 * n * n);
            assert_eq!(d.inner_rank, 0);
            assert!(structural_constraints_check(&d, &g));
        }
    }

    #[test]
    fn lie_derivative_examples() {
        let e = catalog("iwasawa_j3").unwrap();
        let j = e.j.unwrap();
        let mut x = vec![Rational::zero(); 6];
        x[0] = Rational::from_integer(1.into());
        assert!(!lie_derivative_direction(&e.algebra, &j, &x).unwrap().is_zero());
        x[0] = Rational::zero();
        x[2] = Rational::from_integer(1.into());
        assert!(lie_derivative_direction(&e.algebra, &j, &x).unwrap().is_zero());
    }

    #[test]
    fn rejects_non_qk() {
        let e = catalog("complex_heisenberg_bicomplex").unwrap();
        assert!(matches!(
            deformation_space(&e.algebra, e.j.as_ref().unwrap()),
            Err(DeformError::NotQkChernFlat(_))
        ));
    }
}
