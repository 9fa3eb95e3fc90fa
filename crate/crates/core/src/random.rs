//! Seeded generators of small exact test inputs.

use num_traits::Zero;
use rand::Rng;

use crate::forms::{HermitianMetric, InvariantForm};
use crate::lie::{LieAlgebra, StructureConstants};
use crate::linalg::{ExactMatrix, GaussianRational, Matrix, Rational};

type G = GaussianRational;

pub use rand_chacha::ChaCha8Rng as TestRng;

/// A seeded generator.
pub fn rng(seed: u64) -> TestRng {
    use rand::SeedableRng;
    TestRng::seed_from_u64(seed)
}

pub fn gaussian<R: Rng>(rng: &mut R, bound: i64) -> G {
    G::from_ints(rng.random_range(-bound..=bound), rng.random_range(-bound..=bound))
}

/// An invertible `m×m` matrix with small Gaussian-integer entries.
pub fn invertible_gaussian<R: Rng>(rng: &mut R, m: usize, bound: i64) -> ExactMatrix {
    loop {
        let a = Matrix::from_fn(m, m, |_, _| gaussian(rng, bound));
        if a.rank() == m {
            return a;
        }
    }
}

/// A random 2-step nilpotent (possibly abelian) real algebra of dimension `2..=max_dim`.
///
/// The first `k` basis vectors generate, the rest are central.
pub fn two_step_algebra<R: Rng>(rng: &mut R, max_dim: usize) -> LieAlgebra<Rational> {
    let n = rng.random_range(2..=max_dim.max(2));
    let k = rng.random_range(1..n);
    let mut c = StructureConstants::zero(n);
    for i in 0..k {
        for j in i + 1..k {
            for z in k..n {
                let v: i64 = rng.random_range(-2..=2);
                if v != 0 {
                    c.set(i, j, z, Rational::from_integer(v.into())).expect("indices in range");
                }
            }
        }
    }
    LieAlgebra::new(c).expect("2-step tensors satisfy Jacobi")
}

/// `A A* + I` for a random small Gaussian-integer `A`.
pub fn hermitian_metric<R: Rng>(rng: &mut R, m: usize) -> HermitianMetric {
    let a = Matrix::from_fn(m, m, |_, _| gaussian(rng, 2));
    let h = (&a * &a.adjoint()).add(&ExactMatrix::identity(m)).expect("same shape");
    HermitianMetric::new(h).expect("A A* + I is positive definite")
}

/// A random nondegenerate `2k×2k` antisymmetric matrix over Q(i).
pub fn nondegenerate_skew<R: Rng>(rng: &mut R, k: usize) -> ExactMatrix {
    let n = 2 * k;
    loop {
        let mut w = ExactMatrix::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                let v = gaussian(rng, 3);
                w[(j, i)] = -v.clone();
                w[(i, j)] = v;
            }
        }
        if w.rank() == n {
            return w;
        }
    }
}

/// A form of the given degree on `m` complex dimensions with up to `terms` random monomials.
pub fn form<R: Rng>(rng: &mut R, m: usize, degree: usize, terms: usize) -> InvariantForm {
    let mut out = InvariantForm::zero(m, degree);
    for _ in 0..terms {
        let idx: Vec<usize> = (0..degree).map(|_| rng.random_range(0..2 * m)).collect();
        let c = gaussian(rng, 3);
        if !c.is_zero() {
            out = out.add(&InvariantForm::monomial(m, idx, c));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic() {
        let a = two_step_algebra(&mut rng(7), 6);
        let b = two_step_algebra(&mut rng(7), 6);
        assert_eq!(a, b);
        assert!(a.nilpotency_step().is_some_and(|k| k <= 2));
        let m = invertible_gaussian(&mut rng(1), 4, 2);
        assert_eq!(m.rank(), 4);
    }
}
