//! Normal forms: skew forms up to congruence, the complex dimension 4 model, and the
//! center-dimension-one model.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::acs::{self, AcsError, AlmostComplexStructure, ComplexSplitting};
use crate::lie::LieAlgebra;
use crate::linalg::{independent, is_zero_vec, ExactMatrix, GaussianRational, LinalgError, Matrix, Rational, Scalar};
use crate::random::TestRng;

type G = GaussianRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("skew form has odd size {0}")]
    OddSize(usize),
    #[error("matrix is not antisymmetric")]
    NotSkew,
    #[error("skew form is degenerate")]
    Degenerate,
    #[error("expected complex dimension {expected}, got {found}")]
    WrongDimension { expected: usize, found: usize },
    #[error("J is integrable (Nijenhuis tensor vanishes)")]
    Integrable,
    #[error("not quasi-Kähler Chern-flat: {0}")]
    NotQkChernFlat(acs::Witness),
    #[error("complex center has dimension {0}, expected 1")]
    CenterDimension(usize),
    #[error("complex dimension {0} is even, so the center cannot have dimension 1")]
    EvenDimension(usize),
    #[error("reduction failed: {0}")]
    Reduction(String),
    #[error(transparent)]
    Acs(#[from] AcsError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `Ω_k`: ones above the diagonal, minus ones below.
pub fn omega_standard(k: usize) -> ExactMatrix {
    let n = 2 * k;
    Matrix::from_fn(n, n, |r, c| match r.cmp(&c) {
        std::cmp::Ordering::Less => G::one(),
        std::cmp::Ordering::Greater => -G::one(),
        std::cmp::Ordering::Equal => G::zero(),
    })
}

fn pair(omega: &ExactMatrix, x: &[G], y: &[G]) -> G {
    let oy = omega.mul_vec(y).expect("length matches");
    x.iter().zip(&oy).fold(G::zero(), |acc, (a, b)| acc + a.mul_ref(b))
}

/// `T` with `Tᵀ ω T` block diagonal with `[[0,1],[-1,0]]` blocks.
fn darboux(omega: &ExactMatrix) -> Result<ExactMatrix, ClassifyError> {
    let n = omega.rows();
    let mut rest: Vec<Vec<G>> = ExactMatrix::identity(n).columns();
    let mut out = Vec::with_capacity(n);
    while let Some(u) = rest.first().cloned() {
        rest.remove(0);
        let pos = rest
            .iter()
            .position(|w| !pair(omega, &u, w).is_zero())
            .ok_or(ClassifyError::Degenerate)?;
        let w = rest.remove(pos);
        let s = pair(omega, &u, &w).inv();
        let v: Vec<G> = w.iter().map(|x| x.mul_ref(&s)).collect();
        for w in rest.iter_mut() {
            let a = pair(omega, w, &v);
            let b = pair(omega, w, &u);
            for t in 0..n {
                w[t] = w[t].clone() - a.mul_ref(&u[t]) + b.mul_ref(&v[t]);
            }
        }
        out.push(u);
        out.push(v);
    }
    Ok(Matrix::from_columns(n, &out)?)
}

/// An invertible `T` with `Tᵀ ω T = Ω_k`.
pub fn skew_normal_form(omega: &ExactMatrix) -> Result<ExactMatrix, ClassifyError> {
    if !omega.is_square() {
        return Err(ClassifyError::NotSkew);
    }
    let n = omega.rows();
    if omega.transpose() != omega.scale(&-G::one()) {
        return Err(ClassifyError::NotSkew);
    }
    if n % 2 == 1 {
        return Err(ClassifyError::OddSize(n));
    }
    let t1 = darboux(omega)?;
    let s = darboux(&omega_standard(n / 2))?;
    Ok(&t1 * &s.inverse()?)
}

/// A `(1,0)`-frame in normal form.
#[derive(Debug, Clone)]
pub struct NormalForm {
    /// Columns: new frame vectors in coordinates of the split `(1,0)`-frame.
    pub change: ExactMatrix,
    /// The splitting built on the new frame.
    pub splitting: ComplexSplitting,
}

impl NormalForm {
    fn new(s: &ComplexSplitting, change: ExactMatrix) -> Result<Self, ClassifyError> {
        let splitting = s.rebase(&change)?;
        Ok(NormalForm { change, splitting })
    }

    /// Nonzero `[Z_a, Z_b]` for `a < b`, as `(a, b, c̄-coefficients on Z̄_1..Z̄_m)`.
    pub fn holomorphic_brackets(&self) -> Vec<(usize, usize, Vec<G>)> {
        let m = self.splitting.complex_dim();
        let mut out = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                let v = self.splitting.bracket(a, b);
                if !is_zero_vec(&v) {
                    out.push((a, b, v[m..].to_vec()));
                }
            }
        }
        out
    }
}

/// Bracket of `(1,0)` vectors given in split-frame coordinates, as coefficients on `Z̄_1..Z̄_m`.
fn holo_bracket(s: &ComplexSplitting, u: &[G], v: &[G]) -> Vec<G> {
    let m = s.complex_dim();
    let mut out = vec![G::zero(); m];
    for a in 0..m {
        if u[a].is_zero() {
            continue;
        }
        for b in 0..m {
            if v[b].is_zero() || a == b {
                continue;
            }
            let coeff = u[a].mul_ref(&v[b]);
            let w = s.bracket(a, b);
            for k in 0..m {
                out[k] += &coeff.mul_ref(&w[m + k]);
            }
        }
    }
    out
}

fn unit(m: usize, k: usize) -> Vec<G> {
    let mut v = vec![G::zero(); m];
    v[k] = G::one();
    v
}

fn conj_vec(v: &[G]) -> Vec<G> {
    v.iter().map(Scalar::conj).collect()
}

/// `λ` with `v = λ w`, if any (`w ≠ 0`).
fn proportion(v: &[G], w: &[G]) -> Option<G> {
    let k = w.iter().position(|x| !x.is_zero())?;
    let lambda = v[k].clone() / w[k].clone();
    v.iter().zip(w).all(|(a, b)| *a == lambda.mul_ref(b)).then_some(lambda)
}

fn check_qk(g: &LieAlgebra<Rational>, j: &AlmostComplexStructure) -> Result<ComplexSplitting, ClassifyError> {
    let s = ComplexSplitting::split(g, j)?;
    let verdict = acs::qk_verdict(g, j, &s)?;
    if let Some(w) = verdict.brackets {
        return Err(ClassifyError::NotQkChernFlat(w));
    }
    Ok(s)
}

/// Reduces a non-integrable quasi-Kähler Chern-flat pair of complex dimension 4 to
/// `[Z_1, Z_2] = Z̄_3` with every other bracket of the frame zero.
pub fn dim4_normal_form(g: &LieAlgebra<Rational>, j: &AlmostComplexStructure) -> Result<NormalForm, ClassifyError> {
    let s = check_qk(g, j)?;
    let m = s.complex_dim();
    let first = (0..m)
        .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
        .find(|&(a, b)| !is_zero_vec(&holo_bracket(&s, &unit(m, a), &unit(m, b))));
    let Some((i1, i2)) = first else { return Err(ClassifyError::Integrable) };
    if m != 4 {
        return Err(ClassifyError::WrongDimension { expected: 4, found: m });
    }
    let (u1, u2) = (unit(m, i1), unit(m, i2));
    let w = holo_bracket(&s, &u1, &u2);
    let r = (0..m)
        .find(|&r| r != i1 && r != i2 && !w[r].is_zero())
        .ok_or_else(|| ClassifyError::Reduction("[Z1,Z2] lies in the conjugate span of Z1, Z2".into()))?;
    let t = (0..m).find(|&t| t != i1 && t != i2 && t != r).expect("four indices");
    let z3 = conj_vec(&w);
    for (name, u) in [("Z1", &u1), ("Z2", &u2), ("Z4", &unit(m, t))] {
        if !is_zero_vec(&holo_bracket(&s, &z3, u)) {
            return Err(ClassifyError::Reduction(format!("Z3 does not commute with {name}")));
        }
    }
    let u4 = unit(m, t);
    let c14 = proportion(&holo_bracket(&s, &u1, &u4), &w)
        .ok_or_else(|| ClassifyError::Reduction("[Z1,Z4] is not a multiple of conj(Z3)".into()))?;
    let c24 = proportion(&holo_bracket(&s, &u2, &u4), &w)
        .ok_or_else(|| ClassifyError::Reduction("[Z2,Z4] is not a multiple of conj(Z3)".into()))?;
    let z4: Vec<G> = (0..m).map(|k| u4[k].clone() + c24.mul_ref(&u1[k]) - c14.mul_ref(&u2[k])).collect();

    let change = Matrix::from_columns(m, &[u1, u2, z3, z4])?;
    let nf = NormalForm::new(&s, change)?;
    let mut expected = vec![G::zero(); m];
    expected[2] = G::one();
    if nf.holomorphic_brackets() != vec![(0, 1, expected)] {
        return Err(ClassifyError::Reduction(format!("final brackets {:?}", nf.holomorphic_brackets())));
    }
    Ok(nf)
}

/// Output of [`center_one_normal_form`].
#[derive(Debug, Clone)]
pub struct CenterOneForm {
    pub normal_form: NormalForm,
    /// `ω` on the chosen complement `V_1..V_{n-1}`, `[V_a, V_b] = ω_ab Ā`.
    pub omega: ExactMatrix,
    /// `Tᵀ ω T = Ω_k`.
    pub congruence: ExactMatrix,
}

/// Reduces a quasi-Kähler Chern-flat pair with one-dimensional complex center to
/// `[Z_i, Z_j] = Z̄_n` for all `i < j < n`, `Z_n` spanning the center.
pub fn center_one_normal_form(
    g: &LieAlgebra<Rational>,
    j: &AlmostComplexStructure,
) -> Result<CenterOneForm, ClassifyError> {
    let s = check_qk(g, j)?;
    let m = s.complex_dim();
    let center = g.center();
    let cdim = acs::complex_dim_of(&center, j)?;
    if cdim != 1 {
        return Err(ClassifyError::CenterDimension(cdim));
    }
    if m % 2 == 0 {
        return Err(ClassifyError::EvenDimension(m));
    }
    let z = center.basis()[0].clone();
    let jz = j.apply(&z);
    let a_real: Vec<G> = z.iter().zip(&jz).map(|(x, y)| G::new(x.clone(), -y.clone())).collect();
    let a = s.to_frame_coords(&a_real)[..m].to_vec();
    let a_bar = conj_vec(&a);

    let mut basis = vec![a.clone()];
    let mut complement = Vec::new();
    for k in 0..m {
        let mut trial = basis.clone();
        trial.push(unit(m, k));
        if independent(m, &trial) {
            basis = trial;
            complement.push(unit(m, k));
        }
    }
    let k2 = complement.len();
    let mut omega = ExactMatrix::zeros(k2, k2);
    for p in 0..k2 {
        for q in p + 1..k2 {
            let v = holo_bracket(&s, &complement[p], &complement[q]);
            let c = if is_zero_vec(&v) {
                G::zero()
            } else {
                proportion(&v, &a_bar)
                    .ok_or_else(|| ClassifyError::Reduction("bracket outside the conjugate center".into()))?
            };
            omega[(q, p)] = -c.clone();
            omega[(p, q)] = c;
        }
    }
    let t = skew_normal_form(&omega)?;
    let residual = (&(&t.transpose() * &omega) * &t).sub(&omega_standard(k2 / 2))?;
    if !residual.is_zero() {
        return Err(ClassifyError::Reduction("skew congruence residual is nonzero".into()));
    }
    let v = Matrix::from_columns(m, &complement)?;
    let mut columns = (&v * &t).columns();
    columns.push(a);
    let change = Matrix::from_columns(m, &columns)?;
    let normal_form = NormalForm::new(&s, change)?;
    let mut expected = vec![G::zero(); m];
    expected[m - 1] = G::one();
    let want: Vec<_> = (0..m - 1).flat_map(|p| (p + 1..m - 1).map(move |q| (p, q))).map(|(p, q)| (p, q, expected.clone())).collect();
    if normal_form.holomorphic_brackets() != want {
        return Err(ClassifyError::Reduction("final brackets are not in normal form".into()));
    }
    Ok(CenterOneForm { normal_form, omega, congruence: t })
}

/// Coarse isomorphism invariants; equal fingerprints are necessary for isomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fingerprint {
    pub dim: usize,
    pub center_dim: usize,
    pub derived_dim: usize,
    pub complex_center_dim: Option<usize>,
    pub qk_chern_flat: Option<bool>,
    pub nijenhuis_zero: Option<bool>,
    /// Dimensions along the lower central series.
    pub lower_central_dims: Vec<usize>,
    /// Generic rank of `ad_x`, estimated as the maximum over seeded probe points.
    pub generic_ad_rank: usize,
}

pub fn fingerprint(g: &LieAlgebra<Rational>, j: Option<&AlmostComplexStructure>) -> Result<Fingerprint, ClassifyError> {
    let n = g.dim();
    let mut rng = TestRng::seed_from_u64(0x5eed);
    let mut generic_ad_rank = 0;
    for _ in 0..8 {
        let x: Vec<Rational> = (0..n).map(|_| Rational::from_integer(rng.random_range(-1000i64..=1000).into())).collect();
        generic_ad_rank = generic_ad_rank.max(g.ad(&x).expect("length matches").rank());
    }
    let (complex_center_dim, qk_chern_flat, nijenhuis_zero) = match j {
        Some(j) => (
            Some(acs::complex_center_dim(g, j)?),
            Some(acs::is_qk_chern_flat(g, j)?.holds),
            Some(acs::nijenhuis(g, j)?.is_zero()),
        ),
        None => (None, None, None),
    };
    Ok(Fingerprint {
        dim: n,
        center_dim: g.center().dim(),
        derived_dim: g.derived_algebra().dim(),
        complex_center_dim,
        qk_chern_flat,
        nijenhuis_zero,
        lower_central_dims: g.lower_central_series().iter().map(|s| s.dim()).collect(),
        generic_ad_rank,
    })
}
