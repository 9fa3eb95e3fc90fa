//! Almost complex structures on real Lie algebras.
//!
//! [`ComplexSplitting`] realizes `g ⊗ C = g^{1,0} ⊕ g^{0,1}` with an explicit
//! frame `Z_1..Z_m, Z̄_1..Z̄_m` and the complexified structure constants in
//! that frame. The Chern-flat and quasi-Kähler Chern-flat predicates evaluate
//! every equivalent characterization on every call and fail loudly if the
//! characterizations ever disagree.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::forms::{self, Bidegree};
use crate::lie::{LieAlgebra, LieError};
use crate::linalg::{
    independent, is_zero_vec, ExactMatrix, GaussianRational, LinalgError, Matrix, Rational,
    RationalMatrix, Scalar,
};

type G = GaussianRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AcsError {
    #[error("almost complex structure needs even dimension, got {0}")]
    OddDimension(usize),
    #[error("J is {rows}x{cols}, algebra has dimension {dim}")]
    DimensionMismatch { rows: usize, cols: usize, dim: usize },
    #[error("J*J is not -I")]
    NotAlmostComplex,
    #[error("frame vector {0} is not of type (1,0)")]
    FrameNotOfType10(usize),
    #[error("frame vectors do not form a basis of g^(1,0)")]
    FrameDependent,
    #[error("precondition failed: (g, J) is not Chern-flat ({0})")]
    NotChernFlat(Witness),
    #[error("precondition failed: (g, J) is not quasi-Kähler Chern-flat ({0})")]
    NotQkChernFlat(Witness),
    #[error("internal inconsistency between equivalent characterizations: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// An endomorphism `J` with `J² = -I`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlmostComplexStructure {
    j: RationalMatrix,
}

impl AlmostComplexStructure {
    pub fn new(j: RationalMatrix) -> Result<Self, AcsError> {
        if !j.is_square() {
            return Err(AcsError::DimensionMismatch { rows: j.rows(), cols: j.cols(), dim: j.rows() });
        }
        let n = j.rows();
        if n % 2 == 1 {
            return Err(AcsError::OddDimension(n));
        }
        let minus_id = RationalMatrix::identity(n).scale(&-Rational::one());
        if &j * &j != minus_id {
            return Err(AcsError::NotAlmostComplex);
        }
        Ok(AlmostComplexStructure { j })
    }

    /// `J e_k = e_{k+n/2}`, `J e_{k+n/2} = -e_k`.
    pub fn standard(n: usize) -> Result<Self, AcsError> {
        if n % 2 == 1 {
            return Err(AcsError::OddDimension(n));
        }
        let h = n / 2;
        let j = Matrix::from_fn(n, n, |r, c| {
            if c < h && r == c + h {
                Rational::one()
            } else if c >= h && r + h == c {
                -Rational::one()
            } else {
                Rational::zero()
            }
        });
        Self::new(j)
    }

    pub fn dim(&self) -> usize {
        self.j.rows()
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.j
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        self.j.mul_vec(v).expect("vector length matches J")
    }

    pub fn apply_complex(&self, v: &[G]) -> Vec<G> {
        self.j.to_gaussian().mul_vec(v).expect("vector length matches J")
    }

    /// Transports `J` along a change of basis given by the columns of `p`: returns `p⁻¹ J p`.
    pub fn conjugate_by(&self, p: &RationalMatrix) -> Result<Self, AcsError> {
        let inv = p.inverse()?;
        Self::new(&(&inv * &self.j) * p)
    }

    fn check_algebra(&self, dim: usize) -> Result<(), AcsError> {
        if self.dim() != dim {
            return Err(AcsError::DimensionMismatch { rows: self.dim(), cols: self.dim(), dim });
        }
        Ok(())
    }
}

/// Which type sector a bracket of two frame vectors belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sector {
    /// `[g^{1,0}, g^{1,0}]`
    HoloHolo,
    /// `[g^{1,0}, g^{0,1}]`
    HoloAnti,
    /// `[g^{0,1}, g^{0,1}]`
    AntiAnti,
}

/// A failing pair or coframe element, reported with 1-based indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// Bracket of frame vectors (combined indices: `0..m` are `Z_k`, `m..2m` are `Z̄_k`).
    FramePair { a: usize, b: usize, m: usize },
    /// Real basis pair `(e_i, e_j)`.
    BasisPair { i: usize, j: usize },
    /// `d ζ_k` has a nonzero component of the given bidegree.
    Coframe { k: usize, bidegree: Bidegree },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |a: usize, m: usize| {
            if a < m {
                format!("Z{}", a + 1)
            } else {
                format!("Zb{}", a - m + 1)
            }
        };
        match self {
            Witness::FramePair { a, b, m } => write!(f, "[{}, {}]", name(*a, *m), name(*b, *m)),
            Witness::BasisPair { i, j } => write!(f, "(e{}, e{})", i + 1, j + 1),
            Witness::Coframe { k, bidegree } => {
                write!(f, "d z{} has a ({},{}) part", k + 1, bidegree.p, bidegree.q)
            }
        }
    }
}

/// Rational vectors `x_1..x_m` such that `{x_k, J x_k}` is a basis, chosen greedily from `e_1, e_2, ...`.
pub fn adapted_real_basis(j: &AlmostComplexStructure) -> Vec<Vec<Rational>> {
    let n = j.dim();
    let mut chosen = Vec::new();
    let mut spanned: Vec<Vec<Rational>> = Vec::new();
    for k in 0..n {
        if spanned.len() == n {
            break;
        }
        let mut e = vec![Rational::zero(); n];
        e[k] = Rational::one();
        let mut trial = spanned.clone();
        trial.push(e.clone());
        if independent(n, &trial) {
            let je = j.apply(&e);
            spanned.push(e.clone());
            spanned.push(je);
            chosen.push(e);
        }
    }
    chosen
}

/// `g ⊗ C = g^{1,0} ⊕ g^{0,1}` with an explicit frame and complex structure constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexSplitting {
    m: usize,
    frame: ExactMatrix,
    frame_inv: ExactMatrix,
    constants: LieAlgebra<G>,
}

impl ComplexSplitting {
    /// Splits with the frame `Z_k = x_k - i J x_k` built from [`adapted_real_basis`].
    pub fn split(g: &LieAlgebra<Rational>, j: &AlmostComplexStructure) -> Result<Self, AcsError> {
        j.check_algebra(g.dim())?;
        let onezero: Vec<Vec<G>> = adapted_real_basis(j)
            .into_iter()
            .map(|x| {
                let jx = j.apply(&x);
                x.into_iter()
                    .zip(jx)
                    .map(|(a, b)| G::new(a, -b))
                    .collect()
            })
            .collect();
        Self::with_frame(g, j, onezero)
    }

    /// Splits using a caller-chosen `(1,0)`-frame (given in the real basis coordinates of `g`).
    pub fn with_frame(
        g: &LieAlgebra<Rational>,
        j: &AlmostComplexStructure,
        onezero: Vec<Vec<G>>,
    ) -> Result<Self, AcsError> {
        j.check_algebra(g.dim())?;
        let n = g.dim();
        let m = n / 2;
        if onezero.len() != m {
            return Err(AcsError::FrameDependent);
        }
        let i = G::i();
        for (k, v) in onezero.iter().enumerate() {
            if v.len() != n {
                return Err(AcsError::DimensionMismatch { rows: v.len(), cols: 1, dim: n });
            }
            let jv = j.apply_complex(v);
            if jv.iter().zip(v).any(|(a, b)| *a != i.mul_ref(b)) {
                return Err(AcsError::FrameNotOfType10(k));
            }
        }
        if !independent(n, &onezero) {
            return Err(AcsError::FrameDependent);
        }
        let mut columns = onezero.clone();
        columns.extend(onezero.iter().map(|v| v.iter().map(Scalar::conj).collect::<Vec<_>>()));
        let frame = Matrix::from_columns(n, &columns)?;
        let frame_inv = frame.inverse().map_err(|_| AcsError::FrameDependent)?;
        let complexified = g.embed(|x| G::real(x.clone()));
        let constants = complexified.change_basis(&frame)?;
        Ok(ComplexSplitting { m, frame, frame_inv, constants })
    }

    /// The splitting for the `(1,0)`-frame `Z'_b = Σ_a c_ab Z_a`.
    pub fn rebase(&self, c: &ExactMatrix) -> Result<Self, AcsError> {
        let m = self.m;
        if c.rows() != m || c.cols() != m {
            return Err(AcsError::DimensionMismatch { rows: c.rows(), cols: c.cols(), dim: m });
        }
        let c_inv = c.inverse().map_err(|_| AcsError::FrameDependent)?;
        let block = |x: &ExactMatrix| {
            Matrix::from_fn(2 * m, 2 * m, |r, s| match (r < m, s < m) {
                (true, true) => x[(r, s)].clone(),
                (false, false) => x[(r - m, s - m)].conj(),
                _ => G::zero(),
            })
        };
        let change = block(c);
        let frame = &self.frame * &change;
        let frame_inv = &block(&c_inv) * &self.frame_inv;
        let constants = self.constants.change_basis(&change)?;
        Ok(ComplexSplitting { m, frame, frame_inv, constants })
    }

    /// Complex dimension `m`; the combined frame has `2m` vectors.
    pub fn complex_dim(&self) -> usize {
        self.m
    }

    /// Combined index of `Z_k`.
    pub fn holo(&self, k: usize) -> usize {
        k
    }

    /// Combined index of `Z̄_k`.
    pub fn anti(&self, k: usize) -> usize {
        self.m + k
    }

    pub fn is_holo(&self, a: usize) -> bool {
        a < self.m
    }

    /// Combined index of the conjugate frame vector.
    pub fn bar(&self, a: usize) -> usize {
        if a < self.m {
            a + self.m
        } else {
            a - self.m
        }
    }

    pub fn sector(&self, a: usize, b: usize) -> Sector {
        match (self.is_holo(a), self.is_holo(b)) {
            (true, true) => Sector::HoloHolo,
            (false, false) => Sector::AntiAnti,
            _ => Sector::HoloAnti,
        }
    }

    /// Columns `Z_1..Z_m, Z̄_1..Z̄_m` in the real basis of `g`.
    pub fn frame(&self) -> &ExactMatrix {
        &self.frame
    }

    pub fn onezero(&self) -> Vec<Vec<G>> {
        (0..self.m).map(|k| self.frame.column(k)).collect()
    }

    pub fn zeroone(&self) -> Vec<Vec<G>> {
        (0..self.m).map(|k| self.frame.column(self.m + k)).collect()
    }

    /// Structure constants of `g ⊗ C` in the combined frame.
    pub fn constants(&self) -> &LieAlgebra<G> {
        &self.constants
    }

    /// `[B_a, B_b]` in combined-frame coordinates.
    pub fn bracket(&self, a: usize, b: usize) -> Vec<G> {
        self.constants.basis_bracket(a, b)
    }

    /// Coordinates in the combined frame of a vector given in the real basis.
    pub fn to_frame_coords(&self, v: &[G]) -> Vec<G> {
        self.frame_inv.mul_vec(v).expect("vector length matches frame")
    }

    /// Real-basis coordinates of a vector given in combined-frame coordinates.
    pub fn from_frame_coords(&self, v: &[G]) -> Vec<G> {
        self.frame.mul_vec(v).expect("vector length matches frame")
    }

    /// All brackets of the given sector, as `(a, b, coefficients)` with `a < b`.
    pub fn sector_brackets(&self, sector: Sector) -> Vec<(usize, usize, Vec<G>)> {
        let n = 2 * self.m;
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if self.sector(a, b) == sector {
                    out.push((a, b, self.bracket(a, b)));
                }
            }
        }
        out
    }

    /// First violation of `[g^{1,0}, g^{0,1}] = 0` and `[g^{1,0}, g^{1,0}] ⊆ g^{0,1}`.
    pub fn qk_violation(&self) -> Option<Witness> {
        self.mixed_violation().or_else(|| self.holo_violation())
    }

    /// First `[Z_k, Z̄_l]` that is nonzero.
    fn mixed_violation(&self) -> Option<Witness> {
        for k in 0..self.m {
            for l in 0..self.m {
                if !is_zero_vec(&self.bracket(self.holo(k), self.anti(l))) {
                    return Some(Witness::FramePair { a: self.holo(k), b: self.anti(l), m: self.m });
                }
            }
        }
        None
    }

    /// First `[Z_k, Z_l]` with a nonzero `g^{1,0}` component.
    fn holo_violation(&self) -> Option<Witness> {
        for k in 0..self.m {
            for l in k + 1..self.m {
                let v = self.bracket(self.holo(k), self.holo(l));
                if v[..self.m].iter().any(|x| !x.is_zero()) {
                    return Some(Witness::FramePair { a: self.holo(k), b: self.holo(l), m: self.m });
                }
            }
        }
        None
    }
}

/// `N(e_i, e_j)` for `i < j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NijenhuisTensor {
    dim: usize,
    values: Vec<((usize, usize), Vec<Rational>)>,
}

impl NijenhuisTensor {
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|(_, v)| is_zero_vec(v))
    }

    pub fn value(&self, i: usize, j: usize) -> Vec<Rational> {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => vec![Rational::zero(); self.dim],
            std::cmp::Ordering::Less => self.find(i, j),
            std::cmp::Ordering::Greater => self.find(j, i).into_iter().map(|x| -x).collect(),
        }
    }

    fn find(&self, i: usize, j: usize) -> Vec<Rational> {
        self.values.iter().find(|(p, _)| *p == (i, j)).map(|(_, v)| v.clone()).expect("pair stored")
    }

    /// Nonzero entries `((i, j), N(e_i, e_j))`.
    pub fn nonzero(&self) -> impl Iterator<Item = &((usize, usize), Vec<Rational>)> {
        self.values.iter().filter(|(_, v)| !is_zero_vec(v))
    }
}

fn unit(n: usize, k: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[k] = Rational::one();
    v
}

fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `N(X,Y) = [JX,JY] - [X,Y] - J[JX,Y] - J[X,JY]` on all basis pairs.
///
/// Cross-checked against the splitting: `N = 0` iff `[g^{1,0}, g^{1,0}]` has
/// no `g^{0,1}` component.
pub fn nijenhuis(g: &LieAlgebra<Rational>, j: &AlmostComplexStructure) -> Result<NijenhuisTensor, AcsError> {
    j.check_algebra(g.dim())?;
    let n = g.dim();
    let mut values = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let (x, y) = (unit(n, a), unit(n, b));
            let (jx, jy) = (j.apply(&x), j.apply(&y));
            let t1 = g.bracket(&jx, &jy)?;
            let t2 = g.bracket(&x, &y)?;
            let t3 = j.apply(&g.bracket(&jx, &y)?);
            let t4 = j.apply(&g.bracket(&x, &jy)?);
            values.push(((a, b), sub(&sub(&sub(&t1, &t2), &t3), &t4)));
        }
    }
    let tensor = NijenhuisTensor { dim: n, values };

    let s = ComplexSplitting::split(g, j)?;
    let m = s.complex_dim();
    let anti_part = s
        .sector_brackets(Sector::HoloHolo)
        .iter()
        .any(|(_, _, v)| v[m..].iter().any(|x| !x.is_zero()));
    if tensor.is_zero() == anti_part {
        return Err(AcsError::Inconsistent(format!(
            "Nijenhuis tensor zero = {}, but [g10,g10] has g01 part = {}",
            tensor.is_zero(),
            anti_part
        )));
    }
    Ok(tensor)
}

/// Outcome of [`is_chern_flat`], with a witness from each characterization on failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernFlatVerdict {
    pub holds: bool,
    /// From `[g^{1,0}, g^{0,1}] = 0` on the splitting.
    pub frame_witness: Option<Witness>,
    /// From `[JX, Y] = [X, JY]` on basis pairs.
    pub basis_witness: Option<Witness>,
}

fn basis_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (0..n).map(move |j| (i, j)))
}

/// Chern-flatness, evaluated both as `[g^{1,0}, g^{0,1}] = 0` and as `[JX, Y] = [X, JY]`.
pub fn is_chern_flat(g: &LieAlgebra<Rational>, j: &AlmostComplexStructure) -> Result<ChernFlatVerdict, AcsError> {
    let s = ComplexSplitting::split(g, j)?;
    let frame_witness = s.mixed_violation();

    let n = g.dim();
    let mut basis_witness = None;
    for (a, b) in basis_pairs(n) {
        let (x, y) = (unit(n, a), unit(n, b));
        if g.bracket(&j.apply(&x), &y)? != g.bracket(&x, &j.apply(&y))? {
            basis_witness = Some(Witness::BasisPair { i: a, j: b });
            break;
        }
    }
    if frame_witness.is_some() != basis_witness.is_some() {
        return Err(AcsError::Inconsistent(format!(
            "Chern-flat characterizations disagree: frame {:?}, basis {:?}",
            frame_witness, basis_witness
        )));
    }
    Ok(ChernFlatVerdict { holds: frame_witness.is_none(), frame_witness, basis_witness })
}

/// Outcome of [`is_qk_chern_flat`]; each field is the witness of one equivalent condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QkVerdict {
    pub holds: bool,
    /// `[g^{1,0}, g^{0,1}] = 0` and `[g^{1,0}, g^{1,0}] ⊆ g^{0,1}`.
    pub brackets: Option<Witness>,
    /// `∂ Λ^{1,0} = ∂̄ Λ^{1,0} = 0`.
    pub coframe: Option<Witness>,
    /// `J[X,Y] = -[JX,Y] = -[X,JY]`.
    pub real_form: Option<Witness>,
}

/// Quasi-Kähler Chern-flatness, evaluated through all three equivalent conditions.
pub fn is_qk_chern_flat(g: &LieAlgebra<Rational>, j: &AlmostComplexStructure) -> Result<QkVerdict, AcsError> {
    let s = ComplexSplitting::split(g, j)?;
    qk_verdict(g, j, &s)
}

/// As [`is_qk_chern_flat`], reusing a splitting of the same pair.
pub fn qk_verdict(g: &LieAlgebra<Rational>, j: &AlmostComplexStructure, s: &ComplexSplitting) -> Result<QkVerdict, AcsError> {
    let verdict = qk_on_splitting(s);
    let (brackets, coframe) = (verdict.0, verdict.1);

    let n = g.dim();
    let mut real_form = None;
    for (a, b) in basis_pairs(n) {
        let (x, y) = (unit(n, a), unit(n, b));
        let jxy = j.apply(&g.bracket(&x, &y)?);
        let neg = |v: Vec<Rational>| v.into_iter().map(|t| -t).collect::<Vec<_>>();
        if jxy != neg(g.bracket(&j.apply(&x), &y)?) || jxy != neg(g.bracket(&x, &j.apply(&y))?) {
            real_form = Some(Witness::BasisPair { i: a, j: b });
            break;
        }
    }
    let flags = [brackets.is_none(), coframe.is_none(), real_form.is_none()];
    if flags.iter().any(|&f| f != flags[0]) {
        return Err(AcsError::Inconsistent(format!(
            "quasi-Kähler Chern-flat conditions disagree: brackets {:?}, coframe {:?}, real form {:?}",
            brackets, coframe, real_form
        )));
    }
    Ok(QkVerdict { holds: flags[0], brackets, coframe, real_form })
}

/// Conditions (brackets, coframe) evaluated on a splitting alone.
fn qk_on_splitting(s: &ComplexSplitting) -> (Option<Witness>, Option<Witness>) {
    let brackets = s.qk_violation();
    let mut coframe = None;
    'outer: for k in 0..s.complex_dim() {
        let dz = forms::exterior_d(s, &forms::InvariantForm::coframe(s.complex_dim(), s.holo(k)));
        for bidegree in [Bidegree::new(2, 0), Bidegree::new(1, 1)] {
            if !dz.component(bidegree).is_zero() {
                coframe = Some(Witness::Coframe { k, bidegree });
                break 'outer;
            }
        }
    }
    (brackets, coframe)
}

/// Whether `J` maps the center into itself. Requires Chern-flatness.
pub fn check_center_j_invariant(g: &LieAlgebra<Rational>, j: &AlmostComplexStructure) -> Result<bool, AcsError> {
    let verdict = is_chern_flat(g, j)?;
    if let Some(w) = verdict.frame_witness {
        return Err(AcsError::NotChernFlat(w));
    }
    let z = g.center();
    Ok(z.basis().iter().all(|v| z.contains(&j.apply(v))))
}

/// Complex dimension of `z ⊗ C ∩ g^{1,0}`, i.e. half the real dimension of the largest
/// `J`-invariant subspace of the center.
pub fn complex_center_dim(g: &LieAlgebra<Rational>, j: &AlmostComplexStructure) -> Result<usize, AcsError> {
    j.check_algebra(g.dim())?;
    complex_dim_of(&g.center(), j)
}

/// Half the real dimension of the largest `J`-invariant subspace of `z`.
pub fn complex_dim_of(z: &crate::lie::Subspace<Rational>, j: &AlmostComplexStructure) -> Result<usize, AcsError> {
    // {x in z : Jx in z} is the kernel of x -> (component of Jx outside z), computed on z's basis.
    let n = j.dim();
    let k = z.dim();
    if k == 0 {
        return Ok(0);
    }
    let images: Vec<Vec<Rational>> = z.basis().iter().map(|v| j.apply(v)).collect();
    // Solve for coefficients a with sum a_i J z_i in span(z): stack [J z | z] and read the kernel.
    let mut cols = images;
    cols.extend(z.basis().iter().cloned());
    let m = Matrix::from_columns(n, &cols)?;
    let kernel = m.kernel_basis();
    let parts: Vec<Vec<Rational>> = kernel.iter().map(|v| v[..k].to_vec()).collect();
    let invariant = crate::lie::Subspace::span(k, parts.into_iter().filter(|v| !is_zero_vec(v)).collect());
    Ok(invariant.dim() / 2)
}

/// Checks `Σ_r c_{ij}^{r̄} c_{r̄k̄}^{l} = 0` for all `i, j, k, l` and cross-checks 2-step nilpotency.
///
/// Requires the splitting to come from a quasi-Kähler Chern-flat pair. Returns the
/// common verdict of the quadratic relations and the lower central series.
pub fn two_step_certificate(s: &ComplexSplitting) -> Result<bool, AcsError> {
    let (brackets, _) = qk_on_splitting(s);
    if let Some(w) = brackets {
        return Err(AcsError::NotQkChernFlat(w));
    }
    let m = s.complex_dim();
    let c = s.constants();
    let mut quadratic = true;
    'outer: for i in 0..m {
        for j in i + 1..m {
            for k in 0..m {
                for l in 0..m {
                    let mut acc = G::zero();
                    for r in 0..m {
                        let a = c.structure_constant(s.holo(i), s.holo(j), s.anti(r));
                        if a.is_zero() {
                            continue;
                        }
                        acc += &a.mul_ref(&c.structure_constant(s.anti(r), s.anti(k), s.holo(l)));
                    }
                    if !acc.is_zero() {
                        quadratic = false;
                        break 'outer;
                    }
                }
            }
        }
    }
    let two_step = c.nilpotency_step().is_some_and(|k| k <= 2);
    if quadratic != two_step {
        return Err(AcsError::Inconsistent(format!(
            "quadratic relations hold = {quadratic}, lower central series 2-step = {two_step}"
        )));
    }
    Ok(quadratic)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn iwasawa() -> (LieAlgebra<Rational>, AlmostComplexStructure) {
        let g = LieAlgebra::from_brackets(
            6,
            &[(0, 1, 2, q(1)), (3, 4, 2, q(-1)), (1, 3, 5, q(1)), (4, 0, 5, q(1))],
        )
        .unwrap();
        (g, AlmostComplexStructure::standard(6).unwrap())
    }

    /// Complex Heisenberg [u1,u2]=u3 realified, J = multiplication by i.
    fn complex_heisenberg() -> (LieAlgebra<Rational>, AlmostComplexStructure) {
        let g = LieAlgebra::from_brackets(
            6,
            &[(0, 1, 2, q(1)), (0, 4, 5, q(1)), (3, 1, 5, q(1)), (3, 4, 2, q(-1))],
        )
        .unwrap();
        (g, AlmostComplexStructure::standard(6).unwrap())
    }

    fn anti_unit(m: usize, k: usize, c: i64) -> Vec<G> {
        let mut v = vec![G::zero(); 2 * m];
        v[m + k] = G::from_ints(c, 0);
        v
    }

    #[test]
    fn rejects_bad_j() {
        assert!(matches!(
            AlmostComplexStructure::new(RationalMatrix::identity(2)),
            Err(AcsError::NotAlmostComplex)
        ));
        assert!(matches!(AlmostComplexStructure::standard(3), Err(AcsError::OddDimension(3))));
        assert!(matches!(
            AlmostComplexStructure::new(RationalMatrix::zeros(3, 3)),
            Err(AcsError::OddDimension(3))
        ));
    }

    #[test]
    fn iwasawa_split_reproduces_frame() {
        let (g, j) = iwasawa();
        let s = ComplexSplitting::split(&g, &j).unwrap();
        // Z_1 = X_1 - i X_4
        let z1 = &s.onezero()[0];
        assert_eq!(z1[0], G::one());
        assert_eq!(z1[3], -G::i());
        assert_eq!(s.bracket(s.holo(0), s.holo(1)), anti_unit(3, 2, 2));
        let mut want = vec![G::zero(); 6];
        want[2] = G::from_ints(2, 0);
        assert_eq!(s.bracket(s.anti(0), s.anti(1)), want);
        for (a, b, v) in s.sector_brackets(Sector::AntiAnti) {
            let conj: Vec<G> = s.bracket(s.bar(a), s.bar(b)).iter().map(Scalar::conj).collect();
            let swapped: Vec<G> = (0..6).map(|k| conj[s.bar(k)].clone()).collect();
            assert_eq!(v, swapped);
        }
    }

    #[test]
    fn abelian_split_is_trivial() {
        let g = LieAlgebra::abelian(4);
        let j = AlmostComplexStructure::standard(4).unwrap();
        let s = ComplexSplitting::split(&g, &j).unwrap();
        assert!(s.constants().is_abelian());
        assert!(nijenhuis(&g, &j).unwrap().is_zero());
        assert!(is_chern_flat(&g, &j).unwrap().holds);
        assert!(is_qk_chern_flat(&g, &j).unwrap().holds);
        assert!(check_center_j_invariant(&g, &j).unwrap());
        assert!(two_step_certificate(&s).unwrap());
    }

    #[test]
    fn iwasawa_predicates() {
        let (g, j) = iwasawa();
        assert!(!nijenhuis(&g, &j).unwrap().is_zero());
        assert!(is_chern_flat(&g, &j).unwrap().holds);
        let v = is_qk_chern_flat(&g, &j).unwrap();
        assert!(v.holds && v.brackets.is_none() && v.coframe.is_none() && v.real_form.is_none());
        assert!(check_center_j_invariant(&g, &j).unwrap());
        assert_eq!(j.apply(&unit(6, 2)), unit(6, 5));
        assert_eq!(complex_center_dim(&g, &j).unwrap(), 1);
        assert!(two_step_certificate(&ComplexSplitting::split(&g, &j).unwrap()).unwrap());
    }

    #[test]
    fn complex_heisenberg_is_chern_flat_only() {
        let (g, j) = complex_heisenberg();
        assert!(nijenhuis(&g, &j).unwrap().is_zero());
        let s = ComplexSplitting::split(&g, &j).unwrap();
        let mut want = vec![G::zero(); 6];
        want[2] = G::from_ints(2, 0);
        assert_eq!(s.bracket(0, 1), want, "[Z1,Z2] = 2 Z3 lies in g^(1,0)");
        assert!(is_chern_flat(&g, &j).unwrap().holds);
        let v = is_qk_chern_flat(&g, &j).unwrap();
        assert!(!v.holds);
        assert_eq!(v.brackets, Some(Witness::FramePair { a: 0, b: 1, m: 3 }));
        assert!(matches!(v.coframe, Some(Witness::Coframe { k: 2, .. })));
        assert!(v.real_form.is_some());
        assert!(matches!(two_step_certificate(&s), Err(AcsError::NotQkChernFlat(_))));
    }

    #[test]
    fn non_chern_flat_pair_reports_both_witnesses() {
        // Heisenberg h3 + R with J e1 = e2, J e3 = e4: [Z1, Zb1] != 0.
        let g = LieAlgebra::from_brackets(4, &[(0, 1, 2, q(1))]).unwrap();
        let j = AlmostComplexStructure::new(
            Matrix::from_rows(vec![
                vec![q(0), q(-1), q(0), q(0)],
                vec![q(1), q(0), q(0), q(0)],
                vec![q(0), q(0), q(0), q(-1)],
                vec![q(0), q(0), q(1), q(0)],
            ])
            .unwrap(),
        )
        .unwrap();
        let v = is_chern_flat(&g, &j).unwrap();
        assert!(!v.holds);
        assert!(v.frame_witness.is_some() && v.basis_witness.is_some());
        assert!(matches!(check_center_j_invariant(&g, &j), Err(AcsError::NotChernFlat(_))));
        assert!(!is_qk_chern_flat(&g, &j).unwrap().holds);
    }

    #[test]
    fn with_frame_validates() {
        let (g, j) = iwasawa();
        let s = ComplexSplitting::split(&g, &j).unwrap();
        let mut bad = s.onezero();
        bad[1] = bad[0].clone();
        assert!(matches!(ComplexSplitting::with_frame(&g, &j, bad), Err(AcsError::FrameDependent)));
        let mut wrong_type = s.onezero();
        wrong_type[0] = s.zeroone()[0].clone();
        assert!(matches!(
            ComplexSplitting::with_frame(&g, &j, wrong_type),
            Err(AcsError::FrameNotOfType10(0))
        ));
    }
}
