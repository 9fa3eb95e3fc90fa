//! Left-invariant forms as Chevalley–Eilenberg cochains on `g ⊗ C`.
//!
//! A form lives on the combined coframe of a [`ComplexSplitting`]: index `a < m`
//! is `ζ_a`, index `m + a` is `ζ̄_a`. Monomials are strictly increasing index
//! lists and `(α∧β)(X,Y) = α(X)β(Y) − α(Y)β(X)`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::acs::{ComplexSplitting, Witness};
use crate::linalg::{
    ExactMatrix, GaussianRational, LinalgError, Matrix, Rational, RationalMatrix, Scalar,
};

type G = GaussianRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormsError {
    #[error("precondition failed: splitting is not quasi-Kähler Chern-flat ({0})")]
    NotQkChernFlat(Witness),
    #[error("metric must be a {expected}x{expected} matrix")]
    MetricShape { expected: usize },
    #[error("metric is not Hermitian")]
    MetricNotHermitian,
    #[error("metric is not positive definite")]
    MetricNotPositive,
    #[error("cannot parse form: {0}")]
    Parse(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A `(p, q)` type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bidegree {
    pub p: usize,
    pub q: usize,
}

impl Bidegree {
    pub fn new(p: usize, q: usize) -> Self {
        Bidegree { p, q }
    }

    fn shift(self, dp: isize, dq: isize) -> Option<Bidegree> {
        let p = self.p as isize + dp;
        let q = self.q as isize + dq;
        (p >= 0 && q >= 0).then(|| Bidegree::new(p as usize, q as usize))
    }
}

/// The four pieces of `d = A + ∂ + ∂̄ + Ā`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TypeOperator {
    /// `(p, q) -> (p+2, q-1)`
    A,
    /// `(p, q) -> (p+1, q)`
    Partial,
    /// `(p, q) -> (p, q+1)`
    PartialBar,
    /// `(p, q) -> (p-1, q+2)`
    ABar,
}

impl TypeOperator {
    pub const ALL: [TypeOperator; 4] =
        [TypeOperator::A, TypeOperator::Partial, TypeOperator::PartialBar, TypeOperator::ABar];

    fn shift(self) -> (isize, isize) {
        match self {
            TypeOperator::A => (2, -1),
            TypeOperator::Partial => (1, 0),
            TypeOperator::PartialBar => (0, 1),
            TypeOperator::ABar => (-1, 2),
        }
    }
}

/// Sorts `idx` in place, returning the permutation sign, or `None` on a repeated index.
fn canonicalize(idx: &mut [usize]) -> Option<bool> {
    let mut negative = false;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(negative)
    }
}

/// A homogeneous left-invariant form on `g ⊗ C`.
#[derive(Clone, PartialEq, Eq)]
pub struct InvariantForm {
    m: usize,
    degree: usize,
    terms: BTreeMap<Vec<usize>, G>,
}

impl InvariantForm {
    pub fn zero(m: usize, degree: usize) -> Self {
        InvariantForm { m, degree, terms: BTreeMap::new() }
    }

    /// The constant 0-form `c`.
    pub fn constant(m: usize, c: G) -> Self {
        let mut f = Self::zero(m, 0);
        f.add_term(Vec::new(), c);
        f
    }

    /// The coframe element dual to combined frame index `a`.
    pub fn coframe(m: usize, a: usize) -> Self {
        Self::monomial(m, vec![a], G::one())
    }

    /// `c * ζ_{a_1} ∧ ... ∧ ζ_{a_k}` for arbitrary (unsorted) combined indices.
    pub fn monomial(m: usize, indices: Vec<usize>, c: G) -> Self {
        assert!(indices.iter().all(|&a| a < 2 * m), "coframe index out of range");
        let mut f = Self::zero(m, indices.len());
        f.add_term(indices, c);
        f
    }

    fn add_term(&mut self, mut indices: Vec<usize>, c: G) {
        debug_assert_eq!(indices.len(), self.degree);
        if c.is_zero() {
            return;
        }
        let Some(negative) = canonicalize(&mut indices) else { return };
        let c = if negative { -c } else { c };
        let entry = self.terms.entry(indices.clone()).or_insert_with(G::zero);
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&indices);
        }
    }

    pub fn complex_dim(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero terms in increasing monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&[usize], &G)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn coefficient(&self, indices: &[usize]) -> G {
        let mut idx = indices.to_vec();
        match canonicalize(&mut idx) {
            None => G::zero(),
            Some(negative) => {
                let c = self.terms.get(&idx).cloned().unwrap_or_else(G::zero);
                if negative {
                    -c
                } else {
                    c
                }
            }
        }
    }

    pub fn bidegree_of(&self, indices: &[usize]) -> Bidegree {
        let p = indices.iter().filter(|&&a| a < self.m).count();
        Bidegree::new(p, indices.len() - p)
    }

    /// Bidegrees with a nonzero component.
    pub fn bidegrees(&self) -> Vec<Bidegree> {
        let mut out: Vec<Bidegree> = self.terms.keys().map(|k| self.bidegree_of(k)).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn component(&self, bidegree: Bidegree) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(k, _)| self.bidegree_of(k) == bidegree)
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        InvariantForm { m: self.m, degree: self.degree, terms }
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.m, other.m, "forms over different splittings");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        assert_eq!(self.degree, other.degree, "adding forms of different degree");
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-G::one()))
    }

    pub fn scale(&self, c: &G) -> Self {
        let mut out = Self::zero(self.m, self.degree);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v.mul_ref(c));
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = Self::zero(self.m, self.degree + other.degree);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut idx = a.clone();
                idx.extend_from_slice(b);
                out.add_term(idx, x.mul_ref(y));
            }
        }
        out
    }

    /// Complex conjugate: `ζ_a ↔ ζ̄_a`, coefficients conjugated.
    pub fn conj(&self) -> Self {
        let mut out = Self::zero(self.m, self.degree);
        for (k, v) in &self.terms {
            let idx = k.iter().map(|&a| if a < self.m { a + self.m } else { a - self.m }).collect();
            out.add_term(idx, v.conj());
        }
        out
    }

    /// Evaluates on vectors given in combined-frame coordinates (`det[α_i(v_j)]` per monomial).
    pub fn evaluate(&self, vectors: &[Vec<G>]) -> G {
        assert_eq!(vectors.len(), self.degree, "wrong number of arguments");
        let mut total = G::zero();
        for (k, c) in &self.terms {
            let minor = Matrix::from_fn(self.degree, self.degree, |r, col| vectors[col][k[r]].clone());
            let det = if self.degree == 0 { G::one() } else { minor.determinant().expect("square") };
            total += &det.mul_ref(c);
        }
        total
    }

    /// Coefficients on the real coframe `e^{i_1} ∧ ... ∧ e^{i_k}` dual to the real basis of `g`.
    pub fn real_coefficients(&self, s: &ComplexSplitting) -> BTreeMap<Vec<usize>, G> {
        let n = 2 * self.m;
        let units: Vec<Vec<G>> = (0..n)
            .map(|i| {
                let mut e = vec![G::zero(); n];
                e[i] = G::one();
                s.to_frame_coords(&e)
            })
            .collect();
        let mut out = BTreeMap::new();
        for idx in increasing_tuples(n, self.degree) {
            let args: Vec<Vec<G>> = idx.iter().map(|&i| units[i].clone()).collect();
            let v = self.evaluate(&args);
            if !v.is_zero() {
                out.insert(idx, v);
            }
        }
        out
    }

    /// Parses `"c * z1^zb2 + ..."` using `labels` for the coframe names.
    pub fn parse(text: &str, labels: &CoframeLabels) -> Result<Self, FormsError> {
        let err = |msg: &str| FormsError::Parse(format!("{msg} in {text:?}"));
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty input"));
        }
        let mut pieces = Vec::new();
        let mut depth = 0i32;
        let mut start = 0;
        for (pos, ch) in compact.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                '+' | '-' if depth == 0 && pos > start => {
                    pieces.push(&compact[start..pos]);
                    start = pos;
                }
                _ => {}
            }
        }
        pieces.push(&compact[start..]);

        let mut degree = None;
        let mut out: Option<InvariantForm> = None;
        for piece in pieces {
            let (negative, body) = match piece.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, piece.strip_prefix('+').unwrap_or(piece)),
            };
            let (coeff_text, mono_text) = split_term(body);
            let mut coeff = match coeff_text {
                None => G::one(),
                Some(c) => {
                    let c = c.strip_prefix('(').and_then(|c| c.strip_suffix(')')).unwrap_or(c);
                    G::parse_text(c).map_err(|_| err("bad coefficient"))?
                }
            };
            if negative {
                coeff = -coeff;
            }
            let indices = match mono_text {
                None => Vec::new(),
                Some(mono) => mono
                    .split('^')
                    .map(|name| labels.index_of(name).ok_or_else(|| err(&format!("unknown coframe name {name:?}"))))
                    .collect::<Result<Vec<_>, _>>()?,
            };
            if *degree.get_or_insert(indices.len()) != indices.len() {
                return Err(err("terms of mixed degree"));
            }
            let f = out.get_or_insert_with(|| InvariantForm::zero(labels.m, indices.len()));
            f.add_term(indices, coeff);
        }
        Ok(out.expect("at least one term"))
    }

    /// Renders with the given coframe names.
    pub fn format_with(&self, labels: &CoframeLabels) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (n, (k, c)) in self.terms.iter().enumerate() {
            let (negative, c) = if c.im.is_zero() && c.re < Rational::zero() {
                (true, -c.clone())
            } else {
                (false, c.clone())
            };
            if n == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mono: Vec<String> = k.iter().map(|&a| labels.name(a)).collect();
            let coeff = if !c.re.is_zero() && !c.im.is_zero() { format!("({c})") } else { c.to_string() };
            if mono.is_empty() {
                out.push_str(&coeff);
            } else if c.is_one() {
                out.push_str(&mono.join("^"));
            } else {
                out.push_str(&format!("{coeff} * {}", mono.join("^")));
            }
        }
        out
    }
}

/// Splits `"coeff*mono"` where the monomial starts with a coframe letter.
fn split_term(body: &str) -> (Option<&str>, Option<&str>) {
    let is_mono = |s: &str| s.starts_with('z') || s.starts_with('n');
    if is_mono(body) {
        return (None, Some(body));
    }
    match body.rfind('*') {
        Some(pos) if is_mono(&body[pos + 1..]) => (Some(&body[..pos]), Some(&body[pos + 1..])),
        _ => (Some(body), None),
    }
}

fn increasing_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for a in start..n {
            cur.push(a);
            go(a + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

impl fmt::Display for InvariantForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(&CoframeLabels::plain(self.m)))
    }
}

impl fmt::Debug for InvariantForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "InvariantForm(deg {}: {})", self.degree, self)
    }
}

/// Coframe names: `z1..zl`, `n1..n(m-l)` and their conjugates `zb`, `nb`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoframeLabels {
    m: usize,
    l: usize,
}

impl CoframeLabels {
    /// Every coframe element is a `z`.
    pub fn plain(m: usize) -> Self {
        CoframeLabels { m, l: m }
    }

    /// The first `l` coframe elements are `z`, the rest are `n`.
    pub fn adapted(m: usize, l: usize) -> Self {
        assert!(l <= m);
        CoframeLabels { m, l }
    }

    pub fn name(&self, a: usize) -> String {
        let (k, bar) = if a < self.m { (a, "") } else { (a - self.m, "b") };
        if k < self.l {
            format!("z{bar}{}", k + 1)
        } else {
            format!("n{bar}{}", k - self.l + 1)
        }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        let (letter, rest) = name.split_at(1);
        let (bar, digits) = match rest.strip_prefix('b') {
            Some(d) => (true, d),
            None => (false, rest),
        };
        let k: usize = digits.parse().ok().filter(|&k| k >= 1)?;
        let k = match letter {
            "z" if k <= self.l => k - 1,
            "n" if k <= self.m - self.l => self.l + k - 1,
            _ => return None,
        };
        Some(if bar { k + self.m } else { k })
    }
}

/// `d ζ_γ = −Σ_{α<β} c_{αβ}^γ ζ_α ∧ ζ_β` for every combined index `γ`.
fn coframe_differentials(s: &ComplexSplitting) -> Vec<InvariantForm> {
    let m = s.complex_dim();
    let mut out = vec![InvariantForm::zero(m, 2); 2 * m];
    for (a, b, v) in s.constants().nonzero_brackets() {
        for (g, c) in v.iter().enumerate() {
            if !c.is_zero() {
                out[g].add_term(vec![a, b], -c.clone());
            }
        }
    }
    out
}

/// The Chevalley–Eilenberg differential, extended from the coframe as an antiderivation.
pub fn exterior_d(s: &ComplexSplitting, f: &InvariantForm) -> InvariantForm {
    assert_eq!(f.m, s.complex_dim(), "form and splitting disagree on dimension");
    let dz = coframe_differentials(s);
    let m = f.m;
    let mut out = InvariantForm::zero(m, f.degree + 1);
    for (k, c) in &f.terms {
        for t in 0..k.len() {
            let d = &dz[k[t]];
            if d.is_zero() {
                continue;
            }
            let sign = if t % 2 == 0 { c.clone() } else { -c.clone() };
            let prefix = InvariantForm::monomial(m, k[..t].to_vec(), sign);
            let suffix = InvariantForm::monomial(m, k[t + 1..].to_vec(), G::one());
            let term = prefix.wedge(d).wedge(&suffix);
            for (idx, v) in term.terms {
                out.add_term(idx, v);
            }
        }
    }
    out
}

/// One piece of `d f`: each `(p, q)` component of `f` is differentiated and projected.
pub fn type_components(s: &ComplexSplitting, f: &InvariantForm, which: TypeOperator) -> InvariantForm {
    let (dp, dq) = which.shift();
    let mut out = InvariantForm::zero(f.m, f.degree + 1);
    for b in f.bidegrees() {
        let Some(target) = b.shift(dp, dq) else { continue };
        let piece = exterior_d(s, &f.component(b)).component(target);
        out = out.add(&piece);
    }
    out
}

/// A Hermitian positive-definite matrix `h_{jk̄}` on the `(1,0)`-frame of a splitting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermitianMetric {
    h: ExactMatrix,
}

impl HermitianMetric {
    pub fn new(h: ExactMatrix) -> Result<Self, FormsError> {
        if !h.is_square() {
            return Err(FormsError::MetricShape { expected: h.rows() });
        }
        if h.adjoint() != h {
            return Err(FormsError::MetricNotHermitian);
        }
        for k in 1..=h.rows() {
            let minor = Matrix::from_fn(k, k, |r, c| h[(r, c)].clone());
            let det = minor.determinant()?;
            if !(det.is_real() && det.re > Rational::zero()) {
                return Err(FormsError::MetricNotPositive);
            }
        }
        Ok(HermitianMetric { h })
    }

    pub fn identity(m: usize) -> Self {
        HermitianMetric { h: ExactMatrix::identity(m) }
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.h
    }

    pub fn dim(&self) -> usize {
        self.h.rows()
    }
}

/// `ω = 2i Σ h_{jk̄} ζ_j ∧ ζ̄_k`, so that `h = I` makes every `{x_k, J x_k}` orthonormal.
pub fn kaehler_form(s: &ComplexSplitting, metric: &HermitianMetric) -> Result<InvariantForm, FormsError> {
    let m = s.complex_dim();
    if metric.dim() != m {
        return Err(FormsError::MetricShape { expected: m });
    }
    let two_i = G::from_ints(0, 2);
    let mut omega = InvariantForm::zero(m, 2);
    for j in 0..m {
        for k in 0..m {
            omega.add_term(vec![s.holo(j), s.anti(k)], two_i.mul_ref(&metric.h[(j, k)]));
        }
    }
    Ok(omega)
}

/// Whether `∂̄ ω = 0`, i.e. `d ω` has no `(1,2)` part.
pub fn is_quasi_kaehler(s: &ComplexSplitting, metric: &HermitianMetric) -> Result<bool, FormsError> {
    let omega = kaehler_form(s, metric)?;
    Ok(type_components(s, &omega, TypeOperator::PartialBar).is_zero())
}

/// Solutions of `∂̄β + Aβ̄ = 0` on `Λ^{2,0}` and whether each is closed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    /// Real dimension of `Λ^{2,0}`.
    pub unknowns: usize,
    /// Real dimension of the solution space.
    pub solution_dim: usize,
    pub solutions: Vec<InvariantForm>,
    /// Indices into `solutions` of forms with `dβ ≠ 0`.
    pub counterexamples: Vec<usize>,
}

impl LemmaReport {
    pub fn all_closed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

fn real_rows(f: &InvariantForm, monomials: &[Vec<usize>]) -> Vec<Rational> {
    let mut out = Vec::with_capacity(2 * monomials.len());
    for k in monomials {
        let c = f.coefficient(k);
        out.push(c.re);
        out.push(c.im);
    }
    out
}

/// Builds the real linear system `∂̄β + Aβ̄ = 0` over `β ∈ Λ^{2,0}`, solves it, and checks `dβ = 0`.
pub fn lemma_tosatti_space(s: &ComplexSplitting) -> Result<LemmaReport, FormsError> {
    if let Some(w) = s.qk_violation() {
        return Err(FormsError::NotQkChernFlat(w));
    }
    let m = s.complex_dim();
    let pairs: Vec<Vec<usize>> = increasing_tuples(m, 2);
    let mut unit_forms = Vec::new();
    for pair in &pairs {
        for c in [G::one(), G::i()] {
            unit_forms.push(InvariantForm::monomial(m, pair.clone(), c));
        }
    }
    let apply = |beta: &InvariantForm| {
        type_components(s, beta, TypeOperator::PartialBar)
            .add(&type_components(s, &beta.conj(), TypeOperator::A))
    };
    let images: Vec<InvariantForm> = unit_forms.iter().map(apply).collect();
    let mut monomials: Vec<Vec<usize>> =
        images.iter().flat_map(|f| f.terms().map(|(k, _)| k.to_vec())).collect();
    monomials.sort();
    monomials.dedup();

    let columns: Vec<Vec<Rational>> = images.iter().map(|f| real_rows(f, &monomials)).collect();
    let unknowns = unit_forms.len();
    let system = if monomials.is_empty() {
        RationalMatrix::zeros(0, unknowns)
    } else {
        Matrix::from_columns(2 * monomials.len(), &columns)?
    };
    let kernel = system.kernel_basis();

    let mut solutions = Vec::new();
    let mut counterexamples = Vec::new();
    for v in &kernel {
        let mut beta = InvariantForm::zero(m, 2);
        for (x, unit) in v.iter().zip(&unit_forms) {
            beta = beta.add(&unit.scale(&G::real(x.clone())));
        }
        debug_assert!(apply(&beta).is_zero());
        if !exterior_d(s, &beta).is_zero() {
            counterexamples.push(solutions.len());
        }
        solutions.push(beta);
    }
    Ok(LemmaReport { unknowns, solution_dim: kernel.len(), solutions, counterexamples })
}

/// `Ω_k = Σ_{i<j} ζ_i ∧ ζ_j` on `2k` holomorphic coframe elements.
pub fn standard_skew_form(k: usize) -> InvariantForm {
    let m = 2 * k;
    let mut out = InvariantForm::zero(m, 2);
    for i in 0..m {
        for j in i + 1..m {
            out.add_term(vec![i, j], G::one());
        }
    }
    out
}

/// `f ∧ ... ∧ f` (`k` factors).
pub fn wedge_power(f: &InvariantForm, k: usize) -> InvariantForm {
    let mut out = InvariantForm::constant(f.m, G::one());
    for _ in 0..k {
        out = out.wedge(f);
    }
    out
}
