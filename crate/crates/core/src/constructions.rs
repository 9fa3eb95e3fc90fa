//! Named example algebras, the conjugate complexification `h ⊗ C̄`, and frame changes.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::acs::{self, AcsError, AlmostComplexStructure, ComplexSplitting};
use crate::lie::{LieAlgebra, LieError, StructureConstants};
use crate::linalg::{ExactMatrix, GaussianRational, LinalgError, Matrix, Rational, RationalMatrix, Scalar};

type G = GaussianRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("input is not 2-step nilpotent")]
    NotTwoStep,
    #[error("unknown catalog entry {0:?}")]
    UnknownName(String),
    #[error("invalid parameter for {name}: {reason}")]
    InvalidParameter { name: String, reason: String },
    #[error("map is singular")]
    SingularMap,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("complex structure constants do not define a real form")]
    NotReal,
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Acs(#[from] AcsError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// `h ⊗ C̄` on the basis `X_1⊗1, ..., X_n⊗1, X_1⊗i, ..., X_n⊗i`.
///
/// | bracket | value |
/// |---|---|
/// | `[X⊗1, Y⊗1]` | `[X,Y]⊗1` |
/// | `[X⊗i, Y⊗i]` | `−[X,Y]⊗1` |
/// | `[X⊗1, Y⊗i]` | `−[X,Y]⊗i` |
///
/// `J(X⊗1) = X⊗i`, `J(X⊗i) = −X⊗1`.
pub fn conjugate_complexification(
    h: &LieAlgebra<Rational>,
) -> Result<(LieAlgebra<Rational>, AlmostComplexStructure), ConstructionError> {
    if !h.nilpotency_step().is_some_and(|k| k <= 2) {
        return Err(ConstructionError::NotTwoStep);
    }
    let n = h.dim();
    let mut c = StructureConstants::zero(2 * n);
    for (a, b, v) in h.nonzero_brackets() {
        for (k, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            c.add_bracket(a, b, k, x.clone())?;
            c.add_bracket(n + a, n + b, k, -x.clone())?;
            c.add_bracket(a, n + b, n + k, -x.clone())?;
            c.add_bracket(n + a, b, n + k, -x.clone())?;
        }
    }
    let g = LieAlgebra::new(c)?;
    Ok((g, AlmostComplexStructure::standard(2 * n)?))
}

/// Real form of a complexified algebra given in a combined frame `Z_1..Z_m, Z̄_1..Z̄_m`.
///
/// The real basis is `x_k = (Z_k + Z̄_k)/2`, `y_k = J x_k = i(Z_k − Z̄_k)/2`, ordered
/// `x_1..x_m, y_1..y_m`, so `split` recovers the frame exactly.
pub fn realify(
    complex: &LieAlgebra<G>,
) -> Result<(LieAlgebra<Rational>, AlmostComplexStructure), ConstructionError> {
    let n = complex.dim();
    if n % 2 == 1 {
        return Err(ConstructionError::DimensionMismatch(format!("combined frame of odd size {n}")));
    }
    let m = n / 2;
    let half = G::from_parts((1, 2), (0, 1));
    let half_i = G::from_parts((0, 1), (1, 2));
    let p = Matrix::from_fn(n, n, |r, c| {
        let (k, imag) = if c < m { (c, false) } else { (c - m, true) };
        match (imag, r == k, r == m + k) {
            (false, true, _) | (false, _, true) => half.clone(),
            (true, true, _) => half_i.clone(),
            (true, _, true) => -half_i.clone(),
            _ => G::zero(),
        }
    });
    let real = complex.change_basis(&p)?;
    let mut c = StructureConstants::zero(n);
    for (a, b, v) in real.nonzero_brackets() {
        for (k, x) in v.iter().enumerate() {
            if !x.is_real() {
                return Err(ConstructionError::NotReal);
            }
            if !x.is_zero() {
                c.set(a, b, k, x.re.clone())?;
            }
        }
    }
    Ok((LieAlgebra::new(c)?, AlmostComplexStructure::standard(n)?))
}

/// Real form of `[Z_i, Z_j] = c Z̄_k` relations (0-based, `i < j`) on `m` complex dimensions.
pub fn qk_model(
    m: usize,
    relations: &[(usize, usize, usize, G)],
) -> Result<(LieAlgebra<Rational>, AlmostComplexStructure), ConstructionError> {
    let mut c = StructureConstants::zero(2 * m);
    for (i, j, k, v) in relations {
        c.add_bracket(*i, *j, m + k, v.clone())?;
        c.add_bracket(m + i, m + j, *k, v.conj())?;
    }
    realify(&LieAlgebra::new(c)?)
}

/// Heisenberg algebra on `X_1..X_k, Y_1..Y_k, Z` with `[X_a, Y_a] = Z`.
pub fn heisenberg(dim: usize) -> Result<LieAlgebra<Rational>, ConstructionError> {
    if dim < 3 || dim % 2 == 0 {
        return Err(ConstructionError::InvalidParameter {
            name: "heisenberg".into(),
            reason: format!("dimension must be odd and at least 3, got {dim}"),
        });
    }
    let k = dim / 2;
    let brackets: Vec<_> = (0..k).map(|a| (a, k + a, dim - 1, q(1))).collect();
    Ok(LieAlgebra::from_brackets(dim, &brackets)?)
}

/// Change of basis taking the `X`-frame of `iwasawa_j3` to the `e`-frame of `iwasawa_e_frame`.
///
/// Column `k` is the image of `X_{k+1}`: `X1→e1, X2→e4, X3→−e6, X4→−e2, X5→e3, X6→e5`.
pub fn iwasawa_frame_map() -> RationalMatrix {
    signed_permutation(&[(0, 1), (3, 1), (5, -1), (1, -1), (2, 1), (4, 1)])
}

/// The correspondence as commonly tabulated: `X1↔e1, X4↔−e2, X2↔e4, X5↔e3, X3↔e5, X6↔e6`.
/// It is not a bracket isomorphism (see [`verify_frame_isomorphism`]).
pub fn iwasawa_tabulated_map() -> RationalMatrix {
    signed_permutation(&[(0, 1), (3, 1), (4, 1), (1, -1), (2, 1), (5, 1)])
}

fn signed_permutation(images: &[(usize, i64)]) -> RationalMatrix {
    let n = images.len();
    Matrix::from_fn(n, n, |r, c| if images[c].0 == r { q(images[c].1) } else { Rational::zero() })
}

/// Predicates a catalog entry is advertised to satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Advertised {
    /// Quasi-Kähler Chern-flat.
    QkChernFlat,
    /// Chern-flat but not quasi-Kähler Chern-flat.
    ChernFlatOnly,
    /// No almost complex structure (odd dimension).
    NoStructure,
}

impl fmt::Display for Advertised {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Advertised::QkChernFlat => "qk-chern-flat",
            Advertised::ChernFlatOnly => "chern-flat-only",
            Advertised::NoStructure => "no-structure",
        })
    }
}

/// A catalog entry with its structure.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub algebra: LieAlgebra<Rational>,
    pub j: Option<AlmostComplexStructure>,
    pub advertised: Advertised,
}

/// Representative names (with default parameters) of every catalog family.
pub const CATALOG_NAMES: &[&str] = &[
    "abelian(6)",
    "heisenberg3",
    "heisenberg(5)",
    "iwasawa_j3",
    "iwasawa_e_frame",
    "complex_heisenberg_bicomplex",
    "dim4_model",
    "dim5_irreducible",
    "centro1_model(1)",
    "centro1_model(2)",
    "centro1_model(3)",
];

fn parse_call(name: &str) -> Result<(&str, Option<usize>), ConstructionError> {
    let name = name.trim();
    let Some(open) = name.find('(') else { return Ok((name, None)) };
    let base = &name[..open];
    let arg = name[open + 1..]
        .strip_suffix(')')
        .and_then(|a| a.trim().parse::<usize>().ok())
        .ok_or_else(|| ConstructionError::InvalidParameter {
            name: base.to_string(),
            reason: format!("cannot read parameter in {name:?}"),
        })?;
    Ok((base, Some(arg)))
}

/// Looks up `name`, e.g. `"iwasawa_j3"` or `"centro1_model(2)"`.
pub fn catalog(name: &str) -> Result<CatalogEntry, ConstructionError> {
    let (base, arg) = parse_call(name)?;
    let invalid = |reason: String| ConstructionError::InvalidParameter { name: base.to_string(), reason };
    let no_arg = |arg: Option<usize>| match arg {
        None => Ok(()),
        Some(_) => Err(ConstructionError::InvalidParameter {
            name: base.to_string(),
            reason: "takes no parameter".into(),
        }),
    };
    let entry = |algebra, j, advertised| CatalogEntry { name: name.trim().to_string(), algebra, j, advertised };
    let one = G::one();
    match base {
        "abelian" => {
            let n = arg.ok_or_else(|| invalid("needs a dimension, e.g. abelian(6)".into()))?;
            if n == 0 || n % 2 == 1 {
                return Err(invalid(format!("dimension must be even and positive, got {n}")));
            }
            Ok(entry(LieAlgebra::abelian(n), Some(AlmostComplexStructure::standard(n)?), Advertised::QkChernFlat))
        }
        "heisenberg3" => {
            no_arg(arg)?;
            Ok(entry(heisenberg(3)?, None, Advertised::NoStructure))
        }
        "heisenberg" => {
            let n = arg.ok_or_else(|| invalid("needs a dimension, e.g. heisenberg(5)".into()))?;
            Ok(entry(heisenberg(n)?, None, Advertised::NoStructure))
        }
        "iwasawa_j3" => {
            no_arg(arg)?;
            let g = LieAlgebra::from_brackets(
                6,
                &[(0, 1, 2, q(1)), (3, 4, 2, q(-1)), (1, 3, 5, q(1)), (4, 0, 5, q(1))],
            )?;
            Ok(entry(g, Some(AlmostComplexStructure::standard(6)?), Advertised::QkChernFlat))
        }
        "iwasawa_e_frame" => {
            no_arg(arg)?;
            let g = LieAlgebra::from_brackets(
                6,
                &[(0, 2, 4, q(-1)), (1, 3, 4, q(1)), (0, 3, 5, q(-1)), (1, 2, 5, q(-1))],
            )?;
            let phi = iwasawa_frame_map();
            let j = AlmostComplexStructure::standard(6)?.conjugate_by(&phi.inverse()?)?;
            Ok(entry(g, Some(j), Advertised::QkChernFlat))
        }
        "complex_heisenberg_bicomplex" => {
            no_arg(arg)?;
            let g = LieAlgebra::from_brackets(
                6,
                &[(0, 1, 2, q(1)), (0, 4, 5, q(1)), (3, 1, 5, q(1)), (3, 4, 2, q(-1))],
            )?;
            Ok(entry(g, Some(AlmostComplexStructure::standard(6)?), Advertised::ChernFlatOnly))
        }
        "dim4_model" => {
            no_arg(arg)?;
            let (g, j) = qk_model(4, &[(0, 1, 2, one)])?;
            Ok(entry(g, Some(j), Advertised::QkChernFlat))
        }
        "dim5_irreducible" => {
            no_arg(arg)?;
            let (g, j) = qk_model(5, &[(0, 1, 2, one.clone()), (1, 3, 4, one)])?;
            Ok(entry(g, Some(j), Advertised::QkChernFlat))
        }
        "centro1_model" => {
            let m = arg.ok_or_else(|| invalid("needs m, e.g. centro1_model(2)".into()))?;
            if m == 0 {
                return Err(invalid("m must be at least 1".into()));
            }
            let n = 2 * m + 1;
            let relations: Vec<_> =
                (0..2 * m).flat_map(|i| (i + 1..2 * m).map(move |j| (i, j, n - 1, G::one()))).collect();
            let (g, j) = qk_model(n, &relations)?;
            Ok(entry(g, Some(j), Advertised::QkChernFlat))
        }
        _ => Err(ConstructionError::UnknownName(name.to_string())),
    }
}

/// Why a candidate map fails to be an isomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoWitness {
    /// `φ[e_i, e_j] ≠ [φ e_i, φ e_j]`.
    Bracket { i: usize, j: usize },
    /// `φ J_1 e_i ≠ J_2 φ e_i`.
    Complex { i: usize },
}

impl fmt::Display for IsoWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsoWitness::Bracket { i, j } => write!(f, "bracket of (e{}, e{}) not preserved", i + 1, j + 1),
            IsoWitness::Complex { i } => write!(f, "J not intertwined on e{}", i + 1),
        }
    }
}

/// Checks that `map` (columns = images of the basis of `g1`) is a Lie algebra isomorphism
/// `g1 → g2`, and when both structures are given, that it intertwines them.
pub fn verify_frame_isomorphism(
    g1: &LieAlgebra<Rational>,
    j1: Option<&AlmostComplexStructure>,
    g2: &LieAlgebra<Rational>,
    j2: Option<&AlmostComplexStructure>,
    map: &RationalMatrix,
) -> Result<Option<IsoWitness>, ConstructionError> {
    let n = g1.dim();
    if g2.dim() != n || map.rows() != n || map.cols() != n {
        return Err(ConstructionError::DimensionMismatch(format!(
            "algebras of dimension {} and {}, map {}x{}",
            n,
            g2.dim(),
            map.rows(),
            map.cols()
        )));
    }
    if map.rank() < n {
        return Err(ConstructionError::SingularMap);
    }
    let images = map.columns();
    for i in 0..n {
        for j in i + 1..n {
            let lhs = map.mul_vec(&g1.basis_bracket(i, j))?;
            if lhs != g2.bracket(&images[i], &images[j])? {
                return Ok(Some(IsoWitness::Bracket { i, j }));
            }
        }
    }
    if let (Some(j1), Some(j2)) = (j1, j2) {
        let lhs = map * j1.matrix();
        let rhs = j2.matrix() * map;
        if let Some(i) = (0..n).find(|&i| lhs.column(i) != rhs.column(i)) {
            return Ok(Some(IsoWitness::Complex { i }));
        }
    }
    Ok(None)
}

/// Changes the `(1,0)`-frame of the split of `(g, J)` by `a` (`Z'_k = Σ_l a_{lk} Z_l`) and
/// rewrites the pair on the real basis `Re Z'_1..Re Z'_m, J Re Z'_1..J Re Z'_m`.
///
/// Splitting the result reproduces the frame `Z'`.
pub fn scramble(
    g: &LieAlgebra<Rational>,
    j: &AlmostComplexStructure,
    a: &ExactMatrix,
) -> Result<(LieAlgebra<Rational>, AlmostComplexStructure), ConstructionError> {
    let s = ComplexSplitting::split(g, j)?;
    let m = s.complex_dim();
    if a.rows() != m || a.cols() != m {
        return Err(ConstructionError::DimensionMismatch(format!("frame change must be {m}x{m}")));
    }
    if a.rank() < m {
        return Err(ConstructionError::SingularMap);
    }
    let onezero = Matrix::from_columns(2 * m, &s.onezero())?;
    let new_frame = &onezero * a;
    let re: Vec<Vec<Rational>> =
        new_frame.columns().iter().map(|v| v.iter().map(|x| x.re.clone()).collect()).collect();
    let mut columns = re.clone();
    columns.extend(re.iter().map(|x| j.apply(x)));
    let p = Matrix::from_columns(2 * m, &columns)?;
    Ok((g.change_basis(&p)?, j.conjugate_by(&p)?))
}

/// Complex dimension of the center's `(1,0)` part.
pub fn complex_center_dim(g: &LieAlgebra<Rational>, j: &AlmostComplexStructure) -> Result<usize, ConstructionError> {
    Ok(acs::complex_center_dim(g, j)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acs::{is_chern_flat, is_qk_chern_flat};

    #[test]
    fn heisenberg_doubling_matches_iwasawa() {
        let (g, j) = conjugate_complexification(&heisenberg(3).unwrap()).unwrap();
        let iw = catalog("iwasawa_j3").unwrap();
        let id = RationalMatrix::identity(6);
        assert_eq!(verify_frame_isomorphism(&g, Some(&j), &iw.algebra, iw.j.as_ref(), &id).unwrap(), None);
        assert_eq!(g, iw.algebra);
    }

    #[test]
    fn tabulated_iwasawa_map_is_not_an_isomorphism() {
        let x = catalog("iwasawa_j3").unwrap();
        let e = catalog("iwasawa_e_frame").unwrap();
        let bad = verify_frame_isomorphism(&x.algebra, None, &e.algebra, None, &iwasawa_tabulated_map()).unwrap();
        assert_eq!(bad, Some(IsoWitness::Bracket { i: 0, j: 1 }));
        let good = verify_frame_isomorphism(
            &x.algebra,
            x.j.as_ref(),
            &e.algebra,
            e.j.as_ref(),
            &iwasawa_frame_map(),
        )
        .unwrap();
        assert_eq!(good, None);
        let je = e.j.unwrap();
        let col = |k: usize| je.matrix().column(k);
        assert_eq!(col(0), vec![q(0), q(-1), q(0), q(0), q(0), q(0)]);
        assert_eq!(col(2), vec![q(0), q(0), q(0), q(-1), q(0), q(0)]);
        assert_eq!(col(4), vec![q(0), q(0), q(0), q(0), q(0), q(1)]);
    }

    #[test]
    fn doubling_rejects_three_step() {
        // filiform [e1,e2]=e3, [e1,e3]=e4
        let g = LieAlgebra::from_brackets(4, &[(0, 1, 2, q(1)), (0, 2, 3, q(1))]).unwrap();
        assert_eq!(conjugate_complexification(&g).unwrap_err(), ConstructionError::NotTwoStep);
    }

    #[test]
    fn catalog_advertised_verdicts() {
        for name in CATALOG_NAMES {
            let e = catalog(name).unwrap();
            match (e.advertised, &e.j) {
                (Advertised::QkChernFlat, Some(j)) => assert!(is_qk_chern_flat(&e.algebra, j).unwrap().holds, "{name}"),
                (Advertised::ChernFlatOnly, Some(j)) => {
                    assert!(is_chern_flat(&e.algebra, j).unwrap().holds, "{name}");
                    assert!(!is_qk_chern_flat(&e.algebra, j).unwrap().holds, "{name}");
                }
                (Advertised::NoStructure, None) => assert!(e.algebra.dim() % 2 == 1),
                other => panic!("{name}: inconsistent entry {other:?}"),
            }
        }
    }

    #[test]
    fn catalog_errors() {
        assert!(matches!(catalog("nope"), Err(ConstructionError::UnknownName(_))));
        assert!(matches!(catalog("abelian(5)"), Err(ConstructionError::InvalidParameter { .. })));
        assert!(matches!(catalog("abelian"), Err(ConstructionError::InvalidParameter { .. })));
        assert!(matches!(catalog("iwasawa_j3(2)"), Err(ConstructionError::InvalidParameter { .. })));
        assert!(matches!(catalog("heisenberg(4)"), Err(ConstructionError::InvalidParameter { .. })));
    }

    #[test]
    fn complex_models_split_to_their_relations() {
        let e = catalog("dim5_irreducible").unwrap();
        let s = ComplexSplitting::split(&e.algebra, e.j.as_ref().unwrap()).unwrap();
        let mut nonzero: Vec<(usize, usize)> = s.constants().nonzero_brackets().map(|(a, b, _)| (a, b)).collect();
        nonzero.sort();
        assert_eq!(nonzero, vec![(0, 1), (1, 3), (5, 6), (6, 8)]);
        let mut want = vec![G::zero(); 10];
        want[s.anti(4)] = G::one();
        assert_eq!(s.bracket(1, 3), want);
        assert_eq!(complex_center_dim(&e.algebra, e.j.as_ref().unwrap()).unwrap(), 2);

        let c = catalog("centro1_model(2)").unwrap();
        assert_eq!(complex_center_dim(&c.algebra, c.j.as_ref().unwrap()).unwrap(), 1);
    }

    #[test]
    fn h5_doubling_has_center_one() {
        let (g, j) = conjugate_complexification(&heisenberg(5).unwrap()).unwrap();
        assert_eq!(g.dim(), 10);
        assert!(is_qk_chern_flat(&g, &j).unwrap().holds);
        assert_eq!(complex_center_dim(&g, &j).unwrap(), 1);
    }

    #[test]
    fn scramble_reproduces_new_frame() {
        let e = catalog("dim4_model").unwrap();
        let j = e.j.unwrap();
        let a = Matrix::from_fn(4, 4, |r, c| if r == c { G::from_ints(1, 1) } else if r < c { G::from_ints(2, -1) } else { G::zero() });
        let (g2, j2) = scramble(&e.algebra, &j, &a).unwrap();
        let s = ComplexSplitting::split(&e.algebra, &j).unwrap();
        let s2 = ComplexSplitting::split(&g2, &j2).unwrap();
        // [Z'_1, Z'_2] computed in the old frame ...
        let mut lhs = vec![G::zero(); 8];
        for l in 0..4 {
            for r in 0..4 {
                let coeff = a[(l, 0)].mul_ref(&a[(r, 1)]);
                for (t, x) in s.bracket(l, r).iter().enumerate() {
                    lhs[t] += &coeff.mul_ref(x);
                }
            }
        }
        // ... equals Σ_k c'^{k̄} Z̄'_k with Z̄'_k = Σ_l conj(a_lk) Z̄_l
        let coeffs = s2.bracket(0, 1);
        let mut rhs = vec![G::zero(); 8];
        for k in 0..4 {
            for l in 0..4 {
                rhs[4 + l] += &coeffs[4 + k].mul_ref(&a[(l, k)].conj());
            }
        }
        assert_eq!(lhs, rhs);
        assert!(is_qk_chern_flat(&g2, &j2).unwrap().holds);
    }
}
