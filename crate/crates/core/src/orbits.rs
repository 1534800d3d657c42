//! Coadjoint orbits: dimension, classification of the 6-dimensional ones, leaf invariants
//! on `V = {x*_4 x*_5 != 0}`, and seeded orbit sampling.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exp_action::{coadjoint_point_closed, coadjoint_point_with};
use crate::families::{Algebra, FamilyId, Studied};
use crate::lie::{self, AlgebraElement, Covector};
use crate::sampling;

/// Membership threshold for `V`.
pub const EPS_V: f64 = 1e-12;
/// Default relative tolerance of [`same_leaf`].
pub const SAME_LEAF_TOL: f64 = 1e-6;

pub fn orbit_dimension(id: &FamilyId, f: &Covector) -> Result<usize> {
    let alg = Algebra::new(*id)?;
    lie::skew_rank(&alg.kirillov(f))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrbitKind {
    TypeIHyperplane,
    TypeIIHypersurface,
    NonGeneric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitClass {
    pub dimension: usize,
    pub kind: OrbitKind,
    /// The sub-case that holds, e.g. `"alpha3*alpha4 != 0 = alpha5"`.
    pub detail: Option<String>,
    /// For type I orbits, the 1-based index `k` of the hyperplane `{x*_k = 0}`.
    pub hyperplane: Option<usize>,
}

/// The rank-six condition on `F = (alpha_1, ..., beta)` for each studied family.
pub fn rank_six_predicate(fam: Studied, f: &Covector) -> bool {
    let [_, a2, a3, a4, a5, _, _] = f.0;
    match fam {
        Studied::G2 => a4 != 0.0 && a3 * a3 + a5 * a5 != 0.0,
        Studied::G4_00 => a5 != 0.0 && a2 * a2 + a4 * a4 != 0.0,
        Studied::G3 | Studied::G9 | Studied::G10(_) => {
            (a4 == 0.0 && a2 * a5 != 0.0) || (a4 != 0.0 && a3 * a3 + a5 * a5 != 0.0)
        }
    }
}

/// `(detail, hyperplane)` of the type I sub-case that holds, if any.
fn type_one_case(fam: Studied, f: &Covector) -> Option<(&'static str, usize)> {
    let [_, a2, a3, a4, a5, _, _] = f.0;
    match fam {
        Studied::G2 if a3 * a4 != 0.0 && a5 == 0.0 => Some(("alpha3*alpha4 != 0 = alpha5", 5)),
        Studied::G4_00 if a2 * a5 != 0.0 && a4 == 0.0 => Some(("alpha2*alpha5 != 0 = alpha4", 4)),
        Studied::G3 | Studied::G9 | Studied::G10(_) => {
            if a4 == 0.0 && a2 * a5 != 0.0 {
                Some(("alpha4 = 0 != alpha2*alpha5", 4))
            } else if a5 == 0.0 && a3 * a4 != 0.0 {
                Some(("alpha5 = 0 != alpha3*alpha4", 5))
            } else {
                None
            }
        }
        _ => None,
    }
}

pub fn classify(id: &FamilyId, f: &Covector) -> Result<OrbitClass> {
    let fam = id.require_studied()?;
    let dimension = orbit_dimension(id, f)?;
    let mut class = OrbitClass {
        dimension,
        kind: OrbitKind::NonGeneric,
        detail: None,
        hyperplane: None,
    };
    if dimension != 6 {
        return Ok(class);
    }
    if let Some((detail, k)) = type_one_case(fam, f) {
        class.kind = OrbitKind::TypeIHyperplane;
        class.detail = Some(detail.into());
        class.hyperplane = Some(k);
    } else if f[3] * f[4] != 0.0 {
        class.kind = OrbitKind::TypeIIHypersurface;
        class.detail = Some("alpha4*alpha5 != 0".into());
    }
    Ok(class)
}

/// Sign pattern of `(x*_4, x*_5)`; written and serialized as `"+-"` and so on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Quadrant {
    pub x4_positive: bool,
    pub x5_positive: bool,
}

impl fmt::Display for Quadrant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |p: bool| if p { '+' } else { '-' };
        write!(f, "{}{}", s(self.x4_positive), s(self.x5_positive))
    }
}

impl std::str::FromStr for Quadrant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let sign = |c: Option<char>, pos: usize| match c {
            Some('+') => Ok(true),
            Some('-') => Ok(false),
            _ => Err(Error::Parse {
                pos,
                msg: format!("expected '+' or '-' in quadrant {s:?}"),
            }),
        };
        let mut chars = s.chars();
        let q = Quadrant {
            x4_positive: sign(chars.next(), 0)?,
            x5_positive: sign(chars.next(), 1)?,
        };
        if chars.next().is_some() {
            return Err(Error::Parse {
                pos: 2,
                msg: format!("trailing characters in quadrant {s:?}"),
            });
        }
        Ok(q)
    }
}

impl Serialize for Quadrant {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Quadrant {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn in_v(v: &Covector) -> bool {
    v[3].abs() > EPS_V && v[4].abs() > EPS_V && v.is_finite()
}

fn require_v(v: &Covector) -> Result<()> {
    if in_v(v) {
        Ok(())
    } else {
        Err(Error::NotInV {
            x4: v[3].abs(),
            x5: v[4].abs(),
        })
    }
}

pub fn quadrant(v: &Covector) -> Result<Quadrant> {
    require_v(v)?;
    Ok(Quadrant {
        x4_positive: v[3] > 0.0,
        x5_positive: v[4] > 0.0,
    })
}

/// The leaf invariant of a studied family; constant on each generic orbit.
pub fn invariant(id: &FamilyId, v: &Covector) -> Result<f64> {
    let fam = id.require_studied()?;
    require_v(v)?;
    Ok(invariant_of(fam, v))
}

pub(crate) fn invariant_of(fam: Studied, v: &Covector) -> f64 {
    let [_, x2, x3, x4, x5, _, _] = v.0;
    match fam {
        Studied::G2 => x2 - x3 * x4 / x5,
        Studied::G3 => x2 / x4 - x3 / x5,
        Studied::G4_00 => x3 - x2 * x5 / x4,
        Studied::G9 => x2 / x4 - x3 / x5 + x4.abs().ln(),
        Studied::G10(l) => x2 / x4 - x3 / x5 + x5.abs().ln() - l * x4.abs().ln(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeafId {
    pub family: FamilyId,
    pub quadrant: Quadrant,
    pub c: f64,
}

impl fmt::Display for LeafId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} V{} c={}", self.family, self.quadrant, self.c)
    }
}

pub fn leaf_id(id: &FamilyId, v: &Covector) -> Result<LeafId> {
    let c = invariant(id, v)?;
    Ok(LeafId {
        family: *id,
        quadrant: quadrant(v)?,
        c,
    })
}

pub fn same_leaf(id: &FamilyId, v1: &Covector, v2: &Covector, tol: f64) -> Result<bool> {
    let l1 = leaf_id(id, v1)?;
    let l2 = leaf_id(id, v2)?;
    Ok(l1.quadrant == l2.quadrant && (l1.c - l2.c).abs() <= tol * (1.0 + l1.c.abs().max(l2.c.abs())))
}

/// A point of a leaf slice `{invariant = c, x*_3 = a}` with its residual `|invariant - c|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SectionPoint {
    pub x2: f64,
    pub x4: f64,
    pub x5: f64,
    pub residual: f64,
}

/// Residual bound for emitted [`SectionPoint`]s.
pub const SECTION_TOL: f64 = 1e-9;

/// `x*_2` on the leaf `c` at `(x*_3, x*_4, x*_5) = (a, x4, x5)`; every invariant is affine in `x*_2`.
fn solve_x2(fam: Studied, c: f64, a: f64, x4: f64, x5: f64) -> f64 {
    match fam {
        Studied::G2 => c + a * x4 / x5,
        Studied::G3 => x4 * (c + a / x5),
        Studied::G4_00 => (a - c) * x4 / x5,
        Studied::G9 => x4 * (c + a / x5 - x4.abs().ln()),
        Studied::G10(l) => x4 * (c + a / x5 - x5.abs().ln() + l * x4.abs().ln()),
    }
}

/// The slice of leaf `c` by `{x*_3 = a}` over the `n x n` midpoint grid on `(x*_4, x*_5) in [-2, 2]^2`.
///
/// Grid points outside `V` are dropped, as is any point whose residual is not below
/// [`SECTION_TOL`].
pub fn cross_section(id: &FamilyId, c: f64, a: f64, n: usize) -> Result<Vec<SectionPoint>> {
    let fam = id.require_studied()?;
    if !c.is_finite() || !a.is_finite() {
        return Err(Error::InvalidParams("c and a must be finite".into()));
    }
    let h = 4.0 / n.max(1) as f64;
    let mid = |k: usize| -2.0 + (k as f64 + 0.5) * h;
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let (x4, x5) = (mid(i), mid(j));
            let x2 = solve_x2(fam, c, a, x4, x5);
            let v = Covector([0.0, x2, a, x4, x5, 0.0, 0.0]);
            if !in_v(&v) {
                continue;
            }
            let residual = (invariant_of(fam, &v) - c).abs();
            if residual < SECTION_TOL {
                out.push(SectionPoint { x2, x4, x5, residual });
            }
        }
    }
    Ok(out)
}

/// `n` orbit points `F_{u_k}` with `u_k` uniform in `[-2, 2]^7` from the seeded generator.
///
/// The five studied families use their closed-form coordinates, so that points on a
/// type I orbit lie exactly on the hyperplane; all other exponential families use the
/// matrix exponential.
pub fn sample_orbit(id: &FamilyId, f: &Covector, n: usize, seed: u64) -> Result<Vec<Covector>> {
    let alg = Algebra::new(*id)?;
    if !id.is_exponential_tag() {
        return Err(Error::NotExponentialFamily(id.to_string()));
    }
    let mut rng = sampling::rng(seed);
    (0..n)
        .map(|_| {
            let u = sampling::uniform_element(&mut rng, 2.0);
            match id.studied() {
                Some(_) => coadjoint_point_closed(id, f, &u),
                None => coadjoint_point_with(&alg, f, &u),
            }
        })
        .collect()
}

/// Rank of the finite-difference Jacobian of `u -> F_u` at `u = 0`.
///
/// Columns are Richardson-extrapolated central differences with steps `h` and `h / 2`,
/// accurate to `O(h^4)`. Singular values at or below `rel_tol * max(1, sigma_max)` count
/// as zero.
pub fn tangent_rank(alg: &Algebra, f: &Covector, h: f64, rel_tol: f64) -> Result<usize> {
    let central = |k: usize, h: f64| -> Result<[f64; 7]> {
        let mut u = AlgebraElement::ZERO;
        u[k] = h;
        let p = coadjoint_point_with(alg, f, &u)?;
        let m = coadjoint_point_with(alg, f, &(-u))?;
        Ok(std::array::from_fn(|i| (p[i] - m[i]) / (2.0 * h)))
    };
    let mut rows = Vec::with_capacity(7);
    for k in 0..7 {
        let (d1, d2) = (central(k, h)?, central(k, h / 2.0)?);
        rows.push((0..7).map(|i| (4.0 * d2[i] - d1[i]) / 3.0).collect::<Vec<f64>>());
    }
    Ok(lie::numerical_rank(&rows, rel_tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::FamilyTag;

    fn cov(v: [f64; 7]) -> Covector {
        Covector(v)
    }

    #[test]
    fn dimension_examples() {
        let g2 = Studied::G2.id();
        assert_eq!(orbit_dimension(&g2, &Covector::ZERO).unwrap(), 0);
        assert_eq!(
            orbit_dimension(&g2, &cov([0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0])).unwrap(),
            6
        );
        assert_eq!(
            orbit_dimension(&g2, &cov([0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0])).unwrap(),
            4
        );
        let g4 = Studied::G4_00.id();
        assert_eq!(
            orbit_dimension(&g4, &cov([0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0])).unwrap(),
            4
        );
    }

    #[test]
    fn classify_examples() {
        let c = classify(&Studied::G2.id(), &cov([0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0])).unwrap();
        assert_eq!((c.dimension, c.kind, c.hyperplane), (6, OrbitKind::TypeIHyperplane, Some(5)));
        let c = classify(&Studied::G9.id(), &cov([0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0])).unwrap();
        assert_eq!((c.dimension, c.kind, c.hyperplane), (6, OrbitKind::TypeIHyperplane, Some(4)));
        let c = classify(
            &Studied::G10(0.7).id(),
            &cov([0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0]),
        )
        .unwrap();
        assert_eq!((c.dimension, c.kind), (6, OrbitKind::TypeIIHypersurface));
        assert!(matches!(
            classify(&FamilyId::plain(FamilyTag::G5), &Covector::ZERO),
            Err(Error::InvalidFamily(_))
        ));
    }

    #[test]
    fn invariant_examples() {
        let g2 = Studied::G2.id();
        let v = cov([0.0, 1.0, 2.0, 1.0, 1.0, 0.0, 0.0]);
        assert_eq!(invariant(&g2, &v).unwrap(), -1.0);
        let g9 = Studied::G9.id();
        assert_eq!(invariant(&g9, &cov([0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0])).unwrap(), 0.0);
        let e = std::f64::consts::E;
        let g10 = Studied::G10(2.0).id();
        let c = invariant(&g10, &cov([0.0, 0.0, 0.0, e, e, 0.0, 0.0])).unwrap();
        assert!((c + 1.0).abs() < 1e-15);
    }

    #[test]
    fn leaves_and_quadrants() {
        let g2 = Studied::G2.id();
        let v = cov([0.0, 1.0, 2.0, 1.0, 1.0, 0.0, 0.0]);
        let l = leaf_id(&g2, &v).unwrap();
        assert_eq!(l.quadrant.to_string(), "++");
        assert_eq!(l.c, -1.0);
        let q = quadrant(&cov([0.0, 0.0, 0.0, -1.0, 2.0, 0.0, 0.0])).unwrap();
        assert_eq!(q.to_string(), "-+");
        assert!(matches!(
            leaf_id(&g2, &cov([0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0])),
            Err(Error::NotInV { .. })
        ));
        assert!(same_leaf(&g2, &v, &v, SAME_LEAF_TOL).unwrap());
        // same invariant, other quadrant: x2 - x3 x4/x5 with x4, x3 both negated
        let w = cov([0.0, 1.0, -2.0, -1.0, 1.0, 0.0, 0.0]);
        assert_eq!(invariant(&g2, &w).unwrap(), -1.0);
        assert!(!same_leaf(&g2, &v, &w, SAME_LEAF_TOL).unwrap());
    }

    #[test]
    fn sampling_is_seeded() {
        let g2 = Studied::G2.id();
        let f = cov([0.1, 0.2, 0.3, 1.0, 0.5, 0.0, 0.0]);
        assert!(sample_orbit(&g2, &f, 0, 1).unwrap().is_empty());
        let a = sample_orbit(&g2, &f, 10, 5).unwrap();
        assert_eq!(a, sample_orbit(&g2, &f, 10, 5).unwrap());
        for p in &a {
            assert!(same_leaf(&g2, &f, p, 1e-8).unwrap());
        }
        let g13 = FamilyId::new(FamilyTag::G13, &[1.0]).unwrap();
        assert!(matches!(
            sample_orbit(&g13, &f, 3, 1),
            Err(Error::NotExponentialFamily(_))
        ));
    }

    #[test]
    fn cross_section_examples() {
        let g2 = Studied::G2.id();
        let pts = cross_section(&g2, 0.0, 1.0, 8).unwrap();
        assert_eq!(pts.len(), 64);
        for p in &pts {
            assert!((p.x2 - p.x4 / p.x5).abs() < 1e-15);
        }
        assert!(cross_section(&g2, 0.0, 1.0, 0).unwrap().is_empty());
        // odd grids put a midpoint on x*_4 = 0 and x*_5 = 0
        assert_eq!(cross_section(&g2, 0.0, 1.0, 3).unwrap().len(), 4);
        let g9 = Studied::G9.id();
        for p in cross_section(&g9, 0.0, 0.0, 6).unwrap() {
            assert!((p.x2 / p.x4 + p.x4.abs().ln()).abs() < 1e-12);
        }
        assert!(matches!(
            cross_section(&FamilyId::plain(FamilyTag::G5), 0.0, 0.0, 2),
            Err(Error::InvalidFamily(_))
        ));
    }
}
