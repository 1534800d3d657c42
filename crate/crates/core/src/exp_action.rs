//! `exp(ad_U)` and the coadjoint action `F -> F_U = exp(ad_U)^T F`.
//!
//! The generic path goes through [`expm`]. For the five studied families the exponential
//! is also available in closed form. There `ad_U = [[N, c], [0, 0]]` with
//! `N = diag(d) + L` and `L` supported on the positions `(4,1), (4,2), (5,1), (5,3)`,
//! so `L^2 = 0` and every entry reduces to an exponential divided difference:
//! `exp(N)_ij = L_ij e[d_i, d_j]` and `(phi1(N) c)_i = phi1(d_i) c_i + sum_j L_ij e[0, d_i, d_j] c_j`.

use crate::error::{Error, Result};
use crate::expm::expm;
use crate::families::{Algebra, FamilyId, Studied};
use crate::lie::{AlgebraElement, Covector, Matrix7, DIM};
use crate::phi::{dd1, dd2_0, phi1};

/// Closed forms refuse `|x|` or `|y|` above this to stay clear of overflow.
pub const CLOSED_FORM_LIMIT: f64 = 30.0;

/// Coefficient functions of the closed-form exponentials, named after the matrix entry
/// they fill. `s = lambda x + y` for `G10`.
pub mod coeff {
    use super::*;

    fn parts(u: &AlgebraElement) -> (f64, f64, f64, f64, f64, f64, f64) {
        let [x1, x2, x3, x4, x5, x, y] = u.0;
        (x1, x2, x3, x4, x5, x, y)
    }

    pub fn a2(u: &AlgebraElement) -> f64 {
        let (x1, x2, _, x4, _, x, _) = parts(u);
        x1 * x2 * dd2_0(x, x) - x4 * phi1(x)
    }

    pub fn b2(u: &AlgebraElement) -> f64 {
        let (x1, _, x3, _, x5, x, y) = parts(u);
        -x5 * phi1(x + y) + x1 * x3 * dd2_0(x + y, x)
    }

    pub fn c2(u: &AlgebraElement) -> f64 {
        let (x1, _, x3, _, x5, x, y) = parts(u);
        -x5 * phi1(x + y) - x1 * x3 * dd2_0(x + y, y)
    }

    pub fn a3(u: &AlgebraElement) -> f64 {
        let (x1, x2, _, x4, _, x, _) = parts(u);
        -x4 * phi1(x) - x1 * x2 * dd2_0(x, x)
    }

    pub fn b3(u: &AlgebraElement) -> f64 {
        let (x1, _, x3, _, x5, _, y) = parts(u);
        -x5 * phi1(y) - x1 * x3 * dd2_0(y, y)
    }

    pub fn a4(u: &AlgebraElement) -> f64 {
        let (x1, x2, _, x4, _, x, y) = parts(u);
        -x4 * phi1(x + y) + x1 * x2 * dd2_0(x + y, x)
    }

    pub fn b4(u: &AlgebraElement) -> f64 {
        let (x1, _, x3, _, x5, x, _) = parts(u);
        -x5 * phi1(x) + x1 * x3 * dd2_0(x, x)
    }

    pub fn c4(u: &AlgebraElement) -> f64 {
        let (x1, x2, _, x4, _, x, y) = parts(u);
        -x4 * phi1(x + y) - x1 * x2 * dd2_0(x + y, y)
    }

    pub fn a9(u: &AlgebraElement) -> f64 {
        let (x1, _, x3, _, x5, x, y) = parts(u);
        -x5 * phi1(x) - (x1 + y) * x3 * dd2_0(x, x)
    }

    pub fn b9(u: &AlgebraElement) -> f64 {
        let (x1, x2, _, x4, _, _, y) = parts(u);
        -x4 * phi1(y) - x1 * x2 * dd2_0(y, y)
    }

    pub fn a10(u: &AlgebraElement) -> f64 {
        a3(u)
    }

    pub fn b10(u: &AlgebraElement, lambda: f64) -> f64 {
        let (x1, _, x3, _, x5, x, y) = parts(u);
        let s = lambda * x + y;
        -lambda * (x5 * phi1(s) + (x1 + y) * x3 * dd2_0(s, s))
    }

    pub fn c10(u: &AlgebraElement, lambda: f64) -> f64 {
        let (x1, _, x3, _, x5, x, y) = parts(u);
        let s = lambda * x + y;
        -(x3 + x5) * phi1(s) - (x1 + y) * x3 * dd2_0(s, s)
    }

    pub fn d10(u: &AlgebraElement, lambda: f64) -> f64 {
        let (_, _, x3, _, _, x, y) = parts(u);
        -x3 * phi1(lambda * x + y)
    }
}

/// `expm(ad_U)`: the oracle.
pub fn exp_ad(alg: &Algebra, u: &AlgebraElement) -> Result<Matrix7> {
    expm(&alg.ad(u))
}

fn check_closed_range(u: &AlgebraElement) -> Result<()> {
    if !u.is_finite() {
        return Err(Error::InvalidParams("U has non-finite entries".into()));
    }
    if u.x().abs() > CLOSED_FORM_LIMIT || u.y().abs() > CLOSED_FORM_LIMIT {
        return Err(Error::Overflow(format!(
            "closed forms need |x|, |y| <= {CLOSED_FORM_LIMIT}, got x = {}, y = {}",
            u.x(),
            u.y()
        )));
    }
    Ok(())
}

/// Closed-form `exp(ad_U)` for `G2`, `G3`, `G4^{00}`, `G9` and `G10^lambda`.
pub fn exp_ad_closed(id: &FamilyId, u: &AlgebraElement) -> Result<Matrix7> {
    let fam = id.require_studied()?;
    check_closed_range(u)?;
    let [x1, x2, x3, _, _, x, y] = u.0;
    let mut m = Matrix7::identity();
    let mut set = |i: usize, j: usize, v: f64| m[(i - 1, j - 1)] = v;
    let (ex, ey) = (x.exp(), y.exp());
    match fam {
        Studied::G2 => {
            set(1, 1, ex);
            set(1, 6, -x1 * phi1(x));
            set(3, 3, ey);
            set(3, 7, -x3 * phi1(y));
            set(4, 1, -x2 * ex);
            set(4, 2, x1 * phi1(x));
            set(4, 4, ex);
            set(4, 6, coeff::a2(u));
            set(5, 1, -x3 * dd1(x + y, x));
            set(5, 3, x1 * dd1(x + y, y));
            set(5, 5, (x + y).exp());
            set(5, 6, coeff::b2(u));
            set(5, 7, coeff::c2(u));
        }
        Studied::G3 => {
            set(2, 2, ex);
            set(2, 6, -x2 * phi1(x));
            set(3, 3, ey);
            set(3, 7, -x3 * phi1(y));
            set(4, 1, -x2 * phi1(x));
            set(4, 2, x1 * ex);
            set(4, 4, ex);
            set(4, 6, coeff::a3(u));
            set(5, 1, -x3 * phi1(y));
            set(5, 3, x1 * ey);
            set(5, 5, ey);
            set(5, 7, coeff::b3(u));
        }
        Studied::G4_00 => {
            set(1, 1, ex);
            set(1, 6, -x1 * phi1(x));
            set(2, 2, ey);
            set(2, 7, -x2 * phi1(y));
            set(4, 1, -x2 * dd1(x + y, x));
            set(4, 2, x1 * dd1(x + y, y));
            set(4, 4, (x + y).exp());
            set(4, 6, coeff::a4(u));
            set(4, 7, coeff::c4(u));
            set(5, 1, -x3 * ex);
            set(5, 3, x1 * phi1(x));
            set(5, 5, ex);
            set(5, 6, coeff::b4(u));
        }
        Studied::G9 => {
            set(2, 2, ey);
            set(2, 7, -x2 * phi1(y));
            set(3, 3, ex);
            set(3, 6, -x3 * phi1(x));
            set(4, 1, -x2 * phi1(y));
            set(4, 2, x1 * ey);
            set(4, 4, ey);
            set(4, 7, coeff::b9(u));
            set(5, 1, -x3 * phi1(x));
            set(5, 3, (x1 + y) * ex);
            set(5, 5, ex);
            set(5, 6, coeff::a9(u));
            set(5, 7, -x3 * phi1(x));
        }
        Studied::G10(l) => {
            let es = (l * x + y).exp();
            let d10 = coeff::d10(u, l);
            set(2, 2, ex);
            set(2, 6, -x2 * phi1(x));
            set(3, 3, es);
            set(3, 6, l * d10);
            set(3, 7, d10);
            set(4, 1, -x2 * phi1(x));
            set(4, 2, x1 * ex);
            set(4, 4, ex);
            set(4, 6, coeff::a10(u));
            set(5, 1, d10);
            set(5, 3, (x1 + y) * es);
            set(5, 5, es);
            set(5, 6, coeff::b10(u, l));
            set(5, 7, coeff::c10(u, l));
        }
    }
    Ok(m)
}

/// `F_U = exp(ad_U)^T F` through the matrix-exponential oracle.
pub fn coadjoint_point_with(alg: &Algebra, f: &Covector, u: &AlgebraElement) -> Result<Covector> {
    if !alg.id.is_exponential_tag() {
        return Err(Error::NotExponentialFamily(alg.id.to_string()));
    }
    let e = exp_ad(alg, u)?;
    Ok(Covector(e.transpose().mul_vec(&f.0)))
}

pub fn coadjoint_point(id: &FamilyId, f: &Covector, u: &AlgebraElement) -> Result<Covector> {
    coadjoint_point_with(&Algebra::new(*id)?, f, u)
}

/// The orbit-point coordinates `(x*_1, ..., y*)` written out per family.
pub fn coadjoint_point_closed(id: &FamilyId, f: &Covector, u: &AlgebraElement) -> Result<Covector> {
    let fam = id.require_studied()?;
    check_closed_range(u)?;
    let [a1, a2, a3, a4, a5, a, b] = f.0;
    let [x1, x2, x3, _, _, x, y] = u.0;
    let (ex, ey) = (x.exp(), y.exp());
    let v = match fam {
        Studied::G2 => [
            a1 * ex - a4 * x2 * ex - a5 * x3 * dd1(x + y, x),
            a2 + a4 * x1 * phi1(x),
            a3 * ey + a5 * x1 * dd1(x + y, y),
            a4 * ex,
            a5 * (x + y).exp(),
            a - a1 * x1 * phi1(x) + a4 * coeff::a2(u) + a5 * coeff::b2(u),
            b - a3 * x3 * phi1(y) + a5 * coeff::c2(u),
        ],
        Studied::G3 => [
            a1 - a4 * x2 * phi1(x) - a5 * x3 * phi1(y),
            a2 * ex + a4 * x1 * ex,
            a3 * ey + a5 * x1 * ey,
            a4 * ex,
            a5 * ey,
            a - a2 * x2 * phi1(x) + a4 * coeff::a3(u),
            b - a3 * x3 * phi1(y) + a5 * coeff::b3(u),
        ],
        Studied::G4_00 => [
            a1 * ex - a4 * x2 * dd1(x + y, x) - a5 * x3 * ex,
            a2 * ey + a4 * x1 * dd1(x + y, y),
            a3 + a5 * x1 * phi1(x),
            a4 * (x + y).exp(),
            a5 * ex,
            a - a1 * x1 * phi1(x) + a4 * coeff::a4(u) + a5 * coeff::b4(u),
            b - a2 * x2 * phi1(y) + a4 * coeff::c4(u),
        ],
        Studied::G9 => [
            a1 - a4 * x2 * phi1(y) - a5 * x3 * phi1(x),
            a2 * ey + a4 * x1 * ey,
            a3 * ex + a5 * (x1 + y) * ex,
            a4 * ey,
            a5 * ex,
            a - a3 * x3 * phi1(x) + a5 * coeff::a9(u),
            b - a2 * x2 * phi1(y) + a4 * coeff::b9(u) - a5 * x3 * phi1(x),
        ],
        Studied::G10(l) => {
            let es = (l * x + y).exp();
            let d10 = coeff::d10(u, l);
            [
                a1 - a4 * x2 * phi1(x) + a5 * d10,
                a2 * ex + a4 * x1 * ex,
                a3 * es + a5 * (x1 + y) * es,
                a4 * ex,
                a5 * es,
                a - a2 * x2 * phi1(x) + a3 * l * d10 + a4 * coeff::a10(u) + a5 * coeff::b10(u, l),
                b + a3 * d10 + a5 * coeff::c10(u, l),
            ]
        }
    };
    debug_assert_eq!(v.len(), DIM);
    Ok(Covector(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::FamilyTag;

    fn studied_ids() -> Vec<FamilyId> {
        vec![
            Studied::G2.id(),
            Studied::G3.id(),
            Studied::G4_00.id(),
            Studied::G9.id(),
            Studied::G10(0.5).id(),
            Studied::G10(-1.3).id(),
        ]
    }

    fn sample_u(k: usize) -> AlgebraElement {
        let t = k as f64;
        AlgebraElement(std::array::from_fn(|i| ((t + 1.0) * (i as f64 + 0.7)).sin() * 1.8))
    }

    #[test]
    fn closed_matches_oracle() {
        for id in studied_ids() {
            let alg = Algebra::new(id).unwrap();
            for k in 0..30 {
                let u = sample_u(k);
                let oracle = exp_ad(&alg, &u).unwrap();
                let closed = exp_ad_closed(&id, &u).unwrap();
                let err = (closed - oracle).frobenius_norm();
                assert!(err < 1e-9 * (1.0 + oracle.frobenius_norm()), "{id} k={k} err={err:e}");
            }
        }
    }

    #[test]
    fn closed_point_matches_matrix() {
        let f = Covector([0.3, -1.2, 0.8, 1.1, -0.6, 0.25, 1.7]);
        for id in studied_ids() {
            for k in 0..30 {
                let u = sample_u(k);
                let via_matrix = exp_ad_closed(&id, &u).unwrap().transpose().mul_vec(&f.0);
                let direct = coadjoint_point_closed(&id, &f, &u).unwrap();
                let diff = (direct - Covector(via_matrix)).norm_inf();
                assert!(diff < 1e-12 * (1.0 + direct.norm_inf()), "{id} k={k}: {diff:e}");
            }
        }
    }

    #[test]
    fn simple_values() {
        let g2 = Studied::G2.id();
        assert_eq!(exp_ad_closed(&g2, &AlgebraElement::ZERO).unwrap(), Matrix7::identity());
        let mut u = AlgebraElement::ZERO;
        u[5] = 1.0;
        let e = std::f64::consts::E;
        let want = Matrix7::diag([e, 1.0, 1.0, e, e, 1.0, 1.0]);
        assert!(exp_ad_closed(&g2, &u).unwrap().max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn rejects_other_families_and_large_arguments() {
        let g5 = FamilyId::plain(FamilyTag::G5);
        assert!(matches!(
            exp_ad_closed(&g5, &AlgebraElement::ZERO),
            Err(Error::InvalidFamily(_))
        ));
        let g4 = FamilyId::new(FamilyTag::G4, &[0.5, 0.0]).unwrap();
        assert!(matches!(
            exp_ad_closed(&g4, &AlgebraElement::ZERO),
            Err(Error::InvalidFamily(_))
        ));
        let mut u = AlgebraElement::ZERO;
        u[6] = 31.0;
        assert!(matches!(
            exp_ad_closed(&Studied::G9.id(), &u),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn coadjoint_requires_exponential() {
        let g13 = FamilyId::new(FamilyTag::G13, &[0.0]).unwrap();
        assert!(matches!(
            coadjoint_point(&g13, &Covector::ZERO, &AlgebraElement::ZERO),
            Err(Error::NotExponentialFamily(_))
        ));
    }
}
