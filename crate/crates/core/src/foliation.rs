//! The foliation of `V` by generic orbits: the six spanning vector fields of each studied
//! family, their flows (numeric and closed form), the leaf-preserving homeomorphisms
//! between families, and the constant-Jacobian check behind measurability.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exp_action::coadjoint_point_with;
use crate::families::{Algebra, FamilyId, Studied};
use crate::lie::{AlgebraElement, Covector, DIM};
use crate::orbits::{self, in_v, Quadrant, EPS_V};

/// Default RK4 step count.
pub const DEFAULT_STEPS: usize = 1000;

/// Field `X_index` (1..=6) of the spanning system of a studied family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VectorField {
    pub family: Studied,
    pub index: usize,
}

impl VectorField {
    pub fn new(id: &FamilyId, index: usize) -> Result<Self> {
        let family = id.require_studied()?;
        if !(1..=6).contains(&index) {
            return Err(Error::InvalidParams(format!(
                "field index must be in 1..=6, got {index}"
            )));
        }
        Ok(VectorField { family, index })
    }

    pub fn all(id: &FamilyId) -> Result<Vec<VectorField>> {
        (1..=6).map(|k| VectorField::new(id, k)).collect()
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} X{}", self.family.id(), self.index)
    }
}

fn require_v(v: &Covector) -> Result<()> {
    orbits::quadrant(v).map(|_| ())
}

fn field_value(field: VectorField, v: &Covector) -> [f64; DIM] {
    let [_, x2, x3, x4, x5, _, _] = v.0;
    let mut out = [0.0; DIM];
    // coordinates: 0 -> x*_1, ..., 4 -> x*_5, 5 -> x*, 6 -> y*
    match field.index {
        1 => out[0] = 1.0,
        5 => out[5] = 1.0,
        6 => out[6] = 1.0,
        k => match (field.family, k) {
            (Studied::G2, 2) => {
                out[1] = x4 / x5;
                out[2] = 1.0;
            }
            (Studied::G2, 3) => {
                out[1] = x3 / x5;
                out[3] = 1.0;
            }
            (Studied::G2, _) => {
                out[1] = -x3 * x4 / (x5 * x5);
                out[4] = 1.0;
            }
            (Studied::G3, 2) => {
                out[1] = x2;
                out[3] = x4;
            }
            (Studied::G3, 3) => {
                out[2] = x3;
                out[4] = x5;
            }
            (Studied::G4_00, 2) => {
                out[1] = 1.0;
                out[2] = x5 / x4;
            }
            (Studied::G4_00, 3) => {
                out[2] = -x2 * x5 / (x4 * x4);
                out[3] = 1.0;
            }
            (Studied::G4_00, _) => {
                out[2] = x2 / x4;
                out[4] = 1.0;
            }
            (Studied::G9, 2) => {
                out[2] = x3;
                out[4] = x5;
            }
            (Studied::G9, 3) => {
                out[1] = x2;
                out[2] = x5;
                out[3] = x4;
            }
            (Studied::G10(_), 2) => {
                out[2] = x3 + x5;
                out[4] = x5;
            }
            (Studied::G10(l), 3) => {
                out[1] = x2;
                out[2] = l * x3;
                out[3] = x4;
                out[4] = l * x5;
            }
            // X4 coincides for G3, G9 and G10
            (_, _) => {
                out[1] = x4;
                out[2] = x5;
            }
        },
    }
    out
}

pub fn s_g_eval(field: VectorField, v: &Covector) -> Result<[f64; DIM]> {
    require_v(v)?;
    Ok(field_value(field, v))
}

/// Local error bound (relative to `1 + |v|`) for one refined RK4 step.
pub const RK4_LOCAL_TOL: f64 = 1e-12;

/// Deepest halving of an output interval.
const RK4_MAX_DEPTH: u32 = 24;

fn rk4_step(field: VectorField, v: &Covector, h: f64, step: usize) -> Result<Covector> {
    let eval = |p: &Covector| -> Result<Covector> {
        if in_v(p) {
            Ok(Covector(field_value(field, p)))
        } else {
            Err(Error::LeftV { step })
        }
    };
    let k1 = eval(v)?;
    let k2 = eval(&(*v + k1.scale(h / 2.0)))?;
    let k3 = eval(&(*v + k2.scale(h / 2.0)))?;
    let k4 = eval(&(*v + k3.scale(h)))?;
    let next = *v + (k1 + k2.scale(2.0) + k3.scale(2.0) + k4).scale(h / 6.0);
    if in_v(&next) && orbits::quadrant(&next)? == orbits::quadrant(v)? {
        Ok(next)
    } else {
        Err(Error::LeftV { step })
    }
}

/// RK4 over `[0, h]` by step doubling: halve until one step and two half steps agree,
/// then return the Richardson-corrected two-step value.
fn rk4_refined(field: VectorField, v: &Covector, h: f64, step: usize, depth: u32) -> Result<Covector> {
    let full = rk4_step(field, v, h, step);
    let half = rk4_step(field, v, h / 2.0, step).and_then(|m| rk4_step(field, &m, h / 2.0, step));
    if let (Ok(full), Ok(half)) = (&full, &half) {
        let diff = *half - *full;
        if diff.norm_inf() <= RK4_LOCAL_TOL * (1.0 + half.norm_inf()) {
            return Ok(*half + diff.scale(1.0 / 15.0));
        }
    }
    if depth == RK4_MAX_DEPTH {
        return half;
    }
    let mid = rk4_refined(field, v, h / 2.0, step, depth + 1)?;
    rk4_refined(field, &mid, h / 2.0, step, depth + 1)
}

/// RK4 on `steps` equal output intervals; returns every output point including `v0`.
///
/// Each interval is halved by step doubling until the local error estimate is below
/// [`RK4_LOCAL_TOL`], so trajectories that pass close to the boundary of `V`, where the
/// fields are stiff, keep their accuracy. A step whose stages leave `V` or change the
/// quadrant is `LeftV`.
pub fn integrate_trajectory(
    field: VectorField,
    v0: &Covector,
    t: f64,
    steps: usize,
) -> Result<Vec<Covector>> {
    require_v(v0)?;
    if t == 0.0 {
        return Ok(vec![*v0]);
    }
    if steps == 0 || !t.is_finite() {
        return Err(Error::InvalidParams(format!(
            "need steps > 0 and finite t, got steps = {steps}, t = {t}"
        )));
    }
    let h = t / steps as f64;
    let mut out = Vec::with_capacity(steps + 1);
    let mut v = *v0;
    out.push(v);
    for step in 1..=steps {
        v = rk4_refined(field, &v, h, step, 0)?;
        out.push(v);
    }
    Ok(out)
}

pub fn integrate_flow(field: VectorField, v0: &Covector, t: f64, steps: usize) -> Result<Covector> {
    Ok(*integrate_trajectory(field, v0, t, steps)?
        .last()
        .expect("trajectory holds v0"))
}

/// `Err(LeftV)` if `a + t` is not on the same side of 0 as `a`.
fn linear_stays(a: f64, t: f64) -> Result<f64> {
    let end = a + t;
    if end.abs() <= EPS_V || end.signum() != a.signum() {
        Err(Error::LeftV { step: 0 })
    } else {
        Ok(end)
    }
}

/// The explicit flow of `field` from `v0` for time `t`.
pub fn closed_flow(field: VectorField, v0: &Covector, t: f64) -> Result<Covector> {
    require_v(v0)?;
    let mut v = *v0;
    let [_, a2, a3, a4, a5, _, _] = v0.0;
    let et = t.exp();
    match field.index {
        1 => v[0] += t,
        5 => v[5] += t,
        6 => v[6] += t,
        k => match (field.family, k) {
            (Studied::G2, 2) => {
                v[1] = a2 + t * a4 / a5;
                v[2] = a3 + t;
            }
            (Studied::G2, 3) => {
                v[3] = linear_stays(a4, t)?;
                v[1] = a2 + t * a3 / a5;
            }
            (Studied::G2, _) => {
                v[4] = linear_stays(a5, t)?;
                v[1] = a2 + a3 * a4 / v[4] - a3 * a4 / a5;
            }
            (Studied::G3, 2) => {
                v[1] = a2 * et;
                v[3] = a4 * et;
            }
            (Studied::G3, 3) | (Studied::G9, 2) => {
                v[2] = a3 * et;
                v[4] = a5 * et;
            }
            (Studied::G4_00, 2) => {
                v[1] = a2 + t;
                v[2] = a3 + t * a5 / a4;
            }
            (Studied::G4_00, 3) => {
                v[3] = linear_stays(a4, t)?;
                v[2] = a3 + a2 * a5 / v[3] - a2 * a5 / a4;
            }
            (Studied::G4_00, _) => {
                v[4] = linear_stays(a5, t)?;
                v[2] = a3 + t * a2 / a4;
            }
            (Studied::G9, 3) => {
                v[1] = a2 * et;
                v[2] = a3 + a5 * t;
                v[3] = a4 * et;
            }
            (Studied::G10(_), 2) => {
                v[2] = (a3 + a5 * t) * et;
                v[4] = a5 * et;
            }
            (Studied::G10(l), 3) => {
                let elt = (l * t).exp();
                v[1] = a2 * et;
                v[2] = a3 * elt;
                v[3] = a4 * et;
                v[4] = a5 * elt;
            }
            (_, _) => {
                v[1] = a2 + a4 * t;
                v[2] = a3 + a5 * t;
            }
        },
    }
    if !v.is_finite() {
        return Err(Error::Overflow(format!("{field} flow at t = {t}")));
    }
    Ok(v)
}

/// Moves `f` to `target` on the same `G2` leaf by composing the six closed flows.
///
/// The parameters are read off the target: `x*_1, x*, y*` by translation, then `x*_4`
/// (field 3), `x*_5` (field 4) and `x*_3` (field 2); `x*_2` is then forced by the leaf.
pub fn reach_g2_leaf_point(f: &Covector, target: &Covector) -> Result<Covector> {
    let field = |k| VectorField {
        family: Studied::G2,
        index: k,
    };
    let mut v = *f;
    v = closed_flow(field(1), &v, target[0] - v[0])?;
    v = closed_flow(field(5), &v, target[5] - v[5])?;
    v = closed_flow(field(6), &v, target[6] - v[6])?;
    v = closed_flow(field(3), &v, target[3] - v[3])?;
    v = closed_flow(field(4), &v, target[4] - v[4])?;
    v = closed_flow(field(2), &v, target[2] - v[2])?;
    Ok(v)
}

/// The fibration `V -> R` whose fibres are the leaves: the leaf invariant itself.
pub fn fibration_p(id: &FamilyId, v: &Covector) -> Result<f64> {
    orbits::invariant(id, v)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Homeomorphism {
    /// Swap `(x*_2, x*_3)` and `(x*_4, x*_5)`.
    H1,
    /// `x*_2 -> x*_2 - x*_4 ln|x*_4|`.
    H2,
    /// `x*_2 -> x*_2 + lambda x*_4 ln|x*_4|`, `x*_3 -> x*_3 + x*_5 ln|x*_5|`.
    H3(f64),
    /// `(x*_2, x*_5) -> (x*_2 x*_4, x*_5 / x*_4)`.
    H,
}

impl fmt::Display for Homeomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Homeomorphism::H1 => write!(f, "h1"),
            Homeomorphism::H2 => write!(f, "h2"),
            Homeomorphism::H3(l) => write!(f, "h3:lambda={l}"),
            Homeomorphism::H => write!(f, "h"),
        }
    }
}

impl FromStr for Homeomorphism {
    type Err = Error;

    /// `h1`, `h2`, `h`, or `h3:lambda=<value>`.
    fn from_str(s: &str) -> Result<Self> {
        let perr = |pos: usize, msg: String| Error::Parse { pos, msg };
        match s.trim() {
            "h1" => Ok(Homeomorphism::H1),
            "h2" => Ok(Homeomorphism::H2),
            "h" => Ok(Homeomorphism::H),
            "h3" => Err(perr(2, "h3 needs a parameter, e.g. h3:lambda=0.5".into())),
            other => {
                let rest = other
                    .strip_prefix("h3:")
                    .ok_or_else(|| perr(0, format!("unknown map {other:?}; expected h1, h2, h3:lambda=..., h")))?;
                let val = rest
                    .strip_prefix("lambda=")
                    .ok_or_else(|| perr(3, format!("expected lambda=<value>, found {rest:?}")))?;
                let l: f64 = val
                    .parse()
                    .map_err(|_| perr(10, format!("invalid number {val:?}")))?;
                if !l.is_finite() {
                    return Err(perr(10, "lambda must be finite".into()));
                }
                Ok(Homeomorphism::H3(l))
            }
        }
    }
}

impl Homeomorphism {
    /// `(source, target)` families whose leaves the map identifies.
    pub fn pair(&self) -> (Studied, Studied) {
        match *self {
            Homeomorphism::H1 => (Studied::G2, Studied::G4_00),
            Homeomorphism::H2 => (Studied::G3, Studied::G9),
            Homeomorphism::H3(l) => (Studied::G3, Studied::G10(l)),
            Homeomorphism::H => (Studied::G2, Studied::G3),
        }
    }

    pub fn all(lambda: f64) -> [Homeomorphism; 4] {
        [
            Homeomorphism::H1,
            Homeomorphism::H2,
            Homeomorphism::H3(lambda),
            Homeomorphism::H,
        ]
    }
}

pub fn homeo_apply(h: Homeomorphism, v: &Covector) -> Result<Covector> {
    require_v(v)?;
    let mut w = *v;
    let [_, x2, x3, x4, x5, _, _] = v.0;
    match h {
        Homeomorphism::H1 => {
            w[1] = x3;
            w[2] = x2;
            w[3] = x5;
            w[4] = x4;
        }
        Homeomorphism::H2 => w[1] = x2 - x4 * x4.abs().ln(),
        Homeomorphism::H3(l) => {
            w[1] = x2 + l * x4 * x4.abs().ln();
            w[2] = x3 + x5 * x5.abs().ln();
        }
        Homeomorphism::H => {
            w[1] = x2 * x4;
            w[4] = x5 / x4;
        }
    }
    Ok(w)
}

pub fn homeo_inverse(h: Homeomorphism, v: &Covector) -> Result<Covector> {
    require_v(v)?;
    let mut w = *v;
    let [_, x2, x3, x4, x5, _, _] = v.0;
    match h {
        Homeomorphism::H1 => return homeo_apply(h, v),
        Homeomorphism::H2 => w[1] = x2 + x4 * x4.abs().ln(),
        Homeomorphism::H3(l) => {
            w[1] = x2 - l * x4 * x4.abs().ln();
            w[2] = x3 - x5 * x5.abs().ln();
        }
        Homeomorphism::H => {
            w[1] = x2 / x4;
            w[4] = x4 * x5;
        }
    }
    Ok(w)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadrantImage {
    pub source: Quadrant,
    pub target: Quadrant,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrespondenceReport {
    pub map: String,
    pub source: String,
    pub target: String,
    pub samples: usize,
    /// `max |inv_target(h(v)) - inv_source(v)| / (1 + |inv_source(v)|)`.
    pub max_invariant_residual: f64,
    /// Worst of `|h^-1(h(v)) - v|` and `|h(h^-1(v)) - v|` (sup norm, relative to `1 + |v|`).
    pub max_roundtrip_residual: f64,
    /// Whether every image stayed in `V`.
    pub preserves_v: bool,
    pub quadrant_map: Vec<QuadrantImage>,
}

pub fn leaf_correspondence_check(h: Homeomorphism, samples: &[Covector]) -> Result<CorrespondenceReport> {
    let (src, dst) = h.pair();
    let mut max_inv = 0.0_f64;
    let mut max_rt = 0.0_f64;
    let mut preserves_v = true;
    let mut qmap: Vec<QuadrantImage> = Vec::new();
    for v in samples {
        let c_src = orbits::invariant(&src.id(), v)?;
        let w = homeo_apply(h, v)?;
        if !in_v(&w) {
            preserves_v = false;
            continue;
        }
        let c_dst = orbits::invariant(&dst.id(), &w)?;
        max_inv = max_inv.max((c_dst - c_src).abs() / (1.0 + c_src.abs()));

        let scale = 1.0 + v.norm_inf();
        let back = homeo_inverse(h, &w)?;
        max_rt = max_rt.max((back - *v).norm_inf() / scale);
        let pre = homeo_inverse(h, v)?;
        if in_v(&pre) {
            max_rt = max_rt.max((homeo_apply(h, &pre)? - *v).norm_inf() / scale);
        } else {
            preserves_v = false;
        }

        let (qs, qt) = (orbits::quadrant(v)?, orbits::quadrant(&w)?);
        match qmap.iter_mut().find(|e| e.source == qs && e.target == qt) {
            Some(e) => e.count += 1,
            None => qmap.push(QuadrantImage {
                source: qs,
                target: qt,
                count: 1,
            }),
        }
    }
    qmap.sort_by_key(|e| (e.source.to_string(), e.target.to_string()));
    Ok(CorrespondenceReport {
        map: h.to_string(),
        source: src.id().to_string(),
        target: dst.id().to_string(),
        samples: samples.len(),
        max_invariant_residual: max_inv,
        max_roundtrip_residual: max_rt,
        preserves_v,
        quadrant_map: qmap,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JacobianReport {
    pub analytic: f64,
    pub numeric_values: Vec<f64>,
    pub max_relative_deviation: f64,
    pub relative_std: f64,
    pub pass: bool,
}

/// Relative tolerance for both checks of [`jacobian_constancy`].
pub const JACOBIAN_TOL: f64 = 1e-6;

/// Compares `e^{tr ad_U}` with central-difference determinants of `F -> F_U` at each sample.
pub fn jacobian_constancy(
    id: &FamilyId,
    u: &AlgebraElement,
    f_samples: &[Covector],
) -> Result<JacobianReport> {
    let alg = Algebra::new(*id)?;
    if !id.is_exponential_tag() {
        return Err(Error::NotExponentialFamily(id.to_string()));
    }
    let analytic = alg.ad(u).trace().exp();
    let mut numeric_values = Vec::with_capacity(f_samples.len());
    for f in f_samples {
        if id.studied().is_some() {
            require_v(f)?;
        }
        let mut jac = crate::lie::Matrix7::zeros();
        for j in 0..DIM {
            let h = 1e-5 * (1.0 + f[j].abs());
            let mut fp = *f;
            let mut fm = *f;
            fp[j] += h;
            fm[j] -= h;
            let dp = coadjoint_point_with(&alg, &fp, u)?;
            let dm = coadjoint_point_with(&alg, &fm, u)?;
            for i in 0..DIM {
                jac[(i, j)] = (dp[i] - dm[i]) / (2.0 * h);
            }
        }
        numeric_values.push(jac.determinant());
    }
    let scale = analytic.abs().max(f64::MIN_POSITIVE);
    let max_relative_deviation = numeric_values
        .iter()
        .map(|d| (d - analytic).abs() / scale)
        .fold(0.0, f64::max);
    let n = numeric_values.len() as f64;
    let relative_std = if numeric_values.len() < 2 {
        0.0
    } else {
        let mean = numeric_values.iter().sum::<f64>() / n;
        let var = numeric_values.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1.0);
        var.sqrt() / scale
    };
    Ok(JacobianReport {
        analytic,
        numeric_values,
        max_relative_deviation,
        relative_std,
        pass: max_relative_deviation < JACOBIAN_TOL && relative_std < JACOBIAN_TOL,
    })
}

/// Rank of the 7x6 matrix of field values at `v`.
pub fn field_rank(id: &FamilyId, v: &Covector) -> Result<usize> {
    let fields = VectorField::all(id)?;
    let mut rows = vec![vec![0.0; 6]; DIM];
    for (k, f) in fields.iter().enumerate() {
        let val = s_g_eval(*f, v)?;
        for i in 0..DIM {
            rows[i][k] = val[i];
        }
    }
    Ok(crate::lie::numerical_rank(&rows, crate::lie::RANK_TOL))
}
