//! Independent oracles written in the test code: a Taylor-series matrix exponential, a
//! quadrature for exponential divided differences, Gaussian-elimination ranks and
//! finite-difference checks of the vector fields.

use g52::foliation::{closed_flow, s_g_eval, VectorField};
use g52::phi::{dd1, dd2, phi1};
use g52::sampling::{self, SampleRng};
use g52::{
    exp_ad_closed, expm::expm, lie::skew_rank, Algebra, Covector, FamilyId, FamilyTag,
    Matrix7, Studied,
};
use rand::Rng;

/// `exp(m)` by squaring a 30-term Taylor sum of `m / 2^s`, `|m / 2^s| <= 1/2`.
fn taylor_expm(m: &Matrix7) -> Matrix7 {
    let norm = m.norm1();
    let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let a = m.scale(0.5_f64.powi(s));
    let mut term = Matrix7::identity();
    let mut sum = Matrix7::identity();
    for k in 1..=30 {
        term = (term * a).scale(1.0 / k as f64);
        sum = sum + term;
    }
    for _ in 0..s {
        sum = sum * sum;
    }
    sum
}

/// Gauss-Legendre nodes and weights on `[0, 1]` by Newton iteration on `P_n`.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        let mut x = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((0.5 * (x + 1.0), 0.5 * w));
    }
    out
}

/// `e[a, b]` and `e[a, b, c]` as integrals over the simplex (Hermite-Genocchi).
fn dd1_quad(a: f64, b: f64, gl: &[(f64, f64)]) -> f64 {
    gl.iter().map(|&(s, w)| w * (a + s * (b - a)).exp()).sum()
}

fn dd2_quad(a: f64, b: f64, c: f64, gl: &[(f64, f64)]) -> f64 {
    let mut acc = 0.0;
    for &(s, ws) in gl {
        // t runs over [0, 1 - s]
        for &(r, wr) in gl {
            let t = r * (1.0 - s);
            acc += ws * wr * (1.0 - s) * (a + s * (b - a) + t * (c - a)).exp();
        }
    }
    acc
}

/// Rank by Gaussian elimination with full pivoting, pivots below `tol * max|a_ij|` are zero.
fn gauss_rank(m: &Matrix7, tol: f64) -> usize {
    let mut a = m.0;
    let scale = m.max_abs().max(1.0);
    let mut rank = 0;
    let mut used_rows = [false; 7];
    let mut used_cols = [false; 7];
    loop {
        let mut best = (0.0, 0, 0);
        for i in (0..7).filter(|i| !used_rows[*i]) {
            for j in (0..7).filter(|j| !used_cols[*j]) {
                if a[i][j].abs() > best.0 {
                    best = (a[i][j].abs(), i, j);
                }
            }
        }
        if best.0 <= tol * scale {
            return rank;
        }
        let (_, p, q) = best;
        used_rows[p] = true;
        used_cols[q] = true;
        rank += 1;
        for i in (0..7).filter(|i| !used_rows[*i]) {
            let f = a[i][q] / a[p][q];
            for j in 0..7 {
                a[i][j] -= f * a[p][j];
            }
        }
    }
}

fn studied_ids() -> Vec<FamilyId> {
    vec![
        Studied::G2.id(),
        Studied::G3.id(),
        Studied::G4_00.id(),
        Studied::G9.id(),
        Studied::G10(0.5).id(),
        Studied::G10(-1.7).id(),
    ]
}

#[test]
fn expm_matches_taylor_oracle_on_every_family() {
    let mut rng = sampling::rng(100);
    for tag in FamilyTag::ALL {
        for _ in 0..20 {
            let alg = Algebra::new(FamilyId::random(tag, &mut rng)).unwrap();
            let ad = alg.ad(&sampling::uniform_element(&mut rng, 2.0));
            let (a, b) = (expm(&ad).unwrap(), taylor_expm(&ad));
            let err = (a - b).frobenius_norm() / (1.0 + b.frobenius_norm());
            assert!(err < 1e-12, "{} err {err:e}", alg.id);
        }
    }
}

#[test]
fn closed_forms_match_taylor_oracle() {
    let mut rng = sampling::rng(101);
    for id in studied_ids() {
        let alg = Algebra::new(id).unwrap();
        for _ in 0..50 {
            let u = sampling::uniform_element(&mut rng, 2.0);
            let b = taylor_expm(&alg.ad(&u));
            let a = exp_ad_closed(&id, &u).unwrap();
            let err = (a - b).frobenius_norm() / (1.0 + b.frobenius_norm());
            assert!(err < 1e-12, "{id} err {err:e}");
        }
    }
}

#[test]
fn closed_forms_near_singular_loci() {
    let mut rng = sampling::rng(102);
    for id in studied_ids() {
        let alg = Algebra::new(id).unwrap();
        let l = if id.tag() == FamilyTag::G10 { id.lambda() } else { 0.0 };
        for locus in 0..4 {
            for mag in [0.0, 1e-12, 1e-9, 1e-7, 1e-4, 0.99e-4, 1.01e-4] {
                let mut u = sampling::uniform_element(&mut rng, 2.0);
                let v = if rng.gen_bool(0.5) { mag } else { -mag };
                match locus {
                    0 => u[5] = v,
                    1 => u[6] = v,
                    2 => u[6] = v - u[5],
                    _ => u[6] = v - l * u[5],
                }
                let b = taylor_expm(&alg.ad(&u));
                let a = exp_ad_closed(&id, &u).unwrap();
                let err = (a - b).frobenius_norm() / (1.0 + b.frobenius_norm());
                assert!(err < 1e-12, "{id} locus {locus} value {v:e}: {err:e}");
            }
        }
    }
}

#[test]
fn kernels_match_quadrature() {
    let gl = gauss_legendre(24);
    let mut rng = sampling::rng(103);
    for _ in 0..300 {
        let a = rng.gen_range(-3.0..3.0);
        let spread = 10f64.powf(rng.gen_range(-13.0..0.5));
        let b = a + spread * rng.gen_range(-1.0..1.0);
        let c = a + spread * rng.gen_range(-1.0..1.0);
        let want = dd2_quad(a, b, c, &gl);
        assert!((dd2(a, b, c) - want).abs() < 1e-14 * want, "dd2({a}, {b}, {c})");
        let want = dd1_quad(a, b, &gl);
        assert!((dd1(a, b) - want).abs() < 1e-14 * want, "dd1({a}, {b})");
        let want = dd1_quad(0.0, b - a, &gl);
        assert!((phi1(b - a) - want).abs() < 1e-14 * want, "phi1({})", b - a);
    }
}

#[test]
fn skew_rank_matches_elimination() {
    let mut rng = sampling::rng(104);
    for tag in FamilyTag::ALL {
        for _ in 0..50 {
            let alg = Algebra::new(FamilyId::random(tag, &mut rng)).unwrap();
            let f = sampling::structured_covector(&mut rng);
            let k = alg.kirillov(&f);
            assert_eq!(skew_rank(&k).unwrap(), gauss_rank(&k, 1e-10), "{} {:?}", alg.id, f.0);
        }
    }
}

fn central_velocity(field: VectorField, v: &Covector) -> [f64; 7] {
    let h = 1e-5;
    let p = closed_flow(field, v, h).unwrap();
    let m = closed_flow(field, v, -h).unwrap();
    std::array::from_fn(|i| (p[i] - m[i]) / (2.0 * h))
}

#[test]
fn closed_flows_are_integral_curves() {
    let mut rng: SampleRng = sampling::rng(105);
    for id in studied_ids() {
        for k in 1..=6 {
            let field = VectorField::new(&id, k).unwrap();
            for _ in 0..20 {
                let v = sampling::point_in_v(&mut rng);
                let t = rng.gen_range(-0.2..0.2);
                let Ok(p) = closed_flow(field, &v, t) else { continue };
                let got = central_velocity(field, &p);
                let want = s_g_eval(field, &p).unwrap();
                for i in 0..7 {
                    assert!((got[i] - want[i]).abs() < 1e-7 * (1.0 + want[i].abs()), "{field} coord {i}");
                }
            }
        }
    }
}

#[test]
fn field_values_span_the_orbit_tangent() {
    // Row k of the Kirillov matrix, <F, [X_k, X_j]>, is the coadjoint velocity along X_k.
    // The fields are tangent to the orbit, so appending one leaves the rank at 6.
    let mut rng = sampling::rng(106);
    for id in studied_ids() {
        let alg = Algebra::new(id).unwrap();
        for _ in 0..20 {
            let v = sampling::point_in_v(&mut rng);
            let kir = alg.kirillov(&v);
            let mut rows: Vec<Vec<f64>> = (0..7).map(|k| (0..7).map(|j| kir[(k, j)]).collect()).collect();
            let base = g52::lie::numerical_rank(&rows, 1e-9);
            assert_eq!(base, 6, "{id}");
            for k in 1..=6 {
                let field = VectorField::new(&id, k).unwrap();
                let val = s_g_eval(field, &v).unwrap();
                rows.push(val.to_vec());
                let r = g52::lie::numerical_rank(&rows, 1e-9);
                rows.pop();
                assert_eq!(r, 6, "{id} X{k}");
            }
        }
    }
}

#[test]
fn exp_of_minus_u_is_inverse() {
    let mut rng = sampling::rng(107);
    for tag in FamilyTag::ALL {
        let alg = Algebra::new(FamilyId::random(tag, &mut rng)).unwrap();
        let u = sampling::uniform_element(&mut rng, 2.0);
        let p = expm(&alg.ad(&u)).unwrap() * expm(&alg.ad(&(-u))).unwrap();
        assert!(p.max_abs_diff(&Matrix7::identity()) < 1e-12, "{}", alg.id);
    }
}
