//! Matrix exponential by scaling and squaring with a degree-13 Pade approximant.
//!
//! Higham, "The scaling and squaring method for the matrix exponential revisited" (2005).

use crate::error::{Error, Result};
use crate::lie::Matrix7;

const B: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

const THETA_13: f64 = 5.371920351148152;

pub fn expm(a: &Matrix7) -> Result<Matrix7> {
    if !a.is_finite() {
        return Err(Error::Overflow("non-finite input to expm".into()));
    }
    let norm = a.norm1();
    let s = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as i32
    } else {
        0
    };
    let a = a.scale(0.5_f64.powi(s));
    let id = Matrix7::identity();
    let a2 = a * a;
    let a4 = a2 * a2;
    let a6 = a4 * a2;

    let u_inner = a6 * (a6.scale(B[13]) + a4.scale(B[11]) + a2.scale(B[9]))
        + a6.scale(B[7])
        + a4.scale(B[5])
        + a2.scale(B[3])
        + id.scale(B[1]);
    let u = a * u_inner;
    let v = a6 * (a6.scale(B[12]) + a4.scale(B[10]) + a2.scale(B[8]))
        + a6.scale(B[6])
        + a4.scale(B[4])
        + a2.scale(B[2])
        + id.scale(B[0]);

    let mut r = (v - u)
        .solve(&(v + u))
        .ok_or_else(|| Error::Overflow("singular Pade denominator".into()))?;
    for _ in 0..s {
        r = r * r;
    }
    if r.is_finite() {
        Ok(r)
    } else {
        Err(Error::Overflow("matrix exponential exceeds double range".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gives_identity() {
        assert_eq!(expm(&Matrix7::zeros()).unwrap(), Matrix7::identity());
    }

    #[test]
    fn diagonal() {
        let d = [1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0];
        let e = expm(&Matrix7::diag(d)).unwrap();
        let want = Matrix7::diag(d.map(f64::exp));
        assert!(e.max_abs_diff(&want) < 1e-14);
        let big = expm(&Matrix7::diag([20.0, -20.0, 3.0, 0.0, 0.0, 0.0, 0.0])).unwrap();
        assert!((big[(0, 0)] / 20.0_f64.exp() - 1.0).abs() < 1e-13);
        assert!((big[(1, 1)] / (-20.0_f64).exp() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nilpotent_is_polynomial() {
        let mut n = Matrix7::zeros();
        n[(0, 1)] = 3.0;
        n[(1, 2)] = -2.0;
        let e = expm(&n).unwrap();
        let want = Matrix7::identity() + n + (n * n).scale(0.5);
        assert!(e.max_abs_diff(&want) < 1e-14);
    }

    #[test]
    fn rotation() {
        let t = 7.5_f64;
        let mut m = Matrix7::zeros();
        m[(2, 3)] = -t;
        m[(3, 2)] = t;
        let e = expm(&m).unwrap();
        assert!((e[(2, 2)] - t.cos()).abs() < 1e-13);
        assert!((e[(3, 2)] - t.sin()).abs() < 1e-13);
    }

    #[test]
    fn overflow() {
        let m = Matrix7::diag([800.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(matches!(expm(&m), Err(Error::Overflow(_))));
        let mut bad = Matrix7::zeros();
        bad[(0, 0)] = f64::NAN;
        assert!(matches!(expm(&bad), Err(Error::Overflow(_))));
    }
}
