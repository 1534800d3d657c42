//! Exponential divided differences with removable singularities handled by series.
//!
//! `phi1(t) = (e^t - 1)/t`, `dd1(a, b) = e[a, b]`, `dd2(a, b, c) = e[a, b, c]`, where
//! `e[...]` are divided differences of `exp`. Whenever the relevant denominator is below
//! [`SWITCH`] in magnitude a Taylor series truncated at degree [`SERIES_DEGREE`] is used.

/// Denominator magnitude below which the series branch is taken.
pub const SWITCH: f64 = 1e-4;
/// Highest power kept in the series branches.
pub const SERIES_DEGREE: usize = 12;

/// `1/n!` for `n = 0..=SERIES_DEGREE + 2`.
const INV_FACT: [f64; SERIES_DEGREE + 3] = {
    let mut out = [1.0; SERIES_DEGREE + 3];
    let mut n = 1;
    while n < out.len() {
        out[n] = out[n - 1] / n as f64;
        n += 1;
    }
    out
};

pub fn phi1_series(t: f64) -> f64 {
    // sum t^k / (k+1)!, Horner form
    let mut acc = INV_FACT[SERIES_DEGREE + 1];
    for k in (0..SERIES_DEGREE).rev() {
        acc = acc * t + INV_FACT[k + 1];
    }
    acc
}

pub fn phi1_direct(t: f64) -> f64 {
    t.exp_m1() / t
}

/// `(e^t - 1)/t`, equal to 1 at `t = 0`.
pub fn phi1(t: f64) -> f64 {
    if t.abs() < SWITCH {
        phi1_series(t)
    } else {
        phi1_direct(t)
    }
}

/// First divided difference `(e^a - e^b)/(a - b)`, equal to `e^a` when `a = b`.
pub fn dd1(a: f64, b: f64) -> f64 {
    b.exp() * phi1(a - b)
}

/// Second divided difference by the shifted series `e^m sum_k h_k(z)/(k+2)!`,
/// `m` the mean of the nodes and `h_k` the complete homogeneous symmetric polynomials.
pub fn dd2_series(a: f64, b: f64, c: f64) -> f64 {
    let m = (a + b + c) / 3.0;
    let z = [a - m, b - m, c - m];
    // h[k] built up one variable at a time: h_k(z1..zr) = h_k(z1..z(r-1)) + z_r h_(k-1)(z1..zr)
    let mut h = [0.0; SERIES_DEGREE + 1];
    h[0] = 1.0;
    for (r, &zr) in z.iter().enumerate() {
        if r == 0 {
            for k in 1..=SERIES_DEGREE {
                h[k] = h[k - 1] * zr;
            }
        } else {
            for k in 1..=SERIES_DEGREE {
                h[k] += zr * h[k - 1];
            }
        }
    }
    let s: f64 = (0..=SERIES_DEGREE).map(|k| h[k] * INV_FACT[k + 2]).sum();
    m.exp() * s
}

/// `(e^t - 1 - t)/t^2`. Its own series covers `|t| < 1`, where the direct quotient
/// loses digits to cancellation.
pub fn phi2(t: f64) -> f64 {
    const DEG: usize = 17;
    if t.abs() < 1.0 {
        let mut acc = 0.0;
        let mut fact = 1.0 / 2.0;
        let mut pow = 1.0;
        for k in 0..=DEG {
            acc += pow * fact;
            pow *= t;
            fact /= (k + 3) as f64;
        }
        acc
    } else {
        (t.exp_m1() - t) / (t * t)
    }
}

/// Second divided difference on sorted nodes `lo <= mid <= hi`, written as
/// `e^mid (q phi2(q) + p phi2(-p)) / (p + q)` with `p = mid - lo`, `q = hi - mid`.
/// Both terms are non-negative, so nothing cancels.
pub fn dd2_direct(a: f64, b: f64, c: f64) -> f64 {
    let mut n = [a, b, c];
    n.sort_by(f64::total_cmp);
    let [lo, mid, hi] = n;
    let (p, q) = (mid - lo, hi - mid);
    mid.exp() * (q * phi2(q) + p * phi2(-p)) / (p + q)
}

/// `e[a, b, c]`, symmetric in its arguments and continuous across coincident nodes.
pub fn dd2(a: f64, b: f64, c: f64) -> f64 {
    let spread = a.max(b).max(c) - a.min(b).min(c);
    if spread < SWITCH {
        dd2_series(a, b, c)
    } else {
        dd2_direct(a, b, c)
    }
}

/// `e[0, a, b]`, the kernel that multiplies products like `x1 x2` in the closed forms.
pub fn dd2_0(a: f64, b: f64) -> f64 {
    dd2(0.0, a, b)
}
