//! Spectra of `ad_U`: a numeric eigensolver, the per-family closed forms, and the
//! exponentiality verdict derived from them.

use nalgebra::linalg::Schur;
use num_complex::Complex64;
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{Error, Result};
use crate::families::{Algebra, FamilyId, FamilyTag};
use crate::lie::{AlgebraElement, Matrix7};

const SCHUR_MAX_ITER: usize = 10_000;

/// Seven eigenvalues with multiplicity, in no particular order.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvalueMultiset {
    pub values: Vec<Complex64>,
}

impl Serialize for EigenvalueMultiset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.values.len()))?;
        for v in &self.values {
            seq.serialize_element(&[v.re, v.im])?;
        }
        seq.end()
    }
}

impl EigenvalueMultiset {
    pub fn new(mut values: Vec<Complex64>) -> Self {
        values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        EigenvalueMultiset { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn conjugate(&self) -> Self {
        EigenvalueMultiset::new(self.values.iter().map(|v| v.conj()).collect())
    }

    /// Distance between the multiset and its complex conjugate.
    pub fn conjugation_residual(&self) -> f64 {
        match_distance(self, &self.conjugate())
    }

    /// Values with `|re| <= re_tol` and `|im| > im_tol`.
    pub fn purely_imaginary(&self, re_tol: f64, im_tol: f64) -> Vec<Complex64> {
        self.values
            .iter()
            .copied()
            .filter(|v| v.re.abs() <= re_tol && v.im.abs() > im_tol)
            .collect()
    }
}

/// Eigenvalues from the real Schur form computed by nalgebra.
///
/// The 1x1 and 2x2 diagonal blocks of the quasi-triangular factor are read off directly;
/// 2x2 blocks are solved here because a block whose discriminant rounds to a tiny negative
/// number is otherwise reported as NaN.
pub fn eigenvalues_numeric(m: &Matrix7) -> Result<EigenvalueMultiset> {
    let out = eigenvalues_schur(m)?;
    Ok(EigenvalueMultiset::new(average_clusters(&out, cluster_tol(m))))
}

fn cluster_tol(m: &Matrix7) -> f64 {
    CLUSTER_TOL * m.max_abs().max(1.0)
}

/// The Schur-form eigenvalues before cluster averaging.
pub fn eigenvalues_schur(m: &Matrix7) -> Result<Vec<Complex64>> {
    let schur = Schur::try_new(m.to_nalgebra(), f64::EPSILON, SCHUR_MAX_ITER)
        .ok_or(Error::NoConvergence)?;
    let (_, t) = schur.unpack();
    let n = t.nrows();
    let mut out = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        if i + 1 < n && t[(i + 1, i)] != 0.0 {
            let (a, b, c, d) = (t[(i, i)], t[(i, i + 1)], t[(i + 1, i)], t[(i + 1, i + 1)]);
            let mean = 0.5 * (a + d);
            let half = 0.5 * (a - d);
            let disc = half * half + b * c;
            if disc >= 0.0 {
                let r = disc.sqrt();
                out.push(Complex64::new(mean + r, 0.0));
                out.push(Complex64::new(mean - r, 0.0));
            } else {
                let r = (-disc).sqrt();
                out.push(Complex64::new(mean, r));
                out.push(Complex64::new(mean, -r));
            }
            i += 2;
        } else {
            out.push(Complex64::new(t[(i, i)], 0.0));
            i += 1;
        }
    }
    if out.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::NoConvergence);
    }
    Ok(out)
}

/// Relative radius within which computed eigenvalues are treated as one cluster.
pub const CLUSTER_TOL: f64 = 1e-5;

/// Relative radius of the joint clusters in [`spectrum_mismatch`].
///
/// Eigenvalues a distance `s` apart inside a near-defective group of size `k` carry
/// individual errors near `eps / s^(k-1)`; merging below `1e-3` keeps the rest under `1e-9`.
pub const MATCH_CLUSTER_TOL: f64 = 1e-3;

/// Replaces each cluster of eigenvalues (single linkage at distance `tol`) by its mean.
///
/// A defective eigenvalue of multiplicity `k` is split by rounding into a ring of radius
/// about `eps^(1/k)`, while the mean of the ring stays accurate to about `eps`.
pub fn average_clusters(values: &[Complex64], tol: f64) -> Vec<Complex64> {
    let n = values.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn root(label: &mut [usize], mut i: usize) -> usize {
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (values[i] - values[j]).norm() <= tol {
                let (a, b) = (root(&mut label, i), root(&mut label, j));
                label[a.max(b)] = a.min(b);
            }
        }
    }
    let roots: Vec<usize> = (0..n).map(|i| root(&mut label, i)).collect();
    (0..n)
        .map(|i| {
            let members: Vec<Complex64> =
                (0..n).filter(|&j| roots[j] == roots[i]).map(|j| values[j]).collect();
            members.iter().sum::<Complex64>() / members.len() as f64
        })
        .collect()
}

/// An eigenvalue `re . (x, y) + i im . (x, y)` that is linear in the outer coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearEigenvalue {
    pub re: [f64; 2],
    pub im: [f64; 2],
}

impl LinearEigenvalue {
    const fn real(cx: f64, cy: f64) -> Self {
        LinearEigenvalue {
            re: [cx, cy],
            im: [0.0, 0.0],
        }
    }

    const fn complex(re: [f64; 2], im: [f64; 2]) -> Self {
        LinearEigenvalue { re, im }
    }

    pub fn eval(&self, x: f64, y: f64) -> Complex64 {
        Complex64::new(
            self.re[0] * x + self.re[1] * y,
            self.im[0] * x + self.im[1] * y,
        )
    }

    pub fn is_real(&self) -> bool {
        self.im == [0.0, 0.0]
    }
}

/// The seven eigenvalues of `ad_U` as linear forms in `(x, y)`, with multiplicity.
pub fn closed_forms(id: &FamilyId) -> Vec<LinearEigenvalue> {
    use FamilyTag::*;
    let r = LinearEigenvalue::real;
    let c = LinearEigenvalue::complex;
    let l = id.lambda();
    let l2 = id.lambda2();
    let zero = r(0.0, 0.0);
    match id.tag() {
        G1 => vec![zero, zero, zero, r(0.0, 1.0), r(1.0, 0.0), r(-1.0, 0.0), r(1.0, 1.0)],
        G2 => vec![r(0.0, 1.0), r(1.0, 1.0), r(1.0, 0.0), r(1.0, 0.0), zero, zero, zero],
        G3 | G9 => vec![r(0.0, 1.0), r(0.0, 1.0), r(1.0, 0.0), r(1.0, 0.0), zero, zero, zero],
        G4 => vec![zero, zero, r(0.0, 1.0), r(1.0, 0.0), r(1.0, 1.0), r(l, l2), r(l + 1.0, l2)],
        G5 => vec![r(0.0, 2.0), r(1.0, 0.0), r(1.0, 1.0), zero, zero, r(0.0, 1.0), r(0.0, 1.0)],
        G6 => vec![r(l, 1.0), r(2.0, 0.0), r(l + 1.0, 1.0), zero, zero, r(1.0, 0.0), r(1.0, 0.0)],
        G7 => vec![r(0.0, 1.0), r(1.0, 0.0), r(1.0, 2.0), zero, zero, r(1.0, 1.0), r(1.0, 1.0)],
        G8 => vec![
            r(1.0, 0.0),
            r(l, 1.0),
            r(l + 2.0, 1.0),
            zero,
            zero,
            r(l + 1.0, 1.0),
            r(l + 1.0, 1.0),
        ],
        G10 => vec![r(l, 1.0), r(l, 1.0), r(1.0, 0.0), r(1.0, 0.0), zero, zero, zero],
        G11 => vec![r(0.0, 1.0), r(1.0, 1.0), r(1.0, 1.0), zero, zero, r(1.0, 0.0), r(1.0, 0.0)],
        G12 => vec![
            r(1.0, 0.0),
            r(l + 1.0, 1.0),
            r(l + 1.0, 1.0),
            zero,
            zero,
            r(l, 1.0),
            r(l, 1.0),
        ],
        G13 => vec![
            zero,
            zero,
            r(0.0, l),
            c([1.0, 0.0], [0.0, 1.0]),
            c([1.0, 0.0], [0.0, -1.0]),
            c([1.0, l], [0.0, 1.0]),
            c([1.0, l], [0.0, -1.0]),
        ],
        G14 => vec![
            zero,
            zero,
            r(1.0, 0.0),
            c([l, l2], [0.0, 1.0]),
            c([l, l2], [0.0, -1.0]),
            c([l + 1.0, l2], [0.0, 1.0]),
            c([l + 1.0, l2], [0.0, -1.0]),
        ],
        G15 | G16 => {
            let p = c([0.0, 1.0], [1.0, 0.0]);
            let m = c([0.0, 1.0], [-1.0, 0.0]);
            vec![zero, zero, zero, p, m, p, m]
        }
    }
}

/// Closed-form spectrum of `ad_U`; it depends on `U` only through `(x, y)`.
pub fn eigenvalues_closed(id: &FamilyId, u: &AlgebraElement) -> EigenvalueMultiset {
    let (x, y) = (u.x(), u.y());
    EigenvalueMultiset::new(closed_forms(id).iter().map(|f| f.eval(x, y)).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub enum Exponentiality {
    Exponential,
    NotExponential {
        witness: AlgebraElement,
        /// A nonzero purely imaginary eigenvalue of `ad_witness`, from the numeric solver.
        eigenvalue: Complex64,
    },
}

impl Exponentiality {
    pub fn is_exponential(&self) -> bool {
        matches!(self, Exponentiality::Exponential)
    }
}

/// Direction in the `(x, y)` plane along which `form` is nonzero and purely imaginary.
fn imaginary_direction(form: &LinearEigenvalue) -> Option<[f64; 2]> {
    if form.is_real() {
        return None;
    }
    let [rx, ry] = form.re;
    let mut w = if rx == 0.0 && ry == 0.0 {
        form.im
    } else {
        [-ry, rx]
    };
    let im = form.im[0] * w[0] + form.im[1] * w[1];
    if im == 0.0 {
        return None;
    }
    if w[0] < 0.0 || (w[0] == 0.0 && w[1] < 0.0) {
        w = [-w[0], -w[1]];
    }
    Some(w)
}

/// Exponential iff no closed-form eigenvalue can be nonzero and purely imaginary.
/// A witness is confirmed with the numeric eigensolver before it is returned.
pub fn is_exponential(id: &FamilyId) -> Result<Exponentiality> {
    let alg = Algebra::new(*id)?;
    for form in closed_forms(id) {
        let Some([wx, wy]) = imaginary_direction(&form) else {
            continue;
        };
        let mut u = AlgebraElement::ZERO;
        u[5] = wx;
        u[6] = wy;
        // Averaging can merge a purely imaginary eigenvalue with a neighbour a tiny real
        // shift away, so the raw Schur values are searched as well.
        let ad = alg.ad(&u);
        let mut spec = eigenvalues_numeric(&ad)?;
        spec.values.extend(eigenvalues_schur(&ad)?);
        let scale = wx.abs().max(wy.abs());
        if let Some(ev) = spec.purely_imaginary(1e-9 * scale, 1e-6 * scale).first() {
            return Ok(Exponentiality::NotExponential {
                witness: u,
                eigenvalue: *ev,
            });
        }
    }
    Ok(Exponentiality::Exponential)
}

/// Largest pairwise distance under a matching of two multisets of equal size.
///
/// Nearest-neighbour pairing on the sorted lists is tried first; if its worst pair exceeds
/// `greedy_tol` an optimal assignment (Hungarian method, sum of distances) is used instead,
/// and the smaller of the two maxima is returned.
pub fn match_distance_with(a: &EigenvalueMultiset, b: &EigenvalueMultiset, greedy_tol: f64) -> f64 {
    assert_eq!(a.len(), b.len(), "multisets of different size");
    let greedy = greedy_match(&a.values, &b.values);
    if greedy <= greedy_tol {
        return greedy;
    }
    greedy.min(hungarian_match(&a.values, &b.values))
}

pub fn match_distance(a: &EigenvalueMultiset, b: &EigenvalueMultiset) -> f64 {
    match_distance_with(a, b, 1e-10)
}

/// Distance between exact eigenvalues `exact` of `m` and its computed spectrum.
///
/// Both sets are clustered together (single linkage at [`MATCH_CLUSTER_TOL`]); each cluster
/// must hold as many exact as computed values, and contributes the distance between the
/// two cluster means. Means stay accurate when a cluster is defective or holds distinct
/// eigenvalues closer than the radius, where a one-to-one matching does not. If some
/// cluster's counts differ the plain matched distance is returned.
pub fn spectrum_mismatch(exact: &EigenvalueMultiset, m: &Matrix7) -> Result<f64> {
    let computed = eigenvalues_schur(m)?;
    let n = exact.len();
    assert_eq!(n, computed.len(), "multisets of different size");
    let all: Vec<Complex64> = exact.values.iter().chain(&computed).copied().collect();
    let means = average_clusters(&all, MATCH_CLUSTER_TOL * m.max_abs().max(1.0));
    let mut worst = 0.0_f64;
    let mut seen = vec![false; all.len()];
    for i in 0..all.len() {
        if seen[i] {
            continue;
        }
        let members: Vec<usize> = (0..all.len()).filter(|&j| means[j] == means[i]).collect();
        let (mut sa, mut sb, mut na, mut nb) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), 0, 0);
        for &j in &members {
            seen[j] = true;
            if j < n {
                sa += all[j];
                na += 1;
            } else {
                sb += all[j];
                nb += 1;
            }
        }
        if na != nb {
            return Ok(match_distance(exact, &EigenvalueMultiset::new(computed)));
        }
        worst = worst.max((sa / na as f64 - sb / nb as f64).norm());
    }
    Ok(worst)
}

fn greedy_match(a: &[Complex64], b: &[Complex64]) -> f64 {
    let mut used = vec![false; b.len()];
    let mut worst = 0.0_f64;
    for va in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, vb)| (j, (va - vb).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("equal sizes");
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

/// Minimum-cost assignment via the O(n^3) potentials formulation; returns the worst
/// matched distance.
fn hungarian_match(a: &[Complex64], b: &[Complex64]) -> f64 {
    let n = a.len();
    let cost = |i: usize, j: usize| (a[i] - b[j]).norm();
    let inf = f64::INFINITY;
    // 1-based arrays, column 0 is a sentinel
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    (1..=n).map(|j| cost(p[j] - 1, j - 1)).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_spectrum() {
        let m = Matrix7::diag([1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0]);
        let got = eigenvalues_numeric(&m).unwrap();
        let want = EigenvalueMultiset::new(
            [1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0].iter().map(|&r| c(r, 0.0)).collect(),
        );
        assert!(match_distance(&got, &want) < 1e-14);
    }

    #[test]
    fn nearby_distinct_eigenvalues_compare_by_cluster_mean() {
        // Eigenvalues 0, 0, d and 1, 1 + d with d below the averaging radius.
        let d = -6.5e-6;
        let mut m = Matrix7::diag([0.0, 0.0, d, 1.0, 1.0 + d, 2.0, 3.0]);
        m[(0, 1)] = 0.7;
        m[(3, 4)] = 0.3;
        let exact = EigenvalueMultiset::new(
            [0.0, 0.0, d, 1.0, 1.0 + d, 2.0, 3.0].iter().map(|&r| c(r, 0.0)).collect(),
        );
        assert!(spectrum_mismatch(&exact, &m).unwrap() < 1e-14);
        let wrong = EigenvalueMultiset::new(
            [0.0, 0.0, d, 1.0, 1.0 + d, 2.0, 3.1].iter().map(|&r| c(r, 0.0)).collect(),
        );
        assert!((spectrum_mismatch(&wrong, &m).unwrap() - 0.1).abs() < 1e-12);
    }

    #[test]
    fn g13_witness_for_tiny_lambda() {
        for l in [0.0, 1e-12, 1e-9, 2.765e-6, 1e-5, 1e-3, 1.5] {
            let id = FamilyId::new(FamilyTag::G13, &[l]).unwrap();
            assert!(!is_exponential(&id).unwrap().is_exponential(), "lambda = {l}");
        }
    }

    #[test]
    fn g2_closed_example() {
        let id = FamilyId::plain(FamilyTag::G2);
        let mut u = AlgebraElement::ZERO;
        u[5] = 2.0;
        u[6] = 3.0;
        let got = eigenvalues_closed(&id, &u);
        let want = EigenvalueMultiset::new(
            [3.0, 5.0, 2.0, 2.0, 0.0, 0.0, 0.0].iter().map(|&r| c(r, 0.0)).collect(),
        );
        assert_eq!(got, want);
        assert!(eigenvalues_closed(&id, &AlgebraElement::ZERO)
            .values
            .iter()
            .all(|v| *v == c(0.0, 0.0)));
    }

    #[test]
    fn hungarian_beats_bad_greedy() {
        // greedy pairs 0 with 0.4 first and is then forced into a long edge
        let a = EigenvalueMultiset::new(vec![c(0.0, 0.0), c(1.0, 0.0)]);
        let b = EigenvalueMultiset::new(vec![c(0.4, 0.0), c(-0.5, 0.0)]);
        assert!((greedy_match(&a.values, &b.values) - 1.5).abs() < 1e-15);
        assert!((match_distance(&a, &b) - 0.6).abs() < 1e-15);
    }

    #[test]
    fn witnesses() {
        let g15 = FamilyId::plain(FamilyTag::G15);
        match is_exponential(&g15).unwrap() {
            Exponentiality::NotExponential { witness, eigenvalue } => {
                assert_eq!((witness.x(), witness.y()), (1.0, 0.0));
                assert!((eigenvalue.im.abs() - 1.0).abs() < 1e-9);
            }
            other => panic!("{other:?}"),
        }
        let g13 = FamilyId::new(FamilyTag::G13, &[0.0]).unwrap();
        match is_exponential(&g13).unwrap() {
            Exponentiality::NotExponential { witness, .. } => {
                assert_eq!((witness.x(), witness.y()), (0.0, 1.0))
            }
            other => panic!("{other:?}"),
        }
        assert!(is_exponential(&FamilyId::plain(FamilyTag::G9))
            .unwrap()
            .is_exponential());
    }

    #[test]
    fn g14_witness_depends_on_lambda2() {
        let id = FamilyId::new(FamilyTag::G14, &[0.5, 1.5]).unwrap();
        let Exponentiality::NotExponential { witness, .. } = is_exponential(&id).unwrap() else {
            panic!("G14 must not be exponential");
        };
        let spec = eigenvalues_closed(&id, &witness);
        assert!(!spec.purely_imaginary(1e-12, 1e-6).is_empty());
    }
}
