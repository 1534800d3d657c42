//! Bracket algebra on the fixed basis `(X1, X2, X3, X4, X5, X, Y)`.
//!
//! Indices are 0-based here; anything shown to a user is 1-based.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::{DMatrix, SMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DIM: usize = 7;

/// Basis labels in display order.
pub const BASIS: [&str; DIM] = ["X1", "X2", "X3", "X4", "X5", "X", "Y"];
/// Dual-basis labels in display order.
pub const DUAL_BASIS: [&str; DIM] = ["x1*", "x2*", "x3*", "x4*", "x5*", "x*", "y*"];

/// Tolerance for the Jacobi and antisymmetry checks.
pub const STRUCTURE_TOL: f64 = 1e-12;
/// Relative singular-value cutoff used by [`skew_rank`].
pub const RANK_TOL: f64 = 1e-9;

macro_rules! coord_vector {
    ($name:ident, $doc:literal) => {
        #[doc = $doc]
        #[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
        pub struct $name(pub [f64; DIM]);

        impl $name {
            pub const ZERO: $name = $name([0.0; DIM]);

            pub fn new(coords: [f64; DIM]) -> Self {
                $name(coords)
            }

            /// The `i`-th unit vector (0-based).
            pub fn unit(i: usize) -> Self {
                let mut c = [0.0; DIM];
                c[i] = 1.0;
                $name(c)
            }

            pub fn coords(&self) -> &[f64; DIM] {
                &self.0
            }

            pub fn is_finite(&self) -> bool {
                self.0.iter().all(|v| v.is_finite())
            }

            pub fn dot(&self, other: &[f64; DIM]) -> f64 {
                self.0.iter().zip(other).map(|(a, b)| a * b).sum()
            }

            pub fn norm_inf(&self) -> f64 {
                self.0.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
            }

            pub fn scale(&self, s: f64) -> Self {
                $name(self.0.map(|v| v * s))
            }
        }

        impl Index<usize> for $name {
            type Output = f64;
            fn index(&self, i: usize) -> &f64 {
                &self.0[i]
            }
        }

        impl IndexMut<usize> for $name {
            fn index_mut(&mut self, i: usize) -> &mut f64 {
                &mut self.0[i]
            }
        }

        impl Add for $name {
            type Output = $name;
            fn add(self, rhs: $name) -> $name {
                let mut out = self;
                for i in 0..DIM {
                    out.0[i] += rhs.0[i];
                }
                out
            }
        }

        impl Sub for $name {
            type Output = $name;
            fn sub(self, rhs: $name) -> $name {
                let mut out = self;
                for i in 0..DIM {
                    out.0[i] -= rhs.0[i];
                }
                out
            }
        }

        impl Neg for $name {
            type Output = $name;
            fn neg(self) -> $name {
                $name(self.0.map(|v| -v))
            }
        }

        impl From<[f64; DIM]> for $name {
            fn from(c: [f64; DIM]) -> Self {
                $name(c)
            }
        }
    };
}

coord_vector!(
    AlgebraElement,
    "An element `U = x1 X1 + ... + x5 X5 + x X + y Y` of the Lie algebra."
);
coord_vector!(
    Covector,
    "A linear form on the algebra, in the dual basis `(X1*, ..., X5*, X*, Y*)`."
);

impl AlgebraElement {
    pub fn x(&self) -> f64 {
        self.0[5]
    }

    pub fn y(&self) -> f64 {
        self.0[6]
    }
}

/// A dense real 7x7 matrix, row-major.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Matrix7(pub [[f64; DIM]; DIM]);

impl fmt::Debug for Matrix7 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix7[")?;
        for row in &self.0 {
            writeln!(f, "  {:?}", row)?;
        }
        write!(f, "]")
    }
}

impl Default for Matrix7 {
    fn default() -> Self {
        Matrix7::zeros()
    }
}

impl Index<(usize, usize)> for Matrix7 {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for Matrix7 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.0[i][j]
    }
}

impl Matrix7 {
    pub fn zeros() -> Self {
        Matrix7([[0.0; DIM]; DIM])
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros();
        for i in 0..DIM {
            for j in 0..DIM {
                m.0[i][j] = f(i, j);
            }
        }
        m
    }

    pub fn diag(d: [f64; DIM]) -> Self {
        Self::from_fn(|i, j| if i == j { d[i] } else { 0.0 })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i])
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    pub fn trace(&self) -> f64 {
        (0..DIM).map(|i| self.0[i][i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> f64 {
        (0..DIM)
            .map(|j| (0..DIM).map(|i| self.0[i][j].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|v| v.is_finite())
    }

    pub fn column(&self, j: usize) -> [f64; DIM] {
        std::array::from_fn(|i| self.0[i][j])
    }

    pub fn mul_vec(&self, v: &[f64; DIM]) -> [f64; DIM] {
        std::array::from_fn(|i| (0..DIM).map(|k| self.0[i][k] * v[k]).sum())
    }

    /// Largest entrywise difference `max |a_ij - b_ij|`.
    pub fn max_abs_diff(&self, other: &Matrix7) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn to_nalgebra(&self) -> SMatrix<f64, DIM, DIM> {
        SMatrix::from_fn(|i, j| self.0[i][j])
    }

    pub fn from_nalgebra(m: &SMatrix<f64, DIM, DIM>) -> Self {
        Self::from_fn(|i, j| m[(i, j)])
    }

    /// LU factorisation with partial pivoting; returns `None` for an exactly singular pivot.
    fn lu(&self) -> Option<([[f64; DIM]; DIM], [usize; DIM], f64)> {
        let mut a = self.0;
        let mut perm: [usize; DIM] = std::array::from_fn(|i| i);
        let mut sign = 1.0;
        for k in 0..DIM {
            let p = (k..DIM)
                .max_by(|&r, &s| a[r][k].abs().total_cmp(&a[s][k].abs()))
                .unwrap();
            if a[p][k] == 0.0 {
                return None;
            }
            if p != k {
                a.swap(p, k);
                perm.swap(p, k);
                sign = -sign;
            }
            for r in (k + 1)..DIM {
                let l = a[r][k] / a[k][k];
                a[r][k] = l;
                for c in (k + 1)..DIM {
                    a[r][c] -= l * a[k][c];
                }
            }
        }
        Some((a, perm, sign))
    }

    pub fn determinant(&self) -> f64 {
        match self.lu() {
            None => 0.0,
            Some((a, _, sign)) => (0..DIM).fold(sign, |d, i| d * a[i][i]),
        }
    }

    /// Solves `self * X = rhs`; `None` if `self` is singular.
    pub fn solve(&self, rhs: &Matrix7) -> Option<Matrix7> {
        let (a, perm, _) = self.lu()?;
        let mut x = Matrix7::zeros();
        for col in 0..DIM {
            let mut y = [0.0; DIM];
            for i in 0..DIM {
                let mut s = rhs.0[perm[i]][col];
                for k in 0..i {
                    s -= a[i][k] * y[k];
                }
                y[i] = s;
            }
            for i in (0..DIM).rev() {
                let mut s = y[i];
                for k in (i + 1)..DIM {
                    s -= a[i][k] * x.0[k][col];
                }
                x.0[i][col] = s / a[i][i];
            }
        }
        Some(x)
    }
}

impl Add for Matrix7 {
    type Output = Matrix7;
    fn add(self, rhs: Matrix7) -> Matrix7 {
        Matrix7::from_fn(|i, j| self.0[i][j] + rhs.0[i][j])
    }
}

impl Sub for Matrix7 {
    type Output = Matrix7;
    fn sub(self, rhs: Matrix7) -> Matrix7 {
        Matrix7::from_fn(|i, j| self.0[i][j] - rhs.0[i][j])
    }
}

impl Mul for Matrix7 {
    type Output = Matrix7;
    fn mul(self, rhs: Matrix7) -> Matrix7 {
        let mut out = Matrix7::zeros();
        for i in 0..DIM {
            for k in 0..DIM {
                let a = self.0[i][k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..DIM {
                    out.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        out
    }
}

/// Structure constants `c[i][j][k]`: the coefficient of `X_k` in `[X_i, X_j]`.
#[derive(Clone, PartialEq)]
pub struct StructureConstants {
    c: [[[f64; DIM]; DIM]; DIM],
}

impl fmt::Debug for StructureConstants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for i in 0..DIM {
            for j in (i + 1)..DIM {
                if self.c[i][j].iter().any(|&v| v != 0.0) {
                    list.entry(&(BASIS[i], BASIS[j], self.c[i][j]));
                }
            }
        }
        list.finish()
    }
}

impl StructureConstants {
    pub fn zero() -> Self {
        StructureConstants {
            c: [[[0.0; DIM]; DIM]; DIM],
        }
    }

    pub fn from_raw(c: [[[f64; DIM]; DIM]; DIM]) -> Self {
        StructureConstants { c }
    }

    /// Adds `coeff * X_k` to `[X_i, X_j]` and the negative to `[X_j, X_i]`.
    pub fn add_bracket(&mut self, i: usize, j: usize, k: usize, coeff: f64) {
        self.c[i][j][k] += coeff;
        self.c[j][i][k] -= coeff;
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[i][j][k]
    }

    /// Coordinates of `[X_i, X_j]`.
    pub fn basis_bracket(&self, i: usize, j: usize) -> [f64; DIM] {
        self.c[i][j]
    }

    /// Largest `|c[i][j][k] + c[j][i][k]|`.
    pub fn antisymmetry_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    worst = worst.max((self.c[i][j][k] + self.c[j][i][k]).abs());
                }
            }
        }
        worst
    }

    /// Largest cyclic Jacobi sum over all `(i, j, k, l)`.
    pub fn jacobi_residual(&self) -> f64 {
        let c = &self.c;
        let mut worst = 0.0_f64;
        for i in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    for l in 0..DIM {
                        let s: f64 = (0..DIM)
                            .map(|m| {
                                c[i][j][m] * c[m][k][l]
                                    + c[j][k][m] * c[m][i][l]
                                    + c[k][i][m] * c[m][j][l]
                            })
                            .sum();
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    pub fn is_lie_algebra(&self) -> bool {
        self.antisymmetry_residual() <= STRUCTURE_TOL && self.jacobi_residual() <= STRUCTURE_TOL
    }
}

pub fn bracket(c: &StructureConstants, u: &AlgebraElement, v: &AlgebraElement) -> AlgebraElement {
    let mut out = [0.0; DIM];
    for i in 0..DIM {
        if u[i] == 0.0 {
            continue;
        }
        for j in 0..DIM {
            let w = u[i] * v[j];
            if w == 0.0 {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate() {
                *o += w * c.c[i][j][k];
            }
        }
    }
    AlgebraElement(out)
}

/// Matrix of `ad_U`; column `j` holds the coordinates of `[U, X_j]`.
pub fn ad_matrix(c: &StructureConstants, u: &AlgebraElement) -> Matrix7 {
    let mut m = Matrix7::zeros();
    for i in 0..DIM {
        if u[i] == 0.0 {
            continue;
        }
        for j in 0..DIM {
            for k in 0..DIM {
                m.0[k][j] += u[i] * c.c[i][j][k];
            }
        }
    }
    m
}

/// The Kirillov form `B_F(X_i, X_j) = <F, [X_i, X_j]>`.
pub fn kirillov_form(c: &StructureConstants, f: &Covector) -> Matrix7 {
    let mut m = Matrix7::zeros();
    for i in 0..DIM {
        for j in (i + 1)..DIM {
            let v = f.dot(&c.c[i][j]);
            m.0[i][j] = v;
            m.0[j][i] = -v;
        }
    }
    m
}

/// `max |m + m^T|`.
pub fn skew_residual(m: &Matrix7) -> f64 {
    (*m + m.transpose()).max_abs()
}

/// Numerical rank of a skew-symmetric matrix.
///
/// Singular values at or below `RANK_TOL * max(1, sigma_max)` count as zero.
pub fn skew_rank(m: &Matrix7) -> Result<usize> {
    let residual = skew_residual(m);
    if residual > STRUCTURE_TOL * m.max_abs().max(1.0) {
        return Err(Error::NotSkew { residual });
    }
    let sv = m.to_nalgebra().singular_values();
    Ok(count_above(sv.as_slice(), RANK_TOL))
}

/// Numerical rank of an arbitrary dense matrix given row-major rows.
pub fn numerical_rank(rows: &[Vec<f64>], rel_tol: f64) -> usize {
    if rows.is_empty() || rows[0].is_empty() {
        return 0;
    }
    let m = DMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j]);
    let sv = m.singular_values();
    count_above(sv.as_slice(), rel_tol)
}

fn count_above(sv: &[f64], rel_tol: f64) -> usize {
    let max = sv.iter().cloned().fold(0.0_f64, f64::max);
    let cutoff = rel_tol * max.max(1.0);
    sv.iter().filter(|&&s| s > cutoff).count()
}
