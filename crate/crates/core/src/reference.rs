//! Hand-transcribed `ad_U` matrices for every family, entry by entry.
//!
//! These are independent of [`crate::families`]: they are typed in from the published
//! classification rather than assembled from `(a_X, a_Y)`, and serve as ground truth for
//! the bracket convention. Two printed entries contradict the Jacobi identity and are
//! corrected here; their printed forms are kept in [`printed_errata`]:
//!
//! - `G8`, row 4, column 6: printed `-(1+lambda) x4`, forced `-(2+lambda) x4`
//!   (the diagonal entry `lambda x + 2x + y` in the same row agrees).
//! - `G14`, row 4, column 2: printed `x`, forced `x1` by `[X1, X2] = X4`.

use crate::families::{FamilyId, FamilyTag};
use crate::lie::{AlgebraElement, Matrix7};

/// A printed entry that disagrees with the corrected transcription.
#[derive(Debug, Clone, Copy)]
pub struct PrintedEntry {
    pub tag: FamilyTag,
    /// 1-based position.
    pub row: usize,
    pub col: usize,
    pub printed: &'static str,
    pub corrected: &'static str,
    pub eval_printed: fn(&FamilyId, &AlgebraElement) -> f64,
}

pub fn printed_errata() -> [PrintedEntry; 2] {
    [
        PrintedEntry {
            tag: FamilyTag::G8,
            row: 4,
            col: 6,
            printed: "-lambda*x4 - x4",
            corrected: "-lambda*x4 - 2*x4",
            eval_printed: |id, u| -(id.lambda() + 1.0) * u[3],
        },
        PrintedEntry {
            tag: FamilyTag::G14,
            row: 4,
            col: 2,
            printed: "x",
            corrected: "x1",
            eval_printed: |_, u| u.x(),
        },
    ]
}

/// Transcribed `ad_U` for the given family.
pub fn ad_reference(id: &FamilyId, u: &AlgebraElement) -> Matrix7 {
    let [x1, x2, x3, x4, x5, x, y] = u.0;
    let l = id.lambda();
    let l1 = id.lambda();
    let l2 = id.lambda2();
    let z = 0.0;
    use FamilyTag::*;
    let top: [[f64; 7]; 5] = match id.tag() {
        G1 => [
            [x, z, z, z, z, -x1, z],
            [z, -x, z, z, z, x2, z],
            [z, z, y, z, z, z, -x3],
            [-x2, x1, z, z, z, -l * y, l * x],
            [-x3, z, x1, z, x + y, -x5, -x5],
        ],
        G2 => [
            [x, z, z, z, z, -x1, z],
            [z, z, z, z, z, z, z],
            [z, z, y, z, z, z, -x3],
            [-x2, x1, z, x, z, -x4, z],
            [-x3, z, x1, z, x + y, -x5, -x5],
        ],
        G3 => [
            [z, z, z, z, z, z, z],
            [z, x, z, z, z, -x2, z],
            [z, z, y, z, z, z, -x3],
            [-x2, x1, z, x, z, -x4, z],
            [-x3, z, x1, z, y, z, -x5],
        ],
        G4 => {
            let p = l1 * x + l2 * y;
            let q = (1.0 + l1) * x + l2 * y;
            [
                [x, z, z, z, z, -x1, z],
                [z, y, z, z, z, z, -x2],
                [z, z, p, z, z, -l1 * x3, -l2 * x3],
                [-x2, x1, z, x + y, z, -x4, -x4],
                [-x3, z, x1, z, q, -(1.0 + l1) * x5, -l2 * x5],
            ]
        }
        G5 => [
            [y, z, z, z, z, z, -x1],
            [y, y, z, z, z, z, -x1 - x2],
            [z, z, x, z, z, -x3, z],
            [-x2, x1, z, 2.0 * y, z, z, -2.0 * x4],
            [-x3, z, x1, z, x + y, -x5, -x5],
        ],
        G6 => {
            let p = (1.0 + l) * x + y;
            [
                [x, z, z, z, z, -x1, z],
                [y, x, z, z, z, -x2, -x1],
                [z, z, l * x + y, z, z, -l * x3, -x3],
                [-x2, x1, z, 2.0 * x, z, -2.0 * x4, z],
                [-x3, z, x1, z, p, -(1.0 + l) * x5, -x5],
            ]
        }
        G7 => [
            [y, z, z, z, z, z, -x1],
            [z, x + y, z, z, z, -x2, -x2],
            [z, z, x, z, z, -x3, z],
            [-x2, x1, z, x + 2.0 * y, z, -x4, -2.0 * x4],
            [-x3, y, x1, z, x + y, -x5, -x2 - x5],
        ],
        G8 => {
            let p = l * x + x + y;
            let q = l * x + 2.0 * x + y;
            [
                [x, z, z, z, z, -x1, z],
                [z, p, z, z, z, -l * x2 - x2, -x2],
                [z, z, l * x + y, z, z, -l * x3, -x3],
                [-x2, x1, z, q, z, -l * x4 - 2.0 * x4, -x4],
                [-x3, y, x1, z, p, -l * x5 - x5, -x2 - x5],
            ]
        }
        G9 => [
            [z, z, z, z, z, z, z],
            [z, y, z, z, z, z, -x2],
            [z, z, x, z, z, -x3, z],
            [-x2, x1, z, y, z, z, -x4],
            [-x3, z, x1 + y, z, x, -x5, -x3],
        ],
        G10 => [
            [z, z, z, z, z, z, z],
            [z, x, z, z, z, -x2, z],
            [z, z, l * x + y, z, z, -l * x3, -x3],
            [-x2, x1, z, x, z, -x4, z],
            [-x3, z, x1 + y, z, l * x + y, -l * x5, -x3 - x5],
        ],
        G11 => [
            [y, z, z, z, z, z, -x1],
            [z, x, z, z, z, -x2, z],
            [z, y, x, z, z, -x3, -x2],
            [-x2, x1, z, x + y, z, -x4, -x4],
            [-x3, z, x1, y, x + y, -x5, -x4 - x5],
        ],
        G12 => {
            let p = l * x + x + y;
            [
                [x, z, z, z, z, -x1, z],
                [z, l * x + y, z, z, z, -l * x2, -x2],
                [z, y, l * x + y, z, z, -l * x3, -x2 - x3],
                [-x2, x1, z, p, z, -(l + 1.0) * x4, -x4],
                [-x3, z, x1, y, p, -(l + 1.0) * x5, -x4 - x5],
            ]
        }
        G13 => [
            [l * y, z, z, z, z, z, -l * x1],
            [z, x, -y, z, z, -x2, x3],
            [z, y, x, z, z, -x3, -x2],
            [-x2, x1, z, x + l * y, -y, -x4, -l * x4 + x5],
            [-x3, z, x1, y, x + l * y, -x5, -x4 - l * x5],
        ],
        G14 => {
            let p = l1 * x + l2 * y;
            let q = l1 * x + x + l2 * y;
            [
                [x, z, z, z, z, -x1, z],
                [z, p, -y, z, z, -l1 * x2, -l2 * x2 + x3],
                [z, y, p, z, z, -l1 * x3, -x2 - l2 * x3],
                [-x2, x1, z, q, -y, -l1 * x4 - x4, -l2 * x4 + x5],
                [-x3, z, x1, y, q, -l1 * x5 - x5, -x4 - l2 * x5],
            ]
        }
        G15 => [
            [z, z, z, z, z, z, z],
            [z, y, -x, z, z, x3, -x2],
            [z, x, y, z, z, -x2, -x3],
            [-x2, x1, -y, y, -x, x5, -x4 + x3],
            [-x3, y, x1, x, y, -x4, -x2 - x5],
        ],
        G16 => [
            [z, z, z, z, z, z, z],
            [z, y, -x, z, z, x3, -x2],
            [z, x, y, z, z, -x2, -x3],
            [-x2, x1, -l * y, y, -x, x5, -x4 + l * x3],
            [-x3, l * y + x, x1, x, y, -x2 - x4, -l * x2 - x5],
        ],
    };
    let mut m = Matrix7::zeros();
    m.0[..5].copy_from_slice(&top);
    m
}

/// Every `(row, col)` (1-based) where `a` and `b` differ by more than `tol`.
pub fn mismatches(a: &Matrix7, b: &Matrix7, tol: f64) -> Vec<(usize, usize, f64, f64)> {
    let mut out = Vec::new();
    for i in 0..7 {
        for j in 0..7 {
            if (a[(i, j)] - b[(i, j)]).abs() > tol {
                out.push((i + 1, j + 1, a[(i, j)], b[(i, j)]));
            }
        }
    }
    out
}
