//! Goeritz matrices and the exact integer linear algebra that reads the double branched
//! cover off them.

use std::fmt::Write as _;

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::diagram::{checkerboard, Checkerboard, Color, PlanarDiagram};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
}

pub type IntMatrix = Vec<Vec<i64>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoeritzMatrix {
    pub g: IntMatrix,
    /// Face index of the white region behind each row (`R_1..R_n`).
    pub region_index: Vec<usize>,
}

impl GoeritzMatrix {
    pub fn size(&self) -> usize {
        self.g.len()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.g.len();
        (0..n).all(|i| (0..n).all(|j| self.g[i][j] == self.g[j][i]))
    }

    pub fn determinant(&self) -> i128 {
        determinant(&self.g).expect("Goeritz matrices are square")
    }
}

/// `+1` when turning the over-strand counterclockwise sweeps the white corners.
pub fn crossing_sign(diag: &PlanarDiagram, col: &Checkerboard, c: usize) -> i64 {
    let over = diag.crossings[c].over_parity();
    if col.color[diag.corner_face[4 * c + over]] == Color::White {
        1
    } else {
        -1
    }
}

pub fn goeritz_matrix(diag: &PlanarDiagram, col: &Checkerboard) -> GoeritzMatrix {
    let regions = col.white_regions.len();
    if regions <= 1 {
        return GoeritzMatrix { g: vec![], region_index: vec![] };
    }
    let mut full = vec![vec![0i64; regions]; regions];
    for c in 0..diag.crossings.len() {
        let white = if col.color[diag.corner_face[4 * c]] == Color::White { 0 } else { 1 };
        let a = col.region_of_face(diag.corner_face[4 * c + white]).expect("white corner");
        let b = col.region_of_face(diag.corner_face[4 * c + white + 2]).expect("white corner");
        if a == b {
            continue;
        }
        let s = crossing_sign(diag, col, c);
        full[a][b] += s;
        full[b][a] += s;
    }
    for (i, row) in full.iter_mut().enumerate() {
        let off: i64 = row.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v).sum();
        row[i] = -off;
    }
    let g = full.into_iter().skip(1).map(|row| row.into_iter().skip(1).collect()).collect();
    GoeritzMatrix { g, region_index: col.white_regions[1..].to_vec() }
}

/// `|det G|` for the canonical coloring; the empty matrix has determinant 1.
pub fn knot_determinant(diag: &PlanarDiagram) -> u64 {
    let g = goeritz_matrix(diag, &checkerboard(diag));
    g.determinant().unsigned_abs() as u64
}

fn check_square(m: &[Vec<i64>]) -> Result<usize, LinalgError> {
    let n = m.len();
    if let Some(row) = m.iter().find(|r| r.len() != n) {
        return Err(LinalgError::NotSquare { rows: n, cols: row.len() });
    }
    Ok(n)
}

/// Fraction-free (Bareiss) elimination.
pub fn determinant(m: &[Vec<i64>]) -> Result<i128, LinalgError> {
    let n = check_square(m)?;
    if n == 0 {
        return Ok(1);
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    Ok(sign * a[n - 1][n - 1])
}

fn minor(m: &[Vec<i64>], row: usize, col: usize) -> Vec<Vec<i64>> {
    m.iter()
        .enumerate()
        .filter(|&(i, _)| i != row)
        .map(|(_, r)| r.iter().enumerate().filter(|&(j, _)| j != col).map(|(_, &v)| v).collect())
        .collect()
}

/// Classical adjoint via cofactors.
pub fn adjugate(m: &[Vec<i64>]) -> Result<Vec<Vec<i128>>, LinalgError> {
    let n = check_square(m)?;
    if n == 0 {
        return Ok(vec![]);
    }
    if n == 1 {
        return Ok(vec![vec![1]]);
    }
    let mut adj = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            let cof = determinant(&minor(m, i, j))?;
            let s = if (i + j) % 2 == 0 { 1 } else { -1 };
            adj[j][i] = s * cof;
        }
    }
    Ok(adj)
}

/// Exact inverse by Gauss–Jordan over the rationals.
pub fn inverse(m: &[Vec<i64>]) -> Result<Vec<Vec<Ratio<i128>>>, LinalgError> {
    let n = check_square(m)?;
    let zero = Ratio::from_integer(0i128);
    let one = Ratio::from_integer(1i128);
    let mut a: Vec<Vec<Ratio<i128>>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<_> = r.iter().map(|&x| Ratio::from_integer(x as i128)).collect();
            row.extend((0..n).map(|j| if i == j { one } else { zero }));
            row
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| a[i][k] != zero).ok_or(LinalgError::Singular)?;
        a.swap(p, k);
        let pivot = a[k][k];
        for x in a[k].iter_mut() {
            *x /= pivot;
        }
        for i in 0..n {
            if i != k && a[i][k] != zero {
                let f = a[i][k];
                for j in 0..2 * n {
                    let sub = f * a[k][j];
                    a[i][j] -= sub;
                }
            }
        }
    }
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyStructure {
    /// Invariant factors `d_1 | d_2 | ...`, all greater than 1.
    pub torsion: Vec<u64>,
    pub order: u64,
}

impl HomologyStructure {
    pub fn is_cyclic(&self) -> bool {
        self.torsion.len() <= 1
    }
}

/// Invariant factors of the cokernel of a nonsingular integer matrix.
pub fn smith_normal_form(m: &[Vec<i64>]) -> Result<HomologyStructure, LinalgError> {
    let n = check_square(m)?;
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    for k in 0..n {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in k..n {
                for j in k..n {
                    if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { return Err(LinalgError::Singular) };
            a.swap(k, pi);
            for row in a.iter_mut() {
                row.swap(k, pj);
            }
            let p = a[k][k];
            let mut clean = true;
            for i in k + 1..n {
                let q = a[i][k] / p;
                if q != 0 {
                    for j in k..n {
                        a[i][j] -= q * a[k][j];
                    }
                }
                clean &= a[i][k] == 0;
            }
            for j in k + 1..n {
                let q = a[k][j] / p;
                if q != 0 {
                    for i in k..n {
                        a[i][j] -= q * a[i][k];
                    }
                }
                clean &= a[k][j] == 0;
            }
            if !clean {
                continue;
            }
            // pivot must divide the rest of the block; otherwise fold the offending row in
            let bad = (k + 1..n).find(|&i| (k + 1..n).any(|j| a[i][j] % p != 0));
            match bad {
                Some(i) => {
                    for j in k..n {
                        a[k][j] += a[i][j];
                    }
                }
                None => break,
            }
        }
    }
    let torsion: Vec<u64> = (0..n).map(|i| a[i][i].unsigned_abs() as u64).filter(|&d| d > 1).collect();
    let order = torsion.iter().product();
    Ok(HomologyStructure { torsion, order })
}

/// Diagonal of `G^-1` in `Q/Z`, written over the common denominator `det = |det G|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinkingDiagonal {
    pub det: u64,
    /// `numerators[i] / det ≡ (G^-1)_{ii} (mod 1)`, each in `0..det`.
    pub numerators: Vec<u64>,
}

impl LinkingDiagonal {
    pub fn entry(&self, i: usize) -> Ratio<i64> {
        Ratio::new(self.numerators[i] as i64, self.det as i64)
    }
}

pub fn linking_diagonal(g: &GoeritzMatrix) -> Result<LinkingDiagonal, LinalgError> {
    let det = determinant(&g.g)?;
    if det == 0 {
        return Err(LinalgError::Singular);
    }
    let adj = adjugate(&g.g)?;
    let abs = det.abs();
    let numerators = (0..g.size())
        .map(|i| (adj[i][i] * det.signum()).rem_euclid(abs) as u64)
        .collect();
    Ok(LinkingDiagonal { det: abs as u64, numerators })
}

/// `G` and `G^-1` as text, fractions written `p/q`.
pub fn dump_matrices(g: &GoeritzMatrix) -> String {
    let mut out = String::from("G =\n");
    for row in &g.g {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:>4}")).collect();
        let _ = writeln!(out, "  [{}]", cells.join(" "));
    }
    match inverse(&g.g) {
        Ok(inv) => {
            out.push_str("G^-1 =\n");
            for row in inv {
                let cells: Vec<String> = row.iter().map(|v| format!("{v:>7}")).collect();
                let _ = writeln!(out, "  [{}]", cells.join(" "));
            }
        }
        Err(e) => {
            let _ = writeln!(out, "G^-1: {e}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::parse_dt;
    use crate::diagram::{realize, shadow_with_flip};

    fn diag(s: &str) -> PlanarDiagram {
        realize(&parse_dt(s).unwrap()).unwrap()
    }

    #[test]
    fn trefoil_goeritz() {
        let d = diag("[4, 6, 2]");
        let g = goeritz_matrix(&d, &checkerboard(&d));
        assert!(g.is_symmetric());
        assert_eq!(g.determinant().abs(), 3);
        assert_eq!(knot_determinant(&d), 3);
    }

    #[test]
    fn unknot_goeritz_is_empty() {
        let d = diag("[]");
        let g = goeritz_matrix(&d, &checkerboard(&d));
        assert_eq!(g.size(), 0);
        assert_eq!(knot_determinant(&d), 1);
        assert_eq!(knot_determinant(&diag("[2]")), 1);
    }

    #[test]
    fn determinants_of_11n162_and_neighbor() {
        let d = diag("[6, -10, 12, 22, 16, -18, 8, 20, -4, 2, 14]");
        assert_eq!(knot_determinant(&d), 55);
        assert_eq!(knot_determinant(&shadow_with_flip(&d, 0).unwrap()), 23);
    }

    #[test]
    fn small_determinants() {
        assert_eq!(knot_determinant(&diag("[4, 8, 10, 2, 6]")), 7);
        assert_eq!(knot_determinant(&diag("[4, 6, 8, 2]")), 5);
    }

    #[test]
    fn bareiss_examples() {
        assert_eq!(determinant(&[vec![2, 1], vec![1, 3]]), Ok(5));
        assert_eq!(determinant(&[vec![0, 1], vec![1, 0]]), Ok(-1));
        assert_eq!(determinant(&[vec![1, 2], vec![2, 4]]), Ok(0));
        assert_eq!(determinant(&[]), Ok(1));
        assert!(matches!(determinant(&[vec![1, 2]]), Err(LinalgError::NotSquare { .. })));
    }

    #[test]
    fn snf_examples() {
        let h = smith_normal_form(&[vec![3]]).unwrap();
        assert_eq!(h.torsion, vec![3]);
        assert!(h.is_cyclic());
        let h = smith_normal_form(&[vec![3, 0], vec![0, 3]]).unwrap();
        assert_eq!(h.torsion, vec![3, 3]);
        assert!(!h.is_cyclic());
        let h = smith_normal_form(&[vec![2, 1], vec![1, 3]]).unwrap();
        assert_eq!(h.torsion, vec![5]);
        assert_eq!(h.order, 5);
        let h = smith_normal_form(&[vec![2, 0], vec![0, 3]]).unwrap();
        assert_eq!(h.torsion, vec![6]);
        assert_eq!(smith_normal_form(&[vec![1, 2], vec![2, 4]]), Err(LinalgError::Singular));
        assert_eq!(smith_normal_form(&[]).unwrap().torsion, Vec::<u64>::new());
    }

    #[test]
    fn linking_examples() {
        let g = GoeritzMatrix { g: vec![vec![3]], region_index: vec![1] };
        let l = linking_diagonal(&g).unwrap();
        assert_eq!((l.det, l.numerators.clone()), (3, vec![1]));
        let g = GoeritzMatrix { g: vec![vec![2, 1], vec![1, 3]], region_index: vec![1, 2] };
        let l = linking_diagonal(&g).unwrap();
        assert_eq!((l.det, l.numerators.clone()), (5, vec![3, 2]));
        assert_eq!(l.entry(0), Ratio::new(3, 5));
        let g = GoeritzMatrix { g: vec![vec![-3]], region_index: vec![1] };
        assert_eq!(linking_diagonal(&g).unwrap().numerators, vec![2]);
        let g = GoeritzMatrix { g: vec![vec![1, 1], vec![1, 1]], region_index: vec![1, 2] };
        assert_eq!(linking_diagonal(&g), Err(LinalgError::Singular));
    }

    #[test]
    fn inverse_matches_adjugate() {
        let m = vec![vec![2, 1, 0], vec![1, 3, -1], vec![0, -1, 4]];
        let det = determinant(&m).unwrap();
        let inv = inverse(&m).unwrap();
        let adj = adjugate(&m).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(inv[i][j] * Ratio::from_integer(det), Ratio::from_integer(adj[i][j]));
            }
        }
        assert_eq!(inverse(&[vec![1, 2], vec![2, 4]]), Err(LinalgError::Singular));
    }
}
