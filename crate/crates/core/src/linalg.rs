//! Exact dense and sparse linear algebra over `ℚ(i)`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::coeff::Coeff;

pub type Mat = Vec<Vec<Coeff>>;

fn cols(m: &Mat) -> usize {
    m.first().map_or(0, |r| r.len())
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut Mat) -> Vec<usize> {
    let rows = m.len();
    let nc = cols(m);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..nc {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().unwrap();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..nc {
                    if !m[r][j].is_zero() {
                        let t = &f * &m[r][j];
                        m[i][j] -= &t;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Mat) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

pub fn det(m: &Mat) -> Coeff {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "determinant of a non-square matrix");
    let mut a = m.clone();
    let mut d = Coeff::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Coeff::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d = &d * &a[c][c];
        let inv = a[c][c].inv().unwrap();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= &t;
            }
        }
    }
    d
}

/// `C` with row `i` replaced by `y`.
pub fn row_replaced(c: &Mat, i: usize, y: &[Coeff]) -> Mat {
    let mut m = c.clone();
    m[i] = y.to_vec();
    m
}

/// `det(C + x yᵗ)` through the row expansion `det C + Σ x_i det C_i(y)`.
pub fn det_rank_one_update(c: &Mat, x: &[Coeff], y: &[Coeff]) -> Coeff {
    assert!(x.len() == c.len() && y.len() == c.len(), "vector length differs from matrix size");
    let mut d = det(c);
    for (i, xi) in x.iter().enumerate() {
        if !xi.is_zero() {
            d += &(xi * &det(&row_replaced(c, i, y)));
        }
    }
    d
}

pub fn inverse(m: &Mat) -> Option<Mat> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return None;
    }
    let mut aug: Mat = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Coeff::one() } else { Coeff::zero() }));
            row
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() < n || piv[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let inner = b.len();
    let nc = cols(b);
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner);
            (0..nc)
                .map(|j| {
                    let mut s = Coeff::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            s += &(&row[k] * &b[k][j]);
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

/// Basis of the right kernel `{x : m x = 0}`.
pub fn kernel(m: &Mat, ncols: usize) -> Vec<Vec<Coeff>> {
    let mut a = m.clone();
    let piv = rref(&mut a);
    let free: Vec<usize> = (0..ncols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Coeff::zero(); ncols];
            v[f] = Coeff::one();
            for (r, &p) in piv.iter().enumerate() {
                v[p] = -&a[r][f];
            }
            v
        })
        .collect()
}

pub type SparseRow = Vec<(usize, Coeff)>;

/// Incremental echelon basis of sparse rows. The pivot of a row is its
/// smallest column, so with columns sorted by ascending degree the pivot is
/// the lowest-degree term (the local ordering).
#[derive(Default, Clone)]
pub struct Echelon {
    pivots: BTreeMap<usize, SparseRow>,
}

fn axpy(row: &SparseRow, f: &Coeff, other: &SparseRow) -> SparseRow {
    // row - f * other
    let mut out = Vec::with_capacity(row.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < other.len() {
        let ci = row.get(i).map(|x| x.0);
        let cj = other.get(j).map(|x| x.0);
        match (ci, cj) {
            (Some(a), Some(b)) if a == b => {
                let v = &row[i].1 - &(f * &other[j].1);
                if !v.is_zero() {
                    out.push((a, v));
                }
                i += 1;
                j += 1;
            }
            (Some(a), Some(b)) if a < b => {
                out.push(row[i].clone());
                i += 1;
            }
            (Some(_), None) => {
                out.push(row[i].clone());
                i += 1;
            }
            (_, Some(b)) => {
                out.push((b, -&(f * &other[j].1)));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots.contains_key(&col)
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseRow> + '_ {
        self.pivots.values()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Reduces `row` against the basis; returns the new pivot column if the
    /// row was independent.
    pub fn insert(&mut self, mut row: SparseRow) -> Option<usize> {
        row.sort_by_key(|x| x.0);
        row.retain(|x| !x.1.is_zero());
        loop {
            let (c, lead) = match row.first() {
                None => return None,
                Some((c, v)) => (*c, v.clone()),
            };
            match self.pivots.get(&c) {
                Some(p) => row = axpy(&row, &lead, p),
                None => {
                    let inv = lead.inv().unwrap();
                    let row: SparseRow = row.into_iter().map(|(k, v)| (k, &v * &inv)).collect();
                    self.pivots.insert(c, row);
                    return Some(c);
                }
            }
        }
    }
}
