//! Rectangular arrays of series sharing one context.

use std::collections::HashMap;

use crate::coeff::Coeff;
use crate::context::{same_ctx, Ctx};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::series::{Monomial, Precision, Series};

/// Largest size handled by cofactor expansion.
pub const COFACTOR_LIMIT: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesMatrix {
    rows: usize,
    cols: usize,
    ctx: Ctx,
    entries: Vec<Series>,
}

impl SeriesMatrix {
    pub fn new(ctx: &Ctx, rows: usize, cols: usize, entries: Vec<Series>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|e| !same_ctx(e.ctx(), ctx)) {
            return Err(Error::ContextMismatch);
        }
        Ok(SeriesMatrix {
            rows,
            cols,
            ctx: ctx.clone(),
            entries,
        })
    }

    pub fn from_rows(ctx: &Ctx, rows: Vec<Vec<Series>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Self::new(ctx, r, c, rows.into_iter().flatten().collect())
    }

    /// `∂f_i/∂x_{vars[j]}`.
    pub fn jacobian(f: &[Series], vars: &[usize]) -> Result<Self> {
        let ctx = f
            .first()
            .map(|s| s.ctx().clone())
            .ok_or_else(|| Error::Shape("jacobian of an empty system".into()))?;
        let entries = f
            .iter()
            .flat_map(|s| vars.iter().map(move |&v| s.diff(v)))
            .collect();
        Self::new(&ctx, f.len(), vars.len(), entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn get(&self, i: usize, j: usize) -> &Series {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[Series] {
        &self.entries
    }

    pub fn is_exact(&self) -> bool {
        self.entries.iter().all(|e| e.is_exact())
    }

    pub fn precision(&self) -> Precision {
        self.entries
            .iter()
            .fold(Precision::Exact, |p, e| p.min(e.precision()))
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> SeriesMatrix {
        let entries = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| self.get(i, j).clone()))
            .collect();
        SeriesMatrix {
            rows: rows.len(),
            cols: cols.len(),
            ctx: self.ctx.clone(),
            entries,
        }
    }

    pub fn map(&self, f: impl Fn(&Series) -> Series) -> SeriesMatrix {
        SeriesMatrix {
            rows: self.rows,
            cols: self.cols,
            ctx: self.ctx.clone(),
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// Constant terms.
    pub fn at_origin(&self) -> Mat {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).constant_term()).collect())
            .collect()
    }

    /// Evaluates the retained polynomial entries at `point`.
    pub fn eval(&self, point: &[Coeff]) -> Mat {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).eval(point)).collect())
            .collect()
    }

    /// Determinant by cofactor expansion along the first row, memoizing minors
    /// by their column set.
    pub fn determinant(&self) -> Result<Series> {
        if self.rows != self.cols {
            return Err(Error::Shape(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        if self.rows > COFACTOR_LIMIT {
            return Err(Error::Shape(format!(
                "determinant size {} exceeds the cofactor limit {COFACTOR_LIMIT}",
                self.rows
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Series::one(&self.ctx));
        }
        let mut memo: HashMap<u32, Series> = HashMap::new();
        self.minor_rec(0, (1u32 << n) - 1, &mut memo)
    }

    fn minor_rec(&self, row: usize, colmask: u32, memo: &mut HashMap<u32, Series>) -> Result<Series> {
        if let Some(s) = memo.get(&colmask) {
            return Ok(s.clone());
        }
        let out = if colmask.count_ones() == 1 {
            self.get(row, colmask.trailing_zeros() as usize).clone()
        } else {
            let prec = self.precision();
            let mut acc = Series::zero(&self.ctx, prec);
            let mut sign = true;
            for j in 0..self.cols {
                if colmask & (1 << j) == 0 {
                    continue;
                }
                let e = self.get(row, j);
                if !e.is_zero() {
                    let sub = self.minor_rec(row + 1, colmask & !(1 << j), memo)?;
                    let t = e.mul(&sub)?;
                    acc = if sign { acc.add(&t)? } else { acc.sub(&t)? };
                }
                sign = !sign;
            }
            acc
        };
        memo.insert(colmask, out.clone());
        Ok(out)
    }
}

/// Replaces variable `var` in every entry by zero.
pub fn restrict_zero(m: &SeriesMatrix, vars: &[usize]) -> SeriesMatrix {
    m.map(|s| s.set_zero(vars))
}

/// Leading (lowest-order) nonzero term of a determinant, for reporting.
pub fn leading_term(s: &Series) -> Option<(Monomial, Coeff)> {
    s.terms().first().cloned()
}
