//! Sparse multivariate truncated power series over `ℚ(i)`.
//!
//! A series stores the jet of degree `≤ K` of some formal power series, or a
//! polynomial in full when its precision is [`Precision::Exact`]. Every
//! operation returns the true jet of the result at the smallest precision of
//! its inputs.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::coeff::Coeff;
use crate::context::{same_ctx, Ctx};
use crate::error::{Error, Result};

/// Exponent vector aligned with a [`crate::context::VariableContext`].
///
/// Ordered graded-lexicographically: total degree first, then lexicographic
/// on the exponents.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    deg: u32,
    exps: Vec<u16>,
}

impl Monomial {
    pub fn new(exps: Vec<u16>) -> Self {
        let deg = exps.iter().map(|&e| e as u32).sum();
        Monomial { deg, exps }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial {
            deg: 0,
            exps: vec![0; nvars],
        }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial { deg: 1, exps }
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn exp(&self, i: usize) -> u16 {
        self.exps[i]
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial {
            deg: self.deg + o.deg,
            exps: self.exps.iter().zip(&o.exps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.exps.iter().zip(&o.exps).all(|(a, b)| a <= b)
    }

    /// All monomials of total degree exactly `deg` in `nvars` variables,
    /// ascending in graded-lex order.
    pub fn all_of_degree(nvars: usize, deg: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = vec![0u16; nvars];
        fn rec(i: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
            let n = cur.len();
            if i + 1 == n {
                cur[i] = left as u16;
                out.push(Monomial::new(cur.clone()));
                cur[i] = 0;
                return;
            }
            for e in 0..=left {
                cur[i] = e as u16;
                rec(i + 1, left - e, cur, out);
            }
            cur[i] = 0;
        }
        if nvars == 0 {
            if deg == 0 {
                out.push(Monomial::one(0));
            }
            return out;
        }
        rec(0, deg, &mut cur, &mut out);
        out.sort();
        out
    }

    /// Renders as `z1^2*zb1`, or `1` for the unit monomial.
    pub fn render(&self, ctx: &Ctx) -> String {
        let parts: Vec<String> = self
            .exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    ctx.name(i).to_string()
                } else {
                    format!("{}^{}", ctx.name(i), e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.deg.cmp(&o.deg).then_with(|| self.exps.cmp(&o.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps)
    }
}

/// Highest retained degree, or a full polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Precision {
    Exact,
    UpTo(u32),
}

impl Precision {
    pub fn min(self, o: Precision) -> Precision {
        match (self, o) {
            (Precision::Exact, p) | (p, Precision::Exact) => p,
            (Precision::UpTo(a), Precision::UpTo(b)) => Precision::UpTo(a.min(b)),
        }
    }

    pub fn is_exact(self) -> bool {
        self == Precision::Exact
    }

    /// Whether a term of degree `deg` is retained.
    pub fn keeps(self, deg: u32) -> bool {
        match self {
            Precision::Exact => true,
            Precision::UpTo(k) => deg <= k,
        }
    }

    pub fn bound(self) -> Option<u32> {
        match self {
            Precision::Exact => None,
            Precision::UpTo(k) => Some(k),
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precision::Exact => write!(f, "exact"),
            Precision::UpTo(k) => write!(f, "O(deg {})", k + 1),
        }
    }
}

/// Truncated formal power series. Terms are sorted ascending and never zero.
#[derive(Clone)]
pub struct Series {
    ctx: Ctx,
    prec: Precision,
    terms: Vec<(Monomial, Coeff)>,
}

impl PartialEq for Series {
    fn eq(&self, o: &Self) -> bool {
        same_ctx(&self.ctx, &o.ctx) && self.prec == o.prec && self.terms == o.terms
    }
}

fn check_ctx(a: &Series, b: &Series) -> Result<()> {
    if same_ctx(&a.ctx, &b.ctx) {
        Ok(())
    } else {
        Err(Error::ContextMismatch)
    }
}

fn collect_terms(map: HashMap<Monomial, Coeff>) -> Vec<(Monomial, Coeff)> {
    let mut terms: Vec<_> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    terms.sort_by(|a, b| a.0.cmp(&b.0));
    terms
}

impl Series {
    pub fn zero(ctx: &Ctx, prec: Precision) -> Self {
        Series {
            ctx: ctx.clone(),
            prec,
            terms: Vec::new(),
        }
    }

    pub fn constant(ctx: &Ctx, c: Coeff, prec: Precision) -> Self {
        let mut s = Series::zero(ctx, prec);
        if !c.is_zero() {
            s.terms.push((Monomial::one(ctx.len()), c));
        }
        s
    }

    pub fn one(ctx: &Ctx) -> Self {
        Series::constant(ctx, Coeff::one(), Precision::Exact)
    }

    /// The coordinate function `x_i` (exact).
    pub fn var(ctx: &Ctx, i: usize) -> Self {
        Series {
            ctx: ctx.clone(),
            prec: Precision::Exact,
            terms: vec![(Monomial::var(ctx.len(), i), Coeff::one())],
        }
    }

    pub fn var_named(ctx: &Ctx, name: &str) -> Option<Self> {
        ctx.index_of(name).map(|i| Series::var(ctx, i))
    }

    /// Builds a series from arbitrary terms: merges duplicates, drops zeros and
    /// anything above the precision.
    pub fn from_terms<I>(ctx: &Ctx, prec: Precision, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Coeff)>,
    {
        let mut map: HashMap<Monomial, Coeff> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.nvars(), ctx.len(), "monomial arity differs from context");
            if prec.keeps(m.degree()) {
                *map.entry(m).or_insert_with(Coeff::zero) += &c;
            }
        }
        Series {
            ctx: ctx.clone(),
            prec,
            terms: collect_terms(map),
        }
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_exact()
    }

    pub fn terms(&self) -> &[(Monomial, Coeff)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// No retained terms. For a truncated series this only says the jet vanishes.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Valuation of the retained jet; `None` when no terms are stored.
    pub fn order(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    /// Highest degree among stored terms.
    pub fn max_degree(&self) -> Option<u32> {
        self.terms.last().map(|(m, _)| m.degree())
    }

    pub fn coeff(&self, m: &Monomial) -> Coeff {
        match self.terms.binary_search_by(|(t, _)| t.cmp(m)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Coeff::zero(),
        }
    }

    pub fn constant_term(&self) -> Coeff {
        match self.terms.first() {
            Some((m, c)) if m.degree() == 0 => c.clone(),
            _ => Coeff::zero(),
        }
    }

    /// Same series with precision lowered to `min(self, prec)`.
    pub fn truncate(&self, prec: Precision) -> Series {
        let p = self.prec.min(prec);
        Series {
            ctx: self.ctx.clone(),
            prec: p,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| p.keeps(m.degree()))
                .cloned()
                .collect(),
        }
    }

    /// Marks the series as a truncated jet (used when exactness cannot be
    /// vouched for).
    pub fn with_precision(&self, prec: Precision) -> Series {
        let mut s = self.truncate(prec);
        s.prec = prec;
        s
    }

    pub fn add(&self, o: &Series) -> Result<Series> {
        self.combine(o, false)
    }

    pub fn sub(&self, o: &Series) -> Result<Series> {
        self.combine(o, true)
    }

    fn combine(&self, o: &Series, negate: bool) -> Result<Series> {
        check_ctx(self, o)?;
        let prec = self.prec.min(o.prec);
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &o.terms;
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.retain(|(m, _)| prec.keeps(m.degree()));
        Ok(Series {
            ctx: self.ctx.clone(),
            prec,
            terms: out,
        })
    }

    pub fn neg(&self) -> Series {
        Series {
            ctx: self.ctx.clone(),
            prec: self.prec,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Coeff) -> Series {
        if c.is_zero() {
            return Series::zero(&self.ctx, self.prec);
        }
        Series {
            ctx: self.ctx.clone(),
            prec: self.prec,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul(&self, o: &Series) -> Result<Series> {
        check_ctx(self, o)?;
        Ok(self.mul_within(o, None))
    }

    /// Product with an additional degree cap `limit` (terms above it are not
    /// computed). The precision of the result is not lowered by `limit`; the
    /// caller is responsible for knowing that dropped terms do not matter.
    fn mul_within(&self, o: &Series, limit: Option<u32>) -> Series {
        let prec = self.prec.min(o.prec);
        let cap = match (prec.bound(), limit) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let mut map: HashMap<Monomial, Coeff> =
            HashMap::with_capacity(self.terms.len() * o.terms.len().min(64));
        for (ma, ca) in &self.terms {
            if let Some(c) = cap {
                if ma.degree() > c {
                    break;
                }
            }
            for (mb, cb) in &o.terms {
                if let Some(c) = cap {
                    if ma.degree() + mb.degree() > c {
                        break;
                    }
                }
                let prod = ca * cb;
                match map.entry(ma.mul(mb)) {
                    std::collections::hash_map::Entry::Occupied(mut e) => {
                        *e.get_mut() += &prod;
                    }
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(prod);
                    }
                }
            }
        }
        Series {
            ctx: self.ctx.clone(),
            prec,
            terms: collect_terms(map),
        }
    }

    pub fn pow(&self, e: u32) -> Series {
        let mut acc = Series::one(&self.ctx);
        for _ in 0..e {
            acc = acc.mul_within(self, None);
        }
        acc
    }

    /// Coefficientwise complex conjugation (the bar operation).
    pub fn conj(&self) -> Series {
        Series {
            ctx: self.ctx.clone(),
            prec: self.prec,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.conj()))
                .collect(),
        }
    }

    /// `∂/∂x_var`. A jet known through degree `K` has a derivative known
    /// through degree `K - 1`, and the precision is lowered accordingly.
    pub fn diff(&self, var: usize) -> Series {
        let prec = match self.prec {
            Precision::Exact => Precision::Exact,
            Precision::UpTo(k) => Precision::UpTo(k.saturating_sub(1)),
        };
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exp(var) > 0)
            .map(|(m, c)| {
                let e = m.exp(var);
                let mut exps = m.exps.clone();
                exps[var] -= 1;
                (Monomial::new(exps), c * &Coeff::from_int(e as i64))
            })
            .filter(|(m, _)| prec.keeps(m.degree()));
        Series::from_terms(&self.ctx, prec, terms)
    }

    /// Moves the series into `target`, sending variable `i` to `target`
    /// variable `mapping[i]`. Pure relabelling, no arithmetic.
    pub fn relabel(&self, target: &Ctx, mapping: &[usize]) -> Series {
        assert_eq!(mapping.len(), self.ctx.len());
        let terms = self.terms.iter().map(|(m, c)| {
            let mut exps = vec![0u16; target.len()];
            for (i, &e) in m.exps.iter().enumerate() {
                exps[mapping[i]] += e;
            }
            (Monomial::new(exps), c.clone())
        });
        Series::from_terms(target, self.prec, terms)
    }

    /// Relabels by variable name: every variable of `self` must exist in `target`.
    pub fn embed(&self, target: &Ctx) -> Result<Series> {
        let mapping = self
            .ctx
            .names()
            .iter()
            .map(|n| target.index_of(n).ok_or(Error::ContextMismatch))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.relabel(target, &mapping))
    }

    /// Formal composition `f(σ_1, …, σ_m)` where `subs[i]` replaces variable
    /// `i` of `self`. All substitutions share one target context and must have
    /// zero constant term.
    pub fn compose(&self, subs: &[Series]) -> Result<Series> {
        if subs.len() != self.ctx.len() {
            return Err(Error::Shape(format!(
                "composition needs {} substitutions, got {}",
                self.ctx.len(),
                subs.len()
            )));
        }
        let target = match subs.first() {
            Some(s) => s.ctx.clone(),
            None => {
                return Err(Error::Shape(
                    "composition of a series in zero variables needs an explicit target".into(),
                ))
            }
        };
        self.compose_into(&target, subs)
    }

    /// Like [`Series::compose`] but with an explicit target context, which also
    /// covers series in zero variables.
    pub fn compose_into(&self, target: &Ctx, subs: &[Series]) -> Result<Series> {
        if subs.len() != self.ctx.len() {
            return Err(Error::Shape(format!(
                "composition needs {} substitutions, got {}",
                self.ctx.len(),
                subs.len()
            )));
        }
        for (i, s) in subs.iter().enumerate() {
            if !same_ctx(&s.ctx, target) {
                return Err(Error::ContextMismatch);
            }
            if !s.constant_term().is_zero() {
                return Err(Error::NonZeroConstantTerm {
                    variable: self.ctx.name(i).to_string(),
                });
            }
        }
        let prec = subs.iter().fold(self.prec, |p, s| p.min(s.prec));
        let cap = prec.bound();
        // Orders of the substitutions; a zero series kills every term using it.
        let ords: Vec<Option<u32>> = subs.iter().map(|s| s.order()).collect();

        let mut powers: Vec<Vec<Series>> = subs
            .iter()
            .map(|s| vec![Series::one(target).truncate(prec), s.truncate(prec)])
            .collect();

        let mut terms: Vec<&(Monomial, Coeff)> = self.terms.iter().collect();
        terms.sort_by(|a, b| a.0.exps.cmp(&b.0.exps));

        let nv = self.ctx.len();
        let mut acc = Series::zero(target, prec);
        let mut acc_map: HashMap<Monomial, Coeff> = HashMap::new();
        // partial[j] = product of powers of variables 0..j for the current prefix.
        let mut partial: Vec<Option<Series>> = vec![None; nv + 1];
        partial[0] = Some(Series::one(target).truncate(prec));
        let mut prev: Option<&[u16]> = None;

        'terms: for (m, c) in terms {
            // Minimal achievable order of this term after substitution.
            let mut min_ord: u32 = 0;
            for (i, &e) in m.exps.iter().enumerate() {
                if e > 0 {
                    match ords[i] {
                        None => continue 'terms,
                        Some(o) => min_ord += o * e as u32,
                    }
                }
            }
            if let Some(k) = cap {
                if min_ord > k {
                    continue;
                }
            }
            let start = match prev {
                Some(p) => p.iter().zip(&m.exps).take_while(|(a, b)| a == b).count(),
                None => 0,
            };
            for j in start..nv {
                let e = m.exps[j] as usize;
                let base = partial[j].as_ref().expect("prefix product present");
                let next = if e == 0 {
                    base.clone()
                } else {
                    while powers[j].len() <= e {
                        let last = powers[j].last().unwrap().clone();
                        let p = last.mul_within(&subs[j], cap);
                        powers[j].push(p);
                    }
                    base.mul_within(&powers[j][e], cap)
                };
                partial[j + 1] = Some(next);
            }
            prev = Some(&m.exps);
            let prod = partial[nv].as_ref().unwrap();
            for (pm, pc) in &prod.terms {
                if prec.keeps(pm.degree()) {
                    let v = pc * c;
                    *acc_map.entry(pm.clone()).or_insert_with(Coeff::zero) += &v;
                }
            }
        }
        acc.terms = collect_terms(acc_map);
        Ok(acc)
    }

    /// `1/f` through degree `order` (or through the precision of `f`, if lower).
    /// Division by a nonzero constant stays exact.
    pub fn invert_unit(&self, order: u32) -> Result<Series> {
        let c0 = self.constant_term();
        let c0_inv = c0.inv().ok_or(Error::NotAUnit)?;
        if self.terms.len() == 1 {
            return Ok(Series::constant(&self.ctx, c0_inv, self.prec));
        }
        let prec = self.prec.min(Precision::UpTo(order));
        let k = prec.bound().unwrap();
        // f = c0 (1 + g); 1/f = c0^{-1} Σ (-g)^j.
        let g = self.scale(&c0_inv).sub(&Series::one(&self.ctx))?.truncate(prec);
        let minus_g = g.neg();
        let mut term = Series::one(&self.ctx).truncate(prec);
        let mut sum = term.clone();
        let ord = g.order().unwrap_or(k + 1).max(1);
        let mut j = 1;
        while j * ord <= k {
            term = term.mul_within(&minus_g, Some(k));
            sum = sum.add(&term)?;
            j += 1;
        }
        Ok(sum.scale(&c0_inv).with_precision(prec))
    }

    /// Evaluates the retained jet (as a polynomial) at a point.
    pub fn eval(&self, point: &[Coeff]) -> Coeff {
        assert_eq!(point.len(), self.ctx.len());
        let mut acc = Coeff::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.exps.iter().enumerate() {
                if e > 0 {
                    v = &v * &point[i].pow(e as u32);
                }
            }
            acc += &v;
        }
        acc
    }

    /// Sets the listed variables to zero (exact restriction).
    pub fn set_zero(&self, vars: &[usize]) -> Series {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| vars.iter().all(|&v| m.exp(v) == 0))
            .cloned();
        Series::from_terms(&self.ctx, self.prec, terms)
    }

    /// First retained nonzero term, as a printable witness.
    pub fn witness(&self) -> Option<String> {
        self.terms
            .first()
            .map(|t| Series::from_terms(&self.ctx, Precision::Exact, [t.clone()]).to_string())
    }

    /// All coefficients of `self` (as a polynomial in the `split` variables)
    /// grouped by the exponent of those variables: returns pairs
    /// `(exponent of split vars, coefficient series in the remaining vars)`.
    pub fn split_by(&self, split: &[usize], rest_ctx: &Ctx, rest: &[usize]) -> Vec<(Vec<u16>, Series)> {
        let mut groups: std::collections::BTreeMap<Vec<u16>, Vec<(Monomial, Coeff)>> =
            Default::default();
        for (m, c) in &self.terms {
            let key: Vec<u16> = split.iter().map(|&i| m.exp(i)).collect();
            let exps: Vec<u16> = rest.iter().map(|&i| m.exp(i)).collect();
            groups
                .entry(key)
                .or_default()
                .push((Monomial::new(exps), c.clone()));
        }
        groups
            .into_iter()
            .map(|(k, ts)| {
                let deg: u32 = k.iter().map(|&e| e as u32).sum();
                let prec = match self.prec {
                    Precision::Exact => Precision::Exact,
                    Precision::UpTo(kk) => Precision::UpTo(kk - deg),
                };
                (k, Series::from_terms(rest_ctx, prec, ts))
            })
            .collect()
    }
}

/// Prints the retained terms in the scenario expression syntax, ascending
/// graded-lex order. The zero series prints as `0`.
impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let mut cs = c.to_string();
            let negative = cs.starts_with('-');
            if negative {
                cs = (-c).to_string();
            }
            match (idx, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.degree() == 0 {
                write!(f, "{cs}")?;
            } else if cs == "1" {
                write!(f, "{}", m.render(&self.ctx))?;
            } else {
                write!(f, "{}*{}", cs, m.render(&self.ctx))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self, self.prec)
    }
}

/// Compares retained terms up to the common precision, ignoring the
/// precision markers themselves.
pub fn agree(a: &Series, b: &Series) -> bool {
    match a.sub(b) {
        Ok(d) => d.is_zero(),
        Err(_) => false,
    }
}

/// The identity substitution of `ctx`.
pub fn identity_subs(ctx: &Ctx) -> Vec<Series> {
    (0..ctx.len()).map(|i| Series::var(ctx, i)).collect()
}

/// Inverts a square system `y = F(u, p)` in the variables `vars` (the other
/// variables `p` are parameters), returning `G` with `F(G(y, p), p) = y` through
/// degree `order`. `G[j]` expresses `u_{vars[j]}`, written in the same slots.
pub fn reverse(f: &[Series], vars: &[usize], order: u32) -> Result<Vec<Series>> {
    let m = vars.len();
    if f.len() != m {
        return Err(Error::Shape(format!(
            "reversion needs a square system, got {} series in {} variables",
            f.len(),
            m
        )));
    }
    if m == 0 {
        return Ok(Vec::new());
    }
    let ctx = f[0].ctx.clone();
    for s in f {
        if !same_ctx(&s.ctx, &ctx) {
            return Err(Error::ContextMismatch);
        }
        if !s.constant_term().is_zero() {
            return Err(Error::Precondition(
                "reversion needs F(0) = 0".into(),
            ));
        }
    }
    let prec = f
        .iter()
        .fold(Precision::UpTo(order), |p, s| p.min(s.precision()));
    let k = prec.bound().unwrap();
    let nv = ctx.len();
    let lin: Vec<Vec<Coeff>> = f
        .iter()
        .map(|s| vars.iter().map(|&v| s.coeff(&Monomial::var(nv, v))).collect())
        .collect();
    let inv = crate::linalg::inverse(&lin).ok_or_else(|| Error::SingularLinearPart {
        rank: crate::linalg::rank(&lin),
        expected: m,
        hint: String::new(),
    })?;
    let lin_series = |row: &[Coeff]| -> Series {
        Series::from_terms(
            &ctx,
            Precision::Exact,
            vars.iter()
                .zip(row)
                .map(|(&v, c)| (Monomial::var(nv, v), c.clone())),
        )
    };
    // Nonlinear part N = F - L u.
    let nonlinear: Vec<Series> = f
        .iter()
        .zip(&lin)
        .map(|(s, row)| s.sub(&lin_series(row)))
        .collect::<Result<_>>()?;
    let y: Vec<Series> = vars.iter().map(|&v| Series::var(&ctx, v)).collect();
    let apply_inv = |vecs: &[Series]| -> Result<Vec<Series>> {
        inv.iter()
            .map(|row| {
                let mut acc = Series::zero(&ctx, prec);
                for (c, s) in row.iter().zip(vecs) {
                    acc = acc.add(&s.scale(c))?;
                }
                Ok(acc)
            })
            .collect()
    };
    let mut g = apply_inv(&y)?;
    for _ in 0..k {
        let mut subs = identity_subs(&ctx);
        for (j, &v) in vars.iter().enumerate() {
            subs[v] = g[j].clone();
        }
        let rhs: Vec<Series> = nonlinear
            .iter()
            .zip(&y)
            .map(|(nl, yy)| yy.sub(&nl.compose(&subs)?))
            .collect::<Result<_>>()?;
        let next = apply_inv(&rhs)?;
        let done = next.iter().zip(&g).all(|(a, b)| agree(a, b));
        g = next;
        if done {
            break;
        }
    }
    let g: Vec<Series> = g.into_iter().map(|s| s.with_precision(prec)).collect();
    // Back-substitution check.
    let mut subs = identity_subs(&ctx);
    for (j, &v) in vars.iter().enumerate() {
        subs[v] = g[j].clone();
    }
    for (s, yy) in f.iter().zip(&y) {
        if !agree(&s.compose(&subs)?, yy) {
            return Err(Error::Internal("reversion did not converge".into()));
        }
    }
    Ok(g)
}
