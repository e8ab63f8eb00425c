//! Computations in the local ring `C[[x]]` at the origin.

use std::collections::HashMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coeff::Coeff;
use crate::context::{same_ctx, Ctx};
use crate::error::{Error, Result};
use crate::linalg::{self, Echelon, SparseRow};
use crate::matrix::SeriesMatrix;
use crate::series::{Monomial, Precision, Series};
use crate::verdict::Verdict;

pub const DEFAULT_CUTOFF: u32 = 12;
pub const DEFAULT_BOUND: i64 = 7;
pub const DEFAULT_TRIALS: usize = 4;

/// Generators of an ideal of `C[[x]]`, each vanishing at the origin.
#[derive(Clone, Debug)]
pub struct IdealPresentation {
    ctx: Ctx,
    generators: Vec<Series>,
}

impl IdealPresentation {
    pub fn new(ctx: &Ctx, generators: Vec<Series>) -> Result<Self> {
        for g in &generators {
            if !same_ctx(g.ctx(), ctx) {
                return Err(Error::ContextMismatch);
            }
            if !g.constant_term().is_zero() {
                return Err(Error::Precondition(format!(
                    "ideal generator {g} does not vanish at the origin"
                )));
            }
        }
        Ok(IdealPresentation {
            ctx: ctx.clone(),
            generators,
        })
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn generators(&self) -> &[Series] {
        &self.generators
    }

    pub fn is_exact(&self) -> bool {
        self.generators.iter().all(|g| g.is_exact())
    }

    /// Smallest truncation order among the generators (`None` if all exact).
    pub fn truncation(&self) -> Option<u32> {
        self.generators
            .iter()
            .filter_map(|g| g.precision().bound())
            .min()
    }

    pub fn with_extra(&self, extra: Vec<Series>) -> Result<Self> {
        let mut g = self.generators.clone();
        g.extend(extra);
        Self::new(&self.ctx, g)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CodimKind {
    Finite,
    NotFiniteUpTo,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CodimensionResult {
    pub kind: CodimKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate_degree: Option<u32>,
    pub cutoff_used: u32,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub standard_monomials: Vec<String>,
    /// False when truncated generators left some jet rows unknown; the
    /// dimension is then an upper bound.
    pub exact: bool,
    /// Proof that the codimension is infinite, when one was found.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub infinite_witness: Option<String>,
    #[serde(skip)]
    pub basis: Vec<Monomial>,
}

impl CodimensionResult {
    pub fn is_finite(&self) -> bool {
        self.kind == CodimKind::Finite
    }

    /// Finite and exact.
    pub fn exact_value(&self) -> Option<usize> {
        if self.exact {
            self.dimension
        } else {
            None
        }
    }

    pub fn certified_infinite(&self) -> bool {
        self.infinite_witness.is_some()
    }

    pub fn summary(&self) -> String {
        match (self.kind, self.dimension) {
            (CodimKind::Finite, Some(d)) if self.exact => {
                format!("{d} (certified at degree {})", self.certificate_degree.unwrap())
            }
            (CodimKind::Finite, Some(d)) => format!("at most {d}"),
            _ => match &self.infinite_witness {
                Some(w) => format!("infinite ({w})"),
                None => format!("not finite up to cutoff {}", self.cutoff_used),
            },
        }
    }
}

fn known_degree(g: &Series) -> Option<u32> {
    g.precision().bound()
}

/// Monomials of degree `≤ deg`, ascending, with their column index.
fn columns(nv: usize, deg: u32) -> (Vec<Monomial>, HashMap<Monomial, usize>) {
    let mut cols = Vec::new();
    for k in 0..=deg {
        cols.extend(Monomial::all_of_degree(nv, k));
    }
    let index = cols.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    (cols, index)
}

/// `mono · g` restricted to degrees `≤ top`, as a sparse row.
fn product_row(mono: &Monomial, g: &Series, top: u32, index: &HashMap<Monomial, usize>) -> SparseRow {
    g.terms()
        .iter()
        .filter(|(m, _)| m.degree() + mono.degree() <= top)
        .map(|(m, c)| (index[&m.mul(mono)], c.clone()))
        .collect()
}

/// A reason the quotient is infinite-dimensional, if one is visible.
pub fn infinite_witness(ideal: &IdealPresentation) -> Option<String> {
    let nv = ideal.ctx.len();
    let gens: Vec<&Series> = ideal.generators.iter().filter(|g| !g.is_zero() || !g.is_exact()).collect();
    if gens.len() < nv {
        return Some(format!(
            "{} nonzero generators for {} variables",
            gens.len(),
            nv
        ));
    }
    if !ideal.is_exact() {
        return None;
    }
    for j in 0..nv {
        let others: Vec<usize> = (0..nv).filter(|&i| i != j).collect();
        if ideal.generators.iter().all(|g| g.set_zero(&others).is_zero()) {
            return Some(format!("all generators vanish on the {} axis", ideal.ctx.name(j)));
        }
    }
    None
}

/// `dim_C C[[x]]/I` by the Nakayama certificate, refusing to run when the
/// generator jets are shorter than the cutoff.
pub fn codimension(ideal: &IdealPresentation, cutoff: u32) -> Result<CodimensionResult> {
    if let Some(k) = ideal.truncation() {
        if k < cutoff {
            return Err(Error::TruncationTooSmall {
                required: cutoff,
                available: k,
            });
        }
    }
    Ok(codimension_within(ideal, cutoff))
}

/// Like [`codimension`] but runs with whatever jets are available: rows of the
/// jet matrix that the truncation does not determine are left out, so a
/// certificate stays sound and the dimension becomes an upper bound
/// (`exact = false`) when rows were dropped.
pub fn codimension_within(ideal: &IdealPresentation, cutoff: u32) -> CodimensionResult {
    let nv = ideal.ctx.len();
    let not_finite = |witness: Option<String>| CodimensionResult {
        kind: CodimKind::NotFiniteUpTo,
        dimension: None,
        certificate_degree: None,
        cutoff_used: cutoff,
        standard_monomials: Vec::new(),
        exact: witness.is_some(),
        infinite_witness: witness,
        basis: Vec::new(),
    };
    if let Some(w) = infinite_witness(ideal) {
        return not_finite(Some(w));
    }
    for d in 1..=cutoff.max(1) {
        let (cols, index) = columns(nv, d);
        let mut full = Echelon::new();
        let mut partial_rows: Vec<SparseRow> = Vec::new();
        let mut exact = true;
        for g in &ideal.generators {
            let Some(ord) = g.order() else {
                if let Some(k) = known_degree(g) {
                    if k + 1 < d {
                        exact = false;
                    }
                }
                continue;
            };
            if ord > d {
                continue;
            }
            let kg = known_degree(g);
            if let Some(k) = kg {
                if k + 1 < d {
                    exact = false;
                }
            }
            for md in 0..=(d - ord) {
                for mono in Monomial::all_of_degree(nv, md) {
                    match kg {
                        Some(k) if md + k < d => {
                            if md + k + 1 >= d {
                                partial_rows.push(product_row(&mono, g, d - 1, &index));
                            }
                        }
                        _ => {
                            full.insert(product_row(&mono, g, d, &index));
                        }
                    }
                }
            }
        }
        let first_top = cols.iter().position(|m| m.degree() == d).unwrap_or(cols.len());
        if !(first_top..cols.len()).all(|c| full.is_pivot(c)) {
            continue;
        }
        // m^d ⊆ I. Count what survives below degree d.
        let mut low = Echelon::new();
        for row in full_rows_below(&full, first_top) {
            low.insert(row);
        }
        for row in partial_rows {
            low.insert(row.into_iter().filter(|(c, _)| *c < first_top).collect());
        }
        let basis: Vec<Monomial> = (0..first_top)
            .filter(|&c| !low.is_pivot(c))
            .map(|c| cols[c].clone())
            .collect();
        return CodimensionResult {
            kind: CodimKind::Finite,
            dimension: Some(basis.len()),
            certificate_degree: Some(d),
            cutoff_used: cutoff,
            standard_monomials: basis.iter().map(|m| m.render(&ideal.ctx)).collect(),
            exact,
            infinite_witness: None,
            basis,
        };
    }
    not_finite(None)
}

fn full_rows_below(e: &Echelon, top: usize) -> Vec<SparseRow> {
    e.rows()
        .map(|r| r.iter().filter(|(c, _)| *c < top).cloned().collect())
        .collect()
}

/// Settings for random evaluation.
#[derive(Clone, Copy, Debug)]
pub struct RankPolicy {
    pub trials: usize,
    pub bound: i64,
    pub seed: u64,
}

impl Default for RankPolicy {
    fn default() -> Self {
        RankPolicy {
            trials: DEFAULT_TRIALS,
            bound: DEFAULT_BOUND,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RankResult {
    pub rank_lower_bound: usize,
    pub full_rank: Verdict,
}

pub fn random_point(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Vec<Coeff> {
    (0..n)
        .map(|_| {
            // Coordinate hyperplanes are common zero sets, so avoid them.
            let num = match rng.gen_range(1..=bound.max(1)) {
                v if rng.gen_bool(0.5) => -v,
                v => v,
            };
            let den = rng.gen_range(1..=bound.max(1));
            Coeff::from_frac(num, den)
        })
        .collect()
}

/// Rank over `Q(i)` after evaluating the entries at seeded random points; the
/// maximum over `policy.trials` points.
pub fn rank_by_evaluation(a: &SeriesMatrix, policy: &RankPolicy) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
    let nv = a.ctx().len();
    let mut best = 0;
    for _ in 0..policy.trials.max(1) {
        let p = random_point(&mut rng, nv, policy.bound);
        best = best.max(linalg::rank(&a.eval(&p)));
    }
    best
}

/// Index subsets of size `k` of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// First `k×k` minor whose retained jet is nonzero.
pub fn nonzero_minor(a: &SeriesMatrix, k: usize) -> Option<(Vec<usize>, Vec<usize>, Series)> {
    if k == 0 {
        return Some((vec![], vec![], Series::one(a.ctx())));
    }
    for rows in combinations(a.rows(), k) {
        for cols in combinations(a.cols(), k) {
            let det = a
                .submatrix(&rows, &cols)
                .determinant()
                .expect("square submatrix within the cofactor limit");
            if !det.is_zero() {
                return Some((rows, cols, det));
            }
        }
    }
    None
}

/// Largest `k` with a nonzero `k×k` minor jet.
pub fn rank_by_minors(a: &SeriesMatrix) -> usize {
    let mut r = 0;
    for k in 1..=a.rows().min(a.cols()) {
        if nonzero_minor(a, k).is_some() {
            r = k;
        } else {
            break;
        }
    }
    r
}

/// Certifies whether the generic rank of `a` reaches `target`.
///
/// Evaluation at random points is used as a certificate only when every entry
/// is exact: the determinant of truncated jets is not the jet of the
/// determinant, so for truncated entries the symbolic minor jets decide.
pub fn generic_rank(a: &SeriesMatrix, target: usize, policy: &RankPolicy) -> RankResult {
    let exact = a.is_exact();
    if exact {
        let r = rank_by_evaluation(a, policy);
        if r >= target {
            return RankResult {
                rank_lower_bound: r,
                full_rank: Verdict::yes(format!("rank {r} at a random rational point"))
                    .with_seed(policy.seed),
            };
        }
    }
    if target > a.rows().min(a.cols()) {
        let lb = rank_by_minors(a);
        return RankResult {
            rank_lower_bound: lb,
            full_rank: Verdict::no(format!(
                "a {}x{} matrix cannot have rank {target}",
                a.rows(),
                a.cols()
            )),
        };
    }
    if let Some((rows, cols, det)) = nonzero_minor(a, target) {
        return RankResult {
            rank_lower_bound: target,
            full_rank: Verdict::yes(format!(
                "minor rows {rows:?} cols {cols:?} has leading term {}",
                det.witness().unwrap()
            )),
        };
    }
    let lb = (0..target).rev().find(|&k| nonzero_minor(a, k).is_some()).unwrap_or(0);
    let verdict = if exact {
        Verdict::no(format!("all {target}x{target} minors vanish identically"))
    } else {
        Verdict::unknown(format!(
            "all {target}x{target} minors vanish through degree {}",
            a.precision().bound().unwrap_or(0)
        ))
    };
    RankResult {
        rank_lower_bound: lb,
        full_rank: verdict,
    }
}

fn random_linear_forms(ctx: &Ctx, count: usize, bound: i64, rng: &mut ChaCha8Rng) -> Vec<Series> {
    let nv = ctx.len();
    (0..count)
        .map(|_| {
            let terms: Vec<(Monomial, Coeff)> = (0..nv)
                .map(|i| (Monomial::var(nv, i), Coeff::from_int(rng.gen_range(-bound..=bound))))
                .collect();
            Series::from_terms(ctx, Precision::Exact, terms)
        })
        .collect()
}

/// Tests whether the Krull dimension of `C[[x]]/I` equals `expected` by
/// generic linear sections.
pub fn local_dimension_is(
    ideal: &IdealPresentation,
    expected: usize,
    trials: usize,
    seed: u64,
    cutoff: u32,
) -> Result<Verdict> {
    let nv = ideal.ctx.len();
    if expected > nv {
        return Err(Error::Precondition(format!(
            "expected dimension {expected} exceeds the {nv} variables"
        )));
    }
    let nonzero = ideal
        .generators
        .iter()
        .filter(|g| !(g.is_zero() && g.is_exact()))
        .count();
    if nv.saturating_sub(nonzero) > expected {
        return Ok(Verdict::no(format!(
            "{nonzero} nonzero generators for {nv} variables leave dimension at least {}",
            nv - nonzero
        )));
    }
    if expected == 0 {
        let r = codimension_within(ideal, cutoff);
        return Ok(if r.is_finite() {
            Verdict::yes(format!("finite codimension {}", r.summary()))
        } else if r.certified_infinite() {
            Verdict::no(r.summary())
        } else {
            Verdict::unknown(r.summary())
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut finite_with_e = false;
    let mut infinite_with_e = false;
    for t in 0..trials.max(1) {
        let forms = random_linear_forms(&ideal.ctx, expected, DEFAULT_BOUND, &mut rng);
        let fewer = ideal.with_extra(forms[..expected - 1].to_vec())?;
        let r = codimension_within(&fewer, cutoff);
        if r.is_finite() {
            return Ok(Verdict::no(format!(
                "finite codimension already after {} linear forms (trial {t})",
                expected - 1
            ))
            .with_seed(seed));
        }
        let all = ideal.with_extra(forms)?;
        let r = codimension_within(&all, cutoff);
        if r.is_finite() {
            finite_with_e = true;
        } else if r.certified_infinite() {
            infinite_with_e = true;
        }
    }
    Ok(if finite_with_e {
        Verdict::yes(format!(
            "finite codimension after {expected} random linear forms but not after {}",
            expected - 1
        ))
        .with_seed(seed)
        .probabilistic()
    } else if infinite_with_e {
        Verdict::no(format!(
            "infinite codimension after {expected} random linear forms"
        ))
        .with_seed(seed)
        .probabilistic()
    } else {
        Verdict::unknown(format!("no linear section certified up to cutoff {cutoff}")).with_seed(seed)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::VariableContext;

    fn xy() -> Ctx {
        VariableContext::from_names(&["x", "y"])
    }

    fn mono(ctx: &Ctx, e: &[u16]) -> Series {
        Series::from_terms(ctx, Precision::Exact, [(Monomial::new(e.to_vec()), Coeff::from_int(1))])
    }

    #[test]
    fn monomial_ideal() {
        let c = xy();
        let i = IdealPresentation::new(&c, vec![mono(&c, &[2, 0]), mono(&c, &[0, 1])]).unwrap();
        let r = codimension(&i, 12).unwrap();
        assert_eq!(r.dimension, Some(2));
        assert_eq!(r.standard_monomials, vec!["1", "x"]);
    }

    #[test]
    fn principal_ideal_is_not_finite() {
        let c = xy();
        let i = IdealPresentation::new(&c, vec![mono(&c, &[1, 0])]).unwrap();
        let r = codimension(&i, 10).unwrap();
        assert_eq!(r.kind, CodimKind::NotFiniteUpTo);
        assert_eq!(r.cutoff_used, 10);
    }

    #[test]
    fn cusp_like_ideal() {
        let c = xy();
        let g1 = mono(&c, &[2, 0]).sub(&mono(&c, &[0, 3])).unwrap();
        let i = IdealPresentation::new(&c, vec![g1, mono(&c, &[0, 2])]).unwrap();
        let r = codimension(&i, 12).unwrap();
        assert_eq!(r.dimension, Some(4));
        assert_eq!(r.standard_monomials, vec!["1", "y", "x", "x*y"]);
    }

    #[test]
    fn strict_codimension_checks_truncation() {
        let c = xy();
        let g = mono(&c, &[1, 0]).truncate(Precision::UpTo(4));
        let i = IdealPresentation::new(&c, vec![g, mono(&c, &[0, 1])]).unwrap();
        assert!(matches!(
            codimension(&i, 12),
            Err(Error::TruncationTooSmall { required: 12, available: 4 })
        ));
        let r = codimension_within(&i, 12);
        assert_eq!(r.dimension, Some(1));
        assert!(r.exact);
    }

    #[test]
    fn rank_examples() {
        let c = VariableContext::from_names(&["z", "w"]);
        let z = Series::var(&c, 0);
        let w = Series::var(&c, 1);
        let m = SeriesMatrix::from_rows(&c, vec![vec![z.clone(), w.clone()], vec![w, z]]).unwrap();
        let r = generic_rank(&m, 2, &RankPolicy::default());
        assert_eq!(r.rank_lower_bound, 2);
        assert!(r.full_rank.is_true());

        let zero = SeriesMatrix::from_rows(&c, vec![vec![Series::zero(&c, Precision::Exact)]]).unwrap();
        let r = generic_rank(&zero, 1, &RankPolicy::default());
        assert_eq!(r.rank_lower_bound, 0);
        assert!(r.full_rank.is_false());
    }

    #[test]
    fn krull_dimension_examples() {
        let c = VariableContext::from_names(&["z", "w"]);
        let i = IdealPresentation::new(&c, vec![Series::var(&c, 1)]).unwrap();
        assert!(local_dimension_is(&i, 1, 4, 0, 12).unwrap().is_true());
        let empty = IdealPresentation::new(&c, vec![]).unwrap();
        assert!(local_dimension_is(&empty, 1, 4, 0, 12).unwrap().is_false());
        let c3 = VariableContext::from_names(&["z1", "z2", "w"]);
        let i = IdealPresentation::new(&c3, vec![Series::var(&c3, 2)]).unwrap();
        assert!(local_dimension_is(&i, 2, 4, 0, 12).unwrap().is_true());
    }
}
