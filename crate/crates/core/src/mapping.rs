//! Formal holomorphic maps `H = (F, G)` from one submanifold into another,
//! the predicates the theory attaches to them, and the audit of the
//! implications between those predicates.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::coeff::Coeff;
use crate::context::{same_ctx, Coords};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::local::{self, CodimensionResult, IdealPresentation, RankPolicy};
use crate::manifold::{residual_verdict, Manifold};
use crate::matrix::SeriesMatrix;
use crate::series::{Monomial, Series};
use crate::verdict::{Truth, Verdict};

/// Knobs shared by every predicate evaluation.
#[derive(Clone, Copy, Debug)]
pub struct AnalysisSettings {
    /// Degree cutoff for codimension searches.
    pub cutoff: u32,
    pub rank: RankPolicy,
    /// Random linear sections tried by the Krull-dimension test.
    pub trials: usize,
    /// Highest nondegeneracy order examined; defaults to `K - 1`.
    pub nondegeneracy_order: Option<u32>,
}

impl Default for AnalysisSettings {
    fn default() -> Self {
        AnalysisSettings {
            cutoff: local::DEFAULT_CUTOFF,
            rank: RankPolicy::default(),
            trials: local::DEFAULT_TRIALS,
            nondegeneracy_order: None,
        }
    }
}

impl AnalysisSettings {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rank.seed = seed;
        self
    }

    pub fn with_cutoff(mut self, cutoff: u32) -> Self {
        self.cutoff = cutoff;
        self
    }
}

/// `H = (F, G)` together with the verdict on `H(M) ⊂ M̃`.
#[derive(Clone, Debug)]
pub struct FormalMapPair {
    source: Arc<Manifold>,
    target: Arc<Manifold>,
    f: Vec<Series>,
    g: Vec<Series>,
    maps_into: Verdict,
}

/// Nonzero test with the usual three-valued reading of truncation.
pub fn nonzero_verdict(s: &Series, what: &str) -> Verdict {
    match s.witness() {
        Some(w) => Verdict::yes(format!("{what} has term {w}")),
        None if s.is_exact() => Verdict::no(format!("{what} vanishes identically")),
        None => Verdict::unknown(format!(
            "{what} vanishes through degree {}",
            s.precision().bound().unwrap_or(0)
        )),
    }
}

/// Finite codimension as a verdict.
pub fn finiteness_verdict(r: &CodimensionResult, what: &str) -> Verdict {
    if r.is_finite() {
        Verdict::yes(format!("{what} = {}", r.summary()))
    } else if r.certified_infinite() {
        Verdict::no(format!("{what} is {}", r.summary()))
    } else {
        Verdict::unknown(format!("{what} {}", r.summary()))
    }
}

/// Interval known to contain a codimension, when it is finite.
fn bounds(r: &CodimensionResult) -> Option<(usize, usize)> {
    match (r.is_finite(), r.dimension) {
        (true, Some(v)) if r.exact => Some((v, v)),
        (true, Some(v)) => Some((1, v.max(1))),
        _ => None,
    }
}

fn show(r: &CodimensionResult) -> String {
    match bounds(r) {
        Some((a, b)) if a == b => a.to_string(),
        Some((_, b)) => format!("≤{b}"),
        None => "?".into(),
    }
}

impl FormalMapPair {
    /// Builds the pair and checks the mapping-into identity on the
    /// parametrization `w = Q(z, χ, τ)`. A failed check does not make this an
    /// error; the verdict is stored instead.
    pub fn attach(source: Arc<Manifold>, target: Arc<Manifold>, f: Vec<Series>, g: Vec<Series>) -> Result<Self> {
        let (n, d) = (source.n(), source.d());
        if target.n() != n || target.d() != d {
            return Err(Error::Shape(format!(
                "source has (n, d) = ({n}, {d}) but target has ({}, {})",
                target.n(),
                target.d()
            )));
        }
        if f.len() != n || g.len() != d {
            return Err(Error::Shape(format!(
                "H needs {n} F and {d} G components, got {} and {}",
                f.len(),
                g.len()
            )));
        }
        let zw = &source.coords().zw;
        if f.iter().chain(&g).any(|s| !same_ctx(s.ctx(), zw)) {
            return Err(Error::ContextMismatch);
        }
        if let Some(s) = f.iter().chain(&g).find(|s| !s.constant_term().is_zero()) {
            return Err(Error::Precondition(format!("H(0) ≠ 0: component {s}")));
        }
        let mut pair = FormalMapPair {
            source,
            target,
            f,
            g,
            maps_into: Verdict::unknown("not yet checked"),
        };
        pair.maps_into = pair.mapping_residual()?;
        Ok(pair)
    }

    fn coords(&self) -> &Coords {
        self.source.coords()
    }

    pub fn source(&self) -> &Arc<Manifold> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Manifold> {
        &self.target
    }

    pub fn f(&self) -> &[Series] {
        &self.f
    }

    pub fn g(&self) -> &[Series] {
        &self.g
    }

    /// `H = (F, G)` as one vector.
    pub fn h(&self) -> Vec<Series> {
        self.f.iter().chain(&self.g).cloned().collect()
    }

    pub fn maps_into(&self) -> &Verdict {
        &self.maps_into
    }

    pub fn verified(&self) -> bool {
        self.maps_into.is_true()
    }

    /// `G(z, Q) − Q̃(F(z, Q), F̄(χ, τ), Ḡ(χ, τ))`.
    fn mapping_residual(&self) -> Result<Verdict> {
        let c = self.coords();
        let (n, d) = (c.n, c.d);
        let mut on_m: Vec<Series> = (0..n).map(|i| Series::var(&c.q, c.q_z(i))).collect();
        on_m.extend(self.source.q().iter().cloned());
        let mut bar_map = vec![0; n + d];
        for i in 0..n {
            bar_map[i] = c.q_chi(i);
        }
        for j in 0..d {
            bar_map[n + j] = c.q_tau(j);
        }
        let h = self.h();
        let h_on_m: Vec<Series> = h
            .iter()
            .map(|s| s.compose_into(&c.q, &on_m))
            .collect::<Result<_>>()?;
        let h_bar: Vec<Series> = h.iter().map(|s| s.conj().relabel(&c.q, &bar_map)).collect();
        let mut subs: Vec<Series> = h_on_m[..n].to_vec();
        subs.extend(h_bar[..n].iter().cloned());
        subs.extend(h_bar[n..].iter().cloned());
        let res: Vec<Series> = self
            .target
            .q()
            .iter()
            .enumerate()
            .map(|(j, qt)| h_on_m[n + j].sub(&qt.compose_into(&c.q, &subs)?))
            .collect::<Result<_>>()?;
        Ok(residual_verdict(&res, "mapping residual"))
    }

    /// `∂H/∂Z (0)`, rows `H`, columns `Z = (z, w)`.
    pub fn linear_part(&self) -> Mat {
        let nv = self.coords().big_n();
        self.h()
            .iter()
            .map(|s| (0..nv).map(|j| s.coeff(&Monomial::var(nv, j))).collect())
            .collect()
    }

    /// `(∂ρ̃/∂Z̃)(0) · (∂H/∂Z)(0)` with `ρ̃ = w̃ − Q̃`.
    pub fn transversality_matrix(&self) -> Mat {
        let c = self.coords();
        let (n, d) = (c.n, c.d);
        let nq = c.q.len();
        let drho: Mat = self
            .target
            .q()
            .iter()
            .enumerate()
            .map(|(j, qt)| {
                let mut row: Vec<Coeff> = (0..n).map(|i| -qt.coeff(&Monomial::var(nq, c.q_z(i)))).collect();
                row.extend((0..d).map(|l| if l == j { Coeff::one() } else { Coeff::zero() }));
                row
            })
            .collect();
        linalg::mat_mul(&drho, &self.linear_part())
    }

    /// The three CR-transversality criteria: `det ∂G/∂w(0) ≠ 0`, `dG(0)` of
    /// rank `d`, and `(∂ρ̃/∂Z̃)·dH` of rank `d`.
    pub fn cr_transversal_criteria(&self) -> [Verdict; 3] {
        let c = self.coords();
        let (n, d) = (c.n, c.d);
        let b = self.linear_part();
        let gw: Mat = b[n..].iter().map(|r| r[n..].to_vec()).collect();
        let det = linalg::det(&gw);
        let by_det = if det.is_zero() {
            Verdict::no("det ∂G/∂w(0) = 0")
        } else {
            Verdict::yes(format!("det ∂G/∂w(0) = {det}"))
        };
        let rank_verdict = |r: usize, what: &str| {
            if r == d {
                Verdict::yes(format!("{what} has rank {d}"))
            } else {
                Verdict::no(format!("{what} has rank {r} < {d}"))
            }
        };
        let dg: Mat = b[n..].to_vec();
        let by_dg = rank_verdict(linalg::rank(&dg), "dG(0)");
        let by_rho = rank_verdict(linalg::rank(&self.transversality_matrix()), "dρ̃·dH(0)");
        [by_det, by_dg, by_rho]
    }

    /// CR transversality to the target at 0. On a verified pair the three
    /// criteria must agree; disagreement is reported as an internal error.
    pub fn cr_transversal(&self) -> Result<Verdict> {
        let [by_det, by_dg, by_rho] = self.cr_transversal_criteria();
        if !self.verified() {
            return Ok(by_dg);
        }
        if by_det.value != by_dg.value || by_dg.value != by_rho.value {
            return Err(Error::Internal(format!(
                "CR transversality criteria disagree: {by_det} / {by_dg} / {by_rho}"
            )));
        }
        Ok(by_det)
    }

    /// Real rank of `v ↦ Re(A v)` equals `d`.
    pub fn transversal(&self) -> Verdict {
        let a = self.transversality_matrix();
        let real: Mat = a
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| Coeff::real(x.re().clone()))
                    .chain(row.iter().map(|x| Coeff::real(-x.im().clone())))
                    .collect()
            })
            .collect();
        let r = linalg::rank(&real);
        let d = self.coords().d;
        if r == d {
            Verdict::yes(format!("real differential of ρ̃∘H has rank {d}"))
        } else {
            Verdict::no(format!("real differential of ρ̃∘H has rank {r} < {d}"))
        }
    }

    /// `det (∂F/∂z)(z, 0) ≢ 0`.
    pub fn not_totally_degenerate(&self) -> Result<Verdict> {
        let c = self.coords();
        let n = c.n;
        if n == 0 {
            return Ok(Verdict::yes("no CR directions (empty determinant)"));
        }
        let jf = SeriesMatrix::jacobian(&self.f, &c.zw_z_indices())?;
        let det = jf.determinant()?.set_zero(&c.zw_w_indices());
        Ok(nonzero_verdict(&det, "det ∂F/∂z(z,0)"))
    }

    /// `F(z, 0)` in the `z` context.
    fn f_on_segre_variety(&self) -> Result<Vec<Series>> {
        let c = self.coords();
        let mut subs: Vec<Series> = (0..c.n).map(|i| Series::var(&c.z, i)).collect();
        subs.extend((0..c.d).map(|_| Series::zero(&c.z, crate::series::Precision::Exact)));
        self.f.iter().map(|s| s.compose_into(&c.z, &subs)).collect()
    }

    /// Finiteness of `F(z, 0)`, with `m_H = dim C[[z]]/I(F(z,0))`.
    pub fn segre_finite(&self, settings: &AnalysisSettings) -> Result<(Verdict, CodimensionResult)> {
        let ideal = IdealPresentation::new(&self.coords().z, self.f_on_segre_variety()?)?;
        let r = local::codimension_within(&ideal, settings.cutoff);
        Ok((finiteness_verdict(&r, "m_H"), r))
    }

    /// Finiteness of `H`, with `mult(H) = dim C[[Z]]/I(H)`.
    pub fn finite(&self, settings: &AnalysisSettings) -> Result<(Verdict, CodimensionResult)> {
        let ideal = IdealPresentation::new(&self.coords().zw, self.h())?;
        let r = local::codimension_within(&ideal, settings.cutoff);
        Ok((finiteness_verdict(&r, "mult(H)"), r))
    }

    /// Krull dimension of `C[[Z]]/I(G)` equals `N − d`.
    pub fn transversally_regular(&self, settings: &AnalysisSettings) -> Result<Verdict> {
        let c = self.coords();
        if c.d == 1 {
            return Ok(nonzero_verdict(&self.g[0], "G"));
        }
        let ideal = IdealPresentation::new(&c.zw, self.g.clone())?;
        local::local_dimension_is(&ideal, c.n, settings.trials, settings.rank.seed, settings.cutoff)
    }

    /// `Jac H ≢ 0`.
    pub fn jacobian_nonzero(&self) -> Result<Verdict> {
        let nv = self.coords().big_n();
        let vars: Vec<usize> = (0..nv).collect();
        let det = SeriesMatrix::jacobian(&self.h(), &vars)?.determinant()?;
        Ok(nonzero_verdict(&det, "Jac H"))
    }

    /// Invertible linear part.
    pub fn biholomorphism(&self) -> Verdict {
        let det = linalg::det(&self.linear_part());
        if det.is_zero() {
            Verdict::no("det ∂H/∂Z(0) = 0")
        } else {
            Verdict::yes(format!("det ∂H/∂Z(0) = {det}"))
        }
    }

    /// `H∘v^k = ṽ^k(…, F∘v^j or its conjugate, …)`, with conjugation on the
    /// blocks `j` of parity opposite to `k`, together with `G∘v¹ ≡ 0`.
    pub fn reflection_identity_residual(&self, k: usize) -> Result<Verdict> {
        let bound = self.source.segre_bound();
        if k == 0 || k > bound {
            return Err(Error::Precondition(format!(
                "reflection identity index {k} outside 1..={bound}"
            )));
        }
        let c = self.coords();
        let (n, d) = (c.n, c.d);
        let h = self.h();
        let seg = self.source.segre(k)?;
        let ctx = &seg.ctx;
        let lhs: Vec<Series> = h
            .iter()
            .map(|s| s.compose_into(ctx, &seg.v))
            .collect::<Result<_>>()?;
        let mut args: Vec<Series> = Vec::with_capacity(k * n);
        for j in 1..=k {
            let sj = self.source.segre(j)?;
            for fi in &self.f {
                let fj = fi.compose_into(&sj.ctx, &sj.v)?;
                let fj = if (k - j) % 2 == 1 { fj.conj() } else { fj };
                args.push(fj.embed(ctx)?);
            }
        }
        let tseg = self.target.segre(k)?;
        let rhs: Vec<Series> = tseg
            .v
            .iter()
            .map(|s| s.compose_into(ctx, &args))
            .collect::<Result<_>>()?;
        let mut res: Vec<Series> = lhs.iter().zip(&rhs).map(|(a, b)| a.sub(b)).collect::<Result<_>>()?;
        let s1 = self.source.segre(1)?;
        for gj in &self.g {
            res.push(gj.compose_into(&s1.ctx, &s1.v)?.embed(ctx)?);
        }
        debug_assert_eq!(res.len(), n + 2 * d);
        Ok(residual_verdict(&res, &format!("reflection identity k={k}")))
    }

    /// Evaluates every predicate.
    pub fn predicates(&self, settings: &AnalysisSettings) -> Result<PredicateReport> {
        let (segre_finite, m_h) = self.segre_finite(settings)?;
        let (finite, mult) = self.finite(settings)?;
        let source_ess_type = self.source.essential_type(settings.cutoff)?;
        let target_ess_type = self.target.essential_type(settings.cutoff)?;
        let order = settings
            .nondegeneracy_order
            .unwrap_or(self.source.truncation().saturating_sub(1))
            .min(self.source.truncation().saturating_sub(1));
        Ok(PredicateReport {
            maps_into: self.maps_into.clone(),
            cr_transversal: self.cr_transversal()?,
            transversal: self.transversal(),
            not_totally_degenerate: self.not_totally_degenerate()?,
            segre_finite,
            m_h,
            finite,
            mult,
            transversally_regular: self.transversally_regular(settings)?,
            jacobian_nonzero: self.jacobian_nonzero()?,
            biholomorphism: self.biholomorphism(),
            source_finite_type: self.source.finite_type(&settings.rank)?,
            target_finite_type: self.target.finite_type(&settings.rank)?,
            source_essentially_finite: finiteness_verdict(&source_ess_type, "Ess(M)"),
            source_ess_type,
            target_essentially_finite: finiteness_verdict(&target_ess_type, "Ess(M̃)"),
            target_ess_type,
            source_fin_nondeg: self.source.finitely_nondegenerate(order)?,
        })
    }

    /// Checks every implication between the predicates. Requires a verified
    /// mapping residual.
    pub fn theorem_audit(&self, settings: &AnalysisSettings) -> Result<AuditReport> {
        if !self.verified() {
            return Err(Error::Precondition(format!(
                "theorem audit needs a verified pair ({})",
                self.maps_into
            )));
        }
        let p = self.predicates(settings)?;
        let mut checks = implication_checks(&p, self.coords().d);

        let crit = self.cr_transversal_criteria();
        let agree = crit.iter().all(|v| v.value == crit[0].value);
        checks.push(AuditCheck {
            name: "CR transversality criteria agree".into(),
            inputs: vec![
                AuditInput::new("det dG/dw(0) != 0", &crit[0]),
                AuditInput::new("rank dG(0) = d", &crit[1]),
                AuditInput::new("rank drho~ dH(0) = d", &crit[2]),
            ],
            status: if agree { CheckStatus::Passed } else { CheckStatus::Violated },
            detail: crit.iter().map(|v| v.evidence.as_str()).collect::<Vec<_>>().join("; "),
        });
        for k in 1..=self.source.segre_bound() {
            let v = self.reflection_identity_residual(k)?;
            checks.push(fact(&format!("reflection identity k={k}"), &v));
        }
        for m in 1..=self.source.d() + 1 {
            let v = self.source.w_vanishing(m)?;
            checks.push(fact(&format!("source v^{} vanishes on W", 2 * m), &v));
            let v = self.target.w_vanishing(m)?;
            checks.push(fact(&format!("target v^{} vanishes on W", 2 * m), &v));
        }
        Ok(AuditReport { predicates: p, checks })
    }
}

/// One verdict per predicate.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PredicateReport {
    pub maps_into: Verdict,
    pub cr_transversal: Verdict,
    pub transversal: Verdict,
    pub not_totally_degenerate: Verdict,
    pub segre_finite: Verdict,
    pub m_h: CodimensionResult,
    pub finite: Verdict,
    pub mult: CodimensionResult,
    pub transversally_regular: Verdict,
    pub jacobian_nonzero: Verdict,
    pub biholomorphism: Verdict,
    pub source_finite_type: Verdict,
    pub target_finite_type: Verdict,
    pub source_essentially_finite: Verdict,
    pub source_ess_type: CodimensionResult,
    pub target_essentially_finite: Verdict,
    pub target_ess_type: CodimensionResult,
    pub source_fin_nondeg: Verdict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CheckStatus {
    #[serde(rename = "PASSED")]
    Passed,
    #[serde(rename = "SKIPPED")]
    Skipped,
    #[serde(rename = "VIOLATED")]
    Violated,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Passed => "PASSED",
            CheckStatus::Skipped => "SKIPPED",
            CheckStatus::Violated => "VIOLATED",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditInput {
    pub label: String,
    pub value: Truth,
}

impl AuditInput {
    fn new(label: &str, v: &Verdict) -> Self {
        AuditInput {
            label: label.into(),
            value: v.value,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditCheck {
    pub name: String,
    pub inputs: Vec<AuditInput>,
    pub status: CheckStatus,
    pub detail: String,
}

impl fmt::Display for AuditCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} ({})", self.name, self.status, self.detail)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub predicates: PredicateReport,
    pub checks: Vec<AuditCheck>,
}

impl AuditReport {
    pub fn violations(&self) -> impl Iterator<Item = &AuditCheck> + '_ {
        self.checks.iter().filter(|c| c.status == CheckStatus::Violated)
    }

    pub fn count(&self, status: CheckStatus) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn check(&self, name: &str) -> Option<&AuditCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// `antecedents ⇒ consequents` in three-valued logic: violated only when
/// every antecedent is certified true and some consequent certified false.
pub fn implication(name: &str, antecedents: &[(&str, &Verdict)], consequents: &[(&str, &Verdict)]) -> AuditCheck {
    let inputs: Vec<AuditInput> = antecedents
        .iter()
        .chain(consequents)
        .map(|(l, v)| AuditInput::new(l, v))
        .collect();
    let all_hold = antecedents.iter().all(|(_, v)| v.is_true());
    let failed = consequents.iter().find(|(_, v)| v.is_false());
    let (status, detail) = if let (true, Some((l, v))) = (all_hold, failed) {
        (CheckStatus::Violated, format!("{l} is false: {}", v.evidence))
    } else if let Some((l, _)) = antecedents.iter().chain(consequents).find(|(_, v)| v.is_unknown()) {
        (CheckStatus::Skipped, format!("{l} is unknown at this truncation"))
    } else if let Some((l, _)) = antecedents.iter().find(|(_, v)| v.is_false()) {
        (CheckStatus::Passed, format!("vacuous: {l} is false"))
    } else {
        (CheckStatus::Passed, "conclusion holds".into())
    };
    AuditCheck {
        name: name.into(),
        inputs,
        status,
        detail,
    }
}

fn fact(name: &str, v: &Verdict) -> AuditCheck {
    implication(name, &[], &[("identity", v)])
}

/// `lhs = a·b` for codimensions, given that the antecedents hold.
fn product_identity(
    name: &str,
    antecedents: &[(&str, &Verdict)],
    lhs: &CodimensionResult,
    a: &CodimensionResult,
    b: &CodimensionResult,
) -> AuditCheck {
    let mut check = implication(name, antecedents, &[]);
    if check.status != CheckStatus::Passed || check.detail.starts_with("vacuous") {
        return check;
    }
    let (Some(l), Some(x), Some(y)) = (bounds(lhs), bounds(a), bounds(b)) else {
        check.status = CheckStatus::Skipped;
        check.detail = format!("{} = {}·{}: not all finite", show(lhs), show(a), show(b));
        return check;
    };
    let text = format!("{} = {}·{}", show(lhs), show(a), show(b));
    let exact = l.0 == l.1 && x.0 == x.1 && y.0 == y.1;
    let (lo, hi) = (x.0 * y.0, x.1 * y.1);
    check.status = if exact {
        if l.0 == lo {
            CheckStatus::Passed
        } else {
            CheckStatus::Violated
        }
    } else if l.1 < lo || hi < l.0 {
        CheckStatus::Violated
    } else {
        CheckStatus::Skipped
    };
    check.detail = if exact || check.status == CheckStatus::Violated {
        text
    } else {
        format!("{text}: bounds consistent")
    };
    check
}

fn implication_checks(p: &PredicateReport, d: usize) -> Vec<AuditCheck> {
    let hypersurface = if d == 1 {
        Verdict::yes("d = 1")
    } else {
        Verdict::no(format!("d = {d}"))
    };
    let tgt_ft = ("target finite type", &p.target_finite_type);
    let src_ft = ("source finite type", &p.source_finite_type);
    let cr = ("CR transversal", &p.cr_transversal);
    let fin = ("finite", &p.finite);
    let sf = ("Segre finite", &p.segre_finite);
    let ntd = ("not totally degenerate", &p.not_totally_degenerate);
    let treg = ("transversally regular", &p.transversally_regular);
    let src_ef = ("source essentially finite", &p.source_essentially_finite);
    let tgt_ef = ("target essentially finite", &p.target_essentially_finite);
    let jac = ("Jac H nonzero", &p.jacobian_nonzero);
    let biholo = ("biholomorphism", &p.biholomorphism);

    let mut out = vec![
        implication("finite map into finite-type target is CR transversal", &[tgt_ft, fin], &[cr]),
        implication(
            "Segre finite map into finite-type target is finite and CR transversal",
            &[tgt_ft, sf],
            &[fin, cr],
        ),
        implication(
            "nondegenerate map of hypersurfaces into finite-type target is CR transversal",
            &[("codimension one", &hypersurface), tgt_ft, ntd],
            &[cr],
        ),
        implication("CR transversal map is transversal", &[cr], &[("transversal", &p.transversal)]),
        implication(
            "transversally regular map from essentially finite source is finite and CR transversal",
            &[src_ef, tgt_ft, treg],
            &[fin, cr, tgt_ef],
        ),
        product_identity(
            "essential type is multiplicative under mult(H)",
            &[src_ef, tgt_ft, treg],
            &p.source_ess_type,
            &p.mult,
            &p.target_ess_type,
        ),
    ];

    // Ess(M) = Ess(M̃) exactly when H is a biholomorphism.
    let mut eq = implication(
        "equal essential types characterize biholomorphisms",
        &[src_ef, tgt_ft, treg],
        &[],
    );
    if eq.status == CheckStatus::Passed && !eq.detail.starts_with("vacuous") {
        match (p.source_ess_type.exact_value(), p.target_ess_type.exact_value()) {
            (Some(a), Some(b)) if !p.biholomorphism.is_unknown() => {
                let same = a == b;
                eq.status = if same == p.biholomorphism.is_true() {
                    CheckStatus::Passed
                } else {
                    CheckStatus::Violated
                };
                eq.detail = format!("Ess {a} vs {b}, {}", p.biholomorphism.evidence);
            }
            _ => {
                eq.status = CheckStatus::Skipped;
                eq.detail = "essential types not both certified".into();
            }
        }
    }
    eq.inputs.push(AuditInput::new(biholo.0, biholo.1));
    out.push(eq);

    out.extend([
        implication(
            "CR transversal map from essentially finite source: target essentially finite, map Segre finite",
            &[cr, src_ef],
            &[tgt_ef, sf],
        ),
        implication(
            "CR transversal Segre finite map into essentially finite target: source essentially finite",
            &[cr, tgt_ef, sf],
            &[src_ef],
        ),
    ]);
    let via_source = implication("", &[cr, src_ef], &[]);
    let via_target = implication("", &[cr, tgt_ef, sf], &[]);
    let applies = |c: &AuditCheck| c.status == CheckStatus::Passed && !c.detail.starts_with("vacuous");
    let ess_name = "essential type scales by m_H";
    let mut ess_mh = if applies(&via_source) {
        product_identity(ess_name, &[cr, src_ef], &p.source_ess_type, &p.m_h, &p.target_ess_type)
    } else {
        product_identity(ess_name, &[cr, tgt_ef, sf], &p.source_ess_type, &p.m_h, &p.target_ess_type)
    };
    if !applies(&via_target) && via_source.status == CheckStatus::Skipped {
        ess_mh.status = CheckStatus::Skipped;
        ess_mh.detail = via_source.detail.clone();
    }
    out.push(ess_mh);

    out.extend([
        implication(
            "transversally regular map from essentially finite source is Segre finite",
            &[src_ef, treg],
            &[sf],
        ),
        implication(
            "finite map from finitely nondegenerate finite-type source is a biholomorphism",
            &[("source finitely nondegenerate", &p.source_fin_nondeg), src_ft, fin],
            &[biholo],
        ),
        implication("Jac H nonzero and source finite type give target finite type", &[jac, src_ft], &[tgt_ft]),
        implication(
            "not totally degenerate map into finite-type target: source finite type, Jac H nonzero",
            &[ntd, tgt_ft],
            &[src_ft, jac],
        ),
        implication("finite map is Segre finite and transversally regular", &[fin], &[sf, treg]),
        implication("Segre finite map is not totally degenerate", &[sf], &[ntd]),
        implication(
            "Segre finite CR transversal map is finite",
            &[sf, cr],
            &[fin],
        ),
    ]);

    // m_H ≤ mult(H) for finite H.
    let mut le = implication("m_H is at most mult(H)", &[fin], &[]);
    if applies(&le) {
        match (bounds(&p.m_h), bounds(&p.mult)) {
            (Some(a), Some(b)) => {
                let text = format!("{} ≤ {}", show(&p.m_h), show(&p.mult));
                le.status = if a.0 > b.1 {
                    CheckStatus::Violated
                } else if a.1 <= b.0 {
                    CheckStatus::Passed
                } else {
                    CheckStatus::Skipped
                };
                le.detail = text;
            }
            _ => {
                le.status = CheckStatus::Skipped;
                le.detail = "m_H not certified finite".into();
            }
        }
    }
    out.push(le);

    // m_H = mult(H) for Segre finite CR transversal H.
    let mut eqm = implication("m_H equals mult(H) for CR transversal maps", &[sf, cr], &[]);
    if applies(&eqm) {
        match (bounds(&p.m_h), bounds(&p.mult)) {
            (Some(a), Some(b)) => {
                let text = format!("{} = {}", show(&p.m_h), show(&p.mult));
                eqm.status = if a.1 < b.0 || b.1 < a.0 {
                    CheckStatus::Violated
                } else if a.0 == a.1 && b.0 == b.1 {
                    CheckStatus::Passed
                } else {
                    CheckStatus::Skipped
                };
                eqm.detail = text;
            }
            _ => {
                eqm.status = CheckStatus::Skipped;
                eqm.detail = "mult(H) not certified finite".into();
            }
        }
    }
    out.push(eqm);
    out
}
