//! Formal generic submanifolds `w = Q(z, χ, τ)` in normal coordinates.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};

use crate::coeff::Coeff;
use crate::context::{same_ctx, Coords, Ctx};
use crate::error::{Error, Result};
use crate::linalg::{self, Echelon};
use crate::local::{self, CodimensionResult, IdealPresentation, RankPolicy};
use crate::matrix::SeriesMatrix;
use crate::series::{reverse, Monomial, Precision, Series};
use crate::verdict::{Truth, Verdict};

/// Variable positions inside the standard contexts of [`Coords`].
impl Coords {
    pub fn q_z(&self, i: usize) -> usize {
        i
    }
    pub fn q_chi(&self, i: usize) -> usize {
        self.n + i
    }
    pub fn q_tau(&self, j: usize) -> usize {
        2 * self.n + j
    }
    pub fn zw_w(&self, j: usize) -> usize {
        self.n + j
    }
    pub fn zw_w_indices(&self) -> Vec<usize> {
        (self.n..self.n + self.d).collect()
    }
    pub fn zw_z_indices(&self) -> Vec<usize> {
        (0..self.n).collect()
    }
    /// Position of `t^block_i` (both 1-based block, 0-based i).
    pub fn t_index(&self, block: usize, i: usize) -> usize {
        (block - 1) * self.n + i
    }
}

/// Residual verdict: any retained nonzero coefficient refutes, otherwise the
/// identity holds through the common truncation.
pub fn residual_verdict(res: &[Series], what: &str) -> Verdict {
    for (j, r) in res.iter().enumerate() {
        if let Some(w) = r.witness() {
            return Verdict::no(format!("{what}: component {} has term {w}", j + 1));
        }
    }
    let prec = res.iter().fold(Precision::Exact, |p, r| p.min(r.precision()));
    match prec {
        Precision::Exact => Verdict::yes(format!("{what}: vanishes identically")),
        Precision::UpTo(k) => Verdict::yes(format!("{what}: vanishes through degree {k}")),
    }
}

/// `Q̄(χ, z, w)` in the `(z, χ, w)` context.
pub fn q_bar_zchiw(c: &Coords, q: &[Series]) -> Vec<Series> {
    let n = c.n;
    let mut map = vec![0; 2 * n + c.d];
    for i in 0..n {
        map[i] = n + i;
        map[n + i] = i;
    }
    for j in 0..c.d {
        map[2 * n + j] = 2 * n + j;
    }
    q.iter().map(|s| s.conj().relabel(&c.zchiw, &map)).collect()
}

fn check_q(c: &Coords, q: &[Series]) -> Result<()> {
    if q.len() != c.d {
        return Err(Error::Shape(format!("Q needs {} components, got {}", c.d, q.len())));
    }
    if q.iter().any(|s| !same_ctx(s.ctx(), &c.q)) {
        return Err(Error::ContextMismatch);
    }
    Ok(())
}

/// `Q(z, χ, Q̄(χ, z, w)) = w`.
pub fn verify_reality(c: &Coords, q: &[Series]) -> Result<Verdict> {
    check_q(c, q)?;
    let qbar = q_bar_zchiw(c, q);
    let mut subs: Vec<Series> = (0..2 * c.n).map(|i| Series::var(&c.zchiw, i)).collect();
    subs.extend(qbar);
    let res: Vec<Series> = q
        .iter()
        .enumerate()
        .map(|(j, s)| s.compose_into(&c.zchiw, &subs)?.sub(&Series::var(&c.zchiw, 2 * c.n + j)))
        .collect::<Result<_>>()?;
    Ok(residual_verdict(&res, "reality residual"))
}

/// `Q(0, χ, τ) = Q(z, 0, τ) = τ`.
pub fn verify_normal_form(c: &Coords, q: &[Series]) -> Result<Verdict> {
    check_q(c, q)?;
    let zs: Vec<usize> = (0..c.n).map(|i| c.q_z(i)).collect();
    let chis: Vec<usize> = (0..c.n).map(|i| c.q_chi(i)).collect();
    let mut res = Vec::new();
    for (j, s) in q.iter().enumerate() {
        let tau = Series::var(&c.q, c.q_tau(j));
        res.push(s.set_zero(&zs).sub(&tau)?);
        res.push(s.set_zero(&chis).sub(&tau)?);
    }
    Ok(residual_verdict(&res, "normality residual"))
}

/// Solves `ρ(z, w, χ, τ) = 0` for `w = Q₀(z, χ, τ)`. `split` lists the
/// positions (among the `N` holomorphic variables of `c.full`) that play the
/// role of `w`.
pub fn graph_solve(c: &Coords, rho: &[Series], split: &[usize], k: u32) -> Result<Vec<Series>> {
    let (n, d, nn) = (c.n, c.d, c.big_n());
    if rho.len() != d {
        return Err(Error::Shape(format!("ρ needs {d} components, got {}", rho.len())));
    }
    if rho.iter().any(|s| !same_ctx(s.ctx(), &c.full)) {
        return Err(Error::ContextMismatch);
    }
    let mut sorted = split.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if split.len() != d || sorted.len() != d || sorted.iter().any(|&i| i >= nn) {
        return Err(Error::Shape(format!(
            "w split must name {d} distinct holomorphic variables"
        )));
    }
    let mut perm = vec![0; 2 * nn];
    let mut next_z = 0;
    for i in 0..nn {
        let slot = match split.iter().position(|&s| s == i) {
            Some(j) => n + j,
            None => {
                next_z += 1;
                next_z - 1
            }
        };
        perm[i] = slot;
        perm[nn + i] = nn + slot;
    }
    let rho: Vec<Series> = rho.iter().map(|s| s.relabel(&c.full, &perm)).collect();
    if rho.iter().any(|s| !s.constant_term().is_zero()) {
        return Err(Error::Precondition("ρ(0) ≠ 0".into()));
    }
    let nv = c.full.len();
    let a: linalg::Mat = rho
        .iter()
        .map(|s| (0..d).map(|j| s.coeff(&Monomial::var(nv, n + j))).collect())
        .collect();
    let inv = linalg::inverse(&a).ok_or_else(|| Error::SingularLinearPart {
        rank: linalg::rank(&a),
        expected: d,
        hint: "; choose a different w split".into(),
    })?;
    let prec = Precision::UpTo(k);
    let mut w: Vec<Series> = vec![Series::zero(&c.q, prec); d];
    let subs_for = |w: &[Series]| -> Vec<Series> {
        let mut s: Vec<Series> = (0..n).map(|i| Series::var(&c.q, c.q_z(i))).collect();
        s.extend(w.iter().cloned());
        s.extend((0..n).map(|i| Series::var(&c.q, c.q_chi(i))));
        s.extend((0..d).map(|j| Series::var(&c.q, c.q_tau(j))));
        s
    };
    // Each pass fixes one more degree, so pass `it` only needs jets of
    // order `it + 1`.
    let rho_k: Vec<Series> = rho.iter().map(|s| s.truncate(prec)).collect();
    for it in 0..=k + 1 {
        let step = Precision::UpTo((it + 1).min(k));
        let subs: Vec<Series> = subs_for(&w).iter().map(|s| s.with_precision(step)).collect();
        let r: Vec<Series> = rho_k
            .iter()
            .map(|s| s.truncate(step).compose_into(&c.q, &subs).map(|x| x.truncate(prec)))
            .collect::<Result<_>>()?;
        if it + 1 >= k && r.iter().all(|x| x.is_zero()) {
            w = w.iter().map(|s| s.with_precision(prec)).collect();
            break;
        }
        w = w
            .iter()
            .zip(&inv)
            .map(|(wj, row)| {
                let mut acc = wj.clone();
                for (cf, rl) in row.iter().zip(&r) {
                    acc = acc.sub(&rl.scale(cf))?;
                }
                Ok(acc.with_precision(step))
            })
            .collect::<Result<_>>()?;
    }
    // A polynomial solution shows up as a jet whose top degrees are empty;
    // only then is the uncapped substitution cheap enough to try.
    let low_degree = w.iter().all(|s| 2 * s.max_degree().unwrap_or(0) <= k);
    if low_degree && rho.iter().all(|s| s.is_exact()) {
        let cand: Vec<Series> = w.iter().map(|s| s.with_precision(Precision::Exact)).collect();
        let subs = subs_for(&cand);
        let exact = rho
            .iter()
            .map(|s| s.compose_into(&c.q, &subs))
            .collect::<Result<Vec<_>>>()?
            .iter()
            .all(|r| r.is_zero());
        if exact {
            return Ok(cand);
        }
    }
    Ok(w)
}

/// A change of the `w` coordinate: old `w` as a series in `(z, w′)`.
pub fn identity_change(c: &Coords) -> Vec<Series> {
    c.zw_w_indices().iter().map(|&i| Series::var(&c.zw, i)).collect()
}

/// `Q(z, χ, τ) ↦ P⁻¹(Q(z, χ, P̄(τ)))` for a change `w = P(z, w′)` whose
/// `z`-dependence is absent (used by the linear and `w`-only steps).
fn conjugate_by_w_change(c: &Coords, q: &[Series], p: &[Series], k: u32) -> Result<Vec<Series>> {
    let n = c.n;
    let mut bar_map = vec![0; n + c.d];
    for i in 0..n {
        bar_map[i] = c.q_chi(i);
    }
    for j in 0..c.d {
        bar_map[n + j] = c.q_tau(j);
    }
    let p_bar: Vec<Series> = p.iter().map(|s| s.conj().relabel(&c.q, &bar_map)).collect();
    let q = if within_budget(q, &p_bar, k) { q.to_vec() } else { capped(q, k) };
    let mut subs: Vec<Series> = (0..2 * n).map(|i| Series::var(&c.q, i)).collect();
    subs.extend(p_bar);
    let inner: Vec<Series> = q
        .iter()
        .map(|s| s.compose_into(&c.q, &subs))
        .collect::<Result<_>>()?;
    let p_inv = reverse(p, &c.zw_w_indices(), k)?;
    let (p_inv, inner) = if within_budget(&p_inv, &inner, k) {
        (p_inv, inner)
    } else {
        (capped(&p_inv, k), capped(&inner, k))
    };
    let mut subs2: Vec<Series> = (0..n).map(|i| Series::var(&c.q, c.q_z(i))).collect();
    subs2.extend(inner);
    p_inv.iter().map(|s| s.compose_into(&c.q, &subs2)).collect()
}

/// Keeps an exact composition exact only while its degree stays within `k`.
fn within_budget(outer: &[Series], inner: &[Series], k: u32) -> bool {
    let deg = |v: &[Series]| v.iter().filter_map(|s| s.max_degree()).max().unwrap_or(0);
    outer.iter().chain(inner).all(|s| s.is_exact()) && deg(outer) * deg(inner).max(1) <= k
}

fn capped(v: &[Series], k: u32) -> Vec<Series> {
    v.iter().map(|s| s.truncate(Precision::UpTo(k))).collect()
}

fn compose_change(c: &Coords, change: &[Series], inner: &[Series], k: u32) -> Result<Vec<Series>> {
    let (change, inner) = if within_budget(change, inner, k) {
        (change.to_vec(), inner.to_vec())
    } else {
        (capped(change, k), capped(inner, k))
    };
    let mut subs: Vec<Series> = (0..c.n).map(|i| Series::var(&c.zw, i)).collect();
    subs.extend(inner);
    change.iter().map(|s| s.compose_into(&c.zw, &subs)).collect()
}

/// Brings a real `Q₀` into normal coordinates by changes of `w` alone.
/// Returns the manifold and the change map (old `w` in terms of `(z, w′)`).
pub fn normalize(c: &Coords, q0: &[Series], k: u32) -> Result<(Manifold, Vec<Series>)> {
    check_q(c, q0)?;
    let (n, d) = (c.n, c.d);
    if q0.iter().any(|s| !s.constant_term().is_zero()) {
        return Err(Error::Precondition("Q₀(0) ≠ 0".into()));
    }
    let real = verify_reality(c, q0)?;
    if real.is_false() {
        return Err(Error::NotReal(real.evidence));
    }
    if verify_normal_form(c, q0)?.is_true() {
        return Ok((Manifold::new(c, q0.to_vec(), k)?, identity_change(c)));
    }
    let prec = Precision::UpTo(k);
    let nq = c.q.len();
    let nzw = c.zw.len();
    let mut q: Vec<Series> = q0.to_vec();
    let mut change = identity_change(c);

    // Linear part of u ↦ Q(0, 0, u).
    let lin: linalg::Mat = q
        .iter()
        .map(|s| (0..d).map(|l| s.coeff(&Monomial::var(nq, c.q_tau(l)))).collect())
        .collect();
    if linalg::rank(&lin) < d {
        return Err(Error::SingularLinearPart {
            rank: linalg::rank(&lin),
            expected: d,
            hint: "; the τ-linear part of Q₀(0,0,τ) must be invertible".into(),
        });
    }
    let ident: linalg::Mat = (0..d)
        .map(|i| (0..d).map(|j| if i == j { Coeff::one() } else { Coeff::zero() }).collect())
        .collect();
    if lin != ident {
        // μ = cI + c̄L satisfies L μ̄ = μ because L L̄ = I.
        let mut mu = None;
        'search: for a in 0..4i64 {
            for b in 0..4i64 {
                let cc = Coeff::from_parts(a, b);
                if cc.is_zero() {
                    continue;
                }
                let m: linalg::Mat = (0..d)
                    .map(|i| {
                        (0..d)
                            .map(|j| {
                                let mut v = &cc.conj() * &lin[i][j];
                                if i == j {
                                    v += &cc;
                                }
                                v
                            })
                            .collect()
                    })
                    .collect();
                if linalg::inverse(&m).is_some() {
                    mu = Some(m);
                    break 'search;
                }
            }
        }
        let mu = mu.ok_or_else(|| Error::Internal("no invertible linear normalizer found".into()))?;
        let p: Vec<Series> = mu
            .iter()
            .map(|row| {
                Series::from_terms(
                    &c.zw,
                    Precision::Exact,
                    row.iter()
                        .enumerate()
                        .map(|(j, v)| (Monomial::var(nzw, c.zw_w(j)), v.clone())),
                )
            })
            .collect();
        q = conjugate_by_w_change(c, &q, &p, k)?;
        change = compose_change(c, &change, &p, k)?;
    }

    // Make Q(0, 0, τ) = τ degree by degree: with ψ = id + h + O(deg+1) and
    // h̄ = -h, the change w = w′ + h(w′)/2 removes h. The changes involve `w`
    // alone, so they are found on ψ and applied to Q once.
    let zchi: Vec<usize> = (0..2 * n).collect();
    let mut tau_map = vec![0; nq];
    for i in 0..n {
        tau_map[c.q_z(i)] = i;
        tau_map[c.q_chi(i)] = i;
    }
    for j in 0..d {
        tau_map[c.q_tau(j)] = c.zw_w(j);
    }
    let half = Coeff::from_frac(1, 2);
    let mut psi: Vec<Series> = q.iter().map(|s| s.set_zero(&zchi)).collect();
    let mut total = identity_change(c);
    for deg in 2..=k {
        let h: Vec<Series> = psi
            .iter()
            .map(|s| {
                Series::from_terms(
                    &c.q,
                    Precision::Exact,
                    s.terms().iter().filter(|(m, _)| m.degree() == deg).cloned(),
                )
            })
            .collect();
        if h.iter().all(|s| s.is_zero()) {
            continue;
        }
        let p: Vec<Series> = h
            .iter()
            .enumerate()
            .map(|(j, s)| {
                Series::var(&c.zw, c.zw_w(j)).add(&s.relabel(&c.zw, &tau_map).scale(&half))
            })
            .collect::<Result<_>>()?;
        psi = conjugate_by_w_change(c, &psi, &p, k)?;
        total = compose_change(c, &total, &p, k)?;
    }
    if total != identity_change(c) {
        q = conjugate_by_w_change(c, &q, &total, k)?;
        change = compose_change(c, &change, &total, k)?;
    }

    // w′ = g(z, w) with g(z, ·) the inverse of u ↦ Q(z, 0, u).
    let chis: Vec<usize> = (0..n).map(|i| c.q_chi(i)).collect();
    let phi: Vec<Series> = q
        .iter()
        .map(|s| s.set_zero(&chis).relabel(&c.zw, &tau_map))
        .collect();
    let g = reverse(&phi, &c.zw_w_indices(), k)?;
    let mut bar_map = vec![0; nzw];
    for i in 0..n {
        bar_map[i] = c.q_chi(i);
    }
    for j in 0..d {
        bar_map[n + j] = c.q_tau(j);
    }
    let phi_bar: Vec<Series> = phi.iter().map(|s| s.conj().relabel(&c.q, &bar_map)).collect();
    let mut subs: Vec<Series> = (0..2 * n).map(|i| Series::var(&c.q, i)).collect();
    let (q, phi_bar) = if within_budget(&q, &phi_bar, k) {
        (q, phi_bar)
    } else {
        (capped(&q, k), capped(&phi_bar, k))
    };
    subs.extend(phi_bar);
    let inner: Vec<Series> = q
        .iter()
        .map(|s| s.compose_into(&c.q, &subs))
        .collect::<Result<_>>()?;
    let mut subs2: Vec<Series> = (0..n).map(|i| Series::var(&c.q, c.q_z(i))).collect();
    subs2.extend(inner);
    let q_new: Vec<Series> = g
        .iter()
        .map(|s| s.compose_into(&c.q, &subs2).map(|x| x.truncate(prec)))
        .collect::<Result<_>>()?;
    change = compose_change(c, &change, &phi, k)?;
    let change: Vec<Series> = change.into_iter().map(|s| s.truncate(prec)).collect();

    let normal = verify_normal_form(c, &q_new)?;
    if !normal.is_true() {
        return Err(Error::Internal(format!(
            "normalization did not reach normal form: {}",
            normal.evidence
        )));
    }
    Ok((Manifold::new(c, q_new, k)?, change))
}

/// `v^k(t) = (t^k, u^k(t))` in the variables `t¹, …, t^k`.
#[derive(Clone, Debug)]
pub struct SegreMapping {
    pub k: usize,
    pub ctx: Ctx,
    pub u: Vec<Series>,
    pub v: Vec<Series>,
}

/// Result of the three equivalent finite-type criteria.
#[derive(Clone, Debug)]
pub struct FiniteTypeChecks {
    /// Generic rank of `v^{d+1}` equals `N`.
    pub segre_rank: Verdict,
    /// Generic rank of `u^{d+1}` equals `d`.
    pub u_rank: Verdict,
    /// A `d×d` minor of `∂u^{2m}/∂t′` is nonzero on `W′` (`m = d+1`).
    pub restricted_minor: Verdict,
}

impl FiniteTypeChecks {
    pub fn all(&self) -> [&Verdict; 3] {
        [&self.segre_rank, &self.u_rank, &self.restricted_minor]
    }

    /// No criterion certifies the opposite of another.
    pub fn consistent(&self) -> bool {
        let v = self.all();
        !(v.iter().any(|x| x.is_true()) && v.iter().any(|x| x.is_false()))
    }
}

pub struct Manifold {
    coords: Coords,
    q: Vec<Series>,
    truncation: u32,
    reality: Verdict,
    normality: Verdict,
    segre_cache: Mutex<HashMap<usize, Arc<SegreMapping>>>,
}

impl Clone for Manifold {
    fn clone(&self) -> Self {
        Manifold {
            coords: self.coords.clone(),
            q: self.q.clone(),
            truncation: self.truncation,
            reality: self.reality.clone(),
            normality: self.normality.clone(),
            segre_cache: Mutex::new(HashMap::new()),
        }
    }
}

impl fmt::Debug for Manifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Manifold")
            .field("n", &self.coords.n)
            .field("d", &self.coords.d)
            .field("q", &self.q)
            .finish()
    }
}

impl Manifold {
    /// Accepts `Q` already in normal coordinates; rejects non-real or
    /// non-normal input.
    pub fn new(c: &Coords, q: Vec<Series>, truncation: u32) -> Result<Self> {
        check_q(c, &q)?;
        let reality = verify_reality(c, &q)?;
        if reality.is_false() {
            return Err(Error::NotReal(reality.evidence));
        }
        let normality = verify_normal_form(c, &q)?;
        if normality.is_false() {
            return Err(Error::Precondition(format!(
                "Q is not in normal coordinates ({})",
                normality.evidence
            )));
        }
        Ok(Manifold {
            coords: c.clone(),
            q,
            truncation,
            reality,
            normality,
            segre_cache: Mutex::new(HashMap::new()),
        })
    }

    /// Graph-solves `ρ = 0` for the `split` variables and normalizes.
    pub fn from_defining(c: &Coords, rho: &[Series], split: &[usize], k: u32) -> Result<(Self, Vec<Series>)> {
        let q0 = graph_solve(c, rho, split, k)?;
        normalize(c, &q0, k)
    }

    pub fn coords(&self) -> &Coords {
        &self.coords
    }

    pub fn n(&self) -> usize {
        self.coords.n
    }

    pub fn d(&self) -> usize {
        self.coords.d
    }

    pub fn q(&self) -> &[Series] {
        &self.q
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn is_exact(&self) -> bool {
        self.q.iter().all(|s| s.is_exact())
    }

    pub fn reality(&self) -> &Verdict {
        &self.reality
    }

    pub fn normality(&self) -> &Verdict {
        &self.normality
    }

    pub fn segre_bound(&self) -> usize {
        2 * self.coords.d + 2
    }

    pub fn segre(&self, k: usize) -> Result<Arc<SegreMapping>> {
        if k == 0 {
            return Err(Error::Precondition("Segre mappings start at k = 1".into()));
        }
        if let Some(s) = self.segre_cache.lock().unwrap().get(&k) {
            return Ok(s.clone());
        }
        let c = &self.coords;
        let ctx = c.segre_ctx(k);
        let u: Vec<Series> = if k == 1 {
            vec![Series::zero(&ctx, Precision::Exact); c.d]
        } else {
            let prev = self.segre(k - 1)?;
            let mut subs: Vec<Series> = (0..c.n).map(|i| Series::var(&ctx, c.t_index(k, i))).collect();
            subs.extend((0..c.n).map(|i| Series::var(&ctx, c.t_index(k - 1, i))));
            for s in &prev.u {
                subs.push(s.conj().embed(&ctx)?);
            }
            self.q
                .iter()
                .map(|s| s.compose_into(&ctx, &subs))
                .collect::<Result<_>>()?
        };
        let mut v: Vec<Series> = (0..c.n).map(|i| Series::var(&ctx, c.t_index(k, i))).collect();
        v.extend(u.iter().cloned());
        let seg = Arc::new(SegreMapping { k, ctx, u, v });
        self.segre_cache
            .lock()
            .unwrap()
            .entry(k)
            .or_insert(seg.clone());
        Ok(seg)
    }

    /// Substitution `t^{2m} = 0`, `t^{2m-j} = t^j` from `T_{2m}` into `T_m`.
    pub fn w_restriction(&self, m: usize) -> (Ctx, Vec<Series>) {
        let c = &self.coords;
        let target = c.segre_ctx(m);
        let mut subs = Vec::with_capacity(2 * m * c.n);
        for b in 1..=2 * m {
            for i in 0..c.n {
                let s = if b <= m {
                    Series::var(&target, c.t_index(b, i))
                } else if b < 2 * m {
                    Series::var(&target, c.t_index(2 * m - b, i))
                } else {
                    Series::zero(&target, Precision::Exact)
                };
                subs.push(s);
            }
        }
        (target, subs)
    }

    /// `v^{2m}` vanishes on `W`.
    pub fn w_vanishing(&self, m: usize) -> Result<Verdict> {
        let seg = self.segre(2 * m)?;
        let (target, subs) = self.w_restriction(m);
        let res: Vec<Series> = seg
            .v
            .iter()
            .map(|s| s.compose_into(&target, &subs))
            .collect::<Result<_>>()?;
        Ok(residual_verdict(&res, &format!("v^{} on W", 2 * m)))
    }

    pub fn finite_type_checks(&self, policy: &RankPolicy) -> Result<FiniteTypeChecks> {
        let c = &self.coords;
        let (n, d, nn) = (c.n, c.d, c.big_n());
        let k = d + 1;
        let seg = self.segre(k)?;
        let all_t: Vec<usize> = (0..k * n).collect();
        let label = |v: Verdict, what: &str| Verdict {
            evidence: format!("{what}: {}", v.evidence),
            ..v
        };

        let segre_rank = if n == 0 {
            Verdict::no("no CR directions")
        } else {
            let jv = SeriesMatrix::jacobian(&seg.v, &all_t)?;
            label(local::generic_rank(&jv, nn, policy).full_rank, &format!("rank v^{k}"))
        };
        let u_rank = if n == 0 {
            Verdict::no("no CR directions")
        } else {
            let ju = SeriesMatrix::jacobian(&seg.u, &all_t)?;
            label(local::generic_rank(&ju, d, policy).full_rank, &format!("rank u^{k}"))
        };
        let restricted_minor = if n == 0 {
            Verdict::no("no CR directions")
        } else {
            let m = d + 1;
            let seg2 = self.segre(2 * m)?;
            let tprime: Vec<usize> = (0..(2 * m - 1) * n).collect();
            let jr = SeriesMatrix::jacobian(&seg2.u, &tprime)?;
            let (target, subs) = self.w_restriction(m);
            let entries = jr
                .entries()
                .iter()
                .map(|s| s.compose_into(&target, &subs))
                .collect::<Result<Vec<_>>>()?;
            let restricted = SeriesMatrix::new(&target, jr.rows(), jr.cols(), entries)?;
            label(
                local::generic_rank(&restricted, d, policy).full_rank,
                &format!("d-minor of du^{}/dt' on W'", 2 * m),
            )
        };
        let checks = FiniteTypeChecks {
            segre_rank,
            u_rank,
            restricted_minor,
        };
        if !checks.consistent() {
            return Err(Error::Internal(format!(
                "finite-type criteria disagree: {} / {} / {}",
                checks.segre_rank, checks.u_rank, checks.restricted_minor
            )));
        }
        Ok(checks)
    }

    /// Finite type at 0 via the generic rank of `v^{d+1}`.
    pub fn finite_type(&self, policy: &RankPolicy) -> Result<Verdict> {
        let checks = self.finite_type_checks(policy)?;
        let all = checks.all();
        if let Some(t) = all.iter().find(|v| v.is_true()) {
            return Ok((*t).clone());
        }
        if let Some(f) = all.iter().find(|v| v.is_false()) {
            return Ok((*f).clone());
        }
        Ok(Verdict::unknown(format!(
            "not finite type up to truncation {} ({})",
            self.truncation, checks.segre_rank.evidence
        )))
    }

    /// The essential ideal in `C[[χ]]`, generated by the `z^α`-coefficients of
    /// `Q(z, χ, 0)`.
    pub fn essential_ideal(&self) -> Result<IdealPresentation> {
        let c = &self.coords;
        let taus: Vec<usize> = (0..c.d).map(|j| c.q_tau(j)).collect();
        let zs: Vec<usize> = (0..c.n).map(|i| c.q_z(i)).collect();
        let chis: Vec<usize> = (0..c.n).map(|i| c.q_chi(i)).collect();
        let mut gens = Vec::new();
        for s in &self.q {
            for (alpha, coeff) in s.set_zero(&taus).split_by(&zs, &c.chi, &chis) {
                if alpha.iter().any(|&e| e > 0) {
                    gens.push(coeff);
                }
            }
        }
        if !self.is_exact() {
            // Coefficients of z^α with |α| beyond the truncation are unknown;
            // all that is known is that they vanish at 0.
            gens.push(Series::zero(&c.chi, Precision::UpTo(0)));
        }
        IdealPresentation::new(&c.chi, gens)
    }

    pub fn essential_type(&self, cutoff: u32) -> Result<CodimensionResult> {
        Ok(local::codimension_within(&self.essential_ideal()?, cutoff))
    }

    /// Finite nondegeneracy of order at most `max_order`.
    pub fn finitely_nondegenerate(&self, max_order: u32) -> Result<Verdict> {
        if max_order >= self.truncation {
            return Err(Error::Precondition(format!(
                "nondegeneracy order {max_order} needs truncation above it (have {})",
                self.truncation
            )));
        }
        let c = &self.coords;
        let (n, d, nn) = (c.n, c.d, c.big_n());
        let mut subs: Vec<Series> = (0..2 * n).map(|i| Series::var(&c.zchiw, i)).collect();
        subs.extend(q_bar_zchiw(c, &self.q));
        let zw_vars: Vec<usize> = (0..n).chain(2 * n..2 * n + d).collect();
        // Entries of the rows (-∂Q/∂z, I) restricted to z = w = 0.
        let mut rows: Vec<Vec<Series>> = Vec::with_capacity(d);
        for (j, s) in self.q.iter().enumerate() {
            let mut row = Vec::with_capacity(nn);
            for i in 0..n {
                let e = s.diff(c.q_z(i)).neg().compose_into(&c.zchiw, &subs)?;
                row.push(e.set_zero(&zw_vars));
            }
            for l in 0..d {
                let v = if l == j { Coeff::one() } else { Coeff::zero() };
                row.push(Series::constant(&c.zchiw, v, Precision::Exact));
            }
            rows.push(row);
        }
        let exact = rows.iter().flatten().all(|s| s.is_exact());
        let top = rows
            .iter()
            .flatten()
            .filter_map(|s| s.max_degree())
            .max()
            .unwrap_or(0);
        let mut span = Echelon::new();
        let nv = c.zchiw.len();
        let last = if exact { top.max(max_order) } else { max_order };
        for order in 0..=last {
            for mono in Monomial::all_of_degree(n, order) {
                let mut exps = vec![0u16; nv];
                exps[n..2 * n].copy_from_slice(mono.exps());
                let full = Monomial::new(exps);
                for row in &rows {
                    let vec: Vec<(usize, Coeff)> = row
                        .iter()
                        .enumerate()
                        .map(|(col, s)| (col, s.coeff(&full)))
                        .filter(|(_, v)| !v.is_zero())
                        .collect();
                    span.insert(vec);
                }
            }
            if span.rank() == nn {
                return Ok(if order <= max_order {
                    Verdict::yes(format!("derivatives up to order {order} span C^{nn}")).with_order(order)
                } else {
                    Verdict::unknown(format!(
                        "not finitely nondegenerate up to order {max_order} (spans at order {order})"
                    ))
                });
            }
        }
        Ok(if exact {
            Verdict::no(format!(
                "all derivatives span only dimension {} of {nn}",
                span.rank()
            ))
        } else {
            Verdict::unknown(format!(
                "not finitely nondegenerate up to order {max_order} (span dimension {})",
                span.rank()
            ))
        })
    }
}

impl Manifold {
    /// Whether the stored verdicts allow theorem audits to rely on this manifold.
    pub fn verified(&self) -> bool {
        self.reality.value == Truth::CertifiedTrue && self.normality.value == Truth::CertifiedTrue
    }
}

/// `Q` of `Im w = |z|^{2k}` with `n = d = 1`: `τ + 2i z^k χ^k`.
pub fn power_hypersurface(c: &Coords, k: u16) -> Vec<Series> {
    let nv = c.q.len();
    let mut e = vec![0u16; nv];
    e[c.q_z(0)] = k;
    e[c.q_chi(0)] = k;
    vec![Series::from_terms(
        &c.q,
        Precision::Exact,
        [
            (Monomial::var(nv, c.q_tau(0)), Coeff::one()),
            (Monomial::new(e), Coeff::from_parts(0, 2)),
        ],
    )]
}
