//! Seeded random triples `(M, M̃, H)` with `M = H⁻¹(M̃)`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeff::Coeff;
use crate::context::Coords;
use crate::error::{Error, Result};
use crate::manifold::{graph_solve, normalize, Manifold};
use crate::mapping::FormalMapPair;
use crate::series::{Monomial, Precision, Series};

const RETRIES: u64 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeedSpec {
    pub seed: u64,
    pub n: usize,
    pub d: usize,
    pub truncation: u32,
}

fn small(rng: &mut ChaCha8Rng, bound: i64) -> Coeff {
    Coeff::from_parts(rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound))
}

fn nonzero_small(rng: &mut ChaCha8Rng, bound: i64) -> Coeff {
    loop {
        let c = small(rng, bound);
        if c != Coeff::from_int(0) {
            return c;
        }
    }
}

/// A real `φ_j(z, χ, s)` with every term divisible by some `z_i` and some
/// `χ_i`, as a series in the `(z, w, χ, τ)` context where `s = (w + τ)/2`.
fn random_real_phi(c: &Coords, rng: &mut ChaCha8Rng, levi: bool, with_s: bool) -> Result<Series> {
    let (n, d) = (c.n, c.d);
    let nv = c.full.len();
    let chi = |i: usize| n + d + i;
    let mut phi = Series::zero(&c.full, Precision::Exact);
    if levi {
        for i in 0..n {
            let mut e = vec![0u16; nv];
            e[i] = 1;
            e[chi(i)] = 1;
            phi = phi.add(&Series::from_terms(&c.full, Precision::Exact, [(Monomial::new(e), Coeff::from_int(1))]))?;
        }
    }
    let s_parts: Vec<Series> = (0..d)
        .map(|j| {
            let w = Series::var(&c.full, n + j);
            let t = Series::var(&c.full, 2 * n + d + j);
            w.add(&t).map(|x| x.scale(&Coeff::from_frac(1, 2)))
        })
        .collect::<Result<_>>()?;
    let count = rng.gen_range(1..=3);
    for _ in 0..count {
        let mut a = vec![0u16; n];
        let mut b = vec![0u16; n];
        a[rng.gen_range(0..n)] += 1;
        b[rng.gen_range(0..n)] += 1;
        for _ in 0..rng.gen_range(0..=2) {
            if rng.gen_bool(0.5) {
                a[rng.gen_range(0..n)] += 1;
            } else {
                b[rng.gen_range(0..n)] += 1;
            }
        }
        let coeff = nonzero_small(rng, 2);
        let mut e1 = vec![0u16; nv];
        let mut e2 = vec![0u16; nv];
        for i in 0..n {
            e1[i] = a[i];
            e1[chi(i)] = b[i];
            e2[i] = b[i];
            e2[chi(i)] = a[i];
        }
        let mut pair = Series::from_terms(
            &c.full,
            Precision::Exact,
            [(Monomial::new(e1), coeff.clone()), (Monomial::new(e2), coeff.conj())],
        );
        if with_s && rng.gen_bool(0.5) {
            let j = rng.gen_range(0..d);
            pair = pair.mul(&s_parts[j])?;
        }
        phi = phi.add(&pair)?;
    }
    Ok(phi)
}

/// Target `w − τ − 2iφ(z, χ, (w+τ)/2) = 0`, graph-solved and normalized.
fn random_target(c: &Coords, rng: &mut ChaCha8Rng, k: u32) -> Result<Arc<Manifold>> {
    let with_s = rng.gen_bool(0.5);
    let mut rho = Vec::with_capacity(c.d);
    for j in 0..c.d {
        let levi = if j == 0 { rng.gen_bool(0.75) } else { rng.gen_bool(0.5) };
        let phi = random_real_phi(c, rng, levi, with_s)?;
        let w = Series::var(&c.full, c.n + j);
        let t = Series::var(&c.full, 2 * c.n + c.d + j);
        rho.push(w.sub(&t)?.sub(&phi.scale(&Coeff::from_parts(0, 2)))?);
    }
    let split: Vec<usize> = (c.n..c.n + c.d).collect();
    let q0 = graph_solve(c, &rho, &split, k)?;
    let r = Arc::new(normalize(c, &q0, k)?.0);
    Ok(r)
}

/// `H = (F, G)` with `det ∂G/∂w(0) ≠ 0`; `F(z, 0)` sometimes starts at
/// order two.
fn random_map(c: &Coords, rng: &mut ChaCha8Rng) -> Result<(Vec<Series>, Vec<Series>)> {
    let (n, d) = (c.n, c.d);
    let nv = c.zw.len();
    let lin = |i: usize, cf: Coeff| Series::from_terms(&c.zw, Precision::Exact, [(Monomial::var(nv, i), cf)]);
    let quad = |i: usize, j: usize, cf: Coeff| {
        let mut e = vec![0u16; nv];
        e[i] += 1;
        e[j] += 1;
        Series::from_terms(&c.zw, Precision::Exact, [(Monomial::new(e), cf)])
    };
    let squared_lead = rng.gen_bool(0.3);
    let mut f = Vec::with_capacity(n);
    for i in 0..n {
        let mut s = if squared_lead && i == 0 {
            quad(0, 0, Coeff::from_int(1))
        } else {
            lin(i, nonzero_small(rng, 2))
        };
        for j in 0..nv {
            if rng.gen_bool(0.3) && !(squared_lead && i == 0 && j < n) {
                s = s.add(&lin(j, small(rng, 1)))?;
            }
        }
        if rng.gen_bool(0.5) {
            let (a, b) = (rng.gen_range(0..nv), rng.gen_range(0..nv));
            s = s.add(&quad(a, b, small(rng, 2)))?;
        }
        f.push(s);
    }
    let mut g = Vec::with_capacity(d);
    loop {
        let m: Vec<Vec<Coeff>> = (0..d)
            .map(|_| (0..d).map(|_| small(rng, 2)).collect())
            .collect();
        if crate::linalg::det(&m) != Coeff::from_int(0) {
            for row in &m {
                let mut s = Series::zero(&c.zw, Precision::Exact);
                for (l, cf) in row.iter().enumerate() {
                    s = s.add(&lin(n + l, cf.clone()))?;
                }
                if rng.gen_bool(0.5) {
                    let (a, b) = (rng.gen_range(0..nv), rng.gen_range(0..nv));
                    s = s.add(&quad(a, b, small(rng, 2)))?;
                }
                g.push(s);
            }
            break;
        }
    }
    Ok((f, g))
}

/// Pulls `target` back by `H = (F, G)`: `M = H⁻¹(M̃)`, graph-solved,
/// normalized, with `H` rewritten in the normal coordinates of `M`.
pub fn pullback_triple(target: Arc<Manifold>, f: &[Series], g: &[Series], k: u32) -> Result<FormalMapPair> {
    let c = target.coords().clone();
    let (n, d) = (c.n, c.d);
    let nfull = c.full.len();
    let h: Vec<Series> = f.iter().chain(g).cloned().collect();
    let h_full: Vec<Series> = h.iter().map(|s| s.embed(&c.full)).collect::<Result<_>>()?;
    let mut bar_map = vec![0; n + d];
    for (i, slot) in bar_map.iter_mut().enumerate() {
        *slot = n + d + i;
    }
    let h_bar: Vec<Series> = h.iter().map(|s| s.conj().relabel(&c.full, &bar_map)).collect();
    // ρ̃ = w̃ − Q̃(z̃, χ̃, τ̃) on (H, H̄).
    let mut subs: Vec<Series> = h_full[..n].to_vec();
    subs.extend(h_bar[..n].iter().cloned());
    subs.extend(h_bar[n..].iter().cloned());
    let prec = Precision::UpTo(k);
    let rho: Vec<Series> = target
        .q()
        .iter()
        .enumerate()
        .map(|(j, qt)| {
            let r = h_full[n + j].sub(&qt.compose_into(&c.full, &subs)?)?;
            Ok(if r.is_exact() && r.max_degree().unwrap_or(0) <= k { r } else { r.truncate(prec) })
        })
        .collect::<Result<_>>()?;
    debug_assert_eq!(rho[0].ctx().len(), nfull);
    let split: Vec<usize> = (n..n + d).collect();
    let q0 = graph_solve(&c, &rho, &split, k)?;
    let (source, change) = normalize(&c, &q0, k)?;
    let mut csubs: Vec<Series> = (0..n).map(|i| Series::var(&c.zw, i)).collect();
    csubs.extend(change);
    let h_new: Vec<Series> = h
        .iter()
        .map(|s| s.compose_into(&c.zw, &csubs))
        .collect::<Result<_>>()?;
    let pair = FormalMapPair::attach(Arc::new(source), target, h_new[..n].to_vec(), h_new[n..].to_vec())?;
    if !pair.verified() {
        return Err(Error::Internal(format!(
            "pullback pair failed its mapping check: {}",
            pair.maps_into()
        )));
    }
    Ok(pair)
}

/// A random normalized target, a random CR transversal `H`, and the pulled
/// back source. Retries with derived seeds when graph-solving or
/// normalization fails.
pub fn generate_audit_triple(spec: SeedSpec) -> Result<FormalMapPair> {
    if spec.n == 0 || spec.d == 0 {
        return Err(Error::Precondition("generator needs n, d ≥ 1".into()));
    }
    let c = Coords::new(spec.n, spec.d);
    let mut last = None;
    for attempt in 0..RETRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed.wrapping_mul(RETRIES).wrapping_add(attempt));
        let built = random_target(&c, &mut rng, spec.truncation).and_then(|target| {
            let (f, g) = random_map(&c, &mut rng)?;
            pullback_triple(target, &f, &g, spec.truncation)
        });
        match built {
            Ok(pair) => return Ok(pair),
            Err(e @ Error::Internal(_)) => return Err(e),
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::Internal("no attempts made".into())))
}
