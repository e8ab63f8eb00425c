//! The worked examples of the theory as ready-made map pairs.

use std::sync::Arc;

use crate::coeff::Coeff;
use crate::context::{Coords, Ctx};
use crate::error::Result;
use crate::manifold::{graph_solve, normalize, power_hypersurface, Manifold};
use crate::mapping::FormalMapPair;
use crate::series::{Monomial, Precision, Series};

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub description: String,
    pub pair: FormalMapPair,
}

/// `c · Π x^e` with variables given by name.
pub fn term(ctx: &Ctx, c: Coeff, vars: &[(&str, u16)]) -> Series {
    let mut exps = vec![0u16; ctx.len()];
    for (name, e) in vars {
        let i = ctx
            .index_of(name)
            .unwrap_or_else(|| panic!("no variable {name} in {ctx:?}"));
        exps[i] += e;
    }
    Series::from_terms(ctx, Precision::Exact, [(Monomial::new(exps), c)])
}

pub fn sum(terms: &[Series]) -> Series {
    terms[1..].iter().fold(terms[0].clone(), |a, b| a.add(b).expect("same context"))
}

fn two_i() -> Coeff {
    Coeff::from_parts(0, 2)
}

/// `Im w = |z_1|² + … + |z_n|²` for `d = 1`.
pub fn quadric(c: &Coords) -> Vec<Series> {
    let mut t = vec![term(&c.q, Coeff::from_int(1), &[("wb1", 1)])];
    for i in 1..=c.n {
        let (z, zb) = (format!("z{i}"), format!("zb{i}"));
        t.push(term(&c.q, two_i(), &[(&z, 1), (&zb, 1)]));
    }
    vec![sum(&t)]
}

fn manifold(c: &Coords, q: Vec<Series>, k: u32) -> Result<Arc<Manifold>> {
    Ok(Arc::new(Manifold::new(c, q, k)?))
}

fn from_defining(c: &Coords, rho: Vec<Series>, k: u32) -> Result<Arc<Manifold>> {
    let split: Vec<usize> = (c.n..c.n + c.d).collect();
    let q0 = graph_solve(c, &rho, &split, k)?;
    Ok(Arc::new(normalize(c, &q0, k)?.0))
}

/// `Im w = |z|^{2k}` into `Im w = |z|²` by `H = (z^k, w)`.
pub fn power_map(k: u16, trunc: u32) -> Result<Fixture> {
    let c = Coords::new(1, 1);
    let source = manifold(&c, power_hypersurface(&c, k), trunc)?;
    let target = manifold(&c, quadric(&c), trunc)?;
    let f = vec![term(&c.zw, Coeff::from_int(1), &[("z1", k)])];
    let g = vec![term(&c.zw, Coeff::from_int(1), &[("w1", 1)])];
    Ok(Fixture {
        name: format!("power-{k}"),
        description: format!("Im w = |z|^{} into Im w = |z|^2 by H = (z^{k}, w)", 2 * k),
        pair: FormalMapPair::attach(source, target, f, g)?,
    })
}

/// Quadric into `Im w̃ = Re w̃ |z̃|²` by `H = (z, 0)`: not totally degenerate,
/// finite-type source, infinite-type target.
pub fn degenerate_target(trunc: u32) -> Result<Fixture> {
    let c = Coords::new(1, 1);
    let source = manifold(&c, quadric(&c), trunc)?;
    // Q̃ = τ (1 + izχ) / (1 − izχ).
    let izchi = term(&c.q, Coeff::i(), &[("z1", 1), ("zb1", 1)]);
    let one = Series::one(&c.q);
    let num = one.add(&izchi)?.mul(&Series::var_named(&c.q, "wb1").unwrap())?;
    let den = one.sub(&izchi)?.invert_unit(trunc)?;
    let qt = num.mul(&den)?.truncate(Precision::UpTo(trunc));
    let target = manifold(&c, vec![qt], trunc)?;
    let f = vec![Series::var_named(&c.zw, "z1").unwrap()];
    let g = vec![Series::zero(&c.zw, Precision::Exact)];
    Ok(Fixture {
        name: "degenerate-target".into(),
        description: "Im w = |z|^2 into Im w = Re w |z|^2 by H = (z, 0)".into(),
        pair: FormalMapPair::attach(source, target, f, g)?,
    })
}

/// `Im w = |zw|²` into the quadric by `H = (zw, w)`: `Jac H ≢ 0` but the
/// source is of infinite type.
pub fn infinite_type_source(trunc: u32) -> Result<Fixture> {
    let c = Coords::new(1, 1);
    let one = Coeff::from_int(1);
    let rho = sum(&[
        term(&c.full, one.clone(), &[("w1", 1)]),
        term(&c.full, -&one, &[("wb1", 1)]),
        term(&c.full, -&two_i(), &[("z1", 1), ("zb1", 1), ("w1", 1), ("wb1", 1)]),
    ]);
    let source = from_defining(&c, vec![rho], trunc)?;
    let target = manifold(&c, quadric(&c), trunc)?;
    let f = vec![term(&c.zw, one.clone(), &[("z1", 1), ("w1", 1)])];
    let g = vec![term(&c.zw, one, &[("w1", 1)])];
    Ok(Fixture {
        name: "infinite-type-source".into(),
        description: "Im w = |zw|^2 into Im w = |z|^2 by H = (zw, w)".into(),
        pair: FormalMapPair::attach(source, target, f, g)?,
    })
}

/// `Im w = |z_1|² + |z_2 w|²` into the quadric of `C³` by
/// `H = (z_1, z_2 w, w)`: CR transversal with `Jac H ≢ 0`, yet not finite.
pub fn cr_transversal_not_finite(trunc: u32) -> Result<Fixture> {
    let c = Coords::new(2, 1);
    let one = Coeff::from_int(1);
    let rho = sum(&[
        term(&c.full, one.clone(), &[("w1", 1)]),
        term(&c.full, -&one, &[("wb1", 1)]),
        term(&c.full, -&two_i(), &[("z1", 1), ("zb1", 1)]),
        term(&c.full, -&two_i(), &[("z2", 1), ("zb2", 1), ("w1", 1), ("wb1", 1)]),
    ]);
    let source = from_defining(&c, vec![rho], trunc)?;
    let target = manifold(&c, quadric(&c), trunc)?;
    let f = vec![
        term(&c.zw, one.clone(), &[("z1", 1)]),
        term(&c.zw, one.clone(), &[("z2", 1), ("w1", 1)]),
    ];
    let g = vec![term(&c.zw, one, &[("w1", 1)])];
    Ok(Fixture {
        name: "cr-transversal-not-finite".into(),
        description: "Im w = |z1|^2 + |z2 w|^2 into Im w = |z1|^2 + |z2|^2 by H = (z1, z2 w, w)".into(),
        pair: FormalMapPair::attach(source, target, f, g)?,
    })
}

/// `H(z_1, z_2) = (z_1, i z_1)` against `R² ⊂ C²`: transversal but not CR
/// transversal. No generic source of codimension 2 is mapped into the
/// target, so the pair carries a failed mapping residual.
pub fn transversal_not_cr(trunc: u32) -> Result<Fixture> {
    let c = Coords::new(0, 2);
    let real_plane = vec![
        Series::var_named(&c.q, "wb1").unwrap(),
        Series::var_named(&c.q, "wb2").unwrap(),
    ];
    let source = manifold(&c, real_plane.clone(), trunc)?;
    let target = manifold(&c, real_plane, trunc)?;
    let g = vec![
        term(&c.zw, Coeff::from_int(1), &[("w1", 1)]),
        term(&c.zw, Coeff::i(), &[("w1", 1)]),
    ];
    Ok(Fixture {
        name: "transversal-not-cr".into(),
        description: "R^2 in C^2 with H = (z1, i z1)".into(),
        pair: FormalMapPair::attach(source, target, Vec::new(), g)?,
    })
}

/// All worked examples at truncation `trunc`, in a fixed order.
pub fn example_fixtures(trunc: u32) -> Result<Vec<Fixture>> {
    let mut out = Vec::new();
    for k in 2..=4 {
        out.push(power_map(k, trunc)?);
    }
    out.push(degenerate_target(trunc)?);
    out.push(infinite_type_source(trunc)?);
    out.push(transversal_not_cr(trunc)?);
    out.push(cr_transversal_not_finite(trunc)?);
    Ok(out)
}
