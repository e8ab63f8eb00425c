//! Ordered variable sets shared by every series built over them.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

/// What a variable stands for. Only informational; arithmetic never looks at it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Role {
    Z,
    W,
    Chi,
    Tau,
    /// Segre parameter block `t^j` (1-based).
    TBlock(usize),
    Other,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VariableContext {
    names: Vec<String>,
    roles: Vec<Role>,
}

pub type Ctx = Arc<VariableContext>;

impl VariableContext {
    /// Panics on duplicate names.
    pub fn new(vars: Vec<(String, Role)>) -> Ctx {
        let (names, roles): (Vec<_>, Vec<_>) = vars.into_iter().unzip();
        for (i, n) in names.iter().enumerate() {
            assert!(
                !names[..i].contains(n),
                "duplicate variable name `{n}` in context"
            );
        }
        Arc::new(VariableContext { names, roles })
    }

    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Ctx {
        Self::new(
            names
                .iter()
                .map(|s| (s.as_ref().to_string(), Role::Other))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn role(&self, i: usize) -> Role {
        self.roles[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Indices of all variables carrying `role`, in context order.
    pub fn indices_with_role(&self, role: Role) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.roles[i] == role).collect()
    }
}

pub fn same_ctx(a: &Ctx, b: &Ctx) -> bool {
    Arc::ptr_eq(a, b) || a.names == b.names
}

impl fmt::Debug for VariableContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.names.join(", "))
    }
}

/// Standard coordinate blocks for a submanifold of CR dimension `n` and
/// codimension `d`. Names follow the scenario convention: `z1..zn`, `w1..wd`,
/// `zb1..zbn` for χ and `wb1..wbd` for τ.
#[derive(Clone, Debug)]
pub struct Coords {
    pub n: usize,
    pub d: usize,
    /// `(z, χ, τ)`: the domain of `Q`.
    pub q: Ctx,
    /// `(z, w, χ, τ)`: the domain of a defining series `ρ(Z, ζ)`.
    pub full: Ctx,
    /// `(z, w)`: the domain of a holomorphic map.
    pub zw: Ctx,
    /// `(z, χ, w)`: used by the reality identity.
    pub zchiw: Ctx,
    /// `z` alone.
    pub z: Ctx,
    /// `χ` alone.
    pub chi: Ctx,
    /// `(z, χ)`.
    pub zchi: Ctx,
}

fn block(prefix: &str, count: usize, role: Role) -> Vec<(String, Role)> {
    (1..=count).map(|i| (format!("{prefix}{i}"), role)).collect()
}

impl Coords {
    pub fn new(n: usize, d: usize) -> Self {
        let z = block("z", n, Role::Z);
        let w = block("w", d, Role::W);
        let chi = block("zb", n, Role::Chi);
        let tau = block("wb", d, Role::Tau);
        let cat = |parts: &[&Vec<(String, Role)>]| {
            VariableContext::new(parts.iter().flat_map(|p| p.iter().cloned()).collect())
        };
        Coords {
            n,
            d,
            q: cat(&[&z, &chi, &tau]),
            full: cat(&[&z, &w, &chi, &tau]),
            zw: cat(&[&z, &w]),
            zchiw: cat(&[&z, &chi, &w]),
            z: cat(&[&z]),
            chi: cat(&[&chi]),
            zchi: cat(&[&z, &chi]),
        }
    }

    pub fn big_n(&self) -> usize {
        self.n + self.d
    }

    /// Context `t1_1..t1_n, …, tk_1..tk_n` for the `k`-th Segre mapping.
    pub fn segre_ctx(&self, k: usize) -> Ctx {
        let mut vars = Vec::with_capacity(k * self.n);
        for j in 1..=k {
            for i in 1..=self.n {
                vars.push((format!("t{j}_{i}"), Role::TBlock(j)));
            }
        }
        VariableContext::new(vars)
    }
}
