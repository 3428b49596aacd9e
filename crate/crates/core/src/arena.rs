//! Variable arenas: the named slots of the polynomial rings.
//!
//! A ring for a hypersurface in `C^N` carries the holomorphic variables
//! `z1..zN`, their formal conjugates (printed `conj(zk)`), and any auxiliary
//! indeterminates (`t`, `X`, `Y`, `s`, `u`, ...). The conjugation involution
//! pairs `zk` with `conj(zk)` and fixes auxiliaries. Arenas extend append-only,
//! so polynomials lift into extended arenas by zero-padding exponents.

use std::sync::Arc;

/// Index of a variable inside its arena.
pub type VarId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum VarKind {
    /// `z(k+1)`, zero-based coordinate index.
    Holo(usize),
    /// The formal conjugate of `z(k+1)`.
    AntiHolo(usize),
    /// Auxiliary indeterminate, fixed by conjugation.
    Aux(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VariableArena {
    dim: usize,
    vars: Vec<VarKind>,
}

impl VariableArena {
    /// Arena for `C^N`: `z1..zN` then their conjugates, no auxiliaries.
    pub fn complex_space(dim: usize) -> Arc<Self> {
        let mut vars = Vec::with_capacity(2 * dim);
        for k in 0..dim {
            vars.push(VarKind::Holo(k));
        }
        for k in 0..dim {
            vars.push(VarKind::AntiHolo(k));
        }
        Arc::new(VariableArena { dim, vars })
    }

    /// Arena with only auxiliary variables (univariate or plain rings).
    pub fn aux_only(names: &[&str]) -> Arc<Self> {
        let vars = names.iter().map(|n| VarKind::Aux(n.to_string())).collect();
        Arc::new(VariableArena { dim: 0, vars })
    }

    /// Append auxiliary variables, yielding an extended arena.
    pub fn extend_aux(self: &Arc<Self>, names: &[&str]) -> Arc<Self> {
        let mut vars = self.vars.clone();
        for n in names {
            assert!(
                self.lookup(n).is_none(),
                "auxiliary variable `{n}` already present"
            );
            vars.push(VarKind::Aux(n.to_string()));
        }
        Arc::new(VariableArena { dim: self.dim, vars })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn kind(&self, v: VarId) -> &VarKind {
        &self.vars[v]
    }

    pub fn holo(&self, k: usize) -> VarId {
        debug_assert!(k < self.dim);
        k
    }

    pub fn anti(&self, k: usize) -> VarId {
        debug_assert!(k < self.dim);
        self.dim + k
    }

    /// Partner under the conjugation involution (auxiliaries are fixed).
    pub fn conj_partner(&self, v: VarId) -> VarId {
        match &self.vars[v] {
            VarKind::Holo(k) => self.anti(*k),
            VarKind::AntiHolo(k) => self.holo(*k),
            VarKind::Aux(_) => v,
        }
    }

    /// Resolve an identifier: `z1..zN`, `w` (alias for `zN`), or an auxiliary name.
    pub fn lookup(&self, name: &str) -> Option<VarId> {
        if name == "w" && self.dim > 0 {
            return Some(self.holo(self.dim - 1));
        }
        if let Some(rest) = name.strip_prefix('z') {
            if let Ok(k) = rest.parse::<usize>() {
                if k >= 1 && k <= self.dim {
                    return Some(self.holo(k - 1));
                }
                return None;
            }
        }
        self.vars.iter().position(|k| match k {
            VarKind::Aux(n) => n == name,
            _ => false,
        })
    }

    /// Canonical printed name of a variable.
    pub fn name(&self, v: VarId) -> String {
        match &self.vars[v] {
            VarKind::Holo(k) => format!("z{}", k + 1),
            VarKind::AntiHolo(k) => format!("conj(z{})", k + 1),
            VarKind::Aux(n) => n.clone(),
        }
    }

    /// True when `self` is an append-prefix of `other` (lifting is exponent padding).
    pub fn is_prefix_of(&self, other: &VariableArena) -> bool {
        self.dim == other.dim
            && self.vars.len() <= other.vars.len()
            && self.vars[..] == other.vars[..self.vars.len()]
    }
}
