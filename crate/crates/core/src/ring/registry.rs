use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Role of a variable inside a registry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    /// Dual coordinate `x_k` attached to a basis generator.
    Coordinate,
    /// Formal parameter of a family (`lambda2`, `eps`, ...).
    Parameter,
    /// Auxiliary coefficient introduced by a computation (`a1`, `c3`, ...).
    Auxiliary,
}

impl fmt::Display for VarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VarKind::Coordinate => "coordinate",
            VarKind::Parameter => "parameter",
            VarKind::Auxiliary => "auxiliary",
        })
    }
}

/// Ordered list of named variables. The order is the monomial order used by
/// every polynomial built on the registry.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VarRegistry {
    vars: Vec<(String, VarKind)>,
}

impl VarRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registry holding `x1..x{dim}` followed by the given parameters.
    pub fn for_algebra<S: AsRef<str>>(dim: usize, params: &[S]) -> Result<Arc<Self>> {
        let mut reg = Self::new();
        for k in 1..=dim {
            reg.add(format!("x{k}"), VarKind::Coordinate)?;
        }
        for p in params {
            reg.add(p.as_ref(), VarKind::Parameter)?;
        }
        Ok(Arc::new(reg))
    }

    pub fn add(&mut self, name: impl Into<String>, kind: VarKind) -> Result<usize> {
        let name = name.into();
        if self.index_of(&name).is_some() {
            return Err(Error::DuplicateVariable(name));
        }
        self.vars.push((name, kind));
        Ok(self.vars.len() - 1)
    }

    /// Copy of `self` with extra variables appended; existing ids are kept.
    pub fn extended<S: AsRef<str>>(&self, extra: &[S], kind: VarKind) -> Result<Arc<Self>> {
        let mut reg = self.clone();
        for name in extra {
            reg.add(name.as_ref(), kind)?;
        }
        Ok(Arc::new(reg))
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn name(&self, id: usize) -> &str {
        &self.vars[id].0
    }

    pub fn kind(&self, id: usize) -> VarKind {
        self.vars[id].1
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|(n, _)| n == name)
    }

    pub fn lookup(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn check(&self, id: usize) -> Result<()> {
        if id < self.vars.len() {
            Ok(())
        } else {
            Err(Error::VariableOutOfRange {
                id,
                len: self.vars.len(),
            })
        }
    }

    pub fn ids_of_kind(&self, kind: VarKind) -> Vec<usize> {
        (0..self.vars.len())
            .filter(|&i| self.vars[i].1 == kind)
            .collect()
    }

    pub fn names_of_kind(&self, kind: VarKind) -> Vec<String> {
        self.vars
            .iter()
            .filter(|(_, k)| *k == kind)
            .map(|(n, _)| n.clone())
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, VarKind)> {
        self.vars.iter().map(|(n, k)| (n.as_str(), *k))
    }
}

/// Registries are compared by pointer first, then by content.
pub fn same_registry(a: &Arc<VarRegistry>, b: &Arc<VarRegistry>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}
