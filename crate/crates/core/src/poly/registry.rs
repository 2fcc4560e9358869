use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a variable inside a [`VarRegistry`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VarId(pub u32);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// An ordered list of uniquely named variables.
///
/// Registries are plain values shared through `Arc`; two registries are
/// interchangeable exactly when their name lists agree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct VarRegistry {
    names: Vec<String>,
}

impl VarRegistry {
    pub fn new<I, S>(names: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        Self::validate(&names)?;
        Ok(Arc::new(Self { names }))
    }

    fn validate(names: &[String]) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for name in names {
            let valid = !name.is_empty()
                && name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(Error::InvalidParameter(format!("bad variable name `{name}`")));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateVariable(name.clone()));
            }
        }
        Ok(())
    }

    /// `x1..xn, y1..yn`; `x_i` has index `i-1`, `y_i` has index `n+i-1`.
    pub fn biquadratic(n: usize) -> Arc<Self> {
        let names = (1..=n).map(|i| format!("x{i}")).chain((1..=n).map(|i| format!("y{i}")));
        Self::new(names).expect("generated names are unique")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, v: VarId) -> &str {
        &self.names[v.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn lookup(&self, name: &str) -> Option<VarId> {
        self.names.iter().position(|n| n == name).map(|i| VarId(i as u32))
    }

    pub fn var(&self, name: &str) -> Result<VarId> {
        self.lookup(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn ids(&self) -> impl Iterator<Item = VarId> {
        (0..self.names.len() as u32).map(VarId)
    }

    /// Same registry, either by pointer or by name list.
    pub fn same_as(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || self.names == other.names
    }
}

impl TryFrom<Vec<String>> for VarRegistry {
    type Error = Error;

    fn try_from(names: Vec<String>) -> Result<Self> {
        Self::validate(&names)?;
        Ok(Self { names })
    }
}

impl From<VarRegistry> for Vec<String> {
    fn from(r: VarRegistry) -> Self {
        r.names
    }
}

impl fmt::Display for VarRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.names.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates() {
        assert!(matches!(VarRegistry::new(["x", "y", "x"]), Err(Error::DuplicateVariable(_))));
        assert!(VarRegistry::new(["1x"]).is_err());
    }

    #[test]
    fn biquadratic_layout() {
        let r = VarRegistry::biquadratic(3);
        assert_eq!(r.names(), ["x1", "x2", "x3", "y1", "y2", "y3"]);
        assert_eq!(r.lookup("y2"), Some(VarId(4)));
    }
}
