//! Ordered, labeled tensor-product factors.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One tensor factor: a label and its dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Space {
    pub label: String,
    pub dim: usize,
}

/// Ordered list of labeled tensor factors. The first entry is the most
/// significant one in the row-major index of the joint space.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SpaceList {
    entries: Vec<Space>,
}

impl SpaceList {
    pub fn new<I, S>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let entries: Vec<Space> = entries
            .into_iter()
            .map(|(label, dim)| Space {
                label: label.into(),
                dim,
            })
            .collect();
        let mut seen = HashSet::new();
        for s in &entries {
            if s.dim == 0 {
                return Err(Error::InvalidSpaces(format!("space `{}` has dimension 0", s.label)));
            }
            if s.label.is_empty() {
                return Err(Error::InvalidSpaces("empty label".into()));
            }
            if !seen.insert(s.label.as_str()) {
                return Err(Error::InvalidSpaces(format!("duplicate label `{}`", s.label)));
            }
        }
        Ok(Self { entries })
    }

    /// The trivial (one-dimensional) space.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn single(label: impl Into<String>, dim: usize) -> Result<Self> {
        Self::new([(label.into(), dim)])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Space> {
        self.entries.iter()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.entries.iter().map(|s| s.dim).collect()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.entries.iter().map(|s| s.label.as_str()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.entries.iter().map(|s| s.dim).product()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.entries.iter().position(|s| s.label == label)
    }

    pub fn contains(&self, label: &str) -> bool {
        self.position(label).is_some()
    }

    pub fn dim_of(&self, label: &str) -> Result<usize> {
        self.entries
            .iter()
            .find(|s| s.label == label)
            .map(|s| s.dim)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Tensor concatenation `self ⊗ other`.
    pub fn concat(&self, other: &SpaceList) -> Result<Self> {
        for s in &other.entries {
            if self.contains(&s.label) {
                return Err(Error::LabelCollision(s.label.clone()));
            }
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(Self { entries })
    }

    /// Factors whose labels are in `labels`, in this list's order.
    pub fn retain(&self, labels: &[&str]) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .filter(|s| labels.contains(&s.label.as_str()))
                .cloned()
                .collect(),
        }
    }

    /// Factors whose labels are not in `labels`, in this list's order.
    pub fn without(&self, labels: &[&str]) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .filter(|s| !labels.contains(&s.label.as_str()))
                .cloned()
                .collect(),
        }
    }

    /// Reorders to `order`, which must be a permutation of the labels.
    pub fn reordered(&self, order: &[&str]) -> Result<Self> {
        if !self.same_labels_as_slice(order) {
            return Err(Error::NotPermutation(format!("{order:?}")));
        }
        let entries = order
            .iter()
            .map(|l| self.entries[self.position(l).unwrap()].clone())
            .collect();
        Ok(Self { entries })
    }

    /// Same label set (and dims) regardless of order.
    pub fn same_set(&self, other: &SpaceList) -> bool {
        self.len() == other.len()
            && other
                .entries
                .iter()
                .all(|s| self.entries.iter().any(|t| t == s))
    }

    fn same_labels_as_slice(&self, order: &[&str]) -> bool {
        if order.len() != self.len() {
            return false;
        }
        let set: HashSet<&str> = order.iter().copied().collect();
        set.len() == order.len() && order.iter().all(|l| self.contains(l))
    }

    /// Renames every label through `f`.
    pub fn relabeled(&self, f: impl Fn(&str) -> String) -> Result<Self> {
        Self::new(self.entries.iter().map(|s| (f(&s.label), s.dim)))
    }
}

impl fmt::Display for SpaceList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, s) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}", s.label, s.dim)?;
        }
        write!(f, "]")
    }
}

/// Mixed-radix strides for row-major indexing (first factor most significant).
pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// Label used for copy `copy` of `n` parallel repetitions. A single copy
/// keeps its labels.
pub fn copy_label(label: &str, copy: usize, n: usize) -> String {
    if n == 1 {
        label.to_string()
    } else {
        format!("{label}#{copy}")
    }
}
