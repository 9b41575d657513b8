//! Rooted, locally finite trees without terminal vertices.
//!
//! A tree is described lazily by its branching function: the number of
//! children of each vertex. Vertices are addressed by the path of child
//! indices from the root, so every operation here works on arbitrarily deep
//! vertices without materializing the tree.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default cap on the number of vertices a single truncation may enumerate.
pub const DEFAULT_VERTEX_BUDGET: usize = 1_000_000;

/// Address of a vertex: the child indices along the path from the root.
///
/// The derived ordering is lexicographic on paths, with a prefix ordered
/// before its extensions. It is the tie-breaking order for every witness.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(Vec<u32>);

impl VertexId {
    pub fn root() -> Self {
        VertexId(Vec::new())
    }

    pub fn from_path(path: Vec<u32>) -> Self {
        VertexId(path)
    }

    /// The all-zero path of the given length.
    pub fn spine(length: usize) -> Self {
        VertexId(vec![0; length])
    }

    pub fn path(&self) -> &[u32] {
        &self.0
    }

    /// `|v|`, the distance to the root.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last_index(&self) -> Option<u32> {
        self.0.last().copied()
    }

    pub fn child(&self, index: u32) -> Self {
        let mut path = Vec::with_capacity(self.0.len() + 1);
        path.extend_from_slice(&self.0);
        path.push(index);
        VertexId(path)
    }

    pub fn parent(&self) -> Result<Self> {
        match self.0.split_last() {
            Some((_, rest)) => Ok(VertexId(rest.to_vec())),
            None => Err(Error::NoParent),
        }
    }

    /// Parent for non-root vertices, the root itself otherwise.
    pub fn parent_or_root(&self) -> Self {
        self.parent().unwrap_or_default()
    }

    /// Length of the longest common prefix, i.e. the depth of the meeting
    /// vertex of the two root paths.
    pub fn common_prefix_len(&self, other: &VertexId) -> usize {
        self.0
            .iter()
            .zip(other.0.iter())
            .take_while(|(a, b)| a == b)
            .count()
    }

    /// Edge-counting distance, without validating either address.
    pub fn distance_to(&self, other: &VertexId) -> usize {
        self.len() + other.len() - 2 * self.common_prefix_len(other)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("o");
        }
        for (i, idx) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{idx}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VertexId({self})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed vertex address {0:?}")]
pub struct VertexParseError(pub String);

impl FromStr for VertexId {
    type Err = VertexParseError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        if s == "o" {
            return Ok(VertexId::root());
        }
        s.split('.')
            .map(|part| {
                part.parse::<u32>()
                    .map_err(|_| VertexParseError(s.to_owned()))
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(VertexId)
    }
}

impl Serialize for VertexId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for VertexId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

type BranchingFn = dyn Fn(&[u32]) -> Result<usize> + Send + Sync;

#[derive(Clone)]
enum Branching {
    Constant(usize),
    Func(Arc<BranchingFn>),
}

/// A lazily evaluated rooted tree, given by its child-count function.
#[derive(Clone)]
pub struct TreeSpec {
    branching: Branching,
}

impl fmt::Debug for TreeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.branching {
            Branching::Constant(k) => write!(f, "TreeSpec::Constant({k})"),
            Branching::Func(_) => f.write_str("TreeSpec::Func(..)"),
        }
    }
}

impl TreeSpec {
    /// The homogeneous tree in which every vertex has `k` children.
    pub fn constant(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidBranching {
                vertex: "o".into(),
                value: "0".into(),
            });
        }
        Ok(TreeSpec {
            branching: Branching::Constant(k),
        })
    }

    pub fn binary() -> Self {
        TreeSpec {
            branching: Branching::Constant(2),
        }
    }

    /// The single ray `o, 0, 0.0, ...`.
    pub fn unary() -> Self {
        TreeSpec {
            branching: Branching::Constant(1),
        }
    }

    /// A tree whose branching is computed from the vertex path.
    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(&[u32]) -> usize + Send + Sync + 'static,
    {
        TreeSpec {
            branching: Branching::Func(Arc::new(move |p| Ok(f(p)))),
        }
    }

    pub fn try_from_fn<F>(f: F) -> Self
    where
        F: Fn(&[u32]) -> Result<usize> + Send + Sync + 'static,
    {
        TreeSpec {
            branching: Branching::Func(Arc::new(f)),
        }
    }

    pub fn constant_branching(&self) -> Option<usize> {
        match self.branching {
            Branching::Constant(k) => Some(k),
            Branching::Func(_) => None,
        }
    }

    /// Child count of the vertex at `path`. The path itself is not validated.
    pub fn branching_at(&self, path: &[u32]) -> Result<usize> {
        match &self.branching {
            Branching::Constant(k) => Ok(*k),
            Branching::Func(f) => {
                let k = f(path)?;
                if k == 0 {
                    return Err(Error::InvalidBranching {
                        vertex: VertexId(path.to_vec()).to_string(),
                        value: k.to_string(),
                    });
                }
                Ok(k)
            }
        }
    }

    pub fn branching(&self, v: &VertexId) -> Result<usize> {
        self.validate(v)?;
        self.branching_at(v.path())
    }

    /// Checks every index of `v` against the branching of its ancestor.
    pub fn validate(&self, v: &VertexId) -> Result<()> {
        let path = v.path();
        for (depth, &index) in path.iter().enumerate() {
            let b = self.branching_at(&path[..depth])?;
            if index as usize >= b {
                return Err(Error::Address {
                    vertex: v.to_string(),
                    depth,
                    index: index as u64,
                    branching: b,
                });
            }
        }
        Ok(())
    }

    pub fn children(&self, v: &VertexId) -> Result<Vec<VertexId>> {
        let k = self.branching(v)?;
        Ok((0..k as u32).map(|i| v.child(i)).collect())
    }

    pub fn distance(&self, v: &VertexId, w: &VertexId) -> Result<usize> {
        self.validate(v)?;
        self.validate(w)?;
        Ok(v.distance_to(w))
    }
}

/// The finite window `{v : |v| <= depth}` of a tree.
#[derive(Debug, Clone)]
pub struct Truncation {
    pub tree: TreeSpec,
    pub depth: usize,
    pub budget: usize,
}

impl Truncation {
    pub fn new(tree: TreeSpec, depth: usize) -> Self {
        Truncation {
            tree,
            depth,
            budget: DEFAULT_VERTEX_BUDGET,
        }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn at_depth(&self, depth: usize) -> Self {
        Truncation {
            tree: self.tree.clone(),
            depth,
            budget: self.budget,
        }
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        v.len() <= self.depth && self.tree.validate(v).is_ok()
    }

    /// Breadth-first listing of the window, root first, children in index
    /// order. Fails with a budget error instead of truncating silently.
    pub fn enumerate(&self) -> Result<Vec<VertexId>> {
        let mut out = vec![VertexId::root()];
        let mut queue = VecDeque::new();
        if self.depth > 0 {
            queue.push_back(0usize);
        }
        while let Some(i) = queue.pop_front() {
            let k = self.tree.branching_at(out[i].path())?;
            let needed = out.len() + k;
            if needed > self.budget {
                return Err(Error::Budget {
                    limit: self.budget,
                    needed,
                });
            }
            let child_depth = out[i].len() + 1;
            for c in 0..k as u32 {
                let child = out[i].child(c);
                out.push(child);
                if child_depth < self.depth {
                    queue.push_back(out.len() - 1);
                }
            }
        }
        if out.len() > self.budget {
            return Err(Error::Budget {
                limit: self.budget,
                needed: out.len(),
            });
        }
        Ok(out)
    }
}
