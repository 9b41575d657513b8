//! Composition operators `C_φ f = f ∘ φ` and their classification.

mod isometry;
mod sigma;
mod verdict;

use std::fmt;
use std::sync::Arc;

pub use isometry::{isometry_report, Check, IsometryReport};
pub use sigma::{
    check_cutoffs, essential_tail, ratio_sweep, sigma, sigma_from_sweep, tail_from_sweep,
    weight_uniformity, EssentialTail, RatioPoint, SigmaEstimate, TailRow, TraceRow, WeightRange,
};
pub use verdict::{boundedness_verdict, compactness_verdict, Assumption, Status, Verdict};

use crate::error::Result;
use crate::space::{PointEvaluation, TreeFunction};
use crate::tree::{TreeSpec, VertexId};

/// Ratio comparisons (`μ(v)/μ(φ(v)) = 1` and the like) use this absolute
/// tolerance.
pub const RATIO_TOLERANCE: f64 = 1e-9;

type MapFn = dyn Fn(&VertexId) -> Result<VertexId> + Send + Sync;
type BoundedMapFn = dyn Fn(&VertexId, usize) -> Result<Option<VertexId>> + Send + Sync;

/// A self-map `φ` of a tree. Every output is validated against the tree.
#[derive(Clone)]
pub struct SelfMap {
    f: Arc<MapFn>,
    within: Option<Arc<BoundedMapFn>>,
    tree: TreeSpec,
    finite_range: bool,
}

impl fmt::Debug for SelfMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SelfMap")
            .field("tree", &self.tree)
            .field("finite_range", &self.finite_range)
            .finish_non_exhaustive()
    }
}

impl SelfMap {
    pub fn from_fn<F>(tree: TreeSpec, f: F) -> Self
    where
        F: Fn(&VertexId) -> VertexId + Send + Sync + 'static,
    {
        Self::try_from_fn(tree, move |v| Ok(f(v)))
    }

    pub fn try_from_fn<F>(tree: TreeSpec, f: F) -> Self
    where
        F: Fn(&VertexId) -> Result<VertexId> + Send + Sync + 'static,
    {
        let t = tree.clone();
        SelfMap {
            f: Arc::new(move |v| {
                let w = f(v)?;
                t.validate(&w)?;
                Ok(w)
            }),
            within: None,
            tree,
            finite_range: false,
        }
    }

    /// Wraps a map whose outputs are already validated against `tree`.
    pub(crate) fn prevalidated<F>(tree: TreeSpec, f: F) -> Self
    where
        F: Fn(&VertexId) -> Result<VertexId> + Send + Sync + 'static,
    {
        SelfMap {
            f: Arc::new(f),
            within: None,
            tree,
            finite_range: false,
        }
    }

    pub fn identity(tree: TreeSpec) -> Self {
        Self::prevalidated(tree, |v| Ok(v.clone()))
    }

    /// The constant map onto `w`; its range is finite by construction.
    pub fn constant(tree: TreeSpec, w: VertexId) -> Result<Self> {
        tree.validate(&w)?;
        Ok(Self::prevalidated(tree, move |_| Ok(w.clone())).with_finite_range())
    }

    /// `v ↦ v⁻` off the root, `o ↦ o`.
    pub fn parent_or_root(tree: TreeSpec) -> Self {
        Self::prevalidated(tree, |v| Ok(v.parent_or_root()))
    }

    /// Marks the range of the map as known to be finite.
    pub fn with_finite_range(mut self) -> Self {
        self.finite_range = true;
        self
    }

    /// Supplies a cheaper evaluation for [`SelfMap::eval_within`]. `g` must
    /// agree with the map whenever it returns an image.
    pub(crate) fn with_bounded_eval<G>(mut self, g: G) -> Self
    where
        G: Fn(&VertexId, usize) -> Result<Option<VertexId>> + Send + Sync + 'static,
    {
        self.within = Some(Arc::new(g));
        self
    }

    pub fn has_finite_range(&self) -> bool {
        self.finite_range
    }

    pub fn tree(&self) -> &TreeSpec {
        &self.tree
    }

    pub fn eval(&self, v: &VertexId) -> Result<VertexId> {
        (self.f)(v)
    }

    /// `φ(v)` if `|φ(v)| <= max_len`, otherwise `None`.
    pub fn eval_within(&self, v: &VertexId, max_len: usize) -> Result<Option<VertexId>> {
        match &self.within {
            Some(g) => g(v, max_len),
            None => Ok(Some(self.eval(v)?).filter(|w| w.len() <= max_len)),
        }
    }
}

/// `C_φ f`, evaluated lazily as `v ↦ f(φ(v))`.
pub fn compose(phi: &SelfMap, f: &TreeFunction) -> TreeFunction {
    let (phi, f) = (phi.clone(), f.clone());
    TreeFunction::try_from_fn(move |v| f.eval(&phi.eval(v)?))
}

/// The truncation operator `A_n`: keeps `f` on `|v| <= n`, zero beyond.
pub fn truncation_apply(n: usize, f: &TreeFunction) -> TreeFunction {
    f.restrict_depth(n)
}

/// `C_φ^* K_v = K_{φ(v)}`.
pub fn adjoint_point_eval(phi: &SelfMap, v: &VertexId) -> Result<PointEvaluation> {
    Ok(PointEvaluation::new(phi.eval(v)?))
}
