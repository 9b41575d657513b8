//! Weights, functions on trees, and the weighted sup norm.
//!
//! Every supremum here is taken over a [`Truncation`] and reported with an
//! `exact` flag that is set only when the window provably contains the whole
//! support of the function.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::reduce::{argmax, par_eval};
use crate::tree::{Truncation, VertexId};

pub type Scalar = Complex64;

type WeightFn = dyn Fn(&VertexId) -> Result<f64> + Send + Sync;

/// A strictly positive weight `mu` on the vertices.
#[derive(Clone)]
pub struct Weight {
    f: Arc<WeightFn>,
    constant: Option<f64>,
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.constant {
            Some(c) => write!(f, "Weight::Constant({c})"),
            None => f.write_str("Weight::Func(..)"),
        }
    }
}

impl Weight {
    /// The constant weight 1, which turns `L∞_μ` into `L∞`.
    pub fn one() -> Self {
        Weight {
            f: Arc::new(|_| Ok(1.0)),
            constant: Some(1.0),
        }
    }

    pub fn constant(c: f64) -> Result<Self> {
        check_positive(&VertexId::root(), c)?;
        Ok(Weight {
            f: Arc::new(move |_| Ok(c)),
            constant: Some(c),
        })
    }

    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(&VertexId) -> f64 + Send + Sync + 'static,
    {
        Weight {
            f: Arc::new(move |v| Ok(f(v))),
            constant: None,
        }
    }

    pub fn try_from_fn<F>(f: F) -> Self
    where
        F: Fn(&VertexId) -> Result<f64> + Send + Sync + 'static,
    {
        Weight {
            f: Arc::new(f),
            constant: None,
        }
    }

    /// A weight that depends on `|v|` only.
    pub fn by_length<F>(f: F) -> Self
    where
        F: Fn(usize) -> f64 + Send + Sync + 'static,
    {
        Self::from_fn(move |v| f(v.len()))
    }

    pub fn constant_value(&self) -> Option<f64> {
        self.constant
    }

    /// Evaluates the weight, rejecting zero, negative and non-finite values.
    pub fn eval(&self, v: &VertexId) -> Result<f64> {
        let value = (self.f)(v)?;
        check_positive(v, value)?;
        Ok(value)
    }
}

fn check_positive(v: &VertexId, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveWeight {
            vertex: v.to_string(),
            value,
        })
    }
}

type ScalarFn = dyn Fn(&VertexId) -> Result<Scalar> + Send + Sync;

/// A complex-valued function on the vertices of a tree.
#[derive(Clone)]
pub enum TreeFunction {
    /// Explicit values on a finite set, zero elsewhere. Zero entries are
    /// never stored, so the keys are exactly the support.
    Finite(BTreeMap<VertexId, Scalar>),
    /// Closure-defined; `support_depth` is a known bound on `|v|` over the
    /// support, when one exists.
    Closure {
        eval: Arc<ScalarFn>,
        support_depth: Option<usize>,
    },
}

impl fmt::Debug for TreeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeFunction::Finite(m) => f.debug_tuple("Finite").field(m).finish(),
            TreeFunction::Closure { support_depth, .. } => f
                .debug_struct("Closure")
                .field("support_depth", support_depth)
                .finish_non_exhaustive(),
        }
    }
}

impl TreeFunction {
    pub fn zero() -> Self {
        TreeFunction::Finite(BTreeMap::new())
    }

    pub fn finite<I>(entries: I) -> Self
    where
        I: IntoIterator<Item = (VertexId, Scalar)>,
    {
        TreeFunction::Finite(
            entries
                .into_iter()
                .filter(|(_, z)| *z != Scalar::new(0.0, 0.0))
                .collect(),
        )
    }

    /// The characteristic function of a single vertex.
    pub fn chi(w: VertexId) -> Self {
        Self::finite([(w, Scalar::new(1.0, 0.0))])
    }

    pub fn constant(c: Scalar) -> Self {
        Self::from_fn(move |_| c)
    }

    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(&VertexId) -> Scalar + Send + Sync + 'static,
    {
        TreeFunction::Closure {
            eval: Arc::new(move |v| Ok(f(v))),
            support_depth: None,
        }
    }

    pub fn try_from_fn<F>(f: F) -> Self
    where
        F: Fn(&VertexId) -> Result<Scalar> + Send + Sync + 'static,
    {
        TreeFunction::Closure {
            eval: Arc::new(f),
            support_depth: None,
        }
    }

    pub fn eval(&self, v: &VertexId) -> Result<Scalar> {
        match self {
            TreeFunction::Finite(m) => Ok(m.get(v).copied().unwrap_or_default()),
            TreeFunction::Closure { eval, .. } => eval(v),
        }
    }

    /// Exact support, for finitely supported functions.
    pub fn support(&self) -> Option<Vec<&VertexId>> {
        match self {
            TreeFunction::Finite(m) => Some(m.keys().collect()),
            TreeFunction::Closure { .. } => None,
        }
    }

    /// A bound on `|v|` over the support, if one is known.
    pub fn support_depth(&self) -> Option<usize> {
        match self {
            TreeFunction::Finite(m) => Some(m.keys().map(VertexId::len).max().unwrap_or(0)),
            TreeFunction::Closure { support_depth, .. } => *support_depth,
        }
    }

    pub fn scale(&self, c: Scalar) -> Self {
        match self {
            TreeFunction::Finite(m) => Self::finite(m.iter().map(|(v, z)| (v.clone(), z * c))),
            TreeFunction::Closure {
                eval,
                support_depth,
            } => {
                let eval = eval.clone();
                TreeFunction::Closure {
                    eval: Arc::new(move |v| Ok(eval(v)? * c)),
                    support_depth: *support_depth,
                }
            }
        }
    }

    pub fn sub(&self, other: &TreeFunction) -> Self {
        match (self, other) {
            (TreeFunction::Finite(a), TreeFunction::Finite(b)) => {
                let mut out = a.clone();
                for (v, z) in b {
                    *out.entry(v.clone()).or_default() -= z;
                }
                Self::finite(out)
            }
            _ => {
                let (f, g) = (self.clone(), other.clone());
                let support_depth = match (f.support_depth(), g.support_depth()) {
                    (Some(a), Some(b)) => Some(a.max(b)),
                    _ => None,
                };
                TreeFunction::Closure {
                    eval: Arc::new(move |v| Ok(f.eval(v)? - g.eval(v)?)),
                    support_depth,
                }
            }
        }
    }

    /// The function that agrees with `self` for `|v| <= n` and vanishes
    /// beyond (the operator `A_n`).
    pub fn restrict_depth(&self, n: usize) -> Self {
        match self {
            TreeFunction::Finite(m) => Self::finite(
                m.iter()
                    .filter(|(v, _)| v.len() <= n)
                    .map(|(v, z)| (v.clone(), *z)),
            ),
            TreeFunction::Closure {
                eval,
                support_depth,
            } => {
                let eval = eval.clone();
                TreeFunction::Closure {
                    eval: Arc::new(move |v| {
                        if v.len() <= n {
                            eval(v)
                        } else {
                            Ok(Scalar::default())
                        }
                    }),
                    support_depth: Some(support_depth.map_or(n, |d| d.min(n))),
                }
            }
        }
    }

    /// Tabulates the function over a window.
    pub fn materialize(&self, trunc: &Truncation) -> Result<TreeFunction> {
        let vertices = trunc.enumerate()?;
        let values = par_eval(&vertices, |v| self.eval(v))?;
        Ok(Self::finite(vertices.into_iter().zip(values)))
    }
}

/// A supremum over a truncation window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    pub witness: VertexId,
    /// True when the value is the norm over the whole tree.
    pub exact: bool,
}

/// `sup μ(v)|f(v)|` over the window, with the lexicographically smallest
/// attaining vertex.
pub fn mu_norm(f: &TreeFunction, mu: &Weight, trunc: &Truncation) -> Result<NormEstimate> {
    if let TreeFunction::Finite(m) = f {
        for v in m.keys() {
            trunc.tree.validate(v)?;
        }
    }
    let vertices = trunc.enumerate()?;
    let terms = par_eval(&vertices, |v| Ok(mu.eval(v)? * f.eval(v)?.norm()))?;
    let best = argmax(terms.iter().copied().zip(vertices.iter()))
        .expect("a truncation always contains the root");
    Ok(NormEstimate {
        value: best.value,
        witness: best.witness,
        exact: f.support_depth().is_some_and(|d| d <= trunc.depth),
    })
}

/// The plain sup norm `‖f‖_∞` over the window.
pub fn sup_norm(f: &TreeFunction, trunc: &Truncation) -> Result<NormEstimate> {
    mu_norm(f, &Weight::one(), trunc)
}

/// `χ_w / μ`, the unit-norm function concentrated at `w`.
pub fn normalized_chi(w: &VertexId, mu: &Weight) -> Result<TreeFunction> {
    let m = mu.eval(w)?;
    Ok(TreeFunction::finite([(
        w.clone(),
        Scalar::new(1.0 / m, 0.0),
    )]))
}

/// The point-evaluation functional `K_v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PointEvaluation {
    pub at: VertexId,
}

impl PointEvaluation {
    pub fn new(at: VertexId) -> Self {
        PointEvaluation { at }
    }

    pub fn apply(&self, f: &TreeFunction) -> Result<Scalar> {
        f.eval(&self.at)
    }

    pub fn norm(&self, mu: &Weight) -> Result<f64> {
        point_eval_norm(&self.at, mu)
    }
}

pub fn point_eval(k: &PointEvaluation, f: &TreeFunction) -> Result<Scalar> {
    k.apply(f)
}

/// `‖K_v‖ = 1/μ(v)`.
pub fn point_eval_norm(v: &VertexId, mu: &Weight) -> Result<f64> {
    Ok(1.0 / mu.eval(v)?)
}
