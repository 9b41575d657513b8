//! Composition operators on weighted sup-norm spaces of rooted trees.
//!
//! For a rooted tree `T` without terminal vertices, a positive weight `μ`
//! and a self-map `φ`, this crate computes, over finite windows of `T`:
//!
//! * the weighted norm `‖f‖_μ = sup μ(v)|f(v)|` and point-evaluation norms;
//! * `σ_φ = sup μ(v)/μ(φ(v))`, which is the norm of `C_φ f = f ∘ φ`;
//! * the essential-norm tail `sup_{|φ(v)| >= N} μ(v)/μ(φ(v))`;
//! * boundedness, compactness and isometry verdicts that never claim more
//!   than the window shows.
//!
//! Infinite objects are written in a small expression language ([`dsl`])
//! and the [`oracle`] module cross-checks the closed-form quantities by
//! brute force on fully finite instances.

pub mod dsl;
pub mod error;
pub mod examples;
pub mod model;
pub mod operator;
pub mod oracle;
pub mod reduce;
pub mod report;
pub mod space;
pub mod tree;

pub use error::{Error, Result};
pub use model::Model;
pub use operator::{SelfMap, Status, Verdict};
pub use space::{Scalar, TreeFunction, Weight};
pub use tree::{TreeSpec, Truncation, VertexId};
