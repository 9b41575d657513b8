//! Three-valued verdicts for properties that no finite window decides.

use serde::Serialize;

use super::sigma::{
    check_cutoffs, ratio_sweep, sigma_from_sweep, tail_from_sweep, weight_uniformity,
};
use super::SelfMap;
use crate::error::{Error, Result};
use crate::space::Weight;
use crate::tree::{Truncation, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    HoldsWitnessed,
    FailsWitnessed,
    UnknownToDepth,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub witness: Option<VertexId>,
    pub searched_depth: usize,
    /// The quantity the verdict rests on (a ratio, bound or tail value).
    pub value: Option<f64>,
    pub note: String,
}

impl Verdict {
    fn new(status: Status, searched_depth: usize, note: impl Into<String>) -> Self {
        Verdict {
            status,
            witness: None,
            searched_depth,
            value: None,
            note: note.into(),
        }
    }

    fn witness(mut self, w: VertexId) -> Self {
        self.witness = Some(w);
        self
    }

    fn value(mut self, x: f64) -> Self {
        self.value = Some(x);
        self
    }
}

/// Global facts supplied by the user, which no finite window can certify.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Assumption {
    /// `min <= μ(v) <= max` on the whole tree.
    WeightPinch { min: f64, max: f64 },
    /// `φ(T)` is finite.
    FiniteRange,
    /// The exact value of `σ_φ`.
    AnalyticSigma { value: f64 },
}

impl Assumption {
    pub fn label(&self) -> String {
        match self {
            Assumption::WeightPinch { min, max } => format!("pinch={min},{max}"),
            Assumption::FiniteRange => "finite-range".into(),
            Assumption::AnalyticSigma { value } => format!("sigma={value}"),
        }
    }
}

pub fn boundedness_verdict(
    phi: &SelfMap,
    mu: &Weight,
    trunc: &Truncation,
    threshold: f64,
    assumptions: &[Assumption],
) -> Result<Verdict> {
    if !(threshold > 0.0) {
        return Err(Error::Config(format!(
            "blow-up threshold must be positive, got {threshold}"
        )));
    }
    let d = trunc.depth;
    let (vertices, points) = ratio_sweep(phi, mu, trunc)?;
    let est = sigma_from_sweep(d, &vertices, &points);
    if est.value >= threshold {
        return Ok(Verdict::new(
            Status::FailsWitnessed,
            d,
            format!(
                "ratio {} at the witness reaches the blow-up threshold {threshold}",
                est.value
            ),
        )
        .witness(est.witness)
        .value(est.value));
    }
    let mut notes = Vec::new();
    for a in assumptions {
        match *a {
            Assumption::WeightPinch { min, max } => {
                let range = weight_uniformity(mu, trunc)?;
                if range.min.value < min || range.max.value > max {
                    notes.push(format!(
                        "assumed pinch [{min}, {max}] contradicted in the window (weight range [{}, {}])",
                        range.min.value, range.max.value
                    ));
                    continue;
                }
                return Ok(Verdict::new(
                    Status::HoldsWitnessed,
                    d,
                    format!(
                        "bounded under assumed weight pinch [{min}, {max}]: norm at most {}; window lower bound {}",
                        max / min,
                        est.value
                    ),
                )
                .witness(est.witness)
                .value(max / min));
            }
            Assumption::AnalyticSigma { value } => {
                if !value.is_finite() {
                    notes.push(format!("assumed sigma {value} is not finite"));
                } else if est.value > value + super::RATIO_TOLERANCE {
                    notes.push(format!(
                        "assumed sigma {value} contradicted: window lower bound is {}",
                        est.value
                    ));
                } else {
                    return Ok(Verdict::new(
                        Status::HoldsWitnessed,
                        d,
                        format!(
                            "bounded under assumed sigma {value}; window lower bound {}",
                            est.value
                        ),
                    )
                    .witness(est.witness)
                    .value(value));
                }
            }
            Assumption::FiniteRange => {}
        }
    }
    notes.insert(
        0,
        format!(
            "window lower bound {} for the operator norm; boundedness is not decidable on a finite window",
            est.value
        ),
    );
    Ok(Verdict::new(Status::UnknownToDepth, d, notes.join("; "))
        .witness(est.witness)
        .value(est.value))
}

/// Classifies compactness from the essential tail `E_D(N)`.
///
/// A certified or assumed finite range decides compactness. Otherwise a
/// tail that keeps decreasing (or drops below `tol`) is reported as
/// compact-likely, and a tail whose last two defined entries agree within
/// `tol` is reported as failing, with that common value as the evidence.
pub fn compactness_verdict(
    phi: &SelfMap,
    mu: &Weight,
    trunc: &Truncation,
    cutoffs: &[usize],
    tol: f64,
    assumptions: &[Assumption],
) -> Result<Verdict> {
    if !(tol > 0.0) {
        return Err(Error::Config(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    check_cutoffs(cutoffs)?;
    let d = trunc.depth;
    let (vertices, points) = ratio_sweep(phi, mu, trunc)?;
    let height = points.iter().map(|p| p.image_len).max().unwrap_or(0);

    let assumed = assumptions.contains(&Assumption::FiniteRange);
    if phi.has_finite_range() || assumed {
        let source = if phi.has_finite_range() {
            "certified"
        } else {
            "assumed"
        };
        return Ok(Verdict::new(
            Status::HoldsWitnessed,
            d,
            format!(
                "compact: finite range ({source}); image of the window has length at most {height}"
            ),
        )
        .value(0.0));
    }

    let tail = tail_from_sweep(d, &vertices, &points, cutoffs);
    let defined: Vec<_> = tail
        .rows
        .iter()
        .filter_map(|r| Some((r.cutoff, r.value?, r.witness.clone()?)))
        .collect();
    let Some((n_last, last, w_last)) = defined.last().cloned() else {
        return Ok(Verdict::new(
            Status::UnknownToDepth,
            d,
            format!(
                "finite range up to depth {d}: every image has length at most {height} < {}; assert finite-range to certify",
                cutoffs[0]
            ),
        ));
    };
    if last < tol {
        return Ok(Verdict::new(
            Status::UnknownToDepth,
            d,
            format!(
                "compact-likely: tail value {last} at cutoff {n_last} is below tolerance {tol}"
            ),
        )
        .witness(w_last)
        .value(last));
    }
    if defined.len() < 2 {
        return Ok(Verdict::new(
            Status::UnknownToDepth,
            d,
            format!("only cutoff {n_last} has a nonempty tail in the window; increase depth or add cutoffs"),
        )
        .witness(w_last)
        .value(last));
    }
    let (n_prev, prev, _) = &defined[defined.len() - 2];
    if (prev - last).abs() <= tol {
        let mut note = format!(
            "not compact within the window: tail stabilizes at {last} over cutoffs {n_prev}..{n_last}; \
             essential-norm lower-bound evidence {last}"
        );
        if mu.constant_value().is_some() {
            note.push_str("; constant weight with infinite range in the window: essential norm 1");
        }
        Ok(Verdict::new(Status::FailsWitnessed, d, note)
            .witness(w_last)
            .value(last))
    } else {
        let first = defined[0].1;
        Ok(Verdict::new(
            Status::UnknownToDepth,
            d,
            format!(
                "compact-likely: tail decreasing from {first} at cutoff {} to {last} at cutoff {n_last}",
                defined[0].0
            ),
        )
        .witness(w_last)
        .value(last))
    }
}
