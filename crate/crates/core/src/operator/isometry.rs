use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap};
use std::hash::{Hash, Hasher};

use serde::Serialize;

use super::sigma::sigma_from_sweep;
use super::verdict::{Status, Verdict};
use super::{RatioPoint, SelfMap, RATIO_TOLERANCE};
use crate::error::{Error, Result};
use crate::reduce::par_eval;
use crate::space::Weight;
use crate::tree::{Truncation, VertexId};

/// One finite-window check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub holds: bool,
    pub witness: Option<VertexId>,
    /// Second vertex of a collision, for the injectivity check.
    pub partner: Option<VertexId>,
    pub value: Option<f64>,
    pub note: String,
}

impl Check {
    fn pass(note: impl Into<String>) -> Self {
        Check {
            holds: true,
            witness: None,
            partner: None,
            value: None,
            note: note.into(),
        }
    }

    fn fail(witness: VertexId, note: impl Into<String>) -> Self {
        Check {
            holds: false,
            witness: Some(witness),
            partner: None,
            value: None,
            note: note.into(),
        }
    }

    fn value(mut self, x: f64) -> Self {
        self.value = Some(x);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsometryReport {
    pub depth: usize,
    pub preimage_depth: usize,
    /// `μ(v)/μ(φ(v)) = 1` for all `|v| <= D`.
    pub ratio_identically_one: Check,
    /// `sup_{|v| <= D} μ(v)/μ(φ(v)) = 1`.
    pub sup_ratio_one: Check,
    /// Every `|w| <= D` has a preimage with `|v| <= M`.
    pub surjective: Check,
    /// No two vertices with `|v| <= D` share an image.
    pub injective: Check,
    /// `‖C_φ χ_w‖ <= ‖χ_w‖` for all `|w| <= D`, with `‖C_φ χ_w‖` bounded
    /// below by the preimages found within depth `M`.
    pub chi_norms: Check,
    pub verdict: Verdict,
}

fn image_hash(w: &VertexId) -> u64 {
    let mut h = DefaultHasher::new();
    w.hash(&mut h);
    h.finish()
}

/// Per-vertex data from one evaluation of `φ`.
struct Sample {
    ratio: Option<f64>,
    /// Meaningful for window vertices.
    image_len: usize,
    /// Kept only for window vertices.
    image_hash: Option<u64>,
    /// Kept only when `|φ(v)| <= D`.
    short_image: Option<VertexId>,
    weight: Option<f64>,
}

pub fn isometry_report(
    phi: &SelfMap,
    mu: &Weight,
    trunc: &Truncation,
    preimage_depth: usize,
) -> Result<IsometryReport> {
    let d = trunc.depth;
    if preimage_depth < d {
        return Err(Error::Config(format!(
            "preimage depth {preimage_depth} is smaller than the search depth {d}"
        )));
    }
    let outer = trunc.at_depth(preimage_depth).enumerate()?;
    // BFS order: the depth-D window is a prefix of the preimage window.
    let inner_len = outer.iter().take_while(|v| v.len() <= d).count();

    let samples = par_eval(&outer, |v| {
        if v.len() > d {
            // outside the window only short images matter
            let short_image = phi.eval_within(v, d)?;
            let weight = match short_image {
                Some(_) => Some(mu.eval(v)?),
                None => None,
            };
            return Ok(Sample {
                ratio: None,
                image_len: short_image.as_ref().map_or(0, VertexId::len),
                image_hash: None,
                short_image,
                weight,
            });
        }
        let w = phi.eval(v)?;
        let m = mu.eval(v)?;
        Ok(Sample {
            ratio: Some(m / mu.eval(&w)?),
            image_len: w.len(),
            image_hash: Some(image_hash(&w)),
            short_image: (w.len() <= d).then_some(w),
            weight: Some(m),
        })
    })?;

    let inner = &outer[..inner_len];
    let points: Vec<RatioPoint> = samples[..inner_len]
        .iter()
        .map(|s| RatioPoint {
            ratio: s.ratio.expect("computed for the window"),
            image_len: s.image_len,
        })
        .collect();

    // (a) ratio identically one
    let off = inner
        .iter()
        .zip(&points)
        .filter(|(_, p)| (p.ratio - 1.0).abs() > RATIO_TOLERANCE)
        .min_by(|a, b| a.0.cmp(b.0));
    let ratio_identically_one = match off {
        None => Check::pass(format!("ratio is 1 at every vertex with |v| <= {d}")),
        Some((v, p)) => Check::fail(v.clone(), format!("ratio {} at {v}", p.ratio)).value(p.ratio),
    };

    // (b) sup ratio one
    let est = sigma_from_sweep(d, inner, &points);
    let sup_ratio_one = if (est.value - 1.0).abs() <= RATIO_TOLERANCE {
        Check::pass("window supremum of the ratio is 1").value(est.value)
    } else {
        Check::fail(
            est.witness.clone(),
            format!(
                "window supremum of the ratio is {} (attained at {})",
                est.value, est.witness
            ),
        )
        .value(est.value)
    };

    // Best preimage weight for each short image: a lower bound for ‖C_φ χ_w‖.
    let mut preimage_weight: BTreeMap<&VertexId, f64> = BTreeMap::new();
    for s in &samples {
        if let (Some(w), Some(m)) = (&s.short_image, s.weight) {
            let e = preimage_weight.entry(w).or_insert(m);
            if m > *e {
                *e = m;
            }
        }
    }

    // (c) surjective up to depth
    let missing = inner
        .iter()
        .filter(|w| !preimage_weight.contains_key(w))
        .min();
    let surjective = match missing {
        None => Check::pass(format!(
            "every vertex with |w| <= {d} has a preimage with |v| <= {preimage_depth}"
        )),
        Some(w) => Check::fail(
            w.clone(),
            format!("{w} has no preimage with |v| <= {preimage_depth}"),
        ),
    };

    // (d) injective on the window; equal hashes are confirmed by re-evaluation
    let mut buckets: HashMap<(usize, u64), Vec<usize>> = HashMap::new();
    for (i, s) in samples[..inner_len].iter().enumerate() {
        let h = s.image_hash.expect("hashed for the window");
        buckets.entry((s.image_len, h)).or_default().push(i);
    }
    let mut collision: Option<(VertexId, VertexId)> = None;
    for idx in buckets.values().filter(|b| b.len() > 1) {
        let images = idx
            .iter()
            .map(|&i| phi.eval(&inner[i]))
            .collect::<Result<Vec<_>>>()?;
        let mut groups: HashMap<&VertexId, Vec<&VertexId>> = HashMap::new();
        for (w, &i) in images.iter().zip(idx) {
            groups.entry(w).or_default().push(&inner[i]);
        }
        for members in groups.values_mut().filter(|m| m.len() > 1) {
            // the smallest pair in a group is its two smallest members
            members.sort();
            let pair = (members[0].clone(), members[1].clone());
            if collision.as_ref().is_none_or(|c| pair < *c) {
                collision = Some(pair);
            }
        }
    }
    let injective = match collision {
        None => Check::pass(format!("no two vertices with |v| <= {d} share an image")),
        Some((x, y)) => {
            let mut c = Check::fail(x.clone(), format!("{x} and {y} have the same image"));
            c.partner = Some(y);
            c
        }
    };

    // χ_w probe, in lexicographic order of w
    let mut mismatch: Option<(VertexId, f64, f64)> = None;
    for (&w, &best) in &preimage_weight {
        let own = mu.eval(w)?;
        if best > own + RATIO_TOLERANCE {
            mismatch = Some((w.clone(), best, own));
            break;
        }
    }
    let chi_norms = match mismatch {
        None => Check::pass("no characteristic function is expanded within the window"),
        Some((w, best, own)) => Check::fail(
            w.clone(),
            format!("‖C_φ χ_{w}‖ >= {best} > ‖χ_{w}‖ = {own}"),
        )
        .value(best),
    };

    let verdict = combine(
        d,
        &ratio_identically_one,
        &sup_ratio_one,
        &surjective,
        &injective,
        &chi_norms,
    );
    Ok(IsometryReport {
        depth: d,
        preimage_depth,
        ratio_identically_one,
        sup_ratio_one,
        surjective,
        injective,
        chi_norms,
        verdict,
    })
}

fn combine(
    d: usize,
    ratio_one: &Check,
    sup_one: &Check,
    surjective: &Check,
    injective: &Check,
    chi: &Check,
) -> Verdict {
    let verdict = |status, witness: &Option<VertexId>, value, note: String| Verdict {
        status,
        witness: witness.clone(),
        searched_depth: d,
        value,
        note,
    };
    let sup = sup_one.value.unwrap_or(f64::NAN);
    if !sup_one.holds && sup > 1.0 {
        return verdict(
            Status::FailsWitnessed,
            &sup_one.witness,
            sup_one.value,
            format!("not an isometry: operator norm is at least {sup} > 1"),
        );
    }
    if !chi.holds {
        return verdict(
            Status::FailsWitnessed,
            &chi.witness,
            chi.value,
            format!("not an isometry: {}", chi.note),
        );
    }
    if !surjective.holds {
        return verdict(
            Status::FailsWitnessed,
            &surjective.witness,
            None,
            format!(
                "not surjective up to the preimage depth: {}",
                surjective.note
            ),
        );
    }
    if ratio_one.holds {
        return verdict(
            Status::HoldsWitnessed,
            &None,
            Some(1.0),
            format!("isometry evidence: ratio identically 1 and surjective up to depth {d}"),
        );
    }
    let note = if injective.holds {
        format!(
            "{}; injective on the window, so a globally injective map with this ratio is not an isometry",
            ratio_one.note
        )
    } else {
        format!(
            "necessary conditions hold in the window but {}",
            ratio_one.note
        )
    };
    verdict(
        Status::UnknownToDepth,
        &ratio_one.witness,
        ratio_one.value,
        note,
    )
}
