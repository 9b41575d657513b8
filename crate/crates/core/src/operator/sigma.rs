use serde::Serialize;

use super::SelfMap;
use crate::error::{Error, Result};
use crate::reduce::{argmax, argmin, par_eval, Extremum};
use crate::space::Weight;
use crate::tree::{Truncation, VertexId};

/// `μ(v)/μ(φ(v))` and `|φ(v)|` at one vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioPoint {
    pub ratio: f64,
    pub image_len: usize,
}

/// Evaluates the ratio at every vertex of the window, in enumeration order.
pub fn ratio_sweep(
    phi: &SelfMap,
    mu: &Weight,
    trunc: &Truncation,
) -> Result<(Vec<VertexId>, Vec<RatioPoint>)> {
    let vertices = trunc.enumerate()?;
    let points = par_eval(&vertices, |v| {
        let w = phi.eval(v)?;
        Ok(RatioPoint {
            ratio: mu.eval(v)? / mu.eval(&w)?,
            image_len: w.len(),
        })
    })?;
    Ok((vertices, points))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub depth: usize,
    /// Largest ratio among vertices of exactly this length.
    pub level_sup: f64,
    pub level_witness: VertexId,
    /// Smallest ratio among vertices of exactly this length.
    pub level_inf: f64,
    /// Largest ratio among vertices of length at most `depth`.
    pub running_sup: f64,
    pub running_witness: VertexId,
}

/// `sup_{|v| <= D} μ(v)/μ(φ(v))`, a lower bound for `σ_φ = ‖C_φ‖`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SigmaEstimate {
    pub depth: usize,
    pub value: f64,
    pub witness: VertexId,
    pub ratio_trace: Vec<TraceRow>,
}

pub fn sigma(phi: &SelfMap, mu: &Weight, trunc: &Truncation) -> Result<SigmaEstimate> {
    let (vertices, points) = ratio_sweep(phi, mu, trunc)?;
    Ok(sigma_from_sweep(trunc.depth, &vertices, &points))
}

pub fn sigma_from_sweep(
    depth: usize,
    vertices: &[VertexId],
    points: &[RatioPoint],
) -> SigmaEstimate {
    let mut ratio_trace = Vec::with_capacity(depth + 1);
    let mut running: Option<Extremum> = None;
    for d in 0..=depth {
        let at_level = || {
            points
                .iter()
                .zip(vertices)
                .filter(move |(_, v)| v.len() == d)
                .map(|(p, v)| (p.ratio, v))
        };
        let level = argmax(at_level())
            .expect("every level of a tree without terminal vertices is nonempty");
        let level_inf = argmin(at_level()).expect("nonempty").value;
        running = match running {
            Some(r)
                if r.value > level.value
                    || (r.value == level.value && r.witness < level.witness) =>
            {
                Some(r)
            }
            _ => Some(level.clone()),
        };
        let r = running.as_ref().expect("set above");
        ratio_trace.push(TraceRow {
            depth: d,
            level_sup: level.value,
            level_witness: level.witness,
            level_inf,
            running_sup: r.value,
            running_witness: r.witness.clone(),
        });
    }
    let best = running.expect("depth 0 is always present");
    SigmaEstimate {
        depth,
        value: best.value,
        witness: best.witness,
        ratio_trace,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightRange {
    pub min: Extremum,
    pub max: Extremum,
}

/// Exact minimum and maximum of the weight over the window.
pub fn weight_uniformity(mu: &Weight, trunc: &Truncation) -> Result<WeightRange> {
    let vertices = trunc.enumerate()?;
    let values = par_eval(&vertices, |v| mu.eval(v))?;
    let items = || values.iter().copied().zip(vertices.iter());
    Ok(WeightRange {
        min: argmin(items()).expect("nonempty"),
        max: argmax(items()).expect("nonempty"),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailRow {
    pub cutoff: usize,
    /// `None` when no vertex of the window has `|φ(v)| >= cutoff`.
    pub value: Option<f64>,
    pub witness: Option<VertexId>,
}

/// `E_D(N) = sup { μ(v)/μ(φ(v)) : |v| <= D, |φ(v)| >= N }` for each cutoff.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EssentialTail {
    pub depth: usize,
    pub rows: Vec<TailRow>,
}

impl EssentialTail {
    pub fn get(&self, cutoff: usize) -> Option<&TailRow> {
        self.rows.iter().find(|r| r.cutoff == cutoff)
    }
}

pub fn essential_tail(
    phi: &SelfMap,
    mu: &Weight,
    trunc: &Truncation,
    cutoffs: &[usize],
) -> Result<EssentialTail> {
    check_cutoffs(cutoffs)?;
    let (vertices, points) = ratio_sweep(phi, mu, trunc)?;
    Ok(tail_from_sweep(trunc.depth, &vertices, &points, cutoffs))
}

pub fn check_cutoffs(cutoffs: &[usize]) -> Result<()> {
    if cutoffs.is_empty() {
        return Err(Error::Config("cutoff list is empty".into()));
    }
    if cutoffs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("cutoffs must be strictly ascending".into()));
    }
    Ok(())
}

pub fn tail_from_sweep(
    depth: usize,
    vertices: &[VertexId],
    points: &[RatioPoint],
    cutoffs: &[usize],
) -> EssentialTail {
    let rows = cutoffs
        .iter()
        .map(|&n| {
            let best = argmax(
                points
                    .iter()
                    .zip(vertices)
                    .filter(|(p, _)| p.image_len >= n)
                    .map(|(p, v)| (p.ratio, v)),
            );
            TailRow {
                cutoff: n,
                value: best.as_ref().map(|e| e.value),
                witness: best.map(|e| e.witness),
            }
        })
        .collect();
    EssentialTail { depth, rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::TreeSpec;

    fn v(s: &str) -> VertexId {
        s.parse().unwrap()
    }

    #[test]
    fn doubling_weight_parent_map() {
        let tree = TreeSpec::binary();
        let mu = Weight::by_length(|n| 2f64.powi(n as i32));
        let est = sigma(
            &SelfMap::parent_or_root(tree.clone()),
            &mu,
            &Truncation::new(tree, 6),
        )
        .unwrap();
        assert_eq!(est.value, 2.0);
        assert_eq!(est.witness, v("0"));
        assert_eq!(est.ratio_trace.len(), 7);
        assert_eq!(est.ratio_trace[0].running_sup, 1.0);
        assert!(est.ratio_trace[1..]
            .iter()
            .all(|r| r.level_sup == 2.0 && r.running_witness == v("0")));
    }

    #[test]
    fn constant_weight_sigma_is_one() {
        let tree = TreeSpec::constant(3).unwrap();
        let phi = SelfMap::from_fn(tree.clone(), |v| VertexId::spine(v.len() * 2 + 1));
        let est = sigma(&phi, &Weight::one(), &Truncation::new(tree, 4)).unwrap();
        assert_eq!(est.value, 1.0);
        assert_eq!(est.witness, VertexId::root());
    }

    #[test]
    fn unbounded_example_sigma() {
        let tree = TreeSpec::binary();
        let mu = Weight::by_length(|n| if n == 0 { 2.0 } else { 1.0 / n as f64 });
        let phi = SelfMap::from_fn(tree.clone(), |v| VertexId::spine(1 << v.len()));
        let est = sigma(&phi, &mu, &Truncation::new(tree, 10)).unwrap();
        assert_eq!(est.value, 102.4);
        assert_eq!(est.witness, VertexId::spine(10));
        let runs: Vec<f64> = est.ratio_trace.iter().map(|r| r.running_sup).collect();
        assert!(runs.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn uniformity_examples() {
        let tree = TreeSpec::binary();
        let t8 = Truncation::new(tree, 8);
        let r = weight_uniformity(&Weight::one(), &t8).unwrap();
        assert_eq!((r.min.value, r.max.value), (1.0, 1.0));

        let mu = Weight::by_length(|n| if n == 0 { 2.0 } else { 1.0 / n as f64 });
        let r = weight_uniformity(&mu, &t8).unwrap();
        assert_eq!(
            r.min,
            Extremum {
                value: 0.125,
                witness: VertexId::spine(8)
            }
        );
        assert_eq!(
            r.max,
            Extremum {
                value: 2.0,
                witness: VertexId::root()
            }
        );

        let r = weight_uniformity(&Weight::by_length(|n| 2f64.powi(n as i32)), &t8).unwrap();
        assert_eq!(r.max.value, 256.0);
    }

    #[test]
    fn tail_examples() {
        let tree = TreeSpec::binary();
        let t = Truncation::new(tree.clone(), 5);
        let id = essential_tail(
            &SelfMap::identity(tree.clone()),
            &Weight::one(),
            &t,
            &[1, 3, 5, 6],
        )
        .unwrap();
        let vals: Vec<Option<f64>> = id.rows.iter().map(|r| r.value).collect();
        assert_eq!(vals, vec![Some(1.0), Some(1.0), Some(1.0), None]);
        assert_eq!(id.get(3).unwrap().witness, Some(v("0.0.0")));

        let root = SelfMap::constant(tree, VertexId::root()).unwrap();
        let tail = essential_tail(&root, &Weight::one(), &t, &[1, 2]).unwrap();
        assert!(tail
            .rows
            .iter()
            .all(|r| r.value.is_none() && r.witness.is_none()));
    }

    #[test]
    fn cutoffs_must_ascend() {
        let tree = TreeSpec::binary();
        let t = Truncation::new(tree.clone(), 2);
        let id = SelfMap::identity(tree);
        assert!(essential_tail(&id, &Weight::one(), &t, &[]).is_err());
        assert!(essential_tail(&id, &Weight::one(), &t, &[4, 2]).is_err());
    }
}
