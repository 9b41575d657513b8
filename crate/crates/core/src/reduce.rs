//! Deterministic extremum reductions over vertex sweeps.
//!
//! Per-vertex evaluation runs on the rayon pool; the fold runs in
//! enumeration order and breaks ties by the lexicographically smallest
//! vertex, so results do not depend on the number of worker threads.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::tree::VertexId;

/// An attained value together with the vertex attaining it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Extremum {
    pub value: f64,
    pub witness: VertexId,
}

/// Evaluates `f` at every vertex in parallel. The first error in input
/// order is returned.
pub fn par_eval<T, F>(vertices: &[VertexId], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&VertexId) -> Result<T> + Sync + Send,
{
    let results: Vec<Result<T>> = vertices.par_iter().map(f).collect();
    results.into_iter().collect()
}

pub fn argmax<'a, I>(items: I) -> Option<Extremum>
where
    I: IntoIterator<Item = (f64, &'a VertexId)>,
{
    fold(items, |candidate, best| candidate > best)
}

pub fn argmin<'a, I>(items: I) -> Option<Extremum>
where
    I: IntoIterator<Item = (f64, &'a VertexId)>,
{
    fold(items, |candidate, best| candidate < best)
}

fn fold<'a, I>(items: I, strictly_better: impl Fn(f64, f64) -> bool) -> Option<Extremum>
where
    I: IntoIterator<Item = (f64, &'a VertexId)>,
{
    let mut best: Option<(f64, &VertexId)> = None;
    for (value, v) in items {
        best = match best {
            None => Some((value, v)),
            Some((b, w)) => {
                if strictly_better(value, b) || (value == b && v < w) {
                    Some((value, v))
                } else {
                    Some((b, w))
                }
            }
        };
    }
    best.map(|(value, w)| Extremum {
        value,
        witness: w.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ties_go_to_smallest_path() {
        let a: VertexId = "1".parse().unwrap();
        let b: VertexId = "0.1".parse().unwrap();
        let c: VertexId = "0".parse().unwrap();
        let items = vec![(2.0, &a), (2.0, &b), (1.0, &c)];
        assert_eq!(argmax(items.clone()).unwrap().witness, b);
        assert_eq!(argmin(items).unwrap().witness, c);
        assert!(argmax(Vec::<(f64, &VertexId)>::new()).is_none());
    }
}
