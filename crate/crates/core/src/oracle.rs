//! Brute-force checks on fully finite instances.
//!
//! An instance is a truncated tree with explicit weight and map tables whose
//! map sends the window into itself, so every norm below is computed
//! exactly from the tables. None of the quantities here go through
//! [`crate::operator::sigma`]; campaigns compare the two routes.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::{compose, sigma, SelfMap};
use crate::space::{mu_norm, normalized_chi, TreeFunction, Weight};
use crate::tree::{TreeSpec, Truncation, VertexId};

/// A truncated tree with explicit weight and map tables.
#[derive(Debug, Clone)]
pub struct FiniteInstance {
    pub seed: Option<u64>,
    pub depth: usize,
    pub tree: TreeSpec,
    /// Window vertices in breadth-first order.
    pub vertices: Vec<VertexId>,
    pub weights: Vec<f64>,
    /// `map[i]` is the index of `φ(vertices[i])`.
    pub map: Vec<usize>,
    index: Arc<HashMap<VertexId, usize>>,
}

impl FiniteInstance {
    /// Tabulates `mu` and `phi` over a window; `phi` must map the window
    /// into itself.
    pub fn tabulate(trunc: &Truncation, mu: &Weight, phi: &SelfMap) -> Result<Self> {
        let vertices = trunc.enumerate()?;
        let index: HashMap<VertexId, usize> = vertices
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, v)| (v, i))
            .collect();
        let weights = vertices
            .iter()
            .map(|v| mu.eval(v))
            .collect::<Result<Vec<_>>>()?;
        let map = vertices
            .iter()
            .map(|v| {
                let w = phi.eval(v)?;
                index
                    .get(&w)
                    .copied()
                    .ok_or(Error::OutsideInstance(w.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteInstance {
            seed: None,
            depth: trunc.depth,
            tree: trunc.tree.clone(),
            vertices,
            weights,
            map,
            index: Arc::new(index),
        })
    }

    /// A random instance: depth in `1..=max_depth`, branching uniform in
    /// `1..=max_branching` per vertex, weights log-uniform in `[2^-6, 2^6]`,
    /// and a uniform map into the window.
    pub fn random(seed: u64, max_depth: usize, max_branching: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let depth = rng.random_range(1..=max_depth.max(1));
        let max_branching = max_branching.max(1);

        let mut vertices = vec![VertexId::root()];
        let mut branching: HashMap<VertexId, usize> = HashMap::new();
        let mut i = 0;
        while i < vertices.len() {
            let v = vertices[i].clone();
            if v.len() < depth {
                let k = rng.random_range(1..=max_branching);
                branching.insert(v.clone(), k);
                for c in 0..k as u32 {
                    vertices.push(v.child(c));
                }
            }
            i += 1;
        }
        let weights: Vec<f64> = (0..vertices.len())
            .map(|_| 2f64.powf(rng.random_range(-6.0..=6.0)))
            .collect();
        let map: Vec<usize> = (0..vertices.len())
            .map(|_| rng.random_range(0..vertices.len()))
            .collect();

        let table = Arc::new(branching);
        let tree = TreeSpec::from_fn(move |p| {
            table
                .get(&VertexId::from_path(p.to_vec()))
                .copied()
                .unwrap_or(1)
        });
        let index = vertices
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, v)| (v, i))
            .collect();
        FiniteInstance {
            seed: Some(seed),
            depth,
            tree,
            vertices,
            weights,
            map,
            index: Arc::new(index),
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn truncation(&self) -> Truncation {
        Truncation::new(self.tree.clone(), self.depth)
    }

    pub fn index_of(&self, v: &VertexId) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn max_branching(&self) -> usize {
        self.vertices
            .iter()
            .filter(|v| v.len() < self.depth)
            .map(|v| self.tree.branching_at(v.path()).unwrap_or(1))
            .max()
            .unwrap_or(0)
    }

    /// The weight table as a [`Weight`]; vertices outside the window are
    /// an error.
    pub fn weight(&self) -> Weight {
        let (index, weights) = (self.index.clone(), Arc::new(self.weights.clone()));
        Weight::try_from_fn(move |v| {
            index
                .get(v)
                .map(|&i| weights[i])
                .ok_or_else(|| Error::OutsideInstance(v.to_string()))
        })
    }

    pub fn self_map(&self) -> SelfMap {
        let (index, map, vertices) = (
            self.index.clone(),
            Arc::new(self.map.clone()),
            Arc::new(self.vertices.clone()),
        );
        SelfMap::try_from_fn(self.tree.clone(), move |v| {
            index
                .get(v)
                .map(|&i| vertices[map[i]].clone())
                .ok_or_else(|| Error::OutsideInstance(v.to_string()))
        })
    }

    fn norm(&self, f: &[Complex64]) -> f64 {
        self.weights
            .iter()
            .zip(f)
            .map(|(m, z)| m * z.norm())
            .fold(0.0, f64::max)
    }

    fn composed_norm(&self, f: &[Complex64]) -> f64 {
        self.weights
            .iter()
            .zip(&self.map)
            .map(|(m, &j)| m * f[j].norm())
            .fold(0.0, f64::max)
    }

    fn extremal(&self) -> Vec<Complex64> {
        self.weights
            .iter()
            .map(|m| Complex64::new(1.0 / m, 0.0))
            .collect()
    }

    fn chi(&self, i: usize) -> Vec<Complex64> {
        let mut f = vec![Complex64::default(); self.len()];
        f[i] = Complex64::new(1.0 / self.weights[i], 0.0);
        f
    }

    /// A random element of the unit sphere: modulus and phase drawn
    /// uniformly, then scaled to norm 1. `None` when the draw is zero.
    fn random_unit(&self, rng: &mut ChaCha8Rng) -> Option<Vec<Complex64>> {
        let f: Vec<Complex64> = self
            .weights
            .iter()
            .map(|m| {
                Complex64::from_polar(rng.random_range(0.0..=1.0), rng.random_range(0.0..TAU)) / m
            })
            .collect();
        let n = self.norm(&f);
        (n > 0.0).then(|| f.into_iter().map(|z| z / n).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "index", rename_all = "kebab-case")]
pub enum Candidate {
    /// `g(v) = 1/μ(v)`.
    Extremal,
    /// Normalized characteristic function of the vertex with this index.
    Chi(usize),
    /// The k-th random sample.
    Random(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleNorm {
    pub value: f64,
    pub best: Candidate,
    /// `‖C_φ g‖ / ‖g‖` for the extremal function.
    pub extremal: f64,
    pub chi_max: f64,
    pub random_max: Option<f64>,
}

/// Relative slack for comparisons between ratios computed along different
/// floating-point routes.
pub const ROUNDING_SLACK: f64 = 4.0 * f64::EPSILON;

impl OracleNorm {
    /// No random sample beat the extremal and characteristic functions by
    /// more than rounding.
    pub fn closed_form_attained(&self) -> bool {
        let closed = self.extremal.max(self.chi_max);
        self.random_max
            .is_none_or(|r| r <= closed * (1.0 + ROUNDING_SLACK))
    }
}

/// Largest `‖C_φ f‖_μ / ‖f‖_μ` over the extremal function, every
/// normalized characteristic function and `samples` random functions.
pub fn brute_operator_norm(inst: &FiniteInstance, samples: usize, seed: u64) -> OracleNorm {
    let mut best = (f64::NEG_INFINITY, Candidate::Extremal);
    let mut consider = |value: f64, c: Candidate| {
        if value > best.0 {
            best = (value, c);
        }
    };

    let g = inst.extremal();
    let extremal = inst.composed_norm(&g) / inst.norm(&g);
    consider(extremal, Candidate::Extremal);

    let mut chi_max = 0.0f64;
    for i in 0..inst.len() {
        let f = inst.chi(i);
        let r = inst.composed_norm(&f) / inst.norm(&f);
        chi_max = chi_max.max(r);
        consider(r, Candidate::Chi(i));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut random_max: Option<f64> = None;
    for k in 0..samples {
        let Some(f) = inst.random_unit(&mut rng) else {
            continue;
        };
        let r = inst.composed_norm(&f) / inst.norm(&f);
        random_max = Some(random_max.map_or(r, |m| m.max(r)));
        consider(r, Candidate::Random(k));
    }

    OracleNorm {
        value: best.0,
        best: best.1,
        extremal,
        chi_max,
        random_max,
    }
}

/// Largest `|f(v)|` over unit-norm functions in the same search set.
pub fn pointeval_norm_oracle(
    inst: &FiniteInstance,
    v: &VertexId,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    let i = inst
        .index_of(v)
        .ok_or_else(|| Error::OutsideInstance(v.to_string()))?;
    let mut best = 0.0f64;
    let g = inst.extremal();
    best = best.max(g[i].norm() / inst.norm(&g));
    for j in 0..inst.len() {
        let f = inst.chi(j);
        best = best.max(f[i].norm() / inst.norm(&f));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        if let Some(f) = inst.random_unit(&mut rng) {
            best = best.max(f[i].norm());
        }
    }
    Ok(best)
}

/// `‖C_φ f_n‖_μ` for `f_n = χ_{w_n}/μ`, each evaluated over `trunc`.
pub fn compactness_sequence_test(
    phi: &SelfMap,
    mu: &Weight,
    targets: &[VertexId],
    trunc: &Truncation,
) -> Result<Vec<f64>> {
    if targets.windows(2).any(|w| w[0].len() >= w[1].len()) {
        return Err(Error::Config(
            "target lengths must be strictly increasing".into(),
        ));
    }
    targets
        .iter()
        .map(|w| Ok(mu_norm(&compose(phi, &normalized_chi(w, mu)?), mu, trunc)?.value))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundViolation {
    pub vertex: VertexId,
    pub weighted_value: f64,
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub functions_checked: usize,
    pub violation: Option<BoundViolation>,
}

impl BoundCheck {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks `μ(v)|f(v)| <= ‖f‖_μ` at every vertex, with the norm taken from
/// [`mu_norm`], for the extremal function, every normalized characteristic
/// function and `samples` random functions of random scale.
pub fn pointwise_bound_check(
    inst: &FiniteInstance,
    samples: usize,
    seed: u64,
) -> Result<BoundCheck> {
    let mut functions = vec![inst.extremal()];
    functions.extend((0..inst.len()).map(|i| inst.chi(i)));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let scale = 2f64.powf(rng.random_range(-8.0..=8.0));
        let f: Vec<Complex64> = (0..inst.len())
            .map(|_| {
                Complex64::from_polar(
                    rng.random_range(0.0..=1.0) * scale,
                    rng.random_range(0.0..TAU),
                )
            })
            .collect();
        functions.push(f);
    }
    let mu = inst.weight();
    let trunc = inst.truncation();
    for f in &functions {
        let tf = TreeFunction::finite(inst.vertices.iter().cloned().zip(f.iter().copied()));
        let norm = mu_norm(&tf, &mu, &trunc)?.value;
        for (i, v) in inst.vertices.iter().enumerate() {
            let weighted_value = inst.weights[i] * f[i].norm();
            if weighted_value > norm {
                return Ok(BoundCheck {
                    functions_checked: functions.len(),
                    violation: Some(BoundViolation {
                        vertex: v.clone(),
                        weighted_value,
                        norm,
                    }),
                });
            }
        }
    }
    Ok(BoundCheck {
        functions_checked: functions.len(),
        violation: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignRow {
    pub seed: u64,
    pub depth: usize,
    pub branching: usize,
    pub vertices: usize,
    pub sigma: f64,
    pub brute: f64,
    pub abs_diff: f64,
    /// The brute maximum came from the extremal or a characteristic
    /// function, up to rounding.
    pub closed_form_attained: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignConfig {
    pub instances: usize,
    pub max_depth: usize,
    pub max_branching: usize,
    pub seed: u64,
    pub samples: usize,
    pub tolerance: f64,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            instances: 100,
            max_depth: 4,
            max_branching: 3,
            seed: 1,
            samples: 64,
            tolerance: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Campaign {
    pub rows: Vec<CampaignRow>,
    pub failures: usize,
    pub max_abs_diff: f64,
}

/// Instance `i` uses seed `config.seed + i`, so any row can be replayed as
/// a single-instance campaign.
pub fn run_campaign(config: &CampaignConfig) -> Result<Campaign> {
    let rows = (0..config.instances as u64)
        .into_par_iter()
        .map(|i| {
            let seed = config.seed.wrapping_add(i);
            let inst = FiniteInstance::random(seed, config.max_depth, config.max_branching);
            let est = sigma(&inst.self_map(), &inst.weight(), &inst.truncation())?;
            let brute = brute_operator_norm(&inst, config.samples, seed);
            Ok(CampaignRow {
                seed,
                depth: inst.depth,
                branching: inst.max_branching(),
                vertices: inst.len(),
                sigma: est.value,
                brute: brute.value,
                abs_diff: (est.value - brute.value).abs(),
                closed_form_attained: brute.closed_form_attained(),
            })
        })
        .collect::<Vec<Result<CampaignRow>>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let failures = rows
        .iter()
        .filter(|r| !(r.abs_diff <= config.tolerance))
        .count();
    let max_abs_diff = rows.iter().map(|r| r.abs_diff).fold(0.0, f64::max);
    Ok(Campaign {
        rows,
        failures,
        max_abs_diff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_weight_norm_is_one() {
        let tree = TreeSpec::binary();
        let t = Truncation::new(tree.clone(), 3);
        let phi = SelfMap::from_fn(tree, |v| VertexId::spine(3 - v.len()));
        let inst = FiniteInstance::tabulate(&t, &Weight::one(), &phi).unwrap();
        assert_eq!(brute_operator_norm(&inst, 16, 3).value, 1.0);
    }

    #[test]
    fn halving_weight_parent_map() {
        let tree = TreeSpec::binary();
        let t = Truncation::new(tree.clone(), 3);
        let mu = Weight::by_length(|n| 2f64.powi(-(n as i32)));
        let inst = FiniteInstance::tabulate(&t, &mu, &SelfMap::parent_or_root(tree)).unwrap();
        assert_eq!(inst.len(), 15);
        // ratio 1 at the root, 1/2 at the other 14 vertices
        let ratios: Vec<f64> = (0..15)
            .map(|i| inst.weights[i] / inst.weights[inst.map[i]])
            .collect();
        assert_eq!(ratios.iter().filter(|&&r| r == 0.5).count(), 14);
        let n = brute_operator_norm(&inst, 16, 3);
        assert_eq!(n.value, 1.0);
        assert_eq!(n.best, Candidate::Extremal);
    }

    #[test]
    fn tabulate_requires_closed_map() {
        let tree = TreeSpec::binary();
        let t = Truncation::new(tree.clone(), 2);
        let phi = SelfMap::from_fn(tree, |v| v.child(0));
        assert!(matches!(
            FiniteInstance::tabulate(&t, &Weight::one(), &phi),
            Err(Error::OutsideInstance(_))
        ));
    }

    #[test]
    fn random_instances_are_reproducible() {
        let a = FiniteInstance::random(42, 4, 3);
        let b = FiniteInstance::random(42, 4, 3);
        assert_eq!(a.vertices, b.vertices);
        assert_eq!(a.weights, b.weights);
        assert_eq!(a.map, b.map);
        assert!(a.depth >= 1 && a.depth <= 4);
        assert!(a.max_branching() <= 3);
        assert!(a
            .weights
            .iter()
            .all(|&w| (2f64.powi(-6)..=2f64.powi(6)).contains(&w)));
        assert_eq!(a.truncation().enumerate().unwrap(), a.vertices);
    }

    #[test]
    fn pointeval_oracle_examples() {
        let tree = TreeSpec::binary();
        let t = Truncation::new(tree.clone(), 3);
        let mu = Weight::by_length(|n| 2f64.powi(n as i32));
        let inst = FiniteInstance::tabulate(&t, &mu, &SelfMap::identity(tree.clone())).unwrap();
        let v: VertexId = "1.0.1".parse().unwrap();
        assert_eq!(pointeval_norm_oracle(&inst, &v, 32, 9).unwrap(), 0.125);
        let flat = FiniteInstance::tabulate(&t, &Weight::one(), &SelfMap::identity(tree)).unwrap();
        assert_eq!(pointeval_norm_oracle(&flat, &v, 32, 9).unwrap(), 1.0);
        assert!(pointeval_norm_oracle(&flat, &"0.0.0.0".parse().unwrap(), 1, 1).is_err());
    }

    #[test]
    fn constant_map_sequence_vanishes() {
        let tree = TreeSpec::binary();
        let phi = SelfMap::constant(tree.clone(), VertexId::root()).unwrap();
        let mu = Weight::by_length(|n| 1.0 + n as f64);
        let targets: Vec<VertexId> = (1..=5).map(VertexId::spine).collect();
        let trace =
            compactness_sequence_test(&phi, &mu, &targets, &Truncation::new(tree, 6)).unwrap();
        assert_eq!(trace, vec![0.0; 5]);
    }

    #[test]
    fn identity_sequence_is_constant() {
        let tree = TreeSpec::unary();
        let targets: Vec<VertexId> = (1..=8).map(VertexId::spine).collect();
        let trace = compactness_sequence_test(
            &SelfMap::identity(tree.clone()),
            &Weight::one(),
            &targets,
            &Truncation::new(tree, 10),
        )
        .unwrap();
        assert_eq!(trace, vec![1.0; 8]);
    }

    #[test]
    fn sequence_targets_must_deepen() {
        let tree = TreeSpec::unary();
        let targets = vec![VertexId::spine(2), VertexId::spine(2)];
        assert!(compactness_sequence_test(
            &SelfMap::identity(tree.clone()),
            &Weight::one(),
            &targets,
            &Truncation::new(tree, 3)
        )
        .is_err());
    }

    #[test]
    fn adversarial_bound_check() {
        let inst = FiniteInstance::random(5, 3, 3);
        let check = pointwise_bound_check(&inst, 50, 5).unwrap();
        assert!(check.passed());
        assert_eq!(check.functions_checked, 1 + inst.len() + 50);
    }
}
