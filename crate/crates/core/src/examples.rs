//! Built-in example specs with their expected outcomes.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::Model;
use crate::operator::{
    boundedness_verdict, compactness_verdict, compose, essential_tail, isometry_report,
    ratio_sweep, sigma, Status,
};
use crate::oracle::compactness_sequence_test;
use crate::space::{mu_norm, TreeFunction};
use crate::tree::{Truncation, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuiltinSpec {
    /// File stem used by [`write_specs`].
    pub name: &'static str,
    pub text: &'static str,
}

pub const UNBOUNDED: BuiltinSpec = BuiltinSpec {
    name: "unbounded-3",
    text: "\
# weight 1/|v| off the root; v is sent to the spine vertex of length 2^|v|
tree: 2
mu: if len == 0 then 2 else 1 / len
phi: spine(2 ^ len)
",
};

pub const COMPACT_PARITY: BuiltinSpec = BuiltinSpec {
    name: "compact-parity-4",
    text: "\
# two rays from the root; the weight and map depend on |v| only
tree: if len == 0 then 2 else 1
mu: if len == 0 then 1 else (if len mod 2 == 0 then len else 1)
phi: if len == 0 then root
     else (if len mod 2 == 0 then spine(len ^ 2) else child(root, 0))
",
};

pub const PARENT: BuiltinSpec = BuiltinSpec {
    name: "parent-5",
    text: "\
tree: 2
mu: if len == 0 then 1 else len
phi: parent(v)
",
};

pub const DOUBLING: BuiltinSpec = BuiltinSpec {
    name: "doubling-final",
    text: "\
tree: 2
mu: 2 ^ len
phi: parent(v)
",
};

pub const FLAT_PARENT: BuiltinSpec = BuiltinSpec {
    name: "flat-parent",
    text: "\
tree: 2
mu: 1
phi: parent(v)
",
};

pub const ALL_SPECS: [BuiltinSpec; 5] = [UNBOUNDED, COMPACT_PARITY, PARENT, DOUBLING, FLAT_PARENT];

/// Runnable example names, in the order `all` runs them.
pub const EXAMPLE_NAMES: [&str; 4] = [
    "unbounded-3",
    "compact-parity-4",
    "parent-5",
    "doubling-final",
];

pub fn builtin_spec(name: &str) -> Option<BuiltinSpec> {
    ALL_SPECS.iter().copied().find(|s| s.name == name)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub expected: String,
    pub observed: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExampleOutcome {
    pub name: String,
    pub specs: Vec<String>,
    pub depth: usize,
    pub assertions: Vec<Assertion>,
}

impl ExampleOutcome {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }
}

struct Checks(Vec<Assertion>);

impl Checks {
    fn check(
        &mut self,
        name: &str,
        passed: bool,
        expected: impl ToString,
        observed: impl ToString,
    ) {
        self.0.push(Assertion {
            name: name.into(),
            passed,
            expected: expected.to_string(),
            observed: observed.to_string(),
        });
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, name: &str, expected: T, observed: T) {
        let passed = expected == observed;
        self.check(
            name,
            passed,
            format!("{expected:?}"),
            format!("{observed:?}"),
        );
    }
}

fn outcome(name: &str, specs: &[BuiltinSpec], depth: usize, checks: Checks) -> ExampleOutcome {
    ExampleOutcome {
        name: name.into(),
        specs: specs.iter().map(|s| s.name.to_string()).collect(),
        depth,
        assertions: checks.0,
    }
}

pub fn run_example(name: &str) -> Result<ExampleOutcome> {
    match name {
        "unbounded-3" => unbounded(),
        "compact-parity-4" => compact_parity(),
        "parent-5" => parent(),
        "doubling-final" => doubling(),
        _ => Err(Error::Config(format!(
            "unknown example {name:?}; expected one of {}, all",
            EXAMPLE_NAMES.join(", ")
        ))),
    }
}

/// Runs one example, or every example for `all`.
pub fn run_examples(which: &str) -> Result<Vec<ExampleOutcome>> {
    if which == "all" {
        EXAMPLE_NAMES.iter().map(|n| run_example(n)).collect()
    } else {
        run_example(which).map(|o| vec![o])
    }
}

/// Writes every built-in spec to `dir` as `<name>.spec`.
pub fn write_specs(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    ALL_SPECS
        .iter()
        .map(|s| {
            let path = dir.join(format!("{}.spec", s.name));
            fs::write(&path, s.text)?;
            Ok(path)
        })
        .collect()
}

fn unbounded() -> Result<ExampleOutcome> {
    let m = Model::parse(UNBOUNDED.text)?;
    let mut c = Checks(Vec::new());

    let t10 = Truncation::new(m.tree.clone(), 10);
    let est = sigma(&m.phi, &m.mu, &t10)?;
    c.eq("sigma lower bound at depth 10", 102.4, est.value);
    c.eq(
        "sigma witness at depth 10",
        VertexId::spine(10),
        est.witness.clone(),
    );
    let runs: Vec<f64> = est.ratio_trace.iter().map(|r| r.running_sup).collect();
    c.check(
        "lower bound grows with depth",
        runs.windows(2).all(|w| w[0] <= w[1]) && runs[2..].windows(2).all(|w| w[0] < w[1]),
        "nondecreasing, strictly from depth 3",
        format!("{runs:?}"),
    );
    let v = boundedness_verdict(&m.phi, &m.mu, &t10, 100.0, &[])?;
    c.eq(
        "boundedness at threshold 100",
        Status::FailsWitnessed,
        v.status,
    );

    let t12 = Truncation::new(m.tree.clone(), 12);
    let est = sigma(&m.phi, &m.mu, &t12)?;
    c.eq("sigma lower bound at depth 12", 4096.0 / 12.0, est.value);
    Ok(outcome("unbounded-3", &[UNBOUNDED], 12, c))
}

fn compact_parity() -> Result<ExampleOutcome> {
    const D: usize = 40;
    let m = Model::parse(COMPACT_PARITY.text)?;
    let t = Truncation::new(m.tree.clone(), D);
    let mut c = Checks(Vec::new());

    let tail = essential_tail(&m.phi, &m.mu, &t, &[4, 16, 100])?;
    for (n, value, depth) in [(4, 0.5, 2), (16, 0.25, 4), (100, 0.1, 10)] {
        let row = tail.get(n).expect("requested cutoff");
        c.eq(&format!("E({n})"), Some(value), row.value);
        c.eq(
            &format!("E({n}) witness depth"),
            Some(depth),
            row.witness.as_ref().map(VertexId::len),
        );
    }

    let cutoffs: Vec<usize> = (1..=10).map(|k| 1 << k).collect();
    let tail = essential_tail(&m.phi, &m.mu, &t, &cutoffs)?;
    let values: Vec<f64> = tail.rows.iter().filter_map(|r| r.value).collect();
    c.check(
        "tail nonincreasing over cutoffs 2..1024",
        values.len() == cutoffs.len() && values.windows(2).all(|w| w[0] >= w[1]),
        "defined and nonincreasing",
        format!("{values:?}"),
    );

    let (vertices, points) = ratio_sweep(&m.phi, &m.mu, &t)?;
    let odd: Vec<f64> = vertices
        .iter()
        .zip(&points)
        .filter(|(v, _)| v.len() % 2 == 1)
        .map(|(_, p)| p.ratio)
        .collect();
    c.check(
        "ratio at every odd-depth vertex",
        !odd.is_empty() && odd.iter().all(|&r| r == 1.0),
        "1",
        format!(
            "{} vertices, range [{}, {}]",
            odd.len(),
            fmin(&odd),
            fmax(&odd)
        ),
    );

    let evens: Vec<usize> = (1..=10).map(|k| 2 * k).collect();
    let targets = evens
        .iter()
        .map(|&n| m.phi.eval(&VertexId::spine(n)))
        .collect::<Result<Vec<_>>>()?;
    let trace = compactness_sequence_test(
        &m.phi,
        &m.mu,
        &targets,
        &Truncation::new(m.tree.clone(), 20),
    )?;
    let expected: Vec<f64> = evens.iter().map(|&n| 1.0 / n as f64).collect();
    c.eq(
        "sequence norms 1/|v_n| for |v_n| = 2..20",
        expected,
        trace.clone(),
    );
    c.check(
        "sequence strictly decreasing",
        trace.windows(2).all(|w| w[0] > w[1]),
        "strictly decreasing",
        format!("{trace:?}"),
    );

    let v = compactness_verdict(&m.phi, &m.mu, &t, &cutoffs, 1e-9, &[])?;
    c.check(
        "compactness verdict",
        v.status == Status::UnknownToDepth && v.note.starts_with("compact-likely"),
        "compact-likely",
        format!("{:?}: {}", v.status, v.note),
    );
    Ok(outcome("compact-parity-4", &[COMPACT_PARITY], D, c))
}

fn parent() -> Result<ExampleOutcome> {
    const D: usize = 8;
    let m = Model::parse(PARENT.text)?;
    let t = Truncation::new(m.tree.clone(), D);
    let mut c = Checks(Vec::new());

    let w = VertexId::spine(5);
    let chi = TreeFunction::chi(w.clone());
    c.eq(
        "norm of chi_w at |w| = 5",
        5.0,
        mu_norm(&chi, &m.mu, &t)?.value,
    );
    let composed = mu_norm(&compose(&m.phi, &chi), &m.mu, &t)?;
    c.eq("norm of C_phi chi_w at |w| = 5", 6.0, composed.value);
    c.eq("C_phi chi_w witness depth", 6, composed.witness.len());

    let r = isometry_report(&m.phi, &m.mu, &t, D + 4)?;
    c.eq("isometry verdict", Status::FailsWitnessed, r.verdict.status);
    c.eq("map is surjective up to depth", true, r.surjective.holds);
    Ok(outcome("parent-5", &[PARENT], D, c))
}

fn doubling() -> Result<ExampleOutcome> {
    const D: usize = 8;
    let mut c = Checks(Vec::new());

    let flat = Model::parse(FLAT_PARENT.text)?;
    let t = Truncation::new(flat.tree.clone(), D);
    c.eq(
        "operator norm with constant weight",
        1.0,
        sigma(&flat.phi, &flat.mu, &t)?.value,
    );
    let r = isometry_report(&flat.phi, &flat.mu, &t, D + 4)?;
    c.eq(
        "isometry with constant weight",
        Status::HoldsWitnessed,
        r.verdict.status,
    );
    c.eq("surjective up to depth", true, r.surjective.holds);

    let m = Model::parse(DOUBLING.text)?;
    let r = isometry_report(&m.phi, &m.mu, &t, D + 4)?;
    c.eq(
        "isometry with weight 2^|v|",
        Status::FailsWitnessed,
        r.verdict.status,
    );
    c.eq(
        "witness",
        Some(VertexId::spine(1)),
        r.verdict.witness.clone(),
    );
    c.eq("ratio at witness", Some(2.0), r.verdict.value);
    Ok(outcome("doubling-final", &[DOUBLING, FLAT_PARENT], D, c))
}

fn fmin(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(f64::INFINITY, f64::min)
}

fn fmax(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}
