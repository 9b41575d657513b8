//! Run configuration and report rendering (JSON, text, CSV).

use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;

use crate::dsl::print;
use crate::error::{Error, Result};
use crate::examples::ExampleOutcome;
use crate::model::Model;
use crate::operator::{
    boundedness_verdict, compactness_verdict, isometry_report, ratio_sweep, weight_uniformity,
    Assumption, EssentialTail, IsometryReport, SigmaEstimate, Verdict, WeightRange,
};
use crate::oracle::{Campaign, CampaignConfig, FiniteInstance};
use crate::tree::{Truncation, DEFAULT_VERTEX_BUDGET};

pub const SCHEMA_VERSION: &str = "report-v1";

/// Environment variable that overrides the default vertex budget.
pub const BUDGET_ENV: &str = "TREECOMP_BUDGET";

pub const DEFAULT_DEPTH: usize = 12;
pub const DEFAULT_PREIMAGE_DEPTH: usize = 16;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_THRESHOLD: f64 = 100.0;

/// Cutoffs 2, 4, ..., 1024.
pub fn default_cutoffs() -> Vec<usize> {
    (1..=10).map(|k| 1usize << k).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

/// Where the spec came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum SpecOrigin {
    File(String),
    Inline,
    Builtin(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub spec_origin: SpecOrigin,
    /// Full spec text as read.
    pub spec_text: String,
    pub depth: usize,
    pub preimage_depth: usize,
    pub cutoffs: Vec<usize>,
    pub tolerance: f64,
    pub threshold: f64,
    pub budget: usize,
    pub seed: u64,
    pub format: Format,
    pub assumptions: Vec<Assumption>,
}

impl RunConfig {
    pub fn new(spec_origin: SpecOrigin, spec_text: impl Into<String>) -> Self {
        RunConfig {
            spec_origin,
            spec_text: spec_text.into(),
            depth: DEFAULT_DEPTH,
            preimage_depth: DEFAULT_PREIMAGE_DEPTH,
            cutoffs: default_cutoffs(),
            tolerance: DEFAULT_TOLERANCE,
            threshold: DEFAULT_THRESHOLD,
            budget: DEFAULT_VERTEX_BUDGET,
            seed: 0,
            format: Format::Text,
            assumptions: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.depth > self.preimage_depth {
            return Err(Error::Config(format!(
                "depth {} exceeds preimage depth {}",
                self.depth, self.preimage_depth
            )));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::Config(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if !(self.threshold > 0.0) {
            return Err(Error::Config(format!(
                "threshold must be positive, got {}",
                self.threshold
            )));
        }
        if self.budget == 0 {
            return Err(Error::Config("vertex budget must be positive".into()));
        }
        crate::operator::check_cutoffs(&self.cutoffs)
    }
}

/// Parses an `--assume` value: `pinch=m,M`, `finite-range` or `sigma=s`.
pub fn parse_assumption(s: &str) -> std::result::Result<Assumption, String> {
    let s = s.trim();
    if s == "finite-range" {
        return Ok(Assumption::FiniteRange);
    }
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| format!("not a number: {t:?}"))
    };
    if let Some(rest) = s.strip_prefix("pinch=") {
        let (a, b) = rest
            .split_once(',')
            .ok_or("pinch expects two values: pinch=m,M")?;
        let (min, max) = (num(a)?, num(b)?);
        if !(min > 0.0 && min <= max && max.is_finite()) {
            return Err(format!("pinch needs 0 < m <= M < inf, got {min},{max}"));
        }
        return Ok(Assumption::WeightPinch { min, max });
    }
    if let Some(rest) = s.strip_prefix("sigma=") {
        let value = num(rest)?;
        if !(value >= 0.0 && value.is_finite()) {
            return Err(format!(
                "sigma must be finite and non-negative, got {value}"
            ));
        }
        return Ok(Assumption::AnalyticSigma { value });
    }
    Err(format!(
        "unknown assumption {s:?}; expected pinch=m,M, finite-range or sigma=s"
    ))
}

/// Parses a comma-separated cutoff list.
pub fn parse_cutoffs(s: &str) -> std::result::Result<Vec<usize>, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad cutoff {t:?}"))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpecEcho {
    pub tree: String,
    pub mu: String,
    pub phi: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Analysis {
    pub spec: SpecEcho,
    pub vertices: usize,
    pub weight_range: WeightRange,
    pub sigma: SigmaEstimate,
    pub essential_tail: EssentialTail,
    pub boundedness: Verdict,
    pub compactness: Verdict,
    pub isometry: IsometryReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceRow {
    pub vertex: String,
    pub branching: usize,
    pub weight: f64,
    pub image: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSummary {
    pub campaign: Campaign,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<Vec<InstanceRow>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Analyze,
    Oracle,
    Examples,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: Command,
    pub config: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analysis: Option<Analysis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub examples: Option<Vec<ExampleOutcome>>,
    /// Excluded from determinism comparisons.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl Report {
    fn new(command: Command, config: &impl Serialize) -> Self {
        Report {
            schema: SCHEMA_VERSION,
            command,
            config: serde_json::to_value(config).expect("config serializes"),
            analysis: None,
            oracle: None,
            examples: None,
            timing: None,
        }
    }

    pub fn with_timing(mut self, elapsed: Duration) -> Self {
        self.timing = Some(Timing {
            elapsed_ms: elapsed.as_secs_f64() * 1e3,
        });
        self
    }

    /// Whether every check the command runs passed.
    pub fn succeeded(&self) -> bool {
        let oracle_ok = self
            .oracle
            .as_ref()
            .is_none_or(|o| o.campaign.failures == 0);
        let examples_ok = self
            .examples
            .as_ref()
            .is_none_or(|e| e.iter().all(ExampleOutcome::passed));
        oracle_ok && examples_ok
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Text => self.to_text(),
            Format::Csv => self.to_csv(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(a) = &self.analysis {
            text_analysis(&mut out, a);
        }
        if let Some(o) = &self.oracle {
            text_oracle(&mut out, o);
        }
        if let Some(ex) = &self.examples {
            for e in ex {
                let _ = writeln!(
                    out,
                    "{} (depth {}): {}",
                    e.name,
                    e.depth,
                    pass_fail(e.passed())
                );
                for a in &e.assertions {
                    let _ = writeln!(
                        out,
                        "  [{}] {}: expected {}, observed {}",
                        pass_fail(a.passed),
                        a.name,
                        a.expected,
                        a.observed
                    );
                }
            }
        }
        if let Some(t) = &self.timing {
            let _ = writeln!(out, "elapsed: {:.1} ms", t.elapsed_ms);
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut put = |rec: &[String]| w.write_record(rec).expect("in-memory write");
        if let Some(a) = &self.analysis {
            put(&[
                "table",
                "key",
                "value",
                "witness",
                "level_min",
                "running_value",
                "running_witness",
                "status",
            ]
            .map(String::from));
            for r in &a.sigma.ratio_trace {
                put(&[
                    "ratio_trace".into(),
                    r.depth.to_string(),
                    r.level_sup.to_string(),
                    r.level_witness.to_string(),
                    r.level_inf.to_string(),
                    r.running_sup.to_string(),
                    r.running_witness.to_string(),
                    String::new(),
                ]);
            }
            for r in &a.essential_tail.rows {
                put(&[
                    "essential_tail".into(),
                    r.cutoff.to_string(),
                    opt(r.value),
                    r.witness
                        .as_ref()
                        .map(|w| w.to_string())
                        .unwrap_or_default(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                ]);
            }
            for (name, v) in [
                ("boundedness", &a.boundedness),
                ("compactness", &a.compactness),
                ("isometry", &a.isometry.verdict),
            ] {
                put(&[
                    "verdict".into(),
                    name.into(),
                    opt(v.value),
                    v.witness
                        .as_ref()
                        .map(|w| w.to_string())
                        .unwrap_or_default(),
                    String::new(),
                    String::new(),
                    String::new(),
                    format!("{:?}", v.status),
                ]);
            }
        }
        if let Some(o) = &self.oracle {
            put(&[
                "seed",
                "depth",
                "branching",
                "vertices",
                "sigma",
                "brute",
                "abs_diff",
            ]
            .map(String::from));
            for r in &o.campaign.rows {
                put(&[
                    r.seed.to_string(),
                    r.depth.to_string(),
                    r.branching.to_string(),
                    r.vertices.to_string(),
                    r.sigma.to_string(),
                    r.brute.to_string(),
                    r.abs_diff.to_string(),
                ]);
            }
        }
        if let Some(ex) = &self.examples {
            put(&["example", "assertion", "passed", "expected", "observed"].map(String::from));
            for e in ex {
                for a in &e.assertions {
                    put(&[
                        e.name.clone(),
                        a.name.clone(),
                        a.passed.to_string(),
                        a.expected.clone(),
                        a.observed.clone(),
                    ]);
                }
            }
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn pass_fail(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}

fn text_verdict(out: &mut String, name: &str, v: &Verdict) {
    let _ = write!(out, "{name}: {:?}", v.status);
    if let Some(w) = &v.witness {
        let _ = write!(out, " witness {w}");
    }
    if let Some(x) = v.value {
        let _ = write!(out, " value {x}");
    }
    let _ = writeln!(out, " (depth {})\n  {}", v.searched_depth, v.note);
}

fn text_analysis(out: &mut String, a: &Analysis) {
    let _ = writeln!(
        out,
        "tree: {}\nmu:   {}\nphi:  {}",
        a.spec.tree, a.spec.mu, a.spec.phi
    );
    let _ = writeln!(
        out,
        "window: depth {}, {} vertices",
        a.sigma.depth, a.vertices
    );
    let _ = writeln!(
        out,
        "weight range: [{} at {}, {} at {}]",
        a.weight_range.min.value,
        a.weight_range.min.witness,
        a.weight_range.max.value,
        a.weight_range.max.witness
    );
    let _ = writeln!(
        out,
        "sigma lower bound: {} at {}",
        a.sigma.value, a.sigma.witness
    );
    let _ = writeln!(
        out,
        "\nratio trace\n  {:>5}  {:<20}  {:<20}  {:<20}  witness",
        "depth", "level_min", "level_sup", "running_sup"
    );
    for r in &a.sigma.ratio_trace {
        let _ = writeln!(
            out,
            "  {:>5}  {:<20}  {:<20}  {:<20}  {}",
            r.depth, r.level_inf, r.level_sup, r.running_sup, r.running_witness
        );
    }
    let _ = writeln!(out, "\nessential tail\n  cutoff  {:<20}  witness", "value");
    for r in &a.essential_tail.rows {
        let (v, w) = match (&r.value, &r.witness) {
            (Some(v), Some(w)) => (v.to_string(), w.to_string()),
            _ => ("-".into(), "-".into()),
        };
        let _ = writeln!(out, "  {:>6}  {v:<20}  {w}", r.cutoff);
    }
    out.push('\n');
    text_verdict(out, "boundedness", &a.boundedness);
    text_verdict(out, "compactness", &a.compactness);
    text_verdict(out, "isometry", &a.isometry.verdict);
    let iso = &a.isometry;
    for (name, c) in [
        ("ratio identically 1", &iso.ratio_identically_one),
        ("sup ratio 1", &iso.sup_ratio_one),
        ("surjective", &iso.surjective),
        ("injective", &iso.injective),
        ("chi norms", &iso.chi_norms),
    ] {
        let _ = writeln!(out, "  [{}] {name}: {}", pass_fail(c.holds), c.note);
    }
}

fn text_oracle(out: &mut String, o: &OracleSummary) {
    let c = &o.campaign;
    let _ = writeln!(
        out,
        "  {:>4}  {:>5}  {:>9}  {:>8}  {:<20}  {:<20}  abs_diff",
        "seed", "depth", "branching", "vertices", "sigma", "brute"
    );
    for r in &c.rows {
        let _ = writeln!(
            out,
            "  {:>4}  {:>5}  {:>9}  {:>8}  {:<20}  {:<20}  {:e}",
            r.seed, r.depth, r.branching, r.vertices, r.sigma, r.brute, r.abs_diff
        );
    }
    let _ = writeln!(
        out,
        "{} instances, {} failures, max |diff| {:e}",
        c.rows.len(),
        c.failures,
        c.max_abs_diff
    );
    if let Some(rows) = &o.instance {
        let _ = writeln!(out, "\ninstance tables\n  vertex  branching  weight  image");
        for r in rows {
            let _ = writeln!(
                out,
                "  {}  {}  {}  {}",
                r.vertex, r.branching, r.weight, r.image
            );
        }
    }
}

/// Runs the full classification for a spec.
pub fn analyze(config: &RunConfig) -> Result<Report> {
    config.validate()?;
    let model = Model::parse_with_budget(&config.spec_text, config.budget)?;
    let trunc = Truncation::new(model.tree.clone(), config.depth).with_budget(config.budget);
    let (vertices, points) = ratio_sweep(&model.phi, &model.mu, &trunc)?;
    let sigma = crate::operator::sigma_from_sweep(config.depth, &vertices, &points);
    let essential_tail =
        crate::operator::tail_from_sweep(config.depth, &vertices, &points, &config.cutoffs);
    let analysis = Analysis {
        spec: SpecEcho {
            tree: print(&model.source.tree),
            mu: print(&model.source.mu),
            phi: print(&model.source.phi),
        },
        vertices: vertices.len(),
        weight_range: weight_uniformity(&model.mu, &trunc)?,
        sigma,
        essential_tail,
        boundedness: boundedness_verdict(
            &model.phi,
            &model.mu,
            &trunc,
            config.threshold,
            &config.assumptions,
        )?,
        compactness: compactness_verdict(
            &model.phi,
            &model.mu,
            &trunc,
            &config.cutoffs,
            config.tolerance,
            &config.assumptions,
        )?,
        isometry: isometry_report(&model.phi, &model.mu, &trunc, config.preimage_depth)?,
    };
    let mut report = Report::new(Command::Analyze, config);
    report.analysis = Some(analysis);
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleConfig {
    #[serde(flatten)]
    pub campaign: CampaignConfig,
    pub echo: bool,
}

pub fn oracle(config: &OracleConfig) -> Result<Report> {
    let c = &config.campaign;
    if c.instances == 0 || c.max_depth == 0 || c.max_branching == 0 || c.samples == 0 {
        return Err(Error::Config(
            "instances, max depth, max branching and samples must all be positive".into(),
        ));
    }
    if !(c.tolerance >= 0.0) {
        return Err(Error::Config(format!(
            "tolerance must be non-negative, got {}",
            c.tolerance
        )));
    }
    let campaign = crate::oracle::run_campaign(c)?;
    let instance = config.echo.then(|| {
        let inst = FiniteInstance::random(c.seed, c.max_depth, c.max_branching);
        inst.vertices
            .iter()
            .enumerate()
            .map(|(i, v)| InstanceRow {
                vertex: v.to_string(),
                branching: if v.len() < inst.depth {
                    inst.tree.branching(v).unwrap_or(1)
                } else {
                    0
                },
                weight: inst.weights[i],
                image: inst.vertices[inst.map[i]].to_string(),
            })
            .collect()
    });
    let mut report = Report::new(Command::Oracle, config);
    report.oracle = Some(OracleSummary { campaign, instance });
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExamplesConfig {
    pub which: String,
}

pub fn examples(which: &str) -> Result<Report> {
    let outcomes = crate::examples::run_examples(which)?;
    let mut report = Report::new(
        Command::Examples,
        &ExamplesConfig {
            which: which.to_string(),
        },
    );
    report.examples = Some(outcomes);
    Ok(report)
}
