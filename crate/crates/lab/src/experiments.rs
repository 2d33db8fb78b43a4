//! Akemann trials, counterexamples and instance corpora.

use std::path::Path;
use std::sync::Arc;

use finsler::algebra::FdAlgebra;
use finsler::gen::{self, sample, GenConfig, PRNG_NAME};
use finsler::modules::ModuleRef;
use finsler::theory::{self, Hilbertization};
use finsler::tolerance;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, LabResult};
use crate::json::{self, Complex, Extended};
use crate::report::{TOOL, TOOL_VERSION};
use crate::scenario::{self, AlgebraSpec, Checks, ModuleSpec, Scenario, SCHEMA_VERSION};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub iterations: usize,
    /// Largest `exact gap - searched gap` over the trials.
    pub max_shortfall: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AkemannSummary {
    pub algebra: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// Largest `|witness_gap - target|`.
    pub max_gap_error: f64,
    /// Largest `|witness_gap - target| / (1 + target)`.
    pub max_relative_error: f64,
    pub all_feasible: bool,
    pub search: Option<SearchSummary>,
    pub passed: bool,
}

impl AkemannSummary {
    pub fn lines(&self) -> String {
        let mut out = format!(
            "{} akemann identity over {:?}: {} trials, max |witness_gap - target| {:.2e} (relative {:.2e}), seed {}\n",
            if self.passed { "PASS" } else { "FAIL" },
            self.algebra,
            self.trials,
            self.max_gap_error,
            self.max_relative_error,
            self.seed
        );
        if let Some(s) = &self.search {
            out += &format!(
                "     projected search ({} iterations): max shortfall {:.2e}\n",
                s.iterations, s.max_shortfall
            );
        }
        out
    }
}

/// `trials` random positive pairs on `algebra`, each against its exact
/// witness and optionally the projected search.
pub fn akemann(
    algebra: &FdAlgebra,
    trials: usize,
    seed: u64,
    search_iterations: Option<usize>,
) -> LabResult<AkemannSummary> {
    let mut rng = gen::rng(seed);
    let (mut max_gap_error, mut max_relative_error) = (0.0f64, 0.0f64);
    let mut all_feasible = true;
    let mut shortfall = 0.0f64;
    for t in 0..trials {
        let b = sample::positive_element(&mut rng, algebra);
        let c = sample::positive_element(&mut rng, algebra);
        let w = theory::akemann_gap_witness(&b, &c)?;
        all_feasible &= w.is_feasible();
        let err = (w.achieved_gap - w.target).abs();
        max_gap_error = max_gap_error.max(err);
        max_relative_error = max_relative_error.max(err / (1.0 + w.target));
        if let Some(iterations) = search_iterations {
            let found =
                theory::akemann_gap_search(&b, &c, iterations, gen::stream_seed(seed, t as u64))?;
            all_feasible &= found.is_feasible();
            shortfall = shortfall.max(w.achieved_gap - found.achieved_gap);
        }
    }
    Ok(AkemannSummary {
        algebra: algebra.block_dims().to_vec(),
        trials,
        seed,
        max_gap_error,
        max_relative_error,
        all_feasible,
        search: search_iterations.map(|iterations| SearchSummary {
            iterations,
            max_shortfall: shortfall,
        }),
        passed: all_feasible && max_relative_error <= tolerance::CERTIFICATE,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleSummary {
    pub algebra: Vec<usize>,
    pub seed: u64,
    pub block: usize,
    pub p: Extended,
    pub x: Vec<Complex>,
    pub y: Vec<Complex>,
    /// `||rho(x+y)^2 + rho(x-y)^2 - 2 rho(x)^2 - 2 rho(y)^2||`.
    pub defect: f64,
    pub axioms_pass: bool,
    /// `"refused"`, `"inconclusive"` or `"hilbert"`.
    pub hilbertize: String,
    pub module: ModuleSpec,
    pub passed: bool,
}

impl CounterexampleSummary {
    pub fn lines(&self) -> String {
        format!(
            "{} l^{} fiber at block {} over {:?}: parallelogram defect {:.6e}, axioms {}, hilbertize {}\n",
            if self.passed { "PASS" } else { "FAIL" },
            self.p.0,
            self.block,
            self.algebra,
            self.defect,
            if self.axioms_pass { "pass" } else { "fail" },
            self.hilbertize
        )
    }
}

/// A non-Hilbert bundle over `algebra` with an `l^p` fiber of dimension
/// `dim`; passes when the module satisfies the axioms and hilbertize
/// refuses it.
pub fn counterexample(
    algebra: &FdAlgebra,
    p: f64,
    dim: usize,
    samples: usize,
    seed: u64,
) -> LabResult<CounterexampleSummary> {
    let cfg = GenConfig {
        fiber_p_pool: vec![p],
        max_fiber_dim: dim,
        samples,
        ..GenConfig::with_seed(seed)
    };
    let ce = gen::gen_counterexample(algebra, &cfg, &mut gen::rng(seed))?;
    let e: ModuleRef = ce.module.clone();
    let axioms_pass = theory::axiom_suite(e.as_ref(), samples, seed)?
        .iter()
        .all(|r| r.passed());
    let hilbertize = match theory::hilbertize(&e, samples, seed)? {
        Hilbertization::Hilbert(_) => "hilbert",
        Hilbertization::Refused(_) => "refused",
        Hilbertization::Inconclusive(_) => "inconclusive",
    };
    Ok(CounterexampleSummary {
        algebra: algebra.block_dims().to_vec(),
        seed,
        block: ce.block,
        p: Extended(ce.p),
        x: json::vector(&ce.x),
        y: json::vector(&ce.y),
        defect: ce.defect,
        axioms_pass,
        hilbertize: hilbertize.into(),
        module: scenario::describe(&e.describe()),
        passed: axioms_pass && hilbertize == "refused",
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub file: String,
    pub module_family: String,
    pub algebra: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub tool: String,
    pub tool_version: String,
    pub prng: String,
    pub seed: u64,
    pub instances: Vec<ManifestEntry>,
}

fn instance_file(algebra: &FdAlgebra, e: &ModuleRef, cfg: &GenConfig) -> Scenario {
    Scenario {
        schema_version: SCHEMA_VERSION,
        algebra: AlgebraSpec::Blocks {
            blocks: algebra.block_dims().to_vec(),
        },
        modules: vec![scenario::describe(&e.describe())],
        checks: Checks::default(),
        gen: None,
        samples: Some(cfg.samples),
        seed: Some(cfg.seed),
        output: None,
    }
}

fn write(path: &Path, text: &str) -> LabResult<()> {
    std::fs::write(path, text).map_err(|e| LabError::io(path, e))
}

/// `count` generated instances and `glued` glued instances as explicit
/// scenario files in `dir`, plus `manifest.json`.
pub fn write_corpus(cfg: &GenConfig, count: u64, glued: u64, dir: &Path) -> LabResult<Manifest> {
    std::fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))?;
    let mut instances = Vec::new();
    let mut emit = |name: String, algebra: &FdAlgebra, e: &ModuleRef| -> LabResult<()> {
        let text = serde_json::to_string_pretty(&instance_file(algebra, e, cfg))
            .expect("scenarios serialize")
            + "\n";
        write(&dir.join(&name), &text)?;
        instances.push(ManifestEntry {
            file: name,
            module_family: e.family().into(),
            algebra: algebra.block_dims().to_vec(),
        });
        Ok(())
    };
    for i in 0..count {
        let mut rng = gen::instance_rng(cfg, i);
        let algebra = gen::gen_algebra(cfg, &mut rng)?;
        let e = gen::gen_module(&algebra, cfg, &mut rng)?;
        emit(format!("instance-{i:04}.json"), &algebra, &e)?;
    }
    for i in 0..glued {
        let g = gen::gen_glued(cfg, &mut gen::instance_rng(cfg, count + i))?;
        let algebra = g.algebra.algebra().clone();
        let e: ModuleRef = Arc::new(g.module);
        emit(format!("glued-{i:04}.json"), &algebra, &e)?;
    }
    let manifest = Manifest {
        schema_version: SCHEMA_VERSION,
        tool: TOOL.into(),
        tool_version: TOOL_VERSION.into(),
        prng: PRNG_NAME.into(),
        seed: cfg.seed,
        instances,
    };
    let text = serde_json::to_string_pretty(&manifest).expect("manifests serialize") + "\n";
    write(&dir.join("manifest.json"), &text)?;
    Ok(manifest)
}
