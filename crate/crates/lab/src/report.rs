//! Machine-readable verdicts.

use finsler::gen::PRNG_NAME;
use finsler::theory::{Claim, VerdictReport, Witness};
use serde::{Deserialize, Serialize};

use crate::json::{self, Complex, Extended, Matrix};
use crate::scenario::SCHEMA_VERSION;

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: String,
    pub tool_version: String,
    pub prng: String,
    pub seed: u64,
    pub passed: bool,
    pub verdicts: Vec<Verdict>,
}

impl Report {
    /// Verdicts sorted by claim id, then instance, with algebra-level
    /// verdicts (no instance) first.
    pub fn new(seed: u64, mut verdicts: Vec<Verdict>) -> Self {
        verdicts.sort_by(|a, b| (&a.claim, a.instance).cmp(&(&b.claim, b.instance)));
        Self {
            schema_version: SCHEMA_VERSION,
            tool: TOOL.into(),
            tool_version: TOOL_VERSION.into(),
            prng: PRNG_NAME.into(),
            seed,
            passed: verdicts.iter().all(|v| v.status == VerdictStatus::Pass),
            verdicts,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    /// One line per verdict, residuals in scientific notation.
    pub fn table(&self) -> String {
        let mut out = String::new();
        for v in &self.verdicts {
            let instance = v.instance.map_or_else(|| "-".into(), |i| format!("#{i}"));
            let family = v.module_family.as_deref().unwrap_or("algebra");
            out += &format!(
                "{:<4} {:<24} {:<4} {:<16} residual {:>9.2e}  tol {:.0e}",
                v.status.word(),
                v.claim,
                instance,
                family,
                v.max_residual.0,
                v.tolerance.0,
            );
            if !v.note.is_empty() {
                out += "  ";
                out += &v.note;
            }
            out.push('\n');
        }
        let failed = self
            .verdicts
            .iter()
            .filter(|v| v.status == VerdictStatus::Fail)
            .count();
        out += &format!(
            "{} of {} checks passed (seed {})\n",
            self.verdicts.len() - failed,
            self.verdicts.len(),
            self.seed
        );
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictStatus {
    Pass,
    Fail,
}

impl VerdictStatus {
    fn word(self) -> &'static str {
        match self {
            VerdictStatus::Pass => "PASS",
            VerdictStatus::Fail => "FAIL",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    /// Module index in the scenario; absent for claims about the algebra.
    pub instance: Option<usize>,
    pub module_family: Option<String>,
    pub claim: String,
    pub status: VerdictStatus,
    pub max_residual: Extended,
    pub tolerance: Extended,
    pub samples: usize,
    pub seed: u64,
    pub note: String,
    pub witness: Option<WitnessData>,
}

impl Verdict {
    pub fn new(instance: Option<usize>, family: Option<&str>, r: &VerdictReport) -> Self {
        Self {
            instance,
            module_family: family.map(String::from),
            claim: r.claim.id().into(),
            status: if r.passed() {
                VerdictStatus::Pass
            } else {
                VerdictStatus::Fail
            },
            max_residual: Extended(r.max_residual),
            tolerance: Extended(r.tolerance),
            samples: r.samples,
            seed: r.seed,
            note: r.note.clone(),
            witness: r.witness.as_ref().map(WitnessData::new),
        }
    }

    pub fn claim(&self) -> Option<Claim> {
        self.claim.parse().ok()
    }
}

/// Inputs of the claim's residual function: module vectors as coordinate
/// lists, algebra elements as lists of blocks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessData {
    pub vectors: Vec<Vec<Complex>>,
    pub elements: Vec<Vec<Matrix>>,
    pub residual: Extended,
}

impl WitnessData {
    pub fn new(w: &Witness) -> Self {
        Self {
            vectors: w.vectors.iter().map(json::vector).collect(),
            elements: w.elements.iter().map(json::element).collect(),
            residual: Extended(w.residual),
        }
    }
}
