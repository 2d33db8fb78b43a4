//! Running scenarios: building their modules and dispatching claims.

use std::path::{Path, PathBuf};

use finsler::algebra::FdAlgebra;
use finsler::gen::{GenConfig, PRNG_NAME};
use finsler::modules::{FreeHilbertModule, ModuleDescription, ModuleRef};
use finsler::theory::{self, Claim, VerdictReport};
use finsler::Error;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, LabResult};
use crate::json::Extended;
use crate::report::{Report, Verdict, TOOL, TOOL_VERSION};
use crate::scenario::{self, Builder, Scenario, SCHEMA_VERSION};

/// A scenario with its instances built.
pub struct Loaded {
    pub path: PathBuf,
    pub scenario: Scenario,
    pub cfg: GenConfig,
    pub algebra: FdAlgebra,
    pub modules: Vec<ModuleRef>,
    pub claims: Vec<Claim>,
    /// Whether the claims were named rather than `"all"`.
    pub explicit: bool,
    pub seed: u64,
    pub samples: usize,
}

pub fn load(path: &Path, default_seed: u64) -> LabResult<Loaded> {
    prepare(scenario::read(path)?, path, default_seed)
}

pub fn prepare(scenario: Scenario, path: &Path, default_seed: u64) -> LabResult<Loaded> {
    let seed = scenario.seed.unwrap_or(default_seed);
    let cfg = scenario.gen.clone().unwrap_or_default().config(seed)?;
    let samples = scenario.samples.unwrap_or(cfg.samples);
    if samples == 0 {
        return Err(LabError::Invalid("samples must be at least 1".into()));
    }
    let (claims, explicit) = scenario.checks.resolve()?;
    let builder = Builder { cfg };
    let algebra = builder.algebra(&scenario.algebra)?;
    let modules = scenario
        .modules
        .iter()
        .enumerate()
        .map(|(i, spec)| {
            builder.module(spec, &algebra).map_err(|e| match e {
                LabError::Invalid(msg) => LabError::Invalid(format!("modules[{i}]: {msg}")),
                LabError::Core(err) => LabError::Invalid(format!("modules[{i}]: {err}")),
                other => other,
            })
        })
        .collect::<LabResult<Vec<_>>>()?;
    if explicit {
        for &claim in &claims {
            for (i, e) in modules.iter().enumerate() {
                if let Err(why) = applies(claim, e) {
                    return Err(LabError::Invalid(format!(
                        "check `{claim}` on modules[{i}] ({}): {why}",
                        e.family()
                    )));
                }
            }
        }
    }
    Ok(Loaded {
        path: path.to_owned(),
        scenario,
        cfg: builder.cfg,
        algebra,
        modules,
        claims,
        explicit,
        seed,
        samples,
    })
}

/// Claims about the algebra rather than a module.
pub fn is_algebra_claim(claim: Claim) -> bool {
    matches!(claim, Claim::AkemannIdentity | Claim::RankOneWitness)
}

/// Why `claim` cannot be checked on `e`, if it cannot.
pub fn applies(claim: Claim, e: &ModuleRef) -> Result<(), &'static str> {
    if claim.needs_commutative_base() && !e.base().is_commutative() {
        return Err("needs a commutative base algebra");
    }
    if claim == Claim::Polarization && free_module(e).is_none() {
        return Err("needs a free Hilbert module");
    }
    Ok(())
}

fn free_module(e: &ModuleRef) -> Option<FreeHilbertModule> {
    match e.describe() {
        ModuleDescription::Free { base, rank } => Some(FreeHilbertModule::new(&base, rank)),
        _ => None,
    }
}

pub fn check(claim: Claim, e: &ModuleRef, samples: usize, seed: u64) -> LabResult<VerdictReport> {
    let m = e.as_ref();
    Ok(match claim {
        Claim::BanachModule => theory::check_banach_module(m, samples, seed)?,
        Claim::FinslerAxiom2 => theory::check_finsler_axiom2(m, samples, seed)?,
        Claim::CentralHomogeneity => theory::check_central_homogeneity(m, samples, seed)?,
        Claim::CommutativeTriangle => theory::check_commutative_triangle(m, samples, seed)?,
        Claim::LipschitzBound => theory::lipschitz_bound_check(m, samples, seed)?,
        Claim::RhoUniqueness => {
            let doubled = |x: &_| Ok(m.rho(x)?.scale_real(2.0));
            theory::distinguishing_witness(m, &doubled, samples, seed)?
        }
        Claim::Polarization => {
            let free = free_module(e).ok_or_else(|| {
                LabError::Invalid("polarization needs a free Hilbert module".into())
            })?;
            theory::check_polarization(&free, samples, seed)?
        }
        Claim::ParallelogramModIdeal => theory::check_parallelogram_mod_ideal(m, samples, seed)?,
        Claim::Hilbertize => theory::check_hilbertize(e, samples, seed)?,
        Claim::QuotientKernel => theory::check_quotient_kernel(e, samples, seed)?,
        Claim::StructureDecomposition => theory::check_structure_decomposition(e, samples, seed)?,
        Claim::AConvex => theory::check_a_convex(m, samples, seed)?,
        Claim::LinfNorm => theory::check_linf_norm_property(m, samples, seed)?,
        Claim::AkemannIdentity | Claim::RankOneWitness => {
            check_algebra(claim, m.base(), samples, seed)?
        }
    })
}

pub fn check_algebra(
    claim: Claim,
    algebra: &FdAlgebra,
    samples: usize,
    seed: u64,
) -> LabResult<VerdictReport> {
    Ok(match claim {
        Claim::AkemannIdentity => theory::check_akemann_identity(algebra, samples, seed)?,
        Claim::RankOneWitness => theory::check_rank_one_witness(algebra, samples, seed)?,
        other => {
            return Err(LabError::Invalid(format!(
                "`{other}` is a claim about modules"
            )))
        }
    })
}

/// Every requested claim on every module it applies to.
pub fn run(loaded: &Loaded) -> LabResult<Report> {
    let (samples, seed) = (loaded.samples, loaded.seed);
    let mut verdicts = Vec::new();
    for &claim in &loaded.claims {
        if is_algebra_claim(claim) {
            let r = check_algebra(claim, &loaded.algebra, samples, seed)?;
            verdicts.push(Verdict::new(None, None, &r));
            continue;
        }
        for (i, e) in loaded.modules.iter().enumerate() {
            if applies(claim, e).is_err() {
                continue;
            }
            let r = check(claim, e, samples, seed)?;
            verdicts.push(Verdict::new(Some(i), Some(e.family()), &r));
        }
    }
    Ok(Report::new(seed, verdicts))
}

/// Where a scenario's report goes, if anywhere.
pub fn output_path(loaded: &Loaded) -> Option<PathBuf> {
    let out = loaded.scenario.output.as_ref()?;
    let dir = loaded.path.parent().unwrap_or(Path::new("."));
    Some(dir.join(out))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Part {
    pub zero: bool,
    /// Dimension of the module as a complex vector space.
    pub dim: usize,
}

impl Part {
    fn of(e: &ModuleRef, zero: bool) -> Self {
        Self {
            zero,
            dim: if zero { 0 } else { e.basis().len() },
        }
    }
}

/// Structure of one module: `E = E1 (+)_{E0} E2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposed {
    pub instance: usize,
    pub module_family: String,
    /// Blocks of the base forming the commutative part.
    pub points: Vec<usize>,
    pub noncommutative_blocks: Vec<usize>,
    pub e1: Option<Part>,
    pub e2: Option<Part>,
    pub e0: Option<Part>,
    pub max_residual: Extended,
    pub holds: bool,
    pub note: String,
}

impl Decomposed {
    pub fn line(&self) -> String {
        let part = |name: &str, p: &Option<Part>| match p {
            None => format!("{name} ?"),
            Some(p) if p.zero => format!("{name} = 0"),
            Some(p) => format!("{name} != 0 (dim {})", p.dim),
        };
        format!(
            "{:<4} #{} {:<16} {}  {}  {}  residual {:.2e}{}{}",
            if self.holds { "OK" } else { "FAIL" },
            self.instance,
            self.module_family,
            part("E1", &self.e1),
            part("E2", &self.e2),
            part("E0", &self.e0),
            self.max_residual.0,
            if self.note.is_empty() { "" } else { "  " },
            self.note
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecomposeReport {
    pub schema_version: u32,
    pub tool: String,
    pub tool_version: String,
    pub prng: String,
    pub seed: u64,
    pub passed: bool,
    pub algebra: Vec<usize>,
    pub instances: Vec<Decomposed>,
}

pub fn decompose(loaded: &Loaded) -> LabResult<DecomposeReport> {
    let split = finsler::algebra::decompose(&loaded.algebra);
    let noncommutative_blocks = split.commutative_ideal.complement();
    let mut instances = Vec::new();
    for (i, e) in loaded.modules.iter().enumerate() {
        let mut d = Decomposed {
            instance: i,
            module_family: e.family().into(),
            points: split.points.clone(),
            noncommutative_blocks: noncommutative_blocks.clone(),
            e1: None,
            e2: None,
            e0: None,
            max_residual: Extended(0.0),
            holds: false,
            note: String::new(),
        };
        match theory::structure_decompose(e, loaded.samples, loaded.seed) {
            Ok(s) => {
                d.e1 = Some(Part::of(&s.e1(), s.e1_zero));
                d.e2 = Some(Part::of(&s.e2(), s.e2_zero));
                d.e0 = Some(Part::of(&s.e0(), s.e0_zero));
                d.max_residual = Extended(
                    s.certificate
                        .max_residual()
                        .max(s.e2_inner.certificate.max_residual())
                        .max(s.e0_inner.certificate.max_residual()),
                );
                d.holds = s.holds();
            }
            Err(Error::HilbertizeRefused { defect }) => {
                d.max_residual = Extended(defect);
                d.note = "E/IE is not Hilbert".into();
            }
            Err(err) => return Err(err.into()),
        }
        instances.push(d);
    }
    Ok(DecomposeReport {
        schema_version: SCHEMA_VERSION,
        tool: TOOL.into(),
        tool_version: TOOL_VERSION.into(),
        prng: PRNG_NAME.into(),
        seed: loaded.seed,
        passed: instances.iter().all(|d| d.holds),
        algebra: loaded.algebra.block_dims().to_vec(),
        instances,
    })
}
