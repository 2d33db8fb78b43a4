//! Scenario files: an algebra, the modules over it and the claims to check.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use finsler::algebra::{FdAlgebra, PullbackAlgebra, Route, Slot, StarHom};
use finsler::gen::{self, GenConfig, ModuleFamily};
use finsler::linalg::CMatrix;
use finsler::modules::{
    BundleSectionModule, FiberNorm, FreeHilbertModule, FrobeniusScalarModule, ModuleDescription,
    ModuleRef, PullbackModule, QuotientModule,
};
use finsler::theory::Claim;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, LabResult};
use crate::json::{self, Extended, Matrix};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema_version: u32,
    pub algebra: AlgebraSpec,
    pub modules: Vec<ModuleSpec>,
    #[serde(default)]
    pub checks: Checks,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gen: Option<GenSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Report path, relative to the scenario file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AlgebraSpec {
    Blocks {
        blocks: Vec<usize>,
    },
    /// The algebra of generated instance `index`.
    Generated {
        index: u64,
    },
    /// The pullback algebra of generated glued instance `index`.
    Glued {
        index: u64,
    },
}

/// Either the word `"all"` or a list of claim ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Checks {
    Word(String),
    List(Vec<String>),
}

impl Default for Checks {
    fn default() -> Self {
        Checks::Word("all".into())
    }
}

impl Checks {
    /// The requested claims, and whether they were named explicitly.
    pub fn resolve(&self) -> LabResult<(Vec<Claim>, bool)> {
        let parse = |s: &str| {
            s.parse::<Claim>()
                .map_err(|_| LabError::UnknownCheck(s.to_owned()))
        };
        match self {
            Checks::Word(w) if w == "all" => Ok((Claim::ALL.to_vec(), false)),
            Checks::Word(w) => Ok((vec![parse(w)?], true)),
            Checks::List(ids) => {
                let mut claims = ids
                    .iter()
                    .map(|s| parse(s))
                    .collect::<LabResult<Vec<_>>>()?;
                claims.sort();
                claims.dedup();
                Ok((claims, true))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_blocks: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim_pool: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module_families: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fiber_p_pool: Option<Vec<Extended>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_fiber_dim: Option<usize>,
}

impl GenSpec {
    /// The generator configuration, seeded with `seed` unless `self`
    /// sets its own.
    pub fn config(&self, seed: u64) -> LabResult<GenConfig> {
        let d = GenConfig::with_seed(self.seed.unwrap_or(seed));
        let module_families = match &self.module_families {
            None => d.module_families,
            Some(ids) => ids
                .iter()
                .map(|s| s.parse::<ModuleFamily>())
                .collect::<Result<_, _>>()?,
        };
        let cfg = GenConfig {
            max_blocks: self.max_blocks.unwrap_or(d.max_blocks),
            dim_pool: self.dim_pool.clone().unwrap_or(d.dim_pool),
            module_families,
            fiber_p_pool: self
                .fiber_p_pool
                .as_ref()
                .map_or(d.fiber_p_pool, |ps| ps.iter().map(|p| p.0).collect()),
            samples: self.samples.unwrap_or(d.samples),
            max_rank: self.max_rank.unwrap_or(d.max_rank),
            max_fiber_dim: self.max_fiber_dim.unwrap_or(d.max_fiber_dim),
            ..d
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberSpec {
    pub p: Extended,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

/// `phi(x)_k = U_k x_{source_block} U_k*`; a missing conjugator is the
/// identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RouteSpec {
    pub source_block: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjugator: Option<Matrix>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomSpec {
    /// Block sizes of the source algebra.
    pub source: Vec<usize>,
    /// One route per target block.
    pub routes: Vec<RouteSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlotSpec {
    Left(usize),
    Right(usize),
    Glue(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModuleSpec {
    Free {
        rank: usize,
    },
    /// One fiber per block; blocks of size above 1 take `dim: 0`.
    Bundle {
        fibers: Vec<FiberSpec>,
    },
    FrobeniusScalar,
    /// Quotient of `parent` (a module over `hom.source`) along `hom`.
    Quotient {
        hom: HomSpec,
        parent: Box<ModuleSpec>,
    },
    Pullback {
        phi: HomSpec,
        psi: HomSpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        layout: Option<Vec<SlotSpec>>,
        left: Box<ModuleSpec>,
        right: Box<ModuleSpec>,
        glue: Box<ModuleSpec>,
        psi_left: Matrix,
        psi_right: Matrix,
    },
    /// `left` over the first `split` blocks, `right` over the rest.
    DirectSum {
        split: usize,
        left: Box<ModuleSpec>,
        right: Box<ModuleSpec>,
    },
    /// Module of generated instance `index`, optionally of a fixed family.
    Generated {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        family: Option<String>,
        index: u64,
    },
    /// Non-Hilbert bundle from the generator's counterexample construction.
    Counterexample {
        index: u64,
    },
    /// Module of generated glued instance `index`.
    Glued {
        index: u64,
    },
}

/// Parse a scenario, locating errors by line, column and field path.
pub fn parse(text: &str, path: &Path) -> LabResult<Scenario> {
    let mut de = serde_json::Deserializer::from_str(text);
    let scenario: Scenario =
        serde_path_to_error::deserialize(&mut de).map_err(|e| parse_error(path, e))?;
    de.end().map_err(|e| LabError::ConfigParse {
        path: path.to_owned(),
        line: e.line(),
        column: e.column(),
        field: ".".into(),
        message: bare_message(&e),
    })?;
    if scenario.schema_version != SCHEMA_VERSION {
        return Err(LabError::Invalid(format!(
            "schema_version {} is not supported (expected {SCHEMA_VERSION})",
            scenario.schema_version
        )));
    }
    Ok(scenario)
}

fn parse_error(path: &Path, e: serde_path_to_error::Error<serde_json::Error>) -> LabError {
    let field = match e.path().to_string() {
        p if p == "?" => ".".into(),
        p => p,
    };
    let inner = e.into_inner();
    LabError::ConfigParse {
        path: path.to_owned(),
        line: inner.line(),
        column: inner.column(),
        field,
        message: bare_message(&inner),
    }
}

/// The error text without serde_json's trailing position.
fn bare_message(e: &serde_json::Error) -> String {
    let text = e.to_string();
    match text.rfind(" at line ") {
        Some(i) => text[..i].to_owned(),
        None => text,
    }
}

pub fn read(path: &Path) -> LabResult<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
    parse(&text, path)
}

/// Builds algebras and modules from specs, sharing one generator config.
pub struct Builder {
    pub cfg: GenConfig,
}

impl Builder {
    pub fn algebra(&self, spec: &AlgebraSpec) -> LabResult<FdAlgebra> {
        match spec {
            AlgebraSpec::Blocks { blocks } => Ok(FdAlgebra::new(blocks.clone())?),
            AlgebraSpec::Generated { index } => Ok(gen::gen_algebra(
                &self.cfg,
                &mut gen::instance_rng(&self.cfg, *index),
            )?),
            AlgebraSpec::Glued { index } => Ok(self.glued(*index)?.algebra.algebra().clone()),
        }
    }

    fn glued(&self, index: u64) -> LabResult<gen::GluedInstance> {
        Ok(gen::gen_glued(
            &self.cfg,
            &mut gen::instance_rng(&self.cfg, index),
        )?)
    }

    /// The module described by `spec`, which must live over `base`.
    pub fn module(&self, spec: &ModuleSpec, base: &FdAlgebra) -> LabResult<ModuleRef> {
        let e: ModuleRef = match spec {
            ModuleSpec::Free { rank } => Arc::new(FreeHilbertModule::new(base, *rank)),
            ModuleSpec::Bundle { fibers } => {
                let fibers = fibers.iter().map(fiber).collect::<LabResult<_>>()?;
                Arc::new(BundleSectionModule::new(base, fibers)?)
            }
            ModuleSpec::FrobeniusScalar => Arc::new(FrobeniusScalarModule::new(base)),
            ModuleSpec::Quotient { hom, parent } => {
                let hom = star_hom(hom)?;
                let parent = self.module(parent, hom.source())?;
                Arc::new(QuotientModule::along(parent, hom)?)
            }
            ModuleSpec::Pullback {
                phi,
                psi,
                layout,
                left,
                right,
                glue,
                psi_left,
                psi_right,
            } => {
                let (phi, psi) = (star_hom(phi)?, star_hom(psi)?);
                let algebra = match layout {
                    None => PullbackAlgebra::new(phi, psi)?,
                    Some(l) => PullbackAlgebra::with_layout(
                        phi,
                        psi,
                        l.iter().map(|&s| slot(s)).collect(),
                    )?,
                };
                let left = self.module(left, algebra.left())?;
                let right = self.module(right, algebra.right())?;
                let glue = self.module(glue, algebra.glue_algebra())?;
                let psi_left = json::to_matrix(psi_left, left.dim())?;
                let psi_right = json::to_matrix(psi_right, right.dim())?;
                Arc::new(PullbackModule::new(
                    algebra, left, right, glue, psi_left, psi_right,
                )?)
            }
            ModuleSpec::DirectSum { split, left, right } => {
                let n = base.num_blocks();
                if *split > n {
                    return Err(LabError::Invalid(format!(
                        "direct_sum split {split} exceeds the {n} blocks of the algebra"
                    )));
                }
                let l = base.restrict(&(0..*split).collect::<Vec<_>>());
                let r = base.restrict(&(*split..n).collect::<Vec<_>>());
                Arc::new(PullbackModule::direct_sum(
                    self.module(left, &l)?,
                    self.module(right, &r)?,
                )?)
            }
            ModuleSpec::Generated { family, index } => {
                // replay the instance stream past its algebra
                let mut rng = gen::instance_rng(&self.cfg, *index);
                gen::gen_algebra(&self.cfg, &mut rng)?;
                match family {
                    None => gen::gen_module(base, &self.cfg, &mut rng)?,
                    Some(f) => gen::gen_module_of(f.parse()?, base, &self.cfg, &mut rng)?,
                }
            }
            ModuleSpec::Counterexample { index } => {
                let mut rng = gen::instance_rng(&self.cfg, *index);
                gen::gen_counterexample(base, &self.cfg, &mut rng)?.module
            }
            ModuleSpec::Glued { index } => Arc::new(self.glued(*index)?.module),
        };
        if e.base() != base {
            return Err(LabError::Invalid(format!(
                "{} module lives over blocks {:?}, expected {:?}",
                e.family(),
                e.base().block_dims(),
                base.block_dims()
            )));
        }
        Ok(e)
    }
}

fn fiber(spec: &FiberSpec) -> LabResult<FiberNorm> {
    let p = spec.p.0;
    Ok(match (&spec.weights, spec.dim) {
        (Some(w), None) => FiberNorm::weighted(p, w.clone())?,
        (Some(w), Some(d)) if w.len() == d => FiberNorm::weighted(p, w.clone())?,
        (None, Some(0)) => FiberNorm::zero(),
        (None, Some(d)) => FiberNorm::lp(p, d)?,
        _ => {
            return Err(LabError::Invalid(
                "a fiber needs `dim` or `weights`, of matching length if both".into(),
            ))
        }
    })
}

fn star_hom(spec: &HomSpec) -> LabResult<StarHom> {
    let source = FdAlgebra::new(spec.source.clone())?;
    let mut dims = Vec::with_capacity(spec.routes.len());
    let mut routes = Vec::with_capacity(spec.routes.len());
    for r in &spec.routes {
        let Some(&n) = spec.source.get(r.source_block) else {
            return Err(LabError::Invalid(format!(
                "route from missing source block {}",
                r.source_block
            )));
        };
        dims.push(n);
        routes.push(match &r.conjugator {
            None => Route::plain(r.source_block, n),
            Some(u) => Route {
                source_block: r.source_block,
                conjugator: json::to_matrix(u, n)?,
            },
        });
    }
    let target = FdAlgebra::new(dims)?;
    Ok(StarHom::new(&source, &target, routes)?)
}

fn slot(s: SlotSpec) -> Slot {
    match s {
        SlotSpec::Left(k) => Slot::Left(k),
        SlotSpec::Right(k) => Slot::Right(k),
        SlotSpec::Glue(k) => Slot::Glue(k),
    }
}

fn slot_spec(s: Slot) -> SlotSpec {
    match s {
        Slot::Left(k) => SlotSpec::Left(k),
        Slot::Right(k) => SlotSpec::Right(k),
        Slot::Glue(k) => SlotSpec::Glue(k),
    }
}

fn hom_spec(h: &StarHom) -> HomSpec {
    HomSpec {
        source: h.source().block_dims().to_vec(),
        routes: h
            .routes()
            .iter()
            .map(|r| RouteSpec {
                source_block: r.source_block,
                conjugator: (r.conjugator != CMatrix::identity(r.conjugator.rows()))
                    .then(|| json::matrix(&r.conjugator)),
            })
            .collect(),
    }
}

fn fiber_spec(f: &FiberNorm) -> FiberSpec {
    let unweighted = f.weights().iter().all(|&w| w == 1.0);
    FiberSpec {
        p: Extended(f.p()),
        dim: Some(f.dim()),
        weights: (!unweighted).then(|| f.weights().to_vec()),
    }
}

/// Explicit spec of a module description.
pub fn describe(d: &ModuleDescription) -> ModuleSpec {
    match d {
        ModuleDescription::Free { rank, .. } => ModuleSpec::Free { rank: *rank },
        ModuleDescription::Bundle { fibers, .. } => ModuleSpec::Bundle {
            fibers: fibers.iter().map(fiber_spec).collect(),
        },
        ModuleDescription::FrobeniusScalar { .. } => ModuleSpec::FrobeniusScalar,
        ModuleDescription::Quotient { parent, hom } => ModuleSpec::Quotient {
            hom: hom_spec(hom),
            parent: Box::new(describe(parent)),
        },
        ModuleDescription::Pullback {
            algebra,
            left,
            right,
            glue,
            psi_left,
            psi_right,
        } => ModuleSpec::Pullback {
            phi: hom_spec(algebra.phi()),
            psi: hom_spec(algebra.psi()),
            layout: Some(algebra.layout().iter().map(|&s| slot_spec(s)).collect()),
            left: Box::new(describe(left)),
            right: Box::new(describe(right)),
            glue: Box::new(describe(glue)),
            psi_left: json::matrix(psi_left),
            psi_right: json::matrix(psi_right),
        },
    }
}
