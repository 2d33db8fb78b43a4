use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::algebra::AlgElement;
use crate::modules::ModVec;

/// A checkable statement about Finsler modules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Claim {
    BanachModule,
    FinslerAxiom2,
    CentralHomogeneity,
    CommutativeTriangle,
    LipschitzBound,
    RhoUniqueness,
    AkemannIdentity,
    Polarization,
    RankOneWitness,
    ParallelogramModIdeal,
    Hilbertize,
    QuotientKernel,
    StructureDecomposition,
    AConvex,
    LinfNorm,
}

impl Claim {
    pub const ALL: [Claim; 15] = [
        Claim::BanachModule,
        Claim::FinslerAxiom2,
        Claim::CentralHomogeneity,
        Claim::CommutativeTriangle,
        Claim::LipschitzBound,
        Claim::RhoUniqueness,
        Claim::AkemannIdentity,
        Claim::Polarization,
        Claim::RankOneWitness,
        Claim::ParallelogramModIdeal,
        Claim::Hilbertize,
        Claim::QuotientKernel,
        Claim::StructureDecomposition,
        Claim::AConvex,
        Claim::LinfNorm,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Claim::BanachModule => "banach_module",
            Claim::FinslerAxiom2 => "finsler_axiom2",
            Claim::CentralHomogeneity => "central_homogeneity",
            Claim::CommutativeTriangle => "commutative_triangle",
            Claim::LipschitzBound => "lipschitz_bound",
            Claim::RhoUniqueness => "rho_uniqueness",
            Claim::AkemannIdentity => "akemann_identity",
            Claim::Polarization => "polarization",
            Claim::RankOneWitness => "rank_one_witness",
            Claim::ParallelogramModIdeal => "parallelogram_mod_ideal",
            Claim::Hilbertize => "hilbertize",
            Claim::QuotientKernel => "quotient_kernel",
            Claim::StructureDecomposition => "structure_decomposition",
            Claim::AConvex => "a_convex",
            Claim::LinfNorm => "linf_norm",
        }
    }

    /// Claims that only make sense over a commutative base.
    pub fn needs_commutative_base(self) -> bool {
        matches!(
            self,
            Claim::CommutativeTriangle | Claim::AConvex | Claim::LinfNorm
        )
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownClaim(pub String);

impl fmt::Display for UnknownClaim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown claim `{}`", self.0)
    }
}

impl FromStr for Claim {
    type Err = UnknownClaim;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Claim::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| UnknownClaim(s.into()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn is_pass(self) -> bool {
        self == Status::Pass
    }
}

/// Data that reproduces a residual: the module vectors and algebra
/// elements fed to the claim's residual function, in its documented order.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub vectors: Vec<ModVec>,
    pub elements: Vec<AlgElement>,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerdictReport {
    pub claim: Claim,
    pub status: Status,
    pub max_residual: f64,
    pub tolerance: f64,
    pub witness: Option<Witness>,
    pub samples: usize,
    pub seed: u64,
    pub note: String,
}

impl VerdictReport {
    pub fn passed(&self) -> bool {
        self.status.is_pass()
    }
}

/// Running maximum of a residual together with the inputs that produced it.
pub(crate) struct Worst {
    pub residual: f64,
    pub witness: Option<Witness>,
}

impl Worst {
    pub fn new() -> Self {
        Self {
            residual: 0.0,
            witness: None,
        }
    }

    pub fn offer(&mut self, residual: f64, vectors: &[&ModVec], elements: &[&AlgElement]) {
        // NaN residuals count as violations
        let replace = match self.witness {
            None => true,
            Some(_) => !self.residual.is_nan() && (residual.is_nan() || residual > self.residual),
        };
        if replace {
            self.residual = residual;
            self.witness = Some(Witness {
                vectors: vectors.iter().map(|v| (*v).clone()).collect(),
                elements: elements.iter().map(|e| (*e).clone()).collect(),
                residual,
            });
        }
    }

    /// Report that passes iff the worst residual is within `tolerance`;
    /// the witness is kept only on failure.
    pub fn report(
        self,
        claim: Claim,
        tolerance: f64,
        samples: usize,
        seed: u64,
        note: String,
    ) -> VerdictReport {
        let pass = self.residual <= tolerance;
        VerdictReport {
            claim,
            status: if pass { Status::Pass } else { Status::Fail },
            max_residual: self.residual,
            tolerance,
            witness: if pass { None } else { self.witness },
            samples,
            seed,
            note,
        }
    }
}
