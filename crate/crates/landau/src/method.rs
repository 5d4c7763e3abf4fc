//! Eigenvalue methods selectable from the command line.

use std::fmt;
use std::str::FromStr;

use landau_core::fibersolver::{self, MeshPolicy};
use landau_core::kummeroracle;
use landau_core::variational;
use landau_core::{BoundaryCondition, FiberSpec, Result};

/// Bisection tolerance handed to the Kummer root finder.
pub const KUMMER_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Asymptotic,
    Fem,
    Kummer,
    Rayleigh,
    Temple,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Asymptotic => "asymptotic",
            Method::Fem => "fem",
            Method::Kummer => "kummer",
            Method::Rayleigh => "rayleigh",
            Method::Temple => "temple",
        }
    }

    /// `λ_n` of fiber `m` by this method. Temple uses the default floor constant.
    pub fn eigenvalue(self, spec: &FiberSpec, n: u32) -> Result<f64> {
        match self {
            Method::Asymptotic => Ok(variational::asymptotic_eig(spec.m, n, spec.b, spec.bc)),
            Method::Fem => fem_eigenvalues(spec, n).map(|v| v[n as usize - 1]),
            Method::Kummer => kummeroracle::fiber_eigenvalue(spec, n, KUMMER_TOL),
            Method::Rayleigh => {
                variational::rayleigh_ritz_upper(spec, n).map(|v| v[n as usize - 1])
            }
            Method::Temple => {
                variational::temple_lower(spec, n, variational::DEFAULT_FLOOR_CONSTANT)
                    .map(|r| r.lower)
            }
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Lowest `n` finite-element eigenvalues under the default mesh policy.
pub fn fem_eigenvalues(spec: &FiberSpec, n: u32) -> Result<Vec<f64>> {
    fibersolver::eigenvalues(spec, n as usize, MeshPolicy::default())
}

/// Kummer roots where the oracle applies, finite elements otherwise.
pub fn kummer_or_fem(spec: &FiberSpec, n: u32) -> Result<f64> {
    Method::Kummer
        .eigenvalue(spec, n)
        .or_else(|_| Method::Fem.eigenvalue(spec, n))
}

/// `dirichlet`, `neumann` or `robin:GAMMA`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BcArg(pub BoundaryCondition);

impl FromStr for BcArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "dirichlet" => Ok(BcArg(BoundaryCondition::Dirichlet)),
            "neumann" => Ok(BcArg(BoundaryCondition::Neumann)),
            _ => {
                let gamma = s
                    .strip_prefix("robin:")
                    .ok_or_else(|| format!("unknown boundary condition {s:?}"))?;
                let gamma: f64 = gamma
                    .parse()
                    .map_err(|_| format!("bad Robin parameter {gamma:?}"))?;
                if !gamma.is_finite() {
                    return Err("Robin parameter must be finite".into());
                }
                Ok(BcArg(BoundaryCondition::Robin { gamma }))
            }
        }
    }
}

pub fn bc_name(bc: BoundaryCondition) -> String {
    match bc {
        BoundaryCondition::Dirichlet => "dirichlet".into(),
        BoundaryCondition::Neumann => "neumann".into(),
        BoundaryCondition::Robin { gamma } => format!("robin:{gamma}"),
    }
}
