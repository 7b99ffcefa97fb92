//! Exact solutions of `u_y = u_xx + u_x^2` obtained as `u = ln α` from
//! positive solutions `α` of the heat equation `α_y = α_xx`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// `ln(1 + e^z)` without overflow.
pub fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

/// Traveling wave `ln(1 + e^{-(x-y)})`.
pub fn f1(x: f64, y: f64) -> f64 {
    softplus(y - x)
}

/// Galilei-invariant solution `ln(1 + e^{-x²/4y} / √y)`, defined for `y > 0`.
pub fn f2(x: f64, y: f64) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::Domain(format!("f2 requires y > 0, got y = {y}")));
    }
    Ok(softplus(-x * x / (4.0 * y) - 0.5 * y.ln()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolutionId {
    F1,
    F2,
    Affine,
}

impl fmt::Display for SolutionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::F1 => "f1",
            Self::F2 => "f2",
            Self::Affine => "affine",
        })
    }
}

impl FromStr for SolutionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "f1" => Ok(Self::F1),
            "f2" => Ok(Self::F2),
            "affine" => Ok(Self::Affine),
            _ => Err(Error::InvalidArgument(format!("unknown solution `{s}`"))),
        }
    }
}

type HeatFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A closed-form solution together with its domain.
#[derive(Clone)]
pub enum ExactSolution {
    Named(SolutionId),
    /// `ln α` for a heat-equation solution `α`.
    ColeHopf {
        name: String,
        alpha: HeatFn,
    },
}

impl fmt::Debug for ExactSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactSolution({})", self.name())
    }
}

impl From<SolutionId> for ExactSolution {
    fn from(id: SolutionId) -> Self {
        Self::Named(id)
    }
}

impl ExactSolution {
    pub fn name(&self) -> String {
        match self {
            Self::Named(id) => id.to_string(),
            Self::ColeHopf { name, .. } => name.clone(),
        }
    }

    pub fn id(&self) -> Option<SolutionId> {
        match self {
            Self::Named(id) => Some(*id),
            Self::ColeHopf { .. } => None,
        }
    }

    pub fn in_domain(&self, x: f64, y: f64) -> bool {
        match self {
            Self::Named(SolutionId::F2) => y > 0.0,
            Self::Named(_) => true,
            Self::ColeHopf { alpha, .. } => alpha(x, y) > 0.0,
        }
    }

    pub fn evaluate(&self, x: f64, y: f64) -> Result<f64> {
        match self {
            Self::Named(SolutionId::F1) => Ok(f1(x, y)),
            Self::Named(SolutionId::F2) => f2(x, y),
            Self::Named(SolutionId::Affine) => Ok(x + y),
            Self::ColeHopf { name, alpha } => {
                let a = alpha(x, y);
                if !(a > 0.0) {
                    return Err(Error::Domain(format!(
                        "{name}: alpha({x}, {y}) = {a} is not positive"
                    )));
                }
                Ok(a.ln())
            }
        }
    }
}

/// `u = ln α` for a positive solution `α` of `α_y = α_xx`.
pub fn cole_hopf(
    name: impl Into<String>,
    alpha: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
) -> ExactSolution {
    ExactSolution::ColeHopf {
        name: name.into(),
        alpha: Arc::new(alpha),
    }
}
