//! The six-point invariant scheme `D_y u - [D_x]^2 u - (D_x u)^2 = 0`.
//!
//! [`residual`] evaluates it on any nondegenerate lattice. When `sy = 0` the
//! relation involves only `u(n,m)`, `u(n+1,m)`, `u(n+2,m)` and `u(n,m+1)` and
//! can be solved explicitly for either `u(n,m+1)` ([`step_explicit`], marching
//! in `m`) or `u(n+2,m)` ([`step_space`], marching in `n`).

use std::str::FromStr;

use crate::calculus::{dx_lazy, dy_lazy, Field};
use crate::error::{Error, Result};
use crate::exact::ExactSolution;
use crate::lattice::{Grid, LatticeDiffs};

/// Scheme residual at `(n, m)`.
///
/// Needs `n <= N-3` and `m <= M-2`; row `m+2` is read only where the cell's
/// `sy` is nonzero.
pub fn residual(g: &Grid, f: &Field, n: usize, m: usize) -> Result<f64> {
    f.ensure_matches(g)?;
    if n + 2 >= g.n_sites() || m + 1 >= g.m_sites() {
        return Err(g.out_of_bounds(n, m));
    }
    let d00 = g.diffs_at(n, m)?;
    let d10 = g.diffs_at(n + 1, m)?;
    let u00 = f.get(n, m)?;
    let u10 = f.get(n + 1, m)?;
    let p00 = dx_lazy(&d00, u00, || Ok(u10), || f.get(n, m + 1))?;
    let q00 = dy_lazy(&d00, u00, || Ok(u10), || f.get(n, m + 1))?;
    let p10 = dx_lazy(&d10, u10, || f.get(n + 2, m), || f.get(n + 1, m + 1))?;
    let p01 = || -> Result<f64> {
        if m + 2 >= g.m_sites() {
            return Err(g.out_of_bounds(n, m + 1));
        }
        let d01 = g.diffs_at(n, m + 1)?;
        let u01 = f.get(n, m + 1)?;
        dx_lazy(&d01, u01, || f.get(n + 1, m + 1), || f.get(n, m + 2))
    };
    let uxx = dx_lazy(&d00, p00, || Ok(p10), p01)?;
    Ok(q00 - uxx - p00 * p00)
}

/// Largest `|residual|` over every site where it can be evaluated.
pub fn max_residual(g: &Grid, f: &Field) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in 0..g.n_sites().saturating_sub(2) {
        for m in 0..g.m_sites() - 1 {
            match residual(g, f, n, m) {
                Ok(r) => worst = worst.max(r.abs()),
                Err(Error::MissingValue { .. } | Error::OutOfBounds { .. }) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(worst)
}

fn require_flat(d: &LatticeDiffs, n: usize, m: usize) -> Result<()> {
    if d.sy != 0.0 {
        return Err(Error::UnsupportedLattice(format!(
            "sy = {:e} at ({n}, {m}); explicit marching needs sy = 0",
            d.sy
        )));
    }
    Ok(())
}

/// `u(n,m+1)` from `u(n,m)`, `u(n+1,m)`, `u(n+2,m)` on a cell with `sy = 0`.
pub fn time_update(d00: &LatticeDiffs, hx10: f64, u00: f64, u10: f64, u20: f64) -> f64 {
    let p = (u10 - u00) / d00.hx;
    let s = ((u20 - u10) / hx10 - p) / d00.hx;
    u00 + (d00.sx / d00.hx) * (u10 - u00) + d00.hy * (s + p * p)
}

/// `u(n+2,m)` from `u(n,m)`, `u(n+1,m)`, `u(n,m+1)` on a cell with `sy = 0`.
pub fn space_update(d00: &LatticeDiffs, hx10: f64, u00: f64, u10: f64, u01: f64) -> f64 {
    let p = (u10 - u00) / d00.hx;
    let uy = (-d00.sx * (u10 - u00) + d00.hx * (u01 - u00)) / (d00.hx * d00.hy);
    let uxx = uy - p * p;
    u10 + hx10 * (p + d00.hx * uxx)
}

/// Solves for row `m+1` from row `m`.
///
/// Returns values for `n = 0, 1, ...` as long as `u(n..=n+2, m)` are present,
/// at most `N-2` of them.
pub fn step_explicit(g: &Grid, f: &Field, m: usize) -> Result<Vec<f64>> {
    f.ensure_matches(g)?;
    if m + 1 >= g.m_sites() {
        return Err(g.out_of_bounds(0, m + 1));
    }
    let mut out = Vec::with_capacity(g.n_sites() - 2);
    for n in 0..g.n_sites() - 2 {
        let (Some(u00), Some(u10), Some(u20)) =
            (f.value(n, m), f.value(n + 1, m), f.value(n + 2, m))
        else {
            break;
        };
        let d00 = g.diffs_at(n, m)?;
        let d10 = g.diffs_at(n + 1, m)?;
        require_flat(&d00, n, m)?;
        require_flat(&d10, n + 1, m)?;
        out.push(time_update(&d00, d10.hx, u00, u10, u20));
    }
    if out.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "row {m} has fewer than three leading values"
        )));
    }
    Ok(out)
}

/// Solves for column `n+2` from columns `n` and `n+1`.
///
/// Returns values for `m = 0, 1, ...` as long as `u(n,m)`, `u(n+1,m)` and
/// `u(n,m+1)` are present, at most `M-1` of them.
pub fn step_space(g: &Grid, f: &Field, n: usize) -> Result<Vec<f64>> {
    f.ensure_matches(g)?;
    if n + 2 >= g.n_sites() {
        return Err(g.out_of_bounds(n + 2, 0));
    }
    let mut out = Vec::with_capacity(g.m_sites() - 1);
    for m in 0..g.m_sites() - 1 {
        let (Some(u00), Some(u10), Some(u01)) =
            (f.value(n, m), f.value(n + 1, m), f.value(n, m + 1))
        else {
            break;
        };
        let d00 = g.diffs_at(n, m)?;
        let d10 = g.diffs_at(n + 1, m)?;
        require_flat(&d00, n, m)?;
        require_flat(&d10, n + 1, m)?;
        out.push(space_update(&d00, d10.hx, u00, u10, u01));
    }
    if out.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "columns {n}, {} have too few leading values",
            n + 1
        )));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryMode {
    /// Newly computed rows lose the sites the stencil cannot reach.
    Shrink,
    /// The sites the stencil cannot reach are filled from an exact solution.
    #[default]
    Oracle,
}

impl FromStr for BoundaryMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "shrink" => Ok(Self::Shrink),
            "oracle" => Ok(Self::Oracle),
            _ => Err(Error::InvalidArgument(format!(
                "unknown boundary mode `{s}`"
            ))),
        }
    }
}

/// Which index the evolution advances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum March {
    /// Row by row in `m` from row 0; oracle fills the two rightmost columns.
    #[default]
    Time,
    /// Column by column in `n` from columns 0 and 1; oracle fills the top row.
    Space,
}

impl FromStr for March {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "time" | "m" => Ok(Self::Time),
            "space" | "n" => Ok(Self::Space),
            _ => Err(Error::InvalidArgument(format!(
                "unknown march direction `{s}`"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EvolutionConfig {
    pub boundary: BoundaryMode,
    pub oracle: Option<ExactSolution>,
    pub steps: usize,
    pub march: March,
}

impl EvolutionConfig {
    pub fn shrink(steps: usize) -> Self {
        Self {
            boundary: BoundaryMode::Shrink,
            oracle: None,
            steps,
            march: March::Time,
        }
    }

    pub fn oracle(steps: usize, oracle: ExactSolution) -> Self {
        Self {
            boundary: BoundaryMode::Oracle,
            oracle: Some(oracle),
            steps,
            march: March::Time,
        }
    }

    pub fn with_march(mut self, march: March) -> Self {
        self.march = march;
        self
    }

    fn validate(&self) -> Result<Option<&ExactSolution>> {
        if self.steps == 0 {
            return Err(Error::InvalidArgument("steps must be at least 1".into()));
        }
        match (self.boundary, &self.oracle) {
            (BoundaryMode::Oracle, None) => Err(Error::InvalidArgument(
                "oracle boundary requires an oracle solution".into(),
            )),
            (BoundaryMode::Oracle, Some(o)) => Ok(Some(o)),
            (BoundaryMode::Shrink, _) => Ok(None),
        }
    }
}

/// Marches the scheme `cfg.steps` times from the initial data in `initial`:
/// row 0 for [`March::Time`], columns 0 and 1 for [`March::Space`]. Other
/// sites of `initial` are ignored.
pub fn evolve(g: &Grid, initial: &Field, cfg: &EvolutionConfig) -> Result<Field> {
    initial.ensure_matches(g)?;
    let oracle = cfg.validate()?;
    let (n_sites, m_sites) = (g.n_sites(), g.m_sites());
    let mut f = Field::absent(g);
    match cfg.march {
        March::Time => {
            if cfg.steps > m_sites - 1 {
                return Err(g.out_of_bounds(0, cfg.steps));
            }
            for n in 0..n_sites {
                f.set(n, 0, initial.get(n, 0)?);
            }
            for m in 0..cfg.steps {
                let row = step_explicit(g, &f, m)?;
                for (n, v) in row.into_iter().enumerate() {
                    f.set(n, m + 1, v);
                }
                if let Some(o) = oracle {
                    for n in n_sites - 2..n_sites {
                        f.set(n, m + 1, o.evaluate(g.x(n, m + 1), g.y(n, m + 1))?);
                    }
                }
            }
        }
        March::Space => {
            if cfg.steps > n_sites - 2 {
                return Err(g.out_of_bounds(cfg.steps + 1, 0));
            }
            for n in 0..2 {
                for m in 0..m_sites {
                    f.set(n, m, initial.get(n, m)?);
                }
            }
            for n in 0..cfg.steps {
                let col = step_space(g, &f, n)?;
                for (m, v) in col.into_iter().enumerate() {
                    f.set(n + 2, m, v);
                }
                if let Some(o) = oracle {
                    let top = m_sites - 1;
                    f.set(n + 2, top, o.evaluate(g.x(n + 2, top), g.y(n + 2, top))?);
                }
            }
        }
    }
    Ok(f)
}
