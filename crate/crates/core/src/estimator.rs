//! Relative discrete L² distance between a numerical field and an exact solution.

use std::fmt;

use crate::calculus::Field;
use crate::error::{Error, Result};
use crate::exact::ExactSolution;
use crate::lattice::Grid;
use crate::table::fmt_real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiReport {
    pub chi: f64,
    pub num_sites: usize,
    /// Sites skipped because the field is absent there or the solution is
    /// undefined.
    pub excluded_sites: usize,
}

impl fmt::Display for ChiReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "chi={} sites={} excluded={}",
            fmt_real(self.chi),
            self.num_sites,
            self.excluded_sites
        )
    }
}

/// `sqrt(Σ (numeric - exact)² / Σ exact²)` over shared sites.
pub fn chi(g: &Grid, numeric: &Field, exact: &ExactSolution) -> Result<ChiReport> {
    numeric.ensure_matches(g)?;
    let (mut num, mut den) = (0.0, 0.0);
    let (mut included, mut excluded) = (0, 0);
    for n in 0..g.n_sites() {
        for m in 0..g.m_sites() {
            let (x, y) = (g.x(n, m), g.y(n, m));
            match numeric.value(n, m) {
                Some(v) if exact.in_domain(x, y) => {
                    let e = exact.evaluate(x, y)?;
                    num += (v - e) * (v - e);
                    den += e * e;
                    included += 1;
                }
                _ => excluded += 1,
            }
        }
    }
    if included == 0 {
        return Err(Error::EmptyComparison);
    }
    if den == 0.0 {
        return Err(Error::UndefinedEstimator);
    }
    Ok(ChiReport {
        chi: (num / den).sqrt(),
        num_sites: included,
        excluded_sites: excluded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{cole_hopf, SolutionId};

    fn grid() -> Grid {
        Grid::orthogonal(0.1, 0.1, 0.0, 0.1, 8, 8).unwrap()
    }

    #[test]
    fn exact_sample_gives_zero() {
        let g = grid();
        let sol = ExactSolution::from(SolutionId::F2);
        let f = Field::try_sample(&g, |x, y| sol.evaluate(x, y)).unwrap();
        let r = chi(&g, &f, &sol).unwrap();
        assert_eq!(r.chi, 0.0);
        assert_eq!((r.num_sites, r.excluded_sites), (64, 0));
    }

    #[test]
    fn zero_field_gives_one() {
        let g = grid();
        let f = Field::sample(&g, |_, _| 0.0);
        let r = chi(&g, &f, &SolutionId::F1.into()).unwrap();
        assert!((r.chi - 1.0).abs() < 1e-15);
    }

    #[test]
    fn absent_sites_are_counted() {
        let g = grid();
        let mut f = Field::sample(&g, |x, y| x + y);
        f.clear(0, 0);
        f.clear(7, 7);
        let r = chi(&g, &f, &SolutionId::Affine.into()).unwrap();
        assert_eq!((r.num_sites, r.excluded_sites), (62, 2));
        assert_eq!(
            r.to_string(),
            "chi=0.0000000000000000e0 sites=62 excluded=2"
        );
    }

    #[test]
    fn error_classes() {
        let g = grid();
        let f = Field::absent(&g);
        assert_eq!(
            chi(&g, &f, &SolutionId::F1.into()),
            Err(Error::EmptyComparison)
        );
        let f = Field::sample(&g, |_, _| 1.0);
        let zero = cole_hopf("one", |_, _| 1.0);
        assert_eq!(chi(&g, &f, &zero), Err(Error::UndefinedEstimator));
    }
}
