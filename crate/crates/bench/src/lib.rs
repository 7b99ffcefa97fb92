//! Fixtures shared by the criterion benches.

use invburgers::{ExactSolution, Field, Grid, Result, SolutionId};

/// Exponential lattice of case 2 scaled to `side x side` sites.
pub fn exponential_grid(side: usize) -> Result<Grid> {
    Grid::exponential(0.1, 0.0, 0.1, 0.1, 0.15, side, side)
}

/// `f2` sampled on every site of `g`.
pub fn sampled(g: &Grid) -> Result<(ExactSolution, Field)> {
    let exact = ExactSolution::from(SolutionId::F2);
    let f = Field::try_sample(g, |x, y| exact.evaluate(x, y))?;
    Ok((exact, f))
}
