//! The ten discrete invariants of the preserved algebra V1..V5 on a six-point
//! stencil, and the discrete form of `I = (u_y - u_x^2) / u_xx`.

use crate::calculus::{Cell, Stencil};
use crate::error::{Error, Result};
use crate::symmetry::GroupFlow;

/// Relative tolerance below which a derivative denominator counts as zero.
pub const DENOMINATOR_TOL: f64 = 1e-10;

/// `K1..K10` and `I1 = [D_x]^2 u / (D_y u - (D_x u)^2)`.
///
/// `K10` and `I1` are reciprocal and either may be undefined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantSet {
    /// `K1..K9`, always defined once the stencil is accepted.
    pub k: [f64; 9],
    pub k10: Option<f64>,
    pub i1: Option<f64>,
}

impl InvariantSet {
    pub const NAMES: [&'static str; 11] = [
        "K1", "K2", "K3", "K4", "K5", "K6", "K7", "K8", "K9", "K10", "I1",
    ];

    /// Component by position in [`InvariantSet::NAMES`].
    pub fn component(&self, idx: usize) -> Option<f64> {
        match idx {
            0..=8 => Some(self.k[idx]),
            9 => self.k10,
            10 => self.i1,
            _ => None,
        }
    }

    pub fn components(&self) -> [Option<f64>; 11] {
        std::array::from_fn(|i| self.component(i))
    }

    pub fn k10(&self) -> Result<f64> {
        self.k10.ok_or(Error::InvariantUndefined("K10"))
    }

    pub fn i1(&self) -> Result<f64> {
        self.i1.ok_or(Error::InvariantUndefined("I1"))
    }
}

/// Evaluates all invariants on `s`. Requires `hy` of the origin cell to be
/// positive.
pub fn invariants(s: &Stencil) -> Result<InvariantSet> {
    let d = s.differences();
    if !(d.hy00 > 0.0) {
        return Err(Error::InvalidStencil(format!(
            "hy00 = {} must be positive",
            d.hy00
        )));
    }
    let (j, first) = s.jet_detail()?;
    let hy = d.hy00;
    let hy32 = hy * hy.sqrt();

    let k = [
        d.hy10 / hy,
        d.hy01 / hy,
        d.sy00 / hy,
        d.sy10 / hy,
        (d.hx00 * d.hy00 - d.sx00 * d.sy00) / hy32,
        (d.hy01 * d.sx00 - d.hy00 * d.sx01) / hy32,
        (d.hx00 * (d.hy10 - d.hy00) - d.sy00 * (d.hx01 - d.hx00)) / hy32,
        (d.hx00 * d.sy10 - d.hx10 * d.sy00) / hy32,
        (d.hx00 + 2.0 * d.sy00 * j.ux) / hy.sqrt(),
    ];

    // Rounding noise of D_y u - (D_x u)^2 and of [D_x]^2 u.
    let slope = j.uy - j.ux * j.ux;
    let slope_noise = DENOMINATOR_TOL * (j.uy.abs() + j.ux * j.ux);
    let o = s.diffs(Cell::Origin);
    let [p00, p10, p01] = first.p;
    let curv_noise = DENOMINATOR_TOL
        * (o.hy.abs() * (p10.abs() + p00.abs()) + o.sy.abs() * (p01.abs() + p00.abs()))
        / o.det().abs();

    let defined = |num: f64, den: f64, noise: f64| (den.abs() > noise).then(|| num / den);
    Ok(InvariantSet {
        k,
        k10: defined(slope, j.uxx, curv_noise),
        i1: defined(j.uxx, slope, slope_noise),
    })
}

/// Largest relative change `|K' - K| / max(|K|, 1)` over all eleven
/// components after transporting every stencil point along `flow`.
pub fn flow_invariance_test(s: &Stencil, flow: &GroupFlow) -> Result<f64> {
    let before = invariants(s)?;
    let after = invariants(&flow.apply_stencil(s)?)?;
    let mut worst = 0.0f64;
    for (i, (b, a)) in before
        .components()
        .iter()
        .zip(after.components())
        .enumerate()
    {
        let name = InvariantSet::NAMES[i];
        let b = b.ok_or(Error::InvariantUndefined(name))?;
        let a = a.ok_or(Error::InvariantUndefined(name))?;
        worst = worst.max((a - b).abs() / b.abs().max(1.0));
    }
    Ok(worst)
}
