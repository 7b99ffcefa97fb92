//! Skew discrete derivatives on a quadrilateral lattice.
//!
//! On the cell at `(n, m)` the pair `(D_x f, D_y f)` is the unique solution of
//!
//! ```text
//!   Δ_n f = hx D_x f + sy D_y f
//!   Δ_m f = sx D_x f + hy D_y f
//! ```
//!
//! i.e. the gradient of the affine interpolant through `(n,m)`, `(n+1,m)` and
//! `(n,m+1)`. Second derivatives compose these operators, each first derivative
//! being taken with the differences of its own cell.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::lattice::{Grid, LatticeDiffs};
use crate::table::{data_rows, fmt_real, parse_index, parse_real};

/// Values of the dependent variable on a grid. Sites may be absent.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    n_sites: usize,
    m_sites: usize,
    u: Vec<Option<f64>>,
}

impl Field {
    /// A field with every site absent, sized for `g`.
    pub fn absent(g: &Grid) -> Self {
        Self {
            n_sites: g.n_sites(),
            m_sites: g.m_sites(),
            u: vec![None; g.n_sites() * g.m_sites()],
        }
    }

    /// Samples `f(x, y)` at every site of `g`.
    pub fn sample(g: &Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut out = Self::absent(g);
        for n in 0..g.n_sites() {
            for m in 0..g.m_sites() {
                out.set(n, m, f(g.x(n, m), g.y(n, m)));
            }
        }
        out
    }

    /// Samples a fallible function; the first failure is returned.
    pub fn try_sample(g: &Grid, f: impl Fn(f64, f64) -> Result<f64>) -> Result<Self> {
        let mut out = Self::absent(g);
        for n in 0..g.n_sites() {
            for m in 0..g.m_sites() {
                out.set(n, m, f(g.x(n, m), g.y(n, m))?);
            }
        }
        Ok(out)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn m_sites(&self) -> usize {
        self.m_sites
    }

    pub fn matches(&self, g: &Grid) -> bool {
        self.n_sites == g.n_sites() && self.m_sites == g.m_sites()
    }

    pub(crate) fn ensure_matches(&self, g: &Grid) -> Result<()> {
        if !self.matches(g) {
            return Err(Error::InvalidArgument(format!(
                "field is {}x{} but lattice is {}x{}",
                self.n_sites,
                self.m_sites,
                g.n_sites(),
                g.m_sites()
            )));
        }
        Ok(())
    }

    pub fn value(&self, n: usize, m: usize) -> Option<f64> {
        if n < self.n_sites && m < self.m_sites {
            self.u[n * self.m_sites + m]
        } else {
            None
        }
    }

    /// The value at `(n, m)`, or an error naming the site.
    pub fn get(&self, n: usize, m: usize) -> Result<f64> {
        if n >= self.n_sites || m >= self.m_sites {
            return Err(Error::OutOfBounds {
                n,
                m,
                n_sites: self.n_sites,
                m_sites: self.m_sites,
            });
        }
        self.u[n * self.m_sites + m].ok_or(Error::MissingValue { n, m })
    }

    /// # Panics
    /// If `(n, m)` lies outside the field.
    pub fn set(&mut self, n: usize, m: usize, v: f64) {
        assert!(n < self.n_sites && m < self.m_sites);
        self.u[n * self.m_sites + m] = Some(v);
    }

    pub fn clear(&mut self, n: usize, m: usize) {
        if n < self.n_sites && m < self.m_sites {
            self.u[n * self.m_sites + m] = None;
        }
    }

    pub fn populated(&self) -> usize {
        self.u.iter().filter(|v| v.is_some()).count()
    }

    /// `n m u` lines after a header row; absent sites are omitted.
    pub fn to_table(&self) -> String {
        let mut out = String::from("n m u\n");
        for n in 0..self.n_sites {
            for m in 0..self.m_sites {
                if let Some(v) = self.value(n, m) {
                    let _ = writeln!(out, "{n} {m} {}", fmt_real(v));
                }
            }
        }
        out
    }

    /// Parses an `n m u` table onto the sites of `g`; unlisted sites are absent.
    pub fn from_table(text: &str, g: &Grid) -> Result<Self> {
        let mut out = Self::absent(g);
        for (line, tok) in data_rows(text, "n") {
            if tok.len() != 3 {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected 3 fields, got {}", tok.len()),
                });
            }
            let n = parse_index(tok[0], line)?;
            let m = parse_index(tok[1], line)?;
            let v = parse_real(tok[2], line)?;
            if n >= out.n_sites || m >= out.m_sites {
                return Err(Error::Parse {
                    line,
                    msg: format!("site ({n}, {m}) outside the lattice"),
                });
            }
            out.set(n, m, v);
        }
        Ok(out)
    }
}

/// `u` and its discrete derivatives up to second order at one site.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JetValues {
    pub u: f64,
    pub ux: f64,
    pub uy: f64,
    pub uxx: f64,
    pub uyy: f64,
    /// `D_x (D_y u)`
    pub uxy: f64,
    /// `D_y (D_x u)`
    pub uyx: f64,
}

/// Solves the 2x2 cell system for `(D_x f, D_y f)` given `Δ_n f` and `Δ_m f`.
#[inline]
pub fn gradient(d: &LatticeDiffs, dn: f64, dm: f64) -> (f64, f64) {
    let det = d.det();
    (
        (d.hy * dn - d.sy * dm) / det,
        (-d.sx * dn + d.hx * dm) / det,
    )
}

/// `D_x` on a cell, reading a neighbour only when its weight is nonzero.
pub(crate) fn dx_lazy(
    d: &LatticeDiffs,
    f00: f64,
    f10: impl FnOnce() -> Result<f64>,
    f01: impl FnOnce() -> Result<f64>,
) -> Result<f64> {
    let mut num = 0.0;
    if d.hy != 0.0 {
        num += d.hy * (f10()? - f00);
    }
    if d.sy != 0.0 {
        num -= d.sy * (f01()? - f00);
    }
    Ok(num / d.det())
}

/// `D_y` on a cell, reading a neighbour only when its weight is nonzero.
pub(crate) fn dy_lazy(
    d: &LatticeDiffs,
    f00: f64,
    f10: impl FnOnce() -> Result<f64>,
    f01: impl FnOnce() -> Result<f64>,
) -> Result<f64> {
    let mut num = 0.0;
    if d.sx != 0.0 {
        num -= d.sx * (f10()? - f00);
    }
    if d.hx != 0.0 {
        num += d.hx * (f01()? - f00);
    }
    Ok(num / d.det())
}

/// `D_x f` at `(n, m)`. Requires `n <= N-2`, `m <= M-2`.
pub fn dx(g: &Grid, f: &Field, n: usize, m: usize) -> Result<f64> {
    f.ensure_matches(g)?;
    let d = g.diffs_at(n, m)?;
    dx_lazy(&d, f.get(n, m)?, || f.get(n + 1, m), || f.get(n, m + 1))
}

/// `D_y f` at `(n, m)`. Requires `n <= N-2`, `m <= M-2`.
pub fn dy(g: &Grid, f: &Field, n: usize, m: usize) -> Result<f64> {
    f.ensure_matches(g)?;
    let d = g.diffs_at(n, m)?;
    dy_lazy(&d, f.get(n, m)?, || f.get(n + 1, m), || f.get(n, m + 1))
}

/// The eighteen data of the six-point stencil anchored at `(n, m)`.
///
/// Point order follows [`Stencil::OFFSETS`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stencil {
    pub x: [f64; 6],
    pub y: [f64; 6],
    pub u: [f64; 6],
}

/// Which of the three stencil cells a set of differences belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cell {
    /// `(n, m)`
    Origin,
    /// `(n+1, m)`
    Right,
    /// `(n, m+1)`
    Up,
}

/// The ten independent lattice differences of a stencil.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StencilDiffs {
    pub hx00: f64,
    pub hx10: f64,
    pub hx01: f64,
    pub hy00: f64,
    pub hy01: f64,
    pub hy10: f64,
    pub sx00: f64,
    pub sx01: f64,
    pub sy00: f64,
    pub sy10: f64,
}

impl StencilDiffs {
    pub fn as_array(&self) -> [f64; 10] {
        [
            self.hx00, self.hx10, self.hx01, self.hy00, self.hy01, self.hy10, self.sx00, self.sx01,
            self.sy00, self.sy10,
        ]
    }

    pub const NAMES: [&'static str; 10] = [
        "hx00", "hx10", "hx01", "hy00", "hy01", "hy10", "sx00", "sx01", "sy00", "sy10",
    ];
}

/// First derivatives on the three stencil cells, kept for noise estimates.
#[derive(Debug, Clone, Copy)]
pub(crate) struct FirstDerivs {
    pub p: [f64; 3],
    pub q: [f64; 3],
}

impl Stencil {
    /// `(dn, dm)` offsets of the six points.
    pub const OFFSETS: [(usize, usize); 6] = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)];

    pub fn from_grid(g: &Grid, f: &Field, n: usize, m: usize) -> Result<Self> {
        f.ensure_matches(g)?;
        if n + 2 >= g.n_sites() || m + 2 >= g.m_sites() {
            return Err(g.out_of_bounds(n, m));
        }
        let mut s = Stencil {
            x: [0.0; 6],
            y: [0.0; 6],
            u: [0.0; 6],
        };
        for (k, (dn, dm)) in Self::OFFSETS.iter().enumerate() {
            s.x[k] = g.x(n + dn, m + dm);
            s.y[k] = g.y(n + dn, m + dm);
            s.u[k] = f.get(n + dn, m + dm)?;
        }
        Ok(s)
    }

    /// Applies `map(x, y, u) -> (x', y', u')` to every point.
    pub fn try_map(&self, map: impl Fn(f64, f64, f64) -> Result<(f64, f64, f64)>) -> Result<Self> {
        let mut out = *self;
        for k in 0..6 {
            let (x, y, u) = map(self.x[k], self.y[k], self.u[k])?;
            out.x[k] = x;
            out.y[k] = y;
            out.u[k] = u;
        }
        Ok(out)
    }

    fn cell_points(cell: Cell) -> (usize, usize, usize) {
        match cell {
            Cell::Origin => (0, 1, 2),
            Cell::Right => (1, 3, 4),
            Cell::Up => (2, 4, 5),
        }
    }

    pub fn diffs(&self, cell: Cell) -> LatticeDiffs {
        let (o, r, t) = Self::cell_points(cell);
        LatticeDiffs {
            hx: self.x[r] - self.x[o],
            hy: self.y[t] - self.y[o],
            sx: self.x[t] - self.x[o],
            sy: self.y[r] - self.y[o],
        }
    }

    fn checked_diffs(&self, cell: Cell) -> Result<LatticeDiffs> {
        let d = self.diffs(cell);
        if d.is_degenerate() {
            return Err(Error::DegenerateStencil(format!(
                "{cell:?} cell has det = {:e}",
                d.det()
            )));
        }
        Ok(d)
    }

    pub fn differences(&self) -> StencilDiffs {
        let o = self.diffs(Cell::Origin);
        let r = self.diffs(Cell::Right);
        let t = self.diffs(Cell::Up);
        StencilDiffs {
            hx00: o.hx,
            hx10: r.hx,
            hx01: t.hx,
            hy00: o.hy,
            hy01: t.hy,
            hy10: r.hy,
            sx00: o.sx,
            sx01: t.sx,
            sy00: o.sy,
            sy10: r.sy,
        }
    }

    /// `(D_x g, D_y g)` on `cell` for values `g` given at the six points.
    fn cell_gradient(&self, cell: Cell, d: &LatticeDiffs, vals: &[f64; 6]) -> (f64, f64) {
        let (o, r, t) = Self::cell_points(cell);
        gradient(d, vals[r] - vals[o], vals[t] - vals[o])
    }

    pub(crate) fn jet_detail(&self) -> Result<(JetValues, FirstDerivs)> {
        let d00 = self.checked_diffs(Cell::Origin)?;
        let d10 = self.checked_diffs(Cell::Right)?;
        let d01 = self.checked_diffs(Cell::Up)?;
        let (p00, q00) = self.cell_gradient(Cell::Origin, &d00, &self.u);
        let (p10, q10) = self.cell_gradient(Cell::Right, &d10, &self.u);
        let (p01, q01) = self.cell_gradient(Cell::Up, &d01, &self.u);
        let (uxx, uyx) = gradient(&d00, p10 - p00, p01 - p00);
        let (uxy, uyy) = gradient(&d00, q10 - q00, q01 - q00);
        Ok((
            JetValues {
                u: self.u[0],
                ux: p00,
                uy: q00,
                uxx,
                uyy,
                uxy,
                uyx,
            },
            FirstDerivs {
                p: [p00, p10, p01],
                q: [q00, q10, q01],
            },
        ))
    }

    /// The jet at the stencil origin.
    pub fn jet(&self) -> Result<JetValues> {
        self.jet_detail().map(|(j, _)| j)
    }

    /// Discrete derivatives of an arbitrary function sampled on the six points,
    /// evaluated on the three stencil cells: `[(D_x, D_y) at 00, 10, 01]`.
    pub(crate) fn cell_gradients(&self, vals: &[f64; 6]) -> Result<[(f64, f64); 3]> {
        let mut out = [(0.0, 0.0); 3];
        for (k, cell) in [Cell::Origin, Cell::Right, Cell::Up]
            .into_iter()
            .enumerate()
        {
            let d = self.checked_diffs(cell)?;
            out[k] = self.cell_gradient(cell, &d, vals);
        }
        Ok(out)
    }

    /// Right-hand side of the cross-derivative identity at the stencil origin.
    pub fn cross_identity_rhs(&self, j: &JetValues) -> Result<f64> {
        cross_identity_rhs(
            j,
            &self.diffs(Cell::Origin),
            &self.diffs(Cell::Right),
            &self.diffs(Cell::Up),
        )
    }
}

/// Jet of `f` at `(n, m)`; requires `n <= N-3`, `m <= M-3`.
pub fn jet(g: &Grid, f: &Field, n: usize, m: usize) -> Result<JetValues> {
    f.ensure_matches(g)?;
    if n + 2 >= g.n_sites() || m + 2 >= g.m_sites() {
        return Err(g.out_of_bounds(n, m));
    }
    g.diffs_at(n, m)?;
    g.diffs_at(n + 1, m)?;
    g.diffs_at(n, m + 1)?;
    Stencil::from_grid(g, f, n, m)?.jet()
}

/// Expresses `D_y D_x u` through `[D_x]^2 u`, `[D_y]^2 u` and `D_x D_y u`.
///
/// Uses `hx` and `hy` of all three cells' origin plus `hx` of the upper cell and
/// `hy` of the right cell; the shared denominator
/// `hx01 hy00 + hx00 sy00 - hx01 sy00 - sx00 sy00` must not vanish.
pub fn cross_identity_rhs(
    j: &JetValues,
    d00: &LatticeDiffs,
    d10: &LatticeDiffs,
    d01: &LatticeDiffs,
) -> Result<f64> {
    let (hx00, hy00, sx00, sy00) = (d00.hx, d00.hy, d00.sx, d00.sy);
    let hx01 = d01.hx;
    let hy10 = d10.hy;
    let terms = [hx01 * hy00, hx00 * sy00, hx01 * sy00, sx00 * sy00];
    let den = terms[0] + terms[1] - terms[2] - terms[3];
    let scale: f64 = terms.iter().map(|t| t.abs()).sum();
    if !(den.abs() > 1e-12 * scale) {
        return Err(Error::DegenerateStencil(format!(
            "cross-identity denominator {den:e}"
        )));
    }
    let c_xx = -(hx00 - hx01) * (hx00 - sx00) / den;
    let c_yy = (hy00 - hy10) * (hy00 - sy00) / den;
    let c_xy = (hx00 * hy10 + hy00 * sx00 - hy10 * sx00 - sx00 * sy00) / den;
    Ok(c_xx * j.uxx + c_yy * j.uyy + c_xy * j.uxy)
}

/// Correction terms of the discrete derivatives of quadratic monomials:
/// `D_x x^2 = 2x + dxx_x`, `D_x xy = y + dxy_x`, `D_x y^2 = dyy_x`,
/// `D_y x^2 = dxx_y`, `D_y xy = x + dxy_y`, `D_y y^2 = 2y + dyy_y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonomialDeltas {
    pub dxx_x: f64,
    pub dxy_x: f64,
    pub dyy_x: f64,
    pub dxx_y: f64,
    pub dxy_y: f64,
    pub dyy_y: f64,
}

impl MonomialDeltas {
    pub fn from_diffs(d: &LatticeDiffs) -> Result<Self> {
        if d.is_degenerate() {
            return Err(Error::DegenerateStencil(format!(
                "cell det = {:e}",
                d.det()
            )));
        }
        let LatticeDiffs { hx, hy, sx, sy } = *d;
        let det = d.det();
        Ok(Self {
            dxx_x: (hy * hx * hx - sy * sx * sx) / det,
            dxy_x: hy * sy * (hx - sx) / det,
            dyy_x: -hy * sy * (hy - sy) / det,
            dxx_y: -hx * sx * (hx - sx) / det,
            dxy_y: hx * sx * (hy - sy) / det,
            dyy_y: (hx * hy * hy - sx * sy * sy) / det,
        })
    }
}
