//! Two-index quadrilateral lattices.
//!
//! A [`Grid`] stores the coordinates `(x, y)` of every site `(n, m)`; the four
//! local differences of a cell are recomputed on demand by [`Grid::diffs_at`].
//!
//! ```text
//!   (n,m+1) ----- (n+1,m+1)
//!      |  sx, hy      |
//!   (n,m) ------- (n+1,m)
//!          hx, sy
//! ```

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::table::{data_rows, fmt_real, parse_index, parse_real};

/// Relative factor of the cell degeneracy test `|det| > tol * (|hx hy| + |sx sy|)`.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Coordinates of an `n_sites x m_sites` lattice, stored row-major in `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    n_sites: usize,
    m_sites: usize,
    x: Vec<f64>,
    y: Vec<f64>,
}

/// The four differences owned by the cell whose lower-left corner is `(n, m)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeDiffs {
    /// `x(n+1,m) - x(n,m)`
    pub hx: f64,
    /// `y(n,m+1) - y(n,m)`
    pub hy: f64,
    /// `x(n,m+1) - x(n,m)`
    pub sx: f64,
    /// `y(n+1,m) - y(n,m)`
    pub sy: f64,
}

impl LatticeDiffs {
    pub fn det(&self) -> f64 {
        self.hx * self.hy - self.sx * self.sy
    }

    pub fn is_degenerate(&self) -> bool {
        let scale = (self.hx * self.hy).abs() + (self.sx * self.sy).abs();
        !(self.det().abs() > DEGENERACY_TOL * scale)
    }
}

/// Maximal violations of the four commutativity constraints on the lattice
/// differences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchwarzReport {
    /// `max |sx(n,m) - sx(n+1,m)|`
    pub max_sx_violation: f64,
    /// `max |hx(n,m) - hx(n,m+1)|`
    pub max_hx_violation: f64,
    /// `max |sy(n,m) - sy(n,m+1)|`
    pub max_sy_violation: f64,
    /// `max |hy(n,m) - hy(n+1,m)|`
    pub max_hy_violation: f64,
    pub is_schwarzian: bool,
}

impl SchwarzReport {
    pub fn max_violation(&self) -> f64 {
        self.max_sx_violation
            .max(self.max_hx_violation)
            .max(self.max_sy_violation)
            .max(self.max_hy_violation)
    }
}

fn check_size(n_sites: usize, m_sites: usize) -> Result<()> {
    if n_sites < 3 || m_sites < 3 {
        return Err(Error::InvalidArgument(format!(
            "lattice must be at least 3x3, got {n_sites}x{m_sites}"
        )));
    }
    Ok(())
}

fn check_spacing(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "spacing {name} must be positive, got {v}"
        )));
    }
    Ok(())
}

impl Grid {
    /// Builds a grid from explicit coordinates, indexed `n * m_sites + m`.
    ///
    /// Only sizes and finiteness are checked here; a degenerate cell is
    /// reported when its differences are requested.
    pub fn from_coords(n_sites: usize, m_sites: usize, x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        check_size(n_sites, m_sites)?;
        let len = n_sites * m_sites;
        if x.len() != len || y.len() != len {
            return Err(Error::InvalidArgument(format!(
                "expected {len} coordinates, got x={} y={}",
                x.len(),
                y.len()
            )));
        }
        if x.iter().chain(&y).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coordinate".into()));
        }
        Ok(Self {
            n_sites,
            m_sites,
            x,
            y,
        })
    }

    /// Builds a grid by evaluating `coords(n, m) -> (x, y)` at every site.
    pub fn from_fn(
        n_sites: usize,
        m_sites: usize,
        coords: impl Fn(usize, usize) -> (f64, f64),
    ) -> Result<Self> {
        check_size(n_sites, m_sites)?;
        let mut x = Vec::with_capacity(n_sites * m_sites);
        let mut y = Vec::with_capacity(n_sites * m_sites);
        for n in 0..n_sites {
            for m in 0..m_sites {
                let (xv, yv) = coords(n, m);
                x.push(xv);
                y.push(yv);
            }
        }
        Self::from_coords(n_sites, m_sites, x, y)
    }

    /// Orthogonal cartesian lattice `x = x0 + a n`, `y = y0 + b m`.
    pub fn orthogonal(
        a: f64,
        b: f64,
        x0: f64,
        y0: f64,
        n_sites: usize,
        m_sites: usize,
    ) -> Result<Self> {
        check_spacing("a", a)?;
        check_spacing("b", b)?;
        Self::from_fn(n_sites, m_sites, |n, m| {
            (x0 + a * n as f64, y0 + b * m as f64)
        })
    }

    /// Exponential lattice `x = (1+c)^m (a n + a0)`, `y = b m + b0`.
    ///
    /// Differences: `hy = b`, `sy = 0`, `hx = (1+c)^m a` and
    /// `sx = c (1+c)^m (a n + a0)`. With `c = 0` this is [`Grid::orthogonal`].
    #[allow(clippy::too_many_arguments)]
    pub fn exponential(
        a: f64,
        a0: f64,
        b: f64,
        b0: f64,
        c: f64,
        n_sites: usize,
        m_sites: usize,
    ) -> Result<Self> {
        check_spacing("a", a)?;
        check_spacing("b", b)?;
        if !(1.0 + c > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "dilation requires 1 + c > 0, got c = {c}"
            )));
        }
        Self::from_fn(n_sites, m_sites, |n, m| {
            let dilation = (1.0 + c).powi(m as i32);
            (dilation * (a * n as f64 + a0), b * m as f64 + b0)
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn m_sites(&self) -> usize {
        self.m_sites
    }

    #[inline]
    pub(crate) fn index(&self, n: usize, m: usize) -> usize {
        n * self.m_sites + m
    }

    /// # Panics
    /// If `(n, m)` lies outside the lattice.
    #[inline]
    pub fn x(&self, n: usize, m: usize) -> f64 {
        assert!(n < self.n_sites && m < self.m_sites);
        self.x[self.index(n, m)]
    }

    /// # Panics
    /// If `(n, m)` lies outside the lattice.
    #[inline]
    pub fn y(&self, n: usize, m: usize) -> f64 {
        assert!(n < self.n_sites && m < self.m_sites);
        self.y[self.index(n, m)]
    }

    pub(crate) fn out_of_bounds(&self, n: usize, m: usize) -> Error {
        Error::OutOfBounds {
            n,
            m,
            n_sites: self.n_sites,
            m_sites: self.m_sites,
        }
    }

    /// Local differences of the cell at `(n, m)`; requires `n <= N-2`, `m <= M-2`.
    pub fn diffs_at(&self, n: usize, m: usize) -> Result<LatticeDiffs> {
        let d = self.raw_diffs_at(n, m)?;
        if d.is_degenerate() {
            return Err(Error::DegenerateLattice { n, m, det: d.det() });
        }
        Ok(d)
    }

    /// Like [`Grid::diffs_at`] without the degeneracy test.
    pub fn raw_diffs_at(&self, n: usize, m: usize) -> Result<LatticeDiffs> {
        if n + 1 >= self.n_sites || m + 1 >= self.m_sites {
            return Err(self.out_of_bounds(n, m));
        }
        let (x00, y00) = (self.x(n, m), self.y(n, m));
        Ok(LatticeDiffs {
            hx: self.x(n + 1, m) - x00,
            hy: self.y(n, m + 1) - y00,
            sx: self.x(n, m + 1) - x00,
            sy: self.y(n + 1, m) - y00,
        })
    }

    /// Measures the commutativity constraints over every site where both
    /// compared differences exist.
    pub fn schwarz_check(&self, tol: f64) -> SchwarzReport {
        let (mut sx_v, mut hx_v, mut sy_v, mut hy_v) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        let sx = |n, m| self.x(n, m + 1) - self.x(n, m);
        let hx = |n, m| self.x(n + 1, m) - self.x(n, m);
        let sy = |n, m| self.y(n + 1, m) - self.y(n, m);
        let hy = |n, m| self.y(n, m + 1) - self.y(n, m);
        for n in 0..self.n_sites - 1 {
            for m in 0..self.m_sites - 1 {
                sx_v = sx_v.max((sx(n, m) - sx(n + 1, m)).abs());
                hx_v = hx_v.max((hx(n, m) - hx(n, m + 1)).abs());
                sy_v = sy_v.max((sy(n, m) - sy(n, m + 1)).abs());
                hy_v = hy_v.max((hy(n, m) - hy(n + 1, m)).abs());
            }
        }
        SchwarzReport {
            max_sx_violation: sx_v,
            max_hx_violation: hx_v,
            max_sy_violation: sy_v,
            max_hy_violation: hy_v,
            is_schwarzian: sx_v <= tol && hx_v <= tol && sy_v <= tol && hy_v <= tol,
        }
    }

    /// Serializes as `n m x y` lines after a header row.
    pub fn to_table(&self) -> String {
        let mut out = String::from("n m x y\n");
        for n in 0..self.n_sites {
            for m in 0..self.m_sites {
                let _ = writeln!(
                    out,
                    "{n} {m} {} {}",
                    fmt_real(self.x(n, m)),
                    fmt_real(self.y(n, m))
                );
            }
        }
        out
    }

    /// Parses the format written by [`Grid::to_table`]. Every site between
    /// `(0,0)` and the largest indices present must appear exactly once.
    pub fn from_table(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (line, tok) in data_rows(text, "n") {
            if tok.len() != 4 {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected 4 fields, got {}", tok.len()),
                });
            }
            rows.push((
                parse_index(tok[0], line)?,
                parse_index(tok[1], line)?,
                parse_real(tok[2], line)?,
                parse_real(tok[3], line)?,
            ));
        }
        let n_sites = rows.iter().map(|r| r.0 + 1).max().unwrap_or(0);
        let m_sites = rows.iter().map(|r| r.1 + 1).max().unwrap_or(0);
        check_size(n_sites, m_sites)?;
        let mut x = vec![f64::NAN; n_sites * m_sites];
        let mut y = vec![f64::NAN; n_sites * m_sites];
        let mut seen = vec![false; n_sites * m_sites];
        for (n, m, xv, yv) in rows {
            let i = n * m_sites + m;
            if seen[i] {
                return Err(Error::InvalidArgument(format!(
                    "site ({n}, {m}) listed twice"
                )));
            }
            seen[i] = true;
            x[i] = xv;
            y[i] = yv;
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidArgument(format!(
                "site ({}, {}) missing",
                i / m_sites,
                i % m_sites
            )));
        }
        Self::from_coords(n_sites, m_sites, x, y)
    }
}
