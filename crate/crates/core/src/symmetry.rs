//! Point symmetries of `u_y = u_xx + u_x^2` and their action on lattice data.
//!
//! | generator | field                                   | exact flow                                   |
//! |-----------|-----------------------------------------|----------------------------------------------|
//! | V1        | `∂x`                                    | `(x+ε, y, u)`                                |
//! | V2        | `∂y`                                    | `(x, y+ε, u)`                                |
//! | V3        | `∂u`                                    | `(x, y, u+ε)`                                |
//! | V4        | `x∂x + 2y∂y`                            | `(e^ε x, e^2ε y, u)`                         |
//! | V5        | `2y∂x - x∂u`                            | `(x+2εy, y, u-εx-ε²y)`                       |
//! | V6        | `4xy∂x + 4y²∂y - (x²+2y)∂u`             | `(x/s, y/s, u - εx²/s + ½ ln s)`, `s=1-4εy`  |

use std::fmt;
use std::str::FromStr;

use crate::calculus::{Field, Stencil, StencilDiffs};
use crate::error::{Error, Result};
use crate::lattice::Grid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    V1,
    V2,
    V3,
    V4,
    V5,
    V6,
}

impl Generator {
    pub const ALL: [Generator; 6] = [Self::V1, Self::V2, Self::V3, Self::V4, Self::V5, Self::V6];
    /// The subalgebra preserved by the discrete scheme.
    pub const PRESERVED: [Generator; 5] = [Self::V1, Self::V2, Self::V3, Self::V4, Self::V5];

    /// Coefficients `(ξ, τ, φ)` of the vector field at a point.
    pub fn coefficients(self, x: f64, y: f64, _u: f64) -> (f64, f64, f64) {
        match self {
            Self::V1 => (1.0, 0.0, 0.0),
            Self::V2 => (0.0, 1.0, 0.0),
            Self::V3 => (0.0, 0.0, 1.0),
            Self::V4 => (x, 2.0 * y, 0.0),
            Self::V5 => (2.0 * y, 0.0, -x),
            Self::V6 => (4.0 * x * y, 4.0 * y * y, -(x * x + 2.0 * y)),
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V{}", self.index() + 1)
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "V1" => Ok(Self::V1),
            "V2" => Ok(Self::V2),
            "V3" => Ok(Self::V3),
            "V4" => Ok(Self::V4),
            "V5" => Ok(Self::V5),
            "V6" => Ok(Self::V6),
            _ => Err(Error::InvalidArgument(format!("unknown generator `{s}`"))),
        }
    }
}

/// A point transformation along one generator at group parameter `epsilon`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupFlow {
    pub generator: Generator,
    pub epsilon: f64,
}

impl GroupFlow {
    pub fn new(generator: Generator, epsilon: f64) -> Self {
        Self { generator, epsilon }
    }

    pub fn inverse(self) -> Self {
        Self::new(self.generator, -self.epsilon)
    }

    pub fn apply(&self, x: f64, y: f64, u: f64) -> Result<(f64, f64, f64)> {
        apply_flow(self, x, y, u)
    }

    /// Transforms all eighteen data of a stencil.
    pub fn apply_stencil(&self, s: &Stencil) -> Result<Stencil> {
        s.try_map(|x, y, u| self.apply(x, y, u))
    }
}

/// Exact flow of the generator; V6 requires `1 - 4εy > 0`.
pub fn apply_flow(flow: &GroupFlow, x: f64, y: f64, u: f64) -> Result<(f64, f64, f64)> {
    let e = flow.epsilon;
    Ok(match flow.generator {
        Generator::V1 => (x + e, y, u),
        Generator::V2 => (x, y + e, u),
        Generator::V3 => (x, y, u + e),
        Generator::V4 => (e.exp() * x, (2.0 * e).exp() * y, u),
        Generator::V5 => (x + 2.0 * e * y, y, u - e * x - e * e * y),
        Generator::V6 => {
            let s = 1.0 - 4.0 * e * y;
            if !(s > 0.0) {
                return Err(Error::FlowSingularity(format!(
                    "V6 flow needs 1 - 4*eps*y > 0, got {s} at eps={e}, y={y}"
                )));
            }
            (x / s, y / s, u - e * x * x / s + 0.5 * s.ln())
        }
    })
}

/// An entry of the commutation table: `Σ coefficient · generator`.
pub type Bracket = &'static [(f64, Generator)];

/// `[a, b]` for `a, b` in V1..V5, read off the commutation table.
pub fn bracket(a: Generator, b: Generator) -> Result<Bracket> {
    use Generator::*;
    const ZERO: Bracket = &[];
    let idx = |g: Generator| match g {
        V6 => Err(Error::InvalidArgument(
            "V6 is outside the preserved algebra".into(),
        )),
        g => Ok(g.index()),
    };
    // row [Va, ·], columns V1..V5
    const TABLE: [[Bracket; 5]; 5] = [
        [ZERO, ZERO, ZERO, &[(1.0, V1)], &[(-1.0, V3)]],
        [ZERO, ZERO, ZERO, &[(2.0, V2)], &[(2.0, V1)]],
        [ZERO, ZERO, ZERO, ZERO, ZERO],
        [&[(-1.0, V1)], &[(-2.0, V2)], ZERO, ZERO, &[(1.0, V5)]],
        [&[(1.0, V3)], &[(-2.0, V1)], ZERO, &[(-1.0, V5)], ZERO],
    ];
    Ok(TABLE[idx(a)?][idx(b)?])
}

fn eval_bracket(br: Bracket, x: f64, y: f64, u: f64) -> [f64; 3] {
    let mut v = [0.0; 3];
    for &(c, g) in br {
        let (xi, tau, phi) = g.coefficients(x, y, u);
        v[0] += c * xi;
        v[1] += c * tau;
        v[2] += c * phi;
    }
    v
}

/// Outcome of the flow-commutator test at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorReport {
    /// Displacement of the group commutator divided by `δ²`.
    pub observed: [f64; 3],
    /// Table entry evaluated at the point.
    pub expected: [f64; 3],
    /// `max_i |observed_i - expected_i| / max(|expected|_∞, 1)`.
    pub rel_error: f64,
}

/// Runs `A(δ)`, `B(δ)`, `A(-δ)`, `B(-δ)` from `point`; the displacement is
/// `δ² [A, B] + O(δ³)`.
pub fn commutator_flow_test(
    a: Generator,
    b: Generator,
    point: (f64, f64, f64),
    delta: f64,
) -> Result<CommutatorReport> {
    let expected = eval_bracket(bracket(a, b)?, point.0, point.1, point.2);
    let fa = GroupFlow::new(a, delta);
    let fb = GroupFlow::new(b, delta);
    let mut p = point;
    for f in [fa, fb, fa.inverse(), fb.inverse()] {
        p = f.apply(p.0, p.1, p.2)?;
    }
    let d2 = delta * delta;
    let observed = [
        (p.0 - point.0) / d2,
        (p.1 - point.1) / d2,
        (p.2 - point.2) / d2,
    ];
    let scale = expected.iter().fold(1.0f64, |s, v| s.max(v.abs()));
    let rel_error = observed
        .iter()
        .zip(&expected)
        .map(|(o, e)| (o - e).abs())
        .fold(0.0, f64::max)
        / scale;
    Ok(CommutatorReport {
        observed,
        expected,
        rel_error,
    })
}

/// `ξ(n,m+1) - ξ(n,m) - ξ(n+1,m+1) + ξ(n+1,m)` with `ξ` taken at site data.
pub fn wave_residual(
    xi: impl Fn(f64, f64, f64) -> f64,
    g: &Grid,
    f: &Field,
    n: usize,
    m: usize,
) -> Result<f64> {
    f.ensure_matches(g)?;
    if n + 1 >= g.n_sites() || m + 1 >= g.m_sites() {
        return Err(g.out_of_bounds(n, m));
    }
    let at = |i: usize, k: usize| -> Result<f64> { Ok(xi(g.x(i, k), g.y(i, k), f.get(i, k)?)) };
    Ok(at(n, m + 1)? - at(n, m)? - at(n + 1, m + 1)? + at(n + 1, m)?)
}

/// Anything that supplies `(ξ, τ, φ)` at a point.
pub trait VectorField {
    fn eval(&self, x: f64, y: f64, u: f64) -> (f64, f64, f64);
}

impl VectorField for Generator {
    fn eval(&self, x: f64, y: f64, u: f64) -> (f64, f64, f64) {
        self.coefficients(x, y, u)
    }
}

impl<F: Fn(f64, f64, f64) -> (f64, f64, f64)> VectorField for F {
    fn eval(&self, x: f64, y: f64, u: f64) -> (f64, f64, f64) {
        self(x, y, u)
    }
}

/// Coefficients of the prolonged vector field on a six-point stencil.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prolongation {
    /// Coefficients along the ten lattice differences (`η` for `h`, `χ` for `σ`).
    pub diffs: StencilDiffs,
    pub phi_x: f64,
    pub phi_y: f64,
    pub phi_xx: f64,
    /// Coefficient along `D_x D_y u`.
    pub phi_xy: f64,
    pub phi_yy: f64,
}

/// Discrete prolongation of `field` on `s`.
pub fn prolongation_on_stencil(field: &impl VectorField, s: &Stencil) -> Result<Prolongation> {
    let mut xi = [0.0; 6];
    let mut tau = [0.0; 6];
    let mut phi = [0.0; 6];
    for k in 0..6 {
        (xi[k], tau[k], phi[k]) = field.eval(s.x[k], s.y[k], s.u[k]);
    }
    // η and χ share the layout of the coordinate differences
    let eta = Stencil {
        x: xi,
        y: tau,
        u: phi,
    }
    .differences();

    let (_, first) = s.jet_detail()?;
    let dxi = s.cell_gradients(&xi)?;
    let dtau = s.cell_gradients(&tau)?;
    let dphi = s.cell_gradients(&phi)?;

    // first-order coefficients on each of the three cells
    let mut phi1x = [0.0; 3];
    let mut phi1y = [0.0; 3];
    for c in 0..3 {
        let (p, q) = (first.p[c], first.q[c]);
        phi1x[c] = dphi[c].0 - p * dxi[c].0 - q * dtau[c].0;
        phi1y[c] = dphi[c].1 - p * dxi[c].1 - q * dtau[c].1;
    }
    let j = s.jet()?;
    let sixfold = |v: &[f64; 3]| [v[0], v[1], v[2], 0.0, 0.0, 0.0];
    // D_x, D_y on the origin cell of a field known at points 0, 1, 2
    let origin = |v: &[f64; 3]| -> Result<(f64, f64)> { Ok(s.cell_gradients(&sixfold(v))?[0]) };
    let (d_phi1x_x, _) = origin(&phi1x)?;
    let (d_phi1y_x, d_phi1y_y) = origin(&phi1y)?;
    let (dxi_x, dxi_y) = dxi[0];
    let (dtau_x, dtau_y) = dtau[0];

    Ok(Prolongation {
        diffs: eta,
        phi_x: phi1x[0],
        phi_y: phi1y[0],
        phi_xx: d_phi1x_x - j.uxx * dxi_x - j.uyx * dtau_x,
        phi_xy: d_phi1y_x - j.uxy * dxi_x - j.uyy * dtau_x,
        phi_yy: d_phi1y_y - j.uxy * dxi_y - j.uyy * dtau_y,
    })
}

/// Discrete prolongation at the stencil anchored at `(n, m)` of a grid.
pub fn prolongation_coeffs(
    field: &impl VectorField,
    g: &Grid,
    f: &Field,
    n: usize,
    m: usize,
) -> Result<Prolongation> {
    prolongation_on_stencil(field, &Stencil::from_grid(g, f, n, m)?)
}
