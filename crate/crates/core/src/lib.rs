//! Invariant finite-difference schemes for the potential Burgers equation
//! `u_y = u_xx + u_x^2` on quadrilateral lattices.
//!
//! A [`Grid`] holds the physical coordinates of an index lattice, a [`Field`]
//! holds sampled or computed values. Discrete derivatives live in
//! [`calculus`], the symmetry algebra in [`symmetry`], the lattice invariants
//! in [`invariants`] and the explicit scheme in [`scheme`].
//!
//! ```
//! use invburgers::{chi, evolve, EvolutionConfig, ExactSolution, Field, Grid, March, SolutionId};
//!
//! let g = Grid::orthogonal(0.1, 0.1, 0.0, 0.1, 8, 8).unwrap();
//! let exact = ExactSolution::from(SolutionId::F1);
//! let initial = Field::try_sample(&g, |x, y| exact.evaluate(x, y)).unwrap();
//! let cfg = EvolutionConfig::oracle(6, exact.clone()).with_march(March::Space);
//! let u = evolve(&g, &initial, &cfg).unwrap();
//! assert!(chi(&g, &u, &exact).unwrap().chi < 0.05);
//! ```

// `!(x > 0.0)` is used deliberately so that NaN is rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calculus;
pub mod error;
pub mod estimator;
pub mod exact;
pub mod experiment;
pub mod invariants;
pub mod lattice;
pub mod scheme;
pub mod symmetry;
mod table;

pub use calculus::{jet, Cell, Field, JetValues, Stencil, StencilDiffs};
pub use error::{Error, Result};
pub use estimator::{chi, ChiReport};
pub use exact::{ExactSolution, SolutionId};
pub use experiment::{
    run_case, run_table2, run_table2_to, ExperimentSpec, LatticeKind, LatticeSpec, Table2,
    Table2Row,
};
pub use invariants::{flow_invariance_test, invariants, InvariantSet};
pub use lattice::{Grid, LatticeDiffs, SchwarzReport};
pub use scheme::{evolve, BoundaryMode, EvolutionConfig, March};
pub use symmetry::{Generator, GroupFlow};
pub use table::fmt_real;
