//! The lattice comparison experiment: five 8x8 lattices, two exact solutions,
//! one χ value per pair.
//!
//! | case | lattice     | a      | b   | c    |
//! |------|-------------|--------|-----|------|
//! | 1    | orthogonal  | 0.1    | 0.1 | 0    |
//! | 2    | exponential | 0.1    | 0.1 | 0.15 |
//! | 3    | exponential | 0.0513 | 0.1 | 0.1  |
//! | 4    | exponential | 0.0375 | 0.1 | 0.15 |
//! | 5    | exponential | 0.1    | 0.1 | 0.1  |
//!
//! Case 5 is read as "case 2 with c = 0.1"; summaries flag it as an
//! interpretation.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::calculus::Field;
use crate::error::{Error, Result};
use crate::estimator::{chi, ChiReport};
use crate::exact::{ExactSolution, SolutionId};
use crate::lattice::Grid;
use crate::scheme::{evolve, max_residual, BoundaryMode, EvolutionConfig, March};
use crate::table::fmt_real;

pub const SIDE: usize = 8;
pub const SPACING: f64 = 0.1;
/// Default origin of the square covered by case 1.
pub const DEFAULT_ORIGIN: (f64, f64) = (0.0, 0.1);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeKind {
    Orthogonal,
    Exponential,
}

impl FromStr for LatticeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "orthogonal" | "ort" => Ok(Self::Orthogonal),
            "exponential" | "exp" => Ok(Self::Exponential),
            _ => Err(Error::InvalidArgument(format!("unknown lattice `{s}`"))),
        }
    }
}

/// Parameters of either lattice family. For the exponential lattice `x0` and
/// `y0` are the offsets `a0` and `b0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSpec {
    pub kind: LatticeKind,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub x0: f64,
    pub y0: f64,
    pub n_sites: usize,
    pub m_sites: usize,
}

impl LatticeSpec {
    pub fn build(&self) -> Result<Grid> {
        match self.kind {
            LatticeKind::Orthogonal => {
                Grid::orthogonal(self.a, self.b, self.x0, self.y0, self.n_sites, self.m_sites)
            }
            LatticeKind::Exponential => Grid::exponential(
                self.a,
                self.x0,
                self.b,
                self.y0,
                self.c,
                self.n_sites,
                self.m_sites,
            ),
        }
    }

    /// The numbered case these parameters reproduce, if any.
    pub fn case(&self) -> Option<u8> {
        if self.n_sites != SIDE || self.m_sites != SIDE || self.b != SPACING {
            return None;
        }
        (1..=5).find(|&id| {
            let (kind, a, c) = case_parameters(id);
            let kind_ok = kind == self.kind || (self.kind == LatticeKind::Exponential && c == 0.0);
            kind_ok && a == self.a && (self.kind == LatticeKind::Orthogonal || c == self.c)
        })
    }
}

fn case_parameters(case: u8) -> (LatticeKind, f64, f64) {
    match case {
        1 => (LatticeKind::Orthogonal, 0.1, 0.0),
        2 => (LatticeKind::Exponential, 0.1, 0.15),
        3 => (LatticeKind::Exponential, 0.0513, 0.1),
        4 => (LatticeKind::Exponential, 0.0375, 0.15),
        5 => (LatticeKind::Exponential, 0.1, 0.1),
        _ => unreachable!("case ids run from 1 to 5"),
    }
}

/// The lattice of a numbered case with its corner at `origin`.
pub fn case_lattice(case: u8, origin: (f64, f64)) -> Result<LatticeSpec> {
    if !(1..=5).contains(&case) {
        return Err(Error::InvalidArgument(format!(
            "case must be 1..=5, got {case}"
        )));
    }
    let (kind, a, c) = case_parameters(case);
    Ok(LatticeSpec {
        kind,
        a,
        b: SPACING,
        c,
        x0: origin.0,
        y0: origin.1,
        n_sites: SIDE,
        m_sites: SIDE,
    })
}

/// Reference χ for `(case, solution)`.
pub fn reference_chi(case: u8, solution: SolutionId) -> Option<f64> {
    let row = match solution {
        SolutionId::F1 => [0.01267, 0.01651, 0.01147, 0.01408, 0.01437],
        SolutionId::F2 => [0.00249, 0.00610, 0.00642, 0.00913, 0.00430],
        SolutionId::Affine => return None,
    };
    (1..=5).contains(&case).then(|| row[case as usize - 1])
}

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub lattice: LatticeSpec,
    pub solution: SolutionId,
    pub boundary: BoundaryMode,
    pub march: March,
    /// When set, field and lattice tables are written under this directory.
    pub output: Option<PathBuf>,
}

impl ExperimentSpec {
    pub fn new(lattice: LatticeSpec, solution: SolutionId) -> Self {
        Self {
            lattice,
            solution,
            boundary: BoundaryMode::Oracle,
            march: March::Space,
            output: None,
        }
    }

    fn steps(&self) -> usize {
        match self.march {
            March::Time => self.lattice.m_sites - 1,
            March::Space => self.lattice.n_sites - 2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Table2Row {
    pub case: Option<u8>,
    pub solution: SolutionId,
    pub chi: ChiReport,
    pub max_residual: f64,
    pub lattice: LatticeSpec,
}

/// Builds the lattice, samples the initial data, evolves to the full square
/// (or as far as shrink mode reaches) and compares with the exact solution.
///
/// In shrink mode a march in `m` stops once a row has fewer than three sites.
pub fn run_case(spec: &ExperimentSpec) -> Result<Table2Row> {
    let g = spec.lattice.build()?;
    let exact = ExactSolution::from(spec.solution);
    let initial = Field::try_sample(&g, |x, y| exact.evaluate(x, y))?;
    let mut steps = spec.steps();
    if spec.boundary == BoundaryMode::Shrink && spec.march == March::Time {
        steps = steps.min((g.n_sites() - 1) / 2);
    }
    let cfg = EvolutionConfig {
        boundary: spec.boundary,
        oracle: Some(exact.clone()),
        steps,
        march: spec.march,
    };
    let field = evolve(&g, &initial, &cfg)?;
    let report = chi(&g, &field, &exact)?;
    let row = Table2Row {
        case: spec.lattice.case(),
        solution: spec.solution,
        chi: report,
        max_residual: max_residual(&g, &field)?,
        lattice: spec.lattice,
    };
    if let Some(dir) = &spec.output {
        std::fs::create_dir_all(dir)?;
        let stem = match row.case {
            Some(c) => format!("case{c}_{}", spec.solution),
            None => format!("custom_{}", spec.solution),
        };
        std::fs::write(dir.join(format!("{stem}_lattice.txt")), g.to_table())?;
        std::fs::write(dir.join(format!("{stem}_field.txt")), field.to_table())?;
    }
    Ok(row)
}

/// χ for all five cases and both solutions at one origin.
#[derive(Debug, Clone)]
pub struct Table2 {
    pub origin: (f64, f64),
    pub boundary: BoundaryMode,
    pub march: March,
    pub rows: Vec<Table2Row>,
}

/// The two qualitative conclusions drawn from the table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Orderings {
    /// For f2, case 1 beats every exponential case.
    pub orthogonal_best_f2: bool,
    /// At a = 0.1, c = 0.1 (case 5) beats c = 0.15 (case 2) for f1 and f2.
    pub dilation_monotone: bool,
}

impl Table2 {
    pub fn chi(&self, case: u8, solution: SolutionId) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.case == Some(case) && r.solution == solution)
            .map(|r| r.chi.chi)
    }

    pub fn orderings(&self) -> Orderings {
        let c = |case, s| self.chi(case, s).unwrap_or(f64::NAN);
        let f2_orth = c(1, SolutionId::F2);
        Orderings {
            orthogonal_best_f2: (2..=5).all(|k| f2_orth < c(k, SolutionId::F2)),
            dilation_monotone: [SolutionId::F1, SolutionId::F2]
                .into_iter()
                .all(|s| c(5, s) < c(2, s)),
        }
    }

    /// Machine-readable table, one row per case and solution.
    pub fn to_table(&self) -> String {
        let mut out = String::from(
            "case solution lattice a b c x0 y0 chi reference sites excluded max_residual\n",
        );
        for r in &self.rows {
            let l = &r.lattice;
            let case = r.case.map_or("-".to_string(), |c| c.to_string());
            let reference = r
                .case
                .and_then(|c| reference_chi(c, r.solution))
                .map_or("nan".to_string(), fmt_real);
            let _ = writeln!(
                out,
                "{case} {} {} {} {} {} {} {} {} {reference} {} {} {}",
                r.solution,
                match l.kind {
                    LatticeKind::Orthogonal => "orthogonal",
                    LatticeKind::Exponential => "exponential",
                },
                fmt_real(l.a),
                fmt_real(l.b),
                fmt_real(l.c),
                fmt_real(l.x0),
                fmt_real(l.y0),
                fmt_real(r.chi.chi),
                r.chi.num_sites,
                r.chi.excluded_sites,
                fmt_real(r.max_residual),
            );
        }
        out
    }

    pub fn summary(&self) -> String {
        let o = self.orderings();
        let mut s = String::new();
        let _ = writeln!(
            s,
            "# origin=({}, {}) boundary={:?} march={:?}",
            self.origin.0, self.origin.1, self.boundary, self.march
        );
        for sol in [SolutionId::F1, SolutionId::F2] {
            let _ = write!(s, "# {sol}:");
            for case in 1..=5 {
                let v = self.chi(case, sol).unwrap_or(f64::NAN);
                let r = reference_chi(case, sol).unwrap_or(f64::NAN);
                let _ = write!(s, " ({case}) {v:.5} [ref {r:.5}]");
            }
            let _ = writeln!(s);
        }
        let _ = writeln!(
            s,
            "# orthogonal beats every exponential case for f2: {}",
            o.orthogonal_best_f2
        );
        let _ = writeln!(
            s,
            "# c=0.1 beats c=0.15 at a=0.1 for f1 and f2: {}",
            o.dilation_monotone
        );
        let _ = writeln!(
            s,
            "# note: case (5) is interpreted as exponential a=0.1, c=0.1"
        );
        s
    }
}

pub fn run_table2(origin: (f64, f64), boundary: BoundaryMode, march: March) -> Result<Table2> {
    run_table2_to(origin, boundary, march, None)
}

/// [`run_table2`], writing every case's tables under `output` when given.
pub fn run_table2_to(
    origin: (f64, f64),
    boundary: BoundaryMode,
    march: March,
    output: Option<&Path>,
) -> Result<Table2> {
    let specs: Vec<ExperimentSpec> = [SolutionId::F1, SolutionId::F2]
        .into_iter()
        .flat_map(|sol| (1..=5).map(move |case| (case, sol)))
        .map(|(case, sol)| {
            let mut spec = ExperimentSpec::new(case_lattice(case, origin)?, sol);
            spec.boundary = boundary;
            spec.march = march;
            spec.output = output.map(Path::to_path_buf);
            Ok(spec)
        })
        .collect::<Result<_>>()?;
    // cases are independent
    let rows = std::thread::scope(|scope| {
        let handles: Vec<_> = specs
            .iter()
            .map(|s| scope.spawn(move || run_case(s)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("case worker panicked"))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(Table2 {
        origin,
        boundary,
        march,
        rows,
    })
}

/// Default origins scanned by [`sweep`].
pub fn default_sweep_origins() -> Vec<(f64, f64)> {
    let ys = [0.05, 0.1, 0.2, 0.3, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0];
    (0..=16)
        .flat_map(|i| ys.iter().map(move |&y| (-2.0 + 0.25 * i as f64, y)))
        .collect()
}

/// Closest computed value to one reference entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BestMatch {
    pub case: u8,
    pub solution: SolutionId,
    pub reference: f64,
    pub chi: f64,
    pub origin: (f64, f64),
    /// `max(chi/ref, ref/chi)`
    pub factor: f64,
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub tables: Vec<Table2>,
    /// One entry per `(case, solution)`.
    pub per_entry: Vec<BestMatch>,
    /// The origin minimising the worst factor over all ten entries.
    pub best_origin: (f64, f64),
    pub best_origin_factor: f64,
}

fn match_factor(chi: f64, reference: f64) -> f64 {
    let r = chi / reference;
    if r.is_finite() && r > 0.0 {
        r.max(1.0 / r)
    } else {
        f64::INFINITY
    }
}

pub fn sweep(origins: &[(f64, f64)], boundary: BoundaryMode, march: March) -> Result<SweepReport> {
    if origins.is_empty() {
        return Err(Error::InvalidArgument(
            "sweep needs at least one origin".into(),
        ));
    }
    let tables = origins
        .iter()
        .map(|&o| run_table2(o, boundary, march))
        .collect::<Result<Vec<_>>>()?;
    let mut per_entry = Vec::new();
    for sol in [SolutionId::F1, SolutionId::F2] {
        for case in 1..=5u8 {
            let reference = reference_chi(case, sol).expect("reference exists");
            let best = tables
                .iter()
                .map(|t| {
                    let chi = t.chi(case, sol).unwrap_or(f64::NAN);
                    (match_factor(chi, reference), chi, t.origin)
                })
                .min_by(|a, b| a.0.total_cmp(&b.0))
                .expect("tables nonempty");
            per_entry.push(BestMatch {
                case,
                solution: sol,
                reference,
                chi: best.1,
                origin: best.2,
                factor: best.0,
            });
        }
    }
    let (best_origin_factor, best_origin) = tables
        .iter()
        .map(|t| {
            let worst = t
                .rows
                .iter()
                .filter_map(|r| Some(match_factor(r.chi.chi, reference_chi(r.case?, r.solution)?)))
                .fold(1.0f64, f64::max);
            (worst, t.origin)
        })
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("tables nonempty");
    Ok(SweepReport {
        tables,
        per_entry,
        best_origin,
        best_origin_factor,
    })
}

impl SweepReport {
    pub fn summary(&self) -> String {
        let mut s = String::from("case solution reference best_chi factor x0 y0\n");
        for b in &self.per_entry {
            let _ = writeln!(
                s,
                "{} {} {} {} {} {} {}",
                b.case,
                b.solution,
                fmt_real(b.reference),
                fmt_real(b.chi),
                fmt_real(b.factor),
                fmt_real(b.origin.0),
                fmt_real(b.origin.1)
            );
        }
        let _ = writeln!(
            s,
            "# best single origin ({}, {}): every entry within a factor {:.3}",
            self.best_origin.0, self.best_origin.1, self.best_origin_factor
        );
        let both: Vec<_> = self
            .tables
            .iter()
            .filter(|t| {
                let o = t.orderings();
                o.orthogonal_best_f2 && o.dilation_monotone
            })
            .map(|t| format!("({}, {})", t.origin.0, t.origin.1))
            .collect();
        let _ = writeln!(s, "# origins reproducing both orderings: {}", both.len());
        if !both.is_empty() {
            let _ = writeln!(s, "# {}", both.join(" "));
        }
        s
    }
}

/// Whether every site of `inner` lies in the closed bounding box of `outer`.
pub fn covered_by(inner: &Grid, outer: &Grid) -> bool {
    let bounds = |g: &Grid| {
        let mut b = [
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
        ];
        for n in 0..g.n_sites() {
            for m in 0..g.m_sites() {
                b[0] = b[0].min(g.x(n, m));
                b[1] = b[1].max(g.x(n, m));
                b[2] = b[2].min(g.y(n, m));
                b[3] = b[3].max(g.y(n, m));
            }
        }
        b
    };
    let (i, o) = (bounds(inner), bounds(outer));
    let tol = 1e-12;
    i[0] >= o[0] - tol && i[1] <= o[1] + tol && i[2] >= o[2] - tol && i[3] <= o[3] + tol
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cases_resolve() {
        for case in 1..=5 {
            assert_eq!(
                case_lattice(case, DEFAULT_ORIGIN).unwrap().case(),
                Some(case)
            );
        }
        let mut l = case_lattice(2, DEFAULT_ORIGIN).unwrap();
        l.c = 0.2;
        assert_eq!(l.case(), None);
        assert!(case_lattice(6, DEFAULT_ORIGIN).is_err());
    }

    #[test]
    fn affine_case_is_exact() {
        for case in 1..=5 {
            let spec = ExperimentSpec::new(
                case_lattice(case, DEFAULT_ORIGIN).unwrap(),
                SolutionId::Affine,
            );
            let row = run_case(&spec).unwrap();
            assert!(row.chi.chi <= 1e-12, "case {case}: {}", row.chi.chi);
        }
    }

    #[test]
    fn default_run_orders_f2_cases_one_five_two() {
        let t = run_table2(DEFAULT_ORIGIN, BoundaryMode::Oracle, March::Space).unwrap();
        let c = |k| t.chi(k, SolutionId::F2).unwrap();
        assert!(c(1) < c(5) && c(5) < c(2), "{} {} {}", c(1), c(5), c(2));
        assert!(t.orderings().dilation_monotone);
        assert_eq!(t.rows.len(), 10);
    }

    #[test]
    fn f2_needs_positive_y() {
        let spec = ExperimentSpec::new(case_lattice(1, (0.0, 0.0)).unwrap(), SolutionId::F2);
        assert!(matches!(run_case(&spec), Err(Error::Domain(_))));
    }

    #[test]
    fn small_lattice_rejected() {
        let mut l = case_lattice(1, DEFAULT_ORIGIN).unwrap();
        l.m_sites = 2;
        assert!(matches!(
            run_case(&ExperimentSpec::new(l, SolutionId::F1)),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn inside_square_geometry() {
        let square = case_lattice(1, (0.0, 0.1)).unwrap().build().unwrap();
        for case in [3, 4] {
            let g = case_lattice(case, (0.0, 0.1)).unwrap().build().unwrap();
            assert!(covered_by(&g, &square), "case {case}");
        }
        let g = case_lattice(2, (0.0, 0.1)).unwrap().build().unwrap();
        assert!(!covered_by(&g, &square));
    }

    #[test]
    fn writes_outputs_reproducibly() {
        let dir = std::env::temp_dir().join(format!("invburgers-exp-{}", std::process::id()));
        let mut spec =
            ExperimentSpec::new(case_lattice(3, DEFAULT_ORIGIN).unwrap(), SolutionId::F1);
        spec.output = Some(dir.clone());
        run_case(&spec).unwrap();
        let first = std::fs::read(dir.join("case3_f1_field.txt")).unwrap();
        run_case(&spec).unwrap();
        let second = std::fs::read(dir.join("case3_f1_field.txt")).unwrap();
        assert_eq!(first, second);
        assert!(dir.join("case3_f1_lattice.txt").exists());
        std::fs::remove_dir_all(dir).unwrap();
    }
}
