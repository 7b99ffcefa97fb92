mod config;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use invburgers::experiment::{
    default_sweep_origins, sweep, LatticeKind, LatticeSpec, DEFAULT_ORIGIN,
};
use invburgers::scheme::max_residual;
use invburgers::symmetry::commutator_flow_test;
use invburgers::{
    chi, evolve, fmt_real, invariants, run_table2_to, BoundaryMode, Error, EvolutionConfig,
    ExactSolution, Field, Generator, Grid, GroupFlow, InvariantSet, March, SolutionId, Stencil,
};

use config::Config;

#[derive(Parser)]
#[command(
    name = "invburgers",
    version,
    about = "Invariant potential Burgers schemes on quadrilateral lattices"
)]
struct Cli {
    /// key=value file supplying defaults for any flag
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct LatticeArgs {
    /// orthogonal | exponential
    #[arg(long)]
    lattice: Option<LatticeKind>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    /// dilation per row of the exponential lattice
    #[arg(long)]
    c: Option<f64>,
    #[arg(long, alias = "a0")]
    x0: Option<f64>,
    #[arg(long, alias = "b0")]
    y0: Option<f64>,
    /// sites along n
    #[arg(long)]
    n: Option<usize>,
    /// sites along m
    #[arg(long)]
    m: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the lattice as an `n m x y` table
    Lattice {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Report the four commutation-constraint violations
    CheckSchwarz {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Per-stencil invariants K1..K10 and I1
    Invariants {
        #[command(flatten)]
        lattice: LatticeArgs,
        /// `n m u` table; defaults to sampling --solution
        #[arg(long)]
        field: Option<PathBuf>,
        #[arg(long)]
        solution: Option<SolutionId>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// March the scheme from exact initial data
    Evolve {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long)]
        solution: Option<SolutionId>,
        /// shrink | oracle
        #[arg(long)]
        boundary: Option<BoundaryMode>,
        /// time (in m) | space (in n)
        #[arg(long)]
        march: Option<March>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Relative L2 distance of a field from an exact solution
    Chi {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long)]
        field: Option<PathBuf>,
        #[arg(long)]
        solution: Option<SolutionId>,
    },
    /// All five lattices against both exact solutions
    Table2 {
        #[arg(long)]
        x0: Option<f64>,
        #[arg(long)]
        y0: Option<f64>,
        #[arg(long)]
        boundary: Option<BoundaryMode>,
        #[arg(long)]
        march: Option<March>,
        /// scan origins and report the best match for each value
        #[arg(long)]
        sweep: bool,
        /// directory for per-case lattice and field tables
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Invariance of K1..K10, I1 under a group flow
    FlowTest {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long)]
        solution: Option<SolutionId>,
        #[arg(long)]
        generator: Option<Generator>,
        #[arg(long, allow_hyphen_values = true)]
        epsilon: Option<f64>,
        /// also run the flow commutator with this generator
        #[arg(long)]
        bracket: Option<Generator>,
        #[arg(long)]
        delta: Option<f64>,
        /// point `x,y,u` for the commutator
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
    },
}

fn lattice_spec(args: &LatticeArgs, cfg: &Config) -> Result<LatticeSpec> {
    let spec = LatticeSpec {
        kind: cfg.or(args.lattice, "lattice", LatticeKind::Orthogonal)?,
        a: cfg.or(args.a, "a", 0.1)?,
        b: cfg.or(args.b, "b", 0.1)?,
        c: cfg.or(args.c, "c", 0.15)?,
        x0: match cfg.pick(args.x0, "x0")? {
            Some(v) => v,
            None => cfg.or(None, "a0", DEFAULT_ORIGIN.0)?,
        },
        y0: match cfg.pick(args.y0, "y0")? {
            Some(v) => v,
            None => cfg.or(None, "b0", DEFAULT_ORIGIN.1)?,
        },
        n_sites: cfg.or(args.n, "n", 8)?,
        m_sites: cfg.or(args.m, "m", 8)?,
    };
    Ok(spec)
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_field(path: &Path, g: &Grid) -> Result<Field> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Field::from_table(&text, g)?)
}

fn sample(g: &Grid, solution: SolutionId) -> Result<(ExactSolution, Field)> {
    let exact = ExactSolution::from(solution);
    let f = Field::try_sample(g, |x, y| exact.evaluate(x, y))?;
    Ok((exact, f))
}

fn parse_point(s: &str) -> Result<(f64, f64, f64)> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .with_context(|| format!("point `{s}`"))?;
    match v[..] {
        [x, y, u] => Ok((x, y, u)),
        _ => bail!("point `{s}` needs three comma-separated values"),
    }
}

fn invariant_table(g: &Grid, f: &Field) -> Result<String> {
    let mut out = String::from("n m");
    for name in InvariantSet::NAMES {
        out.push(' ');
        out.push_str(name);
    }
    out.push('\n');
    for n in 0..g.n_sites().saturating_sub(2) {
        for m in 0..g.m_sites().saturating_sub(2) {
            let s = match Stencil::from_grid(g, f, n, m) {
                Ok(s) => s,
                Err(Error::MissingValue { .. }) => continue,
                Err(e) => return Err(e.into()),
            };
            let inv = invariants(&s)?;
            let _ = write!(out, "{n} {m}");
            for v in inv.components() {
                let _ = write!(out, " {}", v.map_or("nan".to_string(), fmt_real));
            }
            out.push('\n');
        }
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<()> {
    let cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    match cli.command {
        Command::Lattice { lattice, output } => {
            let g = lattice_spec(&lattice, &cfg)?.build()?;
            emit(&g.to_table(), cfg.pick(output, "output")?.as_deref())
        }
        Command::CheckSchwarz { lattice, tol } => {
            let g = lattice_spec(&lattice, &cfg)?.build()?;
            let r = g.schwarz_check(cfg.or(tol, "tol", 1e-12)?);
            println!("max_sx_violation={}", fmt_real(r.max_sx_violation));
            println!("max_hx_violation={}", fmt_real(r.max_hx_violation));
            println!("max_sy_violation={}", fmt_real(r.max_sy_violation));
            println!("max_hy_violation={}", fmt_real(r.max_hy_violation));
            println!("is_schwarzian={}", r.is_schwarzian);
            Ok(())
        }
        Command::Invariants {
            lattice,
            field,
            solution,
            output,
        } => {
            let g = lattice_spec(&lattice, &cfg)?.build()?;
            let f = match cfg.pick(field, "field")? {
                Some(p) => load_field(&p, &g)?,
                None => sample(&g, cfg.or(solution, "solution", SolutionId::F1)?)?.1,
            };
            emit(
                &invariant_table(&g, &f)?,
                cfg.pick(output, "output")?.as_deref(),
            )
        }
        Command::Evolve {
            lattice,
            solution,
            boundary,
            march,
            steps,
            output,
        } => {
            let g = lattice_spec(&lattice, &cfg)?.build()?;
            let (exact, init) = sample(&g, cfg.or(solution, "solution", SolutionId::F1)?)?;
            let boundary = cfg.or(boundary, "boundary", BoundaryMode::Oracle)?;
            let march = cfg.or(march, "march", March::Time)?;
            let default_steps = match (march, boundary) {
                (March::Time, BoundaryMode::Shrink) => ((g.n_sites() - 1) / 2).min(g.m_sites() - 1),
                (March::Time, BoundaryMode::Oracle) => g.m_sites() - 1,
                (March::Space, _) => g.n_sites() - 2,
            };
            let cfg_evolve = EvolutionConfig {
                boundary,
                oracle: Some(exact),
                steps: cfg.or(steps, "steps", default_steps)?,
                march,
            };
            let u = evolve(&g, &init, &cfg_evolve)?;
            let text = format!(
                "{}max_residual={}\n",
                u.to_table(),
                fmt_real(max_residual(&g, &u)?)
            );
            emit(&text, cfg.pick(output, "output")?.as_deref())
        }
        Command::Chi {
            lattice,
            field,
            solution,
        } => {
            let g = lattice_spec(&lattice, &cfg)?.build()?;
            let Some(path) = cfg.pick(field, "field")? else {
                bail!("chi needs --field");
            };
            let f = load_field(&path, &g)?;
            let exact = ExactSolution::from(cfg.or(solution, "solution", SolutionId::F1)?);
            println!("{}", chi(&g, &f, &exact)?);
            Ok(())
        }
        Command::Table2 {
            x0,
            y0,
            boundary,
            march,
            sweep: do_sweep,
            output,
        } => {
            let origin = (
                cfg.or(x0, "x0", DEFAULT_ORIGIN.0)?,
                cfg.or(y0, "y0", DEFAULT_ORIGIN.1)?,
            );
            let boundary = cfg.or(boundary, "boundary", BoundaryMode::Oracle)?;
            let march = cfg.or(march, "march", March::Space)?;
            let output = cfg.pick(output, "output")?;
            let t = run_table2_to(origin, boundary, march, output.as_deref())?;
            print!("{}{}", t.to_table(), t.summary());
            if cfg.flag(do_sweep, "sweep")? {
                let report = sweep(&default_sweep_origins(), boundary, march)?;
                print!("{}", report.summary());
            }
            Ok(())
        }
        Command::FlowTest {
            lattice,
            solution,
            generator,
            epsilon,
            bracket,
            delta,
            at,
        } => {
            let g = lattice_spec(&lattice, &cfg)?.build()?;
            let (_, f) = sample(&g, cfg.or(solution, "solution", SolutionId::F1)?)?;
            let generator = cfg.or(generator, "generator", Generator::V1)?;
            let flow = GroupFlow::new(generator, cfg.or(epsilon, "epsilon", 0.1)?);
            let mut worst = 0.0f64;
            let mut count = 0;
            for n in 0..g.n_sites() - 2 {
                for m in 0..g.m_sites() - 2 {
                    let s = Stencil::from_grid(&g, &f, n, m)?;
                    worst = worst.max(invburgers::flow_invariance_test(&s, &flow)?);
                    count += 1;
                }
            }
            println!(
                "generator={generator} epsilon={} max_change={} stencils={count}",
                flow.epsilon,
                fmt_real(worst)
            );
            if let Some(other) = cfg.pick(bracket, "bracket")? {
                let point = parse_point(&cfg.or(at, "at", "0.3,0.7,0.1".to_string())?)?;
                let r =
                    commutator_flow_test(generator, other, point, cfg.or(delta, "delta", 1e-3)?)?;
                let join = |v: [f64; 3]| v.map(fmt_real).join(",");
                println!(
                    "bracket=[{generator},{other}] observed={} expected={} rel_error={}",
                    join(r.observed),
                    join(r.expected),
                    fmt_real(r.rel_error)
                );
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", format!("{e:#}").replace('\n', " "));
            ExitCode::FAILURE
        }
    }
}
