use invburgers::exact::{cole_hopf, f1, f2};
use invburgers::experiment::{case_lattice, covered_by, reference_chi, DEFAULT_ORIGIN};
use invburgers::scheme::{residual, step_explicit, time_update};
use invburgers::symmetry::wave_residual;
use invburgers::{ExactSolution, Field, Generator, Grid, GroupFlow, LatticeDiffs, SolutionId};

/// Term-by-term transcription of the explicit six-point residual, indexed as
/// on a Schwarzian lattice: `h^x_n`, `h^y_m`, `σ^x_m`, `σ^y_n`.
fn transcribed_residual(g: &Grid, f: &Field, n: usize, m: usize) -> f64 {
    let u = |i, k| f.get(i, k).unwrap();
    let x = |i, k| g.x(i, k);
    let y = |i, k| g.y(i, k);
    let hx_n = x(n + 1, m) - x(n, m);
    let hx_n1 = x(n + 2, m) - x(n + 1, m);
    let hy_m = y(n, m + 1) - y(n, m);
    let hy_m1 = y(n, m + 2) - y(n, m + 1);
    let sx_m = x(n, m + 1) - x(n, m);
    let sx_m1 = x(n, m + 2) - x(n, m + 1);
    let sy_n = y(n + 1, m) - y(n, m);
    let sy_n1 = y(n + 2, m) - y(n + 1, m);

    let det00 = hx_n * hy_m - sx_m * sy_n;
    let dy_u = (-sx_m * (u(n + 1, m) - u(n, m)) + hx_n * (u(n, m + 1) - u(n, m))) / det00;
    let dx00 = (hy_m * (u(n + 1, m) - u(n, m)) - sy_n * (u(n, m + 1) - u(n, m))) / det00;
    let dx10 = (hy_m * (u(n + 2, m) - u(n + 1, m)) - sy_n1 * (u(n + 1, m + 1) - u(n + 1, m)))
        / (hx_n1 * hy_m - sx_m * sy_n1);
    let dx01 = (hy_m1 * (u(n + 1, m + 1) - u(n, m + 1)) - sy_n * (u(n, m + 2) - u(n, m + 1)))
        / (hx_n * hy_m1 - sx_m1 * sy_n);
    let dxx = (hy_m * (dx10 - dx00) - sy_n * (dx01 - dx00)) / det00;
    dy_u - dxx - dx00 * dx00
}

fn skew_schwarz_grid() -> Grid {
    Grid::from_fn(7, 7, |n, m| {
        let (n, m) = (n as f64, m as f64);
        (
            0.1 * n + 0.004 * n * n + 0.03 * m + 0.002 * m * m,
            0.12 * m + 0.02 * n - 0.001 * n * n,
        )
    })
    .unwrap()
}

#[test]
fn residual_matches_transcription_on_schwarz_lattices() {
    let grids = [
        Grid::orthogonal(0.1, 0.1, 0.0, 0.1, 7, 7).unwrap(),
        Grid::orthogonal(0.05, 0.2, -0.3, 0.4, 7, 7).unwrap(),
        skew_schwarz_grid(),
    ];
    for g in grids {
        assert!(g.schwarz_check(1e-12).is_schwarzian);
        for field in [
            Field::sample(&g, f1),
            Field::sample(&g, |x, y| (2.0 * x - y).sin() + x * x * y),
        ] {
            for n in 0..g.n_sites() - 2 {
                for m in 0..g.m_sites() - 2 {
                    let r = residual(&g, &field, n, m).unwrap();
                    let t = transcribed_residual(&g, &field, n, m);
                    assert!(
                        (r - t).abs() <= 1e-10 * t.abs().max(1.0),
                        "({n},{m}): {r} vs {t}"
                    );
                }
            }
        }
    }
}

#[test]
fn explicit_step_commutes_with_preserved_flows() {
    let g = Grid::orthogonal(0.1, 0.1, 0.0, 0.1, 8, 8).unwrap();
    for (n, m) in [(0, 0), (2, 3), (5, 6)] {
        let d00 = g.diffs_at(n, m).unwrap();
        let hx10 = g.x(n + 2, m) - g.x(n + 1, m);
        let pts = [(n, m), (n + 1, m), (n + 2, m)]
            .map(|(i, k)| (g.x(i, k), g.y(i, k), f1(g.x(i, k), g.y(i, k))));
        let u01 = time_update(&d00, hx10, pts[0].2, pts[1].2, pts[2].2);
        let top = (g.x(n, m + 1), g.y(n, m + 1), u01);
        for gen in Generator::PRESERVED {
            for eps in [-0.3, 0.2, 0.5] {
                let flow = GroupFlow::new(gen, eps);
                let p = pts.map(|(x, y, u)| flow.apply(x, y, u).unwrap());
                let t = flow.apply(top.0, top.1, top.2).unwrap();
                let d = LatticeDiffs {
                    hx: p[1].0 - p[0].0,
                    hy: t.1 - p[0].1,
                    sx: t.0 - p[0].0,
                    sy: p[1].1 - p[0].1,
                };
                assert_eq!(d.sy, 0.0);
                let solved = time_update(&d, p[2].0 - p[1].0, p[0].2, p[1].2, p[2].2);
                assert!(
                    (solved - t.2).abs() <= 1e-9 * t.2.abs().max(1.0),
                    "{gen} eps={eps}: {solved} vs {}",
                    t.2
                );
            }
        }
    }
}

#[test]
fn one_step_error_is_third_order_with_parabolic_scaling() {
    let row_error = |a: f64| {
        let g = Grid::orthogonal(a, a * a, 0.2, 0.3, 8, 3).unwrap();
        let mut f = Field::sample(&g, f1);
        for n in 0..8 {
            f.clear(n, 1);
            f.clear(n, 2);
        }
        step_explicit(&g, &f, 0)
            .unwrap()
            .into_iter()
            .enumerate()
            .map(|(n, v)| (v - f1(g.x(n, 1), g.y(n, 1))).abs())
            .fold(0.0, f64::max)
    };
    for a in [0.1, 0.05, 0.025] {
        let ratio = row_error(a) / row_error(a / 2.0);
        assert!(ratio >= 6.0, "a={a}: ratio {ratio}");
    }
}

/// Mixed second difference `ΔnΔm` of `q(x, y)` at a cell.
fn mixed_difference(g: &Grid, q: impl Fn(f64, f64) -> f64, n: usize, m: usize) -> f64 {
    let at = |i, k| q(g.x(i, k), g.y(i, k));
    at(n + 1, m + 1) - at(n + 1, m) - at(n, m + 1) + at(n, m)
}

#[test]
fn v6_wave_residuals_are_mixed_differences() {
    // ξ = 4xy and τ = 4y² give residual -ΔnΔm(ξ) on any lattice
    for g in [
        Grid::orthogonal(0.1, 0.1, 0.0, 0.1, 8, 8).unwrap(),
        Grid::exponential(0.1, 0.0, 0.1, 0.1, 0.15, 8, 8).unwrap(),
        skew_schwarz_grid(),
    ] {
        let f = Field::sample(&g, f1);
        for n in 0..g.n_sites() - 1 {
            for m in 0..g.m_sites() - 1 {
                let xi = wave_residual(
                    |x, y, u| Generator::V6.coefficients(x, y, u).0,
                    &g,
                    &f,
                    n,
                    m,
                )
                .unwrap();
                let tau = wave_residual(
                    |x, y, u| Generator::V6.coefficients(x, y, u).1,
                    &g,
                    &f,
                    n,
                    m,
                )
                .unwrap();
                let mx = -4.0 * mixed_difference(&g, |x, y| x * y, n, m);
                let mt = -4.0 * mixed_difference(&g, |_, y| y * y, n, m);
                assert!((xi - mx).abs() <= 1e-13 && (tau - mt).abs() <= 1e-13);
            }
        }
    }
}

#[test]
fn v6_wave_residuals_on_schwarz_lattices() {
    let g = skew_schwarz_grid();
    let f = Field::sample(&g, f1);
    for n in 0..g.n_sites() - 1 {
        for m in 0..g.m_sites() - 1 {
            let d = g.diffs_at(n, m).unwrap();
            let xi = wave_residual(
                |x, y, u| Generator::V6.coefficients(x, y, u).0,
                &g,
                &f,
                n,
                m,
            )
            .unwrap();
            let tau = wave_residual(
                |x, y, u| Generator::V6.coefficients(x, y, u).1,
                &g,
                &f,
                n,
                m,
            )
            .unwrap();
            assert!((xi + 4.0 * (d.hx * d.hy + d.sx * d.sy)).abs() <= 1e-13);
            assert!((tau + 8.0 * d.hy * d.sy).abs() <= 1e-13);
        }
    }
}

#[test]
fn v6_wave_residuals_on_exponential_lattice() {
    let (a, b, b0, c) = (0.1, 0.1, 0.1, 0.15);
    let g = Grid::exponential(a, 0.0, b, b0, c, 8, 8).unwrap();
    let f = Field::sample(&g, f1);
    for n in 0..7 {
        for m in 0..7 {
            let hx = g.diffs_at(n, m).unwrap().hx;
            let xi = wave_residual(
                |x, y, u| Generator::V6.coefficients(x, y, u).0,
                &g,
                &f,
                n,
                m,
            )
            .unwrap();
            let tau = wave_residual(
                |x, y, u| Generator::V6.coefficients(x, y, u).1,
                &g,
                &f,
                n,
                m,
            )
            .unwrap();
            let y = g.y(n, m);
            assert!(
                (xi + 4.0 * hx * (c * y + (1.0 + c) * b)).abs() <= 1e-13,
                "({n},{m})"
            );
            assert_eq!(tau, 0.0);
        }
    }
}

#[test]
fn cole_hopf_reproduces_named_solutions() {
    let ch1 = cole_hopf("travelling", |x, y| 1.0 + (y - x).exp());
    let ch2 = cole_hopf("source", |x: f64, y: f64| {
        1.0 + (-x * x / (4.0 * y)).exp() / y.sqrt()
    });
    for (x, y) in [(0.0, 0.1), (0.7, 0.3), (-1.2, 2.0), (3.0, 0.5)] {
        let e1 = ch1.evaluate(x, y).unwrap();
        let e2 = ch2.evaluate(x, y).unwrap();
        assert!((e1 - f1(x, y)).abs() <= 1e-14 * e1.abs().max(1.0));
        assert!((e2 - f2(x, y).unwrap()).abs() <= 1e-14 * e2.abs().max(1.0));
    }
    assert!(ExactSolution::from(SolutionId::F2)
        .evaluate(0.0, 0.0)
        .is_err());
}

#[test]
fn reference_values_and_case_geometry() {
    let expected = [
        (1, 0.01267, 0.00249),
        (2, 0.01651, 0.00610),
        (3, 0.01147, 0.00642),
        (4, 0.01408, 0.00913),
        (5, 0.01437, 0.00430),
    ];
    for (case, r1, r2) in expected {
        assert_eq!(reference_chi(case, SolutionId::F1), Some(r1));
        assert_eq!(reference_chi(case, SolutionId::F2), Some(r2));
    }
    // with a0 = 0 the narrow exponential lattices fit in the 0.7 x 0.7 square
    for origin in [(0.0, 0.1), (0.0, 1.0)] {
        let square = case_lattice(1, origin).unwrap().build().unwrap();
        for case in [3, 4] {
            let g = case_lattice(case, origin).unwrap().build().unwrap();
            assert!(covered_by(&g, &square));
            let top_right = g.x(7, 7);
            assert!(top_right <= 0.7 + 1e-12, "case {case}: {top_right}");
        }
    }
    let g = case_lattice(4, DEFAULT_ORIGIN).unwrap().build().unwrap();
    assert!((g.x(7, 7) - 0.0375 * 7.0 * 1.15f64.powi(7)).abs() < 1e-15);
}
