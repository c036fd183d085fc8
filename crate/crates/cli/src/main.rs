//! Command-line front end: symbolic expansions, identity checks, norm tables
//! and quadrature-based verification reports.

mod parse;
mod report;

use std::f64::consts::PI;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;

use schwarzian_lab::automorphic::{
    automorphy_check, bergman_project, metzger_element, poincare_theta, wp_pairing, CyclicGroup, GroupSpec,
    PairingSpec,
};
use schwarzian_lab::identities::{self, Identity};
use schwarzian_lab::integral_ops::{
    ahlfors_weill, ahlfors_weill_consistency, d0_beta, d0_beta_operator_bound, kernel_criterion_check,
    repro_check, repro_test_form, sigma_coefficients, CheckReport,
};
use schwarzian_lab::maps::{schlicht_catalog, HyperbolicDomain};
use schwarzian_lab::norms::{bound_check, sharp_bound, sigma_norm_estimate, BoundReport, SampleGrid};
use schwarzian_lab::ode::{homogeneous_a_check, homogeneous_b_check, schwarzian_solve};
use schwarzian_lab::quadrature::QuadGrid;
use schwarzian_lab::symbolic::{classical, Classical};
use schwarzian_lab::{Jet, Series};

use report::{Check, Report};

const THREADS_ENV: &str = "SCHWARZIAN_LAB_THREADS";
const DEFAULT_GROUP: &str = r#"{"kind":"cyclic","fixpoints":[0.3,2.5],"multiplier":3.0}"#;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "schwarzian-lab", version, about = "Higher Schwarzian derivatives and their integral operators")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Overrides the command's default tolerance; must be positive.
    #[arg(long, global = true, allow_negative_numbers = true)]
    tolerance: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print σ_n of a series in canonical form.
    Expand {
        #[arg(long)]
        series: Series,
        #[arg(long)]
        n: usize,
    },
    /// Randomized check of one identity.
    Verify {
        /// covariance, altrec, schwinv, affine, bol or weight
        identity: Identity,
        #[arg(long, default_value = "A")]
        series: Series,
        #[arg(long, value_delimiter = ',', default_value = "3,4,5,6")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Sampled B_{n−1} norm of σ_n[f] against the sharp bound.
    Norm {
        /// Catalog name, inline JSON or @file.json.
        #[arg(long, default_value = "koebe")]
        function: String,
        #[arg(long, default_value = "A")]
        series: Series,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 14)]
        levels: usize,
        #[arg(long, default_value_t = 256)]
        angles: usize,
    },
    /// Sharp-bound table over the schlicht catalog.
    Bound {
        /// Both series when omitted.
        #[arg(long)]
        series: Option<Series>,
        #[arg(long, value_delimiter = ',', default_value = "3,4,5")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        levels: usize,
        #[arg(long, default_value_t = 64)]
        angles: usize,
    },
    /// Differential of the higher Bers map at the origin, with its operator-norm bound.
    Dzero {
        #[arg(long, default_value = "A")]
        series: Series,
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// zero, aw:<poly>, angular:<m>, inline JSON or @file.json.
        #[arg(long, default_value = "aw:1")]
        nu: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value_t = 1)]
        grid_factor: usize,
    },
    /// Ahlfors–Weill section: its value for |z| > 1, or D₀β̃₃(s(φ)) = φ for |z| < 1.
    Aw {
        #[arg(long, default_value = "1")]
        phi: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value_t = 1)]
        grid_factor: usize,
    },
    /// Reproducing formula on the lower half-plane for φ(z) = (z − i)^{−2q}.
    Repro {
        #[arg(long, default_value_t = 2)]
        q: i32,
        #[arg(long, default_value = "0,-2", allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value_t = 1)]
        grid_factor: usize,
    },
    /// Differential at the origin against the ω-function pairing.
    KernelCriterion {
        #[arg(long, default_value = "A")]
        series: Series,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value = "aw:1,1,1,1")]
        nu: String,
        #[arg(long, default_value = "0.3,0.2", allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value_t = 1)]
        grid_factor: usize,
    },
    /// Poincaré series over a cyclic group: automorphy defect against the tail estimate.
    Theta {
        #[arg(long, default_value = DEFAULT_GROUP)]
        group: String,
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long, default_value_t = 8)]
        radius: usize,
        #[arg(long, default_value = "0.1,0.2", allow_hyphen_values = true)]
        z: String,
        /// Polynomial to symmetrize.
        #[arg(long, default_value = "1,0.5")]
        f: String,
        /// Also report |Θ[p(·;k,g₀)](z)| over radii 4, 8, 16 for this k.
        #[arg(long)]
        metzger: Option<u32>,
    },
    /// Weil–Petersson pairing: closed form on the disc, or the unfolding identity for a cyclic group.
    Pairing {
        #[arg(long, default_value = r#"{"kind":"trivial"}"#)]
        group: String,
        #[arg(long, default_value_t = 2)]
        s: u32,
        #[arg(long, default_value = "1,0.5")]
        f: String,
        #[arg(long, default_value = "[[1,0],[0.5,0.25]]")]
        h: String,
        #[arg(long, default_value_t = 24)]
        radius: usize,
    },
    /// s-Bergman projection of w^k on the disc.
    Bergman {
        #[arg(long, default_value_t = 2)]
        s: u32,
        #[arg(long, value_delimiter = ',', default_value = "0,1,2,3,4")]
        k: Vec<u32>,
        #[arg(long, default_value = "0.35,-0.2", allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value_t = 1)]
        grid_factor: usize,
    },
    /// Power-series solutions.
    Solve {
        #[command(subcommand)]
        target: SolveTarget,
    },
}

#[derive(Debug, Subcommand)]
enum SolveTarget {
    /// S_f = φ through h'' + ½φh = 0.
    Ode {
        #[arg(long, default_value = "1")]
        phi: String,
        #[arg(long, default_value_t = 12)]
        order: usize,
    },
    /// σ^A_n[g⁻¹] for S_g = P with deg P ≤ n − 4.
    HomogA {
        #[arg(long, default_value = "0.5")]
        p: String,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        order: usize,
    },
    /// σ^B_n[f] for f' = P^{−2/(n−2)}.
    HomogB {
        #[arg(long, default_value = "1,0,1")]
        alpha: String,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        order: usize,
    },
}

/// Invalid configuration or input outside an operator's domain; exit status 2.
#[derive(Debug)]
struct ConfigError(String);

impl<E: std::fmt::Display> From<E> for ConfigError {
    fn from(e: E) -> Self {
        ConfigError(e.to_string())
    }
}

type CmdResult = Result<Report, ConfigError>;

fn tol(cli_tol: Option<f64>, default: f64) -> f64 {
    cli_tol.unwrap_or(default)
}

fn poly_eval(p: &[Complex64], z: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

fn poly_sup(p: &[Complex64]) -> f64 {
    p.iter().map(|a| a.norm()).sum()
}

fn check_from(name: &str, r: &CheckReport, tolerance: f64) -> Check {
    Check::new(name, r.lhs, r.rhs, r.relerr, tolerance).with_detail(r)
}

fn expand(series: Series, n: usize) -> CmdResult {
    let e = series.sigma(n)?;
    let text = e.to_string();
    Ok(Report::new("expand", Vec::new())
        .with_data(json!({
            "series": series,
            "n": n,
            "expression": text,
            "monomial_part": e.monomial_part().to_string(),
            "weights": e.weights(),
        }))
        .with_text(text))
}

fn verify(identity: Identity, series: Series, orders: &[usize], trials: usize, seed: u64, t: Option<f64>) -> CmdResult {
    let default = match identity {
        Identity::Covariance => 1e-9,
        Identity::Weight => 0.0,
        _ => 1e-8,
    };
    let tolerance = tol(t, default);
    let r = identities::run(identity, series, orders, trials, seed, tolerance)?;
    let check = Check::new(
        format!("{:?}", identity).to_lowercase(),
        r.max_residual,
        0.0,
        r.max_residual,
        tolerance,
    )
    .with_detail(&r);
    Ok(Report::new("verify", vec![check]))
}

fn norm(function: &str, series: Series, n: usize, levels: usize, angles: usize, t: Option<f64>) -> CmdResult {
    let f = parse::function(function)?;
    let grid = SampleGrid::new(levels, angles, HyperbolicDomain::Disc)?;
    let est = sigma_norm_estimate(series, n, &f, &grid)?;
    let bound = sharp_bound(series, n);
    let check = Check::at_most(format!("{function}/{series}/{n}"), est.value, bound, tol(t, 0.0)).with_detail(est);
    Ok(Report::new("norm", vec![check]))
}

fn bound(series: Option<Series>, orders: &[usize], levels: usize, angles: usize, t: Option<f64>) -> CmdResult {
    let grid = SampleGrid::new(levels, angles, HyperbolicDomain::Disc)?;
    let tolerance = tol(t, 0.0);
    let all = match series {
        Some(s) => vec![s],
        None => vec![Series::A, Series::B],
    };
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for (name, f) in schlicht_catalog() {
        for &s in &all {
            for &n in orders {
                let r: BoundReport = bound_check(s, n, &name, &f, &grid, tolerance)?;
                rows.push(r.csv_row());
                checks.push(Check::at_most(format!("{name}/{s}/{n}"), r.estimate, r.bound, tolerance).with_detail(&r));
            }
        }
    }
    Ok(Report::new("bound", checks).with_csv(BoundReport::CSV_HEADER, rows))
}

fn ext_grid(factor: usize) -> Result<QuadGrid, ConfigError> {
    Ok(QuadGrid::default_for(HyperbolicDomain::ExteriorDisc, factor)?)
}

fn dzero(series: Series, n: usize, nu: &str, z: &str, factor: usize, t: Option<f64>) -> CmdResult {
    let nu = parse::density(nu)?;
    let z = parse::complex(z)?;
    let grid = ext_grid(factor)?;
    let coeffs = sigma_coefficients(series, n)?;
    let value = d0_beta(&coeffs, &nu, z, &grid)?;
    let weighted = value.norm() * (1.0 - z.norm_sqr()).powi(n as i32 - 1);
    let bound = d0_beta_operator_bound(series, n) * nu.sup_bound();
    let check = Check::at_most("operator_bound", weighted, bound, tol(t, 0.0)).with_detail(json!({
        "series": series, "n": n, "nu": nu, "z": z, "value": value, "coefficients": coeffs,
    }));
    Ok(Report::new("dzero", vec![check]).with_data(json!({ "value": value })))
}

fn aw(phi: &str, z: &str, factor: usize, t: Option<f64>) -> CmdResult {
    let phi = parse::polynomial(phi)?;
    let z = parse::complex(z)?;
    if z.norm_sqr() > 1.0 {
        let v = ahlfors_weill(|w| poly_eval(&phi, w), z)?;
        return Ok(Report::new("aw", Vec::new())
            .with_data(json!({ "z": z, "value": v }))
            .with_text(report::Quantity::from(v).to_string()));
    }
    let r = ahlfors_weill_consistency(&phi, z, &ext_grid(factor)?)?;
    Ok(Report::new("aw", vec![check_from("d0_beta_of_section", &r, tol(t, 2e-2))]))
}

fn repro(q: i32, z: &str, factor: usize, t: Option<f64>) -> CmdResult {
    let z = parse::complex(z)?;
    let grid = QuadGrid::default_for(HyperbolicDomain::UpperHalf, factor)?;
    let r = repro_check(repro_test_form(q), q, z, &grid)?;
    Ok(Report::new("repro", vec![check_from("reproducing_formula", &r, tol(t, 1e-2))]))
}

fn kernel(series: Series, n: usize, nu: &str, z: &str, factor: usize, t: Option<f64>) -> CmdResult {
    let nu = parse::density(nu)?;
    let z = parse::complex(z)?;
    let r = kernel_criterion_check(series, &nu, n, z, &ext_grid(factor)?)?;
    Ok(Report::new("kernel-criterion", vec![check_from("pairing_identity", &r, tol(t, 1e-2))]))
}

fn cyclic_from(spec: &GroupSpec) -> Result<CyclicGroup, ConfigError> {
    match spec {
        GroupSpec::Cyclic { fixpoints, multiplier } => Ok(CyclicGroup::new(fixpoints[0], fixpoints[1], *multiplier)?),
        _ => Err(ConfigError("this command needs a cyclic group".into())),
    }
}

fn theta(group: &str, q: u32, radius: usize, z: &str, f: &str, metzger: Option<u32>, t: Option<f64>) -> CmdResult {
    let grp = cyclic_from(&parse::group(group)?)?;
    let z = parse::complex(z)?;
    if z.norm_sqr() >= 1.0 {
        return Err(ConfigError(format!("z = {z} is not in the unit disc")));
    }
    let p = parse::polynomial(f)?;
    let fun = |w: Complex64| poly_eval(&p, w);
    let r = automorphy_check(&fun, q, poly_sup(&p), &grp, radius, z)?;
    let mut checks = vec![Check::at_most("automorphy", r.residual, r.bound, tol(t, 0.0)).with_detail(&r)];
    if let Some(k) = metzger {
        let el = metzger_element(k, grp.generator(), q);
        let sizes: Vec<f64> = [4usize, 8, 16]
            .iter()
            .map(|&m| {
                grp.ball(m)
                    .map(|b| poincare_theta(&|w| el.eval(w), q, &b, z, el.sup_bound()).value.norm())
            })
            .collect::<Result<_, _>>()?;
        let worst = sizes.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
        checks.push(
            Check::new("metzger_decay", sizes[2], sizes[0], worst.max(0.0), 0.0)
                .with_detail(json!({ "k": k, "radii": [4, 8, 16], "magnitudes": sizes })),
        );
    }
    Ok(Report::new("theta", checks))
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

fn pairing(group: &str, s: u32, f: &str, h: &str, radius: usize, t: Option<f64>) -> CmdResult {
    let spec = parse::group(group)?;
    let hp = parse::polynomial(h)?;
    let tolerance = tol(t, 1e-2);
    match &spec {
        GroupSpec::Trivial => {
            let fp = parse::polynomial(f)?;
            let ps = PairingSpec::new(s, HyperbolicDomain::Disc, GroupSpec::Trivial)?;
            let grid = ps.grid(1)?;
            let lhs = wp_pairing(|z| poly_eval(&fp, z), |z| poly_eval(&hp, z), &ps, &grid)?;
            // ⟨z^k, z^k⟩_s = π k! (2s − 2)!/(k + 2s − 1)!
            let rhs: Complex64 = fp
                .iter()
                .zip(&hp)
                .enumerate()
                .map(|(k, (a, b))| {
                    let k = k as u32;
                    a * b.conj() * (PI * factorial(k) * factorial(2 * s - 2) / factorial(k + 2 * s - 1))
                })
                .sum();
            let err = (lhs - rhs).norm() / rhs.norm().max(f64::MIN_POSITIVE);
            Ok(Report::new("pairing", vec![Check::new("closed_form", lhs, rhs, err, tolerance)]))
        }
        GroupSpec::Cyclic { .. } => {
            let grp = cyclic_from(&spec)?;
            let ps = PairingSpec::new(s, HyperbolicDomain::Disc, spec.clone())?;
            let form = grp.automorphic_form(s);
            let ball = grp.ball(radius)?;
            let sup = poly_sup(&hp);
            let hf = |z: Complex64| poly_eval(&hp, z);
            let theta_h = |z: Complex64| poincare_theta(&hf, s, &ball, z, sup).value;
            let lhs = wp_pairing(&form, theta_h, &ps, &ps.grid(1)?)?;
            let full = PairingSpec::new(s, HyperbolicDomain::Disc, GroupSpec::Trivial)?;
            let rhs = wp_pairing(&form, hf, &full, &full.grid(1)?)?;
            let err = (lhs - rhs).norm() / rhs.norm().max(f64::MIN_POSITIVE);
            Ok(Report::new("pairing", vec![Check::new("unfolding", lhs, rhs, err, tolerance)]))
        }
        GroupSpec::Generators { .. } => Err(ConfigError("pairing supports trivial or cyclic groups".into())),
    }
}

fn bergman(s: u32, ks: &[u32], z: &str, factor: usize, t: Option<f64>) -> CmdResult {
    let z = parse::complex(z)?;
    if z.norm_sqr() >= 1.0 {
        return Err(ConfigError(format!("z = {z} is not in the unit disc")));
    }
    let grid = QuadGrid::default_for(HyperbolicDomain::Disc, factor)?;
    let tolerance = tol(t, 1e-3);
    let zero = Complex64::new(0.0, 0.0);
    let one = bergman_project(|_| Complex64::new(1.0, 0.0), s, zero, &grid)?;
    let mut checks = vec![Check::new("constant_at_origin", one, 1.0, (one - 1.0).norm(), tolerance)];
    for &k in ks {
        let v = bergman_project(|w: Complex64| w.powu(k), s, z, &grid)?;
        let exact = z.powu(k);
        checks.push(Check::new(format!("monomial_{k}"), v, exact, (v - exact).norm(), tolerance));
    }
    Ok(Report::new("bergman", checks))
}

fn solve(target: &SolveTarget, t: Option<f64>) -> CmdResult {
    let tolerance = tol(t, 1e-9);
    match target {
        SolveTarget::Ode { phi, order } => {
            let p = parse::polynomial(phi)?;
            let mut coeffs = p.clone();
            coeffs.resize(order + 1, Complex64::new(0.0, 0.0));
            coeffs.truncate(order + 1);
            let phi_jet = Jet::new(Complex64::new(0.0, 0.0), coeffs)?;
            let sol = schwarzian_solve(&phi_jet, *order)?;
            let s = classical(Classical::Schwarzian).evaluate_jet(&sol.f)?;
            let residual = s.sub(&phi_jet.truncate(s.order()))?.max_abs_coeff();
            let w = sol.wronskian_jet()?;
            let drift = w.sub(&Jet::constant(w.center(), sol.wronskian, w.order()))?.max_abs_coeff();
            let checks = vec![
                Check::new("schwarzian_residual", residual, 0.0, residual, tolerance),
                Check::new("wronskian_drift", drift, 0.0, drift, tolerance),
            ];
            Ok(Report::new("solve", checks).with_data(json!({
                "f": sol.f.coeffs(),
                "wronskian": sol.wronskian,
            })))
        }
        SolveTarget::HomogA { p, n, order } => {
            let r = homogeneous_a_check(&parse::polynomial(p)?, *n, *order)?;
            Ok(Report::new(
                "solve",
                vec![Check::new("homogeneous_a", r.residual, 0.0, r.residual, tolerance).with_detail(&r)],
            ))
        }
        SolveTarget::HomogB { alpha, n, order } => {
            let r = homogeneous_b_check(*n, &parse::polynomial(alpha)?, *order)?;
            Ok(Report::new(
                "solve",
                vec![Check::new("homogeneous_b", r.residual, 0.0, r.residual, tolerance).with_detail(&r)],
            ))
        }
    }
}

fn configure_threads() -> Result<(), ConfigError> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| ConfigError(format!("{THREADS_ENV} must be a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn run(cli: &Cli) -> CmdResult {
    if let Some(t) = cli.tolerance {
        if !(t > 0.0 && t.is_finite()) {
            return Err(ConfigError(format!("tolerance must be positive, got {t}")));
        }
    }
    let t = cli.tolerance;
    match &cli.command {
        Command::Expand { series, n } => expand(*series, *n),
        Command::Verify { identity, series, n, trials } => verify(*identity, *series, n, *trials, cli.seed, t),
        Command::Norm { function, series, n, levels, angles } => norm(function, *series, *n, *levels, *angles, t),
        Command::Bound { series, n, levels, angles } => bound(*series, n, *levels, *angles, t),
        Command::Dzero { series, n, nu, z, grid_factor } => dzero(*series, *n, nu, z, *grid_factor, t),
        Command::Aw { phi, z, grid_factor } => aw(phi, z, *grid_factor, t),
        Command::Repro { q, z, grid_factor } => repro(*q, z, *grid_factor, t),
        Command::KernelCriterion { series, n, nu, z, grid_factor } => kernel(*series, *n, nu, z, *grid_factor, t),
        Command::Theta { group, q, radius, z, f, metzger } => theta(group, *q, *radius, z, f, *metzger, t),
        Command::Pairing { group, s, f, h, radius } => pairing(group, *s, f, h, *radius, t),
        Command::Bergman { s, k, z, grid_factor } => bergman(*s, k, z, *grid_factor, t),
        Command::Solve { target } => solve(target, t),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {}", e.0);
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(report) => {
            let out = match cli.format {
                Format::Json => report.to_json() + "\n",
                Format::Csv => report.to_csv(),
                Format::Text => report.to_text(),
            };
            print!("{out}");
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.0);
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use schwarzian_lab::integral_ops::DensityFn;

    #[test]
    fn pairing_closed_form_matches_quadrature() {
        let r = pairing(r#"{"kind":"trivial"}"#, 2, "1,0.5,0.25", "[[1,0],[0,1],[2,0]]", 0, Some(1e-10)).unwrap();
        assert!(r.passed, "{:?}", r.checks);
        let r3 = pairing(r#"{"kind":"trivial"}"#, 3, "1,0.5", "1,1", 0, Some(1e-10)).unwrap();
        assert!(r3.passed, "{:?}", r3.checks);
    }

    #[test]
    fn densities_need_sup_bounds() {
        let nu = parse::density("angular:3").unwrap();
        assert_eq!(nu, DensityFn::Angular { m: 3, amp: [1.0, 0.0] });
        assert_eq!(nu.sup_bound(), 1.0);
    }
}
