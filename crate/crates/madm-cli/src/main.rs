//! `madm`: command-line laboratory for the multi-particle hopping
//! asymmetric diffusion model.
//!
//! Subcommands: `simulate` (kinetic Monte Carlo), `exact` (contour
//! formula cross-checked against the master equation), `fredholm`
//! (two-parameter and one-parameter determinant formulas),
//! `identities` (kernel and combinatorial identity suite), `tw`
//! (Tracy-Widom scaling experiment), and `cross-validate` (the full
//! oracle chain as a pass/fail matrix).
//!
//! Outputs are CSV (one-line header) plus, when `--out` is given, a
//! JSON sidecar `<out>.json` carrying every parameter, node count,
//! truncation depth, and seed needed to replay the run. Exit codes:
//! 0 success, 2 validation failure, 3 tolerance/convergence failure.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use madm::asympt::{linspace, tw_experiment};
use madm::exact::{contour_prob_finite, master_equation_prob};
use madm::exact::{strict_partition_sum_check, symmetrization_identity_check};
use madm::fredholm::{
    identity_prop13, identity_prop14, prob_one_param_with_tail, prob_two_param_with_tail,
    KernelParams, OneParamQuad, TwoParamQuad, TAIL_TARGET,
};
use madm::sim::{empirical_cdf, SimConfig};
use madm::skellam::Skellam;
use madm::{Error, ModelParams, QueryPoint, Result};

#[derive(Parser, Debug)]
#[command(name = "madm", version, about = "Numerical laboratory for the MADM lattice gas")]
struct Cli {
    /// Number of worker threads for Monte Carlo replicas (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Kinetic Monte Carlo estimate of P(x_m <= x) on an integer grid
    Simulate(SimulateArgs),
    /// Small-system exact values: contour formula with a master-equation error bar
    Exact(ExactArgs),
    /// Fredholm determinant formulas for the step initial condition
    Fredholm(FredholmArgs),
    /// Kernel and combinatorial identity suite with a deviation table
    Identities(IdentitiesArgs),
    /// Tracy-Widom scaling experiment: rescaled empirical CDF vs 1 - F2(-s)
    Tw(TwArgs),
    /// Run the full oracle chain and emit a pass/fail matrix
    CrossValidate(CrossValidateArgs),
}

/// Model parameters: either `--tau` (one-parameter mode, u = 1/(1+tau))
/// or `--u` alone (one-parameter mode, p = u) or `--u --p` (two-parameter).
#[derive(Args, Debug, Clone)]
struct ParamArgs {
    /// tau = v/u in (0, 1); implies one-parameter mode
    #[arg(long, conflicts_with_all = ["u", "p"])]
    tau: Option<f64>,
    /// right weight u in (1/2, 1)
    #[arg(long)]
    u: Option<f64>,
    /// jump weight p in (0, 1); defaults to u (one-parameter mode)
    #[arg(long, requires = "u")]
    p: Option<f64>,
}

impl ParamArgs {
    fn build(&self) -> Result<ModelParams> {
        match (self.tau, self.u, self.p) {
            (Some(tau), None, None) => ModelParams::one_param_from_tau(tau),
            (None, Some(u), None) => ModelParams::one_param(u),
            (None, Some(u), Some(p)) => ModelParams::new(u, p),
            _ => Err(Error::Precondition(
                "specify the model with --tau, or --u (optionally --p)".into(),
            )),
        }
    }
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Initial positions "y1,y2,..." (finite mode); omit for step mode
    #[arg(long, allow_hyphen_values = true)]
    init: Option<String>,
    /// Step-mode origin stack size (default max(16, 4m))
    #[arg(long)]
    n_big: Option<u64>,
    /// Tracked particle index (1-based)
    #[arg(long, default_value_t = 1)]
    m: u32,
    /// Physical end time of the runs
    #[arg(long)]
    t: f64,
    /// Inclusive integer grid "a..b"
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    #[arg(long, default_value_t = 10_000)]
    replicas: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// CSV output path (stdout if omitted); sidecar written to <out>.json
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExactArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Initial positions "y1,y2,..." (at most 4 particles)
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    init: String,
    #[arg(long, default_value_t = 1)]
    m: u32,
    /// Time multiplying the generator (the finite system carries no 1/gamma)
    #[arg(long)]
    t: f64,
    /// Inclusive integer grid "a..b"
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    /// Trapezoid nodes per nested contour
    #[arg(long, default_value_t = 128)]
    nodes: usize,
    /// Master-equation window halfwidth (default 14 + ceil(12 t))
    #[arg(long)]
    window: Option<i64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq)]
enum Formula {
    TwoParam,
    OneParam,
}

#[derive(Args, Debug)]
struct FredholmArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, value_enum, default_value_t = Formula::OneParam)]
    formula: Formula,
    #[arg(long, default_value_t = 1)]
    m: u32,
    /// Formula time t; probabilities refer to P(x_m(t/gamma) <= x)
    #[arg(long)]
    t: f64,
    /// Inclusive integer grid "a..b"
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    /// xi-contour nodes (two-parameter formula)
    #[arg(long, default_value_t = 288)]
    xi_nodes: usize,
    /// lambda-contour nodes (two-parameter formula)
    #[arg(long, default_value_t = 192)]
    lambda_nodes: usize,
    /// eta-contour nodes (one-parameter formula)
    #[arg(long, default_value_t = 288)]
    eta_nodes: usize,
    /// zeta-contour nodes (one-parameter formula)
    #[arg(long, default_value_t = 64)]
    zeta_nodes: usize,
    /// mu-contour nodes (one-parameter formula)
    #[arg(long, default_value_t = 96)]
    mu_nodes: usize,
    /// Truncation target for internal series/product tails
    #[arg(long, default_value_t = TAIL_TARGET)]
    tail_target: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq)]
enum Which {
    Prop13,
    Prop14,
    Partition,
    Symmetrization,
    All,
}

#[derive(Args, Debug)]
struct IdentitiesArgs {
    #[arg(long, value_enum, default_value_t = Which::All)]
    which: Which,
    #[arg(long, default_value_t = 0.5)]
    tau: f64,
    /// Deviation tolerance; any row above it fails the run
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Contour nodes for the kernel identities
    #[arg(long, default_value_t = 256)]
    nodes: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TwArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Particle density sigma = m/t of the tracked index
    #[arg(long, default_value_t = 0.25)]
    sigma: f64,
    /// Formula time t (simulation runs to physical time t/gamma)
    #[arg(long)]
    t: f64,
    #[arg(long, default_value_t = 20_000)]
    replicas: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = -5.0, allow_hyphen_values = true)]
    s_min: f64,
    #[arg(long, default_value_t = 5.0)]
    s_max: f64,
    #[arg(long, default_value_t = 41)]
    s_points: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CrossValidateArgs {
    /// Monte Carlo replicas for the simulator legs of the chain
    #[arg(long, default_value_t = 20_000)]
    replicas: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be >= 1");
            return ExitCode::from(2);
        }
        // ignore the error if a pool already exists (tests re-enter main)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let outcome = match cli.command {
        Command::Simulate(a) => cmd_simulate(&a),
        Command::Exact(a) => cmd_exact(&a),
        Command::Fredholm(a) => cmd_fredholm(&a),
        Command::Identities(a) => cmd_identities(&a),
        Command::Tw(a) => cmd_tw(&a),
        Command::CrossValidate(a) => cmd_cross_validate(&a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidParameter(_) | Error::Precondition(_) => ExitCode::from(2),
                _ => ExitCode::from(3),
            }
        }
    }
}

/// Parse an inclusive integer range "a..b"; "a" alone is a single point.
fn parse_x_range(s: &str) -> Result<Vec<i64>> {
    let parse_one = |t: &str| -> Result<i64> {
        t.trim()
            .parse()
            .map_err(|_| Error::Precondition(format!("cannot parse '{t}' as an integer")))
    };
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse_one(a)?, parse_one(b)?),
        None => {
            let v = parse_one(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(Error::Precondition(format!(
            "empty x-range {lo}..{hi} (need a <= b)"
        )));
    }
    Ok((lo..=hi).collect())
}

/// Parse "y1,y2,..." into a sorted position list.
fn parse_positions(s: &str) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    for part in s.split(',') {
        out.push(part.trim().parse().map_err(|_| {
            Error::Precondition(format!("cannot parse position '{part}' as an integer"))
        })?);
    }
    if out.is_empty() {
        return Err(Error::Precondition("empty initial configuration".into()));
    }
    out.sort_unstable();
    Ok(out)
}

/// Write the CSV to `--out` (or stdout) and, when a path is given, the
/// JSON sidecar to `<out>.json`.
fn emit(out: &Option<PathBuf>, csv: &str, sidecar: &serde_json::Value) -> Result<()> {
    match out {
        None => {
            print!("{csv}");
            Ok(())
        }
        Some(path) => {
            let io_err =
                |e: std::io::Error| Error::Precondition(format!("cannot write output: {e}"));
            std::fs::write(path, csv).map_err(io_err)?;
            let sidecar_path = PathBuf::from(format!("{}.json", path.display()));
            let body = serde_json::to_string_pretty(sidecar)
                .map_err(|e| Error::Precondition(format!("sidecar serialization: {e}")))?;
            std::fs::write(sidecar_path, body).map_err(io_err)?;
            Ok(())
        }
    }
}

fn base_sidecar(subcommand: &str) -> serde_json::Value {
    json!({
        "tool": "madm",
        "version": env!("CARGO_PKG_VERSION"),
        "subcommand": subcommand,
    })
}

fn cmd_simulate(a: &SimulateArgs) -> Result<ExitCode> {
    let params = a.params.build()?;
    let grid = parse_x_range(&a.x)?;
    let cfg = match &a.init {
        Some(init) => {
            if a.n_big.is_some() {
                return Err(Error::Precondition(
                    "--n-big applies to step mode only (omit --init)".into(),
                ));
            }
            let positions = parse_positions(init)?;
            let config = madm::Configuration::from_positions(&positions)?;
            SimConfig::finite(params, config, a.t, a.replicas, a.seed)?
        }
        None => {
            let n_big = a.n_big.unwrap_or((4 * u64::from(a.m)).max(16));
            SimConfig::step(params, a.t, a.replicas, a.seed, n_big)?
        }
    };
    let cdf = empirical_cdf(&cfg, a.m, &grid)?;
    let mut csv = String::from("x,cdf,stderr\n");
    for i in 0..grid.len() {
        let _ = writeln!(csv, "{},{},{}", cdf.xs[i], cdf.values[i], cdf.stderr[i]);
    }
    let mut sidecar = base_sidecar("simulate");
    sidecar["config"] = serde_json::to_value(&cfg)
        .map_err(|e| Error::Precondition(format!("sidecar serialization: {e}")))?;
    sidecar["m"] = json!(a.m);
    sidecar["x_grid"] = json!(grid);
    emit(&a.out, &csv, &sidecar)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_exact(a: &ExactArgs) -> Result<ExitCode> {
    let params = a.params.build()?;
    let grid = parse_x_range(&a.x)?;
    let y = parse_positions(&a.init)?;
    let halfwidth = a.window.unwrap_or(14 + (12.0 * a.t).ceil() as i64);
    let (ymin, ymax) = (y[0], *y.last().unwrap());
    let window = (ymin - halfwidth, ymax + halfwidth);
    let mut csv = String::from("x,prob,err\n");
    let mut max_err = 0.0f64;
    for &x in &grid {
        let contour = contour_prob_finite(&y, a.m, x, a.t, &params, a.nodes)?;
        let master = master_equation_prob(&y, a.m, x, a.t, &params, window)?;
        let err = (contour.prob - master).abs();
        max_err = max_err.max(err);
        let _ = writeln!(csv, "{},{},{}", x, contour.prob, err);
    }
    let mut sidecar = base_sidecar("exact");
    sidecar["params"] = serde_json::to_value(params)
        .map_err(|e| Error::Precondition(format!("sidecar serialization: {e}")))?;
    sidecar["init"] = json!(y);
    sidecar["m"] = json!(a.m);
    sidecar["t"] = json!(a.t);
    sidecar["nodes_per_contour"] = json!(a.nodes);
    sidecar["window"] = json!([window.0, window.1]);
    sidecar["max_abs_err"] = json!(max_err);
    emit(&a.out, &csv, &sidecar)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_fredholm(a: &FredholmArgs) -> Result<ExitCode> {
    let params = a.params.build()?;
    let grid = parse_x_range(&a.x)?;
    let mut csv = String::from("x,prob,imag_residual,refine_delta\n");
    let mut node_counts: Vec<usize> = vec![];
    let mut truncation_depths: Vec<usize> = vec![];
    for &x in &grid {
        let qp = QueryPoint::new(a.m, a.t, x)?;
        let eval = match a.formula {
            Formula::TwoParam => {
                let quad = TwoParamQuad {
                    xi_nodes: a.xi_nodes,
                    lambda_nodes: a.lambda_nodes,
                };
                prob_two_param_with_tail(&qp, &params, &quad, a.tail_target)?
            }
            Formula::OneParam => {
                let quad = OneParamQuad {
                    eta_nodes: a.eta_nodes,
                    zeta_nodes: a.zeta_nodes,
                    mu_nodes: a.mu_nodes,
                };
                prob_one_param_with_tail(&qp, &params, &quad, a.tail_target)?
            }
        };
        node_counts = eval.node_counts.clone();
        truncation_depths = eval.truncation_depths.clone();
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            x, eval.prob, eval.imag_residual, eval.refine_delta
        );
    }
    let mut sidecar = base_sidecar("fredholm");
    sidecar["params"] = serde_json::to_value(params)
        .map_err(|e| Error::Precondition(format!("sidecar serialization: {e}")))?;
    sidecar["formula"] = json!(match a.formula {
        Formula::TwoParam => "two-param",
        Formula::OneParam => "one-param",
    });
    sidecar["m"] = json!(a.m);
    sidecar["t"] = json!(a.t);
    sidecar["tail_target"] = json!(a.tail_target);
    sidecar["node_counts"] = json!(node_counts);
    sidecar["truncation_depths"] = json!(truncation_depths);
    emit(&a.out, &csv, &sidecar)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_identities(a: &IdentitiesArgs) -> Result<ExitCode> {
    if !(a.tol > 0.0) {
        return Err(Error::Precondition("--tol must be positive".into()));
    }
    let params = ModelParams::one_param_from_tau(a.tau)?;
    let mut rows: Vec<(String, f64)> = Vec::new();

    let kernel_lambdas = |which: &str, rows: &mut Vec<(String, f64)>| -> Result<()> {
        // moduli straddling 1 exercise both sides of the unit circle
        let kp = KernelParams::new(2, 1.0, 1, params);
        for (i, &r) in [0.4, 0.8, 1.2].iter().enumerate() {
            let angle = 2.0 * std::f64::consts::PI * (i as f64 + 0.3) / 3.0;
            let lambda = num_complex::Complex64::from_polar(r, angle);
            let eval = match which {
                "prop13" => identity_prop13(&kp, lambda, a.nodes)?,
                _ => identity_prop14(&kp, lambda, a.nodes)?,
            };
            rows.push((format!("{which}_lambda_{i}"), eval.deviation));
        }
        Ok(())
    };

    if matches!(a.which, Which::Prop13 | Which::All) {
        kernel_lambdas("prop13", &mut rows)?;
    }
    if matches!(a.which, Which::Prop14 | Which::All) {
        kernel_lambdas("prop14", &mut rows)?;
    }
    if matches!(a.which, Which::Partition | Which::All) {
        for k in 1..=6 {
            let (lhs, rhs) = strict_partition_sum_check(k, a.tau, 40)?;
            rows.push((format!("partition_k{k}"), (lhs - rhs).abs() / rhs.abs()));
        }
    }
    if matches!(a.which, Which::Symmetrization | Which::All) {
        for k in 2..=5 {
            let dev = symmetrization_identity_check(k, &params, 20, a.seed)?;
            rows.push((format!("symmetrization_k{k}"), dev));
        }
    }

    let mut csv = String::from("check,deviation,tolerance,pass\n");
    let mut all_pass = true;
    for (name, dev) in &rows {
        let pass = *dev < a.tol;
        all_pass &= pass;
        let _ = writeln!(csv, "{},{},{},{}", name, dev, a.tol, pass);
    }
    let mut sidecar = base_sidecar("identities");
    sidecar["tau"] = json!(a.tau);
    sidecar["tol"] = json!(a.tol);
    sidecar["nodes"] = json!(a.nodes);
    sidecar["seed"] = json!(a.seed);
    sidecar["all_pass"] = json!(all_pass);
    emit(&a.out, &csv, &sidecar)?;
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    })
}

fn cmd_tw(a: &TwArgs) -> Result<ExitCode> {
    let params = a.params.build()?;
    if a.s_points < 2 || a.s_min >= a.s_max {
        return Err(Error::Precondition(
            "need s_min < s_max and at least 2 grid points".into(),
        ));
    }
    let grid = linspace(a.s_min, a.s_max, a.s_points);
    let cmp = tw_experiment(&params, a.sigma, a.t, a.replicas, a.seed, &grid)?;
    let mut csv = String::from("s,empirical,limit,stderr\n");
    for i in 0..grid.len() {
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            cmp.s_grid[i], cmp.empirical[i], cmp.limit[i], cmp.stderr[i]
        );
    }
    let mut sidecar = base_sidecar("tw");
    sidecar["params"] = serde_json::to_value(params)
        .map_err(|e| Error::Precondition(format!("sidecar serialization: {e}")))?;
    sidecar["comparison"] = serde_json::to_value(&cmp)
        .map_err(|e| Error::Precondition(format!("sidecar serialization: {e}")))?;
    emit(&a.out, &csv, &sidecar)?;
    Ok(ExitCode::SUCCESS)
}

struct CrossRow {
    check: &'static str,
    value_a: f64,
    value_b: f64,
    deviation: f64,
    tolerance: f64,
}

impl CrossRow {
    fn pass(&self) -> bool {
        self.deviation < self.tolerance
    }
}

fn cmd_cross_validate(a: &CrossValidateArgs) -> Result<ExitCode> {
    if a.replicas < 1_000 {
        return Err(Error::Precondition(
            "cross-validate needs at least 1000 replicas".into(),
        ));
    }
    let mut rows: Vec<CrossRow> = Vec::new();
    // each entry is (value_a, value_b, deviation); the row keeps the
    // grid point with the worst deviation
    let mut push_max = |check: &'static str,
                        entries: &[(f64, f64, f64)],
                        tolerance: f64| {
        let (mut wa, mut wb, mut wd) = (0.0, 0.0, -1.0);
        for &(va, vb, d) in entries {
            if d > wd {
                (wa, wb, wd) = (va, vb, d);
            }
        }
        rows.push(CrossRow {
            check,
            value_a: wa,
            value_b: wb,
            deviation: wd,
            tolerance,
        });
    };
    let abs_dev = |va: f64, vb: f64| (va, vb, (va - vb).abs());

    // 1-2. single free particle: contour and master vs the Skellam law
    let params_skellam = ModelParams::new(2.0 / 3.0, 0.6)?; // tau = 0.5, p = 0.6
    let t = 1.0;
    let oracle = Skellam::new(params_skellam.p() * t, params_skellam.q() * t);
    let mut contour_pairs = vec![];
    let mut master_pairs = vec![];
    for x in -3..=3 {
        let c = contour_prob_finite(&[0], 1, x, t, &params_skellam, 128)?;
        let m = master_equation_prob(&[0], 1, x, t, &params_skellam, (-26, 26))?;
        contour_pairs.push(abs_dev(c.prob, oracle.cdf(x)));
        master_pairs.push(abs_dev(m, oracle.cdf(x)));
    }
    push_max("contour_vs_skellam_n1", &contour_pairs, 1e-8);
    push_max("master_vs_skellam_n1", &master_pairs, 1e-9);

    // 3. simulator vs the Skellam law, in units of 3 standard errors
    let cfg = SimConfig::finite(
        params_skellam,
        madm::Configuration::from_positions(&[0])?,
        t,
        a.replicas,
        a.seed,
    )?;
    let grid: Vec<i64> = (-3..=3).collect();
    let cdf = empirical_cdf(&cfg, 1, &grid)?;
    // deviation is |mc - skellam| / (3 stderr); pass below 1
    let mc_pairs: Vec<(f64, f64, f64)> = grid
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let band = (3.0 * cdf.stderr[i]).max(1e-12);
            (
                cdf.values[i],
                oracle.cdf(x),
                (cdf.values[i] - oracle.cdf(x)).abs() / band,
            )
        })
        .collect();
    push_max("mc_vs_skellam_3sigma", &mc_pairs, 1.0);

    // 4. two-particle system: contour formula vs master equation
    let params_two = ModelParams::new(0.6, 0.6)?;
    let mut two_pairs = vec![];
    for m in 1..=2u32 {
        for x in -3..=3 {
            let c = contour_prob_finite(&[0, 0], m, x, 0.5, &params_two, 160)?;
            let me = master_equation_prob(&[0, 0], m, x, 0.5, &params_two, (-22, 22))?;
            two_pairs.push(abs_dev(c.prob, me));
        }
    }
    push_max("contour_vs_master_n2", &two_pairs, 1e-6);

    // 5. step initial condition: two-parameter vs one-parameter formula
    let params_step = ModelParams::one_param_from_tau(0.5)?;
    let mut formula_pairs = vec![];
    for x in -2..=3 {
        let qp = QueryPoint::new(1, 1.0, x)?;
        let two = prob_two_param_with_tail(&qp, &params_step, &TwoParamQuad::default(), TAIL_TARGET)?;
        let one = prob_one_param_with_tail(&qp, &params_step, &OneParamQuad::default(), TAIL_TARGET)?;
        formula_pairs.push(abs_dev(two.prob, one.prob));
    }
    push_max("two_param_vs_one_param", &formula_pairs, 1e-6);

    // 6. one-parameter formula vs step-mode Monte Carlo, 3-stderr units
    let qp_t = 2.0;
    let cfg_step = SimConfig::step(
        params_step,
        qp_t / params_step.gamma(),
        a.replicas,
        a.seed.wrapping_add(1),
        40,
    )?;
    let grid_step: Vec<i64> = (-2..=6).collect();
    let mc_step = empirical_cdf(&cfg_step, 2, &grid_step)?;
    let mut sim_pairs = vec![];
    for (i, &x) in grid_step.iter().enumerate() {
        let qp = QueryPoint::new(2, qp_t, x)?;
        let one = prob_one_param_with_tail(&qp, &params_step, &OneParamQuad::default(), TAIL_TARGET)?;
        let band = (3.0 * mc_step.stderr[i]).max(1e-12);
        sim_pairs.push((
            one.prob,
            mc_step.values[i],
            (one.prob - mc_step.values[i]).abs() / band,
        ));
    }
    push_max("one_param_vs_mc_3sigma", &sim_pairs, 1.0);

    let mut csv = String::from("check,value_a,value_b,deviation,tolerance,pass\n");
    let mut all_pass = true;
    for r in &rows {
        all_pass &= r.pass();
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            r.check,
            r.value_a,
            r.value_b,
            r.deviation,
            r.tolerance,
            r.pass()
        );
    }
    let mut sidecar = base_sidecar("cross-validate");
    sidecar["replicas"] = json!(a.replicas);
    sidecar["seed"] = json!(a.seed);
    sidecar["all_pass"] = json!(all_pass);
    emit(&a.out, &csv, &sidecar)?;
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    })
}
