//! Command-line front end. Every command reads one JSON config, writes its
//! artifacts under `<out>/<command>/`, and maps failures to exit codes:
//! 0 success, 1 usage or config error, 2 model-level error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::coeffs::{check_hypotheses, ProblemSpec};
use crate::config::{parse_config, ConfigError, RunConfig};
use crate::eigen::{critical_length, principal_eigenvalue, GrowthFn};
use crate::error::FbError;
use crate::periodic_ode::carrying_levels;
use crate::scenarios;
use crate::semiwave::{semiwave_speed, speed_bounds};
use crate::single_fb::{classify_single, simulate_single, speed_estimate, Thresholds, Verdict};
use crate::system_fb::{
    classify_quartering, compare_runs, minimal_habitat, mu_threshold, simulate_system,
    verify_longtime_sandwich, Analysis, Quartering, Species, SystemTrajectory,
};

/// Environment variable that overrides the default output directory.
pub const OUT_ENV: &str = "FBLAB_OUT";
const DEFAULT_OUT: &str = "fblab-out";

#[derive(Debug, Parser)]
#[command(
    name = "fblab",
    version,
    about = "Two-species competition with two free boundaries"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output directory (default: $FBLAB_OUT, then ./fblab-out).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Principal periodic eigenvalue on [0, l].
    Eigen { config: PathBuf },
    /// All critical habitat lengths.
    CriticalLengths { config: PathBuf },
    /// Carrying orbits of the logistic envelopes.
    Orbit { config: PathBuf },
    /// Extremal half-line profiles U1, U2, V1, V2.
    Profiles { config: PathBuf },
    /// Semi-wave speeds of each species alone.
    Semiwave { config: PathBuf },
    /// Asymptotic speed bounds for both species.
    SpeedBounds { config: PathBuf },
    /// Species u alone with its free boundary.
    SimulateSingle { config: PathBuf },
    /// The competition system.
    Simulate { config: PathBuf },
    /// Simulate and classify the long-time outcome.
    Classify { config: PathBuf },
    /// Bracket the minimal initial habitat for spreading.
    MinHabitat { config: PathBuf },
    /// Bracket the front coefficient threshold.
    MuThreshold { config: PathBuf },
    /// Check the ordering of two runs with different front coefficients.
    Compare { config: PathBuf },
    /// Report the weak-competition hypotheses.
    CheckHypotheses { config: PathBuf },
    /// Run a built-in scenario set.
    Reproduce { scenario: Reproduction },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Reproduction {
    /// The four long-time outcomes of the system.
    Quartering,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Model(#[from] FbError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Model(_) => 2,
            _ => 1,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parse arguments, run the command and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let out = cli
        .out
        .clone()
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    let start = Instant::now();
    match dispatch(&cli.command, &out) {
        Ok(()) => {
            eprintln!("done in {:.1} s", start.elapsed().as_secs_f64());
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: &Command, out: &Path) -> CliResult<()> {
    use Command::*;
    let (name, path) = match command {
        Reproduce { scenario } => return reproduce(*scenario, out),
        Eigen { config } => ("eigen", config),
        CriticalLengths { config } => ("critical-lengths", config),
        Orbit { config } => ("orbit", config),
        Profiles { config } => ("profiles", config),
        Semiwave { config } => ("semiwave", config),
        SpeedBounds { config } => ("speed-bounds", config),
        SimulateSingle { config } => ("simulate-single", config),
        Simulate { config } => ("simulate", config),
        Classify { config } => ("classify", config),
        MinHabitat { config } => ("min-habitat", config),
        MuThreshold { config } => ("mu-threshold", config),
        Compare { config } => ("compare", config),
        CheckHypotheses { config } => ("check-hypotheses", config),
    };
    let cfg = parse_config(path)?;
    let sink = Sink::new(out.join(name), name, &cfg)?;
    match command {
        Eigen { .. } => eigen(&cfg, &sink),
        CriticalLengths { .. } => critical_lengths(&cfg, &sink),
        Orbit { .. } => orbit(&cfg, &sink),
        Profiles { .. } => profiles(&cfg, &sink),
        Semiwave { .. } => semiwave(&cfg, &sink),
        SpeedBounds { .. } => bounds(&cfg, &sink),
        SimulateSingle { .. } => single(&cfg, &sink),
        Simulate { .. } => simulate(&cfg, &sink),
        Classify { .. } => classify(&cfg, &sink),
        MinHabitat { .. } => min_habitat(&cfg, &sink),
        MuThreshold { .. } => mu_search(&cfg, &sink),
        Compare { .. } => compare(&cfg, &sink),
        CheckHypotheses { .. } => hypotheses(&cfg, &sink),
        Reproduce { .. } => unreachable!(),
    }
}

/// Output directory of one command plus the resolved config echoed into
/// every JSON file.
struct Sink {
    dir: PathBuf,
    command: &'static str,
    config: Value,
}

impl Sink {
    fn new(dir: PathBuf, command: &'static str, cfg: &impl Serialize) -> CliResult<Self> {
        std::fs::create_dir_all(&dir).map_err(|source| CliError::Io {
            path: dir.display().to_string(),
            source,
        })?;
        Ok(Self {
            dir,
            command,
            config: serde_json::to_value(cfg).expect("config serializes"),
        })
    }

    fn write(&self, file: &str, text: &str) -> CliResult<()> {
        let path = self.dir.join(file);
        std::fs::write(&path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    fn json(&self, file: &str, result: impl Serialize) -> CliResult<()> {
        let doc = json!({
            "command": self.command,
            "config": self.config,
            "result": serde_json::to_value(result).expect("result serializes"),
        });
        self.write(
            file,
            &(serde_json::to_string_pretty(&doc).expect("json") + "\n"),
        )
    }

    fn csv(
        &self,
        file: &str,
        header: &[&str],
        rows: impl IntoIterator<Item = Vec<f64>>,
    ) -> CliResult<()> {
        self.write(file, &csv_text(header, rows))
    }

    /// Write the error next to the evaluation log, then propagate it.
    fn fail<T>(&self, file: &str, err: FbError) -> CliResult<T> {
        let detail = match &err {
            FbError::NoTransition {
                verdict,
                evaluations,
            } => json!({ "verdict": verdict, "evaluations": evaluations }),
            _ => Value::Null,
        };
        self.json(file, json!({ "error": err.to_string(), "detail": detail }))?;
        Err(err.into())
    }
}

/// CSV with every value at 17 significant digits.
pub fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for row in rows {
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(s, "{v:.16e}");
        }
        s.push('\n');
    }
    s
}

fn species_growth(spec: &ProblemSpec, species: Species) -> (f64, f64, Box<GrowthFn<'_>>) {
    match species {
        Species::U => (spec.d1, spec.alpha1, Box::new(|x, t| spec.a.eval(x, t))),
        Species::V => (spec.d2, spec.alpha2, Box::new(|x, t| spec.b.eval(x, t))),
    }
}

fn analysis(cfg: &RunConfig, spec: &ProblemSpec) -> CliResult<Analysis> {
    let n = &cfg.numerics;
    Ok(Analysis::compute(spec, &n.halfline, &n.root, &n.eigen)?)
}

fn eigen(cfg: &RunConfig, sink: &Sink) -> CliResult<()> {
    let spec = cfg.spec();
    let (d, alpha, gamma) = species_growth(&spec, cfg.eigen.species);
    let r = principal_eigenvalue(
        d,
        alpha,
        gamma.as_ref(),
        cfg.eigen.length,
        spec.period,
        &cfg.numerics.eigen,
    )?;
    println!("lambda1 = {:.12}", r.lambda1);
    sink.json(
        "eigen.json",
        json!({
            "lambda1": r.lambda1, "rho": r.rho, "log_rho": r.log_rho, "nx": r.nx, "nt": r.nt,
            "iterations": r.iterations, "converged": r.converged,
        }),
    )?;
    let rows =
        r.t.iter()
            .zip(&r.phi)
            .flat_map(|(t, phi)| r.x.iter().zip(phi).map(move |(x, p)| vec![*t, *x, *p]));
    sink.csv("eigenfunction.csv", &["t", "x", "phi"], rows)
}

fn critical_lengths(cfg: &RunConfig, sink: &Sink) -> CliResult<()> {
    let spec = cfg.spec();
    let hyp = check_hypotheses(&spec)?;
    let a = analysis(cfg, &spec)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&a.criticals).expect("json")
    );
    sink.json(
        "critical_lengths.json",
        json!({ "criticals": a.criticals, "hypotheses": hyp }),
    )
}

fn orbit(cfg: &RunConfig, sink: &Sink) -> CliResult<()> {
    let spec = cfg.spec();
    let l = carrying_levels(&spec)?;
    let orbits = [&l.u_upper, &l.v_upper, &l.u_lower, &l.v_lower];
    sink.json(
        "orbit.json",
        json!({
            "mean": { "u_upper": l.u_upper.mean, "v_upper": l.v_upper.mean, "u_lower": l.u_lower.mean, "v_lower": l.v_lower.mean },
            "min": orbits.iter().map(|o| o.min()).collect::<Vec<_>>(),
            "max": orbits.iter().map(|o| o.max()).collect::<Vec<_>>(),
        }),
    )?;
    let rows = l.u_upper.times().collect::<Vec<_>>().into_iter().map(|t| {
        std::iter::once(t)
            .chain(orbits.iter().map(|o| o.eval(t)))
            .collect()
    });
    sink.csv(
        "orbits.csv",
        &["t", "u_upper", "v_upper", "u_lower", "v_lower"],
        rows,
    )
}

fn profiles(cfg: &RunConfig, sink: &Sink) -> CliResult<()> {
    let spec = cfg.spec();
    let pair = crate::halfline::extremal_pair(&spec, &cfg.numerics.halfline)?;
    let all = [&pair.u1, &pair.u2, &pair.v1, &pair.v2];
    sink.json(
        "profiles.json",
        json!({
            "sweeps": pair.sweeps,
            "min": all.iter().map(|p| p.min()).collect::<Vec<_>>(),
            "max": all.iter().map(|p| p.max()).collect::<Vec<_>>(),
            "gap_u": pair.u2.sup_distance(&pair.u1),
            "gap_v": pair.v2.sup_distance(&pair.v1),
        }),
    )?;
    // Eight time slices, every fifth node.
    let p = &pair.u1;
    let mut rows = Vec::new();
    for j in (0..p.nt).step_by((p.nt / 8).max(1)) {
        let t = spec.period * j as f64 / p.nt as f64;
        for i in (0..=p.intervals).step_by(5) {
            let x = i as f64 * p.dx();
            rows.push(
                std::iter::once(t)
                    .chain(std::iter::once(x))
                    .chain(all.iter().map(|q| q.eval(x, t)))
                    .collect(),
            );
        }
    }
    sink.csv("profiles.csv", &["t", "x", "u1", "u2", "v1", "v2"], rows)
}

fn semiwave(cfg: &RunConfig, sink: &Sink) -> CliResult<()> {
    let spec = cfg.spec();
    let n = &cfg.numerics.semiwave;
    let (ru, rv) = rayon::join(
        || semiwave_speed(spec.d1, spec.mu1, &|t| spec.a.far(t), spec.period, n),
        || semiwave_speed(spec.d2, spec.mu2, &|t| spec.b.far(t), spec.period, n),
    );
    let (ru, rv) = (ru?, rv?);
    let summary = |r: &crate::semiwave::SemiWaveResult| json!({ "mean_k0": r.mean_k0, "residual": r.residual, "iterations": r.iterations, "length": r.length, "dx": r.dx });
    println!("mean k0: u {:.10}, v {:.10}", ru.mean_k0, rv.mean_k0);
    sink.json(
        "semiwave.json",
        json!({ "u": summary(&ru), "v": summary(&rv) }),
    )?;
    let m = ru.k0.len();
    let rows = (0..m).map(|j| vec![spec.period * j as f64 / m as f64, ru.k0[j], rv.k0[j]]);
    sink.csv("semiwave.csv", &["t", "k0_u", "k0_v"], rows)
}

fn bounds(cfg: &RunConfig, sink: &Sink) -> CliResult<()> {
    let spec = cfg.spec();
    let levels = carrying_levels(&spec)?;
    let b = speed_bounds(&spec, &levels, &cfg.numerics.semiwave)?;
    println!("{}", serde_json::to_string_pretty(&b).expect("json"));
    sink.json("speed_bounds.json", b)
}

fn single(cfg: &RunConfig, sink: &Sink) -> CliResult<()> {
    let spec = cfg.spec();
    let n = &cfg.numerics;
    let (d, alpha, gamma) = species_growth(&spec, Species::U);
    let traj = simulate_single(
        d,
        alpha,
        spec.mu1,
        gamma.as_ref(),
        spec.period,
        cfg.init.s1_0,
        &cfg.init.u0,
        n.horizon_periods,
        &n.front,
    )?;
    let root = critical_length(d, alpha, gamma.as_ref(), spec.period, &n.root, &n.eigen)?;
    let h_star = root.as_ref().map_or(f64::INFINITY, |r| r.length);
    let class = classify_single(&traj, h_star, &cfg.thresholds);
    let speed = match class.verdict {
        Verdict::Spreading => speed_estimate(&traj).ok().map(|(s, _)| s),
        _ => None,
    };
    let c1 = spec.a.sup_norm().max(cfg.init.u0.sup());
    println!("verdict: {}", class.verdict);
    sink.json(
        "single.json",
        json!({
            "h_star": root.map(|r| r.length), "classification": class, "speed": speed,
            "bound_violations": traj.bounds.violations(c1, n.front.eps_num),
        }),
    )?;
    let rows = traj.samples.iter().map(|s| vec![s.t, s.h, s.sup_u, s.dh]);
    sink.csv("trajectory.csv", &["t", "h", "sup_u", "dh"], rows)
}

fn write_trajectory(sink: &Sink, traj: &SystemTrajectory) -> CliResult<()> {
    let rows = traj
        .samples
        .iter()
        .map(|s| vec![s.t, s.s1, s.s2, s.sup_u, s.sup_v, s.ds1, s.ds2]);
    sink.csv(
        "trajectory.csv",
        &["t", "s1", "s2", "sup_u", "sup_v", "ds1", "ds2"],
        rows,
    )?;
    let mut rows = Vec::new();
    for snap in &traj.snapshots {
        let ny = snap.u.len() - 1;
        for i in 0..=ny {
            let y = i as f64 / ny as f64;
            rows.push(vec![
                snap.t,
                y,
                snap.s1 * y,
                snap.u[i],
                snap.s2 * y,
                snap.v[i],
            ]);
        }
    }
    sink.csv("snapshots.csv", &["t", "y", "x_u", "u", "x_v", "v"], rows)
}

fn simulate(cfg: &RunConfig, sink: &Sink) -> CliResult<()> {
    let spec = cfg.spec();
    let init = cfg.init.system();
    let traj = simulate_system(
        &spec,
        &init,
        cfg.numerics.horizon_periods,
        &cfg.numerics.front,
    )?;
    let end = traj.end();
    println!("t = {}: s1 = {:.6}, s2 = {:.6}", end.t, end.s1, end.s2);
    sink.json(
        "simulate.json",
        json!({
            "end": end, "sign_changes": traj.sign_changes, "dt": traj.dt,
            "bounds_u": traj.bounds_u, "bounds_v": traj.bounds_v,
            "bound_violations": traj.bound_violations(&spec, &init, cfg.numerics.front.eps_num),
        }),
    )?;
    write_trajectory(sink, &traj)
}

fn classify(cfg: &RunConfig, sink: &Sink) -> CliResult<()> {
    let spec = cfg.spec();
    let init = cfg.init.system();
    let hyp = check_hypotheses(&spec)?;
    let a = analysis(cfg, &spec)?;
    let traj = simulate_system(
        &spec,
        &init,
        cfg.numerics.horizon_periods,
        &cfg.numerics.front,
    )?;
    let class = classify_quartering(&traj, &a.criticals, &cfg.thresholds, hyp.pass());
    let sandwich = (class.verdict == Quartering::BothSpread).then(|| {
        let s = &cfg.sandwich;
        verify_longtime_sandwich(&traj, &a.pair, s.window, s.periods, s.eps)
    });
    println!(
        "verdict: {}{}",
        class.verdict,
        if class.outside_weak_competition {
            " (outside weak competition)"
        } else {
            ""
        }
    );
    sink.json(
        "classification.json",
        json!({
            "classification": class, "criticals": a.criticals, "hypotheses": hyp, "sandwich": sandwich,
            "sign_changes": traj.sign_changes,
            "bound_violations": traj.bound_violations(&spec, &init, cfg.numerics.front.eps_num),
        }),
    )?;
    write_trajectory(sink, &traj)
}

fn min_habitat(cfg: &RunConfig, sink: &Sink) -> CliResult<()> {
    let spec = cfg.spec();
    let a = analysis(cfg, &spec)?;
    let cmd = &cfg.min_habitat;
    let other = match cmd.species {
        Species::U => a.levels.v_upper.max(),
        Species::V => a.levels.u_upper.max(),
    };
    let th = Thresholds {
        spread_margin: cmd.spread_margin,
        ..cfg.thresholds
    };
    match minimal_habitat(
        &spec,
        cmd.species,
        &cmd.adversary,
        &cmd.search,
        &a.criticals,
        other,
        &cfg.numerics.front,
        &th,
    ) {
        Ok(r) => {
            println!("{}: [{:.6}, {:.6}]", r.quantity, r.lo, r.hi);
            sink.json("min_habitat.json", r)
        }
        Err(e) => sink.fail("min_habitat.json", e),
    }
}

fn mu_search(cfg: &RunConfig, sink: &Sink) -> CliResult<()> {
    let spec = cfg.spec();
    let a = analysis(cfg, &spec)?;
    let cmd = &cfg.mu_threshold;
    let init = cfg.init.system();
    match mu_threshold(
        &spec,
        cmd.species,
        &init,
        &cmd.search,
        &a.criticals,
        &cfg.numerics.front,
        &cfg.thresholds,
    ) {
        Ok(r) => {
            println!("{}: [{:.6}, {:.6}]", r.quantity, r.lo, r.hi);
            sink.json("mu_threshold.json", r)
        }
        Err(e) => sink.fail("mu_threshold.json", e),
    }
}

fn compare(cfg: &RunConfig, sink: &Sink) -> CliResult<()> {
    let base = cfg.spec();
    let cmd = &cfg.compare;
    let with_mu = |mu: [f64; 2]| ProblemSpec {
        mu1: mu[0],
        mu2: mu[1],
        ..base.clone()
    };
    let (sa, sb) = (with_mu(cmd.mu_a), with_mu(cmd.mu_b));
    let init = cfg.init.system();
    let n = &cfg.numerics;
    let (ta, tb) = rayon::join(
        || simulate_system(&sa, &init, n.horizon_periods, &n.front),
        || simulate_system(&sb, &init, n.horizon_periods, &n.front),
    );
    let (ta, tb) = (ta?, tb?);
    let eps = cmd.eps_per_interval * n.front.ny as f64;
    match compare_runs(&ta, &tb, eps) {
        Ok(r) => {
            println!(
                "ordered: worst s1 {:.3e}, worst s2 {:.3e}",
                r.worst_s1, r.worst_s2
            );
            sink.json("compare.json", r)
        }
        Err(e) => sink.fail("compare.json", e),
    }
}

fn hypotheses(cfg: &RunConfig, sink: &Sink) -> CliResult<()> {
    let r = check_hypotheses(&cfg.spec())?;
    let word = |b: bool| if b { "pass" } else { "fail" };
    println!(
        "H2: {} (slack u {:.6}, v {:.6})",
        word(r.h2_pass),
        r.h2_slack_u,
        r.h2_slack_v
    );
    println!(
        "H3: {} (margin u {:.6}, v {:.6})",
        word(r.h3_pass),
        r.h3_margin_u,
        r.h3_margin_v
    );
    sink.json("hypotheses.json", r)
}

fn reproduce(which: Reproduction, out: &Path) -> CliResult<()> {
    match which {
        Reproduction::Quartering => {
            let cases = scenarios::quartering();
            let n = crate::config::NumericsConfig::default();
            let base = &cases[0].spec;
            let a = Analysis::compute(base, &n.halfline, &n.root, &n.eigen)?;
            let hyp = check_hypotheses(base)?;
            let sink = Sink::new(
                out.join("reproduce-quartering"),
                "reproduce quartering",
                &json!({ "numerics": n }),
            )?;
            let th = Thresholds::default();
            let mut table = Vec::new();
            println!(
                "{:<24} {:<24} {:<24} {:>10} {:>10}",
                "scenario", "expected", "verdict", "s1(end)", "s2(end)"
            );
            for c in &cases {
                let traj = simulate_system(&c.spec, &c.init, n.horizon_periods, &n.front)?;
                let class = classify_quartering(&traj, &a.criticals, &th, hyp.pass());
                let end = traj.end();
                println!(
                    "{:<24} {:<24} {:<24} {:>10.4} {:>10.4}",
                    c.name,
                    c.expected.to_string(),
                    class.verdict.to_string(),
                    end.s1,
                    end.s2
                );
                table.push(json!({
                    "scenario": c.name, "expected": c.expected, "verdict": class.verdict,
                    "mu": [c.spec.mu1, c.spec.mu2], "init": c.init, "end": end, "classification": class,
                }));
            }
            sink.json(
                "quartering.json",
                json!({ "criticals": a.criticals, "hypotheses": hyp, "cases": table }),
            )
        }
    }
}
