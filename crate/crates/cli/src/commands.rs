//! The four commands.

use std::f64::consts::{PI, SQRT_2};
use std::fmt::Write as _;

use fracres_core::heat_example::{condition_i, condition_ii, Variant};
use fracres_core::hypotheses::{assess_problem, HypothesisReport};
use fracres_core::resolvent::{AxiomCheck, AxiomReport};
use fracres_core::solver::SolveError;
use fracres_core::{
    mild_residual, picard_solve, ConvergenceReport, FractionalResolvent, ProblemSpec,
    SpectralOperator, TimeGrid, WeightedTrajectory,
};

use crate::config::RunConfig;
use crate::output::{csv, num, opt, report_header, OutFile};
use crate::{CliError, ExitStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Solve,
    Check,
    VerifyResolvent,
    ReproduceExample,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Check => "check",
            Command::VerifyResolvent => "verify-resolvent",
            Command::ReproduceExample => "reproduce-example",
        }
    }
}

/// Result of a command: exit status, files to write, and a console summary.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: ExitStatus,
    pub files: Vec<OutFile>,
    pub summary: String,
}

pub fn run_command(command: Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    match command {
        Command::Solve => solve(cfg),
        Command::Check => check(cfg),
        Command::VerifyResolvent => verify_resolvent(cfg),
        Command::ReproduceExample => reproduce_example(cfg),
    }
}

fn grid(cfg: &RunConfig) -> Result<TimeGrid, CliError> {
    Ok(TimeGrid::new(cfg.problem.t_end, cfg.numerics.steps)?)
}

fn exponents(cfg: &RunConfig) -> [f64; 3] {
    [cfg.problem.alpha1, cfg.problem.alpha2, cfg.problem.alpha3]
}

/// Verdict of the existence check: `Mb < 1` and a ball radius that works.
pub fn krasnoselskii_ok(rep: &HypothesisReport<f64>) -> bool {
    rep.mb_below_one
        && match rep.ball_at_radius {
            Some((_, ok)) => ok,
            None => rep.ball_radius.is_some(),
        }
}

fn hypothesis_text(rep: &HypothesisReport<f64>) -> String {
    let mut s = String::new();
    for (k, v) in [
        ("M", rep.m),
        ("M1", rep.m1),
        ("M2", rep.m2),
        ("H", rep.h),
        ("N", rep.n),
        ("b", rep.b),
        ("Omega", rep.omega),
    ] {
        let _ = writeln!(s, "{k} = {}", num(v));
    }
    let _ = writeln!(s, "contraction = {}", rep.contractive);
    let _ = writeln!(s, "Mb_below_one = {}", rep.mb_below_one);
    let _ = writeln!(s, "krasnoselskii_radius = {}", opt(rep.ball_radius));
    if let Some((r, ok)) = rep.ball_at_radius {
        let _ = writeln!(s, "krasnoselskii_at_radius = {} {ok}", num(r));
    }
    let _ = writeln!(s, "krasnoselskii = {}", krasnoselskii_ok(rep));
    for n in &rep.notes {
        let _ = writeln!(s, "note = {n}");
    }
    s
}

const HYPOTHESIS_HEADER: [&str; 13] = [
    "M",
    "M1",
    "M2",
    "H",
    "N",
    "b",
    "Omega",
    "contraction",
    "Mb_below_one",
    "krasnoselskii_radius",
    "radius",
    "krasnoselskii_at_radius",
    "krasnoselskii",
];

fn hypothesis_row(rep: &HypothesisReport<f64>) -> Vec<String> {
    vec![
        num(rep.m),
        num(rep.m1),
        num(rep.m2),
        num(rep.h),
        num(rep.n),
        num(rep.b),
        num(rep.omega),
        rep.contractive.to_string(),
        rep.mb_below_one.to_string(),
        opt(rep.ball_radius),
        opt(rep.ball_at_radius.map(|r| r.0)),
        rep.ball_at_radius
            .map(|r| r.1.to_string())
            .unwrap_or_default(),
        krasnoselskii_ok(rep).to_string(),
    ]
}

fn header(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn check(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let spec = cfg.problem_spec()?;
    let rep = assess_problem(&spec, &grid(cfg)?, Some(exponents(cfg)), cfg.problem.radius)?;
    let text = hypothesis_text(&rep);
    let files = vec![
        OutFile {
            name: "hypotheses.txt",
            contents: format!("{}{text}", report_header("check")),
        },
        OutFile {
            name: "hypotheses.csv",
            contents: csv(&header(&HYPOTHESIS_HEADER), &[hypothesis_row(&rep)])?,
        },
    ];
    Ok(Outcome {
        status: ExitStatus::Success,
        files,
        summary: text,
    })
}

fn convergence_csv(rep: &ConvergenceReport<f64>) -> Result<String, CliError> {
    let rows: Vec<Vec<String>> = rep
        .deltas
        .iter()
        .zip(&rep.ratios)
        .enumerate()
        .map(|(i, (d, r))| vec![(i + 1).to_string(), num(*d), opt(*r)])
        .collect();
    csv(&header(&["iteration", "delta", "ratio"]), &rows)
}

fn convergence_text(rep: &ConvergenceReport<f64>) -> String {
    format!(
        "iterations = {}\nconverged = {}\nfinal_delta = {}\nomega_observed = {}\n",
        rep.iterations,
        rep.converged,
        opt(rep.deltas.last().copied()),
        opt(rep.omega_observed)
    )
}

/// `u(t, x) = t^{α-1} Σ w_n √2 sin(nπx)`, undefined at `t = 0` for `α < 1`.
fn reconstruct(alpha: f64, t: f64, w: &[f64], x: f64) -> Option<f64> {
    if t == 0.0 && alpha < 1.0 {
        return None;
    }
    let s: f64 = w
        .iter()
        .enumerate()
        .map(|(n, c)| c * SQRT_2 * ((n + 1) as f64 * PI * x).sin())
        .sum();
    Some(t.powf(alpha - 1.0) * s)
}

fn solution_csv(cfg: &RunConfig, u: &WeightedTrajectory) -> Result<String, CliError> {
    let modes = u.modes();
    let mut head = vec!["t".to_string()];
    if cfg.output.coefficients {
        head.extend((1..=modes).map(|n| format!("w_{n}")));
    }
    head.extend(cfg.output.probe_points.iter().map(|x| format!("u_x{x:?}")));
    let grid = u.grid();
    let rows: Vec<Vec<String>> = u
        .values()
        .iter()
        .enumerate()
        .map(|(j, w)| {
            let t = grid.node(j);
            let mut row = vec![num(t)];
            if cfg.output.coefficients {
                row.extend(w.coeffs().iter().map(|v| num(*v)));
            }
            row.extend(
                cfg.output
                    .probe_points
                    .iter()
                    .map(|&x| opt(reconstruct(u.alpha(), t, w.coeffs(), x))),
            );
            row
        })
        .collect();
    csv(&head, &rows)
}

fn solve(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let spec = cfg.problem_spec()?;
    let grid = grid(cfg)?;
    let hyp = assess_problem(&spec, &grid, Some(exponents(cfg)), cfg.problem.radius)?;
    let mut report = report_header("solve");
    let _ = write!(
        report,
        "\n[config]\n{}\n[hypotheses]\n{}",
        cfg.to_canonical(),
        hypothesis_text(&hyp)
    );
    if cfg.numerics.require_hypotheses && !(hyp.contractive && krasnoselskii_ok(&hyp)) {
        let summary = format!(
            "hypotheses not satisfied (Omega = {}, contraction = {}, krasnoselskii = {}); no solve performed\n",
            num(hyp.omega),
            hyp.contractive,
            krasnoselskii_ok(&hyp)
        );
        report.push_str(&summary);
        return Ok(Outcome {
            status: ExitStatus::HypothesesFailed,
            files: vec![OutFile {
                name: "report.txt",
                contents: report,
            }],
            summary,
        });
    }
    let (u, conv, diverged) =
        match picard_solve(&spec, &grid, cfg.numerics.tol, cfg.numerics.max_iter) {
            Ok((u, conv)) => (Some(u), conv, false),
            Err(SolveError::Diverged(conv)) => (None, conv, true),
            Err(SolveError::Core(e)) => return Err(e.into()),
        };
    let _ = write!(
        report,
        "\n[convergence]\n{}diverged = {diverged}\n",
        convergence_text(&conv)
    );
    let mut files = vec![OutFile {
        name: "convergence.csv",
        contents: convergence_csv(&conv)?,
    }];
    let status = match u {
        Some(u) if conv.converged => {
            let resolvent = FractionalResolvent::new(spec.operator().clone(), spec.alpha())?;
            let _ = write!(
                report,
                "\n[accuracy]\nmild_residual = {}\ntail_estimate = {}\n",
                num(mild_residual(&spec, &u)?),
                opt(resolvent.tail_estimate(&grid)?)
            );
            for s in spec.snaps(&grid)? {
                let _ = writeln!(
                    report,
                    "snap = {} -> {} (distance {})",
                    num(s.requested),
                    num(grid.node(s.node)),
                    num(s.distance)
                );
            }
            files.insert(
                0,
                OutFile {
                    name: "solution.csv",
                    contents: solution_csv(cfg, &u)?,
                },
            );
            ExitStatus::Success
        }
        _ => ExitStatus::NotConverged,
    };
    let summary = convergence_text(&conv);
    files.push(OutFile {
        name: "report.txt",
        contents: report,
    });
    Ok(Outcome {
        status,
        files,
        summary,
    })
}

fn axiom_rows(rep: &AxiomReport<f64>) -> Vec<Vec<String>> {
    let row = |name: &str, t: Option<f64>, c: &AxiomCheck<f64>| {
        vec![
            name.to_string(),
            opt(t),
            num(c.residual),
            num(c.bound),
            c.passed.to_string(),
        ]
    };
    let mut rows: Vec<Vec<String>> = rep
        .limit
        .iter()
        .map(|p| {
            vec![
                "limit".to_string(),
                num(p.t),
                num(p.residual),
                num(p.bound),
                p.passed.to_string(),
            ]
        })
        .collect();
    rows.push(row("P1", None, &rep.p1));
    rows.push(row("P2", None, &rep.p2));
    rows.push(row("P3", None, &rep.p3));
    rows.push(row("c1", None, &rep.c1));
    rows.push(row("c2", None, &rep.c2));
    rows
}

fn verify_resolvent(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let op = SpectralOperator::heat(cfg.problem.k, cfg.numerics.n_modes)?;
    let r = FractionalResolvent::with_prefactor(op, cfg.problem.alpha, cfg.problem.prefactor)?;
    let rep = r.verify_axioms(&grid(cfg)?, cfg.numerics.tol)?;
    let rows = axiom_rows(&rep);
    let mut text = format!(
        "alpha = {}\nmodes = {}\nprefactor = {:?}\n",
        num(rep.alpha),
        rep.modes,
        rep.prefactor
    );
    for r in &rows {
        let at = if r[1].is_empty() {
            String::new()
        } else {
            format!(" at t = {}", r[1])
        };
        let _ = writeln!(
            text,
            "{}{at}: residual {} bound {} passed {}",
            r[0], r[2], r[3], r[4]
        );
    }
    let _ = writeln!(text, "tail_estimate = {}", opt(rep.tail_estimate));
    let _ = writeln!(text, "all_passed = {}", rep.all_passed());
    let files = vec![
        OutFile {
            name: "resolvent.csv",
            contents: csv(
                &header(&["check", "t", "residual", "bound", "passed"]),
                &rows,
            )?,
        },
        OutFile {
            name: "resolvent.txt",
            contents: format!("{}{text}", report_header("verify-resolvent")),
        },
    ];
    Ok(Outcome {
        status: ExitStatus::Success,
        files,
        summary: text,
    })
}

/// One case of the worked example.
#[derive(Debug, Clone)]
pub struct CaseResult {
    pub variant: Variant,
    pub condition: f64,
    pub condition_holds: bool,
    pub hypotheses: HypothesisReport<f64>,
    pub convergence: Option<ConvergenceReport<f64>>,
    pub residual: Option<f64>,
}

/// Condition, full hypothesis check, and (when the condition holds) a solve
/// with its mild residual.
pub fn run_case(cfg: &RunConfig, variant: Variant) -> Result<CaseResult, CliError> {
    let mut cfg = cfg.clone();
    cfg.problem.variant = variant;
    let params = cfg.heat_params();
    let cond = match variant {
        Variant::I => condition_i(&params)?,
        Variant::II => condition_ii(&params)?,
    };
    let spec: ProblemSpec = cfg.problem_spec()?;
    let grid = grid(&cfg)?;
    let hypotheses = assess_problem(&spec, &grid, Some(exponents(&cfg)), cfg.problem.radius)?;
    let (convergence, residual) = if cond.holds {
        match picard_solve(&spec, &grid, cfg.numerics.tol, cfg.numerics.max_iter) {
            Ok((u, conv)) => {
                let res = if conv.converged {
                    Some(mild_residual(&spec, &u)?)
                } else {
                    None
                };
                (Some(conv), res)
            }
            Err(SolveError::Diverged(conv)) => (Some(conv), None),
            Err(SolveError::Core(e)) => return Err(e.into()),
        }
    } else {
        (None, None)
    };
    Ok(CaseResult {
        variant,
        condition: cond.value,
        condition_holds: cond.holds,
        hypotheses,
        convergence,
        residual,
    })
}

fn reproduce_example(cfg: &RunConfig) -> Result<Outcome, CliError> {
    if cfg.problem.t_end != 1.0 {
        return Err(CliError::Usage(
            "reproduce-example is defined on T = 1".into(),
        ));
    }
    let cases = [run_case(cfg, Variant::I)?, run_case(cfg, Variant::II)?];
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut status = ExitStatus::Success;
    for c in &cases {
        let name = if c.variant == Variant::I { "I" } else { "II" };
        let conv = c.convergence.as_ref();
        if conv.is_some_and(|r| !r.converged) {
            status = ExitStatus::NotConverged;
        }
        rows.push(vec![
            name.to_string(),
            num(c.condition),
            c.condition_holds.to_string(),
            num(c.hypotheses.omega),
            c.hypotheses.contractive.to_string(),
            krasnoselskii_ok(&c.hypotheses).to_string(),
            conv.map(|r| r.iterations.to_string()).unwrap_or_default(),
            conv.map(|r| r.converged.to_string()).unwrap_or_default(),
            opt(conv.and_then(|r| r.omega_observed)),
            opt(c.residual),
        ]);
        let _ = write!(
            text,
            "case {name}: condition = {} ({}), Omega = {}, krasnoselskii = {}",
            num(c.condition),
            if c.condition_holds { "holds" } else { "fails" },
            num(c.hypotheses.omega),
            krasnoselskii_ok(&c.hypotheses)
        );
        match conv {
            Some(r) => {
                let _ = writeln!(
                    text,
                    ", {} iterations, converged = {}, mild_residual = {}",
                    r.iterations,
                    r.converged,
                    opt(c.residual)
                );
            }
            None => text.push_str(", not solved\n"),
        }
    }
    let head = header(&[
        "case",
        "condition",
        "condition_holds",
        "Omega",
        "contraction",
        "krasnoselskii",
        "iterations",
        "converged",
        "omega_observed",
        "mild_residual",
    ]);
    let files = vec![
        OutFile {
            name: "example.csv",
            contents: csv(&head, &rows)?,
        },
        OutFile {
            name: "example.txt",
            contents: format!(
                "{}\n[config]\n{}\n[cases]\n{text}",
                report_header("reproduce-example"),
                cfg.to_canonical()
            ),
        },
    ];
    Ok(Outcome {
        status,
        files,
        summary: text,
    })
}
