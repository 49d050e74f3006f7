//! Subcommand implementations. Each returns a [`Report`] plus a status that
//! the binary maps to an exit code.

use std::str::FromStr;

use ltfrechet::inference::{fit_model, CureModel, FitResult, LongTermFrechet};
use ltfrechet::model_eval::{compare, kaplan_meier, LongTermWeibull, ModelScore};
use ltfrechet::montecarlo::{run_scenario, Scenario, SimReport};
use ltfrechet::{CensoredSample, LfParams, OptimizerConfig};

use crate::error::{CliError, CliResult};
use crate::report::{Cell, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Lf,
    LtWeibull,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Lf => "lf",
            ModelKind::LtWeibull => "lt-weibull",
        }
    }
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lf" => Ok(ModelKind::Lf),
            "lt-weibull" => Ok(ModelKind::LtWeibull),
            other => Err(format!("unknown model '{other}' (expected lf or lt-weibull)")),
        }
    }
}

/// Settings shared by every estimating command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub ci_level: f64,
    pub optimizer: OptimizerConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            ci_level: 0.95,
            optimizer: OptimizerConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> CliResult<()> {
        if !(self.ci_level > 0.0 && self.ci_level < 1.0) {
            return Err(CliError::Usage(format!(
                "--ci-level must lie in (0, 1), got {}",
                self.ci_level
            )));
        }
        self.optimizer.validate()?;
        Ok(())
    }

    fn optimizer(&self) -> OptimizerConfig {
        OptimizerConfig {
            seed: self.seed,
            ..self.optimizer.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Report,
    /// False when any fit failed to converge or a model errored.
    pub ok: bool,
}

pub const FIT_COLUMNS: [&str; 5] = ["parameter", "estimate", "se", "ci_lower", "ci_upper"];

/// Display order of the natural coordinates `[scale, shape, p]`.
fn display_order(kind: ModelKind) -> [(usize, &'static str); 3] {
    match kind {
        ModelKind::Lf => [(1, "alpha"), (0, "lambda"), (2, "p")],
        ModelKind::LtWeibull => [(0, "scale"), (1, "shape"), (2, "p")],
    }
}

struct Fitted {
    theta: [f64; 3],
    std_errors: Option<[f64; 3]>,
    intervals: Option<[(f64, f64); 3]>,
    score: ModelScore,
    converged: bool,
}

fn fitted<M: CureModel>(data: &CensoredSample, cfg: &RunConfig) -> CliResult<Fitted> {
    let r: FitResult<M::Params> = fit_model::<M>(data, &cfg.optimizer(), cfg.ci_level)?;
    Ok(Fitted {
        theta: r.theta,
        std_errors: r.std_errors,
        intervals: r.intervals.map(|ci| ci.map(|c| (c.lower, c.upper))),
        score: r.score()?,
        converged: r.converged,
    })
}

fn fit_kind(data: &CensoredSample, kind: ModelKind, cfg: &RunConfig) -> CliResult<Fitted> {
    match kind {
        ModelKind::Lf => fitted::<LongTermFrechet>(data, cfg),
        ModelKind::LtWeibull => fitted::<LongTermWeibull>(data, cfg),
    }
}

/// Estimates, standard errors and Wald intervals, followed by `neg_loglik`,
/// `aic` and `aicc` rows that use only the `estimate` column.
pub fn cmd_fit(data: &CensoredSample, kind: ModelKind, cfg: &RunConfig) -> CliResult<Outcome> {
    cfg.validate()?;
    let f = fit_kind(data, kind, cfg)?;
    let mut report = Report::new(&FIT_COLUMNS);
    for (i, name) in display_order(kind) {
        report.push(vec![
            name.into(),
            f.theta[i].into(),
            f.std_errors.map(|se| se[i]).into(),
            f.intervals.map(|ci| ci[i].0).into(),
            f.intervals.map(|ci| ci[i].1).into(),
        ]);
    }
    for (name, v) in [
        ("neg_loglik", f.score.neg_loglik),
        ("aic", f.score.aic),
        ("aicc", f.score.aicc),
    ] {
        report.push(vec![name.into(), v.into(), Cell::Empty, Cell::Empty, Cell::Empty]);
    }
    Ok(Outcome {
        report,
        ok: f.converged,
    })
}

pub const COMPARE_COLUMNS: [&str; 5] = ["model", "neg_loglik", "aic", "aicc", "rank"];

/// Fits each model and ranks by AICc. Failed fits appear as rows with empty
/// criteria and `error:<reason>` in the rank column.
pub fn cmd_compare(data: &CensoredSample, models: &[ModelKind], cfg: &RunConfig) -> CliResult<Outcome> {
    cfg.validate()?;
    if models.is_empty() {
        return Err(CliError::Usage("at least one model is required".into()));
    }
    let mut scored = Vec::new();
    let mut failed = Vec::new();
    let mut all_converged = true;
    for &kind in models {
        match fit_kind(data, kind, cfg) {
            Ok(f) => {
                all_converged &= f.converged;
                scored.push((kind.name().to_string(), f.score));
            }
            Err(e) => failed.push((kind.name(), error_label(&e))),
        }
    }
    let mut report = Report::new(&COMPARE_COLUMNS);
    if !scored.is_empty() {
        for m in compare(scored)? {
            report.push(vec![
                m.name.into(),
                m.score.neg_loglik.into(),
                m.score.aic.into(),
                m.score.aicc.into(),
                m.rank.into(),
            ]);
        }
    }
    for (name, label) in &failed {
        report.push(vec![
            (*name).into(),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            format!("error:{label}").into(),
        ]);
    }
    Ok(Outcome {
        report,
        ok: failed.is_empty() && all_converged,
    })
}

fn error_label(e: &CliError) -> String {
    use ltfrechet::Error as E;
    match e {
        CliError::Model(E::NoEvents) => "NoEvents".into(),
        CliError::Model(E::NonFiniteObjective) => "NonFiniteObjective".into(),
        CliError::Model(E::NotPositiveDefinite) => "NotPositiveDefinite".into(),
        other => other.to_string().replace(',', ";"),
    }
}

pub const SIMULATE_COLUMNS: [&str; 7] = [
    "n",
    "parameter",
    "mre",
    "mse",
    "coverage",
    "m_p",
    "replications_used",
];

#[derive(Debug, Clone, PartialEq)]
pub struct SimulateArgs {
    pub truth: LfParams,
    pub censoring: f64,
    pub sample_sizes: Vec<usize>,
    pub replications: usize,
}

pub fn simulation_report(reports: &[SimReport]) -> Report {
    let mut report = Report::new(&SIMULATE_COLUMNS);
    for r in reports {
        for (name, s) in r.rows() {
            report.push(vec![
                r.n.into(),
                name.into(),
                s.mre.into(),
                s.mse.into(),
                s.coverage.into(),
                r.realized_censoring.into(),
                r.replications_used.into(),
            ]);
        }
    }
    report
}

pub fn cmd_simulate(args: &SimulateArgs, cfg: &RunConfig) -> CliResult<Outcome> {
    cfg.validate()?;
    let scenario = Scenario {
        truth: args.truth,
        sample_sizes: args.sample_sizes.clone(),
        replications: args.replications,
        target_censoring: args.censoring,
        ci_level: cfg.ci_level,
        base_seed: cfg.seed,
        optimizer: cfg.optimizer(),
    };
    let reports = run_scenario(&scenario)?;
    Ok(Outcome {
        ok: reports.iter().all(|r| r.replications_used > 0),
        report: simulation_report(&reports),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
    pub log_spaced: bool,
}

impl Grid {
    pub fn values(&self) -> CliResult<Vec<f64>> {
        if self.points < 2 {
            return Err(CliError::Usage("grid needs at least 2 points".into()));
        }
        if !(self.t_min > 0.0 && self.t_max > self.t_min && self.t_max.is_finite()) {
            return Err(CliError::Usage(format!(
                "grid bounds must satisfy 0 < t-min < t-max, got ({}, {})",
                self.t_min, self.t_max
            )));
        }
        let last = (self.points - 1) as f64;
        Ok((0..self.points)
            .map(|i| {
                let w = i as f64 / last;
                if i == 0 {
                    self.t_min
                } else if i + 1 == self.points {
                    self.t_max
                } else if self.log_spaced {
                    (self.t_min.ln() + w * (self.t_max.ln() - self.t_min.ln())).exp()
                } else {
                    self.t_min + w * (self.t_max - self.t_min)
                }
            })
            .collect())
    }
}

/// Density, distribution, survival and hazard on a grid, with the
/// Kaplan–Meier step function alongside when a dataset is given.
pub fn cmd_curves(params: &LfParams, grid: &Grid, data: Option<&CensoredSample>) -> CliResult<Outcome> {
    let ts = grid.values()?;
    let km = data.map(kaplan_meier);
    let mut columns = vec!["t", "pdf", "cdf", "survival", "hazard"];
    if km.is_some() {
        columns.push("km");
    }
    let mut report = Report::new(&columns);
    for t in ts {
        let mut row: Vec<Cell> = vec![
            t.into(),
            params.pdf(t)?.into(),
            params.cdf(t)?.into(),
            params.survival(t)?.into(),
            params.hazard(t)?.into(),
        ];
        if let Some(km) = &km {
            row.push(km.survival_at(t).into());
        }
        report.push(row);
    }
    Ok(Outcome { report, ok: true })
}
