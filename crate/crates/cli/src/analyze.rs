use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use avoidance_core::enumerate::{growth_from_series, DEFAULT_WARN_NODES};
use avoidance_core::series::{
    differential_approximation_with, guess_dfinite_with, guess_rational, ode_to_recurrence, verify_ode,
    ApproximationOutcome, DiffApproxConfig, OdeCheck, PolynomialODE, RationalFunction, DFINITE_HOLDOUT,
    MAX_PRECISION,
};
use avoidance_core::{GrowthRate, IntegerSeries};
use serde::Serialize;

use crate::args::{AnalyzeArgs, RunConfig};
use crate::class;
use crate::count::count_class;
use crate::output;

#[derive(Serialize, Debug)]
pub struct OdeSummary {
    pub order: usize,
    pub degree: usize,
    pub ode: String,
    pub check: OdeCheck,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recurrence: Option<String>,
}

#[derive(Serialize, Debug)]
pub struct AnalyzeReport {
    pub label: String,
    pub terms: Vec<String>,
    pub config: RunConfig,
    pub rational_guess: Option<RationalFunction>,
    pub dfinite_guess: Option<OdeSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ode_check: Option<OdeSummary>,
    pub ratio_growth: Option<GrowthRate>,
    pub growth: Option<ApproximationOutcome>,
    pub notes: Vec<String>,
}

pub fn load_series(path: &Path) -> Result<IntegerSeries> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    if text.trim_start().starts_with('{') {
        return serde_json::from_str(&text).with_context(|| format!("{} is not a JSON series", path.display()));
    }
    let label = path.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    let label = text
        .lines()
        .find_map(|l| l.strip_prefix("# label:"))
        .map_or(label, |l| l.trim().to_string());
    IntegerSeries::from_csv(label, &text).with_context(|| format!("{} is not a CSV series", path.display()))
}

fn summarize(ode: &PolynomialODE, series: &IntegerSeries, notes: &mut Vec<String>) -> Result<OdeSummary> {
    let check = verify_ode(ode, series)?;
    let recurrence = match ode_to_recurrence(ode) {
        Ok(r) => Some(r.to_string()),
        Err(e) => {
            notes.push(format!("no recurrence: {e}"));
            None
        }
    };
    Ok(OdeSummary { order: ode.order(), degree: ode.degree(), ode: ode.to_string(), check, recurrence })
}

pub fn build_report(args: &AnalyzeArgs, threads: Option<usize>) -> Result<AnalyzeReport> {
    if args.holdout < DFINITE_HOLDOUT {
        bail!("--holdout must be at least {DFINITE_HOLDOUT}");
    }
    if !(1..=MAX_PRECISION).contains(&args.precision) {
        bail!("--precision must be between 1 and {MAX_PRECISION}");
    }
    let mut config = RunConfig {
        command: "analyze",
        max_order: Some(args.max_order),
        max_degree: Some(args.max_degree),
        holdout: Some(args.holdout),
        precision: Some(args.precision),
        ode: args.ode.as_ref().map(|p| p.display().to_string()),
        threads,
        ..Default::default()
    };
    let series = match &args.input {
        Some(path) => {
            if args.n.is_some() {
                bail!("--n applies only to a pattern set, not to --input");
            }
            config.input = Some(path.display().to_string());
            load_series(path)?
        }
        None => {
            let spec = class::resolve(&args.class)?;
            let n = args.n.context("--n is required with a pattern set")?;
            config.patterns = Some(spec.set.to_string());
            config.family = spec.family.map(|f| f.to_string());
            config.n = Some(n);
            count_class(&spec, n, DEFAULT_WARN_NODES)?.0
        }
    };
    let ode = match &args.ode {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            Some(text.parse::<PolynomialODE>().with_context(|| format!("cannot parse {}", path.display()))?)
        }
        None => None,
    };

    let mut notes = Vec::new();
    let rational_guess = guess_rational(&series).unwrap_or_else(|e| {
        notes.push(format!("rational guess skipped: {e}"));
        None
    });
    let dfinite_guess = guess_dfinite_with(&series, args.max_order, args.max_degree, args.holdout)
        .map(|ode| summarize(&ode, &series, &mut notes))
        .transpose()?;
    let ode_check = ode.map(|ode| summarize(&ode, &series, &mut notes)).transpose()?;
    let ratio_growth = growth_from_series(&series).map_err(|e| notes.push(format!("ratio growth skipped: {e}"))).ok();
    let approx = DiffApproxConfig { precision: args.precision, ..Default::default() };
    let growth = differential_approximation_with(&series, &approx)
        .map_err(|e| notes.push(format!("differential approximation skipped: {e}")))
        .ok();
    Ok(AnalyzeReport {
        label: series.label.clone(),
        terms: series.terms.iter().map(ToString::to_string).collect(),
        config,
        rational_guess,
        dfinite_guess,
        ode_check,
        ratio_growth,
        growth,
        notes,
    })
}

/// Writes the report; `Ok(false)` means a supplied ODE does not fit.
pub fn run(args: &AnalyzeArgs, threads: Option<usize>) -> Result<bool> {
    let report = build_report(args, threads)?;
    let ok = report.ode_check.as_ref().map_or(true, |c| c.check.holds);
    if let Some(OdeSummary { check: OdeCheck { first_nonzero: Some((m, r)), .. }, .. }) = &report.ode_check {
        log::error!("the supplied ODE leaves coefficient {r} at x^{m}");
    }
    output::write_json(&report, args.out.as_deref())?;
    Ok(ok)
}
