use anyhow::{bail, Result};
use avoidance_core::enumerate::{count_a_k, count_avoiders_with, count_monotone_avoiders, MAX_DFS_LENGTH};
use avoidance_core::{Family, IntegerSeries, Permutation};
use serde::Serialize;

use crate::args::{CountArgs, Format, RunConfig};
use crate::class::{self, ClassSpec};
use crate::output;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    ProductFormula,
    Tableaux,
    Dfs,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::ProductFormula => "product-formula",
            Backend::Tableaux => "tableaux",
            Backend::Dfs => "dfs",
        }
    }
}

#[derive(Serialize)]
struct CountReport<'a> {
    label: &'a str,
    terms: Vec<String>,
    backend: Backend,
    config: RunConfig,
}

pub fn choose_backend(spec: &ClassSpec) -> Backend {
    let patterns = spec.set.patterns();
    if matches!(spec.family, Some(Family::A { .. })) {
        Backend::ProductFormula
    } else if patterns.len() == 1 && patterns[0].len() >= 2 && patterns[0] == Permutation::identity(patterns[0].len()) {
        Backend::Tableaux
    } else {
        Backend::Dfs
    }
}

/// Counts `spec` up to `n` with the fastest exact method that applies.
pub fn count_class(spec: &ClassSpec, n: usize, warn_nodes: f64) -> Result<(IntegerSeries, Backend)> {
    let backend = choose_backend(spec);
    log::info!("counting Av({}) up to n = {n} with the {} backend", spec.label(), backend.name());
    let mut series = match backend {
        Backend::ProductFormula => match spec.family {
            Some(Family::A { k }) => count_a_k(k, n)?,
            _ => unreachable!("product formula chosen for a non-A(k) class"),
        },
        Backend::Tableaux => count_monotone_avoiders(spec.set.patterns()[0].len(), n)?,
        Backend::Dfs => {
            if n > MAX_DFS_LENGTH {
                bail!("--n {n} is beyond enumeration reach (at most {MAX_DFS_LENGTH}) for Av({})", spec.label());
            }
            count_avoiders_with(&spec.set, n, warn_nodes)
        }
    };
    series.label = format!("Av({})", spec.label());
    Ok((series, backend))
}

pub fn run(args: &CountArgs, threads: Option<usize>) -> Result<()> {
    let spec = class::resolve(&args.class)?;
    let (series, backend) = count_class(&spec, args.n, args.warn_nodes)?;
    let config = RunConfig {
        command: "count",
        patterns: Some(spec.set.to_string()),
        family: spec.family.map(|f| f.to_string()),
        n: Some(args.n),
        format: Some(args.format),
        warn_nodes: Some(args.warn_nodes),
        threads,
        ..Default::default()
    };
    match args.format {
        Format::Json => {
            let report = CountReport {
                label: &series.label,
                terms: series.terms.iter().map(ToString::to_string).collect(),
                backend,
                config,
            };
            output::write_json(&report, args.out.as_deref())
        }
        Format::Csv => {
            let mut text = format!("# label: {}\n# backend: {}\n", series.label, backend.name());
            text.push_str(&format!("# config: {}\n", serde_json::to_string(&config)?));
            text.push_str(&series.to_csv());
            output::write_text(&text, args.out.as_deref())
        }
    }
}
