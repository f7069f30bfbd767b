use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::guess::{int_terms, ode_rows};
use super::linalg::integer_nullspace;
use super::poly::{rational_to_f64, RationalPolynomial};
use super::roots::{root_distance, root_isolation, Root, DEFAULT_PRECISION};
use crate::enumerate::{big_ratio, IntegerSeries};
use crate::error::{Error, Result};

/// Below this many terms an estimate is always flagged low confidence.
pub const RECOMMENDED_TERMS: usize = 15;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiffApproxConfig {
    /// Differential orders `K` of the approximants.
    pub orders: Vec<usize>,
    /// Degrees of the inhomogeneous term; `None` is the homogeneous family.
    pub inhomogeneous_degrees: Vec<Option<usize>>,
    /// How many of the largest admissible coefficient degrees to fit per
    /// `(K, L)` family.
    pub degrees_per_family: usize,
    pub precision: u32,
    /// Relative interquartile spread of the growth estimates above which
    /// confidence is low.
    pub max_relative_dispersion: f64,
    pub min_fits: usize,
}

impl Default for DiffApproxConfig {
    fn default() -> Self {
        Self {
            orders: vec![1, 2, 3],
            inhomogeneous_degrees: vec![None, Some(0), Some(1)],
            degrees_per_family: 6,
            precision: DEFAULT_PRECISION,
            max_relative_dispersion: 1e-3,
            min_fits: 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Confidence {
    High,
    Low,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitSummary {
    pub order: usize,
    pub degree: usize,
    pub inhomogeneous_degree: Option<usize>,
    pub terms_used: usize,
    pub kernel_dimension: usize,
    pub singularity: Option<f64>,
    pub exponent: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubdominantSingularity {
    pub re: f64,
    pub im: f64,
    pub modulus: f64,
    /// Number of approximants with a root in this cluster.
    pub support: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthEstimate {
    pub singularity_location: f64,
    pub growth_rate: f64,
    /// `alpha` in `a_n ~ C mu^n n^(-1-alpha)`.
    pub critical_exponent: Option<f64>,
    /// Rough `C` from the last term; no error bound.
    pub amplitude: Option<f64>,
    /// Interquartile range of the per-approximant growth rates.
    pub dispersion: f64,
    pub singularity_dispersion: f64,
    pub exponent_dispersion: Option<f64>,
    pub subdominant_singularities: Vec<SubdominantSingularity>,
    pub terms: usize,
    pub fits_attempted: usize,
    pub fits_used: usize,
    pub confidence: Confidence,
    pub notes: Vec<String>,
    pub fits: Vec<FitSummary>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ApproximationOutcome {
    Estimate(GrowthEstimate),
    NoEstimate { terms: usize, fits_attempted: usize, reason: String },
}

impl ApproximationOutcome {
    pub fn estimate(&self) -> Option<&GrowthEstimate> {
        match self {
            Self::Estimate(e) => Some(e),
            Self::NoEstimate { .. } => None,
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Spec {
    order: usize,
    degree: usize,
    q_degree: Option<usize>,
}

impl Spec {
    fn unknowns(&self) -> usize {
        (self.order + 1) * (self.degree + 1) + self.q_degree.map_or(0, |e| e + 1)
    }
}

fn specs(len: usize, config: &DiffApproxConfig) -> Vec<Spec> {
    let mut out = Vec::new();
    for &order in &config.orders {
        for &q_degree in &config.inhomogeneous_degrees {
            // unknowns - 1 equations, each needing len - order terms.
            let equations = len.saturating_sub(order);
            let q_width = q_degree.map_or(0, |e| e + 1);
            let Some(budget) = (equations + 1).checked_sub(q_width) else { continue };
            let Some(max_degree) = (budget / (order + 1)).checked_sub(1) else { continue };
            if max_degree == 0 {
                continue;
            }
            let lo = max_degree.saturating_sub(config.degrees_per_family - 1).max(1);
            for degree in lo..=max_degree {
                out.push(Spec { order, degree, q_degree });
            }
        }
    }
    out
}

/// Entries divided by the largest magnitude, so huge integers survive.
fn normalized(v: &[BigInt]) -> Vec<f64> {
    let max = v.iter().map(|c| c.magnitude()).max().cloned().unwrap_or_default();
    if max.bits() == 0 {
        return vec![0.0; v.len()];
    }
    let max = BigInt::from(max);
    v.iter().map(|c| rational_to_f64(&BigRational::new(c.clone(), max.clone()))).collect()
}

fn horner(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn eval_derivative(p: &[f64], x: f64) -> f64 {
    p.iter().enumerate().skip(1).rev().fold(0.0, |acc, (i, c)| acc * x + i as f64 * c)
}

struct Fit {
    summary: FitSummary,
    others: Vec<Root>,
}

fn fit(a: &[BigInt], spec: Spec, radius: f64, precision: u32) -> Option<Fit> {
    let u = spec.unknowns();
    let rows = ode_rows(a, spec.order, spec.degree, spec.q_degree, u - 1);
    let kernel = integer_nullspace(&rows, u);
    let w = spec.degree + 1;
    let poly = |v: &[BigInt], j: usize| RationalPolynomial::from_ints(v[j * w..(j + 1) * w].to_vec());
    let leads: Vec<RationalPolynomial> = kernel.iter().map(|v| poly(v, spec.order)).collect();
    // Singularities of the series are roots of every leading polynomial
    // in the kernel.
    let common = leads.iter().fold(RationalPolynomial::zero(), |g, q| g.gcd(q));
    let mut summary = FitSummary {
        order: spec.order,
        degree: spec.degree,
        inhomogeneous_degree: spec.q_degree,
        terms_used: u - 1 + spec.order,
        kernel_dimension: kernel.len(),
        singularity: None,
        exponent: None,
    };
    if common.degree().unwrap_or(0) == 0 {
        return Some(Fit { summary, others: Vec::new() });
    }
    let roots = root_isolation(&common, precision).ok()?;
    let Some(xc) = roots
        .iter()
        .filter(|r| r.is_positive_real() && r.re < radius)
        .min_by(|a, b| a.re.total_cmp(&b.re))
        .copied()
    else {
        return Some(Fit { summary, others: Vec::new() });
    };
    summary.singularity = Some(xc.re);
    if xc.multiplicity == 1 {
        let x = xc.re;
        let exps: Vec<f64> = kernel
            .iter()
            .filter_map(|v| {
                let f = normalized(v);
                let lead = &f[spec.order * w..(spec.order + 1) * w];
                let prev = &f[(spec.order - 1) * w..spec.order * w];
                let d = eval_derivative(lead, x);
                let size: f64 = lead.iter().map(|c| c.abs()).sum();
                if size == 0.0 || d.abs() < 1e-9 * size {
                    return None;
                }
                Some(spec.order as f64 - 1.0 - horner(prev, x) / d)
            })
            .collect();
        summary.exponent = median(&exps);
    }
    let others = roots
        .into_iter()
        .filter(|r| r.modulus() > 0.0 && root_distance(r, &xc) > 0.0 && r.modulus() >= xc.re)
        .collect();
    Some(Fit { summary, others })
}

fn quantile(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    Some(quantile(&v, 0.5))
}

fn iqr(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    quantile(&v, 0.75) - quantile(&v, 0.25)
}

fn cluster(fits: &[Fit], min_support: usize) -> Vec<SubdominantSingularity> {
    let mut clusters: Vec<(Root, usize)> = Vec::new();
    for f in fits {
        for r in &f.others {
            let tol = 1e-3 * r.modulus().max(1e-3);
            match clusters.iter_mut().find(|(c, _)| root_distance(c, r) <= tol) {
                Some((_, n)) => *n += 1,
                None => clusters.push((*r, 1)),
            }
        }
    }
    let mut out: Vec<SubdominantSingularity> = clusters
        .into_iter()
        .filter(|(_, n)| *n >= min_support)
        .map(|(r, support)| SubdominantSingularity { re: r.re, im: r.im, modulus: r.modulus(), support })
        .collect();
    out.sort_by(|a, b| a.modulus.total_cmp(&b.modulus).then(a.im.total_cmp(&b.im)));
    out
}

/// Fits differential approximants of several orders and degrees to exact
/// prefixes of `s` and reads off the dominant singularity and critical
/// exponent of each.
pub fn differential_approximation(s: &IntegerSeries) -> Result<ApproximationOutcome> {
    differential_approximation_with(s, &DiffApproxConfig::default())
}

pub fn differential_approximation_with(s: &IntegerSeries, config: &DiffApproxConfig) -> Result<ApproximationOutcome> {
    let len = s.len();
    if len < 4 {
        return Err(Error::TooFewTerms { needed: 4, got: len });
    }
    let a = int_terms(s);
    let radius = if s.terms[len - 1] > num_bigint::BigUint::from(0u32) {
        1.5 * big_ratio(&s.terms[len - 2], &s.terms[len - 1]).max(1e-6)
    } else {
        2.0
    };
    let specs = specs(len, config);
    let fits: Vec<Fit> = specs
        .par_iter()
        .filter_map(|&spec| fit(&a, spec, radius, config.precision))
        .collect();
    let attempted = specs.len();
    let good: Vec<&Fit> = fits.iter().filter(|f| f.summary.singularity.is_some()).collect();
    if good.is_empty() {
        return Ok(ApproximationOutcome::NoEstimate {
            terms: len,
            fits_attempted: attempted,
            reason: format!("none of {attempted} approximants has a positive real singularity below {radius:.4}"),
        });
    }
    let xs: Vec<f64> = good.iter().filter_map(|f| f.summary.singularity).collect();
    let growths: Vec<f64> = xs.iter().map(|x| 1.0 / x).collect();
    let exps: Vec<f64> = good.iter().filter_map(|f| f.summary.exponent).collect();
    let xc = median(&xs).expect("nonempty");
    let growth = 1.0 / xc;
    let dispersion = iqr(&growths);
    let alpha = median(&exps);

    let amplitude = alpha.and_then(|alpha| {
        let n = (len - 1) as f64;
        let last = s.terms[len - 1].to_string();
        let log_an = last.parse::<f64>().ok().filter(|v| v.is_finite() && *v > 0.0).map(f64::ln).or_else(|| {
            let digits = last.len() as f64;
            last[..15.min(last.len())].parse::<f64>().ok().map(|m| m.ln() + (digits - 15.0).max(0.0) * 10f64.ln())
        })?;
        let log_c = log_an - n * growth.ln() + (1.0 + alpha) * n.ln();
        Some(log_c.exp()).filter(|c| c.is_finite())
    });

    let mut notes = Vec::new();
    if len < RECOMMENDED_TERMS {
        notes.push(format!("only {len} terms; at least {RECOMMENDED_TERMS} are recommended"));
    }
    if good.len() < config.min_fits {
        notes.push(format!("only {} usable approximants", good.len()));
    }
    let rel = dispersion / growth;
    if rel > config.max_relative_dispersion {
        notes.push(format!("growth estimates spread by {:.2}% across approximants", 100.0 * rel));
    }
    let confidence = if notes.is_empty() { Confidence::High } else { Confidence::Low };
    if confidence == Confidence::Low {
        notes.push("estimate is not precise enough to pin down the growth rate or exponent".into());
    }
    let owned: Vec<Fit> = fits.into_iter().filter(|f| f.summary.singularity.is_some()).collect();
    let subdominant = cluster(&owned, owned.len().div_ceil(2).max(2));

    Ok(ApproximationOutcome::Estimate(GrowthEstimate {
        singularity_location: xc,
        growth_rate: growth,
        critical_exponent: alpha,
        amplitude,
        dispersion,
        singularity_dispersion: iqr(&xs),
        exponent_dispersion: (!exps.is_empty()).then(|| iqr(&exps)),
        subdominant_singularities: subdominant,
        terms: len,
        fits_attempted: attempted,
        fits_used: owned.len(),
        confidence,
        notes,
        fits: owned.into_iter().map(|f| f.summary).collect(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::count_monotone_avoiders;

    fn estimate(s: &IntegerSeries) -> GrowthEstimate {
        differential_approximation(s).unwrap().estimate().cloned().expect("estimate")
    }

    #[test]
    fn catalan_control() {
        let e = estimate(&count_monotone_avoiders(3, 59).unwrap());
        assert!((e.growth_rate - 4.0).abs() < 0.04, "{e:?}");
        assert!((e.critical_exponent.unwrap() - 0.5).abs() < 0.05, "{e:?}");
        assert!((e.growth_rate * e.singularity_location - 1.0).abs() < 1e-12);
        assert_eq!(e.confidence, Confidence::High);
        // C_n ~ 4^n n^(-3/2) / sqrt(pi)
        let c = e.amplitude.unwrap();
        assert!((c - 1.0 / std::f64::consts::PI.sqrt()).abs() < 0.05, "{c}");
    }

    #[test]
    fn geometric_controls() {
        let mut t = vec![1u64];
        t.extend((1..40).map(|n| 1u64 << (n - 1)));
        let e = estimate(&IntegerSeries::from_u64("pow2", &t));
        assert!((e.growth_rate - 2.0).abs() < 0.002, "{e:?}");

        let e = estimate(&IntegerSeries::from_u64("ones", &[1; 20]));
        assert!((e.growth_rate - 1.0).abs() < 1e-9, "{e:?}");
        assert!((e.singularity_location - 1.0).abs() < 1e-9);
    }

    #[test]
    fn a55_series_recovers_singularity() {
        let ode = crate::series::PolynomialODE::a55();
        let rec = crate::series::ode_to_recurrence(&ode).unwrap();
        let terms = rec.extend_integers(&[], 40).unwrap();
        let e = estimate(&IntegerSeries::new("A(5,5)", terms));
        assert!((e.growth_rate - 10.0).abs() < 1e-6, "{e:?}");
        assert!((e.critical_exponent.unwrap() - 3.0).abs() < 1e-3, "{e:?}");
    }

    #[test]
    fn short_series_is_low_confidence() {
        let e = estimate(&count_monotone_avoiders(4, 10).unwrap());
        assert_eq!(e.confidence, Confidence::Low);
        assert!(!e.notes.is_empty());
        assert!(matches!(
            differential_approximation(&IntegerSeries::from_u64("x", &[1, 2])),
            Err(Error::TooFewTerms { .. })
        ));
    }

    #[test]
    fn no_estimate_outcome() {
        // A polynomial has no singularity at all.
        let mut t = vec![1u64, 3, 1];
        t.resize(16, 0);
        let out = differential_approximation(&IntegerSeries::from_u64("poly", &t)).unwrap();
        assert!(matches!(out, ApproximationOutcome::NoEstimate { .. }), "{out:?}");
        let json = serde_json::to_string(&out).unwrap();
        assert!(json.starts_with("{\"outcome\":\"no_estimate\""), "{json}");
    }

    #[test]
    fn quartiles() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[]), None);
        assert_eq!(iqr(&[1.0, 2.0, 3.0, 4.0, 5.0]), 2.0);
        assert_eq!(iqr(&[7.0]), 0.0);
    }
}
