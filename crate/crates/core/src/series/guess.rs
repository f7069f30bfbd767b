use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::linalg::integer_nullspace;
use super::ode::{verify_ode_rational, PolynomialODE};
use super::poly::RationalPolynomial;
use crate::enumerate::IntegerSeries;
use crate::error::{Error, Result};

pub const MIN_RATIONAL_TERMS: usize = 8;
pub const RATIONAL_HOLDOUT: usize = 3;
pub const DFINITE_HOLDOUT: usize = 5;

/// `numerator / denominator` with `denominator(0) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    pub numerator: RationalPolynomial,
    pub denominator: RationalPolynomial,
}

impl RationalFunction {
    /// The first `len` power series coefficients.
    pub fn expand(&self, len: usize) -> Vec<BigRational> {
        let d0 = self.denominator.coeff(0);
        let mut out: Vec<BigRational> = Vec::with_capacity(len);
        for n in 0..len {
            let mut acc = self.numerator.coeff(n);
            for (i, d) in self.denominator.coeffs().iter().enumerate().skip(1) {
                if i > n {
                    break;
                }
                acc -= d * &out[n - i];
            }
            out.push(acc / &d0);
        }
        out
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.numerator, self.denominator)
    }
}

impl Serialize for RationalFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            numerator: String,
            denominator: String,
        }
        Repr { numerator: self.numerator.to_string(), denominator: self.denominator.to_string() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            numerator: String,
            denominator: String,
        }
        let r = Repr::deserialize(d)?;
        Ok(Self {
            numerator: r.numerator.parse().map_err(serde::de::Error::custom)?,
            denominator: r.denominator.parse().map_err(serde::de::Error::custom)?,
        })
    }
}

pub(crate) fn int_terms(s: &IntegerSeries) -> Vec<BigInt> {
    s.terms.iter().map(|t| BigInt::from(t.clone())).collect()
}

/// Finds `N / D` of minimal `deg N + deg D` whose expansion agrees with
/// every term of `s`. Only the first `len - holdout` coefficients are used to
/// solve for the fit.
pub fn guess_rational(s: &IntegerSeries) -> Result<Option<RationalFunction>> {
    guess_rational_with(s, RATIONAL_HOLDOUT)
}

pub fn guess_rational_with(s: &IntegerSeries, holdout: usize) -> Result<Option<RationalFunction>> {
    let len = s.len();
    let holdout = holdout.max(RATIONAL_HOLDOUT);
    if len < MIN_RATIONAL_TERMS.max(holdout + 1) {
        return Err(Error::TooFewTerms { needed: MIN_RATIONAL_TERMS.max(holdout + 1), got: len });
    }
    let a = int_terms(s);
    let fit = len - holdout;
    // Unknowns: d_0..d_dd then n_0..n_dn; the x^m coefficient of
    // D * A - N must vanish.
    for total in 0..=fit.saturating_sub(2) {
        for dd in (0..=total).rev() {
            let dn = total - dd;
            let unknowns = dn + dd + 2;
            if unknowns > fit {
                continue;
            }
            let rows: Vec<Vec<BigInt>> = (0..fit)
                .map(|m| {
                    let mut row = vec![BigInt::zero(); unknowns];
                    for i in 0..=dd.min(m) {
                        row[i] = a[m - i].clone();
                    }
                    if m <= dn {
                        row[dd + 1 + m] = -BigInt::one();
                    }
                    row
                })
                .collect();
            for v in integer_nullspace(&rows, unknowns) {
                if v[0].is_zero() {
                    continue;
                }
                let d0 = BigRational::from_integer(v[0].clone());
                let den = RationalPolynomial::from_ints(v[..=dd].to_vec()).scale(&d0.recip());
                let num = RationalPolynomial::from_ints(v[dd + 1..].to_vec()).scale(&d0.recip());
                let candidate = RationalFunction { numerator: num, denominator: den };
                let expanded = candidate.expand(len);
                if expanded.iter().zip(&a).all(|(x, y)| *x == BigRational::from_integer(y.clone())) {
                    return Ok(Some(reduce(candidate)));
                }
            }
        }
    }
    Ok(None)
}

fn reduce(r: RationalFunction) -> RationalFunction {
    let g = r.numerator.gcd(&r.denominator);
    if g.degree().unwrap_or(0) == 0 {
        return r;
    }
    let num = r.numerator.div_rem(&g).0;
    let den = r.denominator.div_rem(&g).0;
    let d0 = den.coeff(0).recip();
    RationalFunction { numerator: num.scale(&d0), denominator: den.scale(&d0) }
}

/// Every `(order, degree)` pair tried by [`guess_dfinite`], in search order.
pub fn dfinite_search_order(max_order: usize, max_degree: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for total in 0..=max_order + max_degree {
        for r in 0..=total.min(max_order) {
            let d = total - r;
            if d <= max_degree {
                pairs.push((r, d));
            }
        }
    }
    pairs
}

/// Linear system for `sum_j p_j f^(j) + q = 0` over coefficients
/// `x^0 .. x^(rows-1)`, each `p_j` of degree at most `d` and `q` of degree at
/// most `q_degree` (absent when `None`). Unknown `(j, l)` sits at column
/// `j * (d + 1) + l`; the coefficients of `q` follow.
pub(crate) fn ode_rows(a: &[BigInt], r: usize, d: usize, q_degree: Option<usize>, rows: usize) -> Vec<Vec<BigInt>> {
    let width = (r + 1) * (d + 1) + q_degree.map_or(0, |e| e + 1);
    (0..rows)
        .map(|m| {
            let mut row = vec![BigInt::zero(); width];
            for j in 0..=r {
                for l in 0..=d.min(m) {
                    let base = m - l;
                    let falling: BigInt = ((base + 1)..=(base + j)).map(BigInt::from).product();
                    row[j * (d + 1) + l] = &a[base + j] * falling;
                }
            }
            if q_degree.is_some_and(|e| m <= e) {
                row[(r + 1) * (d + 1) + m] = BigInt::one();
            }
            row
        })
        .collect()
}

fn ode_from_vector(v: &[BigInt], r: usize, d: usize) -> Option<PolynomialODE> {
    let chunk = |i: usize| RationalPolynomial::from_ints(v[i * (d + 1)..(i + 1) * (d + 1)].to_vec());
    let p: Vec<RationalPolynomial> = (0..=r).map(chunk).collect();
    let q = chunk(r + 1);
    PolynomialODE::new(p, q).ok().map(normalize_ode)
}

/// Primitive integer coefficients with a positive leading coefficient of
/// `p_r`.
fn normalize_ode(ode: PolynomialODE) -> PolynomialODE {
    let mut all: Vec<RationalPolynomial> = ode.p().to_vec();
    all.push(ode.q().clone());
    let lead = ode.leading().leading().expect("nonzero").clone();
    let width = all.iter().filter_map(|p| p.degree()).max().unwrap_or(0) + 1;
    let flat = RationalPolynomial::new(
        all.iter().flat_map(|p| (0..width).map(|i| p.coeff(i))).collect(),
    );
    // Scale so that the flattened vector is primitive; fix the sign by p_r.
    let ints = flat.primitive_integer();
    let mut scale = if ints.is_empty() {
        BigRational::one()
    } else {
        let pos = flat.coeffs().iter().position(|c| !c.is_zero()).expect("nonzero");
        BigRational::from_integer(ints[pos].clone()) / &flat.coeffs()[pos]
    };
    if (lead * &scale) < BigRational::zero() {
        scale = -scale;
    }
    let p = ode.p().iter().map(|c| c.scale(&scale)).collect();
    PolynomialODE::new(p, ode.q().scale(&scale)).expect("nonzero leading polynomial")
}

/// Searches `(order, degree)` pairs in increasing `order + degree` (lower
/// order first) for a linear ODE with polynomial coefficients satisfied by
/// `s`. A pair is tried only when the series supplies at least
/// `holdout` coefficient equations beyond the unknown count; every accepted
/// ODE satisfies all available equations exactly.
pub fn guess_dfinite(s: &IntegerSeries, max_order: usize, max_degree: usize) -> Option<PolynomialODE> {
    guess_dfinite_with(s, max_order, max_degree, DFINITE_HOLDOUT)
}

pub fn guess_dfinite_with(
    s: &IntegerSeries,
    max_order: usize,
    max_degree: usize,
    holdout: usize,
) -> Option<PolynomialODE> {
    let holdout = holdout.max(DFINITE_HOLDOUT);
    let a = int_terms(s);
    let ar: Vec<BigRational> = a.iter().cloned().map(BigRational::from_integer).collect();
    let mut tried = 0;
    for (r, d) in dfinite_search_order(max_order, max_degree) {
        let unknowns = (r + 2) * (d + 1);
        let equations = a.len().saturating_sub(r);
        if unknowns + holdout > equations {
            continue;
        }
        tried += 1;
        let rows = ode_rows(&a, r, d, Some(d), equations - holdout);
        for v in integer_nullspace(&rows, unknowns) {
            let Some(ode) = ode_from_vector(&v, r, d) else { continue };
            if verify_ode_rational(&ode, &ar).is_ok_and(|c| c.holds) {
                log::debug!("D-finite fit at order {r}, degree {d}");
                return Some(ode);
            }
        }
    }
    if tried == 0 {
        log::warn!("series of {} terms is too short for any (order, degree) pair", a.len());
    }
    None
}
