use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{rat, RationalPolynomial};
use crate::enumerate::IntegerSeries;
use crate::error::{Error, Result};

/// The equation for `Av(A(5,5))`, order 3 and degree 8.
pub const A55_ODE_TEXT: &str = include_str!("../../data/a5_5.ode");

/// `p_0 f + p_1 f' + ... + p_r f^(r) + q = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialODE {
    p: Vec<RationalPolynomial>,
    q: RationalPolynomial,
}

impl PolynomialODE {
    pub fn new(p: Vec<RationalPolynomial>, q: RationalPolynomial) -> Result<Self> {
        match p.last() {
            None => Err(Error::InvalidParameter("an ODE needs at least p_0".into())),
            Some(lead) if lead.is_zero() => Err(Error::ZeroPolynomial),
            Some(_) => Ok(Self { p, q }),
        }
    }

    /// Integer coefficient form, `p[j][i]` being the coefficient of `x^i f^(j)`.
    pub fn from_i64(p: &[&[i64]], q: &[i64]) -> Result<Self> {
        Self::new(
            p.iter().map(|c| RationalPolynomial::from_i64(c)).collect(),
            RationalPolynomial::from_i64(q),
        )
    }

    pub fn a55() -> Self {
        A55_ODE_TEXT.parse().expect("shipped ODE parses")
    }

    pub fn order(&self) -> usize {
        self.p.len() - 1
    }

    /// Largest degree among all coefficient polynomials.
    pub fn degree(&self) -> usize {
        self.p
            .iter()
            .chain(std::iter::once(&self.q))
            .filter_map(RationalPolynomial::degree)
            .max()
            .unwrap_or(0)
    }

    pub fn p(&self) -> &[RationalPolynomial] {
        &self.p
    }

    pub fn q(&self) -> &RationalPolynomial {
        &self.q
    }

    pub fn leading(&self) -> &RationalPolynomial {
        self.p.last().expect("nonempty")
    }

    pub fn is_homogeneous(&self) -> bool {
        self.q.is_zero()
    }

    /// Coefficient of `x^m` after substituting the series, or `None` if it
    /// depends on terms beyond `a.len()`.
    fn residual(&self, a: &[BigRational], m: usize) -> Option<BigRational> {
        let mut acc = self.q.coeff(m);
        for (j, pj) in self.p.iter().enumerate() {
            for (l, c) in pj.coeffs().iter().enumerate() {
                if c.is_zero() || l > m {
                    continue;
                }
                let base = m - l;
                let idx = base + j;
                let term = a.get(idx)?;
                if term.is_zero() {
                    continue;
                }
                let falling: BigInt = ((base + 1)..=(base + j)).map(BigInt::from).product();
                acc += c * term * falling;
            }
        }
        Some(acc)
    }
}

impl fmt::Display for PolynomialODE {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ode order={} degree={}", self.order(), self.degree())?;
        for (j, pj) in self.p.iter().enumerate() {
            writeln!(f, "p{j}: {pj}")?;
        }
        writeln!(f, "q: {}", self.q)
    }
}

fn header_value(token: &str, key: &str, line: usize) -> Result<usize> {
    token
        .strip_prefix(key)
        .and_then(|v| v.strip_prefix('='))
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::OdeFormat { line, reason: format!("expected {key}=<integer>, got {token:?}") })
}

impl FromStr for PolynomialODE {
    type Err = Error;

    /// Parses the text format: `#` comments and blank lines are ignored; a
    /// header `ode order=R degree=D` is followed by `R + 1` lines for
    /// `p_0 .. p_R` and one line for `q`, each a comma-separated list of
    /// rationals in ascending degree, optionally labelled `p0:` / `q:`.
    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines
            .next()
            .ok_or(Error::OdeFormat { line: 0, reason: "empty input".into() })?;
        let tokens: Vec<&str> = header.split_whitespace().collect();
        if tokens.len() != 3 || tokens[0] != "ode" {
            return Err(Error::OdeFormat { line: hline, reason: "expected `ode order=R degree=D`".into() });
        }
        let order = header_value(tokens[1], "order", hline)?;
        let degree = header_value(tokens[2], "degree", hline)?;

        let mut polys = Vec::with_capacity(order + 2);
        for idx in 0..order + 2 {
            let label = if idx <= order { format!("p{idx}") } else { "q".to_string() };
            let (ln, body) = lines.next().ok_or(Error::OdeFormat {
                line: hline,
                reason: format!("missing line for {label}"),
            })?;
            let body = match body.split_once(':') {
                Some((tag, rest)) if tag.trim() == label => rest,
                Some((tag, _)) => {
                    return Err(Error::OdeFormat { line: ln, reason: format!("expected {label}, found {}", tag.trim()) })
                }
                None => body,
            };
            let poly: RationalPolynomial = body
                .parse()
                .map_err(|e| Error::OdeFormat { line: ln, reason: format!("{e}") })?;
            if poly.degree().unwrap_or(0) > degree {
                return Err(Error::OdeFormat { line: ln, reason: format!("{label} exceeds degree {degree}") });
            }
            polys.push(poly);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::OdeFormat { line: ln, reason: "trailing content".into() });
        }
        let q = polys.pop().expect("q line");
        let ode = Self::new(polys, q)?;
        if ode.degree() != degree {
            log::warn!("ODE header says degree {degree}, coefficients reach {}", ode.degree());
        }
        Ok(ode)
    }
}

pub(crate) fn to_rationals(terms: &[BigUint]) -> Vec<BigRational> {
    terms
        .iter()
        .map(|t| BigRational::from_integer(BigInt::from(t.clone())))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OdeCheck {
    pub holds: bool,
    /// Number of coefficients `x^0 .. x^(checked-1)` that were checked.
    pub checked: usize,
    /// First `(m, value)` with a nonzero coefficient of `x^m`.
    pub first_nonzero: Option<(usize, String)>,
}

/// Substitutes the truncated series into `ode` and checks every coefficient
/// that the truncation determines exactly.
pub fn verify_ode(ode: &PolynomialODE, s: &IntegerSeries) -> Result<OdeCheck> {
    verify_ode_rational(ode, &to_rationals(&s.terms))
}

pub fn verify_ode_rational(ode: &PolynomialODE, a: &[BigRational]) -> Result<OdeCheck> {
    if a.len() <= ode.order() {
        return Err(Error::TooFewTerms { needed: ode.order() + 1, got: a.len() });
    }
    let checked = a.len() - ode.order();
    for m in 0..checked {
        let r = ode.residual(a, m).expect("coefficient within truncation");
        if !r.is_zero() {
            return Ok(OdeCheck { holds: false, checked: m + 1, first_nonzero: Some((m, r.to_string())) });
        }
    }
    Ok(OdeCheck { holds: true, checked, first_nonzero: None })
}

/// `sum_t P_t(m) a_(m+t) + q_m = 0` for every `m >= 0`, with `a_j = 0` for
/// `j < 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recurrence {
    min_shift: i64,
    coefficients: Vec<RationalPolynomial>,
    inhomogeneous: Vec<BigRational>,
    initial_terms: usize,
}

/// `(m + 1 - l)(m + 2 - l) ... (m + j - l)` as a polynomial in `m`.
fn shifted_rising(l: usize, j: usize) -> RationalPolynomial {
    (1..=j).fold(RationalPolynomial::one(), |acc, i| {
        acc * RationalPolynomial::new(vec![rat(i as i64 - l as i64), BigRational::one()])
    })
}

fn nonnegative_integer_roots(p: &RationalPolynomial) -> Vec<usize> {
    let ints = p.primitive_integer();
    let Some(low) = ints.iter().position(|c| !c.is_zero()) else {
        return Vec::new();
    };
    let mut roots = Vec::new();
    if low > 0 {
        roots.push(0);
    }
    let lead = ints.last().expect("nonzero").abs();
    let bound: BigInt = ints[..ints.len() - 1]
        .iter()
        .map(|c| BigRational::new(c.abs(), lead.clone()))
        .max()
        .unwrap_or_else(BigRational::zero)
        .ceil()
        .to_integer()
        + 1;
    let trailing = ints[low].abs();
    let cap = 10_000_000u64;
    let limit = bound.to_u64().unwrap_or(u64::MAX).min(cap);
    if limit == cap {
        log::warn!("integer root search truncated at {cap}");
    }
    for m in 1..=limit {
        let mb = BigInt::from(m);
        if trailing.is_multiple_of(&mb) && p.eval(&BigRational::from_integer(mb)).is_zero() {
            roots.push(m as usize);
        }
    }
    roots
}

/// The P-recurrence satisfied by the coefficients of any power series
/// solution of `ode`.
pub fn ode_to_recurrence(ode: &PolynomialODE) -> Result<Recurrence> {
    let mut shifts: Vec<(i64, usize, usize)> = Vec::new();
    for (j, pj) in ode.p().iter().enumerate() {
        for (l, c) in pj.coeffs().iter().enumerate() {
            if !c.is_zero() {
                shifts.push((j as i64 - l as i64, j, l));
            }
        }
    }
    let min_shift = shifts.iter().map(|s| s.0).min().expect("nonzero leading polynomial");
    let max_shift = shifts.iter().map(|s| s.0).max().expect("nonzero leading polynomial");
    if max_shift < 0 {
        return Err(Error::InvalidParameter(
            "every coefficient term lowers the index; divide the ODE by x first".into(),
        ));
    }
    let mut coefficients = vec![RationalPolynomial::zero(); (max_shift - min_shift + 1) as usize];
    for &(t, j, l) in &shifts {
        let c = ode.p()[j].coeff(l);
        let slot = &mut coefficients[(t - min_shift) as usize];
        *slot = &*slot + &shifted_rising(l, j).scale(&c);
    }
    if ode.is_homogeneous() {
        let g = coefficients
            .iter()
            .fold(RationalPolynomial::zero(), |acc, c| acc.gcd(c));
        if g.degree().unwrap_or(0) > 0 && nonnegative_integer_roots(&g).is_empty() {
            for c in coefficients.iter_mut() {
                *c = c.div_rem(&g).0;
            }
        }
    }
    while coefficients.last().is_some_and(RationalPolynomial::is_zero) {
        coefficients.pop();
    }
    let top = min_shift + coefficients.len() as i64 - 1;
    let lead = coefficients.last().expect("nonzero");
    let needed = nonnegative_integer_roots(lead)
        .into_iter()
        .map(|r| r as i64 + top + 1)
        .max()
        .unwrap_or(0)
        .max(top);
    Ok(Recurrence {
        min_shift,
        coefficients,
        inhomogeneous: ode.q().coeffs().to_vec(),
        initial_terms: needed.max(0) as usize,
    })
}

impl Recurrence {
    pub fn min_shift(&self) -> i64 {
        self.min_shift
    }

    pub fn max_shift(&self) -> i64 {
        self.min_shift + self.coefficients.len() as i64 - 1
    }

    /// `P_t` for `t = min_shift ..= max_shift`.
    pub fn coefficients(&self) -> &[RationalPolynomial] {
        &self.coefficients
    }

    pub fn coefficient(&self, t: i64) -> RationalPolynomial {
        usize::try_from(t - self.min_shift)
            .ok()
            .and_then(|i| self.coefficients.get(i).cloned())
            .unwrap_or_default()
    }

    /// `q_m`, nonzero for finitely many `m`.
    pub fn inhomogeneous(&self, m: usize) -> BigRational {
        self.inhomogeneous.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// How many leading terms must be supplied before the recurrence
    /// determines the rest.
    pub fn initial_terms(&self) -> usize {
        self.initial_terms
    }

    /// Extends `initial` to `len` terms. Supplied terms beyond
    /// [`Recurrence::initial_terms`] are kept as given.
    pub fn extend(&self, initial: &[BigRational], len: usize) -> Result<Vec<BigRational>> {
        if initial.len() < self.initial_terms.min(len) {
            return Err(Error::TooFewTerms { needed: self.initial_terms, got: initial.len() });
        }
        let top = self.max_shift();
        let mut a: Vec<BigRational> = initial.iter().take(len).cloned().collect();
        while a.len() < len {
            let n = a.len() as i64;
            let m = n - top;
            let mq = BigRational::from_integer(BigInt::from(m));
            let lead = self.coefficients.last().expect("nonzero").eval(&mq);
            if m < 0 || lead.is_zero() {
                return Err(Error::TooFewTerms { needed: n as usize + 1, got: initial.len() });
            }
            let mut acc = self.inhomogeneous(m as usize);
            for (i, p) in self.coefficients.iter().enumerate().rev().skip(1) {
                let idx = m + self.min_shift + i as i64;
                if idx >= 0 {
                    acc += p.eval(&mq) * &a[idx as usize];
                }
            }
            a.push(-acc / lead);
        }
        Ok(a)
    }

    /// Like [`Recurrence::extend`] for an integer sequence; fails if an
    /// extended term is not a nonnegative integer.
    pub fn extend_integers(&self, initial: &[BigUint], len: usize) -> Result<Vec<BigUint>> {
        self.extend(&to_rationals(initial), len)?
            .into_iter()
            .enumerate()
            .map(|(n, t)| {
                if t.is_integer() && !t.is_negative() {
                    Ok(t.to_integer().to_biguint().expect("nonnegative"))
                } else {
                    Err(Error::InvalidParameter(format!("term {n} = {t} is not a nonnegative integer")))
                }
            })
            .collect()
    }
}

impl fmt::Display for Recurrence {
    /// One `P_t(m) * a(m+t)` summand per line, coefficients ascending in `m`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.coefficients.iter().enumerate() {
            let t = self.min_shift + i as i64;
            if !p.is_zero() {
                writeln!(f, "a(m{t:+}): {p}")?;
            }
        }
        if self.inhomogeneous.iter().any(|c| !c.is_zero()) {
            let q: Vec<String> = self.inhomogeneous.iter().map(|c| c.to_string()).collect();
            writeln!(f, "q(m), m = 0..: {}", q.join(","))?;
        }
        write!(f, "initial terms: {}", self.initial_terms)
    }
}
