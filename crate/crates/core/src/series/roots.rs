use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{rational_to_f64, RationalPolynomial};
use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: u32 = 12;
/// Digits beyond this are not representable in the `f64` output.
pub const MAX_PRECISION: u32 = 15;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
    pub is_real: bool,
}

impl Root {
    pub fn modulus(&self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn argument(&self) -> f64 {
        self.im.atan2(self.re)
    }

    pub fn is_positive_real(&self) -> bool {
        self.is_real && self.re > 0.0
    }

    fn as_complex(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

fn horner(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Simultaneous Aberth iteration for a polynomial with simple roots.
fn aberth(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let radius = coeffs[..n]
        .iter()
        .map(|c| (c / lead).abs())
        .fold(0.0f64, f64::max)
        + 1.0;
    // Start inside the Cauchy disc, off any symmetry axis.
    let start = radius.min(2.0).max(0.5);
    let mut z: Vec<Complex64> = (0..n)
        .map(|i| Complex64::from_polar(start, 2.0 * std::f64::consts::PI * (i as f64 + 0.25) / n as f64 + 0.4))
        .collect();
    for _ in 0..2000 {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = horner(coeffs, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / z[i].norm().max(1e-300));
            }
        }
        if max_step < 1e-13 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..8 {
            let (p, dp) = horner(coeffs, *zi);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if !step.is_finite() {
                break;
            }
            *zi -= step;
            if step.norm() <= f64::EPSILON * zi.norm() {
                break;
            }
        }
    }
    z
}

/// Sign of `p(n / d)` for `d > 0`, from the integer form of `p`.
fn sign(p: &[BigInt], x: &BigRational) -> Ordering {
    let (n, d) = (x.numer(), x.denom());
    let mut acc = BigInt::zero();
    let mut dpow = BigInt::one();
    for c in p.iter().rev() {
        acc = acc * n + c * &dpow;
        dpow *= d;
    }
    match acc.sign() {
        Sign::Minus => Ordering::Less,
        Sign::NoSign => Ordering::Equal,
        Sign::Plus => Ordering::Greater,
    }
}

/// Tries to bracket a real root near `guess` by an exact sign change and
/// bisects it to the requested relative precision.
fn refine_real(p: &RationalPolynomial, guess: f64, precision: u32) -> Option<f64> {
    let ints = p.primitive_integer();
    let scale = guess.abs().max(1e-300);
    let half = scale * 1e-7;
    let mut lo = BigRational::from_f64(guess - half)?;
    let mut hi = BigRational::from_f64(guess + half)?;
    let slo = sign(&ints, &lo);
    let shi = sign(&ints, &hi);
    if slo == Ordering::Equal {
        return Some(guess - half);
    }
    if shi == Ordering::Equal {
        return Some(guess + half);
    }
    if slo == shi {
        return None;
    }
    let tol = BigRational::from_f64(scale * 10f64.powi(-(precision as i32) - 2))?;
    let two = BigRational::from_integer(BigInt::from(2));
    while &hi - &lo > tol {
        let mid = (&lo + &hi) / &two;
        match sign(&ints, &mid) {
            Ordering::Equal => return Some(rational_to_f64(&mid)),
            s if s == slo => lo = mid,
            _ => hi = mid,
        }
    }
    Some(rational_to_f64(&((lo + hi) / two)))
}

fn round_to(x: f64, precision: u32) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let digits = precision as i32 - 1 - x.abs().log10().floor() as i32;
    let f = 10f64.powi(digits.clamp(-300, 300));
    (x * f).round() / f
}

/// All complex roots of `poly` with multiplicities, to `precision`
/// significant digits (at most [`MAX_PRECISION`]). Real roots are confirmed
/// by an exact sign change. Roots are ordered by modulus, then argument.
pub fn root_isolation(poly: &RationalPolynomial, precision: u32) -> Result<Vec<Root>> {
    if poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if precision == 0 || precision > MAX_PRECISION {
        return Err(Error::InvalidParameter(format!(
            "root precision must be 1..={MAX_PRECISION} digits, got {precision}"
        )));
    }
    let mut roots = Vec::new();
    for (factor, mult) in poly.square_free() {
        let mut f = factor;
        if f.coeff(0).is_zero() {
            roots.push(Root { re: 0.0, im: 0.0, multiplicity: mult, is_real: true });
            f = f.div_rem(&RationalPolynomial::x()).0;
        }
        if f.degree().unwrap_or(0) == 0 {
            continue;
        }
        if f.degree() == Some(1) {
            let x = -(f.coeff(0) / f.coeff(1));
            let re = rational_to_f64(&x);
            roots.push(Root { re, im: 0.0, multiplicity: mult, is_real: true });
            continue;
        }
        for z in aberth(&f.to_f64_coeffs()) {
            let near_axis = z.im.abs() <= 1e-6 * z.norm().max(1e-300);
            let real = if near_axis { refine_real(&f, z.re, precision) } else { None };
            roots.push(match real {
                Some(re) => Root { re, im: 0.0, multiplicity: mult, is_real: true },
                None => Root { re: z.re, im: z.im, multiplicity: mult, is_real: false },
            });
        }
    }
    for r in roots.iter_mut() {
        r.re = round_to(r.re, precision);
        r.im = round_to(r.im, precision);
        if r.im == 0.0 {
            r.im = 0.0;
        }
    }
    roots.sort_by(|a, b| {
        a.modulus()
            .total_cmp(&b.modulus())
            .then(a.argument().total_cmp(&b.argument()))
    });
    Ok(roots)
}

/// The smallest-modulus nonzero root; among equal moduli (to `precision`
/// digits) a positive real root wins.
pub fn dominant_root(roots: &[Root], precision: u32) -> Option<Root> {
    let tol = 10f64.powi(-(precision as i32));
    let nonzero: Vec<&Root> = roots.iter().filter(|r| r.modulus() > 0.0).collect();
    let first = nonzero.first()?;
    let m = first.modulus();
    nonzero
        .iter()
        .take_while(|r| (r.modulus() - m).abs() <= tol * m)
        .find(|r| r.is_positive_real())
        .or(Some(first))
        .map(|r| **r)
}

/// Distance between two roots, used for clustering estimates.
pub(crate) fn root_distance(a: &Root, b: &Root) -> f64 {
    (a.as_complex() - b.as_complex()).norm()
}
