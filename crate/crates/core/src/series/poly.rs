use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A univariate polynomial with exact rational coefficients, ascending
/// degree. Trailing zeros are always trimmed, so the zero polynomial has no
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RationalPolynomial {
    coeffs: Vec<BigRational>,
}

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses "a" or "a/b".
pub(crate) fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n.trim().parse().ok()?, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Nearest float to a (possibly huge) rational.
pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    if let Some(f) = q.to_f64().filter(|f| f.is_finite() && *f != 0.0) {
        return f;
    }
    if q.is_zero() {
        return 0.0;
    }
    let (n, d) = (q.numer(), q.denom());
    // Drop the same number of low bits from both sides, then rescale.
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    let ns = (nb - 60).max(0);
    let ds = (db - 60).max(0);
    let nf = (n >> ns as usize).to_f64().unwrap_or(f64::NAN);
    let df = (d >> ds as usize).to_f64().unwrap_or(f64::NAN);
    let exp = (ns - ds).clamp(-2000, 2000) as i32;
    nf / df * 2f64.powi(exp)
}

impl RationalPolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::new(vec![BigRational::one()])
    }

    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn from_ints(coeffs: Vec<BigInt>) -> Self {
        Self::new(coeffs.into_iter().map(BigRational::from_integer).collect())
    }

    /// `prod (x - r)` over the given rational roots.
    pub fn from_roots(roots: &[BigRational]) -> Self {
        roots.iter().fold(Self::one(), |acc, r| {
            acc * Self::new(vec![-r.clone(), BigRational::one()])
        })
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        // Scale by the largest coefficient first so huge integers survive.
        let Some(max) = self.coeffs.iter().map(|c| c.abs()).max() else {
            return Vec::new();
        };
        self.coeffs.iter().map(|c| rational_to_f64(&(c / &max))).collect()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lead) => self.scale(&lead.recip()),
            None => Self::zero(),
        }
    }

    /// Euclidean division: `(quotient, remainder)`.
    ///
    /// # Panics
    ///
    /// On division by the zero polynomial.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let lead = divisor.leading().expect("division by zero polynomial");
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let q = &rem[i + dd] / lead;
            if !q.is_zero() {
                for (j, c) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &q * c;
                }
            }
            quot[i] = q;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        // Primitive pseudo-remainder sequence over the integers.
        let mut a = self.primitive_integer();
        let mut b = other.primitive_integer();
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        if !b.is_empty() && coprime_mod_p(&a, &b) {
            return Self::one();
        }
        while !b.is_empty() {
            let r = pseudo_remainder(&a, &b);
            a = b;
            b = Self::from_ints(r).primitive_integer();
        }
        Self::from_ints(a).monic()
    }

    /// Square-free decomposition: `(factor, multiplicity)` pairs whose
    /// product (up to a constant) is `self`. Each factor is monic,
    /// square-free and non-constant.
    pub fn square_free(&self) -> Vec<(Self, usize)> {
        // Yun's algorithm.
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let prim = |p: Self| Self::from_ints(p.primitive_integer());
        let f = prim(self.clone());
        let d = f.derivative();
        let mut a = f.gcd(&d);
        let mut b = f.div_rem(&a).0;
        let mut c = d.div_rem(&a).0;
        let mut i = 1;
        loop {
            let bprime = b.derivative();
            let diff = &c - &bprime;
            if diff.is_zero() {
                if b.degree().unwrap_or(0) > 0 {
                    out.push((b.monic(), i));
                }
                break;
            }
            a = b.gcd(&diff);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_rem(&a).0;
            c = diff.div_rem(&a).0;
            i += 1;
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
        }
        out
    }

    /// Multiplies through by the common denominator and divides by the
    /// content, giving a primitive integer polynomial with positive leading
    /// coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let Some(lead) = self.leading() else {
            return Vec::new();
        };
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * &lcm).to_integer()).collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if lead.is_negative() { -BigInt::one() } else { BigInt::one() };
        ints.into_iter().map(|c| c / &content * &sign).collect()
    }
}

const MODULUS: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MODULUS as u128) as u64
}

fn inv_mod(a: u64) -> u64 {
    let (mut base, mut e, mut acc) = (a, MODULUS - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        e >>= 1;
    }
    acc
}

fn reduce_mod(c: &[BigInt]) -> Vec<u64> {
    let m = BigInt::from(MODULUS);
    c.iter()
        .map(|x| x.mod_floor(&m).to_u64().expect("reduced"))
        .collect()
}

/// True when `a` and `b` are certainly coprime over the rationals: their
/// images modulo a large prime (not dividing either leading coefficient)
/// are coprime. A false answer is inconclusive.
fn coprime_mod_p(a: &[BigInt], b: &[BigInt]) -> bool {
    let trim = |v: &mut Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    let mut x = reduce_mod(a);
    let mut y = reduce_mod(b);
    if x.last() == Some(&0) || y.last() == Some(&0) {
        return false;
    }
    while !y.is_empty() {
        let inv = inv_mod(*y.last().expect("nonempty"));
        while x.len() >= y.len() {
            let f = mul_mod(*x.last().expect("nonempty"), inv);
            let shift = x.len() - y.len();
            for (j, c) in y.iter().enumerate() {
                x[shift + j] = (x[shift + j] + MODULUS - mul_mod(f, *c)) % MODULUS;
            }
            trim(&mut x);
        }
        std::mem::swap(&mut x, &mut y);
    }
    x.len() == 1
}

/// `lead(b)^k * a mod b` over the integers; `b` must be nonzero.
fn pseudo_remainder(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let lb = b.last().expect("nonzero divisor");
    while r.len() >= b.len() {
        let lr = r.last().expect("nonempty").clone();
        let shift = r.len() - b.len();
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (j, c) in b.iter().enumerate() {
            r[shift + j] -= &lr * c;
        }
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    r
}

impl Add for &RationalPolynomial {
    type Output = RationalPolynomial;

    fn add(self, rhs: Self) -> RationalPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &RationalPolynomial {
    type Output = RationalPolynomial;

    fn sub(self, rhs: Self) -> RationalPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPolynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for RationalPolynomial {
    type Output = RationalPolynomial;

    fn neg(self) -> RationalPolynomial {
        RationalPolynomial::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl Mul for &RationalPolynomial {
    type Output = RationalPolynomial;

    fn mul(self, rhs: Self) -> RationalPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return RationalPolynomial::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RationalPolynomial::new(out)
    }
}

impl Mul for RationalPolynomial {
    type Output = RationalPolynomial;

    fn mul(self, rhs: Self) -> RationalPolynomial {
        &self * &rhs
    }
}

impl fmt::Display for RationalPolynomial {
    /// Comma-separated ascending coefficients; the zero polynomial is "0".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for RationalPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .map(|t| parse_rational(t).ok_or_else(|| Error::Parse(t.trim().to_string())))
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn arithmetic() {
        let a = RationalPolynomial::from_i64(&[1, -2]);
        let b = RationalPolynomial::from_i64(&[1, 1]);
        assert_eq!(&a * &b, RationalPolynomial::from_i64(&[1, -1, -2]));
        assert_eq!(&a + &RationalPolynomial::from_i64(&[0, 2]), RationalPolynomial::one());
        assert_eq!((&a - &a).degree(), None);
        assert_eq!(a.eval(&q(1, 2)), BigRational::zero());
        assert_eq!(
            RationalPolynomial::from_i64(&[3, 0, 1]).derivative(),
            RationalPolynomial::from_i64(&[0, 2])
        );
    }

    #[test]
    fn division_and_gcd() {
        let a = RationalPolynomial::from_roots(&[q(1, 2), q(1, 1), q(-3, 1)]);
        let b = RationalPolynomial::from_roots(&[q(1, 2), q(2, 1)]);
        let (quot, rem) = a.div_rem(&b);
        assert_eq!(&(&quot * &b) + &rem, a);
        assert_eq!(a.gcd(&b), RationalPolynomial::from_roots(&[q(1, 2)]));
    }

    #[test]
    fn square_free_parts() {
        // x^3 (x-1) (2x-1)^2
        let p = RationalPolynomial::from_roots(&[q(0, 1), q(0, 1), q(0, 1), q(1, 1), q(1, 2), q(1, 2)]);
        let mut parts = p.square_free();
        parts.sort_by_key(|(_, m)| *m);
        assert_eq!(parts.len(), 3);
        assert_eq!(parts[0], (RationalPolynomial::from_roots(&[q(1, 1)]), 1));
        assert_eq!(parts[1], (RationalPolynomial::from_roots(&[q(1, 2)]), 2));
        assert_eq!(parts[2], (RationalPolynomial::x(), 3));
        assert!(RationalPolynomial::from_i64(&[5]).square_free().is_empty());
    }

    #[test]
    fn text_round_trip() {
        let p: RationalPolynomial = "1, -3/4, 0, 2".parse().unwrap();
        assert_eq!(p.to_string(), "1,-3/4,0,2");
        assert_eq!("0".parse::<RationalPolynomial>().unwrap(), RationalPolynomial::zero());
        assert!("1,x".parse::<RationalPolynomial>().is_err());
        assert!("1/0".parse::<RationalPolynomial>().is_err());
    }

    #[test]
    fn primitive_form() {
        let p = RationalPolynomial::new(vec![q(-1, 2), q(-3, 4)]);
        assert_eq!(p.primitive_integer(), vec![BigInt::from(2), BigInt::from(3)]);
    }

    #[test]
    fn huge_rationals_to_float() {
        let big = BigRational::new(BigInt::from(10).pow(400), BigInt::from(10).pow(399) * 4);
        assert!((rational_to_f64(&big) - 2.5).abs() < 1e-12);
    }

    fn small_poly() -> impl Strategy<Value = RationalPolynomial> {
        prop::collection::vec(-9i64..=9, 1..6).prop_map(|c| RationalPolynomial::from_i64(&c))
    }

    proptest! {
        #[test]
        fn gcd_divides_and_is_maximal(f in small_poly(), g in small_poly(), h in small_poly()) {
            prop_assume!(!f.is_zero() && !g.is_zero() && !h.is_zero());
            let a = &f * &g;
            let b = &f * &h;
            let d = a.gcd(&b);
            prop_assert!(a.div_rem(&d).1.is_zero());
            prop_assert!(b.div_rem(&d).1.is_zero());
            // f divides the gcd.
            prop_assert!(d.div_rem(&f).1.is_zero());
            prop_assert_eq!(d.leading().cloned(), Some(BigRational::one()));
        }

        #[test]
        fn square_free_recombines(f in small_poly(), g in small_poly()) {
            let p = &(&f * &f) * &g;
            prop_assume!(p.degree().unwrap_or(0) > 0);
            let parts = p.square_free();
            let rebuilt = parts.iter().fold(RationalPolynomial::one(), |acc, (q, m)| {
                (0..*m).fold(acc, |acc, _| &acc * q)
            });
            prop_assert_eq!(rebuilt, p.monic());
            for (q, _) in &parts {
                prop_assert_eq!(q.gcd(&q.derivative()), RationalPolynomial::one());
            }
        }
    }
}
