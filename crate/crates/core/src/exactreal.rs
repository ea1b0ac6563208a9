//! Exact reals of the form `q0 + q1*t1 + ... + qr*tr`.
//!
//! The `t_i` are formal symbols assumed linearly independent over the
//! rationals together with `1`. Equality, integrality and commensurability
//! are therefore decided on coefficient vectors alone. A [`BasisContext`]
//! assigns each `t_i` a positive double that is used only when a strict
//! order between two formally distinct values is needed.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExactError {
    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("entry {0} is zero")]
    ZeroEntry(usize),
    #[error("empty vector")]
    Empty,
    #[error("basis value for t{index} must be finite and positive, got {value}")]
    BadBasisValue { index: usize, value: f64 },
}

/// A rational linear combination of `1, t1, t2, ...`.
///
/// Coefficients are stored with trailing zeros trimmed, so structural
/// equality is formal equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactReal {
    coeffs: Vec<BigRational>,
}

impl ExactReal {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_rational(BigRational::from_integer(n))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self::from_coeffs(vec![q])
    }

    /// `numer/denom`. Panics if `denom == 0`.
    pub fn ratio(numer: i64, denom: i64) -> Self {
        Self::from_rational(BigRational::new(numer.into(), denom.into()))
    }

    /// The formal symbol `t_index` (1-based).
    pub fn transcendental(index: usize) -> Self {
        assert!(index >= 1, "transcendental indices start at 1");
        let mut coeffs = vec![BigRational::zero(); index + 1];
        coeffs[index] = BigRational::one();
        Self { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Coefficients of `1, t1, t2, ...`, trailing zeros omitted.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, index: usize) -> BigRational {
        self.coeffs.get(index).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Highest `t` index with a nonzero coefficient, 0 for rationals.
    pub fn rank(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.coeff(0))
    }

    pub fn is_integer(&self) -> bool {
        self.is_rational() && self.coeff(0).is_integer()
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        if self.is_integer() {
            Some(self.coeff(0).to_integer())
        } else {
            None
        }
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn abs(&self, ctx: &BasisContext) -> Self {
        if ctx.signum(self) == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = BigRational::zero();
        let coeffs = (0..len)
            .map(|i| {
                let a = self.coeffs.get(i).unwrap_or(&zero);
                let b = other.coeffs.get(i).unwrap_or(&zero);
                f(a, b)
            })
            .collect();
        Self::from_coeffs(coeffs)
    }
}

impl Add<&ExactReal> for &ExactReal {
    type Output = ExactReal;
    fn add(self, rhs: &ExactReal) -> ExactReal {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Add for ExactReal {
    type Output = ExactReal;
    fn add(self, rhs: ExactReal) -> ExactReal {
        &self + &rhs
    }
}

impl Sub<&ExactReal> for &ExactReal {
    type Output = ExactReal;
    fn sub(self, rhs: &ExactReal) -> ExactReal {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Sub for ExactReal {
    type Output = ExactReal;
    fn sub(self, rhs: ExactReal) -> ExactReal {
        &self - &rhs
    }
}

impl Neg for &ExactReal {
    type Output = ExactReal;
    fn neg(self) -> ExactReal {
        ExactReal { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for ExactReal {
    type Output = ExactReal;
    fn neg(self) -> ExactReal {
        -&self
    }
}

impl Mul<&BigRational> for &ExactReal {
    type Output = ExactReal;
    fn mul(self, rhs: &BigRational) -> ExactReal {
        self.scale(rhs)
    }
}

impl std::iter::Sum for ExactReal {
    fn sum<I: Iterator<Item = ExactReal>>(iter: I) -> Self {
        iter.fold(ExactReal::zero(), |acc, x| &acc + &x)
    }
}

impl<'a> std::iter::Sum<&'a ExactReal> for ExactReal {
    fn sum<I: Iterator<Item = &'a ExactReal>>(iter: I) -> Self {
        iter.fold(ExactReal::zero(), |acc, x| &acc + x)
    }
}

impl From<i64> for ExactReal {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigInt> for ExactReal {
    fn from(n: BigInt) -> Self {
        Self::from_bigint(n)
    }
}

fn fmt_rational(q: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let magnitude = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            first = false;
            if i == 0 {
                fmt_rational(&magnitude, f)?;
            } else {
                if !magnitude.is_one() {
                    fmt_rational(&magnitude, f)?;
                    f.write_str("*")?;
                }
                write!(f, "t{i}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactReal({self})")
    }
}

/// Parses an unsigned rational literal: `7`, `3/4`, `0.25`.
fn parse_rational(s: &str) -> Result<BigRational, String> {
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.parse().map_err(|_| format!("bad numerator {n:?}"))?;
        let d: BigInt = d.parse().map_err(|_| format!("bad denominator {d:?}"))?;
        if d.is_zero() {
            return Err("zero denominator".into());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("bad decimal {s:?}"));
        }
        let int: BigInt =
            if int.is_empty() { BigInt::zero() } else { int.parse().map_err(|_| format!("bad decimal {s:?}"))? };
        let frac_val: BigInt = frac.parse().map_err(|_| format!("bad decimal {s:?}"))?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(BigRational::new(int * &scale + frac_val, scale));
    }
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("bad number {s:?}"));
    }
    Ok(BigRational::from_integer(s.parse().map_err(|_| format!("bad number {s:?}"))?))
}

/// Parses one unsigned term: `r`, `t3`, `r*t3`, or `rt3`.
fn parse_term(term: &str) -> Result<(usize, BigRational), String> {
    if term.is_empty() {
        return Err("empty term".into());
    }
    match term.find('t') {
        None => Ok((0, parse_rational(term)?)),
        Some(pos) => {
            let index_str = &term[pos + 1..];
            let index: usize = index_str.parse().map_err(|_| format!("bad transcendental index in {term:?}"))?;
            if index == 0 || !index_str.bytes().all(|b| b.is_ascii_digit()) {
                return Err(format!("transcendental indices start at t1, got {term:?}"));
            }
            let head = term[..pos].strip_suffix('*').unwrap_or(&term[..pos]);
            let coeff = if head.is_empty() { BigRational::one() } else { parse_rational(head)? };
            Ok((index, coeff))
        }
    }
}

impl FromStr for ExactReal {
    type Err = ExactError;

    /// Grammar: signed terms joined by `+`/`-`, each term a rational
    /// (`3`, `3/4`, `0.75`) optionally multiplied by `t<index>`.
    /// Whitespace is ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: String| ExactError::Parse { input: s.to_string(), reason };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty expression".into()));
        }
        let mut coeffs: Vec<BigRational> = Vec::new();
        let mut rest = compact.as_str();
        let mut first = true;
        while !rest.is_empty() {
            let (negative, body) = match rest.as_bytes()[0] {
                b'+' => (false, &rest[1..]),
                b'-' => (true, &rest[1..]),
                _ if first => (false, rest),
                _ => return Err(err("expected '+' or '-' between terms".into())),
            };
            first = false;
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let (index, mut coeff) = parse_term(&body[..end]).map_err(err)?;
            if negative {
                coeff = -coeff;
            }
            if coeffs.len() <= index {
                coeffs.resize(index + 1, BigRational::zero());
            }
            coeffs[index] += coeff;
            rest = &body[end..];
        }
        Ok(Self::from_coeffs(coeffs))
    }
}

impl Serialize for ExactReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

struct ExactRealVisitor;

impl Visitor<'_> for ExactRealVisitor {
    type Value = ExactReal;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("an exact real such as \"3/2\", \"t1\" or \"2 + 3/4*t2\", or a JSON number")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<ExactReal, E> {
        v.parse().map_err(E::custom)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExactReal, E> {
        Ok(ExactReal::from_integer(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExactReal, E> {
        Ok(ExactReal::from_bigint(v.into()))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<ExactReal, E> {
        if !v.is_finite() {
            return Err(E::custom("non-finite number"));
        }
        // shortest round-trip decimal, read back exactly
        let text = format!("{v:?}");
        if text.contains('e') {
            return BigRational::from_float(v)
                .map(ExactReal::from_rational)
                .ok_or_else(|| E::custom("unrepresentable number"));
        }
        text.parse().map_err(E::custom)
    }
}

impl<'de> Deserialize<'de> for ExactReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        deserializer.deserialize_any(ExactRealVisitor)
    }
}

/// Default numeric stand-in for `t_index`.
fn default_basis_value(index: usize) -> f64 {
    const PRIMES: [u32; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];
    if index == 1 {
        return 0.754_877_666_246_692_7;
    }
    let p = match PRIMES.get(index - 1) {
        Some(&p) => f64::from(p),
        None => {
            // fractional parts of square roots of non-squares beyond the table
            let mut n = 54 + (index - PRIMES.len()) as u64 * 2;
            while (n as f64).sqrt().fract() == 0.0 {
                n += 1;
            }
            n as f64
        }
    };
    p.sqrt().fract()
}

/// Numeric values attached to `t1, t2, ...` for order comparisons.
///
/// Indices without an explicit value fall back to fixed defaults, so every
/// [`ExactReal`] can be evaluated in every context.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BasisContext {
    values: Vec<Option<f64>>,
}

impl BasisContext {
    pub fn new(values: &[f64]) -> Result<Self, ExactError> {
        let mut ctx = Self::default();
        for (i, &v) in values.iter().enumerate() {
            ctx = ctx.with_value(i + 1, v)?;
        }
        Ok(ctx)
    }

    pub fn with_value(mut self, index: usize, value: f64) -> Result<Self, ExactError> {
        if index == 0 || !value.is_finite() || value <= 0.0 {
            return Err(ExactError::BadBasisValue { index, value });
        }
        if self.values.len() < index {
            self.values.resize(index, None);
        }
        self.values[index - 1] = Some(value);
        Ok(self)
    }

    /// Parses assignments like `"t1=0.7548, t2=0.31"`.
    pub fn parse_assignments(spec: &str) -> Result<Self, ExactError> {
        let err = |reason: String| ExactError::Parse { input: spec.to_string(), reason };
        let mut ctx = Self::default();
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, value) =
                part.split_once('=').ok_or_else(|| err(format!("expected t<i>=<value>, got {part:?}")))?;
            let index: usize = name
                .trim()
                .strip_prefix('t')
                .and_then(|i| i.parse().ok())
                .ok_or_else(|| err(format!("bad symbol {name:?}")))?;
            let value: f64 = value.trim().parse().map_err(|_| err(format!("bad value {value:?}")))?;
            ctx = ctx.with_value(index, value)?;
        }
        Ok(ctx)
    }

    /// Value used for `t_index` (1-based).
    pub fn value(&self, index: usize) -> f64 {
        self.values.get(index - 1).copied().flatten().unwrap_or_else(|| default_basis_value(index))
    }

    pub fn evaluate(&self, x: &ExactReal) -> f64 {
        x.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let c = c.to_f64().unwrap_or(f64::NAN);
                if i == 0 {
                    c
                } else {
                    c * self.value(i)
                }
            })
            .sum()
    }

    /// Sign of `x`: exact for rationals, numeric otherwise.
    pub fn signum(&self, x: &ExactReal) -> Ordering {
        if x.is_zero() {
            return Ordering::Equal;
        }
        if let Some(q) = x.as_rational() {
            return q.cmp(&BigRational::zero());
        }
        let v = self.evaluate(x);
        if v > 0.0 {
            Ordering::Greater
        } else if v < 0.0 {
            Ordering::Less
        } else {
            // a formal nonzero value that evaluates to 0.0; break the tie
            // by the leading transcendental coefficient
            let lead = x.coeffs.last().expect("nonzero");
            lead.cmp(&BigRational::zero())
        }
    }

    /// Equality is formal; strict order goes through [`Self::signum`].
    pub fn compare(&self, x: &ExactReal, y: &ExactReal) -> Ordering {
        if x == y {
            return Ordering::Equal;
        }
        self.signum(&(x - y))
    }
}

/// Result of testing a vector for proportionality to an integer vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Commensurability {
    /// `c = eta * b` with `gcd(|b_j|) = 1` and `b[0] > 0`.
    Commensurable {
        b: Vec<BigInt>,
        eta: ExactReal,
    },
    Incommensurable,
}

impl Commensurability {
    pub fn integer_vector(&self) -> Option<&[BigInt]> {
        match self {
            Commensurability::Commensurable { b, .. } => Some(b),
            Commensurability::Incommensurable => None,
        }
    }
}

/// Decides whether every entry of `c` is a rational multiple of `c[0]`.
pub fn commensurability_class(c: &[ExactReal]) -> Result<Commensurability, ExactError> {
    let first = c.first().ok_or(ExactError::Empty)?;
    if let Some(i) = c.iter().position(ExactReal::is_zero) {
        return Err(ExactError::ZeroEntry(i));
    }
    let pivot = first.coeffs.iter().position(|q| !q.is_zero()).expect("nonzero");
    let pivot_value = &first.coeffs[pivot];

    let mut ratios = Vec::with_capacity(c.len());
    for x in c {
        let ratio = x.coeff(pivot) / pivot_value;
        if &first.scale(&ratio) != x {
            return Ok(Commensurability::Incommensurable);
        }
        ratios.push(ratio);
    }

    let lcm = ratios.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let numers: Vec<BigInt> = ratios.iter().map(|r| (r * &lcm).to_integer()).collect();
    let gcd = numers.iter().fold(BigInt::zero(), |acc, n| acc.gcd(n));
    let b: Vec<BigInt> = numers.into_iter().map(|n| n / &gcd).collect();
    // ratios[0] == 1, so b[0] > 0 already
    let eta = first.scale(&BigRational::new(BigInt::one(), b[0].clone()));
    Ok(Commensurability::Commensurable { b, eta })
}
