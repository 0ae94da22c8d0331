use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{rat, ExactError, Rational};

/// A finite sum `Σ c_e q^e` with rational exponents and rational coefficients.
///
/// The term map never stores a zero coefficient, so structural equality is
/// mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QScalar {
    terms: BTreeMap<Rational, Rational>,
}

impl QScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(Rational::zero(), c)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(rat(c, 1))
    }

    pub fn monomial(exponent: Rational, coeff: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exponent, coeff);
        }
        Self { terms }
    }

    /// `q^{num/den}`.
    pub fn q_pow(num: i64, den: i64) -> Self {
        Self::monomial(rat(num, den), Rational::one())
    }

    pub fn q_pow_rat(e: Rational) -> Self {
        Self::monomial(e, Rational::one())
    }

    /// The bracket `q^{m/2} - q^{-m/2}`.
    pub fn bracket(m: &Rational) -> Self {
        let half = m / rat(2, 1);
        Self::q_pow_rat(half.clone()) - Self::q_pow_rat(-half)
    }

    /// Build from `(exponent, coefficient)` pairs, merging repeated exponents.
    pub fn from_terms<I: IntoIterator<Item = (Rational, Rational)>>(it: I) -> Self {
        let mut out = Self::zero();
        for (e, c) in it {
            out.add_term(e, c);
        }
        out
    }

    pub fn add_term(&mut self, exponent: Rational, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(exponent.clone()).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&exponent);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.get(&Rational::zero()).map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms sorted by increasing exponent.
    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exponent: &Rational) -> Rational {
        self.terms.get(exponent).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn min_exponent(&self) -> Option<&Rational> {
        self.terms.keys().next()
    }

    pub fn max_exponent(&self) -> Option<&Rational> {
        self.terms.keys().next_back()
    }

    /// Leading (highest-exponent) term.
    pub fn leading(&self) -> Option<(&Rational, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    /// Multiply by `q^shift`.
    pub fn shift(&self, shift: &Rational) -> Self {
        Self { terms: self.terms.iter().map(|(e, v)| (e + shift, v.clone())).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Inverse of a monomial; `None` for anything with more than one term.
    pub fn monomial_inverse(&self) -> Option<Self> {
        if !self.is_monomial() {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        Some(Self::monomial(-e.clone(), c.recip()))
    }

    /// Substitute `q -> q^{-1}`.
    pub fn bar(&self) -> Self {
        Self { terms: self.terms.iter().map(|(e, v)| (-e.clone(), v.clone())).collect() }
    }

    /// Evaluate at a complex `q0` using the principal branch of `q0^e`.
    pub fn eval(&self, q0: Complex64) -> Result<Complex64, ExactError> {
        if q0 == Complex64::new(0.0, 0.0) {
            return Err(ExactError::ZeroBase);
        }
        let log_q = q0.ln();
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let ef = e.to_f64().unwrap_or(f64::NAN);
            let cf = c.to_f64().unwrap_or(f64::NAN);
            acc += (log_q * ef).exp() * cf;
        }
        Ok(acc)
    }

    /// `[exponent_num, exponent_den, coeff_num, coeff_den]` quadruples, sorted by exponent.
    pub fn to_quadruples(&self) -> Vec<[String; 4]> {
        self.terms
            .iter()
            .map(|(e, c)| {
                [e.numer().to_string(), e.denom().to_string(), c.numer().to_string(), c.denom().to_string()]
            })
            .collect()
    }
}

pub fn q_add(a: &QScalar, b: &QScalar) -> QScalar {
    a + b
}

pub fn q_mul(a: &QScalar, b: &QScalar) -> QScalar {
    a * b
}

pub fn q_eval(a: &QScalar, q0: Complex64) -> Result<Complex64, ExactError> {
    a.eval(q0)
}

impl From<Rational> for QScalar {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

impl<'a> Add<&'a QScalar> for &'a QScalar {
    type Output = QScalar;
    fn add(self, rhs: &'a QScalar) -> QScalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for QScalar {
    type Output = QScalar;
    fn add(mut self, rhs: QScalar) -> QScalar {
        self += &rhs;
        self
    }
}

impl AddAssign<&QScalar> for QScalar {
    fn add_assign(&mut self, rhs: &QScalar) {
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), c.clone());
        }
    }
}

impl SubAssign<&QScalar> for QScalar {
    fn sub_assign(&mut self, rhs: &QScalar) {
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), -c.clone());
        }
    }
}

impl<'a> Sub<&'a QScalar> for &'a QScalar {
    type Output = QScalar;
    fn sub(self, rhs: &'a QScalar) -> QScalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for QScalar {
    type Output = QScalar;
    fn sub(mut self, rhs: QScalar) -> QScalar {
        self -= &rhs;
        self
    }
}

impl Neg for QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        QScalar { terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect() }
    }
}

impl Neg for &QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        -self.clone()
    }
}

impl<'a> Mul<&'a QScalar> for &'a QScalar {
    type Output = QScalar;
    fn mul(self, rhs: &'a QScalar) -> QScalar {
        let mut out = QScalar::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for QScalar {
    type Output = QScalar;
    fn mul(self, rhs: QScalar) -> QScalar {
        &self * &rhs
    }
}

impl fmt::Display for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest exponent first reads like an ordinary polynomial.
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let unit = mag.is_one();
            if e.is_zero() {
                write!(f, "{mag}")?;
                continue;
            }
            if !unit {
                write!(f, "{mag}*")?;
            }
            if e.is_one() {
                write!(f, "q")?;
            } else {
                write!(f, "q^({e})")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QScalar({self})")
    }
}

impl Serialize for QScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let quads: Vec<[serde_json::Value; 4]> = self
            .terms
            .iter()
            .map(|(e, c)| {
                [
                    big_to_json(e.numer()),
                    big_to_json(e.denom()),
                    big_to_json(c.numer()),
                    big_to_json(c.denom()),
                ]
            })
            .collect();
        quads.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let quads: Vec<[serde_json::Value; 4]> = Vec::deserialize(deserializer)?;
        let mut out = QScalar::zero();
        let mut last: Option<Rational> = None;
        for q in quads {
            let parts: Result<Vec<_>, _> = q.iter().map(json_to_big).collect();
            let parts = parts.map_err(D::Error::custom)?;
            if parts[1].is_zero() || parts[3].is_zero() {
                return Err(D::Error::custom("zero denominator in QScalar term"));
            }
            let e = Rational::new(parts[0].clone(), parts[1].clone());
            let c = Rational::new(parts[2].clone(), parts[3].clone());
            if c.is_zero() {
                return Err(D::Error::custom("zero coefficient in QScalar term"));
            }
            if let Some(prev) = &last {
                if *prev >= e {
                    return Err(D::Error::custom("QScalar exponents must be strictly increasing"));
                }
            }
            last = Some(e.clone());
            out.add_term(e, c);
        }
        Ok(out)
    }
}

fn big_to_json(v: &num_bigint::BigInt) -> serde_json::Value {
    match v.to_i64() {
        Some(small) => serde_json::Value::from(small),
        None => serde_json::Value::from(v.to_string()),
    }
}

fn json_to_big(v: &serde_json::Value) -> Result<num_bigint::BigInt, String> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(num_bigint::BigInt::from)
            .ok_or_else(|| format!("non-integer component {n}")),
        serde_json::Value::String(s) => s.parse().map_err(|_| format!("bad integer string {s:?}")),
        other => Err(format!("unexpected component {other}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> QScalar {
        QScalar::q_pow(n, d)
    }

    #[test]
    fn additive_inverse_cancels() {
        let a = q(1, 4);
        assert!((&a + &(-a.clone())).is_zero());
    }

    #[test]
    fn disjoint_exponents_stay_separate() {
        let s = &q(1, 2) + &q(-1, 2);
        let terms: Vec<_> = s.terms().map(|(e, c)| (e.clone(), c.clone())).collect();
        assert_eq!(terms, vec![(rat(-1, 2), rat(1, 1)), (rat(1, 2), rat(1, 1))]);
    }

    #[test]
    fn cancellation_leaves_q() {
        let qm1 = &q(1, 1) - &QScalar::one();
        assert_eq!(&qm1 + &QScalar::one(), q(1, 1));
    }

    #[test]
    fn products() {
        assert_eq!(&q(1, 4) * &q(1, 4), q(1, 2));
        let b = QScalar::bracket(&rat(1, 1));
        let expect = QScalar::from_terms([(rat(1, 1), rat(1, 1)), (rat(0, 1), rat(-2, 1)), (rat(-1, 1), rat(1, 1))]);
        assert_eq!(&b * &b, expect);
        assert!((&QScalar::zero() * &q(7, 4)).is_zero());
    }

    #[test]
    fn evaluation_uses_principal_root() {
        let c = |x: f64| Complex64::new(x, 0.0);
        assert!((q(1, 2).eval(c(4.0)).unwrap() - c(2.0)).norm() < 1e-14);
        assert!((&q(1, 1) - &QScalar::one()).eval(c(1.0)).unwrap().norm() < 1e-14);
        assert!((q(1, 4).eval(c(16.0)).unwrap() - c(2.0)).norm() < 1e-14);
        assert!(matches!(q(1, 1).eval(c(0.0)), Err(ExactError::ZeroBase)));
    }

    #[test]
    fn json_quadruples_sorted_by_exponent() {
        let s = &(&q(1, 2) - &q(-3, 4)) + &QScalar::constant(rat(5, 3));
        let js = serde_json::to_string(&s).unwrap();
        assert_eq!(js, "[[-3,4,-1,1],[0,1,5,3],[1,2,1,1]]");
        let back: QScalar = serde_json::from_str(&js).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<QScalar>("[[1,2,1,1],[0,1,1,1]]").is_err());
    }

    #[test]
    fn display_reads_high_to_low() {
        let s = &(&q(1, 1) - &QScalar::from_int(2)) + &q(-1, 1);
        assert_eq!(s.to_string(), "q - 2 + q^(-1)");
    }
}
