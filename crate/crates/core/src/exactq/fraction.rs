use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::poly::{laurent_div_exact, laurent_gcd, normalize_unit};
use super::{ExactError, QScalar, Rational};

/// Element of the fraction field of [`QScalar`]s.
///
/// Kept reduced: numerator and denominator share no non-unit factor and the
/// denominator has lowest exponent 0 and leading coefficient 1.
#[derive(Clone, Serialize, Deserialize)]
pub struct QFraction {
    num: QScalar,
    den: QScalar,
}

impl QFraction {
    pub fn new(num: QScalar, den: QScalar) -> Result<Self, ExactError> {
        if den.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: QScalar, den: QScalar) -> Self {
        if num.is_zero() {
            return Self { num, den: QScalar::one() };
        }
        if let Some(inv) = den.monomial_inverse() {
            return Self { num: &num * &inv, den: QScalar::one() };
        }
        let g = laurent_gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                laurent_div_exact(&num, &g).expect("gcd divides numerator"),
                laurent_div_exact(&den, &g).expect("gcd divides denominator"),
            )
        };
        let unit = normalize_unit(&den);
        // den = unit * c q^e; move c q^e onto the numerator.
        let ratio = laurent_div_exact(&den, &unit).expect("unit normalization");
        let inv = ratio.monomial_inverse().expect("ratio is a monomial");
        Self { num: &num * &inv, den: unit }
    }

    pub fn zero() -> Self {
        Self { num: QScalar::zero(), den: QScalar::one() }
    }

    pub fn one() -> Self {
        Self { num: QScalar::one(), den: QScalar::one() }
    }

    pub fn from_rational(c: Rational) -> Self {
        Self { num: QScalar::constant(c), den: QScalar::one() }
    }

    pub fn num(&self) -> &QScalar {
        &self.num
    }

    pub fn den(&self) -> &QScalar {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The value as a Laurent sum, if the denominator is trivial.
    pub fn as_scalar(&self) -> Option<&QScalar> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn inv(&self) -> Result<Self, ExactError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn eval(&self, q0: num_complex::Complex64) -> Result<num_complex::Complex64, ExactError> {
        Ok(self.num.eval(q0)? / self.den.eval(q0)?)
    }
}

impl From<QScalar> for QFraction {
    fn from(num: QScalar) -> Self {
        Self { num, den: QScalar::one() }
    }
}

impl PartialEq for QFraction {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for QFraction {}

impl<'a> Add<&'a QFraction> for &'a QFraction {
    type Output = QFraction;
    fn add(self, rhs: &'a QFraction) -> QFraction {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return QFraction::reduced(&self.num + &rhs.num, self.den.clone());
        }
        QFraction::reduced(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl<'a> Sub<&'a QFraction> for &'a QFraction {
    type Output = QFraction;
    fn sub(self, rhs: &'a QFraction) -> QFraction {
        self + &(-rhs)
    }
}

impl Neg for &QFraction {
    type Output = QFraction;
    fn neg(self) -> QFraction {
        QFraction { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for QFraction {
    type Output = QFraction;
    fn neg(self) -> QFraction {
        -&self
    }
}

impl<'a> Mul<&'a QFraction> for &'a QFraction {
    type Output = QFraction;
    fn mul(self, rhs: &'a QFraction) -> QFraction {
        if self.is_zero() || rhs.is_zero() {
            return QFraction::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return QFraction::from(&self.num * &rhs.num);
        }
        QFraction::reduced(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl<'a> Div<&'a QFraction> for &'a QFraction {
    type Output = Result<QFraction, ExactError>;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &'a QFraction) -> Result<QFraction, ExactError> {
        Ok(self * &rhs.inv()?)
    }
}

impl Add for QFraction {
    type Output = QFraction;
    fn add(self, rhs: QFraction) -> QFraction {
        &self + &rhs
    }
}

impl Sub for QFraction {
    type Output = QFraction;
    fn sub(self, rhs: QFraction) -> QFraction {
        &self - &rhs
    }
}

impl Mul for QFraction {
    type Output = QFraction;
    fn mul(self, rhs: QFraction) -> QFraction {
        &self * &rhs
    }
}

impl fmt::Display for QFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for QFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QFraction({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactq::rat;

    #[test]
    fn reduces_common_factors() {
        let b1 = QScalar::bracket(&rat(1, 1));
        let b2 = QScalar::bracket(&rat(2, 1));
        let f = QFraction::new(b2.clone(), b1.clone()).unwrap();
        assert_eq!(f.as_scalar().unwrap(), &(&QScalar::q_pow(1, 2) + &QScalar::q_pow(-1, 2)));
        let back = &f * &QFraction::from(b1);
        assert_eq!(back, QFraction::from(b2));
    }

    #[test]
    fn field_operations() {
        let a = QFraction::new(QScalar::one(), QScalar::bracket(&rat(1, 1))).unwrap();
        let b = QFraction::new(QScalar::q_pow(1, 4), &QScalar::q_pow(1, 1) + &QScalar::one()).unwrap();
        let sum = &a + &b;
        let diff = &sum - &b;
        assert_eq!(diff, a);
        let quot = (&sum / &a).unwrap();
        assert_eq!(&quot * &a, sum);
        assert!(QFraction::new(QScalar::one(), QScalar::zero()).is_err());
        assert!(QFraction::zero().inv().is_err());
    }
}
