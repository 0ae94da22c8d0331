//! Dense univariate polynomials over `Q`, used to take gcds and exact
//! quotients of [`QScalar`]s after rescaling exponents to integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{QScalar, Rational};

/// Coefficients from degree 0 upward; no trailing zeros.
type Dense = Vec<Rational>;

fn trim(p: &mut Dense) {
    while p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
}

fn monic(mut p: Dense) -> Dense {
    trim(&mut p);
    if let Some(lead) = p.last().cloned() {
        for c in p.iter_mut() {
            *c = &*c / &lead;
        }
    }
    p
}

/// Quotient and remainder of `a / b` (`b` nonzero).
fn divrem(a: &Dense, b: &Dense) -> (Dense, Dense) {
    let mut rem = a.clone();
    trim(&mut rem);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if rem.len() < b.len() {
        return (vec![], rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - db];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = rem.last().unwrap() / &lead;
        for (i, bc) in b.iter().enumerate() {
            rem[shift + i] -= &c * bc;
        }
        quot[shift] = c;
        rem.pop();
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

fn gcd_dense(a: Dense, b: Dense) -> Dense {
    let (mut x, mut y) = (monic(a), monic(b));
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = monic(r);
    }
    x
}

/// Common scale `N` (lcm of exponent denominators) so every exponent times `N` is an integer.
fn common_scale<'a>(polys: impl IntoIterator<Item = &'a QScalar>) -> BigInt {
    let mut n = BigInt::one();
    for p in polys {
        for (e, _) in p.terms() {
            n = n.lcm(e.denom());
        }
    }
    n
}

/// Dense image of `p` in `x = q^{1/N}`, after dividing out the lowest power.
/// Returns `(dense, lowest exponent)`.
fn to_dense(p: &QScalar, scale: &BigInt) -> (Dense, Rational) {
    let low = p.min_exponent().cloned().unwrap_or_else(Rational::zero);
    let mut out: Dense = Vec::new();
    for (e, c) in p.terms() {
        let idx = ((e - &low) * Rational::from_integer(scale.clone())).to_integer();
        let idx: usize = idx.try_into().expect("exponent span too large for dense form");
        if out.len() <= idx {
            out.resize(idx + 1, Rational::zero());
        }
        out[idx] = c.clone();
    }
    (out, low)
}

fn from_dense(p: &Dense, scale: &BigInt, low: &Rational) -> QScalar {
    let step = Rational::new(BigInt::one(), scale.clone());
    QScalar::from_terms(
        p.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (low + &step * Rational::from_integer(BigInt::from(i)), c.clone())),
    )
}

/// Greatest common divisor up to a unit (a nonzero constant times a power of `q`).
/// The result has lowest exponent 0 and leading coefficient 1.
pub fn laurent_gcd(a: &QScalar, b: &QScalar) -> QScalar {
    if a.is_zero() {
        return normalize_unit(b);
    }
    if b.is_zero() {
        return normalize_unit(a);
    }
    if a.is_monomial() || b.is_monomial() {
        return QScalar::one();
    }
    let scale = common_scale([a, b]);
    let (da, _) = to_dense(a, &scale);
    let (db, _) = to_dense(b, &scale);
    let g = gcd_dense(da, db);
    from_dense(&g, &scale, &Rational::zero())
}

/// Divide out a unit so the lowest exponent is 0 and the leading coefficient is 1.
pub fn normalize_unit(a: &QScalar) -> QScalar {
    match (a.min_exponent(), a.leading()) {
        (Some(low), Some((_, lead))) => a.shift(&-low.clone()).scale(&lead.recip()),
        _ => QScalar::zero(),
    }
}

/// Exact quotient `a / b`, or `None` if `b` does not divide `a` in the Laurent ring.
pub fn laurent_div_exact(a: &QScalar, b: &QScalar) -> Option<QScalar> {
    if b.is_zero() {
        return None;
    }
    if a.is_zero() {
        return Some(QScalar::zero());
    }
    if let Some(inv) = b.monomial_inverse() {
        return Some(a * &inv);
    }
    let scale = common_scale([a, b]);
    let (da, la) = to_dense(a, &scale);
    let (db, lb) = to_dense(b, &scale);
    let (quot, rem) = divrem(&da, &db);
    if !rem.is_empty() {
        return None;
    }
    Some(from_dense(&quot, &scale, &(la - lb)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactq::rat;

    fn q(n: i64, d: i64) -> QScalar {
        QScalar::q_pow(n, d)
    }

    #[test]
    fn gcd_of_brackets() {
        // [2] = (q^{1/2} - q^{-1/2})(q^{1/2} + q^{-1/2})
        let b1 = QScalar::bracket(&rat(1, 1));
        let b2 = QScalar::bracket(&rat(2, 1));
        let g = laurent_gcd(&b2, &b1);
        assert_eq!(g, normalize_unit(&b1));
        let quot = laurent_div_exact(&b2, &b1).unwrap();
        assert_eq!(quot, &q(1, 2) + &q(-1, 2));
    }

    #[test]
    fn non_divisible() {
        let b1 = QScalar::bracket(&rat(1, 1));
        let other = &q(1, 1) + &QScalar::from_int(1);
        assert!(laurent_div_exact(&other, &b1).is_none());
        assert!(laurent_gcd(&other, &b1).is_one());
    }

    #[test]
    fn mixed_denominators() {
        let a = &q(3, 4) - &q(-1, 3);
        let b = &a * &(&q(1, 6) + &QScalar::from_int(3));
        assert_eq!(laurent_div_exact(&b, &a).unwrap(), &q(1, 6) + &QScalar::from_int(3));
        assert_eq!(laurent_gcd(&a, &b), normalize_unit(&a));
    }
}
