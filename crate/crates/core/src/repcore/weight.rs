use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::RepError;
use crate::exactq::{rat, Rational};

/// Exact vector in the orthonormal basis `g_0, ..., g_{n+1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    coords: Vec<Rational>,
}

impl Weight {
    pub fn new(coords: Vec<Rational>) -> Self {
        Self { coords }
    }

    pub fn zero(dim: usize) -> Self {
        Self { coords: vec![Rational::zero(); dim] }
    }

    /// The basis vector `g_a`.
    pub fn basis(dim: usize, a: usize) -> Self {
        let mut w = Self::zero(dim);
        w.coords[a] = Rational::one();
        w
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self { coords: coords.iter().map(|&c| rat(c, 1)).collect() }
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn dot(&self, other: &Self) -> Rational {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords.iter().zip(&other.coords).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { coords: self.coords.iter().map(|x| x * c).collect() }
    }

    /// Pairing with the simple root `α_i = g_i - g_{i+1}`.
    pub fn pair_root(&self, i: usize) -> Rational {
        &self.coords[i] - &self.coords[i + 1]
    }

    pub fn to_f64(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        self.coords.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        Weight { coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        Weight { coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight { coords: self.coords.iter().map(|a| -a).collect() }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Weight{self}")
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.coords.iter().map(|c| c.to_string()))
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        let coords = raw
            .iter()
            .map(|s| parse_rational(s).map_err(D::Error::custom))
            .collect::<Result<_, _>>()?;
        Ok(Self { coords })
    }
}

/// Parse `"p"` or `"p/q"` into a rational.
pub fn parse_rational(s: &str) -> Result<Rational, RepError> {
    let bad = || RepError::Parse(s.to_string());
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// Root system of type `A_{n+1}` realized in `R^{n+2}` with simple roots
/// `α_0 = g_0 - g_1` and `α_i = g_i - g_{i+1}` for `i = 1..n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RootData {
    n: usize,
}

impl RootData {
    pub fn new(n: usize) -> Result<Self, RepError> {
        if n == 0 {
            return Err(RepError::InvalidRank(n));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ambient_dim(&self) -> usize {
        self.n + 2
    }

    /// Number of simple roots, `α_0..α_n`.
    pub fn num_roots(&self) -> usize {
        self.n + 1
    }

    pub fn check_index(&self, i: usize) -> Result<(), RepError> {
        if i > self.n {
            Err(RepError::IndexOutOfRange { index: i, n: self.n })
        } else {
            Ok(())
        }
    }

    pub fn simple_root(&self, i: usize) -> Weight {
        let dim = self.ambient_dim();
        &Weight::basis(dim, i) - &Weight::basis(dim, i + 1)
    }

    pub fn coroot(&self, i: usize) -> Weight {
        let a = self.simple_root(i);
        let two = rat(2, 1);
        let len = a.dot(&a);
        a.scale(&(two / len))
    }

    /// Cartan integer `(α_i, α_j)`.
    pub fn cartan(&self, i: usize, j: usize) -> i64 {
        match i.abs_diff(j) {
            0 => 2,
            1 => -1,
            _ => 0,
        }
    }

    /// `Λ = g_1 - g_0`, the weight assigned to every marked point `z_i`.
    pub fn lambda_point(&self) -> Weight {
        let dim = self.ambient_dim();
        &Weight::basis(dim, 1) - &Weight::basis(dim, 0)
    }

    /// `g_1 + ... + g_{n+1}`.
    fn trace_vector(&self) -> Weight {
        let dim = self.ambient_dim();
        let mut w = Weight::zero(dim);
        for a in 1..=self.n + 1 {
            w.coords[a] = Rational::one();
        }
        w
    }

    /// Fundamental weight `η_i` of the `α_1..α_n` subsystem, `(η_i, α_j) = δ_ij`.
    pub fn eta(&self, i: usize) -> Weight {
        assert!((1..=self.n).contains(&i), "η_i needs 1 <= i <= n");
        let dim = self.ambient_dim();
        let mut w = Weight::zero(dim);
        for a in 1..=i {
            w.coords[a] = Rational::one();
        }
        &w - &self.trace_vector().scale(&rat(i as i64, self.n as i64 + 1))
    }

    /// Weight `h_a = g_a - (g_1 + ... + g_{n+1})/(n+1)` of the vector representation, `a = 1..n+1`.
    pub fn h(&self, a: usize) -> Weight {
        assert!((1..=self.n + 1).contains(&a), "h_a needs 1 <= a <= n+1");
        let dim = self.ambient_dim();
        &Weight::basis(dim, a) - &self.trace_vector().scale(&rat(1, self.n as i64 + 1))
    }

    /// Half the sum of the positive roots of the `α_1..α_n` subsystem.
    pub fn delta(&self) -> Weight {
        let dim = self.ambient_dim();
        let mut w = Weight::zero(dim);
        for a in 1..=self.n + 1 {
            w.coords[a] = rat(self.n as i64, 2) - rat(a as i64 - 1, 1);
        }
        w
    }

    /// `ρ = k δ`.
    pub fn rho(&self, k: &Rational) -> Weight {
        self.delta().scale(k)
    }

    /// The reproducible generic weight `λ = 3η_1 + 5η_2 + 7η_3 + ...`.
    pub fn generic_lambda(&self) -> Weight {
        let mut w = Weight::zero(self.ambient_dim());
        for (i, p) in (1..=self.n).zip(odd_primes()) {
            w = &w + &self.eta(i).scale(&rat(p, 1));
        }
        w
    }

    /// `Λ(0) = κλ - δ` with `κ = -1/k`.
    pub fn lambda_zero(&self, lambda: &Weight, k: &Rational) -> Weight {
        let kappa = -k.recip();
        &lambda.scale(&kappa) - &self.delta()
    }
}

fn odd_primes() -> impl Iterator<Item = i64> {
    (3i64..).step_by(2).filter(|&p| (3..p).step_by(2).take_while(|d| d * d <= p).all(|d| p % d != 0))
}
