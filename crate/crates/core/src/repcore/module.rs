use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{RepError, RootData, Weight};
use crate::exactq::{rat, QScalar, Rational};

/// The monomial `f_{i_1} f_{i_2} ... f_{i_m} v`; the empty word is `v` itself.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FWord(Vec<u8>);

impl FWord {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn new(indices: &[usize]) -> Self {
        Self(indices.iter().map(|&i| u8::try_from(i).expect("root index fits in u8")).collect())
    }

    /// The string `f_j f_{j-1} ... f_1 v`.
    pub fn string(j: usize) -> Self {
        Self::new(&(1..=j).rev().collect::<Vec<_>>())
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&i| i as usize)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letter(&self, t: usize) -> usize {
        self.0[t] as usize
    }

    pub fn prepend(&self, i: usize) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(i as u8);
        v.extend_from_slice(&self.0);
        Self(v)
    }

    pub fn remove(&self, t: usize) -> Self {
        let mut v = self.0.clone();
        v.remove(t);
        Self(v)
    }

    pub fn insert(&self, t: usize, i: usize) -> Self {
        let mut v = self.0.clone();
        v.insert(t, i as u8);
        Self(v)
    }

    pub fn tail(&self) -> Self {
        Self(self.0[1..].to_vec())
    }

    /// Letter multiplicities `l_0..l_{num_roots-1}`; the word lowers the weight by `Σ l_i α_i`.
    pub fn content(&self, num_roots: usize) -> Vec<u32> {
        let mut c = vec![0u32; num_roots];
        for i in self.indices() {
            c[i] += 1;
        }
        c
    }

    pub fn max_index(&self) -> Option<usize> {
        self.indices().max()
    }
}

impl fmt::Debug for FWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "v");
        }
        for i in &self.0 {
            write!(f, "f{i} ")?;
        }
        write!(f, "v")
    }
}

pub fn weight_of(w: &FWord, lambda: &Weight) -> Weight {
    let rd = root_data_for(lambda);
    w.indices().fold(lambda.clone(), |acc, i| &acc - &rd.simple_root(i))
}

pub(crate) fn root_data_for(lambda: &Weight) -> RootData {
    RootData::new(lambda.dim().checked_sub(2).filter(|&n| n > 0).expect("weights live in R^{n+2}, n >= 1"))
        .expect("rank checked above")
}

/// Precomputed pairings `(Λ, α_i)` for fast weight arithmetic on words.
#[derive(Clone, Debug)]
pub(crate) struct Pairings {
    rd: RootData,
    base: Vec<Rational>,
}

impl Pairings {
    pub(crate) fn new(lambda: &Weight) -> Self {
        let rd = root_data_for(lambda);
        Self { rd, base: (0..rd.num_roots()).map(|i| lambda.pair_root(i)).collect() }
    }

    pub(crate) fn root_data(&self) -> RootData {
        self.rd
    }

    /// `(Λ - Σ_{t >= from} α_{w_t}, α_i)`.
    pub(crate) fn tail_pairing(&self, w: &FWord, from: usize, i: usize) -> Rational {
        let shift: i64 = w.0[from..].iter().map(|&a| self.rd.cartan(a as usize, i)).sum();
        &self.base[i] - rat(shift, 1)
    }

    pub(crate) fn word_pairing(&self, w: &FWord, i: usize) -> Rational {
        self.tail_pairing(w, 0, i)
    }

    /// Pairing of the weight `Λ - Σ l_j α_j` with `α_i`.
    pub(crate) fn drop_pairing(&self, drop: &[u32], i: usize) -> Rational {
        let shift: i64 = drop.iter().enumerate().map(|(j, &l)| l as i64 * self.rd.cartan(j, i)).sum();
        &self.base[i] - rat(shift, 1)
    }
}

/// The generators of the quantum group acting on modules.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    E(usize),
    F(usize),
    /// `K_i^{±1/2}`, with the sign carried as `+1` or `-1`.
    KHalf(usize, i8),
}

impl Generator {
    pub fn index(&self) -> usize {
        match *self {
            Generator::E(i) | Generator::F(i) | Generator::KHalf(i, _) => i,
        }
    }
}

/// Element of `M(Λ)` (or of its dual when `dual` is set) on the free f-word basis.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleVector {
    highest_weight: Weight,
    dual: bool,
    #[serde(with = "term_list")]
    terms: BTreeMap<FWord, QScalar>,
}

mod term_list {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(terms: &BTreeMap<FWord, QScalar>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(terms.iter())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<FWord, QScalar>, D::Error> {
        let list: Vec<(FWord, QScalar)> = Vec::deserialize(d)?;
        let mut out = BTreeMap::new();
        for (w, c) in list {
            if c.is_zero() {
                return Err(serde::de::Error::custom("zero coefficient in module vector"));
            }
            if out.insert(w, c).is_some() {
                return Err(serde::de::Error::custom("repeated word in module vector"));
            }
        }
        Ok(out)
    }
}

impl ModuleVector {
    pub fn zero(highest_weight: Weight, dual: bool) -> Self {
        Self { highest_weight, dual, terms: BTreeMap::new() }
    }

    /// The highest weight vector `v` (or `v*`).
    pub fn highest(highest_weight: Weight, dual: bool) -> Self {
        Self::word(highest_weight, dual, FWord::empty(), QScalar::one())
    }

    pub fn word(highest_weight: Weight, dual: bool, w: FWord, c: QScalar) -> Self {
        let mut v = Self::zero(highest_weight, dual);
        v.add_term(w, c);
        v
    }

    pub fn highest_weight(&self) -> &Weight {
        &self.highest_weight
    }

    pub fn is_dual(&self) -> bool {
        self.dual
    }

    pub fn terms(&self) -> &BTreeMap<FWord, QScalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &FWord) -> QScalar {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, w: FWord, c: QScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(cur) => {
                *cur += &c;
                if cur.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn scale(&self, c: &QScalar) -> Self {
        let mut out = Self::zero(self.highest_weight.clone(), self.dual);
        for (w, v) in &self.terms {
            out.add_term(w.clone(), v * c);
        }
        out
    }

    fn check_compatible(&self, other: &Self) -> Result<(), RepError> {
        if self.highest_weight != other.highest_weight {
            return Err(RepError::HighestWeightMismatch);
        }
        if self.dual != other.dual {
            return Err(RepError::DualMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, RepError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, RepError> {
        self.try_add(&other.scale(&QScalar::from_int(-1)))
    }

    /// Split into weight components keyed by letter content.
    pub fn components(&self) -> BTreeMap<Vec<u32>, ModuleVector> {
        let nr = root_data_for(&self.highest_weight).num_roots();
        let mut out: BTreeMap<Vec<u32>, ModuleVector> = BTreeMap::new();
        for (w, c) in &self.terms {
            out.entry(w.content(nr))
                .or_insert_with(|| Self::zero(self.highest_weight.clone(), self.dual))
                .add_term(w.clone(), c.clone());
        }
        out
    }

    fn check_words(&self, rd: RootData) -> Result<(), RepError> {
        for w in self.terms.keys() {
            if let Some(m) = w.max_index() {
                rd.check_index(m)?;
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("module vectors serialize")
    }
}

impl fmt::Display for ModuleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if self.dual {
                write!(f, "({c})({w})*")?;
            } else {
                write!(f, "({c}){w}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ModuleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModuleVector[{}{}]", self, if self.dual { ", dual" } else { "" })
    }
}

/// `f_i x`: prefix every word with `i`.
pub fn act_f(i: usize, x: &ModuleVector) -> Result<ModuleVector, RepError> {
    if x.dual {
        return Err(RepError::DualInput);
    }
    root_data_for(&x.highest_weight).check_index(i)?;
    let mut out = ModuleVector::zero(x.highest_weight.clone(), false);
    for (w, c) in &x.terms {
        out.add_term(w.prepend(i), c.clone());
    }
    Ok(out)
}

/// `K_i^{±1/2} x`, diagonal on words (and on dual words, with the same eigenvalue).
pub fn act_k(i: usize, sign: i8, x: &ModuleVector) -> Result<ModuleVector, RepError> {
    let p = Pairings::new(&x.highest_weight);
    p.rd.check_index(i)?;
    let mut out = ModuleVector::zero(x.highest_weight.clone(), x.dual);
    for (w, c) in &x.terms {
        let e = p.word_pairing(w, i) * rat(sign as i64, 4);
        out.add_term(w.clone(), c * &QScalar::q_pow_rat(e));
    }
    Ok(out)
}

/// `e_i x`, by commuting `e_i` through each word with `[e_i, f_j] = δ_ij (K_i - K_i^{-1})` and `e_i v = 0`.
pub fn act_e(i: usize, x: &ModuleVector) -> Result<ModuleVector, RepError> {
    if x.dual {
        return Err(RepError::DualInput);
    }
    let p = Pairings::new(&x.highest_weight);
    p.rd.check_index(i)?;
    let mut out = ModuleVector::zero(x.highest_weight.clone(), false);
    for (w, c) in &x.terms {
        for (t, word) in e_terms(&p, i, w) {
            out.add_term(word, c * &t);
        }
    }
    Ok(out)
}

/// Terms of `e_i w` on a single word.
pub(crate) fn e_terms(p: &Pairings, i: usize, w: &FWord) -> Vec<(QScalar, FWord)> {
    let mut out = Vec::new();
    for t in 0..w.len() {
        if w.letter(t) == i {
            let m = p.tail_pairing(w, t + 1, i);
            if !m.is_zero() {
                out.push((QScalar::bracket(&m), w.remove(t)));
            }
        }
    }
    out
}

/// Generator action on the dual module, `(g φ)(x) = φ(τ(g) x)` with `τ(e_i) = f_i`.
///
/// On dual words `(w)*`: `e_i` strips a leading `i`; `f_i` sums over insertions of `i`
/// weighted by the matching `e_i` coefficient; `K` acts with the eigenvalue of `w`.
pub fn act_on_dual(g: Generator, x: &ModuleVector) -> Result<ModuleVector, RepError> {
    if !x.dual {
        return Err(RepError::NonDualInput);
    }
    let p = Pairings::new(&x.highest_weight);
    p.rd.check_index(g.index())?;
    match g {
        Generator::KHalf(i, s) => act_k(i, s, x),
        Generator::E(i) => {
            let mut out = ModuleVector::zero(x.highest_weight.clone(), true);
            for (w, c) in &x.terms {
                if !w.is_empty() && w.letter(0) == i {
                    out.add_term(w.tail(), c.clone());
                }
            }
            Ok(out)
        }
        Generator::F(i) => {
            let mut out = ModuleVector::zero(x.highest_weight.clone(), true);
            for (w, c) in &x.terms {
                for t in 0..=w.len() {
                    let u = w.insert(t, i);
                    let m = p.tail_pairing(&u, t + 1, i);
                    if !m.is_zero() {
                        out.add_term(u, c * &QScalar::bracket(&m));
                    }
                }
            }
            Ok(out)
        }
    }
}

/// Dispatch a generator to the plain or dual action as appropriate.
pub fn act(g: Generator, x: &ModuleVector) -> Result<ModuleVector, RepError> {
    x.check_words(root_data_for(&x.highest_weight))?;
    if x.dual {
        return act_on_dual(g, x);
    }
    match g {
        Generator::E(i) => act_e(i, x),
        Generator::F(i) => act_f(i, x),
        Generator::KHalf(i, s) => act_k(i, s, x),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(n: usize) -> Weight {
        RootData::new(n).unwrap().lambda_point()
    }

    fn v(n: usize) -> ModuleVector {
        ModuleVector::highest(lam(n), false)
    }

    #[test]
    fn weight_of_examples() {
        let l = lam(2);
        assert_eq!(weight_of(&FWord::empty(), &l), l);
        assert_eq!(weight_of(&FWord::new(&[1]), &l), Weight::from_ints(&[-1, 0, 1, 0]));
        assert_eq!(weight_of(&FWord::new(&[2, 1]), &l), Weight::from_ints(&[-1, 0, 0, 1]));
    }

    #[test]
    fn f_action_prefixes() {
        let x = act_f(1, &v(2)).unwrap();
        assert_eq!(x, ModuleVector::word(lam(2), false, FWord::new(&[1]), QScalar::one()));
        let y = act_f(2, &x).unwrap();
        assert_eq!(y.terms().keys().next().unwrap(), &FWord::new(&[2, 1]));
        assert!(act_f(1, &ModuleVector::zero(lam(2), false)).unwrap().is_zero());
        assert_eq!(act_f(1, &ModuleVector::highest(lam(2), true)), Err(RepError::DualInput));
    }

    #[test]
    fn k_action_examples() {
        let x = act_k(1, 1, &v(1)).unwrap();
        assert_eq!(x.coeff(&FWord::empty()), QScalar::q_pow(1, 4));
        let fv = act_f(1, &v(1)).unwrap();
        assert_eq!(act_k(1, 1, &fv).unwrap().coeff(&FWord::new(&[1])), QScalar::q_pow(-1, 4));
        assert_eq!(act_k(0, 1, &v(1)).unwrap().coeff(&FWord::empty()), QScalar::q_pow(-2, 4));
    }

    #[test]
    fn e_action_examples() {
        let fv = act_f(1, &v(2)).unwrap();
        let e = act_e(1, &fv).unwrap();
        assert_eq!(e.coeff(&FWord::empty()), QScalar::bracket(&rat(1, 1)));
        assert!(act_e(2, &fv).unwrap().is_zero());
        // e_1 f_2 f_1 v = [1] f_2 v in the free span; f_2 v lies in the Gram kernel.
        let w = act_f(2, &fv).unwrap();
        let e1 = act_e(1, &w).unwrap();
        assert_eq!(e1, ModuleVector::word(lam(2), false, FWord::new(&[2]), QScalar::bracket(&rat(1, 1))));
    }

    #[test]
    fn dual_e_strips_and_f_inserts() {
        let l = lam(2);
        let d = ModuleVector::word(l.clone(), true, FWord::new(&[2, 1]), QScalar::one());
        let e2 = act_on_dual(Generator::E(2), &d).unwrap();
        assert_eq!(e2, ModuleVector::word(l.clone(), true, FWord::new(&[1]), QScalar::one()));
        assert!(act_on_dual(Generator::E(1), &d).unwrap().is_zero());
        // f_1 v* pairs with e_1 acting on f_1 v
        let f1 = act_on_dual(Generator::F(1), &ModuleVector::highest(l.clone(), true)).unwrap();
        assert_eq!(f1.coeff(&FWord::new(&[1])), QScalar::bracket(&rat(1, 1)));
    }
}
