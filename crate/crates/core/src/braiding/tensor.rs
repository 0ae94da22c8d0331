use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::BraidError;
use crate::exactq::{rat, QScalar, Rational};
use crate::repcore::{act, FWord, Generator, ModuleVector, RootData, ShapovalovForm, Weight};

/// One tensor factor: a highest weight and whether the factor is the dual module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorFactor {
    pub highest_weight: Weight,
    pub dual: bool,
}

impl TensorFactor {
    pub fn new(highest_weight: Weight, dual: bool) -> Self {
        Self { highest_weight, dual }
    }
}

/// Linear combination of tuples of f-words, one word per factor.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorVector {
    factors: Vec<TensorFactor>,
    #[serde(with = "tuple_terms")]
    terms: BTreeMap<Vec<FWord>, QScalar>,
}

mod tuple_terms {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(terms: &BTreeMap<Vec<FWord>, QScalar>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(terms.iter())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<Vec<FWord>, QScalar>, D::Error> {
        let list: Vec<(Vec<FWord>, QScalar)> = Vec::deserialize(d)?;
        let mut out = BTreeMap::new();
        for (w, c) in list {
            if c.is_zero() || out.insert(w, c).is_some() {
                return Err(serde::de::Error::custom("zero or repeated tensor term"));
            }
        }
        Ok(out)
    }
}

impl TensorVector {
    pub fn zero(factors: Vec<TensorFactor>) -> Self {
        Self { factors, terms: BTreeMap::new() }
    }

    pub fn factors(&self) -> &[TensorFactor] {
        &self.factors
    }

    pub fn terms(&self) -> &BTreeMap<Vec<FWord>, QScalar> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, words: &[FWord]) -> QScalar {
        self.terms.get(words).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, words: Vec<FWord>, c: QScalar) {
        assert_eq!(words.len(), self.factors.len(), "tuple length must match the factor count");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&words) {
            Some(cur) => {
                *cur += &c;
                if cur.is_zero() {
                    self.terms.remove(&words);
                }
            }
            None => {
                self.terms.insert(words, c);
            }
        }
    }

    pub fn scale(&self, c: &QScalar) -> Self {
        let mut out = Self::zero(self.factors.clone());
        for (w, v) in &self.terms {
            out.add_term(w.clone(), v * c);
        }
        out
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, BraidError> {
        if self.factors != other.factors {
            return Err(BraidError::FactorMismatch);
        }
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, BraidError> {
        self.try_add(&other.scale(&QScalar::from_int(-1)))
    }

    /// Pure tensor product of module vectors.
    pub fn product(parts: &[ModuleVector]) -> Self {
        let factors =
            parts.iter().map(|p| TensorFactor::new(p.highest_weight().clone(), p.is_dual())).collect::<Vec<_>>();
        let mut acc: Vec<(Vec<FWord>, QScalar)> = vec![(Vec::new(), QScalar::one())];
        for p in parts {
            let mut next = Vec::new();
            for (ws, c) in &acc {
                for (w, d) in p.terms() {
                    let mut ws = ws.clone();
                    ws.push(w.clone());
                    next.push((ws, c * d));
                }
            }
            acc = next;
        }
        let mut out = Self::zero(factors);
        for (ws, c) in acc {
            out.add_term(ws, c);
        }
        out
    }

    /// Exchange the factors at `slot` and `slot + 1` in every term.
    pub fn swap(&self, slot: usize) -> Result<Self, BraidError> {
        if slot + 1 >= self.factors.len() {
            return Err(BraidError::SlotOutOfRange { slot, factors: self.factors.len() });
        }
        let mut factors = self.factors.clone();
        factors.swap(slot, slot + 1);
        let mut out = Self::zero(factors);
        for (w, c) in &self.terms {
            let mut w = w.clone();
            w.swap(slot, slot + 1);
            out.add_term(w, c.clone());
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("tensor vectors serialize")
    }

    /// Ratio `c` with `self = c * other`, if one exists as a Laurent sum.
    pub fn ratio_to(&self, other: &Self) -> Option<QScalar> {
        if self.factors != other.factors || self.terms.len() != other.terms.len() {
            return None;
        }
        let (w, a) = other.terms.iter().next()?;
        let b = self.terms.get(w)?;
        let r = crate::exactq::QFraction::new(b.clone(), a.clone()).ok()?;
        let r = r.as_scalar()?.clone();
        (&other.scale(&r) == self).then_some(r)
    }
}

impl fmt::Display for TensorVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (ws, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, "\n  + ")?;
            }
            write!(f, "({c})")?;
            for (slot, w) in ws.iter().enumerate() {
                let star = if self.factors[slot].dual { "*" } else { "" };
                let sep = if slot == 0 { " " } else { " ⊗ " };
                write!(f, "{sep}({w}){star}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TensorVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TensorVector[{self}]")
    }
}

fn k_exponent(hw: &Weight, w: &FWord, i: usize) -> Rational {
    let rd = RootData::new(hw.dim() - 2).expect("weights live in R^{n+2}");
    let shift: i64 = w.indices().map(|a| rd.cartan(a, i)).sum();
    (hw.pair_root(i) - rat(shift, 1)) * rat(1, 4)
}

fn single(f: &TensorFactor, w: &FWord) -> ModuleVector {
    ModuleVector::word(f.highest_weight.clone(), f.dual, w.clone(), QScalar::one())
}

/// Action of a generator through the iterated comultiplication
/// `Δ(f_i) = Σ_a K^{-1/2} ⊗ ... ⊗ f_i ⊗ ... ⊗ K^{1/2}` (and the same shape for `e_i`).
/// With `opposite` set, the opposite comultiplication is used.
pub fn coproduct_act_with(g: Generator, x: &TensorVector, opposite: bool) -> Result<TensorVector, BraidError> {
    let mut out = TensorVector::zero(x.factors.clone());
    for (ws, c) in &x.terms {
        match g {
            Generator::KHalf(i, s) => {
                let e: Rational = x.factors.iter().zip(ws).map(|(f, w)| k_exponent(&f.highest_weight, w, i)).sum();
                out.add_term(ws.clone(), c * &QScalar::q_pow_rat(e * rat(s as i64, 1)));
            }
            Generator::E(i) | Generator::F(i) => {
                let exps: Vec<Rational> =
                    x.factors.iter().zip(ws).map(|(f, w)| k_exponent(&f.highest_weight, w, i)).collect();
                for a in 0..ws.len() {
                    let moved = act(g, &single(&x.factors[a], &ws[a]))?;
                    if moved.is_zero() {
                        continue;
                    }
                    let mut e = Rational::from_integer(0.into());
                    for (b, eb) in exps.iter().enumerate() {
                        let before = b < a;
                        if b == a {
                            continue;
                        }
                        // Δ: slots before carry K^{-1/2}, slots after K^{1/2}; Δ^op reverses this.
                        if before != opposite {
                            e -= eb;
                        } else {
                            e += eb;
                        }
                    }
                    let scale = c * &QScalar::q_pow_rat(e);
                    for (w, d) in moved.terms() {
                        let mut nw = ws.clone();
                        nw[a] = w.clone();
                        out.add_term(nw, &scale * d);
                    }
                }
            }
        }
    }
    Ok(out)
}

pub fn coproduct_act(g: Generator, x: &TensorVector) -> Result<TensorVector, BraidError> {
    coproduct_act_with(g, x, false)
}

/// Componentwise image under `S ⊗ ... ⊗ S` of a tensor of non-dual factors.
pub fn tensor_dual_image(x: &TensorVector) -> Result<TensorVector, BraidError> {
    if x.factors.iter().any(|f| f.dual) {
        return Err(BraidError::Rep(crate::repcore::RepError::DualInput));
    }
    let mut forms: Vec<ShapovalovForm> = x.factors.iter().map(|f| ShapovalovForm::new(&f.highest_weight)).collect();
    let mut cache: HashMap<(usize, FWord), ModuleVector> = HashMap::new();
    let factors = x.factors.iter().map(|f| TensorFactor::new(f.highest_weight.clone(), true)).collect();
    let mut out = TensorVector::zero(factors);
    for (ws, c) in &x.terms {
        let mut parts = Vec::with_capacity(ws.len());
        for (slot, w) in ws.iter().enumerate() {
            let key = (slot, w.clone());
            if !cache.contains_key(&key) {
                let img = forms[slot].dual_image(&single(&x.factors[slot], w))?;
                cache.insert(key.clone(), img);
            }
            parts.push(cache[&key].clone());
        }
        let prod = TensorVector::product(&parts);
        for (t, d) in prod.terms {
            out.add_term(t, c * &d);
        }
    }
    Ok(out)
}

/// Zero test modulo the componentwise kernels of the contravariant form.
/// Dual vectors are compared exactly in the free dual.
pub fn is_zero_mod_kernel(x: &TensorVector) -> Result<bool, BraidError> {
    if x.is_zero() {
        return Ok(true);
    }
    if x.factors.iter().all(|f| !f.dual) {
        return Ok(tensor_dual_image(x)?.is_zero());
    }
    Ok(false)
}

/// `e_i x ≡ 0` for every listed root.
pub fn is_singular(x: &TensorVector, roots: &[usize]) -> Result<bool, BraidError> {
    for &i in roots {
        if !is_zero_mod_kernel(&coproduct_act(Generator::E(i), x)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}
