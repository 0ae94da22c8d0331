use serde::{Deserialize, Serialize};

use super::diagram::{coxeter_length, Permutation};
use super::CycleError;
use crate::braiding::{build_r, default_depth, is_singular, BraidOperator, TensorVector, DEFAULT_TRIANGULARITY};
use crate::exactq::{rat, QScalar, Rational};
use crate::repcore::{FWord, ModuleVector, RootData, Weight};

/// Which normalization of the cycle vector is stored.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CycleForm {
    /// Tensor of contravariant duals of string vectors.
    Dual,
    /// Tensor of string vectors, divided by `[1]^{bracket_power}`.
    Plain,
}

impl CycleForm {
    pub fn from_index(i: u8) -> Result<Self, CycleError> {
        match i {
            1 => Ok(Self::Dual),
            2 => Ok(Self::Plain),
            _ => Err(CycleError::InvalidParameter(format!("form must be 1 or 2, got {i}"))),
        }
    }
}

/// The cycle vector in `L(Λ(0)) ⊗ L(Λ)^{⊗(n+1)}` (or its dual).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleVector {
    pub n: usize,
    pub form: CycleForm,
    #[serde(with = "crate::exactq::rational_serde")]
    pub k: Rational,
    pub lambda: Weight,
    pub lambda0: Weight,
    /// The represented vector is `vector / [1]^{bracket_power}`.
    pub bracket_power: u32,
    pub vector: TensorVector,
}

/// `Σ_w (-1)^{l(w)} q^{(n(n+1)/2 - 2 l(w))/4} v_0 ⊗ s_{w(1)-1} v_1 ⊗ ... ⊗ s_{w(n+1)-1} v_{n+1}`,
/// with `s_j = f_j ... f_1` and factor weights `Λ(0) = κλ - δ`, `Λ = g_1 - g_0`.
pub fn encode_cycle(n: usize, form: CycleForm) -> Result<CycleVector, CycleError> {
    let rd = RootData::new(n)?;
    let k = rat(1, 2);
    let lambda = rd.generic_lambda();
    let lambda0 = rd.lambda_zero(&lambda, &k);
    let point = rd.lambda_point();
    let dual = form == CycleForm::Dual;
    let m = (n * (n + 1) / 2) as i64;
    let mut parts = vec![ModuleVector::highest(lambda0.clone(), dual)];
    for _ in 0..=n {
        parts.push(ModuleVector::highest(point.clone(), dual));
    }
    let mut vector = TensorVector::zero(TensorVector::product(&parts).factors().to_vec());
    for w in Permutation::all(n + 1) {
        let l = coxeter_length(&w) as i64;
        let sign = if l % 2 == 0 { 1 } else { -1 };
        let c = QScalar::q_pow(m - 2 * l, 4).scale(&rat(sign, 1));
        let mut words = vec![FWord::empty()];
        words.extend(w.images().iter().map(|&a| FWord::string(a - 1)));
        vector.add_term(words, c);
    }
    let bracket_power = if dual { 0 } else { m as u32 };
    Ok(CycleVector { n, form, k, lambda, lambda0, bracket_power, vector })
}

/// `e_i v = 0` for `i = 0..n`, modulo the Gram kernels for the plain form and exactly for the dual form.
pub fn singular_check(v: &CycleVector) -> Result<bool, CycleError> {
    let roots: Vec<usize> = (0..=v.n).collect();
    Ok(is_singular(&v.vector, &roots)?)
}

/// The R-matrix used to braid two adjacent `Λ` factors of a cycle vector.
pub fn cycle_braid_operator(n: usize) -> Result<BraidOperator, CycleError> {
    let point = RootData::new(n)?.lambda_point();
    Ok(build_r(&point, &point, default_depth(n), DEFAULT_TRIANGULARITY)?)
}

fn check_slot(v: &CycleVector, slot: usize) -> Result<(), CycleError> {
    if slot == 0 {
        return Err(CycleError::ForbiddenSlot);
    }
    if slot + 1 > v.n + 1 {
        return Err(CycleError::InvalidParameter(format!("slot {slot} out of range for n = {}", v.n)));
    }
    Ok(())
}

/// Eigenvalue of `PR` on the factors `slot, slot + 1` (both `Λ`-factors, `slot ≥ 1`).
pub fn braid_eigen_check(v: &CycleVector, slot: usize, r: &mut BraidOperator) -> Result<QScalar, CycleError> {
    check_slot(v, slot)?;
    let image = r.apply_pr(slot, &v.vector)?;
    image.ratio_to(&v.vector).ok_or_else(|| CycleError::NotEigenvector { slot, residual: image.to_string() })
}

/// Apply `PR` at each listed slot in turn.
pub fn apply_braid_word(v: &CycleVector, slots: &[usize], r: &mut BraidOperator) -> Result<TensorVector, CycleError> {
    let mut x = v.vector.clone();
    for &s in slots {
        check_slot(v, s)?;
        x = r.apply_pr(s, &x)?;
    }
    Ok(x)
}

/// Reading of the first-factor strings in the two-factor vertex vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WordOrder {
    /// `f_{p+1} ... f_{s-1} v_0`: the root `α_{s-1}` is applied first.
    Reversed,
    /// `f_{s-1} ... f_{p+1} v_0`: the root `α_{p+1}` is applied first.
    AsPrinted,
}

/// Singular vector in `L(λ)* ⊗ L(η_1)*` of weight `λ + h_s`:
///
/// `Σ_{p=0}^{s-1} c_p (u_p v_0)* ⊗ (f_p ... f_1 v_1)*` where `u_p` uses the roots `p+1..s-1` and
/// `c_p = (-1)^{s-p-1} q^{-(s-p-2)/4 + p/4 + (λ, -Σ_{i=p+1}^{s-1} α_i)/4}` for `p < s-1`,
/// `c_{s-1} = q^{(s-1)/4}`.
pub fn encode_chain_vertex(lambda: &Weight, s: usize, order: WordOrder) -> Result<TensorVector, CycleError> {
    let n = lambda
        .dim()
        .checked_sub(2)
        .filter(|&n| n >= 1)
        .ok_or_else(|| CycleError::InvalidParameter("weight dimension".into()))?;
    if s < 2 || s > n + 1 {
        return Err(CycleError::InvalidParameter(format!("s = {s} must lie in 2..={}", n + 1)));
    }
    let rd = RootData::new(n)?;
    let eta = rd.eta(1);
    let mut out = TensorVector::product(&[
        ModuleVector::highest(lambda.clone(), true),
        ModuleVector::highest(eta.clone(), true),
    ]);
    out = out.scale(&QScalar::zero());
    for p in 0..s {
        let idx: Vec<usize> = match order {
            WordOrder::Reversed => (p + 1..s).collect(),
            WordOrder::AsPrinted => (p + 1..s).rev().collect(),
        };
        let c = if p == s - 1 {
            QScalar::q_pow((s - 1) as i64, 4)
        } else {
            let pair: Rational = (p + 1..s).map(|i| -lambda.pair_root(i)).sum();
            let e = rat(-((s - p) as i64 - 2), 4) + rat(p as i64, 4) + pair * rat(1, 4);
            let sign = if (s - p - 1).is_multiple_of(2) { 1 } else { -1 };
            QScalar::q_pow_rat(e).scale(&rat(sign, 1))
        };
        out.add_term(vec![FWord::new(&idx), FWord::string(p)], c);
    }
    Ok(out)
}

/// `e_i` annihilates the vertex vector for every `i = 0..n`.
pub fn chain_vertex_singular(v: &TensorVector) -> Result<bool, CycleError> {
    let n = v.factors()[0].highest_weight.dim() - 2;
    let roots: Vec<usize> = (0..=n).collect();
    Ok(is_singular(v, &roots)?)
}

/// Highest weights `Λ0 + h_1, ..., Λ0 + h_{n+1}` of the summands of `L(Λ0) ⊗ L(η_1)`.
pub fn decomposition_dims(lambda0: &Weight, n: usize) -> Result<Vec<Weight>, CycleError> {
    let rd = RootData::new(n)?;
    if lambda0.dim() != rd.ambient_dim() {
        return Err(CycleError::InvalidParameter("weight dimension does not match n".into()));
    }
    Ok((1..=n + 1).map(|a| lambda0 + &rd.h(a)).collect())
}

/// Number of sequences `(a_1, ..., a_{n+1})` with `Σ h_{a_i} = 0`, i.e. paths through
/// `n+1` successive vector factors that return to the starting weight.
pub fn path_count(n: usize) -> Result<usize, CycleError> {
    if n > 6 {
        return Err(CycleError::InvalidParameter(format!("path enumeration is limited to n ≤ 6, got {n}")));
    }
    let rd = RootData::new(n)?;
    let hs: Vec<Weight> = (1..=n + 1).map(|a| rd.h(a)).collect();
    let m = n + 1;
    let zero = Weight::zero(rd.ambient_dim());
    let mut count = 0;
    let mut digits = vec![0usize; m];
    loop {
        let sum = digits.iter().fold(zero.clone(), |acc, &a| &acc + &hs[a]);
        if sum == zero {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == m {
                return Ok(count);
            }
            digits[k] += 1;
            if digits[k] < m {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braiding::tensor_dual_image;

    #[test]
    fn n1_terms() {
        let v = encode_cycle(1, CycleForm::Dual).unwrap();
        assert_eq!(v.vector.len(), 2);
        let id = vec![FWord::empty(), FWord::empty(), FWord::string(1)];
        let sw = vec![FWord::empty(), FWord::string(1), FWord::empty()];
        assert_eq!(v.vector.coeff(&id), QScalar::q_pow(1, 4));
        assert_eq!(v.vector.coeff(&sw), -QScalar::q_pow(-1, 4));
    }

    #[test]
    fn n2_exponents() {
        let v = encode_cycle(2, CycleForm::Dual).unwrap();
        let mut e: Vec<Rational> = v.vector.terms().values().map(|c| c.max_exponent().unwrap().clone()).collect();
        e.sort();
        let want: Vec<Rational> = [-3, -1, -1, 1, 1, 3].iter().map(|&x| rat(x, 4)).collect();
        assert_eq!(e, want);
    }

    #[test]
    fn forms_related_by_dual_image() {
        for n in 1..=2 {
            let f1 = encode_cycle(n, CycleForm::Dual).unwrap();
            let f2 = encode_cycle(n, CycleForm::Plain).unwrap();
            let b = QScalar::bracket(&rat(1, 1)).pow(f2.bracket_power);
            assert_eq!(tensor_dual_image(&f2.vector).unwrap(), f1.vector.scale(&b));
        }
    }

    #[test]
    fn singular_small() {
        for form in [CycleForm::Dual, CycleForm::Plain] {
            assert!(singular_check(&encode_cycle(1, form).unwrap()).unwrap());
        }
        let mut v = encode_cycle(1, CycleForm::Dual).unwrap();
        let keep = vec![FWord::empty(), FWord::empty(), FWord::string(1)];
        let mut single = TensorVector::zero(v.vector.factors().to_vec());
        single.add_term(keep.clone(), v.vector.coeff(&keep));
        v.vector = single;
        assert!(!singular_check(&v).unwrap());
    }

    #[test]
    fn braiding_n1() {
        let v = encode_cycle(1, CycleForm::Dual).unwrap();
        let mut r = cycle_braid_operator(1).unwrap();
        assert_eq!(braid_eigen_check(&v, 1, &mut r).unwrap(), QScalar::from_int(-1));
        assert_eq!(apply_braid_word(&v, &[1, 1], &mut r).unwrap(), v.vector);
        assert!(matches!(braid_eigen_check(&v, 0, &mut r), Err(CycleError::ForbiddenSlot)));
    }

    #[test]
    fn chain_vertex_two() {
        let rd = RootData::new(2).unwrap();
        let l = rd.generic_lambda();
        let v = encode_chain_vertex(&l, 2, WordOrder::Reversed).unwrap();
        assert_eq!(v.len(), 2);
        assert!(chain_vertex_singular(&v).unwrap());
        let v3 = encode_chain_vertex(&l, 3, WordOrder::Reversed).unwrap();
        assert_eq!(v3.len(), 3);
        assert!(chain_vertex_singular(&v3).unwrap());
        let printed = encode_chain_vertex(&l, 3, WordOrder::AsPrinted).unwrap();
        assert!(!chain_vertex_singular(&printed).unwrap());
        assert!(encode_chain_vertex(&l, 1, WordOrder::Reversed).is_err());
    }

    #[test]
    fn decomposition_and_paths() {
        let rd = RootData::new(1).unwrap();
        let l0 = rd.lambda_zero(&rd.generic_lambda(), &rat(1, 2));
        let d = decomposition_dims(&l0, 1).unwrap();
        assert_eq!(d, vec![&l0 + &rd.h(1), &l0 + &rd.h(2)]);
        assert_eq!(path_count(1).unwrap(), 2);
        assert_eq!(path_count(2).unwrap(), 6);
        assert_eq!(path_count(3).unwrap(), 24);
    }
}
