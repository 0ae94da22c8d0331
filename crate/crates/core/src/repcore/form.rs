use std::collections::HashMap;

use num_traits::{Signed, Zero};

use super::module::{e_terms, root_data_for, Pairings};
use super::{FWord, ModuleVector, RepError, Weight};
use crate::exactq::{rank, FracMatrix, QFraction, QScalar, Rational};

/// All distinct words with the given letter content, in lexicographic order.
pub fn words_of_weight(content: &[u32]) -> Vec<FWord> {
    fn rec(remaining: &mut [u32], prefix: &mut Vec<usize>, out: &mut Vec<FWord>) {
        if remaining.iter().all(|&c| c == 0) {
            out.push(FWord::new(prefix));
            return;
        }
        for i in 0..remaining.len() {
            if remaining[i] > 0 {
                remaining[i] -= 1;
                prefix.push(i);
                rec(remaining, prefix, out);
                prefix.pop();
                remaining[i] += 1;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut content.to_vec(), &mut Vec::new(), &mut out);
    out
}

/// Memoized contravariant form on free words for a fixed highest weight,
/// via `S(v, v) = 1` and `S(f_i x, y) = S(x, e_i y)`.
#[derive(Clone, Debug)]
pub struct ShapovalovForm {
    highest_weight: Weight,
    pairings: Pairings,
    memo: HashMap<(FWord, FWord), QScalar>,
}

impl ShapovalovForm {
    pub fn new(highest_weight: &Weight) -> Self {
        Self { highest_weight: highest_weight.clone(), pairings: Pairings::new(highest_weight), memo: HashMap::new() }
    }

    pub fn highest_weight(&self) -> &Weight {
        &self.highest_weight
    }

    pub fn num_roots(&self) -> usize {
        self.pairings.root_data().num_roots()
    }

    /// `S(w, u)` for two words.
    pub fn words(&mut self, w: &FWord, u: &FWord) -> QScalar {
        if w.len() != u.len() {
            return QScalar::zero();
        }
        if w.is_empty() {
            return QScalar::one();
        }
        let nr = self.num_roots();
        if w.content(nr) != u.content(nr) {
            return QScalar::zero();
        }
        let key = if w <= u { (w.clone(), u.clone()) } else { (u.clone(), w.clone()) };
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let (a, b) = (&key.0, &key.1);
        let i = a.letter(0);
        let rest = a.tail();
        let mut acc = QScalar::zero();
        for (c, word) in e_terms(&self.pairings, i, b) {
            let s = self.words(&rest, &word);
            if !s.is_zero() {
                acc += &(&c * &s);
            }
        }
        self.memo.insert(key, acc.clone());
        acc
    }

    /// Bilinear extension to module vectors.
    pub fn pair(&mut self, x: &ModuleVector, y: &ModuleVector) -> Result<QScalar, RepError> {
        if x.highest_weight() != &self.highest_weight || y.highest_weight() != &self.highest_weight {
            return Err(RepError::HighestWeightMismatch);
        }
        if x.is_dual() || y.is_dual() {
            return Err(RepError::DualInput);
        }
        let mut acc = QScalar::zero();
        for (w, c) in x.terms() {
            for (u, d) in y.terms() {
                let s = self.words(w, u);
                if !s.is_zero() {
                    acc += &(&(c * d) * &s);
                }
            }
        }
        Ok(acc)
    }

    /// Image of `x` in `M(Λ)*`: the coefficient of `(w)*` is `S(x, w)`.
    pub fn dual_image(&mut self, x: &ModuleVector) -> Result<ModuleVector, RepError> {
        if x.is_dual() {
            return Err(RepError::DualInput);
        }
        if x.highest_weight() != &self.highest_weight {
            return Err(RepError::HighestWeightMismatch);
        }
        let mut out = ModuleVector::zero(self.highest_weight.clone(), true);
        for (content, part) in x.components() {
            for u in words_of_weight(&content) {
                let mut acc = QScalar::zero();
                for (w, c) in part.terms() {
                    let s = self.words(w, &u);
                    if !s.is_zero() {
                        acc += &(c * &s);
                    }
                }
                out.add_term(u, acc);
            }
        }
        Ok(out)
    }

    /// True iff `x` lies in the kernel of the form.
    pub fn in_kernel(&mut self, x: &ModuleVector) -> Result<bool, RepError> {
        Ok(self.dual_image(x)?.is_zero())
    }

    pub fn gram(&mut self, basis: &[FWord]) -> Vec<Vec<QScalar>> {
        basis.iter().map(|a| basis.iter().map(|b| self.words(a, b)).collect()).collect()
    }
}

/// `S(x, y)` with a fresh memo table.
pub fn contravariant_form(x: &ModuleVector, y: &ModuleVector) -> Result<QScalar, RepError> {
    if x.highest_weight() != y.highest_weight() {
        return Err(RepError::HighestWeightMismatch);
    }
    ShapovalovForm::new(x.highest_weight()).pair(x, y)
}

/// Gram matrix `S(w_a, w_b)` on a list of words of weight `μ`.
pub fn gram_matrix(lambda: &Weight, mu: &Weight, basis: &[FWord]) -> Result<Vec<Vec<QScalar>>, RepError> {
    for w in basis {
        if &super::weight_of(w, lambda) != mu {
            return Err(RepError::WrongWeight(w.clone()));
        }
    }
    Ok(ShapovalovForm::new(lambda).gram(basis))
}

/// Rank of a Gram matrix over the fraction field.
pub fn gram_rank(gram: &[Vec<QScalar>]) -> usize {
    let rows = gram.iter().map(|r| r.iter().cloned().map(QFraction::from).collect()).collect();
    rank(&FracMatrix::from_rows(rows).expect("square gram matrix"))
}

/// One weight space of a Verma module: its word count and the rank of its Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct GramRankRow {
    pub drop: Vec<u32>,
    pub words: usize,
    pub rank: usize,
}

/// Gram ranks on every weight space `Λ - Σ d_i α_i` with `d` supported on `roots` and height at most
/// `max_height`; the ranks sum to the dimension of that part of the irreducible quotient.
pub fn gram_rank_table(lambda: &Weight, roots: &[usize], max_height: u32) -> Vec<GramRankRow> {
    let num_roots = lambda.dim() - 1;
    let mut form = ShapovalovForm::new(lambda);
    let mut out = Vec::new();
    let mut drop = vec![0u32; num_roots];
    fn rec(
        pos: usize,
        left: u32,
        roots: &[usize],
        drop: &mut Vec<u32>,
        form: &mut ShapovalovForm,
        out: &mut Vec<GramRankRow>,
    ) {
        if pos == roots.len() {
            let basis = words_of_weight(drop);
            let rank = gram_rank(&form.gram(&basis));
            out.push(GramRankRow { drop: drop.clone(), words: basis.len(), rank });
            return;
        }
        for c in 0..=left {
            drop[roots[pos]] = c;
            rec(pos + 1, left - c, roots, drop, form, out);
        }
        drop[roots[pos]] = 0;
    }
    rec(0, max_height, roots, &mut drop, &mut form, &mut out);
    out.sort_by(|a, b| a.drop.iter().sum::<u32>().cmp(&b.drop.iter().sum::<u32>()).then(a.drop.cmp(&b.drop)));
    out
}

/// Equality in the irreducible quotient `L(Λ)`: `S(x - y, w) = 0` for every word `w`.
#[allow(non_snake_case)]
pub fn equal_in_L(x: &ModuleVector, y: &ModuleVector) -> Result<bool, RepError> {
    let diff = x.try_sub(y)?;
    if diff.is_dual() {
        return Err(RepError::DualInput);
    }
    ShapovalovForm::new(x.highest_weight()).in_kernel(&diff)
}

pub fn dual_image(x: &ModuleVector) -> Result<ModuleVector, RepError> {
    ShapovalovForm::new(x.highest_weight()).dual_image(x)
}

/// Letter content of the weight `μ` below `Λ`, if `Λ - μ` is a nonnegative integer root combination.
pub fn content_of(lambda: &Weight, mu: &Weight) -> Option<Vec<u32>> {
    let rd = root_data_for(lambda);
    // Λ - μ = Σ l_i (g_i - g_{i+1}); l_i is the running sum of coordinates of Λ - μ.
    let diff = lambda - mu;
    let mut content = Vec::with_capacity(rd.num_roots());
    let mut running = Rational::zero();
    for i in 0..rd.num_roots() {
        running += &diff.coords()[i];
        if !running.is_integer() || running.is_negative() {
            return None;
        }
        content.push(u32::try_from(running.to_integer()).ok()?);
    }
    running += &diff.coords()[rd.num_roots()];
    running.is_zero().then_some(content)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactq::rat;
    use crate::repcore::{act_e, act_f, RootData};

    fn b1() -> QScalar {
        QScalar::bracket(&rat(1, 1))
    }

    #[test]
    fn enumerates_words() {
        let w = words_of_weight(&[0, 2, 1]);
        let got: Vec<Vec<usize>> = w.iter().map(|w| w.indices().collect()).collect();
        assert_eq!(got, vec![vec![1, 1, 2], vec![1, 2, 1], vec![2, 1, 1]]);
    }

    #[test]
    fn form_examples() {
        let rd = RootData::new(2).unwrap();
        let l = rd.lambda_point();
        let v = ModuleVector::highest(l.clone(), false);
        assert_eq!(contravariant_form(&v, &v).unwrap(), QScalar::one());
        let f1 = act_f(1, &v).unwrap();
        let f2 = act_f(2, &v).unwrap();
        assert_eq!(contravariant_form(&f1, &f1).unwrap(), b1());
        assert!(contravariant_form(&f1, &f2).unwrap().is_zero());
    }

    #[test]
    fn gram_examples() {
        let rd = RootData::new(2).unwrap();
        let l = rd.lambda_point();
        let g = gram_matrix(&l, &l, &[FWord::empty()]).unwrap();
        assert_eq!(g, vec![vec![QScalar::one()]]);
        let mu = &l - &rd.simple_root(1);
        assert_eq!(gram_matrix(&l, &mu, &[FWord::new(&[1])]).unwrap(), vec![vec![b1()]]);
        let mu2 = &mu - &rd.simple_root(2);
        let g2 = gram_matrix(&l, &mu2, &[FWord::new(&[2, 1]), FWord::new(&[1, 2])]).unwrap();
        assert_eq!(gram_rank(&g2), 1);
        assert_eq!(g2[0][0], b1().pow(2));
        assert!(g2[1][1].is_zero() && g2[0][1].is_zero());
        assert!(gram_matrix(&l, &mu, &[FWord::new(&[2])]).is_err());
    }

    #[test]
    fn equality_modulo_kernel() {
        let rd = RootData::new(2).unwrap();
        let l = rd.generic_lambda();
        let v = ModuleVector::highest(l.clone(), false);
        let f1 = act_f(1, &v).unwrap();
        assert!(equal_in_L(&f1, &f1).unwrap());
        assert!(!equal_in_L(&f1, &f1.scale(&QScalar::from_int(2))).unwrap());
        // e_1 f_2 f_1 v is [1] f_2 v, which vanishes in L(g_1 - g_0)
        let lp = rd.lambda_point();
        let w = ModuleVector::word(lp.clone(), false, FWord::new(&[2, 1]), QScalar::one());
        let e = act_e(1, &w).unwrap();
        assert!(!e.is_zero());
        assert!(equal_in_L(&e, &ModuleVector::zero(lp, false)).unwrap());
    }

    #[test]
    fn serre_relation_vanishes_in_quotient() {
        let rd = RootData::new(2).unwrap();
        let l = rd.generic_lambda();
        let two = &QScalar::q_pow(1, 2) + &QScalar::q_pow(-1, 2);
        let mut s = ModuleVector::zero(l.clone(), false);
        s.add_term(FWord::new(&[1, 1, 2]), QScalar::one());
        s.add_term(FWord::new(&[1, 2, 1]), -two);
        s.add_term(FWord::new(&[2, 1, 1]), QScalar::one());
        assert!(equal_in_L(&s, &ModuleVector::zero(l, false)).unwrap());
    }

    #[test]
    fn dual_image_examples() {
        let rd = RootData::new(1).unwrap();
        let l = rd.lambda_point();
        let v = ModuleVector::highest(l.clone(), false);
        assert_eq!(dual_image(&v).unwrap(), ModuleVector::highest(l.clone(), true));
        let f1 = act_f(1, &v).unwrap();
        assert_eq!(dual_image(&f1).unwrap(), ModuleVector::word(l.clone(), true, FWord::new(&[1]), b1()));
        assert!(dual_image(&ModuleVector::zero(l, false)).unwrap().is_zero());
    }

    #[test]
    fn content_recovers_drop() {
        let rd = RootData::new(2).unwrap();
        let l = rd.generic_lambda();
        let mu = &(&l - &rd.simple_root(1)) - &rd.simple_root(2);
        assert_eq!(content_of(&l, &mu), Some(vec![0, 1, 1]));
        assert_eq!(content_of(&l, &(&l + &rd.simple_root(1))), None);
    }

    #[test]
    fn vector_representation_from_gram_ranks() {
        for n in 1..=3 {
            let rd = crate::repcore::RootData::new(n).unwrap();
            let roots: Vec<usize> = (1..=n).collect();
            let table = gram_rank_table(&rd.eta(1), &roots, n as u32 + 1);
            assert_eq!(table.iter().map(|r| r.rank).sum::<usize>(), n + 1, "n={n}");
            assert!(table.iter().all(|r| r.rank <= r.words));
        }
    }
}
