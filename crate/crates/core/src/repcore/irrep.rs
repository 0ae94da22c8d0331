use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use super::form::{words_of_weight, ShapovalovForm};
use super::module::{e_terms, Pairings};
use super::{FWord, ModuleVector, RepError, Weight};
use crate::exactq::{rat, ExactError, FracMatrix, QFraction, QScalar, Rational};

/// Letter content `l_0..l_n` of a weight `Λ - Σ l_i α_i`.
pub type Drop = Vec<u32>;

/// One weight space of an irreducible quotient: a word basis and its Gram matrix.
#[derive(Clone, Debug)]
pub struct IrrepBlock {
    pub basis: Vec<FWord>,
    pub gram: FracMatrix,
    pub gram_inv: FracMatrix,
}

impl IrrepBlock {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// A module with finite-dimensional weight spaces and matrices for the Chevalley generators.
///
/// Weight spaces are indexed by [`Drop`] vectors; only the roots in [`roots`](Self::roots) act.
pub trait WeightModule {
    fn highest_weight(&self) -> &Weight;
    fn roots(&self) -> &[usize];
    fn dim(&mut self, d: &Drop) -> Result<usize, RepError>;
    /// `f_i: V_d -> V_{d + e_i}`.
    fn f_matrix(&mut self, i: usize, d: &Drop) -> Result<FracMatrix, RepError>;
    /// `e_i: V_d -> V_{d - e_i}`; `d_i > 0` is required.
    fn e_matrix(&mut self, i: usize, d: &Drop) -> Result<FracMatrix, RepError>;
    /// Exponent `c` with `K_i^{1/2} = q^c` on `V_d`.
    fn k_half_exponent(&self, i: usize, d: &Drop) -> Rational;
}

/// Irreducible quotient `L(Λ) = M(Λ)/Ker S` for the subalgebra generated by a chosen set of roots,
/// realized on word bases with cached weight spaces.
#[derive(Debug)]
pub struct IrrepSpace {
    highest_weight: Weight,
    roots: Vec<usize>,
    pairings: Pairings,
    form: ShapovalovForm,
    blocks: HashMap<Drop, Rc<IrrepBlock>>,
}

pub fn add_root(d: &Drop, i: usize) -> Drop {
    let mut d = d.clone();
    d[i] += 1;
    d
}

pub fn sub_root(d: &Drop, i: usize) -> Option<Drop> {
    let mut d = d.clone();
    d[i] = d[i].checked_sub(1)?;
    Some(d)
}

impl IrrepSpace {
    pub fn new(highest_weight: &Weight, roots: &[usize]) -> Result<Self, RepError> {
        let pairings = Pairings::new(highest_weight);
        for &i in roots {
            pairings.root_data().check_index(i)?;
        }
        let mut roots = roots.to_vec();
        roots.sort_unstable();
        roots.dedup();
        Ok(Self {
            highest_weight: highest_weight.clone(),
            roots,
            form: ShapovalovForm::new(highest_weight),
            pairings,
            blocks: HashMap::new(),
        })
    }

    pub fn num_roots(&self) -> usize {
        self.pairings.root_data().num_roots()
    }

    pub fn zero_drop(&self) -> Drop {
        vec![0; self.num_roots()]
    }

    pub fn form(&mut self) -> &mut ShapovalovForm {
        &mut self.form
    }

    fn check_drop(&self, d: &Drop) -> Result<(), RepError> {
        if d.len() != self.num_roots() {
            return Err(RepError::Dimension(format!("drop vector of length {}", d.len())));
        }
        Ok(())
    }

    /// Weight space at `d`; the basis consists of pivot words among `f_i b`, `b` a basis word at `d - e_i`.
    pub fn block(&mut self, d: &Drop) -> Result<Rc<IrrepBlock>, RepError> {
        self.check_drop(d)?;
        if let Some(b) = self.blocks.get(d) {
            return Ok(b.clone());
        }
        let block = if d.iter().all(|&l| l == 0) {
            IrrepBlock { basis: vec![FWord::empty()], gram: FracMatrix::identity(1), gram_inv: FracMatrix::identity(1) }
        } else if d.iter().enumerate().any(|(i, &l)| l > 0 && !self.roots.contains(&i)) {
            empty_block()
        } else {
            let mut candidates = Vec::new();
            for &i in &self.roots.clone() {
                if let Some(prev) = sub_root(d, i) {
                    let pb = self.block(&prev)?;
                    for b in &pb.basis {
                        let w = b.prepend(i);
                        if !candidates.contains(&w) {
                            candidates.push(w);
                        }
                    }
                }
            }
            candidates.sort();
            let gram = to_frac(self.form.gram(&candidates));
            let pivots = gram.pivot_columns();
            let basis: Vec<FWord> = pivots.iter().map(|&c| candidates[c].clone()).collect();
            let g = to_frac(self.form.gram(&basis));
            let label = format!("{d:?}");
            let gram_inv = g.inverse(&label).map_err(RepError::Exact)?;
            IrrepBlock { basis, gram: g, gram_inv }
        };
        let rc = Rc::new(block);
        self.blocks.insert(d.clone(), rc.clone());
        Ok(rc)
    }

    /// Coordinates (modulo the kernel) of a vector supported at weight `d` in the block basis.
    pub fn coords(&mut self, d: &Drop, x: &ModuleVector) -> Result<Vec<QFraction>, RepError> {
        let block = self.block(d)?;
        let s: Vec<QFraction> = block
            .basis
            .iter()
            .map(|b| {
                let mut acc = QScalar::zero();
                for (w, c) in x.terms() {
                    let v = self.form.words(b, w);
                    if !v.is_zero() {
                        acc += &(c * &v);
                    }
                }
                QFraction::from(acc)
            })
            .collect();
        block.gram_inv.mul_vec(&s).map_err(RepError::Exact)
    }

    pub fn word_coords(&mut self, d: &Drop, w: &FWord) -> Result<Vec<QFraction>, RepError> {
        let x = ModuleVector::word(self.highest_weight.clone(), false, w.clone(), QScalar::one());
        self.coords(d, &x)
    }

    /// Coordinates of every word of weight `d`.
    pub fn all_word_coords(&mut self, d: &Drop) -> Result<BTreeMap<FWord, Vec<QFraction>>, RepError> {
        let mut out = BTreeMap::new();
        for w in words_of_weight(d) {
            let c = self.word_coords(d, &w)?;
            out.insert(w, c);
        }
        Ok(out)
    }

    /// Dimensions of all nonzero weight spaces with total height at most `max_height`.
    pub fn weight_multiplicities(&mut self, max_height: u32) -> Result<BTreeMap<Drop, usize>, RepError> {
        let mut out = BTreeMap::new();
        let mut frontier = vec![self.zero_drop()];
        out.insert(self.zero_drop(), 1);
        for _ in 0..max_height {
            let mut next = Vec::new();
            for d in &frontier {
                for &i in &self.roots.clone() {
                    let nd = add_root(d, i);
                    if out.contains_key(&nd) {
                        continue;
                    }
                    let dim = self.block(&nd)?.dim();
                    if dim > 0 {
                        out.insert(nd.clone(), dim);
                        next.push(nd);
                    }
                }
            }
            frontier = next;
        }
        Ok(out)
    }
}

fn empty_block() -> IrrepBlock {
    IrrepBlock { basis: vec![], gram: FracMatrix::zeros(0, 0), gram_inv: FracMatrix::zeros(0, 0) }
}

fn to_frac(m: Vec<Vec<QScalar>>) -> FracMatrix {
    if m.is_empty() {
        return FracMatrix::zeros(0, 0);
    }
    FracMatrix::from_rows(m.into_iter().map(|r| r.into_iter().map(QFraction::from).collect()).collect())
        .expect("square gram matrix")
}

impl WeightModule for IrrepSpace {
    fn highest_weight(&self) -> &Weight {
        &self.highest_weight
    }

    fn roots(&self) -> &[usize] {
        &self.roots
    }

    fn dim(&mut self, d: &Drop) -> Result<usize, RepError> {
        Ok(self.block(d)?.dim())
    }

    fn f_matrix(&mut self, i: usize, d: &Drop) -> Result<FracMatrix, RepError> {
        let src = self.block(d)?;
        let tgt_drop = add_root(d, i);
        let tgt = self.block(&tgt_drop)?;
        let mut m = FracMatrix::zeros(tgt.dim(), src.dim());
        for (c, b) in src.basis.iter().enumerate() {
            let col = self.word_coords(&tgt_drop, &b.prepend(i))?;
            for (r, v) in col.into_iter().enumerate() {
                m.set(r, c, v);
            }
        }
        Ok(m)
    }

    fn e_matrix(&mut self, i: usize, d: &Drop) -> Result<FracMatrix, RepError> {
        let tgt_drop = sub_root(d, i).ok_or(RepError::Dimension("e_i below the top weight".into()))?;
        let src = self.block(d)?;
        let tgt = self.block(&tgt_drop)?;
        let mut m = FracMatrix::zeros(tgt.dim(), src.dim());
        for (c, b) in src.basis.iter().enumerate() {
            let mut x = ModuleVector::zero(self.highest_weight.clone(), false);
            for (coef, w) in e_terms(&self.pairings, i, b) {
                x.add_term(w, coef);
            }
            let col = self.coords(&tgt_drop, &x)?;
            for (r, v) in col.into_iter().enumerate() {
                m.set(r, c, v);
            }
        }
        Ok(m)
    }

    fn k_half_exponent(&self, i: usize, d: &Drop) -> Rational {
        self.pairings.drop_pairing(d, i) * rat(1, 4)
    }
}

/// The restricted dual `L(Λ)*` in the basis dual to the word basis of [`IrrepSpace`].
///
/// With `(g φ)(x) = φ(τ(g) x)`, `e_i` acts by the transpose of `f_i` and `f_i` by the transpose of `e_i`.
#[derive(Debug)]
pub struct DualIrrep {
    inner: IrrepSpace,
}

impl DualIrrep {
    pub fn new(inner: IrrepSpace) -> Self {
        Self { inner }
    }

    pub fn inner(&mut self) -> &mut IrrepSpace {
        &mut self.inner
    }
}

impl WeightModule for DualIrrep {
    fn highest_weight(&self) -> &Weight {
        &self.inner.highest_weight
    }

    fn roots(&self) -> &[usize] {
        &self.inner.roots
    }

    fn dim(&mut self, d: &Drop) -> Result<usize, RepError> {
        self.inner.dim(d)
    }

    fn f_matrix(&mut self, i: usize, d: &Drop) -> Result<FracMatrix, RepError> {
        Ok(self.inner.e_matrix(i, &add_root(d, i))?.transpose())
    }

    fn e_matrix(&mut self, i: usize, d: &Drop) -> Result<FracMatrix, RepError> {
        let below = sub_root(d, i).ok_or(RepError::Dimension("e_i below the top weight".into()))?;
        Ok(self.inner.f_matrix(i, &below)?.transpose())
    }

    fn k_half_exponent(&self, i: usize, d: &Drop) -> Rational {
        self.inner.k_half_exponent(i, d)
    }
}

impl From<ExactError> for RepError {
    fn from(e: ExactError) -> Self {
        RepError::Exact(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repcore::RootData;

    #[test]
    fn vector_representation_dimensions() {
        for n in 1..=3 {
            let rd = RootData::new(n).unwrap();
            let roots: Vec<usize> = (1..=n).collect();
            let mut l = IrrepSpace::new(&rd.eta(1), &roots).unwrap();
            let mult = l.weight_multiplicities(n as u32 + 2).unwrap();
            assert_eq!(mult.values().sum::<usize>(), n + 1);
            assert!(mult.values().all(|&m| m == 1));
        }
    }

    #[test]
    fn generic_weight_has_verma_dimensions() {
        let rd = RootData::new(2).unwrap();
        let mut l = IrrepSpace::new(&rd.generic_lambda(), &[1, 2]).unwrap();
        // Kostant partition function of α_1 + α_2 is 2
        assert_eq!(l.dim(&vec![0, 1, 1]).unwrap(), 2);
        assert_eq!(l.dim(&vec![0, 2, 1]).unwrap(), 2);
    }

    #[test]
    fn commutator_relation_on_blocks() {
        let rd = RootData::new(2).unwrap();
        let mut l = IrrepSpace::new(&rd.generic_lambda(), &[1, 2]).unwrap();
        let d = vec![0, 1, 1];
        for i in [1, 2] {
            let ef = l.e_matrix(i, &add_root(&d, i)).unwrap().mul(&l.f_matrix(i, &d).unwrap()).unwrap();
            let fe = l.f_matrix(i, &sub_root(&d, i).unwrap()).unwrap().mul(&l.e_matrix(i, &d).unwrap()).unwrap();
            let c = l.k_half_exponent(i, &d) * rat(2, 1);
            let k = QFraction::from(QScalar::q_pow_rat(c.clone()) - QScalar::q_pow_rat(-c));
            let dim = l.dim(&d).unwrap();
            for r in 0..dim {
                for s in 0..dim {
                    let lhs = ef.get(r, s) - fe.get(r, s);
                    let rhs = if r == s { k.clone() } else { QFraction::zero() };
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
