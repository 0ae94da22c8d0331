use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use serde::Serialize;
use serde_json::json;

use super::tensor::{TensorFactor, TensorVector};
use super::BraidError;
use crate::exactq::{rat, solve_linear, FracMatrix, QFraction, QScalar, Rational};
use crate::registry::{Registry, Strategy};
use crate::repcore::{
    add_root, sub_root, words_of_weight, DualIrrep, Drop, FWord, IrrepSpace, ModuleVector, RootData, WeightModule,
    Weight,
};

type PairTerms<C> = Vec<((FWord, FWord), C)>;

/// Which off-diagonal components of a weight block the R-matrix may populate.
pub trait Triangularity: Strategy {
    /// Whether an entry may map a component whose first factor sits at drop `src`
    /// to a component whose first factor sits at drop `tgt` (`src != tgt`).
    fn allows(&self, src: &Drop, tgt: &Drop) -> bool;
}

/// Correction terms raise the first factor and lower the second.
pub struct RaiseFirst;
/// Correction terms raise the second factor and lower the first.
pub struct RaiseSecond;

impl Strategy for RaiseFirst {
    fn name(&self) -> &'static str {
        "raise-first"
    }
    fn description(&self) -> &'static str {
        "off-diagonal terms move weight from the second factor to the first"
    }
}

impl Triangularity for RaiseFirst {
    fn allows(&self, src: &Drop, tgt: &Drop) -> bool {
        tgt.iter().zip(src).all(|(t, s)| t <= s)
    }
}

impl Strategy for RaiseSecond {
    fn name(&self) -> &'static str {
        "raise-second"
    }
    fn description(&self) -> &'static str {
        "off-diagonal terms move weight from the first factor to the second"
    }
}

impl Triangularity for RaiseSecond {
    fn allows(&self, src: &Drop, tgt: &Drop) -> bool {
        tgt.iter().zip(src).all(|(t, s)| t >= s)
    }
}

pub const DEFAULT_TRIANGULARITY: &str = "raise-first";

pub fn triangularity_registry() -> Registry<dyn Triangularity> {
    let mut r: Registry<dyn Triangularity> = Registry::new("triangularity convention");
    r.register(Box::new(RaiseFirst));
    r.register(Box::new(RaiseSecond));
    r
}

/// One component `V1[first] ⊗ V2[second]` of a tensor weight block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockPart {
    pub first: Drop,
    pub second: Drop,
    pub dim1: usize,
    pub dim2: usize,
    pub offset: usize,
}

impl BlockPart {
    pub fn index(&self, a: usize, b: usize) -> usize {
        self.offset + a * self.dim2 + b
    }
}

/// The R-matrix on the tensor weight space at total drop `drop`.
#[derive(Clone, Debug, Serialize)]
pub struct RBlock {
    pub drop: Drop,
    pub parts: Vec<BlockPart>,
    pub matrix: FracMatrix,
}

impl RBlock {
    pub fn dim(&self) -> usize {
        self.parts.last().map_or(0, |p| p.offset + p.dim1 * p.dim2)
    }

    pub fn part_with_first(&self, first: &Drop) -> Option<&BlockPart> {
        self.parts.iter().find(|p| &p.first == first)
    }
}

struct Side<M> {
    module: M,
    f: HashMap<(usize, Drop), Rc<FracMatrix>>,
    e: HashMap<(usize, Drop), Rc<FracMatrix>>,
}

impl<M: WeightModule> Side<M> {
    fn new(module: M) -> Self {
        Self { module, f: HashMap::new(), e: HashMap::new() }
    }

    fn f(&mut self, i: usize, d: &Drop) -> Result<Rc<FracMatrix>, BraidError> {
        let key = (i, d.clone());
        if let Some(m) = self.f.get(&key) {
            return Ok(m.clone());
        }
        let m = Rc::new(self.module.f_matrix(i, d)?);
        self.f.insert(key, m.clone());
        Ok(m)
    }

    fn e(&mut self, i: usize, d: &Drop) -> Result<Rc<FracMatrix>, BraidError> {
        let key = (i, d.clone());
        if let Some(m) = self.e.get(&key) {
            return Ok(m.clone());
        }
        let m = Rc::new(self.module.e_matrix(i, d)?);
        self.e.insert(key, m.clone());
        Ok(m)
    }

    fn k(&self, i: usize, d: &Drop) -> QFraction {
        QFraction::from(QScalar::q_pow_rat(self.module.k_half_exponent(i, d)))
    }

    fn k_inv(&self, i: usize, d: &Drop) -> QFraction {
        QFraction::from(QScalar::q_pow_rat(-self.module.k_half_exponent(i, d)))
    }
}

fn drop_weight(hw: &Weight, d: &Drop) -> Weight {
    let rd = RootData::new(hw.dim() - 2).expect("weights live in R^{n+2}");
    let mut w = hw.clone();
    for (i, &l) in d.iter().enumerate() {
        if l > 0 {
            w = &w - &rd.simple_root(i).scale(&rat(l as i64, 1));
        }
    }
    w
}

/// All `d1 ≤ l` componentwise, in lexicographic order.
fn sub_drops(l: &Drop) -> Vec<Drop> {
    let mut out = vec![Vec::with_capacity(l.len())];
    for &li in l {
        out = out
            .into_iter()
            .flat_map(|p: Drop| {
                (0..=li).map(move |x| {
                    let mut p = p.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out
}

/// Unique normalized intertwiner `R: V1 ⊗ V2 → V1 ⊗ V2` with `R Δ(x) = Δ^op(x) R`,
/// solved weight block by weight block over a pair of weight modules.
///
/// On each block the diagonal part is fixed to `q^{(μ1, μ2)/2}`; off-diagonal entries are
/// restricted by a [`Triangularity`] convention and determined by the intertwining equations
/// for `e_i` and `f_i`, which must have a unique solution.
pub struct Intertwiner<M: WeightModule> {
    s1: Side<M>,
    s2: Side<M>,
    roots: Vec<usize>,
    num_roots: usize,
    depth: u32,
    convention: Box<dyn Triangularity>,
    blocks: BTreeMap<Drop, Rc<RBlock>>,
}

impl<M: WeightModule> Intertwiner<M> {
    pub fn new(m1: M, m2: M, depth: u32, convention: &str) -> Result<Self, BraidError> {
        if m1.roots() != m2.roots() {
            return Err(BraidError::FactorMismatch);
        }
        if m1.highest_weight().dim() != m2.highest_weight().dim() {
            return Err(BraidError::FactorMismatch);
        }
        let registry = triangularity_registry();
        let convention = registry.into_entry(convention)?;
        let roots = m1.roots().to_vec();
        let num_roots = m1.highest_weight().dim() - 1;
        Ok(Self { s1: Side::new(m1), s2: Side::new(m2), roots, num_roots, depth, convention, blocks: BTreeMap::new() })
    }

    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn convention(&self) -> &'static str {
        self.convention.name()
    }

    pub fn first(&mut self) -> &mut M {
        &mut self.s1.module
    }

    pub fn second(&mut self) -> &mut M {
        &mut self.s2.module
    }

    pub fn solved(&self) -> impl Iterator<Item = &Rc<RBlock>> {
        self.blocks.values()
    }

    /// Solve every block of total height at most the depth bound.
    pub fn solve_all(&mut self) -> Result<(), BraidError> {
        for l in drops_up_to(self.num_roots, &self.roots, self.depth) {
            self.block(&l)?;
        }
        Ok(())
    }

    fn parts(&mut self, l: &Drop) -> Result<Vec<BlockPart>, BraidError> {
        let mut parts = Vec::new();
        let mut offset = 0;
        for first in sub_drops(l) {
            let second: Drop = l.iter().zip(&first).map(|(a, b)| a - b).collect();
            let dim1 = self.s1.module.dim(&first)?;
            if dim1 == 0 {
                continue;
            }
            let dim2 = self.s2.module.dim(&second)?;
            if dim2 == 0 {
                continue;
            }
            parts.push(BlockPart { first, second, dim1, dim2, offset });
            offset += dim1 * dim2;
        }
        Ok(parts)
    }

    fn diagonal(&self, p: &BlockPart) -> QFraction {
        let w1 = drop_weight(self.s1.module.highest_weight(), &p.first);
        let w2 = drop_weight(self.s2.module.highest_weight(), &p.second);
        QFraction::from(QScalar::q_pow_rat(w1.dot(&w2) * rat(1, 2)))
    }

    /// Matrix of `Δ(f_i)` (or `Δ^op(f_i)`) from the block `prev` to the block with parts `cur`.
    fn delta_f(
        &mut self,
        i: usize,
        prev: &RBlock,
        cur: &[BlockPart],
        opposite: bool,
    ) -> Result<FracMatrix, BraidError> {
        let rows = cur.last().map_or(0, |p| p.offset + p.dim1 * p.dim2);
        let mut m = FracMatrix::zeros(rows, prev.dim());
        for p in &prev.parts {
            let up = add_root(&p.first, i);
            let k2 = if opposite { self.s2.k_inv(i, &p.second) } else { self.s2.k(i, &p.second) };
            let k1 = if opposite { self.s1.k(i, &p.first) } else { self.s1.k_inv(i, &p.first) };
            if let Some(tp) = cur.iter().find(|t| t.first == up) {
                let f1 = self.s1.f(i, &p.first)?;
                for a in 0..p.dim1 {
                    for b in 0..p.dim2 {
                        for a2 in 0..tp.dim1 {
                            let v = f1.get(a2, a);
                            if !v.is_zero() {
                                m.set(tp.index(a2, b), p.index(a, b), v * &k2);
                            }
                        }
                    }
                }
            }
            if let Some(tp) = cur.iter().find(|t| t.first == p.first) {
                let f2 = self.s2.f(i, &p.second)?;
                for a in 0..p.dim1 {
                    for b in 0..p.dim2 {
                        for b2 in 0..tp.dim2 {
                            let v = f2.get(b2, b);
                            if !v.is_zero() {
                                let r = tp.index(a, b2);
                                let c = p.index(a, b);
                                let old = m.get(r, c).clone();
                                m.set(r, c, &old + &(v * &k1));
                            }
                        }
                    }
                }
            }
        }
        Ok(m)
    }

    /// Matrix of `Δ(e_i)` (or `Δ^op(e_i)`) from the block with parts `cur` down to `prev`.
    fn delta_e(
        &mut self,
        i: usize,
        cur: &[BlockPart],
        prev: &RBlock,
        opposite: bool,
    ) -> Result<FracMatrix, BraidError> {
        let cols = cur.last().map_or(0, |p| p.offset + p.dim1 * p.dim2);
        let mut m = FracMatrix::zeros(prev.dim(), cols);
        for p in cur {
            let k2 = if opposite { self.s2.k_inv(i, &p.second) } else { self.s2.k(i, &p.second) };
            let k1 = if opposite { self.s1.k(i, &p.first) } else { self.s1.k_inv(i, &p.first) };
            if let Some(down) = sub_root(&p.first, i) {
                if let Some(tp) = prev.part_with_first(&down) {
                    let e1 = self.s1.e(i, &p.first)?;
                    for a in 0..p.dim1 {
                        for b in 0..p.dim2 {
                            for a2 in 0..tp.dim1 {
                                let v = e1.get(a2, a);
                                if !v.is_zero() {
                                    m.set(tp.index(a2, b), p.index(a, b), v * &k2);
                                }
                            }
                        }
                    }
                }
            }
            if p.second[i] > 0 {
                if let Some(tp) = prev.part_with_first(&p.first) {
                    let e2 = self.s2.e(i, &p.second)?;
                    for a in 0..p.dim1 {
                        for b in 0..p.dim2 {
                            for b2 in 0..tp.dim2 {
                                let v = e2.get(b2, b);
                                if !v.is_zero() {
                                    let r = tp.index(a, b2);
                                    let c = p.index(a, b);
                                    let old = m.get(r, c).clone();
                                    m.set(r, c, &old + &(v * &k1));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(m)
    }

    /// The solved block at total drop `l`, solving lower blocks as needed.
    pub fn block(&mut self, l: &Drop) -> Result<Rc<RBlock>, BraidError> {
        if let Some(b) = self.blocks.get(l) {
            return Ok(b.clone());
        }
        if l.len() != self.num_roots {
            return Err(BraidError::Dimension(format!("drop vector of length {}", l.len())));
        }
        let height: u32 = l.iter().sum();
        if height > self.depth {
            return Err(BraidError::DepthExceeded { height, depth: self.depth });
        }
        if l.iter().enumerate().any(|(i, &x)| x > 0 && !self.roots.contains(&i)) {
            return Err(BraidError::LetterOutsideRoots);
        }
        let parts = self.parts(l)?;
        let dim = parts.last().map_or(0, |p| p.offset + p.dim1 * p.dim2);
        let label = format!("weight drop {l:?}");

        let mut fixed = FracMatrix::zeros(dim, dim);
        for p in &parts {
            let d = self.diagonal(p);
            for k in p.offset..p.offset + p.dim1 * p.dim2 {
                fixed.set(k, k, d.clone());
            }
        }
        let part_of = |k: usize| parts.iter().rposition(|p| p.offset <= k).expect("index inside block");
        let mut unknown: HashMap<(usize, usize), usize> = HashMap::new();
        let mut slots = Vec::new();
        for c in 0..dim {
            for r in 0..dim {
                let (pr, pc) = (part_of(r), part_of(c));
                if pr != pc && self.convention.allows(&parts[pc].first, &parts[pr].first) {
                    unknown.insert((r, c), slots.len());
                    slots.push((r, c));
                }
            }
        }

        let mut eqs: Vec<(Vec<(usize, QFraction)>, QFraction)> = Vec::new();
        let height_zero = height == 0;
        for &i in &self.roots.clone() {
            let Some(prev_drop) = sub_root(l, i) else { continue };
            let prev = self.block(&prev_drop)?;
            if prev.dim() == 0 || dim == 0 {
                continue;
            }
            let df = self.delta_f(i, &prev, &parts, false)?;
            let df_op = self.delta_f(i, &prev, &parts, true)?;
            let de = self.delta_e(i, &parts, &prev, false)?;
            let de_op = self.delta_e(i, &parts, &prev, true)?;
            // R_l Δ(f) = Δ^op(f) R_prev
            let rhs = df_op.mul(&prev.matrix)?;
            for r in 0..dim {
                for c in 0..prev.dim() {
                    let mut row = Vec::new();
                    let mut b = rhs.get(r, c).clone();
                    for k in 0..dim {
                        let a = df.get(k, c);
                        if a.is_zero() {
                            continue;
                        }
                        if let Some(&u) = unknown.get(&(r, k)) {
                            row.push((u, a.clone()));
                        } else if r == k {
                            b = &b - &(fixed.get(r, r) * a);
                        }
                    }
                    if !row.is_empty() || !b.is_zero() {
                        eqs.push((row, b));
                    }
                }
            }
            // Δ^op(e) R_l = R_prev Δ(e)
            let rhs = prev.matrix.mul(&de)?;
            for r in 0..prev.dim() {
                for c in 0..dim {
                    let mut row = Vec::new();
                    let mut b = rhs.get(r, c).clone();
                    for k in 0..dim {
                        let a = de_op.get(r, k);
                        if a.is_zero() {
                            continue;
                        }
                        if let Some(&u) = unknown.get(&(k, c)) {
                            row.push((u, a.clone()));
                        } else if k == c {
                            b = &b - &(a * fixed.get(c, c));
                        }
                    }
                    if !row.is_empty() || !b.is_zero() {
                        eqs.push((row, b));
                    }
                }
            }
        }

        let mut matrix = fixed;
        if !slots.is_empty() || !eqs.is_empty() {
            if height_zero {
                return Err(BraidError::Dimension("top block has a single component".into()));
            }
            let mut a = FracMatrix::zeros(eqs.len(), slots.len());
            let mut b = Vec::with_capacity(eqs.len());
            for (r, (row, rhs)) in eqs.into_iter().enumerate() {
                for (u, v) in row {
                    let old = a.get(r, u).clone();
                    a.set(r, u, &old + &v);
                }
                b.push(rhs);
            }
            let x = if slots.is_empty() {
                if b.iter().any(|v| !v.is_zero()) {
                    return Err(BraidError::Solve {
                        drop: l.clone(),
                        source: crate::exactq::ExactError::Inconsistent { label },
                    });
                }
                Vec::new()
            } else {
                solve_linear(&a, &b, &label).map_err(|source| BraidError::Solve { drop: l.clone(), source })?
            };
            for ((r, c), v) in slots.into_iter().zip(x) {
                matrix.set(r, c, v);
            }
        }
        let block = Rc::new(RBlock { drop: l.clone(), parts, matrix });
        self.blocks.insert(l.clone(), block.clone());
        Ok(block)
    }
}

/// All drops supported on `roots` with height at most `depth`, by height then lexicographically.
pub fn drops_up_to(num_roots: usize, roots: &[usize], depth: u32) -> Vec<Drop> {
    let mut out = Vec::new();
    fn rec(roots: &[usize], k: usize, left: u32, cur: &mut Drop, out: &mut Vec<Drop>) {
        if k == roots.len() {
            out.push(cur.clone());
            return;
        }
        for x in 0..=left {
            cur[roots[k]] = x;
            rec(roots, k + 1, left - x, cur, out);
        }
        cur[roots[k]] = 0;
    }
    rec(roots, 0, depth, &mut vec![0; num_roots], &mut out);
    out.sort_by(|a, b| a.iter().sum::<u32>().cmp(&b.iter().sum::<u32>()).then_with(|| a.cmp(b)));
    out
}

/// Default depth bound `n(n+1)/2 + 1`.
pub fn default_depth(n: usize) -> u32 {
    (n * (n + 1) / 2 + 1) as u32
}

/// The R-matrix on a pair of irreducible quotients, with its action on contravariant duals.
pub struct BraidOperator {
    core: Intertwiner<IrrepSpace>,
    lambda1: Weight,
    lambda2: Weight,
    dual_blocks: BTreeMap<Drop, Rc<FracMatrix>>,
    coords: [HashMap<FWord, Rc<Vec<QFraction>>>; 2],
}

/// Build the R-matrix for `Λ1 ⊗ Λ2` acting through the roots `1..=n`.
///
/// The root `α_0` is left out: in every computation here the factors are string words
/// `f_j ... f_1 v`, which are annihilated by `e_0`.
pub fn build_r(lambda1: &Weight, lambda2: &Weight, depth: u32, convention: &str) -> Result<BraidOperator, BraidError> {
    let n = lambda1.dim().checked_sub(2).ok_or(BraidError::FactorMismatch)?;
    let roots: Vec<usize> = (1..=n).collect();
    BraidOperator::with_roots(lambda1, lambda2, &roots, depth, convention)
}

/// Independent solve of the dual R-matrix on `L(Λ1)* ⊗ L(Λ2)*` in the dual word bases.
pub fn build_dual_r(
    lambda1: &Weight,
    lambda2: &Weight,
    roots: &[usize],
    depth: u32,
    convention: &str,
) -> Result<Intertwiner<DualIrrep>, BraidError> {
    let m1 = DualIrrep::new(IrrepSpace::new(lambda1, roots)?);
    let m2 = DualIrrep::new(IrrepSpace::new(lambda2, roots)?);
    Intertwiner::new(m1, m2, depth, convention)
}

impl BraidOperator {
    pub fn with_roots(
        lambda1: &Weight,
        lambda2: &Weight,
        roots: &[usize],
        depth: u32,
        convention: &str,
    ) -> Result<Self, BraidError> {
        if lambda1.dim() != lambda2.dim() {
            return Err(BraidError::FactorMismatch);
        }
        let m1 = IrrepSpace::new(lambda1, roots)?;
        let m2 = IrrepSpace::new(lambda2, roots)?;
        Ok(Self {
            core: Intertwiner::new(m1, m2, depth, convention)?,
            lambda1: lambda1.clone(),
            lambda2: lambda2.clone(),
            dual_blocks: BTreeMap::new(),
            coords: [HashMap::new(), HashMap::new()],
        })
    }

    pub fn lambda1(&self) -> &Weight {
        &self.lambda1
    }

    pub fn lambda2(&self) -> &Weight {
        &self.lambda2
    }

    pub fn depth(&self) -> u32 {
        self.core.depth()
    }

    pub fn roots(&self) -> &[usize] {
        self.core.roots()
    }

    pub fn convention(&self) -> &'static str {
        self.core.convention()
    }

    pub fn block(&mut self, l: &Drop) -> Result<Rc<RBlock>, BraidError> {
        self.core.block(l)
    }

    pub fn solve_all(&mut self) -> Result<(), BraidError> {
        self.core.solve_all()
    }

    /// `(G1 ⊗ G2)` on a block, or its inverse.
    fn gram_kron(&mut self, parts: &[BlockPart], inverse: bool) -> Result<FracMatrix, BraidError> {
        let dim = parts.last().map_or(0, |p| p.offset + p.dim1 * p.dim2);
        let mut g = FracMatrix::zeros(dim, dim);
        for p in parts {
            let b1 = self.core.first().block(&p.first)?;
            let b2 = self.core.second().block(&p.second)?;
            let k = if inverse { b1.gram_inv.kron(&b2.gram_inv) } else { b1.gram.kron(&b2.gram) };
            for r in 0..k.rows() {
                for c in 0..k.cols() {
                    let v = k.get(r, c);
                    if !v.is_zero() {
                        g.set(p.offset + r, p.offset + c, v.clone());
                    }
                }
            }
        }
        Ok(g)
    }

    /// `R* = (G ⊗ G) R (G ⊗ G)^{-1}` on a block, in the dual word bases.
    pub fn dual_block(&mut self, l: &Drop) -> Result<Rc<FracMatrix>, BraidError> {
        if let Some(m) = self.dual_blocks.get(l) {
            return Ok(m.clone());
        }
        let blk = self.block(l)?;
        let g = self.gram_kron(&blk.parts, false)?;
        let gi = self.gram_kron(&blk.parts, true)?;
        let m = Rc::new(g.mul(&blk.matrix)?.mul(&gi)?);
        self.dual_blocks.insert(l.clone(), m.clone());
        Ok(m)
    }

    fn word_coords(&mut self, side: usize, w: &FWord) -> Result<Rc<Vec<QFraction>>, BraidError> {
        if let Some(c) = self.coords[side].get(w) {
            return Ok(c.clone());
        }
        let space = if side == 0 { self.core.first() } else { self.core.second() };
        let d = w.content(space.num_roots());
        let c = Rc::new(space.word_coords(&d, w)?);
        self.coords[side].insert(w.clone(), c.clone());
        Ok(c)
    }

    fn basis_words(&mut self, side: usize, d: &Drop) -> Result<Vec<FWord>, BraidError> {
        let space = if side == 0 { self.core.first() } else { self.core.second() };
        Ok(space.block(d)?.basis.clone())
    }

    /// `R` applied to the factors at `slot` and `slot + 1`.
    pub fn apply_r(&mut self, slot: usize, x: &TensorVector) -> Result<TensorVector, BraidError> {
        let factors = x.factors();
        if slot + 1 >= factors.len() {
            return Err(BraidError::SlotOutOfRange { slot, factors: factors.len() });
        }
        let (f1, f2) = (&factors[slot], &factors[slot + 1]);
        if f1.highest_weight != self.lambda1 || f2.highest_weight != self.lambda2 {
            return Err(BraidError::WeightMismatch { slot });
        }
        if f1.dual != f2.dual {
            return Err(BraidError::MixedDuality { slot });
        }
        let dual = f1.dual;
        let nr = self.lambda1.dim() - 1;

        // Group by the words in the other slots, then by total drop of the pair.
        type Pairs = BTreeMap<(FWord, FWord), QScalar>;
        let mut groups: BTreeMap<Vec<FWord>, BTreeMap<Drop, Pairs>> = BTreeMap::new();
        for (ws, c) in x.terms() {
            let mut rest = ws.clone();
            let w2 = rest.remove(slot + 1);
            let w1 = rest.remove(slot);
            let (d1, d2) = (w1.content(nr), w2.content(nr));
            let l: Drop = d1.iter().zip(&d2).map(|(a, b)| a + b).collect();
            groups.entry(rest).or_default().entry(l).or_default().insert((w1, w2), c.clone());
        }

        let mut out = TensorVector::zero(factors.to_vec());
        for (rest, by_drop) in groups {
            for (l, pairs) in by_drop {
                let image = if dual { self.apply_dual_block(&l, &pairs)? } else { self.apply_plain_block(&l, &pairs)? };
                for ((u1, u2), c) in image {
                    let mut ws = rest.clone();
                    ws.insert(slot, u1);
                    ws.insert(slot + 1, u2);
                    out.add_term(ws, c);
                }
            }
        }
        Ok(out)
    }

    /// `P R` on the factors at `slot` and `slot + 1`.
    pub fn apply_pr(&mut self, slot: usize, x: &TensorVector) -> Result<TensorVector, BraidError> {
        self.apply_r(slot, x)?.swap(slot)
    }

    fn apply_plain_block(
        &mut self,
        l: &Drop,
        pairs: &BTreeMap<(FWord, FWord), QScalar>,
    ) -> Result<PairTerms<QScalar>, BraidError> {
        let blk = self.block(l)?;
        let nr = self.lambda1.dim() - 1;
        let mut v = vec![QFraction::zero(); blk.dim()];
        for ((w1, w2), c) in pairs {
            let Some(p) = blk.part_with_first(&w1.content(nr)) else { continue };
            let c1 = self.word_coords(0, w1)?;
            let c2 = self.word_coords(1, w2)?;
            let c = QFraction::from(c.clone());
            for a in 0..p.dim1 {
                if c1[a].is_zero() {
                    continue;
                }
                let ca = &c * &c1[a];
                for b in 0..p.dim2 {
                    if !c2[b].is_zero() {
                        let k = p.index(a, b);
                        v[k] = &v[k] + &(&ca * &c2[b]);
                    }
                }
            }
        }
        let y = blk.matrix.mul_vec(&v)?;
        let mut out = Vec::new();
        for p in &blk.parts {
            let bw1 = self.basis_words(0, &p.first)?;
            let bw2 = self.basis_words(1, &p.second)?;
            for a in 0..p.dim1 {
                for b in 0..p.dim2 {
                    let val = &y[p.index(a, b)];
                    if !val.is_zero() {
                        out.push(((bw1[a].clone(), bw2[b].clone()), to_scalar(val)?));
                    }
                }
            }
        }
        Ok(out)
    }

    fn apply_dual_block(
        &mut self,
        l: &Drop,
        pairs: &BTreeMap<(FWord, FWord), QScalar>,
    ) -> Result<PairTerms<QScalar>, BraidError> {
        let blk = self.block(l)?;
        // Values of the functional on basis pairs.
        let mut z = vec![QFraction::zero(); blk.dim()];
        for p in &blk.parts {
            let bw1 = self.basis_words(0, &p.first)?;
            let bw2 = self.basis_words(1, &p.second)?;
            for a in 0..p.dim1 {
                for b in 0..p.dim2 {
                    if let Some(c) = pairs.get(&(bw1[a].clone(), bw2[b].clone())) {
                        z[p.index(a, b)] = QFraction::from(c.clone());
                    }
                }
            }
        }
        // The functional must factor through the quotient: reconstruct it on every word pair.
        let rebuilt = self.expand_dual(&blk, &z)?;
        let mut given: BTreeMap<(FWord, FWord), QFraction> = BTreeMap::new();
        for (k, c) in pairs {
            given.insert(k.clone(), QFraction::from(c.clone()));
        }
        let rebuilt_map: BTreeMap<(FWord, FWord), QFraction> = rebuilt.into_iter().collect();
        if rebuilt_map != given {
            return Err(BraidError::NotInRestrictedDual { drop: l.clone() });
        }
        let rstar = self.dual_block(l)?;
        let y = rstar.mul_vec(&z)?;
        self.expand_dual(&blk, &y)?.into_iter().map(|(k, v)| Ok((k, to_scalar(&v)?))).collect()
    }

    /// Write a functional given by its values on basis pairs as a combination of dual word pairs.
    fn expand_dual(&mut self, blk: &RBlock, z: &[QFraction]) -> Result<PairTerms<QFraction>, BraidError> {
        let mut out = Vec::new();
        for p in &blk.parts {
            let words1 = words_of_weight(&p.first);
            let words2 = words_of_weight(&p.second);
            let mut c2s = Vec::with_capacity(words2.len());
            for u2 in &words2 {
                c2s.push(self.word_coords(1, u2)?);
            }
            for u1 in &words1 {
                let c1 = self.word_coords(0, u1)?;
                for (u2, c2) in words2.iter().zip(&c2s) {
                    let mut acc = QFraction::zero();
                    for a in 0..p.dim1 {
                        if c1[a].is_zero() {
                            continue;
                        }
                        for b in 0..p.dim2 {
                            let v = &z[p.index(a, b)];
                            if !c2[b].is_zero() && !v.is_zero() {
                                acc = &acc + &(&(&c1[a] * &c2[b]) * v);
                            }
                        }
                    }
                    if !acc.is_zero() {
                        out.push(((u1.clone(), u2.clone()), acc));
                    }
                }
            }
        }
        Ok(out)
    }

    /// JSON dump of every solved block: the basis word pairs and the exact entries.
    pub fn to_json(&mut self) -> Result<serde_json::Value, BraidError> {
        let blocks: Vec<Rc<RBlock>> = self.core.solved().cloned().collect();
        let mut out = Vec::new();
        for blk in blocks {
            let mut basis = Vec::new();
            for p in &blk.parts {
                let bw1 = self.basis_words(0, &p.first)?;
                let bw2 = self.basis_words(1, &p.second)?;
                for w1 in &bw1 {
                    for w2 in &bw2 {
                        basis.push(json!([w1, w2]));
                    }
                }
            }
            out.push(json!({ "drop": blk.drop, "basis": basis, "matrix": blk.matrix }));
        }
        Ok(json!({
            "lambda1": self.lambda1,
            "lambda2": self.lambda2,
            "roots": self.roots(),
            "depth": self.depth(),
            "convention": self.convention(),
            "blocks": out,
        }))
    }

    pub fn factors(&self, dual: bool) -> [TensorFactor; 2] {
        [TensorFactor::new(self.lambda1.clone(), dual), TensorFactor::new(self.lambda2.clone(), dual)]
    }
}

fn to_scalar(v: &QFraction) -> Result<QScalar, BraidError> {
    v.as_scalar().cloned().ok_or_else(|| BraidError::NonPolynomial(v.to_string()))
}

/// `d(μ) = -Σ_{p ≤ q} (α_{i_p}, α_{i_q})/4` for `μ = Σ l_i α_i`, computed on one listing.
pub fn compute_d_listing(rd: &RootData, listing: &[usize]) -> Rational {
    let mut acc = 0i64;
    for p in 0..listing.len() {
        for q in p..listing.len() {
            acc += rd.cartan(listing[p], listing[q]);
        }
    }
    rat(-acc, 4)
}

/// `d(μ)` for `μ = Σ l_i α_i`; the value is checked against the reversed listing.
pub fn compute_d(n: usize, l: &[i64]) -> Result<Rational, BraidError> {
    let rd = RootData::new(n)?;
    if l.len() != rd.num_roots() {
        return Err(BraidError::Dimension(format!("expected {} coefficients", rd.num_roots())));
    }
    if let Some(i) = l.iter().position(|&x| x < 0) {
        return Err(BraidError::NegativeCoefficient { index: i, value: l[i] });
    }
    let listing: Vec<usize> = l.iter().enumerate().flat_map(|(i, &x)| std::iter::repeat_n(i, x as usize)).collect();
    let d = compute_d_listing(&rd, &listing);
    let mut rev = listing.clone();
    rev.reverse();
    if compute_d_listing(&rd, &rev) != d {
        return Err(BraidError::ListingDependent);
    }
    Ok(d)
}

/// Outcome of `PR` on one pair of dual strings `(f_i ... f_1 v)* ⊗ (f_j ... f_1 v)*`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StringPairCheck {
    pub i: usize,
    pub j: usize,
    pub matches: bool,
    /// `PR x` minus the expected value; empty when the pair matches.
    pub residual: String,
}

/// Dual string pairs against the braiding formulas:
/// `i < j` gives `q^{1/2}` times the swap, `i > j` adds `q^{1/2}[1]` times the unswapped pair,
/// and `i = j` gives `q` times the pair.
pub fn string_pair_checks(r: &mut BraidOperator) -> Result<Vec<StringPairCheck>, BraidError> {
    if r.lambda1() != r.lambda2() {
        return Err(BraidError::FactorMismatch);
    }
    let l = r.lambda1().clone();
    let n = l.dim() - 2;
    let string = |j: usize| ModuleVector::word(l.clone(), true, FWord::string(j), QScalar::one());
    let half = QScalar::q_pow(1, 2);
    let b1 = QScalar::bracket(&rat(1, 1));
    let mut out = Vec::new();
    for i in 0..=n {
        for j in 0..=n {
            let x = TensorVector::product(&[string(i), string(j)]);
            let swapped = TensorVector::product(&[string(j), string(i)]);
            let expected = if i == j {
                x.scale(&QScalar::q_pow(1, 1))
            } else if i < j {
                swapped.scale(&half)
            } else {
                swapped.scale(&half).try_add(&x.scale(&(&half * &b1)))?
            };
            let diff = r.apply_pr(0, &x)?.try_sub(&expected)?;
            out.push(StringPairCheck {
                i,
                j,
                matches: diff.is_zero(),
                residual: if diff.is_zero() { String::new() } else { diff.to_string() },
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braiding::tensor::coproduct_act_with;
    use crate::repcore::Generator;

    fn dual_string(lambda: &Weight, j: usize) -> ModuleVector {
        ModuleVector::word(lambda.clone(), true, FWord::string(j), QScalar::one())
    }

    #[test]
    fn top_block_is_scalar() {
        let rd = RootData::new(2).unwrap();
        let l = rd.lambda_point();
        let mut r = build_r(&l, &l, 4, DEFAULT_TRIANGULARITY).unwrap();
        let b = r.block(&vec![0, 0, 0]).unwrap();
        assert_eq!(b.matrix, FracMatrix::identity(1).scale(&QFraction::from(QScalar::q_pow(1, 1))));
    }

    #[test]
    fn pr_on_top_dual_vectors() {
        let rd = RootData::new(1).unwrap();
        let l = rd.lambda_point();
        let mut r = build_r(&l, &l, 2, DEFAULT_TRIANGULARITY).unwrap();
        let x = TensorVector::product(&[dual_string(&l, 0), dual_string(&l, 0)]);
        assert_eq!(r.apply_pr(0, &x).unwrap(), x.scale(&QScalar::q_pow(1, 1)));
    }

    #[test]
    fn string_pairs_match_vector_representation() {
        let rd = RootData::new(2).unwrap();
        let l = rd.lambda_point();
        let mut r = build_r(&l, &l, default_depth(2), DEFAULT_TRIANGULARITY).unwrap();
        let checks = string_pair_checks(&mut r).unwrap();
        assert_eq!(checks.len(), 9);
        for c in checks {
            assert!(c.matches, "i={} j={}: {}", c.i, c.j, c.residual);
        }
    }

    #[test]
    fn opposite_convention_fails() {
        let rd = RootData::new(1).unwrap();
        let l = rd.lambda_point();
        let mut r = build_r(&l, &l, 2, "raise-second").unwrap();
        assert!(matches!(r.block(&vec![0, 1]), Err(BraidError::Solve { .. })));
    }

    #[test]
    fn intertwines_on_generic_vectors() {
        let rd = RootData::new(2).unwrap();
        let l = rd.generic_lambda();
        let e = rd.eta(1);
        let mut r = build_r(&l, &e, 3, DEFAULT_TRIANGULARITY).unwrap();
        let v = TensorVector::product(&[
            ModuleVector::word(l.clone(), false, FWord::new(&[2, 1]), QScalar::one()),
            ModuleVector::highest(e.clone(), false),
        ]);
        for g in [Generator::F(1), Generator::F(2), Generator::E(1), Generator::E(2)] {
            let lhs = r.apply_r(0, &coproduct_act_with(g, &v, false).unwrap()).unwrap();
            let rhs = coproduct_act_with(g, &r.apply_r(0, &v).unwrap(), true).unwrap();
            let diff = lhs.try_sub(&rhs).unwrap();
            assert!(crate::braiding::is_zero_mod_kernel(&diff).unwrap(), "{g:?}");
        }
    }

    #[test]
    fn dual_square_commutes() {
        let rd = RootData::new(2).unwrap();
        let l = rd.lambda_point();
        let roots = [1, 2];
        let mut r = build_r(&l, &l, 3, DEFAULT_TRIANGULARITY).unwrap();
        let mut rd_star = build_dual_r(&l, &l, &roots, 3, DEFAULT_TRIANGULARITY).unwrap();
        for d in drops_up_to(3, &roots, 3) {
            assert_eq!(*r.dual_block(&d).unwrap(), rd_star.block(&d).unwrap().matrix, "{d:?}");
        }
    }

    #[test]
    fn d_examples() {
        assert_eq!(compute_d(2, &[0, 0, 0]).unwrap(), rat(0, 1));
        assert_eq!(compute_d(2, &[0, 1, 0]).unwrap(), rat(-1, 2));
        assert_eq!(compute_d(2, &[0, 1, 1]).unwrap(), rat(-3, 4));
        assert!(matches!(compute_d(2, &[0, -1, 0]), Err(BraidError::NegativeCoefficient { .. })));
    }

    #[test]
    fn json_dump_lists_blocks() {
        let rd = RootData::new(1).unwrap();
        let l = rd.lambda_point();
        let mut r = build_r(&l, &l, 2, DEFAULT_TRIANGULARITY).unwrap();
        r.solve_all().unwrap();
        let j = r.to_json().unwrap();
        assert_eq!(j["convention"], "raise-first");
        assert!(j["blocks"].as_array().unwrap().len() >= 3);
    }
}
