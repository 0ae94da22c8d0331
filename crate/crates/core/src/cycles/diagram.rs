use serde::{Deserialize, Serialize};

use super::CycleError;

/// One marked point per row of the triangular pattern `{(i, j) : 1 ≤ i ≤ j ≤ n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Diagram {
    n: usize,
    marked: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArrowDirection {
    Left,
    Right,
}

/// Images `w(1), ..., w(n)` of a permutation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, CycleError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &w in &images {
            if w == 0 || w > n || std::mem::replace(&mut seen[w - 1], true) {
                return Err(CycleError::NotBijection(images));
            }
        }
        Ok(Self(images))
    }

    pub fn identity(n: usize) -> Self {
        Self((1..=n).collect())
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All permutations of `{1..n}` in lexicographic order.
    pub fn all(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        let mut used = vec![false; n];
        fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if cur.len() == n {
                out.push(Permutation(cur.clone()));
                return;
            }
            for v in 0..n {
                if !used[v] {
                    used[v] = true;
                    cur.push(v + 1);
                    rec(n, cur, used, out);
                    cur.pop();
                    used[v] = false;
                }
            }
        }
        rec(n, &mut cur, &mut used, &mut out);
        out
    }
}

/// Number of inversions `#{a < b : w(a) > w(b)}`.
pub fn coxeter_length(w: &Permutation) -> usize {
    let v = w.images();
    (0..v.len()).map(|a| (a + 1..v.len()).filter(|&b| v[a] > v[b]).count()).sum()
}

impl Diagram {
    /// `marked[j-1] = i_j`, with `1 ≤ i_j ≤ j`.
    pub fn new(marked: Vec<usize>) -> Result<Self, CycleError> {
        if marked.is_empty() {
            return Err(CycleError::InvalidDiagram("at least one row is required".into()));
        }
        for (j, &i) in marked.iter().enumerate() {
            if i == 0 || i > j + 1 {
                return Err(CycleError::InvalidDiagram(format!("row {} has marked point {i}", j + 1)));
            }
        }
        Ok(Self { n: marked.len(), marked })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn marked(&self) -> &[usize] {
        &self.marked
    }

    /// All `n!` diagrams, in lexicographic order of markings.
    pub fn all(n: usize) -> Vec<Self> {
        let mut out = vec![Vec::new()];
        for j in 1..=n {
            out = out
                .into_iter()
                .flat_map(|m: Vec<usize>| {
                    (1..=j).map(move |i| {
                        let mut m = m.clone();
                        m.push(i);
                        m
                    })
                })
                .collect();
        }
        out.into_iter().map(|marked| Self { n, marked }).collect()
    }

    fn check_point(&self, i: usize, j: usize) -> Result<(), CycleError> {
        if j == 0 || j >= self.n || i == 0 || i > j {
            return Err(CycleError::PointOutOfRange { i, j, n: self.n });
        }
        Ok(())
    }

    /// Target of the arrow leaving `(i, j)`, for `1 ≤ i ≤ j < n`.
    pub fn arrow_target(&self, i: usize, j: usize) -> Result<((usize, usize), ArrowDirection), CycleError> {
        self.check_point(i, j)?;
        if i < self.marked[j] {
            Ok(((i, j + 1), ArrowDirection::Left))
        } else {
            Ok(((i + 1, j + 1), ArrowDirection::Right))
        }
    }

    pub fn left_arrow_count(&self) -> usize {
        let mut count = 0;
        for j in 1..self.n {
            for i in 1..=j {
                if let Ok((_, ArrowDirection::Left)) = self.arrow_target(i, j) {
                    count += 1;
                }
            }
        }
        count
    }

    /// `Σ_j (i_j - 1)`.
    pub fn length(&self) -> usize {
        self.marked.iter().map(|i| i - 1).sum()
    }

    /// `w(i)` is the size of the connected component of `(i, n)`.
    ///
    /// Arrows form disjoint chains, each starting at a marked point, so the component of
    /// `(i, n)` is found by walking arrows backwards.
    pub fn to_permutation(&self) -> Result<Permutation, CycleError> {
        let n = self.n;
        let mut images = Vec::with_capacity(n);
        for i in 1..=n {
            let (mut pi, mut pj) = (i, n);
            let mut size = 1;
            while self.marked[pj - 1] != pi {
                // the unique source in row pj-1 whose arrow lands on (pi, pj)
                let src = (1..pj)
                    .find(|&s| matches!(self.arrow_target(s, pj - 1), Ok((t, _)) if t == (pi, pj)))
                    .ok_or_else(|| CycleError::InvalidDiagram(format!("point ({pi},{pj}) has no source")))?;
                pi = src;
                pj -= 1;
                size += 1;
            }
            images.push(size);
        }
        Permutation::new(images)
    }
}

pub fn arrow_target(d: &Diagram, i: usize, j: usize) -> Result<((usize, usize), ArrowDirection), CycleError> {
    d.arrow_target(i, j)
}

pub fn diagram_to_permutation(d: &Diagram) -> Result<Permutation, CycleError> {
    d.to_permutation()
}

pub fn diagram_length(d: &Diagram) -> usize {
    d.length()
}
