use serde::Serialize;

use super::BraidError;
use crate::exactq::{rat, FracMatrix, QFraction, QScalar};

fn qf(x: QScalar) -> QFraction {
    QFraction::from(x)
}

/// The normalized R-matrix of the vector representation on `C^{n+1} ⊗ C^{n+1}`:
/// `q^{1/2} { Σ_{i≠j} E_ii⊗E_jj + q^{1/2} Σ_i E_ii⊗E_ii + [1] Σ_{i<j} E_ij⊗E_ji }`.
///
/// Basis pairs `e_i ⊗ e_j` are ordered with `i` slowest.
pub fn vector_rep_r(n: usize) -> FracMatrix {
    let m = n + 1;
    let half = QScalar::q_pow(1, 2);
    let mut r = FracMatrix::zeros(m * m, m * m);
    for i in 0..m {
        for j in 0..m {
            let k = i * m + j;
            if i == j {
                r.set(k, k, qf(QScalar::q_pow(1, 1)));
            } else {
                r.set(k, k, qf(half.clone()));
            }
            if i < j {
                // E_ij ⊗ E_ji sends e_j ⊗ e_i to e_i ⊗ e_j
                r.set(i * m + j, j * m + i, qf(&half * &QScalar::bracket(&rat(1, 1))));
            }
        }
    }
    r
}

/// The flip `P(x ⊗ y) = y ⊗ x` on `C^m ⊗ C^m`.
pub fn permutation_matrix(m: usize) -> FracMatrix {
    let mut p = FracMatrix::zeros(m * m, m * m);
    for i in 0..m {
        for j in 0..m {
            p.set(j * m + i, i * m + j, QFraction::one());
        }
    }
    p
}

fn product(ms: &[&FracMatrix]) -> Result<FracMatrix, BraidError> {
    let mut acc = ms[0].clone();
    for m in &ms[1..] {
        acc = acc.mul(m)?;
    }
    Ok(acc)
}

/// Braid relation for `Ř = P R̂` on three factors.
pub fn yang_baxter_braid(n: usize) -> Result<bool, BraidError> {
    let m = n + 1;
    let check = permutation_matrix(m).mul(&vector_rep_r(n))?;
    let id = FracMatrix::identity(m);
    let a = check.kron(&id);
    let b = id.kron(&check);
    Ok(product(&[&a, &b, &a])? == product(&[&b, &a, &b])?)
}

/// Quantum Yang–Baxter equation `R12 R13 R23 = R23 R13 R12` for `R̂`.
pub fn yang_baxter_qybe(n: usize) -> Result<bool, BraidError> {
    let m = n + 1;
    let r = vector_rep_r(n);
    let id = FracMatrix::identity(m);
    let r12 = r.kron(&id);
    let r23 = id.kron(&r);
    let p23 = id.kron(&permutation_matrix(m));
    let r13 = product(&[&p23, &r12, &p23])?;
    Ok(product(&[&r12, &r13, &r23])? == product(&[&r23, &r13, &r12])?)
}

/// Spectrum of `P R̂` on `V ⊗ V`, split into the symmetric and q-antisymmetric parts.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrSpectrum {
    pub symmetric: QScalar,
    pub antisymmetric: QScalar,
    pub symmetric_multiplicity: usize,
    pub antisymmetric_multiplicity: usize,
    /// `(PR̂ - q)(PR̂ + 1) = 0` holds exactly.
    pub hecke: bool,
    /// The trace equals `q m_+ - m_-` with the expected multiplicities.
    pub trace_consistent: bool,
    /// The determinant equals `q^{m_+} (-1)^{m_-}`.
    pub det_consistent: bool,
}

/// Eigenvalues `q` on the symmetric square and `-1` on the q-antisymmetric square,
/// cross-checked against the Hecke relation, the trace and the determinant of `P R̂`.
pub fn pr_projector_decomposition(n: usize) -> Result<PrSpectrum, BraidError> {
    let m = n + 1;
    let pr = permutation_matrix(m).mul(&vector_rep_r(n))?;
    let q = QScalar::q_pow(1, 1);
    let minus_one = QScalar::from_int(-1);
    let id = FracMatrix::identity(m * m);
    let a = pr.add(&id.scale(&qf(-q.clone())))?;
    let b = pr.add(&id)?;
    let hecke = a.mul(&b)?.is_zero();

    let sym = m * (m + 1) / 2;
    let anti = m * (m - 1) / 2;
    let expected_trace = &q.scale(&rat(sym as i64, 1)) - &QScalar::from_int(anti as i64);
    let trace_consistent = pr.trace() == qf(expected_trace);
    let sign = if anti.is_multiple_of(2) { 1 } else { -1 };
    let expected_det = QScalar::q_pow(sym as i64, 1).scale(&rat(sign, 1));
    let det_consistent = pr.determinant()? == qf(expected_det);
    Ok(PrSpectrum {
        symmetric: q,
        antisymmetric: minus_one,
        symmetric_multiplicity: sym,
        antisymmetric_multiplicity: anti,
        hecke,
        trace_consistent,
        det_consistent,
    })
}

/// Young diagrams occurring in `λ ⊗ V` for `sl(n+1)`: add one box, then strip full columns.
pub fn lr_tensor_vector(lambda: &[u32], n: usize) -> Result<Vec<Vec<u32>>, BraidError> {
    if n == 0 {
        return Err(BraidError::InvalidDiagram("rank must be at least 1".into()));
    }
    if lambda.windows(2).any(|w| w[0] < w[1]) {
        return Err(BraidError::InvalidDiagram(format!("{lambda:?} is not non-increasing")));
    }
    let rows = n + 1;
    let mut base: Vec<u32> = lambda.iter().copied().filter(|&x| x > 0).collect();
    if base.len() > rows {
        return Err(BraidError::InvalidDiagram(format!("{lambda:?} has more than {rows} rows")));
    }
    normalize(&mut base, rows);
    let mut out = Vec::new();
    for r in 0..=base.len().min(rows - 1) {
        if r > 0 && base[r - 1] <= base.get(r).copied().unwrap_or(0) {
            continue;
        }
        let mut d = base.clone();
        if r == d.len() {
            d.push(1);
        } else {
            d[r] += 1;
        }
        normalize(&mut d, rows);
        out.push(d);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn normalize(d: &mut Vec<u32>, rows: usize) {
    if d.len() == rows {
        let m = d[rows - 1];
        d.iter_mut().for_each(|x| *x -= m);
        d.retain(|&x| x > 0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(m: usize, i: usize, j: usize) -> Vec<QFraction> {
        let mut v = vec![QFraction::zero(); m * m];
        v[i * m + j] = QFraction::one();
        v
    }

    #[test]
    fn diagonal_and_mixed_entries() {
        let r = vector_rep_r(2);
        let v = r.mul_vec(&basis(3, 1, 1)).unwrap();
        assert_eq!(v[4], qf(QScalar::q_pow(1, 1)));
        let v = r.mul_vec(&basis(3, 0, 1)).unwrap();
        assert_eq!(v, basis(3, 0, 1).iter().map(|x| x * &qf(QScalar::q_pow(1, 2))).collect::<Vec<_>>());
    }

    #[test]
    fn q_antisymmetric_eigenvector() {
        let m = 2;
        let pr = permutation_matrix(m).mul(&vector_rep_r(1)).unwrap();
        let mut x = vec![QFraction::zero(); 4];
        x[1] = qf(QScalar::q_pow(1, 4));
        x[2] = qf(-QScalar::q_pow(-1, 4));
        let y = pr.mul_vec(&x).unwrap();
        assert_eq!(y, x.iter().map(|c| -c.clone()).collect::<Vec<_>>());
    }

    #[test]
    fn yang_baxter_small() {
        assert!(yang_baxter_braid(1).unwrap());
        assert!(yang_baxter_qybe(1).unwrap());
    }

    #[test]
    fn spectrum_small() {
        let s = pr_projector_decomposition(1).unwrap();
        assert!(s.hecke && s.trace_consistent && s.det_consistent);
        assert_eq!((s.symmetric_multiplicity, s.antisymmetric_multiplicity), (3, 1));
        let s = pr_projector_decomposition(2).unwrap();
        assert_eq!((s.symmetric_multiplicity, s.antisymmetric_multiplicity), (6, 3));
    }

    #[test]
    fn littlewood_richardson_examples() {
        assert_eq!(lr_tensor_vector(&[1], 2).unwrap(), vec![vec![1, 1], vec![2]]);
        assert_eq!(lr_tensor_vector(&[], 2).unwrap(), vec![vec![1]]);
        assert_eq!(lr_tensor_vector(&[1, 1], 1).unwrap(), vec![vec![1]]);
        let col = lr_tensor_vector(&[1, 1, 1], 3).unwrap();
        assert!(col.contains(&vec![]));
        assert!(col.contains(&vec![2, 1, 1]));
        assert!(lr_tensor_vector(&[1, 2], 2).is_err());
    }
}
