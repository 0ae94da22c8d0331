use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::HyperError;

/// Parameters of the form: rank `n`, coupling `k`, weights `λ_1..λ_{n+1}` and points `z_1 < ... < z_{n+1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormSpec {
    pub n: usize,
    pub k: f64,
    pub lambda: Vec<f64>,
    pub z: Vec<f64>,
}

impl FormSpec {
    pub fn new(n: usize, k: f64, lambda: Vec<f64>, z: Vec<f64>) -> Result<Self, HyperError> {
        if n == 0 {
            return Err(HyperError::InvalidSpec("n must be at least 1".into()));
        }
        if !(k.is_finite() && k > 0.0) {
            return Err(HyperError::InvalidSpec(format!("k = {k} must be positive")));
        }
        if lambda.len() != n + 1 || z.len() != n + 1 {
            return Err(HyperError::InvalidSpec(format!("need {} weights and {} points", n + 1, n + 1)));
        }
        let sum: f64 = lambda.iter().sum();
        let scale = lambda.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        if sum.abs() > 1e-12 * scale {
            return Err(HyperError::InvalidSpec(format!("weights sum to {sum}, not 0")));
        }
        if z[0] <= 0.0 || z.windows(2).any(|w| w[0] >= w[1]) {
            return Err(HyperError::InvalidSpec(format!("points {z:?} must satisfy 0 < z_1 < ... < z_(n+1)")));
        }
        Ok(Self { n, k, lambda, z })
    }

    /// `λ_i = k(i - 1 - n/2)`, which makes every `t` power and the `z` power trivial.
    pub fn affine_killed(n: usize, k: f64, z: Vec<f64>) -> Result<Self, HyperError> {
        let lambda = (1..=n + 1).map(|i| k * (i as f64 - 1.0 - n as f64 / 2.0)).collect();
        Self::new(n, k, lambda, z)
    }

    /// `z_i = i`.
    pub fn default_z(n: usize) -> Vec<f64> {
        (1..=n + 1).map(|i| i as f64).collect()
    }

    pub fn is_affine_killed(&self) -> bool {
        let n = self.n as f64;
        self.lambda.iter().enumerate().all(|(i, l)| (l - self.k * (i as f64 - n / 2.0)).abs() <= 1e-12 * (1.0 + l.abs()))
    }

    pub fn dims(&self) -> usize {
        self.n * (self.n + 1) / 2
    }

    /// Exponent of `t_{ij}`: `λ_{n-j+2} - λ_{n-j+1} - k`.
    pub fn t_exponent(&self, j: usize) -> f64 {
        self.lambda[self.n - j + 1] - self.lambda[self.n - j] - self.k
    }

    /// Exponent of every `z_i`: `λ_1 + kn/2`.
    pub fn z_exponent(&self) -> f64 {
        self.lambda[0] + self.k * self.n as f64 / 2.0
    }
}

/// Coordinates `t_{ij}`, `1 ≤ i ≤ j ≤ n`; `rows[j-1][i-1] = t_{ij}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TPoint {
    pub rows: Vec<Vec<f64>>,
}

impl TPoint {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self, HyperError> {
        if rows.is_empty() || rows.iter().enumerate().any(|(j, r)| r.len() != j + 1) {
            return Err(HyperError::InvalidSpec("row j must hold j coordinates".into()));
        }
        Ok(Self { rows })
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.rows[j - 1][i - 1]
    }

    /// Flat list in integration order: row `n` first, then rows `n-1, ..., 1`, each left to right.
    pub fn to_flat(&self) -> Vec<f64> {
        self.rows.iter().rev().flatten().copied().collect()
    }

    pub fn from_flat(n: usize, flat: &[f64]) -> Self {
        let mut rows = vec![Vec::new(); n];
        let mut pos = 0;
        for j in (1..=n).rev() {
            rows[j - 1] = flat[pos..pos + j].to_vec();
            pos += j;
        }
        Self { rows }
    }

    /// Whether the point satisfies the interlacing inequalities.
    pub fn in_delta(&self, z: &[f64]) -> bool {
        let n = self.n();
        if z.len() != n + 1 {
            return false;
        }
        for i in 1..=n {
            let t = self.get(i, n);
            if !(z[i - 1] <= t && t <= z[i]) {
                return false;
            }
        }
        for j in 1..n {
            for i in 1..=j {
                let t = self.get(i, j);
                if !(self.get(i, j + 1) <= t && t <= self.get(i + 1, j + 1)) {
                    return false;
                }
            }
        }
        true
    }

    /// A random interior point, sampling each row uniformly inside the interval cut out by the row below.
    pub fn random_interior<R: Rng>(n: usize, z: &[f64], rng: &mut R) -> Self {
        let mut rows = vec![Vec::new(); n];
        let mut below: Vec<f64> = z.to_vec();
        for j in (1..=n).rev() {
            let row: Vec<f64> = (0..j)
                .map(|i| {
                    let u: f64 = rng.random_range(0.02..0.98);
                    below[i] + u * (below[i + 1] - below[i])
                })
                .collect();
            rows[j - 1] = row.clone();
            below = row;
        }
        Self { rows }
    }
}

/// One factor `(difference)^{exponent}` of the form.
struct Factor {
    diff: f64,
    exp: f64,
}

/// Which endpoint factors of the nested parametrization to omit.
#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum Endpoints {
    Include,
    Omit,
}

fn factors(spec: &FormSpec, t: &TPoint, endpoints: Endpoints) -> Vec<Factor> {
    let n = spec.n;
    let k = spec.k;
    let z = &spec.z;
    let mut out = Vec::new();
    let ze = spec.z_exponent();
    for &zi in z {
        out.push(Factor { diff: zi, exp: ze });
    }
    for a in 0..=n {
        for b in 0..a {
            out.push(Factor { diff: z[a] - z[b], exp: 1.0 - 2.0 * k });
        }
    }
    let keep = endpoints == Endpoints::Include;
    for i in 1..=n {
        let t_in = t.get(i, n);
        for l in 1..=n + 1 {
            let adjacent = l == i || l == i + 1;
            if adjacent && !keep {
                continue;
            }
            let diff = if i < l { z[l - 1] - t_in } else { t_in - z[l - 1] };
            out.push(Factor { diff, exp: k - 1.0 });
        }
    }
    for j in 1..n {
        for i1 in 1..=j {
            for i2 in 1..=j + 1 {
                let adjacent = i2 == i1 || i2 == i1 + 1;
                if adjacent && !keep {
                    continue;
                }
                let diff = if i1 >= i2 { t.get(i1, j) - t.get(i2, j + 1) } else { t.get(i2, j + 1) - t.get(i1, j) };
                out.push(Factor { diff, exp: k - 1.0 });
            }
        }
    }
    for j in 2..=n {
        for i1 in 1..=j {
            for i2 in 1..i1 {
                out.push(Factor { diff: t.get(i1, j) - t.get(i2, j), exp: 2.0 - 2.0 * k });
            }
        }
    }
    for j in 1..=n {
        let e = spec.t_exponent(j);
        for i in 1..=j {
            out.push(Factor { diff: t.get(i, j), exp: e });
        }
    }
    out
}

pub(crate) fn product(spec: &FormSpec, t: &TPoint, endpoints: Endpoints) -> f64 {
    let mut log = 0.0;
    for f in factors(spec, t, endpoints) {
        if f.exp == 0.0 {
            continue;
        }
        if f.diff <= 0.0 {
            return if f.exp > 0.0 { 0.0 } else { f64::INFINITY };
        }
        log += f.exp * f.diff.ln();
    }
    log.exp()
}

/// Density of the form on the cycle, with every factor oriented to be nonnegative there.
pub fn eval_form(spec: &FormSpec, t: &TPoint) -> Result<f64, HyperError> {
    if t.n() != spec.n {
        return Err(HyperError::InvalidSpec("point and form have different rank".into()));
    }
    if !t.in_delta(&spec.z) {
        return Err(HyperError::OutsideDelta);
    }
    Ok(product(spec, t, Endpoints::Include))
}

/// Gelfand–Naimark coordinates with the Jacobian of `t ↦ τ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TauTransform {
    /// `tau[j-2][i-1] = τ_{ij}` for `j = 2..n+1`, `i = 1..j`.
    pub tau: Vec<Vec<f64>>,
    pub row_sums: Vec<f64>,
    /// `|det ∂τ/∂t|` from the Vandermonde product formula.
    pub jacobian: f64,
}

impl TauTransform {
    /// The free coordinates `τ_{ij}`, `i < j`, in row order.
    pub fn free(&self) -> Vec<f64> {
        self.tau.iter().flat_map(|row| row[..row.len() - 1].iter().copied()).collect()
    }
}

fn vandermonde(row: &[f64]) -> f64 {
    let mut v = 1.0;
    for a in 0..row.len() {
        for b in a + 1..row.len() {
            v *= (row[b] - row[a]).abs();
        }
    }
    v
}

/// `τ_{ij} = Π_a (t_{a,j-1} - t_{ij}) / Π_{b≠i} (t_{bj} - t_{ij})`, with row `n+1` given by `z`.
/// No ordering of `z` is assumed.
pub fn tau_coordinates(z: &[f64], t: &TPoint) -> Result<TauTransform, HyperError> {
    let n = t.n();
    if z.len() != n + 1 {
        return Err(HyperError::InvalidSpec(format!("need {} points", n + 1)));
    }
    let row = |j: usize| -> Vec<f64> { if j == n + 1 { z.to_vec() } else { t.rows[j - 1].clone() } };
    let mut tau = Vec::with_capacity(n);
    let mut row_sums = Vec::with_capacity(n);
    let mut jacobian = 1.0;
    for j in 2..=n + 1 {
        let upper = row(j);
        let lower = row(j - 1);
        let mut r = Vec::with_capacity(j);
        for i in 0..j {
            let x = upper[i];
            let num: f64 = lower.iter().map(|a| a - x).product();
            let mut den = 1.0;
            for (b, y) in upper.iter().enumerate() {
                if b != i {
                    den *= y - x;
                }
            }
            if den == 0.0 {
                return Err(HyperError::CoincidentPoints);
            }
            r.push(num / den);
        }
        row_sums.push(r.iter().sum());
        jacobian *= vandermonde(&lower) / vandermonde(&upper);
        tau.push(r);
    }
    Ok(TauTransform { tau, row_sums, jacobian })
}

/// [`tau_coordinates`] for a point of the cycle; row sums must equal 1.
pub fn tau_transform(spec: &FormSpec, t: &TPoint) -> Result<TauTransform, HyperError> {
    if !t.in_delta(&spec.z) {
        return Err(HyperError::OutsideDelta);
    }
    let tr = tau_coordinates(&spec.z, t)?;
    for (j, s) in tr.row_sums.iter().enumerate() {
        if (s - 1.0).abs() > 1e-9 {
            return Err(HyperError::RowSum { row: j + 2, sum: *s });
        }
    }
    Ok(tr)
}

/// `|det ∂τ/∂t|` by central differences with relative step `h`.
pub fn fd_jacobian(z: &[f64], t: &TPoint, h: f64) -> Result<f64, HyperError> {
    let n = t.n();
    let x0 = t.to_flat();
    let m = x0.len();
    let mut jac = DMatrix::<f64>::zeros(m, m);
    for c in 0..m {
        let step = h * x0[c].abs().max(1.0);
        let mut xp = x0.clone();
        let mut xm = x0.clone();
        xp[c] += step;
        xm[c] -= step;
        let fp = tau_coordinates(z, &TPoint::from_flat(n, &xp))?.free();
        let fm = tau_coordinates(z, &TPoint::from_flat(n, &xm))?.free();
        for r in 0..m {
            jac[(r, c)] = (fp[r] - fm[r]) / (2.0 * step);
        }
    }
    Ok(jac.determinant().abs())
}

/// Both sides of `ω_Δ = Π_j (τ_{1j} ... τ_{jj})^{k-1} |det ∂τ/∂t|` at one point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointwiseCheck {
    pub omega: f64,
    pub transformed: f64,
    pub abs_diff: f64,
    pub rel_diff: f64,
}

pub fn tau_pointwise_check(spec: &FormSpec, t: &TPoint) -> Result<PointwiseCheck, HyperError> {
    if !spec.is_affine_killed() {
        return Err(HyperError::NotAffineKilled);
    }
    let omega = eval_form(spec, t)?;
    let tr = tau_transform(spec, t)?;
    let mut log = tr.jacobian.ln();
    for row in &tr.tau {
        for &x in row {
            log += (spec.k - 1.0) * x.ln();
        }
    }
    let transformed = log.exp();
    let abs_diff = (omega - transformed).abs();
    Ok(PointwiseCheck { omega, transformed, abs_diff, rel_diff: abs_diff / omega.abs() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn form_examples() {
        let s = FormSpec::affine_killed(1, 1.0, vec![1.0, 2.0]).unwrap();
        let t = TPoint::new(vec![vec![1.5]]).unwrap();
        assert!((eval_form(&s, &t).unwrap() - 1.0).abs() < 1e-15);
        let s = FormSpec::affine_killed(1, 0.5, vec![1.0, 2.0]).unwrap();
        assert!((eval_form(&s, &t).unwrap() - 2.0).abs() < 1e-14);
        let s = FormSpec::affine_killed(2, 1.5, vec![1.0, 2.0, 3.0]).unwrap();
        let facet = TPoint::new(vec![vec![1.5], vec![1.5, 2.5]]).unwrap();
        assert_eq!(eval_form(&s, &facet).unwrap(), 0.0);
        let outside = TPoint::new(vec![vec![0.5]]).unwrap();
        assert!(matches!(eval_form(&FormSpec::affine_killed(1, 1.0, vec![1.0, 2.0]).unwrap(), &outside), Err(HyperError::OutsideDelta)));
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(FormSpec::new(1, 1.0, vec![1.0, 1.0], vec![1.0, 2.0]).is_err());
        assert!(FormSpec::affine_killed(1, 1.0, vec![2.0, 1.0]).is_err());
        assert!(FormSpec::affine_killed(1, -1.0, vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn one_dimensional_tau() {
        let tr = tau_coordinates(&[0.0, 1.0], &TPoint::new(vec![vec![0.5]]).unwrap()).unwrap();
        assert!((tr.tau[0][0] - 0.5).abs() < 1e-15);
        assert!((tr.tau[0][1] - 0.5).abs() < 1e-15);
        assert!((tr.jacobian - 1.0).abs() < 1e-15);
    }

    #[test]
    fn row_sums_and_jacobian() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=3 {
            let z = FormSpec::default_z(n);
            for _ in 0..10 {
                let t = TPoint::random_interior(n, &z, &mut rng);
                let tr = tau_coordinates(&z, &t).unwrap();
                for s in &tr.row_sums {
                    assert!((s - 1.0).abs() < 1e-12);
                }
                assert!(tr.tau.iter().flatten().all(|&x| x > 0.0));
                let fd = fd_jacobian(&z, &t, 1e-6).unwrap();
                assert!(((fd - tr.jacobian) / tr.jacobian).abs() < 1e-6, "n={n}: {fd} vs {}", tr.jacobian);
            }
        }
    }

    #[test]
    fn flat_round_trip() {
        let t = TPoint::new(vec![vec![1.0], vec![2.0, 3.0]]).unwrap();
        assert_eq!(t.to_flat(), vec![2.0, 3.0, 1.0]);
        assert_eq!(TPoint::from_flat(2, &t.to_flat()), t);
    }
}
