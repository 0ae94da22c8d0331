use num_traits::ToPrimitive;
use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use super::form::{product, Endpoints};
use super::quadrature::{quadrature_registry, Interval, NestedIntegrand, Node, QuadConfig, QuadEstimate, TanhSinh};
use super::{FormSpec, HyperError, QuadratureScheme, TPoint};
use crate::repcore::Weight;

/// `∏_{i=1}^{n+1} Γ(k)^i / ∏_{i=1}^{n+1} Γ(ik)`.
pub fn gamma_ratio(n: usize, k: f64) -> Result<f64, HyperError> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(HyperError::InvalidSpec(format!("k = {k} must be positive")));
    }
    let lg = ln_gamma(k);
    let log: f64 = (1..=n + 1).map(|i| i as f64 * lg - ln_gamma(i as f64 * k)).sum();
    Ok(log.exp())
}

/// Dirichlet integral over the standard `j`-simplex: `Γ(k)^{j+1} / Γ((j+1)k)`.
pub fn dirichlet_simplex(j: usize, k: f64) -> Result<f64, HyperError> {
    if j == 0 || !(k > 0.0 && k.is_finite()) {
        return Err(HyperError::InvalidSpec(format!("need j ≥ 1 and k > 0, got j = {j}, k = {k}")));
    }
    Ok(((j + 1) as f64 * ln_gamma(k) - ln_gamma((j + 1) as f64 * k)).exp())
}

/// `B(a, b) = Γ(a)Γ(b)/Γ(a+b)`.
pub fn euler_beta(a: f64, b: f64) -> Result<f64, HyperError> {
    if !(a > 0.0 && b > 0.0) {
        return Err(HyperError::Divergent(format!("beta integral B({a}, {b}) diverges")));
    }
    Ok((ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp())
}

/// Which scheme to run, its resolution, and the relative tolerance for convergence.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadratureSpec {
    pub scheme: String,
    pub config: QuadConfig,
    pub tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { scheme: "gauss-jacobi-tensor".into(), config: QuadConfig::default(), tolerance: 1e-6 }
    }
}

impl QuadratureSpec {
    pub fn with_nodes(nodes: usize) -> Self {
        Self { config: QuadConfig { nodes, ..QuadConfig::default() }, ..Self::default() }
    }

    fn run(&self, f: &dyn NestedIntegrand) -> Result<QuadEstimate, HyperError> {
        let reg = quadrature_registry();
        let scheme = reg.get(&self.scheme)?;
        let est = scheme.integrate(f, &self.config)?;
        if !est.value.is_finite() || est.error > self.tolerance * est.value.abs().max(1.0) {
            return Err(HyperError::Nonconvergence { fine: est.value, coarse: est.coarse, error: est.error });
        }
        Ok(est)
    }
}

/// The form on the cycle as a nested integral: row `n` first, then each row inside the one below.
pub struct ZonalIntegrand<'a> {
    spec: &'a FormSpec,
}

impl<'a> ZonalIntegrand<'a> {
    pub fn new(spec: &'a FormSpec) -> Self {
        Self { spec }
    }

    /// Flat index `d` to `(i, j)`, following [`TPoint::to_flat`].
    fn position(&self, d: usize) -> (usize, usize) {
        let mut d = d;
        for j in (1..=self.spec.n).rev() {
            if d < j {
                return (d + 1, j);
            }
            d -= j;
        }
        unreachable!("coordinate index out of range")
    }
}

impl NestedIntegrand for ZonalIntegrand<'_> {
    fn dims(&self) -> usize {
        self.spec.dims()
    }

    fn interval(&self, d: usize, prefix: &[Node]) -> Interval {
        let n = self.spec.n;
        let (i, j) = self.position(d);
        let e = self.spec.k - 1.0;
        if j == n {
            return Interval { lo: self.spec.z[i - 1], hi: self.spec.z[i], lo_exp: e, hi_exp: e };
        }
        // offset of row j+1 in the flat order
        let below: usize = (j + 2..=n).sum();
        Interval { lo: prefix[below + i - 1].x, hi: prefix[below + i].x, lo_exp: e, hi_exp: e }
    }

    fn density(&self, nodes: &[Node]) -> f64 {
        let flat: Vec<f64> = nodes.iter().map(|n| n.x).collect();
        product(self.spec, &TPoint::from_flat(self.spec.n, &flat), Endpoints::Omit)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZonalResult {
    pub value: f64,
    pub target: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub error_estimate: f64,
    pub evaluations: u64,
}

/// `∫_Δ ω_Δ` for the affine-killed weights, compared with [`gamma_ratio`].
pub fn integrate_zonal(spec: &FormSpec, quad: &QuadratureSpec) -> Result<ZonalResult, HyperError> {
    if !spec.is_affine_killed() {
        return Err(HyperError::NotAffineKilled);
    }
    let est = quad.run(&ZonalIntegrand::new(spec))?;
    let target = gamma_ratio(spec.n, spec.k)?;
    let abs_err = (est.value - target).abs();
    Ok(ZonalResult {
        value: est.value,
        target,
        abs_err,
        rel_err: abs_err / target.abs(),
        error_estimate: est.error,
        evaluations: est.evaluations,
    })
}

/// `|∫ ω_Δ(z) - ∫ ω_Δ(z')|` for two specs that differ only in the points.
pub fn z_independence(a: &FormSpec, b: &FormSpec, quad: &QuadratureSpec) -> Result<f64, HyperError> {
    if a.n != b.n || a.k != b.k || a.lambda != b.lambda {
        return Err(HyperError::InvalidSpec("specs must differ only in z".into()));
    }
    Ok((integrate_zonal(a, quad)?.value - integrate_zonal(b, quad)?.value).abs())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BetaCheck {
    pub numeric: f64,
    pub closed_form: f64,
    pub abs_err: f64,
}

struct OneDim {
    lo: f64,
    hi: f64,
    exp: f64,
}

impl NestedIntegrand for OneDim {
    fn dims(&self) -> usize {
        1
    }
    fn interval(&self, _: usize, _: &[Node]) -> Interval {
        Interval { lo: self.lo, hi: self.hi, lo_exp: self.exp, hi_exp: self.exp }
    }
    fn density(&self, _: &[Node]) -> f64 {
        1.0
    }
}

const BETA_NODES: usize = 401;

/// `∫_{z1}^{z2} (t - z1)^{-k} (z2 - t)^{-k} dt` by tanh–sinh against `(z2 - z1)^{1-2k} Γ(1-k)² / Γ(2-2k)`.
pub fn beta_check(k: f64, z1: f64, z2: f64) -> Result<BetaCheck, HyperError> {
    if k.partial_cmp(&1.0) != Some(std::cmp::Ordering::Less) || !k.is_finite() {
        return Err(HyperError::Divergent(format!("exponent -{k} is not integrable")));
    }
    if z1.partial_cmp(&z2) != Some(std::cmp::Ordering::Less) {
        return Err(HyperError::InvalidSpec(format!("need z1 < z2, got {z1}, {z2}")));
    }
    let closed_form = (z2 - z1).powf(1.0 - 2.0 * k) * euler_beta(1.0 - k, 1.0 - k)?;
    let cfg = QuadConfig { nodes: BETA_NODES, ..QuadConfig::default() };
    let numeric = TanhSinh.integrate(&OneDim { lo: z1, hi: z2, exp: -k }, &cfg)?.value;
    Ok(BetaCheck { numeric, closed_form, abs_err: (numeric - closed_form).abs() })
}

/// `(λ, α_i)` for `i = 1..s-1`.
pub fn pairings_from_weight(lambda: &Weight, s: usize) -> Result<Vec<f64>, HyperError> {
    if s < 2 || lambda.coords().len() < s + 1 {
        return Err(HyperError::InvalidSpec(format!("weight too short for s = {s}")));
    }
    Ok((1..s).map(|i| lambda.pair_root(i).to_f64().unwrap_or(f64::NAN)).collect())
}

/// `∏_p B(k A_p + (p-1)k, 1 + k)` with `A_p = a_{s-p} + ... + a_{s-1}`.
pub fn asymptotic_closed_form(pairings: &[f64], k: f64) -> Result<f64, HyperError> {
    let s = pairings.len() + 1;
    let mut acc = 1.0;
    for p in 1..s {
        let a: f64 = pairings[s - 1 - p..].iter().sum();
        let arg = k * a + (p as f64 - 1.0) * k;
        if arg <= 0.0 {
            return Err(HyperError::GammaPole { argument: arg });
        }
        acc *= euler_beta(arg, 1.0 + k)?;
    }
    Ok(acc)
}

/// `∫_{0 ≤ t_{s-1} ≤ ... ≤ t_1 ≤ z} ∏ t_i^{k a_i - 1} (t_{i-1} - t_i)^k dt`, with `t_0 = z`.
struct ChainIntegrand<'a> {
    pairings: &'a [f64],
    k: f64,
    z: f64,
}

impl NestedIntegrand for ChainIntegrand<'_> {
    fn dims(&self) -> usize {
        self.pairings.len()
    }
    fn interval(&self, d: usize, prefix: &[Node]) -> Interval {
        let hi = if d == 0 { self.z } else { prefix[d - 1].x };
        Interval { lo: 0.0, hi, lo_exp: self.k * self.pairings[d] - 1.0, hi_exp: self.k }
    }
    fn density(&self, _: &[Node]) -> f64 {
        1.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AsymptoticCheck {
    pub closed_form: f64,
    pub numeric: f64,
    pub abs_err: f64,
    pub error_estimate: f64,
}

/// Leading coefficient of the chain integral: quadrature divided by `z^{k Σ a_i + (s-1) k}`.
pub fn asymptotic_coefficient(
    pairings: &[f64],
    k: f64,
    z: f64,
    quad: &QuadratureSpec,
) -> Result<AsymptoticCheck, HyperError> {
    if pairings.is_empty() {
        return Err(HyperError::InvalidSpec("need s ≥ 2".into()));
    }
    if !(k > 0.0 && z > 0.0) {
        return Err(HyperError::InvalidSpec(format!("need k > 0 and z > 0, got k = {k}, z = {z}")));
    }
    let closed_form = asymptotic_closed_form(pairings, k)?;
    if let Some(a) = pairings.iter().find(|&&a| a <= 0.0) {
        return Err(HyperError::Divergent(format!("pairing {a} gives a non-integrable endpoint")));
    }
    let est = quad.run(&ChainIntegrand { pairings, k, z })?;
    let s = pairings.len() + 1;
    let power = k * pairings.iter().sum::<f64>() + (s as f64 - 1.0) * k;
    let scale = z.powf(power);
    let numeric = est.value / scale;
    Ok(AsymptoticCheck { closed_form, numeric, abs_err: (numeric - closed_form).abs(), error_estimate: est.error / scale })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn gamma_ratio_examples() {
        assert!((gamma_ratio(1, 0.5).unwrap() - PI).abs() < 1e-13);
        assert!((gamma_ratio(1, 1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((gamma_ratio(2, 1.0).unwrap() - 0.5).abs() < 1e-14);
        assert!((gamma_ratio(2, 0.5).unwrap() - 2.0 * PI * PI).abs() < 1e-12);
        assert!(gamma_ratio(1, 0.0).is_err());
    }

    #[test]
    fn dirichlet_telescopes() {
        for k in [0.3, 0.5, 1.0, 1.7, 2.0] {
            for n in 1..=4 {
                let p: f64 = (1..=n).map(|j| dirichlet_simplex(j, k).unwrap()).product();
                let g = gamma_ratio(n, k).unwrap();
                assert!(((p - g) / g).abs() < 1e-12, "n={n} k={k}");
            }
        }
        assert!((dirichlet_simplex(1, 0.5).unwrap() - PI).abs() < 1e-13);
    }

    #[test]
    fn zonal_one_dimensional() {
        // n = 1 targets are B(k, k)
        for (k, target) in [(0.5, PI), (1.0, 1.0), (2.0, 1.0 / 6.0)] {
            let spec = FormSpec::affine_killed(1, k, vec![1.0, 2.0]).unwrap();
            let r = integrate_zonal(&spec, &QuadratureSpec::with_nodes(16)).unwrap();
            assert!(r.rel_err < 1e-12, "k={k}: {r:?}");
            assert!((r.target - target).abs() < 1e-13);
        }
    }

    #[test]
    fn zonal_rejects_generic_weights() {
        let spec = FormSpec::new(1, 0.5, vec![1.0, -1.0], vec![1.0, 2.0]).unwrap();
        assert_eq!(integrate_zonal(&spec, &QuadratureSpec::default()), Err(HyperError::NotAffineKilled));
    }

    #[test]
    fn beta_examples() {
        let b = beta_check(0.5, 0.0, 1.0).unwrap();
        assert!((b.closed_form - PI).abs() < 1e-14 && b.abs_err < 1e-9);
        let b = beta_check(0.0, 1.0, 3.5).unwrap();
        assert!((b.closed_form - 2.5).abs() < 1e-14 && b.abs_err < 1e-12);
        assert!(beta_check(1.0, 0.0, 1.0).is_err());
        assert!((euler_beta(1.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn asymptotic_unit_pairing() {
        let r = asymptotic_coefficient(&[1.0], 0.5, 1.0, &QuadratureSpec::with_nodes(24)).unwrap();
        assert!((r.closed_form - PI / 2.0).abs() < 1e-14);
        assert!(r.abs_err < 1e-12);
        assert!(matches!(asymptotic_closed_form(&[-2.0], 0.5), Err(HyperError::GammaPole { .. })));
    }
}
