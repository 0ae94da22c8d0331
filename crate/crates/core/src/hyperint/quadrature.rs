//! Nested quadrature over iterated intervals with algebraic endpoint singularities.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;
use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use super::HyperError;
use crate::registry::{Registry, Strategy};

/// A quadrature point with exact distances to both ends of its interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Node {
    pub x: f64,
    pub from_lo: f64,
    pub to_hi: f64,
}

/// Integration range of one coordinate, with the endpoint weight `(x - lo)^{lo_exp} (hi - x)^{hi_exp}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_exp: f64,
    pub hi_exp: f64,
}

/// An integral `∫ dx_1 ∫ dx_2 ... ∫ dx_m f`, where the range of `x_d` depends on `x_1..x_{d-1}`.
pub trait NestedIntegrand: Sync {
    fn dims(&self) -> usize;
    fn interval(&self, d: usize, prefix: &[Node]) -> Interval;
    /// The integrand divided by the endpoint weights of every coordinate.
    fn density(&self, nodes: &[Node]) -> f64;
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadConfig {
    /// Nodes per dimension for product rules.
    pub nodes: usize,
    /// Sample count for Monte Carlo.
    pub samples: usize,
    pub seed: u64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self { nodes: 32, samples: 1 << 20, seed: 1 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadEstimate {
    pub value: f64,
    /// `|I_N - I_{N/2}|` for product rules, the standard error for Monte Carlo.
    pub error: f64,
    /// The half-resolution value behind the error estimate of product rules.
    pub coarse: Option<f64>,
    pub evaluations: u64,
}

pub trait QuadratureScheme: Strategy + Sync {
    fn integrate(&self, f: &dyn NestedIntegrand, cfg: &QuadConfig) -> Result<QuadEstimate, HyperError>;
}

pub fn quadrature_registry() -> Registry<dyn QuadratureScheme> {
    let mut r: Registry<dyn QuadratureScheme> = Registry::new("quadrature scheme");
    r.register(Box::new(GaussJacobiTensor));
    r.register(Box::new(TanhSinh));
    r.register(Box::new(MonteCarlo));
    r
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Default)]
struct Compensated {
    sum: f64,
    c: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.c
    }
}

/// Nodes `ξ` on `[-1, 1]` with `1 + ξ`, `1 - ξ` and weights.
#[derive(Clone, Debug)]
pub struct Rule1d {
    pub onepx: Vec<f64>,
    pub onemx: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Gauss–Jacobi rule for `(1 - x)^α (1 + x)^β` by the Golub–Welsch eigenvalue method.
pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64) -> Result<Arc<Rule1d>, HyperError> {
    if n == 0 || !(alpha > -1.0 && beta > -1.0) {
        return Err(HyperError::Divergent(format!("Gauss–Jacobi needs α, β > -1, got ({alpha}, {beta})")));
    }
    type RuleCache = Mutex<HashMap<(u64, u64, usize), Arc<Rule1d>>>;
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    let key = (alpha.to_bits(), beta.to_bits(), n);
    let cache = CACHE.get_or_init(Default::default);
    if let Some(r) = cache.lock().expect("rule cache").get(&key) {
        return Ok(r.clone());
    }
    let ab = alpha + beta;
    let mut m = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let jf = j as f64;
        m[(j, j)] = if j == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            (beta * beta - alpha * alpha) / ((2.0 * jf + ab) * (2.0 * jf + ab + 2.0))
        };
        if j + 1 < n {
            let i = jf + 1.0;
            let b2 = if j == 0 {
                4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                4.0 * i * (i + alpha) * (i + beta) * (i + ab)
                    / ((2.0 * i + ab).powi(2) * (2.0 * i + ab + 1.0) * (2.0 * i + ab - 1.0))
            };
            m[(j, j + 1)] = b2.sqrt();
            m[(j + 1, j)] = b2.sqrt();
        }
    }
    let eig = SymmetricEigen::new(m);
    let ln_mu0 = (ab + 1.0) * std::f64::consts::LN_2 + ln_gamma(alpha + 1.0) + ln_gamma(beta + 1.0)
        - ln_gamma(ab + 2.0);
    let mu0 = ln_mu0.exp();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut rule = Rule1d { onepx: vec![], onemx: vec![], weights: vec![] };
    for &c in &idx {
        let x = eig.eigenvalues[c].clamp(-1.0, 1.0);
        rule.onepx.push(1.0 + x);
        rule.onemx.push(1.0 - x);
        rule.weights.push(mu0 * eig.eigenvectors[(0, c)].powi(2));
    }
    let rule = Arc::new(rule);
    cache.lock().expect("rule cache").insert(key, rule.clone());
    Ok(rule)
}

/// Tanh–sinh rule with `n` nodes (unit weight on `[-1, 1]`); `1 ± x` are computed without cancellation.
pub fn tanh_sinh_rule(n: usize) -> Rule1d {
    let n = n.max(3) | 1;
    let kmax = (n / 2) as f64;
    let umax = 4.5;
    let h = umax / kmax;
    let mut rule = Rule1d { onepx: vec![], onemx: vec![], weights: vec![] };
    let half_pi = std::f64::consts::FRAC_PI_2;
    for kk in -(n as i64 / 2)..=(n as i64 / 2) {
        let t = kk as f64 * h;
        let u = half_pi * t.sinh();
        // 1 - tanh(u) = 2 / (1 + e^{2u}), 1 + tanh(u) = 2 / (1 + e^{-2u})
        rule.onemx.push(2.0 / (1.0 + (2.0 * u).exp()));
        rule.onepx.push(2.0 / (1.0 + (-2.0 * u).exp()));
        rule.weights.push(h * half_pi * t.cosh() / u.cosh().powi(2));
    }
    rule
}

fn product_rule<F>(f: &dyn NestedIntegrand, rule_for: &F) -> Result<(f64, u64), HyperError>
where
    F: Fn(&Interval) -> Result<(Arc<Rule1d>, bool), HyperError> + Sync,
{
    fn rec<F>(f: &dyn NestedIntegrand, rule_for: &F, prefix: &mut Vec<Node>) -> Result<(f64, u64), HyperError>
    where
        F: Fn(&Interval) -> Result<(Arc<Rule1d>, bool), HyperError> + Sync,
    {
        let d = prefix.len();
        if d == f.dims() {
            return Ok((f.density(prefix), 1));
        }
        let iv = f.interval(d, prefix);
        let h = iv.hi - iv.lo;
        if h <= 0.0 {
            return Ok((0.0, 0));
        }
        let half = h / 2.0;
        let (rule, absorbed) = rule_for(&iv)?;
        let mut acc = Compensated::default();
        let mut evals = 0;
        for k in 0..rule.weights.len() {
            let node = Node { x: iv.lo + half * rule.onepx[k], from_lo: half * rule.onepx[k], to_hi: half * rule.onemx[k] };
            if node.from_lo <= 0.0 || node.to_hi <= 0.0 {
                continue;
            }
            prefix.push(node);
            let (v, e) = rec(f, rule_for, prefix)?;
            prefix.pop();
            evals += e;
            let w = if absorbed {
                rule.weights[k]
            } else {
                rule.weights[k] * node.from_lo.powf(iv.lo_exp) * node.to_hi.powf(iv.hi_exp)
            };
            acc.add(w * v);
        }
        let scale = if absorbed { half.powf(1.0 + iv.lo_exp + iv.hi_exp) } else { half };
        Ok((scale * acc.value(), evals))
    }

    if f.dims() == 0 {
        return Ok((f.density(&[]), 1));
    }
    // Parallelize over the outermost nodes.
    let iv = f.interval(0, &[]);
    let h = iv.hi - iv.lo;
    if h <= 0.0 {
        return Ok((0.0, 0));
    }
    let half = h / 2.0;
    let (rule, absorbed) = rule_for(&iv)?;
    let parts: Vec<Result<(f64, u64), HyperError>> = (0..rule.weights.len())
        .into_par_iter()
        .map(|k| {
            let node = Node { x: iv.lo + half * rule.onepx[k], from_lo: half * rule.onepx[k], to_hi: half * rule.onemx[k] };
            if node.from_lo <= 0.0 || node.to_hi <= 0.0 {
                return Ok((0.0, 0));
            }
            let mut prefix = vec![node];
            let (v, e) = rec(f, rule_for, &mut prefix)?;
            let w = if absorbed {
                rule.weights[k]
            } else {
                rule.weights[k] * node.from_lo.powf(iv.lo_exp) * node.to_hi.powf(iv.hi_exp)
            };
            Ok((w * v, e))
        })
        .collect();
    let mut acc = Compensated::default();
    let mut evals = 0;
    for p in parts {
        let (v, e) = p?;
        acc.add(v);
        evals += e;
    }
    let scale = if absorbed { half.powf(1.0 + iv.lo_exp + iv.hi_exp) } else { half };
    Ok((scale * acc.value(), evals))
}

fn refine<G>(nodes: usize, run: G) -> Result<QuadEstimate, HyperError>
where
    G: Fn(usize) -> Result<(f64, u64), HyperError>,
{
    if nodes < 2 {
        return Err(HyperError::InvalidSpec("at least two nodes per dimension are required".into()));
    }
    let (fine, e1) = run(nodes)?;
    let (coarse, e2) = run((nodes / 2).max(1))?;
    Ok(QuadEstimate { value: fine, error: (fine - coarse).abs(), coarse: Some(coarse), evaluations: e1 + e2 })
}

/// Tensor Gauss–Jacobi: each coordinate's endpoint weight is absorbed into its rule.
pub struct GaussJacobiTensor;

impl Strategy for GaussJacobiTensor {
    fn name(&self) -> &'static str {
        "gauss-jacobi-tensor"
    }
    fn description(&self) -> &'static str {
        "tensor Gauss–Jacobi rules with per-coordinate endpoint exponents"
    }
}

impl QuadratureScheme for GaussJacobiTensor {
    fn integrate(&self, f: &dyn NestedIntegrand, cfg: &QuadConfig) -> Result<QuadEstimate, HyperError> {
        refine(cfg.nodes, |n| product_rule(f, &|iv: &Interval| Ok((gauss_jacobi(n, iv.hi_exp, iv.lo_exp)?, true))))
    }
}

/// Tensor tanh–sinh: endpoint weights are evaluated at the nodes.
pub struct TanhSinh;

impl Strategy for TanhSinh {
    fn name(&self) -> &'static str {
        "tanh-sinh"
    }
    fn description(&self) -> &'static str {
        "tensor double-exponential rules on [-4.5, 4.5] in the tanh-sinh variable"
    }
}

impl QuadratureScheme for TanhSinh {
    fn integrate(&self, f: &dyn NestedIntegrand, cfg: &QuadConfig) -> Result<QuadEstimate, HyperError> {
        refine(cfg.nodes, |n| {
            let rule = Arc::new(tanh_sinh_rule(n));
            product_rule(f, &|_: &Interval| Ok((rule.clone(), false)))
        })
    }
}

/// Importance-sampled Monte Carlo: each coordinate is drawn from the Beta law of its endpoint weight.
pub struct MonteCarlo;

impl Strategy for MonteCarlo {
    fn name(&self) -> &'static str {
        "monte-carlo"
    }
    fn description(&self) -> &'static str {
        "Monte Carlo with Beta proposals matching the endpoint exponents; seeded, block-parallel"
    }
}

const MC_BLOCK: usize = 4096;

impl QuadratureScheme for MonteCarlo {
    fn integrate(&self, f: &dyn NestedIntegrand, cfg: &QuadConfig) -> Result<QuadEstimate, HyperError> {
        if cfg.samples < 2 {
            return Err(HyperError::InvalidSpec("at least two samples are required".into()));
        }
        let blocks = cfg.samples.div_ceil(MC_BLOCK);
        let sums: Vec<Result<(f64, f64, u64), HyperError>> = (0..blocks)
            .into_par_iter()
            .map(|b| {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(b as u64);
                let count = MC_BLOCK.min(cfg.samples - b * MC_BLOCK);
                let (mut s, mut s2) = (Compensated::default(), Compensated::default());
                let mut nodes = Vec::with_capacity(f.dims());
                for _ in 0..count {
                    nodes.clear();
                    let mut weight = 1.0;
                    for d in 0..f.dims() {
                        let iv = f.interval(d, &nodes);
                        let h = iv.hi - iv.lo;
                        if h <= 0.0 {
                            weight = 0.0;
                            break;
                        }
                        let a = Gamma::new(iv.lo_exp + 1.0, 1.0).map_err(|e| HyperError::Divergent(e.to_string()))?;
                        let c = Gamma::new(iv.hi_exp + 1.0, 1.0).map_err(|e| HyperError::Divergent(e.to_string()))?;
                        let (x, y): (f64, f64) = (a.sample(&mut rng), c.sample(&mut rng));
                        let u = x / (x + y);
                        let v = y / (x + y);
                        let ln_b = ln_gamma(iv.lo_exp + 1.0) + ln_gamma(iv.hi_exp + 1.0)
                            - ln_gamma(iv.lo_exp + iv.hi_exp + 2.0);
                        weight *= (ln_b + (1.0 + iv.lo_exp + iv.hi_exp) * h.ln()).exp();
                        nodes.push(Node { x: iv.lo + h * u, from_lo: h * u, to_hi: h * v });
                    }
                    let val = if weight == 0.0 { 0.0 } else { weight * f.density(&nodes) };
                    s.add(val);
                    s2.add(val * val);
                }
                Ok((s.value(), s2.value(), count as u64))
            })
            .collect();
        let (mut s, mut s2) = (Compensated::default(), Compensated::default());
        let mut total = 0u64;
        for r in sums {
            let (a, b, c) = r?;
            s.add(a);
            s2.add(b);
            total += c;
        }
        let nf = total as f64;
        let mean = s.value() / nf;
        let var = (s2.value() / nf - mean * mean).max(0.0);
        Ok(QuadEstimate { value: mean, error: (var / (nf - 1.0)).sqrt(), coarse: None, evaluations: total })
    }
}
