//! The ten acceptance criteria, one pass/fail line each.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zonal_core::braiding::{
    build_r, default_depth, permutation_matrix, pr_projector_decomposition, string_pair_checks, tensor_dual_image,
    vector_rep_r, yang_baxter_braid, yang_baxter_qybe, DEFAULT_TRIANGULARITY,
};
use zonal_core::cycles::{
    apply_braid_word, braid_eigen_check, chain_vertex_singular, encode_chain_vertex, encode_cycle, path_count,
    singular_check, CycleForm, Diagram, WordOrder,
};
use zonal_core::exactq::{rat, QFraction, QScalar};
use zonal_core::hyperint::{
    asymptotic_coefficient, beta_check, integrate_zonal, tau_pointwise_check, FormSpec, QuadratureSpec, TPoint,
};
use zonal_core::repcore::{gram_rank_table, RootData};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg)
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn zonal(n: usize, k: f64, z: Vec<f64>, nodes: usize, tol: f64) -> Result<f64, String> {
    let spec = FormSpec::affine_killed(n, k, z).map_err(err)?;
    let mut q = QuadratureSpec::with_nodes(nodes);
    q.tolerance = tol;
    Ok(integrate_zonal(&spec, &q).map_err(err)?.value)
}

/// Gamma ratios evaluated by hand.
fn constant_target(n: usize, k: f64) -> f64 {
    match (n, k) {
        (1, 0.5) => PI,
        (1, 1.0) => 1.0,
        (1, 2.0) => 1.0 / 6.0,
        (2, 0.5) => 2.0 * PI * PI,
        (2, 1.0) => 0.5,
        (2, 2.0) => 1.0 / 720.0,
        _ => unreachable!(),
    }
}

fn gamma_constant() -> Outcome {
    let mut worst: f64 = 0.0;
    for (n, ks, nodes, tol, budget) in [
        (1, &[0.5, 1.0, 2.0][..], 64, 1e-6, Duration::from_secs(1)),
        (2, &[0.5, 1.0][..], 32, 1e-4, Duration::from_secs(60)),
    ] {
        for &k in ks {
            let start = Instant::now();
            let v = zonal(n, k, FormSpec::default_z(n), nodes, tol)?;
            let elapsed = start.elapsed();
            let target = constant_target(n, k);
            let rel = ((v - target) / target).abs();
            worst = worst.max(rel);
            ensure(rel < tol, format!("n={n} k={k}: {v} vs {target}, rel err {rel:e}"))?;
            ensure(elapsed < budget, format!("n={n} k={k}: took {elapsed:?}"))?;
        }
    }
    Ok(format!("max rel err {worst:.2e}"))
}

fn z_independence() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 1..=2 {
        let configs: Vec<Vec<f64>> = if n == 1 {
            vec![vec![1.0, 2.0], vec![1.0, 3.0], vec![2.0, 5.0]]
        } else {
            vec![vec![1.0, 2.0, 3.0], vec![1.0, 2.0, 4.0], vec![0.5, 3.0, 3.5]]
        };
        let tol = if n == 1 { 1e-6 } else { 1e-4 };
        for k in [0.5, 1.0, 2.0] {
            let scale = constant_target(n, k);
            let values: Vec<f64> =
                configs.iter().map(|z| zonal(n, k, z.clone(), 32, tol)).collect::<Result<_, _>>()?;
            for a in 0..values.len() {
                for b in a + 1..values.len() {
                    let d = (values[a] - values[b]).abs() / scale;
                    worst = worst.max(d);
                    ensure(
                        d <= 2.0 * tol,
                        format!("n={n} k={k}: {:?} vs {:?} differ by {d:e}", configs[a], configs[b]),
                    )?;
                }
            }
        }
    }
    Ok(format!("max pairwise rel diff {worst:.2e}"))
}

fn tau_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for n in 1..=3 {
        for k in [0.5, 1.0, 1.5, 2.0] {
            let z: Vec<f64> = (0..=n).map(|i| 0.5 + i as f64 * 1.3).collect();
            let spec = FormSpec::affine_killed(n, k, z.clone()).map_err(err)?;
            for _ in 0..100 {
                let t = TPoint::random_interior(n, &z, &mut rng);
                let c = tau_pointwise_check(&spec, &t).map_err(err)?;
                worst = worst.max(c.rel_diff);
                ensure(c.rel_diff < 1e-9, format!("n={n} k={k} at {:?}: {c:?}", t.rows))?;
            }
        }
    }
    Ok(format!("1200 points, max rel diff {worst:.2e}"))
}

fn beta_integral() -> Outcome {
    let mut worst: f64 = 0.0;
    for (z1, z2) in [(0.0, 1.0), (0.3, 2.0)] {
        for k in [0.1, 0.25, 0.5, 0.75] {
            let b = beta_check(k, z1, z2).map_err(err)?;
            worst = worst.max(b.abs_err);
            ensure(b.abs_err < 1e-8, format!("k={k} z=({z1},{z2}): {b:?}"))?;
        }
    }
    // arcsine integral
    let b = beta_check(0.5, 0.0, 1.0).map_err(err)?;
    ensure((b.closed_form - PI).abs() < 1e-14, format!("arcsine integral gave {}", b.closed_form))?;
    Ok(format!("max abs err {worst:.2e}"))
}

fn cycle_encoding() -> Outcome {
    for n in 1..=3 {
        let dual = encode_cycle(n, CycleForm::Dual).map_err(err)?;
        let plain = encode_cycle(n, CycleForm::Plain).map_err(err)?;
        ensure(singular_check(&dual).map_err(err)?, format!("n={n}: dual form not singular"))?;
        ensure(singular_check(&plain).map_err(err)?, format!("n={n}: plain form not singular"))?;
        let bracket = QScalar::bracket(&rat(1, 1)).pow((n * (n + 1) / 2) as u32);
        let image = tensor_dual_image(&plain.vector).map_err(err)?;
        ensure(image == dual.vector.scale(&bracket), format!("n={n}: duality fails"))?;
    }
    Ok("n = 1, 2, 3 singular for roots 0..n; duality exact".into())
}

fn braiding_eigenvalue() -> Outcome {
    let minus_one = QScalar::from_int(-1);
    for n in 1..=3 {
        let point = RootData::new(n).map_err(err)?.lambda_point();
        let mut r = build_r(&point, &point, default_depth(n), DEFAULT_TRIANGULARITY).map_err(err)?;
        for c in string_pair_checks(&mut r).map_err(err)? {
            ensure(c.matches, format!("n={n} strings ({}, {}): residual {}", c.i, c.j, c.residual))?;
        }
        for form in [CycleForm::Dual, CycleForm::Plain] {
            let v = encode_cycle(n, form).map_err(err)?;
            for slot in 1..=n {
                let e = braid_eigen_check(&v, slot, &mut r).map_err(err)?;
                ensure(e == minus_one, format!("n={n} {form:?} slot {slot}: eigenvalue {e}"))?;
                let twice = apply_braid_word(&v, &[slot, slot], &mut r).map_err(err)?;
                ensure(twice == v.vector, format!("n={n} {form:?} slot {slot}: (PR)^2 v != v"))?;
            }
        }
    }
    Ok("string pairs, PR v = -v and (PR)^2 v = v for n <= 3".into())
}

fn vector_representation() -> Outcome {
    let quarter = QFraction::from(QScalar::q_pow(1, 4));
    let minus_quarter = QFraction::from(-QScalar::q_pow(-1, 4));
    for n in 1..=3 {
        let m = n + 1;
        let pr = permutation_matrix(m).mul(&vector_rep_r(n)).map_err(err)?;
        for k in 0..m {
            for l in k + 1..m {
                let mut x = vec![QFraction::zero(); m * m];
                x[k * m + l] = quarter.clone();
                x[l * m + k] = minus_quarter.clone();
                let y = pr.mul_vec(&x).map_err(err)?;
                let neg: Vec<QFraction> = x.iter().map(|c| -c.clone()).collect();
                ensure(y == neg, format!("n={n} (k,l)=({k},{l}): not a -1 eigenvector"))?;
            }
        }
        ensure(yang_baxter_braid(n).map_err(err)?, format!("n={n}: braid relation fails"))?;
        ensure(yang_baxter_qybe(n).map_err(err)?, format!("n={n}: QYBE fails"))?;
        let s = pr_projector_decomposition(n).map_err(err)?;
        let expected = ((n + 1) * (n + 2) / 2, n * (n + 1) / 2);
        ensure(
            s.hecke
                && s.trace_consistent
                && s.det_consistent
                && (s.symmetric_multiplicity, s.antisymmetric_multiplicity) == expected,
            format!("n={n}: spectrum {s:?}"),
        )?;
    }
    Ok("eigenvectors, Yang-Baxter and spectrum for n <= 3".into())
}

fn inversions(w: &[usize]) -> usize {
    (0..w.len()).map(|i| (i + 1..w.len()).filter(|&j| w[i] > w[j]).count()).sum()
}

fn diagram_length() -> Outcome {
    let start = Instant::now();
    for n in 1..=7 {
        let all = Diagram::all(n);
        let factorial: usize = (1..=n).product();
        ensure(all.len() == factorial, format!("n={n}: {} diagrams", all.len()))?;
        let mut seen = std::collections::HashSet::new();
        for d in &all {
            let w = d.to_permutation().map_err(err)?;
            let sum: usize = d.marked().iter().map(|&i| i - 1).sum();
            ensure(
                sum == inversions(w.images()),
                format!("n={n} {:?}: length {sum} vs {:?}", d.marked(), w.images()),
            )?;
            seen.insert(w.images().to_vec());
        }
        ensure(seen.len() == factorial, format!("n={n}: not a bijection"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), format!("took {elapsed:?}"))?;
    Ok(format!("n <= 7 in {} ms", elapsed.as_millis()))
}

fn asymptotic() -> Outcome {
    let q = QuadratureSpec { scheme: "tanh-sinh".into(), ..QuadratureSpec::with_nodes(101) };
    let unit = asymptotic_coefficient(&[1.0], 0.5, 1.0, &q).map_err(err)?;
    ensure(
        (unit.closed_form - PI / 2.0).abs() < 1e-12 && (unit.numeric - PI / 2.0).abs() < 1e-6,
        format!("{unit:?}"),
    )?;
    let mut worst = unit.abs_err;
    for (pairing, z) in [(vec![0.6], 1.0), (vec![2.5], 3.0), (vec![0.7, 1.3], 2.0), (vec![1.0, 1.0], 1.0), (vec![0.4, 0.9], 0.5)]
    {
        let a = asymptotic_coefficient(&pairing, 0.5, z, &q).map_err(err)?;
        worst = worst.max(a.abs_err);
        ensure(a.abs_err < 1e-6, format!("{pairing:?}: {a:?}"))?;
    }
    // unit pairings at s = 3: B(1/2, 3/2) B(3/2, 3/2) = (π/2)(π/8)
    let a = asymptotic_coefficient(&[1.0, 1.0], 0.5, 1.0, &q).map_err(err)?;
    ensure((a.closed_form - PI * PI / 16.0).abs() < 1e-12, format!("{a:?}"))?;
    let lambda = RootData::new(2).map_err(err)?.generic_lambda();
    for s in 2..=3 {
        let v = encode_chain_vertex(&lambda, s, WordOrder::Reversed).map_err(err)?;
        ensure(chain_vertex_singular(&v).map_err(err)?, format!("vertex s={s} not singular"))?;
    }
    Ok(format!("s = 2, 3 max abs err {worst:.2e}; vertices singular"))
}

fn representation_counts() -> Outcome {
    for n in 1..=4 {
        let f: usize = (1..=n + 1).product();
        let p = path_count(n).map_err(err)?;
        ensure(p == f, format!("n={n}: {p} paths"))?;
    }
    for n in 1..=3 {
        let rd = RootData::new(n).map_err(err)?;
        let roots: Vec<usize> = (1..=n).collect();
        let dim: usize = gram_rank_table(&rd.eta(1), &roots, n as u32 + 1).iter().map(|r| r.rank).sum();
        ensure(dim == n + 1, format!("n={n}: dim {dim}"))?;
    }
    Ok("paths (n+1)! for n <= 4; dim L(eta_1) = n+1 for n <= 3".into())
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("gamma constant", gamma_constant),
        ("z-independence", z_independence),
        ("pointwise tau identity", tau_identity),
        ("beta integral", beta_integral),
        ("cycle encoding", cycle_encoding),
        ("braiding eigenvalue", braiding_eigenvalue),
        ("vector representation", vector_representation),
        ("diagram length", diagram_length),
        ("asymptotic coefficient", asymptotic),
        ("representation counts", representation_counts),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg} [{ms} ms]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg} [{ms} ms]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
