//! One function per subcommand, each returning a [`Report`].

use std::collections::BTreeSet;

use serde_json::{json, Value};
use zonal_core::braiding::{build_r, default_depth, string_pair_checks, tensor_dual_image};
use zonal_core::cycles::{
    apply_braid_word, braid_eigen_check, chain_vertex_singular, coxeter_length, encode_chain_vertex, encode_cycle,
    path_count, CycleForm, Diagram, Permutation, WordOrder,
};
use zonal_core::exactq::{rat, QScalar};
use zonal_core::hyperint::{
    asymptotic_coefficient, beta_check, euler_beta, gamma_ratio, integrate_zonal, FormSpec, HyperError,
    QuadConfig, QuadratureSpec,
};
use zonal_core::repcore::{gram_rank_table, RootData};

use crate::config::{guard, Command, Options};
use crate::report::{num, tol, Check, Metric, Report, Status, Table};
use crate::CliError;

pub fn run(command: Command, o: &Options) -> Result<Report, CliError> {
    match command {
        Command::VerifyConstant => verify_constant(o),
        Command::VerifyBeta => verify_beta(o),
        Command::Braid => braid(o),
        Command::Encode => encode(o),
        Command::Diagrams => diagrams(o),
        Command::Asymptotic => asymptotic(o),
        Command::Gram => gram(o),
    }
}

fn limit(o: &Options, name: &str, value: usize, max: usize) -> Result<(), CliError> {
    if value > max && !o.unsafe_large {
        return Err(CliError::Usage(format!("--{name} {value} exceeds the size guard {max}; pass --unsafe-large to run anyway")));
    }
    Ok(())
}

fn rank(o: &Options, default: usize, max: usize) -> Result<usize, CliError> {
    let n = o.n.unwrap_or(default);
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    limit(o, "n", n, max)?;
    Ok(n)
}

fn quad(o: &Options, scheme: &str, nodes: usize, tolerance: f64) -> QuadratureSpec {
    QuadratureSpec {
        scheme: o.scheme.clone().unwrap_or_else(|| scheme.into()),
        config: QuadConfig { nodes: o.nodes.unwrap_or(nodes), samples: o.samples, seed: o.seed },
        tolerance,
    }
}

fn nonconvergence(id: &str, expected: f64, tolerance: f64, metric: Metric, e: &HyperError) -> Option<Check> {
    match e {
        HyperError::Nonconvergence { fine, coarse, error } => Some(
            Check::numeric(id, expected, *fine, tolerance, metric)
                .with_status(Status::Warn)
                .with_detail(json!({ "reason": "nonconvergence", "fine": num(*fine), "coarse": coarse.map(num), "error": num(*error) })),
        ),
        _ => None,
    }
}

fn verify_constant(o: &Options) -> Result<Report, CliError> {
    let n = rank(o, 1, guard::SYMBOLIC_N)?;
    let k = o.k.unwrap_or(0.5);
    let z = o.z.clone().unwrap_or_else(|| FormSpec::default_z(n));
    let spec = FormSpec::affine_killed(n, k, z.clone())?;
    let tolerance = o.tolerance.unwrap_or_else(|| tol::constant(n));
    let default_nodes = match n {
        1 => 64,
        2 => 32,
        _ => 12,
    };
    let q = quad(o, "gauss-jacobi-tensor", default_nodes, tolerance);
    let target = gamma_ratio(n, k)?;
    let inputs = json!({ "n": n, "k": num(k), "z": z.iter().map(|&x| num(x)).collect::<Vec<_>>(), "quadrature": q_json(&q) });
    let check = match integrate_zonal(&spec, &q) {
        Ok(r) => Check::numeric("constant", r.target, r.value, tolerance, Metric::Rel).with_detail(json!({
            "numeric": num(r.value),
            "closed_form": num(r.target),
            "abs_err": num(r.abs_err),
            "rel_err": num(r.rel_err),
            "error_estimate": num(r.error_estimate),
            "evaluations": r.evaluations,
            "nodes": q.config.nodes,
        })),
        Err(e) => nonconvergence("constant", target, tolerance, Metric::Rel, &e).ok_or(e)?,
    };
    Ok(Report::new("verify-constant", inputs, vec![check], None))
}

fn q_json(q: &QuadratureSpec) -> Value {
    json!({
        "scheme": q.scheme,
        "nodes": q.config.nodes,
        "samples": q.config.samples,
        "seed": q.config.seed,
        "tolerance": num(q.tolerance),
    })
}

const BETA_SWEEP: [f64; 4] = [0.1, 0.25, 0.5, 0.75];

fn verify_beta(o: &Options) -> Result<Report, CliError> {
    let ks: Vec<f64> = o.k.map(|k| vec![k]).unwrap_or_else(|| BETA_SWEEP.to_vec());
    let z = o.z.clone().unwrap_or_else(|| vec![0.0, 1.0]);
    if z.len() != 2 {
        return Err(CliError::Usage("--z takes exactly two points for verify-beta".into()));
    }
    let tolerance = o.tolerance.unwrap_or(tol::BETA);
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for &k in &ks {
        let b = beta_check(k, z[0], z[1])?;
        checks.push(Check::numeric(format!("beta k={}", num(k)), b.closed_form, b.numeric, tolerance, Metric::Abs));
        rows.push(vec![num(k).to_string(), num(b.numeric).to_string(), num(b.closed_form).to_string(), num(b.abs_err).to_string()]);
    }
    checks.push(Check::numeric("euler-beta(1,1)", 1.0, euler_beta(1.0, 1.0)?, tolerance, Metric::Abs));
    let table = Table { headers: ["k", "numeric", "closed_form", "abs_err"].map(String::from).to_vec(), rows };
    let inputs = json!({ "k": ks.iter().map(|&k| num(k)).collect::<Vec<_>>(), "z": [num(z[0]), num(z[1])] });
    Ok(Report::new("verify-beta", inputs, checks, Some(table)))
}

fn braid(o: &Options) -> Result<Report, CliError> {
    let n = rank(o, 1, guard::SYMBOLIC_N)?;
    let form = CycleForm::from_index(o.form)?;
    let slots: Vec<usize> = match o.slot {
        Some(s) if (1..=n).contains(&s) => vec![s],
        Some(s) => return Err(CliError::Usage(format!("--slot must lie in 1..={n}, got {s}"))),
        None => (1..=n).collect(),
    };
    let inputs = json!({ "n": n, "form": o.form, "slots": slots, "triangularity": o.triangularity, "check_strings": o.check_strings });
    let point = RootData::new(n)?.lambda_point();
    let mut r = build_r(&point, &point, default_depth(n), &o.triangularity)?;
    let v = encode_cycle(n, form)?;
    let minus_one = QScalar::from_int(-1);
    let mut checks = Vec::new();
    for &s in &slots {
        let id = format!("eigenvalue slot={s}");
        checks.push(match braid_eigen_check(&v, s, &mut r) {
            Ok(e) => Check::exact(id, &minus_one, e),
            Err(e) => Check::failed(id, &minus_one, e),
        });
        let id = format!("monodromy slot={s}");
        checks.push(match apply_braid_word(&v, &[s, s], &mut r) {
            Ok(x) => {
                let diff = x.try_sub(&v.vector)?;
                Check::exact(id, 0, if diff.is_zero() { "0".into() } else { diff.to_string() })
            }
            Err(e) => Check::failed(id, 0, e),
        });
    }
    if o.check_strings {
        match string_pair_checks(&mut r) {
            Ok(pairs) => {
                for p in pairs {
                    let residual = if p.matches { "0".to_string() } else { p.residual };
                    checks.push(Check::exact(format!("string-pair i={} j={}", p.i, p.j), 0, residual));
                }
            }
            Err(e) => checks.push(Check::failed("string-pairs", "all match", e)),
        }
    }
    Ok(Report::new("braid", inputs, checks, None))
}

fn encode(o: &Options) -> Result<Report, CliError> {
    let n = rank(o, 1, guard::SYMBOLIC_N)?;
    let dual = encode_cycle(n, CycleForm::Dual)?;
    let plain = encode_cycle(n, CycleForm::Plain)?;
    let terms: usize = (1..=n + 1).product();
    let mut checks = vec![
        Check::exact("terms", terms, dual.vector.len()).with_detail(json!({ "vector": dual.vector.to_string() })),
        Check::exact("singular form=1", true, zonal_core::cycles::singular_check(&dual)?),
        Check::exact("singular form=2", true, zonal_core::cycles::singular_check(&plain)?),
    ];
    let bracket = QScalar::bracket(&rat(1, 1)).pow(plain.bracket_power);
    let image = tensor_dual_image(&plain.vector)?;
    let diff = image.try_sub(&dual.vector.scale(&bracket))?;
    checks.push(
        Check::exact("duality", 0, if diff.is_zero() { "0".into() } else { diff.to_string() })
            .with_detail(json!({ "bracket_power": plain.bracket_power })),
    );
    let mut rows = Vec::new();
    for (form, v) in [(1, &dual), (2, &plain)] {
        for (words, c) in v.vector.terms() {
            let w: Vec<String> = words.iter().map(|w| w.to_string()).collect();
            rows.push(vec![form.to_string(), w.join(" ⊗ "), c.to_string()]);
        }
    }
    let table = Table { headers: ["form", "words", "coefficient"].map(String::from).to_vec(), rows };
    Ok(Report::new("encode", json!({ "n": n }), checks, Some(table)))
}

fn diagrams(o: &Options) -> Result<Report, CliError> {
    let n = rank(o, 3, guard::DIAGRAM_N)?;
    let all = Diagram::all(n);
    let mut rows = Vec::with_capacity(all.len());
    let mut images = BTreeSet::new();
    let (mut length_ok, mut arrows_ok) = (true, true);
    for d in &all {
        let w = d.to_permutation()?;
        let inv = coxeter_length(&w);
        length_ok &= d.length() == inv;
        arrows_ok &= d.left_arrow_count() == inv;
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        rows.push(vec![join(d.marked()), join(w.images()), d.length().to_string(), inv.to_string(), d.left_arrow_count().to_string()]);
        images.insert(w);
    }
    let factorial: usize = (1..=n).product();
    let bijective = images.len() == all.len() && images == Permutation::all(n).into_iter().collect();
    let checks = vec![
        Check::exact("diagrams", factorial, all.len()),
        Check::exact("bijection onto S_n", true, bijective),
        Check::exact("length = inversions", true, length_ok),
        Check::exact("left arrows = inversions", true, arrows_ok),
    ];
    let table = Table {
        headers: ["marked", "permutation", "length", "inversions", "left_arrows"].map(String::from).to_vec(),
        rows,
    };
    Ok(Report::new("diagrams", json!({ "n": n }), checks, Some(table)))
}

fn asymptotic(o: &Options) -> Result<Report, CliError> {
    let s = o.s.unwrap_or(2);
    if s < 2 {
        return Err(CliError::Usage("--s must be at least 2".into()));
    }
    limit(o, "s", s, guard::CHAIN_S)?;
    let k = o.k.unwrap_or(0.5);
    let pairing = o.pairing.clone().unwrap_or_else(|| vec![1.0; s - 1]);
    if pairing.len() != s - 1 {
        return Err(CliError::Usage(format!("--pairing needs {} values for s = {s}", s - 1)));
    }
    let z = o.z.as_ref().and_then(|z| z.first().copied()).unwrap_or(1.0);
    let tolerance = o.tolerance.unwrap_or(tol::ASYMPTOTIC);
    let q = quad(o, "tanh-sinh", 101, tolerance);
    let inputs = json!({
        "s": s,
        "k": num(k),
        "pairing": pairing.iter().map(|&a| num(a)).collect::<Vec<_>>(),
        "z": num(z),
        "quadrature": q_json(&q),
        "check_singular": o.check_singular,
    });
    let mut checks = Vec::new();
    if !o.check_singular {
        match asymptotic_coefficient(&pairing, k, z, &q) {
            Ok(a) => checks.push(
                Check::numeric("coefficient", a.closed_form, a.numeric, tolerance, Metric::Abs)
                    .with_detail(json!({ "error_estimate": num(a.error_estimate) })),
            ),
            Err(e @ HyperError::Nonconvergence { .. }) => {
                let closed = zonal_core::hyperint::asymptotic_closed_form(&pairing, k)?;
                checks.extend(nonconvergence("coefficient", closed, tolerance, Metric::Abs, &e));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let lambda = RootData::new(s - 1)?.generic_lambda();
    let vertex = encode_chain_vertex(&lambda, s, WordOrder::Reversed)?;
    checks.push(
        Check::exact("vertex singular", true, chain_vertex_singular(&vertex)?)
            .with_detail(json!({ "lambda": lambda.to_string(), "vector": vertex.to_string() })),
    );
    Ok(Report::new("asymptotic", inputs, checks, None))
}

fn gram(o: &Options) -> Result<Report, CliError> {
    let n = rank(o, 1, guard::SYMBOLIC_N)?;
    let rd = RootData::new(n)?;
    let roots: Vec<usize> = (1..=n).collect();
    let table = gram_rank_table(&rd.eta(1), &roots, n as u32 + 1);
    let dim: usize = table.iter().map(|r| r.rank).sum();
    let factorial: usize = (1..=n + 1).product();
    let checks = vec![
        Check::exact("dim L(eta_1)", n + 1, dim),
        Check::exact("paths of weight zero", factorial, path_count(n)?),
    ];
    let rows = table
        .iter()
        .filter(|r| r.words > 0)
        .map(|r| {
            let d: Vec<String> = r.drop.iter().map(|x| x.to_string()).collect();
            vec![d.join(" "), r.words.to_string(), r.rank.to_string()]
        })
        .collect();
    let table = Table { headers: ["drop", "words", "rank"].map(String::from).to_vec(), rows };
    Ok(Report::new("gram", json!({ "n": n }), checks, Some(table)))
}
