use clap::{Parser, Subcommand, ValueEnum};
use floer_core::ainfty::{check_ainfty, models, AInftyData, AInftyReport};
use floer_core::coeff::{parse_rational, rat_int, Fp, GradedLaurent, Ring, TwistedFraction, TwistedScalar};
use floer_core::deform::{f_series, random_fseries_data, twist};
use floer_core::io::{category_from_file, CategoryFile, IoError, WeightsFile};
use floer_core::model::{
    closed_form_radius, disjointness_gap, section_solvers, solve_through_point, weight_dichotomy, SolverConfig,
};
use floer_core::picard::{is_identity, mat_pow, preserves_pairing, twist_power, IntersectionLattice};
use floer_core::pipeline::{run_theorem_1_1, run_theorem_1_2, Theorem11Config, Theorem12Config, SCHEMA};
use floer_core::trees::{associahedron_total_faces, enumerate_plain_round, Stability};
use num_rational::BigRational;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::fmt::Write;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "floer-lab", version, about = "Exact checks for twisted and bulk-deformed A-infinity models")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Emit::Text, global = true)]
    emit: Emit,
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Numeric tolerance for floating-point checks.
    #[arg(long, default_value_t = 1e-10, global = true)]
    tolerance: f64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate plain/round ribbon trees.
    Trees {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        q: usize,
        #[arg(long)]
        semistable: bool,
        #[arg(long)]
        max_edges: Option<usize>,
        /// Print every canonical form.
        #[arg(long)]
        list: bool,
    },
    /// Check the structure equations of a category file or a built-in model.
    AinftyCheck {
        #[arg(long, conflicts_with = "model")]
        input: Option<String>,
        /// directed-a2, interval, zigzag, isomorphic-pair, a2-floer
        #[arg(long)]
        model: Option<String>,
        /// Curve-weight sidecar to twist a rational category before checking.
        #[arg(long)]
        weights: Option<String>,
    },
    /// Random F-series instance: inverse and conjugation identities.
    Fseries {
        #[arg(long, default_value_t = 4)]
        rank: usize,
        #[arg(long, default_value_t = 2)]
        max_q: u32,
        #[arg(long, default_value_t = 6)]
        truncation: usize,
    },
    /// Constrained section through the base point.
    Sections {
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value = "closed-form,newton")]
        solvers: String,
    },
    /// Picard-Lefschetz action of a twist.
    Picard {
        /// Lattice JSON file, or `a2` for the built-in lattice.
        #[arg(long, default_value = "a2")]
        lattice: String,
        #[arg(long, default_value = "S")]
        twist: String,
        #[arg(long, default_value_t = 2)]
        power: u32,
        /// Class whose orbit is printed.
        #[arg(long)]
        class: Option<String>,
    },
    Theorem11 {
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        /// Nonzero weight normalization.
        #[arg(long, default_value = "1")]
        c: String,
        #[arg(long)]
        no_sweep: bool,
    },
    Theorem12 {
        #[arg(long, default_value_t = 4)]
        l: u32,
        #[arg(long, default_value_t = 1)]
        kappa: i64,
    },
}

struct Outcome {
    json: Value,
    text: String,
    csv: Option<String>,
    ok: bool,
}

struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

fn report_json(r: &AInftyReport) -> Value {
    json!({
        "passed": r.passed,
        "equations_checked": r.equations_checked,
        "arities_checked": r.arities_checked,
        "failure": r.failure.as_ref().map(|f| json!({
            "arity": f.arity, "inputs": f.inputs, "residual": f.residual,
        })),
    })
}

fn check_outcome<R: Ring>(c: &AInftyData<R>) -> Outcome {
    let r = check_ainfty(c);
    let mut text = format!(
        "ring {}: {} equations over arities {:?}: {}\n",
        R::tag(),
        r.equations_checked,
        r.arities_checked,
        if r.passed { "pass" } else { "FAIL" }
    );
    if let Some(f) = &r.failure {
        let _ = writeln!(text, "  first failure at arity {} on {:?}: {:?}", f.arity, f.inputs, f.residual);
    }
    Outcome { json: json!({ "ring": R::tag(), "report": report_json(&r) }), text, csv: None, ok: r.passed }
}

fn load_and_check(f: &CategoryFile) -> Result<Outcome, InputError> {
    fn go<R: Ring>(f: &CategoryFile) -> Result<Outcome, IoError> {
        Ok(check_outcome(&category_from_file::<R>(f)?))
    }
    let out = match f.ring.as_str() {
        "Q" => go::<BigRational>(f),
        "F2" => go::<Fp<2>>(f),
        "F3" => go::<Fp<3>>(f),
        "F5" => go::<Fp<5>>(f),
        "F7" => go::<Fp<7>>(f),
        "F11" => go::<Fp<11>>(f),
        "T" => go::<TwistedScalar>(f),
        "K" => go::<TwistedFraction>(f),
        "L4" => go::<GradedLaurent<4>>(f),
        "L6" => go::<GradedLaurent<6>>(f),
        "L8" => go::<GradedLaurent<8>>(f),
        "L10" => go::<GradedLaurent<10>>(f),
        "L12" => go::<GradedLaurent<12>>(f),
        other => return Err(InputError(format!("unsupported ring `{other}`"))),
    };
    Ok(out?)
}

fn builtin(name: &str) -> Result<AInftyData<BigRational>, InputError> {
    Ok(match name {
        "directed-a2" => models::directed_a2(),
        "interval" => models::interval_dga(),
        "zigzag" => models::zigzag(2),
        "isomorphic-pair" => models::isomorphic_pair(),
        "a2-floer" => models::a2_floer(models::FloerDegrees::twisted(2), rat_int(1)),
        other => return Err(InputError(format!("unknown model `{other}`"))),
    })
}

fn read(path: &str) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("{path}: {e}")))
}

fn cmd_trees(k: usize, q: usize, semistable: bool, max_edges: Option<usize>, list: bool) -> Result<Outcome, InputError> {
    let st = if semistable { Stability::Semistable } else { Stability::Stable };
    let trees = enumerate_plain_round(k, q, st, max_edges)?;
    let names: Vec<String> = trees.iter().map(|t| t.canonical()).collect();
    let mut by_codim = std::collections::BTreeMap::new();
    for t in &trees {
        *by_codim.entry(t.codim()).or_insert(0usize) += 1;
    }
    let expected = (q == 0 && !semistable).then(|| associahedron_total_faces(k));
    let ok = expected.is_none_or(|e| e == trees.len() as u128);
    let mut text = format!("k = {k}, q = {q}, {}: {} trees\n", if semistable { "semistable" } else { "stable" }, trees.len());
    for (c, n) in &by_codim {
        let _ = writeln!(text, "  codim {c}: {n}");
    }
    if let Some(e) = expected {
        let _ = writeln!(text, "  associahedron face count {e}: {}", if ok { "match" } else { "MISMATCH" });
    }
    if list {
        for n in &names {
            let _ = writeln!(text, "  {n}");
        }
    }
    Ok(Outcome {
        json: json!({ "k": k, "q": q, "stability": st, "count": trees.len(), "by_codim": by_codim,
                      "expected": expected.map(|e| e.to_string()), "trees": names }),
        text,
        csv: None,
        ok,
    })
}

fn cmd_ainfty(input: Option<String>, model: Option<String>, weights: Option<String>) -> Result<Outcome, InputError> {
    let rational = match (&input, &model) {
        (Some(p), _) => {
            let f = CategoryFile::from_json(&read(p)?)?;
            if weights.is_none() {
                return load_and_check(&f);
            }
            category_from_file::<BigRational>(&f)?
        }
        (None, Some(m)) => builtin(m)?,
        (None, None) => return Err(InputError("one of --input or --model is required".into())),
    };
    match weights {
        None => Ok(check_outcome(&rational)),
        Some(w) => {
            let tensor = WeightsFile::from_json(&read(&w)?)?.to_tensor(&rational)?;
            match twist(&rational, &tensor) {
                Ok(t) => Ok(check_outcome(&t)),
                Err(e) => Ok(Outcome {
                    json: json!({ "ring": "T", "error": e.to_string() }),
                    text: format!("twisting failed: {e}\n"),
                    csv: None,
                    ok: false,
                }),
            }
        }
    }
}

fn cmd_fseries(seed: u64, rank: usize, max_q: u32, truncation: usize) -> Result<Outcome, InputError> {
    if rank == 0 || rank > 8 {
        return Err(InputError("rank must be between 1 and 8".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fs = random_fseries_data(&mut rng, rank, max_q, truncation as u32);
    let s = f_series(&fs, truncation)?;
    let inv = s.is_exact_inverse();
    let conj = s.conjugation_defect(&fs).iter().all(|m| m.is_zero());
    let text = format!(
        "rank {rank}, F_1..F_{max_q}, through h^{truncation}: inverse {}, conjugation {}\n{}",
        if inv { "exact" } else { "FAILS" },
        if conj { "exact" } else { "FAILS" },
        s.warnings.iter().map(|w| format!("  warning: {w}\n")).collect::<String>()
    );
    Ok(Outcome {
        json: json!({ "rank": rank, "max_q": max_q, "truncation": truncation, "seed": seed,
                      "inverse_exact": inv, "conjugation_exact": conj, "warnings": s.warnings }),
        text,
        csv: None,
        ok: inv && conj,
    })
}

fn cmd_sections(cfg: &SolverConfig, eps: f64, n: usize, solvers: &str) -> Result<Outcome, InputError> {
    let reg = section_solvers();
    let mut rows = Vec::new();
    let mut csv = String::from("solver,eps,n,R,max_residual,sigma_min\n");
    for name in solvers.split(',').map(str::trim) {
        let sol = reg.get(name)?.solve(eps, n, cfg)?;
        let _ = writeln!(csv, "{name},{eps},{n},{:.15},{:e},{:e}", sol.radius(), sol.max_residual(), sol.jacobian_sigma_min);
        rows.push(json!({
            "solver": name,
            "a": sol.a.a.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
            "R": sol.radius(),
            "r": sol.r,
            "residuals": sol.residuals,
            "sigma_min": sol.jacobian_sigma_min,
        }));
    }
    let joint = solve_through_point(eps, n, cfg);
    let dich = if n == 2 { Some(weight_dichotomy(eps, cfg)?) } else { None };
    let ok = joint.is_ok() && dich.as_ref().is_none_or(|d| d.counts == [0, 1]);
    let mut text = format!("eps = {eps}, n = {n}, closed form R = {:.12}\n", closed_form_radius(eps));
    for r in &rows {
        let (r_val, smin) = (r["R"].as_f64().unwrap_or(f64::NAN), r["sigma_min"].as_f64().unwrap_or(f64::NAN));
        let _ = writeln!(text, "  {}: R = {r_val:.12}, sigma_min = {smin:.6e}", r["solver"].as_str().unwrap_or(""));
    }
    match &joint {
        Ok(_) => text.push_str("  solvers agree, solution regular\n"),
        Err(e) => {
            let _ = writeln!(text, "  FAIL: {e}");
        }
    }
    if let Some(d) = &dich {
        let _ = writeln!(text, "  intersections (C0, C1) = {:?}, signs {:?}", d.counts, d.signs);
        let _ = writeln!(text, "  disjointness gap (grid 40) = {:.6}", disjointness_gap(eps, 40));
    }
    Ok(Outcome {
        json: json!({ "eps": eps, "n": n, "seed": cfg.seed, "solutions": rows,
                      "agreement": joint.as_ref().err().map(|e| e.to_string()),
                      "counts": dich.as_ref().map(|d| d.counts), "signs": dich.as_ref().map(|d| d.signs) }),
        text,
        csv: Some(csv),
        ok,
    })
}

fn cmd_picard(lattice: &str, twist: &str, power: u32, class: Option<String>) -> Result<Outcome, InputError> {
    let l = if lattice == "a2" {
        IntersectionLattice::a2()
    } else {
        let l: IntersectionLattice = serde_json::from_str(&read(lattice)?)?;
        l.validate()?;
        l
    };
    let s = l.basis(twist)?;
    let m = mat_pow(&l.twist_matrix(&s)?, power);
    let ident = is_identity(&m);
    let isometry = preserves_pairing(&l, &s)?;
    let mut text = format!("tau_{twist}^{power} on {} classes ({:?} parity):\n", l.rank(), l.parity);
    for row in &m {
        let _ = writeln!(text, "  {row:?}");
    }
    let _ = writeln!(text, "  identity: {ident}, preserves pairing: {isometry}");
    let orbit = match class {
        Some(c) => {
            let x = l.basis(&c)?;
            let orbit: Vec<Vec<i64>> = (0..=power).map(|k| twist_power(&l, &s, &x, k)).collect::<Result<_, _>>()?;
            let _ = writeln!(text, "  orbit of {c}: {orbit:?}");
            Some(orbit)
        }
        None => None,
    };
    Ok(Outcome {
        json: json!({ "lattice": l, "twist": twist, "power": power, "matrix": m, "identity": ident,
                      "preserves_pairing": isometry, "orbit": orbit }),
        text,
        csv: None,
        ok: isometry,
    })
}

fn run(cli: &Cli) -> Result<Outcome, InputError> {
    let solver = SolverConfig { seed: cli.seed, tolerance: cli.tolerance, ..Default::default() };
    match &cli.cmd {
        Cmd::Trees { k, q, semistable, max_edges, list } => cmd_trees(*k, *q, *semistable, *max_edges, *list),
        Cmd::AinftyCheck { input, model, weights } => cmd_ainfty(input.clone(), model.clone(), weights.clone()),
        Cmd::Fseries { rank, max_q, truncation } => cmd_fseries(cli.seed, *rank, *max_q, *truncation),
        Cmd::Sections { eps, n, solvers } => cmd_sections(&solver, *eps, *n, solvers),
        Cmd::Picard { lattice, twist, power, class } => cmd_picard(lattice, twist, *power, class.clone()),
        Cmd::Theorem11 { eps, c, no_sweep } => {
            let mut cfg = Theorem11Config { eps: *eps, c: parse_rational(c)?, solver, ..Default::default() }.with_seed(cli.seed);
            if *no_sweep {
                cfg.sweep.clear();
            }
            let rep = run_theorem_1_1(&cfg)?;
            Ok(Outcome { json: serde_json::to_value(&rep)?, text: rep.to_text(), csv: None, ok: rep.all_passed() })
        }
        Cmd::Theorem12 { l, kappa } => {
            let mut cfg = Theorem12Config { l: *l, kappa: *kappa, ..Default::default() };
            cfg.quasi.seed = cli.seed;
            let rep = run_theorem_1_2(&cfg)?;
            Ok(Outcome { json: serde_json::to_value(&rep)?, text: rep.to_text(), csv: None, ok: rep.all_passed() })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match cli.emit {
                Emit::Json => {
                    let mut v = out.json;
                    if let Value::Object(m) = &mut v {
                        m.entry("schema").or_insert(json!(SCHEMA));
                        m.insert("ok".into(), json!(out.ok));
                    }
                    println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
                }
                Emit::Csv => print!("{}", out.csv.unwrap_or(out.text)),
                Emit::Text => print!("{}", out.text),
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
