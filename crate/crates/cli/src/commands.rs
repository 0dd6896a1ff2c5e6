use std::path::Path;

use anyhow::{bail, Context, Result};
use lasso_audit::estimators::{certified_lower_compat, certified_lower_phi};
use lasso_audit::experiments::{concentration_experiment, generate, noise_bound_experiment, GeneratorSpec, Generated};
use lasso_audit::implications::{check_all, EdgeStatus};
use lasso_audit::io::{matrix_to_csv_string, parse_index_list, parse_real_list, parse_vector, read_matrix_file};
use lasso_audit::lasso::{basis_pursuit_recover, oracle_verdict, selection_report, solve_noiseless, solve_noisy, NoisyProblem};
use lasso_audit::report::condition_report;
use lasso_audit::{Caps, ConeSpec, ConeVariant, GramMatrix, IndexSet, Matrix, SolverConfig};
use serde_json::{json, Value};

use crate::args::{
    AnalyzeArgs, Common, ConeArgs, Experiment, GenerateArgs, Kind, LassoArgs, MatrixInput, MonteCarloArgs,
    RecoverArgs,
};

/// What a command produced, and the exit code it asks for.
pub enum Output {
    Json(Value, i32),
    Text(String),
}

pub fn solver_config(c: &Common) -> SolverConfig {
    let mut cfg = if c.reduced {
        SolverConfig::reduced()
    } else {
        SolverConfig::default()
    };
    cfg.seed = c.seed;
    if let Some(t) = c.tol {
        cfg.tol = t;
    }
    let d = Caps::default();
    cfg.caps = Caps {
        subsets: c.cap_subsets.map(u128::from).unwrap_or(d.subsets),
        signs: c.cap_signs.map(u128::from).unwrap_or(d.signs),
    };
    cfg
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_matrix(path: &Path) -> Result<Matrix<f64>> {
    read_matrix_file(path).with_context(|| format!("reading {}", path.display()))
}

fn read_vector(path: &Path) -> Result<Vec<f64>> {
    parse_vector(&read_text(path)?).with_context(|| format!("reading {}", path.display()))
}

fn load_gram(input: &MatrixInput) -> Result<GramMatrix<f64>> {
    match (&input.gram, &input.design) {
        (Some(g), None) => Ok(GramMatrix::new(read_matrix(g)?).with_context(|| format!("{}", g.display()))?),
        (None, Some(d)) => Ok(GramMatrix::from_design(&read_matrix(d)?)),
        _ => bail!("exactly one of --gram and --design is required"),
    }
}

fn support(list: &str, p: usize) -> Result<IndexSet> {
    let idx = parse_index_list(list).context("parsing --S")?;
    Ok(IndexSet::new(idx, p)?)
}

fn cone(args: &ConeArgs, p: usize) -> Result<ConeSpec<f64>> {
    let s = support(&args.s, p)?;
    let n = args.n.unwrap_or(s.len());
    Ok(ConeSpec::new(s, args.l, n, p)?)
}

pub fn analyze(a: &AnalyzeArgs) -> Result<Output> {
    let gram = load_gram(&a.input)?;
    let cone = cone(&a.cone, gram.dim())?;
    let report = condition_report(&gram, &cone, &solver_config(&a.common))?;
    Ok(Output::Json(serde_json::to_value(report)?, 0))
}

pub fn implications(a: &AnalyzeArgs) -> Result<Output> {
    let gram = load_gram(&a.input)?;
    let cone = cone(&a.cone, gram.dim())?;
    let verdicts = check_all(&gram, &cone, &solver_config(&a.common))?;
    let code = if verdicts.iter().any(|v| v.status == EdgeStatus::Failed) {
        1
    } else if verdicts.iter().all(|v| v.status == EdgeStatus::Skipped) {
        2
    } else {
        0
    };
    Ok(Output::Json(serde_json::to_value(verdicts)?, code))
}

pub fn lasso(a: &LassoArgs) -> Result<Output> {
    let cfg = solver_config(&a.common);
    if let Some(design) = &a.input.design {
        let x = read_matrix(design)?;
        let p = x.ncols();
        let Some(resp) = &a.response else {
            bail!("--response is required with --design");
        };
        let y = read_vector(resp)?;
        let beta0 = a.beta0.as_deref().map(read_vector).transpose()?;
        let noise = a.noise.as_deref().map(read_vector).transpose()?;
        let problem = NoisyProblem::new(x, y, beta0, noise)?;
        let s = support(&a.s, p)?;
        let (solution, verdict) = solve_noisy(&problem, &s, a.lambda, &cfg)?;
        let code = if !verdict.premise {
            2
        } else if verdict.holds == Some(false) {
            1
        } else {
            0
        };
        return Ok(Output::Json(json!({"solution": solution, "noisy_oracle": verdict}), code));
    }
    let gram = load_gram(&a.input)?;
    let p = gram.dim();
    let Some(b) = &a.beta0 else {
        bail!("--beta0 is required with --gram");
    };
    let beta0 = read_vector(b)?;
    let s = support(&a.s, p)?;
    let solution = solve_noiseless(&gram, &beta0, a.lambda, &cfg)?;
    let unit = ConeSpec::new(s.clone(), 1.0, s.len(), p)?;
    let phi = certified_lower_compat(&gram, &unit, &cfg.caps, &[]).bound;
    let phi_2s = (2 * s.len() <= p)
        .then(|| certified_lower_phi(&gram, &unit.with_n(2 * s.len()), ConeVariant::Standard, &cfg.caps, &[]).bound);
    let oracle = oracle_verdict(&gram, &solution, &beta0, &s, &phi, phi_2s.as_ref())?;
    let selection = selection_report(&gram, &solution, &unit, &beta0, &phi, &cfg.caps).ok();
    let code = if oracle.holds && oracle.l1_holds && oracle.l2_holds != Some(false) {
        0
    } else {
        1
    };
    Ok(Output::Json(
        json!({"solution": solution, "oracle": oracle, "selection": selection}),
        code,
    ))
}

pub fn recover(a: &RecoverArgs) -> Result<Output> {
    let gram = GramMatrix::new(read_matrix(&a.gram)?)?;
    let beta0 = read_vector(&a.beta0)?;
    let r = basis_pursuit_recover(&gram, &beta0, &solver_config(&a.common))?;
    Ok(Output::Json(serde_json::to_value(r)?, 0))
}

pub fn montecarlo(a: &MonteCarloArgs) -> Result<Output> {
    let t = parse_real_list(&a.t).context("parsing --t")?;
    let seed = a.common.seed;
    let result = match a.experiment {
        Experiment::Concentration => {
            let population = match (&a.gram, a.p) {
                (Some(g), _) => GramMatrix::new(read_matrix(g)?)?,
                (None, Some(p)) => GramMatrix::identity(p),
                (None, None) => bail!("--p or --gram is required"),
            };
            concentration_experiment(a.n, &population, a.reps, &t, seed)?
        }
        Experiment::Noise => {
            let Some(p) = a.p else {
                bail!("--p is required for the noise experiment");
            };
            noise_bound_experiment(a.n, p, a.reps, &t, seed, false)?
        }
    };
    if let Some(path) = &a.csv {
        std::fs::write(path, result.to_csv()).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(Output::Json(serde_json::to_value(result)?, 0))
}

fn need<T: Copy>(v: Option<T>, flag: &str, kind: &str) -> Result<T> {
    v.with_context(|| format!("--{flag} is required for {kind}"))
}

fn spec_from_flags(a: &GenerateArgs, kind: Kind) -> Result<GeneratorSpec> {
    let name = format!("{kind:?}");
    let p = || need(a.p, "p", &name);
    let rho = || need(a.rho, "rho", &name);
    Ok(match kind {
        Kind::Identity => GeneratorSpec::Identity { p: p()? },
        Kind::Equicorrelation => GeneratorSpec::Equicorrelation { p: p()?, rho: rho()? },
        Kind::ToeplitzGeometric => GeneratorSpec::ToeplitzGeometric { p: p()?, rho: rho()? },
        Kind::BlockDiag => {
            let blocks = a.blocks.as_deref().context("--blocks is required for BlockDiag")?;
            GeneratorSpec::BlockDiag {
                blocks: parse_index_list(blocks)?,
                rho: rho()?,
            }
        }
        Kind::ExampleIrr => GeneratorSpec::ExampleIrr {
            p: p()?,
            s: need(a.s, "s", &name)?,
            rho: rho()?,
            b1: None,
            b2: None,
        },
        Kind::ExampleCompat => GeneratorSpec::ExampleCompat {
            p: p()?,
            s: need(a.s, "s", &name)?,
            rho: rho()?,
        },
        Kind::RandomPsd => GeneratorSpec::RandomPsd {
            p: p()?,
            rank: a.rank,
            seed: a.common.seed,
        },
    })
}

pub fn generate_cmd(a: &GenerateArgs) -> Result<Output> {
    let spec = match (&a.spec, a.kind) {
        (Some(path), _) => {
            let text = read_text(path)?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        (None, Some(kind)) => spec_from_flags(a, kind)?,
        (None, None) => bail!("--kind or --spec is required"),
    };
    match generate::<f64>(&spec)? {
        Generated::Gram(g) => Ok(Output::Text(matrix_to_csv_string(g.matrix()))),
        Generated::Design(d) => {
            if let Some(path) = &a.response_out {
                let y = Matrix::from_fn(d.y.len(), 1, |i, _| d.y[i]);
                std::fs::write(path, matrix_to_csv_string(&y))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(Output::Text(matrix_to_csv_string(&d.x)))
        }
    }
}
