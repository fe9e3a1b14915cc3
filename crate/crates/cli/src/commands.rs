use std::fs;
use std::path::Path;

use balanced_core::convex::{
    asymptotic_slope, convexity_report, decide_existence, DecideOptions, ExistenceVerdict,
    MinimizeOptions, RayFunction, Slope,
};
use balanced_core::generators::{
    build_p1_anticanonical, build_p1_sample, degenerate_sample, deformed_p1_sample,
    expansion_residual, product_sample, random_sample, MetricProfile, QuadratureSpec,
};
use balanced_core::hermitian::{random_direction, random_form, HermitianForm, TangentDirection};
use balanced_core::linalg::{CMatrix, C64};
use balanced_core::quantization::{
    ac_exact_slope, ac_restriction, balance_iterate, balancing_restriction, bergman_density,
    exact_slope, AnticanonicalSample, BalanceOptions, BalanceResult, BalanceStatus,
    Normalization, PolarizedSample, SampleDocument, SpectralRestriction,
};
use balanced_core::weights::{chow_limit_check, format_rational, is_identically_df, ToricConfigData};
use balanced_core::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::config::{Command, Diagnostic, Expect, Run, SampleKind};
use crate::output::Table;

/// Second-difference floor for the balancing energy in `convexity`.
const CONVEXITY_TOL: f64 = 1e-9;
/// The anticanonical energy is only convex up to quadrature error.
const AC_CONVEXITY_TOL: f64 = 1e-6;

#[derive(Debug)]
pub enum Failure {
    /// Bad config or input data (exit 2).
    Invalid(Vec<Diagnostic>),
    /// A mathematical failure that leaves nothing to report (exit 1).
    Math(String),
}

fn classify(e: Error, field: &str) -> Failure {
    match e {
        Error::ConvexityViolation { .. }
        | Error::NotProper { .. }
        | Error::Contract(_)
        | Error::InvariantViolation(_) => Failure::Math(e.to_string()),
        other => Failure::Invalid(vec![Diagnostic::new(format!("/{field}"), other.to_string())]),
    }
}

/// Results of one command before they are written out.
pub struct Outcome {
    pub results: Value,
    pub tolerances: Value,
    pub files: Vec<(String, Vec<u8>)>,
    /// False for valid but unsuccessful outcomes (exit 1 with a report).
    pub ok: bool,
}

impl Outcome {
    fn new(results: Value, tolerances: Value) -> Self {
        Outcome {
            results,
            tolerances,
            files: Vec::new(),
            ok: true,
        }
    }

    fn table(mut self, t: csv::Result<Table>) -> Self {
        let t = t.expect("in-memory csv");
        self.files.push((t.name, t.text.into_bytes()));
        self
    }
}

/// Input files read up front, so they can be digested.
pub struct Inputs {
    pub files: Vec<(String, Vec<u8>)>,
}

impl Inputs {
    pub fn read(run: &Run) -> Result<Inputs, Failure> {
        let cfg = &run.config;
        let mut files = Vec::new();
        for (name, path) in [
            ("sample", &cfg.sample),
            ("direction", &cfg.direction),
            ("toric", &cfg.toric),
            ("profile", &cfg.profile),
        ] {
            if let Some(p) = path {
                let bytes = fs::read(p).map_err(|e| {
                    Failure::Invalid(vec![Diagnostic::new(
                        format!("/{name}"),
                        format!("cannot read {}: {e}", p.display()),
                    )])
                })?;
                files.push((name.to_string(), bytes));
            }
        }
        Ok(Inputs { files })
    }

    fn text(&self, name: &str) -> Result<&str, Failure> {
        let bytes = self
            .files
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, b)| b.as_slice())
            .expect("validated inputs are present");
        std::str::from_utf8(bytes)
            .map_err(|_| Failure::Invalid(vec![Diagnostic::new(format!("/{name}"), "file is not UTF-8")]))
    }
}

enum Model {
    Plain(PolarizedSample),
    Anti(AnticanonicalSample),
}

impl Model {
    fn parse(text: &str) -> Result<Model, Failure> {
        let doc: SampleDocument = serde_json::from_str(text)
            .map_err(|e| Failure::Invalid(vec![Diagnostic::new("/sample", e.to_string())]))?;
        let model = match doc.base.clone() {
            Some(base) => doc
                .into_sample()
                .and_then(|s| AnticanonicalSample::new(s, base))
                .map(Model::Anti),
            None => doc.into_sample().map(Model::Plain),
        };
        model.map_err(|e| classify(e, "sample"))
    }

    fn sample(&self) -> &PolarizedSample {
        match self {
            Model::Plain(s) => s,
            Model::Anti(a) => a.sample(),
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Model::Plain(_) => "balancing",
            Model::Anti(_) => "anticanonical",
        }
    }

    fn restriction(&self, h0: &HermitianForm, a: &TangentDirection) -> balanced_core::Result<SpectralRestriction> {
        match self {
            Model::Plain(s) => balancing_restriction(s, h0, a),
            Model::Anti(s) => ac_restriction(s, h0, a),
        }
    }

    fn exact_slope(&self, h0: &HermitianForm, a: &TangentDirection) -> balanced_core::Result<f64> {
        match self {
            Model::Plain(s) => exact_slope(s, h0, a),
            Model::Anti(s) => ac_exact_slope(s, h0, a),
        }
    }
}

fn matrix_json(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| json!([m[(i, j)].re, m[(i, j)].im])).collect()))
            .collect(),
    )
}

type MatrixRows = Vec<Vec<[f64; 2]>>;

fn matrix_from_rows(rows: &MatrixRows) -> Option<CMatrix> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return None;
    }
    Some(CMatrix::from_fn(n, n, |i, j| C64::new(rows[i][j][0], rows[i][j][1])))
}

/// `{"matrix": [[[re, im], …], …]}` or `{"diagonal": […]}`, with an optional
/// `"base"` form in the same row format.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DirectionDocument {
    #[serde(default)]
    matrix: Option<MatrixRows>,
    #[serde(default)]
    diagonal: Option<Vec<f64>>,
    #[serde(default)]
    base: Option<MatrixRows>,
}

fn parse_direction(text: &str, n: usize) -> Result<(HermitianForm, TangentDirection), Failure> {
    let bad = |msg: String| Failure::Invalid(vec![Diagnostic::new("/direction", msg)]);
    let doc: DirectionDocument = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    let dir = match (&doc.matrix, &doc.diagonal) {
        (Some(rows), None) => {
            let m = matrix_from_rows(rows).ok_or_else(|| bad("matrix must be square".into()))?;
            TangentDirection::new(m)
        }
        (None, Some(d)) => TangentDirection::from_diagonal(d),
        _ => return Err(bad("give exactly one of \"matrix\" and \"diagonal\"".into())),
    }
    .map_err(|e| classify(e, "direction"))?;
    let base = match &doc.base {
        Some(rows) => {
            let m = matrix_from_rows(rows).ok_or_else(|| bad("base must be square".into()))?;
            HermitianForm::new(m).map_err(|e| classify(e, "direction"))?
        }
        None => HermitianForm::identity(n),
    };
    if dir.dim() != n || base.dim() != n {
        return Err(bad(format!("direction has size {}, sample has {n} sections", dir.dim())));
    }
    Ok((base, dir))
}

pub fn execute(run: &Run, inputs: &Inputs) -> Result<Outcome, Failure> {
    match run.command {
        Command::Balance => balance(run, inputs),
        Command::Slope => slope(run, inputs),
        Command::Decide => decide(run, inputs),
        Command::Chow => chow(run, inputs),
        Command::Bergman => bergman(run, inputs),
        Command::Convexity => convexity(run, inputs),
        Command::Sample => sample(run),
    }
}

fn balance(run: &Run, inputs: &Inputs) -> Result<Outcome, Failure> {
    let model = Model::parse(inputs.text("sample")?)?;
    let n = model.sample().sections();
    let opts = BalanceOptions {
        eps_bal: run.tol.eps_bal,
        max_iter: run.max_iter,
        cond_cap: run.tol.cond_cap,
        ..BalanceOptions::default()
    };
    let start = HermitianForm::identity(n);
    let res: BalanceResult = match &model {
        Model::Plain(s) => balance_iterate(s, &start, &opts),
        Model::Anti(s) => balance_iterate(s, &start, &opts),
    }
    .map_err(|e| classify(e, "sample"))?;
    let status = match res.status {
        BalanceStatus::Converged => "converged",
        BalanceStatus::Diverged => "diverged",
        BalanceStatus::MaxIter => "max_iter",
    };
    let density = bergman_density(model.sample(), &res.h, Normalization::Normalized)
        .map_err(|e| classify(e, "sample"))?;
    let (lo, hi) = density
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(*r), hi.max(*r)));
    let results = json!({
        "model": model.kind(),
        "label": model.sample().label(),
        "status": status,
        "iterations": res.iterations,
        "residual": res.residual,
        "monotone": res.monotone,
        "h": matrix_json(res.h.matrix()),
        "normalized_density": {"min": lo, "max": hi, "expected": n as f64 / model.sample().total_mass()},
        "escape_direction": res.escape_direction.as_ref().map(|d| matrix_json(d.matrix())),
    });
    let tolerances = json!({
        "eps_bal": opts.eps_bal,
        "max_iter": opts.max_iter,
        "cond_cap": opts.cond_cap,
        "gauge": "density",
    });
    let rows = res
        .residual_history
        .iter()
        .enumerate()
        .map(|(i, r)| vec![(i + 1).to_string(), format!("{r:e}")]);
    let mut out = Outcome::new(results, tolerances).table(Table::build(
        "residuals.csv",
        &["iteration", "residual"],
        rows,
    ));
    out.ok = res.status == BalanceStatus::Converged;
    Ok(out)
}

fn slope(run: &Run, inputs: &Inputs) -> Result<Outcome, Failure> {
    let model = Model::parse(inputs.text("sample")?)?;
    let n = model.sample().sections();
    let (base, dir) = parse_direction(inputs.text("direction")?, n)?;
    let ray = model.restriction(&base, &dir).map_err(|e| classify(e, "direction"))?;
    let exact = model.exact_slope(&base, &dir).map_err(|e| classify(e, "direction"))?;
    let est = asymptotic_slope(&ray, run.tol.t_max, run.tol.slope_tol).map_err(|e| classify(e, "t_max"))?;
    let estimate = match est.value {
        Slope::Finite(v) => json!(v),
        Slope::PlusInfinity => json!("+inf"),
    };
    let agree = (est.chord - exact).abs() <= run.tol.slope_tol;
    let results = json!({
        "model": model.kind(),
        "exact_slope": exact,
        "estimate": estimate,
        "chord": est.chord,
        "window": [est.window.0, est.window.1],
        "drift": est.drift,
        "converged": est.converged,
        "agree": agree,
    });
    let tolerances = json!({"t_max": run.tol.t_max, "slope_tol": run.tol.slope_tol});
    let steps = 60;
    let mut rows = Vec::with_capacity(steps + 1);
    for i in 0..=steps {
        let t = run.tol.t_max * i as f64 / steps as f64;
        let v = ray.eval(t).map_err(|e| classify(e, "direction"))?;
        rows.push(vec![t.to_string(), v.to_string()]);
    }
    let mut out = Outcome::new(results, tolerances).table(Table::build("ray.csv", &["t", "value"], rows));
    out.ok = agree;
    Ok(out)
}

fn decide(run: &Run, inputs: &Inputs) -> Result<Outcome, Failure> {
    let model = Model::parse(inputs.text("sample")?)?;
    let n = model.sample().sections();
    let opts = DecideOptions {
        minimize: MinimizeOptions {
            stat_tol: run.tol.stat_tol,
            cond_cap: run.tol.cond_cap,
            normalize_det: true,
            seed: run.seed,
            ..MinimizeOptions::default()
        },
        seed: run.seed,
        ..DecideOptions::default()
    };
    let start = HermitianForm::identity(n);
    let verdict = match &model {
        Model::Plain(s) => decide_existence(s, &start, &opts),
        Model::Anti(s) => decide_existence(s, &start, &opts),
    }
    .map_err(|e| classify(e, "sample"))?;
    let results = match &verdict {
        ExistenceVerdict::Minimizer {
            point,
            gradient_norm,
            value,
            iterations,
        } => json!({
            "verdict": "minimizer",
            "point": matrix_json(point.matrix()),
            "gradient_norm": gradient_norm,
            "value": value,
            "iterations": iterations,
        }),
        ExistenceVerdict::Degenerate {
            direction,
            certified_slope,
            witness_iterates,
        } => json!({
            "verdict": "degenerate",
            "direction": matrix_json(direction.matrix()),
            "certified_slope": certified_slope,
            "witness": {
                "iterations": witness_iterates.iterations,
                "last_value": witness_iterates.last_value,
                "last_condition": witness_iterates.last_condition,
                "last_distance": witness_iterates.last_distance,
                "escape_slope": witness_iterates.escape_slope,
            },
        }),
    };
    let mut results = results;
    results["model"] = json!(model.kind());
    let tolerances = json!({
        "stat_tol": opts.minimize.stat_tol,
        "cond_cap": opts.minimize.cond_cap,
        "divergence_radius": opts.minimize.divergence_radius,
        "max_iter": opts.minimize.max_iter,
        "slope_probes": opts.slope_probes,
        "scale_invariance": 1e-9,
    });
    let mut out = Outcome::new(results, tolerances);
    out.ok = match run.config.expect {
        Some(Expect::Minimizer) => verdict.is_minimizer(),
        Some(Expect::Degenerate) => !verdict.is_minimizer(),
        None => true,
    };
    Ok(out)
}

fn chow(run: &Run, inputs: &Inputs) -> Result<Outcome, Failure> {
    let cfg = ToricConfigData::from_json(inputs.text("toric")?).map_err(|e| classify(e, "toric"))?;
    let report = chow_limit_check(&cfg, run.m_max).map_err(|e| classify(e, "toric"))?;
    let c = &report.coefficients;
    let results = json!({
        "dimension": cfg.dim(),
        "m_max": run.m_max,
        "df": format_rational(&report.df),
        "coefficients": {
            "a0": format_rational(&c.a0),
            "a1": format_rational(&c.a1),
            "b0": format_rational(&c.b0),
            "b1": format_rational(&c.b1),
            "fit_period": c.fit_period,
        },
        "tail_error": format_rational(&report.tail_error),
        "k_tail": format_rational(&report.k_tail),
        "k_half": format_rational(&report.k_half),
        "identically_df": is_identically_df(&report),
    });
    let tolerances = json!({"arithmetic": "exact", "m_max": run.m_max, "rate_rule": "k_tail <= 2 k_half"});
    let rows = report.table.rows().iter().zip(&report.chow).map(|(row, chow)| {
        vec![
            row.m.to_string(),
            row.dimension.to_string(),
            format_rational(&row.weight),
            format_rational(chow),
        ]
    });
    Ok(Outcome::new(results, tolerances).table(Table::build(
        "weights.csv",
        &["m", "N_m", "w_m", "Chow_m"],
        rows,
    )))
}

fn bergman_quadrature(k: u32) -> QuadratureSpec {
    QuadratureSpec {
        n_polar: 4 * (k as usize + 1) + 16,
        n_angular: 2 * k as usize + 1,
    }
}

fn bergman(run: &Run, inputs: &Inputs) -> Result<Outcome, Failure> {
    let profile: MetricProfile = serde_json::from_str(inputs.text("profile")?)
        .map_err(|e| Failure::Invalid(vec![Diagnostic::new("/profile", e.to_string())]))?;
    profile.validate().map_err(|e| classify(e, "profile"))?;
    let mut levels = run.levels.clone();
    levels.sort_unstable();
    levels.dedup();
    let mut residuals = Vec::new();
    let mut last_grid = None;
    for &k in &levels {
        let (s, grid) = deformed_p1_sample(k, &profile, &bergman_quadrature(k)).map_err(|e| classify(e, "levels"))?;
        residuals.push(expansion_residual(&s, &grid).map_err(|e| classify(e, "profile"))?);
        last_grid = Some(grid);
    }
    let ratios: Vec<f64> = residuals.windows(2).map(|w| w[1] / w[0]).collect();
    let results = json!({
        "levels": levels,
        "residuals": residuals,
        "ratios": ratios,
        "margin": profile.actual_margin(),
    });
    let tolerances = json!({
        "quadrature": "n_polar = 4(k+1)+16, n_angular = 2k+1",
        "doubling_check": 1e-10,
        "curvature": "S = -psi''/2",
    });
    let grid = last_grid.expect("levels are nonempty");
    let mut pts: Vec<(f64, f64)> = grid.nodes.iter().copied().zip(grid.values.iter().copied()).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let curvature = pts.iter().map(|(t, s)| vec![t.to_string(), s.to_string()]);
    let expansion = levels
        .iter()
        .zip(&residuals)
        .map(|(k, r)| vec![k.to_string(), r.to_string()]);
    Ok(Outcome::new(results, tolerances)
        .table(Table::build("curvature.csv", &["tau", "S"], curvature))
        .table(Table::build("expansion.csv", &["k", "r_k"], expansion)))
}

fn convexity(run: &Run, inputs: &Inputs) -> Result<Outcome, Failure> {
    let model = Model::parse(inputs.text("sample")?)?;
    let n = model.sample().sections();
    let tol = match model {
        Model::Plain(_) => CONVEXITY_TOL,
        Model::Anti(_) => AC_CONVEXITY_TOL,
    };
    let grid: Vec<f64> = (0..=40).map(|i| -5.0 + 0.25 * i as f64).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(run.seed);
    let mut worst = f64::INFINITY;
    let mut violations = 0usize;
    let mut rows = Vec::with_capacity(run.trials);
    for trial in 0..run.trials {
        let h0 = random_form(n, 1.0, &mut rng);
        let a = random_direction(n, &mut rng);
        let ray = model.restriction(&h0, &a).map_err(|e| classify(e, "sample"))?;
        let report = convexity_report(&ray, &grid).map_err(|e| classify(e, "sample"))?;
        worst = worst.min(report.strict_margin);
        if report.strict_margin < -tol {
            violations += 1;
        }
        rows.push(vec![trial.to_string(), format!("{:e}", report.strict_margin)]);
    }
    let results = json!({
        "model": model.kind(),
        "trials": run.trials,
        "min_second_difference": worst,
        "violations": violations,
    });
    let tolerances = json!({"second_difference_floor": -tol, "grid": [-5.0, 5.0, 0.25]});
    let mut out = Outcome::new(results, tolerances).table(Table::build(
        "convexity.csv",
        &["trial", "min_second_difference"],
        rows,
    ));
    out.ok = violations == 0;
    Ok(out)
}

fn sample(run: &Run) -> Result<Outcome, Failure> {
    let cfg = &run.config;
    let kind = cfg.kind.expect("validated");
    let mut rng = ChaCha8Rng::seed_from_u64(run.seed);
    let need = |v: Option<usize>, name: &str| {
        v.ok_or_else(|| Failure::Invalid(vec![Diagnostic::new(format!("/{name}"), "required for this kind")]))
    };
    let k = cfg.k.unwrap_or(1);
    let json_text = match kind {
        SampleKind::P1 => build_p1_sample(k, &QuadratureSpec::minimal(k)).and_then(|s| s.to_json()),
        SampleKind::P1Anticanonical => {
            build_p1_anticanonical(k, &QuadratureSpec::minimal(2 * k)).and_then(|s| s.to_json())
        }
        SampleKind::Product => build_p1_sample(k, &QuadratureSpec::minimal(k))
            .and_then(|s| product_sample(&s, &s))
            .and_then(|s| s.to_json()),
        SampleKind::Random => {
            let n = need(cfg.sections, "sections")?;
            random_sample(n, cfg.points.unwrap_or(3 * n), &mut rng).and_then(|s| s.to_json())
        }
        SampleKind::Degenerate => {
            let n = need(cfg.sections, "sections")?;
            let d = need(cfg.hyperplane_dim, "hyperplane_dim")?;
            degenerate_sample(n, cfg.points.unwrap_or(3 * n), d, true, &mut rng).and_then(|s| s.to_json())
        }
    }
    .map_err(|e| classify(e, "kind"))?;
    let doc: Value = serde_json::from_str(&json_text).expect("library emits valid JSON");
    let results = json!({
        "label": doc["label"],
        "sections": doc["N"],
        "points": doc["M"],
        "file": "sample.json",
    });
    let mut out = Outcome::new(results, json!({}));
    let mut bytes = json_text.into_bytes();
    bytes.push(b'\n');
    out.files.push(("sample.json".into(), bytes));
    Ok(out)
}

/// Reads a config file into a validated run.
pub fn load_config(path: &Path) -> Result<Run, Failure> {
    let text = fs::read_to_string(path).map_err(|e| {
        Failure::Invalid(vec![Diagnostic::new("", format!("cannot read {}: {e}", path.display()))])
    })?;
    let dir = path.parent().unwrap_or(Path::new("."));
    crate::config::RunConfig::from_json(&text, dir)
        .and_then(|c| c.validate())
        .map_err(Failure::Invalid)
}
