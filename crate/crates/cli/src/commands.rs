use std::path::PathBuf;

use serde_json::{json, Value};
use spectral_instability_core::asymptotics::rate_c;
use spectral_instability_core::pseudospectra::ResolventOperator;
use spectral_instability_core::semigroup::Convergence;
use spectral_instability_core::spectral::{fit_rate, solve_spectrum, RateFit};
use spectral_instability_core::{
    AsymptoticReport, DiscretizationConfig, Error, GridSpec, Kappa, OscillatorParams, ResolventGrid,
    SemigroupSeriesReport, C64,
};

use crate::checks::{acceptance_suite, verify_params, CheckResult};
use crate::config::{CommandKind, RunConfig};
use crate::error::CliResult;
use crate::output::{num, opt, write_artifact, Artifact, Cell, Table};
use crate::parallel::{par_map, thread_count};

#[derive(Debug)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub summary: Vec<String>,
    /// Failed checks of a `verify` run.
    pub failed: usize,
}

pub fn run(cfg: &RunConfig) -> CliResult<Outcome> {
    let (artifact, summary, failed) = build(cfg)?;
    let files = write_artifact(&cfg.output_dir, cfg.format, &artifact)?;
    Ok(Outcome { files, summary, failed })
}

/// Computes a command's artifact without touching the file system.
pub fn build(cfg: &RunConfig) -> CliResult<(Artifact, Vec<String>, usize)> {
    match cfg.command {
        CommandKind::Spectrum => spectrum(cfg).map(|(a, s)| (a, s, 0)),
        CommandKind::Kappa => kappa(cfg).map(|(a, s)| (a, s, 0)),
        CommandKind::Asymptotics => asymptotics(cfg).map(|(a, s)| (a, s, 0)),
        CommandKind::Pseudospectrum => pseudospectrum(cfg).map(|(a, s)| (a, s, 0)),
        CommandKind::Semigroup => semigroup(cfg).map(|(a, s)| (a, s, 0)),
        CommandKind::Verify => verify(cfg),
    }
}

fn params_json(p: &OscillatorParams) -> Value {
    json!({ "k": p.k(), "theta": num(p.theta()) })
}

fn disc_json(c: &DiscretizationConfig) -> Value {
    json!({ "basis_size": c.basis_size, "scale": num(c.scale), "n_max": c.n_max })
}

fn header(cfg: &RunConfig) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("command".into(), Value::from(cfg.command.name()));
    m.insert("params".into(), params_json(&cfg.params));
    m.insert("discretization".into(), disc_json(&cfg.discretization));
    m
}

fn kappa_json(k: Kappa) -> Value {
    opt(k.value())
}

fn spectrum(cfg: &RunConfig) -> CliResult<(Artifact, Vec<String>)> {
    let r = solve_spectrum(&cfg.params, &cfg.discretization)?;
    let mut table = Table::new(&["n", "re", "im", "residual"]);
    let mut pairs = Vec::new();
    for (p, res) in r.pairs.iter().zip(&r.residuals) {
        table.push(vec![p.index.into(), p.lambda.re.into(), p.lambda.im.into(), (*res).into()]);
        pairs.push(json!({
            "n": p.index,
            "re": num(p.lambda.re),
            "im": num(p.lambda.im),
            "residual": num(*res),
            "kappa": kappa_json(p.kappa),
        }));
    }
    let mut m = header(cfg);
    m.insert("eigenpairs".into(), Value::Array(pairs));
    let worst = r.residuals.iter().copied().fold(0.0, f64::max);
    let summary = vec![format!(
        "{} eigenpairs, max residual {worst:.3e}, λ_1 = {}",
        r.pairs.len(),
        r.pairs[0].lambda
    )];
    Ok((
        Artifact {
            stem: "spectrum".into(),
            json: Value::Object(m),
            tables: vec![("spectrum".into(), table)],
        },
        summary,
    ))
}

/// `[2n_max/5, n_max]`, which is `[10, 25]` at `n_max = 25`.
pub fn default_fit_window(n_max: usize) -> (usize, usize) {
    let lo = (2 * n_max / 5).max(1);
    if lo >= n_max {
        (1, n_max)
    } else {
        (lo, n_max)
    }
}

fn kappa(cfg: &RunConfig) -> CliResult<(Artifact, Vec<String>)> {
    let r = solve_spectrum(&cfg.params, &cfg.discretization)?;
    let mut table = Table::new(&["n", "modulus", "kappa", "log_kappa"]);
    let mut entries = Vec::new();
    for p in &r.pairs {
        let k = p.kappa.value();
        let lk = k.map(f64::ln);
        table.push(vec![p.index.into(), p.lambda.norm().into(), k.into(), lk.into()]);
        entries.push(json!({
            "n": p.index,
            "modulus": num(p.lambda.norm()),
            "kappa": opt(k),
            "log_kappa": opt(lk),
            "precision_limited": p.kappa.is_precision_limited(),
        }));
    }
    let (lo, hi) = cfg.fit_window.unwrap_or_else(|| default_fit_window(cfg.discretization.n_max));
    let pts: Vec<(usize, Kappa)> = r.pairs.iter().map(|p| (p.index, p.kappa)).collect();
    let fit = fit_rate(&pts, lo, hi)?;
    let c = rate_c(&cfg.params)?;
    let gap = relative_gap(&fit, c);
    let mut fit_table = Table::new(&["quantity", "value"]);
    fit_table.push(vec!["window_lo".into(), lo.into()]);
    fit_table.push(vec!["window_hi".into(), hi.into()]);
    for (name, v) in [
        ("slope", Some(fit.slope)),
        ("plain_slope", Some(fit.plain_slope)),
        ("rate_c", Some(c)),
        ("relative_gap", gap),
        ("fitted_k", Some(fit.fitted_k)),
    ] {
        fit_table.push(vec![name.into(), v.into()]);
    }
    fit_table.push(vec!["excluded".into(), fit.excluded.into()]);
    let mut m = header(cfg);
    m.insert("entries".into(), Value::Array(entries));
    m.insert(
        "rate_fit".into(),
        json!({
            "window": [lo, hi],
            "slope": num(fit.slope),
            "plain_slope": num(fit.plain_slope),
            "rate_c": num(c),
            "relative_gap": opt(gap),
            "fitted_k": num(fit.fitted_k),
            "n_used": fit.n_used,
            "excluded": fit.excluded,
        }),
    );
    let summary = vec![format!(
        "rate fit over n in [{lo}, {hi}]: slope {:.6}, rate_c {c:.6}, relative gap {}, fitted K {:.6}",
        fit.slope,
        gap.map_or("n/a".into(), |g| format!("{:.2}%", 100.0 * g)),
        fit.fitted_k
    )];
    Ok((
        Artifact {
            stem: "kappa".into(),
            json: Value::Object(m),
            tables: vec![("kappa".into(), table), ("kappa_fit".into(), fit_table)],
        },
        summary,
    ))
}

fn relative_gap(fit: &RateFit, c: f64) -> Option<f64> {
    (c > 0.0).then(|| (fit.slope - c).abs() / c)
}

fn asymptotics(cfg: &RunConfig) -> CliResult<(Artifact, Vec<String>)> {
    let r = AsymptoticReport::compute(&cfg.params)?;
    let dk = if cfg.params.k() == 1 {
        Some(spectral_instability_core::asymptotics::davies_kuijlaars_c1(cfg.params.theta())?)
    } else {
        None
    };
    let fields: [(&str, Option<f64>); 9] = [
        ("x_saddle", r.x_saddle),
        ("phi_at_saddle", Some(r.phi_at_saddle)),
        ("d_k", Some(r.d_k)),
        ("c_k", Some(r.c_k)),
        ("laplace_prefactor", r.laplace_prefactor),
        ("weyl_coefficient", Some(r.weyl_coefficient)),
        ("semigroup_threshold", r.semigroup_threshold),
        ("term_rate_threshold", r.term_rate_threshold),
        ("davies_kuijlaars_c1", dk),
    ];
    let mut table = Table::new(&["quantity", "value"]);
    let mut m = serde_json::Map::new();
    m.insert("command".into(), Value::from("asymptotics"));
    m.insert("params".into(), params_json(&cfg.params));
    let mut rep = serde_json::Map::new();
    for (name, v) in fields {
        table.push(vec![name.into(), v.into()]);
        rep.insert(name.into(), opt(v));
    }
    m.insert("report".into(), Value::Object(rep));
    let mut summary = vec![format!("c_k = {:.15}", r.c_k)];
    if let Some(d) = dk {
        summary.push(format!("davies_kuijlaars_c1 = {d:.15}, difference {:.3e}", (d - r.c_k).abs()));
    }
    Ok((
        Artifact {
            stem: "asymptotics".into(),
            json: Value::Object(m),
            tables: vec![("asymptotics".into(), table)],
        },
        summary,
    ))
}

/// Grid rows spread over worker threads.
pub fn compute_grid(params: &OscillatorParams, config: &DiscretizationConfig, spec: &GridSpec, threads: usize) -> CliResult<ResolventGrid> {
    spec.validate()?;
    let op = ResolventOperator::new(params, config)?;
    let rows: Vec<usize> = (0..spec.ny).collect();
    let values = par_map(&rows, threads, |&iy| op.row(spec, iy));
    Ok(ResolventGrid::from_rows(params, config, spec, values)?)
}

fn pseudospectrum(cfg: &RunConfig) -> CliResult<(Artifact, Vec<String>)> {
    let spec = cfg.grid.expect("checked at config time");
    let g = compute_grid(&cfg.params, &cfg.discretization, &spec, thread_count()?)?;
    let mut table = Table::new(&["re", "im", "resolvent_norm"]);
    for iy in 0..spec.ny {
        for ix in 0..spec.nx {
            let z = spec.node(ix, iy);
            table.push(vec![z.re.into(), z.im.into(), g.value(ix, iy).into()]);
        }
    }
    let mut m = header(cfg);
    m.insert(
        "grid".into(),
        json!({
            "re_min": num(spec.re_min), "re_max": num(spec.re_max),
            "im_min": num(spec.im_min), "im_max": num(spec.im_max),
            "nx": spec.nx, "ny": spec.ny,
        }),
    );
    m.insert("trusted_radius".into(), num(g.trusted_radius));
    m.insert("untrusted_nodes".into(), Value::from(g.untrusted_nodes));
    m.insert("truncation_warning".into(), Value::from(g.has_truncation_warning()));
    m.insert("values".into(), Value::Array(g.values.iter().map(|v| num(*v)).collect()));
    let mut summary = vec![format!("{} x {} grid", spec.nx, spec.ny)];
    if g.has_truncation_warning() {
        summary.push(format!(
            "warning: {} nodes lie beyond |z| = {:.4}, outside the trusted spectral window",
            g.untrusted_nodes, g.trusted_radius
        ));
    }
    Ok((
        Artifact {
            stem: "pseudospectrum".into(),
            json: Value::Object(m),
            tables: vec![("pseudospectrum".into(), table)],
        },
        summary,
    ))
}

/// Reports per time, with the partial-sum comparison against `e^{-tM} e_1`
/// using all retained terms wherever the series is not diverging.
pub fn semigroup_reports(cfg: &RunConfig, times: &[f64], threads: usize) -> CliResult<Vec<SemigroupSeriesReport>> {
    let spectrum = solve_spectrum(&cfg.params, &cfg.discretization)?;
    let mut e1 = vec![C64::new(0.0, 0.0); cfg.discretization.basis_size];
    e1[0] = C64::new(1.0, 0.0);
    let n_terms = spectrum.pairs.len();
    par_map(times, threads, |&t| {
        let r = SemigroupSeriesReport::compute(&spectrum, t, None)?;
        if r.classification.convergence == Convergence::Diverging {
            return Ok(r);
        }
        match r.clone().with_comparison(&spectrum, &e1, n_terms) {
            Ok(r) => Ok(r),
            Err(Error::Refused(_)) => Ok(r),
            Err(e) => Err(e.into()),
        }
    })
    .into_iter()
    .collect()
}

fn semigroup(cfg: &RunConfig) -> CliResult<(Artifact, Vec<String>)> {
    let times = cfg.t_values.clone().expect("checked at config time");
    let reports = semigroup_reports(cfg, &times, thread_count()?)?;
    let mut terms = Table::new(&["t", "n", "term_norm"]);
    let mut summ = Table::new(&[
        "t",
        "classification",
        "slope",
        "nominal_threshold",
        "term_rate_threshold",
        "empirical_threshold",
        "comparison_error",
    ]);
    let mut js = Vec::new();
    let mut summary = Vec::new();
    for r in &reports {
        for (i, v) in r.term_norms.iter().enumerate() {
            terms.push(vec![r.t.into(), (i + 1).into(), (*v).into()]);
        }
        let c = &r.classification;
        summ.push(vec![
            r.t.into(),
            c.convergence.as_str().into(),
            c.slope.into(),
            r.thresholds.nominal.into(),
            r.thresholds.term_rate.into(),
            r.thresholds.empirical.into(),
            r.comparison_error.into(),
        ]);
        js.push(json!({
            "t": num(r.t),
            "term_norms": r.term_norms.iter().map(|v| opt(*v)).collect::<Vec<_>>(),
            "excluded": r.excluded,
            "window": [r.window.start + 1, r.window.end],
            "classification": c.convergence.as_str(),
            "slope": opt(c.slope),
            "reason": c.reason,
            "thresholds": {
                "nominal": opt(r.thresholds.nominal),
                "term_rate": opt(r.thresholds.term_rate),
                "empirical": opt(r.thresholds.empirical),
            },
            "comparison_error": opt(r.comparison_error),
            "comparison_vector": "e_1",
            "comparison_terms": r.term_norms.len(),
        }));
        summary.push(format!(
            "t = {}: {} (slope {}), comparison error {}",
            r.t,
            c.convergence.as_str(),
            c.slope.map_or("n/a".into(), |s| format!("{s:.4}")),
            r.comparison_error.map_or("n/a".into(), |e| format!("{e:.3e}"))
        ));
    }
    let mut m = header(cfg);
    m.insert("reports".into(), Value::Array(js));
    Ok((
        Artifact {
            stem: "semigroup".into(),
            json: Value::Object(m),
            tables: vec![("semigroup".into(), terms), ("semigroup_summary".into(), summ)],
        },
        summary,
    ))
}

fn checks_artifact(stem: &str, head: serde_json::Map<String, Value>, checks: &[CheckResult]) -> Artifact {
    let mut table = Table::new(&["id", "passed", "detail"]);
    let mut js = Vec::new();
    for c in checks {
        table.push(vec![c.id.as_str().into(), Cell::Text(c.passed.to_string()), c.detail.as_str().into()]);
        js.push(json!({
            "id": c.id,
            "description": c.description,
            "passed": c.passed,
            "detail": c.detail,
        }));
    }
    let mut m = head;
    m.insert("all_passed".into(), Value::from(checks.iter().all(|c| c.passed)));
    m.insert("checks".into(), Value::Array(js));
    Artifact {
        stem: stem.into(),
        json: Value::Object(m),
        tables: vec![(stem.into(), table)],
    }
}

fn verify(cfg: &RunConfig) -> CliResult<(Artifact, Vec<String>, usize)> {
    let (checks, head) = if cfg.acceptance {
        let mut m = serde_json::Map::new();
        m.insert("command".into(), Value::from("verify"));
        m.insert("suite".into(), Value::from("acceptance"));
        (acceptance_suite(), m)
    } else {
        (verify_params(&cfg.params, &cfg.discretization), header(cfg))
    };
    let failed = checks.iter().filter(|c| !c.passed).count();
    let summary = checks.iter().map(CheckResult::line).collect();
    Ok((checks_artifact("verify", head, &checks), summary, failed))
}
