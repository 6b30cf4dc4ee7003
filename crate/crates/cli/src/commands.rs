use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use tensor_spectra::moments::{moment_table, LimitParams};
use tensor_spectra::oracle::{exact_expected_trace_moment, exact_variance_trace_moment};
use tensor_spectra::simulator::run_experiment;
use tensor_spectra::verify::verify_lemmas;
use tensor_spectra::{BaseDistribution, SpectralSummary, TauRule};

use crate::campaign::Campaign;
use crate::error::{CliError, CliResult};
use crate::manifest::{ManifestClock, RunManifest, SCHEMA_VERSION};
use crate::table::{csv_inputs, read_csv, render, rows_from_summary, write_csv, SummaryRow};

#[derive(Serialize)]
struct Artifact<'a, T: Serialize> {
    schema_version: u32,
    manifest: &'a RunManifest,
    #[serde(flatten)]
    body: T,
}

fn write_json<T: Serialize>(path: &Path, manifest: &RunManifest, body: T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(&Artifact { schema_version: SCHEMA_VERSION, manifest, body })
        .map_err(|e| CliError::parse(path, e))?;
    fs::write(path, text + "\n").map_err(|e| CliError::io(path, e))
}

fn json_string<T: Serialize>(manifest: &RunManifest, body: T) -> String {
    serde_json::to_string_pretty(&Artifact { schema_version: SCHEMA_VERSION, manifest, body }).expect("in-memory JSON")
}

pub fn verify(p_max: usize, out: Option<&Path>) -> CliResult<String> {
    let clock = ManifestClock::start("verify").output(out);
    let report = verify_lemmas(p_max)?;
    let manifest = clock.finish();
    let mut text = format!("# tensor-spectra {} verify --p-max {p_max}\n", manifest.tool_version);
    for c in &report.checks {
        text.push_str(&format!(
            "p={:<2} {:<28} {}  {}\n",
            c.p,
            c.name,
            if c.passed { "PASS" } else { "FAIL" },
            c.detail
        ));
    }
    text.push_str("class-one counts (p, s, count):\n");
    for (p, s, n) in &report.class_one_counts {
        text.push_str(&format!("  ({p}, {s}) {n}\n"));
    }
    if let Some(path) = out {
        write_json(path, &manifest, &report)?;
    }
    if !report.all_passed() {
        let failed = report.checks.iter().filter(|c| !c.passed).count();
        print!("{text}");
        return Err(CliError::VerificationFailed(format!("{failed} check(s) failed")));
    }
    text.push_str("all checks passed\n");
    Ok(text)
}

pub fn moments(p_max: usize, c: f64, d: f64, m4: f64, tau: &TauRule, out: Option<&Path>) -> CliResult<String> {
    let clock = ManifestClock::start("moments").output(out);
    let params = LimitParams::new(c, d, m4)?;
    let table = moment_table(p_max, &params, &tau.moments(p_max)?)?;
    let manifest = clock.finish();
    let mut text = format!(
        "# tensor-spectra {} moments c={c} d={d} m4={m4} tau={tau} theta={}\n",
        manifest.tool_version, table.theta
    );
    text.push_str(&format!("{:>3} {:>22} {:>22} {:>22}\n", "p", "gamma_p", "gamma_p(d=0)", "MP"));
    for r in &table.rows {
        text.push_str(&format!("{:>3} {:>22.12} {:>22.12} {:>22.12}\n", r.p, r.gamma, r.gamma_d0, r.mp));
    }
    text.push_str("polynomials (tau = 1):\n");
    for r in &table.rows {
        text.push_str(&format!("  gamma_{} = {}\n", r.p, r.polynomial));
    }
    text.push_str("Carleman partial sums of gamma_2j^(-1/2j):");
    for s in &table.carleman.partial_sums {
        text.push_str(&format!(" {s:.6}"));
    }
    text.push('\n');
    for r in &table.carleman.lower_bound {
        text.push_str(&format!("  p={} gamma/(c*theta^(p(p-1)/2)) = {:.6}\n", r.p, r.ratio));
    }
    if let Some(note) = &table.gamma1_note {
        text.push_str(&format!("note: {note}\n"));
    }
    if let Some(path) = out {
        write_json(path, &manifest, &table)?;
    }
    Ok(text)
}

#[derive(Serialize)]
struct OracleEcho<'a> {
    n: usize,
    k: usize,
    m: usize,
    p: usize,
    dist: BaseDistribution,
    tau: &'a TauRule,
    taus: Vec<f64>,
}

#[derive(Serialize)]
struct OracleBody<'a> {
    config: OracleEcho<'a>,
    mean: f64,
    variance: Option<f64>,
}

#[allow(clippy::too_many_arguments)]
pub fn oracle(
    n: usize,
    k: usize,
    m: usize,
    p: usize,
    dist: BaseDistribution,
    tau: &TauRule,
    with_variance: bool,
    out: Option<&Path>,
) -> CliResult<String> {
    let clock = ManifestClock::start("oracle").output(out);
    let taus = tau.resolve(m);
    let mean = exact_expected_trace_moment(n, k, m, p, &taus, &dist)?;
    let variance = if with_variance { Some(exact_variance_trace_moment(n, k, m, p, &taus, &dist)?) } else { None };
    let manifest = clock.finish();
    let body = OracleBody { config: OracleEcho { n, k, m, p, dist, tau, taus }, mean, variance };
    if let Some(path) = out {
        write_json(path, &manifest, &body)?;
    }
    Ok(json_string(&manifest, &body) + "\n")
}

#[derive(Serialize)]
struct SimulationBody<'a> {
    runs: &'a [SpectralSummary],
}

pub fn simulate(config: &Path, seed: Option<u64>, replicas: Option<usize>, out: &Path) -> CliResult<String> {
    let mut campaign = Campaign::load(config)?;
    if let Some(s) = seed {
        campaign.seed = s;
    }
    if let Some(r) = replicas {
        campaign.replicas = r;
    }
    let experiments = campaign.experiments()?;
    let mut clock = ManifestClock::start("simulate").config(config).output(Some(out)).seed(campaign.seed);
    let mut runs = Vec::with_capacity(experiments.len());
    for cfg in &experiments {
        let summary = run_experiment(cfg)?;
        clock.push_resolved(summary.sizes);
        runs.push(summary);
    }
    let manifest = clock.finish();
    fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    let rows: Vec<SummaryRow> = runs.iter().flat_map(rows_from_summary).collect();
    let csv_path = out.join("summary.csv");
    let json_path = out.join("summary.json");
    write_csv(&csv_path, &manifest, &rows)?;
    write_json(&json_path, &manifest, SimulationBody { runs: &runs })?;
    let mut text = manifest.comment_lines().join("\n") + "\n";
    if let Some(label) = runs.first().and_then(|r| r.theory_label.as_deref()) {
        text.push_str(&format!("# theory: {label}\n"));
    }
    text.push_str(&render(&rows));
    text.push_str(&format!("wrote {} and {}\n", csv_path.display(), json_path.display()));
    Ok(text)
}

#[derive(Serialize)]
struct GapSeries {
    p: usize,
    points: Vec<(usize, Option<f64>)>,
}

#[derive(Serialize)]
struct ReportBody<'a> {
    inputs: Vec<String>,
    rows: &'a [SummaryRow],
    gaps: Vec<GapSeries>,
}

pub fn report(input: &Path, out: &Path) -> CliResult<String> {
    let clock = ManifestClock::start("report").config(input).output(Some(out));
    let files = csv_inputs(input)?;
    let mut rows = Vec::new();
    for f in &files {
        rows.extend(read_csv(f)?);
    }
    if rows.is_empty() {
        return Err(CliError::Usage(format!("no simulation rows found in {}", input.display())));
    }
    rows.sort_by_key(|r| (r.p, r.n, r.k, r.m));
    let mut gaps: Vec<GapSeries> = Vec::new();
    for r in &rows {
        match gaps.last_mut() {
            Some(g) if g.p == r.p => g.points.push((r.n, r.gap)),
            _ => gaps.push(GapSeries { p: r.p, points: vec![(r.n, r.gap)] }),
        }
    }
    let manifest = clock.finish();
    if out.extension().is_some_and(|x| x == "json") {
        let inputs = files.iter().map(|f| f.display().to_string()).collect();
        write_json(out, &manifest, ReportBody { inputs, rows: &rows, gaps })?;
    } else {
        write_csv(out, &manifest, &rows)?;
    }
    let mut text = render(&rows);
    text.push_str(&format!("wrote {}\n", out.display()));
    Ok(text)
}

pub fn default_out_dir() -> PathBuf {
    PathBuf::from("results")
}
