//! `firelmp` command-line front end.
//!
//! Exit status: 0 on success (an infeasible dispatch is a result, not an
//! error), 1 for usage, missing-file and schema errors, 2 for internal
//! failures.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use firelmp::dispatch::{build_dispatch, status_label};
use firelmp::scenario::{clean_zero, render_table, MISSING};
use firelmp::{
    decompose_lmp, emit_report, fixtures, load_case, run_foc_sweep, run_load_perturbation, run_n_minus_1,
    run_scenario, save_case, solve_dispatch, DispatchConfig, DispatchError, DispatchMode, DispatchSolution, FocMode,
    LmpBreakdown, NetworkCase, ObjectiveForm, ReportFormat, RiskError, RiskProfile, ScenarioError, ScenarioSpec,
    SolutionDocument,
};
use indexmap::IndexMap;

#[derive(Parser, Debug)]
#[command(name = "firelmp", version, about = "Wildfire-risk-aware economic dispatch and LMP decomposition")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one dispatch and print generation, flows and prices.
    Solve(SolveArgs),
    /// Solve one dispatch and print the per-bus price decomposition.
    Lmp(SolveArgs),
    /// Solve once per FOC value, all at-risk lines fixed to it.
    Sweep(SweepArgs),
    /// Remove each line in turn and re-solve.
    N1(N1Args),
    /// Compare a base solve with one carrying extra load at a bus.
    Perturb(PerturbArgs),
    /// Run a scenario file.
    Run(RunArgs),
    /// Print a derived artifact without solving.
    Dump(DumpArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => ReportFormat::Text,
            Format::Csv => ReportFormat::Csv,
            Format::Json => ReportFormat::Json,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Edc,
    Wrb,
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Case file, or the name of a bundled case (pjm5, two_bus, triangle).
    #[arg(long)]
    case: String,
    /// Risk profile. Defaults to `<case>_risk.json` beside the case if present,
    /// otherwise the stock profile.
    #[arg(long)]
    risk: Option<String>,
    /// Slack bus id; defaults to the first bus.
    #[arg(long)]
    slack: Option<String>,
    /// Allow partial service at buses next to at-risk lines.
    #[arg(long)]
    shedding: bool,
    /// Use `Σ VOLL·r` in the objective instead of the shed-energy penalty.
    #[arg(long)]
    paper_literal_objective: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the result here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_enum, default_value = "wrb")]
    mode: Mode,
    /// A factor in (0, 1], `wr` to derive it from location wildfire risk, or
    /// `optimized` to let the LP choose it within the profile's bounds.
    #[arg(long, default_value = "1")]
    foc: String,
    /// Per-line FOC overrides, `line=value` (fixed) or `line=min:max` (optimized).
    #[arg(long = "foc-line", value_name = "LINE=VALUE")]
    foc_line: Vec<String>,
    /// Also write the PTDF matrix as CSV to this file.
    #[arg(long)]
    dump_ptdf: Option<PathBuf>,
    /// Also write the LP listing to this file.
    #[arg(long)]
    dump_lp: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated FOC values.
    #[arg(long, value_delimiter = ',', required = true)]
    foc: Vec<f64>,
}

#[derive(Args, Debug)]
struct N1Args {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, default_value_t = 1.0)]
    foc: f64,
}

#[derive(Args, Debug)]
struct PerturbArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, default_value = "1")]
    foc: String,
    #[arg(long)]
    bus: String,
    /// MW added at the bus.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    delta: f64,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Scenario file.
    spec: String,
    /// Overrides the scenario's base case.
    #[arg(long)]
    case: Option<String>,
    /// Overrides the scenario's risk profile.
    #[arg(long)]
    risk: Option<String>,
    #[arg(long)]
    paper_literal_objective: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum DumpWhat {
    /// PTDF matrix as CSV.
    Ptdf,
    /// The dispatch LP in readable form.
    Lp,
    /// The case, normalized.
    Case,
    /// The risk profile, with defaults filled in.
    Risk,
}

#[derive(Args, Debug)]
struct DumpArgs {
    #[arg(value_enum)]
    what: DumpWhat,
    #[arg(long)]
    case: String,
    #[arg(long)]
    risk: Option<String>,
    #[arg(long)]
    slack: Option<String>,
    #[arg(long, default_value = "1")]
    foc: String,
    #[arg(long)]
    shedding: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Errors the user can fix (exit 1) versus everything else (exit 2).
#[derive(Debug)]
enum Failure {
    Usage(String),
    Internal(anyhow::Error),
}

type CliResult<T> = Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

impl From<DispatchError> for Failure {
    fn from(e: DispatchError) -> Self {
        match e {
            DispatchError::Lp(_) | DispatchError::Ptdf(firelmp::PtdfError::Singular) => {
                Failure::Internal(anyhow::Error::new(e))
            }
            other => usage(other.to_string()),
        }
    }
}

impl From<ScenarioError> for Failure {
    fn from(e: ScenarioError) -> Self {
        match e {
            ScenarioError::Dispatch(d) => d.into(),
            other => usage(other.to_string()),
        }
    }
}

impl From<RiskError> for Failure {
    fn from(e: RiskError) -> Self {
        usage(e.to_string())
    }
}

impl From<firelmp::CaseError> for Failure {
    fn from(e: firelmp::CaseError) -> Self {
        usage(e.to_string())
    }
}

/// Where an input came from: a file on disk or a bundled fixture.
struct Source {
    text: String,
    path: Option<PathBuf>,
    stem: String,
}

fn fixture_dir() -> Option<PathBuf> {
    std::env::var_os("WD_FIXTURES").map(PathBuf::from)
}

fn with_json_ext(name: &str) -> String {
    if name.ends_with(".json") {
        name.to_string()
    } else {
        format!("{name}.json")
    }
}

fn stem_of(name: &str) -> String {
    let base = Path::new(name).file_name().and_then(|s| s.to_str()).unwrap_or(name);
    base.strip_suffix(".json").unwrap_or(base).to_string()
}

/// Looks for `name` as a path, then in `$WD_FIXTURES`, then among bundled fixtures.
fn find_input(name: &str) -> Option<Source> {
    let read = |p: PathBuf| -> Option<Source> {
        let text = fs::read_to_string(&p).ok()?;
        Some(Source {
            text,
            path: Some(p),
            stem: stem_of(name),
        })
    };
    let direct = PathBuf::from(name);
    if direct.is_file() {
        return read(direct);
    }
    if let Some(dir) = fixture_dir() {
        let p = dir.join(with_json_ext(Path::new(name).file_name().and_then(|s| s.to_str()).unwrap_or(name)));
        if p.is_file() {
            return read(p);
        }
    }
    fixtures::bundled(name).map(|text| Source {
        text: text.to_string(),
        path: None,
        stem: stem_of(name),
    })
}

fn load_case_arg(name: &str) -> CliResult<(NetworkCase, Source)> {
    let src = find_input(name).ok_or_else(|| usage(format!("case file not found: {name}")))?;
    let case = load_case(&src.text).map_err(|e| usage(format!("{name}: {e}")))?;
    Ok((case, src))
}

fn parse_risk(text: &str, what: &str) -> CliResult<RiskProfile> {
    RiskProfile::from_json(text).map_err(|e| usage(format!("{what}: {e}")))
}

/// Explicit `--risk`, else `<stem>_risk.json` next to the case (or bundled),
/// else the stock profile for the case.
fn load_risk_arg(risk: Option<&str>, case: &NetworkCase, case_src: &Source) -> CliResult<RiskProfile> {
    if let Some(name) = risk {
        let src = find_input(name).ok_or_else(|| usage(format!("risk file not found: {name}")))?;
        return parse_risk(&src.text, name);
    }
    let sibling = format!("{}_risk.json", case_src.stem);
    if let Some(dir) = case_src.path.as_ref().and_then(|p| p.parent()) {
        let p = dir.join(&sibling);
        if p.is_file() {
            let text = fs::read_to_string(&p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            return parse_risk(&text, &p.display().to_string());
        }
    }
    if let Some(text) = fixture_dir()
        .map(|d| d.join(&sibling))
        .filter(|p| p.is_file())
        .and_then(|p| fs::read_to_string(p).ok())
    {
        return parse_risk(&text, &sibling);
    }
    if let Some(text) = fixtures::bundled(&sibling) {
        let profile = parse_risk(text, &sibling)?;
        if profile.validate_for(case).is_ok() {
            return Ok(profile);
        }
    }
    Ok(RiskProfile::default_for(case))
}

fn parse_foc(foc: &str, overrides: &[String]) -> CliResult<FocMode> {
    let parse_num = |s: &str, what: &str| -> CliResult<f64> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| usage(format!("{what}: expected a number, got {s:?}")))
    };
    let split = |kv: &str| -> CliResult<(String, String)> {
        kv.split_once('=')
            .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
            .ok_or_else(|| usage(format!("--foc-line expects LINE=VALUE, got {kv:?}")))
    };
    match foc.trim() {
        "optimized" | "optimize" | "opt" => {
            let mut bounds = IndexMap::new();
            for kv in overrides {
                let (line, v) = split(kv)?;
                let (lo, hi) = v
                    .split_once(':')
                    .ok_or_else(|| usage(format!("optimized --foc-line expects LINE=MIN:MAX, got {kv:?}")))?;
                bounds.insert(line, (parse_num(lo, "--foc-line")?, parse_num(hi, "--foc-line")?));
            }
            Ok(FocMode::Optimized(bounds))
        }
        "wr" => {
            if !overrides.is_empty() {
                return Err(usage("--foc-line cannot be combined with --foc wr"));
            }
            Ok(FocMode::FromWildfireRisk)
        }
        v => {
            let base = parse_num(v, "--foc")?;
            if overrides.is_empty() {
                return Ok(FocMode::Uniform(base));
            }
            let mut per_line = IndexMap::new();
            for kv in overrides {
                let (line, v) = split(kv)?;
                per_line.insert(line, parse_num(&v, "--foc-line")?);
            }
            // Filled out to every at-risk line once the case is known.
            per_line.insert(String::new(), base);
            Ok(FocMode::PerLine(per_line))
        }
    }
}

/// Expands a `PerLine` map built by `parse_foc` so every at-risk line has a value.
fn complete_foc(mode: FocMode, case: &NetworkCase) -> FocMode {
    match mode {
        FocMode::PerLine(mut map) => {
            let base = map.shift_remove("").unwrap_or(1.0);
            let full = case
                .lines
                .iter()
                .filter(|l| l.at_risk)
                .map(|l| (l.id.clone(), map.get(&l.id).copied().unwrap_or(base)))
                .collect::<IndexMap<_, _>>();
            for k in map.keys() {
                if !full.contains_key(k) {
                    // Let dispatch report the unknown or not-at-risk line.
                    let mut with_bad = full.clone();
                    with_bad.insert(k.clone(), map[k]);
                    return FocMode::PerLine(with_bad);
                }
            }
            FocMode::PerLine(full)
        }
        other => other,
    }
}

fn base_config(common: &CommonArgs) -> DispatchConfig {
    DispatchConfig {
        mode: DispatchMode::WrbEdc,
        foc: FocMode::Uniform(1.0),
        allow_shedding: common.shedding,
        slack: common.slack.clone(),
        objective: if common.paper_literal_objective {
            ObjectiveForm::PaperLiteral
        } else {
            ObjectiveForm::ShedPenalty
        },
    }
}

fn write_output(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => fs::write(p, text)
            .with_context(|| format!("writing {}", p.display()))
            .map_err(Failure::Internal),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn num(v: f64) -> String {
    format!("{:.4}", clean_zero(v))
}

fn opt_num(v: Option<f64>) -> String {
    v.map_or(MISSING.to_string(), num)
}

fn csv_num(v: Option<f64>) -> String {
    v.map_or(String::new(), |x| x.to_string())
}

fn lmp_map(prices: Option<&IndexMap<String, LmpBreakdown>>) -> IndexMap<String, f64> {
    prices
        .map(|p| p.iter().map(|(k, b)| (k.clone(), b.lmp)).collect())
        .unwrap_or_default()
}

fn render_solution(case: &NetworkCase, sol: &DispatchSolution, format: Format) -> CliResult<String> {
    let prices = if sol.is_optimal() { Some(decompose_lmp(sol)?) } else { None };
    match format {
        Format::Json => {
            let doc = SolutionDocument::new(sol, lmp_map(prices.as_ref()));
            let mut s = serde_json::to_string_pretty(&doc).map_err(|e| Failure::Internal(e.into()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut out = String::from("section,id,field,value\n");
            writeln!(out, "summary,,status,{}", status_label(sol.status)).unwrap();
            writeln!(out, "summary,,objective,{}", csv_num(sol.objective)).unwrap();
            for (g, x) in &sol.generation {
                writeln!(out, "generator,{g},mw,{x}").unwrap();
            }
            for (l, f) in &sol.flows {
                writeln!(out, "line,{l},flow,{f}").unwrap();
            }
            if let Some(d) = &sol.duals {
                for (l, mu) in &d.line_upper {
                    writeln!(out, "line,{l},dual,{}", mu + d.line_lower[l]).unwrap();
                }
            }
            for (l, f) in &sol.foc {
                writeln!(out, "line,{l},foc,{f}").unwrap();
            }
            for (b, r) in &sol.shed_ratio {
                writeln!(out, "bus,{b},served,{r}").unwrap();
            }
            for (b, p) in lmp_map(prices.as_ref()) {
                writeln!(out, "bus,{b},lmp,{p}").unwrap();
            }
            Ok(out)
        }
        Format::Text => {
            let mut out = String::new();
            writeln!(out, "case: {}", case.name).unwrap();
            writeln!(out, "status: {}", status_label(sol.status)).unwrap();
            writeln!(out, "objective: {}", opt_num(sol.objective)).unwrap();
            if !sol.is_optimal() {
                return Ok(out);
            }
            let duals = sol.duals.as_ref().expect("optimal solutions carry duals");
            out.push('\n');
            let mut rows = vec![vec!["generator".into(), "bus".into(), "mw".into(), "cost".into()]];
            for g in &case.generators {
                rows.push(vec![g.id.clone(), g.bus.clone(), num(sol.generation[&g.id]), num(g.cost)]);
            }
            out.push_str(&render_table(&rows));
            out.push('\n');
            let mut rows = vec![vec![
                "line".into(),
                "".into(),
                "flow".into(),
                "limit".into(),
                "foc".into(),
                "dual".into(),
                "binding".into(),
            ]];
            let binding = sol.binding_lines();
            for l in &case.lines {
                let limit = sol.effective_limits(&l.id).map(|(_, hi)| hi);
                // At most one side of a limit pair is active, so the sum is that side's multiplier.
                let dual = duals.line_upper.get(&l.id).map(|u| u + duals.line_lower[&l.id]);
                rows.push(vec![
                    l.id.clone(),
                    format!("{}-{}", l.from_bus, l.to_bus),
                    num(sol.flows[&l.id]),
                    opt_num(limit),
                    opt_num(sol.foc.get(&l.id).copied()),
                    opt_num(dual),
                    if binding.contains(&l.id) { "yes".into() } else { "".into() },
                ]);
            }
            out.push_str(&render_table(&rows));
            out.push('\n');
            out.push_str(&lmp_table(prices.as_ref().expect("optimal"), sol));
            Ok(out)
        }
    }
}

fn lmp_table(prices: &IndexMap<String, LmpBreakdown>, sol: &DispatchSolution) -> String {
    let mut rows = vec![vec![
        "bus".into(),
        "".into(),
        "lmp".into(),
        "energy".into(),
        "congestion".into(),
        "wildfire".into(),
        "voll".into(),
        "served".into(),
    ]];
    for (bus, b) in prices {
        rows.push(vec![
            bus.clone(),
            String::new(),
            num(b.lmp),
            num(b.energy),
            num(b.congestion()),
            num(b.wildfire),
            num(b.voll),
            opt_num(sol.shed_ratio.get(bus).copied()),
        ]);
    }
    render_table(&rows)
}

fn render_lmps(sol: &DispatchSolution, format: Format) -> CliResult<String> {
    if !sol.is_optimal() {
        return Ok(match format {
            Format::Json => format!("{{\"status\": \"{}\", \"lmps\": []}}\n", status_label(sol.status)),
            Format::Csv => "bus,lmp,energy,congestion,wildfire,voll\n".to_string(),
            Format::Text => format!("status: {}\nno prices: the dispatch has no optimal solution\n", status_label(sol.status)),
        });
    }
    let prices = decompose_lmp(sol)?;
    Ok(match format {
        Format::Text => lmp_table(&prices, sol),
        Format::Csv => {
            let mut out = String::from("bus,lmp,energy,congestion,congestion_normal,congestion_risk,wildfire,voll\n");
            for (bus, b) in &prices {
                writeln!(
                    out,
                    "{bus},{},{},{},{},{},{},{}",
                    b.lmp,
                    b.energy,
                    b.congestion(),
                    b.congestion_normal,
                    b.congestion_risk,
                    b.wildfire,
                    b.voll
                )
                .unwrap();
            }
            out
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = prices
                .iter()
                .map(|(bus, b)| {
                    let mut v = serde_json::to_value(b).expect("breakdown serializes");
                    v.as_object_mut().unwrap().insert("bus".into(), bus.clone().into());
                    v
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&rows).map_err(|e| Failure::Internal(e.into()))?;
            s.push('\n');
            s
        }
    })
}

fn solve_config(args: &SolveArgs, case: &NetworkCase) -> CliResult<DispatchConfig> {
    let mut config = base_config(&args.common);
    if args.mode == Mode::Edc {
        config.mode = DispatchMode::Edc;
        return Ok(config);
    }
    config.foc = complete_foc(parse_foc(&args.foc, &args.foc_line)?, case);
    Ok(config)
}

fn cmd_solve(args: SolveArgs, prices_only: bool) -> CliResult<()> {
    let (case, src) = load_case_arg(&args.common.case)?;
    let risk = load_risk_arg(args.common.risk.as_deref(), &case, &src)?;
    let config = solve_config(&args, &case)?;
    if args.dump_ptdf.is_some() || args.dump_lp.is_some() {
        let (lp, ptdf) = build_dispatch(&case, &risk, &config)?;
        if let Some(p) = &args.dump_ptdf {
            write_output(Some(p), &ptdf.to_csv())?;
        }
        if let Some(p) = &args.dump_lp {
            write_output(Some(p), &lp.problem.listing())?;
        }
    }
    let sol = solve_dispatch(&case, &risk, &config)?;
    let text = if prices_only {
        render_lmps(&sol, args.common.format)?
    } else {
        render_solution(&case, &sol, args.common.format)?
    };
    write_output(args.common.out.as_deref(), &text)
}

fn cmd_sweep(args: SweepArgs) -> CliResult<()> {
    let (case, src) = load_case_arg(&args.common.case)?;
    let risk = load_risk_arg(args.common.risk.as_deref(), &case, &src)?;
    for &f in &args.foc {
        if !(f > 0.0 && f <= 1.0) {
            return Err(usage(format!("--foc values must be in (0, 1], got {f}")));
        }
    }
    let report = run_foc_sweep(&case, &risk, &args.foc, &base_config(&args.common));
    write_output(args.common.out.as_deref(), &emit_report(&report, args.common.format.into()))
}

fn cmd_n1(args: N1Args) -> CliResult<()> {
    let (case, src) = load_case_arg(&args.common.case)?;
    let risk = load_risk_arg(args.common.risk.as_deref(), &case, &src)?;
    if !(args.foc > 0.0 && args.foc <= 1.0) {
        return Err(usage(format!("--foc must be in (0, 1], got {}", args.foc)));
    }
    let report = run_n_minus_1(&case, &risk, args.foc, &base_config(&args.common));
    write_output(args.common.out.as_deref(), &emit_report(&report, args.common.format.into()))
}

fn cmd_perturb(args: PerturbArgs) -> CliResult<()> {
    let (case, src) = load_case_arg(&args.common.case)?;
    let risk = load_risk_arg(args.common.risk.as_deref(), &case, &src)?;
    let mut config = base_config(&args.common);
    config.foc = complete_foc(parse_foc(&args.foc, &[])?, &case);
    let report = run_load_perturbation(&case, &risk, &config, &args.bus, args.delta)?;
    write_output(args.common.out.as_deref(), &emit_report(&report, args.common.format.into()))
}

fn cmd_run(args: RunArgs) -> CliResult<()> {
    let src = find_input(&args.spec).ok_or_else(|| usage(format!("scenario file not found: {}", args.spec)))?;
    let spec = ScenarioSpec::from_json(&src.text).map_err(|e| usage(format!("{}: {e}", args.spec)))?;
    let case_name = args.case.clone().unwrap_or_else(|| spec.base_case.clone());
    // A relative base case is looked up next to the scenario file first.
    let beside = src
        .path
        .as_ref()
        .and_then(|p| p.parent())
        .map(|d| d.join(with_json_ext(&case_name)))
        .filter(|p| p.is_file());
    let (case, case_src) = match beside {
        Some(p) if args.case.is_none() => load_case_arg(&p.display().to_string())?,
        _ => load_case_arg(&case_name)?,
    };
    let risk_name = args.risk.clone().or_else(|| spec.risk.clone());
    let risk = load_risk_arg(risk_name.as_deref(), &case, &case_src)?;
    let mut base = DispatchConfig::fixed_foc(spec.foc);
    if args.paper_literal_objective {
        base.objective = ObjectiveForm::PaperLiteral;
    }
    let report = run_scenario(&spec, &case, &risk, &base)?;
    write_output(args.out.as_deref(), &emit_report(&report, args.format.into()))
}

fn cmd_dump(args: DumpArgs) -> CliResult<()> {
    let (case, src) = load_case_arg(&args.case)?;
    let text = match args.what {
        DumpWhat::Case => save_case(&case) + "\n",
        DumpWhat::Risk => load_risk_arg(args.risk.as_deref(), &case, &src)?.to_json() + "\n",
        DumpWhat::Ptdf => {
            let slack = args.slack.clone().unwrap_or_else(|| case.buses[0].id.clone());
            firelmp::compute_ptdf::<f64>(&case, &slack)
                .map_err(DispatchError::from)?
                .to_csv()
        }
        DumpWhat::Lp => {
            let risk = load_risk_arg(args.risk.as_deref(), &case, &src)?;
            let config = DispatchConfig {
                foc: complete_foc(parse_foc(&args.foc, &[])?, &case),
                allow_shedding: args.shedding,
                slack: args.slack.clone(),
                ..DispatchConfig::fixed_foc(1.0)
            };
            build_dispatch(&case, &risk, &config)?.0.problem.listing()
        }
    };
    write_output(args.out.as_deref(), &text)
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Solve(a) => cmd_solve(a, false),
        Command::Lmp(a) => cmd_solve(a, true),
        Command::Sweep(a) => cmd_sweep(a),
        Command::N1(a) => cmd_n1(a),
        Command::Perturb(a) => cmd_perturb(a),
        Command::Run(a) => cmd_run(a),
        Command::Dump(a) => cmd_dump(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("internal error: {e:#}");
            ExitCode::from(2)
        }
    }
}
