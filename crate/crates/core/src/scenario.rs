//! Batches of dispatch solves: FOC sweeps, limit deratings, single-line
//! outages and load perturbations, plus text/CSV/JSON reports.
//!
//! Variants are solved in parallel; reports keep the order variants were
//! given in.

use std::fmt::Write as _;
use std::str::FromStr;

use indexmap::IndexMap;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dispatch::{solve_dispatch, DispatchConfig, DispatchMode, DispatchSolution, FocMode};
use crate::error::{CaseError, DispatchError, ScenarioError};
use crate::network::{apply_outage, NetworkCase};
use crate::pricing::lmps;
use crate::risk::RiskProfile;

fn default_foc() -> f64 {
    1.0
}

/// A batch of variants over one base case, as read from a scenario file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub base_case: String,
    /// Risk profile to use; defaults to the stock profile for the case.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub risk: Option<String>,
    /// FOC applied to every at-risk line unless a variant overrides it.
    #[serde(default = "default_foc")]
    pub foc: f64,
    #[serde(default)]
    pub shedding: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slack: Option<String>,
    pub variants: Vec<VariantSpec>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariantSpec {
    pub label: String,
    /// FOC per at-risk line.
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub foc: IndexMap<String, f64>,
    /// Symmetric MW limit per line.
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub limits: IndexMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outage: Option<String>,
    /// MW added to each bus's demand.
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub load_deltas: IndexMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shedding: Option<bool>,
}

impl ScenarioSpec {
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        serde_json::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))
    }

    /// Checks labels are unique and every override names something in `case`.
    pub fn validate_for(&self, case: &NetworkCase) -> Result<(), ScenarioError> {
        let bad = |m: String| Err(ScenarioError::Invalid(m));
        if !(self.foc > 0.0 && self.foc <= 1.0) {
            return bad(format!("foc {} must be in (0, 1]", self.foc));
        }
        let mut seen = std::collections::HashSet::new();
        for v in &self.variants {
            if !seen.insert(v.label.as_str()) {
                return bad(format!("duplicate variant label {:?}", v.label));
            }
            for id in v.foc.keys() {
                match case.line(id) {
                    Some(l) if l.at_risk => {}
                    Some(_) => return bad(format!("variant {}: line {id} is not at risk", v.label)),
                    None => return bad(format!("variant {}: unknown line {id}", v.label)),
                }
            }
            for (id, &mw) in &v.limits {
                if case.line(id).is_none() {
                    return bad(format!("variant {}: unknown line {id}", v.label));
                }
                if !(mw >= 0.0) || !mw.is_finite() {
                    return bad(format!("variant {}: limit for {id} must be a finite value >= 0", v.label));
                }
            }
            if let Some(id) = &v.outage {
                if case.line(id).is_none() {
                    return bad(format!("variant {}: unknown outage line {id}", v.label));
                }
            }
            for id in v.load_deltas.keys() {
                if case.bus_index(id).is_none() {
                    return bad(format!("variant {}: unknown bus {id}", v.label));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScenarioStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// The outage split the network; nothing was solved.
    Disconnected,
    /// The variant could not be built or solved.
    Error,
}

impl ScenarioStatus {
    pub fn label(self) -> &'static str {
        match self {
            Self::Optimal => "Optimal",
            Self::Infeasible => "Infeasible",
            Self::Unbounded => "Unbounded",
            Self::Disconnected => "Disconnected",
            Self::Error => "Error",
        }
    }
}

/// Base-versus-perturbed comparison attached to the perturbed row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationSummary {
    pub delta_mw: f64,
    pub delta_objective: Option<f64>,
    /// Base-case LMP at the perturbed bus.
    pub lmp: Option<f64>,
    /// `|Δobjective − lmp·Δ|`.
    pub gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantResult {
    pub label: String,
    pub status: ScenarioStatus,
    pub message: Option<String>,
    pub objective: Option<f64>,
    pub generation: IndexMap<String, f64>,
    pub flows: IndexMap<String, f64>,
    pub lmps: IndexMap<String, f64>,
    pub foc: IndexMap<String, f64>,
    pub shed: IndexMap<String, f64>,
    pub total_served: Option<f64>,
    pub binding: Vec<String>,
    pub perturbation: Option<PerturbationSummary>,
}

impl VariantResult {
    fn bare(label: impl Into<String>, status: ScenarioStatus, message: Option<String>) -> Self {
        Self {
            label: label.into(),
            status,
            message,
            objective: None,
            generation: IndexMap::new(),
            flows: IndexMap::new(),
            lmps: IndexMap::new(),
            foc: IndexMap::new(),
            shed: IndexMap::new(),
            total_served: None,
            binding: Vec::new(),
            perturbation: None,
        }
    }

    fn from_solution(label: &str, case: &NetworkCase, sol: &DispatchSolution) -> Self {
        let status = match sol.status {
            crate::lp::LpStatus::Optimal => ScenarioStatus::Optimal,
            crate::lp::LpStatus::Infeasible => ScenarioStatus::Infeasible,
            crate::lp::LpStatus::Unbounded => ScenarioStatus::Unbounded,
        };
        if status != ScenarioStatus::Optimal {
            return Self::bare(label, status, None);
        }
        let violations = sol.invariant_violations(case);
        if !violations.is_empty() {
            return Self::bare(label, ScenarioStatus::Error, Some(violations.join("; ")));
        }
        let prices = match lmps(sol) {
            Ok(p) => p,
            Err(e) => return Self::bare(label, ScenarioStatus::Error, Some(e.to_string())),
        };
        Self {
            label: label.to_string(),
            status,
            message: None,
            objective: sol.objective,
            generation: sol.generation.clone(),
            flows: sol.flows.clone(),
            lmps: prices,
            foc: sol.foc.clone(),
            shed: sol.shed_ratio.clone(),
            total_served: Some(sol.total_served()),
            binding: sol.binding_lines(),
            perturbation: None,
        }
    }
}

/// Column headings (entity ids in case order) plus one row per variant.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub generators: Vec<String>,
    pub lines: Vec<String>,
    pub buses: Vec<String>,
    pub variants: Vec<VariantResult>,
}

impl ScenarioReport {
    fn for_case(case: &NetworkCase, variants: Vec<VariantResult>) -> Self {
        Self {
            generators: case.generators.iter().map(|g| g.id.clone()).collect(),
            lines: case.lines.iter().map(|l| l.id.clone()).collect(),
            buses: case.buses.iter().map(|b| b.id.clone()).collect(),
            variants,
        }
    }

    pub fn variant(&self, label: &str) -> Option<&VariantResult> {
        self.variants.iter().find(|v| v.label == label)
    }
}

/// Solves one fully specified variant; failures become status rows.
pub fn solve_variant(label: &str, case: &NetworkCase, risk: &RiskProfile, config: &DispatchConfig) -> VariantResult {
    match solve_dispatch(case, risk, config) {
        Ok(sol) => VariantResult::from_solution(label, case, &sol),
        Err(DispatchError::Case(CaseError::Disconnected(_))) => {
            VariantResult::bare(label, ScenarioStatus::Disconnected, None)
        }
        Err(e) => VariantResult::bare(label, ScenarioStatus::Error, Some(e.to_string())),
    }
}

fn with_uniform_foc(base: &DispatchConfig, foc: f64) -> DispatchConfig {
    DispatchConfig {
        mode: DispatchMode::WrbEdc,
        foc: FocMode::Uniform(foc),
        ..base.clone()
    }
}

fn foc_label(foc: f64) -> String {
    format!("foc={foc}")
}

/// One WRB-EDC solve per FOC value with every at-risk line fixed to it.
/// `base` supplies shedding, slack and objective settings.
pub fn run_foc_sweep(
    case: &NetworkCase,
    risk: &RiskProfile,
    foc_values: &[f64],
    base: &DispatchConfig,
) -> ScenarioReport {
    let rows = foc_values
        .par_iter()
        .map(|&f| solve_variant(&foc_label(f), case, risk, &with_uniform_foc(base, f)))
        .collect();
    ScenarioReport::for_case(case, rows)
}

/// Removes each line in turn and re-solves at the given FOC.
pub fn run_n_minus_1(case: &NetworkCase, risk: &RiskProfile, foc: f64, base: &DispatchConfig) -> ScenarioReport {
    let config = with_uniform_foc(base, foc);
    let rows = case
        .lines
        .par_iter()
        .map(|line| {
            let label = format!("loss-{}", line.id);
            match apply_outage(case, &line.id) {
                Ok(out) if !out.connected => VariantResult::bare(label, ScenarioStatus::Disconnected, None),
                Ok(out) => solve_variant(&label, &out.case, &risk.restricted_to(&out.case), &config),
                Err(e) => VariantResult::bare(label, ScenarioStatus::Error, Some(e.to_string())),
            }
        })
        .collect();
    ScenarioReport::for_case(case, rows)
}

/// Base solve and a solve with `delta` MW more load at `bus`; the second row
/// carries the comparison.
pub fn run_load_perturbation(
    case: &NetworkCase,
    risk: &RiskProfile,
    config: &DispatchConfig,
    bus: &str,
    delta: f64,
) -> Result<ScenarioReport, ScenarioError> {
    if !delta.is_finite() {
        return Err(ScenarioError::Invalid(format!("load delta {delta} is not finite")));
    }
    let bumped = case.with_demand_deltas([(bus, delta)])?;
    let label = format!("{bus}{delta:+}MW");
    let (base_row, mut bumped_row) = rayon::join(
        || solve_variant("base", case, risk, config),
        || solve_variant(&label, &bumped, risk, config),
    );
    let delta_objective = match (base_row.objective, bumped_row.objective) {
        (Some(a), Some(b)) => Some(b - a),
        _ => None,
    };
    let lmp = base_row.lmps.get(bus).copied();
    let gap = match (delta_objective, lmp) {
        (Some(d), Some(p)) => Some((d - p * delta).abs()),
        _ => None,
    };
    bumped_row.perturbation = Some(PerturbationSummary {
        delta_mw: delta,
        delta_objective,
        lmp,
        gap,
    });
    Ok(ScenarioReport::for_case(case, vec![base_row, bumped_row]))
}

/// Applies a variant's limit overrides, load deltas and outage to `case`.
/// Returns `None` when the outage disconnects the network.
pub fn variant_case(case: &NetworkCase, v: &VariantSpec) -> Result<Option<NetworkCase>, ScenarioError> {
    let mut out = case.clone();
    for (id, &mw) in &v.limits {
        let k = out.line_index(id).ok_or_else(|| CaseError::UnknownLine(id.clone()))?;
        out.lines[k].t_max = mw;
        out.lines[k].t_min = -mw;
    }
    let mut out = out.with_demand_deltas(v.load_deltas.iter().map(|(b, &d)| (b.as_str(), d)))?;
    if let Some(id) = &v.outage {
        let o = apply_outage(&out, id)?;
        if !o.connected {
            return Ok(None);
        }
        out = o.case;
    }
    Ok(Some(out))
}

/// Runs every variant of a scenario file against an already loaded case.
pub fn run_scenario(
    spec: &ScenarioSpec,
    case: &NetworkCase,
    risk: &RiskProfile,
    base: &DispatchConfig,
) -> Result<ScenarioReport, ScenarioError> {
    spec.validate_for(case)?;
    let mut base = with_uniform_foc(base, spec.foc);
    base.allow_shedding = spec.shedding;
    if spec.slack.is_some() {
        base.slack = spec.slack.clone();
    }
    let rows = spec
        .variants
        .par_iter()
        .map(|v| {
            let vcase = match variant_case(case, v) {
                Ok(Some(c)) => c,
                Ok(None) => return VariantResult::bare(&v.label, ScenarioStatus::Disconnected, None),
                Err(e) => return VariantResult::bare(&v.label, ScenarioStatus::Error, Some(e.to_string())),
            };
            let vrisk = risk.restricted_to(&vcase);
            let mut config = base.clone();
            if let Some(s) = v.shedding {
                config.allow_shedding = s;
            }
            if !v.foc.is_empty() {
                let per_line = vcase
                    .lines
                    .iter()
                    .filter(|l| l.at_risk)
                    .map(|l| (l.id.clone(), v.foc.get(&l.id).copied().unwrap_or(spec.foc)))
                    .collect();
                config.foc = FocMode::PerLine(per_line);
            }
            solve_variant(&v.label, &vcase, &vrisk, &config)
        })
        .collect();
    Ok(ScenarioReport::for_case(case, rows))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "text" | "txt" => Ok(Self::Text),
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(ScenarioError::UnknownFormat(s.to_string())),
        }
    }
}

pub const MISSING: &str = "—";

fn header(report: &ScenarioReport) -> Vec<String> {
    let mut h = vec!["label".to_string(), "status".to_string(), "objective".to_string()];
    h.extend(report.generators.iter().map(|g| format!("gen:{g}")));
    h.extend(report.lines.iter().map(|l| format!("flow:{l}")));
    h.extend(report.buses.iter().map(|b| format!("lmp:{b}")));
    h.push("served".into());
    h.push("binding".into());
    h
}

fn cells(report: &ScenarioReport, v: &VariantResult, num: &dyn Fn(Option<f64>) -> String) -> Vec<String> {
    let mut row = vec![v.label.clone(), v.status.label().to_string(), num(v.objective)];
    row.extend(report.generators.iter().map(|g| num(v.generation.get(g).copied())));
    row.extend(report.lines.iter().map(|l| num(v.flows.get(l).copied())));
    row.extend(report.buses.iter().map(|b| num(v.lmps.get(b).copied())));
    row.push(num(v.total_served));
    row.push(v.binding.join(" "));
    row
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Renders a report. Text uses 4 decimals and `—` for absent values; CSV
/// uses full precision and empty cells; JSON is an array of variant records.
pub fn emit_report(report: &ScenarioReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(&report.variants).expect("report serializes");
            s.push('\n');
            s
        }
        ReportFormat::Csv => {
            let num = |x: Option<f64>| x.map_or(String::new(), |v| v.to_string());
            let mut out = String::new();
            let h: Vec<String> = header(report).iter().map(|c| csv_field(c)).collect();
            writeln!(out, "{}", h.join(",")).unwrap();
            for v in &report.variants {
                let row: Vec<String> = cells(report, v, &num).iter().map(|c| csv_field(c)).collect();
                writeln!(out, "{}", row.join(",")).unwrap();
            }
            out
        }
        ReportFormat::Text => {
            let num = |x: Option<f64>| x.map_or(MISSING.to_string(), |v| format!("{:.4}", clean_zero(v)));
            let mut table = vec![header(report)];
            table.extend(report.variants.iter().map(|v| cells(report, v, &num)));
            let mut out = render_table(&table);
            for v in &report.variants {
                if let Some(p) = &v.perturbation {
                    let f = |x: Option<f64>| num(x);
                    writeln!(
                        out,
                        "{}: delta {} MW, delta objective {}, base lmp {}, gap {}",
                        v.label,
                        f(Some(p.delta_mw)),
                        f(p.delta_objective),
                        f(p.lmp),
                        f(p.gap)
                    )
                    .unwrap();
                }
                if let Some(m) = &v.message {
                    writeln!(out, "{}: {m}", v.label).unwrap();
                }
            }
            out
        }
    }
}

/// Avoids printing `-0.0000`.
pub fn clean_zero(v: f64) -> f64 {
    if v.abs() < 5e-5 {
        0.0
    } else {
        v
    }
}

/// Left-aligns the first two columns and right-aligns the rest.
pub fn render_table(rows: &[Vec<String>]) -> String {
    let ncol = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..ncol)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in rows {
        let mut line = String::new();
        for (c, cell) in r.iter().enumerate() {
            if c > 0 {
                line.push_str("  ");
            }
            let pad = widths[c] - cell.chars().count();
            if c < 2 {
                line.push_str(cell);
                line.push_str(&" ".repeat(pad));
            } else {
                line.push_str(&" ".repeat(pad));
                line.push_str(cell);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn pjm5_sweep(values: &[f64]) -> ScenarioReport {
        run_foc_sweep(&fixtures::pjm5(), &fixtures::pjm5_risk(), values, &DispatchConfig::fixed_foc(1.0))
    }

    #[test]
    fn sweep_statuses() {
        let r = pjm5_sweep(&[1.0, 0.75, 0.5, 0.25]);
        let s: Vec<_> = r.variants.iter().map(|v| v.status).collect();
        use ScenarioStatus::*;
        assert_eq!(s, vec![Optimal, Optimal, Optimal, Infeasible]);
        assert!((r.variants[0].flows["de"] + 240.0).abs() < 1e-6);
        assert!(r.variants[0].binding.contains(&"de".to_string()));
    }

    #[test]
    fn empty_sweep() {
        let r = pjm5_sweep(&[]);
        assert!(r.variants.is_empty());
        assert_eq!(emit_report(&r, ReportFormat::Csv).lines().count(), 1);
        assert_eq!(emit_report(&r, ReportFormat::Json).trim(), "[]");
    }

    #[test]
    fn sweep_is_order_independent() {
        let a = pjm5_sweep(&[1.0, 0.5, 0.75]);
        let b = pjm5_sweep(&[0.75, 1.0, 0.5]);
        for v in &a.variants {
            assert_eq!(Some(v), b.variant(&v.label));
        }
    }

    #[test]
    fn text_report_de_column() {
        let r = pjm5_sweep(&[1.0, 0.75, 0.5, 0.25]);
        let text = emit_report(&r, ReportFormat::Text);
        let head: Vec<&str> = text.lines().next().unwrap().split_whitespace().collect();
        let col = head.iter().position(|&h| h == "flow:de").unwrap();
        let de: Vec<String> = text
            .lines()
            .skip(1)
            .take(4)
            .map(|l| l.split_whitespace().nth(col).unwrap().to_string())
            .collect();
        assert_eq!(de[0], "-240.0000");
        assert_eq!(de[1], "-180.0000");
        assert_eq!(de[2], "-120.0000");
        assert_eq!(de[3], MISSING);
    }

    #[test]
    fn json_single_variant_has_all_fields() {
        let r = pjm5_sweep(&[0.5]);
        let doc = emit_report(&r, ReportFormat::Json);
        let v: serde_json::Value = serde_json::from_str(&doc).unwrap();
        let arr = v.as_array().unwrap();
        assert_eq!(arr.len(), 1);
        for key in ["label", "status", "objective", "generation", "flows", "lmps", "binding", "foc", "shed"] {
            assert!(arr[0].get(key).is_some(), "missing {key}");
        }
        let back: Vec<VariantResult> = serde_json::from_str(&doc).unwrap();
        assert_eq!(back, r.variants);
    }

    #[test]
    fn two_bus_outage_is_disconnected() {
        let case = fixtures::two_bus();
        let r = run_n_minus_1(&case, &RiskProfile::default_for(&case), 1.0, &DispatchConfig::fixed_foc(1.0));
        assert_eq!(r.variants.len(), 1);
        assert_eq!(r.variants[0].status, ScenarioStatus::Disconnected);
    }

    #[test]
    fn n1_never_reports_the_removed_line() {
        let r = run_n_minus_1(
            &fixtures::pjm5(),
            &fixtures::pjm5_risk(),
            0.5,
            &DispatchConfig::fixed_foc(0.5).with_shedding(true),
        );
        assert_eq!(r.variants.len(), 6);
        for (v, line) in r.variants.iter().zip(&r.lines) {
            assert_eq!(v.status, ScenarioStatus::Optimal, "{}", v.label);
            assert!(!v.flows.contains_key(line));
            assert!(!v.binding.contains(line));
        }
    }

    #[test]
    fn null_perturbation() {
        let r = run_load_perturbation(
            &fixtures::pjm5(),
            &fixtures::pjm5_risk(),
            &DispatchConfig::fixed_foc(0.75),
            "b",
            0.0,
        )
        .unwrap();
        let p = r.variants[1].perturbation.unwrap();
        assert_eq!(p.delta_objective, Some(0.0));
        assert_eq!(r.variants[0].generation, r.variants[1].generation);
    }

    #[test]
    fn one_mw_at_b_serves_1001() {
        let r = run_load_perturbation(
            &fixtures::pjm5(),
            &fixtures::pjm5_risk(),
            &DispatchConfig::fixed_foc(0.75),
            "b",
            1.0,
        )
        .unwrap();
        assert!((r.variants[1].total_served.unwrap() - 1001.0).abs() < 1e-6);
    }

    #[test]
    fn bundled_derate_spec() {
        let spec = ScenarioSpec::from_json(fixtures::PJM5_DERATE_JSON).unwrap();
        let r = run_scenario(&spec, &fixtures::pjm5(), &fixtures::pjm5_risk(), &DispatchConfig::fixed_foc(1.0)).unwrap();
        let labels: Vec<_> = r.variants.iter().map(|v| v.label.as_str()).collect();
        assert_eq!(labels, ["de-240", "de-120", "de-60", "de-60-shed"]);
        assert!((r.variants[1].flows["de"] + 60.0).abs() < 1e-6);
        assert!((r.variants[1].generation["sundance"] - 243.3934).abs() < 1e-3);
        assert_eq!(r.variants[2].status, ScenarioStatus::Infeasible);
        assert_eq!(r.variants[3].status, ScenarioStatus::Optimal);
        assert!(r.variants[3].total_served.unwrap() < 1000.0);
    }

    #[test]
    fn spec_validation() {
        let case = fixtures::pjm5();
        let mut spec = ScenarioSpec::from_json(fixtures::PJM5_DERATE_JSON).unwrap();
        spec.variants[1].label = "de-240".into();
        assert!(matches!(spec.validate_for(&case), Err(ScenarioError::Invalid(_))));
        let mut spec = ScenarioSpec::from_json(fixtures::PJM5_DERATE_JSON).unwrap();
        spec.variants[0].outage = Some("zz".into());
        assert!(spec.validate_for(&case).is_err());
        assert!(ScenarioSpec::from_json(r#"{"base_case":"pjm5","variants":[],"extra":1}"#).is_err());
        assert!(matches!("xml".parse::<ReportFormat>(), Err(ScenarioError::UnknownFormat(_))));
    }
}
