//! Grid data model: buses, lines, generators and the JSON case format.
//!
//! Bus order in the file is significant. Bus `k` of a case is column `k` of
//! every matrix built downstream (susceptance, PTDF, LP coefficient rows).

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::CaseError;

/// Limit applied to lines whose file entry has no `limit_mw`.
pub const DEFAULT_LINE_LIMIT_MW: f64 = 10_000.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Bus {
    pub id: String,
    /// MW, ≥ 0.
    pub demand: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub id: String,
    pub bus: String,
    /// $/MWh.
    pub cost: f64,
    pub p_min: f64,
    pub p_max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Line {
    pub id: String,
    pub from_bus: String,
    pub to_bus: String,
    /// Per-unit series reactance.
    pub reactance: f64,
    /// Lower flow limit in MW (≤ 0); flow is positive from `from_bus` to `to_bus`.
    pub t_min: f64,
    pub t_max: f64,
    pub at_risk: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkCase {
    pub name: String,
    pub buses: Vec<Bus>,
    pub lines: Vec<Line>,
    pub generators: Vec<Generator>,
}

/// One broken invariant, naming the entity and the rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub entity: String,
    pub rule: String,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    Invalid,
    Disconnected,
}

impl Violation {
    fn invalid(entity: impl Into<String>, rule: impl Into<String>) -> Self {
        Self {
            entity: entity.into(),
            rule: rule.into(),
            kind: ViolationKind::Invalid,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.entity, self.rule)
    }
}

/// Result of taking a line out of service.
#[derive(Debug, Clone, PartialEq)]
pub struct Outage {
    pub case: NetworkCase,
    pub line_id: String,
    pub connected: bool,
}

impl NetworkCase {
    pub fn bus_index(&self, id: &str) -> Option<usize> {
        self.buses.iter().position(|b| b.id == id)
    }

    pub fn line_index(&self, id: &str) -> Option<usize> {
        self.lines.iter().position(|l| l.id == id)
    }

    pub fn generator_index(&self, id: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.id == id)
    }

    pub fn line(&self, id: &str) -> Option<&Line> {
        self.lines.iter().find(|l| l.id == id)
    }

    pub fn total_demand(&self) -> f64 {
        self.buses.iter().map(|b| b.demand).sum()
    }

    pub fn total_capacity(&self) -> f64 {
        self.generators.iter().map(|g| g.p_max).sum()
    }

    /// Buses touched by at least one at-risk line, in bus order.
    pub fn risk_adjacent_buses(&self) -> Vec<usize> {
        let mut touched = vec![false; self.buses.len()];
        for line in self.lines.iter().filter(|l| l.at_risk) {
            for id in [&line.from_bus, &line.to_bus] {
                if let Some(k) = self.bus_index(id) {
                    touched[k] = true;
                }
            }
        }
        (0..self.buses.len()).filter(|&k| touched[k]).collect()
    }

    /// True when every bus is reachable from the first one over in-service lines.
    pub fn is_connected(&self) -> bool {
        let n = self.buses.len();
        if n <= 1 {
            return true;
        }
        let index: HashMap<&str, usize> = self
            .buses
            .iter()
            .enumerate()
            .map(|(k, b)| (b.id.as_str(), k))
            .collect();
        let mut adjacency = vec![Vec::new(); n];
        for line in &self.lines {
            if let (Some(&a), Some(&b)) = (
                index.get(line.from_bus.as_str()),
                index.get(line.to_bus.as_str()),
            ) {
                adjacency[a].push(b);
                adjacency[b].push(a);
            }
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(k) = queue.pop_front() {
            for &m in &adjacency[k] {
                if !seen[m] {
                    seen[m] = true;
                    queue.push_back(m);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Copy of the case with every bus demand shifted by the given MW deltas.
    pub fn with_demand_deltas<'a, I>(&self, deltas: I) -> Result<NetworkCase, CaseError>
    where
        I: IntoIterator<Item = (&'a str, f64)>,
    {
        let mut out = self.clone();
        for (bus, delta) in deltas {
            let k = self
                .bus_index(bus)
                .ok_or_else(|| CaseError::UnknownBus(bus.to_string()))?;
            out.buses[k].demand += delta;
        }
        Ok(out)
    }
}

/// Checks every structural invariant. An empty list means the case is usable.
pub fn validate_case(case: &NetworkCase) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut bus_ids = HashSet::new();
    if case.buses.is_empty() {
        out.push(Violation::invalid(format!("case {}", case.name), "needs at least one bus"));
    }
    for bus in &case.buses {
        let entity = format!("bus {}", bus.id);
        if !bus_ids.insert(bus.id.as_str()) {
            out.push(Violation::invalid(&entity, "duplicate bus id"));
        }
        if !bus.demand.is_finite() || bus.demand < 0.0 {
            out.push(Violation::invalid(&entity, "demand must be finite and >= 0"));
        }
    }

    let mut line_ids = HashSet::new();
    for line in &case.lines {
        let entity = format!("line {}", line.id);
        if !line_ids.insert(line.id.as_str()) {
            out.push(Violation::invalid(&entity, "duplicate line id"));
        }
        for end in [&line.from_bus, &line.to_bus] {
            if !bus_ids.contains(end.as_str()) {
                out.push(Violation::invalid(&entity, format!("references unknown bus {end}")));
            }
        }
        if line.from_bus == line.to_bus {
            out.push(Violation::invalid(&entity, "from and to bus must differ"));
        }
        if !(line.reactance > 0.0) || !line.reactance.is_finite() {
            out.push(Violation::invalid(&entity, "reactance must be > 0"));
        }
        if !(line.t_min <= 0.0 && 0.0 <= line.t_max) {
            out.push(Violation::invalid(&entity, "limits must satisfy t_min <= 0 <= t_max"));
        }
    }

    let mut gen_ids = HashSet::new();
    if case.generators.is_empty() {
        out.push(Violation::invalid(format!("case {}", case.name), "needs at least one generator"));
    }
    for gen in &case.generators {
        let entity = format!("generator {}", gen.id);
        if !gen_ids.insert(gen.id.as_str()) {
            out.push(Violation::invalid(&entity, "duplicate generator id"));
        }
        if !bus_ids.contains(gen.bus.as_str()) {
            out.push(Violation::invalid(&entity, format!("references unknown bus {}", gen.bus)));
        }
        if !gen.cost.is_finite() || gen.cost < 0.0 {
            out.push(Violation::invalid(&entity, "cost must be finite and >= 0"));
        }
        if !(0.0 <= gen.p_min && gen.p_min <= gen.p_max) || !gen.p_max.is_finite() {
            out.push(Violation::invalid(&entity, "requires 0 <= p_min <= p_max"));
        }
    }

    if out.is_empty() && !case.is_connected() {
        out.push(Violation {
            entity: format!("case {}", case.name),
            rule: "bus graph is not connected".into(),
            kind: ViolationKind::Disconnected,
        });
    }
    out
}

/// Removes one line. The source case is left untouched; connectivity of the
/// result is reported rather than treated as an error.
pub fn apply_outage(case: &NetworkCase, line_id: &str) -> Result<Outage, CaseError> {
    let k = case
        .line_index(line_id)
        .ok_or_else(|| CaseError::UnknownLine(line_id.to_string()))?;
    let mut reduced = case.clone();
    reduced.lines.remove(k);
    let connected = reduced.is_connected();
    Ok(Outage {
        case: reduced,
        line_id: line_id.to_string(),
        connected,
    })
}

// ---------------------------------------------------------------------------
// File format

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CaseFile {
    name: String,
    buses: Vec<BusRecord>,
    #[serde(default)]
    lines: Vec<LineRecord>,
    generators: Vec<GeneratorRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BusRecord {
    id: String,
    #[serde(default)]
    demand_mw: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LineRecord {
    id: String,
    from: String,
    to: String,
    reactance_pu: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    limit_mw: Option<f64>,
    /// Overrides the default lower limit of `-limit_mw`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    limit_min_mw: Option<f64>,
    #[serde(default)]
    at_risk: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorRecord {
    id: String,
    bus: String,
    cost_per_mwh: f64,
    #[serde(default)]
    p_min_mw: f64,
    p_max_mw: f64,
}

impl From<CaseFile> for NetworkCase {
    fn from(file: CaseFile) -> Self {
        NetworkCase {
            name: file.name,
            buses: file
                .buses
                .into_iter()
                .map(|b| Bus {
                    id: b.id,
                    demand: b.demand_mw,
                })
                .collect(),
            lines: file
                .lines
                .into_iter()
                .map(|l| {
                    let t_max = l.limit_mw.unwrap_or(DEFAULT_LINE_LIMIT_MW);
                    Line {
                        id: l.id,
                        from_bus: l.from,
                        to_bus: l.to,
                        reactance: l.reactance_pu,
                        t_min: l.limit_min_mw.unwrap_or(-t_max),
                        t_max,
                        at_risk: l.at_risk,
                    }
                })
                .collect(),
            generators: file
                .generators
                .into_iter()
                .map(|g| Generator {
                    id: g.id,
                    bus: g.bus,
                    cost: g.cost_per_mwh,
                    p_min: g.p_min_mw,
                    p_max: g.p_max_mw,
                })
                .collect(),
        }
    }
}

impl From<&NetworkCase> for CaseFile {
    fn from(case: &NetworkCase) -> Self {
        CaseFile {
            name: case.name.clone(),
            buses: case
                .buses
                .iter()
                .map(|b| BusRecord {
                    id: b.id.clone(),
                    demand_mw: b.demand,
                })
                .collect(),
            lines: case
                .lines
                .iter()
                .map(|l| LineRecord {
                    id: l.id.clone(),
                    from: l.from_bus.clone(),
                    to: l.to_bus.clone(),
                    reactance_pu: l.reactance,
                    limit_mw: Some(l.t_max),
                    limit_min_mw: (l.t_min != -l.t_max).then_some(l.t_min),
                    at_risk: l.at_risk,
                })
                .collect(),
            generators: case
                .generators
                .iter()
                .map(|g| GeneratorRecord {
                    id: g.id.clone(),
                    bus: g.bus.clone(),
                    cost_per_mwh: g.cost,
                    p_min_mw: g.p_min,
                    p_max_mw: g.p_max,
                })
                .collect(),
        }
    }
}

/// Parses and validates a JSON case file.
pub fn load_case(text: &str) -> Result<NetworkCase, CaseError> {
    let file: CaseFile = serde_json::from_str(text).map_err(|e| CaseError::Parse(e.to_string()))?;
    let case = NetworkCase::from(file);
    let violations = validate_case(&case);
    if violations.iter().any(|v| v.kind == ViolationKind::Invalid) {
        return Err(CaseError::Validation(violations));
    }
    if !violations.is_empty() {
        return Err(CaseError::Disconnected(case.name));
    }
    Ok(case)
}

/// Renders a case in the JSON file format. Limits are always written explicitly.
pub fn save_case(case: &NetworkCase) -> String {
    serde_json::to_string_pretty(&CaseFile::from(case)).expect("case serializes")
}
