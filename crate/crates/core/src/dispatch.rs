//! Economic dispatch LPs: the plain single-balance EDC and the wildfire-risk
//! variant with FOC-derated line limits, served-fraction variables and
//! piecewise-linear risk caps.
//!
//! Net injections are substituted out: `Y_i = Σ X_g(i) − r_i·D_i`, where `r_i`
//! is a variable only on shedding-eligible buses and 1 elsewhere. Line limits
//! are written over `PTDF · Y`, so every row is linear in `(X, r, FOC)`.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{CaseError, DispatchError};
use crate::lp::{solve_lp, LpSolution, LpStatus};
use crate::network::{validate_case, NetworkCase, ViolationKind};
use crate::ptdf::{compute_ptdf, line_flows};
use crate::risk::{RiskProfile, RiskSegment};
use crate::{LpProblem, PtdfMatrix};

/// Tolerance used to call a line limit binding, MW.
pub const BINDING_TOL_MW: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DispatchMode {
    /// Generation meets load; no network limits.
    Edc,
    /// Wildfire-risk-based security-constrained dispatch.
    WrbEdc,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FocMode {
    /// Every at-risk line fixed to the same factor.
    Uniform(f64),
    /// Fixed factor per at-risk line; every at-risk line must be listed.
    PerLine(IndexMap<String, f64>),
    /// Fixed factors taken from location WR through `wr_to_foc`.
    FromWildfireRisk,
    /// FOC is a decision variable. Bounds come from the risk profile unless
    /// overridden here.
    Optimized(IndexMap<String, (f64, f64)>),
}

/// How unserved load enters the objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ObjectiveForm {
    /// `Σ c·X + Σ VOLL·D·(1 − r)`: unserved energy is penalized.
    #[default]
    ShedPenalty,
    /// `Σ c·X + Σ VOLL·r`, as literally written in the source formulation.
    /// It pays for serving load, so it sheds whenever shedding is allowed.
    PaperLiteral,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DispatchConfig {
    pub mode: DispatchMode,
    pub foc: FocMode,
    pub allow_shedding: bool,
    /// Defaults to the first bus of the case.
    pub slack: Option<String>,
    pub objective: ObjectiveForm,
}

impl DispatchConfig {
    pub fn edc() -> Self {
        Self {
            mode: DispatchMode::Edc,
            foc: FocMode::Uniform(1.0),
            allow_shedding: false,
            slack: None,
            objective: ObjectiveForm::default(),
        }
    }

    pub fn fixed_foc(foc: f64) -> Self {
        Self {
            mode: DispatchMode::WrbEdc,
            foc: FocMode::Uniform(foc),
            ..Self::edc()
        }
    }

    pub fn optimized_foc() -> Self {
        Self {
            mode: DispatchMode::WrbEdc,
            foc: FocMode::Optimized(IndexMap::new()),
            ..Self::edc()
        }
    }

    pub fn with_shedding(mut self, on: bool) -> Self {
        self.allow_shedding = on;
        self
    }

    pub fn with_slack(mut self, slack: impl Into<String>) -> Self {
        self.slack = Some(slack.into());
        self
    }

    pub fn with_objective(mut self, form: ObjectiveForm) -> Self {
        self.objective = form;
        self
    }

    pub fn is_optimized(&self) -> bool {
        self.mode == DispatchMode::WrbEdc && matches!(self.foc, FocMode::Optimized(_))
    }
}

/// Where each model quantity lives inside the LP.
#[derive(Debug, Clone, Default)]
pub struct LpLayout {
    /// Per generator.
    pub gen_vars: Vec<usize>,
    /// Per bus; `Some` on shedding-eligible buses.
    pub shed_vars: Vec<Option<usize>>,
    /// Per line; `Some` on at-risk lines.
    pub foc_vars: Vec<Option<usize>>,
    pub balance_row: usize,
    /// Per line: `(upper, lower)` inequality rows.
    pub flow_rows: Vec<Option<(usize, usize)>>,
    /// Per line: one inequality row per risk segment.
    pub risk_rows: Vec<Vec<usize>>,
    /// Per bus: $/MWh charged in the objective for shed energy.
    pub shed_penalty: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct DispatchLp {
    pub problem: LpProblem,
    pub layout: LpLayout,
}

/// Multipliers of a solved dispatch, keyed by entity id.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DispatchDuals {
    /// ∂cost/∂(load at the slack bus), $/MWh.
    pub balance: f64,
    /// Multiplier (≥ 0) of each line's upper flow limit.
    pub line_upper: IndexMap<String, f64>,
    /// Multiplier (≥ 0) of each line's lower flow limit.
    pub line_lower: IndexMap<String, f64>,
    /// Reduced cost of each FOC variable (bound multiplier).
    pub foc_bound: IndexMap<String, f64>,
    /// Multipliers (≥ 0) of each risk-cap segment row.
    pub risk_cap: IndexMap<String, Vec<f64>>,
    /// Reduced cost of each generator.
    pub generator_bound: IndexMap<String, f64>,
    /// Reduced cost of each served-fraction variable.
    pub shed_bound: IndexMap<String, f64>,
}

#[derive(Debug, Clone)]
pub struct DispatchSolution {
    pub status: LpStatus,
    /// $ per hour, including the shed-energy penalty.
    pub objective: Option<f64>,
    pub mode: DispatchMode,
    pub optimized_foc: bool,
    pub objective_form: ObjectiveForm,
    /// MW per generator.
    pub generation: IndexMap<String, f64>,
    /// Net MW injection per bus.
    pub injections: IndexMap<String, f64>,
    /// MW per line, positive from → to.
    pub flows: IndexMap<String, f64>,
    /// Served fraction per shedding-eligible bus.
    pub shed_ratio: IndexMap<String, f64>,
    /// Derating factor per at-risk line.
    pub foc: IndexMap<String, f64>,
    pub duals: Option<DispatchDuals>,
    /// Demand per bus, MW.
    pub demand: IndexMap<String, f64>,
    /// Unscaled `(t_min, t_max)` of every line whose limits are enforced.
    pub line_limits: IndexMap<String, (f64, f64)>,
    /// Lines whose limits are scaled by FOC.
    pub at_risk: IndexMap<String, bool>,
    /// Slopes `a_j` of each at-risk line's risk pieces (optimized mode).
    pub risk_slopes: IndexMap<String, Vec<f64>>,
    /// $/MWh of shed energy as it enters the objective, per eligible bus.
    pub shed_penalty: IndexMap<String, f64>,
    pub ptdf: PtdfMatrix,
    pub lp: LpSolution<f64>,
}

impl DispatchSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    pub fn total_generation(&self) -> f64 {
        self.generation.values().sum()
    }

    /// MW of load actually served per bus.
    pub fn served(&self) -> IndexMap<String, f64> {
        self.demand
            .iter()
            .map(|(bus, &d)| (bus.clone(), d * self.shed_ratio.get(bus).copied().unwrap_or(1.0)))
            .collect()
    }

    pub fn total_served(&self) -> f64 {
        self.served().values().sum()
    }

    pub fn total_shed(&self) -> f64 {
        self.demand.values().sum::<f64>() - self.total_served()
    }

    /// `(lower, upper)` limit in force on a line: FOC-scaled for at-risk lines.
    pub fn effective_limits(&self, line: &str) -> Option<(f64, f64)> {
        let &(lo, hi) = self.line_limits.get(line)?;
        let f = self.foc.get(line).copied().unwrap_or(1.0);
        Some((lo * f, hi * f))
    }

    /// Checks an optimal solution against the model's physical and dual
    /// conditions; returns one message per failure.
    pub fn invariant_violations(&self, case: &NetworkCase) -> Vec<String> {
        const TOL: f64 = 1e-6;
        let mut out = Vec::new();
        if !self.is_optimal() {
            return out;
        }
        let net: f64 = self.injections.values().sum();
        if net.abs() > TOL {
            out.push(format!("injections sum to {net}"));
        }
        for g in &case.generators {
            let x = self.generation[&g.id];
            if x < g.p_min - TOL || x > g.p_max + TOL {
                out.push(format!("generator {} output {x} outside [{}, {}]", g.id, g.p_min, g.p_max));
            }
        }
        for (bus, &r) in &self.shed_ratio {
            if !(-TOL..=1.0 + TOL).contains(&r) {
                out.push(format!("bus {bus} served fraction {r} outside [0, 1]"));
            }
        }
        let y: Vec<f64> = self.injections.values().copied().collect();
        match line_flows(&self.ptdf, &y) {
            Ok(f) => {
                for (l, (id, &flow)) in self.flows.iter().enumerate() {
                    if (f[l] - flow).abs() > TOL {
                        out.push(format!("line {id} flow {flow} disagrees with PTDF·Y = {}", f[l]));
                    }
                }
            }
            Err(e) => out.push(e.to_string()),
        }
        let duals = self.duals.as_ref();
        for (id, &flow) in &self.flows {
            let Some((lo, hi)) = self.effective_limits(id) else { continue };
            let scale = 1.0 + hi.abs().max(lo.abs());
            if flow > hi + TOL * scale || flow < lo - TOL * scale {
                out.push(format!("line {id} flow {flow} outside [{lo}, {hi}]"));
            }
            if let Some(d) = duals {
                let (up, dn) = (d.line_upper[id], d.line_lower[id]);
                if up > TOL && (hi - flow).abs() > TOL * scale {
                    out.push(format!("line {id}: upper multiplier {up} on a slack limit"));
                }
                if dn > TOL && (flow - lo).abs() > TOL * scale {
                    out.push(format!("line {id}: lower multiplier {dn} on a slack limit"));
                }
                if up < -TOL || dn < -TOL {
                    out.push(format!("line {id}: negative limit multiplier"));
                }
            }
        }
        out
    }

    /// Lines whose flow sits on an enforced limit, in line order.
    pub fn binding_lines(&self) -> Vec<String> {
        self.flows
            .iter()
            .filter(|(id, &flow)| {
                self.effective_limits(id).is_some_and(|(lo, hi)| {
                    flow >= hi - BINDING_TOL_MW || flow <= lo + BINDING_TOL_MW
                })
            })
            .map(|(id, _)| id.clone())
            .collect()
    }
}

/// Plain economic dispatch: one variable per generator and a single balance
/// row; the network is ignored.
pub fn build_edc(case: &NetworkCase) -> DispatchLp {
    let mut lp = LpProblem::new();
    let gen_vars: Vec<usize> = case
        .generators
        .iter()
        .map(|g| {
            let v = lp.add_variable(format!("X[{}]", g.id), g.p_min, g.p_max);
            lp.set_cost(v, g.cost);
            v
        })
        .collect();
    let balance_row = lp.add_eq(
        "balance",
        gen_vars.iter().map(|&v| (v, 1.0)).collect(),
        case.total_demand(),
    );
    DispatchLp {
        problem: lp,
        layout: LpLayout {
            gen_vars,
            shed_vars: vec![None; case.buses.len()],
            foc_vars: vec![None; case.lines.len()],
            balance_row,
            flow_rows: vec![None; case.lines.len()],
            risk_rows: vec![Vec::new(); case.lines.len()],
            shed_penalty: vec![0.0; case.buses.len()],
        },
    }
}

enum FocSetting {
    Fixed(f64),
    Free(f64, f64),
}

fn resolve_foc(
    case: &NetworkCase,
    risk: &RiskProfile,
    config: &DispatchConfig,
) -> Result<Vec<Option<FocSetting>>, DispatchError> {
    let fixed = |id: &str, v: f64| -> Result<FocSetting, DispatchError> {
        if !(v > 0.0 && v <= 1.0) {
            return Err(DispatchError::Config(format!("FOC for line {id} must be in (0, 1], got {v}")));
        }
        Ok(FocSetting::Fixed(v))
    };
    let from_wr = match &config.foc {
        FocMode::FromWildfireRisk => Some(risk.foc_from_wr()?),
        _ => None,
    };
    match &config.foc {
        FocMode::PerLine(map) => check_keys(case, map.keys())?,
        FocMode::Optimized(map) => check_keys(case, map.keys())?,
        _ => {}
    }
    case.lines
        .iter()
        .map(|line| {
            if !line.at_risk {
                return Ok(None);
            }
            let id = line.id.as_str();
            let setting = match &config.foc {
                FocMode::Uniform(v) => fixed(id, *v)?,
                FocMode::PerLine(map) => {
                    let v = map
                        .get(id)
                        .ok_or_else(|| DispatchError::Config(format!("no FOC given for at-risk line {id}")))?;
                    fixed(id, *v)?
                }
                FocMode::FromWildfireRisk => fixed(id, from_wr.as_ref().expect("resolved above")[id])?,
                FocMode::Optimized(overrides) => {
                    let (lo, hi) = match overrides.get(id) {
                        Some(&b) => b,
                        None => {
                            let l = risk.lines.get(id).ok_or_else(|| {
                                DispatchError::Config(format!("risk profile has no entry for line {id}"))
                            })?;
                            (l.foc_min, l.foc_max)
                        }
                    };
                    if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
                        return Err(DispatchError::Config(format!(
                            "FOC bounds for line {id} must satisfy 0 <= min <= max <= 1"
                        )));
                    }
                    FocSetting::Free(lo, hi)
                }
            };
            Ok(Some(setting))
        })
        .collect()
}

fn check_keys<'a>(case: &NetworkCase, keys: impl Iterator<Item = &'a String>) -> Result<(), DispatchError> {
    for id in keys {
        match case.line(id) {
            Some(l) if l.at_risk => {}
            Some(_) => return Err(DispatchError::Config(format!("line {id} is not at risk; FOC does not apply"))),
            None => return Err(DispatchError::Case(CaseError::UnknownLine(id.clone()))),
        }
    }
    Ok(())
}

/// Builds the wildfire-risk dispatch LP.
///
/// `ptdf` must come from the same case. In optimized mode every risk piece
/// becomes a row `a_j·FOC ≤ cap − b_j`; with fixed FOC the caps are not
/// imposed, since the operator has already chosen the derating.
pub fn build_wrb_edc(
    case: &NetworkCase,
    risk: &RiskProfile,
    config: &DispatchConfig,
    ptdf: &PtdfMatrix,
) -> Result<DispatchLp, DispatchError> {
    if ptdf.bus_ids().len() != case.buses.len() || ptdf.line_ids().len() != case.lines.len() {
        return Err(DispatchError::Config("PTDF was built for a different case".into()));
    }
    risk.validate_for(case)?;
    let foc_settings = resolve_foc(case, risk, config)?;

    let mut lp = LpProblem::new();
    let gen_vars: Vec<usize> = case
        .generators
        .iter()
        .map(|g| {
            let v = lp.add_variable(format!("X[{}]", g.id), g.p_min, g.p_max);
            lp.set_cost(v, g.cost);
            v
        })
        .collect();

    let mut shed_vars = vec![None; case.buses.len()];
    let mut shed_penalty = vec![0.0; case.buses.len()];
    if config.allow_shedding {
        for k in case.risk_adjacent_buses() {
            let bus = &case.buses[k];
            if bus.demand <= 0.0 {
                continue;
            }
            let br = risk.bus(&bus.id).ok_or_else(|| {
                DispatchError::Config(format!("bus {} is adjacent to an at-risk line but has no VOLL entry", bus.id))
            })?;
            let v = lp.add_variable(format!("r[{}]", bus.id), br.r_min, br.r_max);
            match config.objective {
                ObjectiveForm::ShedPenalty => {
                    lp.set_cost(v, -br.voll * bus.demand);
                    lp.objective_constant += br.voll * bus.demand;
                    shed_penalty[k] = br.voll;
                }
                ObjectiveForm::PaperLiteral => lp.set_cost(v, br.voll),
            }
            shed_vars[k] = Some(v);
        }
    }

    let foc_vars: Vec<Option<usize>> = case
        .lines
        .iter()
        .zip(&foc_settings)
        .map(|(line, s)| {
            s.as_ref().map(|s| {
                let (lo, hi) = match *s {
                    FocSetting::Fixed(v) => (v, v),
                    FocSetting::Free(lo, hi) => (lo, hi),
                };
                lp.add_variable(format!("FOC[{}]", line.id), lo, hi)
            })
        })
        .collect();

    // Balance: Σ X − Σ_R D·r = Σ_{not R} D.
    let mut balance: Vec<(usize, f64)> = gen_vars.iter().map(|&v| (v, 1.0)).collect();
    let mut fixed_load = 0.0;
    for (k, bus) in case.buses.iter().enumerate() {
        match shed_vars[k] {
            Some(v) => balance.push((v, -bus.demand)),
            None => fixed_load += bus.demand,
        }
    }
    let balance_row = lp.add_eq("balance", balance, fixed_load);

    // Flow rows over PTDF·Y.
    let gen_bus: Vec<usize> = case
        .generators
        .iter()
        .map(|g| case.bus_index(&g.bus).expect("validated case"))
        .collect();
    let mut flow_rows = vec![None; case.lines.len()];
    let mut risk_rows = vec![Vec::new(); case.lines.len()];
    for (l, line) in case.lines.iter().enumerate() {
        let mut coeffs: Vec<(usize, f64)> = Vec::new();
        for (g, &v) in gen_vars.iter().enumerate() {
            coeffs.push((v, ptdf.get(l, gen_bus[g])));
        }
        let mut fixed_flow = 0.0;
        for (k, bus) in case.buses.iter().enumerate() {
            let p = ptdf.get(l, k);
            match shed_vars[k] {
                Some(v) => coeffs.push((v, -p * bus.demand)),
                None => fixed_flow -= p * bus.demand,
            }
        }
        // flow = coeffs·x + fixed_flow
        let (mut upper, mut lower) = (coeffs.clone(), coeffs.iter().map(|&(v, a)| (v, -a)).collect::<Vec<_>>());
        let (upper_rhs, lower_rhs) = match foc_vars[l] {
            Some(f) => {
                upper.push((f, -line.t_max));
                lower.push((f, line.t_min));
                (-fixed_flow, fixed_flow)
            }
            None => (line.t_max - fixed_flow, fixed_flow - line.t_min),
        };
        let up = lp.add_le(format!("flow_max[{}]", line.id), upper, upper_rhs);
        let lo = lp.add_le(format!("flow_min[{}]", line.id), lower, lower_rhs);
        flow_rows[l] = Some((up, lo));

        if let (Some(f), Some(FocSetting::Free(..))) = (foc_vars[l], &foc_settings[l]) {
            let lr = &risk.lines[&line.id];
            for (j, seg) in lr.segments.iter().enumerate() {
                let row = lp.add_le(
                    format!("risk_cap[{}][{}]", line.id, j),
                    vec![(f, seg.slope)],
                    lr.cap - seg.offset,
                );
                risk_rows[l].push(row);
            }
        }
    }

    Ok(DispatchLp {
        problem: lp,
        layout: LpLayout {
            gen_vars,
            shed_vars,
            foc_vars,
            balance_row,
            flow_rows,
            risk_rows,
            shed_penalty,
        },
    })
}

fn slack_for(case: &NetworkCase, config: &DispatchConfig) -> Result<String, DispatchError> {
    match &config.slack {
        Some(s) => {
            if case.bus_index(s).is_none() {
                return Err(DispatchError::Case(CaseError::UnknownBus(s.clone())));
            }
            Ok(s.clone())
        }
        None => case
            .buses
            .first()
            .map(|b| b.id.clone())
            .ok_or_else(|| DispatchError::Config("case has no buses".into())),
    }
}

/// Builds the LP the configuration asks for, without solving it.
pub fn build_dispatch(
    case: &NetworkCase,
    risk: &RiskProfile,
    config: &DispatchConfig,
) -> Result<(DispatchLp, PtdfMatrix), DispatchError> {
    let violations = validate_case(case);
    if let Some(v) = violations.first() {
        return Err(DispatchError::Case(if v.kind == ViolationKind::Disconnected {
            CaseError::Disconnected(case.name.clone())
        } else {
            CaseError::Validation(violations)
        }));
    }
    let slack = slack_for(case, config)?;
    let ptdf = compute_ptdf::<f64>(case, &slack)?;
    let lp = match config.mode {
        DispatchMode::Edc => build_edc(case),
        DispatchMode::WrbEdc => build_wrb_edc(case, risk, config, &ptdf)?,
    };
    Ok((lp, ptdf))
}

/// Builds, solves and unpacks one dispatch.
pub fn solve_dispatch(
    case: &NetworkCase,
    risk: &RiskProfile,
    config: &DispatchConfig,
) -> Result<DispatchSolution, DispatchError> {
    let (dlp, ptdf) = build_dispatch(case, risk, config)?;
    let lp = solve_lp(&dlp.problem)?;
    unpack(case, risk, config, &dlp, ptdf, lp)
}

fn unpack(
    case: &NetworkCase,
    risk: &RiskProfile,
    config: &DispatchConfig,
    dlp: &DispatchLp,
    ptdf: PtdfMatrix,
    lp: LpSolution<f64>,
) -> Result<DispatchSolution, DispatchError> {
    let layout = &dlp.layout;
    let optimized = config.is_optimized();
    let enforced = config.mode == DispatchMode::WrbEdc;

    let mut sol = DispatchSolution {
        status: lp.status,
        objective: lp.objective_value,
        mode: config.mode,
        optimized_foc: optimized,
        objective_form: config.objective,
        generation: IndexMap::new(),
        injections: IndexMap::new(),
        flows: IndexMap::new(),
        shed_ratio: IndexMap::new(),
        foc: IndexMap::new(),
        duals: None,
        demand: case.buses.iter().map(|b| (b.id.clone(), b.demand)).collect(),
        line_limits: if enforced {
            case.lines.iter().map(|l| (l.id.clone(), (l.t_min, l.t_max))).collect()
        } else {
            IndexMap::new()
        },
        at_risk: case.lines.iter().map(|l| (l.id.clone(), l.at_risk && enforced)).collect(),
        risk_slopes: IndexMap::new(),
        shed_penalty: IndexMap::new(),
        ptdf,
        lp,
    };
    for (k, bus) in case.buses.iter().enumerate() {
        if layout.shed_vars[k].is_some() {
            sol.shed_penalty.insert(bus.id.clone(), layout.shed_penalty[k]);
        }
    }
    if optimized {
        for (l, line) in case.lines.iter().enumerate() {
            if !layout.risk_rows[l].is_empty() {
                let slopes = risk.lines[&line.id].segments.iter().map(|s: &RiskSegment| s.slope).collect();
                sol.risk_slopes.insert(line.id.clone(), slopes);
            }
        }
    }
    if !sol.is_optimal() {
        return Ok(sol);
    }

    let x = &sol.lp.primal;
    for (g, gen) in case.generators.iter().enumerate() {
        sol.generation.insert(gen.id.clone(), x[layout.gen_vars[g]]);
    }
    let mut injections = vec![0.0; case.buses.len()];
    for (g, gen) in case.generators.iter().enumerate() {
        let k = case.bus_index(&gen.bus).expect("validated case");
        injections[k] += x[layout.gen_vars[g]];
    }
    for (k, bus) in case.buses.iter().enumerate() {
        let r = layout.shed_vars[k].map_or(1.0, |v| x[v]);
        if layout.shed_vars[k].is_some() {
            sol.shed_ratio.insert(bus.id.clone(), r);
        }
        injections[k] -= r * bus.demand;
    }
    for (k, bus) in case.buses.iter().enumerate() {
        sol.injections.insert(bus.id.clone(), injections[k]);
    }
    let flows = line_flows(&sol.ptdf, &injections)?;
    for (l, line) in case.lines.iter().enumerate() {
        sol.flows.insert(line.id.clone(), flows[l]);
        if let Some(v) = layout.foc_vars[l] {
            sol.foc.insert(line.id.clone(), x[v]);
        }
    }

    let lp = &sol.lp;
    let mut duals = DispatchDuals {
        balance: lp.duals_eq[layout.balance_row],
        ..Default::default()
    };
    for (l, line) in case.lines.iter().enumerate() {
        if let Some((up, lo)) = layout.flow_rows[l] {
            duals.line_upper.insert(line.id.clone(), lp.duals_ineq[up]);
            duals.line_lower.insert(line.id.clone(), lp.duals_ineq[lo]);
        }
        if let Some(v) = layout.foc_vars[l] {
            duals.foc_bound.insert(line.id.clone(), lp.reduced_costs[v]);
        }
        if !layout.risk_rows[l].is_empty() {
            duals
                .risk_cap
                .insert(line.id.clone(), layout.risk_rows[l].iter().map(|&r| lp.duals_ineq[r]).collect());
        }
    }
    for (g, gen) in case.generators.iter().enumerate() {
        duals.generator_bound.insert(gen.id.clone(), lp.reduced_costs[layout.gen_vars[g]]);
    }
    for (k, bus) in case.buses.iter().enumerate() {
        if let Some(v) = layout.shed_vars[k] {
            duals.shed_bound.insert(bus.id.clone(), lp.reduced_costs[v]);
        }
    }
    sol.duals = Some(duals);
    Ok(sol)
}

/// JSON view of a solved dispatch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionDocument {
    pub status: String,
    pub objective: Option<f64>,
    pub generation: IndexMap<String, f64>,
    pub flows: IndexMap<String, f64>,
    pub lmps: IndexMap<String, f64>,
    pub duals: Option<DispatchDuals>,
    pub foc: IndexMap<String, f64>,
    pub shed: IndexMap<String, f64>,
}

pub fn status_label(status: LpStatus) -> &'static str {
    match status {
        LpStatus::Optimal => "Optimal",
        LpStatus::Infeasible => "Infeasible",
        LpStatus::Unbounded => "Unbounded",
    }
}

impl SolutionDocument {
    pub fn new(sol: &DispatchSolution, lmps: IndexMap<String, f64>) -> Self {
        Self {
            status: status_label(sol.status).to_string(),
            objective: sol.objective,
            generation: sol.generation.clone(),
            flows: sol.flows.clone(),
            lmps,
            duals: sol.duals.clone(),
            foc: sol.foc.clone(),
            shed: sol.shed_ratio.clone(),
        }
    }
}
