//! Locational marginal prices and their decomposition.
//!
//! For a bus whose load is fixed the network price is
//! `π_i = λ − Σ_l PTDF[l][i]·(μ⁺_l − μ⁻_l)`, with `λ` the balance multiplier
//! (the price at the slack bus). On a bus with a served-fraction variable the
//! marginal MW is served with weight `r_i` and left unserved with weight
//! `1 − r_i`, so its LMP is `r_i·π_i + (1 − r_i)·p_i`, where `p_i` is the
//! shed-energy penalty.
//!
//! With optimized FOC, stationarity on `FOC_l` ties the congestion rent of an
//! at-risk line to its risk-cap and FOC-bound multipliers. The share carried
//! by the risk caps is reported as the wildfire component; the rest stays in
//! congestion.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::dispatch::{solve_dispatch, DispatchConfig, DispatchSolution};
use crate::error::DispatchError;
use crate::network::NetworkCase;
use crate::risk::RiskProfile;

/// Price at one bus, $/MWh. `lmp` is the sum of the four components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LmpBreakdown {
    pub energy: f64,
    /// Congestion from lines whose limits are not FOC-scaled.
    pub congestion_normal: f64,
    /// Congestion from at-risk lines not attributed to the risk caps.
    pub congestion_risk: f64,
    pub wildfire: f64,
    pub voll: f64,
    pub lmp: f64,
}

impl LmpBreakdown {
    pub fn congestion(&self) -> f64 {
        self.congestion_normal + self.congestion_risk
    }

    pub fn component_sum(&self) -> f64 {
        self.energy + self.congestion_normal + self.congestion_risk + self.wildfire + self.voll
    }
}

/// Fraction of an at-risk line's congestion rent carried by its risk caps.
/// Zero unless FOC was optimized.
pub fn wildfire_share(sol: &DispatchSolution, line: &str) -> f64 {
    if !sol.optimized_foc {
        return 0.0;
    }
    let (Some(duals), Some(slopes), Some(&(t_min, t_max))) =
        (sol.duals.as_ref(), sol.risk_slopes.get(line), sol.line_limits.get(line))
    else {
        return 0.0;
    };
    let Some(rho) = duals.risk_cap.get(line) else {
        return 0.0;
    };
    let risk_part: f64 = slopes.iter().zip(rho).map(|(a, r)| a * r).sum();
    let rent = t_max * duals.line_upper[line] - t_min * duals.line_lower[line];
    if rent.abs() <= 1e-9 * (1.0 + risk_part.abs()) {
        return 0.0;
    }
    (risk_part / rent).clamp(0.0, 1.0)
}

/// Decomposes the LMP at every bus of an optimal dispatch.
pub fn decompose_lmp(sol: &DispatchSolution) -> Result<IndexMap<String, LmpBreakdown>, DispatchError> {
    let duals = sol.duals.as_ref().ok_or(DispatchError::NotOptimal)?;
    let ptdf = &sol.ptdf;
    let shares: IndexMap<&str, f64> = ptdf
        .line_ids()
        .iter()
        .map(|l| (l.as_str(), wildfire_share(sol, l)))
        .collect();

    let mut out = IndexMap::new();
    for (k, bus) in ptdf.bus_ids().iter().enumerate() {
        let mut b = LmpBreakdown {
            energy: duals.balance,
            congestion_normal: 0.0,
            congestion_risk: 0.0,
            wildfire: 0.0,
            voll: 0.0,
            lmp: 0.0,
        };
        for (l, line) in ptdf.line_ids().iter().enumerate() {
            let (Some(up), Some(lo)) = (duals.line_upper.get(line), duals.line_lower.get(line)) else {
                continue;
            };
            let term = -ptdf.get(l, k) * (up - lo);
            if sol.at_risk.get(line).copied().unwrap_or(false) {
                let s = shares[line.as_str()];
                b.wildfire += s * term;
                b.congestion_risk += (1.0 - s) * term;
            } else {
                b.congestion_normal += term;
            }
        }
        if let Some(&r) = sol.shed_ratio.get(bus) {
            let pi = b.energy + b.congestion_normal + b.congestion_risk + b.wildfire;
            let penalty = sol.shed_penalty.get(bus).copied().unwrap_or(0.0);
            b.voll = (1.0 - r) * (penalty - pi);
        }
        b.lmp = b.component_sum();
        out.insert(bus.clone(), b);
    }
    Ok(out)
}

/// Just the totals, in bus order.
pub fn lmps(sol: &DispatchSolution) -> Result<IndexMap<String, f64>, DispatchError> {
    Ok(decompose_lmp(sol)?.into_iter().map(|(k, b)| (k, b.lmp)).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub enum FdCheck {
    Checked {
        lmp: f64,
        finite_difference: f64,
        gap: f64,
        /// Both solves ended on the same basis, so the gap should be at the
        /// solver's round-off level.
        same_basis: bool,
    },
    PerturbedInfeasible,
}

/// Re-solves with `eps` MW more load at `bus` and compares the change in cost
/// with the reported LMP.
pub fn verify_lmp_fd(
    case: &NetworkCase,
    risk: &RiskProfile,
    config: &DispatchConfig,
    bus: &str,
    eps: f64,
) -> Result<FdCheck, DispatchError> {
    let base = solve_dispatch(case, risk, config)?;
    let prices = decompose_lmp(&base)?;
    let lmp = prices
        .get(bus)
        .map(|b| b.lmp)
        .ok_or_else(|| crate::error::CaseError::UnknownBus(bus.to_string()))?;
    let bumped = case.with_demand_deltas([(bus, eps)])?;
    let after = solve_dispatch(&bumped, risk, config)?;
    let (Some(c0), Some(c1)) = (base.objective, after.objective) else {
        return Ok(FdCheck::PerturbedInfeasible);
    };
    let fd = (c1 - c0) / eps;
    Ok(FdCheck::Checked {
        lmp,
        finite_difference: fd,
        gap: (fd - lmp).abs(),
        same_basis: base.lp.basis == after.lp.basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn edc_prices_are_uniform() {
        let s = solve_dispatch(&fixtures::pjm5(), &RiskProfile::default(), &DispatchConfig::edc()).unwrap();
        let p = lmps(&s).unwrap();
        // Solitude is marginal.
        assert!(p.values().all(|&v| close(v, 30.0, 1e-9)));
    }

    #[test]
    fn components_sum_to_total() {
        for foc in [1.0, 0.75, 0.5] {
            let s = solve_dispatch(&fixtures::pjm5(), &fixtures::pjm5_risk(), &DispatchConfig::fixed_foc(foc)).unwrap();
            for b in decompose_lmp(&s).unwrap().values() {
                assert!(close(b.component_sum(), b.lmp, 1e-12));
                assert_eq!(b.wildfire, 0.0);
            }
        }
    }

    #[test]
    fn energy_component_is_slack_price() {
        let s = solve_dispatch(&fixtures::pjm5(), &fixtures::pjm5_risk(), &DispatchConfig::fixed_foc(0.5)).unwrap();
        let d = decompose_lmp(&s).unwrap();
        let slack = s.ptdf.slack_bus().to_string();
        assert!(close(d[&slack].lmp, d[&slack].energy, 1e-9));
        assert!(close(d["e"].lmp, 20.0, 1e-6));
        assert!(close(d["d"].lmp, 40.0, 1e-6));
    }

    #[test]
    fn two_bus_congested_prices() {
        let s = solve_dispatch(&fixtures::two_bus(), &RiskProfile::default_for(&fixtures::two_bus()), &DispatchConfig::fixed_foc(0.5))
            .unwrap();
        let p = lmps(&s).unwrap();
        // Line carries 30 MW; the local unit at b is marginal there.
        assert!(close(s.flows["ab"], 30.0, 1e-9));
        assert!(close(p["a"], 10.0, 1e-9));
        assert!(close(p["b"], 30.0, 1e-9));
    }

    #[test]
    fn optimized_mode_attributes_rent_to_wildfire() {
        let case = fixtures::two_bus();
        let risk = RiskProfile::default_for(&case);
        let s = solve_dispatch(&case, &risk, &DispatchConfig::optimized_foc()).unwrap();
        let d = decompose_lmp(&s).unwrap();
        for b in d.values() {
            assert!(close(b.component_sum(), b.lmp, 1e-12));
        }
        let share = wildfire_share(&s, "ab");
        assert!((0.0..=1.0).contains(&share));
    }

    #[test]
    fn fd_matches_lmp_off_degenerate_points() {
        let check = verify_lmp_fd(&fixtures::pjm5(), &fixtures::pjm5_risk(), &DispatchConfig::fixed_foc(0.5), "b", 1e-3).unwrap();
        match check {
            FdCheck::Checked { gap, lmp, .. } => assert!(gap <= 1e-3 * lmp.abs().max(1.0), "gap {gap}"),
            FdCheck::PerturbedInfeasible => panic!("should stay feasible"),
        }
    }

    #[test]
    fn infeasible_has_no_prices() {
        let s = solve_dispatch(&fixtures::pjm5(), &fixtures::pjm5_risk(), &DispatchConfig::fixed_foc(0.25)).unwrap();
        assert!(matches!(decompose_lmp(&s), Err(DispatchError::NotOptimal)));
    }
}
