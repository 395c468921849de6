//! Wildfire-risk semantics: vegetation categories, the WR → FOC mapping and
//! piecewise-linear per-line risk functions with caps.
//!
//! A line's risk as a function of its derating factor is the upper envelope
//! `risk(foc) = max_j (a_j · foc + b_j)`. Capping that envelope is the same as
//! capping every affine piece, which is how the dispatch LP encodes it.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::RiskError;
use crate::network::NetworkCase;
use crate::scalar::Real;

/// Default value of lost load, $/MWh.
pub const DEFAULT_VOLL: f64 = 10_000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RiskCategory {
    #[serde(rename = "VLWR")]
    VeryLow,
    #[serde(rename = "LWR")]
    Low,
    #[serde(rename = "MWR")]
    Medium,
    #[serde(rename = "HWR")]
    High,
    #[serde(rename = "VHWR")]
    VeryHigh,
    #[serde(rename = "DWR")]
    Drastic,
}

impl RiskCategory {
    pub const ALL: [RiskCategory; 6] = [
        RiskCategory::VeryLow,
        RiskCategory::Low,
        RiskCategory::Medium,
        RiskCategory::High,
        RiskCategory::VeryHigh,
        RiskCategory::Drastic,
    ];

    pub fn code(self) -> &'static str {
        match self {
            RiskCategory::VeryLow => "VLWR",
            RiskCategory::Low => "LWR",
            RiskCategory::Medium => "MWR",
            RiskCategory::High => "HWR",
            RiskCategory::VeryHigh => "VHWR",
            RiskCategory::Drastic => "DWR",
        }
    }

    /// Vegetation color that identifies the category.
    pub fn color(self) -> &'static str {
        match self {
            RiskCategory::VeryLow => "Dark Green",
            RiskCategory::Low => "Light Green",
            RiskCategory::Medium => "Faded Green",
            RiskCategory::High => "Yellow",
            RiskCategory::VeryHigh => "Orange",
            RiskCategory::Drastic => "Red",
        }
    }
}

impl fmt::Display for RiskCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for RiskCategory {
    type Err = RiskError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RiskCategory::ALL
            .into_iter()
            .find(|c| c.code().eq_ignore_ascii_case(s))
            .ok_or_else(|| RiskError::UnknownCategory(s.to_string()))
    }
}

/// FOC bounds attached to each category. Policy knobs, overridable from JSON.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoryPresets {
    bounds: BTreeMap<RiskCategory, (f64, f64)>,
}

impl Default for CategoryPresets {
    fn default() -> Self {
        use RiskCategory::*;
        Self {
            bounds: BTreeMap::from([
                (VeryLow, (0.9, 1.0)),
                (Low, (0.75, 1.0)),
                (Medium, (0.5, 0.9)),
                (High, (0.4, 0.75)),
                (VeryHigh, (0.25, 0.5)),
                (Drastic, (0.0, 0.25)),
            ]),
        }
    }
}

impl CategoryPresets {
    /// Defaults with any entries from a `{"MWR": [0.6, 0.8], ...}` document applied on top.
    pub fn with_overrides(json: &str) -> Result<Self, RiskError> {
        let raw: BTreeMap<RiskCategory, (f64, f64)> =
            serde_json::from_str(json).map_err(|e| RiskError::Parse(e.to_string()))?;
        let mut presets = Self::default();
        for (cat, (lo, hi)) in raw {
            check_unit_interval(lo, hi, &format!("preset {cat}"))?;
            presets.bounds.insert(cat, (lo, hi));
        }
        Ok(presets)
    }

    pub fn bounds(&self, category: RiskCategory) -> (f64, f64) {
        self.bounds[&category]
    }
}

pub fn category_to_foc_bounds(category: RiskCategory, presets: &CategoryPresets) -> (f64, f64) {
    presets.bounds(category)
}

/// Maps a wildfire-risk score to a line derating factor.
///
/// This is the identity. Read literally, a riskier location gets a larger
/// FOC and therefore looser limits; callers wanting the opposite reading
/// should replace this one function (for example with `1 - wr`).
pub fn wr_to_foc(wr: f64) -> Result<f64, RiskError> {
    if !(0.0..=1.0).contains(&wr) {
        return Err(RiskError::WrOutOfRange(wr));
    }
    Ok(wr)
}

/// One affine piece `slope · foc + offset` of a risk function.
/// Serialized as a `[slope, offset]` pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskSegment<T = f64> {
    pub slope: T,
    pub offset: T,
}

impl Serialize for RiskSegment<f64> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        (self.slope, self.offset).serialize(s)
    }
}

impl<'de> Deserialize<'de> for RiskSegment<f64> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        <(f64, f64)>::deserialize(d).map(Self::from)
    }
}

impl From<(f64, f64)> for RiskSegment<f64> {
    fn from((slope, offset): (f64, f64)) -> Self {
        Self { slope, offset }
    }
}

impl From<RiskSegment<f64>> for (f64, f64) {
    fn from(s: RiskSegment<f64>) -> Self {
        (s.slope, s.offset)
    }
}

/// Risk at a given FOC: the largest of the affine pieces.
pub fn eval_risk<T: Real>(segments: &[RiskSegment<T>], foc: T) -> Result<T, RiskError> {
    if segments.is_empty() {
        return Err(RiskError::EmptySegments);
    }
    if !(foc >= T::zero() && foc <= T::one()) {
        return Err(RiskError::FocOutOfRange(foc.to_f64_lossy()));
    }
    Ok(segments
        .iter()
        .map(|s| s.slope * foc + s.offset)
        .fold(T::neg_infinity(), T::max))
}

/// Largest FOC in `[0, 1]` whose risk stays within `cap`, or `None` when no
/// FOC in the interval qualifies.
pub fn max_foc_under_cap<T: Real>(segments: &[RiskSegment<T>], cap: T) -> Option<T> {
    let mut lo = T::zero();
    let mut hi = T::one();
    for s in segments {
        let room = cap - s.offset;
        if s.slope > T::zero() {
            hi = hi.min(room / s.slope);
        } else if s.slope < T::zero() {
            lo = lo.max(room / s.slope);
        } else if room < T::zero() {
            return None;
        }
    }
    (lo <= hi).then_some(hi)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineRisk {
    pub segments: Vec<RiskSegment>,
    pub cap: f64,
    pub foc_min: f64,
    pub foc_max: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<RiskCategory>,
    /// Locations whose WR applies to this line.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub locations: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BusRisk {
    pub voll: f64,
    pub r_min: f64,
    pub r_max: f64,
}

impl Default for BusRisk {
    fn default() -> Self {
        Self {
            voll: DEFAULT_VOLL,
            r_min: 0.0,
            r_max: 1.0,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RiskProfile {
    #[serde(default)]
    pub lines: IndexMap<String, LineRisk>,
    #[serde(default)]
    pub buses: IndexMap<String, BusRisk>,
    /// Wildfire risk per location.
    #[serde(default)]
    pub wr: BTreeMap<String, f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LineRiskFile {
    segments: Vec<RiskSegment>,
    cap: f64,
    #[serde(default)]
    foc_min: Option<f64>,
    #[serde(default)]
    foc_max: Option<f64>,
    #[serde(default)]
    category: Option<RiskCategory>,
    #[serde(default)]
    locations: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RiskProfileFile {
    #[serde(default)]
    lines: IndexMap<String, LineRiskFile>,
    #[serde(default)]
    buses: IndexMap<String, BusRisk>,
    #[serde(default)]
    wr: BTreeMap<String, f64>,
}

fn check_unit_interval(lo: f64, hi: f64, what: &str) -> Result<(), RiskError> {
    if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
        return Err(RiskError::Inconsistent(format!(
            "{what}: bounds ({lo}, {hi}) must satisfy 0 <= min <= max <= 1"
        )));
    }
    Ok(())
}

impl RiskProfile {
    /// Parses a profile. Missing `foc_min`/`foc_max` fall back to the
    /// category preset, or to `[0, 1]` when no category is given.
    pub fn from_json(text: &str) -> Result<Self, RiskError> {
        Self::from_json_with_presets(text, &CategoryPresets::default())
    }

    pub fn from_json_with_presets(text: &str, presets: &CategoryPresets) -> Result<Self, RiskError> {
        let file: RiskProfileFile = serde_json::from_str(text).map_err(|e| RiskError::Parse(e.to_string()))?;
        let lines = file
            .lines
            .into_iter()
            .map(|(id, l)| {
                let (pmin, pmax) = l.category.map_or((0.0, 1.0), |c| presets.bounds(c));
                let risk = LineRisk {
                    segments: l.segments,
                    cap: l.cap,
                    foc_min: l.foc_min.unwrap_or(pmin),
                    foc_max: l.foc_max.unwrap_or(pmax),
                    category: l.category,
                    locations: l.locations,
                };
                (id, risk)
            })
            .collect();
        let profile = RiskProfile {
            lines,
            buses: file.buses,
            wr: file.wr,
        };
        profile.check_values()?;
        Ok(profile)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("risk profile serializes")
    }

    /// Profile for a case with the stock two-piece risk function
    /// `max(foc, 3·foc − 1)` capped at 1, FOC free in `[0, 1]`, and default
    /// VOLL on every bus adjacent to an at-risk line.
    pub fn default_for(case: &NetworkCase) -> Self {
        let lines = case
            .lines
            .iter()
            .filter(|l| l.at_risk)
            .map(|l| {
                (
                    l.id.clone(),
                    LineRisk {
                        segments: vec![(1.0, 0.0).into(), (3.0, -1.0).into()],
                        cap: 1.0,
                        foc_min: 0.0,
                        foc_max: 1.0,
                        category: None,
                        locations: Vec::new(),
                    },
                )
            })
            .collect();
        let buses = case
            .risk_adjacent_buses()
            .into_iter()
            .map(|k| (case.buses[k].id.clone(), BusRisk::default()))
            .collect();
        RiskProfile {
            lines,
            buses,
            wr: BTreeMap::new(),
        }
    }

    fn check_values(&self) -> Result<(), RiskError> {
        for (id, l) in &self.lines {
            if l.segments.is_empty() {
                return Err(RiskError::Inconsistent(format!("line {id}: no risk segments")));
            }
            if !l.cap.is_finite() || l.segments.iter().any(|s| !s.slope.is_finite() || !s.offset.is_finite()) {
                return Err(RiskError::Inconsistent(format!("line {id}: non-finite risk data")));
            }
            check_unit_interval(l.foc_min, l.foc_max, &format!("line {id} FOC"))?;
        }
        for (id, b) in &self.buses {
            if !(b.voll >= 0.0) || !b.voll.is_finite() {
                return Err(RiskError::Inconsistent(format!("bus {id}: voll must be >= 0")));
            }
            check_unit_interval(b.r_min, b.r_max, &format!("bus {id} served ratio"))?;
        }
        for (loc, &wr) in &self.wr {
            if !(0.0..=1.0).contains(&wr) {
                return Err(RiskError::Inconsistent(format!("location {loc}: wr {wr} outside [0, 1]")));
            }
        }
        Ok(())
    }

    /// Checks the profile against a case: it must describe exactly the
    /// at-risk lines, and bus entries must name real buses.
    pub fn validate_for(&self, case: &NetworkCase) -> Result<(), RiskError> {
        self.check_values()?;
        for line in case.lines.iter().filter(|l| l.at_risk) {
            if !self.lines.contains_key(&line.id) {
                return Err(RiskError::Inconsistent(format!("at-risk line {} has no risk entry", line.id)));
            }
        }
        for id in self.lines.keys() {
            match case.line(id) {
                Some(l) if l.at_risk => {}
                Some(_) => {
                    return Err(RiskError::Inconsistent(format!("line {id} has a risk entry but is not at risk")))
                }
                None => return Err(RiskError::Inconsistent(format!("unknown line {id}"))),
            }
        }
        for id in self.buses.keys() {
            if case.bus_index(id).is_none() {
                return Err(RiskError::Inconsistent(format!("unknown bus {id}")));
            }
        }
        Ok(())
    }

    /// Restriction of the profile to the lines still present in `case`
    /// (used after an outage removes an at-risk line).
    pub fn restricted_to(&self, case: &NetworkCase) -> RiskProfile {
        let mut out = self.clone();
        out.lines.retain(|id, _| case.line(id).is_some_and(|l| l.at_risk));
        out
    }

    /// WR governing a line: the largest WR among its locations.
    pub fn line_wr(&self, line_id: &str) -> Option<f64> {
        let line = self.lines.get(line_id)?;
        line.locations
            .iter()
            .filter_map(|loc| self.wr.get(loc).copied())
            .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))))
    }

    /// FOC for each at-risk line derived from location WR via [`wr_to_foc`].
    pub fn foc_from_wr(&self) -> Result<IndexMap<String, f64>, RiskError> {
        self.lines
            .keys()
            .map(|id| {
                let wr = self
                    .line_wr(id)
                    .ok_or_else(|| RiskError::Inconsistent(format!("line {id} has no located WR")))?;
                Ok((id.clone(), wr_to_foc(wr)?))
            })
            .collect()
    }

    pub fn bus(&self, id: &str) -> Option<&BusRisk> {
        self.buses.get(id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    fn segs(v: &[(f64, f64)]) -> Vec<RiskSegment> {
        v.iter().map(|&p| p.into()).collect()
    }

    #[test]
    fn categories_are_ordered_with_colors() {
        let colors: Vec<_> = RiskCategory::ALL.iter().map(|c| c.color()).collect();
        assert_eq!(colors, ["Dark Green", "Light Green", "Faded Green", "Yellow", "Orange", "Red"]);
        assert!(RiskCategory::ALL.windows(2).all(|w| w[0] < w[1]));
        assert_eq!("vhwr".parse::<RiskCategory>().unwrap(), RiskCategory::VeryHigh);
        assert!("XWR".parse::<RiskCategory>().is_err());
    }

    #[test]
    fn wr_maps_to_foc_identically() {
        assert_eq!(wr_to_foc(1.0), Ok(1.0));
        assert_eq!(wr_to_foc(0.5), Ok(0.5));
        assert_eq!(wr_to_foc(0.0), Ok(0.0));
        assert_eq!(wr_to_foc(1.5), Err(RiskError::WrOutOfRange(1.5)));
        assert!(wr_to_foc(f64::NAN).is_err());
    }

    #[test]
    fn preset_bounds() {
        let p = CategoryPresets::default();
        assert_eq!(category_to_foc_bounds(RiskCategory::VeryLow, &p), (0.9, 1.0));
        assert_eq!(category_to_foc_bounds(RiskCategory::Drastic, &p), (0.0, 0.25));
        let o = CategoryPresets::with_overrides(r#"{"MWR": [0.6, 0.8]}"#).unwrap();
        assert_eq!(category_to_foc_bounds(RiskCategory::Medium, &o), (0.6, 0.8));
        assert_eq!(category_to_foc_bounds(RiskCategory::High, &o), (0.4, 0.75));
        assert!(CategoryPresets::with_overrides(r#"{"MWR": [0.9, 0.8]}"#).is_err());
    }

    #[test]
    fn bundled_preset_file_matches_defaults() {
        let p = CategoryPresets::with_overrides(fixtures::CATEGORY_PRESETS_JSON).unwrap();
        assert_eq!(p, CategoryPresets::default());
    }

    #[test]
    fn presets_are_monotone() {
        let p = CategoryPresets::default();
        for w in RiskCategory::ALL.windows(2) {
            assert!(p.bounds(w[1]).1 <= p.bounds(w[0]).1);
        }
    }

    #[test]
    fn risk_evaluation() {
        assert_eq!(eval_risk(&segs(&[(1.0, 0.0)]), 0.5), Ok(0.5));
        let two = segs(&[(1.0, 0.0), (3.0, -1.0)]);
        assert_eq!(eval_risk(&two, 0.75), Ok(1.25));
        assert_eq!(eval_risk(&two, 0.25), Ok(0.25));
        assert_eq!(eval_risk::<f64>(&[], 0.5), Err(RiskError::EmptySegments));
        assert!(eval_risk(&two, 1.2).is_err());
    }

    #[test]
    fn cap_inversion() {
        assert_eq!(max_foc_under_cap(&segs(&[(1.0, 0.0)]), 0.5), Some(0.5));
        let got = max_foc_under_cap(&segs(&[(1.0, 0.0), (3.0, -1.0)]), 1.25).unwrap();
        assert!((got - 0.75).abs() < 1e-12);
        assert_eq!(max_foc_under_cap(&segs(&[(0.0, 2.0)]), 1.0), None);
        assert_eq!(max_foc_under_cap(&segs(&[(1.0, 0.0)]), 3.0), Some(1.0));
        // Decreasing piece pushes the feasible interval right.
        assert_eq!(max_foc_under_cap(&segs(&[(-2.0, 2.0)]), 1.0), Some(1.0));
        assert_eq!(max_foc_under_cap(&segs(&[(-2.0, 2.0), (1.0, 0.0)]), 0.4), None);
    }

    #[test]
    fn bundled_profile_is_consistent() {
        let profile = fixtures::pjm5_risk();
        profile.validate_for(&fixtures::pjm5()).unwrap();
        assert_eq!(profile.lines["de"].category, Some(RiskCategory::VeryHigh));
        assert_eq!(profile.line_wr("ad"), Some(0.9));
        assert_eq!(profile.line_wr("de"), Some(0.5));
        let foc = profile.foc_from_wr().unwrap();
        assert_eq!(foc["cd"], 0.75);
    }

    #[test]
    fn missing_bounds_fall_back_to_category() {
        let text = r#"{"lines": {"ab": {"segments": [[1, 0]], "cap": 1, "category": "HWR"}}}"#;
        let p = RiskProfile::from_json(text).unwrap();
        assert_eq!((p.lines["ab"].foc_min, p.lines["ab"].foc_max), (0.4, 0.75));
    }

    #[test]
    fn profile_must_cover_at_risk_lines() {
        let case = fixtures::pjm5();
        let mut p = fixtures::pjm5_risk();
        p.lines.shift_remove("cd");
        assert!(p.validate_for(&case).is_err());
        let mut p = fixtures::pjm5_risk();
        p.buses.insert("zz".into(), BusRisk::default());
        assert!(p.validate_for(&case).is_err());
        assert!(RiskProfile::from_json(r#"{"buses": {"a": {"voll": -1, "r_min": 0, "r_max": 1}}}"#).is_err());
    }

    #[test]
    fn default_profile_round_trips() {
        let case = fixtures::pjm5();
        let p = RiskProfile::default_for(&case);
        p.validate_for(&case).unwrap();
        assert_eq!(RiskProfile::from_json(&p.to_json()).unwrap(), p);
    }

    fn nonneg_segments() -> impl Strategy<Value = Vec<RiskSegment>> {
        prop::collection::vec((0.0f64..5.0, -2.0f64..2.0), 1..5)
            .prop_map(|v| v.into_iter().map(RiskSegment::from).collect())
    }

    proptest! {
        #[test]
        fn risk_is_convex_and_nondecreasing(s in nonneg_segments(), f1 in 0.0f64..1.0, f2 in 0.0f64..1.0) {
            let (lo, hi) = if f1 <= f2 { (f1, f2) } else { (f2, f1) };
            let rl = eval_risk(&s, lo).unwrap();
            let rh = eval_risk(&s, hi).unwrap();
            let mid = eval_risk(&s, 0.5 * (lo + hi)).unwrap();
            prop_assert!(rl <= rh + 1e-12);
            prop_assert!(mid <= 0.5 * (rl + rh) + 1e-12);
        }

        #[test]
        fn cap_inverse_dominates(s in nonneg_segments(), f in 0.0f64..1.0) {
            let cap = eval_risk(&s, f).unwrap();
            let best = max_foc_under_cap(&s, cap).unwrap();
            prop_assert!(best >= f - 1e-12);
            prop_assert!(eval_risk(&s, best).unwrap() <= cap + 1e-9);
        }
    }
}
