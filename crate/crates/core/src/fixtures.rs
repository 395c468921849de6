//! Cases and profiles compiled into the library.
//!
//! `pjm5` reactances follow the published PJM five-bus training case. Loads,
//! the ab/de limits, the $20 Brighton cost and the 250 MW Sundance rating are
//! the values the wildfire study's results imply; every other line gets the
//! default limit.

use crate::network::{load_case, NetworkCase};
use crate::risk::RiskProfile;

pub const PJM5_JSON: &str = include_str!("../fixtures/pjm5.json");
pub const PJM5_RISK_JSON: &str = include_str!("../fixtures/pjm5_risk.json");
pub const PJM5_DERATE_JSON: &str = include_str!("../fixtures/pjm5_derate.json");
pub const TWO_BUS_JSON: &str = include_str!("../fixtures/two_bus.json");
pub const TRIANGLE_JSON: &str = include_str!("../fixtures/triangle.json");
pub const CATEGORY_PRESETS_JSON: &str = include_str!("../fixtures/category_presets.json");
pub const COUNTY_PRESETS_JSON: &str = include_str!("../fixtures/county_presets.json");

/// Looks up a bundled file by stem or file name (`"pjm5"` or `"pjm5.json"`).
pub fn bundled(name: &str) -> Option<&'static str> {
    let stem = name.strip_suffix(".json").unwrap_or(name);
    let stem = stem.rsplit('/').next().unwrap_or(stem);
    match stem {
        "pjm5" => Some(PJM5_JSON),
        "pjm5_risk" | "pjm5-risk" => Some(PJM5_RISK_JSON),
        "pjm5_derate" | "pjm5-derate" => Some(PJM5_DERATE_JSON),
        "two_bus" | "two-bus" => Some(TWO_BUS_JSON),
        "triangle" => Some(TRIANGLE_JSON),
        "category_presets" | "category-presets" => Some(CATEGORY_PRESETS_JSON),
        "county_presets" | "county-presets" => Some(COUNTY_PRESETS_JSON),
        _ => None,
    }
}

pub fn pjm5() -> NetworkCase {
    load_case(PJM5_JSON).expect("bundled pjm5 is valid")
}

pub fn pjm5_risk() -> RiskProfile {
    RiskProfile::from_json(PJM5_RISK_JSON).expect("bundled pjm5 risk profile is valid")
}

/// Two buses, one at-risk line: a cheap unit at `a`, an expensive one at the load bus `b`.
pub fn two_bus() -> NetworkCase {
    load_case(TWO_BUS_JSON).expect("bundled two_bus is valid")
}

/// Equal-reactance triangle with buses `1`, `2`, `3`.
pub fn triangle() -> NetworkCase {
    load_case(TRIANGLE_JSON).expect("bundled triangle is valid")
}
