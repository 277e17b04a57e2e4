//! Machine-readable command reports. Every number is an exact decimal
//! string; the timing map is the only non-deterministic field and sits at
//! the end so consumers can strip it.

use crate::abelian::GroupElem;
use crate::groupring::GroupRingElement;
use crate::rat::format_qq;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ClassValue {
    pub class: GroupElem,
    pub value: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ThetaReport {
    pub k: i64,
    /// zeta values per class (un-inverted)
    pub zeta_values: Vec<ClassValue>,
    /// raw coefficients in the inverse-class convention
    pub coefficients: Vec<ClassValue>,
    pub integral: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TowerReport {
    pub observed_exponent: usize,
    pub guaranteed_exponent: usize,
    pub bound_holds: bool,
    pub observed_doubled_exponent: usize,
    pub doubled_bound_holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fine_ideal_membership: Option<bool>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct UnitComponentReport {
    pub class: GroupElem,
    pub valuation: String,
    pub unit_part: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct UnitReport {
    pub p: u64,
    pub precision: usize,
    pub components: Vec<UnitComponentReport>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CheckReport {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DomainReport {
    pub pass: bool,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Report {
    pub version: u32,
    pub command: String,
    pub fixture: String,
    pub invariant_factors: Vec<u64>,
    pub inputs: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<ThetaReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unsmoothed: Option<Vec<ClassValue>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tower: Option<TowerReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unit: Option<UnitReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<Vec<ClassValue>>,
    pub checks: Vec<CheckReport>,
    pub timings_ms: BTreeMap<String, u128>,
}

impl Report {
    pub fn new(command: &str, fixture: &str) -> Report {
        Report {
            version: REPORT_VERSION,
            command: command.to_string(),
            fixture: fixture.to_string(),
            invariant_factors: vec![],
            inputs: BTreeMap::new(),
            theta: None,
            unsmoothed: None,
            tower: None,
            unit: None,
            domain: None,
            oracle: None,
            checks: vec![],
            timings_ms: BTreeMap::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    /// The report with timings removed, for byte-level determinism checks.
    pub fn without_timings(&self) -> Report {
        let mut r = self.clone();
        r.timings_ms.clear();
        r
    }
}

/// Dense listing of a group-ring element as class/value pairs in the
/// deterministic element order.
pub fn ring_values(x: &GroupRingElement) -> Vec<ClassValue> {
    x.group
        .elements()
        .into_iter()
        .map(|g| ClassValue { value: format_qq(&x.coeff(&g)), class: g })
        .collect()
}

/// Zeta values per class: the coefficient at the inverse class.
pub fn zeta_values(x: &GroupRingElement) -> Vec<ClassValue> {
    x.group
        .elements()
        .into_iter()
        .map(|g| ClassValue {
            value: format_qq(&x.coeff(&x.group.neg(&g))),
            class: g,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_roundtrip() {
        let mut r = Report::new("zeta", "demo");
        r.invariant_factors = vec![2];
        r.inputs.insert("k".into(), "0".into());
        r.checks.push(CheckReport {
            name: "integrality".into(),
            pass: true,
            detail: "all coefficients integral".into(),
        });
        r.timings_ms.insert("total".into(), 12);
        let text = r.to_json();
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        // determinism modulo timings
        let mut r2 = r.clone();
        r2.timings_ms.insert("total".into(), 99);
        assert_eq!(r.without_timings(), r2.without_timings());
        assert_eq!(
            r.without_timings().to_json(),
            r2.without_timings().to_json()
        );
    }
}
