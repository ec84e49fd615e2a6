//! Bundled example models and the verdicts pinned for them.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::analysis::{ClassificationReport, Value, Verdict};
use crate::model::Collaboration;
use crate::parser::parse;

#[derive(Debug, Clone, Copy)]
pub struct Fixture {
    pub name: &'static str,
    pub source: &'static str,
}

macro_rules! fixture {
    ($name:literal) => {
        Fixture { name: $name, source: include_str!(concat!("../corpus/", $name, ".bpmnc")) }
    };
}

pub const FIXTURES: &[Fixture] = &[
    fixture!("fig01_travel_agency"),
    fixture!("fig05"),
    fixture!("fig05_terminate"),
    fixture!("fig06"),
    fixture!("fig12"),
    fixture!("fig13"),
    fixture!("fig14"),
    fixture!("fig15"),
    fixture!("fig16"),
    fixture!("fig17"),
    fixture!("fig18"),
    fixture!("ws_deadlock"),
];

const EXPECTED: &str = include_str!("../corpus/expected.json");

/// Pinned verdicts of one fixture; absent entries are not checked.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    #[serde(default)]
    pub collaboration: BTreeMap<String, Value>,
    #[serde(default)]
    pub pools: BTreeMap<String, BTreeMap<String, Value>>,
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match String::deserialize(d)?.as_str() {
            "holds" => Ok(Value::Holds),
            "violated" => Ok(Value::Violated),
            "inconclusive" => Ok(Value::Inconclusive),
            other => Err(serde::de::Error::custom(format!("unknown verdict `{other}`"))),
        }
    }
}

pub fn expected() -> BTreeMap<String, Expected> {
    serde_json::from_str(EXPECTED).expect("bundled expectations are valid JSON")
}

/// Parses every bundled fixture.
pub fn load() -> Vec<(String, Collaboration)> {
    FIXTURES
        .iter()
        .map(|f| {
            let m = parse(f.source).unwrap_or_else(|e| panic!("fixture {} does not parse: {e}", f.name));
            (f.name.to_string(), m)
        })
        .collect()
}

fn lookup<'a>(report: &'a ClassificationReport, pool: Option<&str>, property: &str) -> Option<&'a Verdict> {
    match pool {
        None => {
            let c = &report.collaboration;
            match property {
                "ws" => Some(&c.ws),
                "safe" => Some(&c.safe),
                "sound" => Some(&c.sound),
                "mrSound" => Some(&c.mr_sound),
                _ => None,
            }
        }
        Some(name) => {
            let p = report.pools.iter().find(|p| p.name == name)?;
            match property {
                "ws" => Some(&p.ws),
                "safe" => Some(&p.safe),
                "sound" => Some(&p.sound),
                _ => None,
            }
        }
    }
}

/// Differences between a report and the pinned verdicts, one line each.
pub fn compare(expected: &Expected, report: &ClassificationReport) -> Vec<String> {
    let mut out = Vec::new();
    let mut check = |pool: Option<&str>, prop: &str, want: Value| {
        let scope = pool.unwrap_or("collaboration");
        match lookup(report, pool, prop) {
            Some(v) if v.value == want => {}
            Some(v) => out.push(format!("{scope}.{prop}: expected {want}, got {}", v.value)),
            None => out.push(format!("{scope}.{prop}: no such verdict")),
        }
    };
    for (prop, &want) in &expected.collaboration {
        check(None, prop, want);
    }
    for (pool, props) in &expected.pools {
        for (prop, &want) in props {
            check(Some(pool), prop, want);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_has_expectations() {
        let exp = expected();
        let names: Vec<_> = FIXTURES.iter().map(|f| f.name.to_string()).collect();
        assert_eq!(exp.keys().cloned().collect::<Vec<_>>(), {
            let mut n = names.clone();
            n.sort();
            n
        });
        assert_eq!(load().len(), FIXTURES.len());
    }
}
