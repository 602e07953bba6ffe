//! JSON reports. Edges are 1-based `[i, j]` in the caller's orientation and
//! intervals carry signed endpoints (`lo <= 0 <= hi`). Infinite values are
//! written as the strings `"inf"` / `"-inf"`.

use std::fmt;

use bapsens::{
    assignment_max_weight, AssignmentSensitivityReport, BapSolution, DeterminedBound, EdgeSensitivityReport,
    IntervalArray, Side, WeightMatrix,
};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::formats::{external_dims, pair_of};

pub const ASSUMPTION_WARNING: &str = "assumption-1-violated";

/// An `f64` that may be infinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ext(pub f64);

impl Serialize for Ext {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            x if x == f64::INFINITY => s.serialize_str("inf"),
            x if x == f64::NEG_INFINITY => s.serialize_str("-inf"),
            x => s.serialize_f64(x),
        }
    }
}

impl<'de> Deserialize<'de> for Ext {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Ext, D::Error> {
        struct ExtVisitor;

        impl Visitor<'_> for ExtVisitor {
            type Value = Ext;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number, \"inf\" or \"-inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Ext, E> {
                Ok(Ext(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Ext, E> {
                Ok(Ext(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Ext, E> {
                Ok(Ext(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Ext, E> {
                match v {
                    "inf" => Ok(Ext(f64::INFINITY)),
                    "-inf" => Ok(Ext(f64::NEG_INFINITY)),
                    _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
                }
            }
        }

        d.deserialize_any(ExtVisitor)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: Ext,
    pub hi: Ext,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeSet {
    pub edge: [usize; 2],
    pub members: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogEntry {
    pub iteration: usize,
    pub edge: [usize; 2],
    pub side: String,
    pub value: Ext,
}

/// Output of every command; fields a command does not produce are omitted.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub n: usize,
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bottleneck_edge: Option<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bottleneck_value: Option<Ext>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_unique: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bottleneck_candidates: Option<Vec<[usize; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assignment: Option<Vec<[usize; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intervals: Option<Vec<Vec<Interval>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exclusive_set: Option<Vec<[usize; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exclusive_sets: Option<Vec<EdgeSet>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certified: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<Ext>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub determined_log: Option<Vec<LogEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub allowable: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturbed_bottleneck_value: Option<Ext>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimizers: Option<Vec<Vec<[usize; 2]>>>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(command: &str, w: &WeightMatrix) -> Report {
        let (n, m) = external_dims(w);
        Report {
            command: command.to_owned(),
            n,
            m,
            ..Report::default()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Report> {
        serde_json::from_str(text)
    }
}

/// Sorted 1-based pairs in the caller's orientation.
pub fn pairs<I: IntoIterator<Item = bapsens::Edge>>(w: &WeightMatrix, edges: I) -> Vec<[usize; 2]> {
    let mut v: Vec<[usize; 2]> = edges.into_iter().map(|e| pair_of(w, e)).collect();
    v.sort_unstable();
    v
}

/// Like [`pairs`] but keeps the given order.
fn ordered_pairs(w: &WeightMatrix, edges: &[bapsens::Edge]) -> Vec<[usize; 2]> {
    edges.iter().map(|&e| pair_of(w, e)).collect()
}

pub fn signed_intervals(w: &WeightMatrix, l: &IntervalArray) -> Vec<Vec<Interval>> {
    let (n, m) = external_dims(w);
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let (lo, hi) = l.interval(w.to_internal(bapsens::Edge::new(i, j)));
                    Interval {
                        lo: Ext(lo),
                        hi: Ext(hi),
                    }
                })
                .collect()
        })
        .collect()
}

pub fn solve_report(w: &WeightMatrix, sol: &BapSolution) -> Report {
    Report {
        bottleneck_edge: Some(pair_of(w, sol.bottleneck_edge)),
        bottleneck_value: Some(Ext(sol.bottleneck_value)),
        edge_unique: Some(sol.edge_unique),
        bottleneck_candidates: Some(pairs(w, sol.candidates.iter().copied())),
        assignment: Some(pairs(w, sol.assignment.edges())),
        ..Report::new("solve", w)
    }
}

pub fn edge_report(w: &WeightMatrix, r: &EdgeSensitivityReport) -> Report {
    Report {
        bottleneck_edge: Some(pair_of(w, r.anchor)),
        bottleneck_value: Some(Ext(w.get(r.anchor))),
        assignment: Some(pairs(w, r.lex_assignment_used.edges())),
        intervals: Some(signed_intervals(w, &r.intervals)),
        exclusive_set: Some(ordered_pairs(w, &r.exclusive_set.members)),
        certified: Some(r.certified),
        warnings: warnings(r.certified),
        ..Report::new("edge-sens", w)
    }
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Lower => "lower",
        Side::Upper => "upper",
    }
}

fn log_entry(w: &WeightMatrix, d: &DeterminedBound) -> LogEntry {
    LogEntry {
        iteration: d.iteration,
        edge: pair_of(w, d.edge),
        side: side_name(d.side).to_owned(),
        value: Ext(d.value),
    }
}

pub fn assignment_report(w: &WeightMatrix, r: &AssignmentSensitivityReport) -> Report {
    let max = assignment_max_weight(w, &r.assignment).expect("report assignment fits its matrix");
    let radius = r.intervals.rho(1).expect("matrices are non-empty");
    Report {
        bottleneck_edge: Some(pair_of(w, max.edge)),
        bottleneck_value: Some(Ext(max.value)),
        assignment: Some(pairs(w, r.assignment.edges())),
        intervals: Some(signed_intervals(w, &r.intervals)),
        exclusive_sets: Some(
            r.exclusive_sets
                .iter()
                .map(|(e, members)| EdgeSet {
                    edge: pair_of(w, *e),
                    members: ordered_pairs(w, members),
                })
                .collect(),
        ),
        certified: Some(r.certified),
        iterations: Some(r.iterations),
        radius: Some(Ext(radius)),
        determined_log: Some(r.determined_log().iter().map(|d| log_entry(w, d)).collect()),
        warnings: warnings(r.certified),
        ..Report::new("assign-sens", w)
    }
}

fn warnings(certified: bool) -> Vec<String> {
    if certified {
        Vec::new()
    } else {
        vec![ASSUMPTION_WARNING.to_owned()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinities_are_strings() {
        let i = Interval {
            lo: Ext(f64::NEG_INFINITY),
            hi: Ext(35.5),
        };
        let s = serde_json::to_string(&i).unwrap();
        assert_eq!(s, r#"{"lo":"-inf","hi":35.5}"#);
        assert_eq!(serde_json::from_str::<Interval>(&s).unwrap(), i);
        assert!(serde_json::from_str::<Ext>("\"infinity\"").is_err());
        assert_eq!(serde_json::from_str::<Ext>("13").unwrap(), Ext(13.0));
    }

    #[test]
    fn shortest_round_trip() {
        for x in [0.1 + 0.2, 1e-300, 123456789.125, -0.0, 5e-324] {
            let s = serde_json::to_string(&Ext(x)).unwrap();
            let back: Ext = serde_json::from_str(&s).unwrap();
            assert_eq!(back.0.to_bits(), x.to_bits(), "{s}");
        }
    }
}
