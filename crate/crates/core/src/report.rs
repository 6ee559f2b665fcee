//! JSON form of solver results. Every rational is a `"p/q"` string in lowest
//! terms; parsing a document and writing it again reproduces it byte for
//! byte.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{nominal_value, PathFlow, Scenario};
use crate::graph::{ArcId, Path};
use crate::lp::{DualSolution, PrimalSolution, SolveReport};
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowEntry {
    pub path: Vec<ArcId>,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioEntry {
    pub scenario: Vec<ArcId>,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DualDoc {
    /// Nonzero capacity-row duals keyed by arc id.
    pub y: BTreeMap<ArcId, String>,
    pub z: Vec<ScenarioEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDoc {
    pub method: String,
    pub objective: String,
    pub nominal: String,
    pub lambda: String,
    pub flow: Vec<FlowEntry>,
    pub worst_scenario: Vec<ArcId>,
    pub dual: Option<DualDoc>,
    pub iterations: usize,
    pub scenarios_generated: usize,
    pub history: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guarantee: Option<String>,
}

fn flow_entries(x: &PathFlow) -> Vec<FlowEntry> {
    x.iter()
        .map(|(p, v)| FlowEntry { path: p.arcs().to_vec(), value: format_rational(v) })
        .collect()
}

/// Strict: only the canonical `p/q` spelling is accepted.
fn rational(field: &str, text: &str) -> Result<Rational> {
    parse_rational(text)
        .filter(|r| format_rational(r) == text)
        .ok_or_else(|| Error::InvalidInstance(format!("field {field}: {text:?} is not a reduced p/q rational")))
}

impl ReportDoc {
    pub fn from_solve(method: &str, report: &SolveReport) -> Self {
        let dual = report.dual.as_ref().map(|d| DualDoc {
            y: d.y.iter().map(|(&a, v)| (a, format_rational(v))).collect(),
            z: d
                .z
                .iter()
                .map(|(s, v)| ScenarioEntry { scenario: s.arcs().to_vec(), value: format_rational(v) })
                .collect(),
        });
        ReportDoc {
            method: method.to_string(),
            objective: format_rational(&report.primal.objective),
            nominal: format_rational(&nominal_value(&report.primal.x)),
            lambda: format_rational(&report.primal.lambda),
            flow: flow_entries(&report.primal.x),
            worst_scenario: report.worst_scenario.arcs().to_vec(),
            dual,
            iterations: report.iterations,
            scenarios_generated: report.scenarios_generated,
            history: report.history.iter().map(format_rational).collect(),
            guarantee: None,
        }
    }

    /// Report for a flow computed outside the LP: the objective is the
    /// robust value `nominal - lambda`.
    pub fn from_flow(method: &str, x: &PathFlow, lambda: &Rational, worst: &Scenario) -> Self {
        let nominal = nominal_value(x);
        let objective = &nominal - lambda;
        ReportDoc {
            method: method.to_string(),
            objective: format_rational(&objective),
            nominal: format_rational(&nominal),
            lambda: format_rational(lambda),
            flow: flow_entries(x),
            worst_scenario: worst.arcs().to_vec(),
            dual: None,
            iterations: 1,
            scenarios_generated: 0,
            history: vec![format_rational(&objective)],
            guarantee: None,
        }
    }

    pub fn with_guarantee(mut self, guarantee: &Rational) -> Self {
        self.guarantee = Some(format_rational(guarantee));
        self
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    /// Parses and checks every rational field.
    pub fn parse(text: &str) -> Result<Self> {
        let doc: ReportDoc =
            serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })?;
        doc.to_solve_report()?;
        if let Some(g) = &doc.guarantee {
            rational("guarantee", g)?;
        }
        Ok(doc)
    }

    pub fn to_solve_report(&self) -> Result<SolveReport> {
        let mut x = PathFlow::new();
        for entry in &self.flow {
            x.add(Path(entry.path.clone()), rational("flow", &entry.value)?);
        }
        let dual = match &self.dual {
            None => None,
            Some(d) => {
                let mut y = BTreeMap::new();
                for (&a, v) in &d.y {
                    y.insert(a, rational("y", v)?);
                }
                let mut z = BTreeMap::new();
                for entry in &d.z {
                    z.insert(Scenario::new(entry.scenario.iter().copied()), rational("z", &entry.value)?);
                }
                Some(DualSolution { y, z })
            }
        };
        rational("nominal", &self.nominal)?;
        Ok(SolveReport {
            primal: PrimalSolution {
                x,
                lambda: rational("lambda", &self.lambda)?,
                objective: rational("objective", &self.objective)?,
            },
            dual,
            worst_scenario: Scenario::new(self.worst_scenario.iter().copied()),
            iterations: self.iterations,
            scenarios_generated: self.scenarios_generated,
            history: self
                .history
                .iter()
                .map(|h| rational("history", h))
                .collect::<Result<_>>()?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::triple;
    use crate::lp::solve_full_lp;
    use crate::rational::ratio;

    #[test]
    fn round_trip_is_byte_identical() {
        let report = solve_full_lp(&triple(1), 100, 100).unwrap();
        let text = ReportDoc::from_solve("full-lp", &report).with_guarantee(&ratio(3, 2)).to_json();
        assert!(text.contains("\"objective\": \"2/1\""));
        let doc = ReportDoc::parse(&text).unwrap();
        assert_eq!(doc.to_json(), text);
        assert_eq!(doc.to_solve_report().unwrap(), report);
    }

    #[test]
    fn rejects_non_canonical_rationals() {
        let report = solve_full_lp(&triple(1), 100, 100).unwrap();
        let text = ReportDoc::from_solve("full-lp", &report).to_json();
        assert!(ReportDoc::parse(&text.replace("\"2/1\"", "\"4/2\"")).is_err());
        assert!(ReportDoc::parse(&text.replace("\"2/1\"", "\"2\"")).is_err());
        assert!(ReportDoc::parse(&text.replace("\"2/1\"", "2.0")).is_err());
    }
}
