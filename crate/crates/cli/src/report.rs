//! Machine-readable reports and their human summaries.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Certified,
    Probable,
    OutsideHypotheses,
    ProvisoSmoothness,
    ProvisoIrreducibility,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Certified => "certified",
            Status::Probable => "probable",
            Status::OutsideHypotheses => "outside_hypotheses",
            Status::ProvisoSmoothness => "proviso_smoothness",
            Status::ProvisoIrreducibility => "proviso_irreducibility",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    /// Stated in the literature the example comes from.
    Published,
    /// Fixed by an independent computation.
    Computed,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub claim: String,
    pub value: Value,
    pub status: Status,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub detail: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub kind: String,
    pub value: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub claim: String,
    pub source: Source,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub version: &'static str,
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub verdicts: Vec<Verdict>,
    pub witnesses: Vec<Witness>,
    pub provenance: Vec<Provenance>,
    pub seed: Option<u64>,
    pub timings: BTreeMap<String, f64>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            version: SCHEMA_VERSION,
            command: command.into(),
            inputs: BTreeMap::new(),
            verdicts: Vec::new(),
            witnesses: Vec::new(),
            provenance: Vec::new(),
            seed: None,
            timings: BTreeMap::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.inputs.insert(key.to_string(), value.to_string());
        self
    }

    pub fn verdict(&mut self, claim: &str, value: impl Into<Value>, status: Status) -> &mut Verdict {
        self.verdicts.push(Verdict { claim: claim.to_string(), value: value.into(), status, detail: BTreeMap::new() });
        self.verdicts.last_mut().expect("just pushed")
    }

    pub fn witness(&mut self, kind: &str, value: impl Into<Value>) {
        self.witnesses.push(Witness { kind: kind.to_string(), value: value.into() });
    }

    pub fn provenance(&mut self, p: Provenance) {
        self.provenance.push(p);
    }

    pub fn all_pass(&self) -> bool {
        self.provenance.iter().all(|p| p.pass)
    }

    /// 1 on a failed expectation, 2 if any verdict carries a proviso, else 0.
    pub fn exit_code(&self) -> i32 {
        if !self.all_pass() {
            1
        } else if self.verdicts.iter().any(|v| v.status != Status::Certified) {
            2
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn write_json(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_json())
    }

    pub fn human(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{}\n", self.command));
        for (k, v) in &self.inputs {
            out.push_str(&format!("  {k}: {v}\n"));
        }
        for v in &self.verdicts {
            let value = match &v.value {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{}: {} [{}]\n", v.claim, value, v.status.as_str()));
            for (k, d) in &v.detail {
                out.push_str(&format!("    {k}: {d}\n"));
            }
        }
        for w in &self.witnesses {
            let value = match &w.value {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("  witness {}: {}\n", w.kind, value));
        }
        for p in &self.provenance {
            let mark = if p.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "{mark} {} (expected {}, observed {}, {})\n",
                p.claim,
                p.expected,
                p.observed,
                match p.source {
                    Source::Published => "published",
                    Source::Computed => "computed",
                }
            ));
        }
        for (k, t) in &self.timings {
            out.push_str(&format!("  time {k}: {t:.3}s\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_is_stable_and_exit_codes_follow_statuses() {
        let mut r = Report::new("check");
        r.input("poly", "X0^2");
        r.verdict("status", "FrobeniusClassical", Status::Certified);
        assert_eq!(r.to_json(), r.clone().to_json());
        assert_eq!(r.exit_code(), 0);
        let v = r.verdict("sequence", "[0,1,2]", Status::Probable);
        v.detail.insert("precision".into(), 36.into());
        assert!(r.to_json().contains("\"status\": \"probable\""));
        assert_eq!(r.exit_code(), 2);
        r.provenance(Provenance {
            claim: "x".into(),
            source: Source::Computed,
            expected: "1".into(),
            observed: "2".into(),
            pass: false,
        });
        assert_eq!(r.exit_code(), 1);
    }
}
