//! Verdict provenance and suite reports.

use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// How a verdict was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Follows from finitely many exact basis computations.
    Certified,
    /// Every element of a finite search space was evaluated.
    Exhaustive,
    /// Seeded random evaluation; evidence, not proof.
    Sampled,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Certified => "certified",
            Provenance::Exhaustive => "exhaustive",
            Provenance::Sampled => "sampled",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// `"pass"` or `"fail"`.
    pub verdict: String,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip)]
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, provenance: Provenance) -> Check {
        Check {
            name: name.into(),
            verdict: if passed { "pass" } else { "fail" }.to_string(),
            provenance,
            witness: None,
            detail: String::new(),
        }
    }

    pub fn with_witness(mut self, witness: Value) -> Check {
        self.witness = Some(witness);
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Check {
        self.detail = detail.into();
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    /// `"pass"` iff every check passed.
    pub overall: String,
    pub checks: Vec<Check>,
    pub seed: u64,
    pub version: String,
    #[serde(skip)]
    pub wall_time: Duration,
}

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

impl SuiteReport {
    pub fn new(suite: impl Into<String>, seed: u64) -> SuiteReport {
        SuiteReport {
            suite: suite.into(),
            overall: "pass".to_string(),
            checks: Vec::new(),
            seed,
            version: VERSION.to_string(),
            wall_time: Duration::ZERO,
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
        self.overall = if self.passed() { "pass" } else { "fail" }.to_string();
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {}: {}", self.suite, self.overall)?;
        for c in &self.checks {
            write!(f, "  [{}] {} ({})", c.verdict, c.name, c.provenance)?;
            if !c.detail.is_empty() {
                write!(f, ": {}", c.detail)?;
            }
            writeln!(f)?;
            if !c.passed() {
                if let Some(w) = &c.witness {
                    writeln!(f, "      witness: {w}")?;
                }
            }
        }
        Ok(())
    }
}
