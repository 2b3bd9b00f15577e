//! Structured verdicts for swept families of congruence instances.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    /// The instance does not satisfy the family's side conditions.
    NotApplicable,
    /// The `p(n)` argument exceeds the configured ceiling.
    OutOfBudget,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::NotApplicable => "not-applicable",
            Verdict::OutOfBudget => "out-of-budget",
        })
    }
}

/// One checked instance: its parameters (decimal strings), verdict and an
/// optional human-readable detail such as the residue found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Instance {
    pub params: BTreeMap<String, String>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Instance {
    pub fn new(verdict: Verdict) -> Self {
        Instance {
            params: BTreeMap::new(),
            verdict,
            detail: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub holds: usize,
    pub fails: usize,
    pub not_applicable: usize,
    pub out_of_budget: usize,
}

impl Summary {
    fn tally<'a>(instances: impl Iterator<Item = &'a Instance>) -> Self {
        let mut s = Summary::default();
        for inst in instances {
            s.total += 1;
            match inst.verdict {
                Verdict::Holds => s.holds += 1,
                Verdict::Fails => s.fails += 1,
                Verdict::NotApplicable => s.not_applicable += 1,
                Verdict::OutOfBudget => s.out_of_budget += 1,
            }
        }
        s
    }
}

/// Verdicts for a family of instances. Results are empirical and bounded:
/// a report only speaks for the instances it lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CongruenceReport {
    family: String,
    description: String,
    /// Failures are data for this family rather than counterexamples.
    failures_expected: bool,
    instances: Vec<Instance>,
    summary: Summary,
}

impl CongruenceReport {
    pub fn new(family: impl Into<String>, description: impl Into<String>) -> Self {
        CongruenceReport {
            family: family.into(),
            description: description.into(),
            failures_expected: false,
            instances: Vec::new(),
            summary: Summary::default(),
        }
    }

    pub fn expecting_failures(mut self, expected: bool) -> Self {
        self.failures_expected = expected;
        self
    }

    pub fn push(&mut self, instance: Instance) {
        self.instances.push(instance);
        self.summary = Summary::tally(self.instances.iter());
    }

    pub fn extend(&mut self, instances: impl IntoIterator<Item = Instance>) {
        self.instances.extend(instances);
        self.summary = Summary::tally(self.instances.iter());
    }

    pub fn family(&self) -> &str {
        &self.family
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn failures_expected(&self) -> bool {
        self.failures_expected
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn summary(&self) -> Summary {
        self.summary
    }

    /// Failures that count against the family.
    pub fn unexpected_failures(&self) -> usize {
        if self.failures_expected {
            0
        } else {
            self.summary.fails
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Instance> {
        self.instances
            .iter()
            .filter(|i| i.verdict == Verdict::Fails)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_tracks_instances() {
        let mut r = CongruenceReport::new("demo", "demo family");
        r.push(Instance::new(Verdict::Holds).param("n", 1));
        r.extend([
            Instance::new(Verdict::Fails),
            Instance::new(Verdict::NotApplicable),
            Instance::new(Verdict::OutOfBudget),
            Instance::new(Verdict::Holds),
        ]);
        let s = r.summary();
        assert_eq!(
            (s.total, s.holds, s.fails, s.not_applicable, s.out_of_budget),
            (5, 2, 1, 1, 1)
        );
        assert_eq!(r.unexpected_failures(), 1);
        assert_eq!(r.clone().expecting_failures(true).unexpected_failures(), 0);
        assert_eq!(r.failures().count(), 1);
    }

    #[test]
    fn verdict_names() {
        assert_eq!(Verdict::NotApplicable.to_string(), "not-applicable");
        assert_eq!(Verdict::OutOfBudget.to_string(), "out-of-budget");
    }
}
