//! Verification report types and their two renderings: a fixed-width text
//! form and a structured JSON form with identical fields.

use serde::Serialize;

/// Outcome of testing one claim at many points.
#[derive(Clone, Debug, Serialize)]
pub struct ClaimRecord {
    /// Stable claim identifier, e.g. `invariance-f.s2`.
    pub id: String,
    /// Human-readable statement of the exact identity being tested.
    pub anchor: String,
    pub points: usize,
    pub failures: usize,
    /// A reported discrepancy that is not counted as a failure (the stated
    /// bracket sign is the one known case).
    pub flagged: bool,
    pub note: Option<String>,
    pub first_counterexample: Option<String>,
    /// Timing only; excluded from reproducibility comparisons.
    pub wall_time_ms: f64,
}

impl ClaimRecord {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub seed: u64,
    pub points_per_identity: usize,
    pub coeff_bound: i64,
    pub records: Vec<ClaimRecord>,
    /// True iff every record has zero failures. Flagged records do not count.
    pub pass: bool,
    pub wall_time_ms: f64,
}

impl VerificationReport {
    pub fn new(
        suite: String,
        seed: u64,
        points_per_identity: usize,
        coeff_bound: i64,
        records: Vec<ClaimRecord>,
        wall_time_ms: f64,
    ) -> Self {
        let pass = records.iter().all(ClaimRecord::passed);
        VerificationReport {
            suite,
            seed,
            points_per_identity,
            coeff_bound,
            records,
            pass,
            wall_time_ms,
        }
    }

    pub fn flagged_count(&self) -> usize {
        self.records.iter().filter(|r| r.flagged).count()
    }

    /// One record per line; byte-reproducible for a fixed configuration apart
    /// from the trailing `time:` line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "suite: {}  seed: {}  points: {}  bound: {}\n",
            self.suite, self.seed, self.points_per_identity, self.coeff_bound
        ));
        for r in &self.records {
            let status = if !r.passed() {
                "FAIL"
            } else if r.flagged {
                "WARN"
            } else {
                "PASS"
            };
            out.push_str(&format!(
                "[{status}] {:<28} {} ({} points, {} failures)\n",
                r.id, r.anchor, r.points, r.failures
            ));
            if let Some(note) = &r.note {
                out.push_str(&format!("       note: {note}\n"));
            }
            if let Some(ce) = &r.first_counterexample {
                out.push_str(&format!("       first counterexample: {ce}\n"));
            }
        }
        let failures: usize = self.records.iter().map(|r| r.failures).sum();
        out.push_str(&format!(
            "verdict: {} ({} claims, {} failures, {} flagged)\n",
            if self.pass { "PASS" } else { "FAIL" },
            self.records.len(),
            failures,
            self.flagged_count()
        ));
        out.push_str(&format!("time: {:.1} ms\n", self.wall_time_ms));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    /// The text rendering with timing stripped, for reproducibility checks.
    pub fn reproducible_text(&self) -> String {
        self.to_text()
            .lines()
            .filter(|l| !l.starts_with("time:"))
            .collect::<Vec<_>>()
            .join("\n")
    }
}
