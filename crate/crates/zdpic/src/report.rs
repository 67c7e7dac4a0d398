//! Machine-readable check reports and seed derivation.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub const REPORT_FORMAT: &str = "zdpic.report";
pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Metrics {
    pub max_violation: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slack_min: Option<f64>,
    pub counts: BTreeMap<String, u64>,
    pub values: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckReport {
    pub check_id: String,
    /// What the check establishes, in one line.
    pub statement: String,
    pub params: Params,
    pub metrics: Metrics,
    pub pass: bool,
}

impl CheckReport {
    pub fn new(check_id: &str, statement: &str, params: Params) -> Self {
        CheckReport {
            check_id: check_id.into(),
            statement: statement.into(),
            params,
            metrics: Metrics::default(),
            pass: false,
        }
    }

    /// Passes when the violation is within the recorded tolerance.
    pub fn violation(mut self, v: f64) -> Self {
        self.metrics.max_violation = sanitize(v);
        self.pass = v.is_finite() && v <= self.params.tol;
        self
    }

    pub fn slack(mut self, s: f64) -> Self {
        self.metrics.slack_min = Some(sanitize(s));
        self
    }

    pub fn count(mut self, key: &str, n: u64) -> Self {
        self.metrics.counts.insert(key.into(), n);
        self
    }

    pub fn value(mut self, key: &str, v: f64) -> Self {
        self.metrics.values.insert(key.into(), sanitize(v));
        self
    }

    pub fn with_pass(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }

    fn sort_key(&self) -> (String, Option<u32>, Option<u64>, Option<u64>) {
        let bits = |x: Option<f64>| x.map(f64::to_bits);
        (self.check_id.clone(), self.params.d, bits(self.params.p), bits(self.params.beta))
    }

    pub fn summary_line(&self) -> String {
        let mut s = format!("{} {}", if self.pass { "PASS" } else { "FAIL" }, self.check_id);
        if let Some(d) = self.params.d {
            s += &format!(" d={d}");
        }
        if let Some(p) = self.params.p {
            s += &format!(" p={p}");
        }
        if let Some(b) = self.params.beta {
            s += &format!(" beta={b}");
        }
        s += &format!(" maxViolation={:.3e} tol={:.1e}", self.metrics.max_violation, self.params.tol);
        if let Some(sl) = self.metrics.slack_min {
            s += &format!(" slackMin={sl:.3e}");
        }
        s
    }
}

// JSON has no NaN or infinity
fn sanitize(x: f64) -> f64 {
    if x.is_nan() {
        f64::MAX
    } else {
        x.clamp(f64::MIN, f64::MAX)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReportFile {
    pub format: String,
    pub version: u32,
    pub command: String,
    pub seed: u64,
    pub pass: bool,
    pub reports: Vec<CheckReport>,
}

impl ReportFile {
    /// Reports are sorted by check id and parameters, so assembly order does
    /// not leak into the output.
    pub fn new(command: &str, seed: u64, mut reports: Vec<CheckReport>) -> Self {
        reports.sort_by_key(|r| r.sort_key());
        ReportFile {
            format: REPORT_FORMAT.into(),
            version: REPORT_VERSION,
            command: command.into(),
            seed,
            pass: reports.iter().all(|r| r.pass),
            reports,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    /// One compact report object per line.
    pub fn to_json_lines(&self) -> String {
        self.reports.iter().map(|r| serde_json::to_string(r).expect("reports serialize") + "\n").collect()
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the sample stream `(label, index)` under a master seed:
/// FNV-1a of the label, then SplitMix64 over master, label hash and index.
/// Streams never depend on how many other streams were drawn.
pub fn split_seed(master: u64, label: &str, index: u64) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h = (h ^ b as u64).wrapping_mul(0x0100_0000_01b3);
    }
    splitmix64(splitmix64(splitmix64(master) ^ h) ^ index)
}

pub fn stream(master: u64, label: &str, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(split_seed(master, label, index))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_is_stable_and_spread() {
        assert_eq!(split_seed(7, "qfa.hy", 3), split_seed(7, "qfa.hy", 3));
        assert_ne!(split_seed(7, "qfa.hy", 3), split_seed(7, "qfa.hy", 4));
        assert_ne!(split_seed(7, "qfa.hy", 3), split_seed(7, "qfa.schur", 3));
        assert_ne!(split_seed(7, "qfa.hy", 3), split_seed(8, "qfa.hy", 3));
    }

    #[test]
    fn reports_sort_and_round_trip() {
        let p = |d| Params { d: Some(d), seed: 1, samples: 2, tol: 1e-9, ..Params::default() };
        let a = CheckReport::new("b.check", "second", p(3)).violation(0.0);
        let b = CheckReport::new("a.check", "first", p(2)).violation(1.0);
        let f = ReportFile::new("all", 1, vec![a, b]);
        assert_eq!(f.reports[0].check_id, "a.check");
        assert!(!f.pass);
        let back: ReportFile = serde_json::from_str(&f.to_json()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn non_finite_metrics_fail() {
        let r = CheckReport::new("x", "", Params { tol: 1e-9, ..Params::default() }).violation(f64::NAN);
        assert!(!r.pass);
        assert!(serde_json::to_string(&r).is_ok());
    }
}
