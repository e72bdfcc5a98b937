//! Per (class, algorithm) means and population standard deviations.

use serde::Serialize;

use super::run::{BenchRecord, SCHEMA_VERSION};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupSummary {
    pub class: u32,
    pub algorithm: String,
    /// Records that produced a ratio; only these enter the statistics.
    pub trials: usize,
    pub failures: usize,
    pub ratio_mean: Option<f64>,
    pub ratio_std: Option<f64>,
    pub time_mean: Option<f64>,
    pub time_std: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchSummary {
    pub schema_version: u32,
    pub stddev: &'static str,
    pub groups: Vec<GroupSummary>,
}

impl BenchSummary {
    pub fn group(&self, class: u32, algorithm: &str) -> Option<&GroupSummary> {
        self.groups.iter().find(|g| g.class == class && g.algorithm == algorithm)
    }
}

/// Rounds to six significant digits.
pub fn sig6(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.5e}").parse().unwrap()
}

/// Mean and population standard deviation, both rounded.
pub fn mean_std(xs: &[f64]) -> Option<(f64, f64)> {
    if xs.is_empty() {
        return None;
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    Some((sig6(mean), sig6(var.sqrt())))
}

/// Groups in order of first appearance.
pub fn summarize(records: &[BenchRecord]) -> BenchSummary {
    let mut keys: Vec<(u32, String)> = Vec::new();
    for r in records {
        let key = (r.class, r.algorithm.to_string());
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    let groups = keys
        .into_iter()
        .map(|(class, algorithm)| {
            let members: Vec<&BenchRecord> =
                records.iter().filter(|r| r.class == class && r.algorithm.to_string() == algorithm).collect();
            let done: Vec<&&BenchRecord> = members.iter().filter(|r| r.ratio.is_some()).collect();
            let ratios: Vec<f64> = done.iter().map(|r| r.ratio.unwrap()).collect();
            let times: Vec<f64> = done.iter().map(|r| r.time_s).collect();
            let ratio = mean_std(&ratios);
            let time = mean_std(&times);
            GroupSummary {
                class,
                algorithm,
                trials: done.len(),
                failures: members.len() - done.len(),
                ratio_mean: ratio.map(|r| r.0),
                ratio_std: ratio.map(|r| r.1),
                time_mean: time.map(|t| t.0),
                time_std: time.map(|t| t.1),
            }
        })
        .collect();
    BenchSummary { schema_version: SCHEMA_VERSION, stddev: "population", groups }
}
