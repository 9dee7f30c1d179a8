//! Per-run metric log.

use std::collections::HashMap;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct MetricRow {
    pub iteration: u64,
    /// Excluded from every equality and serialization path.
    pub wall_clock_seconds: f64,
    pub metric: String,
    pub value: f64,
}

#[derive(Clone, Debug, Default)]
pub struct RunRecord {
    pub seed: u64,
    pub config_id: String,
    pub rows: Vec<MetricRow>,
    last_iteration: HashMap<String, u64>,
}

impl RunRecord {
    pub fn new(config_id: impl Into<String>, seed: u64) -> Self {
        Self {
            seed,
            config_id: config_id.into(),
            rows: Vec::new(),
            last_iteration: HashMap::new(),
        }
    }

    /// Appends a row; iterations must be strictly increasing per metric.
    pub fn push(&mut self, iteration: u64, wall_clock_seconds: f64, metric: &str, value: f64) -> Result<()> {
        if let Some(&prev) = self.last_iteration.get(metric) {
            if iteration <= prev {
                return Err(Error::InvalidArgument(format!(
                    "metric {metric}: iteration {iteration} does not follow {prev}"
                )));
            }
        }
        self.last_iteration.insert(metric.to_string(), iteration);
        self.rows.push(MetricRow {
            iteration,
            wall_clock_seconds,
            metric: metric.to_string(),
            value,
        });
        Ok(())
    }

    pub fn series(&self, metric: &str) -> Vec<(u64, f64)> {
        self.rows
            .iter()
            .filter(|r| r.metric == metric)
            .map(|r| (r.iteration, r.value))
            .collect()
    }

    pub fn last(&self, metric: &str) -> Option<f64> {
        self.rows.iter().rev().find(|r| r.metric == metric).map(|r| r.value)
    }

    /// Rows without the wall-clock column, for replay comparisons.
    pub fn deterministic_rows(&self) -> Vec<(u64, &str, u64)> {
        self.rows
            .iter()
            .map(|r| (r.iteration, r.metric.as_str(), r.value.to_bits()))
            .collect()
    }

    pub fn metric_names(&self) -> Vec<String> {
        let mut names: Vec<String> = Vec::new();
        for r in &self.rows {
            if !names.contains(&r.metric) {
                names.push(r.metric.clone());
            }
        }
        names
    }
}
