//! Metric files: one CSV per run plus a cross-seed summary.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::dataio::write_atomic;
use crate::error::{Error, Result};
use crate::record::RunRecord;

/// Keeps `[A-Za-z0-9._-]`, maps everything else to `_`.
pub fn sanitize(name: &str) -> String {
    let s: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-') { c } else { '_' })
        .collect();
    if s.is_empty() || s.chars().all(|c| c == '.') {
        "_".into()
    } else {
        s
    }
}

/// Per-run CSV contents: `iteration,metric,value`, values printed in
/// shortest round-trip form.
pub fn run_csv(record: &RunRecord) -> String {
    let mut out = String::from("iteration,metric,value\n");
    for r in &record.rows {
        let _ = writeln!(out, "{},{},{:?}", r.iteration, r.metric, r.value);
    }
    out
}

/// One summary row: across-seed mean and sample standard deviation.
#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub config_id: String,
    pub metric: String,
    pub iteration: u64,
    pub mean: f64,
    pub std: f64,
    pub n: usize,
}

/// Groups rows by `(config_id, metric, iteration)`. The standard deviation
/// uses `n - 1` and is zero for a single run.
pub fn summarize(records: &[RunRecord]) -> Vec<SummaryRow> {
    let mut groups: BTreeMap<(String, String, u64), Vec<f64>> = BTreeMap::new();
    for rec in records {
        for r in &rec.rows {
            groups
                .entry((rec.config_id.clone(), r.metric.clone(), r.iteration))
                .or_default()
                .push(r.value);
        }
    }
    groups
        .into_iter()
        .map(|((config_id, metric, iteration), v)| {
            let n = v.len();
            let mean = v.iter().sum::<f64>() / n as f64;
            let std = if n > 1 {
                (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
            } else {
                0.0
            };
            SummaryRow {
                config_id,
                metric,
                iteration,
                mean,
                std,
                n,
            }
        })
        .collect()
}

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from("config_id,metric,iteration,mean,std,n\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{:?},{:?},{}",
            r.config_id, r.metric, r.iteration, r.mean, r.std, r.n
        );
    }
    out
}

/// Writes `<config_id>_<seed>.csv` for every record and `summary.csv`,
/// each atomically. Returns the paths written.
pub fn emit_metrics(records: &[RunRecord], dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut seen = std::collections::HashSet::new();
    let mut paths = Vec::with_capacity(records.len() + 1);
    for rec in records {
        let name = format!("{}_{}.csv", sanitize(&rec.config_id), rec.seed);
        if !seen.insert(name.clone()) {
            return Err(Error::InvalidArgument(format!("two runs map to the same file {name}")));
        }
        let path = dir.join(name);
        write_atomic(&path, run_csv(rec).as_bytes())?;
        paths.push(path);
    }
    let path = dir.join("summary.csv");
    write_atomic(&path, summary_csv(&summarize(records)).as_bytes())?;
    paths.push(path);
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sanitize_strips_separators() {
        assert_eq!(sanitize("scent/log a=3"), "scent_log_a_3");
        assert_eq!(sanitize(".."), "_");
    }

    #[test]
    fn summary_statistics() {
        let mut a = RunRecord::new("m", 0);
        a.push(0, 0.0, "x", 1.0).unwrap();
        let mut b = RunRecord::new("m", 1);
        b.push(0, 0.0, "x", 3.0).unwrap();
        let s = summarize(&[a, b]);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].mean, 2.0);
        assert!((s[0].std - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(s[0].n, 2);
    }
}
