//! Feature datasets, the CSV format they are stored in, and preprocessing.
//!
//! CSV layout: a header row, then one row per example with the label in
//! column 0 and the features in columns `1..=d`, comma separated.
//! Floats are written as shortest round-trip decimals.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LabelKind {
    Classification,
    Regression,
    Sign,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Labels {
    Class(Vec<usize>),
    Real(Vec<f64>),
    Sign(Vec<i8>),
}

impl Labels {
    pub fn len(&self) -> usize {
        match self {
            Labels::Class(v) => v.len(),
            Labels::Real(v) => v.len(),
            Labels::Sign(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn kind(&self) -> LabelKind {
        match self {
            Labels::Class(_) => LabelKind::Classification,
            Labels::Real(_) => LabelKind::Regression,
            Labels::Sign(_) => LabelKind::Sign,
        }
    }

    fn as_f64(&self, i: usize) -> f64 {
        match self {
            Labels::Class(v) => v[i] as f64,
            Labels::Real(v) => v[i],
            Labels::Sign(v) => v[i] as f64,
        }
    }
}

/// Row-major feature matrix with one label per row.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureDataset {
    pub features: Vec<f64>,
    pub n_rows: usize,
    pub dim: usize,
    pub labels: Labels,
    pub standardized: bool,
}

impl FeatureDataset {
    pub fn new(features: Vec<f64>, dim: usize, labels: Labels) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Schema("feature dimension must be positive".into()));
        }
        if features.len() % dim != 0 || features.len() / dim != labels.len() {
            return Err(Error::Schema(format!(
                "{} feature values do not form {} rows of width {dim}",
                features.len(),
                labels.len()
            )));
        }
        Ok(Self {
            n_rows: labels.len(),
            features,
            dim,
            labels,
            standardized: false,
        })
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.dim..(i + 1) * self.dim]
    }

    pub fn max_row_norm(&self) -> f64 {
        (0..self.n_rows)
            .map(|i| self.row(i).iter().map(|x| x * x).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }
}

pub fn load_csv(path: impl AsRef<Path>, kind: LabelKind) -> Result<FeatureDataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_csv(&text, kind)
}

pub fn parse_csv(text: &str, kind: LabelKind) -> Result<FeatureDataset> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| Error::Schema("empty file".into()))?;
    let width = header.split(',').count();
    if width < 2 {
        return Err(Error::Schema("need a label column and at least one feature column".into()));
    }
    let dim = width - 1;
    let mut features = Vec::new();
    let mut class = Vec::new();
    let mut real = Vec::new();
    let mut sign = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != width {
            return Err(Error::Schema(format!(
                "line {lineno}: expected {width} fields, found {}",
                fields.len()
            )));
        }
        let label = fields[0];
        match kind {
            LabelKind::Classification => {
                let v: usize = label.parse().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("class label {label:?} is not a nonnegative integer"),
                })?;
                class.push(v);
            }
            LabelKind::Regression => real.push(parse_f64(label, lineno)?),
            LabelKind::Sign => {
                let v = parse_f64(label, lineno)?;
                if v == 1.0 {
                    sign.push(1);
                } else if v == -1.0 {
                    sign.push(-1);
                } else {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("sign label {label:?} is not -1 or +1"),
                    });
                }
            }
        }
        for f in &fields[1..] {
            features.push(parse_f64(f, lineno)?);
        }
    }
    let labels = match kind {
        LabelKind::Classification => Labels::Class(class),
        LabelKind::Regression => Labels::Real(real),
        LabelKind::Sign => Labels::Sign(sign),
    };
    if labels.is_empty() {
        return Err(Error::Schema("no data rows".into()));
    }
    FeatureDataset::new(features, dim, labels)
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    let v: f64 = s.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("{s:?} is not a number"),
    })?;
    if !v.is_finite() {
        return Err(Error::Parse {
            line,
            msg: format!("{s:?} is not finite"),
        });
    }
    Ok(v)
}

/// Renders the dataset in the CSV layout. Rust's `{}` for `f64` is the
/// shortest string that parses back to the same value.
pub fn to_csv_string(data: &FeatureDataset) -> String {
    let mut out = String::from("label");
    for j in 0..data.dim {
        out.push_str(&format!(",x{j}"));
    }
    out.push('\n');
    for i in 0..data.n_rows {
        match &data.labels {
            Labels::Class(v) => out.push_str(&v[i].to_string()),
            Labels::Real(v) => out.push_str(&format!("{}", v[i])),
            Labels::Sign(v) => out.push_str(&v[i].to_string()),
        }
        for x in data.row(i) {
            out.push_str(&format!(",{x}"));
        }
        out.push('\n');
    }
    out
}

pub fn write_csv(data: &FeatureDataset, path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path.as_ref(), to_csv_string(data).as_bytes())
}

/// Writes to a sibling temporary file, then renames over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let file_name = path
        .file_name()
        .ok_or_else(|| Error::InvalidArgument(format!("{} has no file name", path.display())))?;
    static COUNTER: AtomicU64 = AtomicU64::new(0);
    let tag = COUNTER.fetch_add(1, Ordering::Relaxed);
    let tmp = path.with_file_name(format!(
        ".{}.{}-{tag}.tmp",
        file_name.to_string_lossy(),
        std::process::id()
    ));
    {
        let mut f = fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
        f.write_all(bytes).map_err(|e| Error::io(&tmp, e))?;
        f.sync_all().map_err(|e| Error::io(&tmp, e))?;
    }
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// Per-column zero mean and unit (population) variance, with a variance
/// floor of `1e-12`. With `normalize_target`, regression targets are
/// divided by their standard deviation.
pub fn standardize(data: &FeatureDataset, normalize_target: bool) -> Result<FeatureDataset> {
    let n = data.n_rows;
    if n < 2 {
        return Err(Error::InvalidArgument("standardization needs at least two rows".into()));
    }
    let d = data.dim;
    let mut out = data.clone();
    for j in 0..d {
        let mean = (0..n).map(|i| data.features[i * d + j]).sum::<f64>() / n as f64;
        let var = (0..n).map(|i| (data.features[i * d + j] - mean).powi(2)).sum::<f64>() / n as f64;
        let sd = var.max(1e-12).sqrt();
        for i in 0..n {
            out.features[i * d + j] = (data.features[i * d + j] - mean) / sd;
        }
    }
    if normalize_target {
        out.labels = scaled_target(&data.labels);
    }
    out.standardized = true;
    Ok(out)
}

/// Divides regression targets by their standard deviation and leaves the
/// features alone. Other label kinds pass through unchanged.
pub fn normalize_target(data: &FeatureDataset) -> Result<FeatureDataset> {
    if data.n_rows < 2 {
        return Err(Error::InvalidArgument("target normalization needs at least two rows".into()));
    }
    let mut out = data.clone();
    out.labels = scaled_target(&data.labels);
    Ok(out)
}

fn scaled_target(labels: &Labels) -> Labels {
    match labels {
        Labels::Real(y) => {
            let n = y.len() as f64;
            let mean = y.iter().sum::<f64>() / n;
            let var = y.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
            let sd = var.max(1e-12).sqrt();
            Labels::Real(y.iter().map(|v| v / sd).collect())
        }
        other => other.clone(),
    }
}

/// Least-squares fit `min sum (a.x + b - y)^2` through the centered normal
/// equations with a `1e-10` ridge on `a`.
pub fn least_squares_init(data: &FeatureDataset) -> Result<(Vec<f64>, f64)> {
    let n = data.n_rows;
    let d = data.dim;
    if !matches!(data.labels, Labels::Real(_)) {
        return Err(Error::Data("least squares needs regression targets".into()));
    }
    let y: Vec<f64> = (0..n).map(|i| data.labels.as_f64(i)).collect();
    let xbar: Vec<f64> = (0..d)
        .map(|j| (0..n).map(|i| data.features[i * d + j]).sum::<f64>() / n as f64)
        .collect();
    let ybar = y.iter().sum::<f64>() / n as f64;

    let mut gram = vec![0.0; d * d];
    let mut rhs = vec![0.0; d];
    let mut xc = vec![0.0; d];
    for i in 0..n {
        for j in 0..d {
            xc[j] = data.features[i * d + j] - xbar[j];
        }
        let yc = y[i] - ybar;
        for j in 0..d {
            rhs[j] += xc[j] * yc;
            for k in 0..=j {
                gram[j * d + k] += xc[j] * xc[k];
            }
        }
    }
    for j in 0..d {
        for k in 0..j {
            gram[k * d + j] = gram[j * d + k];
        }
        gram[j * d + j] += 1e-10;
    }
    let chol = cholesky(&gram, d)?;
    let mut a = chol_solve(&chol, d, &rhs);
    // one round of iterative refinement
    let mut resid = rhs.clone();
    for j in 0..d {
        resid[j] -= (0..d).map(|k| gram[j * d + k] * a[k]).sum::<f64>();
    }
    let corr = chol_solve(&chol, d, &resid);
    for j in 0..d {
        a[j] += corr[j];
    }
    let b = ybar - a.iter().zip(&xbar).map(|(u, v)| u * v).sum::<f64>();
    if !b.is_finite() || a.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("least-squares solution is not finite".into()));
    }
    Ok((a, b))
}

fn cholesky(m: &[f64], d: usize) -> Result<Vec<f64>> {
    let mut l = vec![0.0; d * d];
    for j in 0..d {
        let mut diag = m[j * d + j];
        for k in 0..j {
            diag -= l[j * d + k] * l[j * d + k];
        }
        if !(diag > 0.0) {
            return Err(Error::Numerical("normal equations are singular".into()));
        }
        let ljj = diag.sqrt();
        l[j * d + j] = ljj;
        for i in (j + 1)..d {
            let mut v = m[i * d + j];
            for k in 0..j {
                v -= l[i * d + k] * l[j * d + k];
            }
            l[i * d + j] = v / ljj;
        }
    }
    Ok(l)
}

fn chol_solve(l: &[f64], d: usize, b: &[f64]) -> Vec<f64> {
    let mut z = vec![0.0; d];
    for i in 0..d {
        let mut v = b[i];
        for k in 0..i {
            v -= l[i * d + k] * z[k];
        }
        z[i] = v / l[i * d + i];
    }
    let mut x = vec![0.0; d];
    for i in (0..d).rev() {
        let mut v = z[i];
        for k in (i + 1)..d {
            v -= l[k * d + i] * x[k];
        }
        x[i] = v / l[i * d + i];
    }
    x
}
