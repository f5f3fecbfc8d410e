use std::path::Path;

use crate::error::{CliError, CliResult};

/// Measurement times and one named column per observable value.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TimeSeries {
    times: Vec<f64>,
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
}

impl TimeSeries {
    pub fn new(names: Vec<String>) -> Self {
        let columns = vec![Vec::new(); names.len()];
        Self {
            times: Vec::new(),
            names,
            columns,
        }
    }

    /// Appends one row; times must increase strictly.
    pub fn push(&mut self, t: f64, row: &[f64]) -> CliResult<()> {
        if row.len() != self.names.len() {
            return Err(CliError::Contract(format!(
                "row with {} values for {} columns",
                row.len(),
                self.names.len()
            )));
        }
        if let Some(&last) = self.times.last() {
            if !(t > last) {
                return Err(CliError::Contract(format!("time {t} does not follow {last}")));
            }
        }
        self.times.push(t);
        for (c, v) in self.columns.iter_mut().zip(row) {
            c.push(*v);
        }
        Ok(())
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.names.iter().position(|n| n == name).map(|i| self.columns[i].as_slice())
    }

    pub fn columns(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.names.iter().map(|n| n.as_str()).zip(self.columns.iter().map(|c| c.as_slice()))
    }

    /// Rows with `t ≤ t_max`.
    pub fn truncated(&self, t_max: f64) -> Self {
        let k = self.times.iter().take_while(|&&t| t <= t_max + 1e-9).count();
        Self {
            times: self.times[..k].to_vec(),
            names: self.names.clone(),
            columns: self.columns.iter().map(|c| c[..k].to_vec()).collect(),
        }
    }
}

/// Seventeen significant digits, so values round-trip exactly.
fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_csv<W: std::io::Write>(series: &TimeSeries, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["time".to_string()];
    header.extend(series.names.iter().cloned());
    w.write_record(&header)?;
    for (i, &t) in series.times.iter().enumerate() {
        let mut rec = vec![fmt(t)];
        rec.extend(series.columns.iter().map(|c| fmt(c[i])));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(series: &TimeSeries, path: &Path) -> CliResult<()> {
    let mut buf = Vec::new();
    write_csv(series, &mut buf).map_err(|e| CliError::Data {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    std::fs::write(path, buf).map_err(|e| CliError::io(path, e))
}

pub fn read_csv(path: &Path) -> CliResult<TimeSeries> {
    let data = |message: String| CliError::Data {
        path: path.to_path_buf(),
        message,
    };
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut r = csv::Reader::from_reader(file);
    let header = r.headers().map_err(|e| data(e.to_string()))?.clone();
    if header.get(0) != Some("time") {
        return Err(data("first column must be `time`".into()));
    }
    let mut series = TimeSeries::new(header.iter().skip(1).map(String::from).collect());
    for rec in r.records() {
        let rec = rec.map_err(|e| data(e.to_string()))?;
        let vals: Vec<f64> = rec
            .iter()
            .map(|s| s.trim().parse::<f64>().map_err(|e| data(format!("`{s}`: {e}"))))
            .collect::<CliResult<_>>()?;
        series.push(vals[0], &vals[1..]).map_err(|e| data(e.to_string()))?;
    }
    Ok(series)
}
