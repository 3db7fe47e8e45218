use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// One refinement level of a convergence study.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub h: f64,
    #[serde(rename = "Dofs")]
    pub dofs: usize,
    #[serde(rename = "Error")]
    pub error: f64,
    /// Assembly plus solve, in seconds.
    #[serde(rename = "Time")]
    pub time: f64,
    /// Empty for the coarsest level.
    pub rate: Option<f64>,
    #[serde(rename = "AssemblyTime")]
    pub assembly_time: f64,
    #[serde(rename = "SolveTime")]
    pub solve_time: f64,
}

/// `log(e / e') / log(h / h')`; `None` when either error is zero or the
/// inputs are not positive.
pub fn convergence_rate(err: f64, err_next: f64, h: f64, h_next: f64) -> Option<f64> {
    if !(err > 0.0 && err_next > 0.0 && h > 0.0 && h_next > 0.0) || h == h_next {
        return None;
    }
    let r = (err / err_next).ln() / (h / h_next).ln();
    r.is_finite().then_some(r)
}

/// Sorts rows by decreasing `h` and fills in the rate column.
pub fn fill_rates(rows: &mut [ExperimentRow]) {
    rows.sort_by(|a, b| b.h.total_cmp(&a.h));
    for i in 0..rows.len() {
        rows[i].rate = if i == 0 {
            None
        } else {
            convergence_rate(rows[i - 1].error, rows[i].error, rows[i - 1].h, rows[i].h)
        };
    }
}

pub fn write_rows<W: Write>(w: W, rows: &[ExperimentRow]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in rows {
        wr.serialize(r)?;
    }
    wr.flush()?;
    Ok(())
}

pub fn read_rows<R: Read>(r: R) -> Result<Vec<ExperimentRow>> {
    let mut rd = csv::Reader::from_reader(r);
    let mut out = Vec::new();
    for row in rd.deserialize() {
        out.push(row?);
    }
    Ok(out)
}

pub fn write_csv(path: &Path, rows: &[ExperimentRow]) -> Result<()> {
    write_rows(std::fs::File::create(path)?, rows)
}

pub fn read_csv(path: &Path) -> Result<Vec<ExperimentRow>> {
    read_rows(std::fs::File::open(path)?)
}

/// Fixed-width text table of rows.
pub fn format_rows(rows: &[ExperimentRow]) -> String {
    let mut s = format!(
        "{:>10} {:>10} {:>12} {:>6} {:>10} {:>10} {:>10}\n",
        "h", "Dofs", "Error", "rate", "Assembly", "Solve", "Time"
    );
    for r in rows {
        let rate = r.rate.map_or("-".to_string(), |v| format!("{v:.2}"));
        s += &format!(
            "{:>10.6} {:>10} {:>12.4e} {:>6} {:>10.4} {:>10.4} {:>10.4}\n",
            r.h, r.dofs, r.error, rate, r.assembly_time, r.solve_time, r.time
        );
    }
    s
}

/// Groups ascending values whose consecutive gaps are at most `tol`.
/// Returns `(first value of the cluster, multiplicity)`.
pub fn cluster(values: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for &v in values {
        match out.last_mut() {
            Some(c) if v - last <= tol => c.1 += 1,
            _ => out.push((v, 1)),
        }
        last = v;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_examples() {
        let r = convergence_rate(2.001092 - 2.0, 2.000066 - 2.0, 0.25, 0.125).unwrap();
        assert!((r - 4.05).abs() < 0.01, "{r}");
        let r = convergence_rate(3.001536 - 3.0, 3.000098 - 3.0, 0.25, 0.125).unwrap();
        assert!((r - 3.97).abs() < 0.01, "{r}");
        assert_eq!(convergence_rate(0.1, 0.1, 0.5, 0.25), Some(0.0));
        assert_eq!(convergence_rate(0.0, 0.1, 0.5, 0.25), None);
    }

    #[test]
    fn clusters() {
        let c = cluster(&[1.0, 1.0 + 1e-7, 2.0, 3.0, 3.0], 5e-7);
        assert_eq!(c, vec![(1.0, 2), (2.0, 1), (3.0, 2)]);
    }

    #[test]
    fn csv_round_trip() {
        let mut rows = vec![
            ExperimentRow {
                h: 0.125,
                dofs: 81,
                error: 1.234e-5,
                time: 0.3,
                rate: None,
                assembly_time: 0.1,
                solve_time: 0.2,
            },
            ExperimentRow {
                h: 0.25,
                dofs: 25,
                error: 2.0e-4,
                time: 0.01,
                rate: None,
                assembly_time: 0.004,
                solve_time: 0.006,
            },
        ];
        fill_rates(&mut rows);
        assert_eq!(rows[0].h, 0.25);
        assert!(rows[1].rate.is_some());
        let mut buf = Vec::new();
        write_rows(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("h,Dofs,Error,Time,rate"));
        assert_eq!(read_rows(&buf[..]).unwrap(), rows);
    }
}
