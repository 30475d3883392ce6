use std::collections::BTreeMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::plan::{BenchPlan, Op, Scheme};
use crate::runner::BenchRecord;
use crate::BenchError;

/// Statistics for one (scheme, op, level, N) cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub scheme: Scheme,
    pub op: Op,
    pub sec_level: u16,
    pub n_attrs: usize,
    pub mean_ns: f64,
    /// Sample (n − 1) standard deviation; 0 for a single record.
    pub std_ns: f64,
    pub min_ns: u64,
    pub max_ns: u64,
}

type CellKey = (Scheme, Op, u16, usize);

fn key(r: &BenchRecord) -> CellKey {
    (r.scheme, r.op, r.sec_level, r.n_attrs)
}

fn stats(cell: CellKey, durations: &[u64]) -> CellSummary {
    let n = durations.len();
    let sum: u128 = durations.iter().map(|&d| u128::from(d)).sum();
    let mean = sum as f64 / n as f64;
    let var = if n > 1 {
        durations.iter().map(|&d| (d as f64 - mean).powi(2)).sum::<f64>() / (n - 1) as f64
    } else {
        0.0
    };
    CellSummary {
        scheme: cell.0,
        op: cell.1,
        sec_level: cell.2,
        n_attrs: cell.3,
        mean_ns: mean,
        std_ns: var.sqrt(),
        min_ns: *durations.iter().min().expect("nonempty cell"),
        max_ns: *durations.iter().max().expect("nonempty cell"),
    }
}

/// Per-cell statistics over whatever cells `records` contain, sorted by cell.
pub fn summarize(records: &[BenchRecord]) -> Vec<CellSummary> {
    let mut cells: BTreeMap<CellKey, Vec<u64>> = BTreeMap::new();
    for r in records {
        cells.entry(key(r)).or_default().push(r.duration_ns);
    }
    cells.into_iter().map(|(k, d)| stats(k, &d)).collect()
}

/// As [`summarize`], but every cell of `plan` must have at least one record.
pub fn summarize_plan(plan: &BenchPlan, records: &[BenchRecord]) -> Result<Vec<CellSummary>, BenchError> {
    let summaries = summarize(records);
    for &scheme in &plan.schemes {
        for &op in &plan.ops {
            for level in &plan.levels {
                for &n in &plan.attr_counts {
                    let cell = (scheme, op, level.bits(), n);
                    if !summaries.iter().any(|s| (s.scheme, s.op, s.sec_level, s.n_attrs) == cell) {
                        return Err(BenchError::EmptyCell(format!("{scheme}/{op}/{}/{n}", level.bits())));
                    }
                }
            }
        }
    }
    Ok(summaries)
}

/// Writes `records` sorted by (scheme, op, sec_level, n_attrs, rep).
pub fn emit_records(records: &[BenchRecord], path: &Path) -> Result<(), BenchError> {
    let mut sorted = records.to_vec();
    sorted.sort();
    write_rows(&sorted, &["scheme", "op", "sec_level", "n_attrs", "rep", "duration_ns", "size_bytes"], path)
}

/// Writes `summaries` sorted by (scheme, op, sec_level, n_attrs).
pub fn emit_summaries(summaries: &[CellSummary], path: &Path) -> Result<(), BenchError> {
    let mut sorted = summaries.to_vec();
    sorted.sort_by_key(|s| (s.scheme, s.op, s.sec_level, s.n_attrs));
    write_rows(
        &sorted,
        &["scheme", "op", "sec_level", "n_attrs", "mean_ns", "std_ns", "min_ns", "max_ns"],
        path,
    )
}

fn write_rows<T: Serialize>(rows: &[T], header: &[&str], path: &Path) -> Result<(), BenchError> {
    let csv_err = |source| BenchError::Csv {
        path: path.to_path_buf(),
        source,
    };
    // The header is written explicitly so that an empty file still has one.
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(csv_err)?;
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.serialize(row).map_err(csv_err)?;
    }
    w.flush().map_err(|source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_rows<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, BenchError> {
    let csv_err = |source| BenchError::Csv {
        path: path.to_path_buf(),
        source,
    };
    csv::Reader::from_path(path)
        .map_err(csv_err)?
        .deserialize()
        .collect::<Result<_, _>>()
        .map_err(csv_err)
}

pub fn read_records(path: &Path) -> Result<Vec<BenchRecord>, BenchError> {
    read_rows(path)
}

pub fn read_summaries(path: &Path) -> Result<Vec<CellSummary>, BenchError> {
    read_rows(path)
}

/// Ordinary least squares `y = a + b·x`; returns `(a, b, r²)`.
pub fn linear_fit(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    let syy: f64 = points.iter().map(|(_, y)| (y - my).powi(2)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (a, b, r2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(op: Op, n: usize, rep: usize, d: u64) -> BenchRecord {
        BenchRecord {
            scheme: Scheme::Cp,
            op,
            sec_level: 80,
            n_attrs: n,
            rep,
            duration_ns: d,
            size_bytes: 10 * n,
        }
    }

    #[test]
    fn hand_computed_statistics() {
        let s = summarize(&[rec(Op::Encrypt, 1, 0, 5), rec(Op::Encrypt, 1, 1, 5), rec(Op::Encrypt, 1, 2, 5)]);
        assert_eq!((s[0].mean_ns, s[0].std_ns, s[0].min_ns, s[0].max_ns), (5.0, 0.0, 5, 5));
        let s = summarize(&[rec(Op::Encrypt, 1, 0, 1), rec(Op::Encrypt, 1, 1, 3)]);
        assert_eq!(s[0].mean_ns, 2.0);
        assert!((s[0].std_ns - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(summarize(&[rec(Op::Setup, 2, 0, 7)])[0].std_ns, 0.0);
    }

    #[test]
    fn missing_cells_are_reported() {
        let plan = BenchPlan {
            schemes: vec![Scheme::Cp],
            ops: vec![Op::Encrypt],
            attr_counts: vec![1, 2],
            ..Default::default()
        };
        let err = summarize_plan(&plan, &[rec(Op::Encrypt, 1, 0, 4)]).unwrap_err();
        assert!(matches!(err, BenchError::EmptyCell(_)));
    }

    #[test]
    fn csv_round_trip_and_ordering() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("raw.csv");
        emit_records(&[], &path).unwrap();
        assert_eq!(
            std::fs::read_to_string(&path).unwrap(),
            "scheme,op,sec_level,n_attrs,rep,duration_ns,size_bytes\n"
        );

        let records = vec![rec(Op::Setup, 2, 1, 9), rec(Op::Decrypt, 10, 0, 3), rec(Op::Setup, 2, 0, 8)];
        emit_records(&records, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[1], "cp,decrypt,80,10,0,3,100");
        assert_eq!(lines[2], "cp,setup,80,2,0,8,20");
        let mut expected = records.clone();
        expected.sort();
        assert_eq!(read_records(&path).unwrap(), expected);

        let spath = dir.path().join("summary.csv");
        let summaries = summarize(&records);
        emit_summaries(&summaries, &spath).unwrap();
        assert!(std::fs::read_to_string(&spath)
            .unwrap()
            .starts_with("scheme,op,sec_level,n_attrs,mean_ns,std_ns,min_ns,max_ns\n"));
        assert_eq!(read_summaries(&spath).unwrap(), summaries);
    }

    #[test]
    fn fit_of_a_line() {
        let pts: Vec<(f64, f64)> = (1..=30).map(|x| (x as f64, 3.0 + 2.0 * x as f64)).collect();
        let (a, b, r2) = linear_fit(&pts);
        assert!((a - 3.0).abs() < 1e-9 && (b - 2.0).abs() < 1e-9 && (r2 - 1.0).abs() < 1e-12);
    }
}
