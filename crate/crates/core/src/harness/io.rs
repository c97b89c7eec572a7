use super::HarnessError;
use crate::dla2d::{Cluster2D, DlaSnapshot, Point};
use crate::lattice1d::{PeriodObservables, StepKind, StepRecord, Trace, TRACE_HEADER};
use std::io::{BufRead, BufWriter, Write};
use std::path::Path;

pub fn write_trace_csv(path: &Path, trace: &Trace) -> Result<(), HarnessError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let mut f = BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "{TRACE_HEADER}")?;
    for row in &trace.rows {
        writeln!(f, "{}", row.to_csv_row())?;
    }
    Ok(())
}

pub fn read_trace_csv(path: &Path, k: u32) -> Result<Trace, HarnessError> {
    let file = std::fs::File::open(path)?;
    let mut lines = std::io::BufReader::new(file).lines();
    let header = lines.next().transpose()?.unwrap_or_default();
    let expect: Vec<&str> = TRACE_HEADER.split(',').collect();
    let got: Vec<&str> = header.split(',').collect();
    for (i, e) in expect.iter().enumerate() {
        let found = got.get(i).copied().unwrap_or("");
        if *e != found {
            return Err(HarnessError::TraceHeader {
                column: i,
                expected: e.to_string(),
                found: found.to_string(),
            });
        }
    }
    let mut rows = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut it = line.split(',');
        let mut next = |what| {
            it.next()
                .and_then(|s| s.parse::<i64>().ok())
                .ok_or(HarnessError::Malformed { what, line: lineno + 2 })
        };
        rows.push(PeriodObservables {
            period: next("period")? as u64,
            size: next("size")? as u64,
            l: next("L")?,
            g: next("G")? as u32,
            g2: next("G2")? as u32,
            li: next("LI")?,
            gi: next("GI")? as u32,
            g2i: next("G2I")? as u32,
            c: next("C")? as u32,
            c2: next("C2")? as u32,
            ci: next("CI")? as u32,
            ci2: next("CI2")? as u32,
            r_alpha: next("Ralpha")? as u32,
            r_delta: next("Rdelta")? as u32,
        });
    }
    Ok(Trace { k, rows, steps: None })
}

/// Per-step JSONL: one object per elementary step with the external fields
/// `n`, `i`, `kind` and `site`.
pub fn write_steps_jsonl(path: &Path, steps: &[StepRecord]) -> Result<(), HarnessError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let mut f = BufWriter::new(std::fs::File::create(path)?);
    for s in steps {
        let kind = match s.kind {
            StepKind::Add => "add",
            StepKind::Del => "del",
        };
        writeln!(f, r#"{{"n":{},"i":{},"kind":"{}","site":{}}}"#, s.n, s.i, kind, s.site)?;
    }
    Ok(())
}

pub fn read_steps_jsonl(path: &Path) -> Result<Vec<StepRecord>, HarnessError> {
    #[derive(serde::Deserialize)]
    struct Bare {
        n: u64,
        i: u32,
        kind: String,
        site: i64,
    }
    let file = std::fs::File::open(path)?;
    let mut out = Vec::new();
    for (lineno, line) in std::io::BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let bare: Bare = serde_json::from_str(&line)
            .map_err(|_| HarnessError::Malformed { what: "step record", line: lineno + 1 })?;
        out.push(StepRecord {
            n: bare.n,
            i: bare.i,
            kind: if bare.kind == "add" { StepKind::Add } else { StepKind::Del },
            site: bare.site,
            proximity: None,
        });
    }
    Ok(out)
}

pub fn write_dla_trace_csv(path: &Path, snaps: &[DlaSnapshot]) -> Result<(), HarnessError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let mut f = BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "n,size,holes,radius")?;
    for s in snaps {
        writeln!(f, "{},{},{},{}", s.n, s.size, s.holes, s.radius)?;
    }
    Ok(())
}

/// Cluster snapshot, bit-exact: points sorted lexicographically.
pub fn write_cluster_json(path: &Path, cluster: &Cluster2D) -> Result<(), HarnessError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let pts = cluster.sorted_points();
    let mut f = BufWriter::new(std::fs::File::create(path)?);
    write!(f, r#"{{"points":["#)?;
    for (i, p) in pts.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "[{},{}]", p.0, p.1)?;
    }
    writeln!(f, "]}}")?;
    Ok(())
}

pub fn read_cluster_json(path: &Path) -> Result<Cluster2D, HarnessError> {
    #[derive(serde::Deserialize)]
    struct Snapshot {
        points: Vec<(i32, i32)>,
    }
    let text = std::fs::read_to_string(path)?;
    let snap: Snapshot = serde_json::from_str(&text)?;
    let pts: Vec<Point> = snap.points;
    Ok(Cluster2D::from_points_any(&pts)?)
}

/// Age experiment rows: n, rep, O_n, scaled = (n - O_n)/sqrt(n).
pub fn write_ages_csv(path: &Path, n: u64, oldest: &[(u64, u64)]) -> Result<(), HarnessError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let mut f = BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "n,rep,O_n,scaled")?;
    for &(rep, o) in oldest {
        let scaled = (n as f64 - o as f64) / (n as f64).sqrt();
        writeln!(f, "{n},{rep},{o},{scaled}")?;
    }
    Ok(())
}
