//! CSV and JSON file formats. Paths are `time,value` rows, barcodes are
//! `birth,death,is_infinite` rows; all floats round-trip exactly through the
//! shortest-representation formatter.

use crate::{CliError, Result};
use pathzeta::barcode::{Bar, Barcode};
use pathzeta::SampledPath;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|source| CliError::Io {
                path: path.to_path_buf(),
                source,
            })?;
        }
    }
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_field<T: std::str::FromStr>(
    field: &str,
    path: &Path,
    line: usize,
    what: &str,
) -> Result<T> {
    field.trim().parse().map_err(|_| CliError::Parse {
        path: path.to_path_buf(),
        line,
        message: format!("cannot parse {what} from {field:?}"),
    })
}

/// Write a sampled path as `time,value` rows at full round-trip precision.
pub fn write_path_csv(path: &Path, sampled: &SampledPath) -> Result<()> {
    let mut out = String::with_capacity(24 * sampled.values().len());
    out.push_str("time,value\n");
    for (k, v) in sampled.values().iter().enumerate() {
        let _ = writeln!(out, "{},{}", sampled.time_at(k), v);
    }
    write(path, &out)
}

/// Read a `time,value` CSV. The time column must be strictly increasing;
/// only the values feed the topology.
pub fn read_path_csv(path: &Path) -> Result<Vec<f64>> {
    let text = read(path)?;
    let mut lines = text.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return Err(CliError::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: "empty file".into(),
        });
    };
    if header.trim() != "time,value" {
        return Err(CliError::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: format!("expected header \"time,value\", found {header:?}"),
        });
    }
    let mut values = Vec::new();
    let mut prev_time = f64::NEG_INFINITY;
    for (idx, row) in lines {
        let line = idx + 1;
        if row.trim().is_empty() {
            continue;
        }
        let Some((t_field, v_field)) = row.split_once(',') else {
            return Err(CliError::Parse {
                path: path.to_path_buf(),
                line,
                message: "expected two comma-separated fields".into(),
            });
        };
        let t: f64 = parse_field(t_field, path, line, "time")?;
        let v: f64 = parse_field(v_field, path, line, "value")?;
        if t <= prev_time {
            return Err(CliError::Parse {
                path: path.to_path_buf(),
                line,
                message: format!("time column must be strictly increasing (got {t})"),
            });
        }
        prev_time = t;
        values.push(v);
    }
    if values.is_empty() {
        return Err(CliError::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: "no samples".into(),
        });
    }
    Ok(values)
}

/// Write a barcode as `birth,death,is_infinite` rows.
pub fn write_barcode_csv(path: &Path, barcode: &Barcode) -> Result<()> {
    let mut out = String::from("birth,death,is_infinite\n");
    for bar in barcode.bars() {
        let _ = writeln!(out, "{},{},{}", bar.birth, bar.death, bar.infinite);
    }
    write(path, &out)
}

/// Read a barcode produced by [`write_barcode_csv`] (or any external tool
/// using the same schema).
pub fn read_barcode_csv(path: &Path) -> Result<Barcode> {
    let text = read(path)?;
    let mut lines = text.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return Err(CliError::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: "empty file".into(),
        });
    };
    if header.trim() != "birth,death,is_infinite" {
        return Err(CliError::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: format!("expected header \"birth,death,is_infinite\", found {header:?}"),
        });
    }
    let mut bars = Vec::new();
    for (idx, row) in lines {
        let line = idx + 1;
        if row.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != 3 {
            return Err(CliError::Parse {
                path: path.to_path_buf(),
                line,
                message: "expected three comma-separated fields".into(),
            });
        }
        bars.push(Bar {
            birth: parse_field(fields[0], path, line, "birth")?,
            death: parse_field(fields[1], path, line, "death")?,
            infinite: parse_field(fields[2], path, line, "is_infinite")?,
        });
    }
    Ok(Barcode::from_bars(bars)?)
}

/// Compute the barcode of a `time,value` CSV and write it out.
pub fn barcode_file(input: &Path, output: &Path) -> Result<()> {
    let values = read_path_csv(input)?;
    let barcode = pathzeta::barcode::superlevel_barcode(&values)?;
    write_barcode_csv(output, &barcode)
}

/// Emit a square distance matrix with file stems as labels.
pub fn write_matrix_csv(path: &Path, labels: &[String], matrix: &[Vec<f64>]) -> Result<()> {
    let mut out = String::new();
    out.push_str("label");
    for l in labels {
        let _ = write!(out, ",{l}");
    }
    out.push('\n');
    for (l, row) in labels.iter().zip(matrix) {
        let _ = write!(out, "{l}");
        for v in row {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    write(path, &out)
}

/// Write any serializable document as pretty JSON.
pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    write(path, &format!("{}\n", serde_json::to_string_pretty(value)?))
}
