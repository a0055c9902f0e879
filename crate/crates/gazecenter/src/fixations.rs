//! Fixation CSV files:
//! `image_id,observer_id,fixation_index,x,y[,duration_ms]`.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use gazecenter_core::{Fixation, FixationSet};

use crate::error::{Error, Result};

const REQUIRED: [&str; 5] = ["image_id", "observer_id", "fixation_index", "x", "y"];
const OPTIONAL: &str = "duration_ms";

pub fn load_fixations(path: impl AsRef<Path>) -> Result<FixationSet> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_fixations(file, path)
}

pub fn read_fixations(reader: impl Read, origin: &Path) -> Result<FixationSet> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let csv_err = |line: usize, e: csv::Error| Error::Parse {
        path: origin.to_path_buf(),
        line,
        field: String::new(),
        message: e.to_string(),
    };
    let headers = rdr.headers().map_err(|e| csv_err(1, e))?.clone();
    for h in headers.iter() {
        if !REQUIRED.contains(&h) && h != OPTIONAL {
            return Err(Error::UnknownColumn { path: origin.to_path_buf(), column: h.to_string() });
        }
    }
    let col = |name: &str| headers.iter().position(|h| h == name);
    let mut idx = [0usize; 5];
    for (slot, name) in idx.iter_mut().zip(REQUIRED) {
        *slot =
            col(name).ok_or_else(|| Error::MissingColumn { path: origin.to_path_buf(), column: name.to_string() })?;
    }
    let duration_col = col(OPTIONAL);

    let mut records = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        // header is line 1
        let line = row + 2;
        let rec = rec.map_err(|e| csv_err(line, e))?;
        let field = |i: usize| rec.get(i).unwrap_or("");
        let parse_err = |name: &str, message: String| Error::Parse {
            path: origin.to_path_buf(),
            line,
            field: name.to_string(),
            message,
        };
        let number = |name: &str, i: usize| -> Result<f64> {
            let v: f64 = field(i).parse().map_err(|_| parse_err(name, format!("`{}` is not a number", field(i))))?;
            if !v.is_finite() {
                return Err(parse_err(name, "value must be finite".into()));
            }
            Ok(v)
        };
        let index: u32 = field(idx[2])
            .parse()
            .ok()
            .filter(|&i| i >= 1)
            .ok_or_else(|| parse_err("fixation_index", format!("`{}` is not an integer >= 1", field(idx[2]))))?;
        let duration_ms = match duration_col {
            Some(c) if !field(c).is_empty() => Some(number(OPTIONAL, c)?),
            _ => None,
        };
        records.push(Fixation {
            image_id: field(idx[0]).to_string(),
            observer_id: field(idx[1]).to_string(),
            index,
            x: number("x", idx[3])?,
            y: number("y", idx[4])?,
            duration_ms,
        });
    }
    Ok(FixationSet::new(records))
}

/// Writes a fixation file; the duration column is emitted only when some
/// record carries a duration.
pub fn write_fixations(path: impl AsRef<Path>, set: &FixationSet) -> Result<()> {
    let path = path.as_ref();
    let with_duration = set.records.iter().any(|f| f.duration_ms.is_some());
    let mut out = String::from("image_id,observer_id,fixation_index,x,y");
    if with_duration {
        out.push_str(",duration_ms");
    }
    out.push('\n');
    for f in &set.records {
        out.push_str(&format!("{},{},{},{},{}", f.image_id, f.observer_id, f.index, f.x, f.y));
        if with_duration {
            out.push(',');
            if let Some(d) = f.duration_ms {
                out.push_str(&d.to_string());
            }
        }
        out.push('\n');
    }
    let mut file = File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(out.as_bytes()).map_err(|e| Error::io(path, e))
}
