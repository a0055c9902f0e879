//! Map files.
//!
//! - `SMAP1` float binary: the 5 ASCII bytes `SMAP1`, width and height as
//!   little-endian `u32`, then `width * height` little-endian `f64` values
//!   in row-major order. Lossless.
//! - CSV: one image row per line, comma-separated values.
//! - 16-bit PGM (`P5`, maxval 65535, big-endian samples). Writing quantizes
//!   `[min, max]` linearly onto `[0, 65535]`; reading returns raw samples.

use std::fs;
use std::path::Path;

use gazecenter_core::{DenseGrid, Dims};

use crate::error::{Error, Result};

pub const SMAP_MAGIC: &[u8; 5] = b"SMAP1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapFormat {
    FloatBinary,
    Csv,
    Pgm16,
}

impl MapFormat {
    pub fn from_path(path: &Path) -> Result<Self> {
        match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
            Some("smap") => Ok(MapFormat::FloatBinary),
            Some("csv") => Ok(MapFormat::Csv),
            Some("pgm") => Ok(MapFormat::Pgm16),
            _ => Err(Error::UnknownFormat { path: path.to_path_buf() }),
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            MapFormat::FloatBinary => "smap",
            MapFormat::Csv => "csv",
            MapFormat::Pgm16 => "pgm",
        }
    }
}

/// Reads a map, picking the format from the extension. When `expected` is
/// given, a size difference is a [`Error::DimMismatch`].
pub fn read_map(path: impl AsRef<Path>, expected: Option<Dims>) -> Result<DenseGrid> {
    let path = path.as_ref();
    read_map_as(path, MapFormat::from_path(path)?, expected)
}

pub fn read_map_as(path: &Path, format: MapFormat, expected: Option<Dims>) -> Result<DenseGrid> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let grid = match format {
        MapFormat::FloatBinary => decode_smap(&bytes, path)?,
        MapFormat::Csv => decode_csv(&bytes, path)?,
        MapFormat::Pgm16 => decode_pgm(&bytes, path)?,
    };
    if let Some(exp) = expected {
        if grid.dims() != exp {
            return Err(Error::DimMismatch {
                path: path.to_path_buf(),
                expected_w: exp.width,
                expected_h: exp.height,
                got_w: grid.width(),
                got_h: grid.height(),
            });
        }
    }
    Ok(grid)
}

/// Writes a finite, non-negative grid.
pub fn write_map(path: impl AsRef<Path>, grid: &DenseGrid) -> Result<()> {
    let path = path.as_ref();
    write_map_as(path, MapFormat::from_path(path)?, grid)
}

pub fn write_map_as(path: &Path, format: MapFormat, grid: &DenseGrid) -> Result<()> {
    grid.validate()?;
    let bytes = match format {
        MapFormat::FloatBinary => encode_smap(grid),
        MapFormat::Csv => encode_csv(grid).into_bytes(),
        MapFormat::Pgm16 => {
            let (bytes, flat) = encode_pgm(grid);
            if flat {
                log::warn!("{}: constant map, all PGM samples written as 0", path.display());
            }
            bytes
        }
    };
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub fn encode_smap(grid: &DenseGrid) -> Vec<u8> {
    let mut out = Vec::with_capacity(13 + 8 * grid.values().len());
    out.extend_from_slice(SMAP_MAGIC);
    out.extend_from_slice(&(grid.width() as u32).to_le_bytes());
    out.extend_from_slice(&(grid.height() as u32).to_le_bytes());
    for v in grid.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_smap(bytes: &[u8], origin: &Path) -> Result<DenseGrid> {
    if bytes.len() < 13 || &bytes[..5] != SMAP_MAGIC {
        return Err(Error::MagicMismatch { path: origin.to_path_buf(), expected: "SMAP1" });
    }
    let w = u32::from_le_bytes(bytes[5..9].try_into().unwrap()) as usize;
    let h = u32::from_le_bytes(bytes[9..13].try_into().unwrap()) as usize;
    let body = &bytes[13..];
    if body.len() != w * h * 8 || w == 0 || h == 0 {
        return Err(Error::Parse {
            path: origin.to_path_buf(),
            line: 0,
            field: "payload".into(),
            message: format!("expected {} bytes of samples for {w}x{h}, found {}", w * h * 8, body.len()),
        });
    }
    let values = body.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    Ok(DenseGrid::from_vec(Dims::new(w, h), values)?)
}

pub fn encode_csv(grid: &DenseGrid) -> String {
    let mut out = String::new();
    for row in grid.values().chunks(grid.width()) {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn decode_csv(bytes: &[u8], origin: &Path) -> Result<DenseGrid> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse {
        path: origin.to_path_buf(),
        line: 0,
        field: String::new(),
        message: e.to_string(),
    })?;
    let mut values = Vec::new();
    let mut width = None;
    let mut height = 0;
    for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let row: Vec<f64> = line
            .split(',')
            .enumerate()
            .map(|(j, s)| {
                s.trim().parse::<f64>().map_err(|_| Error::Parse {
                    path: origin.to_path_buf(),
                    line: i + 1,
                    field: format!("column {}", j + 1),
                    message: format!("`{}` is not a number", s.trim()),
                })
            })
            .collect::<Result<_>>()?;
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(Error::Parse {
                    path: origin.to_path_buf(),
                    line: i + 1,
                    field: String::new(),
                    message: format!("row has {} values, expected {w}", row.len()),
                })
            }
            _ => {}
        }
        values.extend(row);
        height += 1;
    }
    let width = width.unwrap_or(0);
    Ok(DenseGrid::from_vec(Dims::new(width, height), values)?)
}

/// Quantized PGM bytes and whether the map was constant.
pub fn encode_pgm(grid: &DenseGrid) -> (Vec<u8>, bool) {
    let (lo, hi) = grid.min_max();
    let flat = hi <= lo;
    let mut out = format!("P5\n{} {}\n65535\n", grid.width(), grid.height()).into_bytes();
    for &v in grid.values() {
        let q = if flat { 0 } else { ((v - lo) / (hi - lo) * 65535.0).round().clamp(0.0, 65535.0) as u16 };
        out.extend_from_slice(&q.to_be_bytes());
    }
    (out, flat)
}

pub fn decode_pgm(bytes: &[u8], origin: &Path) -> Result<DenseGrid> {
    let bad = |message: &str| Error::Parse {
        path: origin.to_path_buf(),
        line: 0,
        field: "header".into(),
        message: message.into(),
    };
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        return Err(Error::MagicMismatch { path: origin.to_path_buf(), expected: "P5" });
    }
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for f in &mut fields {
        loop {
            match bytes.get(pos) {
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(_) => break,
                None => return Err(bad("truncated header")),
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        *f = std::str::from_utf8(&bytes[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("expected an integer"))?;
    }
    // single whitespace byte before the raster
    pos += 1;
    let [w, h, maxval] = fields;
    if maxval == 0 || maxval > 65535 {
        return Err(bad("maxval must be in 1..=65535"));
    }
    let wide = maxval > 255;
    let body = bytes.get(pos..).unwrap_or(&[]);
    let need = w * h * if wide { 2 } else { 1 };
    if body.len() < need {
        return Err(bad("truncated raster"));
    }
    let values = if wide {
        body[..need].chunks_exact(2).map(|c| u16::from_be_bytes([c[0], c[1]]) as f64).collect()
    } else {
        body[..need].iter().map(|&b| b as f64).collect()
    };
    Ok(DenseGrid::from_vec(Dims::new(w, h), values)?)
}
