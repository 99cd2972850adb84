//! Plain-text PNM writers and reader: P2 (PGM) for grayscale images, P1 (PBM)
//! for binary masks. Plain formats are trivially diffable and carry no codec
//! dependence.

use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::{BinaryMask, Grid, Grid2D, RealField};

/// Write a 2D field as plain PGM (P2, maxval 255), linearly rescaling
/// `[min, max]` to `[0, 255]`. Constant images map to 0.
pub fn write_pgm(field: &RealField, path: &Path) -> Result<()> {
    let grid = field
        .grid()
        .as_2d()
        .ok_or_else(|| Error::InvalidArgument("PGM output needs a 2D field".to_string()))?;
    let side = grid.side();
    let values = field.values();
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let span = max - min;
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "P2")?;
    writeln!(out, "{side} {side}")?;
    writeln!(out, "255")?;
    for iy in 0..side {
        let mut row = String::with_capacity(side * 4);
        for ix in 0..side {
            let v = values[grid.index(ix, iy)];
            let g = if span > 0.0 {
                ((v - min) / span * 255.0).round().clamp(0.0, 255.0) as u32
            } else {
                0
            };
            if ix > 0 {
                row.push(' ');
            }
            row.push_str(&g.to_string());
        }
        writeln!(out, "{row}")?;
    }
    out.flush()?;
    Ok(())
}

/// Read a plain PGM (P2) into a field on the unit square, values scaled to
/// `[0, 1]` by maxval. The image must be square.
pub fn read_pgm(path: &Path) -> Result<RealField> {
    let file = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut tokens: Vec<String> = Vec::new();
    for line in file.lines() {
        let line = line?;
        let body = line.split('#').next().unwrap_or("");
        tokens.extend(body.split_whitespace().map(str::to_string));
    }
    if tokens.first().map(String::as_str) != Some("P2") {
        return Err(Error::InvalidArgument(
            "only plain PGM (P2) is supported".to_string(),
        ));
    }
    let parse = |s: &str| -> Result<usize> {
        s.parse::<usize>()
            .map_err(|e| Error::InvalidArgument(format!("bad PGM token {s:?}: {e}")))
    };
    if tokens.len() < 4 {
        return Err(Error::InvalidArgument("truncated PGM header".to_string()));
    }
    let width = parse(&tokens[1])?;
    let height = parse(&tokens[2])?;
    let maxval = parse(&tokens[3])?;
    if width != height {
        return Err(Error::InvalidArgument(format!(
            "image must be square, got {width}x{height}"
        )));
    }
    if maxval == 0 {
        return Err(Error::InvalidArgument("PGM maxval must be positive".to_string()));
    }
    let expected = width * height;
    let pixels = &tokens[4..];
    if pixels.len() != expected {
        return Err(Error::ShapeMismatch {
            what: "PGM pixel count",
            expected,
            got: pixels.len(),
        });
    }
    let grid = Grid2D::new(width)?;
    let mut values = vec![0.0; expected];
    for iy in 0..height {
        for ix in 0..width {
            let raw = parse(&pixels[iy * width + ix])?;
            values[grid.index(ix, iy)] = raw as f64 / maxval as f64;
        }
    }
    RealField::new(Grid::Two(grid), values)
}

/// Write a 2D mask as plain PBM (P1). PBM paints 1 as black; Γ pixels are 1.
pub fn write_pbm(mask: &BinaryMask, path: &Path) -> Result<()> {
    let side = mask
        .side()
        .ok_or_else(|| Error::InvalidArgument("PBM output needs a 2D mask".to_string()))?;
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "P1")?;
    writeln!(out, "{side} {side}")?;
    for iy in 0..side {
        let mut row = String::with_capacity(side * 2);
        for ix in 0..side {
            if ix > 0 {
                row.push(' ');
            }
            row.push(if mask.values()[ix + side * iy] == 1 { '1' } else { '0' });
        }
        writeln!(out, "{row}")?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pgm_roundtrip_preserves_layout() {
        let grid = Grid2D::new(2).unwrap();
        // Distinct corners so orientation mistakes show up.
        let mut values = vec![0.0; 4];
        values[grid.index(0, 0)] = 0.0;
        values[grid.index(1, 0)] = 85.0;
        values[grid.index(0, 1)] = 170.0;
        values[grid.index(1, 1)] = 255.0;
        let f = RealField::new(Grid::Two(grid.clone()), values).unwrap();
        let dir = std::env::temp_dir().join("pcm_core_pnm_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("t.pgm");
        write_pgm(&f, &path).unwrap();
        let back = read_pgm(&path).unwrap();
        assert_eq!(back.values()[grid.index(0, 0)], 0.0);
        assert!((back.values()[grid.index(1, 0)] - 85.0 / 255.0).abs() < 1e-12);
        assert_eq!(back.values()[grid.index(1, 1)], 1.0);
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn pbm_writes_mask_rows() {
        let mask = BinaryMask::new_2d(2, vec![1, 0, 0, 1]).unwrap();
        let dir = std::env::temp_dir().join("pcm_core_pnm_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("t.pbm");
        write_pbm(&mask, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, "P1\n2 2\n1 0\n0 1\n");
        std::fs::remove_file(&path).ok();
    }
}
