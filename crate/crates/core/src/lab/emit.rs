//! Writing tables and figures.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use crate::combdendrite::params::CombParams;
use crate::error::{DcError, Result};
use crate::rational::to_f64;
use crate::svg::Drawing;

/// A CSV table held as strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        Table {
            header: header.iter().map(|h| h.as_ref().to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) -> Result<()> {
        if row.len() != self.header.len() {
            return Err(DcError::Invariant(format!(
                "row has {} fields, header has {}",
                row.len(),
                self.header.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| DcError::Io(format!("cannot write {}: {e}", path.display())))
}

pub fn emit_csv(table: &Table, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(&table.header)?;
    for r in &table.rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_svg(drawing: &Drawing, path: &Path) -> Result<()> {
    drawing.write_to(create(path)?)
}

pub fn emit_json<T: serde::Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| DcError::Io(format!("cannot write {}: {e}", path.display())))
}

/// The spine with every spike of levels `1..=levels`, vertical scale
/// stretched so the first level fills a third of the picture.
pub fn comb_drawing(params: &CombParams, levels: u32) -> Result<Drawing> {
    let top = to_f64(&params.spike_grid(1)?.height());
    let mut d = Drawing::new(720.0, 360.0, (0.0, 0.0, 1.0, top));
    d.line((0.0, 0.0), (1.0, 0.0), "black", 2.0);
    for n in 1..=levels {
        let grid = params.spike_grid(n)?;
        let h = to_f64(&grid.height());
        for x in grid.positions() {
            let x = to_f64(&x);
            d.line((x, 0.0), (x, h), "black", 1.0);
        }
    }
    Ok(d)
}

/// Step plot of one or more series `(x, y)` sharing axes.
pub fn step_plot(series: &[(&str, Vec<(f64, f64)>)], colors: &[&str]) -> Drawing {
    let pts = series.iter().flat_map(|(_, s)| s.iter());
    let (mut x0, mut x1, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1) = (0.0, 1.0);
    }
    let y1 = if y1 > 0.0 { y1 } else { 1.0 };
    let mut d = Drawing::new(720.0, 400.0, (x0, 0.0, x1, y1 * 1.1));
    d.line((x0, 0.0), (x1, 0.0), "gray", 1.0);
    for (i, (label, s)) in series.iter().enumerate() {
        let color = colors[i % colors.len()];
        let mut steps = Vec::with_capacity(2 * s.len());
        for (k, &(x, y)) in s.iter().enumerate() {
            if k > 0 {
                steps.push((x, s[k - 1].1));
            }
            steps.push((x, y));
        }
        d.polyline(&steps, color, 1.5);
        if let Some(&(x, y)) = s.last() {
            d.text((x, y), 11.0, label);
        }
    }
    d
}
