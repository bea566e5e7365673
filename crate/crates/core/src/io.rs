//! File formats: trajectory, sweep and benchmark CSVs, roundtrip JSON, and
//! JSON solver/material configuration.
//!
//! Floating point CSV fields are written with 17 significant digits so that a
//! table read back reproduces the written values exactly.

use std::io::{Read, Write};

use serde::Deserialize;

use crate::error::{HysteresisError, Result};
use crate::experiments::{BenchRow, RoundtripReport, SweepRow, TrajectoryRecord};
use crate::material::{FieldVector, MaterialModel, PinningCell, SolverConfig, MU0};

const AXES: [&str; 3] = ["x", "y", "z"];

fn format_err(context: &str, e: impl std::fmt::Display) -> HysteresisError {
    HysteresisError::Format(format!("{context}: {e}"))
}

/// Round-trippable decimal form of an `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn component_names(prefix: &str, d: usize) -> impl Iterator<Item = String> + '_ {
    AXES[..d].iter().map(move |a| format!("{prefix}{a}"))
}

/// `i,t,Hx,Hy,Bx,By,iters,backtracks,time_s` for `d = 2`.
pub fn trajectory_header(d: usize) -> Vec<String> {
    let mut header = vec!["i".to_string(), "t".to_string()];
    header.extend(component_names("H", d));
    header.extend(component_names("B", d));
    header.extend(["iters", "backtracks", "time_s"].map(String::from));
    header
}

pub fn write_trajectory<W: Write, const D: usize>(out: W, record: &TrajectoryRecord<D>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(trajectory_header(D)).map_err(|e| format_err("trajectory csv", e))?;
    for (i, step) in record.steps.iter().enumerate() {
        let mut row = vec![i.to_string(), fmt_f64(step.t)];
        row.extend(step.h.iter().map(|v| fmt_f64(*v)));
        row.extend(step.b.iter().map(|v| fmt_f64(*v)));
        row.push(step.newton_iters.to_string());
        row.push(step.backtracks.to_string());
        row.push(fmt_f64(step.wall_time));
        w.write_record(&row).map_err(|e| format_err("trajectory csv", e))?;
    }
    w.flush().map_err(|e| format_err("trajectory csv", e))
}

/// Number of `<prefix>x`, `<prefix>y`, `<prefix>z` columns present, in order.
pub fn field_dimension(headers: &[String], prefix: &str) -> usize {
    component_names(prefix, 3)
        .take_while(|name| headers.iter().any(|h| h == name))
        .count()
}

/// Reads the `H` (`prefix = "H"`) or `B` columns of a CSV file with a header.
/// Other columns are ignored, so trajectory files written by
/// [`write_trajectory`] can be fed back in directly.
pub fn read_field_column<R: Read, const D: usize>(input: R, prefix: &str) -> Result<Vec<FieldVector<D>>> {
    let mut r = csv::Reader::from_reader(input);
    let headers: Vec<String> = r
        .headers()
        .map_err(|e| format_err("input csv", e))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let found = field_dimension(&headers, prefix);
    if found != D {
        return Err(HysteresisError::Format(format!(
            "input csv: expected {D} '{prefix}' component columns, found {found}"
        )));
    }
    let columns: Vec<usize> = component_names(prefix, D)
        .map(|name| headers.iter().position(|h| *h == name).expect("checked above"))
        .collect();
    let mut samples = Vec::new();
    for (line, record) in r.records().enumerate() {
        let record = record.map_err(|e| format_err("input csv", e))?;
        let mut v = FieldVector::<D>::zeros();
        for (i, &c) in columns.iter().enumerate() {
            let field = record.get(c).unwrap_or("").trim();
            v[i] = field
                .parse::<f64>()
                .map_err(|e| format_err(&format!("input csv row {}", line + 1), e))?;
            if !v[i].is_finite() {
                return Err(HysteresisError::Format(format!("input csv row {}: non-finite value", line + 1)));
            }
        }
        samples.push(v);
    }
    Ok(samples)
}

/// Header row of a CSV file, for dispatching on the field dimension.
pub fn read_headers<R: Read>(input: R) -> Result<Vec<String>> {
    let mut r = csv::Reader::from_reader(input);
    Ok(r.headers()
        .map_err(|e| format_err("input csv", e))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect())
}

pub fn write_sweep<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["eps", "err_forward", "err_inverse"]).map_err(|e| format_err("sweep csv", e))?;
    for row in rows {
        w.write_record([fmt_f64(row.eps), fmt_f64(row.err_forward), fmt_f64(row.err_inverse)])
            .map_err(|e| format_err("sweep csv", e))?;
    }
    w.flush().map_err(|e| format_err("sweep csv", e))
}

pub fn write_bench<W: Write>(out: W, rows: &[BenchRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["K", "method", "time_ms", "mean_iters"]).map_err(|e| format_err("bench csv", e))?;
    for row in rows {
        w.write_record([row.k.to_string(), row.method.to_string(), fmt_f64(row.time_ms), fmt_f64(row.mean_iters)])
            .map_err(|e| format_err("bench csv", e))?;
    }
    w.flush().map_err(|e| format_err("bench csv", e))
}

pub fn write_roundtrip<W: Write>(mut out: W, report: &RoundtripReport) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, report).map_err(|e| format_err("roundtrip json", e))?;
    writeln!(out).map_err(|e| format_err("roundtrip json", e))
}

/// Solver settings from JSON; absent keys keep their defaults.
pub fn read_config<R: Read>(input: R) -> Result<SolverConfig> {
    let cfg: SolverConfig = serde_json::from_reader(input).map_err(|e| format_err("config json", e))?;
    cfg.validate()?;
    Ok(cfg)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MaterialFile {
    #[serde(default = "default_mu0")]
    mu0: f64,
    cells: Vec<PinningCell>,
}

fn default_mu0() -> f64 {
    MU0
}

/// `{"mu0": 1.2566e-6, "cells": [{"a_s": 50, "j_s": 0.5, "chi": 70}, ...]}`;
/// `mu0` is optional.
pub fn read_material<R: Read>(input: R) -> Result<MaterialModel> {
    let file: MaterialFile = serde_json::from_reader(input).map_err(|e| format_err("material json", e))?;
    MaterialModel::new(file.mu0, file.cells)
}
