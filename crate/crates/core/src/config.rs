//! Flat `key = value` cost-model files.
//!
//! ```text
//! # bits
//! copy_cost = 1
//! segment_start_cost = 3
//! allowed_increments = 1, 2
//! increment_cost.2 = 1.5
//! ```
//!
//! Missing keys keep their default; unknown keys are rejected.

use std::fmt::Write as _;

use crate::cost::CostModel;
use crate::error::{Error, Result};

pub fn parse_cost_model(text: &str) -> Result<CostModel> {
    let mut model = CostModel::default();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |message: String| Error::Config { line: line_no, message };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| err(format!("expected key = value, got {line:?}")))?;
        let (key, value) = (key.trim(), value.trim());
        let bits = || -> Result<f64> {
            let v: f64 = value.parse().map_err(|_| err(format!("{key}: {value:?} is not a decimal number")))?;
            if !(v.is_finite() && v >= 0.0) {
                return Err(err(format!("{key}: bit costs must be finite and >= 0")));
            }
            Ok(v)
        };
        match key {
            "copy_cost" => model.copy_cost = bits()?,
            "dup_cost" => model.dup_cost = bits()?,
            "segment_start_cost" => model.segment_start_cost = bits()?,
            "mirror_cost" => model.mirror_cost = bits()?,
            "zero_after_nine_cost" => model.zero_after_nine_cost = bits()?,
            "stm_capacity" => {
                model.stm_capacity = value.parse().map_err(|_| err(format!("stm_capacity: {value:?} is not a count")))?
            }
            "allowed_increments" => {
                model.allowed_increments = value
                    .split([',', ' '])
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<u64>().map_err(|_| err(format!("allowed_increments: bad step {s:?}"))))
                    .collect::<Result<_>>()?;
            }
            _ => match key.strip_prefix("increment_cost.") {
                Some(step) => {
                    let k: u64 = step.parse().map_err(|_| err(format!("bad increment step in {key:?}")))?;
                    model.increment_overrides.insert(k, bits()?);
                }
                None => return Err(err(format!("unknown key {key:?}"))),
            },
        }
    }
    model.validate().map_err(|e| Error::Config { line: 0, message: e.to_string() })?;
    Ok(model)
}

pub fn render_cost_model(model: &CostModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "copy_cost = {}", model.copy_cost);
    let _ = writeln!(out, "dup_cost = {}", model.dup_cost);
    let _ = writeln!(out, "segment_start_cost = {}", model.segment_start_cost);
    let _ = writeln!(out, "mirror_cost = {}", model.mirror_cost);
    let _ = writeln!(out, "zero_after_nine_cost = {}", model.zero_after_nine_cost);
    let _ = writeln!(out, "stm_capacity = {}", model.stm_capacity);
    let steps: Vec<String> = model.allowed_increments.iter().map(u64::to_string).collect();
    let _ = writeln!(out, "allowed_increments = {}", steps.join(", "));
    for (k, v) in &model.increment_overrides {
        let _ = writeln!(out, "increment_cost.{k} = {v}");
    }
    out
}
