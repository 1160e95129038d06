//! CSV and JSON encodings of sampled sets.
//!
//! * `SampledSet` CSV: one point per row, one column per coordinate, no header.
//! * `SampledSet` JSON: array of coordinate arrays.
//! * `NonautonomousSet` JSON: object keyed by the time (shortest round-trip
//!   decimal form), each value a `SampledSet` array.

use std::fmt::Write as _;

use serde::ser::{Serialize, SerializeStruct, Serializer};
use serde_json::{Map, Value};

use super::{MetricError, NonautonomousSet, SampledSet, StatePoint};

impl SampledSet {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for p in self.iter() {
            for (i, c) in p.coords().iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write!(out, "{c}").expect("writing to a String");
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str, label: impl Into<String>) -> Result<Self, MetricError> {
        let mut points = Vec::new();
        for (line_no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let coords = line
                .split(',')
                .map(|f| f.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| MetricError::Csv(format!("line {}: {e}", line_no + 1)))?;
            points.push(StatePoint::new(coords)?);
        }
        Self::new(points, label)
    }

    pub fn to_json_value(&self) -> Value {
        Value::Array(self.iter().map(|p| Value::Array(p.coords().iter().map(|&c| Value::from(c)).collect())).collect())
    }

    pub fn from_json_value(value: &Value, label: impl Into<String>) -> Result<Self, MetricError> {
        let rows: Vec<Vec<f64>> =
            serde_json::from_value(value.clone()).map_err(|e| MetricError::Json(e.to_string()))?;
        Self::from_coords(rows, label)
    }
}

impl NonautonomousSet {
    pub fn to_json_value(&self) -> Value {
        let mut map = Map::new();
        for (t, set) in self.iter() {
            map.insert(format!("{t}"), set.to_json_value());
        }
        Value::Object(map)
    }

    pub fn from_json_value(value: &Value) -> Result<Self, MetricError> {
        let obj = value.as_object().ok_or_else(|| MetricError::Json("expected an object keyed by time".into()))?;
        let mut entries = obj
            .iter()
            .map(|(k, v)| {
                let t: f64 = k.parse().map_err(|_| MetricError::Json(format!("bad time key `{k}`")))?;
                Ok((t, SampledSet::from_json_value(v, format!("t={k}"))?))
            })
            .collect::<Result<Vec<_>, MetricError>>()?;
        entries.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (times, sets) = entries.into_iter().unzip();
        Self::new(times, sets)
    }
}

impl Serialize for SampledSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("SampledSet", 2)?;
        st.serialize_field("label", self.label())?;
        st.serialize_field("points", self.points())?;
        st.end()
    }
}

impl Serialize for NonautonomousSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_json_value().serialize(serializer)
    }
}
