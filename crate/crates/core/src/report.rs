//! JSON report envelope shared by every command.

use serde::Serialize;
use serde_json::Value;

use crate::error::Error;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    CapabilityError,
    Failure,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Failure => 1,
            Status::CapabilityError => 2,
        }
    }

    pub fn of_error(e: &Error) -> Self {
        if e.is_capability() {
            Status::CapabilityError
        } else {
            Status::Failure
        }
    }
}

/// Where a number came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Computed,
    PaperConstant,
}

/// A value with its provenance.
#[derive(Clone, Debug, Serialize)]
pub struct Tagged<T> {
    pub value: T,
    pub provenance: Provenance,
}

pub fn computed<T>(value: T) -> Tagged<T> {
    Tagged {
        value,
        provenance: Provenance::Computed,
    }
}

pub fn constant<T>(value: T) -> Tagged<T> {
    Tagged {
        value,
        provenance: Provenance::PaperConstant,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportEnvelope {
    pub schema_version: u32,
    pub command: String,
    pub input: Value,
    pub version: String,
    /// Only present when timing was requested, so that default output is
    /// byte-stable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<f64>,
    pub payload: Value,
    pub status: Status,
}

impl ReportEnvelope {
    pub fn new(command: &str, input: Value, payload: Value, status: Status) -> Self {
        ReportEnvelope {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            input,
            version: TOOL_VERSION.to_string(),
            wall_time: None,
            payload,
            status,
        }
    }

    pub fn error(command: &str, input: Value, e: &Error) -> Self {
        let mut payload = serde_json::json!({ "error": e.to_string() });
        if let Error::Parse { pos, .. } = e {
            payload["position"] = (*pos).into();
        }
        Self::new(command, input, payload, Status::of_error(e))
    }

    /// Pretty JSON with object keys sorted at every level.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("envelopes serialize");
        let mut out = serde_json::to_string_pretty(&sort_keys(value)).expect("values serialize");
        out.push('\n');
        out
    }
}

/// Rebuilds every object with sorted keys. `serde_json::Map` already sorts
/// unless `preserve_order` is enabled somewhere in the dependency graph.
fn sort_keys(value: Value) -> Value {
    match value {
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(entries.into_iter().map(|(k, v)| (k, sort_keys(v))).collect())
        }
        Value::Array(items) => Value::Array(items.into_iter().map(sort_keys).collect()),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_sorted_and_stable() {
        let env = ReportEnvelope::new(
            "x",
            serde_json::json!({"b": 1, "a": 2}),
            serde_json::json!({"z": {"y": 1, "x": 2}}),
            Status::Ok,
        );
        let a = env.to_json();
        assert_eq!(a, env.clone().to_json());
        let pos = |s: &str| a.find(s).unwrap();
        assert!(pos("\"command\"") < pos("\"input\""));
        assert!(pos("\"x\"") < pos("\"y\""));
        assert!(!a.contains("wall_time"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(Status::Ok.exit_code(), 0);
        assert_eq!(Status::Failure.exit_code(), 1);
        assert_eq!(Status::of_error(&Error::Capability("x".into())).exit_code(), 2);
        let json = serde_json::to_string(&Status::CapabilityError).unwrap();
        assert_eq!(json, "\"capability-error\"");
        assert_eq!(serde_json::to_string(&Provenance::PaperConstant).unwrap(), "\"paper-constant\"");
    }
}
