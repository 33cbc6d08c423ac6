use serde_json::{json, Map, Value};
use shiftlab_core::certificate::Certificate;
use shiftlab_core::format::{format_pattern, format_window};
use shiftlab_core::tmp::{HoldsBy, Verdict};
use shiftlab_core::SubshiftSpec;

/// How a command finished; each status has its own exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Success,
    NoneUpToScale,
    Budget,
    Counterexample,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::Counterexample => 2,
            Status::NoneUpToScale => 3,
            Status::Budget => 4,
        }
    }
}

pub enum Output {
    Json(Value),
    Text(String),
}

pub struct Finished {
    pub output: Output,
    pub certificates: Vec<Certificate>,
    pub status: Status,
}

impl Finished {
    pub fn text(text: String) -> Self {
        Finished {
            output: Output::Text(text),
            certificates: Vec::new(),
            status: Status::Success,
        }
    }
}

/// `{command, spec_hash, level, results, meta}`
pub fn report(
    command: Value,
    spec: Option<&SubshiftSpec>,
    level: Option<String>,
    results: Value,
    budget: u64,
) -> Value {
    let mut m = Map::new();
    m.insert("command".into(), command);
    m.insert(
        "spec_hash".into(),
        spec.map_or(Value::Null, |s| {
            Value::String(shiftlab_core::format::spec_hash(s))
        }),
    );
    m.insert("level".into(), level.map_or(Value::Null, Value::String));
    m.insert("results".into(), results);
    m.insert(
        "meta".into(),
        json!({ "budget": budget, "version": env!("CARGO_PKG_VERSION") }),
    );
    Value::Object(m)
}

pub fn verdict_json(spec: &SubshiftSpec, v: &Verdict) -> Value {
    match v {
        Verdict::Holds { window, by, .. } => json!({
            "verdict": "holds",
            "by": match by {
                HoldsBy::Structure => "structure",
                HoldsBy::Exhaustion => "exhaustion",
            },
            "window": format_window(window),
        }),
        Verdict::Counterexample(c) => json!({
            "verdict": "counterexample",
            "x": format_pattern(spec, &c.x),
            "y": format_pattern(spec, &c.y),
            "splice": format_pattern(spec, &c.splice),
            "violation": c.violation.as_ref().map(format_window),
        }),
        Verdict::Inconclusive {
            limit,
            used,
            progress,
        } => json!({
            "verdict": "inconclusive",
            "limit": limit,
            "used": used,
            "progress": progress,
        }),
    }
}

pub fn verdict_status(v: &Verdict) -> Status {
    match v {
        Verdict::Holds { .. } => Status::Success,
        Verdict::Counterexample(_) => Status::Counterexample,
        Verdict::Inconclusive { .. } => Status::Budget,
    }
}

/// Quotes a CSV field when it contains a comma or a quote.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("box:4"), "box:4");
        assert_eq!(csv_field("set:[0,1]"), "\"set:[0,1]\"");
        assert_eq!(csv_field("a\"b"), "\"a\"\"b\"");
    }

    #[test]
    fn exit_codes_are_distinct() {
        let codes = [
            Status::Success,
            Status::Counterexample,
            Status::NoneUpToScale,
            Status::Budget,
        ]
        .map(Status::code);
        assert_eq!(codes, [0, 2, 3, 4]);
    }
}
