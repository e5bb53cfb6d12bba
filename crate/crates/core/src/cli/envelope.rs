use serde::{Serialize, Serializer};
use serde_json::{Map, Value};

use super::config::ConfigFile;
use crate::sensitivity::Assumption;
use crate::Warning;

/// Number with its unit. Non-finite values serialize as strings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantity {
    pub value: f64,
    pub unit: &'static str,
}

impl Quantity {
    pub fn new(value: f64, unit: &'static str) -> Self {
        Quantity { value, unit }
    }
}

pub(crate) fn number(v: f64) -> Value {
    if v.is_finite() {
        Value::from(v)
    } else if v.is_nan() {
        Value::from("nan")
    } else if v > 0.0 {
        Value::from("inf")
    } else {
        Value::from("-inf")
    }
}

impl Serialize for Quantity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = Map::new();
        m.insert("value".into(), number(self.value));
        m.insert("unit".into(), Value::from(self.unit));
        m.serialize(s)
    }
}

/// Ordered result map.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Results(Map<String, Value>);

impl Results {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn quantity(&mut self, key: &str, value: f64, unit: &'static str) -> &mut Self {
        self.0.insert(
            key.into(),
            serde_json::to_value(Quantity::new(value, unit)).expect("quantity"),
        );
        self
    }

    pub fn value(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.0.insert(
            key.into(),
            serde_json::to_value(value).expect("serializable result"),
        );
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.0.get(key)
    }
}

/// JSON output of every command.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultEnvelope {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    /// Fully resolved configuration; feeding it back reproduces the run.
    pub inputs: ConfigFile,
    pub results: Results,
    pub assumptions: Vec<Assumption>,
    pub warnings: Vec<Warning>,
}

impl ResultEnvelope {
    pub fn to_json(&self) -> crate::Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
