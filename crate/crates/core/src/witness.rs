//! Replayable counterexamples. A failed law check records the law id, the
//! witnesses it was evaluated on and both evaluated sides; re-running the law
//! on the witnesses must reproduce the violation.

use serde::{Deserialize, Serialize};
use std::fmt;

/// The relation the law expected between lhs and rhs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Eq,
    Neq,
    Leq,
    Implies,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Value {
    Element {
        lattice: String,
        index: usize,
    },
    ElementSet {
        lattice: String,
        indices: Vec<usize>,
    },
    Map {
        dom: String,
        cod: String,
        image: Vec<usize>,
    },
    MapFamily {
        maps: Vec<Value>,
    },
    Bool {
        value: bool,
    },
}

impl Value {
    pub fn element(lattice: &str, index: usize) -> Value {
        Value::Element {
            lattice: lattice.to_string(),
            index,
        }
    }

    pub fn element_set(lattice: &str, indices: Vec<usize>) -> Value {
        Value::ElementSet {
            lattice: lattice.to_string(),
            indices,
        }
    }

    pub fn bool(value: bool) -> Value {
        Value::Bool { value }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Element { index, .. } => write!(f, "{index}"),
            Value::ElementSet { indices, .. } => write!(f, "{indices:?}"),
            Value::Map { image, .. } => write!(f, "{image:?}"),
            Value::MapFamily { maps } => {
                write!(f, "{{")?;
                for (i, m) in maps.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{m}")?;
                }
                write!(f, "}}")
            }
            Value::Bool { value } => write!(f, "{value}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub name: String,
    pub value: Value,
}

impl Witness {
    pub fn new(name: &str, value: Value) -> Witness {
        Witness {
            name: name.to_string(),
            value,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub law: String,
    pub relation: Relation,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub op: Option<String>,
    /// Names the algebra construction the law ran in, when the carrier is not
    /// the full monotone map space (e.g. "sup", "meet", "quotient:psi-adjoint").
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub construction: Option<String>,
    pub witnesses: Vec<Witness>,
    pub lhs: Value,
    pub rhs: Value,
}

impl Counterexample {
    pub fn witness(&self, name: &str) -> Option<&Value> {
        self.witnesses
            .iter()
            .find(|w| w.name == name)
            .map(|w| &w.value)
    }
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.law)?;
        if let Some(op) = &self.op {
            write!(f, " [{op}]")?;
        }
        for w in &self.witnesses {
            write!(f, " {}={}", w.name, w.value)?;
        }
        let rel = match self.relation {
            Relation::Eq => "!=",
            Relation::Neq => "==",
            Relation::Leq => "!<=",
            Relation::Implies => "-/>",
        };
        write!(f, ": {} {} {}", self.lhs, rel, self.rhs)
    }
}
