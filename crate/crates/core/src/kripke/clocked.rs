use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::PointedModel;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Age {
    New,
    Old,
}

/// A pointed model carrying a clock for each fixed-point variable it has
/// passed through, and an age used by the fixed-point game.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClockedModel {
    pub pointed: PointedModel,
    pub clocks: BTreeMap<String, u32>,
    pub age: Age,
}

impl ClockedModel {
    pub fn fresh(pointed: PointedModel) -> Self {
        ClockedModel { pointed, clocks: BTreeMap::new(), age: Age::New }
    }

    pub fn is_new(&self) -> bool {
        self.age == Age::New
    }

    pub fn aged(&self) -> Self {
        ClockedModel { age: Age::Old, ..self.clone() }
    }

    pub fn renewed(&self) -> Self {
        ClockedModel { age: Age::New, ..self.clone() }
    }

    pub fn clock(&self, var: &str) -> Option<u32> {
        self.clocks.get(var).copied()
    }

    pub fn with_clock(&self, var: &str, value: u32) -> Self {
        let mut c = self.clone();
        c.clocks.insert(var.to_string(), value);
        c
    }

    /// Successors keep the clocks and start out new.
    pub fn successors(&self) -> Vec<ClockedModel> {
        self.pointed
            .successors()
            .into_iter()
            .map(|pointed| ClockedModel { pointed, clocks: self.clocks.clone(), age: Age::New })
            .collect()
    }
}

impl fmt::Debug for ClockedModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[", self.pointed)?;
        for (i, (x, c)) in self.clocks.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}={c}")?;
        }
        write!(f, "]{}", if self.is_new() { "" } else { "'" })
    }
}

impl fmt::Display for ClockedModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
