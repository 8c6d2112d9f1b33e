//! The implication matrix among the five periodicity notions.
//!
//! Entry `(i, j)` records "every point periodic in sense `i` is periodic in
//! sense `j`". Base implications hold for every system; uniformly convergent
//! systems gain two more. Every false entry names a runnable gallery
//! scenario whose distinguished point separates the two notions.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixMode {
    GeneralNds,
    UniformlyConvergent,
}

impl MatrixMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            MatrixMode::GeneralNds => "general_nds",
            MatrixMode::UniformlyConvergent => "uniformly_convergent",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ImplicationMatrix {
    pub mode: MatrixMode,
    /// `entries[i-1][j-1]` is true iff notion `i` implies notion `j`.
    pub entries: [[bool; 5]; 5],
    /// Gallery scenario id refuting each false entry.
    pub witnesses: BTreeMap<(u8, u8), String>,
}

impl ImplicationMatrix {
    pub fn implies(&self, i: u8, j: u8) -> bool {
        self.entries[i as usize - 1][j as usize - 1]
    }

    pub fn witness(&self, i: u8, j: u8) -> Option<&str> {
        self.witnesses.get(&(i, j)).map(String::as_str)
    }

    pub fn is_reflexive(&self) -> bool {
        (0..5).all(|i| self.entries[i][i])
    }

    pub fn is_transitively_closed(&self) -> bool {
        for i in 0..5 {
            for j in 0..5 {
                for k in 0..5 {
                    if self.entries[i][j] && self.entries[j][k] && !self.entries[i][k] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Every false entry must carry a witness id.
    pub fn fully_witnessed(&self) -> bool {
        for i in 1..=5u8 {
            for j in 1..=5u8 {
                if i != j && !self.implies(i, j) && self.witness(i, j).is_none() {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("mode".into(), json!(self.mode.as_str()));
        obj.insert(
            "entries".into(),
            json!((1..=5u8)
                .map(|i| (1..=5u8).map(|j| self.implies(i, j)).collect::<Vec<_>>())
                .collect::<Vec<_>>()),
        );
        let mut wit = Map::new();
        for ((i, j), id) in &self.witnesses {
            wit.insert(format!("{i}->{j}"), json!(id));
        }
        obj.insert("witnesses".into(), Value::Object(wit));
        Value::Object(obj)
    }
}

fn transitive_reflexive_closure(entries: &mut [[bool; 5]; 5]) {
    for (i, row) in entries.iter_mut().enumerate() {
        row[i] = true;
    }
    loop {
        let mut changed = false;
        for i in 0..5 {
            for j in 0..5 {
                if !entries[i][j] {
                    for k in 0..5 {
                        if entries[i][k] && entries[k][j] {
                            entries[i][j] = true;
                            changed = true;
                            break;
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
}

/// The expected implication matrix for the given mode, with witnesses for
/// every missing arrow.
pub fn implication_expectations(mode: MatrixMode) -> ImplicationMatrix {
    let mut entries = [[false; 5]; 5];
    let set = |e: &mut [[bool; 5]; 5], i: usize, j: usize| e[i - 1][j - 1] = true;
    // Base arrows valid for every system.
    set(&mut entries, 2, 1);
    set(&mut entries, 2, 4);
    set(&mut entries, 2, 5);
    set(&mut entries, 4, 3);
    if mode == MatrixMode::UniformlyConvergent {
        set(&mut entries, 4, 5);
        set(&mut entries, 4, 1);
    }
    transitive_reflexive_closure(&mut entries);

    let mut witnesses = BTreeMap::new();
    for j in [2u8, 3, 4, 5] {
        witnesses.insert((1, j), "example_iii".to_string());
    }
    for j in [1u8, 2, 4, 5] {
        witnesses.insert((3, j), "example_ii".to_string());
    }
    for j in [1u8, 2, 3, 4] {
        witnesses.insert((5, j), "example_iv".to_string());
    }
    match mode {
        MatrixMode::GeneralNds => {
            for j in [1u8, 2, 5] {
                witnesses.insert((4, j), "example_v".to_string());
            }
        }
        MatrixMode::UniformlyConvergent => {
            // The alternating constraint system is not uniformly
            // convergent; a dedicated eventually-constant scenario
            // separates block returns from step periodicity.
            witnesses.insert((4, 2), "uc_detour".to_string());
        }
    }
    ImplicationMatrix {
        mode,
        entries,
        witnesses,
    }
}
