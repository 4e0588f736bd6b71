//! Experiments: finite supports of signals with per-state probabilities.

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{is_probability, Rational};

/// A message symbol. Symbols are small per-receiver integers; `0` is the
/// conventional `x` and `1` its `y`.
pub type Symbol = u32;

pub const X: Symbol = 0;
pub const Y: Symbol = 1;

pub fn symbol_name(sym: Symbol) -> String {
    match sym {
        X => "x".to_string(),
        Y => "y".to_string(),
        other => other.to_string(),
    }
}

/// One support signal and its probability in each state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub s: Vec<Symbol>,
    #[serde(rename = "pX", with = "crate::rational::serde_str")]
    pub p_x: Rational,
    #[serde(rename = "pY", with = "crate::rational::serde_str")]
    pub p_y: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Experiment {
    alphabets: Vec<Vec<Symbol>>,
    rows: Vec<Row>,
}

#[derive(Deserialize)]
struct RawExperiment {
    alphabets: Vec<Vec<Symbol>>,
    rows: Vec<Row>,
}

impl<'de> Deserialize<'de> for Experiment {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = RawExperiment::deserialize(de)?;
        Experiment::new(raw.alphabets, raw.rows).map_err(serde::de::Error::custom)
    }
}

impl Experiment {
    /// Validates the experiment invariants: both state columns sum to one,
    /// no duplicate signals, no all-zero rows, entries drawn from the
    /// receivers' alphabets.
    pub fn new(alphabets: Vec<Vec<Symbol>>, rows: Vec<Row>) -> Result<Self> {
        let n = alphabets.len();
        if n == 0 {
            return Err(Error::InvalidExperiment("no receivers".into()));
        }
        for (i, a) in alphabets.iter().enumerate() {
            let mut sorted = a.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != a.len() || a.is_empty() {
                return Err(Error::InvalidExperiment(format!(
                    "alphabet of receiver {i} is empty or repeats a symbol"
                )));
            }
        }
        let mut seen = HashMap::new();
        let (mut sx, mut sy) = (Rational::zero(), Rational::zero());
        for (r, row) in rows.iter().enumerate() {
            if row.s.len() != n {
                return Err(Error::InvalidExperiment(format!("row {r} has length {}", row.s.len())));
            }
            for (i, sym) in row.s.iter().enumerate() {
                if !alphabets[i].contains(sym) {
                    return Err(Error::InvalidExperiment(format!(
                        "row {r}: symbol {sym} not in alphabet of receiver {i}"
                    )));
                }
            }
            if !is_probability(&row.p_x) || !is_probability(&row.p_y) {
                return Err(Error::InvalidExperiment(format!("row {r}: probability outside [0,1]")));
            }
            if row.p_x.is_zero() && row.p_y.is_zero() {
                return Err(Error::InvalidExperiment(format!("row {r} is outside the support")));
            }
            if seen.insert(row.s.clone(), r).is_some() {
                return Err(Error::InvalidExperiment(format!("row {r} duplicates a signal")));
            }
            sx += &row.p_x;
            sy += &row.p_y;
        }
        if !sx.is_one() || !sy.is_one() {
            return Err(Error::InvalidExperiment(format!(
                "state probabilities sum to {sx} and {sy}, expected 1"
            )));
        }
        Ok(Self { alphabets, rows })
    }

    /// Builds an experiment from possibly repeated signals: masses of equal
    /// signals are added, zero rows dropped, first-appearance order kept.
    pub fn collect(
        alphabets: Vec<Vec<Symbol>>,
        entries: impl IntoIterator<Item = (Vec<Symbol>, Rational, Rational)>,
    ) -> Result<Self> {
        let mut index: HashMap<Vec<Symbol>, usize> = HashMap::new();
        let mut rows: Vec<Row> = Vec::new();
        for (s, px, py) in entries {
            match index.get(&s) {
                Some(&r) => {
                    rows[r].p_x += px;
                    rows[r].p_y += py;
                }
                None => {
                    index.insert(s.clone(), rows.len());
                    rows.push(Row { s, p_x: px, p_y: py });
                }
            }
        }
        rows.retain(|r| !(r.p_x.is_zero() && r.p_y.is_zero()));
        Self::new(alphabets, rows)
    }

    /// Binary alphabets `{x, y}` for each of `n` receivers.
    pub fn binary_alphabets(n: usize) -> Vec<Vec<Symbol>> {
        vec![vec![X, Y]; n]
    }

    pub fn n(&self) -> usize {
        self.alphabets.len()
    }

    pub fn alphabets(&self) -> &[Vec<Symbol>] {
        &self.alphabets
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn find(&self, signal: &[Symbol]) -> Option<usize> {
        self.rows.iter().position(|r| r.s == signal)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("experiment serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("experiment JSON: {e}")))
    }
}
