use serde::Serialize;

use crate::construct::{circle_block, empty_optimal};
use crate::domination::dominating_pairs;
use crate::error::{Error, Result};
use crate::families::{circle_order, classify, FamilyLabel};
use crate::instance::Instance;
use crate::network::Network;
use crate::oracle::{anchored_optimal, structural_upper_bound, OracleOptions};
use crate::rational::Rational;

/// Where a sweep's lower bound comes from; listed in tie-break priority.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueSource {
    Construction,
    Oracle,
    Public,
    Domination,
}

impl ValueSource {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Construction => "construction",
            Self::Oracle => "oracle",
            Self::Public => "public",
            Self::Domination => "domination",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRecord {
    pub index: usize,
    pub label: FamilyLabel,
    pub edge_count: usize,
    #[serde(with = "crate::rational::serde_str")]
    pub value_lower: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub value_upper: Rational,
    /// `value_lower == value_upper`.
    pub certified: bool,
    pub source: ValueSource,
    pub upper_source: String,
    pub notes: Vec<String>,
}

/// A step along which the best known value went up.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonotonicityViolation {
    pub from: usize,
    pub to: usize,
    /// The later lower bound exceeds the earlier upper bound, so the
    /// increase is proven rather than merely observed.
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub records: Vec<SweepRecord>,
    pub violations: Vec<MonotonicityViolation>,
    pub monotonic: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[derive(Default)]
pub struct SweepOptions {
    pub oracle: OracleOptions,
}


fn record(index: usize, instance: &Instance, options: &SweepOptions) -> Result<SweepRecord> {
    let g = instance.network();
    let (upper, upper_source) = structural_upper_bound(instance);
    let mut notes = Vec::new();
    let mut candidates: Vec<(Rational, ValueSource)> = vec![(instance.v_public(), ValueSource::Public)];
    if g.edge_count() == 0 {
        candidates.push((empty_optimal(instance)?.claimed_value, ValueSource::Construction));
    }
    if circle_order(g).is_some() {
        match circle_block(instance) {
            Ok(c) => candidates.push((c.claimed_value, ValueSource::Construction)),
            Err(e) => notes.push(format!("circle block unavailable: {e}")),
        }
    }
    let report = dominating_pairs(g);
    if report.is_empty() {
        notes.push("no dominating pairs: V^n_k attainable".into());
        candidates.push((instance.v_upper(), ValueSource::Domination));
    } else {
        notes.push(format!("{} dominating pairs", report.count));
    }
    let best_so_far = candidates.iter().map(|c| &c.0).max().cloned().expect("public is always present");
    if best_so_far < upper {
        match anchored_optimal(instance, &options.oracle) {
            Ok(r) => candidates.push((r.lower_bound, ValueSource::Oracle)),
            Err(e) if e.is_capacity() => notes.push(format!("oracle skipped: {e}")),
            Err(e) => return Err(e),
        }
    }
    let (value_lower, source) = candidates
        .into_iter()
        .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
        .expect("nonempty");
    Ok(SweepRecord {
        index,
        label: classify(g),
        edge_count: g.edge_count(),
        certified: value_lower == upper,
        value_lower,
        value_upper: upper,
        source,
        upper_source,
        notes,
    })
}

/// Best known value of every network in an extension chain, with the
/// steps along which it increases.
///
/// Each network is scored with the instance's prior, `k` and boundary
/// flag. Consecutive networks must share the node set, and each must keep
/// every link of its predecessor (repeating a network is allowed).
pub fn sweep_values(instance: &Instance, networks: &[Network], options: &SweepOptions) -> Result<SweepReport> {
    for (t, pair) in networks.windows(2).enumerate() {
        let (prev, next) = (&pair[0], &pair[1]);
        if next != prev && !next.is_extension_of(prev) {
            return Err(Error::NotAnExtensionChain(t + 1));
        }
    }
    let mut records = Vec::with_capacity(networks.len());
    for (t, g) in networks.iter().enumerate() {
        records.push(record(t, &instance.with_network(g.clone())?, options)?);
    }
    let violations: Vec<MonotonicityViolation> = records
        .windows(2)
        .filter(|w| w[1].value_lower > w[0].value_lower)
        .map(|w| MonotonicityViolation {
            from: w[0].index,
            to: w[1].index,
            certified: w[1].value_lower > w[0].value_upper,
        })
        .collect();
    Ok(SweepReport { monotonic: violations.is_empty(), records, violations })
}
