use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{structural_upper_bound, x_signal, Classes, OracleMode, OracleOptions, OracleResult};
use super::simplex::{simplex_solve, LinearProgram, Relation};
use crate::error::{Error, Result};
use crate::evaluate::evaluate;
use crate::experiment::{Experiment, Symbol};
use crate::instance::Instance;
use crate::rational::{int, Rational};

/// Hard limit independent of the configurable cap: class masks are `u64`
/// and the enumeration is `4^classes`.
const HARD_LIMIT: usize = 24;

/// Best anchored experiment (all-x with probability 1 in state X).
///
/// For each candidate persuadable set `W` of classes (heaviest first) the
/// LP maximizes the Y-mass of signals under which the classes of `W` with
/// an all-x window weigh at least `k`, subject to each such class keeping
/// posterior ≥ 1/2. Only inclusion-minimal persuaded sets are kept as
/// columns: a larger set costs more constraint budget for the same gain.
///
/// `W` is skipped once `λ0(X) + λ0(Y)·min(1, ρ·|W|/k)` cannot beat the best
/// witness so far (summing the class constraints weighted by class size
/// bounds the objective by `ρ·|W|/k`), and the search stops as soon as a
/// witness meets the structural upper bound.
pub fn anchored_optimal(instance: &Instance, options: &OracleOptions) -> Result<OracleResult> {
    let classes = Classes::new(instance.network());
    let c = classes.len();
    if c > options.cap.min(HARD_LIMIT) {
        return Err(Error::TooLarge(format!(
            "{c} receiver classes exceed the anchored cap {}",
            options.cap.min(HARD_LIMIT)
        )));
    }
    let k = instance.k();
    let rho = instance.rho();
    let (lx, ly) = (instance.prior_x().clone(), instance.prior_y());
    let (upper, upper_source) = structural_upper_bound(instance);
    let full: u64 = (1u64 << c) - 1;
    let weights: Vec<usize> = (0..=full).map(|m| classes.weight(m)).collect();
    // Classes whose whole window hears x under signal sigma.
    let persuadable: Vec<u64> = (0..=full)
        .map(|sigma| {
            (0..c).filter(|&a| classes.windows[a] & !sigma == 0).fold(0u64, |m, a| m | 1 << a)
        })
        .collect();

    let mut candidates: Vec<u64> = (0..=full).filter(|&w| weights[w as usize] >= k).collect();
    candidates.sort_by(|a, b| weights[*b as usize].cmp(&weights[*a as usize]).then(a.cmp(b)));

    let mut best: Option<(Rational, Experiment)> = None;
    let mut lp_solves = 0;
    for w in candidates {
        let ratio = &rho * int(weights[w as usize] as i64) / int(k as i64);
        let bound = &lx + &ly * if ratio < Rational::one() { ratio } else { Rational::one() };
        if let Some((v, _)) = &best {
            // Candidates come heaviest first, so the bound only shrinks.
            if bound <= *v {
                break;
            }
        }
        // Persuaded set -> smallest signal realizing it.
        let mut sets: BTreeMap<u64, u64> = BTreeMap::new();
        for sigma in 0..=full {
            let u = persuadable[sigma as usize] & w;
            if weights[u as usize] >= k {
                sets.entry(u).or_insert(sigma);
            }
        }
        let all: Vec<u64> = sets.keys().copied().collect();
        let columns: Vec<(u64, u64)> = sets
            .iter()
            .filter(|(&u, _)| !all.iter().any(|&v| v != u && v & !u == 0))
            .map(|(&u, &s)| (u, s))
            .collect();

        let q = if columns.is_empty() {
            Vec::new()
        } else {
            let mut lp = LinearProgram::new(vec![Rational::one(); columns.len()]);
            lp.push(vec![Rational::one(); columns.len()], Relation::Le, Rational::one());
            for a in (0..c).filter(|&a| w >> a & 1 == 1) {
                let row: Vec<Rational> = columns
                    .iter()
                    .map(|(u, _)| if u >> a & 1 == 1 { Rational::one() } else { Rational::zero() })
                    .collect();
                if row.iter().any(|v| !v.is_zero()) {
                    lp.push(row, Relation::Le, rho.clone());
                }
            }
            lp_solves += 1;
            simplex_solve(&lp)?.x
        };

        let n = instance.n();
        let mut entries: Vec<(Vec<Symbol>, Rational, Rational)> =
            vec![(x_signal(&classes, full), Rational::one(), Rational::zero())];
        let mut used = Rational::zero();
        for ((_, sigma), mass) in columns.iter().zip(&q) {
            if !mass.is_zero() {
                entries.push((x_signal(&classes, *sigma), Rational::zero(), mass.clone()));
                used += mass;
            }
        }
        entries.push((x_signal(&classes, 0), Rational::zero(), Rational::one() - used));
        let witness = Experiment::collect(Experiment::binary_alphabets(n), entries)?;
        let value = evaluate(&witness, instance)?.value;
        if best.as_ref().is_none_or(|(v, _)| value > *v) {
            best = Some((value, witness));
        }
        if best.as_ref().is_some_and(|(v, _)| *v >= upper) {
            break;
        }
    }
    let (lower_bound, witness) = best.expect("W = all classes is always a candidate");
    Ok(OracleResult {
        exact: lower_bound == upper,
        lower_bound,
        upper_bound: upper,
        upper_source,
        witness,
        mode: OracleMode::Anchored,
        classes: c,
        lp_solves,
    })
}
