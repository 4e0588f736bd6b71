use num_traits::{One, Zero};

use super::simplex::{simplex_solve, LinearProgram, Relation};
use super::{structural_upper_bound, x_signal, Classes, OracleMode, OracleResult};
use crate::error::{Error, Result};
use crate::evaluate::evaluate;
use crate::experiment::{Experiment, Symbol};
use crate::instance::Instance;
use crate::rational::Rational;

pub const EXHAUSTIVE_MAX_N: usize = 4;
/// Information cells (class, window pattern) the enumeration accepts; the
/// number of action patterns is `2^cells`.
pub const EXHAUSTIVE_CELL_CAP: usize = 20;

struct Cells {
    offsets: Vec<usize>,
    total: usize,
}

impl Cells {
    fn new(classes: &Classes) -> Self {
        let mut offsets = Vec::with_capacity(classes.len());
        let mut total = 0;
        for &w in &classes.windows {
            offsets.push(total);
            total += 1 << w.count_ones();
        }
        Self { offsets, total }
    }

    /// Cell of class `a` under class-level signal `sigma` (bit = x).
    fn cell(&self, classes: &Classes, a: usize, sigma: u64) -> usize {
        let (mut pattern, mut bit) = (0usize, 0);
        for b in 0..classes.len() {
            if classes.windows[a] >> b & 1 == 1 {
                pattern |= ((sigma >> b & 1) as usize) << bit;
                bit += 1;
            }
        }
        self.offsets[a] + pattern
    }
}

/// Weight- and window-preserving permutations of the classes.
fn automorphisms(classes: &Classes) -> Vec<Vec<usize>> {
    fn rec(classes: &Classes, perm: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let c = classes.len();
        if perm.len() == c {
            let map = |m: u64| (0..c).filter(|&b| m >> b & 1 == 1).fold(0u64, |acc, b| acc | 1 << perm[b]);
            if (0..c).all(|a| map(classes.windows[a]) == classes.windows[perm[a]]) {
                out.push(perm.clone());
            }
            return;
        }
        let a = perm.len();
        for b in 0..c {
            if !used[b] && classes.members[a].len() == classes.members[b].len() {
                used[b] = true;
                perm.push(b);
                rec(classes, perm, used, out);
                perm.pop();
                used[b] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(classes, &mut Vec::new(), &mut vec![false; classes.len()], &mut out);
    out
}

/// Cell permutations induced by relabelling messages (per-class flips) and
/// by class automorphisms. Each of these maps experiments to experiments
/// with the same value, so only orbit minima need to be solved.
fn symmetry_group(classes: &Classes, cells: &Cells) -> Vec<Vec<usize>> {
    let c = classes.len();
    let mut group = Vec::new();
    for perm in automorphisms(classes) {
        for flip in 0..1u64 << c {
            let act = |sigma: u64| {
                (0..c).fold(0u64, |acc, b| acc | (sigma >> b & 1) << perm[b]) ^ flip
            };
            let mut image = vec![0; cells.total];
            for a in 0..c {
                // Enumerate the window patterns of `a` via representative
                // signals that are zero outside the window.
                let window = classes.windows[a];
                let mut sub = window;
                loop {
                    image[cells.cell(classes, a, sub)] = cells.cell(classes, perm[a], act(sub));
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & window;
                }
            }
            group.push(image);
        }
    }
    group
}

fn is_orbit_minimum(assignment: u64, group: &[Vec<usize>]) -> bool {
    group.iter().all(|image| {
        let mapped = image
            .iter()
            .enumerate()
            .filter(|(cell, _)| assignment >> cell & 1 == 1)
            .fold(0u64, |acc, (_, &t)| acc | 1 << t);
        mapped >= assignment
    })
}

/// Best experiment in which every member of a class hears the same binary
/// message, found by enumerating which information cells play x.
///
/// For an action pattern the closed LP asks: x-cells carry posterior ≥ 1/2,
/// y-cells ≤ 1/2, and maximizes the probability of signals whose x-cells
/// weigh at least `k`. The solution's witness is re-evaluated with the true
/// tie-break (ties go to x), which can only add x-actions, so its value is
/// at least the LP objective; conversely every experiment in scope is
/// feasible for the LP of its own pattern. The maximum over patterns is
/// therefore attained, and `exact` reports exactly that — within the
/// binary, class-uniform scope.
pub fn exhaustive_optimal(instance: &Instance) -> Result<OracleResult> {
    let n = instance.n();
    if n > EXHAUSTIVE_MAX_N {
        return Err(Error::TooLarge(format!("exhaustive mode needs n <= {EXHAUSTIVE_MAX_N}, got {n}")));
    }
    let classes = Classes::new(instance.network());
    let c = classes.len();
    let cells = Cells::new(&classes);
    if cells.total > EXHAUSTIVE_CELL_CAP {
        return Err(Error::TooLarge(format!(
            "{} information cells exceed the exhaustive cap {EXHAUSTIVE_CELL_CAP}",
            cells.total
        )));
    }
    let k = instance.k();
    let (lx, ly) = (instance.prior_x().clone(), instance.prior_y());
    let (bound, bound_source) = structural_upper_bound(instance);
    let signals = 1usize << c;
    let cell_of: Vec<Vec<usize>> = (0..signals as u64)
        .map(|s| (0..c).map(|a| cells.cell(&classes, a, s)).collect())
        .collect();
    let group = symmetry_group(&classes, &cells);

    let mut best: Option<(Rational, Experiment)> = None;
    let mut max_lp: Option<Rational> = None;
    let mut lp_solves = 0;
    let mut stopped_early = false;
    for assignment in 0..1u64 << cells.total {
        if !is_orbit_minimum(assignment, &group) {
            continue;
        }
        let outcome_x: Vec<bool> = cell_of
            .iter()
            .map(|cs| {
                (0..c)
                    .filter(|&a| assignment >> cs[a] & 1 == 1)
                    .map(|a| classes.members[a].len())
                    .sum::<usize>()
                    >= k
            })
            .collect();
        if !outcome_x.iter().any(|&b| b) {
            continue;
        }
        // Variables: pX(s) for s < signals, then pY(s).
        let mut objective = vec![Rational::zero(); 2 * signals];
        for s in (0..signals).filter(|&s| outcome_x[s]) {
            objective[s] = lx.clone();
            objective[signals + s] = ly.clone();
        }
        let mut lp = LinearProgram::new(objective);
        for half in 0..2 {
            let mut row = vec![Rational::zero(); 2 * signals];
            for v in &mut row[half * signals..(half + 1) * signals] {
                *v = Rational::one();
            }
            lp.push(row, Relation::Eq, Rational::one());
        }
        for a in 0..c {
            let window = classes.windows[a];
            let mut sub = window;
            loop {
                let cell = cells.cell(&classes, a, sub);
                let mut row = vec![Rational::zero(); 2 * signals];
                for s in (0..signals).filter(|&s| cell_of[s][a] == cell) {
                    row[s] = lx.clone();
                    row[signals + s] = -ly.clone();
                }
                let rel = if assignment >> cell & 1 == 1 { Relation::Ge } else { Relation::Le };
                lp.push(row, rel, Rational::zero());
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & window;
            }
        }
        lp_solves += 1;
        let sol = match simplex_solve(&lp) {
            Ok(sol) => sol,
            Err(Error::Infeasible) => continue,
            Err(e) => return Err(e),
        };
        if max_lp.as_ref().is_none_or(|m| sol.value > *m) {
            max_lp = Some(sol.value.clone());
        }
        let mut entries: Vec<(Vec<Symbol>, Rational, Rational)> = Vec::new();
        for s in 0..signals {
            let (px, py) = (&sol.x[s], &sol.x[signals + s]);
            if !px.is_zero() || !py.is_zero() {
                entries.push((x_signal(&classes, s as u64), px.clone(), py.clone()));
            }
        }
        let witness = Experiment::collect(Experiment::binary_alphabets(n), entries)?;
        let value = evaluate(&witness, instance)?.value;
        if best.as_ref().is_none_or(|(v, _)| value > *v) {
            best = Some((value, witness));
        }
        if best.as_ref().is_some_and(|(v, _)| *v >= bound) {
            stopped_early = true;
            break;
        }
    }
    let (lower_bound, witness) = match best {
        Some(b) => b,
        None => {
            // No pattern ever reaches k: the sender cannot do better than
            // never getting x, which the all-y experiment attains.
            let e = Experiment::collect(
                Experiment::binary_alphabets(n),
                vec![(x_signal(&classes, 0), Rational::one(), Rational::one())],
            )?;
            (evaluate(&e, instance)?.value, e)
        }
    };
    let (upper_bound, upper_source) = match max_lp {
        Some(m) if !stopped_early && m < bound => (m, "max closed-LP value over action patterns".to_string()),
        _ => (bound, bound_source),
    };
    let upper_bound = if upper_bound < lower_bound { lower_bound.clone() } else { upper_bound };
    Ok(OracleResult {
        exact: lower_bound == upper_bound,
        lower_bound,
        upper_bound,
        upper_source,
        witness,
        mode: OracleMode::Exhaustive,
        classes: c,
        lp_solves,
    })
}
