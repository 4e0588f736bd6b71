//! Canonical experiments: the empty-network optimum, the public optimum,
//! circle blocks, and the two-component fixture with a bridge.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::evaluate::evaluate;
use crate::experiment::{Experiment, Symbol, X, Y};
use crate::families::circle_order;
use crate::instance::Instance;
use crate::network::Network;
use crate::rational::{binomial, int, rat, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CanonicalFamily {
    EmptyOpt,
    PublicOpt,
    CircleBlock,
    Example2,
}

/// A constructed experiment whose value on `network` was checked against
/// `claimed_value` when it was built.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CanonicalExperiment {
    pub experiment: Experiment,
    pub family: CanonicalFamily,
    #[serde(with = "crate::rational::serde_str")]
    pub claimed_value: Rational,
    pub network: Network,
}

fn checked(
    experiment: Experiment,
    family: CanonicalFamily,
    claimed_value: Rational,
    instance: &Instance,
) -> Result<CanonicalExperiment> {
    let value = evaluate(&experiment, instance)?.value;
    if value != claimed_value {
        return Err(Error::ClaimedValueMismatch {
            family: format!("{family:?}"),
            claimed: claimed_value.to_string(),
            actual: value.to_string(),
        });
    }
    Ok(CanonicalExperiment { experiment, family, claimed_value, network: instance.network().clone() })
}

fn uniform(n: usize, sym: Symbol) -> Vec<Symbol> {
    vec![sym; n]
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Fully private optimum for the empty network: in X everyone hears `x`;
/// in Y a uniformly random `k`-set hears `x` with total mass `Ṽ`, and
/// everyone hears `y` otherwise. Targets the empty network on `n`
/// receivers whatever the instance's own network is.
pub fn empty_optimal(instance: &Instance) -> Result<CanonicalExperiment> {
    let (n, k) = (instance.n(), instance.k());
    let target = instance.with_network(Network::empty(n)?)?;
    let v_tilde = instance.v_tilde();
    let each = &v_tilde / binomial(n, k);
    let mut entries = vec![(uniform(n, X), Rational::one(), Rational::zero())];
    for set in combinations(n, k) {
        let mut s = uniform(n, Y);
        for i in set {
            s[i] = X;
        }
        entries.push((s, Rational::zero(), each.clone()));
    }
    entries.push((uniform(n, Y), Rational::zero(), Rational::one() - v_tilde));
    let e = Experiment::collect(Experiment::binary_alphabets(n), entries)?;
    checked(e, CanonicalFamily::EmptyOpt, instance.v_upper(), &target)
}

/// The best public experiment: all-x in X; in Y all-x with mass
/// `λ0(X)/λ0(Y)`, all-y otherwise. Worth `2·λ0(X)` on any network.
pub fn public_optimal(instance: &Instance) -> Result<CanonicalExperiment> {
    let n = instance.n();
    let rho = instance.rho();
    let entries = vec![
        (uniform(n, X), Rational::one(), rho.clone()),
        (uniform(n, Y), Rational::zero(), Rational::one() - rho),
    ];
    let e = Experiment::collect(Experiment::binary_alphabets(n), entries)?;
    checked(e, CanonicalFamily::PublicOpt, instance.v_public(), instance)
}

/// Rotating y-blocks on a circle: in Y, for each of the `n` rotations a
/// run of `n−k−2` consecutive receivers hears `y` (mass `Ṽ/n` each), so
/// exactly `k` receivers see an all-x window. Requires `k ≤ n−3`.
pub fn circle_block(instance: &Instance) -> Result<CanonicalExperiment> {
    let (n, k) = (instance.n(), instance.k());
    let order = circle_order(instance.network()).ok_or(Error::NotACircle)?;
    if k + 3 > n {
        return Err(Error::QuotaTooLargeForBlocks { k, n });
    }
    let block = n - k - 2;
    let v_tilde = instance.v_tilde();
    let each = &v_tilde / int(n as i64);
    let mut entries = vec![(uniform(n, X), Rational::one(), Rational::zero())];
    for start in 0..n {
        let mut s = uniform(n, X);
        for t in 0..block {
            s[order[(start + t) % n]] = Y;
        }
        entries.push((s, Rational::zero(), each.clone()));
    }
    entries.push((uniform(n, Y), Rational::zero(), Rational::one() - v_tilde));
    let e = Experiment::collect(Experiment::binary_alphabets(n), entries)?;
    checked(e, CanonicalFamily::CircleBlock, instance.v_upper(), instance)
}

/// The bridge fixture: a star with center 3 and leaves 0, 1, 2, 4, a
/// triangle on 5, 6, 7, and (in the extended network) the bridge 4–5.
/// n = 8, k = 4, prior 1/3 (the boundary k/(n+k)).
pub struct Example2 {
    pub base: Network,
    pub extended: Network,
    pub instance: Instance,
    pub canonical: CanonicalExperiment,
}

pub const EXAMPLE2_BRIDGE: (usize, usize) = (4, 5);

pub fn example2_experiment() -> Result<Example2> {
    let base = Network::new(8, [(0, 3), (1, 3), (2, 3), (3, 4), (5, 6), (5, 7), (6, 7)])?;
    let extended = base.with_edges([EXAMPLE2_BRIDGE])?;
    let instance = Instance::new(extended.clone(), rat(1, 3), 4, true)?;
    let mut s = uniform(8, X);
    s[5] = Y;
    let mut t = uniform(8, X);
    t[..3].fill(Y);
    let entries = vec![
        (uniform(8, X), Rational::one(), Rational::zero()),
        (s, Rational::zero(), rat(1, 2)),
        (t, Rational::zero(), rat(1, 2)),
    ];
    let e = Experiment::collect(Experiment::binary_alphabets(8), entries)?;
    let canonical = checked(e, CanonicalFamily::Example2, Rational::one(), &instance)?;
    Ok(Example2 { base, extended, instance, canonical })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(4, 2)[0], vec![0, 1]);
        assert_eq!(combinations(4, 2)[5], vec![2, 3]);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
    }
}
