//! A persuasion problem: network, prior of state X, and critical mass.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::network::Network;
use crate::rational::{int, render, Rational};

/// A validated instance. Construct it with [`Instance::new`] (or
/// [`validate_instance`]); every accessor can then assume the rules hold:
///
/// * `0 < prior_x < 1`,
/// * `floor((n+1)/2) <= k <= n`,
/// * `prior_x < k/(n+k)`, or equality when the boundary was opted into.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    network: Network,
    prior_x: Rational,
    k: usize,
    allow_boundary: bool,
}

pub fn validate_instance(
    network: Network,
    prior_x: Rational,
    k: usize,
    allow_boundary: bool,
) -> Result<Instance> {
    let n = network.n();
    if prior_x <= Rational::zero() || prior_x >= Rational::one() {
        return Err(Error::PriorOutOfRange(render(&prior_x)));
    }
    let min = n.div_ceil(2);
    if k < min || k == 0 {
        return Err(Error::QuotaBelowMajority { k, n, min: min.max(1) });
    }
    if k > n {
        return Err(Error::QuotaAboveReceivers { k, n });
    }
    let boundary = Rational::new(BigInt::from(k), BigInt::from(n + k));
    if prior_x > boundary {
        return Err(Error::PriorOutOfRange(render(&prior_x)));
    }
    if prior_x == boundary && !allow_boundary {
        return Err(Error::BoundaryPriorRejected(render(&boundary)));
    }
    Ok(Instance { network, prior_x, k, allow_boundary })
}

impl Instance {
    pub fn new(network: Network, prior_x: Rational, k: usize, allow_boundary: bool) -> Result<Self> {
        validate_instance(network, prior_x, k, allow_boundary)
    }

    /// Same prior, quota and boundary flag on another network with the
    /// same number of receivers.
    pub fn with_network(&self, network: Network) -> Result<Self> {
        validate_instance(network, self.prior_x.clone(), self.k, self.allow_boundary)
    }

    pub fn network(&self) -> &Network {
        &self.network
    }

    pub fn n(&self) -> usize {
        self.network.n()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn allow_boundary(&self) -> bool {
        self.allow_boundary
    }

    pub fn prior_x(&self) -> &Rational {
        &self.prior_x
    }

    pub fn prior_y(&self) -> Rational {
        Rational::one() - &self.prior_x
    }

    /// `λ0(X)/λ0(Y)`: the most Y-mass an all-x window can carry while its
    /// posterior stays at least 1/2.
    pub fn rho(&self) -> Rational {
        &self.prior_x / self.prior_y()
    }

    pub fn is_boundary(&self) -> bool {
        self.prior_x == Rational::new(BigInt::from(self.k), BigInt::from(self.n() + self.k))
    }

    /// Empty-network optimum `V^n_k = (n+k)/k · λ0(X)`.
    pub fn v_upper(&self) -> Rational {
        self.v_upper_for(self.n())
    }

    /// `V^m_k` for another receiver count, e.g. `V^{n-1}_k` in the star
    /// reduction bound.
    pub fn v_upper_for(&self, m: usize) -> Rational {
        Rational::new(BigInt::from(m + self.k), BigInt::from(self.k)) * &self.prior_x
    }

    /// Public-signal optimum `2·λ0(X)`.
    pub fn v_public(&self) -> Rational {
        int(2) * &self.prior_x
    }

    /// `Ṽ = n·λ0(X) / (k·λ0(Y))`.
    pub fn v_tilde(&self) -> Rational {
        Rational::new(BigInt::from(self.n()), BigInt::from(self.k)) * self.rho()
    }
}
