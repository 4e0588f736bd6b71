use thiserror::Error;

/// Every failure the library can report.
///
/// Variants are grouped by the module that raises them. The CLI maps
/// [`Error::is_capacity`] errors to exit code 3 and everything else to 2.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    // network / instance
    #[error("network needs at least one receiver")]
    EmptyNodeSet,
    #[error("self-loop on receiver {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("receiver {index} out of range for n={n}")]
    NodeOutOfRange { index: usize, n: usize },
    #[error("prior must satisfy 0 < prior_x < 1 and prior_x <= k/(n+k); got {0}")]
    PriorOutOfRange(String),
    #[error("critical mass k={k} is below simple majority floor((n+1)/2)={min} for n={n}")]
    QuotaBelowMajority { k: usize, n: usize, min: usize },
    #[error("critical mass k={k} exceeds the number of receivers n={n}")]
    QuotaAboveReceivers { k: usize, n: usize },
    #[error("prior equals the boundary k/(n+k)={0}; pass the boundary flag to accept it")]
    BoundaryPriorRejected(String),

    // experiment
    #[error("invalid experiment: {0}")]
    InvalidExperiment(String),
    #[error("signal is not in the experiment's support")]
    SignalNotInSupport,
    #[error("information set of receiver {0} has zero probability")]
    ZeroMassInformationSet(usize),

    // families
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("not stellar: {0}")]
    NotStellar(String),
    #[error("no universal node")]
    NoUniversalNode,
    #[error("subnetwork for center {center} is not stellar: {reason}")]
    SubnetworkNotStellar { center: usize, reason: String },
    #[error("not a constellation: {0}")]
    NotConstellation(String),
    #[error("not a halo")]
    NotHalo,
    #[error("component {0:?} has no node adjacent to all others")]
    ComponentWithoutCenter(Vec<usize>),
    #[error("component {0:?} is not a clique")]
    NonCliqueComponent(Vec<usize>),
    #[error("components have unequal sizes {0:?}")]
    UnequalSizes(Vec<usize>),
    #[error("not a cluster network: {0}")]
    NotClusterNetwork(String),
    #[error("component {0:?} is not a star")]
    NotAStarComponent(Vec<usize>),
    #[error("network is not a circle")]
    NotACircle,

    // construct
    #[error("{family} construction evaluates to {actual}, expected {claimed}")]
    ClaimedValueMismatch { family: String, claimed: String, actual: String },
    #[error("k={k} too large for circle blocks on n={n} (need k <= n-3)")]
    QuotaTooLargeForBlocks { k: usize, n: usize },

    // extend
    #[error("component size {size} must exceed k={k}")]
    ComponentTooSmall { size: usize, k: usize },
    #[error("need at least {needed} nodes outside the component, found {found}")]
    NotEnoughOutsideNodes { needed: usize, found: usize },
    #[error("receiver {0} has degree above 1")]
    DegreeTooHigh(usize),
    #[error("network too small: {0}")]
    TooSmall(String),
    #[error("size out of range: {0}")]
    SizeOutOfRange(String),
    #[error("premise violated: {0}")]
    PremiseViolated(String),
    #[error("not a galaxy: {0}")]
    NotGalaxy(String),
    #[error("component {component:?} has size outside [3, {max}]")]
    ComponentSizeOutOfRange { component: Vec<usize>, max: usize },
    #[error("components {0:?} together contain exactly k receivers")]
    SubsetSumsToQuota(Vec<usize>),
    #[error("k={k} must satisfy n/2 < k < n for n={n}")]
    QuotaOutOfRange { k: usize, n: usize },
    #[error("stuck-repair matching failed: {0}")]
    RepairMatchingFailed(String),
    #[error("network {0} is not an extension of its predecessor")]
    NotAnExtensionChain(usize),
    #[error("construction produced dominating pairs: {0}")]
    CertificateFailed(String),

    // transforms
    #[error("receivers {0} and {1} have different closed neighborhoods")]
    NeighborhoodsDiffer(usize, usize),

    // oracle
    #[error("instance too large for the oracle: {0}")]
    TooLarge(String),
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
}

impl Error {
    /// Errors that mean "cannot be computed here" rather than "bad input".
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::TooLarge(_) | Error::Infeasible | Error::Unbounded)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
