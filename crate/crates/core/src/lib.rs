//! Exact Bayesian persuasion on networks with one-hop information
//! spillovers.
//!
//! A sender commits to an experiment that sends each receiver a private
//! message; every receiver also sees the messages of its neighbours, forms
//! a posterior about a binary state, and plays `x` when that posterior is
//! at least 1/2. The sender wants at least `k` of the `n` receivers to play
//! `x`. All arithmetic is exact ([`Rational`] is an arbitrary-precision
//! fraction).
//!
//! ```
//! use spillover::{evaluate, make_family, public_optimal, rat, FamilySpec, Instance};
//!
//! let g = make_family(&FamilySpec::Circle { n: 9 })?;
//! let inst = Instance::new(g, rat(1, 3), 5, false)?;
//! assert_eq!(inst.v_upper(), rat(14, 15));
//! let public = public_optimal(&inst)?;
//! assert_eq!(evaluate(&public.experiment, &inst)?.value, rat(2, 3));
//! # Ok::<(), spillover::Error>(())
//! ```

pub mod construct;
pub mod domination;
pub mod error;
pub mod evaluate;
pub mod experiment;
pub mod extend;
pub mod families;
pub mod instance;
pub mod network;
pub mod oracle;
pub mod rational;
pub mod transforms;

pub use construct::{
    circle_block, combinations, empty_optimal, example2_experiment, public_optimal, CanonicalExperiment,
    CanonicalFamily, Example2, EXAMPLE2_BRIDGE,
};
pub use domination::{certify_value_upper_attained, dominating_pairs, DominationReport, ValueCertificate};
pub use error::{Error, Result};
pub use evaluate::{
    action, association_set, check_optimal_structure, evaluate, outcome, posterior, Action, EvaluationReport,
    RowReport, StructureVerdict,
};
pub use experiment::{Experiment, Row, Symbol, X, Y};
pub use extend::{
    extend, extend_clusters, extend_constellation, extend_galaxy, extend_halo, extend_pairs_to_circle,
    extend_stellar, sweep_values, Construction, ExtensionPlan, SweepOptions, SweepReport,
};
pub use families::{classify, make_family, FamilyLabel, FamilySpec, StellarShape};
pub use instance::{validate_instance, Instance};
pub use network::Network;
pub use oracle::{anchored_optimal, exhaustive_optimal, OracleMode, OracleOptions, OracleResult};
pub use rational::{parse_rational, rat, render, Rational};
pub use transforms::{
    anchors, center_align, center_collapse, replicate_to_empty, symmetry_merge, AnchorSet, Transformed,
};

/// Compiles the guide's snippets as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/instances.md")]
    mod instances {}
    #[doc = include_str!("../../../book/src/families.md")]
    mod families {}
    #[doc = include_str!("../../../book/src/evaluation.md")]
    mod evaluation {}
    #[doc = include_str!("../../../book/src/domination.md")]
    mod domination {}
    #[doc = include_str!("../../../book/src/constructions.md")]
    mod constructions {}
    #[doc = include_str!("../../../book/src/extensions.md")]
    mod extensions {}
    #[doc = include_str!("../../../book/src/transforms.md")]
    mod transforms {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
