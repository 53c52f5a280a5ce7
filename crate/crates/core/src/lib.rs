//! Zeta and Möbius transforms on powerset lattices computed on focal points,
//! and the Dempster-Shafer machinery built on them.
//!
//! A set function with a small support `S` is handled through the
//! join-closure of `S` instead of the full powerset. This makes conversions
//! between masses, commonalities, implicabilities and conjunctive or
//! disjunctive weights cost `O(|S|·|fp|)` or `O(|fp|²)` rather than
//! `O(N·2^N)`, so frames of hundreds of elements stay tractable.
//!
//! ```
//! use std::sync::Arc;
//! use focal_core::{closure, zeta_on_points, efficient_mobius, FrameOfDiscernment,
//!     InversionPath, OrderDirection, Role, SetFunction};
//!
//! let frame = Arc::new(FrameOfDiscernment::new(["a", "b", "c"]).unwrap());
//! let m: SetFunction = SetFunction::new(frame.clone(), Role::Additive,
//!     [(0b111, 0.1), (0b011, 0.1), (0b110, 0.2), (0b001, 0.6)]).unwrap();
//! let fp = Arc::new(closure(frame, &m.support(), OrderDirection::Superset).unwrap());
//! assert_eq!(fp.len(), 6);
//! let q = zeta_on_points(&m, fp);
//! let back = efficient_mobius(&q, InversionPath::Recursive).unwrap();
//! assert!(back.max_abs_diff(&m) < 1e-12);
//! ```

pub mod ablation;
pub mod dst;
pub mod engine;
pub mod error;
pub mod focal;
pub mod frame;
pub mod fusion;
pub mod lattice;
pub mod mask;
pub mod order;
pub mod par;
pub mod set_function;

pub use ablation::{ablate_weight, perturb_multiplicative, Ablation, AblationSession, SignedMass};
pub use dst::{
    commonality_to_conjunctive_weights, commonality_to_mass, implicability_to_disjunctive_weights,
    implicability_to_mass, is_valid_mass, lossless_coarsen, mass_to_commonality,
    mass_to_implicability, weights_to_commonality, weights_to_implicability, weights_to_mass,
    BeliefView, CommonalityFunction, Coarsening, ImplicabilityFunction, MassFunction,
    WeightFunction, WeightKind, MASS_TOLERANCE,
};
pub use engine::{transform, Engine, Image, Listing, Representation};
pub use error::{Error, ErrorKind, Result};
pub use focal::{
    closure, efficient_mobius, efficient_mobius_multiplicative, eta_table, extend_zeta,
    focal_points_from_partition, focal_points_from_partition_nonneg, zeta_on_points, FocalFunction,
    FocalPointSet, ImagePartition, InversionPath, PartitionPart,
};
pub use frame::FrameOfDiscernment;
pub use fusion::{
    cautious_combine, combine_via_zeta, conjunctive_combine, dempster_combine,
    dempster_combine_via_commonalities, discount, disjunctive_combine,
    generalized_conjunctive_decomposition, normalize, project_mass, CautiousOptions,
    CautiousOutcome, DiscountSpec, WeightOperator, DEFAULT_ALPHA,
};
pub use lattice::{Transform, DEFAULT_MEM_CAP_BYTES};
pub use mask::{SubsetMask, WideMask};
pub use order::OrderDirection;
pub use set_function::{Role, SetFunction, SUPPORT_EPS};
