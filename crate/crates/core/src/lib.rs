//! Covering radii of permutation group codes under the l∞ (Chebyshev) metric.
//!
//! A code `C ⊆ Sₙ` covers `Sₙ` with radius `r` when every permutation lies
//! within l∞ distance `r` of some codeword. This crate builds the cyclic,
//! dihedral and block-rotation product codes (and their relabelings),
//! evaluates closed-form radii and bounds, constructs verified exposed
//! permutations, and computes exact radii by search.
//!
//! ```
//! use permcover_core::{make_dihedral, radius_auto, SolverConfig};
//!
//! let code = make_dihedral(7).unwrap();
//! let r = radius_auto(&code, &SolverConfig::default()).unwrap();
//! assert_eq!(r.value, 4);
//! ```

pub mod error;
pub mod exposure;
pub mod formulas;
pub mod group;
pub mod perm;
pub mod solver;
pub mod witness;

pub use error::{Error, Result};
pub use exposure::{aset, counting_bound, explain, exposure_by_asets, window_sets, ASet, ExposureReport, WindowSets};
pub use formulas::{
    dn_bounds, dn_weak_lower, lmax_cyclic, lmax_pq, lmax_product, lmin_cyclic_lower, lmin_pq_lower, r_cyclic, r_pq,
    r_product, BoundsInterval, ClampedBound,
};
pub use group::{
    make_cyclic, make_dihedral, make_product, make_symmetric, relabel, Block, CodeDescriptor, FactorProfile,
    GroupCode,
};
pub use perm::{distance_to_code, is_r_exposed, linf_distance, PartialPlacement, Permutation};
pub use solver::{
    radius_auto, radius_bruteforce, radius_restricted, RadiusResult, RadiusStatus, SolverConfig, SolverStats,
};
pub use witness::{
    verify_witness, witness_dn, witness_dn_refined, witness_lmax, witness_pq, VerificationReport, WitnessBundle,
};
