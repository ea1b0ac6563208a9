//! Decision procedures for cone-angle multisets of curvature-1 metrics with
//! co-axial monodromy, and for zero multiplicities of `sum c_j / (z - z_j)`.
//!
//! ```
//! use coaxial_core::arrangements::AngleMultiset;
//! use coaxial_core::decider::decide_admissible;
//! use coaxial_core::BasisContext;
//!
//! let alpha = AngleMultiset::parse(&["t1", "t1", "2*t1", "2*t1", "3"], BasisContext::default())?;
//! let verdict = decide_admissible(&alpha);
//! assert!(verdict.admissible);
//! # Ok::<(), coaxial_core::ArrangementError>(())
//! ```

pub mod arrangements;
pub mod decider;
pub mod exactreal;
pub mod hurwitz;
pub mod realizer;

pub use arrangements::{AngleMultiset, Arrangement, ArrangementError, MpClass, ResidueVector, Sign};
pub use decider::{DecideError, DecideOptions, InequalityAudit, Partition, Reason, Verdict};
pub use exactreal::{commensurability_class, BasisContext, Commensurability, ExactError, ExactReal};
pub use hurwitz::{BranchData, HurwitzError, Permutation, PermutationWitness, SearchOutcome};
pub use num_bigint::BigInt;
pub use num_complex::Complex64;
pub use num_rational::BigRational;
pub use realizer::{Configuration, RealizeConfig, RealizeOutcome, RealizerError};
