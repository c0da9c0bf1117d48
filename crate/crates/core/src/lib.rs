//! Exact finite models of the algebra around the Grothendieck–Teichmüller
//! group: free groups, braid groups, magma operads, finite groupoids and
//! their cohomology, operads of parenthesized braids, GT candidates and
//! finite-quotient certificates.

pub mod braid;
pub mod cohomology;
pub mod error;
pub mod freegroup;
pub mod group;
pub mod groupoid;
pub mod gt;
pub mod magma;
pub mod magnus;
pub mod operad;
pub mod pab;
pub mod quotients;
mod text;

pub use braid::{BraidGroup, BraidWord, Permutation};
pub use error::{Error, Result};
pub use freegroup::{FreeEndomorphism, FreeGroup, FreeWord};
pub use group::{Catalog, FiniteGroup, Group};
pub use groupoid::{FiniteGroupoid, GroupoidFunctor};
pub use gt::{GtCandidate, GtVerdict};
pub use magma::{AssocOperad, BasedMagmaOperad, Monomial, SetOperadElement, UnitalMagmaOperad};
pub use operad::{AuditReport, SetOperad};
pub use pab::{GroupoidOperad, OperadHomotopy, OperadMap, Pab, Paub};
pub use quotients::{CandidateData, QuotientCertificate};

/// Magnus series with 64-bit residues (moduli below `2^32`).
pub type MagnusSeries64 = magnus::MagnusSeries<u64>;
/// Magnus group with 64-bit residues (moduli below `2^32`).
pub type MagnusGroup64 = magnus::MagnusGroup<u64>;
/// Magnus group with 32-bit residues (moduli below `2^16`).
pub type MagnusGroup32 = magnus::MagnusGroup<u32>;
