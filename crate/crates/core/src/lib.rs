//! Exact combinatorics of extended affine Weyl groups: class polynomials via
//! Deligne–Lusztig reduction, and nonemptiness and dimension of affine
//! Deligne–Lusztig varieties with independent closed-form cross-checks.

// Matrix code reads better with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod adlv;
pub mod affine_weyl;
pub mod conjugacy;
pub mod error;
pub mod hecke_cocenter;
pub mod limits;
pub mod linalg;
pub mod root_datum;
pub mod selfcheck;

pub use adlv::{AdlvEngine, AdlvReport, Dim, SigmaClass};
pub use affine_weyl::{AffElt, Alcove, PiOneElt};
pub use conjugacy::{ClassInvariant, ClassRegistry, ConjClass};
pub use error::{Error, Result};
pub use hecke_cocenter::{ClassDecomposition, CocenterEngine, LaurentPoly, PivotRule};
pub use limits::Limits;
pub use root_datum::{RationalCoweight, RootDatum, WeylElt};
