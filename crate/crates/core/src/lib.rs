//! Exact unirational parametrizations of cubic hypersurfaces.
//!
//! Given a cubic form over an exact field and a rational point, this crate
//! classifies the hypersurface, builds the third-intersection-point
//! parametrization `Ψ: A^{3n-2} ⇢ X` through a smooth point, certifies it
//! exactly, and specializes it to produce rational points.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, timing and the
//! command line live in the `unirat` companion crate.
//!
//! Layout:
//!
//! - [`algebra`]: fields, sparse multivariate polynomials, rational functions,
//!   the text grammar for forms, and small dense linear algebra.
//! - [`quadext`]: the rank-2 ring `B[t]/(c·t² + q·t + l)`.
//! - [`cubic`]: hypersurfaces, pointed decompositions, classification.
//! - [`segre`]: projection parametrizations, third points, the `Ψ` builder,
//!   verification, dominance and slicing, restriction of scalars.
//! - [`points`]: finite-field censuses, lines, characteristic 2 and 3 helpers,
//!   point generation.

#![no_std]

extern crate alloc;

pub mod algebra;
pub mod cubic;
pub mod points;
pub mod quadext;
pub mod rng;
pub mod segre;

pub use algebra::{
    AlgebraError, Field, FieldElement, Integers, Monomial, MultiPoly, RationalFunction, Ring,
    Scalar,
};
pub use cubic::{AffinePointedForm, ClassificationReport, CubicHypersurface, ProjectivePoint};
pub use quadext::{QuadExtElement, QuadExtRing};
pub use segre::{LineCertificate, PsiMap, PsiTrace};
