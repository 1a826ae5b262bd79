//! Quadrinomials `1 + κ(z + z^{N-1}) + z^N` and `1 + κ(z - z^{N-1}) - z^N`
//! with all zeros on the unit circle, together with the root solver,
//! Chebyshev machinery, trinomial stability domains and univalent
//! polynomial families built on them.

mod error;

pub mod boundary;
pub mod chebyshev;
pub mod kappa;
pub mod poly;
pub mod quadrinomial;
pub mod roots;
pub mod stability;
pub mod univalent;

pub use boundary::{boundary_image, simple_curve_scan, BoundaryImage, BoundarySample};
pub use chebyshev::{ChebKind, ChebRootList};
pub use error::{Error, Result};
pub use kappa::Kappa;
pub use poly::{RealPoly, Reciprocity};
pub use quadrinomial::{
    build_quadrinomial, circle_criterion, cusp_angles, factorize_limit_case, CriterionCheck,
    FactoredForm, Family, LinearFactor, QuadSpec, SweepRecord,
};
pub use roots::{classify_roots, find_roots, CircleCounts, Root, RootSet, SolverOptions};
pub use stability::{CohnVerdict, CurveLabel, CurveSet};
pub use univalent::NormalizedPoly;
