//! Exact construction, verification and classification of Prym eigenforms
//! in the genus-3 strata `H(2,2)^odd` and `H(1,1,2)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`qfield`]: exact arithmetic in real quadratic fields `Q(√D)`.
//! * [`surface`]: translation surfaces as glued polygons, Delaunay
//!   triangulations and canonical forms.
//! * [`homology`]: integer homology, intersection form and induced actions.
//! * [`prym`]: prototypes, real-multiplication generators and the
//!   component invariant.
//! * [`geodesics`]: saddle connections, cylinder decompositions and the
//!   three-tori decomposition.
//! * [`deform`]: kernel (rel) deformations, collapsing a saddle connection
//!   and breaking up a zero.
//! * [`render`]: SVG output.
//! * [`cli`]: the command line front end.

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod deform;
pub mod error;
pub mod geodesics;
pub mod homology;
pub mod intmat;
pub mod prym;
pub mod qfield;
pub mod render;
pub mod surface;

pub use error::{Error, Result};
pub use qfield::{QuadNum, Vec2};
pub use surface::TranslationSurface;
