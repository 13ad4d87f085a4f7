//! Numerical machinery for homeomorphisms of the plane that preserve C¹
//! curves: tangent lines as points of the projective tangent bundle, the
//! induced maps on tangent directions, transverse sequences, and an explicit
//! construction of simple closed C¹ curves through prescribed tangents.
//!
//! Every limit is replaced by a finite tail governed by
//! [`ResolutionParams`], and every decision is a [`Verdict`] stamped with
//! the resolution that produced it.

pub mod curves;
pub mod error;
pub mod induced;
pub mod interpolation;
pub mod io;
pub mod maps;
pub mod projgeom;
pub mod sequences;
pub mod tail;
pub mod verdict;
pub mod verifier;

pub use curves::{ParamCurve, SlopeEstimate};
pub use error::{Error, Result};
pub use maps::PlaneMap;
pub use projgeom::{cyclic_order, dir_from_slope, proj_distance, CyclicOrder, Point2, ProjDir, ResolutionParams};

pub use sequences::{DirectionSequence, PTPoint};
pub use verdict::{Status, Verdict};
