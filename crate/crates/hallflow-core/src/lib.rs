//! Exact plane flows of an electrically conducting second-grade fluid in a
//! porous-medium channel with Hall currents.
//!
//! The crate constructs the closed-form solution families of the governing
//! stream-function equation (separable `ξ(x) + η(y)` flows and Riabouchinsky
//! flows `y·ξ(x)` and `y·ξ(x) + η(x)`), evaluates their velocity, vorticity
//! and pressure fields in complex arithmetic, and certifies each field
//! against the governing equations with an independent finite-difference
//! residual engine. Streamlines come both from the closed-form inversions
//! (Lambert W where needed) and from a marching-squares contour tracer used
//! as a cross-method oracle.

pub mod field;
pub mod params;
pub mod presets;
pub mod solutions;
pub mod special;
pub mod verify;

pub use num_complex::Complex64;

pub use field::{Grid, Projection, StreamlineSet};
pub use params::{derive, DerivedParams, FluidParams, Permeability, ThermoClass};
pub use solutions::{FieldSample, FlowSolution, SolutionConfig};
pub use verify::ResidualReport;
