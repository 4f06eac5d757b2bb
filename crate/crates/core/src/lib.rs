//! Numerical toolkit for the planar Gaussian-Minkowski problem.
//!
//! The toolkit covers three connected pieces of machinery:
//!
//! * **Geometry** ([`geom`]): support functions, Wulff shapes, Gaussian
//!   surface-area measures of polygons and smooth bodies, Gaussian measure
//!   `γ₂`, and the Gaussian isoperimetric inequality.
//! * **Uniqueness certificates** ([`scalar`], [`theta`], [`phase_plane`]):
//!   the constant-solution classification of
//!   `e^{-(h'²+h²)/2}(h''+h) = c` on the circle, good pairs, the angular
//!   half-period integral Θ with two independent evaluation routes
//!   (singularity-removing quadrature and ODE shooting), and grid scans
//!   certifying `Θ > π` — hence no nonconstant solutions.
//! * **Existence** ([`solve`]): a Newton/homotopy continuation solver for
//!   prescribed even measure data, recovering both solution branches
//!   (bodies with `γ₂ < 1/2` and `γ₂ > 1/2`).
//!
//! See the crate examples for runnable tours of each capability, and the
//! `gm2` binary for the command-line surface.

pub mod geom;
pub mod io;
pub mod ode;
pub mod phase_plane;
pub mod quad;
pub mod scalar;
pub mod solve;
pub mod special;
pub mod spectral;
pub mod theta;

pub use geom::{Body, ConvexPolygon, DiscreteMeasure, SupportSamples};
pub use phase_plane::{OdeState, PeriodicSearchReport, Trajectory};
pub use quad::{QuadratureConfig, Scheme};
pub use scalar::{ConstantSolutionSet, CriticalRadii, GoodPair};
pub use solve::{Branch, PrescribedData, SolveResult, SolverConfig};
pub use theta::{ThetaResult, ThetaScan};
