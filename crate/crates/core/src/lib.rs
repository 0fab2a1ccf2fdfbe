//! Generalized Naimark complements for finite frames and Bessel sequences.
//!
//! A finite frame is stored as its synthesis matrix (one column per frame
//! vector). From it the crate builds
//!
//! * the frame operator spectrum and optimal frame bounds ([`frame`]),
//! * the minimal (or padded) completion to a tight frame ([`completion`]),
//! * the Naimark complement, with verifiers for the Gram identity
//!   `G*G = B·I − F*F`, closed-form complement bounds and unitary equivalence
//!   ([`complement`]),
//! * property carryover checks including exhaustive RIP constants
//!   ([`properties`]),
//! * fusion frames, their complements, principal angles and chordal
//!   distances ([`fusion`]).
//!
//! The [`io`] and [`cli`] modules provide the JSON/CSV file formats and the
//! `naimark` command-line tool. Runnable walkthroughs live in the crate's
//! `examples/` directory.
//!
//! ```
//! use naimark::{complement::naimark_complement, completion::CompletionMode, Frame, Mat};
//!
//! let f = Frame::new(Mat::real_from_rows(&[[1.0, 0.0], [0.0, 0.5]]).unwrap()).unwrap();
//! let result = naimark_complement(&f, CompletionMode::Minimal, 1e-9).unwrap();
//! assert_eq!(result.complement.shape(), (1, 2));
//! assert!((result.complement.get(0, 1).re - 3f64.sqrt() / 2.0).abs() < 1e-12);
//! ```

pub mod cli;
pub mod complement;
pub mod completion;
pub mod error;
pub mod frame;
pub mod fusion;
pub mod io;
pub mod numkernel;
pub mod properties;
pub mod random;

use serde::{Deserialize, Serialize};

pub use error::{NaimarkError, Result};
pub use frame::Frame;
pub use numkernel::{Field, Mat};

/// Default relative tolerance for verification checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Default relative tolerance for detecting the multiplicity of the top
/// frame-operator eigenvalue.
pub const DEFAULT_MULT_TOL: f64 = 1e-9;

/// Outcome of a single numerical check: a residual compared against a
/// tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn new(residual: f64, tolerance: f64) -> Check {
        Check {
            passed: residual <= tolerance,
            residual,
            tolerance,
        }
    }

    /// A check that holds trivially.
    pub fn vacuous(tolerance: f64) -> Check {
        Check::new(0.0, tolerance)
    }
}
