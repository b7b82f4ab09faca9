//! Momentum-space entanglement of eta-pairing ground states.
//!
//! The bond-charge extended Hubbard model at its integrable point conserves
//! the number of doubly occupied sites, and its ground state factorizes into
//! a filled Fermi sea of unpaired electrons and a uniform superposition of
//! eta pairs over the leftover momenta. That structure makes every
//! entanglement question about momentum modes a question about binomial
//! combinatorics: reduced density matrices of arbitrary mode blocks are
//! diagonal in occupancy sectors with hypergeometric weights, and all of
//! their information measures come out in closed form.
//!
//! The crate is organized in three layers:
//!
//! * closed forms — [`model`] (phase diagram, ground-state energetics),
//!   [`spectra`] (block eigenvalues at finite size and in the thermodynamic
//!   limit), [`measures`] (entropies, mutual information, negativity,
//!   off-diagonal long-range order) and [`qmeasure`] (the multipartite Q
//!   measure, including its real-valued continuation between lattice
//!   fillings);
//! * analysis — [`scan`] sweeps the phase diagram, differentiates measures
//!   numerically, and classifies the derivative singularities at the
//!   transitions (logarithmic, inverse square root, jump, or smooth);
//! * ground truth — [`oracle`] builds the exact state on up to 24 pair
//!   slots and reduces it by brute force; [`verify`] cross-validates every
//!   closed form against it and documents the two places where published
//!   expressions lose to direct enumeration.
//!
//! Entropic quantities are reported in bits throughout; convert with
//! [`measures::bits_to_nats`] if needed.

pub mod error;
pub mod measures;
pub mod model;
pub mod numerics;
pub mod oracle;
pub mod qmeasure;
pub mod scan;
pub mod spectra;
pub mod verify;

pub use error::{Error, Result};
pub use measures::EntropyForm;
pub use model::{GroundStateParams, PhasePoint, Region, Side};
pub use qmeasure::{QMode, QParams};
pub use scan::{
    MeasureKind, ScanRecord, SingularityClass, SingularityReport, SweepAxis, WindowPolicy,
};
pub use spectra::{BlockSpec, Spectrum};
