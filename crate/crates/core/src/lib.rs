#![allow(clippy::needless_range_loop, clippy::manual_is_multiple_of)]

//! Certificates for matrix-form uncertainty principles on phase-space
//! covariance data, with first-order support for position-position and
//! momentum-momentum deformations of the Heisenberg algebra.
//!
//! The crate is organized around the pipeline
//!
//! 1. [`matcore`] - dense Hermitian eigensolver and positivity tests;
//! 2. [`symplectic`] - standard and deformed forms, Darboux maps, and the
//!    form-relative Williamson spectrum;
//! 3. [`algebra`] - exact Heisenberg evolution of linear observables in jet
//!    arithmetic, the oracle behind the closed-form models;
//! 4. [`models`] - amplifier and transducer measurement models, noise
//!    matrices, effective forms;
//! 5. [`certify`] - the uncertainty checkers and their reports;
//! 6. [`explore`] - randomized violation search and gain sweeps.

pub mod algebra;
pub mod certify;
pub mod error;
pub mod explore;
pub mod matcore;
pub mod models;
pub mod symplectic;

pub use algebra::{
    bae_hamiltonian, bae_output_vector, commutator, composite_omega, evolve, evolve_piecewise,
    extract_linear_model, nqt_output_vector, nqt_stages, output_commutator_matrix,
    CommutatorForm, Jet, JetMat, Observable, QuadraticHamiltonian, BASIS_LABELS, BASIS_LEN,
};
pub use certify::{
    check_form, nqt_feasibility, oup_matrix, rsup, scalar_ozawa, CertReport, Principle,
    ScalarOzawa, DEFAULT_TOL,
};
pub use error::{Error, Result};
pub use matcore::{herm_eigen, is_psd, EigenResult, HermitianMatrix, PsdCheck, RMat};
pub use models::{
    bae_model, noise_matrix, nqt_model, scalar_measures, CovarianceMatrix, MeasurementModel,
    ModelKind,
};
pub use explore::{
    find_violation, gain_sweep, sample_probe_cov, verify_witness, SearchConfig, SweepRow,
    ViolationWitness,
};
pub use symplectic::{
    build_omega, min_uncertainty_directions, standard_j, sw_map, symplectic_spectrum,
    williamson_diag, MinUncertainty, NCParams, SkewForm, SymplecticSpectrum,
};
