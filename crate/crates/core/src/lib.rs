//! Dimensionless position–momentum uncertainty of 1-D bound states in
//! power-law and box potentials, set against the classical dispersion of a
//! particle with the same energy.
//!
//! The pipeline for one state is:
//!
//! 1. [`model`]: pick a potential and fix the frame `X = x/x_max`,
//!    `P = p/p_max` from the energy;
//! 2. [`eigensolver`]: diagonalize the finite-difference Hamiltonian;
//! 3. [`quantum_moments`] and [`classical_moments`]: take the quantum and
//!    classical averages and form `(ΔX)²(ΔP)²`.
//!
//! [`oracles`] holds closed-form references, [`susy`] builds supersymmetric
//! partner potentials and [`report`] drives sweeps and data files.
//!
//! ```
//! use dimless::prelude::*;
//!
//! let spec = PotentialSpec::symmetric_power(2)?;
//! let spectrum = solve(&spec, 4, &SolverConfig::default())?;
//! let record = uncertainty_product(&spec, &spectrum, 3)?;
//! assert!((record.product_qm() - 0.25).abs() < 1e-4);
//! # Ok::<(), dimless::Error>(())
//! ```

pub mod classical_moments;
pub mod eigensolver;
pub mod error;
pub mod model;
pub mod oracles;
pub mod quadrature;
pub mod quantum_moments;
pub mod report;
pub mod special;
pub mod susy;
pub mod tridiag;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::classical_moments::{
        classical_average, classical_dispersion_product, classical_moment_closed_form, classical_momentum_density,
        ClassicalDensity,
    };
    pub use crate::eigensolver::{
        assemble_hamiltonian, build_grid, solve, solve_spectrum, Grid, SolverConfig, Spectrum,
    };
    pub use crate::error::{Error, Result};
    pub use crate::model::{dimensionless_frame, make_potential, turning_point, Family, Frame, PotentialSpec};
    pub use crate::quantum_moments::{
        momentum_first_moment, momentum_second_moment, original_variable_product, position_moment, uncertainty_product,
        MomentSet, MomentumRoute, UncertaintyRecord,
    };
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;

    #[doc = include_str!("../../../book/src/frame.md")]
    pub struct Frame;

    #[doc = include_str!("../../../book/src/eigensolver.md")]
    pub struct Eigensolver;

    #[doc = include_str!("../../../book/src/quantum.md")]
    pub struct Quantum;

    #[doc = include_str!("../../../book/src/classical.md")]
    pub struct Classical;

    #[doc = include_str!("../../../book/src/oracles.md")]
    pub struct Oracles;

    #[doc = include_str!("../../../book/src/supersymmetry.md")]
    pub struct Supersymmetry;

    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct CommandLine;
}
