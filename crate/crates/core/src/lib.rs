//! Nonunitary Gaussian circuit dynamics reduced to per-momentum SL(2,ℂ)
//! Möbius transformations.
//!
//! The crate simulates translation-invariant free-fermion circuits built from
//! `exp(-it Σ X_j)`, `exp(-it Σ Y_{j+1}Y_j)`, `exp(-it Σ Z_{j+1}Z_j)` and
//! postselected weak measurements `exp(λ Σ X_j)`. On BCS coherent states the
//! whole evolution factorizes over momentum pairs `(k, -k)` and acts on the
//! pairing amplitude `f(k)` as a Möbius transformation, so a circuit of `n`
//! layers is a product of `n` 2×2 complex matrices per momentum.
//!
//! Modules:
//! - [`mobius`]: 2×2 complex matrix kernel, Möbius action, orbit classification.
//! - [`gates`]: per-momentum matrices of the elementary gates and circuit blocks.
//! - [`sequences`]: Floquet / Fibonacci / Thue–Morse / random temporal words.
//! - [`trace_maps`]: Fibonacci 3D trace map (with invariant) and Thue–Morse 2D map.
//! - [`lyapunov`]: Lyapunov-exponent estimators (products, traces, trace maps, ensembles).
//! - [`entanglement`]: mode evolution, Fourier coefficients, block-Toeplitz
//!   correlation matrices, entanglement entropy and scaling fits.
//! - [`oracle`]: exact statevector simulator (L ≤ 12) used to validate everything.
//! - [`scans`]: closed-form phase boundaries, phase-diagram grids, SU(2)
//!   simultaneous-similarity checker.

pub mod entanglement;
pub mod gates;
pub mod lyapunov;
pub mod mobius;
pub mod oracle;
pub mod scans;
pub mod sequences;
pub mod trace_maps;

pub use entanglement::{EntropyProfile, FourierCoeffs, ModeAmplitudes};
pub use gates::{BlockKind, GateSet};
pub use lyapunov::LyapunovEstimate;
pub use mobius::{Amplitude, Mat2C, MobiusClass, MomentumGrid};
pub use sequences::{Letter, SequenceKind, Word};
pub use trace_maps::{TmRegion, TracePair, TraceTriple};

/// Complex double shorthand used throughout.
pub type C64 = num_complex::Complex64;

/// Error type shared by all modules.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("matrix is numerically singular (|det| = {0:.3e})")]
    SingularMatrix(f64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("trace is not real (|Im| = {0:.3e})")]
    NonRealTrace(f64),
    #[error("subsystem of {ell} sites does not fit in a chain of {l} sites")]
    Dimension { ell: usize, l: usize },
    #[error("statevector oracle limited to L <= 12, got L = {0}")]
    SizeLimit(usize),
    #[error("eigensolver failed to converge")]
    EigSolverFailure,
    #[error("matrix is parabolic (degenerate eigenvectors), similarity construction undefined")]
    DegenerateEigenvectors,
    #[error("not enough data points for fit: need {need}, have {have}")]
    InsufficientData { need: usize, have: usize },
    #[error("entropy profile contains non-positive values, power-law fit undefined")]
    NonPositiveEntropy,
}

pub type Result<T> = std::result::Result<T, Error>;
