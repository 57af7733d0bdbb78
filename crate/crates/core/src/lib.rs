//! Generic frequency decomposition of periodic signals.
//!
//! A signal `f` on `[0, 1)` is expanded as
//! `f(x) ~ c0 + sum_{k=1..N} A_k S(kx) + B_k R(kx)` over a basis pair
//! `[S, R]` that need not be orthogonal. Two analyses are provided: a direct
//! solve of the dilated family's Gram system and an indirect, harmonic by
//! harmonic deflation of the residual. Basis validity checks, generalized
//! spectra, band filtering and multi-basis schedules build on top.

pub mod basis;
pub mod decompose;
pub mod error;
pub mod io;
pub mod linalg;
pub mod schedule;
pub mod signal;
pub mod spectrum;
pub mod tolerance;
pub mod waveform;

pub use basis::{
    builtin_basis, check_convergence, check_independence, classify_orthogonality, default_builtin, dilate,
    frame_bounds, BasisFunction, BasisKind, BasisPair, ConvergenceReport, FrameBounds, IndependenceReport,
    Orthogonality, OrthogonalityReport,
};
pub use decompose::{
    analyze, analyze_direct, analyze_indirect, analyze_multiband, build_gram_system, reconstruct, residual, rms_error,
    BasisSource, Decomposition, GramSystem, Method, Pruning,
};
pub use error::{GfdError, Result};
pub use schedule::{BasisSchedule, Segment};
pub use signal::{
    analyze_fourier, inner_product, norm, sample_closed_form, synthesize_fourier, FourierSpectrum, PeriodicSignal,
};
pub use spectrum::{band_filter, generalized_spectrum, parseval_power, GeneralizedSpectrum};
pub use tolerance::Tolerances;
