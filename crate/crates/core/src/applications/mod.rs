//! Elasticity-driven comparative statics, quality design and costly screening.

pub mod quality;
pub mod rotation;
pub mod screening;

pub use quality::{
    lower_increasing_envelope, quality_menu_via_ccheck, quality_menu_via_dhat, upper_decreasing_envelope,
    CcheckResult, DhatResult, EnvelopeResult, QualityProblem,
};
pub use rotation::{rotation_sweep, tier, transition, RotationPoint, RotationSweep};
pub use screening::{screening_lp_check, screening_optimal, ScreeningLp, ScreeningProblem, ScreeningResult};
