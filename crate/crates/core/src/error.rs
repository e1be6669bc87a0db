use crate::model::EquilibriumKind;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("parameter `{name}` must be {requirement}, got {value}")]
    InvalidParameter {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),

    /// The error controller could not find an acceptable step.
    #[error("step size underflow at t = {t}")]
    StepSizeUnderflow { t: f64 },

    #[error("t = {t} lies outside the covered span [{start}, {end}]")]
    OutOfSpan { t: f64, start: f64, end: f64 },

    #[error("trajectory covers [{start}, {end}] but [{need_start}, {need_end}] is required")]
    TrajectoryTooShort {
        need_start: f64,
        need_end: f64,
        start: f64,
        end: f64,
    },

    #[error("{0} equilibrium is not admissible for these parameters")]
    InadmissibleEquilibrium(EquilibriumKind),

    #[error("unsupported quasi-polynomial shape: deg P = {deg_p}, deg Q = {deg_q}")]
    UnsupportedShape { deg_p: usize, deg_q: usize },

    #[error("counting contour stays within reach of a root after {attempts} jitters")]
    ContourNearRoot { attempts: u32 },

    #[error("|dD/dxi| = {modulus} is too small for a transversality estimate")]
    Degenerate { modulus: f64 },

    #[error("state is not strictly positive at t = {t}")]
    NonpositiveState { t: f64 },

    #[error("grid scan inconclusive after {level} refinement levels")]
    Inconclusive { level: u32 },
}
