use core::fmt;

/// Everything that can go wrong inside the core crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A matrix that must be traceless is not; carries `|tr m|`.
    NonTraceless { trace: f64 },
    /// A matrix that must be Hermitian is not; carries the largest deviation.
    NotHermitian { deviation: f64 },
    /// A matrix that must be positive semidefinite has a negative eigenvalue.
    NotPsd { min_eigenvalue: f64 },
    /// The state is not a valid density matrix / Bloch vector.
    InvalidDensity(&'static str),
    /// Projected eigenvalues must be supplied as `a1 >= a2 >= a3 >= 0`.
    UnsortedEigenvalues,
    /// A direction argument is not a unit vector; carries its norm.
    NotUnit { norm: f64 },
    /// A radius of zero (or below) where the unit-vector equation is singular.
    ZeroRadius,
    /// Eigenvectors of `ρ` are undefined at the completely mixed state.
    DegenerateState,
    /// Control synthesis was asked to work below the radius floor.
    RadiusUnderflow { index: usize, radius: f64, floor: f64 },
    /// A Bloch trajectory left the unit ball.
    BallViolation { time: f64, norm: f64 },
    /// All dissipation parameters vanish: every direction is stationary.
    DegenerateSystem,
    /// Every supplied operator is (numerically) zero.
    EmptyModel,
    /// The analytic and numeric envelopes disagree beyond tolerance.
    EnvelopeMismatch { r: f64, analytic: f64, numeric: f64 },
    /// Bad argument; the message names it.
    InvalidArgument(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonTraceless { trace } => write!(f, "operator is not traceless (|tr| = {trace:e})"),
            Error::NotHermitian { deviation } => {
                write!(f, "matrix is not Hermitian (max deviation {deviation:e})")
            }
            Error::NotPsd { min_eigenvalue } => write!(
                f,
                "matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})"
            ),
            Error::InvalidDensity(why) => write!(f, "invalid density matrix: {why}"),
            Error::UnsortedEigenvalues => write!(f, "eigenvalues must satisfy a1 >= a2 >= a3 >= 0"),
            Error::NotUnit { norm } => write!(f, "direction is not a unit vector (norm {norm})"),
            Error::ZeroRadius => write!(f, "Bloch radius must be positive"),
            Error::DegenerateState => write!(f, "eigenvectors are undefined at the completely mixed state"),
            Error::RadiusUnderflow { index, radius, floor } => write!(
                f,
                "planned radius {radius:e} at sample {index} is below the synthesis floor {floor:e}"
            ),
            Error::BallViolation { time, norm } => {
                write!(f, "trajectory left the Bloch ball at t = {time} (|n| = {norm})")
            }
            Error::DegenerateSystem => write!(f, "system has no dissipation: every direction is stationary"),
            Error::EmptyModel => write!(f, "all Lindblad operators are zero"),
            Error::EnvelopeMismatch { r, analytic, numeric } => write!(
                f,
                "analytic envelope {analytic} disagrees with numeric {numeric} at r = {r}"
            ),
            Error::InvalidArgument(what) => write!(f, "invalid argument: {what}"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
