use std::fmt;

use thiserror::Error;

/// Which denominator factor of the system vanished.
///
/// The order of the variants is the order in which a step tests them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Factor {
    /// `y_n` in the denominator of the first equation.
    StateY,
    /// `a_n + b_n x_n y_{n-1}`.
    FirstEquation,
    /// `x_n` in the denominator of the second equation.
    StateX,
    /// `c_n + d_n x_{n-1} y_n`.
    SecondEquation,
}

impl Factor {
    pub fn as_str(self) -> &'static str {
        match self {
            Factor::StateY => "y",
            Factor::FirstEquation => "first-equation",
            Factor::StateX => "x",
            Factor::SecondEquation => "second-equation",
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A step `n` at which the iteration cannot produce index `n + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Singularity {
    pub step: usize,
    pub factor: Factor,
}

impl fmt::Display for Singularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "singular-at({}, {})", self.step, self.factor)
    }
}

/// A closed-form evaluation hit a vanishing term or a violated validity condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Forbidden {
    /// The step at which direct iteration breaks down.
    pub singularity: Singularity,
    /// Human-readable description of the offending term or condition.
    pub condition: String,
}

impl fmt::Display for Forbidden {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "forbidden instance: {} ({})",
            self.condition, self.singularity
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed rational literal {0:?}")]
    Parse(String),

    #[error("zero denominator in rational literal {0:?}")]
    ZeroDenominator(String),

    #[error("division by zero in {site}")]
    DivisionByZero { site: &'static str },

    #[error("coefficient {component} has a zero entry at position {index}")]
    ZeroCoefficient { component: char, index: usize },

    #[error("coefficient {component} has no entries")]
    EmptyCoefficient { component: char },

    #[error("coefficient {component} requested at n = {index}, beyond table horizon {horizon}")]
    Horizon {
        component: char,
        index: i64,
        horizon: usize,
    },

    #[error("initial value {0} must be nonzero")]
    ZeroInitial(&'static str),

    #[error("{0}")]
    Domain(String),

    #[error("{0}")]
    Forbidden(Forbidden),
}

impl From<Forbidden> for Error {
    fn from(value: Forbidden) -> Self {
        Error::Forbidden(value)
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
