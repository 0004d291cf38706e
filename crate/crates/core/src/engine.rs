//! Direct iteration of the system
//!
//! ```text
//! x_{n+1} = x_n y_{n-1} / (y_n (a_n + b_n x_n y_{n-1}))
//! y_{n+1} = x_{n-1} y_n / (x_n (c_n + d_n x_{n-1} y_n))
//! ```
//!
//! starting from `(x_{-1}, x_0, y_{-1}, y_0)`. This is the ground truth every
//! closed form and reduction is compared against.

use crate::coefficients::{CoefficientQuad, Coeffs};
use crate::error::{Error, Factor, Result, Singularity};
use crate::numeric::ExactRational;
use crate::symmetry::GeneratorSpec;

/// `(x_{-1}, x_0, y_{-1}, y_0)`, all nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InitialState {
    pub x_prev: ExactRational,
    pub x0: ExactRational,
    pub y_prev: ExactRational,
    pub y0: ExactRational,
}

impl InitialState {
    pub fn new(
        x_prev: ExactRational,
        x0: ExactRational,
        y_prev: ExactRational,
        y0: ExactRational,
    ) -> Result<Self> {
        for (name, value) in [
            ("x_prev", &x_prev),
            ("x0", &x0),
            ("y_prev", &y_prev),
            ("y0", &y0),
        ] {
            if value.is_zero() {
                return Err(Error::ZeroInitial(name));
            }
        }
        Ok(InitialState {
            x_prev,
            x0,
            y_prev,
            y0,
        })
    }

    pub fn unit() -> Self {
        let one = ExactRational::one();
        InitialState {
            x_prev: one.clone(),
            x0: one.clone(),
            y_prev: one.clone(),
            y0: one,
        }
    }

    /// `x_0 y_{-1}`, the product driving the first equation.
    pub fn first_product(&self) -> ExactRational {
        &self.x0 * &self.y_prev
    }

    /// `x_{-1} y_0`, the product driving the second equation.
    pub fn second_product(&self) -> ExactRational {
        &self.x_prev * &self.y0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Completed,
    Singular(Singularity),
}

impl Status {
    pub fn singularity(&self) -> Option<Singularity> {
        match self {
            Status::Completed => None,
            Status::Singular(s) => Some(*s),
        }
    }
}

/// Exact values `x_n, y_n` for contiguous `n = -1, 0, 1, …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    xs: Vec<ExactRational>,
    ys: Vec<ExactRational>,
    status: Status,
}

/// One row of a [`Trajectory`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Entry<'a> {
    pub n: i64,
    pub x: &'a ExactRational,
    pub y: &'a ExactRational,
}

impl Trajectory {
    pub(crate) fn from_parts(
        xs: Vec<ExactRational>,
        ys: Vec<ExactRational>,
        status: Status,
    ) -> Self {
        debug_assert_eq!(xs.len(), ys.len());
        debug_assert!(xs.len() >= 2);
        Trajectory { xs, ys, status }
    }

    pub fn status(&self) -> Status {
        self.status
    }

    /// Index of the last recorded entry (at least 0).
    pub fn last_index(&self) -> i64 {
        self.xs.len() as i64 - 2
    }

    pub fn x(&self, n: i64) -> Option<&ExactRational> {
        usize::try_from(n + 1).ok().and_then(|i| self.xs.get(i))
    }

    pub fn y(&self, n: i64) -> Option<&ExactRational> {
        usize::try_from(n + 1).ok().and_then(|i| self.ys.get(i))
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = Entry<'_>> + '_ {
        self.xs
            .iter()
            .zip(&self.ys)
            .enumerate()
            .map(|(i, (x, y))| Entry {
                n: i as i64 - 1,
                x,
                y,
            })
    }

    /// The initial state this trajectory starts from.
    pub fn initial_state(&self) -> InitialState {
        InitialState {
            x_prev: self.xs[0].clone(),
            x0: self.xs[1].clone(),
            y_prev: self.ys[0].clone(),
            y0: self.ys[1].clone(),
        }
    }

    /// Copy restricted to `n <= last`, i.e. the result of `last` steps. A
    /// singular status is kept only when the failing step is among them.
    pub fn truncated(&self, last: i64) -> Trajectory {
        let keep = ((last.max(0) + 2) as usize).min(self.xs.len());
        let status = match self.status {
            Status::Singular(s) if (s.step as i64) < last => self.status,
            _ => Status::Completed,
        };
        Trajectory {
            xs: self.xs[..keep].to_vec(),
            ys: self.ys[..keep].to_vec(),
            status,
        }
    }
}

/// One application of the system at step index `n` (implicit in `coeffs`).
///
/// Every denominator factor is tested for zero before any division, in the
/// order `y_n`, `a_n + b_n x_n y_{n-1}`, `x_n`, `c_n + d_n x_{n-1} y_n`.
pub fn step(
    x_prev: &ExactRational,
    x: &ExactRational,
    y_prev: &ExactRational,
    y: &ExactRational,
    coeffs: &Coeffs,
) -> std::result::Result<(ExactRational, ExactRational), Factor> {
    let first = x * y_prev;
    let second = x_prev * y;
    let first_factor = &coeffs.a + &coeffs.b * &first;
    let second_factor = &coeffs.c + &coeffs.d * &second;
    if y.is_zero() {
        return Err(Factor::StateY);
    }
    if first_factor.is_zero() {
        return Err(Factor::FirstEquation);
    }
    if x.is_zero() {
        return Err(Factor::StateX);
    }
    if second_factor.is_zero() {
        return Err(Factor::SecondEquation);
    }
    // The factors are known nonzero, so the divisions cannot fail.
    let x_next = first
        .checked_div(&(y * first_factor), "first equation")
        .expect("nonzero divisor");
    let y_next = second
        .checked_div(&(x * second_factor), "second equation")
        .expect("nonzero divisor");
    Ok((x_next, y_next))
}

/// Iterates `steps` times, stopping early at the first vanishing denominator.
pub fn simulate(quad: &CoefficientQuad, init: &InitialState, steps: usize) -> Result<Trajectory> {
    let mut xs = Vec::with_capacity(steps + 2);
    let mut ys = Vec::with_capacity(steps + 2);
    xs.push(init.x_prev.clone());
    xs.push(init.x0.clone());
    ys.push(init.y_prev.clone());
    ys.push(init.y0.clone());
    let mut status = Status::Completed;
    for n in 0..steps {
        let coeffs = quad.coeff_at(n)?;
        match step(&xs[n], &xs[n + 1], &ys[n], &ys[n + 1], &coeffs) {
            Ok((x_next, y_next)) => {
                xs.push(x_next);
                ys.push(y_next);
            }
            Err(factor) => {
                status = Status::Singular(Singularity { step: n, factor });
                break;
            }
        }
    }
    Ok(Trajectory { xs, ys, status })
}

/// The finite group action `x_n ↦ r^{α_n} x_n`, `y_n ↦ r^{λ_n} y_n` on the
/// initial data. Requires integer exponents at `n = -1, 0`.
pub fn scale_action(
    init: &InitialState,
    r: &ExactRational,
    generator: &GeneratorSpec,
) -> Result<InitialState> {
    if r.is_zero() {
        return Err(Error::Domain("scale factor must be nonzero".to_string()));
    }
    let scale = |exponent: ExactRational, value: &ExactRational| -> Result<ExactRational> {
        let k = exponent.to_i64().ok_or_else(|| {
            Error::Domain(format!(
                "scale action needs integer exponents, got {exponent}"
            ))
        })?;
        Ok(r.pow(k)? * value)
    };
    InitialState::new(
        scale(generator.alpha(-1), &init.x_prev)?,
        scale(generator.alpha(0), &init.x0)?,
        scale(generator.lambda(-1), &init.y_prev)?,
        scale(generator.lambda(0), &init.y0)?,
    )
}

/// Floating-point mirror of [`simulate`], for speed comparisons only.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatTrajectory {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub singular: Option<usize>,
}

pub fn simulate_f64(
    quad: &CoefficientQuad,
    init: &InitialState,
    steps: usize,
) -> Result<FloatTrajectory> {
    let mut xs = vec![init.x_prev.to_f64(), init.x0.to_f64()];
    let mut ys = vec![init.y_prev.to_f64(), init.y0.to_f64()];
    let mut singular = None;
    for n in 0..steps {
        let c = quad.coeff_at(n)?;
        let (xp, x, yp, y) = (xs[n], xs[n + 1], ys[n], ys[n + 1]);
        let first = c.a.to_f64() + c.b.to_f64() * x * yp;
        let second = c.c.to_f64() + c.d.to_f64() * xp * y;
        if y == 0.0 || first == 0.0 || x == 0.0 || second == 0.0 {
            singular = Some(n);
            break;
        }
        xs.push(x * yp / (y * first));
        ys.push(xp * y / (x * second));
    }
    Ok(FloatTrajectory { xs, ys, singular })
}
