//! Reduction of the system to two decoupled first-order linear recurrences.
//!
//! With `U_n = 1/(x_n y_{n-1})` and `V_n = 1/(x_{n-1} y_n)` the system becomes
//!
//! ```text
//! U_{n+1} = a_n U_n + b_n
//! V_{n+1} = c_n V_n + d_n
//! ```
//!
//! and the original variables are recovered from
//! `x_{n+1} = x_{n-1} V_n / U_{n+1}`, `y_{n+1} = y_{n-1} U_n / V_{n+1}`.
//! The products `x_n y_{n-1}` and `x_{n-1} y_n` are unchanged by the scaling
//! symmetries, which is why `U, V` are invariants.

use crate::coefficients::{CoefficientQuad, Component};
use crate::engine::{InitialState, Status, Trajectory};
use crate::error::{Error, Factor, Forbidden, Result, Singularity};
use crate::numeric::ExactRational;

/// `U_n, V_n` for `n = 0, 1, …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantSeq {
    u: Vec<ExactRational>,
    v: Vec<ExactRational>,
}

impl InvariantSeq {
    pub fn new(u: Vec<ExactRational>, v: Vec<ExactRational>) -> Result<Self> {
        if u.len() != v.len() || u.is_empty() {
            return Err(Error::Domain(
                "invariant sequences must be nonempty and of equal length".to_string(),
            ));
        }
        Ok(InvariantSeq { u, v })
    }

    pub fn u(&self, n: usize) -> Option<&ExactRational> {
        self.u.get(n)
    }

    pub fn v(&self, n: usize) -> Option<&ExactRational> {
        self.v.get(n)
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn last_index(&self) -> usize {
        self.u.len() - 1
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, &ExactRational, &ExactRational)> + '_ {
        self.u
            .iter()
            .zip(&self.v)
            .enumerate()
            .map(|(n, (u, v))| (n, u, v))
    }

    pub fn truncated(&self, last: usize) -> InvariantSeq {
        let keep = (last + 1).min(self.u.len());
        InvariantSeq {
            u: self.u[..keep].to_vec(),
            v: self.v[..keep].to_vec(),
        }
    }
}

/// `(U_0, V_0) = (1/(x_0 y_{-1}), 1/(x_{-1} y_0))`.
pub fn initial_invariants(init: &InitialState) -> (ExactRational, ExactRational) {
    (
        init.first_product()
            .recip("U_0")
            .expect("initial values are nonzero"),
        init.second_product()
            .recip("V_0")
            .expect("initial values are nonzero"),
    )
}

/// `U_n, V_n` read off a trajectory for every `n` from 0 to its last index.
pub fn invariants_from_trajectory(trajectory: &Trajectory) -> InvariantSeq {
    let last = trajectory.last_index();
    let (u, v) = (0..=last)
        .map(|n| {
            let x_n = trajectory.x(n).expect("index in range");
            let y_n = trajectory.y(n).expect("index in range");
            let x_prev = trajectory.x(n - 1).expect("index in range");
            let y_prev = trajectory.y(n - 1).expect("index in range");
            (
                (x_n * y_prev)
                    .recip("U_n")
                    .expect("trajectory entries are nonzero"),
                (x_prev * y_n)
                    .recip("V_n")
                    .expect("trajectory entries are nonzero"),
            )
        })
        .unzip();
    InvariantSeq { u, v }
}

/// Iterates the linear recurrences for `steps` steps.
pub fn invariants_by_recurrence(
    quad: &CoefficientQuad,
    u0: ExactRational,
    v0: ExactRational,
    steps: usize,
) -> Result<InvariantSeq> {
    let mut u = Vec::with_capacity(steps + 1);
    let mut v = Vec::with_capacity(steps + 1);
    u.push(u0);
    v.push(v0);
    for n in 0..steps {
        let c = quad.coeff_at(n)?;
        let u_next = &c.a * &u[n] + &c.b;
        let v_next = &c.c * &v[n] + &c.d;
        u.push(u_next);
        v.push(v_next);
    }
    Ok(InvariantSeq { u, v })
}

/// `start ∏_{k=0}^{n-1} mul_k + Σ_{l=0}^{n-1} add_l ∏_{k=l+1}^{n-1} mul_k`.
pub(crate) fn product_sum(
    quad: &CoefficientQuad,
    mul: Component,
    add: Component,
    start: &ExactRational,
    n: usize,
) -> Result<ExactRational> {
    // Walk l downward so ∏_{k=l+1}^{n-1} is available as a running suffix product.
    let mut suffix = ExactRational::one();
    let mut sum = ExactRational::zero();
    for l in (0..n as i64).rev() {
        sum += quad.value(add, l)? * &suffix;
        suffix *= quad.value(mul, l)?;
    }
    Ok(start * &suffix + sum)
}

/// `(U_n, V_n)` from the product-sum closed form.
pub fn invariants_closed_form(
    quad: &CoefficientQuad,
    u0: &ExactRational,
    v0: &ExactRational,
    n: usize,
) -> Result<(ExactRational, ExactRational)> {
    Ok((
        product_sum(quad, Component::A, Component::B, u0, n)?,
        product_sum(quad, Component::C, Component::D, v0, n)?,
    ))
}

/// Rebuilds `x_n, y_n` for `n = -1 … steps` from the initial state and the
/// invariants.
pub fn reconstruct(
    init: &InitialState,
    invariants: &InvariantSeq,
    steps: usize,
) -> Result<Trajectory> {
    if invariants.len() < steps + 1 {
        return Err(Error::Domain(format!(
            "reconstruction to step {steps} needs invariants through index {steps}, have {}",
            invariants.last_index()
        )));
    }
    let mut xs = vec![init.x_prev.clone(), init.x0.clone()];
    let mut ys = vec![init.y_prev.clone(), init.y0.clone()];
    for n in 0..steps {
        let u_next = &invariants.u[n + 1];
        let v_next = &invariants.v[n + 1];
        let vanishing = |factor, name: &str| {
            Error::Forbidden(Forbidden {
                singularity: Singularity { step: n, factor },
                condition: format!("{name}_{} = 0", n + 1),
            })
        };
        if u_next.is_zero() {
            return Err(vanishing(Factor::FirstEquation, "U"));
        }
        if v_next.is_zero() {
            return Err(vanishing(Factor::SecondEquation, "V"));
        }
        let x_next = (&xs[n] * &invariants.v[n]).checked_div(u_next, "reconstruct x")?;
        let y_next = (&ys[n] * &invariants.u[n]).checked_div(v_next, "reconstruct y")?;
        xs.push(x_next);
        ys.push(y_next);
    }
    Ok(Trajectory::from_parts(xs, ys, Status::Completed))
}
