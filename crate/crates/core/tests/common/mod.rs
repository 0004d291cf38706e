//! Seeded random instances shared by the integration tests.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use radex::cli::commands::sample_rational;
use radex::closed_form;
use radex::{CoefficientQuad, Component, ExactRational, InitialState};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(text: &str) -> ExactRational {
    ExactRational::parse(text).expect("valid rational literal")
}

pub fn rational(rng: &mut ChaCha8Rng) -> ExactRational {
    sample_rational(rng)
}

pub fn rationals(rng: &mut ChaCha8Rng, len: usize) -> Vec<ExactRational> {
    (0..len).map(|_| rational(rng)).collect()
}

pub fn initial(rng: &mut ChaCha8Rng) -> InitialState {
    InitialState::new(rational(rng), rational(rng), rational(rng), rational(rng))
        .expect("sampled values are nonzero")
}

/// Periodic quad; each component gets its own period in `1..=4`.
pub fn periodic_quad(rng: &mut ChaCha8Rng) -> CoefficientQuad {
    let component = |rng: &mut ChaCha8Rng| {
        let period = rng.gen_range(1..=4);
        rationals(rng, period)
    };
    let (a, b, c, d) = (
        component(rng),
        component(rng),
        component(rng),
        component(rng),
    );
    CoefficientQuad::periodic(a, b, c, d).expect("sampled values are nonzero")
}

pub fn constant_quad(rng: &mut ChaCha8Rng) -> CoefficientQuad {
    CoefficientQuad::constant(rational(rng), rational(rng), rational(rng), rational(rng))
        .expect("sampled values are nonzero")
}

/// Constant quad with `a = c = value` and random `b, d`.
pub fn diagonal_quad(rng: &mut ChaCha8Rng, value: i64) -> CoefficientQuad {
    let v = ExactRational::from_integer(value);
    CoefficientQuad::constant(v.clone(), rational(rng), v, rational(rng)).expect("nonzero")
}

/// Constant quad with `a, c` both different from 1.
pub fn nonunit_quad(rng: &mut ChaCha8Rng) -> CoefficientQuad {
    let not_one = |rng: &mut ChaCha8Rng| loop {
        let value = rational(rng);
        if !value.is_one() {
            return value;
        }
    };
    let (a, c) = (not_one(rng), not_one(rng));
    CoefficientQuad::constant(a, rational(rng), c, rational(rng)).expect("nonzero")
}

/// Rewrites `y_prev` so that the first-equation denominator vanishes at
/// `step`, i.e. `U_{step+1} = 0`. Returns `None` when no such `y_prev`
/// exists (the sum part of the bracket is zero, or `y_prev` would be zero).
pub fn force_first_singularity(
    quad: &CoefficientQuad,
    init: &InitialState,
    step: usize,
) -> Option<InitialState> {
    let k = step + 1;
    let one = ExactRational::one();
    let product = quad.product_range(Component::A, 0, k as i64 - 1).ok()?;
    let sum =
        closed_form::general_bracket(quad, Component::A, Component::B, &one, k).ok()? - &product;
    if sum.is_zero() {
        return None;
    }
    let p = (-product).checked_div(&sum, "test").ok()?;
    let y_prev = p.checked_div(&init.x0, "test").ok()?;
    InitialState::new(
        init.x_prev.clone(),
        init.x0.clone(),
        y_prev,
        init.y0.clone(),
    )
    .ok()
}

/// As [`force_first_singularity`] for the second equation, via `x_prev`.
pub fn force_second_singularity(
    quad: &CoefficientQuad,
    init: &InitialState,
    step: usize,
) -> Option<InitialState> {
    let k = step + 1;
    let one = ExactRational::one();
    let product = quad.product_range(Component::C, 0, k as i64 - 1).ok()?;
    let sum =
        closed_form::general_bracket(quad, Component::C, Component::D, &one, k).ok()? - &product;
    if sum.is_zero() {
        return None;
    }
    let qv = (-product).checked_div(&sum, "test").ok()?;
    let x_prev = qv.checked_div(&init.y0, "test").ok()?;
    InitialState::new(
        x_prev,
        init.x0.clone(),
        init.y_prev.clone(),
        init.y0.clone(),
    )
    .ok()
}
