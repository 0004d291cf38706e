//! Explicit solution formulas, evaluated exactly from the initial data.
//!
//! Every family shares one shape. With `P = x_0 y_{-1}` and `Q = x_{-1} y_0`:
//!
//! ```text
//! x_{2n-1} = x_{-1}^{1-n} (x_0 y_{-1}/y_0)^n      ∏_{s<n} V(2s)   / U(2s+1)
//! x_{2n}   = x_0^{n+1} (y_{-1}/(x_{-1} y_0))^n    ∏_{s<n} V(2s+1) / U(2s+2)
//! y_{2n-1} = y_{-1}^{1-n} (x_{-1} y_0/x_0)^n      ∏_{s<n} U(2s)   / V(2s+1)
//! y_{2n}   = y_0^{n+1} (x_{-1}/(x_0 y_{-1}))^n    ∏_{s<n} U(2s+1) / V(2s+2)
//! ```
//!
//! where the brackets are
//! `U(k) = ∏_{i<k} a_i + P Σ_{l<k} b_l ∏_{i=l+1}^{k-1} a_i` and likewise
//! `V(k)` with `c, d, Q`. The families differ only in how a bracket is
//! written once the coefficients are constant: a literal geometric sum, a
//! linear term when `a = 1`, or the summed geometric series when `a ≠ 1`.
//! For `a = c = -1` the brackets collapse and the solution is a pure power.
//!
//! A bracket `U(k)` (or `V(k)`) vanishes exactly when direct iteration
//! divides by zero at step `k - 1` in the first (or second) equation.

use std::fmt;

use crate::coefficients::{CoefficientQuad, Coeffs, Component};
use crate::engine::InitialState;
use crate::error::{Error, Factor, Forbidden, Result, Singularity};
use crate::numeric::ExactRational;
use crate::reduction::product_sum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyTag {
    General,
    Constant,
    Unit,
    NonUnit,
    NegUnit,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 5] = [
        FamilyTag::General,
        FamilyTag::Constant,
        FamilyTag::Unit,
        FamilyTag::NonUnit,
        FamilyTag::NegUnit,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyTag::General => "general",
            FamilyTag::Constant => "constant",
            FamilyTag::Unit => "unit",
            FamilyTag::NonUnit => "nonunit",
            FamilyTag::NegUnit => "neg-unit",
        }
    }

    pub fn parse(text: &str) -> Option<FamilyTag> {
        FamilyTag::ALL.into_iter().find(|t| t.as_str() == text)
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A solution family together with the data it needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosedFormFamily {
    General(CoefficientQuad),
    Constant(Coeffs),
    Unit { b: ExactRational, d: ExactRational },
    NonUnit(Coeffs),
    NegUnit { b: ExactRational, d: ExactRational },
}

impl ClosedFormFamily {
    /// Builds the family `tag` for `quad`, checking its applicability.
    pub fn new(tag: FamilyTag, quad: &CoefficientQuad) -> Result<Self> {
        if tag == FamilyTag::General {
            return Ok(ClosedFormFamily::General(quad.clone()));
        }
        let c = quad.as_constant().ok_or_else(|| {
            Error::Domain(format!(
                "family {tag} needs constant coefficients, got {}",
                quad.kind()
            ))
        })?;
        let one = ExactRational::one();
        let minus_one = -ExactRational::one();
        match tag {
            FamilyTag::General => unreachable!(),
            FamilyTag::Constant => Ok(ClosedFormFamily::Constant(c)),
            FamilyTag::Unit if c.a == one && c.c == one => {
                Ok(ClosedFormFamily::Unit { b: c.b, d: c.d })
            }
            FamilyTag::NonUnit if c.a != one && c.c != one => Ok(ClosedFormFamily::NonUnit(c)),
            FamilyTag::NegUnit if c.a == minus_one && c.c == minus_one => {
                Ok(ClosedFormFamily::NegUnit { b: c.b, d: c.d })
            }
            _ => Err(Error::Domain(format!(
                "family {tag} does not apply to a = {}, c = {}",
                c.a, c.c
            ))),
        }
    }

    /// The most specialized family that applies to `quad`.
    pub fn auto(quad: &CoefficientQuad) -> Self {
        [
            FamilyTag::NegUnit,
            FamilyTag::Unit,
            FamilyTag::NonUnit,
            FamilyTag::Constant,
        ]
        .into_iter()
        .find_map(|tag| ClosedFormFamily::new(tag, quad).ok())
        .unwrap_or_else(|| ClosedFormFamily::General(quad.clone()))
    }

    /// Every family that applies to `quad`, general first.
    pub fn applicable(quad: &CoefficientQuad) -> Vec<Self> {
        FamilyTag::ALL
            .into_iter()
            .filter_map(|tag| ClosedFormFamily::new(tag, quad).ok())
            .collect()
    }

    pub fn tag(&self) -> FamilyTag {
        match self {
            ClosedFormFamily::General(_) => FamilyTag::General,
            ClosedFormFamily::Constant(_) => FamilyTag::Constant,
            ClosedFormFamily::Unit { .. } => FamilyTag::Unit,
            ClosedFormFamily::NonUnit(_) => FamilyTag::NonUnit,
            ClosedFormFamily::NegUnit { .. } => FamilyTag::NegUnit,
        }
    }

    pub fn solve(&self, init: &InitialState, m: i64) -> Result<(ExactRational, ExactRational)> {
        match self {
            ClosedFormFamily::General(quad) => solve_general(quad, init, m),
            ClosedFormFamily::Constant(c) => solve_constant(c, init, m),
            ClosedFormFamily::Unit { b, d } => solve_unit(b, d, init, m),
            ClosedFormFamily::NonUnit(c) => solve_nonunit(c, init, m),
            ClosedFormFamily::NegUnit { b, d } => solve_neg_unit(b, d, init, m),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Invariant {
    U,
    V,
}

impl Invariant {
    fn factor(self) -> Factor {
        match self {
            Invariant::U => Factor::FirstEquation,
            Invariant::V => Factor::SecondEquation,
        }
    }
}

/// Where bracket `k` of invariant `which` sits in the formulas for index `m`.
fn bracket_role(m: i64, which: Invariant, k: usize) -> String {
    let k = k as i64;
    let odd_m = m.rem_euclid(2) == 1;
    let (variable, part, s) = match (odd_m, which, k % 2 == 1) {
        // m = 2n - 1: x uses V(2s)/U(2s+1), y uses U(2s)/V(2s+1).
        (true, Invariant::U, true) => ('x', "denominator", (k - 1) / 2),
        (true, Invariant::U, false) => ('y', "numerator", k / 2),
        (true, Invariant::V, false) => ('x', "numerator", k / 2),
        (true, Invariant::V, true) => ('y', "denominator", (k - 1) / 2),
        // m = 2n: x uses V(2s+1)/U(2s+2), y uses U(2s+1)/V(2s+2).
        (false, Invariant::U, false) => ('x', "denominator", k / 2 - 1),
        (false, Invariant::U, true) => ('y', "numerator", (k - 1) / 2),
        (false, Invariant::V, true) => ('x', "numerator", (k - 1) / 2),
        (false, Invariant::V, false) => ('y', "denominator", k / 2 - 1),
    };
    format!("{part} bracket of {variable}_{m} vanishes at s = {s}")
}

/// First vanishing bracket with index `1..=m`, `U` before `V` on ties.
fn first_vanishing(m: i64, u: &[ExactRational], v: &[ExactRational]) -> Option<Forbidden> {
    let last = m.max(0) as usize;
    (1..=last).find_map(|k| {
        let which = if u[k].is_zero() {
            Invariant::U
        } else if v[k].is_zero() {
            Invariant::V
        } else {
            return None;
        };
        Some(Forbidden {
            singularity: Singularity {
                step: k - 1,
                factor: which.factor(),
            },
            condition: bracket_role(m, which, k),
        })
    })
}

/// Prefactors and bracket products for index `m ≥ 1`, given all brackets
/// `U(0..=m)`, `V(0..=m)`.
fn assemble(
    init: &InitialState,
    m: i64,
    u: &[ExactRational],
    v: &[ExactRational],
) -> Result<(ExactRational, ExactRational)> {
    if let Some(forbidden) = first_vanishing(m, u, v) {
        return Err(forbidden.into());
    }
    let ratio =
        |num: &ExactRational, den: &ExactRational| num.checked_div(den, "closed-form bracket");
    if m % 2 == 1 {
        let n = (m + 1) / 2;
        let mut x = init.x_prev.pow(1 - n)?
            * (&init.x0 * &init.y_prev)
                .checked_div(&init.y0, "x prefactor")?
                .pow(n)?;
        let mut y = init.y_prev.pow(1 - n)?
            * (&init.x_prev * &init.y0)
                .checked_div(&init.x0, "y prefactor")?
                .pow(n)?;
        for s in 0..n as usize {
            x *= ratio(&v[2 * s], &u[2 * s + 1])?;
            y *= ratio(&u[2 * s], &v[2 * s + 1])?;
        }
        Ok((x, y))
    } else {
        let n = m / 2;
        let mut x = init.x0.pow(n + 1)?
            * init
                .y_prev
                .checked_div(&(&init.x_prev * &init.y0), "x prefactor")?
                .pow(n)?;
        let mut y = init.y0.pow(n + 1)?
            * init
                .x_prev
                .checked_div(&(&init.x0 * &init.y_prev), "y prefactor")?
                .pow(n)?;
        for s in 0..n as usize {
            x *= ratio(&v[2 * s + 1], &u[2 * s + 2])?;
            y *= ratio(&u[2 * s + 1], &v[2 * s + 2])?;
        }
        Ok((x, y))
    }
}

fn initial_or(init: &InitialState, m: i64) -> Result<Option<(ExactRational, ExactRational)>> {
    match m {
        i64::MIN..=-2 => Err(Error::Domain(format!("index {m} is below -1"))),
        -1 => Ok(Some((init.x_prev.clone(), init.y_prev.clone()))),
        0 => Ok(Some((init.x0.clone(), init.y0.clone()))),
        _ => Ok(None),
    }
}

fn evaluate_with<F, G>(
    init: &InitialState,
    m: i64,
    mut bracket_u: F,
    mut bracket_v: G,
) -> Result<(ExactRational, ExactRational)>
where
    F: FnMut(usize) -> Result<ExactRational>,
    G: FnMut(usize) -> Result<ExactRational>,
{
    if let Some(initial) = initial_or(init, m)? {
        return Ok(initial);
    }
    let last = m as usize;
    let u = (0..=last).map(&mut bracket_u).collect::<Result<Vec<_>>>()?;
    let v = (0..=last).map(&mut bracket_v).collect::<Result<Vec<_>>>()?;
    assemble(init, m, &u, &v)
}

/// `U(k)` for arbitrary coefficient sequences (`P` scales the sum part).
pub fn general_bracket(
    quad: &CoefficientQuad,
    mul: Component,
    add: Component,
    product: &ExactRational,
    k: usize,
) -> Result<ExactRational> {
    // With start 0 the product-sum is just Σ_{l<k} add_l ∏_{i=l+1}^{k-1} mul_i.
    let sum = product_sum(quad, mul, add, &ExactRational::zero(), k)?;
    Ok(quad.product_range(mul, 0, k as i64 - 1)? + product * &sum)
}

/// `a^k + bP Σ_{l<k} a^l`, with the geometric sum added term by term.
pub fn constant_bracket(
    a: &ExactRational,
    b_times_product: &ExactRational,
    k: usize,
) -> ExactRational {
    let mut power = ExactRational::one();
    let mut sum = ExactRational::zero();
    for _ in 0..k {
        sum += &power;
        power *= a;
    }
    power + b_times_product * &sum
}

/// `a^k + bP (1 − a^k)/(1 − a)`, for `a ≠ 1`.
pub fn nonunit_bracket(
    a: &ExactRational,
    b_times_product: &ExactRational,
    k: usize,
) -> Result<ExactRational> {
    let power = a.pow(k as i64)?;
    let one = ExactRational::one();
    let geometric = (&one - &power).checked_div(&(&one - a), "geometric sum with a = 1")?;
    Ok(power + b_times_product * &geometric)
}

/// `1 + k bP`.
pub fn unit_bracket(b_times_product: &ExactRational, k: usize) -> ExactRational {
    ExactRational::one() + ExactRational::from_integer(k as i64) * b_times_product
}

/// `(x_m, y_m)` for arbitrary coefficient sequences.
pub fn solve_general(
    quad: &CoefficientQuad,
    init: &InitialState,
    m: i64,
) -> Result<(ExactRational, ExactRational)> {
    let p = init.first_product();
    let q = init.second_product();
    evaluate_with(
        init,
        m,
        |k| general_bracket(quad, Component::A, Component::B, &p, k),
        |k| general_bracket(quad, Component::C, Component::D, &q, k),
    )
}

/// `(x_m, y_m)` for constant coefficients.
pub fn solve_constant(
    c: &Coeffs,
    init: &InitialState,
    m: i64,
) -> Result<(ExactRational, ExactRational)> {
    let bp = &c.b * init.first_product();
    let dq = &c.d * init.second_product();
    evaluate_with(
        init,
        m,
        |k| Ok(constant_bracket(&c.a, &bp, k)),
        |k| Ok(constant_bracket(&c.c, &dq, k)),
    )
}

/// The validity condition `j b x_0 y_{-1} ≠ −1`, `j d x_{-1} y_0 ≠ −1` of the
/// `a = c = 1` family, as the smallest violating `j` in `1..=max_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitCondition {
    pub j: usize,
    pub factor: Factor,
}

impl UnitCondition {
    pub fn singularity(&self) -> Singularity {
        Singularity {
            step: self.j - 1,
            factor: self.factor,
        }
    }

    pub fn describe(&self) -> String {
        match self.factor {
            Factor::FirstEquation => format!("j·b·x0·y_prev = -1 at j = {}", self.j),
            _ => format!("j·d·x_prev·y0 = -1 at j = {}", self.j),
        }
    }
}

/// Solves `j · coeff · product = −1` for a positive integer `j`.
fn violating_j(coeff: &ExactRational, product: &ExactRational) -> Option<usize> {
    let j = (-(coeff * product)).recip("unit condition").ok()?;
    match j.to_i64() {
        Some(j) if j >= 1 => usize::try_from(j).ok(),
        _ => None,
    }
}

pub fn unit_condition(
    b: &ExactRational,
    d: &ExactRational,
    init: &InitialState,
    max_j: usize,
) -> Option<UnitCondition> {
    let first = violating_j(b, &init.first_product()).filter(|&j| j <= max_j);
    let second = violating_j(d, &init.second_product()).filter(|&j| j <= max_j);
    match (first, second) {
        (Some(j1), Some(j2)) if j2 < j1 => Some(UnitCondition {
            j: j2,
            factor: Factor::SecondEquation,
        }),
        (Some(j), _) => Some(UnitCondition {
            j,
            factor: Factor::FirstEquation,
        }),
        (None, Some(j)) => Some(UnitCondition {
            j,
            factor: Factor::SecondEquation,
        }),
        (None, None) => None,
    }
}

/// `(x_m, y_m)` for `a = c = 1`.
pub fn solve_unit(
    b: &ExactRational,
    d: &ExactRational,
    init: &InitialState,
    m: i64,
) -> Result<(ExactRational, ExactRational)> {
    if let Some(initial) = initial_or(init, m)? {
        return Ok(initial);
    }
    if let Some(violation) = unit_condition(b, d, init, m as usize) {
        return Err(Forbidden {
            singularity: violation.singularity(),
            condition: violation.describe(),
        }
        .into());
    }
    let bp = b * init.first_product();
    let dq = d * init.second_product();
    evaluate_with(
        init,
        m,
        |k| Ok(unit_bracket(&bp, k)),
        |k| Ok(unit_bracket(&dq, k)),
    )
}

/// `(x_m, y_m)` for constant `a ≠ 1`, `c ≠ 1`.
pub fn solve_nonunit(
    c: &Coeffs,
    init: &InitialState,
    m: i64,
) -> Result<(ExactRational, ExactRational)> {
    if c.a.is_one() || c.c.is_one() {
        return Err(Error::Domain(format!(
            "nonunit family needs a != 1 and c != 1, got a = {}, c = {}",
            c.a, c.c
        )));
    }
    let bp = &c.b * init.first_product();
    let dq = &c.d * init.second_product();
    evaluate_with(
        init,
        m,
        |k| nonunit_bracket(&c.a, &bp, k),
        |k| nonunit_bracket(&c.c, &dq, k),
    )
}

/// The conditions `b x_0 y_{-1} ≠ 1`, `d x_{-1} y_0 ≠ 1` of the `a = c = −1`
/// family. Either one breaks the very first step.
pub fn neg_unit_condition(
    b: &ExactRational,
    d: &ExactRational,
    init: &InitialState,
) -> Option<Forbidden> {
    let one = ExactRational::one();
    let (factor, condition) = if b * init.first_product() == one {
        (Factor::FirstEquation, "b·x0·y_prev = 1")
    } else if d * init.second_product() == one {
        (Factor::SecondEquation, "d·x_prev·y0 = 1")
    } else {
        return None;
    };
    Some(Forbidden {
        singularity: Singularity { step: 0, factor },
        condition: condition.to_string(),
    })
}

/// `(x_m, y_m)` for `a = c = −1`, where every bracket product is a pure power.
pub fn solve_neg_unit(
    b: &ExactRational,
    d: &ExactRational,
    init: &InitialState,
    m: i64,
) -> Result<(ExactRational, ExactRational)> {
    if let Some(initial) = initial_or(init, m)? {
        return Ok(initial);
    }
    if let Some(forbidden) = neg_unit_condition(b, d, init) {
        return Err(forbidden.into());
    }
    let one = ExactRational::one();
    let first = b * init.first_product() - &one;
    let second = d * init.second_product() - &one;
    let InitialState {
        x_prev,
        x0,
        y_prev,
        y0,
    } = init;
    if m % 2 == 1 {
        let n = (m + 1) / 2;
        let x = x_prev.pow(1 - n)?
            * (x0 * y_prev).checked_div(y0, "x prefactor")?.pow(n)?
            * first.pow(-n)?;
        let y = y_prev.pow(1 - n)?
            * (x_prev * y0).checked_div(x0, "y prefactor")?.pow(n)?
            * second.pow(-n)?;
        Ok((x, y))
    } else {
        let n = m / 2;
        let x = x0.pow(n + 1)?
            * y_prev.checked_div(&(x_prev * y0), "x prefactor")?.pow(n)?
            * second.pow(n)?;
        let y = y0.pow(n + 1)?
            * x_prev.checked_div(&(x0 * y_prev), "y prefactor")?.pow(n)?
            * first.pow(n)?;
        Ok((x, y))
    }
}

/// First singular step within `horizon` steps, found by running the
/// invariant recurrences: step `n` breaks iff `U_{n+1}` (first equation) or
/// `V_{n+1}` (second equation) vanishes.
pub fn forbidden_scan(
    quad: &CoefficientQuad,
    init: &InitialState,
    horizon: usize,
) -> Result<Option<Singularity>> {
    let (mut u, mut v) = crate::reduction::initial_invariants(init);
    for n in 0..horizon {
        let c = quad.coeff_at(n)?;
        u = &c.a * &u + &c.b;
        v = &c.c * &v + &c.d;
        let factor = if u.is_zero() {
            Factor::FirstEquation
        } else if v.is_zero() {
            Factor::SecondEquation
        } else {
            continue;
        };
        return Ok(Some(Singularity { step: n, factor }));
    }
    Ok(None)
}

/// Cached brackets for evaluating the general family at every index up to
/// a horizon. Prefix products of the multiplier sequences are computed once
/// and each bracket is assembled from them; the cache belongs to one sweep.
#[derive(Debug, Clone)]
pub struct GeneralSweep {
    init: InitialState,
    u: Vec<ExactRational>,
    v: Vec<ExactRational>,
}

impl GeneralSweep {
    pub fn new(quad: &CoefficientQuad, init: &InitialState, horizon: usize) -> Result<Self> {
        let p = init.first_product();
        let q = init.second_product();
        Ok(GeneralSweep {
            init: init.clone(),
            u: Self::brackets(quad, Component::A, Component::B, &p, horizon)?,
            v: Self::brackets(quad, Component::C, Component::D, &q, horizon)?,
        })
    }

    fn brackets(
        quad: &CoefficientQuad,
        mul: Component,
        add: Component,
        product: &ExactRational,
        horizon: usize,
    ) -> Result<Vec<ExactRational>> {
        // prefix[k] = ∏_{i<k} mul_i; every entry is nonzero, so
        // ∏_{i=l+1}^{k-1} mul_i = prefix[k] / prefix[l+1].
        let mut prefix = Vec::with_capacity(horizon + 1);
        prefix.push(ExactRational::one());
        for i in 0..horizon {
            let next = &prefix[i] * quad.value(mul, i as i64)?;
            prefix.push(next);
        }
        let adds = (0..horizon)
            .map(|l| quad.value(add, l as i64).cloned())
            .collect::<Result<Vec<_>>>()?;
        (0..=horizon)
            .map(|k| {
                let mut sum = ExactRational::zero();
                for l in 0..k {
                    sum += &adds[l] * prefix[k].checked_div(&prefix[l + 1], "prefix product")?;
                }
                Ok(&prefix[k] + product * &sum)
            })
            .collect()
    }

    pub fn horizon(&self) -> usize {
        self.u.len() - 1
    }

    pub fn solve(&self, m: i64) -> Result<(ExactRational, ExactRational)> {
        if let Some(initial) = initial_or(&self.init, m)? {
            return Ok(initial);
        }
        if m as usize > self.horizon() {
            return Err(Error::Domain(format!(
                "index {m} beyond sweep horizon {}",
                self.horizon()
            )));
        }
        let last = m as usize;
        assemble(&self.init, m, &self.u[..=last], &self.v[..=last])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(text: &str) -> ExactRational {
        ExactRational::parse(text).unwrap()
    }

    fn consts(a: &str, b: &str, c: &str, d: &str) -> Coeffs {
        Coeffs::new(q(a), q(b), q(c), q(d))
    }

    fn quad(c: &Coeffs) -> CoefficientQuad {
        CoefficientQuad::constant(c.a.clone(), c.b.clone(), c.c.clone(), c.d.clone()).unwrap()
    }

    fn init(x_prev: &str, x0: &str, y_prev: &str, y0: &str) -> InitialState {
        InitialState::new(q(x_prev), q(x0), q(y_prev), q(y0)).unwrap()
    }

    #[test]
    fn initial_indices_are_returned_unchanged() {
        let start = init("2/3", "-5", "7", "1/9");
        let c = consts("2", "3", "5", "7");
        for family in ClosedFormFamily::applicable(&quad(&c)) {
            assert_eq!(family.solve(&start, -1).unwrap(), (q("2/3"), q("7")));
            assert_eq!(family.solve(&start, 0).unwrap(), (q("-5"), q("1/9")));
            assert!(family.solve(&start, -2).is_err());
        }
    }

    #[test]
    fn unit_constants_examples() {
        let c = consts("1", "1", "1", "1");
        let unit = InitialState::unit();
        assert_eq!(
            solve_general(&quad(&c), &unit, 3).unwrap(),
            (q("3/8"), q("3/8"))
        );
        assert_eq!(solve_constant(&c, &unit, 2).unwrap().0, q("2/3"));
        assert_eq!(
            solve_unit(&q("1"), &q("1"), &unit, 3).unwrap(),
            (q("3/8"), q("3/8"))
        );
    }

    #[test]
    fn nonunit_and_neg_unit_examples() {
        let unit = InitialState::unit();
        assert_eq!(
            solve_nonunit(&consts("-1", "2", "-1", "3"), &unit, 2)
                .unwrap()
                .0,
            q("2")
        );
        assert_eq!(
            solve_nonunit(&consts("2", "1", "2", "1"), &unit, 1)
                .unwrap()
                .0,
            q("1/3")
        );
        assert_eq!(
            solve_neg_unit(&q("2"), &q("3"), &unit, 4).unwrap().0,
            q("4")
        );
        assert_eq!(
            solve_neg_unit(&q("2"), &q("3"), &unit, 3).unwrap(),
            (q("1"), q("1/4"))
        );
        for n in 1..6 {
            let (x, _) = solve_neg_unit(&q("2"), &q("3"), &unit, 2 * n).unwrap();
            let (_, y) = solve_neg_unit(&q("2"), &q("3"), &unit, 2 * n - 1).unwrap();
            assert_eq!(x, q("2").pow(n).unwrap());
            assert_eq!(y, q("2").pow(-n).unwrap());
        }
        assert!(solve_nonunit(&consts("1", "2", "3", "3"), &unit, 2).is_err());
    }

    #[test]
    fn unit_validity_violation_names_j() {
        // b x0 y_prev = -1 breaks the first step.
        let start = init("1", "1", "-1", "1");
        match solve_unit(&q("1"), &q("1"), &start, 2) {
            Err(Error::Forbidden(f)) => {
                assert_eq!(f.singularity.step, 0);
                assert_eq!(f.singularity.factor, Factor::FirstEquation);
                assert!(f.condition.contains("j = 1"), "{}", f.condition);
            }
            other => panic!("expected forbidden, got {other:?}"),
        }
        assert_eq!(
            solve_unit(&q("1"), &q("1"), &start, 0).unwrap(),
            (q("1"), q("1"))
        );
    }

    #[test]
    fn neg_unit_validity() {
        let start = init("1", "1", "1", "1");
        match solve_neg_unit(&q("2"), &q("1"), &start, 1) {
            Err(Error::Forbidden(f)) => {
                assert_eq!(f.singularity.factor, Factor::SecondEquation);
                assert_eq!(f.condition, "d·x_prev·y0 = 1");
            }
            other => panic!("expected forbidden, got {other:?}"),
        }
    }

    #[test]
    fn unit_condition_prediction() {
        let start = init("1", "1", "-1/3", "1");
        let predicted = unit_condition(&q("1"), &q("1"), &start, 10).unwrap();
        assert_eq!(predicted.j, 3);
        assert_eq!(
            predicted.singularity(),
            Singularity {
                step: 2,
                factor: Factor::FirstEquation
            }
        );
        assert_eq!(unit_condition(&q("1"), &q("1"), &start, 2), None);
        // Second-equation violation at a smaller j wins.
        let start = init("-1/2", "1", "-1/3", "1");
        let predicted = unit_condition(&q("1"), &q("1"), &start, 10).unwrap();
        assert_eq!((predicted.j, predicted.factor), (2, Factor::SecondEquation));
    }

    #[test]
    fn general_forbidden_attribution() {
        let start = init("1", "1", "-1/3", "1");
        let c = consts("1", "1", "1", "1");
        match solve_general(&quad(&c), &start, 5) {
            Err(Error::Forbidden(f)) => {
                assert_eq!(
                    f.singularity,
                    Singularity {
                        step: 2,
                        factor: Factor::FirstEquation
                    }
                );
                assert!(f.condition.contains("s = 1"), "{}", f.condition);
            }
            other => panic!("expected forbidden, got {other:?}"),
        }
        assert!(solve_general(&quad(&c), &start, 2).is_ok());
        assert_eq!(
            forbidden_scan(&quad(&c), &start, 10).unwrap(),
            Some(Singularity {
                step: 2,
                factor: Factor::FirstEquation
            })
        );
        assert_eq!(forbidden_scan(&quad(&c), &start, 2).unwrap(), None);
    }

    #[test]
    fn bracket_roles_cover_both_parities() {
        assert_eq!(
            bracket_role(5, Invariant::U, 3),
            "denominator bracket of x_5 vanishes at s = 1"
        );
        assert_eq!(
            bracket_role(5, Invariant::V, 4),
            "numerator bracket of x_5 vanishes at s = 2"
        );
        assert_eq!(
            bracket_role(4, Invariant::U, 2),
            "denominator bracket of x_4 vanishes at s = 0"
        );
        assert_eq!(
            bracket_role(4, Invariant::V, 4),
            "denominator bracket of y_4 vanishes at s = 1"
        );
    }

    #[test]
    fn geometric_identity_brackets() {
        for a in ["2", "-1", "1/3", "-7/2"] {
            for k in 0..12 {
                assert_eq!(
                    constant_bracket(&q(a), &q("5/3"), k),
                    nonunit_bracket(&q(a), &q("5/3"), k).unwrap()
                );
            }
        }
        for k in 0..12 {
            assert_eq!(
                constant_bracket(&q("1"), &q("-2/9"), k),
                unit_bracket(&q("-2/9"), k)
            );
        }
    }

    #[test]
    fn auto_family_selection() {
        let pick = |a: &str, c: &str| ClosedFormFamily::auto(&quad(&consts(a, "1", c, "1"))).tag();
        assert_eq!(pick("1", "1"), FamilyTag::Unit);
        assert_eq!(pick("-1", "-1"), FamilyTag::NegUnit);
        assert_eq!(pick("2", "-1"), FamilyTag::NonUnit);
        assert_eq!(pick("1", "2"), FamilyTag::Constant);
        let periodic = CoefficientQuad::periodic(
            vec![q("2"), q("3")],
            vec![q("1")],
            vec![q("1")],
            vec![q("1")],
        )
        .unwrap();
        assert_eq!(ClosedFormFamily::auto(&periodic).tag(), FamilyTag::General);
        assert!(
            ClosedFormFamily::new(FamilyTag::NegUnit, &quad(&consts("2", "1", "1", "1"))).is_err()
        );
        assert!(ClosedFormFamily::new(FamilyTag::Unit, &periodic).is_err());
    }

    #[test]
    fn sweep_matches_direct_evaluation() {
        let periodic = CoefficientQuad::periodic(
            vec![q("2"), q("-3"), q("1/2")],
            vec![q("1"), q("5")],
            vec![q("-1"), q("4/3")],
            vec![q("7"), q("-2"), q("3"), q("1")],
        )
        .unwrap();
        let start = init("1/2", "3", "-2", "5/7");
        let sweep = GeneralSweep::new(&periodic, &start, 14).unwrap();
        for m in -1..=14 {
            assert_eq!(
                sweep.solve(m).ok(),
                solve_general(&periodic, &start, m).ok(),
                "m = {m}"
            );
        }
        assert!(sweep.solve(15).is_err());
    }
}
