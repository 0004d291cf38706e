//! The four coefficient sequences `a_n, b_n, c_n, d_n`.

use std::fmt;

use crate::error::{Error, Result};
use crate::numeric::ExactRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SequenceKind {
    /// One value for every `n`.
    Constant,
    /// Entry `n mod period`.
    Periodic,
    /// Entry `n`, defined only below the table length.
    Table,
}

impl SequenceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SequenceKind::Constant => "constant",
            SequenceKind::Periodic => "periodic",
            SequenceKind::Table => "table",
        }
    }
}

impl fmt::Display for SequenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    A,
    B,
    C,
    D,
}

impl Component {
    pub const ALL: [Component; 4] = [Component::A, Component::B, Component::C, Component::D];

    pub fn letter(self) -> char {
        match self {
            Component::A => 'a',
            Component::B => 'b',
            Component::C => 'c',
            Component::D => 'd',
        }
    }
}

/// `(a_n, b_n, c_n, d_n)` at one index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coeffs {
    pub a: ExactRational,
    pub b: ExactRational,
    pub c: ExactRational,
    pub d: ExactRational,
}

impl Coeffs {
    pub fn new(a: ExactRational, b: ExactRational, c: ExactRational, d: ExactRational) -> Self {
        Coeffs { a, b, c, d }
    }

    pub fn get(&self, component: Component) -> &ExactRational {
        match component {
            Component::A => &self.a,
            Component::B => &self.b,
            Component::C => &self.c,
            Component::D => &self.d,
        }
    }
}

/// The coefficient sequences of the system. Every stored entry is nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientQuad {
    kind: SequenceKind,
    entries: [Vec<ExactRational>; 4],
}

impl CoefficientQuad {
    pub fn new(
        kind: SequenceKind,
        a: Vec<ExactRational>,
        b: Vec<ExactRational>,
        c: Vec<ExactRational>,
        d: Vec<ExactRational>,
    ) -> Result<Self> {
        let entries = [a, b, c, d];
        for (component, values) in Component::ALL.iter().zip(&entries) {
            if values.is_empty() {
                return Err(Error::EmptyCoefficient {
                    component: component.letter(),
                });
            }
            if kind == SequenceKind::Constant && values.len() != 1 {
                return Err(Error::Domain(format!(
                    "constant coefficient {} needs exactly one value, got {}",
                    component.letter(),
                    values.len()
                )));
            }
            if let Some(index) = values.iter().position(ExactRational::is_zero) {
                return Err(Error::ZeroCoefficient {
                    component: component.letter(),
                    index,
                });
            }
        }
        Ok(CoefficientQuad { kind, entries })
    }

    pub fn constant(
        a: ExactRational,
        b: ExactRational,
        c: ExactRational,
        d: ExactRational,
    ) -> Result<Self> {
        Self::new(SequenceKind::Constant, vec![a], vec![b], vec![c], vec![d])
    }

    pub fn periodic(
        a: Vec<ExactRational>,
        b: Vec<ExactRational>,
        c: Vec<ExactRational>,
        d: Vec<ExactRational>,
    ) -> Result<Self> {
        Self::new(SequenceKind::Periodic, a, b, c, d)
    }

    pub fn table(
        a: Vec<ExactRational>,
        b: Vec<ExactRational>,
        c: Vec<ExactRational>,
        d: Vec<ExactRational>,
    ) -> Result<Self> {
        Self::new(SequenceKind::Table, a, b, c, d)
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    pub fn entries(&self, component: Component) -> &[ExactRational] {
        &self.entries[component as usize]
    }

    /// Largest `N` such that every index `n < N` is defined, for tables.
    pub fn horizon(&self) -> Option<usize> {
        match self.kind {
            SequenceKind::Table => self.entries.iter().map(Vec::len).min(),
            _ => None,
        }
    }

    /// The four constants, when the quad is of constant kind.
    pub fn as_constant(&self) -> Option<Coeffs> {
        match self.kind {
            SequenceKind::Constant => Some(Coeffs::new(
                self.entries[0][0].clone(),
                self.entries[1][0].clone(),
                self.entries[2][0].clone(),
                self.entries[3][0].clone(),
            )),
            _ => None,
        }
    }

    /// One component at index `n`.
    pub fn value(&self, component: Component, n: i64) -> Result<&ExactRational> {
        let values = self.entries(component);
        if n < 0 {
            return Err(Error::Domain(format!(
                "coefficient {} requested at negative index {n}",
                component.letter()
            )));
        }
        let index = n as usize;
        match self.kind {
            SequenceKind::Constant => Ok(&values[0]),
            SequenceKind::Periodic => Ok(&values[index % values.len()]),
            SequenceKind::Table => values.get(index).ok_or(Error::Horizon {
                component: component.letter(),
                index: n,
                horizon: values.len(),
            }),
        }
    }

    pub fn coeff_at(&self, n: usize) -> Result<Coeffs> {
        let n = n as i64;
        Ok(Coeffs::new(
            self.value(Component::A, n)?.clone(),
            self.value(Component::B, n)?.clone(),
            self.value(Component::C, n)?.clone(),
            self.value(Component::D, n)?.clone(),
        ))
    }

    /// `∏_{k=from}^{to} seq_k`; the empty range (`to < from`) gives 1.
    pub fn product_range(&self, component: Component, from: i64, to: i64) -> Result<ExactRational> {
        let mut acc = ExactRational::one();
        for k in from..=to {
            acc *= self.value(component, k)?;
        }
        Ok(acc)
    }
}
