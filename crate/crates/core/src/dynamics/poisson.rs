//! Poisson structure of the symmetric chart, obtained by pulling back the
//! canonical bracket `{q1,p1} = {q2,p2} = 1` through the embedding
//! [`lift_to_f`](super::lift_to_f), with `T` treated as a passive parameter
//! of the leaf.
//!
//! Three entries of the six-coordinate bracket table come with stated
//! reference values: `{f2,f3} = g1+g2` and `{f3,g1} = {f3,g2} = 1`. The full
//! table is populated from the embedding; the stated entries are kept as a
//! cross-check, and a sign disagreement is reported rather than asserted
//! (the embedding convention forces `{f3,g1} = -1`).

use std::fmt;

use crate::error::Error;
use crate::model::{FState, QPState};
use crate::scalar::{Dual, Scalar, ScalarRef};

/// A coordinate of the six-variable symmetric chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FCoord {
    F0,
    F1,
    F2,
    F3,
    G1,
    G2,
}

pub const F_COORDS: [FCoord; 6] = [
    FCoord::F0,
    FCoord::F1,
    FCoord::F2,
    FCoord::F3,
    FCoord::G1,
    FCoord::G2,
];

impl FCoord {
    pub fn index(self) -> usize {
        match self {
            FCoord::F0 => 0,
            FCoord::F1 => 1,
            FCoord::F2 => 2,
            FCoord::F3 => 3,
            FCoord::G1 => 4,
            FCoord::G2 => 5,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FCoord::F0 => "f0",
            FCoord::F1 => "f1",
            FCoord::F2 => "f2",
            FCoord::F3 => "f3",
            FCoord::G1 => "g1",
            FCoord::G2 => "g2",
        }
    }

    /// The coordinate as a function on the Hamiltonian chart, through the
    /// level-set embedding.
    pub fn lift<S>(self, x: &QPState<S>) -> S
    where
        S: Scalar,
        for<'a> &'a S: ScalarRef<S>,
    {
        match self {
            FCoord::F0 => x.p1.clone(),
            FCoord::F1 => x.p2.clone(),
            FCoord::F2 => &x.q1 * &x.q2 + &x.t,
            FCoord::F3 => x.p1.clone() + &x.p2 - S::one(),
            FCoord::G1 => x.q1.clone(),
            FCoord::G2 => x.q2.clone(),
        }
    }
}

impl fmt::Display for FCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Canonical bracket of two functions of the Hamiltonian chart, evaluated at
/// `x` by dual-number differentiation:
/// `{F,G} = F_q1 G_p1 - F_p1 G_q1 + F_q2 G_p2 - F_p2 G_q2`.
pub fn qp_function_bracket<S, F, G>(f: F, g: G, x: &QPState<S>) -> S
where
    S: Scalar,
    for<'a> &'a S: ScalarRef<S>,
    F: Fn(&QPState<Dual<S>>) -> Dual<S>,
    G: Fn(&QPState<Dual<S>>) -> Dual<S>,
{
    let xd = QPState {
        q1: Dual::variable(x.q1.clone(), 0, 4),
        p1: Dual::variable(x.p1.clone(), 1, 4),
        q2: Dual::variable(x.q2.clone(), 2, 4),
        p2: Dual::variable(x.p2.clone(), 3, 4),
        t: Dual::constant(x.t.clone()),
    };
    let fv = f(&xd);
    let gv = g(&xd);
    fv.partial(0) * gv.partial(1) - fv.partial(1) * gv.partial(0) + fv.partial(2) * gv.partial(3)
        - fv.partial(3) * gv.partial(2)
}

/// Status of one entry of the pairwise bracket table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BracketEntry {
    /// Entry comes with a stated reference value (see [`stated_value`]).
    Stated,
    /// Entry is computed from the canonical bracket through the embedding.
    DerivedFromEmbedding,
    /// No stated value and derivation disabled for this table.
    Unspecified,
}

/// Reference value of a stated entry, in symmetric-chart coordinates.
/// `None` for pairs with no stated value.
pub fn stated_value<S>(a: FCoord, b: FCoord, x: &FState<S>) -> Option<S>
where
    S: Scalar,
    for<'a> &'a S: ScalarRef<S>,
{
    use FCoord::*;
    let direct = |a: FCoord, b: FCoord| -> Option<S> {
        match (a, b) {
            (F2, F3) => Some(x.g1.clone() + &x.g2),
            (F3, G1) | (F3, G2) => Some(S::one()),
            _ => None,
        }
    };
    direct(a, b).or_else(|| direct(b, a).map(|v| -v))
}

/// The pairwise bracket table on the six symmetric-chart coordinates.
#[derive(Clone, Debug)]
pub struct BracketTableF {
    entries: [[BracketEntry; 6]; 6],
}

const STATED_PAIRS: [(FCoord, FCoord); 3] = [
    (FCoord::F2, FCoord::F3),
    (FCoord::F3, FCoord::G1),
    (FCoord::F3, FCoord::G2),
];

impl BracketTableF {
    /// Full table: the three stated entries plus everything else derived from
    /// the embedding.
    pub fn full() -> Self {
        let mut entries = [[BracketEntry::DerivedFromEmbedding; 6]; 6];
        for (a, b) in STATED_PAIRS {
            entries[a.index()][b.index()] = BracketEntry::Stated;
            entries[b.index()][a.index()] = BracketEntry::Stated;
        }
        BracketTableF { entries }
    }

    /// Only the stated entries; all other pairs are unspecified and evaluate
    /// to an error.
    pub fn stated_only() -> Self {
        let mut entries = [[BracketEntry::Unspecified; 6]; 6];
        for (a, b) in STATED_PAIRS {
            entries[a.index()][b.index()] = BracketEntry::Stated;
            entries[b.index()][a.index()] = BracketEntry::Stated;
        }
        BracketTableF { entries }
    }

    pub fn entry(&self, a: FCoord, b: FCoord) -> BracketEntry {
        self.entries[a.index()][b.index()]
    }

    /// Evaluate `{a, b}` at a point of the level set `f3 = f0 + f1 - 1`.
    /// All specified or derivable entries go through the embedding; stated
    /// values are reference data, not the evaluation route.
    pub fn bracket<S>(&self, a: FCoord, b: FCoord, x: &FState<S>) -> Result<S, Error>
    where
        S: Scalar,
        for<'s> &'s S: ScalarRef<S>,
    {
        if self.entry(a, b) == BracketEntry::Unspecified {
            return Err(Error::UnspecifiedBracket(a.name(), b.name()));
        }
        let qp = crate::dynamics::reduce_to_qp(x)?;
        Ok(qp_function_bracket(
            |p: &QPState<Dual<S>>| a.lift::<Dual<S>>(p),
            |p: &QPState<Dual<S>>| b.lift::<Dual<S>>(p),
            &qp,
        ))
    }
}

/// Comparison of one stated bracket entry against the embedding.
#[derive(Clone, Debug)]
pub struct StatedBracketCheck<S> {
    pub pair: (FCoord, FCoord),
    pub stated: S,
    pub embedded: S,
    /// Embedded and stated values agree exactly.
    pub matches: bool,
    /// They differ exactly by sign: the known convention discrepancy on
    /// `{f3, g1}` and `{f3, g2}`.
    pub sign_discrepancy: bool,
}

/// Evaluate every stated entry against the embedding at one point.
pub fn check_stated_brackets<S>(x: &FState<S>) -> Result<Vec<StatedBracketCheck<S>>, Error>
where
    S: Scalar,
    for<'a> &'a S: ScalarRef<S>,
{
    let table = BracketTableF::full();
    STATED_PAIRS
        .iter()
        .map(|&(a, b)| {
            let stated = stated_value(a, b, x).expect("stated pair");
            let embedded = table.bracket(a, b, x)?;
            let matches = embedded == stated;
            let sign_discrepancy = !matches && embedded == -stated.clone();
            Ok(StatedBracketCheck { pair: (a, b), stated, embedded, matches, sign_discrepancy })
        })
        .collect()
}
