//! Rank functions of k-matroids: the four rank axioms, their link to
//! k-submodularity, and the free rank generator.
//!
//! The axioms, checked in this order:
//! 1. `r(0) = 0`;
//! 2. `r(T) <= r(U) <= r(T) + 1` when `U` extends `T` by one leaf at a root
//!    coordinate;
//! 3. `r(T⊓U) + r(T⊔U) <= r(T) + r(U)` for compatible `T`, `U`;
//! 4. `r(T⊓U) + r(T⊔U) <= r(T) + r(U) - 1` when `T`, `U` differ only at one
//!    coordinate, where they hold distinct leaves.

use std::fmt;

use crate::domain::{Label, Labeling};
use crate::error::{Error, Result};
use crate::function::{
    check_k_submodular, check_pairwise, tokens_compatible, tokens_split_leaf_pair, PairTable,
    ValuedFunction, Verdict, ViolationWitness,
};
use crate::scalar::Scalar;

/// A function with nonnegative integer values and `r(0) = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankFunction<S> {
    function: ValuedFunction<S>,
}

impl<S: Scalar> RankFunction<S> {
    pub fn new(function: ValuedFunction<S>) -> Result<Self> {
        let table = function.table()?;
        if let Some(v) = table.iter().find(|v| v.is_negative() || !v.is_integral()) {
            return Err(Error::InvalidArgument(format!(
                "rank value {v} is not a nonnegative integer"
            )));
        }
        if !table[0].is_zero() {
            return Err(Error::InvalidArgument(format!("rank of 0 is {}", table[0])));
        }
        Ok(RankFunction { function })
    }

    pub fn function(&self) -> &ValuedFunction<S> {
        &self.function
    }

    pub fn into_function(self) -> ValuedFunction<S> {
        self.function
    }
}

/// The first failing axiom with the labelings involved and both sides of the
/// failing inequality `lhs <= rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomViolation<S> {
    /// 1 to 4.
    pub axiom: u8,
    pub t: Labeling,
    pub u: Labeling,
    pub lhs: S,
    pub rhs: S,
}

impl<S: Scalar> fmt::Display for AxiomViolation<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "axiom {} fails at T = ({}), U = ({}): {} > {}",
            self.axiom, self.t, self.u, self.lhs, self.rhs
        )
    }
}

fn from_pair<S>(axiom: u8, w: ViolationWitness<S>) -> AxiomViolation<S> {
    AxiomViolation {
        axiom,
        t: w.t,
        u: w.u,
        lhs: w.lhs,
        rhs: w.rhs,
    }
}

/// Checks axioms 1 to 4 in order and returns the first failure. Accepts any
/// function so that arbitrary tables can be tested.
pub fn check_rank_axioms<S: Scalar>(r: &ValuedFunction<S>) -> Result<Verdict<AxiomViolation<S>>> {
    let table = PairTable::new(r)?;
    let zero = r.domain().zero();
    if !table.value(0).is_zero() {
        return Ok(Verdict::Fails(AxiomViolation {
            axiom: 1,
            t: zero.clone(),
            u: zero,
            lhs: table.value(0).clone(),
            rhs: S::zero(),
        }));
    }
    let domain = r.domain();
    for a in 0..table.len() {
        let tokens = table.tokens(a);
        for i in (0..tokens.len()).filter(|&i| tokens[i] == 0) {
            let t = table.labeling(a);
            for leaf in 1..=r.k() {
                let u = t.with(i, Label::Leaf(leaf));
                let rt = table.value(a).clone();
                let ru = table.value(domain.index_of(&u)).clone();
                let violation = if ru < rt {
                    Some((rt, ru))
                } else if ru > rt.clone() + S::one() {
                    Some((ru, rt + S::one()))
                } else {
                    None
                };
                if let Some((lhs, rhs)) = violation {
                    return Ok(Verdict::Fails(AxiomViolation {
                        axiom: 2,
                        t,
                        u,
                        lhs,
                        rhs,
                    }));
                }
            }
        }
    }
    if let Verdict::Fails(w) = table.scan(tokens_compatible, |lhs, rhs| lhs <= rhs) {
        return Ok(Verdict::Fails(from_pair(3, w)));
    }
    let strict = table.scan(tokens_split_leaf_pair, |lhs, rhs| {
        lhs.clone() <= rhs.clone() - S::one()
    });
    Ok(strict.map(|w| {
        let mut v = from_pair(4, w);
        v.rhs = v.rhs - S::one();
        v
    }))
}

/// Axiom verdict next to the pairwise and exhaustive k-submodularity
/// verdicts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankReport<S> {
    pub axioms: Verdict<AxiomViolation<S>>,
    pub pairwise: Verdict<ViolationWitness<S>>,
    pub submodular: Verdict<ViolationWitness<S>>,
    /// Whether every value lies in `[0, n]`.
    pub bounded: bool,
}

impl<S: Scalar> RankReport<S> {
    /// Axioms imply both submodularity verdicts and the value bound, and the
    /// two submodularity verdicts agree.
    pub fn consistent(&self) -> bool {
        let agree = self.pairwise.holds() == self.submodular.holds();
        let implied =
            !self.axioms.holds() || (self.pairwise.holds() && self.submodular.holds() && self.bounded);
        agree && implied
    }
}

impl<S: Scalar> fmt::Display for RankReport<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.axioms {
            Verdict::Holds => writeln!(f, "axioms: hold")?,
            Verdict::Fails(w) => writeln!(f, "axioms: {w}")?,
        }
        for (name, verdict) in [("pairwise", &self.pairwise), ("k-submodular", &self.submodular)] {
            match verdict {
                Verdict::Holds => writeln!(f, "{name}: holds")?,
                Verdict::Fails(w) => writeln!(f, "{name}: fails, {w}")?,
            }
        }
        Ok(())
    }
}

pub fn rank_is_k_submodular<S: Scalar>(r: &ValuedFunction<S>) -> Result<RankReport<S>> {
    let axioms = check_rank_axioms(r)?;
    let pairwise = check_pairwise(r)?;
    let submodular = check_k_submodular(r)?;
    let n = S::from_int(r.n() as i64);
    let bounded = r
        .table()?
        .iter()
        .all(|v| !v.is_negative() && *v <= n);
    Ok(RankReport {
        axioms,
        pairwise,
        submodular,
        bounded,
    })
}

/// `r(T) = min(|supp T|, cap)`, with `None` for no cap. Caps below `n` break
/// axiom 4 while keeping k-submodularity.
pub fn gen_free_rank<S: Scalar>(k: u32, n: usize, cap: Option<u64>) -> Result<RankFunction<S>> {
    let function = ValuedFunction::from_fn(k, n, |t| {
        let size = t.support_size() as u64;
        S::from_int(cap.map_or(size, |c| size.min(c)) as i64)
    })?;
    RankFunction::new(function)
}
