//! Exact dual optimization and end-to-end min-max certification.
//!
//! The dual feasible set is a union of one polyhedron per choice of
//! distinguished leaves `L`, so the dual optimum is found by solving one exact
//! LP per `L` (in enumeration order, first strict improvement wins). For
//! k-submodular `f` with `f(0) = 0` the optimum equals the minimum of `f`,
//! and the optimal vector yields a minimizer through its tight elements.

use std::collections::BTreeMap;
use std::fmt;

use crate::domain::{Label, Labeling};
use crate::dual::{extract_from_family, in_u, tight_family, SignedVector};
use crate::error::{Error, Result};
use crate::function::{brute_force_min, ValuedFunction, Verdict};
use crate::lp::{lp_min, LinearProgram, LpOutcome, Relation};
use crate::scalar::Scalar;

/// An optimal dual vector and its objective `-‖x‖`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualOptimum<S> {
    pub objective: S,
    pub vector: SignedVector<S>,
}

fn leaf_tokens(leaves: &Labeling) -> Result<Vec<u32>> {
    leaves
        .entries()
        .iter()
        .map(|l| l.leaf().ok_or_else(|| Error::NotAllLeaves(leaves.to_string())))
        .collect()
}

/// Dual constraints for fixed leaves: one row per distinct sign pattern, with
/// the smallest right-hand side among the labelings that share it. Returns
/// `None` when a pattern-free labeling (all roots, or `k = 1` quirks aside)
/// already has a negative value.
fn dual_rows<S: Scalar>(
    f: &ValuedFunction<S>,
    probe: &SignedVector<S>,
) -> Result<Option<BTreeMap<Vec<i8>, S>>> {
    let mut rows: BTreeMap<Vec<i8>, S> = BTreeMap::new();
    for t in f.domain().labelings()? {
        let pattern: Vec<i8> = (0..f.n()).map(|i| probe.sign(i, t.get(i))).collect();
        let value = f.value(&t);
        if pattern.iter().all(|&s| s == 0) {
            if value.is_negative() {
                return Ok(None);
            }
            continue;
        }
        rows.entry(pattern)
            .and_modify(|rhs| {
                if value < *rhs {
                    *rhs = value.clone();
                }
            })
            .or_insert(value);
    }
    Ok(Some(rows))
}

/// Maximizes `-‖x‖` over the feasible vectors with distinguished leaves
/// `leaves`. `None` means no such vector exists.
pub fn max_dual_fixed_l<S: Scalar>(
    f: &ValuedFunction<S>,
    leaves: &Labeling,
) -> Result<Option<DualOptimum<S>>> {
    f.domain().check(leaves)?;
    let tokens = leaf_tokens(leaves)?;
    let n = f.n();
    let probe = SignedVector::new(f.k(), vec![S::zero(); n], tokens.clone())?;
    let Some(rows) = dual_rows(f, &probe)? else {
        return Ok(None);
    };
    let mut lp = LinearProgram::new(vec![S::one(); n]);
    for (pattern, rhs) in rows {
        let coeffs = pattern.iter().map(|&s| S::from_int(s as i64)).collect();
        lp.push(coeffs, Relation::Le, rhs);
    }
    match lp_min(&lp)? {
        LpOutcome::Optimal(solution) => {
            let vector = SignedVector::new(f.k(), solution.point, tokens)?;
            Ok(Some(DualOptimum {
                objective: -solution.value,
                vector,
            }))
        }
        LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded => Err(Error::Precondition(
            "dual LP unbounded although the objective is bounded below".into(),
        )),
    }
}

/// Maximizes `-‖x‖` over all feasible signed vectors, trying every choice of
/// distinguished leaves. `None` when no feasible vector exists, which cannot
/// happen for normalized k-submodular `f`.
pub fn max_dual<S: Scalar>(f: &ValuedFunction<S>) -> Result<Option<DualOptimum<S>>> {
    let rows = f.domain().size();
    let choices = (f.k() as u128).checked_pow(f.n() as u32);
    f.domain()
        .ensure(rows.zip(choices).and_then(|(r, c)| r.checked_mul(c)))?;
    let mut best: Option<DualOptimum<S>> = None;
    for leaves in f.domain().leaf_labelings()? {
        if let Some(candidate) = max_dual_fixed_l(f, &leaves)? {
            if best.as_ref().is_none_or(|b| candidate.objective > b.objective) {
                best = Some(candidate);
            }
        }
    }
    Ok(best)
}

/// Maximizes `-‖x‖` over integral feasible signed vectors by exhaustive box
/// search. Requires integral `f`.
///
/// For fixed leaves the singleton labelings bound every coordinate: `x_i` is
/// at least `-f` at each negatively counted singleton and (for `k >= 2`) at most
/// `f` at the distinguished singleton. For `k = 1` there is no upper singleton
/// bound, and `n·max(0, -min f)` is used instead: setting every coordinate to
/// `max(0, -min f)` is feasible, so no optimal coordinate exceeds its norm.
/// Boxes are scanned lexicographically and pruned against the incumbent norm.
pub fn max_dual_integer<S: Scalar>(f: &ValuedFunction<S>) -> Result<Option<DualOptimum<S>>> {
    if !f.is_integral()? {
        return Err(Error::Precondition("function is not integer-valued".into()));
    }
    let n = f.n();
    let k = f.k();
    let domain = *f.domain();
    let k_one_bound = if k == 1 {
        let (min, _) = brute_force_min(f)?;
        let per = if min.is_negative() { -min } else { S::zero() };
        Some(per * S::from_int(n as i64))
    } else {
        None
    };
    let mut budget = Budget {
        used: 0,
        cap: domain.cap(),
    };
    let mut best: Option<DualOptimum<S>> = None;
    for leaves in domain.leaf_labelings()? {
        let tokens = leaf_tokens(&leaves)?;
        let probe = SignedVector::new(k, vec![S::zero(); n], tokens.clone())?;
        let mut lower = Vec::with_capacity(n);
        let mut upper = Vec::with_capacity(n);
        for i in 0..n {
            let mut lo = S::zero();
            for l in 1..=k {
                if probe.is_negative_leaf(i, l) {
                    let bound = -f.value(&domain.unit(i, Label::Leaf(l)));
                    if bound > lo {
                        lo = bound;
                    }
                }
            }
            let hi = match &k_one_bound {
                Some(b) => b.clone(),
                None => f.value(&domain.unit(i, Label::Leaf(tokens[i]))),
            };
            lower.push(lo);
            upper.push(hi);
        }
        if lower.iter().zip(&upper).any(|(lo, hi)| lo > hi) {
            continue;
        }
        let mut search = BoxSearch {
            f,
            tokens: &tokens,
            lower: &lower,
            upper: &upper,
            budget: &mut budget,
            incumbent: best.as_ref().map(|b| -b.objective.clone()),
            found: None,
        };
        let mut x = Vec::with_capacity(n);
        search.descend(&mut x, S::zero())?;
        if let Some(vector) = search.found {
            best = Some(DualOptimum {
                objective: vector.objective(),
                vector,
            });
        }
    }
    Ok(best)
}

struct Budget {
    used: u128,
    cap: u128,
}

struct BoxSearch<'a, S> {
    f: &'a ValuedFunction<S>,
    tokens: &'a [u32],
    lower: &'a [S],
    upper: &'a [S],
    budget: &'a mut Budget,
    /// Norm to beat strictly.
    incumbent: Option<S>,
    found: Option<SignedVector<S>>,
}

impl<S: Scalar> BoxSearch<'_, S> {
    fn descend(&mut self, x: &mut Vec<S>, partial: S) -> Result<()> {
        let i = x.len();
        let rest: S = self.lower[i..]
            .iter()
            .fold(S::zero(), |acc, v| acc + v.clone());
        if let Some(bound) = &self.incumbent {
            if partial.clone() + rest >= *bound {
                return Ok(());
            }
        }
        if i == self.lower.len() {
            self.budget.used += 1;
            if self.budget.used > self.budget.cap {
                return Err(Error::BudgetExceeded {
                    requested: self.budget.used,
                    cap: self.budget.cap,
                });
            }
            let v = SignedVector::new(self.f.k(), x.clone(), self.tokens.to_vec())?;
            if let Verdict::Holds = in_u(self.f, &v)? {
                self.incumbent = Some(v.norm());
                self.found = Some(v);
            }
            return Ok(());
        }
        let mut value = self.lower[i].clone();
        while value <= self.upper[i] {
            x.push(value.clone());
            self.descend(x, partial.clone() + value.clone())?;
            x.pop();
            value = value + S::one();
        }
        Ok(())
    }
}

/// A matched primal labeling and dual vector with equal objective values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate<S> {
    pub value: S,
    pub primal: Labeling,
    pub dual: SignedVector<S>,
    /// Tight labelings of the dual vector, in enumeration order.
    pub tight: Vec<Labeling>,
}

impl<S: Scalar> Certificate<S> {
    /// Re-checks the certificate against `f` from scratch.
    pub fn is_valid_for(&self, f: &ValuedFunction<S>) -> Result<bool> {
        Ok(f.evaluate(&self.primal)? == self.value
            && self.dual.objective() == self.value
            && in_u(f, &self.dual)?.holds())
    }
}

impl<S: Scalar> fmt::Display for Certificate<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x: Vec<String> = self.dual.x().iter().map(|v| v.to_string()).collect();
        let l: Vec<String> = self.dual.leaves().iter().map(|v| v.to_string()).collect();
        writeln!(f, "value {}", self.value)?;
        writeln!(f, "primal {}", self.primal)?;
        writeln!(f, "x {}", x.join(" "))?;
        writeln!(f, "L {}", l.join(" "))?;
        writeln!(f, "tight {}", self.tight.len())?;
        for t in &self.tight {
            writeln!(f, "{t}")?;
        }
        Ok(())
    }
}

/// Both sides of a failed min-max check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy<S> {
    pub primal_value: S,
    pub primal_argmin: Labeling,
    pub dual: Option<DualOptimum<S>>,
    pub reason: String,
}

impl<S: Scalar> fmt::Display for Discrepancy<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "discrepancy: {}", self.reason)?;
        writeln!(f, "min {} at {}", self.primal_value, self.primal_argmin)?;
        match &self.dual {
            Some(d) => {
                writeln!(f, "dual {}", d.objective)?;
                writeln!(f, "{}", d.vector)
            }
            None => writeln!(f, "dual infeasible"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinMaxOutcome<S> {
    Certified {
        certificate: Certificate<S>,
        /// First minimizer found by exhaustive search.
        brute_force_argmin: Labeling,
    },
    Discrepancy(Discrepancy<S>),
}

impl<S> MinMaxOutcome<S> {
    pub fn certificate(&self) -> Option<&Certificate<S>> {
        match self {
            MinMaxOutcome::Certified { certificate, .. } => Some(certificate),
            MinMaxOutcome::Discrepancy(_) => None,
        }
    }
}

/// Runs exhaustive minimization and dual maximization, requires exact
/// equality, then extracts a minimizer from the dual optimum. Any mismatch is
/// returned as a [`Discrepancy`] rather than an error.
pub fn verify_minmax<S: Scalar>(f: &ValuedFunction<S>) -> Result<MinMaxOutcome<S>> {
    if !f.is_normalized() {
        return Err(Error::Precondition(format!(
            "function is not normalized: f(0) = {}",
            f.value_at_zero()
        )));
    }
    let (primal_value, primal_argmin) = brute_force_min(f)?;
    let discrepancy = |dual: Option<DualOptimum<S>>, reason: String| {
        Ok(MinMaxOutcome::Discrepancy(Discrepancy {
            primal_value: primal_value.clone(),
            primal_argmin: primal_argmin.clone(),
            dual,
            reason,
        }))
    };
    let Some(dual) = max_dual(f)? else {
        return discrepancy(None, "no feasible dual vector".into());
    };
    if dual.objective != primal_value {
        let reason = format!(
            "minimum {} differs from dual maximum {}",
            primal_value, dual.objective
        );
        return discrepancy(Some(dual), reason);
    }
    let family = match tight_family(f, &dual.vector) {
        Ok(family) => family,
        Err(e) => return discrepancy(Some(dual), e.to_string()),
    };
    let primal = match extract_from_family(f, &dual.vector, &family) {
        Ok(t) => t,
        Err(e) => return discrepancy(Some(dual), e.to_string()),
    };
    Ok(MinMaxOutcome::Certified {
        certificate: Certificate {
            value: primal_value,
            primal,
            dual: dual.vector,
            tight: family.members().to_vec(),
        },
        brute_force_argmin: primal_argmin,
    })
}
