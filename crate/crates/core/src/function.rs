//! Exact-valued functions on the product domain and exhaustive verifiers for
//! k-submodularity, k-supermodularity and k-modularity.

use std::fmt;

use crate::domain::{Domain, Label, Labeling};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A local cost term: a dense table over the labelings of `scope`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term<S> {
    scope: Vec<usize>,
    table: Vec<S>,
}

impl<S: Scalar> Term<S> {
    /// `scope` holds distinct 0-based coordinates; `table` lists
    /// `(k+1)^scope.len()` values in enumeration order.
    pub fn new(k: u32, n: usize, scope: Vec<usize>, table: Vec<S>) -> Result<Term<S>> {
        for (pos, &i) in scope.iter().enumerate() {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, n });
            }
            if scope[..pos].contains(&i) {
                return Err(Error::InvalidArgument(format!(
                    "coordinate {} repeated in term scope",
                    i + 1
                )));
            }
        }
        let expected = (k as usize + 1)
            .checked_pow(scope.len() as u32)
            .ok_or_else(|| Error::InvalidArgument("term arity too large".into()))?;
        if table.len() != expected {
            return Err(Error::DimensionMismatch {
                expected: format!("{expected} table entries"),
                found: format!("{} table entries", table.len()),
            });
        }
        Ok(Term { scope, table })
    }

    pub fn scope(&self) -> &[usize] {
        &self.scope
    }

    pub fn table(&self) -> &[S] {
        &self.table
    }

    fn local_index(&self, k: u32, t: &Labeling) -> usize {
        let base = k as usize + 1;
        self.scope
            .iter()
            .fold(0, |acc, &i| acc * base + t.get(i).token() as usize)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Backend<S> {
    /// One value per labeling, in enumeration order.
    Dense(Vec<S>),
    /// Sum of local terms.
    Terms(Vec<Term<S>>),
}

/// An exact-valued function on `(k, n)` labelings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuedFunction<S> {
    domain: Domain,
    backend: Backend<S>,
    offset: S,
}

impl<S: Scalar> ValuedFunction<S> {
    pub fn dense(k: u32, n: usize, values: Vec<S>) -> Result<Self> {
        let domain = Domain::new(k, n)?;
        // the table is already materialized, so the enumeration cap does not apply
        let size = domain.with_cap(u128::MAX).checked_size()?;
        if values.len() != size {
            return Err(Error::DimensionMismatch {
                expected: format!("{size} values"),
                found: format!("{} values", values.len()),
            });
        }
        Ok(ValuedFunction {
            domain,
            backend: Backend::Dense(values),
            offset: S::zero(),
        })
    }

    pub fn from_terms(k: u32, n: usize, terms: Vec<Term<S>>) -> Result<Self> {
        let domain = Domain::new(k, n)?;
        Ok(ValuedFunction {
            domain,
            backend: Backend::Terms(terms),
            offset: S::zero(),
        })
    }

    /// Tabulates `value` over every labeling.
    pub fn from_fn(k: u32, n: usize, value: impl Fn(&Labeling) -> S) -> Result<Self> {
        let domain = Domain::new(k, n)?;
        let values = domain.labelings()?.map(|t| value(&t)).collect();
        ValuedFunction::dense(k, n, values)
    }

    /// The constant zero function.
    pub fn zero(k: u32, n: usize) -> Result<Self> {
        ValuedFunction::from_terms(k, n, Vec::new())
    }

    /// Sum of one unary term per coordinate; `unary[i]` lists the values at
    /// root, leaf 1, ..., leaf k.
    pub fn unary_sum(k: u32, unary: Vec<Vec<S>>) -> Result<Self> {
        let n = unary.len();
        let terms = unary
            .into_iter()
            .enumerate()
            .map(|(i, table)| Term::new(k, n, vec![i], table))
            .collect::<Result<Vec<_>>>()?;
        ValuedFunction::from_terms(k, n, terms)
    }

    pub fn with_cap(mut self, cap: u128) -> Self {
        self.domain = self.domain.with_cap(cap);
        self
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn k(&self) -> u32 {
        self.domain.k()
    }

    pub fn n(&self) -> usize {
        self.domain.n()
    }

    pub fn backend(&self) -> &Backend<S> {
        &self.backend
    }

    /// Total amount subtracted by [`ValuedFunction::normalize`] so far.
    pub fn offset(&self) -> &S {
        &self.offset
    }

    pub fn evaluate(&self, t: &Labeling) -> Result<S> {
        self.domain.check(t)?;
        Ok(self.value(t))
    }

    // Caller guarantees the shape.
    pub(crate) fn value(&self, t: &Labeling) -> S {
        match &self.backend {
            Backend::Dense(values) => values[self.domain.index_of(t)].clone(),
            Backend::Terms(terms) => terms.iter().fold(S::zero(), |acc, term| {
                acc + term.table[term.local_index(self.k(), t)].clone()
            }),
        }
    }

    /// Value at the all-root labeling.
    pub fn value_at_zero(&self) -> S {
        self.value(&self.domain.zero())
    }

    pub fn is_normalized(&self) -> bool {
        self.value_at_zero().is_zero()
    }

    /// Subtracts the value at the all-root labeling from every value.
    pub fn normalize(&self) -> Self {
        let shift = self.value_at_zero();
        if shift.is_zero() {
            return self.clone();
        }
        let backend = match &self.backend {
            Backend::Dense(values) => {
                Backend::Dense(values.iter().map(|v| v.clone() - shift.clone()).collect())
            }
            Backend::Terms(terms) => Backend::Terms(
                terms
                    .iter()
                    .map(|term| {
                        let base = term.table[0].clone();
                        Term {
                            scope: term.scope.clone(),
                            table: term.table.iter().map(|v| v.clone() - base.clone()).collect(),
                        }
                    })
                    .collect(),
            ),
        };
        ValuedFunction {
            domain: self.domain,
            backend,
            offset: self.offset.clone() + shift,
        }
    }

    /// Every value in enumeration order.
    pub fn table(&self) -> Result<Vec<S>> {
        match &self.backend {
            Backend::Dense(values) => Ok(values.clone()),
            Backend::Terms(_) => Ok(self.domain.labelings()?.map(|t| self.value(&t)).collect()),
        }
    }

    /// Expands a sum of terms into a dense table.
    pub fn to_dense(&self) -> Result<Self> {
        Ok(ValuedFunction {
            domain: self.domain,
            backend: Backend::Dense(self.table()?),
            offset: self.offset.clone(),
        })
    }

    pub fn is_integral(&self) -> Result<bool> {
        Ok(match &self.backend {
            Backend::Dense(values) => values.iter().all(Scalar::is_integral),
            Backend::Terms(_) => self.table()?.iter().all(Scalar::is_integral),
        })
    }

    /// Pointwise sum, kept as a sum of terms.
    pub fn plus(&self, other: &Self) -> Result<Self> {
        if self.k() != other.k() || self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                expected: format!("k={} n={}", self.k(), self.n()),
                found: format!("k={} n={}", other.k(), other.n()),
            });
        }
        let mut terms = self.as_terms();
        terms.extend(other.as_terms());
        Ok(ValuedFunction {
            domain: self.domain,
            backend: Backend::Terms(terms),
            offset: self.offset.clone() + other.offset.clone(),
        })
    }

    fn as_terms(&self) -> Vec<Term<S>> {
        match &self.backend {
            Backend::Dense(values) => vec![Term {
                scope: (0..self.n()).collect(),
                table: values.clone(),
            }],
            Backend::Terms(terms) => terms.clone(),
        }
    }

    /// Pins coordinate `i` (0-based) to `label`, giving a function of the
    /// remaining `n - 1` coordinates.
    pub fn restrict_fix(&self, i: usize, label: Label) -> Result<Self> {
        let n = self.n();
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
        if n == 1 {
            return Err(Error::InvalidArgument(
                "cannot fix the only coordinate".into(),
            ));
        }
        if let Label::Leaf(l) = label {
            if l == 0 || l > self.k() {
                return Err(Error::InvalidLabel { label: l, k: self.k() });
            }
        }
        let k = self.k();
        let minor = Domain::new(k, n - 1)?.with_cap(self.domain.cap());
        let backend = match &self.backend {
            Backend::Dense(values) => Backend::Dense(
                minor
                    .labelings()?
                    .map(|t| {
                        let mut entries = t.entries().to_vec();
                        entries.insert(i, label);
                        let full = Labeling::new(k, entries).expect("labels already valid");
                        values[self.domain.index_of(&full)].clone()
                    })
                    .collect(),
            ),
            Backend::Terms(terms) => Backend::Terms(
                terms
                    .iter()
                    .map(|term| restrict_term(k, term, i, label))
                    .collect(),
            ),
        };
        Ok(ValuedFunction {
            domain: minor,
            backend,
            offset: self.offset.clone(),
        })
    }
}

fn restrict_term<S: Scalar>(k: u32, term: &Term<S>, i: usize, label: Label) -> Term<S> {
    let shift = |j: usize| if j > i { j - 1 } else { j };
    let Some(pos) = term.scope.iter().position(|&j| j == i) else {
        return Term {
            scope: term.scope.iter().map(|&j| shift(j)).collect(),
            table: term.table.clone(),
        };
    };
    let arity = term.scope.len();
    let base = k as usize + 1;
    let stride = base.pow((arity - 1 - pos) as u32);
    let table = (0..term.table.len())
        .filter(|&idx| (idx / stride) % base == label.token() as usize)
        .map(|idx| term.table[idx].clone())
        .collect();
    Term {
        scope: term
            .scope
            .iter()
            .filter(|&&j| j != i)
            .map(|&j| shift(j))
            .collect(),
        table,
    }
}

/// A pair of labelings on which an inequality fails, with both sides:
/// `lhs = f(T ⊓ U) + f(T ⊔ U)` and `rhs = f(T) + f(U)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ViolationWitness<S> {
    pub t: Labeling,
    pub u: Labeling,
    pub lhs: S,
    pub rhs: S,
}

impl<S: Scalar> fmt::Display for ViolationWitness<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "T=({}) U=({}) f(T^U)+f(TvU)={} f(T)+f(U)={}",
            self.t, self.u, self.lhs, self.rhs
        )
    }
}

/// Outcome of an exhaustive check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<W> {
    Holds,
    Fails(W),
}

impl<W> Verdict<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(w) => Some(w),
        }
    }

    pub fn map<V>(self, op: impl FnOnce(W) -> V) -> Verdict<V> {
        match self {
            Verdict::Holds => Verdict::Holds,
            Verdict::Fails(w) => Verdict::Fails(op(w)),
        }
    }
}

/// Dense view used by the pair scans: values plus the token vector of every
/// labeling, so meets and joins resolve to table indices without allocation.
pub(crate) struct PairTable<S> {
    domain: Domain,
    values: Vec<S>,
    tokens: Vec<Vec<u32>>,
}

impl<S: Scalar> PairTable<S> {
    pub(crate) fn new(f: &ValuedFunction<S>) -> Result<Self> {
        f.domain.ensure_pairs()?;
        let values = f.table()?;
        let tokens = f.domain.labelings()?.map(|t| t.tokens()).collect();
        Ok(PairTable {
            domain: f.domain,
            values,
            tokens,
        })
    }

    pub(crate) fn len(&self) -> usize {
        self.values.len()
    }

    pub(crate) fn value(&self, index: usize) -> &S {
        &self.values[index]
    }

    pub(crate) fn tokens(&self, index: usize) -> &[u32] {
        &self.tokens[index]
    }

    pub(crate) fn labeling(&self, index: usize) -> Labeling {
        self.domain.labeling_at(index)
    }

    fn combine(&self, a: usize, b: usize, op: fn(u32, u32) -> u32) -> usize {
        let base = self.domain.k() as usize + 1;
        self.tokens[a]
            .iter()
            .zip(&self.tokens[b])
            .fold(0, |acc, (&s, &t)| acc * base + op(s, t) as usize)
    }

    pub(crate) fn meet(&self, a: usize, b: usize) -> usize {
        self.combine(a, b, |s, t| if s == t { s } else { 0 })
    }

    pub(crate) fn join(&self, a: usize, b: usize) -> usize {
        self.combine(a, b, |s, t| match (s, t) {
            _ if s == t => s,
            (0, t) => t,
            (s, 0) => s,
            _ => 0,
        })
    }

    /// `(f(T⊓U) + f(T⊔U), f(T) + f(U))`.
    pub(crate) fn sides(&self, a: usize, b: usize) -> (S, S) {
        let lhs = self.values[self.meet(a, b)].clone() + self.values[self.join(a, b)].clone();
        let rhs = self.values[a].clone() + self.values[b].clone();
        (lhs, rhs)
    }

    pub(crate) fn witness(&self, a: usize, b: usize, lhs: S, rhs: S) -> ViolationWitness<S> {
        ViolationWitness {
            t: self.labeling(a),
            u: self.labeling(b),
            lhs,
            rhs,
        }
    }

    /// First ordered pair accepted by `filter` whose sides fail `ok`.
    pub(crate) fn scan(
        &self,
        filter: impl Fn(&[u32], &[u32]) -> bool,
        ok: impl Fn(&S, &S) -> bool,
    ) -> Verdict<ViolationWitness<S>> {
        for a in 0..self.len() {
            for b in 0..self.len() {
                if !filter(&self.tokens[a], &self.tokens[b]) {
                    continue;
                }
                let (lhs, rhs) = self.sides(a, b);
                if !ok(&lhs, &rhs) {
                    return Verdict::Fails(self.witness(a, b, lhs, rhs));
                }
            }
        }
        Verdict::Holds
    }
}

/// Token-level compatibility: no coordinate holds two distinct leaves.
pub(crate) fn tokens_compatible(t: &[u32], u: &[u32]) -> bool {
    t.iter().zip(u).all(|(&a, &b)| a == 0 || b == 0 || a == b)
}

/// Token-level test for pairs that differ in exactly one coordinate, where they
/// hold two distinct leaves.
pub(crate) fn tokens_split_leaf_pair(t: &[u32], u: &[u32]) -> bool {
    let mut differing = t.iter().zip(u).filter(|(a, b)| a != b);
    match (differing.next(), differing.next()) {
        (Some((&a, &b)), None) => a != 0 && b != 0,
        _ => false,
    }
}

/// Exhaustive test of `f(T⊓U) + f(T⊔U) <= f(T) + f(U)` over all ordered
/// pairs; the witness is the first failing pair in enumeration order.
pub fn check_k_submodular<S: Scalar>(f: &ValuedFunction<S>) -> Result<Verdict<ViolationWitness<S>>> {
    Ok(PairTable::new(f)?.scan(|_, _| true, |lhs, rhs| lhs <= rhs))
}

pub fn check_k_supermodular<S: Scalar>(
    f: &ValuedFunction<S>,
) -> Result<Verdict<ViolationWitness<S>>> {
    Ok(PairTable::new(f)?.scan(|_, _| true, |lhs, rhs| lhs >= rhs))
}

pub fn check_k_modular<S: Scalar>(f: &ValuedFunction<S>) -> Result<Verdict<ViolationWitness<S>>> {
    Ok(PairTable::new(f)?.scan(|_, _| true, |lhs, rhs| lhs == rhs))
}

/// The submodular inequality restricted to compatible pairs and to pairs that
/// differ in a single coordinate holding two distinct leaves. Equivalent to
/// [`check_k_submodular`] in verdict.
pub fn check_pairwise<S: Scalar>(f: &ValuedFunction<S>) -> Result<Verdict<ViolationWitness<S>>> {
    Ok(PairTable::new(f)?.scan(
        |t, u| tokens_compatible(t, u) || tokens_split_leaf_pair(t, u),
        |lhs, rhs| lhs <= rhs,
    ))
}

/// Exact minimum and the first minimizer in enumeration order.
pub fn brute_force_min<S: Scalar>(f: &ValuedFunction<S>) -> Result<(S, Labeling)> {
    let mut best: Option<(S, Labeling)> = None;
    for t in f.domain.labelings()? {
        let value = f.value(&t);
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, t));
        }
    }
    Ok(best.expect("domain is never empty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::enumerate_labelings;
    use num_bigint::BigInt;
    use num_rational::Ratio;

    type Q = Ratio<BigInt>;

    fn q(v: i64) -> Q {
        Q::from_int(v)
    }

    fn lab(k: u32, tokens: &[u32]) -> Labeling {
        Labeling::from_tokens(k, tokens).unwrap()
    }

    /// k=3, n=1 unary g = (0, -1, 1, 2).
    fn e1() -> ValuedFunction<Q> {
        ValuedFunction::unary_sum(3, vec![vec![q(0), q(-1), q(1), q(2)]]).unwrap()
    }

    fn h() -> ValuedFunction<Q> {
        ValuedFunction::dense(2, 1, vec![q(0), q(-1), q(-1)]).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let zero = ValuedFunction::<Q>::zero(2, 3).unwrap();
        assert_eq!(zero.evaluate(&lab(2, &[1, 2, 0])).unwrap(), q(0));
        assert_eq!(e1().evaluate(&lab(3, &[1])).unwrap(), q(-1));
        let g = vec![q(0), q(-1), q(1), q(2)];
        let doubled = ValuedFunction::from_terms(
            3,
            1,
            vec![
                Term::new(3, 1, vec![0], g.clone()).unwrap(),
                Term::new(3, 1, vec![0], g).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(doubled.evaluate(&lab(3, &[3])).unwrap(), q(4));
        assert!(e1().evaluate(&lab(3, &[1, 1])).is_err());
        assert!(e1().evaluate(&lab(2, &[1])).is_err());
    }

    #[test]
    fn terms_validate_scope_and_size() {
        assert!(Term::new(2, 2, vec![0, 0], vec![q(0); 9]).is_err());
        assert!(Term::new(2, 2, vec![2], vec![q(0); 3]).is_err());
        assert!(Term::new(2, 2, vec![1], vec![q(0); 4]).is_err());
        assert!(ValuedFunction::dense(2, 2, vec![q(0); 8]).is_err());
    }

    #[test]
    fn normalize_examples() {
        let five = ValuedFunction::dense(2, 1, vec![q(5); 3]).unwrap();
        let normalized = five.normalize();
        assert_eq!(normalized.table().unwrap(), vec![q(0); 3]);
        assert_eq!(normalized.offset(), &q(5));
        assert_eq!(e1().normalize(), e1());
        let shifted = ValuedFunction::unary_sum(2, vec![vec![q(3), q(1), q(4)], vec![q(2), q(0), q(7)]])
            .unwrap();
        let (before, argmin) = brute_force_min(&shifted).unwrap();
        let (after, argmin_after) = brute_force_min(&shifted.normalize()).unwrap();
        assert_eq!(after, before - q(5));
        assert_eq!(argmin, argmin_after);
        assert!(shifted.normalize().is_normalized());
    }

    #[test]
    fn submodularity_examples() {
        assert!(check_k_submodular(&e1()).unwrap().holds());
        let witness = check_k_submodular(&h()).unwrap();
        assert_eq!(
            witness,
            Verdict::Fails(ViolationWitness {
                t: lab(2, &[1]),
                u: lab(2, &[2]),
                lhs: q(0),
                rhs: q(-2),
            })
        );
        let card = ValuedFunction::from_fn(1, 3, |t| q(t.support_size() as i64)).unwrap();
        assert!(check_k_submodular(&card).unwrap().holds());
        assert!(check_k_modular(&card).unwrap().holds());
    }

    #[test]
    fn supermodularity_and_modularity_examples() {
        assert!(check_k_modular(&ValuedFunction::<Q>::zero(3, 2).unwrap())
            .unwrap()
            .holds());
        let Verdict::Fails(w) = check_k_supermodular(&e1()).unwrap() else {
            panic!("E1 is not supermodular");
        };
        assert!(w.lhs < w.rhs);
        assert!(w.t.get(0).is_leaf() && w.u.get(0).is_leaf() && w.t != w.u);
        // (1),(2) gives 0 >= 0, so the first failure is (1),(3)
        assert_eq!((w.t.tokens(), w.u.tokens()), (vec![1], vec![3]));
        let pairs = PairTable::new(&e1()).unwrap();
        let (lhs, rhs) = pairs.sides(2, 3);
        assert_eq!((lhs, rhs), (q(0), q(3)));
    }

    #[test]
    fn pairwise_examples() {
        assert!(check_pairwise(&e1()).unwrap().holds());
        let Verdict::Fails(w) = check_pairwise(&h()).unwrap() else {
            panic!("h is not k-submodular");
        };
        assert!(w.t.i_similar(&w.u, 0).unwrap());
        assert!(w.t.get(0).is_leaf() && w.u.get(0).is_leaf() && w.t != w.u);
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(brute_force_min(&e1()).unwrap(), (q(-1), lab(3, &[1])));
        let zero = ValuedFunction::<Q>::zero(2, 2).unwrap();
        assert_eq!(brute_force_min(&zero).unwrap(), (q(0), lab(2, &[0, 0])));
    }

    #[test]
    fn checks_respect_the_cap() {
        let f = ValuedFunction::<Q>::zero(3, 3).unwrap().with_cap(1000);
        assert!(matches!(
            check_k_submodular(&f),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(brute_force_min(&f).is_ok());
    }

    #[test]
    fn restrict_fix_on_terms_and_tables() {
        let f = ValuedFunction::unary_sum(
            2,
            vec![vec![q(0), q(2), q(-1)], vec![q(0), q(3), q(1)], vec![q(0), q(-2), q(5)]],
        )
        .unwrap();
        let fixed = f.restrict_fix(1, Label::Leaf(2)).unwrap();
        assert_eq!(fixed.n(), 2);
        let dense_fixed = f.to_dense().unwrap().restrict_fix(1, Label::Leaf(2)).unwrap();
        for t in enumerate_labelings(2, 2).unwrap() {
            let mut entries = t.entries().to_vec();
            entries.insert(1, Label::Leaf(2));
            let full = Labeling::new(2, entries).unwrap();
            assert_eq!(fixed.evaluate(&t).unwrap(), f.evaluate(&full).unwrap());
            assert_eq!(dense_fixed.evaluate(&t).unwrap(), f.evaluate(&full).unwrap());
        }
        assert!(fixed.evaluate(&lab(2, &[0, 0])).unwrap() == q(1));
        assert!(f.restrict_fix(0, Label::Root).unwrap().is_normalized());
        assert!(f.restrict_fix(3, Label::Root).is_err());
        assert!(f.restrict_fix(0, Label::Leaf(3)).is_err());
        assert!(e1().restrict_fix(0, Label::Root).is_err());
    }

    #[test]
    fn plus_adds_pointwise() {
        let sum = e1().plus(&e1().to_dense().unwrap()).unwrap();
        for t in enumerate_labelings(3, 1).unwrap() {
            assert_eq!(sum.evaluate(&t).unwrap(), e1().evaluate(&t).unwrap() * q(2));
        }
        assert!(e1().plus(&h()).is_err());
    }

    #[test]
    fn integrality() {
        assert!(e1().is_integral().unwrap());
        let half = ValuedFunction::dense(1, 1, vec![q(0), Q::from_frac(1, 2)]).unwrap();
        assert!(!half.is_integral().unwrap());
    }
}
