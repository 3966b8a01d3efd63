//! Signed dual vectors `(x, L)` and the machinery that turns an optimal one into
//! a minimizer.
//!
//! A signed vector pairs nonnegative magnitudes `x` with one distinguished
//! leaf per coordinate. It evaluates a labeling coordinatewise: 0 at the root,
//! `+x_i` at the distinguished leaf `L_i`, `-x_i` at every other leaf. For
//! `k = 1` the single leaf always contributes `-x_i` and `L_i` is nominal;
//! this reproduces the negative orthant of the classical submodular
//! polyhedron.
//!
//! A signed vector is dual-feasible for `f` when its evaluation is dominated by
//! `f` everywhere. Labelings where the two agree are *tight*; they are closed
//! under meet and join, and at each support coordinate they carry at most one
//! leaf other than `L_i`, the *negative leaf*.

use std::collections::HashSet;
use std::fmt;

use crate::domain::{Label, Labeling};
use crate::error::{Error, Result};
use crate::function::{ValuedFunction, Verdict, ViolationWitness};
use crate::scalar::{self, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedVector<S> {
    k: u32,
    x: Vec<S>,
    leaves: Vec<u32>,
}

impl<S: Scalar> SignedVector<S> {
    pub fn new(k: u32, x: Vec<S>, leaves: Vec<u32>) -> Result<Self> {
        if x.len() != leaves.len() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} leaves", x.len()),
                found: format!("{} leaves", leaves.len()),
            });
        }
        if let Some(v) = x.iter().find(|v| v.is_negative()) {
            return Err(Error::InvalidArgument(format!("negative magnitude {v}")));
        }
        if let Some(&l) = leaves.iter().find(|&&l| l == 0 || l > k) {
            return Err(Error::InvalidLabel { label: l, k });
        }
        Ok(SignedVector { k, x, leaves })
    }

    /// The zero vector with every distinguished leaf set to 1.
    pub fn zero(k: u32, n: usize) -> Self {
        SignedVector {
            k,
            x: vec![S::zero(); n],
            leaves: vec![1; n],
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[S] {
        &self.x
    }

    pub fn leaves(&self) -> &[u32] {
        &self.leaves
    }

    /// `L` as a labeling.
    pub fn leaf_labeling(&self) -> Labeling {
        Labeling::new(self.k, self.leaves.iter().map(|&l| Label::Leaf(l)).collect())
            .expect("leaves validated on construction")
    }

    /// Coordinates with `x_i > 0`, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.x[i].is_positive()).collect()
    }

    /// `‖x‖ = Σ x_i`.
    pub fn norm(&self) -> S {
        scalar::sum(&self.x)
    }

    /// Whether `leaf` counts with a minus sign at coordinate `i`.
    pub fn is_negative_leaf(&self, i: usize, leaf: u32) -> bool {
        self.k == 1 || leaf != self.leaves[i]
    }

    /// Sign of coordinate `i` of the evaluation at `label`: -1, 0 or +1.
    pub fn sign(&self, i: usize, label: Label) -> i8 {
        match label {
            Label::Root => 0,
            Label::Leaf(l) if self.is_negative_leaf(i, l) => -1,
            Label::Leaf(_) => 1,
        }
    }

    pub fn eval(&self, t: &Labeling) -> Result<S> {
        self.check_labeling(t)?;
        Ok(self.value(t))
    }

    pub(crate) fn value(&self, t: &Labeling) -> S {
        t.entries()
            .iter()
            .enumerate()
            .fold(S::zero(), |acc, (i, &label)| match self.sign(i, label) {
                1 => acc + self.x[i].clone(),
                -1 => acc - self.x[i].clone(),
                _ => acc,
            })
    }

    /// The dual objective `-‖x‖`.
    pub fn objective(&self) -> S {
        -self.norm()
    }

    /// `(x - alpha·χ_i, L)`.
    pub fn decremented(&self, i: usize, alpha: &S) -> Result<Self> {
        self.decremented_many(&[i], alpha)
    }

    fn decremented_many(&self, coordinates: &[usize], alpha: &S) -> Result<Self> {
        if !alpha.is_positive() {
            return Err(Error::InvalidArgument(format!("step {alpha} must be positive")));
        }
        let mut x = self.x.clone();
        for &i in coordinates {
            if i >= self.n() {
                return Err(Error::IndexOutOfRange { index: i, n: self.n() });
            }
            if *alpha > x[i] {
                return Err(Error::InvalidArgument(format!(
                    "step {alpha} exceeds x_{} = {}",
                    i + 1,
                    x[i]
                )));
            }
            x[i] = x[i].clone() - alpha.clone();
        }
        Ok(SignedVector {
            k: self.k,
            x,
            leaves: self.leaves.clone(),
        })
    }

    fn check_labeling(&self, t: &Labeling) -> Result<()> {
        if t.k() != self.k || t.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: format!("k={} n={}", self.k, self.n()),
                found: format!("k={} n={}", t.k(), t.len()),
            });
        }
        Ok(())
    }

    fn check_function(&self, f: &ValuedFunction<S>) -> Result<()> {
        if f.k() != self.k || f.n() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: format!("k={} n={}", f.k(), f.n()),
                found: format!("k={} n={}", self.k, self.n()),
            });
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Display for SignedVector<S> {
    /// Two lines: the magnitudes, then the distinguished leaves.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x: Vec<String> = self.x.iter().map(|v| v.to_string()).collect();
        let l: Vec<String> = self.leaves.iter().map(|v| v.to_string()).collect();
        write!(f, "{}\n{}", x.join(" "), l.join(" "))
    }
}

/// Evaluation of `(x, L)` at `t`.
pub fn eval_signed<S: Scalar>(v: &SignedVector<S>, t: &Labeling) -> Result<S> {
    v.eval(t)
}

/// `-‖x‖`.
pub fn dual_objective<S: Scalar>(v: &SignedVector<S>) -> S {
    v.objective()
}

/// The evaluation of `v` as a function, tabulated.
pub fn signed_function<S: Scalar>(v: &SignedVector<S>) -> Result<ValuedFunction<S>> {
    ValuedFunction::from_fn(v.k, v.n(), |t| v.value(t))
}

/// First labeling (in enumeration order) where the evaluation of `v` exceeds `f`.
pub fn in_u<S: Scalar>(f: &ValuedFunction<S>, v: &SignedVector<S>) -> Result<Verdict<Labeling>> {
    v.check_function(f)?;
    for t in f.domain().labelings()? {
        if v.value(&t) > f.value(&t) {
            return Ok(Verdict::Fails(t));
        }
    }
    Ok(Verdict::Holds)
}

/// Like [`in_u`], restricted to labelings below the all-leaf labeling `top`.
pub fn in_u_k<S: Scalar>(
    f: &ValuedFunction<S>,
    v: &SignedVector<S>,
    top: &Labeling,
) -> Result<Verdict<Labeling>> {
    v.check_function(f)?;
    for t in f.domain().below(top)? {
        if v.value(&t) > f.value(&t) {
            return Ok(Verdict::Fails(t));
        }
    }
    Ok(Verdict::Holds)
}

/// Why a vector is not in the base set below `top`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseFailure<S> {
    Violated(Labeling),
    /// Feasible below `top` but not tight at it.
    NotTight { value: S, target: S },
}

impl<S: Scalar> fmt::Display for BaseFailure<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseFailure::Violated(t) => write!(f, "violated at ({t})"),
            BaseFailure::NotTight { value, target } => {
                write!(f, "not tight at the top: {value} < {target}")
            }
        }
    }
}

pub fn in_b_k<S: Scalar>(
    f: &ValuedFunction<S>,
    v: &SignedVector<S>,
    top: &Labeling,
) -> Result<Verdict<BaseFailure<S>>> {
    if let Verdict::Fails(t) = in_u_k(f, v, top)? {
        return Ok(Verdict::Fails(BaseFailure::Violated(t)));
    }
    let value = v.value(top);
    let target = f.value(top);
    if value != target {
        return Ok(Verdict::Fails(BaseFailure::NotTight { value, target }));
    }
    Ok(Verdict::Holds)
}

/// Greedy vertex of the base set below the all-leaf labeling `top`.
///
/// Restricting `f` to labelings below `top` gives a submodular set function
/// `g`. Its greedy base vertex along `order` is
/// `y[order[m]] = g(first m+1) - g(first m)`, and the signed vector takes
/// `x_i = |y_i|` with `L_i = top_i` unless `y_i < 0`, where `L_i` is the
/// smallest leaf other than `top_i`. The result is verified to lie in the base
/// set; failure means `f` is not k-submodular.
///
/// For `k = 1` positive entries of `y` have no signed representation and are
/// reported as an error.
pub fn greedy_base<S: Scalar>(
    f: &ValuedFunction<S>,
    top: &Labeling,
    order: &[usize],
) -> Result<SignedVector<S>> {
    let n = f.n();
    f.domain().check(top)?;
    if !top.is_all_leaves() {
        return Err(Error::NotAllLeaves(top.to_string()));
    }
    let mut seen = vec![false; n];
    if order.len() != n || order.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
        return Err(Error::InvalidArgument(format!(
            "{order:?} is not a permutation of 0..{n}"
        )));
    }
    let k = f.k();
    let mut x = vec![S::zero(); n];
    let mut leaves = vec![1; n];
    let mut prefix = f.domain().zero();
    let mut previous = f.value(&prefix);
    for &i in order {
        prefix = prefix.with(i, top.get(i));
        let current = f.value(&prefix);
        let y = current.clone() - previous;
        previous = current;
        let own = top.get(i).leaf().expect("all leaves");
        leaves[i] = if y.is_negative() {
            if k == 1 {
                own
            } else {
                (1..=k).find(|&l| l != own).expect("k >= 2")
            }
        } else {
            if k == 1 && y.is_positive() {
                return Err(Error::Precondition(format!(
                    "greedy value {y} at coordinate {} is positive; k = 1 signed vectors only carry nonpositive values",
                    i + 1
                )));
            }
            own
        };
        x[i] = y.abs();
    }
    let v = SignedVector { k, x, leaves };
    if let Verdict::Fails(reason) = in_b_k(f, &v, top)? {
        return Err(Error::Precondition(format!(
            "greedy vector is not a base ({reason}); the function is not k-submodular"
        )));
    }
    Ok(v)
}

/// The tight labelings of a feasible signed vector together with the negative
/// leaf at every support coordinate that has one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TightFamily {
    members: Vec<Labeling>,
    negative_leaf: Vec<Option<u32>>,
    support: Vec<usize>,
}

impl TightFamily {
    /// Tight labelings in enumeration order.
    pub fn members(&self) -> &[Labeling] {
        &self.members
    }

    pub fn contains(&self, t: &Labeling) -> bool {
        self.members.binary_search(t).is_ok()
    }

    /// Negative leaf at coordinate `i`, defined exactly on the set `S(x, L)`.
    pub fn negative_leaf(&self, i: usize) -> Option<u32> {
        self.negative_leaf.get(i).copied().flatten()
    }

    /// The support coordinates that carry a negative leaf in some tight element.
    pub fn negative_coordinates(&self) -> Vec<usize> {
        (0..self.negative_leaf.len())
            .filter(|&i| self.negative_leaf[i].is_some())
            .collect()
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// Meet of every tight element carrying the negative leaf at `i`.
    pub fn n_element(&self, i: usize) -> Result<Labeling> {
        let leaf = self.negative_leaf(i).ok_or_else(|| {
            Error::Precondition(format!(
                "coordinate {} carries no negative leaf among tight elements",
                i + 1
            ))
        })?;
        let mut carriers = self
            .members
            .iter()
            .filter(|t| t.get(i) == Label::Leaf(leaf));
        let first = carriers.next().expect("negative leaf was observed").clone();
        Ok(carriers.fold(first, |acc, t| acc.zip_with(t, Label::meet)))
    }

    /// First `(i, j, m)` such that the N-elements of `i` and `j` hold distinct
    /// leaves at coordinate `m`. `None` means join is associative on them.
    pub fn join_conflict(&self) -> Result<Option<(usize, usize, usize)>> {
        let coords = self.negative_coordinates();
        let elements = coords
            .iter()
            .map(|&i| self.n_element(i))
            .collect::<Result<Vec<_>>>()?;
        for a in 0..coords.len() {
            for b in a + 1..coords.len() {
                let (s, t) = (&elements[a], &elements[b]);
                for m in 0..s.len() {
                    if s.get(m).is_leaf() && t.get(m).is_leaf() && s.get(m) != t.get(m) {
                        return Ok(Some((coords[a], coords[b], m)));
                    }
                }
            }
        }
        Ok(None)
    }

    /// Checks that `f` is k-modular on the family: equality in the
    /// submodular inequality for every pair of members.
    pub fn check_modular<S: Scalar>(
        &self,
        f: &ValuedFunction<S>,
    ) -> Result<Verdict<ViolationWitness<S>>> {
        f.domain()
            .ensure((self.members.len() as u128).checked_pow(2))?;
        for t in &self.members {
            for u in &self.members {
                let lhs = f.value(&t.zip_with(u, Label::meet)) + f.value(&t.zip_with(u, Label::join));
                let rhs = f.value(t) + f.value(u);
                if lhs != rhs {
                    return Ok(Verdict::Fails(ViolationWitness {
                        t: t.clone(),
                        u: u.clone(),
                        lhs,
                        rhs,
                    }));
                }
            }
        }
        Ok(Verdict::Holds)
    }
}

/// Enumerates the tight labelings of `v`, verifies closure under meet and join,
/// and extracts the negative leaves. Errors signal that `v` is infeasible or
/// that `f` is not k-submodular.
pub fn tight_family<S: Scalar>(f: &ValuedFunction<S>, v: &SignedVector<S>) -> Result<TightFamily> {
    if let Verdict::Fails(t) = in_u(f, v)? {
        return Err(Error::Precondition(format!(
            "signed vector is infeasible at ({t})"
        )));
    }
    let members: Vec<Labeling> = f
        .domain()
        .labelings()?
        .filter(|t| v.value(t) == f.value(t))
        .collect();
    f.domain().ensure((members.len() as u128).checked_pow(2))?;
    let lookup: HashSet<&Labeling> = members.iter().collect();
    for t in &members {
        for u in &members {
            for combined in [t.zip_with(u, Label::meet), t.zip_with(u, Label::join)] {
                if !lookup.contains(&combined) {
                    return Err(Error::Precondition(format!(
                        "tight set not closed: ({t}) and ({u}) give non-tight ({combined})"
                    )));
                }
            }
        }
    }
    let support = v.support();
    let mut negative_leaf = vec![None; v.n()];
    for &i in &support {
        for t in &members {
            let Label::Leaf(l) = t.get(i) else { continue };
            if !v.is_negative_leaf(i, l) {
                continue;
            }
            match negative_leaf[i] {
                None => negative_leaf[i] = Some(l),
                Some(seen) if seen != l => {
                    return Err(Error::Precondition(format!(
                        "coordinate {} carries two negative leaves {seen} and {l} among tight elements",
                        i + 1
                    )))
                }
                Some(_) => {}
            }
        }
    }
    Ok(TightFamily {
        members,
        negative_leaf,
        support,
    })
}

/// `N((x, L), i)` computed from scratch.
pub fn n_element<S: Scalar>(f: &ValuedFunction<S>, v: &SignedVector<S>, i: usize) -> Result<Labeling> {
    if i >= v.n() {
        return Err(Error::IndexOutOfRange { index: i, n: v.n() });
    }
    tight_family(f, v)?.n_element(i)
}

/// Whether `(x - alpha·χ_i, L)` is still feasible; the witness is the first
/// labeling that becomes violated.
pub fn probe_decrement<S: Scalar>(
    f: &ValuedFunction<S>,
    v: &SignedVector<S>,
    i: usize,
    alpha: &S,
) -> Result<Verdict<Labeling>> {
    in_u(f, &v.decremented(i, alpha)?)
}

/// Two-coordinate form: `(x - alpha·(χ_i + χ_j), L)`.
pub fn probe_decrement2<S: Scalar>(
    f: &ValuedFunction<S>,
    v: &SignedVector<S>,
    i: usize,
    j: usize,
    alpha: &S,
) -> Result<Verdict<Labeling>> {
    if i == j {
        return Err(Error::InvalidArgument("coordinates must differ".into()));
    }
    in_u(f, &v.decremented_many(&[i, j], alpha)?)
}

/// Joins the N-elements of every support coordinate into a labeling `T` with
/// `f(T) = -‖x‖`.
///
/// Works when `v` is a minimum-norm feasible vector: then every support
/// coordinate has a negative leaf and the N-elements never disagree on a
/// coordinate. Anything else is reported with the offending coordinates.
pub fn extract_minimizer<S: Scalar>(f: &ValuedFunction<S>, v: &SignedVector<S>) -> Result<Labeling> {
    let family = tight_family(f, v)?;
    extract_from_family(f, v, &family)
}

pub fn extract_from_family<S: Scalar>(
    f: &ValuedFunction<S>,
    v: &SignedVector<S>,
    family: &TightFamily,
) -> Result<Labeling> {
    if let Some(&i) = family
        .support()
        .iter()
        .find(|&&i| family.negative_leaf(i).is_none())
    {
        return Err(Error::Precondition(format!(
            "coordinate {} is in the support but no tight element carries a negative leaf there",
            i + 1
        )));
    }
    if let Some((i, j, m)) = family.join_conflict()? {
        return Err(Error::Precondition(format!(
            "N-elements of coordinates {} and {} hold distinct leaves at coordinate {}",
            i + 1,
            j + 1,
            m + 1
        )));
    }
    let mut t = f.domain().zero();
    for &i in family.support() {
        t = t.zip_with(&family.n_element(i)?, Label::join);
    }
    let value = f.value(&t);
    if value != v.objective() {
        return Err(Error::Precondition(format!(
            "joined labeling ({t}) has value {value}, not {}",
            v.objective()
        )));
    }
    Ok(t)
}
