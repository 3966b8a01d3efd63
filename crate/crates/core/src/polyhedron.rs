//! The k-submodular polyhedron over full `n × k` vectors, the looser polyhedron
//! without pair rows, tight structures, bases and basis exchange.
//!
//! A full vector `x` assigns a value `x[i][l]` to every coordinate `i` and
//! leaf `l`. It evaluates a labeling by summing the entries its leaves select.
//! `P(f)` holds the vectors with `x(T) <= f(T)` for every labeling and
//! `x[i][p] + x[i][q] <= 0` for every coordinate and pair of distinct leaves.
//! `P_FT(f)` drops the pair rows.
//!
//! Coordinates are 0-based and leaves 1-based throughout, matching labeling
//! tokens.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;

use crate::domain::{Label, Labeling};
use crate::dual::{in_u, SignedVector};
use crate::error::{Error, Result};
use crate::function::{brute_force_min, ValuedFunction, Verdict};
use crate::generate::rng;
use crate::linalg::{solve, Echelon};
use crate::lp::{lp_min, LinearProgram, LpOutcome, Relation};
use crate::minmax::max_dual;
use crate::scalar::Scalar;

/// A row-major `n × k` matrix of entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FullVector<S> {
    n: usize,
    k: u32,
    entries: Vec<S>,
}

impl<S: Scalar> FullVector<S> {
    pub fn new(n: usize, k: u32, entries: Vec<S>) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::InvalidArgument("n and k must be positive".into()));
        }
        if entries.len() != n * k as usize {
            return Err(Error::DimensionMismatch {
                expected: format!("{} entries", n * k as usize),
                found: format!("{} entries", entries.len()),
            });
        }
        Ok(FullVector { n, k, entries })
    }

    pub fn from_rows(k: u32, rows: Vec<Vec<S>>) -> Result<Self> {
        if let Some(row) = rows.iter().find(|r| r.len() != k as usize) {
            return Err(Error::DimensionMismatch {
                expected: format!("rows of length {k}"),
                found: format!("a row of length {}", row.len()),
            });
        }
        let n = rows.len();
        FullVector::new(n, k, rows.into_iter().flatten().collect())
    }

    pub fn zeros(n: usize, k: u32) -> Self {
        FullVector {
            n,
            k,
            entries: vec![S::zero(); n * k as usize],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    /// Entry at coordinate `i` and leaf `leaf` (1-based).
    pub fn get(&self, i: usize, leaf: u32) -> &S {
        &self.entries[var(self.k, i, leaf)]
    }

    pub fn row(&self, i: usize) -> &[S] {
        let k = self.k as usize;
        &self.entries[i * k..(i + 1) * k]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[S]> {
        self.entries.chunks(self.k as usize)
    }

    pub fn eval(&self, t: &Labeling) -> Result<S> {
        if t.len() != self.n || t.k() != self.k {
            return Err(Error::DimensionMismatch {
                expected: format!("labeling with n={} k={}", self.n, self.k),
                found: format!("n={} k={}", t.len(), t.k()),
            });
        }
        Ok(self.value(t))
    }

    fn value(&self, t: &Labeling) -> S {
        let mut total = S::zero();
        for (i, label) in t.entries().iter().enumerate() {
            if let Some(l) = label.leaf() {
                total = total + self.get(i, l).clone();
            }
        }
        total
    }

    fn check_shape(&self, f: &ValuedFunction<S>) -> Result<()> {
        if self.n != f.n() || self.k != f.k() {
            return Err(Error::DimensionMismatch {
                expected: format!("n={} k={}", f.n(), f.k()),
                found: format!("n={} k={}", self.n, self.k),
            });
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Display for FullVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

fn var(k: u32, i: usize, leaf: u32) -> usize {
    i * k as usize + (leaf as usize - 1)
}

pub fn eval_full<S: Scalar>(x: &FullVector<S>, t: &Labeling) -> Result<S> {
    x.eval(t)
}

/// `T ↦ x(T)` as a function on the domain.
pub fn full_function<S: Scalar>(x: &FullVector<S>) -> Result<ValuedFunction<S>> {
    ValuedFunction::from_fn(x.k, x.n, |t| x.value(t))
}

/// A coordinate with an unordered pair of distinct leaves, stored `p < q`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairRow {
    pub i: usize,
    pub p: u32,
    pub q: u32,
}

impl PairRow {
    pub fn new(i: usize, a: u32, b: u32) -> Result<Self> {
        if a == b {
            return Err(Error::InvalidArgument(format!("pair row needs distinct leaves, got {a} twice")));
        }
        Ok(PairRow {
            i,
            p: a.min(b),
            q: a.max(b),
        })
    }

    fn check(&self, n: usize, k: u32) -> Result<()> {
        if self.i >= n {
            return Err(Error::IndexOutOfRange { index: self.i, n });
        }
        for l in [self.p, self.q] {
            if l == 0 || l > k {
                return Err(Error::InvalidLabel { label: l, k });
            }
        }
        Ok(())
    }
}

impl fmt::Display for PairRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "coordinate {} leaves {{{}, {}}}", self.i + 1, self.p, self.q)
    }
}

fn pair_rows(n: usize, k: u32) -> impl Iterator<Item = PairRow> {
    (0..n).flat_map(move |i| {
        (1..=k).flat_map(move |p| (p + 1..=k).map(move |q| PairRow { i, p, q }))
    })
}

fn labeling_coeffs<S: Scalar>(t: &Labeling) -> Vec<S> {
    let k = t.k();
    let mut row = vec![S::zero(); t.len() * k as usize];
    for (i, label) in t.entries().iter().enumerate() {
        if let Some(l) = label.leaf() {
            row[var(k, i, l)] = S::one();
        }
    }
    row
}

fn pair_coeffs<S: Scalar>(pair: &PairRow, n: usize, k: u32) -> Vec<S> {
    let mut row = vec![S::zero(); n * k as usize];
    row[var(k, pair.i, pair.p)] = S::one();
    row[var(k, pair.i, pair.q)] = S::one();
    row
}

/// The first violated row of a membership test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PViolation<S> {
    Labeling { t: Labeling, value: S, bound: S },
    Pair { pair: PairRow, sum: S },
}

impl<S: Scalar> fmt::Display for PViolation<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PViolation::Labeling { t, value, bound } => {
                write!(f, "x({t}) = {value} > f({t}) = {bound}")
            }
            PViolation::Pair { pair, sum } => write!(f, "{pair}: sum {sum} > 0"),
        }
    }
}

/// Labeling rows only.
pub fn in_p_ft<S: Scalar>(f: &ValuedFunction<S>, x: &FullVector<S>) -> Result<Verdict<PViolation<S>>> {
    x.check_shape(f)?;
    for t in f.domain().labelings()? {
        let value = x.value(&t);
        let bound = f.value(&t);
        if value > bound {
            return Ok(Verdict::Fails(PViolation::Labeling { t, value, bound }));
        }
    }
    Ok(Verdict::Holds)
}

/// Labeling rows, then pair rows.
pub fn in_p<S: Scalar>(f: &ValuedFunction<S>, x: &FullVector<S>) -> Result<Verdict<PViolation<S>>> {
    if let Verdict::Fails(v) = in_p_ft(f, x)? {
        return Ok(Verdict::Fails(v));
    }
    for pair in pair_rows(x.n, x.k) {
        let sum = x.get(pair.i, pair.p).clone() + x.get(pair.i, pair.q).clone();
        if sum.is_positive() {
            return Ok(Verdict::Fails(PViolation::Pair { pair, sum }));
        }
    }
    Ok(Verdict::Holds)
}

/// The leaf that makes row `i` unified, smallest first. For `k = 1` a row is
/// unified when its entry is at most zero.
fn unified_leaf<S: Scalar>(x: &FullVector<S>, i: usize) -> Option<u32> {
    let row = x.row(i);
    if x.k == 1 {
        return (!row[0].is_positive()).then_some(1);
    }
    (1..=x.k).find(|&l| {
        let v = &row[l as usize - 1];
        !v.is_negative()
            && row
                .iter()
                .enumerate()
                .all(|(j, w)| j + 1 == l as usize || *w == -v.clone())
    })
}

pub fn is_unified<S: Scalar>(x: &FullVector<S>) -> bool {
    (0..x.n).all(|i| unified_leaf(x, i).is_some())
}

/// `+x_i` at the distinguished leaf and `-x_i` at the others; for `k = 1` the
/// single entry is `-x_i`.
pub fn embed_signed<S: Scalar>(v: &SignedVector<S>) -> FullVector<S> {
    let k = v.k();
    let mut entries = Vec::with_capacity(v.n() * k as usize);
    for (i, xi) in v.x().iter().enumerate() {
        for l in 1..=k {
            entries.push(if v.is_negative_leaf(i, l) { -xi.clone() } else { xi.clone() });
        }
    }
    FullVector { n: v.n(), k, entries }
}

/// Inverse of [`embed_signed`] on unified vectors. Zero rows get leaf 1.
pub fn project_unified<S: Scalar>(x: &FullVector<S>) -> Result<SignedVector<S>> {
    let mut magnitudes = Vec::with_capacity(x.n);
    let mut leaves = Vec::with_capacity(x.n);
    for i in 0..x.n {
        let l = unified_leaf(x, i)
            .ok_or_else(|| Error::InvalidArgument(format!("row {} is not unified", i + 1)))?;
        let v = x.get(i, l).clone();
        magnitudes.push(if x.k == 1 { -v } else { v });
        leaves.push(l);
    }
    SignedVector::new(x.k, magnitudes, leaves)
}

/// Sum over coordinates of the largest absolute entry.
pub fn norm_1inf<S: Scalar>(x: &FullVector<S>) -> S {
    x.rows()
        .map(|row| row.iter().map(|v| v.abs()).max().unwrap_or_else(S::zero))
        .fold(S::zero(), |acc, v| acc + v)
}

/// Tight labelings and tight pair rows of a vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tightness {
    /// In enumeration order.
    pub labelings: Vec<Labeling>,
    /// In coordinate, then leaf order.
    pub pairs: Vec<PairRow>,
}

fn tight_sets<S: Scalar>(f: &ValuedFunction<S>, x: &FullVector<S>) -> Result<Tightness> {
    x.check_shape(f)?;
    let labelings = f
        .domain()
        .labelings()?
        .filter(|t| x.value(t) == f.value(t))
        .collect();
    let pairs = pair_rows(x.n, x.k)
        .filter(|p| (x.get(p.i, p.p).clone() + x.get(p.i, p.q).clone()).is_zero())
        .collect();
    Ok(Tightness { labelings, pairs })
}

/// Tight sets of `x ∈ P(f)`. The tight labelings must be closed under meet
/// and join, with `f` k-modular on them; a failure of either is reported as an
/// error, which cannot happen for k-submodular `f`.
pub fn tight_full<S: Scalar>(f: &ValuedFunction<S>, x: &FullVector<S>) -> Result<Tightness> {
    if let Verdict::Fails(v) = in_p(f, x)? {
        return Err(Error::Precondition(format!("vector is not in P(f): {v}")));
    }
    let tight = tight_sets(f, x)?;
    let members: BTreeSet<&Labeling> = tight.labelings.iter().collect();
    for s in &tight.labelings {
        for t in &tight.labelings {
            let meet = s.meet(t)?;
            let join = s.join(t)?;
            if !members.contains(&meet) || !members.contains(&join) {
                return Err(Error::Precondition(format!(
                    "tight labelings not closed under meet and join at ({s}), ({t})"
                )));
            }
            if f.value(&meet) + f.value(&join) != f.value(s) + f.value(t) {
                return Err(Error::Precondition(format!(
                    "f is not k-modular on the tight labelings at ({s}), ({t})"
                )));
            }
        }
    }
    Ok(tight)
}

/// Tight labelings and tight pair rows whose stacked system pins down `x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Basis {
    pub b1: Vec<Labeling>,
    pub b2: Vec<PairRow>,
}

impl Basis {
    pub fn len(&self) -> usize {
        self.b1.len() + self.b2.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn system<S: Scalar>(&self, f: &ValuedFunction<S>) -> (Vec<Vec<S>>, Vec<S>) {
        let (n, k) = (f.n(), f.k());
        let mut matrix = Vec::with_capacity(self.len());
        let mut rhs = Vec::with_capacity(self.len());
        for t in &self.b1 {
            matrix.push(labeling_coeffs(t));
            rhs.push(f.value(t));
        }
        for p in &self.b2 {
            matrix.push(pair_coeffs(p, n, k));
            rhs.push(S::zero());
        }
        (matrix, rhs)
    }

    fn check_shape(&self, n: usize, k: u32) -> Result<()> {
        for t in &self.b1 {
            if t.len() != n || t.k() != k {
                return Err(Error::DimensionMismatch {
                    expected: format!("labeling with n={n} k={k}"),
                    found: format!("n={} k={}", t.len(), t.k()),
                });
            }
        }
        self.b2.iter().try_for_each(|p| p.check(n, k))
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.b1 {
            writeln!(f, "labeling {t}")?;
        }
        for p in &self.b2 {
            writeln!(f, "pair {} {} {}", p.i + 1, p.p, p.q)?;
        }
        Ok(())
    }
}

/// Checks that `basis` has `kn` distinct tight rows whose system is
/// nonsingular with unique solution `x`.
pub fn is_basis<S: Scalar>(f: &ValuedFunction<S>, x: &FullVector<S>, basis: &Basis) -> Result<bool> {
    x.check_shape(f)?;
    basis.check_shape(f.n(), f.k())?;
    let size = f.n() * f.k() as usize;
    if basis.len() != size {
        return Ok(false);
    }
    let distinct_b1: BTreeSet<&Labeling> = basis.b1.iter().collect();
    let distinct_b2: BTreeSet<&PairRow> = basis.b2.iter().collect();
    if distinct_b1.len() != basis.b1.len() || distinct_b2.len() != basis.b2.len() {
        return Ok(false);
    }
    let tight_labeling = basis.b1.iter().all(|t| x.value(t) == f.value(t));
    let tight_pair = basis
        .b2
        .iter()
        .all(|p| (x.get(p.i, p.p).clone() + x.get(p.i, p.q).clone()).is_zero());
    if !tight_labeling || !tight_pair {
        return Ok(false);
    }
    let (matrix, rhs) = basis.system(f);
    Ok(solve(&matrix, &rhs).is_some_and(|solution| solution == x.entries))
}

/// Greedily collects independent tight rows, labelings first in enumeration
/// order and then pair rows. `None` when the tight rows have rank below `kn`,
/// that is when `x` is not a vertex.
pub fn extract_basis<S: Scalar>(f: &ValuedFunction<S>, x: &FullVector<S>) -> Result<Option<Basis>> {
    let tight = tight_sets(f, x)?;
    let (n, k) = (f.n(), f.k());
    let size = n * k as usize;
    let mut echelon = Echelon::new();
    let mut basis = Basis {
        b1: Vec::new(),
        b2: Vec::new(),
    };
    for t in tight.labelings {
        if echelon.rank() == size {
            break;
        }
        if echelon.insert(&labeling_coeffs::<S>(&t)) {
            basis.b1.push(t);
        }
    }
    for p in tight.pairs {
        if echelon.rank() == size {
            break;
        }
        if echelon.insert(&pair_coeffs::<S>(&p, n, k)) {
            basis.b2.push(p);
        }
    }
    Ok((echelon.rank() == size).then_some(basis))
}

/// A row that may replace a labeling in a basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExchangeCandidate {
    Meet(Labeling),
    Join(Labeling),
    Pair(PairRow),
}

/// Candidates for replacing `t` given `s`: the meet, the join, then the pair
/// rows at coordinates where `s` and `t` hold distinct leaves, by coordinate.
pub fn exchange_candidates(s: &Labeling, t: &Labeling) -> Result<Vec<ExchangeCandidate>> {
    let mut candidates = vec![
        ExchangeCandidate::Meet(s.meet(t)?),
        ExchangeCandidate::Join(s.join(t)?),
    ];
    for (i, (a, b)) in s.entries().iter().zip(t.entries()).enumerate() {
        if let (Label::Leaf(a), Label::Leaf(b)) = (a, b) {
            if a != b {
                candidates.push(ExchangeCandidate::Pair(PairRow::new(i, *a, *b)?));
            }
        }
    }
    Ok(candidates)
}

/// Replaces `t` in the basis by the first candidate for which the result is a
/// basis again, returning the new basis and the candidate used.
pub fn exchange_step<S: Scalar>(
    f: &ValuedFunction<S>,
    x: &FullVector<S>,
    basis: &Basis,
    s: &Labeling,
    t: &Labeling,
) -> Result<(Basis, ExchangeCandidate)> {
    if !is_basis(f, x, basis)? {
        return Err(Error::Precondition("not a basis for x".into()));
    }
    let position = basis.b1.iter().position(|b| b == t);
    let (Some(position), true) = (position, basis.b1.contains(s)) else {
        return Err(Error::Precondition("both labelings must belong to the basis".into()));
    };
    for candidate in exchange_candidates(s, t)? {
        let mut swapped = basis.clone();
        match &candidate {
            ExchangeCandidate::Meet(g) | ExchangeCandidate::Join(g) => {
                swapped.b1[position] = g.clone();
            }
            ExchangeCandidate::Pair(p) => {
                swapped.b1.remove(position);
                swapped.b2.push(*p);
            }
        }
        if is_basis(f, x, &swapped)? {
            return Ok((swapped, candidate));
        }
    }
    Err(Error::Precondition(format!(
        "no exchange candidate validates for ({s}), ({t})"
    )))
}

fn p_program<S: Scalar>(f: &ValuedFunction<S>, extra: usize) -> Result<LinearProgram<S>> {
    let (n, k) = (f.n(), f.k());
    let size = n * k as usize;
    if f.value_at_zero().is_negative() {
        return Err(Error::Precondition("f(0) < 0, so the polyhedron is empty".into()));
    }
    let mut lp = LinearProgram::new(vec![S::zero(); size + extra]);
    for j in 0..size {
        lp.set_free(j);
    }
    let pad = |mut row: Vec<S>| {
        row.resize(size + extra, S::zero());
        row
    };
    for t in f.domain().labelings()? {
        if !t.is_zero() {
            lp.push(pad(labeling_coeffs(&t)), Relation::Le, f.value(&t));
        }
    }
    Ok(lp)
}

/// Maximizes `c·x` over `P(f)` for a strictly positive objective `c`. The
/// simplex method ends at a basic solution, so the result is a vertex.
pub fn vertex_by_lp<S: Scalar>(f: &ValuedFunction<S>, c: &FullVector<S>) -> Result<FullVector<S>> {
    c.check_shape(f)?;
    if let Some(v) = c.entries.iter().find(|v| !v.is_positive()) {
        return Err(Error::InvalidArgument(format!("objective entry {v} is not positive")));
    }
    let (n, k) = (f.n(), f.k());
    let mut lp = p_program(f, 0)?;
    lp.objective = c.entries.iter().map(|v| -v.clone()).collect();
    for p in pair_rows(n, k) {
        lp.push(pair_coeffs(&p, n, k), Relation::Le, S::zero());
    }
    match lp_min(&lp)? {
        LpOutcome::Optimal(solution) => FullVector::new(n, k, solution.point),
        LpOutcome::Infeasible => Err(Error::Precondition("P(f) is empty".into())),
        LpOutcome::Unbounded => Err(Error::Precondition(
            "linear objective unbounded over P(f)".into(),
        )),
    }
}

/// Positive objective with entries `p/q`, `p` in `1..=60` and `q` in `1..=4`.
pub fn random_objective<S: Scalar>(n: usize, k: u32, seed: u64) -> FullVector<S> {
    let mut rng = rng(seed);
    let entries = (0..n * k as usize)
        .map(|_| S::from_frac(rng.gen_range(1..=60), rng.gen_range(1..=4)))
        .collect();
    FullVector { n, k, entries }
}

/// The vertex of `P(f)` maximizing [`random_objective`] for `seed`.
pub fn sample_vertex<S: Scalar>(f: &ValuedFunction<S>, seed: u64) -> Result<FullVector<S>> {
    vertex_by_lp(f, &random_objective(f.n(), f.k(), seed))
}

/// Maximizes `-‖x‖₁,∞` over `P_FT(f)` with one epigraph LP: variables `x` are
/// free and `z_i >= ±x[i][l]`, minimizing `Σ z_i`.
pub fn ft_optimum<S: Scalar>(f: &ValuedFunction<S>) -> Result<(S, FullVector<S>)> {
    let (n, k) = (f.n(), f.k());
    let size = n * k as usize;
    let mut lp = p_program(f, n)?;
    for i in 0..n {
        lp.objective[size + i] = S::one();
        for l in 1..=k {
            for sign in [-1, 1] {
                let mut row = vec![S::zero(); size + n];
                row[size + i] = S::one();
                row[var(k, i, l)] = S::from_int(sign);
                lp.push(row, Relation::Ge, S::zero());
            }
        }
    }
    match lp_min(&lp)? {
        LpOutcome::Optimal(solution) => {
            let mut point = solution.point;
            point.truncate(size);
            Ok((-solution.value, FullVector::new(n, k, point)?))
        }
        other => Err(Error::Precondition(format!("epigraph LP not optimal: {other}"))),
    }
}

/// The first broken link of `U(f) ⊆ P(f) ⊆ P_FT(f)` at `x`, or of the norm
/// identity on unified vectors.
pub fn check_inclusion_chain<S: Scalar>(
    f: &ValuedFunction<S>,
    x: &FullVector<S>,
) -> Result<Option<String>> {
    let in_p_holds = in_p(f, x)?.holds();
    if is_unified(x) {
        let v = project_unified(x)?;
        if in_u(f, &v)?.holds() && !in_p_holds {
            return Ok(Some(format!("unified vector in U(f) but not in P(f):\n{x}")));
        }
        if v.norm() != norm_1inf(x) {
            return Ok(Some(format!(
                "norm mismatch {} vs {} on unified vector:\n{x}",
                v.norm(),
                norm_1inf(x)
            )));
        }
    }
    if in_p_holds && !in_p_ft(f, x)?.holds() {
        return Ok(Some(format!("vector in P(f) but not in P_FT(f):\n{x}")));
    }
    Ok(None)
}

/// Vertices sampled by [`verify_ft`] for the inclusion spot-check.
pub const FT_SAMPLES: u64 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FtReport<S> {
    pub ft_value: S,
    pub ft_point: FullVector<S>,
    pub brute_force_min: S,
    pub dual_value: Option<S>,
    pub points_checked: usize,
    pub chain_failures: Vec<String>,
}

impl<S: Scalar> FtReport<S> {
    pub fn holds(&self) -> bool {
        self.ft_value == self.brute_force_min
            && self.dual_value.as_ref() == Some(&self.brute_force_min)
            && self.chain_failures.is_empty()
    }
}

impl<S: Scalar> fmt::Display for FtReport<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ft {}", self.ft_value)?;
        writeln!(f, "min {}", self.brute_force_min)?;
        match &self.dual_value {
            Some(v) => writeln!(f, "dual {v}")?,
            None => writeln!(f, "dual infeasible")?,
        }
        writeln!(f, "chain {} points, {} failures", self.points_checked, self.chain_failures.len())?;
        for failure in &self.chain_failures {
            writeln!(f, "{failure}")?;
        }
        Ok(())
    }
}

/// Compares the epigraph LP optimum with the exhaustive minimum and the
/// signed dual optimum, and spot-checks the inclusion chain at the embedded
/// dual optimum, the epigraph optimum and a few sampled vertices.
pub fn verify_ft<S: Scalar>(f: &ValuedFunction<S>) -> Result<FtReport<S>> {
    if !f.is_normalized() {
        return Err(Error::Precondition(format!(
            "function is not normalized: f(0) = {}",
            f.value_at_zero()
        )));
    }
    let (ft_value, ft_point) = ft_optimum(f)?;
    let (brute_force_min, _) = brute_force_min(f)?;
    let dual = max_dual(f)?;
    let mut points = vec![ft_point.clone()];
    if let Some(d) = &dual {
        points.push(embed_signed(&d.vector));
    }
    for seed in 0..FT_SAMPLES {
        match sample_vertex(f, seed) {
            Ok(v) => points.push(v),
            Err(Error::Precondition(_)) => break,
            Err(e) => return Err(e),
        }
    }
    let mut chain_failures = Vec::new();
    if !in_p_ft(f, &ft_point)?.holds() {
        chain_failures.push(format!("epigraph optimum outside P_FT(f):\n{ft_point}"));
    }
    for x in &points {
        if let Some(failure) = check_inclusion_chain(f, x)? {
            chain_failures.push(failure);
        }
    }
    Ok(FtReport {
        ft_value,
        ft_point,
        brute_force_min,
        dual_value: dual.map(|d| d.objective),
        points_checked: points.len(),
        chain_failures,
    })
}
