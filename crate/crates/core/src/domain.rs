//! The star domain: a root and `k` pairwise incomparable leaves, and length-`n`
//! labelings over it.
//!
//! Labelings are enumerated in lexicographic order with the root before leaf 1
//! before leaf 2 and so on, last coordinate varying fastest. The derived `Ord`
//! on [`Labeling`] agrees with that order, and so do the dense-table indices
//! returned by [`Domain::index_of`].

use std::fmt;

use crate::error::{Error, Result};

/// Default cap on the number of items any exhaustive scan may visit.
pub const DEFAULT_CAP: u128 = 1 << 24;

/// One value of the star domain.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Root,
    /// Leaf index, 1-based.
    Leaf(u32),
}

impl Label {
    /// Parses the file token: `0` is the root, `1..=k` are leaves.
    pub fn from_token(token: u32, k: u32) -> Result<Label> {
        match token {
            0 => Ok(Label::Root),
            t if t <= k => Ok(Label::Leaf(t)),
            t => Err(Error::InvalidLabel { label: t, k }),
        }
    }

    pub fn token(self) -> u32 {
        match self {
            Label::Root => 0,
            Label::Leaf(l) => l,
        }
    }

    pub fn is_leaf(self) -> bool {
        matches!(self, Label::Leaf(_))
    }

    pub fn leaf(self) -> Option<u32> {
        match self {
            Label::Root => None,
            Label::Leaf(l) => Some(l),
        }
    }

    pub fn meet(self, other: Label) -> Label {
        if self == other {
            self
        } else {
            Label::Root
        }
    }

    pub fn join(self, other: Label) -> Label {
        match (self, other) {
            (a, b) if a == b => a,
            (Label::Root, b) => b,
            (a, Label::Root) => a,
            _ => Label::Root,
        }
    }

    /// Partial order: the root is below everything, leaves only below themselves.
    pub fn below(self, other: Label) -> bool {
        self == Label::Root || self == other
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.token())
    }
}

pub fn meet(s: Label, t: Label) -> Label {
    s.meet(t)
}

pub fn join(s: Label, t: Label) -> Label {
    s.join(t)
}

pub fn below(s: Label, t: Label) -> bool {
    s.below(t)
}

/// An element of the product domain: `n` labels over a star with `k` leaves.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Labeling {
    k: u32,
    entries: Vec<Label>,
}

impl Labeling {
    pub fn new(k: u32, entries: Vec<Label>) -> Result<Labeling> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be positive".into()));
        }
        for label in &entries {
            if let Label::Leaf(l) = *label {
                if l == 0 || l > k {
                    return Err(Error::InvalidLabel { label: l, k });
                }
            }
        }
        Ok(Labeling { k, entries })
    }

    /// Builds a labeling from file tokens in `0..=k`.
    pub fn from_tokens(k: u32, tokens: &[u32]) -> Result<Labeling> {
        let entries = tokens
            .iter()
            .map(|&t| Label::from_token(t, k))
            .collect::<Result<Vec<_>>>()?;
        Labeling::new(k, entries)
    }

    /// The all-root labeling.
    pub fn zero(k: u32, n: usize) -> Labeling {
        Labeling {
            k,
            entries: vec![Label::Root; n],
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Label] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> Label {
        self.entries[i]
    }

    pub fn tokens(&self) -> Vec<u32> {
        self.entries.iter().map(|l| l.token()).collect()
    }

    pub fn is_all_leaves(&self) -> bool {
        self.entries.iter().all(|l| l.is_leaf())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&l| l == Label::Root)
    }

    /// Number of leaf coordinates.
    pub fn support_size(&self) -> usize {
        self.entries.iter().filter(|l| l.is_leaf()).count()
    }

    /// Returns a copy with coordinate `i` replaced.
    pub fn with(&self, i: usize, label: Label) -> Labeling {
        let mut entries = self.entries.clone();
        entries[i] = label;
        Labeling { k: self.k, entries }
    }

    /// Returns a copy without coordinate `i`.
    pub fn without(&self, i: usize) -> Labeling {
        let mut entries = self.entries.clone();
        entries.remove(i);
        Labeling { k: self.k, entries }
    }

    fn check_same_shape(&self, other: &Labeling) -> Result<()> {
        if self.k != other.k || self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: format!("k={} n={}", self.k, self.len()),
                found: format!("k={} n={}", other.k, other.len()),
            });
        }
        Ok(())
    }

    pub fn meet(&self, other: &Labeling) -> Result<Labeling> {
        self.check_same_shape(other)?;
        Ok(self.zip_with(other, Label::meet))
    }

    pub fn join(&self, other: &Labeling) -> Result<Labeling> {
        self.check_same_shape(other)?;
        Ok(self.zip_with(other, Label::join))
    }

    /// Componentwise partial order.
    pub fn below(&self, other: &Labeling) -> Result<bool> {
        self.check_same_shape(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .all(|(a, b)| a.below(*b)))
    }

    /// At most one distinct leaf per coordinate across the two labelings.
    pub fn compatible(&self, other: &Labeling) -> Result<bool> {
        self.check_same_shape(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .all(|(a, b)| !(a.is_leaf() && b.is_leaf() && a != b)))
    }

    /// Equal on every coordinate except possibly `i`.
    pub fn i_similar(&self, other: &Labeling, i: usize) -> Result<bool> {
        self.check_same_shape(other)?;
        if i >= self.len() {
            return Err(Error::IndexOutOfRange { index: i, n: self.len() });
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .enumerate()
            .all(|(j, (a, b))| j == i || a == b))
    }

    // Shapes must already agree.
    pub(crate) fn zip_with(&self, other: &Labeling, op: impl Fn(Label, Label) -> Label) -> Labeling {
        Labeling {
            k: self.k,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| op(*a, *b))
                .collect(),
        }
    }
}

impl fmt::Display for Labeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, label) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{label}")?;
        }
        Ok(())
    }
}

pub fn meet_vec(t: &Labeling, u: &Labeling) -> Result<Labeling> {
    t.meet(u)
}

pub fn join_vec(t: &Labeling, u: &Labeling) -> Result<Labeling> {
    t.join(u)
}

pub fn below_vec(t: &Labeling, u: &Labeling) -> Result<bool> {
    t.below(u)
}

pub fn compatible(t: &Labeling, u: &Labeling) -> Result<bool> {
    t.compatible(u)
}

pub fn i_similar(t: &Labeling, u: &Labeling, i: usize) -> Result<bool> {
    t.i_similar(u, i)
}

/// The shape `(k, n)` of a product domain together with the enumeration cap
/// applied to every exhaustive scan over it.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Domain {
    k: u32,
    n: usize,
    cap: u128,
}

impl Domain {
    pub fn new(k: u32, n: usize) -> Result<Domain> {
        if k == 0 || n == 0 {
            return Err(Error::InvalidArgument(format!(
                "k and n must be positive (k={k}, n={n})"
            )));
        }
        Ok(Domain {
            k,
            n,
            cap: DEFAULT_CAP,
        })
    }

    pub fn with_cap(mut self, cap: u128) -> Domain {
        self.cap = cap;
        self
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cap(&self) -> u128 {
        self.cap
    }

    /// `(k+1)^n`, or `None` on overflow.
    pub fn size(&self) -> Option<u128> {
        (self.k as u128 + 1).checked_pow(self.n as u32)
    }

    /// Fails unless `count` items fit in the cap.
    pub fn ensure(&self, count: Option<u128>) -> Result<u128> {
        match count {
            Some(c) if c <= self.cap => Ok(c),
            Some(c) => Err(Error::BudgetExceeded {
                requested: c,
                cap: self.cap,
            }),
            None => Err(Error::BudgetExceeded {
                requested: u128::MAX,
                cap: self.cap,
            }),
        }
    }

    /// Number of labelings, checked against the cap.
    pub fn checked_size(&self) -> Result<usize> {
        self.ensure(self.size()).map(|c| c as usize)
    }

    /// Checks that a scan over all ordered pairs of labelings fits in the cap.
    pub fn ensure_pairs(&self) -> Result<usize> {
        let size = self.size();
        self.ensure(size.and_then(|s| s.checked_mul(s)))?;
        Ok(size.unwrap_or_default() as usize)
    }

    pub fn contains(&self, t: &Labeling) -> bool {
        t.k() == self.k && t.len() == self.n
    }

    pub fn check(&self, t: &Labeling) -> Result<()> {
        if self.contains(t) {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: format!("k={} n={}", self.k, self.n),
                found: format!("k={} n={}", t.k(), t.len()),
            })
        }
    }

    pub fn zero(&self) -> Labeling {
        Labeling::zero(self.k, self.n)
    }

    /// Position of `t` in the enumeration order.
    pub fn index_of(&self, t: &Labeling) -> usize {
        let base = self.k as usize + 1;
        t.entries()
            .iter()
            .fold(0usize, |acc, l| acc * base + l.token() as usize)
    }

    /// Inverse of [`Domain::index_of`].
    pub fn labeling_at(&self, mut index: usize) -> Labeling {
        let base = self.k as usize + 1;
        let mut entries = vec![Label::Root; self.n];
        for slot in entries.iter_mut().rev() {
            let token = (index % base) as u32;
            index /= base;
            *slot = if token == 0 {
                Label::Root
            } else {
                Label::Leaf(token)
            };
        }
        Labeling { k: self.k, entries }
    }

    /// All `(k+1)^n` labelings in enumeration order.
    pub fn labelings(&self) -> Result<impl Iterator<Item = Labeling>> {
        let size = self.checked_size()?;
        let domain = *self;
        Ok((0..size).map(move |i| domain.labeling_at(i)))
    }

    /// All `k^n` all-leaf labelings in enumeration order.
    pub fn leaf_labelings(&self) -> Result<impl Iterator<Item = Labeling>> {
        let k = self.k;
        let n = self.n;
        let count = self.ensure((k as u128).checked_pow(n as u32))? as usize;
        Ok((0..count).map(move |mut index| {
            let mut entries = vec![Label::Root; n];
            for slot in entries.iter_mut().rev() {
                *slot = Label::Leaf((index % k as usize) as u32 + 1);
                index /= k as usize;
            }
            Labeling { k, entries }
        }))
    }

    /// The `2^n` labelings below the all-leaf labeling `top`, in enumeration order.
    pub fn below(&self, top: &Labeling) -> Result<impl Iterator<Item = Labeling>> {
        self.check(top)?;
        if !top.is_all_leaves() {
            return Err(Error::NotAllLeaves(top.to_string()));
        }
        let n = self.n;
        let count = self.ensure(1u128.checked_shl(n as u32).filter(|_| n < 128))? as usize;
        let top = top.clone();
        Ok((0..count).map(move |mask| {
            let entries = (0..n)
                .map(|i| {
                    if mask >> (n - 1 - i) & 1 == 1 {
                        top.get(i)
                    } else {
                        Label::Root
                    }
                })
                .collect();
            Labeling { k: top.k(), entries }
        }))
    }

    /// Labeling with only coordinate `i` set to `label`.
    pub fn unit(&self, i: usize, label: Label) -> Labeling {
        self.zero().with(i, label)
    }
}

/// All labelings for `(k, n)` under the default cap.
pub fn enumerate_labelings(k: u32, n: usize) -> Result<Vec<Labeling>> {
    let domain = Domain::new(k, n)?;
    Ok(domain.labelings()?.collect())
}

/// All labelings below the all-leaf labeling `top`.
pub fn enumerate_below(top: &Labeling) -> Result<Vec<Labeling>> {
    let domain = Domain::new(top.k(), top.len())?;
    Ok(domain.below(top)?.collect())
}
