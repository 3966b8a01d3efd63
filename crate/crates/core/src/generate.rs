//! Seeded instance generators. All randomness comes from ChaCha8 seeded with a
//! `u64`, so a seed reproduces the same instance on every platform.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::function::{check_k_submodular, ValuedFunction};
use crate::scalar::Scalar;

/// Value range used when none is given.
pub const DEFAULT_RANGE: i64 = 3;

/// Default number of proposals [`gen_rejection`] draws before giving up.
pub const DEFAULT_RETRY_LIMIT: usize = 10_000;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Draws one unary table `(g(root), g(1), ..., g(k))` with `g(root) = 0` and
/// `g(a) + g(b) >= 0` for distinct leaves, so it is k-submodular.
fn draw_unary(rng: &mut impl Rng, k: u32, range: i64) -> Vec<i64> {
    loop {
        let mut table = vec![0];
        table.extend((0..k).map(|_| rng.gen_range(-range..=range)));
        let mut leaves = table[1..].to_vec();
        leaves.sort_unstable();
        if leaves.len() < 2 || leaves[0] + leaves[1] >= 0 {
            return table;
        }
    }
}

/// Sum of unary terms, each k-submodular by construction.
pub fn gen_unary<S: Scalar>(k: u32, n: usize, seed: u64) -> Result<ValuedFunction<S>> {
    gen_unary_in(k, n, DEFAULT_RANGE, seed)
}

pub fn gen_unary_in<S: Scalar>(k: u32, n: usize, range: i64, seed: u64) -> Result<ValuedFunction<S>> {
    Domain::new(k, n)?;
    check_range(range)?;
    let mut rng = rng(seed);
    let unary = (0..n)
        .map(|_| {
            draw_unary(&mut rng, k, range)
                .into_iter()
                .map(S::from_int)
                .collect()
        })
        .collect();
    ValuedFunction::unary_sum(k, unary)
}

/// Uniform integer table in `[-range, range]`, normalized. Mostly not
/// k-submodular; used as raw material for the equivalence checks.
pub fn gen_random_table<S: Scalar>(
    k: u32,
    n: usize,
    range: i64,
    seed: u64,
) -> Result<ValuedFunction<S>> {
    check_range(range)?;
    let domain = Domain::new(k, n)?;
    let mut rng = rng(seed);
    let size = domain.checked_size()?;
    let mut values: Vec<i64> = (0..size).map(|_| rng.gen_range(-range..=range)).collect();
    values[0] = 0;
    ValuedFunction::dense(k, n, values.into_iter().map(S::from_int).collect())
}

/// Result of [`gen_rejection`].
#[derive(Clone, Debug)]
pub struct Generated<S> {
    pub function: ValuedFunction<S>,
    /// Proposals drawn, including the accepted one.
    pub attempts: usize,
}

impl<S> Generated<S> {
    pub fn acceptance_rate(&self) -> f64 {
        1.0 / self.attempts as f64
    }
}

/// Draws integer tables and keeps the first one that passes the exhaustive
/// k-submodularity check.
///
/// A uniform table is essentially never k-submodular once `n >= 2`, so each
/// proposal is a random k-submodular skeleton (unary terms plus a
/// nondecreasing concave function of the support size) with a couple of
/// entries perturbed by one. The perturbation breaks the inequality often
/// enough that the rejection step does real work.
pub fn gen_rejection<S: Scalar>(
    k: u32,
    n: usize,
    range: i64,
    seed: u64,
) -> Result<Generated<S>> {
    gen_rejection_with_limit(k, n, range, seed, DEFAULT_RETRY_LIMIT)
}

pub fn gen_rejection_with_limit<S: Scalar>(
    k: u32,
    n: usize,
    range: i64,
    seed: u64,
    limit: usize,
) -> Result<Generated<S>> {
    check_range(range)?;
    let domain = Domain::new(k, n)?;
    let size = domain.checked_size()?;
    let mut rng = rng(seed);
    for attempt in 1..=limit {
        let values = propose(&mut rng, &domain, size, range);
        let function =
            ValuedFunction::dense(k, n, values.into_iter().map(S::from_int).collect())?;
        if check_k_submodular(&function)?.holds() {
            return Ok(Generated {
                function,
                attempts: attempt,
            });
        }
    }
    Err(Error::RetryLimit { attempts: limit })
}

fn propose(rng: &mut ChaCha8Rng, domain: &Domain, size: usize, range: i64) -> Vec<i64> {
    let n = domain.n();
    let unary: Vec<Vec<i64>> = (0..n).map(|_| draw_unary(rng, domain.k(), range)).collect();
    let mut concave = vec![0i64];
    let mut step = rng.gen_range(0..=range);
    for _ in 0..n {
        concave.push(concave.last().unwrap() + step);
        step = rng.gen_range(0..=step);
    }
    let flip = 2.0 / size as f64;
    let mut values: Vec<i64> = (0..size)
        .map(|index| {
            let t = domain.labeling_at(index);
            let base: i64 = (0..n).map(|i| unary[i][t.get(i).token() as usize]).sum::<i64>()
                + concave[t.support_size()];
            if index > 0 && rng.gen_bool(flip.min(1.0)) {
                base + if rng.gen_bool(0.5) { 1 } else { -1 }
            } else {
                base
            }
        })
        .collect();
    values[0] = 0;
    values
}

/// A uniformly random permutation of `0..n`.
pub fn random_order(n: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng(seed));
    order
}

fn check_range(range: i64) -> Result<()> {
    if range < 0 {
        return Err(Error::InvalidArgument(format!("negative range {range}")));
    }
    Ok(())
}
