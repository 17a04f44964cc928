//! Exact multiset sampling primitives.
//!
//! Estimators draw millions of independent samples from small supports.
//! Instead of looping, the number of times each support element is hit is
//! drawn directly from the multinomial distribution, either by individual
//! draws (few samples) or by a chain of conditional binomials (many
//! samples). Both routes produce exactly the distribution of the loop.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Binomial, Distribution};

/// `Binomial(n, p)` with `p` clamped into `[0, 1]`.
pub fn binomial<R: Rng + ?Sized>(rng: &mut R, n: u64, p: f64) -> u64 {
    if n == 0 || !(p > 0.0) {
        0
    } else if p >= 1.0 {
        n
    } else {
        Binomial::new(n, p)
            .expect("probability checked above")
            .sample(rng)
    }
}

/// Hit counts of `count` uniform draws from `0..categories`, as sorted
/// `(index, hits)` pairs with `hits > 0`.
pub fn uniform_histogram<R: Rng + ?Sized>(
    rng: &mut R,
    count: u64,
    categories: usize,
) -> Vec<(usize, u64)> {
    assert!(categories > 0 || count == 0, "no categories to sample");
    if count == 0 {
        return Vec::new();
    }
    if count < (categories as u64) / 4 {
        let mut draws: Vec<usize> = (0..count).map(|_| rng.random_range(0..categories)).collect();
        draws.sort_unstable();
        return group_sorted(&draws);
    }
    let mut out = Vec::with_capacity(categories);
    let mut remaining = count;
    for i in 0..categories {
        if remaining == 0 {
            break;
        }
        let left = (categories - i) as f64;
        let hits = if i + 1 == categories {
            remaining
        } else {
            binomial(rng, remaining, 1.0 / left)
        };
        if hits > 0 {
            out.push((i, hits));
            remaining -= hits;
        }
    }
    out
}

fn group_sorted(draws: &[usize]) -> Vec<(usize, u64)> {
    let mut out: Vec<(usize, u64)> = Vec::with_capacity(draws.len());
    for &d in draws {
        match out.last_mut() {
            Some((last, c)) if *last == d => *c += 1,
            _ => out.push((d, 1)),
        }
    }
    out
}

/// Draws proportional to integer weights through a cumulative-sum array.
#[derive(Debug, Clone)]
pub struct CumulativeSampler {
    cumulative: Vec<u128>,
}

impl CumulativeSampler {
    /// Panics if every weight is zero.
    pub fn new<I: IntoIterator<Item = u128>>(weights: I) -> CumulativeSampler {
        let mut acc = 0u128;
        let cumulative: Vec<u128> = weights
            .into_iter()
            .map(|w| {
                acc += w;
                acc
            })
            .collect();
        assert!(acc > 0, "sampler needs positive total weight");
        CumulativeSampler { cumulative }
    }

    pub fn total(&self) -> u128 {
        *self.cumulative.last().expect("non-empty")
    }

    pub fn len(&self) -> usize {
        self.cumulative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cumulative.is_empty()
    }

    pub fn weight(&self, i: usize) -> u128 {
        self.cumulative[i] - if i == 0 { 0 } else { self.cumulative[i - 1] }
    }

    /// Probability of index `i`.
    pub fn probability(&self, i: usize) -> f64 {
        self.weight(i) as f64 / self.total() as f64
    }

    /// One draw, `O(log len)`.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let x = rng.random_range(0..self.total());
        self.cumulative.partition_point(|&c| c <= x)
    }

    /// Hit counts of `count` independent draws, one entry per index.
    pub fn counts<R: Rng + ?Sized>(&self, rng: &mut R, count: u64) -> Vec<u64> {
        let mut out = vec![0u64; self.len()];
        if count < (self.len() as u64) / 4 {
            for _ in 0..count {
                out[self.draw(rng)] += 1;
            }
            return out;
        }
        let mut remaining = count;
        let mut mass_left = self.total();
        for (i, slot) in out.iter_mut().enumerate() {
            if remaining == 0 {
                break;
            }
            let w = self.weight(i);
            let hits = if w == mass_left {
                remaining
            } else {
                binomial(rng, remaining, w as f64 / mass_left as f64)
            };
            *slot = hits;
            remaining -= hits;
            mass_left -= w;
        }
        out
    }
}
