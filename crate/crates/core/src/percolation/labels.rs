//! Per-edge uniform labels realizing the monotone coupling.
//!
//! Label `(seed, sample, edge)` is word `2·edge` of the ChaCha8 keystream keyed
//! by `seed` on stream `sample`. The generator is counter based, so labels can
//! be produced in bulk ([`EdgeLabels`]) or one edge at a time ([`LazyLabels`])
//! and the two agree bit for bit.

use std::cell::RefCell;

use bitvec::vec::BitVec;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::GraphWindow;

const TWO_POW_MINUS_53: f64 = 1.0 / (1u64 << 53) as f64;

#[inline]
fn to_unit(x: u64) -> f64 {
    (x >> 11) as f64 * TWO_POW_MINUS_53
}

fn stream(seed: u64, sample: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(sample);
    rng
}

/// Anything that yields the label of an edge.
pub trait LabelSource {
    fn label(&self, edge: usize) -> f64;

    /// Whether `edge` is open at level `p`.
    #[inline]
    fn open_at(&self, edge: usize, p: f64) -> bool {
        self.label(edge) < p
    }
}

/// Which edges are open.
pub trait OpenEdges {
    fn is_open(&self, edge: usize) -> bool;
}

/// Full label array for one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeLabels {
    labels: Vec<f64>,
    seed: u64,
    sample: u64,
}

/// Draws the labels of `sample` under master `seed`.
pub fn assign_uniforms(window: &GraphWindow, seed: u64, sample: u64) -> EdgeLabels {
    let mut rng = stream(seed, sample);
    let labels = (0..window.num_edges())
        .map(|_| to_unit(rng.next_u64()))
        .collect();
    EdgeLabels {
        labels,
        seed,
        sample,
    }
}

impl EdgeLabels {
    /// Labels supplied directly, e.g. by exhaustive enumeration.
    pub fn from_values(labels: Vec<f64>) -> Result<Self> {
        if labels.iter().any(|l| !(0.0..1.0).contains(l)) {
            return Err(Error::domain("labels must lie in [0, 1)"));
        }
        Ok(EdgeLabels {
            labels,
            seed: 0,
            sample: 0,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// `(master seed, sample index)` these labels were drawn from.
    pub fn provenance(&self) -> (u64, u64) {
        (self.seed, self.sample)
    }

    /// The configuration at level `p`: edge `e` is open iff `label(e) < p`.
    pub fn threshold(&self, p: f64) -> Result<Configuration> {
        check_level(p)?;
        Ok(Configuration {
            open: self.labels.iter().map(|&l| l < p).collect(),
            level: p,
        })
    }

    /// View thresholded at `p` without materializing a bitset.
    pub fn at(&self, p: f64) -> Threshold<'_, Self> {
        Threshold { labels: self, p }
    }
}

impl LabelSource for EdgeLabels {
    #[inline]
    fn label(&self, edge: usize) -> f64 {
        self.labels[edge]
    }
}

/// Labels computed on demand; identical to [`assign_uniforms`].
///
/// Keystream words are fetched a block of [`BLOCK_WORDS`] at a time and kept
/// in a small direct-mapped cache, so nearby edges share one generator call.
pub struct LazyLabels {
    base: ChaCha8Rng,
    cache: RefCell<BlockCache>,
}

const BLOCK_WORDS: usize = 32;
const CACHE_SLOTS: usize = 64;

struct BlockCache {
    tags: [u64; CACHE_SLOTS],
    words: Box<[[u64; BLOCK_WORDS]; CACHE_SLOTS]>,
}

impl BlockCache {
    fn new() -> Self {
        BlockCache {
            tags: [u64::MAX; CACHE_SLOTS],
            words: Box::new([[0; BLOCK_WORDS]; CACHE_SLOTS]),
        }
    }
}

impl Clone for LazyLabels {
    fn clone(&self) -> Self {
        LazyLabels::from_base(self.base.clone())
    }
}

impl LazyLabels {
    pub fn new(seed: u64, sample: u64) -> Self {
        LazyLabels::from_base(stream(seed, sample))
    }

    fn from_base(base: ChaCha8Rng) -> Self {
        LazyLabels {
            base,
            cache: RefCell::new(BlockCache::new()),
        }
    }

    pub fn at(&self, p: f64) -> Threshold<'_, Self> {
        Threshold { labels: self, p }
    }
}

impl LabelSource for LazyLabels {
    #[inline]
    fn label(&self, edge: usize) -> f64 {
        let block = (edge / BLOCK_WORDS) as u64;
        let slot = (block as usize) % CACHE_SLOTS;
        let mut cache = self.cache.borrow_mut();
        if cache.tags[slot] != block {
            // Word positions count 32-bit halves.
            let mut rng = self.base.clone();
            rng.set_word_pos(2 * block as u128 * BLOCK_WORDS as u128);
            for w in cache.words[slot].iter_mut() {
                *w = rng.next_u64();
            }
            cache.tags[slot] = block;
        }
        to_unit(cache.words[slot][edge % BLOCK_WORDS])
    }
}

/// Labels thresholded at `p`, evaluated edge by edge.
#[derive(Clone, Copy)]
pub struct Threshold<'a, L: ?Sized> {
    labels: &'a L,
    p: f64,
}

impl<'a, L: LabelSource + ?Sized> Threshold<'a, L> {
    pub fn new(labels: &'a L, p: f64) -> Self {
        Threshold { labels, p }
    }

    pub fn level(&self) -> f64 {
        self.p
    }
}

impl<L: LabelSource + ?Sized> OpenEdges for Threshold<'_, L> {
    #[inline]
    fn is_open(&self, edge: usize) -> bool {
        self.labels.label(edge) < self.p
    }
}

/// An open/closed assignment of every window edge.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    open: BitVec,
    level: f64,
}

impl Configuration {
    /// Configuration from an explicit open set; `level` is informational.
    pub fn from_open(open: impl IntoIterator<Item = bool>, level: f64) -> Self {
        Configuration {
            open: open.into_iter().collect(),
            level,
        }
    }

    pub fn level(&self) -> f64 {
        self.level
    }

    pub fn num_edges(&self) -> usize {
        self.open.len()
    }

    pub fn open_count(&self) -> usize {
        self.open.count_ones()
    }

    /// Whether every edge open here is also open in `other`.
    pub fn is_subset_of(&self, other: &Configuration) -> bool {
        self.open.len() == other.open.len() && self.open.iter_ones().all(|e| other.open[e])
    }
}

impl OpenEdges for Configuration {
    #[inline]
    fn is_open(&self, edge: usize) -> bool {
        self.open[edge]
    }
}

/// Thresholds `labels` at `p`.
pub fn threshold(labels: &EdgeLabels, p: f64) -> Result<Configuration> {
    labels.threshold(p)
}

pub(crate) fn check_level(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "percolation level {p} outside [0, 1]"
        )))
    }
}
