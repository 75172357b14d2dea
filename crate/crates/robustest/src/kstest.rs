//! Distribution-free Kolmogorov-Smirnov-type tests with Monte Carlo null
//! quantiles: independence of a continuous pair, and symmetry of a
//! difference distribution.
//!
//! Both statistics are distribution-free under their null for continuous
//! data, so the null sample can be simulated once per sample size (uniform
//! pairs for independence, standard normal draws for symmetry - any
//! continuous symmetric law would do) and reused. Null caches are keyed by
//! (kind, n, replicates, seed); the seed comes from the calling stream's
//! master seed so every replicate of a simulation shares one cache.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::data::{PairedSample, Sample};
use crate::dist;
use crate::error::Result;
use crate::outcome::TestOutcome;
use crate::rng::RngStream;
use crate::tie::{detie_margins, TieBreak};

/// Default Monte Carlo replicate count for null p-values.
pub const DEFAULT_REPLICATES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KsKind {
    Independence,
    Symmetry,
}

impl KsKind {
    fn label(self) -> &'static str {
        match self {
            KsKind::Independence => "ks-independence-null",
            KsKind::Symmetry => "ks-symmetry-null",
        }
    }

    fn stream_tag(self) -> u64 {
        match self {
            KsKind::Independence => 0x4B,
            KsKind::Symmetry => 0x53,
        }
    }
}

/// Sorted simulated null statistics for one (kind, n, replicates, seed).
#[derive(Debug)]
pub struct KsNullCache {
    pub kind: KsKind,
    pub n: usize,
    pub replicates: usize,
    pub seed: u64,
    /// Sorted ascending.
    pub draws: Vec<f64>,
}

impl KsNullCache {
    /// Add-one Monte Carlo p-value against the cached null sample.
    pub fn pvalue(&self, observed: f64) -> f64 {
        let below = self.draws.partition_point(|&d| d < observed);
        let count_ge = self.draws.len() - below;
        (1 + count_ge) as f64 / (self.draws.len() + 1) as f64
    }
}

type CacheKey = (KsKind, usize, usize, u64);
type CacheSlot = Arc<OnceLock<Arc<KsNullCache>>>;

fn registry() -> &'static Mutex<HashMap<CacheKey, CacheSlot>> {
    static REG: OnceLock<Mutex<HashMap<CacheKey, CacheSlot>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Fetch (or lazily build) the null cache. Memoized in process and
/// persisted to the cache directory.
pub fn ks_null_cache(kind: KsKind, n: usize, replicates: usize, seed: u64) -> Arc<KsNullCache> {
    let key = (kind, n, replicates, seed);
    let slot = {
        let mut reg = registry().lock().unwrap();
        reg.entry(key).or_default().clone()
    };
    slot.get_or_init(|| Arc::new(load_or_generate(kind, n, replicates, seed)))
        .clone()
}

fn cache_path(kind: KsKind, n: usize, replicates: usize, seed: u64) -> std::path::PathBuf {
    dist::cache_dir().join(format!(
        "{}-n{}-r{}-s{:08x}.txt",
        kind.label(),
        n,
        replicates,
        seed
    ))
}

fn load_or_generate(kind: KsKind, n: usize, replicates: usize, seed: u64) -> KsNullCache {
    let path = cache_path(kind, n, replicates, seed);
    if let Some((header, rows)) = dist::read_cache_file(&path) {
        if header.kind == kind.label()
            && header.n == n
            && header.seed == seed
            && header.replicates == replicates
            && rows.len() == replicates
            && rows.iter().all(|r| r.len() == 1)
        {
            let draws: Vec<f64> = rows.iter().map(|r| r[0]).collect();
            if draws.windows(2).all(|w| w[0] <= w[1]) {
                return KsNullCache {
                    kind,
                    n,
                    replicates,
                    seed,
                    draws,
                };
            }
        }
    }
    let cache = generate(kind, n, replicates, seed);
    let rows: Vec<Vec<f64>> = cache.draws.iter().map(|&d| vec![d]).collect();
    let header = dist::CacheHeader {
        kind: kind.label().to_string(),
        n,
        seed,
        replicates,
    };
    let _ = dist::write_cache_file(&path, &header, &rows);
    cache
}

fn generate(kind: KsKind, n: usize, replicates: usize, seed: u64) -> KsNullCache {
    let tag = kind.stream_tag();
    let mut draws: Vec<f64> = (0..replicates)
        .into_par_iter()
        .map(|rep| {
            let mut rng = RngStream::new(seed, (tag << 56) | ((n as u64) << 32) | rep as u64);
            match kind {
                KsKind::Independence => {
                    let x: Vec<f64> = (0..n).map(|_| rng.next_f64()).collect();
                    let y: Vec<f64> = (0..n).map(|_| rng.next_f64()).collect();
                    ks_independence_sup(&x, &y)
                }
                KsKind::Symmetry => {
                    let d: Vec<f64> = (0..n).map(|_| dist::sample_normal(&mut rng)).collect();
                    ks_symmetry_sup(&d)
                }
            }
        })
        .collect();
    draws.sort_by(f64::total_cmp);
    KsNullCache {
        kind,
        n,
        replicates,
        seed,
        draws,
    }
}

// ---------------------------------------------------------------------------
// Statistics
// ---------------------------------------------------------------------------

/// KS independence statistic:
/// sqrt(n) * sup_{s,t} |C_n(t,s) - F_{n,X}(t) F_{n,Y}(s)| with C_n the
/// joint empirical CDF. The difference is piecewise constant on the
/// rectangles cut by the observed coordinates, so scanning every
/// (x-block, y-level) pair - including the empty prefix on each axis,
/// which covers the left limits - evaluates the supremum exactly.
pub fn ks_independence_stat(d: &PairedSample) -> f64 {
    ks_independence_sup(d.x().values(), d.y().values())
}

pub(crate) fn ks_independence_sup(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let nf = n as f64;
    // distinct y levels ascending + per-point level index
    let mut ysorted = y.to_vec();
    ysorted.sort_by(f64::total_cmp);
    ysorted.dedup();
    let m = ysorted.len();
    let ylevel: Vec<usize> = y
        .iter()
        .map(|&v| ysorted.partition_point(|&w| w < v))
        .collect();
    // total count of y's at each level (for the marginal CDF)
    let mut level_total = vec![0u32; m];
    for &l in &ylevel {
        level_total[l] += 1;
    }
    // x-order with equal-x blocks added atomically
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));

    let mut added_at_level = vec![0u32; m];
    let mut added_total = 0u32;
    let mut best = 0.0f64;

    let mut eval = |added_at_level: &[u32], added_total: u32| {
        let fa = added_total as f64 / nf;
        let mut c_cum = 0u32;
        let mut g_cum = 0u32;
        // b = 0 (below every y level): C = 0, G = 0 => difference 0
        for b in 0..m {
            c_cum += added_at_level[b];
            g_cum += level_total[b];
            let c = c_cum as f64 / nf;
            let g = g_cum as f64 / nf;
            let diff = (c - fa * g).abs();
            if diff > best {
                best = diff;
            }
        }
    };

    eval(&added_at_level, added_total); // empty x-prefix (left limit in t)
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && x[idx[j]] == x[idx[i]] {
            j += 1;
        }
        for &k in &idx[i..j] {
            added_at_level[ylevel[k]] += 1;
            added_total += 1;
        }
        eval(&added_at_level, added_total);
        i = j;
    }
    nf.sqrt() * best
}

/// KS symmetry statistic: sqrt(n) * sup_t |F_n(t) - F_{n,-}(t)| where
/// F_{n,-} is the empirical CDF of the negated values. Evaluated at every
/// breakpoint +-d_i and its left limit.
pub fn ks_symmetry_stat(diffs: &Sample) -> f64 {
    ks_symmetry_sup(diffs.values())
}

pub(crate) fn ks_symmetry_sup(d: &[f64]) -> f64 {
    let n = d.len();
    let nf = n as f64;
    let mut pos = d.to_vec();
    pos.sort_by(f64::total_cmp);
    let mut neg: Vec<f64> = d.iter().map(|v| -v).collect();
    neg.sort_by(f64::total_cmp);
    let mut breaks: Vec<f64> = pos.iter().chain(neg.iter()).copied().collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let mut best = 0.0f64;
    for &t in &breaks {
        let f_at = pos.partition_point(|&v| v <= t) as f64 / nf;
        let g_at = neg.partition_point(|&v| v <= t) as f64 / nf;
        let f_left = pos.partition_point(|&v| v < t) as f64 / nf;
        let g_left = neg.partition_point(|&v| v < t) as f64 / nf;
        best = best.max((f_at - g_at).abs()).max((f_left - g_left).abs());
    }
    nf.sqrt() * best
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

/// Monte Carlo KS independence test. The null sample (independent uniform
/// pairs of the same size) is cached per (n, replicates, master seed).
pub fn ks_independence_test(
    d: &PairedSample,
    replicates: usize,
    rng: &mut RngStream,
    ties: TieBreak,
) -> Result<TestOutcome> {
    let (d, notes) = detie_margins(d, ties, rng)?;
    let n = d.len();
    let stat = ks_independence_stat(&d);
    let cache = ks_null_cache(KsKind::Independence, n, replicates, rng.seed());
    let p = cache.pvalue(stat);
    let mut outcome = TestOutcome::new("ks-independence", stat, p).with_n(&[n]);
    outcome.notes.extend(notes);
    Ok(outcome)
}

/// Monte Carlo KS symmetry test on a sample of differences.
pub fn ks_symmetry_test(
    diffs: &Sample,
    replicates: usize,
    rng: &mut RngStream,
) -> Result<TestOutcome> {
    let n = diffs.len();
    if n < 2 {
        return Err(crate::error::Error::TooFewObservations { needed: 2, got: n });
    }
    let stat = ks_symmetry_sup(diffs.values());
    let cache = ks_null_cache(KsKind::Symmetry, n, replicates, rng.seed());
    let p = cache.pvalue(stat);
    Ok(TestOutcome::new("ks-symmetry", stat, p).with_n(&[n]))
}
