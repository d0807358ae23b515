//! W-random tournament generation and Monte Carlo density estimation.
//!
//! Sampling is bit-reproducible across platforms. The generator is ChaCha8
//! keyed by the 64-bit seed, with one independent stream per draw site:
//! stream id `rep * 2^32 + v` for the point draws of vertex `v`, and
//! `rep * 2^32 + 2^31 + j(j-1)/2 + i` for the edge coin of the pair
//! `(i, j)`, `i < j`. Draw order inside a vertex stream is fixed: segment
//! choice, then block choice or position. Because draws depend only on
//! `(seed, rep, site)`, the first `k` vertices of an `n`-sample equal the
//! `k`-sample with the same seed, and estimator reps parallelise without
//! changing any bit of the result.
//!
//! Weighted choices and edge coins compare a uniform 64-bit draw against
//! exact thresholds `floor(p * 2^64)`; positions inside transitive
//! segments live on the dyadic `2^-64` grid, with ties broken by vertex
//! index (and counted — they essentially never happen).

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::exec::map_indexed;
use crate::kernel::{Segment, SegmentKernel};
use crate::rational::{format_rational, Rational};
use crate::tdecomp::strong_components;
use crate::tournament::Tournament;

const PAIR_STREAM_BASE: u64 = 1 << 31;

/// Sample size, seed, and repetition count for the estimators.
#[derive(Clone, Copy, Debug)]
pub struct SampleConfig {
    pub n: usize,
    pub seed: u64,
    pub reps: u64,
}

impl SampleConfig {
    pub fn new(n: usize, seed: u64, reps: u64) -> Self {
        SampleConfig { n, seed, reps }
    }
}

/// `floor(r * 2^64)` for `r` in `[0, 1]`, as a u128 threshold.
fn threshold(r: &Rational) -> u128 {
    debug_assert!(!r.is_negative() && r <= &Rational::one());
    let scaled = (r.numer() << 64u32) / r.denom();
    scaled.to_u128().expect("threshold fits: r <= 1")
}

/// Precomputed thresholds for one kernel.
struct Plan {
    seg_cumulative: Vec<u128>,
    segs: Vec<PlanSeg>,
}

enum PlanSeg {
    Atom {
        block_cumulative: Vec<u128>,
        coin: Vec<Vec<u128>>,
    },
    Transitive,
}

impl Plan {
    fn of(w: &SegmentKernel) -> Plan {
        let mut acc = Rational::zero();
        let mut seg_cumulative = Vec::with_capacity(w.segment_count());
        let mut segs = Vec::with_capacity(w.segment_count());
        for seg in w.segments() {
            acc += seg.weight();
            seg_cumulative.push(threshold(&acc));
            match seg {
                Segment::Transitive { .. } => segs.push(PlanSeg::Transitive),
                Segment::Atom { kernel, .. } => {
                    let m = kernel.block_count();
                    let mut inner = Rational::zero();
                    let mut block_cumulative = Vec::with_capacity(m);
                    for b in 0..m {
                        inner += kernel.weight(b);
                        block_cumulative.push(threshold(&inner));
                    }
                    let coin = (0..m)
                        .map(|i| (0..m).map(|j| threshold(kernel.value(i, j))).collect())
                        .collect();
                    segs.push(PlanSeg::Atom {
                        block_cumulative,
                        coin,
                    });
                }
            }
        }
        Plan {
            seg_cumulative,
            segs,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Point {
    Atom { segment: usize, block: usize },
    Transitive { segment: usize, position: u64 },
}

impl Point {
    fn segment(&self) -> usize {
        match *self {
            Point::Atom { segment, .. } => segment,
            Point::Transitive { segment, .. } => segment,
        }
    }
}

fn stream_rng(seed: u64, rep: u64, slot: u64) -> ChaCha8Rng {
    debug_assert!(rep < 1 << 32, "rep index must fit in 32 bits");
    debug_assert!(slot < 1 << 32);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((rep << 32) | slot);
    rng
}

fn pick(cumulative: &[u128], u: u64) -> usize {
    cumulative
        .iter()
        .position(|&t| (u as u128) < t)
        .unwrap_or(cumulative.len() - 1)
}

fn draw_point(plan: &Plan, seed: u64, rep: u64, v: usize) -> Point {
    let mut rng = stream_rng(seed, rep, v as u64);
    let segment = pick(&plan.seg_cumulative, rng.next_u64());
    match &plan.segs[segment] {
        PlanSeg::Transitive => Point::Transitive {
            segment,
            position: rng.next_u64(),
        },
        PlanSeg::Atom {
            block_cumulative, ..
        } => Point::Atom {
            segment,
            block: pick(block_cumulative, rng.next_u64()),
        },
    }
}

/// Outcome of one sampled tournament, with the count of exact position
/// ties that had to be broken by vertex index.
#[derive(Clone, Debug)]
pub struct SampleOutcome {
    pub tournament: Tournament,
    pub position_ties: usize,
}

fn sample_rep(plan: &Plan, n: usize, seed: u64, rep: u64) -> SampleOutcome {
    let points: Vec<Point> = (0..n).map(|v| draw_point(plan, seed, rep, v)).collect();
    let mut bits = vec![vec![false; n]; n];
    let mut ties = 0usize;
    for j in 0..n {
        for i in 0..j {
            let slot = PAIR_STREAM_BASE + (j * (j - 1) / 2 + i) as u64;
            let i_beats_j = match (points[i], points[j]) {
                (a, b) if a.segment() != b.segment() => a.segment() < b.segment(),
                (
                    Point::Transitive { position: pi, .. },
                    Point::Transitive { position: pj, .. },
                ) => {
                    if pi == pj {
                        ties += 1;
                        true // tie: lower vertex index beats
                    } else {
                        pi < pj
                    }
                }
                (Point::Atom { block: bi, .. }, Point::Atom { block: bj, .. }) => {
                    let PlanSeg::Atom { coin, .. } = &plan.segs[points[i].segment()] else {
                        unreachable!("atom point in atom segment")
                    };
                    let u = stream_rng(seed, rep, slot).next_u64();
                    (u as u128) < coin[bi][bj]
                }
                _ => unreachable!("same segment implies same variant"),
            };
            bits[if i_beats_j { i } else { j }][if i_beats_j { j } else { i }] = true;
        }
    }
    let matrix: Vec<Vec<bool>> = bits;
    SampleOutcome {
        tournament: Tournament::from_matrix(&matrix).expect("sampled matrix is a tournament"),
        position_ties: ties,
    }
}

/// One W-random tournament `G(n, W)`, deterministic in `(W, cfg.n,
/// cfg.seed)`; the first `k` rows of an `n`-sample equal the `k`-sample.
pub fn sample_tournament(w: &SegmentKernel, cfg: &SampleConfig) -> Tournament {
    sample_tournament_detailed(w, cfg).tournament
}

pub fn sample_tournament_detailed(w: &SegmentKernel, cfg: &SampleConfig) -> SampleOutcome {
    let plan = Plan::of(w);
    sample_rep(&plan, cfg.n, cfg.seed, 0)
}

/// The `rep`-th independent tournament of an estimator run.
pub fn sample_tournament_rep(w: &SegmentKernel, n: usize, seed: u64, rep: u64) -> Tournament {
    let plan = Plan::of(w);
    sample_rep(&plan, n, seed, rep).tournament
}

/// A Monte Carlo estimate with its binomial standard error; when the exact
/// density is known, `z` standardises the deviation (using the exact value
/// in the null standard error).
#[derive(Clone, Debug)]
pub struct EstimateReport {
    pub estimate: f64,
    pub std_error: f64,
    pub hits: u64,
    pub reps: u64,
    pub exact: Option<Rational>,
    pub z: Option<f64>,
}

impl EstimateReport {
    pub fn describe(&self) -> String {
        let mut out = format!(
            "estimate = {:.6} (se {:.6}, {} / {} hits)",
            self.estimate, self.std_error, self.hits, self.reps
        );
        if let Some(exact) = &self.exact {
            out.push_str(&format!(
                ", exact = {} ({:.6})",
                format_rational(exact),
                exact.to_f64().unwrap_or(f64::NAN)
            ));
        }
        if let Some(z) = self.z {
            out.push_str(&format!(", z = {z:+.3}"));
        }
        out
    }
}

fn binomial_report(hits: u64, reps: u64, exact: Option<Rational>) -> EstimateReport {
    let estimate = hits as f64 / reps as f64;
    let std_error = (estimate * (1.0 - estimate) / reps as f64).sqrt();
    let z = exact.as_ref().map(|e| {
        let p = e.to_f64().expect("density is finite");
        let null_se = (p * (1.0 - p) / reps as f64).sqrt();
        if null_se > 0.0 {
            (estimate - p) / null_se
        } else if estimate == p {
            0.0
        } else {
            f64::INFINITY
        }
    });
    EstimateReport {
        estimate,
        std_error,
        hits,
        reps,
        exact,
        z,
    }
}

/// Estimates `t_ind(F, W)` as the fraction of `reps` independent samples
/// `G(v(F), W)` equal, as labeled tournaments, to `F`.
pub fn mc_density(
    f: &Tournament,
    w: &SegmentKernel,
    cfg: &SampleConfig,
    exact: Option<Rational>,
) -> EstimateReport {
    let plan = Plan::of(w);
    let reps = cfg.reps.max(1);
    let hits: u64 = count_over_reps(reps, |rep| {
        sample_rep(&plan, f.n(), cfg.seed, rep).tournament == *f
    });
    binomial_report(hits, reps, exact)
}

/// Fraction of samples `G(n, W)` with more than one strongly connected
/// class.
pub fn reducibility_rate(w: &SegmentKernel, n: usize, reps: u64, seed: u64) -> f64 {
    let plan = Plan::of(w);
    let reps = reps.max(1);
    let hits = count_over_reps(reps, |rep| {
        let g = sample_rep(&plan, n, seed, rep).tournament;
        strong_components(&g).len() > 1
    });
    hits as f64 / reps as f64
}

/// Counts reps satisfying the predicate, in parallel chunks; per-rep
/// results depend only on the rep index, so chunking does not affect the
/// count.
fn count_over_reps<F>(reps: u64, pred: F) -> u64
where
    F: Fn(u64) -> bool + Sync + Send,
{
    const CHUNK: u64 = 512;
    let chunks = reps.div_ceil(CHUNK);
    let partials = map_indexed(chunks as usize, |c| {
        let lo = c as u64 * CHUNK;
        let hi = (lo + CHUNK).min(reps);
        (lo..hi).filter(|&rep| pred(rep)).count() as u64
    });
    partials.iter().sum()
}

/// Convenience: the exact `BigInt` shifted threshold is exercised in tests.
#[allow(dead_code)]
fn threshold_bigint(r: &Rational) -> BigInt {
    (r.numer() << 64u32) / r.denom()
}
