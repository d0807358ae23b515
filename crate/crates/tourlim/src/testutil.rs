//! Seeded random instances shared by the unit tests.

use num_traits::One;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::kernel::{kernel_direct_sum, step_kernel, Segment, SegmentKernel, StepKernel};
use crate::rational::{rat, rat_int, Rational};

pub(crate) fn random_step_kernel(max_blocks: usize, seed: u64) -> StepKernel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e3779b97f4a7c15);
    let m = 1 + (rng.next_u64() as usize) % max_blocks;
    let raw: Vec<i64> = (0..m).map(|_| 1 + (rng.next_u64() % 6) as i64).collect();
    let total: i64 = raw.iter().sum();
    let weights: Vec<Rational> = raw.iter().map(|&x| rat(x, total)).collect();
    let mut values = vec![vec![rat(1, 2); m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let v = match rng.next_u64() % 3 {
                0 => rat_int(0),
                1 => rat_int(1),
                _ => {
                    let den = 2 + (rng.next_u64() % 5) as i64;
                    let num = 1 + (rng.next_u64() % (den as u64 - 1)) as i64;
                    rat(num, den)
                }
            };
            values[j][i] = Rational::one() - &v;
            values[i][j] = v;
        }
    }
    step_kernel(weights, values).expect("random kernel is valid")
}

pub(crate) fn random_segment_kernel(seed: u64) -> SegmentKernel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x2545f4914f6cdd1d);
    let count = 1 + (rng.next_u64() % 4) as usize;
    let raw: Vec<i64> = (0..count).map(|_| 1 + (rng.next_u64() % 5) as i64).collect();
    let total: i64 = raw.iter().sum();
    let segs: Vec<Segment> = raw
        .iter()
        .map(|&x| {
            let weight = rat(x, total);
            if rng.next_u64() % 2 == 0 {
                Segment::Transitive { weight }
            } else {
                Segment::Atom {
                    weight,
                    kernel: random_step_kernel(3, rng.next_u64()),
                }
            }
        })
        .collect();
    kernel_direct_sum(segs).expect("random segment kernel is valid")
}
