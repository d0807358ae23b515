//! Acceptance suite: one test per criterion, each printing a pass line.
//! Run with `cargo test -p tourlim --test acceptance -- --nocapture`.

use num_traits::{One, Signed, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use tourlim::homcount::{densities, transitivity_report, verify_count_identities};
use tourlim::kdecomp::{
    decompose_kernel, decompose_segment_kernel, flatten_permutation, is_irreducible_kernel,
    permute_blocks, reducibility_witness,
};
use tourlim::kdensity::{kernel_transitivity_report, t_ind_segment, t_step};
use tourlim::kernel::{
    adjacency_kernel, cantor_truncation, kernel_direct_sum, quasirandom, staircase, step_kernel,
    Segment,
};
use tourlim::rational::{rat, Rational};
use tourlim::sampler::{mc_density, reducibility_rate, sample_tournament, SampleConfig};
use tourlim::tdecomp::{decompose, t_ind_direct_sum};
use tourlim::tournament::{direct_sum, is_isomorphic, Digraph, OrderedParts, Tournament};
use tourlim::{SegmentKernel, StepKernel};

fn all_labeled_tournaments(n: usize) -> impl Iterator<Item = Tournament> {
    let pairs = n * (n - 1) / 2;
    (0u64..1 << pairs).map(move |mask| {
        let bits: Vec<bool> = (0..pairs).map(|k| mask >> k & 1 == 1).collect();
        Tournament::from_pair_bits(n, &bits)
    })
}

fn random_digraph(n: usize, rng: &mut ChaCha8Rng) -> Digraph {
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.next_u64() % 3 == 0 {
                arcs.push((i, j));
            }
        }
    }
    Digraph::new(n, arcs).unwrap()
}

fn random_step_kernel(max_blocks: usize, rng: &mut ChaCha8Rng) -> StepKernel {
    let m = 1 + (rng.next_u64() as usize) % max_blocks;
    let raw: Vec<i64> = (0..m).map(|_| 1 + (rng.next_u64() % 6) as i64).collect();
    let total: i64 = raw.iter().sum();
    let weights: Vec<Rational> = raw.iter().map(|&x| rat(x, total)).collect();
    let mut values = vec![vec![rat(1, 2); m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let v = match rng.next_u64() % 3 {
                0 => rat(0, 1),
                1 => rat(1, 1),
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
    step_kernel(weights, values).unwrap()
}

fn random_segment_kernel(rng: &mut ChaCha8Rng) -> SegmentKernel {
    let count = 1 + (rng.next_u64() % 4) as usize;
    let raw: Vec<i64> = (0..count).map(|_| 1 + (rng.next_u64() % 5) as i64).collect();
    let total: i64 = raw.iter().sum();
    let segments: Vec<Segment> = raw
        .iter()
        .map(|&x| {
            let weight = rat(x, total);
            if rng.next_u64() % 2 == 0 {
                Segment::Transitive { weight }
            } else {
                Segment::Atom {
                    weight,
                    kernel: random_step_kernel(3, rng),
                }
            }
        })
        .collect();
    kernel_direct_sum(segments).unwrap()
}

/// Isomorphism representatives of all tournaments with up to `max_n`
/// vertices, found by exhaustive enumeration and deduplication.
fn tournament_representatives(max_n: usize) -> Vec<Tournament> {
    let mut reps = Vec::new();
    for n in 1..=max_n {
        let mut level: Vec<Tournament> = Vec::new();
        for g in all_labeled_tournaments(n) {
            if !level.iter().any(|r| is_isomorphic(r, &g).unwrap()) {
                level.push(g);
            }
        }
        reps.extend(level);
    }
    reps
}

fn half_u_half_transitive() -> SegmentKernel {
    kernel_direct_sum(vec![
        Segment::Atom {
            weight: rat(1, 2),
            kernel: quasirandom(),
        },
        Segment::Transitive { weight: rat(1, 2) },
    ])
    .unwrap()
}

#[test]
fn criterion_01_nine_transitivity_criteria_agree() {
    let mut checked = 0usize;
    for n in 3..=5 {
        for g in all_labeled_tournaments(n) {
            assert!(
                transitivity_report(&g).all_agree(),
                "criteria disagree on an {n}-vertex tournament:\n{g}"
            );
            checked += 1;
        }
    }
    assert_eq!(checked, 8 + 64 + 1024);
    for n in [6usize, 7] {
        for seed in 0..500u64 {
            let g = Tournament::random_uniform(n, seed * 31 + n as u64);
            assert!(transitivity_report(&g).all_agree());
            checked += 1;
        }
    }
    println!("criterion 01 (transitivity criteria agree, {checked} tournaments): PASS");
}

#[test]
fn criterion_02_counting_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE);
    for case in 0..200 {
        let fk = 1 + (rng.next_u64() as usize) % 4;
        let gn = fk.max(1 + (rng.next_u64() as usize) % 8);
        let f = random_digraph(fk, &mut rng);
        let g = Tournament::random_uniform(gn, rng.next_u64());
        let report = verify_count_identities(&f, &g).unwrap();
        assert!(
            report.superset_identity,
            "case {case}: t_inj != sum of t_ind over tournament supersets"
        );
        assert!(
            report.quotient_identity,
            "case {case}: hom != sum of inj over quotients"
        );
    }
    println!("criterion 02 (counting identities, 200 exact cases): PASS");
}

#[test]
fn criterion_03_direct_sum_density_formula() {
    // worked value first
    let c3 = Tournament::cyclic(3).unwrap();
    let parts = OrderedParts::new(vec![c3.clone(), c3.clone()]).unwrap();
    assert_eq!(t_ind_direct_sum(&c3, &parts).unwrap(), rat(1, 20));

    let mut rng = ChaCha8Rng::seed_from_u64(0xD1CE);
    for case in 0..200 {
        let part_count = 1 + (rng.next_u64() as usize) % 3;
        let mut sizes = Vec::with_capacity(part_count);
        let mut left = 8usize;
        for p in 0..part_count {
            let remaining_parts = part_count - p - 1;
            let max = left - remaining_parts;
            let s = 1 + (rng.next_u64() as usize) % max.min(4);
            sizes.push(s);
            left -= s;
        }
        let parts: Vec<Tournament> = sizes
            .iter()
            .map(|&s| Tournament::random_uniform(s, rng.next_u64()))
            .collect();
        let parts = OrderedParts::new(parts).unwrap();
        let total = parts.total_vertices();
        let f = Tournament::random_uniform(1 + (rng.next_u64() as usize) % total.min(5), rng.next_u64());
        let formula = t_ind_direct_sum(&f, &parts).unwrap();
        let brute = densities(&f.to_digraph(), &direct_sum(&parts).to_digraph())
            .unwrap()
            .t_ind;
        assert_eq!(formula, brute, "case {case}: formula disagrees with brute force");
    }
    println!("criterion 03 (direct-sum density formula, 200 exact cases + worked value): PASS");
}

#[test]
fn criterion_04_decomposition_round_trip_and_uniqueness() {
    for n in 1..=5 {
        for g in all_labeled_tournaments(n) {
            assert_eq!(decompose(&g).reassemble(), g);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x0DEC);
    for _ in 0..100 {
        let n = 3 + (rng.next_u64() as usize) % 5; // up to 7
        let g = Tournament::random_uniform(n, rng.next_u64());
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = (rng.next_u64() % (i as u64 + 1)) as usize;
            perm.swap(i, j);
        }
        let h = g.relabel(&perm);
        let dg = decompose(&g);
        let dh = decompose(&h);
        let sizes_g: Vec<usize> = dg.components.iter().map(|c| c.vertices.len()).collect();
        let sizes_h: Vec<usize> = dh.components.iter().map(|c| c.vertices.len()).collect();
        assert_eq!(sizes_g, sizes_h, "component size sequences differ");
        for (a, b) in dg.components.iter().zip(&dh.components) {
            assert!(
                is_isomorphic(&a.part, &b.part).unwrap(),
                "ordered components are not isomorphic"
            );
        }
    }
    println!("criterion 04 (decomposition round trip n<=5 exhaustive, 100 isomorphic pairs): PASS");
}

#[test]
fn criterion_05_kernel_transitivity() {
    let rep = kernel_transitivity_report(&SegmentKernel::transitive(), 4).unwrap();
    assert!(rep.all_agree() && rep.verdict());
    assert_eq!(rep.t_p3, rat(1, 6));
    assert_eq!(rep.t_t3, rat(1, 6));
    assert_eq!(rep.score_integral, rat(1, 3));
    assert!(rep.t_c3.is_zero());

    let mut rng = ChaCha8Rng::seed_from_u64(0x5E55);
    for case in 0..100 {
        let w = random_step_kernel(5, &mut rng);
        // the report itself asserts both triangle identities exactly
        let rep = kernel_transitivity_report(&SegmentKernel::from_step(w.clone()), 3).unwrap();
        assert!(rep.all_agree(), "case {case}: verdicts disagree");
        assert_eq!(rep.t_c3, &rep.t_p3 - &rep.t_t3);
        assert_eq!(rep.t_c3, rat(-1, 4) + rat(3, 2) * &rep.t_p3);
    }
    println!("criterion 05 (kernel transitivity criteria + triangle identities, 100 kernels): PASS");
}

#[test]
fn criterion_06_staircase_convergence() {
    let c3 = Digraph::cycle(3).unwrap();
    for n in 1..=20usize {
        let w = staircase(n).unwrap();
        // independent oracle: plain triple sum over blocks
        let mut oracle = Rational::zero();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    oracle += w.weight(a)
                        * w.weight(b)
                        * w.weight(c)
                        * w.value(a, b)
                        * w.value(b, c)
                        * w.value(c, a);
                }
            }
        }
        let closed_form = rat(1, 8 * (n * n) as i64);
        assert_eq!(oracle, closed_form, "triple-sum oracle at n = {n}");
        assert_eq!(t_step(&c3, &w).unwrap(), closed_form, "t_step at n = {n}");
    }
    println!("criterion 06 (t(C3, staircase(n)) = 1/(8n^2) for n = 1..20): PASS");
}

#[test]
fn criterion_07_kernel_irreducibility() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x177E);
    let mut reducible_seen = 0;
    for case in 0..100 {
        let w = random_step_kernel(10, &mut rng);
        let verdict = is_irreducible_kernel(&w); // internally cross-checks m <= 12
        let witness = reducibility_witness(&w); // asserts the half-square identity
        assert_eq!(verdict, witness.is_none(), "case {case}: criteria disagree");
        if let Some(b) = witness {
            reducible_seen += 1;
            let mass: Rational = b.iter().map(|&i| w.weight(i)).sum();
            let mut outflow = Rational::zero();
            for &i in &b {
                for j in 0..w.block_count() {
                    outflow += w.weight(i) * w.weight(j) * w.value(i, j);
                }
            }
            assert_eq!(outflow, &mass * &mass / rat(2, 1), "case {case}: witness identity");
        }
    }
    assert!(reducible_seen > 0, "test matrix should include reducible kernels");
    println!("criterion 07 (SCC = witness search on 100 kernels, {reducible_seen} reducible): PASS");
}

#[test]
fn criterion_08_kernel_decomposition() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x8DEC);
    let patterns = tournament_representatives(4);
    let mut kernels: Vec<SegmentKernel> = (0..47).map(|_| random_segment_kernel(&mut rng)).collect();
    for d in 1..=3 {
        kernels.push(cantor_truncation(d, &random_step_kernel(3, &mut rng)));
    }
    assert_eq!(kernels.len(), 50);
    for (case, w) in kernels.iter().enumerate() {
        // every atom of every step-kernel decomposition is irreducible, and
        // flattening the decomposition reproduces the input up to the block
        // permutation
        for seg in w.segments() {
            if let Segment::Atom { kernel, .. } = seg {
                let decomp = decompose_kernel(kernel).unwrap();
                for sub in decomp.result.segments() {
                    let Segment::Atom { kernel: sub_kernel, .. } = sub else {
                        panic!("step kernels decompose into atoms only");
                    };
                    assert!(is_irreducible_kernel(sub_kernel));
                }
                let flat = decomp.result.flatten().unwrap();
                let perm = flatten_permutation(&decomp);
                assert_eq!(
                    permute_blocks(kernel, &perm).unwrap(),
                    flat,
                    "case {case}: flatten o decompose is not a block permutation"
                );
            }
        }
        let once = decompose_segment_kernel(w).unwrap();
        let twice = decompose_segment_kernel(&once).unwrap();
        assert_eq!(once, twice, "case {case}: decomposition is not idempotent");
        for f in &patterns {
            assert_eq!(
                t_ind_segment(f, w).unwrap(),
                t_ind_segment(f, &once).unwrap(),
                "case {case}: decomposition changed a density"
            );
        }
    }
    println!("criterion 08 (kernel decomposition invariants on 50 kernels x 8 patterns): PASS");
}

#[test]
fn criterion_09_segment_density_two_ways() {
    let w = half_u_half_transitive();
    let t3 = Tournament::transitive(3).unwrap();
    let c3 = Tournament::cyclic(3).unwrap();
    let exact_t3 = t_ind_segment(&t3, &w).unwrap();
    let exact_c3 = t_ind_segment(&c3, &w).unwrap();
    assert_eq!(exact_t3, rat(31, 192));
    assert_eq!(exact_c3, rat(1, 64));

    // (a) discretisation approaches monotonically with error < 1/n
    for (f, exact) in [(&t3, &exact_t3), (&c3, &exact_c3)] {
        let mut last_gap: Option<Rational> = None;
        for n in [8usize, 16, 32, 64] {
            let approx = t_step(&f.to_digraph(), &w.discretize(n).unwrap()).unwrap();
            let gap = (approx - exact).abs();
            assert!(gap < rat(1, n as i64), "error bound at n = {n}");
            if let Some(prev) = &last_gap {
                assert!(&gap <= prev, "approach is not monotone at n = {n}");
            }
            last_gap = Some(gap);
        }
    }

    // (b) Monte Carlo within four standard errors at 10^5 reps
    let rep_t3 = mc_density(&t3, &w, &SampleConfig::new(3, 90_001, 100_000), Some(exact_t3));
    assert!(rep_t3.z.unwrap().abs() <= 4.0, "{}", rep_t3.describe());
    let rep_c3 = mc_density(&c3, &w, &SampleConfig::new(3, 90_002, 100_000), Some(exact_c3));
    assert!(rep_c3.z.unwrap().abs() <= 4.0, "{}", rep_c3.describe());
    println!("criterion 09 (31/192 and 1/64 via discretisation and Monte Carlo): PASS");
}

#[test]
fn criterion_10_sampling() {
    // every sample of the transitive kernel is transitive
    let wt = SegmentKernel::transitive();
    for seed in 0..1000u64 {
        let g = sample_tournament(&wt, &SampleConfig::new(20, seed, 1));
        assert!(g.is_transitive(), "seed {seed} produced a non-transitive sample");
    }
    // spot-check the full nine-criterion report on a few samples
    for seed in 0..3u64 {
        let g = sample_tournament(&wt, &SampleConfig::new(12, seed, 1));
        let rep = transitivity_report(&g);
        assert!(rep.all_agree() && rep.verdict());
    }

    // five-case (F, W) estimator matrix, |z| <= 4 at 10^5 reps
    let u = SegmentKernel::from_step(quasirandom());
    let mix = half_u_half_transitive();
    let s2 = SegmentKernel::from_step(staircase(2).unwrap());
    let t2 = Tournament::transitive(2).unwrap();
    let t3 = Tournament::transitive(3).unwrap();
    let c3 = Tournament::cyclic(3).unwrap();
    let cases: [(&Tournament, &SegmentKernel, Rational); 5] = [
        (&t2, &u, rat(1, 2)),
        (&c3, &u, rat(1, 8)),
        (&c3, &mix, rat(1, 64)),
        (&t3, &mix, rat(31, 192)),
        (&t3, &s2, t_ind_segment(&t3, &s2).unwrap()),
    ];
    for (i, (f, w, exact)) in cases.into_iter().enumerate() {
        let rep = mc_density(f, w, &SampleConfig::new(f.n(), 7_000 + i as u64, 100_000), Some(exact));
        assert!(rep.z.unwrap().abs() <= 4.0, "case {i}: {}", rep.describe());
    }

    // prefix property, bit-exact, 20 random seeds
    let mut rng = ChaCha8Rng::seed_from_u64(0x9F1E);
    for _ in 0..20 {
        let seed = rng.next_u64();
        let big = sample_tournament(&mix, &SampleConfig::new(10, seed, 1));
        let small = sample_tournament(&mix, &SampleConfig::new(5, seed, 1));
        assert_eq!(big.induced(&[0, 1, 2, 3, 4]).unwrap(), small);
    }
    println!("criterion 10 (transitive sampling, 5-case estimator matrix, prefix property): PASS");
}

#[test]
fn criterion_11_reducibility_statistics() {
    let split = kernel_direct_sum(vec![
        Segment::Atom {
            weight: rat(1, 2),
            kernel: quasirandom(),
        },
        Segment::Atom {
            weight: rat(1, 2),
            kernel: quasirandom(),
        },
    ])
    .unwrap();
    let rate = reducibility_rate(&split, 10, 1000, 0xBEEF);
    assert!(rate >= 0.99, "reducible kernel sample rate {rate} < 0.99");

    // irreducible kernel whose small samples are still often reducible
    let c3k = SegmentKernel::from_step(
        adjacency_kernel(&Tournament::cyclic(3).unwrap()).unwrap(),
    );
    let rate = reducibility_rate(&c3k, 3, 1000, 0xFACE);
    assert!(rate > 0.0, "triangle-pattern kernel never yielded a reducible sample");
    println!("criterion 11 (reducibility rates: split >= 0.99, triangle pattern > 0): PASS");
}
