//! Built-in verification suites: quick library-level invariant sweeps,
//! printed one pass/fail line per invariant.


use tourlim::homcount::{densities, transitivity_report, verify_count_identities};
use tourlim::kdecomp::{decompose_segment_kernel, is_irreducible_kernel, reducibility_witness};
use tourlim::kdensity::{kernel_transitivity_report, t_ind_segment, t_step};
use tourlim::kernel::{
    cantor_truncation, kernel_direct_sum, quasirandom, staircase, step_kernel, Segment,
};
use tourlim::rational::{rat, Rational};
use tourlim::sampler::{mc_density, reducibility_rate, sample_tournament, SampleConfig};
use tourlim::tdecomp::{decompose, t_ind_direct_sum};
use tourlim::tournament::{direct_sum, Digraph, OrderedParts, Tournament};
use tourlim::SegmentKernel;

use rand_core_shim::SmallRng;

/// Minimal deterministic generator for the verify sweeps, independent of
/// the library's sampling streams.
mod rand_core_shim {
    pub struct SmallRng(u64);

    impl SmallRng {
        pub fn new(seed: u64) -> Self {
            SmallRng(seed.wrapping_add(0x9e3779b97f4a7c15))
        }

        pub fn next(&mut self) -> u64 {
            // splitmix64
            self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = self.0;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            z ^ (z >> 31)
        }
    }
}

struct Suite {
    failures: Vec<String>,
}

impl Suite {
    fn check(&mut self, name: &str, ok: bool) {
        if ok {
            println!("PASS {name}");
        } else {
            println!("FAIL {name}");
            self.failures.push(name.to_string());
        }
    }
}

fn random_tournament(n: usize, rng: &mut SmallRng) -> Tournament {
    let bits: Vec<bool> = (0..n * (n - 1) / 2).map(|_| rng.next() & 1 == 1).collect();
    Tournament::from_pair_bits(n, &bits)
}

fn random_step_kernel(max_blocks: usize, rng: &mut SmallRng) -> tourlim::StepKernel {
    let m = 1 + (rng.next() as usize) % max_blocks;
    let raw: Vec<i64> = (0..m).map(|_| 1 + (rng.next() % 6) as i64).collect();
    let total: i64 = raw.iter().sum();
    let weights: Vec<Rational> = raw.iter().map(|&x| rat(x, total)).collect();
    let mut values = vec![vec![rat(1, 2); m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let v = match rng.next() % 3 {
                0 => rat(0, 1),
                1 => rat(1, 1),
                _ => {
                    let den = 2 + (rng.next() % 5) as i64;
                    let num = 1 + (rng.next() % (den as u64 - 1)) as i64;
                    rat(num, den)
                }
            };
            values[j][i] = rat(1, 1) - &v;
            values[i][j] = v;
        }
    }
    step_kernel(weights, values).expect("random kernel is valid")
}

fn random_segment_kernel(rng: &mut SmallRng) -> SegmentKernel {
    let count = 1 + (rng.next() % 3) as usize;
    let raw: Vec<i64> = (0..count).map(|_| 1 + (rng.next() % 5) as i64).collect();
    let total: i64 = raw.iter().sum();
    let segments: Vec<Segment> = raw
        .iter()
        .map(|&x| {
            let weight = rat(x, total);
            if rng.next() % 2 == 0 {
                Segment::Transitive { weight }
            } else {
                Segment::Atom {
                    weight,
                    kernel: random_step_kernel(3, rng),
                }
            }
        })
        .collect();
    kernel_direct_sum(segments).expect("random segment kernel is valid")
}

fn suite_identities(s: &mut Suite) {
    let mut rng = SmallRng::new(1);
    let mut ok = true;
    for _ in 0..50 {
        let fk = 1 + (rng.next() as usize) % 4;
        let gn = fk.max(1 + (rng.next() as usize) % 8);
        let mut arcs = Vec::new();
        for i in 0..fk {
            for j in 0..fk {
                if i != j && rng.next() % 3 == 0 {
                    arcs.push((i, j));
                }
            }
        }
        let f = Digraph::new(fk, arcs).unwrap();
        let g = random_tournament(gn, &mut rng);
        let rep = verify_count_identities(&f, &g).unwrap();
        ok &= rep.pass;
    }
    s.check("counting identities on 50 random pattern/target pairs", ok);

    let c3 = Digraph::cycle(3).unwrap();
    let mut ok = true;
    for n in 1..=10usize {
        ok &= t_step(&c3, &staircase(n).unwrap()).unwrap() == rat(1, 8 * (n * n) as i64);
    }
    s.check("t(C3, staircase(n)) = 1/(8 n^2) for n = 1..10", ok);

    let mut ok = true;
    for _ in 0..25 {
        let w = random_step_kernel(5, &mut rng);
        let rep = kernel_transitivity_report(&SegmentKernel::from_step(w), 3).unwrap();
        ok &= rep.all_agree();
        ok &= rep.t_c3 == &rep.t_p3 - &rep.t_t3;
        ok &= rep.t_c3 == rat(-1, 4) + rat(3, 2) * &rep.t_p3;
    }
    s.check("triangle identities on 25 random step kernels", ok);

    let mut ok = true;
    for n in 3..=6usize {
        for _ in 0..40 {
            ok &= transitivity_report(&random_tournament(n, &mut rng)).all_agree();
        }
    }
    s.check("nine transitivity criteria agree on 160 random tournaments", ok);

    let rep = kernel_transitivity_report(&SegmentKernel::transitive(), 4).unwrap();
    s.check(
        "transitive kernel: t(P3) = t(T3) = 1/6, score integral = 1/3",
        rep.verdict()
            && rep.all_agree()
            && rep.t_p3 == rat(1, 6)
            && rep.t_t3 == rat(1, 6)
            && rep.score_integral == rat(1, 3),
    );
}

fn suite_decomposition(s: &mut Suite) {
    let mut rng = SmallRng::new(2);
    let mut ok = true;
    for _ in 0..60 {
        let n = 1 + (rng.next() as usize) % 8;
        let g = random_tournament(n, &mut rng);
        let d = decompose(&g);
        ok &= d.reassemble() == g;
        ok &= d
            .components
            .iter()
            .all(|c| c.vertices.len() != 2);
    }
    s.check("tournament decomposition round trip on 60 random inputs", ok);

    let mut ok = true;
    for _ in 0..25 {
        let sizes = [1 + (rng.next() as usize) % 4, 1 + (rng.next() as usize) % 4];
        let parts = OrderedParts::new(
            sizes
                .iter()
                .map(|&k| random_tournament(k, &mut rng))
                .collect(),
        )
        .unwrap();
        let total = parts.total_vertices();
        let f = random_tournament(1 + (rng.next() as usize) % total.min(4), &mut rng);
        let lhs = t_ind_direct_sum(&f, &parts).unwrap();
        let rhs = densities(&f.to_digraph(), &direct_sum(&parts).to_digraph())
            .unwrap()
            .t_ind;
        ok &= lhs == rhs;
    }
    s.check("direct-sum density formula on 25 random cases", ok);

    let mut ok = true;
    for _ in 0..25 {
        let w = random_step_kernel(6, &mut rng);
        ok &= is_irreducible_kernel(&w) == reducibility_witness(&w).is_none();
    }
    s.check("kernel irreducibility criteria agree on 25 random kernels", ok);

    let mut ok = true;
    let mut kernels: Vec<SegmentKernel> =
        (0..15).map(|_| random_segment_kernel(&mut rng)).collect();
    kernels.push(cantor_truncation(2, &quasirandom()));
    let t3 = Tournament::transitive(3).unwrap();
    let c3 = Tournament::cyclic(3).unwrap();
    for w in &kernels {
        let once = decompose_segment_kernel(w).unwrap();
        let twice = decompose_segment_kernel(&once).unwrap();
        ok &= once == twice;
        ok &= t_ind_segment(&t3, w).unwrap() == t_ind_segment(&t3, &once).unwrap();
        ok &= t_ind_segment(&c3, w).unwrap() == t_ind_segment(&c3, &once).unwrap();
    }
    s.check(
        "segment decomposition idempotent and density-preserving on 16 kernels",
        ok,
    );
}

fn suite_sampling(s: &mut Suite) {
    let wt = SegmentKernel::transitive();
    let mut ok = true;
    for seed in 0..100 {
        ok &= sample_tournament(&wt, &SampleConfig::new(12, seed, 1)).is_transitive();
    }
    s.check("100 transitive-kernel samples at n = 12 are transitive", ok);

    let mix = kernel_direct_sum(vec![
        Segment::Atom {
            weight: rat(1, 2),
            kernel: quasirandom(),
        },
        Segment::Transitive { weight: rat(1, 2) },
    ])
    .unwrap();
    let mut ok = true;
    for seed in 0..5 {
        let big = sample_tournament(&mix, &SampleConfig::new(10, seed, 1));
        let small = sample_tournament(&mix, &SampleConfig::new(5, seed, 1));
        ok &= big.induced(&[0, 1, 2, 3, 4]).unwrap() == small;
    }
    s.check("sampling prefix property for 5 seeds", ok);

    let c3 = Tournament::cyclic(3).unwrap();
    let exact = t_ind_segment(&c3, &mix).unwrap();
    let rep = mc_density(&c3, &mix, &SampleConfig::new(3, 41, 20_000), Some(exact));
    s.check(
        "Monte Carlo estimate of t_ind(C3) within 4 standard errors",
        rep.z.map(|z| z.abs() <= 4.0).unwrap_or(false),
    );

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
    let rate = reducibility_rate(&split, 10, 300, 43);
    s.check("reducible kernel: sampled reducibility rate >= 0.99", rate >= 0.99);
}

pub fn run(suite: &str) -> Result<(), String> {
    let mut s = Suite { failures: vec![] };
    match suite {
        "identities" => suite_identities(&mut s),
        "decomposition" => suite_decomposition(&mut s),
        "sampling" => suite_sampling(&mut s),
        "all" => {
            suite_identities(&mut s);
            suite_decomposition(&mut s);
            suite_sampling(&mut s);
        }
        other => {
            return Err(format!(
                "unknown suite {other:?}: expected identities, decomposition, sampling or all"
            ))
        }
    }
    if s.failures.is_empty() {
        println!("verify: all checks passed");
        Ok(())
    } else {
        Err(format!("{} check(s) failed", s.failures.len()))
    }
}
