//! Exact homomorphism densities of pattern digraphs against step and
//! segment kernels, the direct-sum density evaluation, and the transitive
//! kernel criteria with the triangle identities.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exec::map_indexed;
use crate::kernel::{Segment, SegmentKernel, StepKernel};
use crate::rational::{factorial, rat, rat_pow, Rational};
use crate::tdecomp::decompose;
use crate::tournament::{Digraph, Tournament};

/// Largest pattern accepted by the exact evaluators.
pub const PATTERN_CAP: usize = 7;
/// Work bound for the block-assignment enumeration in [`t_step`].
const WORK_CAP: u128 = 1 << 28;

fn check_pattern(f: &Digraph) -> Result<()> {
    if f.has_loop() {
        return Err(Error::UnsupportedPattern(
            "pattern has a loop; its density against a tournament kernel is not a scalar integral"
                .into(),
        ));
    }
    if f.has_two_cycle() {
        return Err(Error::UnsupportedPattern(
            "pattern has a 2-cycle; its induced density against a tournament kernel is 0".into(),
        ));
    }
    Ok(())
}

fn check_caps(k: usize, m: usize) -> Result<()> {
    if k > PATTERN_CAP {
        return Err(Error::CapExceeded(format!(
            "pattern has {k} vertices, cap is {PATTERN_CAP}"
        )));
    }
    let work = (m as u128).checked_pow(k as u32);
    match work {
        Some(w) if w <= WORK_CAP => Ok(()),
        _ => Err(Error::CapExceeded(format!(
            "{m}^{k} block assignments exceed the enumeration budget"
        ))),
    }
}

/// Exact density of a loop-free, 2-cycle-free pattern in a step kernel:
/// the sum over block assignments of the product of edge values times
/// block weights. For a tournament pattern this is both the homomorphism
/// and the induced density.
pub fn t_step(f: &Digraph, w: &StepKernel) -> Result<Rational> {
    check_pattern(f)?;
    let k = f.vertex_count();
    let m = w.block_count();
    check_caps(k, m)?;
    if k == 0 {
        return Ok(Rational::one());
    }
    let arcs: Vec<(usize, usize)> = f.arcs().collect();
    let branch = |first: usize| {
        let mut assign = vec![usize::MAX; k];
        assign[0] = first;
        let start = w.weight(first).clone();
        let mut sum = Rational::zero();
        assign_rest(f, w, &arcs, 1, &mut assign, &start, &mut sum);
        sum
    };
    // spreading tiny enumerations over the pool costs more than it saves
    let branches: Vec<Rational> = if (m as u128).pow(k as u32) <= 4096 {
        (0..m).map(branch).collect()
    } else {
        map_indexed(m, branch)
    };
    Ok(branches.into_iter().sum())
}

fn assign_rest(
    f: &Digraph,
    w: &StepKernel,
    arcs: &[(usize, usize)],
    v: usize,
    assign: &mut [usize],
    product: &Rational,
    sum: &mut Rational,
) {
    if v == f.vertex_count() {
        *sum += product;
        return;
    }
    for b in 0..w.block_count() {
        assign[v] = b;
        let mut p = product * w.weight(b);
        for &(x, y) in arcs {
            // only edges joining v to an already-assigned vertex
            if x == v && y < v {
                p *= w.value(b, assign[y]);
            } else if y == v && x < v {
                p *= w.value(assign[x], b);
            }
            if p.is_zero() {
                break;
            }
        }
        if !p.is_zero() {
            assign_rest(f, w, arcs, v + 1, assign, &p, sum);
        }
    }
    assign[v] = usize::MAX;
}

/// Induced density with a provenance flag: a pattern that is not a
/// tournament has induced density 0 against any tournament kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndDensity {
    pub value: Rational,
    pub pattern_is_tournament: bool,
}

pub fn t_ind_of_digraph(f: &Digraph, w: &SegmentKernel) -> Result<IndDensity> {
    match f.as_tournament() {
        Ok(t) => Ok(IndDensity {
            value: t_ind_segment(&t, w)?,
            pattern_is_tournament: true,
        }),
        Err(_) => Ok(IndDensity {
            value: Rational::zero(),
            pattern_is_tournament: false,
        }),
    }
}

/// Exact induced density of a tournament pattern in a segment kernel.
///
/// The component sequence of `F` is split into consecutive (possibly
/// empty) runs, one per segment in order. A run assigned to an atom of
/// mass `a` contributes `a^v * t_step(run)`; a run assigned to a
/// transitive segment of mass `w` contributes `w^v / v!` when the run is
/// all singletons and 0 otherwise. Products are summed over all splits by
/// dynamic programming.
pub fn t_ind_segment(f: &Tournament, w: &SegmentKernel) -> Result<Rational> {
    let k = f.n();
    if k > PATTERN_CAP {
        return Err(Error::CapExceeded(format!(
            "pattern has {k} vertices, cap is {PATTERN_CAP}"
        )));
    }
    let comps = decompose(f).components;
    let r = comps.len();
    let segs = w.segments();
    let q = segs.len();

    // factor[s][lo][hi]: contribution of run comps[lo..hi] inside segment s
    let mut factor = vec![vec![vec![Rational::zero(); r + 1]; r + 1]; q];
    for (s, seg) in segs.iter().enumerate() {
        for lo in 0..=r {
            for hi in lo..=r {
                let vertices: Vec<usize> = comps[lo..hi]
                    .iter()
                    .flat_map(|c| c.vertices.iter().copied())
                    .collect();
                let v = vertices.len();
                factor[s][lo][hi] = match seg {
                    Segment::Atom { weight, kernel } => {
                        let run = f.induced(&vertices).expect("component vertices are valid");
                        let dens = t_step(&run.to_digraph(), kernel)?;
                        rat_pow(weight, v) * dens
                    }
                    Segment::Transitive { weight } => {
                        let all_singletons =
                            comps[lo..hi].iter().all(|c| c.vertices.len() == 1);
                        if all_singletons {
                            rat_pow(weight, v) / Rational::from(factorial(v))
                        } else {
                            Rational::zero()
                        }
                    }
                };
            }
        }
    }

    // table[s][p] = sum over distributions of comps[p..] to segments s..
    let mut table = vec![vec![Rational::zero(); r + 1]; q + 1];
    table[q][r] = Rational::one();
    for s in (0..q).rev() {
        for p in (0..=r).rev() {
            let mut acc = Rational::zero();
            for p2 in p..=r {
                if factor[s][p][p2].is_zero() || table[s + 1][p2].is_zero() {
                    continue;
                }
                acc += &factor[s][p][p2] * &table[s + 1][p2];
            }
            table[s][p] = acc;
        }
    }
    Ok(table[0][0].clone())
}

/// Density of a loop-free, 2-cycle-free pattern in a segment kernel via
/// the tournament-completion expansion: each undecided pair is oriented
/// both ways and the induced densities of the completions are summed.
pub fn t_general_segment(f: &Digraph, w: &SegmentKernel) -> Result<Rational> {
    check_pattern(f)?;
    let k = f.vertex_count();
    let undecided: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
        .filter(|&(i, j)| !f.has_arc(i, j) && !f.has_arc(j, i))
        .collect();
    if undecided.len() > 20 {
        return Err(Error::CapExceeded(format!(
            "{} undecided pairs to orient",
            undecided.len()
        )));
    }
    let mut total = Rational::zero();
    for mask in 0u64..1 << undecided.len() {
        let mut arcs: Vec<(usize, usize)> = f.arcs().collect();
        for (b, &(i, j)) in undecided.iter().enumerate() {
            arcs.push(if mask >> b & 1 == 1 { (i, j) } else { (j, i) });
        }
        let completion = Digraph::new(k, arcs)?
            .as_tournament()
            .expect("orienting every pair of a loop-free 2-cycle-free pattern");
        total += t_ind_segment(&completion, w)?;
    }
    Ok(total)
}

/// The out-mass integral `\int (\int W(x,y) dy)^2 dx`, exact. For a step
/// kernel this is the weighted sum of squared block out-masses; transitive
/// segments integrate in closed form.
pub fn score_integral(w: &SegmentKernel) -> Rational {
    let segs = w.segments();
    // mass strictly after each segment
    let mut after = vec![Rational::zero(); segs.len()];
    let mut acc = Rational::zero();
    for s in (0..segs.len()).rev() {
        after[s] = acc.clone();
        acc += segs[s].weight();
    }
    let mut total = Rational::zero();
    for (s, seg) in segs.iter().enumerate() {
        match seg {
            Segment::Atom { weight, kernel } => {
                for b in 0..kernel.block_count() {
                    let inner: Rational = (0..kernel.block_count())
                        .map(|b2| kernel.weight(b2) * kernel.value(b, b2))
                        .sum();
                    let lambda = &after[s] + weight * inner;
                    total += weight * kernel.weight(b) * (&lambda * &lambda);
                }
            }
            Segment::Transitive { weight } => {
                // ∫₀¹ (after + weight·u)² du, times the segment mass
                let a = &after[s];
                total += weight
                    * (a * a + a * weight + weight * weight * rat(1, 3));
            }
        }
    }
    total
}

/// The computable transitivity criteria of a kernel, with exact densities.
/// All verdicts agree on every valid kernel; the two triangle identities
/// are asserted during construction.
#[derive(Clone, Debug)]
pub struct KernelTransitivityReport {
    pub t_c3: Rational,
    pub t_p3: Rational,
    pub t_t3: Rational,
    pub score_integral: Rational,
    /// `t(P_k)` and `t(T_k)` for `k = 1..=max_k`.
    pub t_pk: Vec<Rational>,
    pub t_tk: Vec<Rational>,
    pub c3_vanishes: bool,
    pub p3_is_sixth: bool,
    pub t3_is_sixth: bool,
    pub score_is_third: bool,
    pub pk_match: bool,
    pub tk_match: bool,
}

impl KernelTransitivityReport {
    pub fn criteria(&self) -> [bool; 6] {
        [
            self.c3_vanishes,
            self.p3_is_sixth,
            self.t3_is_sixth,
            self.score_is_third,
            self.pk_match,
            self.tk_match,
        ]
    }

    pub fn all_agree(&self) -> bool {
        let c = self.criteria();
        c.iter().all(|&b| b == c[0])
    }

    pub fn verdict(&self) -> bool {
        self.c3_vanishes
    }
}

/// Evaluates the transitivity criteria for a segment kernel; `max_k` bounds
/// the path/transitive pattern sizes (at least 3).
pub fn kernel_transitivity_report(
    w: &SegmentKernel,
    max_k: usize,
) -> Result<KernelTransitivityReport> {
    let max_k = max_k.max(3);
    let c3 = Tournament::cyclic(3).expect("C3 exists");
    let t_c3 = t_ind_segment(&c3, w)?;
    let t_p3 = t_general_segment(&Digraph::path(3)?, w)?;
    let t_t3 = t_ind_segment(&Tournament::transitive(3)?, w)?;
    let score = score_integral(w);

    let mut t_pk = Vec::with_capacity(max_k);
    let mut t_tk = Vec::with_capacity(max_k);
    for k in 1..=max_k {
        t_pk.push(t_general_segment(&Digraph::path(k)?, w)?);
        t_tk.push(t_ind_segment(&Tournament::transitive(k)?, w)?);
    }

    // triangle identities, valid for every tournament kernel
    assert_eq!(t_c3, &t_p3 - &t_t3, "t(C3) = t(P3) - t(T3) must hold");
    assert_eq!(
        t_c3,
        rat(-1, 4) + rat(3, 2) * &t_p3,
        "t(C3) = -1/4 + (3/2) t(P3) must hold"
    );

    let sixth = rat(1, 6);
    let pk_match = t_pk
        .iter()
        .enumerate()
        .all(|(i, v)| v == &(Rational::one() / Rational::from(factorial(i + 1))));
    let tk_match = t_tk
        .iter()
        .enumerate()
        .all(|(i, v)| v == &(Rational::one() / Rational::from(factorial(i + 1))));
    Ok(KernelTransitivityReport {
        c3_vanishes: t_c3.is_zero(),
        p3_is_sixth: t_p3 == sixth,
        t3_is_sixth: t_t3 == sixth,
        score_is_third: score == rat(1, 3),
        pk_match,
        tk_match,
        t_c3,
        t_p3,
        t_t3,
        score_integral: score,
        t_pk,
        t_tk,
    })
}

/// Step-kernel convenience wrapper around [`kernel_transitivity_report`].
pub fn kernel_transitivity_report_step(
    w: &StepKernel,
    max_k: usize,
) -> Result<KernelTransitivityReport> {
    kernel_transitivity_report(&SegmentKernel::from_step(w.clone()), max_k)
}
