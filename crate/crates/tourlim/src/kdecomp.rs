//! Irreducibility testing and canonical decomposition of kernels: support
//! digraph, strong connectivity, reducibility witnesses and the ordered
//! atom decomposition.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::kernel::{step_kernel, Segment, SegmentKernel, StepKernel};
use crate::rational::{format_rational, rat, Rational};
use crate::scc::tarjan_scc;
use crate::tournament::Digraph;

/// Block-level support: arc `i -> j` (for `i != j`) iff `values[i][j] > 0`.
/// Reachability in this digraph realises the iterated out-neighbourhood on
/// unions of blocks.
pub fn support_digraph(w: &StepKernel) -> Digraph {
    let m = w.block_count();
    let arcs = (0..m)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j && w.value(i, j).is_positive());
    Digraph::new(m, arcs).expect("block indices are in range")
}

/// True iff the support digraph is strongly connected. For kernels with at
/// most 12 blocks the subset criterion (no block set that beats everything
/// outside it) is checked exhaustively and the verdicts must agree.
pub fn is_irreducible_kernel(w: &StepKernel) -> bool {
    let support = support_digraph(w);
    let m = w.block_count();
    let scc_verdict = tarjan_scc(m, &|i, j| support.has_arc(i, j)).len() <= 1;
    if m <= 12 {
        let exhaustive = reducing_prefix(w).is_none();
        assert_eq!(
            scc_verdict, exhaustive,
            "strong connectivity and subset criteria must agree"
        );
    }
    scc_verdict
}

/// Exhaustive search for a nonempty proper block set B with value exactly 1
/// from B to its complement (B beats everything outside).
fn reducing_prefix(w: &StepKernel) -> Option<Vec<usize>> {
    let m = w.block_count();
    for mask in 1u32..(1 << m) - 1 {
        let in_b = |v: usize| mask >> v & 1 == 1;
        let mut all_one = true;
        'scan: for i in 0..m {
            if !in_b(i) {
                continue;
            }
            for j in 0..m {
                if !in_b(j) && !w.value(i, j).is_one() {
                    all_one = false;
                    break 'scan;
                }
            }
        }
        if all_one {
            return Some((0..m).filter(|&v| in_b(v)).collect());
        }
    }
    None
}

/// Mass `W` sends from `B` into the whole space:
/// `sum over i in B, all j of w_i w_j C[i][j]`.
fn outflow(w: &StepKernel, b: &[usize]) -> Rational {
    let mut total = Rational::zero();
    for &i in b {
        for j in 0..w.block_count() {
            total += w.weight(i) * w.weight(j) * w.value(i, j);
        }
    }
    total
}

/// If the kernel is reducible, returns the last part of its condensation:
/// a block set `B` that everything outside beats, together with the exact
/// identity `outflow(B) = mu(B)^2 / 2` (asserted). Returns `None` for
/// irreducible kernels; with at most 12 blocks the absence of any set
/// satisfying the identity is verified exhaustively.
pub fn reducibility_witness(w: &StepKernel) -> Option<Vec<usize>> {
    let decomp = decompose_kernel(w).expect("valid kernels decompose");
    let segments = decomp.result.segments();
    if segments.len() <= 1 {
        if w.block_count() <= 12 {
            for mask in 1u32..(1 << w.block_count()) - 1 {
                let b: Vec<usize> =
                    (0..w.block_count()).filter(|&v| mask >> v & 1 == 1).collect();
                let mass: Rational = b.iter().map(|&i| w.weight(i)).sum();
                assert_ne!(
                    outflow(w, &b),
                    &mass * &mass / rat(2, 1),
                    "irreducible kernel admits no half-square outflow set"
                );
            }
        }
        return None;
    }
    let last = segments.len() - 1;
    let b: Vec<usize> = decomp
        .block_map
        .iter()
        .enumerate()
        .filter(|&(_, &(seg, _))| seg == last)
        .map(|(block, _)| block)
        .collect();
    let mass: Rational = b.iter().map(|&i| w.weight(i)).sum();
    assert_eq!(
        outflow(w, &b),
        &mass * &mass / rat(2, 1),
        "witness must satisfy the half-square outflow identity"
    );
    Some(b)
}

/// The ordered decomposition of a step kernel into irreducible atoms.
#[derive(Clone, Debug)]
pub struct KernelDecomposition {
    /// Atoms in beats-first order. Step kernels have no non-atomic part, so
    /// no transitive segments appear here; a single 1/2 block is the
    /// quasi-random kernel, which is irreducible but not transitive.
    pub result: SegmentKernel,
    /// For each input block, its (segment index, inner block index).
    pub block_map: Vec<(usize, usize)>,
}

/// Decomposes a step kernel: strongly connected components of the support
/// digraph become atoms, emitted in condensation order. Cross-component
/// values must be exactly 0 or 1 and consistent — anything else means the
/// input was not a valid kernel.
pub fn decompose_kernel(w: &StepKernel) -> Result<KernelDecomposition> {
    let m = w.block_count();
    let support = support_digraph(w);
    let comps = tarjan_scc(m, &|i, j| support.has_arc(i, j));
    let k = comps.len();

    // condensation order: count victories, verifying 0/1 cross values
    let mut beats_count = vec![0usize; k];
    for a in 0..k {
        for b in a + 1..k {
            let mut direction: Option<bool> = None;
            for &i in &comps[a] {
                for &j in &comps[b] {
                    let fwd = w.value(i, j);
                    let forward = if fwd.is_one() {
                        true
                    } else if fwd.is_zero() {
                        false
                    } else {
                        return Err(Error::InconsistentCrossValues {
                            i,
                            j,
                            value: format_rational(fwd),
                        });
                    };
                    match direction {
                        None => direction = Some(forward),
                        Some(d) if d != forward => {
                            return Err(Error::InconsistentCrossValues {
                                i,
                                j,
                                value: format_rational(fwd),
                            });
                        }
                        _ => {}
                    }
                }
            }
            if direction.expect("components are nonempty") {
                beats_count[a] += 1;
            } else {
                beats_count[b] += 1;
            }
        }
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&a| std::cmp::Reverse(beats_count[a]));
    for (rank, &a) in order.iter().enumerate() {
        assert_eq!(beats_count[a], k - 1 - rank, "condensation must be a total order");
    }

    let mut block_map = vec![(usize::MAX, usize::MAX); m];
    let mut segments = Vec::with_capacity(k);
    for (seg_idx, &a) in order.iter().enumerate() {
        let blocks = &comps[a];
        let mass: Rational = blocks.iter().map(|&i| w.weight(i)).sum();
        let weights: Vec<Rational> = blocks.iter().map(|&i| w.weight(i) / &mass).collect();
        let values: Vec<Vec<Rational>> = blocks
            .iter()
            .map(|&i| blocks.iter().map(|&j| w.value(i, j).clone()).collect())
            .collect();
        for (inner, &block) in blocks.iter().enumerate() {
            block_map[block] = (seg_idx, inner);
        }
        segments.push(Segment::Atom {
            weight: mass,
            kernel: step_kernel(weights, values)?,
        });
    }
    Ok(KernelDecomposition {
        result: SegmentKernel::new(segments)?,
        block_map,
    })
}

/// Canonical form of a segment kernel: each atom is decomposed, results are
/// spliced in order, and adjacent transitive segments merge. Idempotent and
/// density-preserving.
pub fn decompose_segment_kernel(w: &SegmentKernel) -> Result<SegmentKernel> {
    let mut segments = Vec::new();
    for seg in w.segments() {
        match seg {
            Segment::Transitive { weight } => {
                segments.push(Segment::Transitive {
                    weight: weight.clone(),
                });
            }
            Segment::Atom { weight, kernel } => {
                let decomp = decompose_kernel(kernel)?;
                for sub in decomp.result.segments() {
                    let Segment::Atom {
                        weight: sub_weight,
                        kernel: sub_kernel,
                    } = sub
                    else {
                        unreachable!("step kernels decompose into atoms only");
                    };
                    segments.push(Segment::Atom {
                        weight: weight * sub_weight,
                        kernel: sub_kernel.clone(),
                    });
                }
            }
        }
    }
    SegmentKernel::new(segments)
}

/// Reorders the blocks of `a` by `perm` (block `i` becomes `perm[i]`) —
/// used to check decomposition round trips up to block permutation.
pub fn permute_blocks(w: &StepKernel, perm: &[usize]) -> Result<StepKernel> {
    let m = w.block_count();
    let mut weights = vec![Rational::zero(); m];
    let mut values = vec![vec![Rational::zero(); m]; m];
    for i in 0..m {
        weights[perm[i]] = w.weight(i).clone();
        for j in 0..m {
            values[perm[i]][perm[j]] = w.value(i, j).clone();
        }
    }
    step_kernel(weights, values)
}

/// The block permutation sending the input to the flattened decomposition,
/// verifying that flattening reproduces the input exactly up to it.
pub fn flatten_permutation(decomp: &KernelDecomposition) -> Vec<usize> {
    let mut sizes = vec![0usize; decomp.result.segment_count()];
    for &(seg, inner) in &decomp.block_map {
        sizes[seg] = sizes[seg].max(inner + 1);
    }
    let mut offsets = vec![0usize; sizes.len()];
    for s in 1..sizes.len() {
        offsets[s] = offsets[s - 1] + sizes[s - 1];
    }
    decomp
        .block_map
        .iter()
        .map(|&(seg, inner)| offsets[seg] + inner)
        .collect()
}
