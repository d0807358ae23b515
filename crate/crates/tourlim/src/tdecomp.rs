//! Canonical decomposition of a tournament into a linear order of
//! irreducible components, the coarse form with merged singleton runs, and
//! the direct-sum induced-density formula.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::homcount::ind_count;
use crate::rational::{falling, Rational};
use crate::scc::tarjan_scc;
use crate::tournament::{OrderedParts, Tournament};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentKind {
    Irreducible,
    Transitive,
    Singleton,
}

impl ComponentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ComponentKind::Irreducible => "irreducible",
            ComponentKind::Transitive => "transitive",
            ComponentKind::Singleton => "singleton",
        }
    }
}

/// One component of a decomposition: its original vertex labels (ascending)
/// and the induced subtournament.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub kind: ComponentKind,
    pub vertices: Vec<usize>,
    pub part: Tournament,
}

#[derive(Clone, Debug)]
pub struct TournamentDecomposition {
    /// The finest decomposition: strongly connected classes in beats-first
    /// order, size-1 classes marked `Singleton`.
    pub components: Vec<Component>,
    /// Maximal runs of two or more consecutive singletons merged into
    /// `Transitive` entries. No two transitive/singleton entries are
    /// adjacent in this list.
    pub coarse: Vec<Component>,
}

impl TournamentDecomposition {
    /// Rebuilds the tournament on its original labels: within a component
    /// the induced relation, across components earlier-beats-later. Equals
    /// the input exactly.
    pub fn reassemble(&self) -> Tournament {
        reassemble_components(&self.components)
    }

    pub fn parts(&self) -> Result<OrderedParts> {
        OrderedParts::new(self.components.iter().map(|c| c.part.clone()).collect())
    }
}

fn reassemble_components(components: &[Component]) -> Tournament {
    let n: usize = components.iter().map(|c| c.vertices.len()).sum();
    let mut bits = vec![vec![false; n]; n];
    for (ci, comp) in components.iter().enumerate() {
        for (a, &u) in comp.vertices.iter().enumerate() {
            for (b, &v) in comp.vertices.iter().enumerate() {
                if comp.part.beats(a, b) {
                    bits[u][v] = true;
                }
            }
        }
        for later in components.iter().skip(ci + 1) {
            for &u in &comp.vertices {
                for &v in &later.vertices {
                    bits[u][v] = true;
                }
            }
        }
    }
    Tournament::from_matrix(&bits).expect("reassembled matrix is a tournament")
}

/// The partition of the vertex set into mutual-reachability classes,
/// ordered so that earlier classes beat later classes. Every cross arc is
/// checked to agree with the derived order.
pub fn strong_components(g: &Tournament) -> Vec<Vec<usize>> {
    let n = g.n();
    let comps = tarjan_scc(n, &|i, j| g.beats(i, j));
    order_components(comps, &|i, j| g.beats(i, j))
}

/// Sorts strongly connected classes into the condensation's linear order
/// and asserts that all cross arcs between any two classes agree.
pub(crate) fn order_components(
    mut comps: Vec<Vec<usize>>,
    beats: &dyn Fn(usize, usize) -> bool,
) -> Vec<Vec<usize>> {
    let k = comps.len();
    // beats_count[a] = number of classes that class a beats entirely
    let mut beats_count = vec![0usize; k];
    for a in 0..k {
        for b in a + 1..k {
            let forward = beats(comps[a][0], comps[b][0]);
            for &u in &comps[a] {
                for &v in &comps[b] {
                    assert_eq!(
                        beats(u, v),
                        forward,
                        "cross arcs between strongly connected classes must agree"
                    );
                }
            }
            if forward {
                beats_count[a] += 1;
            } else {
                beats_count[b] += 1;
            }
        }
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&a| std::cmp::Reverse(beats_count[a]));
    // A condensation of a tournament is a total order, so the counts are
    // exactly k-1, k-2, ..., 0.
    for (rank, &a) in order.iter().enumerate() {
        assert_eq!(beats_count[a], k - 1 - rank, "condensation must be a total order");
    }
    let mut out = Vec::with_capacity(k);
    for &a in &order {
        out.push(std::mem::take(&mut comps[a]));
    }
    out
}

/// Score-sorted alternative: on a descending score order, a prefix of
/// length p is a union of top classes iff its score sum is
/// C(p,2) + p(n-p). Cross-check oracle for `strong_components`.
pub fn strong_components_by_scores(g: &Tournament) -> Vec<Vec<usize>> {
    let n = g.n();
    let scores = g.scores();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(scores[v]));
    let mut out = Vec::new();
    let mut sum = 0usize;
    let mut block_start = 0usize;
    for p in 1..=n {
        sum += scores[order[p - 1]];
        if sum == p * (p - 1) / 2 + p * (n - p) {
            let mut block: Vec<usize> = order[block_start..p].to_vec();
            block.sort_unstable();
            out.push(block);
            block_start = p;
        }
    }
    assert_eq!(block_start, n, "prefix cuts must exhaust the vertex set");
    out
}

/// Irreducibility verdict with the criteria cross-checked against each
/// other on small inputs.
#[derive(Clone, Debug)]
pub struct IrreducibilityReport {
    pub irreducible: bool,
    pub class_count: usize,
    /// A nonempty proper vertex set X with N(X) contained in X (the
    /// beaten-last part), when one exists and the exhaustive search ran.
    pub witness: Option<Vec<usize>>,
    /// Whether the exhaustive subset and path cross-checks ran (n <= 10).
    pub cross_checked: bool,
}

/// True iff the tournament has a single strongly connected class. For
/// n <= 10 the closed-neighbourhood subset criterion and pairwise path
/// existence are checked exhaustively; the three verdicts must agree.
pub fn is_irreducible(g: &Tournament) -> IrreducibilityReport {
    let n = g.n();
    let classes = strong_components(g);
    let scc_verdict = classes.len() <= 1;

    let mut witness = None;
    let cross_checked = (1..=10).contains(&n);
    if cross_checked {
        // Subset criterion: some nonempty proper X with N(X) inside X.
        let mut subset_reducible = false;
        for mask in 1u32..(1 << n) - 1 {
            let in_x = |v: usize| mask >> v & 1 == 1;
            let mut closed = true;
            'scan: for v in 0..n {
                if !in_x(v) {
                    continue;
                }
                for w in 0..n {
                    if g.beats(v, w) && !in_x(w) {
                        closed = false;
                        break 'scan;
                    }
                }
            }
            if closed {
                subset_reducible = true;
                witness = Some((0..n).filter(|&v| in_x(v)).collect());
                break;
            }
        }
        // Pairwise path existence via reachability closure.
        let mut reach = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                reach[i * n + j] = i == j || g.beats(i, j);
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if reach[i * n + k] && reach[k * n + j] {
                        reach[i * n + j] = true;
                    }
                }
            }
        }
        let paths_verdict = (0..n)
            .all(|i| (0..n).all(|j| reach[i * n + j] && reach[j * n + i]));
        assert_eq!(scc_verdict, !subset_reducible, "criteria (2) and (4) must agree");
        assert_eq!(scc_verdict, paths_verdict, "criteria (2) and (3) must agree");
    }

    IrreducibilityReport {
        irreducible: scc_verdict,
        class_count: classes.len(),
        witness,
        cross_checked,
    }
}

/// The canonical decomposition: strongly connected classes in order, plus
/// the coarse form where maximal runs of two or more consecutive
/// singletons are merged into transitive components.
pub fn decompose(g: &Tournament) -> TournamentDecomposition {
    let classes = strong_components(g);
    let components: Vec<Component> = classes
        .into_iter()
        .map(|vertices| {
            let part = g.induced(&vertices).expect("class vertices are valid");
            let kind = if vertices.len() == 1 {
                ComponentKind::Singleton
            } else {
                ComponentKind::Irreducible
            };
            debug_assert_ne!(vertices.len(), 2, "no irreducible tournament has 2 vertices");
            Component { kind, vertices, part }
        })
        .collect();

    let mut coarse: Vec<Component> = Vec::new();
    let mut run: Vec<usize> = Vec::new();
    let flush = |run: &mut Vec<usize>, coarse: &mut Vec<Component>| {
        if run.is_empty() {
            return;
        }
        let kind = if run.len() >= 2 {
            ComponentKind::Transitive
        } else {
            ComponentKind::Singleton
        };
        let vertices = std::mem::take(run);
        let part = g.induced(&vertices).expect("run vertices are valid");
        coarse.push(Component { kind, vertices, part });
    };
    for comp in &components {
        if comp.kind == ComponentKind::Singleton {
            run.push(comp.vertices[0]);
        } else {
            flush(&mut run, &mut coarse);
            coarse.push(comp.clone());
        }
    }
    flush(&mut run, &mut coarse);

    TournamentDecomposition { components, coarse }
}

/// Induced density of `F` in the ordered direct sum of `parts`, evaluated
/// through the decomposition formula: split the component sequence of `F`
/// into consecutive (possibly empty) runs, one per part, and multiply the
/// induced counts of the merged runs. Must equal the brute-force density
/// of `F` in `direct_sum(parts)` exactly.
pub fn t_ind_direct_sum(f: &Tournament, parts: &OrderedParts) -> Result<Rational> {
    let total: usize = parts.total_vertices();
    let k = f.n();
    let denom = falling(total, k);
    if denom.is_zero() {
        return Err(Error::PatternTooLarge {
            pattern: k,
            target: total,
        });
    }

    // Sum over all assignments of consecutive (possibly empty) runs of F's
    // component sequence to the parts, in order; the empty run counts 1.
    let comps = decompose(f).components;
    let sum = split_sum(f, &comps, 0, parts.parts());
    Ok(Rational::new(sum, denom))
}

fn split_sum(f: &Tournament, comps: &[Component], lo: usize, parts: &[Tournament]) -> BigInt {
    let Some((part, rest)) = parts.split_first() else {
        return if lo == comps.len() {
            BigInt::from(1u32)
        } else {
            BigInt::zero()
        };
    };
    let mut total = BigInt::zero();
    for hi in lo..=comps.len() {
        let vertices: Vec<usize> = comps[lo..hi]
            .iter()
            .flat_map(|c| c.vertices.iter().copied())
            .collect();
        let run = f.induced(&vertices).expect("component vertices are valid");
        let count = ind_count(&run.to_digraph(), &part.to_digraph());
        if count.is_zero() {
            continue;
        }
        total += count * split_sum(f, comps, hi, rest);
    }
    total
}
