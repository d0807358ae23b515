//! Exact homomorphism, injective and induced counts and densities between
//! a pattern digraph and a target digraph, the identities relating them,
//! and the nine-criterion transitivity report for tournaments.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exec::map_indexed;
use crate::rational::{binomial, falling, rat_int, Rational};
use crate::tournament::{Digraph, Tournament};

/// Counting mode: plain homomorphisms, injective, or injective preserving
/// non-adjacency (induced).
#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Hom,
    Inj,
    Ind,
}

/// Dense adjacency snapshot; counting touches `arc` in the innermost loop.
struct Dense {
    n: usize,
    arc: Vec<bool>,
}

impl Dense {
    fn of(g: &Digraph) -> Dense {
        let n = g.vertex_count();
        let mut arc = vec![false; n * n];
        for (i, j) in g.arcs() {
            arc[i * n + j] = true;
        }
        Dense { n, arc }
    }

    #[inline]
    fn has(&self, i: usize, j: usize) -> bool {
        self.arc[i * self.n + j]
    }
}

fn count_maps(f: &Dense, g: &Dense, mode: Mode) -> u128 {
    if f.n == 0 {
        return 1; // the empty map
    }
    if mode != Mode::Hom && f.n > g.n {
        return 0;
    }
    let branch = |first: usize| {
        let mut image = vec![usize::MAX; f.n];
        let mut used = vec![false; g.n];
        if !consistent(f, g, 0, first, &image, mode) {
            return 0u128;
        }
        image[0] = first;
        used[first] = true;
        extend_count(f, g, 1, &mut image, &mut used, mode)
    };
    // small searches stay on one thread
    let branches: Vec<u128> = if (g.n as u128).pow(f.n as u32) <= 1 << 16 {
        (0..g.n).map(branch).collect()
    } else {
        map_indexed(g.n, branch)
    };
    branches.iter().sum()
}

fn consistent(f: &Dense, g: &Dense, v: usize, w: usize, image: &[usize], mode: Mode) -> bool {
    // Loop at v must map to a loop; induced mode also forbids spurious loops.
    if f.has(v, v) && !g.has(w, w) {
        return false;
    }
    if mode == Mode::Ind && !f.has(v, v) && g.has(w, w) {
        return false;
    }
    for u in 0..v {
        let iu = image[u];
        if f.has(u, v) && !g.has(iu, w) {
            return false;
        }
        if f.has(v, u) && !g.has(w, iu) {
            return false;
        }
        if mode == Mode::Ind {
            if !f.has(u, v) && g.has(iu, w) {
                return false;
            }
            if !f.has(v, u) && g.has(w, iu) {
                return false;
            }
        }
    }
    true
}

fn extend_count(
    f: &Dense,
    g: &Dense,
    v: usize,
    image: &mut [usize],
    used: &mut [bool],
    mode: Mode,
) -> u128 {
    if v == f.n {
        return 1;
    }
    let mut total = 0u128;
    for w in 0..g.n {
        if mode != Mode::Hom && used[w] {
            continue;
        }
        if !consistent(f, g, v, w, image, mode) {
            continue;
        }
        image[v] = w;
        used[w] = true;
        total = total
            .checked_add(extend_count(f, g, v + 1, image, used, mode))
            .expect("count fits in u128 at desk scale");
        used[w] = false;
    }
    total
}

/// Number of arc-preserving maps `V(F) -> V(G)`.
pub fn hom_count(f: &Digraph, g: &Digraph) -> BigInt {
    BigInt::from(count_maps(&Dense::of(f), &Dense::of(g), Mode::Hom))
}

/// Number of injective arc-preserving maps.
pub fn inj_count(f: &Digraph, g: &Digraph) -> BigInt {
    BigInt::from(count_maps(&Dense::of(f), &Dense::of(g), Mode::Inj))
}

/// Number of injective maps preserving both adjacency and non-adjacency.
pub fn ind_count(f: &Digraph, g: &Digraph) -> BigInt {
    BigInt::from(count_maps(&Dense::of(f), &Dense::of(g), Mode::Ind))
}

/// The three densities of `F` in `G`, exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityTriple {
    /// `hom(F,G) / v(G)^{v(F)}`
    pub t: Rational,
    /// `inj(F,G) / (v(G))_{v(F)}`
    pub t_inj: Rational,
    /// `ind(F,G) / (v(G))_{v(F)}`
    pub t_ind: Rational,
}

pub fn densities(f: &Digraph, g: &Digraph) -> Result<DensityTriple> {
    let k = f.vertex_count();
    let n = g.vertex_count();
    let ff = falling(n, k);
    if ff.is_zero() {
        return Err(Error::PatternTooLarge {
            pattern: k,
            target: n,
        });
    }
    let total_maps = BigInt::from(n).pow(k as u32);
    Ok(DensityTriple {
        t: Rational::new(hom_count(f, g), total_maps),
        t_inj: Rational::new(inj_count(f, g), ff.clone()),
        t_ind: Rational::new(ind_count(f, g), ff),
    })
}

/// Quotient digraph `F/Theta`: one vertex per block, an arc between blocks
/// whenever some arc joins their members; a block containing an internal
/// arc gets a loop.
pub fn quotient(f: &Digraph, partition: &[Vec<usize>]) -> Result<Digraph> {
    let n = f.vertex_count();
    let mut block_of = vec![usize::MAX; n];
    for (b, block) in partition.iter().enumerate() {
        if block.is_empty() {
            return Err(Error::NotAPartition(format!("block {b} is empty")));
        }
        for &v in block {
            if v >= n {
                return Err(Error::NotAPartition(format!("vertex {v} is out of range")));
            }
            if block_of[v] != usize::MAX {
                return Err(Error::NotAPartition(format!("vertex {v} appears twice")));
            }
            block_of[v] = b;
        }
    }
    if block_of.contains(&usize::MAX) {
        return Err(Error::NotAPartition("blocks do not cover the vertex set".into()));
    }
    Digraph::new(
        partition.len(),
        f.arcs().map(|(u, v)| (block_of[u], block_of[v])),
    )
}

/// Both sides of the counting identities, exact, plus the `t` vs `t_inj`
/// gap. `pass` is true when identities (a) and (b) hold.
#[derive(Clone, Debug)]
pub struct CountIdentityReport {
    /// (a) `t_inj(F,G)` and the sum of `t_ind(F',G)` over tournament
    /// supersets `F'` of `F` on the same vertex set.
    pub t_inj: Rational,
    pub sum_t_ind_supersets: Rational,
    pub superset_identity: bool,
    /// (b) `hom(F,G)` and the sum of `inj(F/Theta,G)` over all partitions.
    pub hom: BigInt,
    pub sum_inj_quotients: BigInt,
    pub quotient_identity: bool,
    /// (c) `|t_inj(F,G) - t(F,G)|`, reported exactly.
    pub gap: Rational,
    pub pass: bool,
}

/// Checks the identities relating the three counts on a tournament target.
pub fn verify_count_identities(f: &Digraph, g: &Tournament) -> Result<CountIdentityReport> {
    let gd = g.to_digraph();
    let dens = densities(f, &gd)?;

    // (a) enumerate tournament supersets of F: orient every undecided pair.
    // A pattern with a loop or 2-cycle has no tournament superset, so the
    // sum is empty (and t_inj is 0 against a tournament).
    let mut sum_ind = rat_int(0);
    if !f.has_loop() && !f.has_two_cycle() {
        let k = f.vertex_count();
        let undecided: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .filter(|&(i, j)| !f.has_arc(i, j) && !f.has_arc(j, i))
            .collect();
        for mask in 0u64..1 << undecided.len() {
            let mut arcs: Vec<(usize, usize)> = f.arcs().collect();
            for (b, &(i, j)) in undecided.iter().enumerate() {
                arcs.push(if mask >> b & 1 == 1 { (i, j) } else { (j, i) });
            }
            let completion = Digraph::new(k, arcs)?;
            sum_ind += densities(&completion, &gd)?.t_ind;
        }
    }

    // (b) sum of injective counts of quotients over all set partitions.
    let hom = hom_count(f, &gd);
    let mut sum_inj = BigInt::zero();
    for partition in set_partitions(f.vertex_count()) {
        let q = quotient(f, &partition)?;
        sum_inj += inj_count(&q, &gd);
    }

    let superset_identity = dens.t_inj == sum_ind;
    let quotient_identity = hom == sum_inj;
    let gap = (&dens.t_inj - &dens.t).abs();
    Ok(CountIdentityReport {
        t_inj: dens.t_inj,
        sum_t_ind_supersets: sum_ind,
        superset_identity,
        hom,
        sum_inj_quotients: sum_inj,
        quotient_identity,
        gap,
        pass: superset_identity && quotient_identity,
    })
}

/// All set partitions of `{0..n-1}`; Bell(n) grows fast, intended for n <= 6.
fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut current: Vec<Vec<usize>> = Vec::new();
    fn rec(v: usize, n: usize, current: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if v == n {
            out.push(current.clone());
            return;
        }
        for b in 0..current.len() {
            current[b].push(v);
            rec(v + 1, n, current, out);
            current[b].pop();
        }
        current.push(vec![v]);
        rec(v + 1, n, current, out);
        current.pop();
    }
    rec(0, n, &mut current, &mut out);
    out
}

/// The nine equivalent transitivity criteria for a tournament, evaluated
/// independently, with witnesses.
#[derive(Clone, Debug)]
pub struct TransitivityReport {
    pub n: usize,
    /// All criteria hold vacuously below 3 vertices.
    pub trivial: bool,
    /// (1) the beats relation is transitive
    pub relation_transitive: bool,
    /// (2) no directed cycle (checked by cycle detection, not counting)
    pub acyclic: bool,
    /// (3) no directed triangle
    pub no_c3: bool,
    /// (4) vertices can be ordered so that earlier beats later
    pub orderable: bool,
    /// (5) sum of squared scores equals n(n-1)(2n-1)/6
    pub score_sum_matches: bool,
    /// (6) C(n,k) path copies for every k
    pub path_counts_match: bool,
    /// (7) C(n,3) path copies on three vertices
    pub p3_count_matches: bool,
    /// (8) C(n,k) transitive copies for every k
    pub transitive_counts_match: bool,
    /// (9) C(n,3) transitive copies on three vertices
    pub t3_count_matches: bool,
    pub c3_count: BigInt,
    /// Sum of squared scores.
    pub score_sum: BigInt,
    pub expected_score_sum: BigInt,
    /// A violating triple (i beats j, j beats k, k beats i or untied), if any.
    pub witness_triple: Option<(usize, usize, usize)>,
    /// A directed cycle found by the search, if any.
    pub witness_cycle: Option<Vec<usize>>,
    /// The score-descending order when it witnesses criterion (4).
    pub ordering: Option<Vec<usize>>,
    /// `inj(P_k, G)` for k = 1..n (copies, since paths are rigid).
    pub path_counts: Vec<BigInt>,
    /// `inj(T_k, G)` for k = 1..n (copies, since transitive tournaments
    /// are rigid).
    pub transitive_counts: Vec<BigInt>,
}

impl TransitivityReport {
    /// The nine criterion booleans, in the classical order.
    pub fn criteria(&self) -> [bool; 9] {
        [
            self.relation_transitive,
            self.acyclic,
            self.no_c3,
            self.orderable,
            self.score_sum_matches,
            self.path_counts_match,
            self.p3_count_matches,
            self.transitive_counts_match,
            self.t3_count_matches,
        ]
    }

    pub fn all_agree(&self) -> bool {
        let c = self.criteria();
        c.iter().all(|&b| b == c[0])
    }

    pub fn verdict(&self) -> bool {
        self.relation_transitive
    }
}

/// Evaluates all nine criteria independently. Intended for desk-scale `n`;
/// the per-k subgraph counts are exhaustive.
pub fn transitivity_report(g: &Tournament) -> TransitivityReport {
    let n = g.n();

    let mut witness_triple = None;
    'outer: for i in 0..n {
        for j in 0..n {
            if !g.beats(i, j) {
                continue;
            }
            for k in 0..n {
                if g.beats(j, k) && !g.beats(i, k) {
                    witness_triple = Some((i, j, k));
                    break 'outer;
                }
            }
        }
    }
    let relation_transitive = witness_triple.is_none();

    let witness_cycle = find_cycle(g);
    let acyclic = witness_cycle.is_none();

    // Directed triangles, counted directly (each unordered triple once).
    let mut c3 = 0u128;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let fwd = g.beats(i, j) && g.beats(j, k) && g.beats(k, i);
                let bwd = g.beats(j, i) && g.beats(k, j) && g.beats(i, k);
                if fwd || bwd {
                    c3 += 1;
                }
            }
        }
    }
    let no_c3 = c3 == 0;

    // Order by descending score and verify earlier-beats-later.
    let mut order: Vec<usize> = (0..n).collect();
    let scores = g.scores();
    order.sort_by_key(|&v| std::cmp::Reverse(scores[v]));
    let mut orderable = true;
    for a in 0..n {
        for b in a + 1..n {
            if !g.beats(order[a], order[b]) {
                orderable = false;
            }
        }
    }

    let score_sum: BigInt = scores.iter().map(|&d| BigInt::from(d) * d).sum();
    let expected_score_sum = if n == 0 {
        BigInt::zero()
    } else {
        BigInt::from(n) * (n - 1) * (2 * n - 1) / 6
    };
    let score_sum_matches = score_sum == expected_score_sum;

    let gd = g.to_digraph();
    let mut path_counts = Vec::with_capacity(n);
    let mut transitive_counts = Vec::with_capacity(n);
    for k in 1..=n {
        path_counts.push(inj_count(&Digraph::path(k).expect("k >= 1"), &gd));
        transitive_counts.push(inj_count(&Digraph::transitive(k).expect("k >= 1"), &gd));
    }
    let expected: Vec<BigInt> = (1..=n).map(|k| binomial(n, k)).collect();
    let path_counts_match = path_counts == expected;
    let transitive_counts_match = transitive_counts == expected;
    let p3_count_matches = n < 3 || path_counts[2] == expected[2];
    let t3_count_matches = n < 3 || transitive_counts[2] == expected[2];

    TransitivityReport {
        n,
        trivial: n < 3,
        relation_transitive,
        acyclic,
        no_c3,
        orderable,
        score_sum_matches,
        path_counts_match,
        p3_count_matches,
        transitive_counts_match,
        t3_count_matches,
        c3_count: BigInt::from(c3),
        score_sum,
        expected_score_sum,
        witness_triple,
        witness_cycle,
        ordering: if orderable { Some(order) } else { None },
        path_counts,
        transitive_counts,
    }
}

/// Three-color DFS cycle search; returns the cycle's vertices if found.
fn find_cycle(g: &Tournament) -> Option<Vec<usize>> {
    const WHITE: u8 = 0;
    const GRAY: u8 = 1;
    const BLACK: u8 = 2;
    let n = g.n();
    let mut color = vec![WHITE; n];
    let mut stack: Vec<usize> = Vec::new();

    fn dfs(
        v: usize,
        g: &Tournament,
        color: &mut [u8],
        stack: &mut Vec<usize>,
    ) -> Option<Vec<usize>> {
        color[v] = GRAY;
        stack.push(v);
        for w in 0..g.n() {
            if !g.beats(v, w) {
                continue;
            }
            if color[w] == GRAY {
                let start = stack.iter().position(|&x| x == w).unwrap();
                return Some(stack[start..].to_vec());
            }
            if color[w] == WHITE
                && let Some(cycle) = dfs(w, g, color, stack)
            {
                return Some(cycle);
            }
        }
        stack.pop();
        color[v] = BLACK;
        None
    }

    for v in 0..n {
        if color[v] == WHITE
            && let Some(cycle) = dfs(v, g, &mut color, &mut stack)
        {
            return Some(cycle);
        }
    }
    None
}
