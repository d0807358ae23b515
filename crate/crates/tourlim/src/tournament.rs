//! Finite tournaments and pattern digraphs.
//!
//! A tournament is a loop-free complete directed graph: between any two
//! distinct vertices exactly one direction is present. `Digraph` is the
//! general pattern type used on the left side of density computations.
//! Vertices are 0-indexed contiguous integers.

use std::collections::BTreeSet;
use std::fmt;

use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};

/// Default cap for exhaustive isomorphism search.
pub const ISO_CAP: usize = 8;

/// A finite directed graph given by its arc set. Used as the pattern `F`
/// of homomorphism counts; may contain loops and 2-cycles.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Digraph {
    n: usize,
    arcs: BTreeSet<(usize, usize)>,
}

impl Digraph {
    pub fn new(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let arcs: BTreeSet<(usize, usize)> = arcs.into_iter().collect();
        for &(i, j) in &arcs {
            if i >= n {
                return Err(Error::OutOfRange { vertex: i, n });
            }
            if j >= n {
                return Err(Error::OutOfRange { vertex: j, n });
            }
        }
        Ok(Digraph { n, arcs })
    }

    /// The empty pattern on `k` vertices.
    pub fn empty(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidSize);
        }
        Digraph::new(k, [])
    }

    /// The path `0 -> 1 -> ... -> k-1`.
    pub fn path(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidSize);
        }
        Digraph::new(k, (0..k.saturating_sub(1)).map(|i| (i, i + 1)))
    }

    /// The directed `k`-cycle; `k = 1` is a loop, `k = 2` a 2-cycle.
    pub fn cycle(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidSize);
        }
        Digraph::new(k, (0..k).map(|i| (i, (i + 1) % k)))
    }

    /// The transitive tournament pattern: arc `i -> j` iff `i < j`.
    pub fn transitive(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidSize);
        }
        Digraph::new(k, (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))))
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn has_arc(&self, i: usize, j: usize) -> bool {
        self.arcs.contains(&(i, j))
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.arcs.iter().copied()
    }

    pub fn has_loop(&self) -> bool {
        (0..self.n).any(|i| self.has_arc(i, i))
    }

    pub fn has_two_cycle(&self) -> bool {
        self.arcs
            .iter()
            .any(|&(i, j)| i != j && self.has_arc(j, i))
    }

    pub fn is_tournament(&self) -> bool {
        self.as_tournament().is_ok()
    }

    pub fn as_tournament(&self) -> Result<Tournament> {
        let bits: Vec<Vec<bool>> = (0..self.n)
            .map(|i| (0..self.n).map(|j| self.has_arc(i, j)).collect())
            .collect();
        Tournament::from_matrix(&bits)
    }
}

/// A tournament on `n` labeled vertices, stored as a dense beats matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Tournament {
    n: usize,
    beats: Vec<bool>, // row-major n*n
}

impl Tournament {
    /// Validates a dense boolean matrix: no loops, exactly one direction
    /// per pair. A matrix with a diagonal entry set is rejected as a loop
    /// (an induced 1-cycle); a pair with both or neither direction is an
    /// induced 2-cycle or empty pair.
    pub fn from_matrix(bits: &[Vec<bool>]) -> Result<Self> {
        let n = bits.len();
        for row in bits {
            if row.len() != n {
                return Err(Error::ParseError("matrix is not square".into()));
            }
        }
        for (i, row) in bits.iter().enumerate() {
            if row[i] {
                return Err(Error::LoopPresent(i));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if bits[i][j] == bits[j][i] {
                    return Err(Error::NotAntisymmetric(i, j));
                }
            }
        }
        let mut beats = vec![false; n * n];
        for (i, row) in bits.iter().enumerate() {
            for (j, &b) in row.iter().enumerate() {
                beats[i * n + j] = b;
            }
        }
        Ok(Tournament { n, beats })
    }

    /// The empty tournament (zero vertices).
    pub fn trivial() -> Self {
        Tournament {
            n: 0,
            beats: Vec::new(),
        }
    }

    /// Builds a tournament from one bit per unordered pair, in row-major
    /// order of pairs `(i, j)` with `i < j`; a set bit means `i` beats `j`.
    /// This is the enumeration order used to sweep all labeled tournaments.
    pub fn from_pair_bits(n: usize, bits: &[bool]) -> Self {
        assert_eq!(bits.len(), n * (n - 1) / 2, "one bit per unordered pair");
        let mut beats = vec![false; n * n];
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                if bits[k] {
                    beats[i * n + j] = true;
                } else {
                    beats[j * n + i] = true;
                }
                k += 1;
            }
        }
        Tournament { n, beats }
    }

    /// The transitive tournament: `i` beats `j` iff `i < j`.
    pub fn transitive(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidSize);
        }
        let mut beats = vec![false; k * k];
        for i in 0..k {
            for j in i + 1..k {
                beats[i * k + j] = true;
            }
        }
        Ok(Tournament { n: k, beats })
    }

    /// The cyclic tournament. Only `k = 3` yields a tournament; larger
    /// cycles are patterns, not tournaments (see [`Digraph::cycle`]).
    pub fn cyclic(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidSize);
        }
        if k != 3 {
            return Err(Error::NotATournament(k));
        }
        let bits = vec![
            vec![false, true, false],
            vec![false, false, true],
            vec![true, false, false],
        ];
        Tournament::from_matrix(&bits)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn beats(&self, i: usize, j: usize) -> bool {
        self.beats[i * self.n + j]
    }

    /// Out-degrees. Their sum is always `n(n-1)/2`.
    pub fn scores(&self) -> Vec<usize> {
        (0..self.n)
            .map(|i| (0..self.n).filter(|&j| self.beats(i, j)).count())
            .collect()
    }

    /// Transitivity of the beats relation itself.
    pub fn is_transitive(&self) -> bool {
        for i in 0..self.n {
            for j in 0..self.n {
                if !self.beats(i, j) {
                    continue;
                }
                for k in 0..self.n {
                    if self.beats(j, k) && !self.beats(i, k) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Restriction to `vertices`, relabeled `0..k-1` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Result<Tournament> {
        let mut seen = vec![false; self.n];
        for &v in vertices {
            if v >= self.n {
                return Err(Error::OutOfRange { vertex: v, n: self.n });
            }
            if seen[v] {
                return Err(Error::DuplicateVertex(v));
            }
            seen[v] = true;
        }
        let k = vertices.len();
        let mut beats = vec![false; k * k];
        for (a, &u) in vertices.iter().enumerate() {
            for (b, &v) in vertices.iter().enumerate() {
                beats[a * k + b] = self.beats(u, v);
            }
        }
        Ok(Tournament { n: k, beats })
    }

    /// Relabels vertices: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Tournament {
        assert_eq!(perm.len(), self.n);
        let n = self.n;
        let mut beats = vec![false; n * n];
        for u in 0..n {
            for v in 0..n {
                if self.beats(u, v) {
                    beats[perm[u] * n + perm[v]] = true;
                }
            }
        }
        Tournament { n, beats }
    }

    pub fn to_digraph(&self) -> Digraph {
        let arcs = (0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.beats(i, j));
        Digraph::new(self.n, arcs).expect("tournament arcs are in range")
    }

    /// A uniformly random labeled tournament: one fair coin per unordered
    /// pair, drawn row-major from a seeded ChaCha8 stream.
    pub fn random_uniform(n: usize, seed: u64) -> Tournament {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let pairs = n * (n - 1) / 2;
        let bits: Vec<bool> = (0..pairs).map(|_| rng.next_u64() & 1 == 1).collect();
        Tournament::from_pair_bits(n, &bits)
    }

    /// Text format: line 1 is `n`, then `n` rows of `n` characters `0`/`1`,
    /// row `i` column `j` meaning `i` beats `j`. Round-trips exactly.
    pub fn parse(text: &str) -> Result<Tournament> {
        let mut lines = text.lines();
        let n: usize = lines
            .next()
            .ok_or_else(|| Error::ParseError("empty tournament file".into()))?
            .trim()
            .parse()
            .map_err(|_| Error::ParseError("first line must be the vertex count".into()))?;
        let mut bits = Vec::with_capacity(n);
        for i in 0..n {
            let line = lines
                .next()
                .ok_or_else(|| Error::ParseError(format!("missing row {i}")))?
                .trim();
            if line.len() != n {
                return Err(Error::ParseError(format!(
                    "row {i} has {} characters, expected {n}",
                    line.len()
                )));
            }
            let row: Vec<bool> = line
                .bytes()
                .map(|b| match b {
                    b'0' => Ok(false),
                    b'1' => Ok(true),
                    other => Err(Error::ParseError(format!(
                        "row {i} contains {:?}, expected 0 or 1",
                        other as char
                    ))),
                })
                .collect::<Result<_>>()?;
            bits.push(row);
        }
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(Error::ParseError("trailing content after matrix".into()));
        }
        Tournament::from_matrix(&bits)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.push(if self.beats(i, j) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Tournament {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// A nonempty ordered sequence of tournaments; the order is the linear
/// order of the direct sum (earlier part beats later part).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedParts(Vec<Tournament>);

impl OrderedParts {
    pub fn new(parts: Vec<Tournament>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Empty);
        }
        Ok(OrderedParts(parts))
    }

    pub fn parts(&self) -> &[Tournament] {
        &self.0
    }

    pub fn total_vertices(&self) -> usize {
        self.0.iter().map(|p| p.n()).sum()
    }
}

/// Ordered direct sum: vertex sets are concatenated, within-part arcs are
/// preserved and every vertex of an earlier part beats every vertex of a
/// later part.
pub fn direct_sum(parts: &OrderedParts) -> Tournament {
    let n = parts.total_vertices();
    let mut beats = vec![false; n * n];
    let mut offset = 0;
    let mut starts = Vec::with_capacity(parts.parts().len());
    for part in parts.parts() {
        starts.push(offset);
        for i in 0..part.n() {
            for j in 0..part.n() {
                if part.beats(i, j) {
                    beats[(offset + i) * n + (offset + j)] = true;
                }
            }
        }
        offset += part.n();
    }
    for (a, part_a) in parts.parts().iter().enumerate() {
        for (b, part_b) in parts.parts().iter().enumerate().skip(a + 1) {
            for i in 0..part_a.n() {
                for j in 0..part_b.n() {
                    beats[(starts[a] + i) * n + (starts[b] + j)] = true;
                }
            }
        }
    }
    Tournament { n, beats }
}

/// Exhaustive isomorphism test with the default cap of 8 vertices.
pub fn is_isomorphic(a: &Tournament, b: &Tournament) -> Result<bool> {
    is_isomorphic_capped(a, b, ISO_CAP)
}

/// Exhaustive permutation search for a beats-preserving vertex bijection.
pub fn is_isomorphic_capped(a: &Tournament, b: &Tournament, cap: usize) -> Result<bool> {
    if a.n() != b.n() {
        return Ok(false);
    }
    let n = a.n();
    if n > cap {
        return Err(Error::TooLarge { n, cap });
    }
    let mut sa = a.scores();
    let mut sb = b.scores();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return Ok(false);
    }
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    Ok(extend_iso(a, b, 0, &mut image, &mut used))
}

fn extend_iso(
    a: &Tournament,
    b: &Tournament,
    v: usize,
    image: &mut [usize],
    used: &mut [bool],
) -> bool {
    if v == a.n() {
        return true;
    }
    'candidates: for w in 0..b.n() {
        if used[w] {
            continue;
        }
        for u in 0..v {
            if a.beats(u, v) != b.beats(image[u], w) || a.beats(v, u) != b.beats(w, image[u]) {
                continue 'candidates;
            }
        }
        image[v] = w;
        used[w] = true;
        if extend_iso(a, b, v + 1, image, used) {
            return true;
        }
        used[w] = false;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_tournament_from_matrix() {
        let t = Tournament::from_matrix(&[vec![false]]).unwrap();
        assert_eq!(t.n(), 1);
    }

    #[test]
    fn from_matrix_agrees_with_transitive() {
        let bits = vec![
            vec![false, true, true],
            vec![false, false, true],
            vec![false, false, false],
        ];
        assert_eq!(
            Tournament::from_matrix(&bits).unwrap(),
            Tournament::transitive(3).unwrap()
        );
    }

    #[test]
    fn from_matrix_rejects_two_cycle_and_loop() {
        let two_cycle = vec![vec![false, true], vec![true, false]];
        assert_eq!(
            Tournament::from_matrix(&two_cycle),
            Err(Error::NotAntisymmetric(0, 1))
        );
        let looped = vec![vec![true, true], vec![false, false]];
        assert_eq!(Tournament::from_matrix(&looped), Err(Error::LoopPresent(0)));
        let empty_pair = vec![vec![false, false], vec![false, false]];
        assert_eq!(
            Tournament::from_matrix(&empty_pair),
            Err(Error::NotAntisymmetric(0, 1))
        );
    }

    #[test]
    fn named_families() {
        let t3 = Tournament::transitive(3).unwrap();
        let arcs: Vec<_> = t3.to_digraph().arcs().collect();
        assert_eq!(arcs, vec![(0, 1), (0, 2), (1, 2)]);

        let c3 = Tournament::cyclic(3).unwrap();
        let arcs: Vec<_> = c3.to_digraph().arcs().collect();
        assert_eq!(arcs, vec![(0, 1), (1, 2), (2, 0)]);

        let p3 = Digraph::path(3).unwrap();
        assert_eq!(p3.arcs().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);

        assert_eq!(Digraph::empty(2).unwrap().arc_count(), 0);
        assert_eq!(Tournament::transitive(0), Err(Error::InvalidSize));
        assert_eq!(Tournament::cyclic(4), Err(Error::NotATournament(4)));
        assert_eq!(Tournament::cyclic(0), Err(Error::InvalidSize));
    }

    #[test]
    fn direct_sum_of_transitive_parts_is_transitive() {
        let parts = OrderedParts::new(vec![
            Tournament::transitive(2).unwrap(),
            Tournament::transitive(3).unwrap(),
        ])
        .unwrap();
        assert_eq!(direct_sum(&parts), Tournament::transitive(5).unwrap());
    }

    #[test]
    fn direct_sum_of_two_cycles() {
        let c3 = Tournament::cyclic(3).unwrap();
        let parts = OrderedParts::new(vec![c3.clone(), c3.clone()]).unwrap();
        let g = direct_sum(&parts);
        assert_eq!(g.n(), 6);
        let arc_count: usize = g.scores().iter().sum();
        assert_eq!(arc_count, 15);
        for i in 0..3 {
            for j in 3..6 {
                assert!(g.beats(i, j));
            }
        }
        assert_eq!(g.scores(), vec![4, 4, 4, 1, 1, 1]);
    }

    #[test]
    fn induced_subtournaments() {
        let t5 = Tournament::transitive(5).unwrap();
        assert_eq!(
            t5.induced(&[1, 3, 4]).unwrap(),
            Tournament::transitive(3).unwrap()
        );
        let c3 = Tournament::cyclic(3).unwrap();
        let sub = c3.induced(&[0, 1]).unwrap();
        assert!(sub.beats(0, 1));
        assert_eq!(c3.induced(&[]).unwrap().n(), 0);
        assert_eq!(
            c3.induced(&[0, 0]).unwrap_err(),
            Error::DuplicateVertex(0)
        );
        assert_eq!(
            c3.induced(&[5]).unwrap_err(),
            Error::OutOfRange { vertex: 5, n: 3 }
        );
    }

    #[test]
    fn induced_recovers_direct_sum_part() {
        let a = Tournament::cyclic(3).unwrap();
        let b = Tournament::transitive(2).unwrap();
        let g = direct_sum(&OrderedParts::new(vec![a.clone(), b]).unwrap());
        assert_eq!(g.induced(&[0, 1, 2]).unwrap(), a);
    }

    #[test]
    fn isomorphism_basics() {
        let t3 = Tournament::transitive(3).unwrap();
        let c3 = Tournament::cyclic(3).unwrap();
        assert!(!is_isomorphic(&t3, &c3).unwrap());
        let relabeled = c3.relabel(&[2, 0, 1]);
        assert!(is_isomorphic(&c3, &relabeled).unwrap());
        let t9 = Tournament::transitive(9).unwrap();
        assert_eq!(
            is_isomorphic(&t9, &t9).unwrap_err(),
            Error::TooLarge { n: 9, cap: 8 }
        );
    }

    // Independent enumeration: all 2^6 labeled 4-vertex tournaments fall
    // into exactly 4 isomorphism classes.
    #[test]
    fn four_vertex_tournaments_have_four_classes() {
        let mut reps: Vec<Tournament> = Vec::new();
        for mask in 0u32..64 {
            let bits: Vec<bool> = (0..6).map(|k| mask >> k & 1 == 1).collect();
            let g = Tournament::from_pair_bits(4, &bits);
            if !reps
                .iter()
                .any(|r| is_isomorphic(r, &g).unwrap())
            {
                reps.push(g);
            }
        }
        assert_eq!(reps.len(), 4);
    }

    #[test]
    fn score_examples() {
        assert_eq!(Tournament::transitive(4).unwrap().scores(), vec![3, 2, 1, 0]);
        assert_eq!(Tournament::cyclic(3).unwrap().scores(), vec![1, 1, 1]);
    }

    #[test]
    fn text_round_trip() {
        let g = Tournament::random_uniform(6, 42);
        let text = g.to_text();
        assert_eq!(Tournament::parse(&text).unwrap(), g);
        assert_eq!(Tournament::parse(&text).unwrap().to_text(), text);
    }

    #[test]
    fn parse_rejects_bad_rows() {
        assert!(Tournament::parse("2\n01\n0\n").is_err());
        assert!(Tournament::parse("2\n01\n20\n").is_err());
        assert!(Tournament::parse("1\n1\n").is_err()); // loop
    }

    #[test]
    fn random_uniform_is_seed_deterministic() {
        assert_eq!(
            Tournament::random_uniform(7, 9),
            Tournament::random_uniform(7, 9)
        );
        assert_ne!(
            Tournament::random_uniform(7, 9),
            Tournament::random_uniform(7, 10)
        );
    }
}
