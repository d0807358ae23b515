//! Tournament kernels in two exact, finitely-presented forms.
//!
//! A [`StepKernel`] is a piecewise-constant kernel: finitely many weighted
//! blocks and a value matrix `C` with `C + C^T = 1`. A [`SegmentKernel`] is
//! an ordered direct sum of segments, each either an atom (a step kernel
//! with positive mass) or a transitive segment (a mass of the non-atomic
//! part on which the kernel is the linear order).
//!
//! Order convention: for `x` in an earlier segment and `y` in a later one,
//! `W(x, y) = 1` — earlier beats later, matching the finite direct sum and
//! the transitive kernel `W(x, y) = 1` iff `x <= y`.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, rat, Rational};
use crate::tournament::Tournament;

/// Piecewise-constant tournament kernel: `weights` are positive and sum to
/// one; `values[i][j] + values[j][i] = 1`, so the diagonal is exactly 1/2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepKernel {
    weights: Vec<Rational>,
    values: Vec<Vec<Rational>>,
}

/// Validating constructor for [`StepKernel`].
pub fn step_kernel(weights: Vec<Rational>, values: Vec<Vec<Rational>>) -> Result<StepKernel> {
    let m = weights.len();
    if m == 0 {
        return Err(Error::Empty);
    }
    if values.len() != m || values.iter().any(|row| row.len() != m) {
        return Err(Error::ParseError("value matrix must be square of block count".into()));
    }
    for (i, w) in weights.iter().enumerate() {
        if !w.is_positive() {
            return Err(Error::NonPositiveWeight(format!(
                "block {i} has weight {}",
                format_rational(w)
            )));
        }
    }
    let total: Rational = weights.iter().sum();
    if !total.is_one() {
        return Err(Error::WeightsNotNormalized(format_rational(&total)));
    }
    let half = rat(1, 2);
    for i in 0..m {
        if values[i][i] != half {
            return Err(Error::BadDiagonal {
                i,
                value: format_rational(&values[i][i]),
            });
        }
    }
    for i in 0..m {
        for j in 0..m {
            if values[i][j].is_negative() || values[i][j] > Rational::one() {
                return Err(Error::ValueOutOfRange {
                    i,
                    j,
                    value: format_rational(&values[i][j]),
                });
            }
        }
    }
    for i in 0..m {
        for j in i + 1..m {
            let sum = &values[i][j] + &values[j][i];
            if !sum.is_one() {
                return Err(Error::NotComplementary {
                    i,
                    j,
                    sum: format_rational(&sum),
                });
            }
        }
    }
    Ok(StepKernel { weights, values })
}

impl StepKernel {
    pub fn block_count(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, b: usize) -> &Rational {
        &self.weights[b]
    }

    pub fn value(&self, i: usize, j: usize) -> &Rational {
        &self.values[i][j]
    }

    pub fn values(&self) -> &[Vec<Rational>] {
        &self.values
    }
}

/// The quasi-random kernel: one block, constant 1/2.
pub fn quasirandom() -> StepKernel {
    step_kernel(vec![Rational::one()], vec![vec![rat(1, 2)]]).expect("U is valid")
}

/// The block adjacency kernel of a tournament: `n` equal blocks, value 1
/// when `i` beats `j`, 0 the other way, and 1/2 on the diagonal. The plain
/// adjacency function has 0 there and is only almost a kernel; pinning the
/// diagonal to 1/2 keeps the complementarity invariant and changes no
/// density in the large-`n` limit.
pub fn adjacency_kernel(g: &Tournament) -> Result<StepKernel> {
    let n = g.n();
    if n == 0 {
        return Err(Error::InvalidSize);
    }
    let w = rat(1, n as i64);
    let values: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        rat(1, 2)
                    } else if g.beats(i, j) {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    step_kernel(vec![w; n], values)
}

/// The `n`-block discretisation of the transitive kernel: value 1 above
/// the diagonal, 0 below, 1/2 on it.
pub fn staircase(n: usize) -> Result<StepKernel> {
    adjacency_kernel(&Tournament::transitive(n)?)
}

/// One ordered summand of a segment kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Segment {
    /// Positive mass carrying an inner step kernel.
    Atom { weight: Rational, kernel: StepKernel },
    /// Positive mass of non-atomic part on which the kernel is transitive.
    Transitive { weight: Rational },
}

impl Segment {
    pub fn weight(&self) -> &Rational {
        match self {
            Segment::Atom { weight, .. } => weight,
            Segment::Transitive { weight } => weight,
        }
    }

    pub fn is_transitive(&self) -> bool {
        matches!(self, Segment::Transitive { .. })
    }
}

/// Ordered direct sum of atoms and transitive segments; weights sum to one
/// and earlier segments beat later segments. Adjacent transitive segments
/// are merged at construction (they induce the same kernel).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentKernel {
    segments: Vec<Segment>,
}

/// Validating constructor for [`SegmentKernel`].
pub fn kernel_direct_sum(segments: Vec<Segment>) -> Result<SegmentKernel> {
    SegmentKernel::new(segments)
}

impl SegmentKernel {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::Empty);
        }
        for (i, seg) in segments.iter().enumerate() {
            if !seg.weight().is_positive() {
                return Err(Error::NonPositiveWeight(format!(
                    "segment {i} has weight {}",
                    format_rational(seg.weight())
                )));
            }
        }
        let total: Rational = segments.iter().map(|s| s.weight()).sum();
        if !total.is_one() {
            return Err(Error::WeightsNotNormalized(format_rational(&total)));
        }
        let mut merged: Vec<Segment> = Vec::with_capacity(segments.len());
        for seg in segments {
            match (merged.last_mut(), &seg) {
                (Some(Segment::Transitive { weight }), Segment::Transitive { weight: w2 }) => {
                    *weight += w2;
                }
                _ => merged.push(seg),
            }
        }
        Ok(SegmentKernel { segments: merged })
    }

    /// A single atom of full mass.
    pub fn from_step(kernel: StepKernel) -> Self {
        SegmentKernel {
            segments: vec![Segment::Atom {
                weight: Rational::one(),
                kernel,
            }],
        }
    }

    /// The transitive kernel.
    pub fn transitive() -> Self {
        SegmentKernel {
            segments: vec![Segment::Transitive {
                weight: Rational::one(),
            }],
        }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn segment_count(&self) -> usize {
        self.segments.len()
    }

    pub fn has_transitive_part(&self) -> bool {
        self.segments.iter().any(|s| s.is_transitive())
    }

    /// Total mass carried by atoms.
    pub fn atom_mass(&self) -> Rational {
        self.segments
            .iter()
            .filter(|s| !s.is_transitive())
            .map(|s| s.weight())
            .sum()
    }

    /// Collapses an all-atom kernel into one step kernel: blocks are the
    /// atoms' blocks in order, scaled by atom mass; cross values are 1 in
    /// segment order.
    pub fn flatten(&self) -> Result<StepKernel> {
        if self.has_transitive_part() {
            return Err(Error::UnsupportedPattern(
                "flatten requires an all-atom segment kernel".into(),
            ));
        }
        self.discretize(1)
    }

    /// Replaces each transitive segment by `n` equal staircase blocks and
    /// flattens atoms in place; the result's densities converge to this
    /// kernel's as `n` grows.
    pub fn discretize(&self, n: usize) -> Result<StepKernel> {
        if n == 0 {
            return Err(Error::InvalidSize);
        }
        // (segment index, weight, row of inner values or staircase marker)
        struct Block {
            segment: usize,
            inner: usize,
            weight: Rational,
        }
        let mut blocks: Vec<Block> = Vec::new();
        for (s, seg) in self.segments.iter().enumerate() {
            match seg {
                Segment::Atom { weight, kernel } => {
                    for b in 0..kernel.block_count() {
                        blocks.push(Block {
                            segment: s,
                            inner: b,
                            weight: weight * kernel.weight(b),
                        });
                    }
                }
                Segment::Transitive { weight } => {
                    let piece = weight / rat(n as i64, 1);
                    for b in 0..n {
                        blocks.push(Block {
                            segment: s,
                            inner: b,
                            weight: piece.clone(),
                        });
                    }
                }
            }
        }
        let m = blocks.len();
        let mut values = vec![vec![Rational::zero(); m]; m];
        for i in 0..m {
            for j in 0..m {
                let (bi, bj) = (&blocks[i], &blocks[j]);
                values[i][j] = if bi.segment != bj.segment {
                    if bi.segment < bj.segment {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                } else {
                    match &self.segments[bi.segment] {
                        Segment::Atom { kernel, .. } => kernel.value(bi.inner, bj.inner).clone(),
                        Segment::Transitive { .. } => {
                            if bi.inner == bj.inner {
                                rat(1, 2)
                            } else if bi.inner < bj.inner {
                                Rational::one()
                            } else {
                                Rational::zero()
                            }
                        }
                    }
                };
            }
        }
        step_kernel(blocks.into_iter().map(|b| b.weight).collect(), values)
    }
}

/// The cumulative-weight embedding of a segment kernel's parts into
/// `[0, 1)`: segment `k` occupies the half-open interval starting at the
/// sum of the earlier weights. The intervals partition `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaInterval {
    pub segment: usize,
    pub start: Rational,
    pub width: Rational,
}

pub fn eta(w: &SegmentKernel) -> Vec<EtaInterval> {
    let mut start = Rational::zero();
    let mut out = Vec::with_capacity(w.segment_count());
    for (k, seg) in w.segments().iter().enumerate() {
        let width = seg.weight().clone();
        out.push(EtaInterval {
            segment: k,
            start: start.clone(),
            width: width.clone(),
        });
        start += width;
    }
    out
}

/// The level-`d` truncation of the fat-Cantor direct sum: starting from a
/// single transitive interval of mass one, level `k` removes a middle piece
/// of width `1/2^(2k)` from each surviving interval and installs a copy of
/// `inner` there. Atom mass after `d` levels is `1/2 - 2^-(d+1)`.
pub fn cantor_truncation(d: u32, inner: &StepKernel) -> SegmentKernel {
    enum Piece {
        Surviving(Rational),
        Removed(Rational),
    }
    let mut pieces = vec![Piece::Surviving(Rational::one())];
    for k in 1..=d {
        let gap = rat(1, 1i64 << (2 * k));
        let mut next = Vec::with_capacity(pieces.len() * 2);
        for piece in pieces {
            match piece {
                Piece::Surviving(w) => {
                    let side = (&w - &gap) / rat(2, 1);
                    next.push(Piece::Surviving(side.clone()));
                    next.push(Piece::Removed(gap.clone()));
                    next.push(Piece::Surviving(side));
                }
                removed => next.push(removed),
            }
        }
        pieces = next;
    }
    let segments: Vec<Segment> = pieces
        .into_iter()
        .map(|piece| match piece {
            Piece::Surviving(weight) => Segment::Transitive { weight },
            Piece::Removed(weight) => Segment::Atom {
                weight,
                kernel: inner.clone(),
            },
        })
        .collect();
    SegmentKernel::new(segments).expect("cantor masses sum to one")
}

// ---------------------------------------------------------------------------
// JSON file format
// ---------------------------------------------------------------------------

/// Serialises to the kernel file format: an object with a `segments` array;
/// each segment is `{"type":"atom","weight":"p/q","blocks":[...],
/// "matrix":[[...]]}` or `{"type":"transitive","weight":"p/q"}`.
pub fn kernel_to_json(w: &SegmentKernel) -> serde_json::Value {
    let segments: Vec<serde_json::Value> = w
        .segments()
        .iter()
        .map(|seg| match seg {
            Segment::Atom { weight, kernel } => serde_json::json!({
                "type": "atom",
                "weight": format_rational(weight),
                "blocks": kernel
                    .weights()
                    .iter()
                    .map(format_rational)
                    .collect::<Vec<_>>(),
                "matrix": kernel
                    .values()
                    .iter()
                    .map(|row| row.iter().map(format_rational).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            }),
            Segment::Transitive { weight } => serde_json::json!({
                "type": "transitive",
                "weight": format_rational(weight),
            }),
        })
        .collect();
    serde_json::json!({ "segments": segments })
}

pub fn kernel_to_json_string(w: &SegmentKernel) -> String {
    kernel_to_json(w).to_string()
}

fn json_rational(v: &serde_json::Value, what: &str) -> Result<Rational> {
    match v {
        serde_json::Value::String(s) => parse_rational(s),
        serde_json::Value::Number(n) => parse_rational(&n.to_string()),
        other => Err(Error::ParseError(format!(
            "{what}: expected a rational string, got {other}"
        ))),
    }
}

/// Parses the kernel file format. Rationals may be `"p/q"` strings,
/// integers, or decimal literals (converted exactly).
pub fn kernel_from_json_str(text: &str) -> Result<SegmentKernel> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::ParseError(format!("bad JSON: {e}")))?;
    kernel_from_json(&value)
}

pub fn kernel_from_json(value: &serde_json::Value) -> Result<SegmentKernel> {
    let segments = value
        .get("segments")
        .and_then(|s| s.as_array())
        .ok_or_else(|| Error::ParseError("kernel object needs a \"segments\" array".into()))?;
    let mut out = Vec::with_capacity(segments.len());
    for (i, seg) in segments.iter().enumerate() {
        let kind = seg
            .get("type")
            .and_then(|t| t.as_str())
            .ok_or_else(|| Error::ParseError(format!("segment {i} needs a \"type\"")))?;
        let weight = json_rational(
            seg.get("weight")
                .ok_or_else(|| Error::ParseError(format!("segment {i} needs a \"weight\"")))?,
            "weight",
        )?;
        match kind {
            "transitive" => out.push(Segment::Transitive { weight }),
            "atom" => {
                let blocks = seg
                    .get("blocks")
                    .and_then(|b| b.as_array())
                    .ok_or_else(|| Error::ParseError(format!("atom {i} needs \"blocks\"")))?;
                let weights: Vec<Rational> = blocks
                    .iter()
                    .map(|b| json_rational(b, "block weight"))
                    .collect::<Result<_>>()?;
                let matrix = seg
                    .get("matrix")
                    .and_then(|m| m.as_array())
                    .ok_or_else(|| Error::ParseError(format!("atom {i} needs a \"matrix\"")))?;
                let values: Vec<Vec<Rational>> = matrix
                    .iter()
                    .map(|row| {
                        row.as_array()
                            .ok_or_else(|| {
                                Error::ParseError("matrix rows must be arrays".into())
                            })?
                            .iter()
                            .map(|v| json_rational(v, "matrix entry"))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<_>>()?;
                out.push(Segment::Atom {
                    weight,
                    kernel: step_kernel(weights, values)?,
                });
            }
            other => {
                return Err(Error::ParseError(format!(
                    "segment {i} has unknown type {other:?}"
                )))
            }
        }
    }
    SegmentKernel::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;

    #[test]
    fn step_kernel_examples() {
        assert_eq!(quasirandom().block_count(), 1);

        let valid = step_kernel(
            vec![rat(1, 2), rat(1, 2)],
            vec![vec![rat(1, 2), rat_int(1)], vec![rat_int(0), rat(1, 2)]],
        );
        assert!(valid.is_ok());

        let err = step_kernel(
            vec![rat(1, 2), rat(1, 2)],
            vec![vec![rat(1, 2), rat(3, 4)], vec![rat(3, 4), rat(1, 2)]],
        )
        .unwrap_err();
        assert_eq!(
            err,
            Error::NotComplementary {
                i: 0,
                j: 1,
                sum: "3/2".into()
            }
        );

        let err = step_kernel(vec![rat(1, 2), rat(1, 4)], vec![vec![rat(1, 2); 2]; 2]);
        assert_eq!(err, Err(Error::WeightsNotNormalized("3/4".into())));

        let err = step_kernel(vec![Rational::one()], vec![vec![rat(1, 3)]]);
        assert_eq!(
            err,
            Err(Error::BadDiagonal {
                i: 0,
                value: "1/3".into()
            })
        );
    }

    #[test]
    fn complementarity_holds_everywhere() {
        let k = staircase(5).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert!( (k.value(i, j) + k.value(j, i)).is_one());
            }
        }
    }

    #[test]
    fn adjacency_kernel_examples() {
        let t = Tournament::transitive(4).unwrap();
        assert_eq!(adjacency_kernel(&t).unwrap(), staircase(4).unwrap());
        assert_eq!(
            adjacency_kernel(&Tournament::transitive(1).unwrap()).unwrap(),
            quasirandom()
        );
        let c3 = adjacency_kernel(&Tournament::cyclic(3).unwrap()).unwrap();
        assert!(c3.value(0, 1).is_one());
        assert!(c3.value(1, 0).is_zero());
        assert!(c3.value(2, 0).is_one());
        assert_eq!(c3.value(1, 1), &rat(1, 2));
    }

    #[test]
    fn staircase_examples() {
        assert_eq!(staircase(1).unwrap(), quasirandom());
        let s2 = staircase(2).unwrap();
        assert_eq!(s2.value(0, 1), &rat_int(1));
        assert_eq!(s2.value(1, 0), &rat_int(0));
        assert!(staircase(0).is_err());
    }

    #[test]
    fn segment_kernel_merges_adjacent_transitive() {
        let w = SegmentKernel::new(vec![
            Segment::Transitive { weight: rat(1, 2) },
            Segment::Transitive { weight: rat(1, 2) },
        ])
        .unwrap();
        assert_eq!(w, SegmentKernel::transitive());

        let w = SegmentKernel::new(vec![
            Segment::Atom {
                weight: rat(1, 4),
                kernel: quasirandom(),
            },
            Segment::Transitive { weight: rat(1, 4) },
            Segment::Transitive { weight: rat(1, 4) },
            Segment::Atom {
                weight: rat(1, 4),
                kernel: quasirandom(),
            },
        ])
        .unwrap();
        assert_eq!(w.segment_count(), 3);
        assert_eq!(w.atom_mass(), rat(1, 2));
    }

    #[test]
    fn segment_kernel_validation() {
        assert_eq!(SegmentKernel::new(vec![]), Err(Error::Empty));
        let err = SegmentKernel::new(vec![Segment::Transitive { weight: rat(1, 2) }]);
        assert_eq!(err, Err(Error::WeightsNotNormalized("1/2".into())));
        let err = SegmentKernel::new(vec![
            Segment::Transitive { weight: rat(3, 2) },
            Segment::Transitive { weight: rat(-1, 2) },
        ]);
        assert!(matches!(err, Err(Error::NonPositiveWeight(_))));
    }

    #[test]
    fn eta_examples() {
        let w = SegmentKernel::new(vec![
            Segment::Atom {
                weight: rat(1, 4),
                kernel: quasirandom(),
            },
            Segment::Transitive { weight: rat(1, 2) },
            Segment::Atom {
                weight: rat(1, 4),
                kernel: quasirandom(),
            },
        ])
        .unwrap();
        let intervals = eta(&w);
        let starts: Vec<Rational> = intervals.iter().map(|e| e.start.clone()).collect();
        assert_eq!(starts, vec![rat_int(0), rat(1, 4), rat(3, 4)]);
        let total: Rational = intervals.iter().map(|e| e.width.clone()).sum();
        assert!(total.is_one());

        assert_eq!(
            eta(&SegmentKernel::transitive()),
            vec![EtaInterval {
                segment: 0,
                start: rat_int(0),
                width: rat_int(1)
            }]
        );

        let four = SegmentKernel::from_step(staircase(4).unwrap());
        // a single atom occupies all of [0,1); per-block starts come from
        // discretize + from_step round trips in kdecomp tests
        assert_eq!(eta(&four).len(), 1);
    }

    #[test]
    fn cantor_truncation_examples() {
        let u = quasirandom();
        assert_eq!(cantor_truncation(0, &u), SegmentKernel::transitive());

        let d1 = cantor_truncation(1, &u);
        let expected = SegmentKernel::new(vec![
            Segment::Transitive { weight: rat(3, 8) },
            Segment::Atom {
                weight: rat(1, 4),
                kernel: u.clone(),
            },
            Segment::Transitive { weight: rat(3, 8) },
        ])
        .unwrap();
        assert_eq!(d1, expected);

        let d2 = cantor_truncation(2, &u);
        assert_eq!(d2.segment_count(), 7);
        let weights: Vec<Rational> = d2.segments().iter().map(|s| s.weight().clone()).collect();
        assert_eq!(
            weights,
            vec![
                rat(5, 32),
                rat(1, 16),
                rat(5, 32),
                rat(1, 4),
                rat(5, 32),
                rat(1, 16),
                rat(5, 32)
            ]
        );

        for d in 0..=10 {
            let w = cantor_truncation(d, &u);
            let expected = rat(1, 2) - rat(1, 1i64 << (d + 1));
            assert_eq!(w.atom_mass(), expected);
        }
    }

    #[test]
    fn discretize_examples() {
        for n in [1, 2, 5] {
            assert_eq!(
                SegmentKernel::transitive().discretize(n).unwrap(),
                staircase(n).unwrap()
            );
        }
        let all_atom = SegmentKernel::new(vec![
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
        let flat = all_atom.flatten().unwrap();
        assert_eq!(flat, all_atom.discretize(7).unwrap());
        assert_eq!(flat, staircase(2).unwrap());
        assert!(SegmentKernel::transitive().flatten().is_err());
    }

    #[test]
    fn json_round_trip() {
        let w = SegmentKernel::new(vec![
            Segment::Atom {
                weight: rat(1, 4),
                kernel: step_kernel(
                    vec![rat(1, 2), rat(1, 2)],
                    vec![
                        vec![rat(1, 2), rat(3, 4)],
                        vec![rat(1, 4), rat(1, 2)],
                    ],
                )
                .unwrap(),
            },
            Segment::Transitive { weight: rat(3, 4) },
        ])
        .unwrap();
        let text = kernel_to_json_string(&w);
        assert_eq!(kernel_from_json_str(&text).unwrap(), w);
    }

    #[test]
    fn json_accepts_decimals_exactly() {
        let text = r#"{"segments":[
            {"type":"atom","weight":0.25,"blocks":["1"],"matrix":[["0.5"]]},
            {"type":"transitive","weight":"0.75"}
        ]}"#;
        let w = kernel_from_json_str(text).unwrap();
        assert_eq!(w.segments()[0].weight(), &rat(1, 4));
        assert_eq!(w.segments()[1].weight(), &rat(3, 4));
    }

    #[test]
    fn json_names_violated_invariant() {
        let text = r#"{"segments":[
            {"type":"atom","weight":"1","blocks":["1/2","1/2"],
             "matrix":[["1/2","3/4"],["3/4","1/2"]]}
        ]}"#;
        let err = kernel_from_json_str(text).unwrap_err();
        assert!(err.to_string().starts_with("NotComplementary"));
    }
}
