//! Tie detection and seeded tie-breaking.
//!
//! The rank-based statistics are only valid for continuous data; observed
//! ties (typically from rounding) must either abort the test or be removed
//! by a small random perturbation. Perturbations stay below half the
//! smallest gap between distinct values, so the strict order of originally
//! untied values is preserved.

use crate::data::{PairedSample, Sample};
use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Tie policy used by the rank-based tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// Ties abort the test with [`Error::Ties`].
    #[default]
    None,
    /// Ties are removed by a seeded uniform perturbation.
    Random,
}

/// True iff any value repeats within `a` pooled with `b`.
pub fn has_ties(a: &Sample, b: Option<&Sample>) -> bool {
    find_tie(a, b).is_some()
}

/// First repeating value within `a` pooled with `b`, if any.
pub fn find_tie(a: &Sample, b: Option<&Sample>) -> Option<f64> {
    let mut pooled: Vec<f64> = a.values().to_vec();
    if let Some(b) = b {
        pooled.extend_from_slice(b.values());
    }
    first_duplicate(&pooled)
}

pub(crate) fn first_duplicate(values: &[f64]) -> Option<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.windows(2).find(|w| w[0] == w[1]).map(|w| w[0])
}

/// Smallest positive gap between distinct sorted values, if any.
fn min_positive_gap(sorted: &[f64]) -> Option<f64> {
    let mut gap = f64::INFINITY;
    for w in sorted.windows(2) {
        let d = w[1] - w[0];
        if d > 0.0 && d < gap {
            gap = d;
        }
    }
    if gap.is_finite() {
        Some(gap)
    } else {
        None
    }
}

/// Replace tied values by perturbed ones so that all output values are
/// distinct. Untied values are returned unchanged and keep their strict
/// order relative to everything else. Deterministic given the stream.
///
/// When every value is identical the perturbation scale falls back to 1
/// and a warning note is emitted.
pub fn tiebreak(s: &Sample, rng: &mut RngStream) -> (Sample, Vec<String>) {
    let (values, notes) = tiebreak_values(s.values(), rng);
    (
        Sample::new(values).expect("perturbed values remain finite"),
        notes,
    )
}

pub(crate) fn tiebreak_values(values: &[f64], rng: &mut RngStream) -> (Vec<f64>, Vec<String>) {
    let mut notes = Vec::new();
    if first_duplicate(values).is_none() {
        return (values.to_vec(), notes);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let gap = match min_positive_gap(&sorted) {
        Some(g) => g,
        None => {
            notes.push("all values identical; tie-break perturbation scale defaults to 1".into());
            1.0
        }
    };
    // Only members of tie groups move; |delta| < gap/2 keeps the original
    // strict order intact.
    let tied: Vec<bool> = values
        .iter()
        .map(|&v| values.iter().filter(|&&w| w == v).count() > 1)
        .collect();
    for _ in 0..64 {
        let mut out = values.to_vec();
        for (i, v) in out.iter_mut().enumerate() {
            if tied[i] {
                *v += (rng.next_f64() - 0.5) * gap;
            }
        }
        if first_duplicate(&out).is_none() {
            notes.push("ties broken by random perturbation".into());
            return (out, notes);
        }
    }
    // Unreachable with continuous draws; deterministic ramp as a last resort.
    let mut out = values.to_vec();
    for (i, v) in out.iter_mut().enumerate() {
        if tied[i] {
            *v += (i + 1) as f64 * gap / (2.0 * (values.len() + 1) as f64);
        }
    }
    notes.push("ties broken by deterministic perturbation".into());
    (out, notes)
}

/// Break ties within each margin of a paired sample independently.
/// Errors under `TieBreak::None` if either margin contains ties.
pub(crate) fn detie_margins(
    d: &PairedSample,
    policy: TieBreak,
    rng: &mut RngStream,
) -> Result<(PairedSample, Vec<String>)> {
    let tie_x = find_tie(d.x(), None);
    let tie_y = find_tie(d.y(), None);
    match policy {
        TieBreak::None => {
            if let Some(v) = tie_x {
                return Err(Error::Ties {
                    place: "x".into(),
                    value: v,
                });
            }
            if let Some(v) = tie_y {
                return Err(Error::Ties {
                    place: "y".into(),
                    value: v,
                });
            }
            Ok((d.clone(), Vec::new()))
        }
        TieBreak::Random => {
            let mut notes = Vec::new();
            let mut x = d.x().clone();
            let mut y = d.y().clone();
            if tie_x.is_some() {
                let mut sub = rng.substream(1);
                let (nx, mut ns) = tiebreak(&x, &mut sub);
                x = nx;
                notes.append(&mut ns);
                if notes.last().is_some() {
                    let last = notes.pop().unwrap();
                    notes.push(format!("x: {last}"));
                }
            }
            if tie_y.is_some() {
                let mut sub = rng.substream(2);
                let (ny, mut ns) = tiebreak(&y, &mut sub);
                y = ny;
                notes.append(&mut ns);
                if notes.last().is_some() {
                    let last = notes.pop().unwrap();
                    notes.push(format!("y: {last}"));
                }
            }
            Ok((PairedSample::new(x, y)?, notes))
        }
    }
}

/// Break ties across the pooled values of two independent samples.
pub(crate) fn detie_pooled(
    x: &Sample,
    y: &Sample,
    policy: TieBreak,
    rng: &mut RngStream,
) -> Result<(Sample, Sample, Vec<String>)> {
    match find_tie(x, Some(y)) {
        None => Ok((x.clone(), y.clone(), Vec::new())),
        Some(v) => match policy {
            TieBreak::None => Err(Error::Ties {
                place: "pooled samples".into(),
                value: v,
            }),
            TieBreak::Random => {
                let n1 = x.len();
                let mut pooled: Vec<f64> = x.values().to_vec();
                pooled.extend_from_slice(y.values());
                let (out, notes) = tiebreak_values(&pooled, rng);
                Ok((
                    Sample::new(out[..n1].to_vec())?,
                    Sample::new(out[n1..].to_vec())?,
                    notes,
                ))
            }
        },
    }
}

/// Zero differences and tied absolute differences are the fatal ties for
/// the signed-rank statistics. Perturbation scale is bounded by the
/// smallest gap of {0} union {|d_i|}, so nonzero signs never flip.
pub(crate) fn detie_diffs(
    d: &Sample,
    policy: TieBreak,
    rng: &mut RngStream,
) -> Result<(Sample, Vec<String>)> {
    let offending = |values: &[f64]| -> Option<f64> {
        if values.contains(&0.0) {
            return Some(0.0);
        }
        let abs: Vec<f64> = values.iter().map(|v| v.abs()).collect();
        first_duplicate(&abs)
    };
    let bad = offending(d.values());
    match (bad, policy) {
        (None, _) => Ok((d.clone(), Vec::new())),
        (Some(v), TieBreak::None) => Err(Error::Ties {
            place: if v == 0.0 {
                "differences (zero difference)".into()
            } else {
                "absolute differences".into()
            },
            value: v,
        }),
        (Some(_), TieBreak::Random) => {
            let mut notes = Vec::new();
            let mut anchored: Vec<f64> = d.values().iter().map(|v| v.abs()).collect();
            anchored.push(0.0);
            anchored.sort_by(f64::total_cmp);
            let gap = match min_positive_gap(&anchored) {
                Some(g) => g,
                None => {
                    notes.push(
                        "all differences are zero; tie-break perturbation scale defaults to 1"
                            .into(),
                    );
                    1.0
                }
            };
            let needs_move: Vec<bool> = d
                .values()
                .iter()
                .map(|&v| {
                    v == 0.0
                        || d.values()
                            .iter()
                            .filter(|&&w| w.abs() == v.abs())
                            .count()
                            > 1
                })
                .collect();
            for _ in 0..64 {
                let mut out = d.values().to_vec();
                for (i, v) in out.iter_mut().enumerate() {
                    if needs_move[i] {
                        *v += (rng.next_f64() - 0.5) * gap;
                    }
                }
                if offending(&out).is_none() {
                    notes.push("ties in differences broken by random perturbation".into());
                    return Ok((Sample::new(out)?, notes));
                }
            }
            Err(Error::Degenerate(
                "could not break ties in differences".into(),
            ))
        }
    }
}
