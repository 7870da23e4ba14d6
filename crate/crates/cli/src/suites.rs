//! Theorem suites run by `polycenter verify`.

use std::ops::RangeInclusive;

use clap::ValueEnum;
use polycenter::center::{builtins_for, coordinate_map};
use polycenter::corpus;
use polycenter::lines::is_central_line_counterexample_rectangle;
use polycenter::symmetry::{classify_trigon, verify_fixed_set_containment};
use polycenter::tangential::{parallelogram_membership, verify_am_collinearity};
use polycenter::Polygon;
use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    FixedSetContainment,
    TrigonClassification,
    Parallelogram,
    AmCollinearity,
    RectangleCounterexample,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::FixedSetContainment => "fixed-set-containment",
            Suite::TrigonClassification => "trigon-classification",
            Suite::Parallelogram => "parallelogram",
            Suite::AmCollinearity => "am-collinearity",
            Suite::RectangleCounterexample => "rectangle-counterexample",
        }
    }

    /// Seeded corpus for the suite. `sizes` only matters where the family
    /// has a free vertex count.
    pub fn corpus(self, seed: u64, count: usize, sizes: RangeInclusive<usize>) -> Vec<Polygon> {
        let mut rng = corpus::rng(seed);
        (0..count)
            .map(|i| match self {
                Suite::FixedSetContainment => corpus::symmetry_corpus(&mut rng, 1).remove(0),
                Suite::TrigonClassification => match i % 4 {
                    0 => corpus::random_isosceles(&mut rng),
                    1 => corpus::random_equilateral(&mut rng),
                    _ => corpus::random_triangle(&mut rng),
                },
                Suite::Parallelogram => {
                    if i % 2 == 0 {
                        corpus::random_parallelogram(&mut rng)
                    } else {
                        corpus::random_non_parallelogram(&mut rng)
                    }
                }
                Suite::AmCollinearity => {
                    let n = rng.gen_range(sizes.clone());
                    corpus::random_tangential(&mut rng, n)
                }
                Suite::RectangleCounterexample => corpus::random_rectangle(&mut rng),
            })
            .collect()
    }

    /// `Ok(())` when the theorem holds on `p`, otherwise the reason.
    pub fn check(self, p: &Polygon) -> Result<(), String> {
        match self {
            Suite::FixedSetContainment => {
                let evals: Vec<_> = builtins_for(p.n()).iter().filter_map(|g| coordinate_map(g, p).ok()).collect();
                let r = verify_fixed_set_containment(p, &evals).map_err(|e| e.to_string())?;
                ok_if(r.passed(), "a center lies outside the fixed set")
            }
            Suite::TrigonClassification => {
                let r = classify_trigon(p).map_err(|e| e.to_string())?;
                ok_if(r.agree(), "side and center classifications disagree")
            }
            Suite::Parallelogram => {
                let r = parallelogram_membership(p).map_err(|e| e.to_string())?;
                ok_if(r.passed(), "membership and side condition disagree")
            }
            Suite::AmCollinearity => {
                let r = verify_am_collinearity(p).map_err(|e| e.to_string())?;
                ok_if(r.passed(), "the three centers are not collinear")
            }
            Suite::RectangleCounterexample => {
                let r = is_central_line_counterexample_rectangle(p).map_err(|e| e.to_string())?;
                ok_if(r.passed(), "median is not central or centers differ")
            }
        }
    }
}

fn ok_if(cond: bool, why: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(why.to_string())
    }
}

/// `"4"`, `"3..8"` or `"3..=8"`, both ends inclusive.
pub fn parse_sizes(text: &str) -> Result<RangeInclusive<usize>, String> {
    let bad = || format!("expected N or A..B, got `{text}`");
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (a.trim(), b.trim().trim_start_matches('=')),
        None => (text.trim(), text.trim()),
    };
    let lo: usize = lo.parse().map_err(|_| bad())?;
    let hi: usize = hi.parse().map_err(|_| bad())?;
    if lo < 3 || hi < lo {
        return Err(format!("vertex counts must satisfy 3 <= A <= B, got `{text}`"));
    }
    Ok(lo..=hi)
}
