//! Krippendorff's unitizing alpha for span boundaries on a 1-D continuum.
//!
//! Every annotator partitions each continuum into category units and gaps.
//! Overlapping segment pairs of two annotators contribute
//!
//! * unit/unit: squared begin difference plus squared end difference,
//! * unit fully inside the other annotator's gap: squared unit length,
//! * anything else: nothing.
//!
//! Expected disagreement is the mean of the same statistic after each
//! annotator's units are re-placed uniformly at random without overlap.

use std::collections::BTreeMap;

use rand::seq::{index, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::Span;
use crate::error::{Error, Result};

/// One continuum (a document on the token scale) with each annotator's units
/// for the category under study. Annotators with no units are listed with an
/// empty vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Continuum {
    pub extent: Span,
    pub units: BTreeMap<String, Vec<Span>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub rounds: usize,
    pub seed: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig { rounds: 1000, seed: 42 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitizedAlpha {
    pub alpha: f64,
    pub observed: f64,
    pub expected: f64,
}

pub fn unitized_alpha(continua: &[Continuum], config: SamplerConfig) -> Result<f64> {
    unitized_alpha_detail(continua, config).map(|r| r.alpha)
}

pub fn unitized_alpha_detail(continua: &[Continuum], config: SamplerConfig) -> Result<UnitizedAlpha> {
    if config.rounds == 0 {
        return Err(Error::InvalidInput("sampler needs at least one round".into()));
    }
    // relative coordinates: [0, len) per continuum
    let docs: Vec<(usize, Vec<Vec<Span>>)> = continua
        .iter()
        .map(|c| {
            let len = c.extent.len();
            let units = c
                .units
                .values()
                .map(|spans| normalize_units(spans, c.extent))
                .collect::<Result<Vec<_>>>()?;
            Ok((len, units))
        })
        .collect::<Result<_>>()?;

    let normalizer: f64 = docs
        .iter()
        .map(|(len, units)| {
            let m = units.len();
            (m * m.saturating_sub(1) * len) as f64
        })
        .sum();
    if normalizer == 0.0 {
        return Err(Error::Undefined("unitized alpha needs two annotators on a non-empty continuum".into()));
    }
    if docs.iter().all(|(_, units)| units.iter().all(Vec::is_empty)) {
        return Err(Error::Undefined("category absent".into()));
    }

    let observed = docs.iter().map(|(len, units)| disagreement(*len, units)).sum::<f64>() / normalizer;

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut total = 0.0;
    for _ in 0..config.rounds {
        let mut round = 0.0;
        for (len, units) in &docs {
            let placed: Vec<Vec<Span>> = units.iter().map(|u| random_placement(*len, u, &mut rng)).collect();
            round += disagreement(*len, &placed);
        }
        total += round / normalizer;
    }
    let expected = total / config.rounds as f64;

    let alpha = if expected == 0.0 {
        if observed == 0.0 {
            1.0
        } else {
            return Err(Error::Undefined("expected disagreement is 0".into()));
        }
    } else {
        1.0 - observed / expected
    };
    Ok(UnitizedAlpha { alpha, observed, expected })
}

fn normalize_units(spans: &[Span], extent: Span) -> Result<Vec<Span>> {
    let mut units: Vec<Span> = spans.to_vec();
    units.sort();
    for u in &units {
        if u.is_empty() || u.start < extent.start || u.end > extent.end {
            return Err(Error::InvalidInput(format!(
                "unit [{}, {}) outside continuum [{}, {})",
                u.start, u.end, extent.start, extent.end
            )));
        }
    }
    if units.windows(2).any(|w| w[0].overlaps(&w[1])) {
        return Err(Error::InvalidInput("overlapping units of one annotator".into()));
    }
    Ok(units.iter().map(|u| Span::new(u.start - extent.start, u.end - extent.start)).collect())
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    span: Span,
    unit: bool,
}

fn segments(len: usize, units: &[Span]) -> Vec<Segment> {
    let mut out = Vec::with_capacity(2 * units.len() + 1);
    let mut pos = 0;
    for &u in units {
        if u.start > pos {
            out.push(Segment { span: Span::new(pos, u.start), unit: false });
        }
        out.push(Segment { span: u, unit: true });
        pos = u.end;
    }
    if pos < len {
        out.push(Segment { span: Span::new(pos, len), unit: false });
    }
    out
}

fn sq(x: usize, y: usize) -> f64 {
    let d = x.abs_diff(y) as f64;
    d * d
}

fn segment_delta(a: Segment, b: Segment) -> f64 {
    match (a.unit, b.unit) {
        (true, true) => sq(a.span.start, b.span.start) + sq(a.span.end, b.span.end),
        (true, false) if b.span.start <= a.span.start && a.span.end <= b.span.end => sq(a.span.len(), 0),
        (false, true) if a.span.start <= b.span.start && b.span.end <= a.span.end => sq(b.span.len(), 0),
        _ => 0.0,
    }
}

fn pair_disagreement(a: &[Segment], b: &[Segment]) -> f64 {
    let (mut i, mut j) = (0, 0);
    let mut sum = 0.0;
    while i < a.len() && j < b.len() {
        if a[i].span.overlaps(&b[j].span) {
            sum += segment_delta(a[i], b[j]);
        }
        if a[i].span.end <= b[j].span.end {
            i += 1;
        } else {
            j += 1;
        }
    }
    sum
}

/// Sum of segment disagreements over all ordered annotator pairs.
fn disagreement(len: usize, units: &[Vec<Span>]) -> f64 {
    let segs: Vec<Vec<Segment>> = units.iter().map(|u| segments(len, u)).collect();
    let mut sum = 0.0;
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            sum += 2.0 * pair_disagreement(&segs[i], &segs[j]);
        }
    }
    sum
}

/// Places units of the same lengths at uniformly random non-overlapping
/// positions: random order, then a uniformly random composition of the free
/// space into `k + 1` gaps.
fn random_placement(len: usize, units: &[Span], rng: &mut ChaCha8Rng) -> Vec<Span> {
    let k = units.len();
    if k == 0 {
        return Vec::new();
    }
    let mut lengths: Vec<usize> = units.iter().map(Span::len).collect();
    lengths.shuffle(rng);
    let free = len - lengths.iter().sum::<usize>();
    let mut cuts = index::sample(rng, free + k, k).into_vec();
    cuts.sort_unstable();

    let mut placed = Vec::with_capacity(k);
    let mut pos = 0;
    let mut prev: Option<usize> = None;
    for (l, cut) in lengths.into_iter().zip(cuts) {
        let gap = match prev {
            None => cut,
            Some(p) => cut - p - 1,
        };
        prev = Some(cut);
        pos += gap;
        placed.push(Span::new(pos, pos + l));
        pos += l;
    }
    placed
}

#[cfg(test)]
mod tests {
    use super::*;

    fn continuum(len: usize, units: &[(&str, &[(usize, usize)])]) -> Continuum {
        Continuum {
            extent: Span::new(0, len),
            units: units
                .iter()
                .map(|(a, spans)| (a.to_string(), spans.iter().map(|&(s, e)| Span::new(s, e)).collect()))
                .collect(),
        }
    }

    #[test]
    fn identical_spans_give_one() {
        let c = continuum(50, &[("a", &[(3, 9), (20, 30)]), ("b", &[(3, 9), (20, 30)]), ("c", &[(3, 9), (20, 30)])]);
        assert_eq!(unitized_alpha(&[c], SamplerConfig::default()).unwrap(), 1.0);
    }

    #[test]
    fn one_sided_unit() {
        let c = continuum(100, &[("a", &[(0, 10)]), ("b", &[])]);
        let r = unitized_alpha_detail(&[c], SamplerConfig { rounds: 200, seed: 1 }).unwrap();
        // 2 ordered pairs x 10^2 over 2 * 1 * 100
        assert_eq!(r.observed, 1.0);
        assert!(r.alpha < 0.5);
    }

    #[test]
    fn unit_unit_delta() {
        // [0,10) vs [2,10): (0-2)^2 + 0 = 4 per direction; the gap [0,2) of b
        // only partially overlaps nothing else.
        let c = continuum(10, &[("a", &[(0, 10)]), ("b", &[(2, 10)])]);
        let r = unitized_alpha_detail(&[c], SamplerConfig { rounds: 10, seed: 1 }).unwrap();
        assert_eq!(r.observed, 8.0 / 20.0);
    }

    #[test]
    fn errors() {
        let c = continuum(10, &[("a", &[]), ("b", &[])]);
        assert!(unitized_alpha(&[c], SamplerConfig::default()).unwrap_err().to_string().contains("category absent"));
        let c = continuum(10, &[("a", &[(0, 3)])]);
        assert!(unitized_alpha(&[c], SamplerConfig::default()).is_err());
        let c = continuum(10, &[("a", &[(0, 11)]), ("b", &[])]);
        assert!(unitized_alpha(&[c], SamplerConfig::default()).is_err());
        let c = continuum(10, &[("a", &[(0, 5), (4, 6)]), ("b", &[])]);
        assert!(unitized_alpha(&[c], SamplerConfig::default()).is_err());
    }

    #[test]
    fn placement_is_non_overlapping_and_in_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let units = [Span::new(0, 4), Span::new(10, 11), Span::new(12, 20)];
        for _ in 0..500 {
            let mut placed = random_placement(25, &units, &mut rng);
            placed.sort();
            assert!(placed.windows(2).all(|w| w[0].end <= w[1].start));
            assert!(placed.last().unwrap().end <= 25);
            let mut lens: Vec<_> = placed.iter().map(Span::len).collect();
            lens.sort();
            assert_eq!(lens, [1, 4, 8]);
        }
    }

    #[test]
    fn placement_covers_all_offsets_uniformly() {
        // one unit of length 1 on a continuum of 4: each start equally likely
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut hits = [0usize; 4];
        for _ in 0..8000 {
            hits[random_placement(4, &[Span::new(0, 1)], &mut rng)[0].start] += 1;
        }
        assert!(hits.iter().all(|&h| (1800..2200).contains(&h)), "{hits:?}");
    }

    #[test]
    fn translation_invariant() {
        let base = continuum(40, &[("a", &[(2, 8), (15, 22)]), ("b", &[(3, 9)]), ("c", &[(14, 25)])]);
        let mut moved = base.clone();
        moved.extent = base.extent.shifted(17);
        for spans in moved.units.values_mut() {
            for s in spans.iter_mut() {
                *s = s.shifted(17);
            }
        }
        let cfg = SamplerConfig { rounds: 300, seed: 9 };
        assert_eq!(unitized_alpha(&[base], cfg).unwrap(), unitized_alpha(&[moved], cfg).unwrap());
    }
}
