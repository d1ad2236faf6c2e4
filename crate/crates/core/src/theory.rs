//! Closed-form hitting-time and resistance predictions, comparison bounds,
//! and the concentration diagnostics built on exact solves.

use crate::error::{Error, Result};
use crate::graph::{decompose, generate_er, ErGraph};
use crate::markov::{exact_hitting, HittingVector};
use rayon::prelude::*;
use serde::Serialize;

/// The two-cluster hitting-time prediction for one target vertex: every
/// start vertex lands at `base + offset`, with the offset selected by
/// adjacency to the target, up to the stated envelope.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Prediction {
    /// 2|E| / deg(v).
    pub base: f64,
    /// Offset for start vertices adjacent to the target.
    pub offset_adjacent: f64,
    /// Offset for non-adjacent start vertices; exceeds `offset_adjacent`
    /// by exactly 1/p.
    pub offset_nonadjacent: f64,
    /// C * (log n)^{3/2} / sqrt(n), the expected deviation scale.
    pub envelope: f64,
}

impl Prediction {
    pub fn value(&self, adjacent: bool) -> f64 {
        if adjacent {
            self.base + self.offset_adjacent
        } else {
            self.base + self.offset_nonadjacent
        }
    }
}

/// Deviation scale (log n)^{3/2} / sqrt(n) with constant `c`. Natural log.
pub fn envelope(n: usize, c: f64) -> f64 {
    let ln = (n as f64).ln();
    c * ln.powf(1.5) / (n as f64).sqrt()
}

/// Edge density 2|E| / (n(n-1)), the empirical stand-in for the nominal p.
pub fn empirical_edge_probability(g: &ErGraph) -> f64 {
    let n = g.n() as f64;
    2.0 * g.edge_count() as f64 / (n * (n - 1.0))
}

/// Builds the prediction for target `v`, using probability `p` for the
/// non-adjacent offset and `c` for the envelope constant.
pub fn prediction_with(g: &ErGraph, v: usize, p: f64, c: f64) -> Result<Prediction> {
    if v >= g.n() {
        return Err(Error::InvalidParameter(format!(
            "vertex {v} out of range for n = {}",
            g.n()
        )));
    }
    if g.degree(v) == 0 {
        return Err(Error::InvalidParameter(format!("vertex {v} is isolated")));
    }
    Ok(Prediction {
        base: 2.0 * g.edge_count() as f64 / g.degree(v) as f64,
        offset_adjacent: -1.0,
        offset_nonadjacent: -1.0 + 1.0 / p,
        envelope: envelope(g.n(), c),
    })
}

/// Prediction for target `v` with the nominal generation p and unit
/// envelope constant.
pub fn prediction(g: &ErGraph, v: usize) -> Result<Prediction> {
    prediction_with(g, v, g.p(), 1.0)
}

/// Predicted H_wv: 2|E|/deg(v) - 1, plus 1/p if w is not adjacent to v.
pub fn predict_hitting(g: &ErGraph, v: usize, w: usize) -> Result<f64> {
    predict_hitting_with_p(g, v, w, g.p())
}

/// Same as [`predict_hitting`] with an explicit probability, e.g. the
/// empirical edge density from [`empirical_edge_probability`].
pub fn predict_hitting_with_p(g: &ErGraph, v: usize, w: usize, p: f64) -> Result<f64> {
    if v == w {
        return Err(Error::InvalidParameter(format!(
            "prediction needs two distinct vertices, got {v}"
        )));
    }
    if w >= g.n() {
        return Err(Error::InvalidParameter(format!(
            "vertex {w} out of range for n = {}",
            g.n()
        )));
    }
    let pred = prediction_with(g, v, p, 1.0)?;
    Ok(pred.value(g.has_edge(w, v)))
}

/// Predicted effective resistance between v and w:
/// 1/deg(v) + 1/deg(w) + (2/(n^2 p)) * (-1, or -1 + 1/p when non-adjacent).
pub fn predict_resistance(g: &ErGraph, v: usize, w: usize) -> Result<f64> {
    if v == w {
        return Err(Error::InvalidParameter(format!(
            "resistance needs two distinct vertices, got {v}"
        )));
    }
    if v >= g.n() || w >= g.n() {
        return Err(Error::InvalidParameter("vertex out of range".into()));
    }
    if g.degree(v) == 0 || g.degree(w) == 0 {
        return Err(Error::InvalidParameter("isolated endpoint".into()));
    }
    let p = g.p();
    let n = g.n() as f64;
    let offset = if g.has_edge(v, w) { -1.0 } else { -1.0 + 1.0 / p };
    Ok(1.0 / g.degree(v) as f64 + 1.0 / g.degree(w) as f64 + 2.0 / (n * n * p) * offset)
}

/// Two-sided commute-time bounds in terms of degrees and the spectral gap
/// of the transition operator.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LovaszBounds {
    pub lower: f64,
    pub upper: f64,
}

/// lower = |E| (1/deg v + 1/deg w); upper = lower * 2/(1 - lambda2).
pub fn lovasz_bounds(g: &ErGraph, v: usize, w: usize, lambda2: f64) -> Result<LovaszBounds> {
    if v == w || v >= g.n() || w >= g.n() {
        return Err(Error::InvalidParameter("need two distinct valid vertices".into()));
    }
    if lambda2 >= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "second transition eigenvalue must be below 1, got {lambda2}"
        )));
    }
    let inv_degrees = 1.0 / g.degree(v) as f64 + 1.0 / g.degree(w) as f64;
    let e = g.edge_count() as f64;
    Ok(LovaszBounds {
        lower: e * inv_degrees,
        upper: 2.0 * e / (1.0 - lambda2) * inv_degrees,
    })
}

/// Probability of reaching the target within two steps, split into the
/// through-a-neighbor term and, when the start is itself adjacent, the
/// direct one-step term.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TwoStepHitProb {
    /// (1/deg w) * sum over common neighbors z of w and v of 1/deg(z).
    pub exact: f64,
    /// The dense-regime approximation |A| / (n^2 p).
    pub approx: f64,
    /// 1/deg(w) when w is adjacent to v, reported separately.
    pub direct: Option<f64>,
}

pub fn two_step_hit_prob(g: &ErGraph, v: usize, w: usize) -> Result<TwoStepHitProb> {
    if v == w || v >= g.n() || w >= g.n() {
        return Err(Error::InvalidParameter("need two distinct valid vertices".into()));
    }
    if g.degree(w) == 0 || g.degree(v) == 0 {
        return Err(Error::InvalidParameter("isolated endpoint".into()));
    }
    let adjacent = g.has_edge(w, v);
    // common neighbors of w and v = neighbors of w inside A
    let mut through_a = 0.0;
    let mut any_common = false;
    let row_w = g.adjacency_row(w);
    let row_v = g.adjacency_row(v);
    for (word_idx, (a, b)) in row_w.iter().zip(row_v).enumerate() {
        let mut common = a & b;
        while common != 0 {
            let z = word_idx * 64 + common.trailing_zeros() as usize;
            common &= common - 1;
            through_a += 1.0 / g.degree(z) as f64;
            any_common = true;
        }
    }
    if !adjacent && !any_common {
        return Err(Error::InvalidParameter(format!(
            "vertex {w} is farther than distance 2 from {v}"
        )));
    }
    let n = g.n() as f64;
    Ok(TwoStepHitProb {
        exact: through_a / g.degree(w) as f64,
        approx: g.degree(v) as f64 / (n * n * g.p()),
        direct: adjacent.then(|| 1.0 / g.degree(w) as f64),
    })
}

/// Worst-case deviation of all hitting times from n, raw and scaled by
/// sqrt(n log n).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CheapBound {
    pub max_dev: f64,
    pub normalized: f64,
}

/// Scans per-target hitting vectors for the largest |H_wv - n|. Expects one
/// vector per target.
pub fn cheap_bound_check(g: &ErGraph, all_hitting: &[HittingVector]) -> Result<CheapBound> {
    if all_hitting.len() != g.n() {
        return Err(Error::InvalidParameter(format!(
            "expected {} hitting vectors, got {}",
            g.n(),
            all_hitting.len()
        )));
    }
    let n = g.n() as f64;
    let mut max_dev = 0.0f64;
    for hv in all_hitting {
        for (w, &h) in hv.values().iter().enumerate() {
            if w != hv.target() {
                max_dev = max_dev.max((h - n).abs());
            }
        }
    }
    Ok(CheapBound {
        max_dev,
        normalized: max_dev / (n * n.ln()).sqrt(),
    })
}

/// Spread of hitting times inside the distance-1 and distance-2 sets, and
/// the gap between the two cluster means against its predicted value 1/p.
#[derive(Debug, Clone, Serialize)]
pub struct ConcentrationReport {
    pub target: usize,
    pub spread_a: f64,
    pub spread_b: f64,
    /// mean over B minus mean over A; absent when B is empty.
    pub gap: Option<f64>,
    /// |gap - 1/p|; absent when B is empty.
    pub gap_defect: Option<f64>,
    /// Complete-graph edge case: no vertex sits at distance 2.
    pub b_empty: bool,
}

fn spread(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    max - min
}

/// Exact spreads and cluster gap for one target. Refuses when any vertex
/// is farther than distance 2, since the A/B dichotomy no longer covers
/// the graph.
pub fn concentration_report(
    g: &ErGraph,
    v: usize,
    hv: &HittingVector,
    p_nominal: f64,
) -> Result<ConcentrationReport> {
    if hv.target() != v {
        return Err(Error::InvalidParameter(format!(
            "hitting vector targets {}, expected {v}",
            hv.target()
        )));
    }
    let decomposition = decompose(g, v)?;
    if let Some(&vertex) = decomposition.beyond.first() {
        return Err(Error::DiameterExceedsTwo { target: v, vertex });
    }
    let a_values: Vec<f64> = decomposition.set_a.iter().map(|&w| hv.value(w)).collect();
    let b_values: Vec<f64> = decomposition.set_b.iter().map(|&w| hv.value(w)).collect();
    let b_empty = b_values.is_empty();
    let (gap, gap_defect) = if b_empty {
        (None, None)
    } else {
        let mean_a = a_values.iter().sum::<f64>() / a_values.len() as f64;
        let mean_b = b_values.iter().sum::<f64>() / b_values.len() as f64;
        let gap = mean_b - mean_a;
        (Some(gap), Some((gap - 1.0 / p_nominal).abs()))
    };
    Ok(ConcentrationReport {
        target: v,
        spread_a: spread(&a_values),
        spread_b: spread(&b_values),
        gap,
        gap_defect,
        b_empty,
    })
}

/// Reference ensemble for pinning the envelope constant.
#[derive(Debug, Clone, Serialize)]
pub struct CalibrationConfig {
    pub n: usize,
    pub ps: Vec<f64>,
    pub seeds_per_p: u64,
    pub base_seed: u64,
    pub quantile: f64,
}

impl Default for CalibrationConfig {
    fn default() -> Self {
        CalibrationConfig {
            n: 1000,
            ps: vec![0.2, 0.5, 0.8],
            seeds_per_p: 20,
            base_seed: 0x5eed,
            quantile: 0.99,
        }
    }
}

/// Envelope constant fitted on a reference ensemble: the chosen quantile of
/// max_w |H_wv - prediction| / ((log n)^{3/2}/sqrt(n)) over all realizations.
#[derive(Debug, Clone, Serialize)]
pub struct CalibratedEnvelope {
    pub constant: f64,
    pub samples: Vec<f64>,
    pub skipped_disconnected: usize,
    pub config: CalibrationConfig,
}

/// Max deviation of the exact hitting times from the two-cluster prediction
/// for target `v`, with the nominal p.
pub fn max_prediction_error(g: &ErGraph, v: usize, hv: &HittingVector) -> Result<f64> {
    let pred = prediction(g, v)?;
    let mut worst = 0.0f64;
    for (w, &h) in hv.values().iter().enumerate() {
        if w != v {
            worst = worst.max((h - pred.value(g.has_edge(w, v))).abs());
        }
    }
    Ok(worst)
}

/// Runs the reference ensemble and fits the envelope constant. Disconnected
/// realizations are skipped and counted. Deterministic for a fixed config.
pub fn calibrate_envelope(config: &CalibrationConfig) -> Result<CalibratedEnvelope> {
    let cells: Vec<(f64, u64)> = config
        .ps
        .iter()
        .flat_map(|&p| (0..config.seeds_per_p).map(move |i| (p, i)))
        .collect();
    let results: Vec<Option<f64>> = cells
        .par_iter()
        .map(|&(p, i)| -> Result<Option<f64>> {
            let seed = crate::rng::derive_seed(config.base_seed, &[p.to_bits(), i]);
            let g = generate_er(config.n, p, seed)?;
            if !g.is_connected() {
                return Ok(None);
            }
            let v = 0;
            let hv = exact_hitting(&g, v)?;
            let err = max_prediction_error(&g, v, &hv)?;
            Ok(Some(err / envelope(config.n, 1.0)))
        })
        .collect::<Result<_>>()?;
    let skipped_disconnected = results.iter().filter(|r| r.is_none()).count();
    let mut samples: Vec<f64> = results.into_iter().flatten().collect();
    if samples.is_empty() {
        return Err(Error::SolverFailure(
            "calibration ensemble produced no connected realizations".into(),
        ));
    }
    samples.sort_by(|a, b| a.total_cmp(b));
    let rank = ((config.quantile * samples.len() as f64).ceil() as usize).clamp(1, samples.len());
    let constant = samples[rank - 1];
    Ok(CalibratedEnvelope {
        constant,
        samples,
        skipped_disconnected,
        config: config.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markov::{commute_time, exact_hitting};
    use proptest::prelude::*;

    fn complete(n: usize) -> ErGraph {
        generate_er(n, 1.0, 0).unwrap()
    }

    #[test]
    fn complete_graph_prediction_matches_exact() {
        let g = complete(6);
        let hv = exact_hitting(&g, 0).unwrap();
        for w in 1..6 {
            let pred = predict_hitting(&g, 0, w).unwrap();
            assert_eq!(pred, 5.0);
            assert!((hv.value(w) - pred).abs() < 1e-10);
        }
    }

    #[test]
    fn offsets_differ_by_inverse_p() {
        let g = generate_er(4000, 0.2, 3).unwrap();
        let pred = prediction(&g, 17).unwrap();
        assert_eq!(pred.offset_nonadjacent - pred.offset_adjacent, 5.0);
        assert_eq!(pred.base, 2.0 * g.edge_count() as f64 / g.degree(17) as f64);
        // the two cluster locations sit at base - 1 and base - 1 + 1/p
        assert_eq!(pred.value(true), pred.base - 1.0);
        assert_eq!(pred.value(false), pred.base - 1.0 + 5.0);
    }

    #[test]
    fn empirical_probability_flag() {
        let g = generate_er(500, 0.5, 9).unwrap();
        let p_emp = empirical_edge_probability(&g);
        let n = 500.0;
        assert!((p_emp - g.edge_count() as f64 / (n * (n - 1.0) / 2.0)).abs() < 1e-15);
        let (v, w) = (0, 1);
        let nominal = predict_hitting(&g, v, w).unwrap();
        let empirical = predict_hitting_with_p(&g, v, w, p_emp).unwrap();
        if g.has_edge(v, w) {
            assert_eq!(nominal, empirical);
        } else {
            assert!((nominal - empirical).abs() > 0.0);
        }
    }

    #[test]
    fn resistance_prediction_fixtures() {
        // K_4 at p=1: 1/3 + 1/3 - 2/16 = 0.5416..., exact value is 0.5
        let k = complete(4);
        let pred = predict_resistance(&k, 0, 2).unwrap();
        assert!((pred - (2.0 / 3.0 - 0.125)).abs() < 1e-12);
        let exact = crate::markov::effective_resistance(&k, 0, 2).unwrap();
        assert!((pred - exact).abs() < 0.05);

        // single edge at p=1, n=2: formula gives 1 + 1 - 1/2; the finite-n
        // defect against the exact value 1 is 0.5
        let e = generate_er(2, 1.0, 0).unwrap();
        assert!((predict_resistance(&e, 0, 1).unwrap() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn resistance_prediction_at_scale() {
        let g = generate_er(2000, 0.5, 21).unwrap();
        assert!(g.is_connected());
        // first non-adjacent pair starting from (0, 1)
        let w = (1..g.n()).find(|&w| !g.has_edge(0, w)).unwrap();
        let exact = crate::markov::effective_resistance(&g, 0, w).unwrap();
        let pred = predict_resistance(&g, 0, w).unwrap();
        let n = g.n() as f64;
        let bound = 5.0 * n.ln().powf(1.5) / n.powf(2.5);
        assert!(
            (pred - exact).abs() <= bound,
            "defect {} vs bound {bound}",
            (pred - exact).abs()
        );
    }

    #[test]
    fn lovasz_fixture_bounds() {
        // K_4 transition spectrum {1, -1/3, -1/3, -1/3}
        let k = complete(4);
        let b = lovasz_bounds(&k, 0, 3, -1.0 / 3.0).unwrap();
        assert!((b.lower - 4.0).abs() < 1e-12);
        assert!((b.upper - 6.0).abs() < 1e-12);
        let kappa = commute_time(&k, 0, 3).unwrap();
        assert!(b.lower <= kappa + 1e-9 && kappa <= b.upper + 1e-9);

        // single edge: lambda2 = -1, both bounds tight at kappa = 2
        let e = generate_er(2, 1.0, 0).unwrap();
        let b = lovasz_bounds(&e, 0, 1, -1.0).unwrap();
        assert!((b.lower - 2.0).abs() < 1e-12);
        assert!((b.upper - 2.0).abs() < 1e-12);

        assert!(lovasz_bounds(&e, 0, 1, 1.0).is_err());
    }

    #[test]
    fn two_step_fixtures() {
        let k = complete(4);
        let t = two_step_hit_prob(&k, 0, 1).unwrap();
        assert!((t.exact - 2.0 / 9.0).abs() < 1e-12);
        assert_eq!(t.direct, Some(1.0 / 3.0));

        let path = ErGraph::from_edges(3, 0.5, 0, &[(0, 1), (1, 2)]).unwrap();
        let t = two_step_hit_prob(&path, 0, 2).unwrap();
        assert!((t.exact - 0.5).abs() < 1e-12);
        assert_eq!(t.direct, None);

        // distance-3 start is outside A and B
        let p4 = ErGraph::from_edges(4, 0.5, 0, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(two_step_hit_prob(&p4, 0, 3).is_err());
    }

    #[test]
    fn two_step_approximation_at_scale() {
        let g = generate_er(2000, 0.5, 8).unwrap();
        let d = decompose(&g, 0).unwrap();
        assert!(d.beyond.is_empty());
        let n = g.n() as f64;
        let bound = 3.0 * n.ln().sqrt() / n.powf(1.5);
        for &w in d.set_b.iter().take(20) {
            let t = two_step_hit_prob(&g, 0, w).unwrap();
            assert!(
                (t.exact - t.approx).abs() <= bound,
                "w={w}: |{} - {}| > {bound}",
                t.exact,
                t.approx
            );
        }
    }

    #[test]
    fn cheap_bound_complete_graph() {
        let g = complete(12);
        let all = crate::markov::exact_hitting_all(&g).unwrap();
        let cb = cheap_bound_check(&g, &all).unwrap();
        assert!((cb.max_dev - 1.0).abs() < 1e-9);
    }

    #[test]
    fn concentration_on_complete_graph_flags_empty_b() {
        let g = complete(8);
        let hv = exact_hitting(&g, 0).unwrap();
        let report = concentration_report(&g, 0, &hv, 1.0).unwrap();
        assert!(report.b_empty);
        assert_eq!(report.spread_b, 0.0);
        assert!(report.gap.is_none());
        assert!(report.spread_a < 1e-9);
    }

    #[test]
    fn concentration_refuses_diameter_three() {
        let p4 = ErGraph::from_edges(4, 0.5, 0, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let hv = exact_hitting(&p4, 0).unwrap();
        match concentration_report(&p4, 0, &hv, 0.5) {
            Err(Error::DiameterExceedsTwo { target: 0, vertex: 3 }) => {}
            other => panic!("expected diameter error, got {other:?}"),
        }
    }

    #[test]
    fn concentration_at_scale() {
        let g = generate_er(1000, 0.5, 14).unwrap();
        let hv = exact_hitting(&g, 0).unwrap();
        let report = concentration_report(&g, 0, &hv, 0.5).unwrap();
        let bound = 5.0 * envelope(1000, 1.0);
        assert!(report.spread_a <= bound, "spread_a {}", report.spread_a);
        assert!(report.spread_b <= bound, "spread_b {}", report.spread_b);
        assert!(report.gap_defect.unwrap() <= bound);
    }

    #[test]
    fn report_serializes_with_stable_field_names() {
        let g = complete(5);
        let hv = exact_hitting(&g, 0).unwrap();
        let report = concentration_report(&g, 0, &hv, 1.0).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        for key in ["target", "spread_a", "spread_b", "gap", "gap_defect", "b_empty"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        let pred = prediction(&g, 0).unwrap();
        let json = serde_json::to_value(pred).unwrap();
        for key in ["base", "offset_adjacent", "offset_nonadjacent", "envelope"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
    }

    #[test]
    fn calibration_smoke() {
        let config = CalibrationConfig {
            n: 200,
            ps: vec![0.5],
            seeds_per_p: 5,
            base_seed: 1,
            quantile: 0.99,
        };
        let cal = calibrate_envelope(&config).unwrap();
        assert_eq!(cal.samples.len() + cal.skipped_disconnected, 5);
        assert!(cal.constant > 0.0 && cal.constant < 20.0);
        let again = calibrate_envelope(&config).unwrap();
        assert_eq!(cal.constant, again.constant);
    }

    proptest! {
        #[test]
        fn offset_gap_is_exactly_inverse_p(
            n in 5usize..60,
            p in 0.1f64..=1.0,
            seed in 0u64..1000,
        ) {
            let g = generate_er(n, p, seed).unwrap();
            let v = seed as usize % n;
            if g.degree(v) > 0 {
                let pred = prediction(&g, v).unwrap();
                prop_assert_eq!(pred.offset_nonadjacent - pred.offset_adjacent, 1.0 / p);
            }
        }
    }
}
