mod common;

use common::*;
use proptest::prelude::*;
use seechart_core::insights::*;
use seechart_core::realize::{RealizationContext, TemplateRegistry};
use seechart_core::ChartType;

#[test]
fn exhaustive_sweep_up_to_six_points() {
    let mut mismatches = Vec::new();
    for len in 1..=6u32 {
        for code in 0..6usize.pow(len) {
            let mut c = code;
            let values: Vec<f64> = (0..len)
                .map(|_| {
                    let v = (c % 6) as f64;
                    c /= 6;
                    v
                })
                .collect();
            if let Err(e) = check_against_oracles(&values) {
                mismatches.push(e);
            }
        }
    }
    assert!(
        mismatches.is_empty(),
        "{:?}",
        &mismatches[..mismatches.len().min(5)]
    );
}

#[test]
fn changes_examples() {
    assert_eq!(normalized_changes(&[0.0, 2.0, 1.0]), vec![1.0, 0.5]);
    assert_eq!(normalized_changes(&[5.0, 5.0, 5.0]), vec![0.0, 0.0]);
    assert_eq!(
        normalized_changes(&[1.0, 4.0, 2.0, 10.0]),
        oracle_changes(&[1.0, 4.0, 2.0, 10.0])
    );
    assert_eq!(
        normalized_changes(&[1.0, 4.0, 2.0, 10.0]),
        vec![0.375, 0.25, 1.0]
    );
}

#[test]
fn step_percent_change_renders_two_decimals() {
    let s = series(&[3.7, 14.2, 13.0]);
    let msgs = local_trend_messages(&s, None);
    let up = msgs
        .iter()
        .find(|m| m.text("direction") == Some("increasing"))
        .unwrap();
    // (14.2 - 3.7) / 3.7 * 100
    let oracle = ((14.2f64 - 3.7) / 3.7 * 100.0 * 100.0).round() / 100.0;
    assert_eq!(up.number("percent_change"), Some(oracle));
    assert_eq!(oracle, 283.78);
}

#[test]
fn nepal_fixture_facts() {
    let spec = fixture("nepal");
    let s = &spec.series[0];
    let e = extrema(s);
    assert_eq!(e.text("max_category"), Some("1992"));
    assert_eq!(e.number("max_value"), Some(21.06));
    assert_eq!(e.text("min_category"), Some("2001"));
    assert_eq!(e.number("min_value"), Some(2.44));
    assert_eq!(trend_direction(&s.values()), TrendDirection::Decreasing);
    assert!(shape(s).is_some());
    let segs = local_trends(s).unwrap();
    let jump = segs.iter().find(|g| g.start_index == 5).unwrap();
    assert_eq!((jump.end_index, jump.percent_change), (6, 283.78));
    let peak = segs.iter().find(|g| g.start_index == 11).unwrap();
    assert_eq!((peak.end_index, peak.percent_change), (12, 165.24));
}

#[test]
fn subaru_fixture_facts() {
    let spec = fixture("subaru");
    let s = &spec.series[0];
    assert_eq!(s.len(), 42);
    let e = extrema(s);
    assert_eq!(e.text("max_category"), Some("Sep 2018"));
    assert_eq!(e.number("max_value"), Some(829.0));
    assert_eq!(e.text("min_category"), Some("Aug 2017"));
    assert_eq!(e.number("min_value"), Some(44.0));
    assert_eq!(max_difference(s).unwrap().number("difference"), Some(785.0));
    let (mean, sum) = oracle_mean_sum(&s.values());
    assert_eq!((mean, sum), (252.4, 10601.0));
    let d = derived_values(s);
    assert_eq!(d.number("mean"), Some(252.4));
    assert_eq!(d.number("sum"), Some(10601.0));
}

#[test]
fn honduras_fixture_facts() {
    let spec = fixture("honduras");
    let msgs = multi_series_insights(&spec).unwrap();
    let rank = msgs
        .iter()
        .find(|m| m.category == Category::OrderRank)
        .unwrap();
    let names: Vec<&str> = rank
        .param("ranked_series")
        .and_then(ParamValue::as_list)
        .unwrap()
        .iter()
        .map(|p| p.as_str().unwrap())
        .collect();
    assert_eq!(names, ["Services", "Agriculture", "Industry"]);
    for (s, want) in spec.series.iter().zip([33.0, 20.38, 46.56]) {
        let mean = s.values().iter().sum::<f64>() / s.len() as f64;
        assert!((mean - want).abs() < 0.005, "{:?} {mean}", s.name);
    }
    let min = msgs
        .iter()
        .find(|m| m.category == Category::GlobalExtrema && m.is_variant("min"))
        .or_else(|| msgs.iter().find(|m| m.category == Category::GlobalExtrema))
        .unwrap();
    let text = serde_json::to_string(min).unwrap();
    assert!(
        text.contains("18.64") && text.contains("Industry") && text.contains("2010"),
        "{text}"
    );
}

#[test]
fn every_message_fits_its_templates() {
    let registry = TemplateRegistry::builtin();
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(5);
    let mut charts: Vec<_> = (0..60).map(|_| random_chart(&mut rng)).collect();
    charts.extend(["subaru", "honduras", "nepal"].map(fixture));
    for ct in ChartType::ALL {
        charts.push(chart_from_values(
            ct,
            &vec![vec![0.0, 0.0, 5.0, 5.0, 0.0]; if ct.is_multi_series() { 2 } else { 1 }],
        ));
    }
    for spec in charts {
        let ctx = RealizationContext::for_chart(&spec, 0);
        for m in analyze(&spec).unwrap() {
            assert!(m.params_finite(), "{m:?}");
            registry
                .check_message(&m, &ctx)
                .unwrap_or_else(|e| panic!("{:?} {:?}: {e}", spec.chart_type, m.category));
        }
    }
}

fn arb_values(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1000.0f64..1000.0, 2..max_len)
}

proptest! {
    #[test]
    fn changes_in_unit_interval(v in arb_values(40)) {
        let c = normalized_changes(&v);
        prop_assert_eq!(c.len(), v.len() - 1);
        prop_assert!(c.iter().all(|x| (0.0..=1.0).contains(x)));
        let any_change = v.windows(2).any(|w| w[0] != w[1]);
        prop_assert_eq!(c.contains(&1.0), any_change);
    }

    #[test]
    fn changes_scale_invariant(v in arb_values(40), c in prop::sample::select(vec![0.5, 3.0, 100.0])) {
        let base = normalized_changes(&v);
        let scaled: Vec<f64> = v.iter().map(|x| x * c).collect();
        for (a, b) in base.iter().zip(normalized_changes(&scaled)) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn changes_match_oracle(v in arb_values(30)) {
        prop_assert_eq!(normalized_changes(&v), oracle_changes(&v));
    }

    #[test]
    fn trend_direction_scale_invariant(v in arb_values(30), c in 0.01f64..1000.0) {
        let scaled: Vec<f64> = v.iter().map(|x| x * c).collect();
        // skip values sitting on the constant-band boundary
        let range = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - v.iter().cloned().fold(f64::INFINITY, f64::min);
        let n = v.len() as f64;
        let mx = (n - 1.0) / 2.0;
        let my = v.iter().sum::<f64>() / n;
        let slope = v.iter().enumerate().map(|(i, y)| (i as f64 - mx) * (y - my)).sum::<f64>()
            / (0..v.len()).map(|i| (i as f64 - mx).powi(2)).sum::<f64>();
        prop_assume!(((slope * (n - 1.0)).abs() - CONSTANT_BAND * range).abs() > 1e-6 * range.max(1.0));
        prop_assert_eq!(trend_direction(&v), trend_direction(&scaled));
    }

    #[test]
    fn segments_tile_the_series(v in prop::collection::vec(0.0f64..50.0, 3..40)) {
        let segs = local_trends(&series(&v)).unwrap();
        prop_assert_eq!(segs[0].start_index, 0);
        prop_assert_eq!(segs.last().unwrap().end_index, v.len() - 1);
        for w in segs.windows(2) {
            prop_assert_eq!(w[0].end_index, w[1].start_index);
        }
        for g in &segs {
            prop_assert!(g.start_index < g.end_index);
            prop_assert!((0.0..=1.0).contains(&g.normalized_peak_change));
        }
    }

    #[test]
    fn local_messages_respect_floor_and_cap(v in prop::collection::vec(0.0f64..50.0, 3..60)) {
        let msgs = local_trend_messages(&series(&v), None);
        prop_assert!(msgs.len() <= MAX_LOCAL_TRENDS);
        for m in &msgs {
            prop_assert!(m.number("normalized_peak_change").unwrap() >= LOCAL_TREND_FLOOR);
        }
    }

    #[test]
    fn oracles_agree_on_random_series(v in prop::collection::vec((0u8..20).prop_map(f64::from), 1..15)) {
        prop_assert_eq!(check_against_oracles(&v), Ok(()));
    }
}
