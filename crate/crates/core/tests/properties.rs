mod common;

use aeroemit::aggregate::{
    aggregate_airframes, aggregate_airlines, aggregate_airports, aggregate_engines, aggregate_routes,
    gas_breakdowns, split_lto, FlightResult,
};
use aeroemit::emissions::{
    ccd_interpolate, co2e, lto_breakdown, lto_emissions, CcdProfile, Co2eFactors, EmissionOptions,
    EngineLtoFactors, Knot, LtoTimes, RangeFlag,
};
use aeroemit::matching::{jaccard_similarity, normalize_airframe_type, tokenize, NormalizationRuleSet};
use aeroemit::pipeline::compute_all;
use aeroemit::synthetic::{SyntheticCorpus, SyntheticSpec};
use aeroemit::{Gas, GasVector};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

fn gas_vector(max: f64) -> impl Strategy<Value = GasVector> {
    (0.0..max, 0.0..max, 0.0..max, 0.0..max).prop_map(|(a, b, c, d)| GasVector::new(a, b, c, d))
}

fn engine() -> impl Strategy<Value = EngineLtoFactors> {
    proptest::array::uniform4(gas_vector(5.0)).prop_map(|r| EngineLtoFactors::new("E", r))
}

fn profile() -> impl Strategy<Value = CcdProfile> {
    proptest::collection::btree_set(1u32..900, 2..10).prop_flat_map(|minutes| {
        let n = minutes.len();
        proptest::collection::vec(gas_vector(50000.0), n).prop_map(move |vs| {
            let knots = minutes.iter().zip(vs).map(|(&m, v)| Knot::new(f64::from(m), v)).collect();
            CcdProfile::new("T", knots).unwrap()
        })
    })
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #[test]
    fn co2e_is_linear(a in gas_vector(1e5), b in gas_vector(1e5), k in 0.0f64..100.0) {
        let f = Co2eFactors::default();
        prop_assert!(close(co2e(&(a + b), &f), co2e(&a, &f) + co2e(&b, &f), 1e-12));
        prop_assert!(close(co2e(&(a * k), &f), k * co2e(&a, &f), 1e-12));
        prop_assert!(co2e(&a, &f) >= a.co2());
    }

    #[test]
    fn knots_are_reproduced_exactly(p in profile(), ef in 0.5f64..1.5) {
        for k in p.knots() {
            let est = ccd_interpolate(&p, k.duration_min, 1.0);
            prop_assert_eq!(est.emissions, k.emissions);
            prop_assert_eq!(est.range, RangeFlag::Within);
            prop_assert_eq!(ccd_interpolate(&p, k.duration_min, ef).emissions, k.emissions * ef);
        }
    }

    #[test]
    fn interpolation_stays_between_neighbours(p in profile(), t in 0.0f64..1.0) {
        let knots = p.knots();
        for w in knots.windows(2) {
            let x = w[0].duration_min + t * (w[1].duration_min - w[0].duration_min);
            let y = ccd_interpolate(&p, x, 1.0).emissions;
            for gas in Gas::ALL {
                let (lo, hi) = (w[0].emissions[gas].min(w[1].emissions[gas]), w[0].emissions[gas].max(w[1].emissions[gas]));
                prop_assert!(lo - 1e-9 * hi <= y[gas] && y[gas] <= hi + 1e-9 * hi);
            }
        }
    }

    #[test]
    fn interpolation_is_continuous(p in profile(), t in 0.0f64..1.0) {
        let knots = p.knots();
        let (first, last) = (knots[0].duration_min, knots[knots.len() - 1].duration_min);
        let x = first + t * (last - first);
        let h = 1e-7;
        let (a, b) = (ccd_interpolate(&p, x, 1.0).emissions, ccd_interpolate(&p, (x + h).min(last), 1.0).emissions);
        // steepest possible slope is 50000 kg over one minute
        for gas in Gas::ALL {
            prop_assert!((a[gas] - b[gas]).abs() <= 50000.0 * h * 1.01 + 1e-9);
        }
    }

    #[test]
    fn extrapolation_is_flagged_and_non_negative(p in profile(), below in 0.0f64..1.0, above in 1.0f64..500.0) {
        let knots = p.knots();
        let first = knots[0].duration_min;
        let last = knots[knots.len() - 1].duration_min;
        if below * first < first {
            let lo = ccd_interpolate(&p, below * first, 1.0);
            prop_assert_eq!(lo.range, RangeFlag::ExtrapolatedLow);
            prop_assert!(lo.emissions.is_non_negative());
        }
        prop_assert_eq!(ccd_interpolate(&p, last + above, 1.0).range, RangeFlag::ExtrapolatedHigh);
    }

    #[test]
    fn lto_grows_with_idle(e in engine(), idle in 0.0f64..5000.0, extra in 0.0f64..5000.0) {
        let a = lto_emissions(&e, &LtoTimes::with_idle_s(idle), 1.0);
        let b = lto_emissions(&e, &LtoTimes::with_idle_s(idle + extra), 1.0);
        for gas in Gas::ALL {
            prop_assert!(b[gas] >= a[gas]);
        }
    }

    #[test]
    fn lto_scales_with_multiplier(e in engine(), tin in 0.0f64..60.0, tout in 0.0f64..60.0) {
        let times = LtoTimes::from_taxi_minutes(Some(tin), Some(tout));
        let one = lto_emissions(&e, &times, 1.0);
        let two = lto_emissions(&e, &times, 2.0);
        for gas in Gas::ALL {
            prop_assert!(close(two[gas], 2.0 * one[gas], 1e-12));
        }
        let zero = LtoTimes { takeoff_s: 0.0, climbout_s: 0.0, approach_s: 0.0, taxi_out_s: 0.0, taxi_in_s: 0.0 };
        prop_assert_eq!(lto_emissions(&e, &zero, 1.0), GasVector::ZERO);
    }

    #[test]
    fn split_is_exact(e in engine(), tin in 0.0f64..60.0, tout in 0.0f64..60.0, scale in 0.1f64..4.0) {
        let parts = lto_breakdown(&e, &LtoTimes::from_taxi_minutes(Some(tin), Some(tout)), scale);
        let (o, d) = split_lto(&parts);
        prop_assert_eq!(o + d, parts.total());
        prop_assert_eq!(d, parts.approach + parts.idle_in);
    }

    #[test]
    fn jaccard_is_a_similarity(a in "[A-Za-z0-9 /-]{0,24}", b in "[A-Za-z0-9 /-]{0,24}") {
        let (ta, tb) = (tokenize(&a), tokenize(&b));
        let s = jaccard_similarity(&ta, &tb);
        prop_assert_eq!(s, jaccard_similarity(&tb, &ta));
        prop_assert!((0.0..=1.0).contains(&s));
        prop_assert_eq!(s == 1.0, ta == tb);
        prop_assert_eq!(jaccard_similarity(&ta, &ta), 1.0);
    }

    #[test]
    fn tokenize_is_idempotent(s in "[A-Za-z0-9 ._/-]{0,30}") {
        let t = tokenize(&s);
        let joined = t.iter().cloned().collect::<Vec<_>>().join(" ");
        prop_assert_eq!(tokenize(&joined), t);
    }

    #[test]
    fn normalization_is_idempotent(raw in "[AB ]?[0-9]{3}[-/ ]?[0-9A-Z]{0,4}") {
        let rules = NormalizationRuleSet::builtin();
        if let Some(c) = normalize_airframe_type(&raw, &rules) {
            prop_assert_eq!(normalize_airframe_type(&c, &rules), Some(c.clone()));
        }
    }
}

#[test]
fn every_builtin_target_normalizes_to_itself() {
    let rules = NormalizationRuleSet::builtin();
    for c in rules.canonical_types() {
        assert_eq!(normalize_airframe_type(c, &rules).as_deref(), Some(c.as_str()));
        assert_eq!(normalize_airframe_type(&c.to_lowercase(), &rules).as_deref(), Some(c.as_str()));
    }
}

fn corpus_results() -> Vec<FlightResult> {
    let spec = SyntheticSpec {
        flights: 1500,
        tails: 150,
        missing_tail: 20,
        missing_air_time: 10,
        unknown_tail: 5,
        ..SyntheticSpec::default()
    };
    let corpus = SyntheticCorpus::generate(&spec);
    let dataset = dataset_from(&corpus);
    let tables = dataset.match_tables(0.5);
    compute_all(&dataset, &tables, &EmissionOptions::default())
}

#[test]
fn aggregates_do_not_depend_on_flight_order() {
    let results = corpus_results();
    let f = Co2eFactors::default();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..5 {
        let mut shuffled = results.clone();
        shuffled.shuffle(&mut rng);
        assert_eq!(aggregate_airlines(&results, &f), aggregate_airlines(&shuffled, &f));
        assert_eq!(aggregate_routes(&results, &f), aggregate_routes(&shuffled, &f));
        assert_eq!(aggregate_airframes(&results, &f), aggregate_airframes(&shuffled, &f));
        assert_eq!(aggregate_engines(&results, &f), aggregate_engines(&shuffled, &f));
        assert_eq!(aggregate_airports(&results, &f), aggregate_airports(&shuffled, &f));
        assert_eq!(gas_breakdowns(&results, &f), gas_breakdowns(&shuffled, &f));
    }
}

#[test]
fn airline_intensities_are_consistent() {
    let results = corpus_results();
    for s in aggregate_airlines(&results, &Co2eFactors::default()) {
        assert!(s.emission_flights <= s.total_flights);
        let (co2, co2e) = (s.co2_per_seat_mile.unwrap(), s.co2e_per_seat_mile.unwrap());
        assert!(co2e >= co2, "{}", s.key);
        assert!(close(co2, s.total_co2_kg / s.seat_miles.to_f64(), 1e-12));
    }
}
