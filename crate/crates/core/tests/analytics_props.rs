use mgi_core::analytics::{cross_correlation, growth_pct, pearson, typical_day};
use mgi_core::{Channel, Series, Timestamp};
use proptest::prelude::*;

fn dev(values: &[f64]) -> Series {
    Series::deviations(Channel::LoadPower, Timestamp(0), 600, values.iter().map(|v| Some(*v)).collect())
        .unwrap()
}

fn varied() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-50.0..50.0f64, 8..200).prop_filter("needs variance", |v| {
        let m = v.iter().sum::<f64>() / v.len() as f64;
        v.iter().map(|x| (x - m).powi(2)).sum::<f64>() > 1e-3
    })
}

proptest! {
    #[test]
    fn pearson_is_bounded_symmetric_and_affine_invariant(
        pair in varied().prop_flat_map(|a| {
            let n = a.len();
            (Just(a), prop::collection::vec(-50.0..50.0f64, n))
        }),
        scale in 0.1..10.0f64,
        shift in -100.0..100.0f64,
    ) {
        let (a, b) = pair;
        let sb: Series = dev(&b);
        prop_assume!(pearson(&sb, &sb).is_ok());
        let r = pearson(&dev(&a), &sb).unwrap();
        prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&r));
        prop_assert!((r - pearson(&sb, &dev(&a)).unwrap()).abs() < 1e-12);
        let a2: Vec<f64> = a.iter().map(|x| scale * x + shift).collect();
        prop_assert!((r - pearson(&dev(&a2), &sb).unwrap()).abs() < 1e-9);
        prop_assert!((pearson(&dev(&a), &dev(&a)).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cross_correlation_finds_the_shift(base in prop::collection::vec(-10.0..10.0f64, 120), lag in -6i64..=6) {
        // b[t] = a[t - lag] on the overlap, so the best lag is `lag`.
        let n = 100usize;
        let a: Vec<f64> = base[10..10 + n].to_vec();
        let b: Vec<f64> = (0..n).map(|t| base[(10 + t as i64 - lag) as usize]).collect();
        let res = cross_correlation(&dev(&a), &dev(&b), 8).unwrap();
        prop_assert_eq!(res.lag_steps, lag);
        prop_assert!((res.r - 1.0).abs() < 1e-9);
    }

    #[test]
    fn growth_matches_ratio(first in 0.01..10.0f64, last in 0.0..10.0f64) {
        let g = growth_pct(first, last).unwrap();
        prop_assert!((g - 100.0 * (last / first - 1.0)).abs() < 1e-9);
    }

    #[test]
    fn typical_day_of_periodic_series_is_the_period(day in prop::collection::vec(0.0..5.0f64, 144), days in 1usize..5) {
        let v: Vec<f64> = (0..days).flat_map(|_| day.clone()).collect();
        let s = Series::from_dense(Channel::LoadPower, Timestamp::from_ymd_hms(2019, 1, 1, 0, 0, 0), 600, v).unwrap();
        let p = typical_day(&s).unwrap();
        for (k, m) in p.slot_means.iter().enumerate() {
            prop_assert!((m.unwrap() - day[k]).abs() < 1e-9);
            prop_assert_eq!(p.slot_counts[k], days);
        }
    }
}
