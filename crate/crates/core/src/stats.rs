//! Goodness-of-fit helpers for comparing simulated histograms with exact laws.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Cells with an expected count below this are pooled into one.
pub const MIN_EXPECTED: f64 = 5.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub samples: u64,
    pub tv_distance: f64,
    pub chi_square: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
}

fn chi_square_sf(stat: f64, df: usize) -> f64 {
    if df == 0 {
        return 1.0;
    }
    if !stat.is_finite() {
        return 0.0;
    }
    ChiSquared::new(df as f64)
        .map(|d| d.sf(stat))
        .unwrap_or(f64::NAN)
}

/// Compares observed counts with probabilities `expected` (summing to one).
pub fn goodness_of_fit<K: Ord + Clone>(
    observed: &BTreeMap<K, u64>,
    expected: &BTreeMap<K, f64>,
) -> FitReport {
    let samples: u64 = observed.values().sum();
    let m = samples as f64;
    let keys: BTreeSet<&K> = observed.keys().chain(expected.keys()).collect();

    let mut tv = 0.0;
    let mut stat = 0.0;
    let mut cells = 0usize;
    let (mut pooled_obs, mut pooled_exp) = (0.0, 0.0);
    for key in keys {
        let o = observed.get(key).copied().unwrap_or(0) as f64;
        let p = expected.get(key).copied().unwrap_or(0.0);
        tv += (o / m - p).abs();
        let e = p * m;
        if e < MIN_EXPECTED {
            pooled_obs += o;
            pooled_exp += e;
        } else {
            stat += (o - e).powi(2) / e;
            cells += 1;
        }
    }
    if pooled_exp > 0.0 || pooled_obs > 0.0 {
        stat += if pooled_exp > 0.0 {
            (pooled_obs - pooled_exp).powi(2) / pooled_exp
        } else {
            f64::INFINITY
        };
        cells += 1;
    }
    let df = cells.saturating_sub(1);
    FitReport {
        samples,
        tv_distance: tv / 2.0,
        chi_square: stat,
        degrees_of_freedom: df,
        p_value: chi_square_sf(stat, df),
    }
}

/// Two-sample chi-square test of homogeneity; `tv_distance` is between the
/// two empirical laws.
pub fn two_sample_homogeneity<K: Ord + Clone>(
    a: &BTreeMap<K, u64>,
    b: &BTreeMap<K, u64>,
) -> FitReport {
    let na: u64 = a.values().sum();
    let nb: u64 = b.values().sum();
    let (fa, fb) = (na as f64, nb as f64);
    let total = fa + fb;
    let keys: BTreeSet<&K> = a.keys().chain(b.keys()).collect();

    let mut tv = 0.0;
    let mut stat = 0.0;
    let mut cells = 0usize;
    let (mut pa, mut pb) = (0.0, 0.0);
    let add_cell = |oa: f64, ob: f64, stat: &mut f64| {
        let row = oa + ob;
        let (ea, eb) = (row * fa / total, row * fb / total);
        *stat += (oa - ea).powi(2) / ea + (ob - eb).powi(2) / eb;
    };
    for key in keys {
        let oa = a.get(key).copied().unwrap_or(0) as f64;
        let ob = b.get(key).copied().unwrap_or(0) as f64;
        tv += (oa / fa - ob / fb).abs();
        if (oa + ob) * fa.min(fb) / total < MIN_EXPECTED {
            pa += oa;
            pb += ob;
        } else {
            add_cell(oa, ob, &mut stat);
            cells += 1;
        }
    }
    if pa + pb > 0.0 {
        add_cell(pa, pb, &mut stat);
        cells += 1;
    }
    let df = cells.saturating_sub(1);
    FitReport {
        samples: na + nb,
        tv_distance: tv / 2.0,
        chi_square: stat,
        degrees_of_freedom: df,
        p_value: chi_square_sf(stat, df),
    }
}
