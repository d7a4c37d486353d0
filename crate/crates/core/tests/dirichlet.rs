mod common;

use num_traits::ToPrimitive;
use quadcong::counting::{count, CongruenceSpec, CountOptions, Method};

const TERMS: usize = 200;

fn n_k(k: u32, n: i64, r: u64) -> i64 {
    let spec = CongruenceSpec::all_ones(k, n, r).unwrap();
    count(&spec, Method::Auto, &CountOptions::default())
        .unwrap()
        .count
        .to_i64()
        .unwrap()
}

fn check(series: Vec<i64>, k: u32, n: i64) {
    for (r, &want) in series.iter().enumerate().take(TERMS + 1).skip(1) {
        assert_eq!(want, n_k(k, n, r as u64), "coefficient {r}");
    }
}

#[test]
fn squares_vanishing() {
    check(common::n1_zero_series(TERMS + 1), 1, 0);
}

#[test]
fn square_roots_of_one() {
    check(common::n1_one_series(TERMS + 1), 1, 1);
}

#[test]
fn sums_of_two_squares_vanishing() {
    check(common::n2_zero_series(TERMS + 1), 2, 0);
}

#[test]
fn series_helpers_on_small_terms() {
    assert_eq!(&common::n1_zero_series(10)[1..], &[1, 1, 1, 2, 1, 1, 1, 2, 3]);
    assert_eq!(&common::n1_one_series(9)[1..], &[1, 1, 2, 2, 2, 2, 2, 4]);
    assert_eq!(&common::n2_zero_series(6)[1..], &[1, 2, 1, 4, 9]);
}
