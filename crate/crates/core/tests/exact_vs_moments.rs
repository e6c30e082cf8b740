use discrete_spacings::exact::{moments_from_pmf, pmf_split};
use discrete_spacings::moments::{
    cross_moment_recursion, mean_recursion, mean_recursion_cumulative, projected_moment_recursion,
};
use discrete_spacings::ProcessParams;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

#[test]
fn recursions_equal_pmf_moments_exactly() {
    for k in 2..=4 {
        let means = mean_recursion::<BigRational>(k, 12).unwrap();
        let cross = cross_moment_recursion(&means);
        let c: Vec<BigRational> = (1..k as i64).map(|j| ratio(2 * j - 1, 3)).collect();
        let proj = projected_moment_recursion(&c, k, 12, 5).unwrap();
        for n in 0..=12 {
            let pmf = pmf_split(ProcessParams::new(n, k).unwrap(), 40).unwrap();
            let m = moments_from_pmf(&pmf, 5, Some(&c));
            assert_eq!(means.row(n), &m.mean[..], "mean n={n} k={k}");
            for i in 0..k - 1 {
                for j in 0..k - 1 {
                    assert_eq!(
                        cross.second_moment(n)[i][j],
                        m.cross[i][j],
                        "E X_i X_j n={n} k={k}"
                    );
                    assert_eq!(
                        cross.covariance(n)[i][j],
                        m.covariance(i, j),
                        "cov n={n} k={k}"
                    );
                }
            }
            for order in 0..=5 {
                assert_eq!(
                    proj.raw(n)[order],
                    m.projected_raw[order],
                    "raw m={order} n={n} k={k}"
                );
                assert_eq!(
                    proj.central(n)[order],
                    m.projected_central(order),
                    "central m={order} n={n} k={k}"
                );
            }
        }
    }
}

#[test]
fn vacancy_mean_matches_pmf() {
    for k in 2..=4 {
        let means = mean_recursion::<BigRational>(k, 12).unwrap();
        for n in 0..=12 {
            let pmf = pmf_split(ProcessParams::new(n, k).unwrap(), 40).unwrap();
            let ev = pmf
                .probs
                .iter()
                .fold(BigRational::from_integer(0.into()), |acc, (g, p)| {
                    acc + p * BigRational::from_integer(g.vacancy().0.into())
                });
            assert_eq!(means.vacancy_mean(n), ev);
        }
    }
}

#[test]
fn mean_forms_agree_exactly_and_in_float() {
    for k in 2..=5 {
        assert_eq!(
            mean_recursion::<BigRational>(k, 40).unwrap(),
            mean_recursion_cumulative::<BigRational>(k, 40).unwrap()
        );
        let a = mean_recursion::<f64>(k, 2000).unwrap();
        let b = mean_recursion_cumulative::<f64>(k, 2000).unwrap();
        for n in 0..=2000 {
            for (x, y) in a.row(n).iter().zip(b.row(n)) {
                assert!((x - y).abs() <= 1e-12 * (1.0 + x.abs()), "n={n} k={k}");
            }
        }
    }
}

#[test]
fn float_tables_track_rational_tables() {
    let k = 3;
    let exact =
        projected_moment_recursion(&[BigRational::one(), BigRational::one()], k, 30, 6).unwrap();
    let float = projected_moment_recursion(&[1.0, 1.0], k, 30, 6).unwrap();
    for n in 0..=30 {
        for m in 0..=6 {
            let e = exact.central(n)[m].to_f64().unwrap();
            let f = float.central(n)[m];
            assert!(
                (e - f).abs() <= 1e-10 * (1.0 + e.abs()),
                "n={n} m={m}: {e} vs {f}"
            );
        }
    }
}
