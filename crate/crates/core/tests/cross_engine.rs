use pathweight::closedforms;
use pathweight::feq;
use pathweight::paths::{self, PathFamily, ProductMode};
use pathweight::series::{rat, ratio};
use pathweight::{BigRational, WeightSpec};

fn brute(family: &PathFamily, n: u64, w: &WeightSpec) -> BigRational {
    paths::weighted_sum(family, n, w, &ProductMode::Full).unwrap()
}

#[test]
fn rational_weights_agree_across_engines() {
    // Non-integral weights exercise the rational arithmetic end to end.
    let weights = [
        WeightSpec::Linear(ratio(1, 3)),
        WeightSpec::AffineOne(ratio(-1, 2)),
        WeightSpec::Table(vec![ratio(2, 5), rat(-1), rat(3)]),
    ];
    for family in [PathFamily::Catalan(2), PathFamily::Schroeder(1), PathFamily::MotzkinOdd(3)] {
        for w in &weights {
            let series = feq::family_sequence(&family, w, 4).unwrap();
            for n in 0..=4 {
                let expected = brute(&family, n, w);
                assert_eq!(series[n as usize], expected, "feq {family:?} {w} n={n}");
                let closed = match family {
                    PathFamily::Catalan(k) => closedforms::catalan_closed(k, n, w),
                    PathFamily::Schroeder(k) => closedforms::schroeder_closed(k, n, w),
                    PathFamily::MotzkinOdd(k) => closedforms::motzkin_odd_closed(k, n, w),
                    _ => unreachable!(),
                }
                .unwrap();
                assert_eq!(closed, expected, "closed {family:?} {w} n={n}");
            }
        }
    }
}

#[test]
fn even_motzkin_kernel_matches_enumeration() {
    for k in [2, 4, 6] {
        let family = PathFamily::MotzkinEven(k);
        let n_max = if k == 2 { 4 } else { 2 };
        let kernel = feq::kernel_even_motzkin(k, n_max).unwrap();
        for n in 0..=n_max {
            assert_eq!(kernel[n as usize], paths::count_paths(&family, n).unwrap(), "k={k} n={n}");
            assert_eq!(kernel[n as usize], closedforms::motzkin_even_count(k, n).unwrap(), "k={k} n={n}");
        }
    }
}

#[test]
fn dp_count_matches_enumeration() {
    for family in [PathFamily::Schroeder(3), PathFamily::MotzkinEven(2), PathFamily::MotzkinOdd(5)] {
        let system = family.step_system().unwrap();
        for n in 0..=3 {
            let width = family.width(n);
            let dp = paths::count_paths_dp(&system, width);
            assert_eq!(BigRational::from_integer(dp), paths::count_paths(&family, n).unwrap());
        }
    }
}
