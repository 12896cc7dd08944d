use proptest::prelude::*;
use trendwave_core::infocalc::{
    configurational_information_3, information_report, mutual_information_2, mutual_redundancy,
    shannon_entropy, JointDistribution,
};

fn normalized(raw: Vec<f64>) -> Vec<f64> {
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / s).collect()
}

fn table(dims: Vec<usize>) -> impl Strategy<Value = JointDistribution> {
    let n: usize = dims.iter().product();
    prop::collection::vec(0.0f64..1.0, n)
        .prop_filter("non-zero mass", |v| v.iter().sum::<f64>() > 1e-3)
        .prop_map(move |v| JointDistribution::new(dims.clone(), normalized(v)).unwrap())
}

#[test]
fn xor_triad_has_minus_one_bit() {
    let mut p = vec![0.0; 8];
    for x in 0..2 {
        for y in 0..2 {
            p[x * 4 + y * 2 + (x ^ y)] = 0.25;
        }
    }
    let d = JointDistribution::new(vec![2, 2, 2], p).unwrap();
    assert!((configurational_information_3(&d).unwrap() + 1.0).abs() < 1e-12);
    assert!((mutual_redundancy(&d).unwrap() + 1.0).abs() < 1e-12);
}

#[test]
fn product_distribution_carries_no_information() {
    let d = JointDistribution::product(&[&[0.2, 0.3, 0.5], &[0.6, 0.4]]).unwrap();
    assert!(mutual_information_2(&d).unwrap().abs() < 1e-12);
    let d3 = JointDistribution::product(&[&[0.5, 0.5], &[0.1, 0.9], &[0.3, 0.7]]).unwrap();
    assert!(configurational_information_3(&d3).unwrap().abs() < 1e-12);
}

#[test]
fn redundancy_sign_flips_with_dimension() {
    let d = JointDistribution::new(vec![2, 2], vec![0.4, 0.1, 0.1, 0.4]).unwrap();
    let t = mutual_information_2(&d).unwrap();
    assert_eq!(mutual_redundancy(&d).unwrap(), -t);
    let r = information_report(&d).unwrap();
    assert_eq!(r.redundancy, Some(-t));
}

proptest! {
    #[test]
    fn entropy_is_bounded(d in table(vec![3, 4])) {
        let h = shannon_entropy(&d, &[0, 1]).unwrap();
        prop_assert!(h >= 0.0);
        prop_assert!(h <= (12f64).log2() + 1e-12);
    }

    #[test]
    fn mutual_information_is_non_negative(d in table(vec![3, 3])) {
        let t = mutual_information_2(&d).unwrap();
        prop_assert!(t >= -1e-12);
        let r = mutual_redundancy(&d).unwrap();
        prop_assert!((r + t).abs() <= 1e-12);
    }

    #[test]
    fn random_tables_are_dependent(d in table(vec![3, 3])) {
        // products have measure zero among random tables
        prop_assert!(mutual_information_2(&d).unwrap() > 0.0);
    }

    #[test]
    fn dimension_order_is_irrelevant(d in table(vec![2, 3, 2])) {
        let base = configurational_information_3(&d).unwrap();
        for order in [[1, 0, 2], [2, 1, 0], [1, 2, 0]] {
            let p = d.permute(&order).unwrap();
            prop_assert!((configurational_information_3(&p).unwrap() - base).abs() <= 1e-12);
            prop_assert!((shannon_entropy(&p, &[0, 1, 2]).unwrap() - shannon_entropy(&d, &[0, 1, 2]).unwrap()).abs() <= 1e-12);
        }
        let m = d.marginal(&[0, 2]).unwrap();
        let mp = m.permute(&[1, 0]).unwrap();
        prop_assert!((mutual_information_2(&m).unwrap() - mutual_information_2(&mp).unwrap()).abs() <= 1e-12);
    }
}
