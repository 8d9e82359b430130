mod common;

use common::random_finite_module;
use proptest::prelude::*;
use quotcount::graded::{direct_sum, edge_poset_isomorphic, matlis_dual, BoxModule};
use quotcount::oracle::{quot_euler_bruteforce, OracleConfig, OracleSource};
use quotcount::quot::{enumerate_quotients, quot_series};
use rand::{rngs::StdRng, SeedableRng};

fn finite(seed: u64, max_len: usize) -> BoxModule {
    random_finite_module(&mut StdRng::seed_from_u64(seed), max_len)
}

/// Order ideals counted over every subset of boxes.
fn subset_counts(m: &BoxModule) -> Vec<i128> {
    let mut counts = vec![0i128; m.len() + 1];
    for mask in 0u32..(1 << m.len()) {
        let closed = (0..m.len())
            .filter(|i| mask >> i & 1 == 1)
            .all(|i| m.predecessors(i).iter().all(|&p| mask >> p & 1 == 1));
        if closed {
            counts[mask.count_ones() as usize] += 1;
        }
    }
    counts
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn counts_agree_with_subsets(seed in any::<u64>()) {
        let m = finite(seed, 8);
        let d = m.len();
        let s = quot_series(&m, d).unwrap();
        prop_assert_eq!(s.ordinary_coeffs(), subset_counts(&m));
        for n in 0..=d {
            let q = enumerate_quotients(&m, n).unwrap();
            prop_assert_eq!(q.len() as i128, s.coeff(n as i64).unwrap());
            prop_assert!(q.iter().all(|p| p.len() == n && p.is_order_ideal_of(&m)));
            prop_assert!(q.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn duality_bijection(seed in any::<u64>()) {
        let m = finite(seed, 7);
        let dual = matlis_dual(&m).unwrap();
        let d = m.len();
        prop_assert_eq!(dual.len(), d);
        for n in 0..=d {
            prop_assert_eq!(
                enumerate_quotients(&m, n).unwrap().len(),
                enumerate_quotients(&dual, d - n).unwrap().len()
            );
        }
        prop_assert!(edge_poset_isomorphic(&matlis_dual(&dual).unwrap(), &m));
    }

    #[test]
    fn support_factorization(a in any::<u64>(), b in any::<u64>()) {
        let (x, y) = (finite(a, 5), finite(b, 5));
        let top = x.len() + y.len();
        let sum = quot_series(&direct_sum(&[x.clone(), y.clone()]), top).unwrap();
        let prod = quot_series(&x, top).unwrap().mul(&quot_series(&y, top).unwrap()).unwrap();
        prop_assert_eq!(sum, prod);
    }

    #[test]
    fn oracle_matches_enumeration(seed in any::<u64>()) {
        let m = finite(seed, 4);
        let cfg = OracleConfig { primes: vec![2, 3, 5], ..Default::default() };
        for n in 0..=2.min(m.len()) {
            let r = quot_euler_bruteforce(OracleSource::Boxes(&m), n, &cfg).unwrap();
            prop_assert_eq!(r.value, enumerate_quotients(&m, n).unwrap().len() as i128);
        }
    }
}
