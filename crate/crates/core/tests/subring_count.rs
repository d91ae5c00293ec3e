use num_bigint::BigUint;
use subring_zeta::*;

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

/// Subrings of split Z^2 with diagonal (k, l): residues x mod p^k with
/// x (x - p^l) = 0 mod p^k; unital ones also need l = 0 and x = 1 mod p^k.
fn plane_brute(p: u64, k: u32, l: u32, unital: bool) -> u64 {
    let pk = p.pow(k) as u128;
    let pl = p.pow(l) as u128;
    (0..pk)
        .filter(|&x| (x * ((x + pk * pl - pl) % pk)).is_multiple_of(pk))
        .filter(|&x| !unital || (l == 0 && (x + pk - 1).is_multiple_of(pk)))
        .count() as u64
}

#[test]
fn closure_examples() {
    let z2 = make_split_ring(2).unwrap();
    let r = HnfRep::new(3, vec![1, 0], vec![vec![], vec![1]]).unwrap();
    assert!(closure_check(&z2, &r).unwrap());
    let r = HnfRep::new(3, vec![1, 0], vec![vec![], vec![2]]).unwrap();
    assert!(!closure_check(&z2, &r).unwrap());
    let z4 = make_split_ring(4).unwrap();
    assert!(closure_check(&z4, &HnfRep::full(3, 4).unwrap()).unwrap());
}

#[test]
fn unital_examples() {
    let z2 = make_split_ring(2).unwrap();
    let r = HnfRep::new(3, vec![1, 0], vec![vec![], vec![1]]).unwrap();
    assert!(unital_check(&z2, &r).unwrap());
    let r = HnfRep::new(3, vec![0, 1], vec![vec![], vec![0]]).unwrap();
    assert!(!unital_check(&z2, &r).unwrap());
    assert!(unital_check(&z2, &HnfRep::full(3, 2).unwrap()).unwrap());
}

#[test]
fn diagonal_counts() {
    let z2 = make_split_ring(2).unwrap();
    assert_eq!(count_for_diagonal(&z2, 3, &[1, 0], false).unwrap(), big(2));
    assert_eq!(count_for_diagonal(&z2, 3, &[1, 1], false).unwrap(), big(1));
    assert_eq!(count_for_diagonal(&z2, 3, &[1, 0], true).unwrap(), big(1));
}

#[test]
fn diagonal_counts_match_plane_brute_force() {
    let z2 = make_split_ring(2).unwrap();
    for p in [2u64, 3, 5] {
        for k in 0..=3u32 {
            for l in 0..=3u32 {
                let got = count_for_diagonal(&z2, p, &[k, l], false).unwrap();
                assert_eq!(got, big(plane_brute(p, k, l, false)), "p={p} k={k} l={l}");
                let got = count_for_diagonal(&z2, p, &[k, l], true).unwrap();
                assert_eq!(
                    got,
                    big(plane_brute(p, k, l, true)),
                    "unital p={p} k={k} l={l}"
                );
            }
        }
    }
}

#[test]
fn index_counts() {
    assert_eq!(
        count_index(&make_split_ring(4).unwrap(), 7, 1, false).unwrap(),
        big(10)
    );
    assert_eq!(
        count_index(&make_split_ring(4).unwrap(), 2, 1, false).unwrap(),
        big(10)
    );
    let g = make_monogenic_ring(&"x^3-2".parse().unwrap()).unwrap();
    assert_eq!(count_index(&g, 5, 0, false).unwrap(), big(1));
    assert_eq!(
        count_index(&make_split_ring(2).unwrap(), 3, 2, false).unwrap(),
        big(4)
    );
}

#[test]
fn strategies_agree() {
    let rings = [
        make_split_ring(3).unwrap(),
        make_monogenic_ring(&"x^2+1".parse().unwrap()).unwrap(),
        make_unramified_product(3, &"1^1 2^1".parse().unwrap()).unwrap(),
    ];
    for r in &rings {
        for unital in [false, true] {
            let base = Counter::new()
                .with_strategy(Strategy::Exhaustive)
                .count_index(r, 3, 2, unital)
                .unwrap();
            for s in [Strategy::Auto, Strategy::RowPruned, Strategy::EntryPruned] {
                let c = Counter::new().with_strategy(s);
                match c.count_index(r, 3, 2, unital) {
                    Ok(v) => assert_eq!(v, base, "{} {s:?}", r.label()),
                    Err(e) => assert!(s == Strategy::EntryPruned, "{e}"),
                }
            }
        }
    }
}

#[test]
fn volumes() {
    let z2 = make_split_ring(2).unwrap();
    let mu = mu_volume(&z2, 3, &[1, 0]).unwrap();
    assert_eq!((mu.count.clone(), mu.exponent), (big(2), 1));
    assert!((mu.value(3) - 2.0 / 3.0).abs() < 1e-12);
    let mu = mu_volume(&make_split_ring(3).unwrap(), 7, &[0, 0, 0]).unwrap();
    assert_eq!((mu.count, mu.exponent), (big(1), 0));
    let mu = mu_volume(&make_split_ring(3).unwrap(), 5, &[1, 0, 0]).unwrap();
    assert!(mu.value(5) <= 2.0 / 5.0);
}

#[test]
fn local_factors() {
    let z2 = make_split_ring(2).unwrap();
    assert_eq!(
        local_factor_coeffs(&z2, 3, 2, false).unwrap(),
        vec![big(1), big(3), big(4)]
    );
    assert_eq!(local_factor_coeffs(&z2, 3, 0, false).unwrap(), vec![big(1)]);
    let z5 = make_split_ring(5).unwrap();
    assert_eq!(
        local_factor_coeffs(&z5, 3, 1, true).unwrap(),
        vec![big(1), big(10)]
    );
}

#[test]
fn budget_and_prime_errors() {
    let z4 = make_split_ring(4).unwrap();
    let r = Counter::new().with_budget(5).count_index(&z4, 3, 3, false);
    assert!(matches!(r, Err(Error::BudgetExceeded { .. })));
    assert!(matches!(
        count_index(&z4, 4, 1, false),
        Err(Error::NotPrime(4))
    ));
    assert!(matches!(
        count_index(&z4, 2, 70, false),
        Err(Error::ModulusTooLarge { .. })
    ));
}

#[test]
fn representatives_are_closed() {
    let z3 = make_split_ring(3).unwrap();
    let reps = Counter::new()
        .representatives(&z3, 2, &[1, 1, 0], false, 100)
        .unwrap();
    assert_eq!(
        BigUint::from(reps.len()),
        count_for_diagonal(&z3, 2, &[1, 1, 0], false).unwrap()
    );
    for r in &reps {
        assert!(closure_check(&z3, r).unwrap());
        for row in r.rows() {
            for w in r.rows() {
                assert!(lattice_contains(r, &z3.multiply(&row, &w)).unwrap());
            }
        }
    }
}

#[test]
fn cache_hits_match() {
    let dir = std::env::temp_dir().join(format!("sz-cache-{}", std::process::id()));
    let _ = std::fs::remove_file(&dir);
    let table = std::sync::Arc::new(LocalCountTable::open(&dir).unwrap());
    let c = Counter::new().with_table(table.clone());
    let z3 = make_split_ring(3).unwrap();
    let first = c.count_index(&z3, 3, 3, false).unwrap();
    assert_eq!(table.len(), 1);
    let again = LocalCountTable::open(&dir).unwrap();
    assert_eq!(again.get(&z3.digest(), 3, 3, false), Some(first.clone()));
    assert_eq!(
        Counter::new().compute_index(&z3, 3, 3, false).unwrap(),
        first
    );
    let _ = std::fs::remove_file(&dir);
}
