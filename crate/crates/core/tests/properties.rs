use num_bigint::BigUint;
use num_rational::Rational64;
use proptest::prelude::*;
use proptest::strategy::Strategy;
use subring_zeta::galois::perm_from_cycles;
use subring_zeta::oracle::oracle_accepts;
use subring_zeta::*;

fn monic(tail: &[i64]) -> IntPoly {
    IntPoly::monic_from_tail(tail)
}

fn small_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7, 11, 13])
}

fn splitting_type(max_n: usize) -> impl Strategy<Value = SplittingType> {
    (1..=max_n).prop_flat_map(|n| prop::sample::select(SplittingType::all_of(n)))
}

fn small_ring() -> impl Strategy<Value = StructureRing> {
    prop_oneof![
        (1usize..=3).prop_map(|d| make_split_ring(d).unwrap()),
        prop::collection::vec(-3i64..=3, 1..=3)
            .prop_map(|t| make_monogenic_ring(&monic(&t)).unwrap()),
        (prop::sample::select(vec![2u64, 3]), splitting_type(3))
            .prop_map(|(p, ty)| make_unramified_product(p, &ty).unwrap()),
    ]
}

/// Random reduced HNF with exponents at most 2.
fn hnf(d: usize, p: u64) -> impl Strategy<Value = HnfRep> {
    (
        prop::collection::vec(0u32..=2, d),
        prop::collection::vec(any::<u64>(), d * d),
    )
        .prop_map(move |(diag, seeds)| {
            let below = (0..d)
                .map(|i| (0..i).map(|j| seeds[i * d + j] % p.pow(diag[j])).collect())
                .collect();
            HnfRep::new(p, diag, below).unwrap()
        })
}

fn perm(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((1..=n).collect::<Vec<usize>>()).prop_shuffle()
}

fn group_from_images(n: usize, gens: &[Vec<usize>]) -> PermGroup {
    let gens = gens
        .iter()
        .map(|img| img.iter().map(|&x| (x - 1) as u16).collect())
        .collect();
    close_group(n, gens).unwrap()
}

proptest! {
    #[test]
    fn monogenic_rings_validate(tail in prop::collection::vec(-9i64..=9, 1..=5)) {
        let r = make_monogenic_ring(&monic(&tail)).unwrap();
        prop_assert!(r.validate().is_ok());
    }

    #[test]
    fn unramified_products_validate(p in small_prime(), ty in splitting_type(6)) {
        let r = make_unramified_product(p, &ty).unwrap();
        prop_assert_eq!(r.rank(), ty.n());
        prop_assert!(r.validate().is_ok());
    }

    #[test]
    fn degree_one_type_is_split(p in small_prime(), d in 1usize..=8) {
        let ty = SplittingType::new(vec![1; d]).unwrap();
        prop_assert_eq!(
            make_unramified_product(p, &ty).unwrap().digest(),
            make_split_ring(d).unwrap().digest()
        );
    }

    #[test]
    fn product_is_associative(a in small_ring(), b in small_ring(), c in small_ring()) {
        let left = product_ring(&product_ring(&a, &b).unwrap(), &c).unwrap();
        let right = product_ring(&a, &product_ring(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left.digest(), right.digest());
    }

    #[test]
    fn split_ring_from_spec_json(ring in small_ring()) {
        let back = StructureRing::from_spec_json(&ring.to_spec_json().to_string()).unwrap();
        prop_assert_eq!(back.digest(), ring.digest());
    }

    #[test]
    fn closure_matches_oracle(
        (ring, rep) in small_ring().prop_flat_map(|r| {
            let d = r.rank();
            (Just(r), prop::sample::select(vec![2u64, 3]).prop_flat_map(move |p| hnf(d, p)))
        })
    ) {
        prop_assert_eq!(closure_check(&ring, &rep).unwrap(), oracle_accepts(&ring, &rep, false).unwrap());
        prop_assert_eq!(
            closure_check(&ring, &rep).unwrap() && unital_check(&ring, &rep).unwrap(),
            oracle_accepts(&ring, &rep, true).unwrap()
        );
    }

    #[test]
    fn burnside_equals_orbits(
        (n, gens) in (1usize..=7).prop_flat_map(|n| (Just(n), prop::collection::vec(perm(n), 0..=3)))
    ) {
        let g = group_from_images(n, &gens);
        prop_assert_eq!(burnside_r(&g), Rational64::from_integer(r2_orbits(&g) as i64));
        prop_assert_eq!(cycle_stats(&g).total(), g.order() as u64);
        prop_assert_eq!(5040 % g.order(), 0);
    }

    #[test]
    fn cycles_and_images_agree(img in (2usize..=7).prop_flat_map(perm)) {
        // rebuild the same permutation from its cycle decomposition
        let n = img.len();
        let mut seen = vec![false; n + 1];
        let mut cycles = Vec::new();
        for s in 1..=n {
            if seen[s] { continue; }
            let mut c = vec![];
            let mut x = s;
            while !seen[x] { seen[x] = true; c.push(x); x = img[x - 1]; }
            cycles.push(c);
        }
        let g = perm_from_cycles(n, &cycles).unwrap();
        let want: Vec<u16> = img.iter().map(|&x| (x - 1) as u16).collect();
        prop_assert_eq!(g, want);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn oracle_matches_local_counts(ring in small_ring(), p in prop::sample::select(vec![2u64, 3]), m in 0u32..=2, unital: bool) {
        let local = count_index(&ring, p, m, unital).unwrap();
        let global = count_global(&ring, p.pow(m), unital).unwrap();
        prop_assert_eq!(local, BigUint::from(global));
    }

    #[test]
    fn unital_at_most_non_unital(ring in small_ring(), p in prop::sample::select(vec![2u64, 3, 5]), m in 0u32..=3) {
        prop_assert!(count_index(&ring, p, m, true).unwrap() <= count_index(&ring, p, m, false).unwrap());
    }

    #[test]
    fn duality(d in 2usize..=4, p in prop::sample::select(vec![2u64, 3, 5]), m in 0u32..=3) {
        prop_assert_eq!(
            count_index(&make_split_ring(d).unwrap(), p, m, true).unwrap(),
            count_index(&make_split_ring(d - 1).unwrap(), p, m, false).unwrap()
        );
    }

    #[test]
    fn worker_count_is_irrelevant(ring in small_ring(), p in prop::sample::select(vec![2u64, 3]), m in 1u32..=3, unital: bool) {
        let run = |threads| {
            rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap()
                .install(|| count_index(&ring, p, m, unital).unwrap())
        };
        let one = run(1);
        prop_assert_eq!(&one, &run(4));
        prop_assert_eq!(one, count_index(&ring, p, m, unital).unwrap());
    }

    #[test]
    fn assembled_series_matches_oracle(tail in prop::collection::vec(-4i64..=4, 1..=2)) {
        let f = monic(&tail);
        let ring = make_monogenic_ring(&f).unwrap();
        let prof = assemble_counts(&Family::Monogenic(f), 30, &RamifiedPolicy::Direct, &Counter::new()).unwrap();
        prop_assert_eq!(prof.first_multiplicativity_failure(30), None);
        for k in 1..=30u64 {
            prop_assert_eq!(&prof.f[k as usize], &BigUint::from(count_global(&ring, k, true).unwrap()), "k={}", k);
        }
    }
}

#[test]
fn closed_forms_match_orbits() {
    for n in 3..=12 {
        for kind in [GroupKind::Cyclic(n), GroupKind::Dihedral(n)] {
            let g = kind.build().unwrap();
            assert_eq!(r2_closed_forms(&kind).unwrap(), r2_orbits(&g), "{kind}");
        }
    }
    for n in 3..=8 {
        for kind in [GroupKind::Symmetric(n), GroupKind::Alternating(n)] {
            let g = kind.build().unwrap();
            assert_eq!(r2_closed_forms(&kind).unwrap(), r2_orbits(&g), "{kind}");
        }
    }
}

#[test]
fn split_families_are_multiplicative() {
    for (d, bound) in [(2usize, 30u64), (3, 30), (4, 30)] {
        let prof = assemble_counts(
            &Family::Split(d),
            bound,
            &RamifiedPolicy::Error,
            &Counter::new(),
        )
        .unwrap();
        assert_eq!(prof.first_multiplicativity_failure(bound), None);
        let ring = make_split_ring(d).unwrap();
        for k in 1..=bound {
            assert_eq!(
                prof.f[k as usize],
                BigUint::from(count_global(&ring, k, true).unwrap()),
                "d={d} k={k}"
            );
        }
    }
}
