use malcev::equivalence::{check_morphism_pair, MorphPair};
use malcev::flag::{flag_datum, flag_equiv, random_candidate, transform};
use malcev::unified::{build_unified, extract_datum, phi_iso_check, Projection};
use malcev::{io, sample, Field, Matrix, MalcevAlgebra};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn gf(p: u64) -> Field {
    Field::prime(p).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn algebra_text_round_trips(seed in any::<u64>(), n in 1usize..5, p in prop::sample::select(vec![5u64, 7, 11])) {
        let a = sample::algebra(&mut rng(seed), gf(p), n);
        let text = io::write_algebra(&a);
        prop_assert_eq!(io::parse_algebra(&text).unwrap(), a);
    }

    #[test]
    fn datum_text_round_trips(seed in any::<u64>(), n in 1usize..3, k in 1usize..3) {
        let mut r = rng(seed);
        let m = sample::malcev_algebra(&mut r, gf(5), n);
        let d = sample::sparse_datum(&mut r, &m, k);
        prop_assert_eq!(io::parse_datum(&io::write_datum(&d)).unwrap(), d);
    }

    #[test]
    fn transforms_compose_additively(seed in any::<u64>(), n in 1usize..4) {
        let mut r = rng(seed);
        let f = gf(7);
        let m = sample::malcev_algebra(&mut r, f, n);
        let td = random_candidate(&mut r, &m);
        let (r1, r2) = (sample::vector(&mut r, f, n), sample::vector(&mut r, f, n));
        let twice = transform(&m, &transform(&m, &td, &r1).unwrap(), &r2).unwrap();
        prop_assert_eq!(twice, transform(&m, &td, &(&r1 + &r2)).unwrap());
    }

    #[test]
    fn flag_equivalence_is_symmetric(seed in any::<u64>(), n in 1usize..4) {
        let mut r = rng(seed);
        let f = gf(5);
        let m = sample::malcev_algebra(&mut r, f, n);
        let td = random_candidate(&mut r, &m);
        let other = if seed % 2 == 0 { random_candidate(&mut r, &m) } else { transform(&m, &td, &sample::vector(&mut r, f, n)).unwrap() };
        prop_assert_eq!(flag_equiv(&m, &td, &other).unwrap().equivalent, flag_equiv(&m, &other, &td).unwrap().equivalent);
    }

    #[test]
    fn psi_links_transformed_flags(seed in any::<u64>(), n in 1usize..4) {
        let mut r = rng(seed);
        let f = gf(7);
        let m = sample::malcev_algebra(&mut r, f, n);
        let td = random_candidate(&mut r, &m);
        let shift = sample::vector(&mut r, f, n);
        let td2 = transform(&m, &td, &shift).unwrap();
        let mp = MorphPair { r: Matrix::from_columns(f, n, &[shift]), s: Matrix::identity(f, 1) };
        let rep = check_morphism_pair(&flag_datum(&m, &td).unwrap(), &flag_datum(&m, &td2).unwrap(), &mp).unwrap();
        prop_assert!(rep.direct_verdict() && rep.printed_verdict());
    }

    #[test]
    fn extraction_rebuilds_an_isomorphic_algebra(seed in any::<u64>(), n in 1usize..3, k in 1usize..3) {
        let mut r = rng(seed);
        let e: MalcevAlgebra = sample::malcev_algebra(&mut r, gf(5), n + k);
        let sub: Vec<usize> = (0..n).collect();
        if let Ok(pr) = Projection::coordinate(&e, &sub) {
            let d = extract_datum(&pr).unwrap();
            prop_assert!(phi_iso_check(&e, &pr, &d).unwrap().overall());
            prop_assert!(build_unified(&d).unwrap().is_malcev());
        }
    }
}
