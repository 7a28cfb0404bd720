//! Property tests over small corpus knots and generator families.

use khlab::complex::{boundary_matrix, boundary_matrix_jw, chain_dimensions};
use khlab::corpus::{knots_le8, NamedDiagram};
use khlab::degree_zero_graph::{build_graph, degree_zero_profile, raw_quantum_degree, signless_laplacian};
use khlab::jones::{jones, kauffman_bracket_recursive, kauffman_bracket_statesum};
use khlab::knot_io::{parse_pd, render, torus_knot_2n, twisted_unknot, twisted_unknot_with, Handedness};
use khlab::qalg_emulator::loop_lipschitz_check;
use khlab::resolution::build_cube;
use khlab::KhovanovComplex;
use proptest::prelude::*;

fn small_corpus() -> Vec<NamedDiagram> {
    knots_le8().into_iter().filter(|k| k.knot.m() <= 6).collect()
}

fn corpus_index() -> impl Strategy<Value = usize> {
    0..small_corpus().len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn betti_invariant_under_crossing_order(idx in corpus_index(), seed in any::<u64>()) {
        let k = &small_corpus()[idx];
        let mut perm: Vec<usize> = (0..k.knot.m()).collect();
        let mut s = seed;
        for i in (1..perm.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let p = k.knot.permute_crossings(&perm).unwrap();
        let a = KhovanovComplex::new(&k.knot, &build_cube(&k.knot).unwrap()).betti_table("a").unwrap().nonzero();
        let b = KhovanovComplex::new(&p, &build_cube(&p).unwrap()).betti_table("b").unwrap().nonzero();
        prop_assert_eq!(a, b);
        prop_assert_eq!(jones(&k.knot), jones(&p));
    }

    #[test]
    fn render_round_trips(idx in corpus_index()) {
        let k = &small_corpus()[idx].knot;
        prop_assert_eq!(&parse_pd(&render(k)).unwrap(), k);
    }

    #[test]
    fn mirror_flips_jones(idx in corpus_index()) {
        let k = &small_corpus()[idx].knot;
        prop_assert_eq!(jones(&k.mirror()), jones(k).mirror());
    }

    #[test]
    fn brackets_agree_on_twists(n in 1usize..9, positive in any::<bool>()) {
        let hand = if positive { Handedness::Positive } else { Handedness::Negative };
        let k = twisted_unknot_with(n, hand);
        prop_assert_eq!(kauffman_bracket_recursive(&k), kauffman_bracket_statesum(&build_cube(&k).unwrap()));
    }

    #[test]
    fn boundary_squares_to_zero_on_torus(half in 1usize..4) {
        let k = torus_knot_2n(2 * half + 1).unwrap();
        let cube = build_cube(&k).unwrap();
        for &(i, j) in chain_dimensions(&cube).keys() {
            let d0 = boundary_matrix(&k, &cube, i, j);
            let d1 = boundary_matrix(&k, &cube, i + 1, j);
            prop_assert!(d1.mul(&d0).is_zero());
            prop_assert_eq!(d0, boundary_matrix_jw(&k, &cube, i, j));
        }
    }

    #[test]
    fn graph_laplacian_matches_homology(n in 1usize..7, k in 0usize..8) {
        let knot = twisted_unknot(n);
        let cube = build_cube(&knot).unwrap();
        let prof = degree_zero_profile(&cube);
        let k = k.min(prof.ell());
        let q = signless_laplacian(&build_graph(&prof, k));
        let cx = KhovanovComplex::new(&knot, &cube);
        prop_assert_eq!(q.to_dense(), cx.laplacian(0, raw_quantum_degree(prof.ell(), k)).matrix.to_dense());
    }

    #[test]
    fn loop_count_is_lipschitz(idx in corpus_index()) {
        let cube = build_cube(&small_corpus()[idx].knot).unwrap();
        prop_assert!(loop_lipschitz_check(&cube).holds);
    }
}
