use flagalg::algebra::{
    all_passed, build_chi_basis, build_e_lambda, build_generators, check_chi_orthogonality, check_projectors_from_k,
    chi_cross_check, decompose_standard_module, kernel_spaces, point_types, reconstruct_projectors_from_k,
    verify_decomposition, verify_h_relations, verify_kernel_spaces, verify_projectors, Check,
};
use flagalg::combin::Shape;
use flagalg::exactnum::{rat, CycRational, SqrtExt};
use flagalg::gf::GaloisField;
use flagalg::lattice::{count_m_covered, enumerate_lattice, Lattice, Location};
use flagalg::linalg::{rank_of, SparseMatrix};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn lattice(q: u64, n: usize) -> Lattice {
    enumerate_lattice(&GaloisField::builtin(q).unwrap(), n, None).unwrap()
}

fn assert_checks(checks: &[Check]) {
    for c in checks {
        assert!(c.passed, "{}: {:?}", c.name, c.witness);
    }
}

fn loc(s: &str) -> Location {
    Location::parse(s).unwrap()
}

#[test]
fn generator_examples() {
    let lat = lattice(2, 2);
    let g = build_generators(&lat);
    assert_eq!(g.l(1).nnz(), 3);
    for m in 1..=2 {
        let expected: u128 = lat.subspaces().iter().map(|y| count_m_covered(2, y.location, m)).sum();
        assert_eq!(g.l(m).nnz() as u128, expected);
        assert!(g.l(m).entries().all(|(_, _, v)| v.is_one()));
    }
    let sum = g.e_star.iter().fold(SparseMatrix::zeros(5, 5), |a, b| a.add(b));
    assert_eq!(sum, SparseMatrix::identity(5));

    let g4 = build_generators(&lattice(4, 2));
    let zero_point = g4.bucket(Location::zero(2)).start;
    assert_eq!(g4.k(1).get(zero_point, zero_point), SqrtExt::from_int(2));
}

#[test]
fn h_relations_hold_on_small_lattices() {
    for (q, n) in [(2, 1), (2, 2), (2, 3), (3, 2), (3, 3), (4, 2)] {
        let g = build_generators(&lattice(q, n));
        let checks = verify_h_relations(&g);
        assert_eq!(checks.len(), 10);
        assert_checks(&checks);
    }
}

#[test]
fn location_projectors_from_weights() {
    let g = build_generators(&lattice(2, 1));
    let rec = reconstruct_projectors_from_k(&g).unwrap();
    assert_eq!(rec[0].get(0, 0), SqrtExt::one());
    assert_eq!(rec[0].get(1, 1), SqrtExt::zero());
    for (q, n) in [(2, 1), (2, 2), (3, 3)] {
        let g = build_generators(&lattice(q, n));
        assert_checks(&[check_projectors_from_k(&g)]);
    }
}

#[test]
fn projector_example_on_two_lines() {
    let g = build_generators(&lattice(2, 2));
    let fam = build_e_lambda(&g).unwrap();
    let mu = loc("01");
    let empty = fam.block(mu, &Shape::empty()).unwrap();
    assert_eq!(empty.basis.len(), 1);
    assert_eq!(empty.eigenvalues, vec![rat(2), rat(2)]);
    let full = fam.block(mu, &Shape::new(vec![1, 2])).unwrap();
    assert_eq!(full.basis.len(), 1);
    assert_eq!(full.eigenvalues, vec![rat(0), rat(0)]);
    assert_eq!(fam.block_dim(Location::zero(2), &Shape::empty()), 1);
    for (mu, range) in lattice(2, 2).buckets() {
        let total: usize = fam.blocks.iter().filter(|b| b.mu == *mu).map(|b| b.basis.len()).sum();
        assert_eq!(total, range.len());
    }
}

#[test]
fn projector_family_is_consistent() {
    for (q, n) in [(2, 1), (2, 2), (2, 3), (3, 2), (3, 3), (2, 4)] {
        let g = build_generators(&lattice(q, n));
        let fam = build_e_lambda(&g).unwrap();
        assert_checks(&verify_projectors(&g, &fam));
    }
}

#[test]
fn character_vector_examples() {
    let lat = lattice(2, 2);
    let chi = build_chi_basis(&lat, 1);
    let one = CycRational::from_rational(2, rat(1));
    let minus = CycRational::from_rational(2, rat(-1));
    let r = lat.bucket(loc("01"));
    let (a, b) = (r.start, r.start + 1);
    assert_eq!(chi.vectors[a][a], one);
    assert_eq!(chi.vectors[a][b], one);
    assert_eq!(chi.vectors[b][a], one);
    assert_eq!(chi.vectors[b][b], minus);
    let h = lat.bucket(Location::ones(2)).start;
    for z in 0..lat.len() {
        let want = if z == h { one.clone() } else { CycRational::zero_in(2) };
        assert_eq!(chi.vectors[h][z], want);
    }
}

#[test]
fn character_basis_matches_projectors() {
    for (q, n) in [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2), (4, 3), (5, 2)] {
        let lat = lattice(q, n);
        let g = build_generators(&lat);
        let fam = build_e_lambda(&g).unwrap();
        let p = lat.gf().p();
        let chars: Vec<u32> = if p > 2 { vec![1, 2] } else { vec![1] };
        for c in chars {
            let chi = build_chi_basis(&lat, c);
            assert_checks(&[check_chi_orthogonality(&lat, &chi)]);
            assert_checks(&chi_cross_check(&lat, &g, &fam, &chi));
        }
    }
}

#[test]
fn type_counts_per_location_equal_block_dimensions() {
    for (q, n) in [(2, 3), (3, 3)] {
        let lat = lattice(q, n);
        let g = build_generators(&lat);
        let fam = build_e_lambda(&g).unwrap();
        let types = point_types(&lat);
        for b in &fam.blocks {
            let count = lat.bucket(b.mu).filter(|&y| types[y] == b.lambda).count();
            assert_eq!(count, b.basis.len(), "mu={} lambda={}", b.mu, b.lambda);
        }
    }
}

fn table(q: u64, n: usize) -> Vec<(String, Vec<usize>, usize, usize)> {
    let g = build_generators(&lattice(q, n));
    let fam = build_e_lambda(&g).unwrap();
    decompose_standard_module(&g, &fam)
        .into_iter()
        .map(|d| (d.endpoint.to_string(), d.shape.elems().to_vec(), d.dim, d.multiplicity))
        .collect()
}

#[test]
fn decomposition_examples() {
    assert_eq!(table(2, 2), vec![("00".into(), vec![], 4, 1), ("01".into(), vec![1, 2], 1, 1)]);
    assert_eq!(table(3, 2), vec![("00".into(), vec![], 4, 1), ("01".into(), vec![1, 2], 1, 2)]);
    for (mu, _, _, _) in table(2, 3) {
        assert!(mu.starts_with('0'), "endpoint {mu} admits no column-full shape");
    }
}

#[test]
fn decomposition_is_complete_and_irreducible() {
    for (q, n) in [(2, 1), (2, 2), (2, 3), (3, 2), (3, 3), (2, 4)] {
        let lat = lattice(q, n);
        let g = build_generators(&lat);
        let fam = build_e_lambda(&g).unwrap();
        let descs = decompose_standard_module(&g, &fam);
        assert!(descs.iter().all(|d| d.multiplicity > 0));
        assert_checks(&verify_decomposition(&lat, &g, &descs));
    }
}

#[test]
fn kernel_space_examples() {
    let lat = lattice(2, 2);
    let g = build_generators(&lat);
    let fam = build_e_lambda(&g).unwrap();
    let ks = kernel_spaces(&g);
    assert_eq!(ks.new_dim(), 2);
    assert_checks(&verify_kernel_spaces(&g, &fam, &ks));
    let h = lat.bucket(Location::ones(2)).start;
    let old: Vec<_> = ks.old.iter().flat_map(|(_, b)| b.iter().cloned()).collect();
    let new: Vec<_> = ks.new.iter().flat_map(|(_, b)| b.iter().cloned()).collect();
    let mut e_h = vec![rat(0); lat.len()];
    e_h[h] = rat(1);
    assert_eq!(rank_of(lat.len(), &[old.clone(), vec![e_h]].concat()), old.len());
    // dim(new ∩ old) = dim new + dim old - dim(new + old)
    let both = new.len() + old.len() - rank_of(lat.len(), &[new, old].concat());
    assert_eq!(both, 1);
    assert_eq!(fam.block_dim(loc("01"), &Shape::new(vec![1, 2])), 1);
}

#[test]
fn kernel_spaces_match_blocks() {
    for (q, n) in [(2, 3), (3, 2), (3, 3), (2, 4)] {
        let g = build_generators(&lattice(q, n));
        let fam = build_e_lambda(&g).unwrap();
        assert_checks(&verify_kernel_spaces(&g, &fam, &kernel_spaces(&g)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn relations_and_projectors_for_random_fields(q in prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9]), n in 1usize..=2) {
        let lat = lattice(q, n);
        let g = build_generators(&lat);
        prop_assert!(all_passed(&verify_h_relations(&g)));
        let fam = build_e_lambda(&g).unwrap();
        prop_assert!(all_passed(&verify_projectors(&g, &fam)));
        let descs = decompose_standard_module(&g, &fam);
        prop_assert!(all_passed(&verify_decomposition(&lat, &g, &descs)));
    }
}
