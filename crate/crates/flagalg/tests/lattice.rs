use std::collections::{BTreeSet, HashMap, HashSet};

use flagalg::gf::GaloisField;
use flagalg::lattice::{
    check_bucket_sizes, check_cover_counts, check_diamonds, check_interval_counts, count_m_covered, count_m_covering,
    enumerate_lattice, lattice_size, matrix_cover_criterion, Lattice, Location,
};
use proptest::prelude::*;

/// Subspaces of `F_p^N` as sets of vectors, vectors encoded base p with
/// coordinate 1 most significant.
struct Brute {
    p: u32,
    n: usize,
    spaces: Vec<BTreeSet<u32>>,
}

fn digits(p: u32, n: usize, v: u32) -> Vec<u32> {
    (0..n).map(|i| v / p.pow((n - 1 - i) as u32) % p).collect()
}

fn encode(p: u32, d: &[u32]) -> u32 {
    d.iter().fold(0, |acc, &x| acc * p + x)
}

fn add(p: u32, n: usize, a: u32, b: u32) -> u32 {
    let (x, y) = (digits(p, n, a), digits(p, n, b));
    encode(p, &x.iter().zip(&y).map(|(u, v)| (u + v) % p).collect::<Vec<_>>())
}

fn scale(p: u32, n: usize, c: u32, a: u32) -> u32 {
    encode(p, &digits(p, n, a).iter().map(|u| u * c % p).collect::<Vec<_>>())
}

fn span_with(p: u32, n: usize, space: &BTreeSet<u32>, v: u32) -> BTreeSet<u32> {
    let mut out = BTreeSet::new();
    for &w in space {
        for c in 0..p {
            out.insert(add(p, n, w, scale(p, n, c, v)));
        }
    }
    out
}

impl Brute {
    fn new(p: u32, n: usize) -> Self {
        let total = p.pow(n as u32);
        let zero: BTreeSet<u32> = [0].into();
        let mut seen: HashSet<BTreeSet<u32>> = HashSet::new();
        let mut frontier = vec![zero.clone()];
        seen.insert(zero);
        while let Some(s) = frontier.pop() {
            for v in 0..total {
                if !s.contains(&v) {
                    let t = span_with(p, n, &s, v);
                    if seen.insert(t.clone()) {
                        frontier.push(t);
                    }
                }
            }
        }
        Brute { p, n, spaces: seen.into_iter().collect() }
    }

    fn dim(&self, s: &BTreeSet<u32>) -> usize {
        let mut d = 0;
        while (self.p as usize).pow(d as u32) < s.len() {
            d += 1;
        }
        d
    }

    /// `mu_m = dim(y ∩ x_m) - dim(y ∩ x_{m-1})` with `x_m` the vectors
    /// vanishing beyond coordinate m.
    fn location(&self, s: &BTreeSet<u32>) -> Vec<u8> {
        let dims: Vec<usize> = (0..=self.n)
            .map(|m| {
                let inside: BTreeSet<u32> =
                    s.iter().copied().filter(|&v| digits(self.p, self.n, v)[m..].iter().all(|&d| d == 0)).collect();
                self.dim(&inside)
            })
            .collect();
        (1..=self.n).map(|m| (dims[m] - dims[m - 1]) as u8).collect()
    }
}

fn vectors_of(lat: &Lattice, id: usize) -> BTreeSet<u32> {
    let p = lat.q() as u32;
    let n = lat.n();
    let canon = &lat.get(id).canon;
    let mut s: BTreeSet<u32> = [0].into();
    for r in 0..canon.rows() {
        let row: Vec<u32> = canon.row(r).iter().map(|e| e.0 as u32).collect();
        s = span_with(p, n, &s, encode(p, &row));
    }
    s
}

fn matching(lat: &Lattice, brute: &Brute) -> HashMap<BTreeSet<u32>, usize> {
    (0..lat.len())
        .map(|id| (vectors_of(lat, id), id))
        .collect::<HashMap<_, _>>()
        .into_iter()
        .inspect(|(s, _)| assert!(brute.spaces.contains(s)))
        .collect()
}

#[test]
fn enumeration_matches_brute_force_subspaces() {
    for (q, n) in [(2, 1), (2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)] {
        let gf = GaloisField::builtin(q).unwrap();
        let lat = enumerate_lattice(&gf, n, None).unwrap();
        let brute = Brute::new(q as u32, n);
        assert_eq!(lat.len(), brute.spaces.len(), "q={q} N={n}");
        assert_eq!(lat.len() as u128, lattice_size(q, n));
        let map = matching(&lat, &brute);
        assert_eq!(map.len(), lat.len(), "distinct points");
        for (s, &id) in &map {
            assert_eq!(brute.location(s), lat.get(id).location.to_vec(), "location of point {id}");
        }
        check_bucket_sizes(&lat).unwrap();
    }
}

#[test]
fn small_lattice_examples() {
    let gf = GaloisField::builtin(2).unwrap();
    let lat = enumerate_lattice(&gf, 2, None).unwrap();
    let sizes: Vec<(String, usize)> = lat.buckets().iter().map(|(mu, r)| (mu.to_string(), r.len())).collect();
    assert_eq!(sizes, vec![("00".into(), 1), ("01".into(), 2), ("10".into(), 1), ("11".into(), 1)]);
    assert_eq!(enumerate_lattice(&gf, 3, None).unwrap().len(), 16);
    let gf3 = GaloisField::builtin(3).unwrap();
    let lat3 = enumerate_lattice(&gf3, 2, None).unwrap();
    assert_eq!(lat3.bucket(Location::parse("01").unwrap()).len(), 3);
    assert!(enumerate_lattice(&gf, 5, Some(100)).is_err());
}

#[test]
fn cover_relation_matches_brute_force() {
    for (q, n) in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3)] {
        let gf = GaloisField::builtin(q).unwrap();
        let lat = enumerate_lattice(&gf, n, None).unwrap();
        let brute = Brute::new(q as u32, n);
        let map = matching(&lat, &brute);
        let mut expected: Vec<BTreeSet<(usize, usize)>> = vec![BTreeSet::new(); n];
        for y in &brute.spaces {
            for z in &brute.spaces {
                if z.len() * q as usize == y.len() && z.is_subset(y) {
                    let (ly, lz) = (brute.location(y), brute.location(z));
                    let diff: Vec<usize> = (0..n).filter(|&i| ly[i] != lz[i]).collect();
                    assert_eq!(diff.len(), 1);
                    assert_eq!((ly[diff[0]], lz[diff[0]]), (1, 0));
                    expected[diff[0]].insert((map[z], map[y]));
                }
            }
        }
        for m in 1..=n {
            let got: BTreeSet<(usize, usize)> = lat.cover_pairs(m).into_iter().collect();
            assert_eq!(got, expected[m - 1], "q={q} N={n} m={m}");
        }
    }
}

#[test]
fn cover_counts_match_adjacency() {
    for (q, n) in [(2, 1), (2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (3, 4)] {
        let gf = GaloisField::builtin(q).unwrap();
        let lat = enumerate_lattice(&gf, n, None).unwrap();
        check_cover_counts(&lat).unwrap();
        for y in 0..lat.len() {
            let mu = lat.get(y).location;
            for m in 1..=n {
                assert_eq!(lat.lower_covers(y, m).len() as u128, count_m_covered(q, mu, m));
                assert_eq!(lat.upper_covers(y, m).len() as u128, count_m_covering(q, mu, m));
                for &z in lat.lower_covers(y, m) {
                    assert!(lat.m_covers(y, z, m));
                }
            }
        }
    }
}

#[test]
fn cover_count_examples() {
    let full = Location::ones(2);
    assert_eq!(count_m_covered(2, full, 1), 2);
    assert_eq!(count_m_covered(2, Location::zero(2), 1), 0);
    assert_eq!(count_m_covered(2, Location::zero(2), 2), 0);
    assert_eq!(count_m_covering(3, Location::parse("01").unwrap(), 1), 1);
}

#[test]
fn interval_and_diamond_properties() {
    for (q, n) in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (3, 4)] {
        let gf = GaloisField::builtin(q).unwrap();
        let lat = enumerate_lattice(&gf, n, None).unwrap();
        check_interval_counts(&lat).unwrap();
        check_diamonds(&lat).unwrap();
    }
}

#[test]
fn location_map_is_order_preserving_and_onto() {
    for n in 1..=4 {
        let gf = GaloisField::builtin(2).unwrap();
        let lat = enumerate_lattice(&gf, n, None).unwrap();
        for y in 0..lat.len() {
            for z in 0..lat.len() {
                if lat.contains(y, z) {
                    assert!(lat.get(z).location.le(&lat.get(y).location));
                }
            }
        }
        for mu in Location::all(n) {
            assert!(!lat.bucket(mu).is_empty());
        }
    }
}

#[test]
fn matrix_criterion_agrees_with_covers() {
    let gf = GaloisField::builtin(2).unwrap();
    for n in 2..=4 {
        let lat = enumerate_lattice(&gf, n, None).unwrap();
        let (zero, one) = (Location::zero(n), Location::ones(n));
        for mu in Location::all(n) {
            for m in mu.t_set() {
                let nu = mu.shifted(m, -1).unwrap();
                if mu == one || nu == zero {
                    continue;
                }
                for y in lat.bucket(mu) {
                    for z in lat.bucket(nu) {
                        let crit =
                            matrix_cover_criterion(&gf, &lat.get(y).matrix_form, &lat.get(z).matrix_form, m).unwrap();
                        assert_eq!(crit, lat.m_covers(y, z, m), "N={n} y={y} z={z} m={m}");
                        if crit {
                            assert!(lat.contains(y, z));
                        }
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn every_point_roundtrips_through_find(q in prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9]), n in 1usize..=3) {
        let gf = GaloisField::builtin(q).unwrap();
        let lat = enumerate_lattice(&gf, n, None).unwrap();
        for s in lat.subspaces() {
            prop_assert_eq!(lat.find(&s.canon).unwrap(), s.id);
            prop_assert_eq!(lat.find_form(&s.matrix_form), s.id);
            prop_assert_eq!(s.dim(), s.location.weight());
        }
        let covers: usize = (1..=n).map(|m| lat.cover_pairs(m).len()).sum();
        let expected: u128 = lat.subspaces().iter()
            .map(|s| (1..=n).map(|m| count_m_covered(q, s.location, m)).sum::<u128>())
            .sum();
        prop_assert_eq!(covers as u128, expected);
    }
}
