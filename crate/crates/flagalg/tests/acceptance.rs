//! One line per acceptance criterion. Exits nonzero when any criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use flagalg::algebra::{
    build_chi_basis, build_e_lambda, build_generators, check_chi_orthogonality, check_eigenvalue_tables,
    chi_cross_check, decompose_standard_module, kernel_spaces, verify_decomposition, verify_h_relations,
    verify_kernel_spaces, verify_projectors, Check,
};
use flagalg::combin::{
    admissible_shapes, all_forms, all_placements, board, check_rank_inversion, classify_forms, column_full,
    count_matrices_for_placement, enumerate_placements, gen_function_check, kappa_q_identity, kappa_sum_identity,
    multiplicity_formula,
};
use flagalg::exactnum::{rat, ratio, Rational};
use flagalg::gf::GaloisField;
use flagalg::lattice::{
    check_bucket_sizes, check_cover_counts, check_diamonds, check_interval_counts, count_m_covered, count_m_covering,
    enumerate_lattice, lattice_size, Lattice, Location,
};
use flagalg::qaffine::{
    build_chevalley, build_intertwiner, build_pseudo_inverse_actions, check_commutator_scalars, check_general_position,
    check_type_one_one, default_alphas, descriptor_reports, module_commutant, restrict_to_descriptor,
    verify_pseudo_inverse, verify_uq_relations,
};

const DESK: [(u64, usize); 9] = [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (4, 2), (4, 3), (5, 2)];

type Outcome = Result<(), String>;

fn lattice(q: u64, n: usize) -> Lattice {
    enumerate_lattice(&GaloisField::builtin(q).unwrap(), n, None).unwrap()
}

fn checks(label: &str, cs: Vec<Check>) -> Outcome {
    match cs.into_iter().find(|c| !c.passed) {
        None => Ok(()),
        Some(c) => Err(format!("{label}: {} ({})", c.name, c.witness.unwrap_or_default())),
    }
}

fn locations_up_to(n: usize) -> Vec<Location> {
    (1..=n).flat_map(Location::all).collect()
}

fn lattice_sizes() -> Outcome {
    for (q, n) in DESK {
        let lat = lattice(q, n);
        check_bucket_sizes(&lat).map_err(|e| format!("q={q} N={n}: {e}"))?;
        if lat.len() as u128 != lattice_size(q, n) {
            return Err(format!("q={q} N={n}: {} points", lat.len()));
        }
    }
    Ok(())
}

fn covering_counts() -> Outcome {
    for q in [2, 3] {
        for n in 1..=4 {
            let lat = lattice(q, n);
            let label = format!("q={q} N={n}");
            for y in 0..lat.len() {
                let mu = lat.get(y).location;
                for m in 1..=n {
                    let below = lat.cover_pairs(m).iter().filter(|&&(_, up)| up == y).count() as u128;
                    let above = lat.cover_pairs(m).iter().filter(|&&(lo, _)| lo == y).count() as u128;
                    if below != count_m_covered(q, mu, m) || above != count_m_covering(q, mu, m) {
                        return Err(format!("{label}: point {y} m={m}"));
                    }
                }
            }
            check_cover_counts(&lat).map_err(|e| format!("{label}: {e}"))?;
            check_interval_counts(&lat).map_err(|e| format!("{label}: {e}"))?;
            check_diamonds(&lat).map_err(|e| format!("{label}: {e}"))?;
        }
    }
    Ok(())
}

fn rook_identities() -> Outcome {
    let mus = locations_up_to(6);
    for q in [2, 3, 4, 7] {
        let q = rat(q);
        for &mu in &mus {
            for lambda in admissible_shapes(mu) {
                let (l, r) = gen_function_check(mu, &lambda, &q).map_err(|e| e.to_string())?;
                if l != r {
                    return Err(format!("mu={mu} lambda={lambda} q={q}: {l} != {r}"));
                }
            }
        }
    }
    for &mu in &mus {
        let b = board(mu);
        for lambda in admissible_shapes(mu) {
            let placements = enumerate_placements(&b, &lambda).map_err(|e| e.to_string())?;
            for m in 1..=mu.n() {
                let count =
                    |p: &flagalg::combin::RookPlacement| p.cells.iter().filter(|&&(s, t)| s <= m && t >= m).count();
                let first = count(&placements[0]);
                if placements.iter().any(|p| count(p) != first) {
                    return Err(format!("mu={mu} lambda={lambda} m={m}: count varies"));
                }
            }
        }
    }
    Ok(())
}

fn sigma_theory() -> Outcome {
    for q in [2u64, 3] {
        let gf = GaloisField::builtin(q).unwrap();
        for mu in locations_up_to(7).into_iter().filter(|mu| mu.board_size() <= 6) {
            for form in all_forms(&gf, mu) {
                check_rank_inversion(&gf, &form)?;
            }
            let classes = classify_forms(&gf, mu);
            for p in all_placements(&board(mu)).into_iter().filter(|p| p.is_column_full()) {
                let want = count_matrices_for_placement(&p, q).map_err(|e| e.to_string())?;
                if classes.get(&p).copied().unwrap_or(0) != want {
                    return Err(format!("q={q} mu={mu} sigma={p}: formula {want}"));
                }
            }
            let mut by_type: BTreeMap<String, u128> = BTreeMap::new();
            for (p, c) in &classes {
                *by_type.entry(p.type_of().to_string()).or_default() += c;
            }
            for lambda in admissible_shapes(mu).into_iter().filter(|l| column_full(mu, l)) {
                let want = multiplicity_formula(mu, &lambda, q).map_err(|e| e.to_string())?;
                let got = by_type.get(&lambda.to_string()).copied().unwrap_or(0);
                if got != want {
                    return Err(format!("q={q} mu={mu} lambda={lambda}: {got} forms, formula {want}"));
                }
            }
        }
    }
    Ok(())
}

fn h_relations() -> Outcome {
    for (q, n) in DESK {
        let g = build_generators(&lattice(q, n));
        checks(&format!("q={q} N={n}"), verify_h_relations(&g))?;
    }
    Ok(())
}

fn spectral_theory() -> Outcome {
    for q in [2, 3] {
        for n in 1..=4 {
            let g = build_generators(&lattice(q, n));
            let label = format!("q={q} N={n}");
            let fam = build_e_lambda(&g).map_err(|e| format!("{label}: {e}"))?;
            checks(&label, verify_projectors(&g, &fam))?;
            checks(&label, vec![check_eigenvalue_tables(&g, &fam)])?;
            checks(&label, verify_kernel_spaces(&g, &fam, &kernel_spaces(&g)))?;
        }
    }
    Ok(())
}

fn characters() -> Outcome {
    for q in [2, 3, 4] {
        for n in 1..=3 {
            let lat = lattice(q, n);
            let g = build_generators(&lat);
            let fam = build_e_lambda(&g)?;
            let cs: Vec<u32> = if lat.gf().p() > 2 { vec![1, 2] } else { vec![1] };
            for c in cs {
                let chi = build_chi_basis(&lat, c);
                let label = format!("q={q} N={n} c={c}");
                checks(&label, vec![check_chi_orthogonality(&lat, &chi)])?;
                checks(&label, chi_cross_check(&lat, &g, &fam, &chi))?;
            }
        }
    }
    Ok(())
}

fn classification() -> Outcome {
    for (q, n) in DESK {
        let lat = lattice(q, n);
        let g = build_generators(&lat);
        let label = format!("q={q} N={n}");
        let fam = build_e_lambda(&g).map_err(|e| format!("{label}: {e}"))?;
        let descs = decompose_standard_module(&g, &fam);
        checks(&label, verify_decomposition(&lat, &g, &descs))?;
        if (q, n) == (2, 2) {
            let table: Vec<(String, Vec<usize>, usize, usize)> = descs
                .iter()
                .map(|d| (d.endpoint.to_string(), d.shape.elems().to_vec(), d.dim, d.multiplicity))
                .collect();
            let want = vec![("00".to_string(), vec![], 4, 1), ("01".to_string(), vec![1, 2], 1, 1)];
            if table != want {
                return Err(format!("q=2 N=2 table {table:?}"));
            }
        }
    }
    Ok(())
}

fn kappa_identities() -> Outcome {
    let qs = [rat(2), rat(3), rat(5), ratio(7, 2)];
    for mu in locations_up_to(8) {
        for lambda in admissible_shapes(mu) {
            let (l, r) = kappa_sum_identity(mu, &lambda).map_err(|e| e.to_string())?;
            if l != r {
                return Err(format!("mu={mu} lambda={lambda}: sum {l} != {r}"));
            }
            for q in &qs {
                let (l, r) = kappa_q_identity(mu, &lambda, q).map_err(|e| e.to_string())?;
                if l != r {
                    return Err(format!("mu={mu} lambda={lambda} q={q}: {l} != {r}"));
                }
            }
        }
    }
    Ok(())
}

fn quantum_affine() -> Outcome {
    for (q, n) in DESK {
        let label = format!("q={q} N={n}");
        let g = build_generators(&lattice(q, n));
        let fam = build_e_lambda(&g).map_err(|e| format!("{label}: {e}"))?;
        let p = build_pseudo_inverse_actions(&g, &fam).map_err(|e| format!("{label}: {e}"))?;
        checks(&label, verify_pseudo_inverse(&g, &fam, &p))?;
        let act = build_chevalley(&g, &p, &default_alphas(q, n)).map_err(|e| e.to_string())?;
        checks(&label, verify_uq_relations(&act.mats))?;
        checks(&label, vec![check_commutator_scalars(&g, &fam, &act)])?;
        let descs = decompose_standard_module(&g, &fam);
        for d in descs.iter().filter(|d| d.multiplicity > 0) {
            build_intertwiner(&act, d)
                .map_err(|e| format!("{label} endpoint={} shape={}: {e}", d.endpoint, d.shape))?;
        }
        checks(&label, vec![check_type_one_one(&act, &descs)])?;
        for r in descriptor_reports(&act, &descs) {
            if !r.general_position || r.commutant != Some(1) {
                return Err(format!(
                    "{label} endpoint={} shape={}: general position {} commutant {:?}",
                    r.endpoint, r.shape, r.general_position, r.commutant
                ));
            }
        }
    }
    let (q, n) = (2, 2);
    let g = build_generators(&lattice(q, n));
    let fam = build_e_lambda(&g)?;
    let p = build_pseudo_inverse_actions(&g, &fam).map_err(|e| e.to_string())?;
    let alphas: Vec<Rational> = vec![rat(1), rat(q as i64)];
    let act = build_chevalley(&g, &p, &alphas).map_err(|e| e.to_string())?;
    if check_general_position(&[1, 1], &alphas, q) {
        return Err("alpha=(1,q) reported in general position".into());
    }
    let descs = decompose_standard_module(&g, &fam);
    let d = descs
        .iter()
        .find(|d| d.endpoint == Location::zero(n) && d.shape.is_empty())
        .ok_or("no class with endpoint 00 and empty shape")?;
    let mats = restrict_to_descriptor(&act.mats, d).ok_or("H v is not invariant")?;
    let dim = module_commutant(&mats);
    if dim > 1 {
        Ok(())
    } else {
        Err(format!("alpha=(1,q): commutant dimension {dim}, expected > 1"))
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("lattice sizes", lattice_sizes),
        ("covering counts", covering_counts),
        ("rook identities", rook_identities),
        ("sigma theory", sigma_theory),
        ("H relations", h_relations),
        ("spectral theory", spectral_theory),
        ("character cross-check", characters),
        ("classification", classification),
        ("kappa identities", kappa_identities),
        ("quantum affine", quantum_affine),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {}: PASS  {name} ({secs:.1}s)", i + 1),
            Err(w) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({secs:.1}s): {w}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
