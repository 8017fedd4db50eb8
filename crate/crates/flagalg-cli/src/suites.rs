use std::time::Instant;

use flagalg::algebra::{
    build_chi_basis, build_e_lambda, build_generators, check_chi_orthogonality, check_projectors_from_k,
    chi_cross_check, decompose_standard_module, kernel_spaces, verify_decomposition, verify_h_relations,
    verify_kernel_spaces, verify_projectors, Check, Generators, IrredDescriptor, ProjectorFamily,
};
use flagalg::combin::{
    admissible_shapes, all_forms, board, check_rank_inversion, classify_forms, column_full, enumerate_placements,
    gen_function_check, kappa_q_identity, kappa_sum_identity, multiplicity_formula, rho,
};
use flagalg::exactnum::rat;
use flagalg::gf::GaloisField;
use flagalg::lattice::{
    check_bucket_sizes, check_cover_counts, check_diamonds, check_interval_counts, enumerate_lattice, Lattice, Location,
};
use flagalg::qaffine::{
    build_chevalley, build_pseudo_inverse_actions, check_commutator_scalars, check_type_one_one, descriptor_reports,
    proper_submodule, restrict_to_descriptor, verify_pseudo_inverse, verify_uq_relations,
};

use crate::config::{RunConfig, Suite};
use crate::report::{CheckRecord, DecompositionRow, Params, Report, Status, Summary};

/// Largest `q^{|B_mu|}` for which the combinatorics suite classifies every form.
const CLASSIFY_LIMIT: u128 = 20_000;
/// Largest lattice for which the character cross-check runs.
const CHI_LIMIT: usize = 400;

struct Runner {
    timing: bool,
    checks: Vec<CheckRecord>,
}

impl Runner {
    fn record(&mut self, prefix: &str, f: impl FnOnce() -> Vec<Check>) {
        let start = Instant::now();
        let checks = f();
        let ms = start.elapsed().as_millis() as u64;
        for c in checks {
            self.checks.push(CheckRecord {
                name: format!("{prefix}: {}", c.name),
                status: if c.passed { Status::Pass } else { Status::Fail },
                witness: c.witness,
                ms: self.timing.then_some(ms),
            });
        }
    }

    fn one(&mut self, prefix: &str, name: &str, f: impl FnOnce() -> Result<(), String>) {
        self.record(prefix, || vec![Check::from_result(name, f())]);
    }

    fn push(&mut self, prefix: &str, c: Check, ms: u64) {
        self.checks.push(CheckRecord {
            name: format!("{prefix}: {}", c.name),
            status: if c.passed { Status::Pass } else { Status::Fail },
            witness: c.witness,
            ms: self.timing.then_some(ms),
        });
    }

    fn skip(&mut self, prefix: &str, name: &str, why: String) {
        self.checks.push(CheckRecord {
            name: format!("{prefix}: {name}"),
            status: Status::Skip,
            witness: Some(why),
            ms: self.timing.then_some(0),
        });
    }
}

/// Objects shared between suites, built on first use.
struct Cache<'a> {
    cfg: &'a RunConfig,
    lattice: Option<Lattice>,
    gens: Option<Generators>,
    family: Option<Result<ProjectorFamily, String>>,
    descs: Option<Vec<IrredDescriptor>>,
}

impl<'a> Cache<'a> {
    fn lattice(&mut self) -> &Lattice {
        let cfg = self.cfg;
        self.lattice.get_or_insert_with(|| {
            enumerate_lattice(&GaloisField::new(cfg.field.clone()), cfg.n, Some(cfg.max_size)).expect("size validated")
        })
    }

    fn gens(&mut self) -> &Generators {
        if self.gens.is_none() {
            let g = build_generators(self.lattice());
            self.gens = Some(g);
        }
        self.gens.as_ref().unwrap()
    }

    fn family(&mut self) -> Result<&ProjectorFamily, String> {
        if self.family.is_none() {
            let f = build_e_lambda(self.gens());
            self.family = Some(f);
        }
        self.family.as_ref().unwrap().as_ref().map_err(|e| e.clone())
    }

    fn descs(&mut self) -> Result<&[IrredDescriptor], String> {
        if self.descs.is_none() {
            let fam = self.family()?.clone();
            let d = decompose_standard_module(self.gens.as_ref().unwrap(), &fam);
            self.descs = Some(d);
        }
        Ok(self.descs.as_deref().unwrap())
    }
}

fn lattice_suite(cache: &mut Cache, run: &mut Runner) {
    let p = "lattice";
    let lat = cache.lattice();
    run.one(p, "|P_mu| = q^|B_mu| for every mu", || check_bucket_sizes(lat));
    run.one(p, "covering counts match adjacency", || check_cover_counts(lat));
    run.one(p, "interval counts between points two levels apart", || check_interval_counts(lat));
    run.one(p, "unique common upper and lower covers", || check_diamonds(lat));
}

fn combin_suite(cfg: &RunConfig, run: &mut Runner) {
    let p = "combin";
    let (q, n) = (cfg.q, cfg.n);
    let mus = Location::all(n);
    run.one(p, "rook generating function equals the product formula", || {
        for &mu in &mus {
            for lambda in admissible_shapes(mu) {
                let (l, r) = gen_function_check(mu, &lambda, &rat(q as i64)).map_err(|e| e.to_string())?;
                if l != r {
                    return Err(format!("mu={mu} lambda={lambda}: {l} != {r}"));
                }
            }
        }
        Ok(())
    });
    run.one(p, "rectangle rook counts are constant per type", || {
        for &mu in &mus {
            for lambda in admissible_shapes(mu) {
                for pl in enumerate_placements(&board(mu), &lambda).map_err(|e| e.to_string())? {
                    for m in 1..=n {
                        let inside = pl.cells.iter().filter(|&&(s, t)| s <= m && t >= m).count() as i64;
                        if inside != rho(m, mu, &lambda).map_err(|e| e.to_string())? {
                            return Err(format!("mu={mu} lambda={lambda} m={m} sigma={pl}"));
                        }
                    }
                }
            }
        }
        Ok(())
    });
    run.one(p, "kappa sum and q-power identities", || {
        for &mu in &mus {
            for lambda in admissible_shapes(mu) {
                let (l, r) = kappa_sum_identity(mu, &lambda).map_err(|e| e.to_string())?;
                let (lq, rq) = kappa_q_identity(mu, &lambda, &rat(q as i64)).map_err(|e| e.to_string())?;
                if l != r || lq != rq {
                    return Err(format!("mu={mu} lambda={lambda}"));
                }
            }
        }
        Ok(())
    });
    let gf = GaloisField::new(cfg.field.clone());
    let small: Vec<Location> =
        mus.iter().copied().filter(|mu| (q as u128).pow(mu.board_size() as u32) <= CLASSIFY_LIMIT).collect();
    if small.len() < mus.len() {
        run.skip(
            p,
            "classification of large boards",
            format!("{} locations have more than {CLASSIFY_LIMIT} forms", mus.len() - small.len()),
        );
    }
    run.one(p, "rectangle rank equals local inversion + 1", || {
        small.iter().try_for_each(|&mu| all_forms(&gf, mu).try_for_each(|f| check_rank_inversion(&gf, &f)))
    });
    run.one(p, "column-full multiplicities match the classification", || {
        for &mu in &small {
            let classes = classify_forms(&gf, mu);
            for lambda in admissible_shapes(mu).into_iter().filter(|l| column_full(mu, l)) {
                let got: u128 = classes.iter().filter(|(pl, _)| pl.type_of() == lambda).map(|(_, c)| c).sum();
                let want = multiplicity_formula(mu, &lambda, q).map_err(|e| e.to_string())?;
                if got != want {
                    return Err(format!("mu={mu} lambda={lambda}: {got} forms, formula {want}"));
                }
            }
        }
        Ok(())
    });
}

fn h_suite(cache: &mut Cache, run: &mut Runner) {
    let g = cache.gens();
    run.record("h", || verify_h_relations(g));
    run.record("h", || vec![check_projectors_from_k(g)]);
}

fn decompose_suite(cache: &mut Cache, run: &mut Runner) -> Vec<DecompositionRow> {
    let p = "decompose";
    let start = Instant::now();
    let built = cache.descs().map(|_| ());
    let ms = start.elapsed().as_millis() as u64;
    let failed = built.is_err();
    run.push(p, Check::from_result("joint eigenspaces of R_m L_m + L_m R_m", built), ms);
    if failed {
        return Vec::new();
    }
    let (lat, g, fam, descs) = (
        cache.lattice.as_ref().unwrap(),
        cache.gens.as_ref().unwrap(),
        cache.family.as_ref().unwrap().as_ref().unwrap(),
        cache.descs.as_ref().unwrap(),
    );
    run.record(p, || verify_projectors(g, fam));
    run.record(p, || verify_kernel_spaces(g, fam, &kernel_spaces(g)));
    if lat.len() <= CHI_LIMIT {
        let cs: Vec<u32> = if lat.gf().p() > 2 { vec![1, 2] } else { vec![1] };
        for c in cs {
            let prefix = format!("{p} (character c={c})");
            run.record(&prefix, || {
                let chi = build_chi_basis(lat, c);
                let mut out = vec![check_chi_orthogonality(lat, &chi)];
                out.extend(chi_cross_check(lat, g, fam, &chi));
                out
            });
        }
    } else {
        run.skip(p, "character cross-check", format!("{} points exceed {CHI_LIMIT}", lat.len()));
    }
    run.record(p, || verify_decomposition(lat, g, descs));
    descs
        .iter()
        .map(|d| DecompositionRow {
            mu: d.endpoint.to_string(),
            lambda: d.shape.elems().to_vec(),
            dim: d.dim,
            multiplicity: d.multiplicity,
            formula: d.formula,
            matches: d.matches(),
        })
        .collect()
}

fn uq_suite(cache: &mut Cache, run: &mut Runner) {
    let p = "uq";
    let alphas = cache.cfg.alphas.clone();
    let require = cache.cfg.require_irreducible;
    if let Err(e) = cache.descs() {
        run.one(p, "joint eigenspaces of R_m L_m + L_m R_m", || Err(e));
        return;
    }
    let (g, fam, descs) =
        (cache.gens.as_ref().unwrap(), cache.family.as_ref().unwrap().as_ref().unwrap(), cache.descs.as_ref().unwrap());
    let pseudo = match build_pseudo_inverse_actions(g, fam) {
        Ok(x) => x,
        Err(e) => return run.one(p, "pseudo-inverse operators", || Err(e.to_string())),
    };
    run.record(p, || verify_pseudo_inverse(g, fam, &pseudo));
    let act = match build_chevalley(g, &pseudo, &alphas) {
        Ok(x) => x,
        Err(e) => return run.one(p, "Chevalley generators", || Err(e.to_string())),
    };
    run.record(p, || verify_uq_relations(&act.mats));
    run.record(p, || vec![check_commutator_scalars(g, fam, &act)]);
    run.record(p, || vec![check_type_one_one(&act, descs)]);
    let start = Instant::now();
    let reports = descriptor_reports(&act, descs);
    let ms = run.timing.then_some(start.elapsed().as_millis() as u64);
    for (r, d) in reports.iter().zip(descs.iter().filter(|d| d.multiplicity > 0)) {
        let class = format!("endpoint={} shape={}", r.endpoint, r.shape);
        run.checks.push(CheckRecord {
            name: format!("{p}: intertwiner commutes with all generators, {class}"),
            status: if r.intertwiner.is_ok() { Status::Pass } else { Status::Fail },
            witness: r.intertwiner.clone().err(),
            ms,
        });
        let commutant = r.commutant.map_or("none".to_string(), |c| c.to_string());
        let submodule = restrict_to_descriptor(&act.mats, d).and_then(|m| proper_submodule(&m)).map(|s| s.len());
        let found = |k: usize| format!("invariant subspace of dimension {k}");
        let (status, witness) = match (r.general_position, r.irreducible(), submodule) {
            (true, true, None) => (Status::Pass, None),
            (true, _, sub) => (
                Status::Fail,
                Some(format!(
                    "commutant dimension {commutant}{}",
                    sub.map_or(String::new(), |k| format!(", {}", found(k)))
                )),
            ),
            (false, _, Some(k)) if require => {
                (Status::Fail, Some(format!("q-strings not in general position; {}", found(k))))
            }
            (false, true, None) if require => (Status::Pass, Some("q-strings not in general position".to_string())),
            (false, _, sub) => (
                Status::Skip,
                Some(format!(
                    "q-strings not in general position; commutant dimension {commutant}{}",
                    sub.map_or(String::new(), |k| format!(", {}", found(k)))
                )),
            ),
        };
        run.checks.push(CheckRecord { name: format!("{p}: U-irreducible, {class}"), status, witness, ms });
    }
}

pub fn run_suite(cfg: &RunConfig) -> Report {
    let mut run = Runner { timing: cfg.timing, checks: Vec::new() };
    let mut cache = Cache { cfg, lattice: None, gens: None, family: None, descs: None };
    let mut decomposition = Vec::new();
    for suite in &cfg.suites {
        match suite {
            Suite::Lattice => lattice_suite(&mut cache, &mut run),
            Suite::Combin => combin_suite(cfg, &mut run),
            Suite::H => h_suite(&mut cache, &mut run),
            Suite::Decompose => decomposition = decompose_suite(&mut cache, &mut run),
            Suite::Uq => uq_suite(&mut cache, &mut run),
        }
    }
    let mut report = Report {
        params: Params {
            q: cfg.q,
            n: cfg.n,
            modulus: cfg.field.modulus().to_vec(),
            alphas: cfg.alphas.iter().map(|a| a.to_string()).collect(),
            suites: cfg.suites.iter().map(|s| s.name()).collect(),
            max_size: cfg.max_size,
        },
        checks: run.checks,
        summary: Summary {
            points: cache.lattice.as_ref().map(|l| l.len()),
            irreducible_classes: cache.descs.as_ref().map(|d| d.iter().filter(|d| d.multiplicity > 0).count()),
            ..Summary::default()
        },
        decomposition,
    };
    report.finish();
    report
}
