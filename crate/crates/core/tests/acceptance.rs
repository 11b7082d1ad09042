//! End-to-end acceptance checks. Runs as a plain binary so that every
//! criterion prints its own PASS/FAIL line, then exits non-zero if any failed.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use qcauchy::completion::{
    cauchy_completion, is_cauchy_complete, l_functor, symmetric_completion, symmetrisation_failure,
    verify_corollary_squares, witness_category, CompletionError, DEFAULT_MAX_PRESHEAVES,
};
use qcauchy::constructors::{
    crible_quantaloid, example_e7_quantale, example_poset_site, free_quantaloid, group_quantale, groupoid_crible_maps,
    interval_quantale, locale_quantale, path_metric_category, quotient_quantaloid, rel_quantaloid, FiniteCategory,
    Topology,
};
use qcauchy::lattice::FiniteLattice;
use qcauchy::quantaloid::{
    check_cauchy_bilateral, check_strong_cauchy_bilateral, conclusion_holds, premise_holds, BilateralityMode,
    BilateralityOptions, Witness,
};
use qcauchy::sampling::{fixture_quantaloids, sample_categories, sample_left_adjoint_distributors};
use qcauchy::{QCategory, Quantaloid};

const CAP: usize = DEFAULT_MAX_PRESHEAVES;
const SEED: u64 = 0x5eed;
const DRAWS: usize = 200;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn family_labels(q: &Quantaloid, w: &Witness) -> Vec<(String, String)> {
    w.family
        .iter()
        .map(|p| (q.label(p.f.src, p.f.dst, p.f.elem).to_string(), q.label(p.g.src, p.g.dst, p.g.elem).to_string()))
        .collect()
}

fn z3_group() -> Arc<Quantaloid> {
    Arc::new(group_quantale(&FiniteCategory::cyclic_group(3)).expect("abelian"))
}

fn criterion_1() -> Outcome {
    let q = z3_group();
    let report = check_cauchy_bilateral(&q).map_err(err)?;
    ensure!(!report.holds, "group quantale of Z/3 reported Cauchy-bilateral");
    let w = report.witness.ok_or("no witness")?;
    let fam = family_labels(&q, &w);
    ensure!(fam == [("{a}".to_string(), "{b}".to_string())], "witness {fam:?}");
    let one = q.elem_by_label(0, 0, "{1}").ok_or("no {1}")?;
    let a = QCategory::new(q.clone(), vec!["*".into()], vec![0], vec![one]).map_err(err)?;
    ensure!(a.is_symmetric().map_err(err)?, "singleton is not symmetric");
    let cc = cauchy_completion(&a, CAP).map_err(err)?;
    ensure!(cc.completion.len() == 3, "Cauchy completion has {} objects", cc.completion.len());
    ensure!(!cc.completion.is_symmetric().map_err(err)?, "Cauchy completion is symmetric");
    // objects are the presheaves {1}, {a}, {b}; the right adjoint of {g} is {g⁻¹}
    let col: Vec<&str> = cc.presheaves.iter().map(|p| q.label(0, 0, p.entry(0, 0))).collect();
    ensure!(col == ["{1}", "{a}", "{b}"], "presheaves {col:?}");
    let h = |y: usize, x: usize| q.label(0, 0, cc.completion.hom(y, x)).to_string();
    ensure!(h(0, 1) == "{a}" && h(1, 0) == "{b}", "hom({{1}},{{a}}) = {}, hom({{a}},{{1}}) = {}", h(0, 1), h(1, 0));
    let inv_of_back = q.label(0, 0, q.inv(0, 0, cc.completion.hom(1, 0))).to_string();
    ensure!(inv_of_back != h(0, 1), "asymmetry not visible");
    let sc = symmetric_completion(&a, CAP).map_err(err)?;
    ensure!(sc.completion.len() == 1, "symmetric completion has {} objects", sc.completion.len());
    Ok(format!(
        "witness ({{a}},{{b}}); completion 3 objects with {} vs {}; symmetric completion 1 object",
        h(0, 1),
        inv_of_back
    ))
}

fn criterion_2() -> Outcome {
    let q = example_e7_quantale();
    ensure!(q.validate().is_empty(), "e7 violates {:?}", q.validate());
    let plain = check_cauchy_bilateral(&q).map_err(err)?;
    ensure!(plain.holds, "not Cauchy-bilateral");
    let strong = check_strong_cauchy_bilateral(&q).map_err(err)?;
    ensure!(!strong.holds, "strongly Cauchy-bilateral");
    let w = strong.witness.ok_or("no strong witness")?;
    ensure!(
        premise_holds(&q, BilateralityMode::Strong, &w) && !conclusion_holds(&q, &w),
        "strong witness does not replay"
    );
    let fam = family_labels(&q, &w);
    ensure!(fam == [("⊤".to_string(), "a".to_string())], "strong witness {fam:?}");
    ensure!(!q.is_integral(), "integral");
    ensure!(!q.is_locally_localic(), "locally localic");
    ensure!(!q.is_modular().map_err(err)?, "modular");
    Ok("valid, Cauchy-bilateral, not strong with witness (⊤,a), not integral/localic/modular".into())
}

fn criterion_3() -> Outcome {
    for n in [2, 3, 5] {
        let q = interval_quantale(n);
        ensure!(q.validate().is_empty(), "interval({n}) invalid");
        ensure!(q.is_integral(), "interval({n}) not integral");
        ensure!(q.is_locally_localic(), "interval({n}) not locally localic");
        ensure!(!q.is_modular().map_err(err)?, "interval({n}) modular");
        ensure!(check_strong_cauchy_bilateral(&q).map_err(err)?.holds, "interval({n}) not strong");
    }
    Ok("N = 2, 3, 5".into())
}

fn criterion_4() -> Outcome {
    for n in [2, 3] {
        let q = free_quantaloid(&FiniteCategory::cyclic_group(n), true).map_err(err)?;
        ensure!(check_strong_cauchy_bilateral(&q).map_err(err)?.holds, "free(Z/{n}) not strong");
    }
    let trivial = z3_group();
    ensure!(!check_strong_cauchy_bilateral(&trivial).map_err(err)?.holds, "group(Z/3) strong");
    let free = free_quantaloid(&FiniteCategory::cyclic_group(3), true).map_err(err)?;
    let same_quantale = (0..free.hom(0, 0).size())
        .all(|f| (0..free.hom(0, 0).size()).all(|g| free.comp(0, 0, 0, g, f) == trivial.comp(0, 0, 0, g, f)))
        && free.hom(0, 0) == trivial.hom(0, 0);
    ensure!(same_quantale, "free(Z/3) and group(Z/3) differ as quantales");
    Ok("free(Z/2), free(Z/3) strong; group(Z/3) with trivial involution is not".into())
}

fn criterion_5() -> Outcome {
    let c = FiniteCategory::cyclic_group(2);
    let quotient = quotient_quantaloid(&c, &Topology::minimal(&c)).map_err(err)?;
    let cq = crible_quantaloid(&c).map_err(err)?;
    let (fwd, bwd) = groupoid_crible_maps(&c, &cq).map_err(err)?;
    let (q, free) = (quotient.quantaloid(), free_quantaloid(&c, true).map_err(err)?);
    ensure!(q.validate().is_empty() && q.involution_violations().is_empty(), "quotient invalid");
    let n = c.n_objects();
    for x in 0..n {
        for y in 0..n {
            let (i, size) = (x * n + y, q.hom(x, y).size());
            ensure!(size == free.hom(x, y).size(), "hom sizes differ");
            for e in 0..size {
                ensure!(bwd[i][fwd[i][e]] == e && fwd[i][bwd[i][e]] == e, "not a bijection");
                ensure!(fwd[y * n + x][q.inv(x, y, e)] == free.inv(x, y, fwd[i][e]), "involution not preserved");
                for e2 in 0..size {
                    let j = q.hom(x, y).join(e, e2);
                    ensure!(fwd[i][j] == free.hom(x, y).join(fwd[i][e], fwd[i][e2]), "joins not preserved");
                }
            }
            for z in 0..n {
                for f in 0..size {
                    for g in 0..q.hom(y, z).size() {
                        let lhs = fwd[x * n + z][q.comp(x, y, z, g, f)];
                        let rhs = free.comp(x, y, z, fwd[y * n + z][g], fwd[i][f]);
                        ensure!(lhs == rhs, "composition not preserved");
                    }
                }
            }
        }
    }
    let (poset, topology) = example_poset_site();
    topology.validate(&poset).map_err(err)?;
    let pq = quotient_quantaloid(&poset, &topology).map_err(err)?.into_quantaloid();
    ensure!(pq.is_involutive(), "poset quotient carries no involution");
    ensure!(pq.validate().is_empty(), "poset quotient invalid: {:?}", pq.validate());
    ensure!(check_strong_cauchy_bilateral(&pq).map_err(err)?.holds, "poset quotient not strong");
    Ok("Z/2 quotient isomorphic to the free quantaloid; poset-site quotient valid and strong".into())
}

fn criterion_6() -> Outcome {
    let a = path_metric_category(2, &[(0, 1)], 3).map_err(err)?;
    let q = a.base();
    // hom(y, x) holds d(x, y)
    let (d01, d10) = (q.label(0, 0, a.hom(1, 0)), q.label(0, 0, a.hom(0, 1)));
    ensure!(d01 == "1", "d(0,1) = {d01}");
    ensure!(d10 == q.label(0, 0, q.hom(0, 0).bottom()) && d10 == "∞(cap)", "d(1,0) = {d10}");
    ensure!(is_cauchy_complete(&a, CAP).map_err(err)?, "not Cauchy complete");
    ensure!(!a.is_symmetric().map_err(err)?, "symmetric");
    let s = a.symmetrise().map_err(err)?;
    ensure!(s.is_symmetric().map_err(err)?, "symmetrisation not symmetric");
    ensure!(is_cauchy_complete(&s, CAP).map_err(err)?, "symmetrisation not Cauchy complete");
    Ok(format!("d(0,1) = {d01}, d(1,0) = {d10}"))
}

fn criterion_7() -> Outcome {
    let mut total = 0;
    let mut summary = Vec::new();
    for (name, q) in fixture_quantaloids() {
        let report = check_cauchy_bilateral(&q).map_err(err)?;
        let mut cats = sample_categories(&q, DRAWS, SEED).categories;
        if let Some(w) = &report.witness {
            cats.push(witness_category(&q, w).map_err(err)?.category);
        }
        let (mut all_sym, mut all_iso) = (true, true);
        for (k, a) in cats.iter().enumerate() {
            let sym = symmetrisation_failure(a, CAP).map_err(err)?.is_none();
            let iso = l_functor(a, CAP).map_err(err)?.is_isomorphism();
            ensure!(sym == iso, "{name} sample {k}: ψ_s condition {sym} but L iso {iso}");
            all_sym &= sym;
            all_iso &= iso;
        }
        ensure!(report.holds == all_sym, "{name}: bilateral {} but ψ_s condition {all_sym}", report.holds);
        ensure!(report.holds == all_iso, "{name}: bilateral {} but L iso {all_iso}", report.holds);
        total += cats.len();
        summary.push(format!("{name}={}", report.holds));
    }
    Ok(format!("{total} categories from {DRAWS} draws per base; {}", summary.join(" ")))
}

fn criterion_8() -> Outcome {
    let (mut total, mut factorised, mut recovered) = (0, 0, 0);
    for (k, (name, q)) in fixture_quantaloids().into_iter().enumerate() {
        let cats = sample_categories(&q, DRAWS, SEED).categories;
        let seed = SEED + k as u64;
        for (i, psi) in sample_left_adjoint_distributors(&cats, 40, seed).iter().enumerate() {
            let (a, b) = (psi.src(), psi.dst());
            let ps = psi.symmetrise().map_err(err)?;
            let bs = b.symmetrise().map_err(err)?;
            let counit = ps.after(&ps.involute().map_err(err)?).map_err(err)?;
            ensure!(counit.leq(&bs.identity_distributor()).map_err(err)?, "{name} #{i}: Ψ_s ⊗ Ψ_sᵒ ≰ B_s");
            if ps.is_symmetric_left_adjoint().map_err(err)? {
                let sa = a.symmetrisation_functor().map_err(err)?;
                let sb = b.symmetrisation_functor().map_err(err)?;
                let back = sb.graph().after(&ps.after(&sa.cograph()).map_err(err)?).map_err(err)?;
                ensure!(back == *psi, "{name} #{i}: Ψ is not recovered from Ψ_s");
                factorised += 1;
            }
            total += 1;
        }
        for a in &cats {
            let cmp = l_functor(a, CAP).map_err(err)?;
            for i in 0..cmp.domain.presheaves.len() {
                ensure!(cmp.recovers(a, i).map_err(err)?, "{name}: φ not recovered from Lφ");
                recovered += 1;
            }
        }
    }
    ensure!(total >= 200, "only {total} left adjoint distributors sampled");
    Ok(format!("{total} distributors ({factorised} factorised); {recovered} symmetric-completion objects recovered"))
}

fn criterion_9() -> Outcome {
    let mut checked = Vec::new();
    for (name, q) in fixture_quantaloids() {
        let cats = sample_categories(&q, DRAWS, SEED).categories;
        let bilateral = check_cauchy_bilateral(&q).map_err(err)?.holds;
        match verify_corollary_squares(&q, &cats, BilateralityOptions::default(), CAP) {
            Ok(report) => {
                ensure!(bilateral, "{name}: squares ran on a non-bilateral base");
                ensure!(report.passed(), "{name}: {:?}", report.failures);
                checked.push(format!("{name}({}/{})", report.symmetric_checked, report.complete_checked));
            }
            Err(CompletionError::NotBilateral) => ensure!(!bilateral, "{name}: refused although bilateral"),
            Err(e) => return Err(format!("{name}: {e}")),
        }
    }
    let refused = matches!(
        verify_corollary_squares(&z3_group(), &[], BilateralityOptions::default(), CAP),
        Err(CompletionError::NotBilateral)
    );
    ensure!(refused, "group(Z/3) was not refused");
    Ok(format!("passed on {}; group(Z/3) refused", checked.join(" ")))
}

fn criterion_10() -> Outcome {
    let mut bases: Vec<(String, Quantaloid)> =
        fixture_quantaloids().into_iter().map(|(n, q)| (n, Arc::unwrap_or_clone(q))).collect();
    for sizes in [vec![1], vec![2], vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2]] {
        bases.push((format!("rel{sizes:?}"), rel_quantaloid(&sizes).map_err(err)?));
    }
    for n in [1, 2, 3] {
        bases.push((format!("free(Z/{n})"), free_quantaloid(&FiniteCategory::cyclic_group(n), true).map_err(err)?));
        bases.push((format!("locale(chain {})", n + 1), locale_quantale(&FiniteLattice::chain(n + 1)).map_err(err)?));
    }
    let (c, t) = example_poset_site();
    bases.push(("poset-site quotient".into(), quotient_quantaloid(&c, &t).map_err(err)?.into_quantaloid()));
    let mut eligible = 0;
    for (name, q) in &bases {
        if q.is_modular().map_err(err)? && q.is_locally_localic() {
            eligible += 1;
            ensure!(
                check_strong_cauchy_bilateral(q).map_err(err)?.holds,
                "{name} is modular and localic but not strong"
            );
        }
    }
    ensure!(eligible > 0, "no modular locally localic base examined");
    Ok(format!("{eligible} of {} bases modular and locally localic, all strong", bases.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("Z/3 group quantale counterexample", criterion_1),
        ("five-element quantale", criterion_2),
        ("interval quantales", criterion_3),
        ("free quantaloids on groups", criterion_4),
        ("closed cribles of sites", criterion_5),
        ("path metric on two points", criterion_6),
        ("bilaterality coherence", criterion_7),
        ("symmetrised distributors", criterion_8),
        ("completion squares", criterion_9),
        ("modular and locally localic bases", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.2}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
