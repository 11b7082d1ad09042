//! Cauchy completion, symmetric completion, and the comparison functor
//! between them.

use std::sync::Arc;

use thiserror::Error;

use crate::qcat::{Distributor, QCatError, QCategory, QFunctor};
use crate::quantaloid::{
    check_cauchy_bilateral_with, premise_holds, BilateralityMode, BilateralityOptions, FamilyPair, Quantaloid,
    QuantaloidError, Witness,
};

pub const DEFAULT_MAX_PRESHEAVES: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompletionError {
    #[error(transparent)]
    Category(#[from] QCatError),
    #[error(transparent)]
    Quantaloid(#[from] QuantaloidError),
    #[error("search cap exceeded: {what} has {size} candidates, cap is {cap}")]
    SearchCapExceeded { what: String, size: usize, cap: usize },
    #[error("the base quantaloid is not Cauchy-bilateral")]
    NotBilateral,
    #[error("the family does not satisfy the premise: {0}")]
    PremiseViolated(String),
}

/// A completion together with the presheaf behind each of its objects.
#[derive(Debug, Clone)]
pub struct CompletionResult {
    pub completion: QCategory,
    pub yoneda: QFunctor,
    pub presheaves: Vec<Distributor>,
}

impl CompletionResult {
    pub fn index_of(&self, phi: &Distributor) -> Option<usize> {
        index_of(&self.presheaves, phi)
    }
}

fn index_of(list: &[Distributor], phi: &Distributor) -> Option<usize> {
    let t = phi.presheaf_type()?;
    list.iter().position(|p| p.presheaf_type() == Some(t) && p.column() == phi.column())
}

/// Display name `X[φ(0);φ(1);...]` of a presheaf.
pub fn presheaf_name(phi: &Distributor) -> String {
    let a = phi.dst();
    let q = a.base();
    let x = phi.presheaf_type().expect("a presheaf");
    let parts: Vec<&str> = (0..a.len()).map(|i| q.label(x, a.type_of(i), phi.entry(i, 0))).collect();
    format!("{}[{}]", q.object_name(x), parts.join(";"))
}

/// Presheaves of type `x` on `a`, lexicographic in the column.
pub fn enumerate_presheaves(a: &QCategory, x: usize, cap: usize) -> Result<Vec<Distributor>, CompletionError> {
    let q = a.base();
    let sizes: Vec<usize> = (0..a.len()).map(|i| q.hom(x, a.type_of(i)).size()).collect();
    let total = sizes.iter().try_fold(1usize, |acc, &s| acc.checked_mul(s).filter(|&p| p <= cap));
    if total.is_none() {
        let size = sizes.iter().fold(1usize, |acc, &s| acc.saturating_mul(s));
        return Err(CompletionError::SearchCapExceeded {
            what: format!("presheaves of type {} on a {}-object category", q.object_name(x), a.len()),
            size,
            cap,
        });
    }
    let n = a.len();
    let closed = |col: &[usize]| {
        (0..n).all(|i| {
            (0..n).all(|k| {
                let t = q.comp(x, a.type_of(k), a.type_of(i), a.hom(i, k), col[k]);
                q.hom(x, a.type_of(i)).leq(t, col[i])
            })
        })
    };
    let unit = QCategory::unit(q.clone(), x);
    let mut out = Vec::new();
    let mut col = vec![0usize; n];
    loop {
        if closed(&col) {
            out.push(Distributor::new(unit.clone(), a.clone(), col.clone())?);
        }
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            col[i] += 1;
            if col[i] < sizes[i] {
                break;
            }
            col[i] = 0;
        }
    }
}

/// Left adjoint presheaves of every type, ordered by type then column.
pub fn left_adjoint_presheaves(a: &QCategory, cap: usize) -> Result<Vec<Distributor>, CompletionError> {
    let mut out = Vec::new();
    for x in 0..a.base().n_objects() {
        out.extend(enumerate_presheaves(a, x, cap)?.into_iter().filter(|p| p.is_left_adjoint()));
    }
    Ok(out)
}

/// Presheaves with `φ ⊣ φᵒ` on a symmetric category.
pub fn symmetric_left_adjoint_presheaves(a: &QCategory, cap: usize) -> Result<Vec<Distributor>, CompletionError> {
    a.base().require_involution()?;
    if !a.is_symmetric()? {
        return Err(QCatError::NotSymmetric("symmetric left adjoints need a symmetric category".into()).into());
    }
    let mut out = Vec::new();
    for x in 0..a.base().n_objects() {
        for p in enumerate_presheaves(a, x, cap)? {
            if p.is_symmetric_left_adjoint()? {
                out.push(p);
            }
        }
    }
    Ok(out)
}

fn assemble(a: &QCategory, presheaves: Vec<Distributor>) -> Result<CompletionResult, CompletionError> {
    let n = presheaves.len();
    let stars: Vec<Distributor> = presheaves.iter().map(|p| p.right_adjoint_candidate()).collect();
    let mut hom = Vec::with_capacity(n * n);
    for star in &stars {
        for phi in &presheaves {
            hom.push(star.after(phi)?.entry(0, 0));
        }
    }
    let names = presheaves.iter().map(presheaf_name).collect();
    let types = presheaves.iter().map(|p| p.presheaf_type().expect("a presheaf")).collect();
    let completion = QCategory::new(a.base().clone(), names, types, hom)?;
    let map = (0..a.len())
        .map(|x| {
            index_of(&presheaves, &Distributor::representable(a, x))
                .ok_or_else(|| QCatError::Malformed(format!("representable at {x} is missing")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let yoneda = QFunctor::new(a.clone(), completion.clone(), map)?;
    Ok(CompletionResult { completion, yoneda, presheaves })
}

/// Objects are the left adjoint presheaves, `A_cc(ψ, φ)` is the single entry
/// of `ψ* ⊗ φ`, and the Yoneda functor sends `a` to `A(-, a)`.
pub fn cauchy_completion(a: &QCategory, cap: usize) -> Result<CompletionResult, CompletionError> {
    assemble(a, left_adjoint_presheaves(a, cap)?)
}

/// The full subcategory of the Cauchy completion on symmetric left adjoint
/// presheaves.
pub fn symmetric_completion(a: &QCategory, cap: usize) -> Result<CompletionResult, CompletionError> {
    assemble(a, symmetric_left_adjoint_presheaves(a, cap)?)
}

/// The inclusion of the symmetric completion into the Cauchy completion.
pub fn k_functor(sc: &CompletionResult, cc: &CompletionResult) -> Result<QFunctor, CompletionError> {
    let map = sc
        .presheaves
        .iter()
        .map(|p| {
            cc.index_of(p)
                .ok_or_else(|| QCatError::Malformed(format!("{} is not in the Cauchy completion", presheaf_name(p))))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(QFunctor::new(sc.completion.clone(), cc.completion.clone(), map)?)
}

/// Some `a` with `φ = A(-, a)`.
pub fn is_representable(a: &QCategory, phi: &Distributor) -> Option<usize> {
    let t = phi.presheaf_type()?;
    (0..a.len()).find(|&x| a.type_of(x) == t && (0..a.len()).all(|y| a.hom(y, x) == phi.entry(y, 0)))
}

pub fn is_cauchy_complete(a: &QCategory, cap: usize) -> Result<bool, CompletionError> {
    Ok(left_adjoint_presheaves(a, cap)?.iter().all(|p| is_representable(a, p).is_some()))
}

pub fn is_symmetrically_complete(a: &QCategory, cap: usize) -> Result<bool, CompletionError> {
    Ok(symmetric_left_adjoint_presheaves(a, cap)?.iter().all(|p| is_representable(a, p).is_some()))
}

/// `F_cc(φ) = B(-, F-) ⊗ φ`.
pub fn cc_functor_image(f: &QFunctor, phi: &Distributor) -> Result<Distributor, CompletionError> {
    if !phi.is_left_adjoint() {
        return Err(QCatError::NotLeftAdjoint(presheaf_name(phi)).into());
    }
    Ok(f.graph().after(phi)?)
}

/// First left adjoint presheaf whose symmetrisation is not a symmetric left
/// adjoint.
pub fn symmetrisation_failure(a: &QCategory, cap: usize) -> Result<Option<Distributor>, CompletionError> {
    for p in left_adjoint_presheaves(a, cap)? {
        if !p.symmetrise()?.is_symmetric_left_adjoint()? {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

/// Both sides of the comparison functor `L : (A_s)_sc -> (A_cc)_s`.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub domain: CompletionResult,
    pub cauchy: CompletionResult,
    pub codomain: QCategory,
    pub functor: QFunctor,
    /// `L φ` for each domain object.
    pub images: Vec<Distributor>,
}

impl Comparison {
    pub fn is_injective(&self) -> bool {
        let map = self.functor.map();
        (0..map.len()).all(|i| (0..i).all(|j| map[i] != map[j]))
    }

    /// Codomain objects outside the image.
    pub fn missing(&self) -> Vec<usize> {
        (0..self.codomain.len()).filter(|y| !self.functor.map().contains(y)).collect()
    }

    pub fn is_surjective(&self) -> bool {
        self.missing().is_empty()
    }

    /// Hom-wise equality `(A_s)_sc(ψ, φ) = (A_cc)_s(Lψ, Lφ)`.
    pub fn is_fully_faithful(&self) -> bool {
        let (d, c, m) = (&self.domain.completion, &self.codomain, self.functor.map());
        (0..d.len()).all(|y| (0..d.len()).all(|x| d.hom(y, x) == c.hom(m[y], m[x])))
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective() && self.is_fully_faithful()
    }

    /// `φ = (A(S-, -) ⊗ Lφ) ∧ ((Lφ)* ⊗ A(-, S-))ᵒ` for the `i`-th domain object.
    pub fn recovers(&self, a: &QCategory, i: usize) -> Result<bool, CompletionError> {
        let s = a.symmetrisation_functor()?;
        let l = &self.images[i];
        let left = s.cograph().after(l)?;
        let right = l.right_adjoint_candidate().after(&s.graph())?.involute()?;
        Ok(left.meet(&right)?.column() == self.domain.presheaves[i].column())
    }

    /// `ψᵒ ⊗ φ = ((Lψ)* ⊗ Lφ) ∧ ((Lφ)* ⊗ Lψ)ᵒ` for domain objects `ψ`, `φ`.
    pub fn hom_identity(&self, psi: usize, phi: usize) -> Result<bool, CompletionError> {
        let (p, f) = (&self.domain.presheaves[psi], &self.domain.presheaves[phi]);
        let lhs = p.involute()?.after(f)?;
        let (lp, lf) = (&self.images[psi], &self.images[phi]);
        let one = lp.right_adjoint_candidate().after(lf)?;
        let two = lf.right_adjoint_candidate().after(lp)?.involute()?;
        Ok(lhs == one.meet(&two)?)
    }
}

/// Builds `L φ = A(-, S_A-) ⊗ φ` on every symmetric left adjoint presheaf of
/// `A_s`.
pub fn l_functor(a: &QCategory, cap: usize) -> Result<Comparison, CompletionError> {
    let sym = a.symmetrise()?;
    let domain = symmetric_completion(&sym, cap)?;
    let cauchy = cauchy_completion(a, cap)?;
    let codomain = cauchy.completion.symmetrise()?;
    let graph = a.symmetrisation_functor()?.graph();
    let images = domain.presheaves.iter().map(|p| graph.after(p)).collect::<Result<Vec<_>, _>>()?;
    let map = images
        .iter()
        .map(|l| cauchy.index_of(l).ok_or_else(|| QCatError::NotLeftAdjoint(presheaf_name(l))))
        .collect::<Result<Vec<_>, _>>()?;
    let functor = QFunctor::new(domain.completion.clone(), codomain.clone(), map)?;
    Ok(Comparison { domain, cauchy, codomain, functor, images })
}

/// The category on a refuting family: objects `i` of type `X_i`, homs
/// `A(j, i) = f_j ∘ g_i ∨ δ_ij`, with the presheaf `ψ(i) = f_i`.
#[derive(Debug, Clone)]
pub struct WitnessCategory {
    pub category: QCategory,
    pub presheaf: Distributor,
    pub family: Vec<FamilyPair>,
}

impl WitnessCategory {
    /// `ψ_s` on the symmetrised category.
    pub fn symmetrised(&self) -> Result<Distributor, CompletionError> {
        Ok(self.presheaf.symmetrise()?)
    }
}

pub fn witness_category(q: &Arc<Quantaloid>, witness: &Witness) -> Result<WitnessCategory, CompletionError> {
    if !premise_holds(q, BilateralityMode::Cauchy, witness) {
        return Err(CompletionError::PremiseViolated(format!(
            "the family at {} does not cover the identity with compatible pairs",
            q.object_name(witness.object)
        )));
    }
    let fam = &witness.family;
    let x = witness.object;
    let n = fam.len();
    let types: Vec<usize> = fam.iter().map(|p| p.via()).collect();
    let mut hom = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            let (ti, tj) = (types[i], types[j]);
            let fg = q.comp(ti, x, tj, fam[j].f.elem, fam[i].g.elem);
            let delta = if i == j { q.id(ti) } else { q.hom(ti, tj).bottom() };
            hom.push(q.hom(ti, tj).join(fg, delta));
        }
    }
    let names = (0..n).map(|i| format!("i{i}")).collect();
    let category = QCategory::new(q.clone(), names, types, hom)?;
    let presheaf = Distributor::presheaf(&category, x, fam.iter().map(|p| p.f.elem).collect())?;
    Ok(WitnessCategory { category, presheaf, family: fam.clone() })
}

/// Outcome of checking both commuting squares on a sample.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SquaresReport {
    pub symmetric_checked: usize,
    pub complete_checked: usize,
    pub failures: Vec<String>,
}

impl SquaresReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// On a Cauchy-bilateral base: the Cauchy completion of a symmetric category
/// is symmetric and equals its symmetric completion, and the symmetrisation
/// of a Cauchy complete category is Cauchy complete. Failures would indicate
/// an implementation bug.
pub fn verify_corollary_squares(
    q: &Quantaloid,
    samples: &[QCategory],
    options: BilateralityOptions,
    cap: usize,
) -> Result<SquaresReport, CompletionError> {
    if !check_cauchy_bilateral_with(q, options)?.holds {
        return Err(CompletionError::NotBilateral);
    }
    let mut report = SquaresReport::default();
    for (k, a) in samples.iter().enumerate() {
        if a.is_symmetric()? {
            report.symmetric_checked += 1;
            let cc = cauchy_completion(a, cap)?;
            if !cc.completion.is_symmetric()? {
                report.failures.push(format!("sample {k}: Cauchy completion of a symmetric category is not symmetric"));
            }
            let sc = symmetric_completion(a, cap)?;
            let same =
                sc.presheaves.len() == cc.presheaves.len() && sc.presheaves.iter().all(|p| cc.index_of(p).is_some());
            if !same {
                report.failures.push(format!("sample {k}: symmetric and Cauchy completions differ"));
            }
        }
        if is_cauchy_complete(a, cap)? {
            report.complete_checked += 1;
            if !is_cauchy_complete(&a.symmetrise()?, cap)? {
                report
                    .failures
                    .push(format!("sample {k}: symmetrisation of a Cauchy complete category is not complete"));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{
        free_quantaloid, group_quantale, interval_quantale, locale_quantale, path_metric_category, FiniteCategory,
    };
    use crate::lattice::FiniteLattice;
    use crate::quantaloid::{check_cauchy_bilateral, MorphismRef};

    const CAP: usize = DEFAULT_MAX_PRESHEAVES;

    fn z3() -> Arc<Quantaloid> {
        Arc::new(group_quantale(&FiniteCategory::cyclic_group(3)).unwrap())
    }

    fn labels(a: &QCategory, list: &[Distributor]) -> Vec<String> {
        let q = a.base();
        list.iter().map(|p| q.label(0, 0, p.entry(0, 0)).to_string()).collect()
    }

    #[test]
    fn presheaf_counts() {
        let two = Arc::new(locale_quantale(&FiniteLattice::chain(2)).unwrap());
        assert_eq!(enumerate_presheaves(&QCategory::unit(two, 0), 0, CAP).unwrap().len(), 2);
        let one = QCategory::unit(z3(), 0);
        assert_eq!(enumerate_presheaves(&one, 0, CAP).unwrap().len(), 8);
        assert_eq!(labels(&one, &left_adjoint_presheaves(&one, CAP).unwrap()), ["{1}", "{a}", "{b}"]);
        let i3 = QCategory::unit(Arc::new(interval_quantale(3)), 0);
        let la = left_adjoint_presheaves(&i3, CAP).unwrap();
        assert_eq!(la.len(), 1);
        assert_eq!(la[0].column(), &[0]);
    }

    #[test]
    fn path_metric_presheaves_match_brute_force() {
        let a = path_metric_category(2, &[(0, 1)], 3).unwrap();
        let found: Vec<Vec<usize>> =
            enumerate_presheaves(&a, 0, CAP).unwrap().iter().map(|p| p.column().to_vec()).collect();
        let mut expected = Vec::new();
        for p0 in 0..4usize {
            for p1 in 0..4usize {
                // φ(y) ≤ A(y, x) + φ(x) numerically
                let ok = p0 <= (a.hom(0, 1) + p1).min(3) && p1 <= (a.hom(1, 0) + p0).min(3);
                if ok {
                    expected.push(vec![p0, p1]);
                }
            }
        }
        assert_eq!(found, expected);
    }

    #[test]
    fn z3_singleton_completions() {
        let q = z3();
        let one = QCategory::unit(q.clone(), 0);
        let cc = cauchy_completion(&one, CAP).unwrap();
        assert_eq!(cc.completion.len(), 3);
        assert!(!cc.completion.is_symmetric().unwrap());
        let e = |s: &str| q.elem_by_label(0, 0, s).unwrap();
        let idx = |s: &str| cc.presheaves.iter().position(|p| p.entry(0, 0) == e(s)).unwrap();
        assert_eq!(cc.completion.hom(idx("{b}"), idx("{a}")), e("{b}"));
        assert_eq!(cc.completion.hom(idx("{a}"), idx("{b}")), e("{a}"));
        assert!(is_cauchy_complete(&cc.completion, CAP).unwrap());
        assert!(!is_cauchy_complete(&one, CAP).unwrap());
        let sc = symmetric_completion(&one, CAP).unwrap();
        assert_eq!(sc.completion.len(), 1);
        assert!(is_symmetrically_complete(&one, CAP).unwrap());
        assert!(is_symmetrically_complete(&sc.completion, CAP).unwrap());
        let k = k_functor(&sc, &cc).unwrap();
        assert_eq!(k.map(), &[idx("{1}")]);
        let phi = Distributor::presheaf(&one, 0, vec![e("{a}")]).unwrap();
        assert_eq!(is_representable(&one, &phi), None);
        let f = QFunctor::identity(&one);
        assert_eq!(cc_functor_image(&f, &phi).unwrap(), phi);
    }

    #[test]
    fn z2_symmetric_completion() {
        let q = Arc::new(free_quantaloid(&FiniteCategory::cyclic_group(2), true).unwrap());
        let one = QCategory::unit(q.clone(), 0);
        let sc = symmetric_completion(&one, CAP).unwrap();
        assert_eq!(labels(&one, &sc.presheaves), ["{1}", "{σ}"]);
    }

    #[test]
    fn path_metric_is_complete() {
        let a = path_metric_category(2, &[(0, 1)], 3).unwrap();
        assert!(is_cauchy_complete(&a, CAP).unwrap());
        let cc = cauchy_completion(&a, CAP).unwrap();
        assert_eq!(cc.completion.len(), 2);
        for y in 0..2 {
            for x in 0..2 {
                assert_eq!(cc.completion.hom(cc.yoneda.apply(y), cc.yoneda.apply(x)), a.hom(y, x));
            }
        }
        let s = a.symmetrise().unwrap();
        assert!(is_cauchy_complete(&s, CAP).unwrap());
    }

    #[test]
    fn comparison_over_z3_singleton() {
        let one = QCategory::unit(z3(), 0);
        let l = l_functor(&one, CAP).unwrap();
        assert!(l.is_injective());
        assert!(!l.is_surjective());
        assert_eq!(l.missing().len(), 2);
        assert!(l.is_fully_faithful());
        assert!(l.recovers(&one, 0).unwrap());
        assert!(l.hom_identity(0, 0).unwrap());
        assert!(symmetrisation_failure(&one, CAP).unwrap().is_some());
    }

    #[test]
    fn comparison_over_interval() {
        let a = path_metric_category(3, &[(0, 1), (1, 2)], 3).unwrap();
        let l = l_functor(&a, CAP).unwrap();
        assert!(l.is_isomorphism());
        for i in 0..l.images.len() {
            assert!(l.recovers(&a, i).unwrap());
        }
        assert!(symmetrisation_failure(&a, CAP).unwrap().is_none());
    }

    #[test]
    fn witness_categories() {
        let q = z3();
        let w = check_cauchy_bilateral(&q).unwrap().witness.unwrap();
        let wc = witness_category(&q, &w).unwrap();
        assert_eq!(wc.category.len(), 1);
        assert_eq!(q.label(0, 0, wc.category.hom(0, 0)), "{1}");
        assert_eq!(q.label(0, 0, wc.presheaf.entry(0, 0)), "{a}");
        assert_eq!(q.label(0, 0, wc.presheaf.right_adjoint_candidate().entry(0, 0)), "{b}");
        assert!(!wc.symmetrised().unwrap().is_symmetric_left_adjoint().unwrap());

        let z2 = Arc::new(free_quantaloid(&FiniteCategory::cyclic_group(2), true).unwrap());
        let s = z2.elem_by_label(0, 0, "{σ}").unwrap();
        let fam = Witness {
            object: 0,
            family: vec![FamilyPair { f: MorphismRef::new(0, 0, s), g: MorphismRef::new(0, 0, s) }],
        };
        let wc = witness_category(&z2, &fam).unwrap();
        let sym = wc.symmetrised().unwrap();
        assert_eq!(z2.label(0, 0, sym.entry(0, 0)), "{σ}");
        assert!(sym.is_symmetric_left_adjoint().unwrap());

        let bad = Witness {
            object: 0,
            family: vec![FamilyPair { f: MorphismRef::new(0, 0, 0), g: MorphismRef::new(0, 0, 0) }],
        };
        assert!(matches!(witness_category(&z2, &bad), Err(CompletionError::PremiseViolated(_))));
    }

    #[test]
    fn squares_refuse_non_bilateral() {
        let q = z3();
        let one = QCategory::unit(q.clone(), 0);
        let r = verify_corollary_squares(&q, &[one], BilateralityOptions::default(), CAP);
        assert_eq!(r.unwrap_err(), CompletionError::NotBilateral);
        let z2 = Arc::new(free_quantaloid(&FiniteCategory::cyclic_group(2), true).unwrap());
        let r = verify_corollary_squares(&z2, &[QCategory::unit(z2.clone(), 0)], BilateralityOptions::default(), CAP)
            .unwrap();
        assert!(r.passed());
        assert_eq!(r.symmetric_checked, 1);
    }

    #[test]
    fn cap_is_enforced() {
        let a = path_metric_category(3, &[], 3).unwrap();
        match enumerate_presheaves(&a, 0, 10) {
            Err(CompletionError::SearchCapExceeded { size: 64, cap: 10, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }
}
