//! Seeded generators of small categories and distributors over a fixed base,
//! used to exercise the completion constructions on many instances.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constructors::{
    example_e7_quantale, free_quantaloid, group_quantale, interval_quantale, locale_quantale, FiniteCategory,
};
use crate::lattice::FiniteLattice;
use crate::qcat::{Distributor, QCategory};
use crate::quantaloid::Quantaloid;

/// The small involutive quantaloids every coherence suite runs over.
pub fn fixture_quantaloids() -> Vec<(String, Arc<Quantaloid>)> {
    let group = |n| group_quantale(&FiniteCategory::cyclic_group(n)).expect("abelian");
    vec![
        ("e7".into(), Arc::new(example_e7_quantale())),
        ("interval(3)".into(), Arc::new(interval_quantale(3))),
        ("free(Z/2)".into(), Arc::new(free_quantaloid(&FiniteCategory::cyclic_group(2), true).expect("groupoid"))),
        ("group(Z/2)".into(), Arc::new(group(2))),
        ("group(Z/3)".into(), Arc::new(group(3))),
        ("locale(M2)".into(), Arc::new(locale_quantale(&FiniteLattice::diamond()).expect("distributive"))),
    ]
}

/// Saturates a hom matrix into a category: adds identities to the diagonal
/// and joins in composites until nothing changes.
pub fn close_to_category(q: &Quantaloid, types: &[usize], hom: &mut [usize]) {
    let n = types.len();
    for x in 0..n {
        let t = types[x];
        hom[x * n + x] = q.hom(t, t).join(hom[x * n + x], q.id(t));
    }
    loop {
        let mut changed = false;
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let (tx, ty, tz) = (types[x], types[y], types[z]);
                    let c = q.comp(tx, ty, tz, hom[z * n + y], hom[y * n + x]);
                    let j = q.hom(tx, tz).join(hom[z * n + x], c);
                    if j != hom[z * n + x] {
                        hom[z * n + x] = j;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return;
        }
    }
}

/// Every one-object category over `q`: an endo-arrow `e` with `1 ≤ e` and
/// `e ∘ e ≤ e`, for each object of the base.
pub fn one_object_categories(q: &Arc<Quantaloid>) -> Vec<QCategory> {
    let mut out = Vec::new();
    for x in 0..q.n_objects() {
        let l = q.hom(x, x);
        for e in 0..l.size() {
            if l.leq(q.id(x), e) && l.leq(q.comp(x, x, x, e, e), e) {
                out.push(QCategory::new(q.clone(), vec!["0".into()], vec![x], vec![e]).expect("checked"));
            }
        }
    }
    out
}

/// Outcome of [`sample_categories`].
#[derive(Debug, Clone)]
pub struct CategorySample {
    /// Number of random draws made.
    pub draws: usize,
    /// Distinct categories: every one-object category, then the distinct
    /// closures of the random two-object draws.
    pub categories: Vec<QCategory>,
}

/// All one-object categories plus `draws` random two-object matrices, each
/// closed into a category.
pub fn sample_categories(q: &Arc<Quantaloid>, draws: usize, seed: u64) -> CategorySample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut categories = one_object_categories(q);
    let mut seen: BTreeSet<(Vec<usize>, Vec<usize>)> =
        categories.iter().map(|c| (c.types().to_vec(), c.hom_matrix().to_vec())).collect();
    for _ in 0..draws {
        let types: Vec<usize> = (0..2).map(|_| rng.gen_range(0..q.n_objects())).collect();
        let mut hom: Vec<usize> = (0..4)
            .map(|i| {
                let (y, x) = (i / 2, i % 2);
                rng.gen_range(0..q.hom(types[x], types[y]).size())
            })
            .collect();
        close_to_category(q, &types, &mut hom);
        if seen.insert((types.clone(), hom.clone())) {
            let names = vec!["0".into(), "1".into()];
            categories.push(QCategory::new(q.clone(), names, types, hom).expect("closed matrices are categories"));
        }
    }
    CategorySample { draws, categories }
}

/// Every distributor `a ⇸ b`, or `None` when there are more than `cap`
/// candidate matrices.
pub fn enumerate_distributors(a: &QCategory, b: &QCategory, cap: usize) -> Option<Vec<Distributor>> {
    let q = a.base();
    let (na, nb) = (a.len(), b.len());
    let sizes: Vec<usize> = (0..na * nb).map(|i| q.hom(a.type_of(i % na), b.type_of(i / na)).size()).collect();
    sizes.iter().try_fold(1usize, |acc, &s| acc.checked_mul(s).filter(|&p| p <= cap))?;
    let mut out = Vec::new();
    let mut m = vec![0usize; sizes.len()];
    loop {
        if let Ok(d) = Distributor::new(a.clone(), b.clone(), m.clone()) {
            out.push(d);
        }
        let mut i = m.len();
        loop {
            if i == 0 {
                return Some(out);
            }
            i -= 1;
            m[i] += 1;
            if m[i] < sizes[i] {
                break;
            }
            m[i] = 0;
        }
    }
}

/// Left adjoint distributors between randomly chosen pairs of `categories`,
/// one random pick per successful draw, until `count` are collected or the
/// attempt budget runs out.
pub fn sample_left_adjoint_distributors(categories: &[QCategory], count: usize, seed: u64) -> Vec<Distributor> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    if categories.is_empty() {
        return out;
    }
    let mut attempts = 0;
    while out.len() < count && attempts < count * 20 {
        attempts += 1;
        let a = &categories[rng.gen_range(0..categories.len())];
        let b = &categories[rng.gen_range(0..categories.len())];
        let Some(all) = enumerate_distributors(a, b, 1 << 14) else { continue };
        let adjoints: Vec<Distributor> = all.into_iter().filter(|d| d.is_left_adjoint()).collect();
        if adjoints.is_empty() {
            continue;
        }
        out.push(adjoints[rng.gen_range(0..adjoints.len())].clone());
    }
    out
}
