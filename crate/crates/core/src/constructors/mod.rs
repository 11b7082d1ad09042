//! Builders for the standard example families.

mod finite_category;
mod site;

pub use finite_category::{FiniteCategory, Morphism};
pub use site::{
    all_sieves, crible_quantaloid, example_poset_site, groupoid_crible_maps, is_sieve, nucleus_from_topology,
    pullback_sieve, quotient_quantaloid, validate_crible, CribleQuantaloid, HomMaps, Nucleus, Topology, TopologyAxiom,
};

use std::collections::VecDeque;

use thiserror::Error;

use crate::lattice::FiniteLattice;
use crate::qcat::{QCatError, QCategory};
use crate::quantaloid::{HomSpec, Quantaloid};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructorError {
    #[error("invalid finite category: {0}")]
    InvalidCategory(String),
    #[error("the category is not a groupoid")]
    NotAGroupoid,
    #[error("the group is not commutative")]
    NotCommutative,
    #[error("expected a one-object category")]
    NotAGroup,
    #[error("the lattice is not distributive: {a} ∧ ({b} ∨ {c}) differs from ({a} ∧ {b}) ∨ ({a} ∧ {c})")]
    NotDistributive { a: usize, b: usize, c: usize },
    #[error("hom-set too large for a powerset lattice: {0} elements")]
    TooLarge(usize),
    #[error("not a crible: {0}")]
    NotACrible(String),
    #[error("topology axiom violated ({axiom}): {detail}")]
    TopologyAxiomViolated { axiom: TopologyAxiom, detail: String },
    #[error(transparent)]
    Category(#[from] QCatError),
}

const MAX_POWERSET_BITS: usize = 15;

fn subset_label(names: &[&str], mask: usize) -> String {
    if mask == 0 {
        return "∅".into();
    }
    let parts: Vec<&str> = (0..names.len()).filter(|k| mask >> k & 1 == 1).map(|k| names[k]).collect();
    format!("{{{}}}", parts.join(","))
}

/// Powerset hom-lattices over `C(X, Y)` with pointwise composition. With
/// `canonical_involution`, `S ↦ { s⁻¹ : s ∈ S }`, which needs a groupoid.
pub fn free_quantaloid(c: &FiniteCategory, canonical_involution: bool) -> Result<Quantaloid, ConstructorError> {
    if canonical_involution && !c.is_groupoid() {
        return Err(ConstructorError::NotAGroupoid);
    }
    pointwise_powerset(c, |f| c.inverse(f).expect("groupoid"), canonical_involution)
}

/// The group quantale of subsets of a finite abelian group, with the
/// trivial involution.
pub fn group_quantale(g: &FiniteCategory) -> Result<Quantaloid, ConstructorError> {
    if g.n_objects() != 1 {
        return Err(ConstructorError::NotAGroup);
    }
    if !g.is_groupoid() {
        return Err(ConstructorError::NotAGroupoid);
    }
    if !g.is_commutative() {
        return Err(ConstructorError::NotCommutative);
    }
    pointwise_powerset(g, |f| f, true)
}

fn pointwise_powerset(
    c: &FiniteCategory,
    inverse: impl Fn(usize) -> usize,
    involutive: bool,
) -> Result<Quantaloid, ConstructorError> {
    let n = c.n_objects();
    let arrows: Vec<Vec<usize>> = (0..n * n).map(|i| c.hom(i / n, i % n)).collect();
    if let Some(big) = arrows.iter().find(|a| a.len() > MAX_POWERSET_BITS) {
        return Err(ConstructorError::TooLarge(big.len()));
    }
    let position = |x: usize, y: usize, m: usize| arrows[x * n + y].iter().position(|&a| a == m).expect("typed arrow");
    let homs = arrows
        .iter()
        .map(|a| {
            let names: Vec<&str> = a.iter().map(|&m| c.name(m)).collect();
            let labels = (0..1usize << a.len()).map(|mask| subset_label(&names, mask)).collect();
            HomSpec::new(FiniteLattice::powerset(a.len() as u32), labels)
        })
        .collect();
    let identity = (0..n).map(|x| 1 << position(x, x, c.identity(x))).collect();
    let compose = |x: usize, y: usize, z: usize, t: usize, s: usize| {
        let mut out = 0;
        for (i, &f) in arrows[x * n + y].iter().enumerate() {
            if s >> i & 1 == 0 {
                continue;
            }
            for (k, &g) in arrows[y * n + z].iter().enumerate() {
                if t >> k & 1 == 1 {
                    out |= 1 << position(x, z, c.comp(g, f));
                }
            }
        }
        out
    };
    let involution = |x: usize, y: usize, s: usize| {
        arrows[x * n + y]
            .iter()
            .enumerate()
            .filter(|&(i, _)| s >> i & 1 == 1)
            .fold(0, |acc, (_, &f)| acc | 1 << position(y, x, inverse(f)))
    };
    let inv: Option<&dyn Fn(usize, usize, usize) -> usize> = if involutive { Some(&involution) } else { None };
    Quantaloid::build(c.object_names().to_vec(), homs, identity, compose, inv)
        .map_err(|e| ConstructorError::InvalidCategory(e.to_string()))
}

/// Label of the cap value standing in for infinity.
pub const INFINITY_LABEL: &str = "∞(cap)";

/// Truncation of `([0, ∞], ≥, +, 0)` to `{0, ..., cap}`: element `k` is the
/// number `k`, ordered by reverse numeric order, with capped addition.
pub fn interval_quantale(cap: usize) -> Quantaloid {
    assert!(cap >= 1, "the cap must be positive");
    let lattice = FiniteLattice::from_leq_fn(cap + 1, |x, y| x >= y).expect("a chain");
    let labels = (0..=cap).map(|k| if k == cap { INFINITY_LABEL.to_string() } else { k.to_string() }).collect();
    Quantaloid::quantale("•", HomSpec::new(lattice, labels), 0, |g, f| (g + f).min(cap), Some(&|f| f))
        .expect("capped addition is a quantale")
}

/// A finite distributive lattice as an integral quantale under meet.
pub fn locale_quantale(l: &FiniteLattice) -> Result<Quantaloid, ConstructorError> {
    if let Some((a, b, c)) = l.distributivity_witness() {
        return Err(ConstructorError::NotDistributive { a, b, c });
    }
    let labels = (0..l.size())
        .map(|e| match e {
            _ if e == l.bottom() => "⊥".to_string(),
            _ if e == l.top() => "⊤".to_string(),
            _ => e.to_string(),
        })
        .collect();
    Ok(Quantaloid::quantale("•", HomSpec::new(l.clone(), labels), l.top(), |g, f| l.meet(g, f), Some(&|f| f))
        .expect("meet is a quantale multiplication"))
}

/// The five-element commutative quantale with `⊥ < b < 1 < ⊤`, `⊥ < a < ⊤`,
/// unit `1` and identity involution.
pub fn example_e7_quantale() -> Quantaloid {
    const TOP: usize = 0;
    const ONE: usize = 1;
    const A: usize = 2;
    const B: usize = 3;
    const BOT: usize = 4;
    let lattice =
        FiniteLattice::from_order(5, &[(BOT, B), (B, ONE), (ONE, TOP), (BOT, A), (A, TOP)]).expect("a lattice");
    let labels = ["⊤", "1", "a", "b", "0"].map(String::from).to_vec();
    let product = |g: usize, f: usize| match (g.min(f), g.max(f)) {
        (_, BOT) => BOT,
        (ONE, x) | (x, ONE) => x,
        (A, A) => B,
        (A, B) => A,
        (B, B) => B,
        _ => TOP,
    };
    Quantaloid::quantale("•", HomSpec::new(lattice, labels), ONE, product, Some(&|f| f)).expect("a quantale")
}

/// Finite sets with relations between them, composed relationally, with the
/// opposite relation as involution. Objects are named by position.
pub fn rel_quantaloid(sizes: &[usize]) -> Result<Quantaloid, ConstructorError> {
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(ConstructorError::InvalidCategory("sets must be nonempty".into()));
    }
    let n = sizes.len();
    let mut homs = Vec::with_capacity(n * n);
    for &sx in sizes {
        for &sy in sizes {
            let bits = sx * sy;
            if bits > MAX_POWERSET_BITS {
                return Err(ConstructorError::TooLarge(bits));
            }
            let names: Vec<String> = (0..bits).map(|p| format!("({},{})", p / sy, p % sy)).collect();
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            let labels = (0..1usize << bits).map(|mask| subset_label(&refs, mask)).collect();
            homs.push(HomSpec::new(FiniteLattice::powerset(bits as u32), labels));
        }
    }
    let identity = sizes.iter().map(|&s| (0..s).fold(0, |acc, a| acc | 1 << (a * s + a))).collect();
    let compose = |x: usize, y: usize, z: usize, s: usize, r: usize| {
        let (sx, sy, sz) = (sizes[x], sizes[y], sizes[z]);
        let mut out = 0;
        for a in 0..sx {
            for b in 0..sy {
                if r >> (a * sy + b) & 1 == 0 {
                    continue;
                }
                for c in 0..sz {
                    if s >> (b * sz + c) & 1 == 1 {
                        out |= 1 << (a * sz + c);
                    }
                }
            }
        }
        out
    };
    let opposite = |x: usize, y: usize, r: usize| {
        let (sx, sy) = (sizes[x], sizes[y]);
        let mut out = 0;
        for a in 0..sx {
            for b in 0..sy {
                if r >> (a * sy + b) & 1 == 1 {
                    out |= 1 << (b * sx + a);
                }
            }
        }
        out
    };
    let names = (0..n).map(|i| format!("S{i}")).collect();
    Quantaloid::build(names, homs, identity, compose, Some(&opposite))
        .map_err(|e| ConstructorError::InvalidCategory(e.to_string()))
}

/// Shortest-path distances in the directed graph `edges` on `0..points`,
/// capped at `cap`, as a category over `interval_quantale(cap)`: the hom
/// `A(y, x)` is the distance from `x` to `y`.
pub fn path_metric_category(
    points: usize,
    edges: &[(usize, usize)],
    cap: usize,
) -> Result<QCategory, ConstructorError> {
    path_metric_over(std::sync::Arc::new(interval_quantale(cap)), points, edges)
}

pub fn path_metric_over(
    base: std::sync::Arc<Quantaloid>,
    points: usize,
    edges: &[(usize, usize)],
) -> Result<QCategory, ConstructorError> {
    let cap = base.hom(0, 0).size() - 1;
    if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= points || b >= points) {
        return Err(ConstructorError::InvalidCategory(format!("edge ({a}, {b}) leaves the point set")));
    }
    let mut dist = vec![cap; points * points];
    for s in 0..points {
        dist[s * points + s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let d = dist[s * points + u];
            for &(a, b) in edges {
                if a == u && dist[s * points + b] == cap && b != s && d + 1 < cap {
                    dist[s * points + b] = d + 1;
                    queue.push_back(b);
                }
            }
        }
    }
    let names = (0..points).map(|p| p.to_string()).collect();
    let types = vec![0; points];
    let hom = (0..points * points).map(|i| dist[(i % points) * points + i / points]).collect();
    Ok(QCategory::new(base, names, types, hom)?)
}
