//! Cribles on a finite category, Grothendieck topologies, and the quantaloid
//! of closed cribles.
//!
//! A crible `R : D ⇸ C` is a set of spans `(f, g)` with `cod f = C`,
//! `cod g = D` and `dom f = dom g`, closed under `(f, g) ↦ (f∘h, g∘h)`. In the
//! quantaloid it is an arrow `D -> C`.

use std::collections::{BTreeSet, HashMap};

use fixedbitset::FixedBitSet;

use super::{ConstructorError, FiniteCategory};
use crate::lattice::FiniteLattice;
use crate::quantaloid::{HomSpec, Quantaloid};

/// A Grothendieck topology: for each object, its covering sieves as sets of
/// morphism indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    pub covers: Vec<Vec<BTreeSet<usize>>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TopologyAxiom {
    WellFormed,
    Maximality,
    Stability,
    Transitivity,
}

impl std::fmt::Display for TopologyAxiom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TopologyAxiom::WellFormed => "sieve well-formedness",
            TopologyAxiom::Maximality => "maximality",
            TopologyAxiom::Stability => "stability",
            TopologyAxiom::Transitivity => "transitivity",
        })
    }
}

fn sieve_names(c: &FiniteCategory, s: &BTreeSet<usize>) -> String {
    let names: Vec<&str> = s.iter().map(|&f| c.name(f)).collect();
    format!("{{{}}}", names.join(","))
}

/// Whether `s` is a sieve on `y`: morphisms into `y`, closed under
/// precomposition.
pub fn is_sieve(c: &FiniteCategory, y: usize, s: &BTreeSet<usize>) -> bool {
    s.iter().all(|&f| f < c.n_morphisms() && c.cod(f) == y)
        && s.iter().all(|&f| (0..c.n_morphisms()).filter(|&h| c.cod(h) == c.dom(f)).all(|h| s.contains(&c.comp(f, h))))
}

/// Every sieve on `y`, smallest first.
pub fn all_sieves(c: &FiniteCategory, y: usize) -> Vec<BTreeSet<usize>> {
    let principal: Vec<BTreeSet<usize>> = c
        .arrows_into(y)
        .into_iter()
        .map(|f| (0..c.n_morphisms()).filter(|&h| c.cod(h) == c.dom(f)).map(|h| c.comp(f, h)).collect())
        .collect();
    let mut all: BTreeSet<BTreeSet<usize>> = BTreeSet::from([BTreeSet::new()]);
    let mut frontier: Vec<BTreeSet<usize>> = vec![BTreeSet::new()];
    while let Some(s) = frontier.pop() {
        for p in &principal {
            let u: BTreeSet<usize> = s.union(p).copied().collect();
            if all.insert(u.clone()) {
                frontier.push(u);
            }
        }
    }
    let mut out: Vec<_> = all.into_iter().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// `h* S = { g : cod g = dom h, h ∘ g ∈ S }`.
pub fn pullback_sieve(c: &FiniteCategory, h: usize, s: &BTreeSet<usize>) -> BTreeSet<usize> {
    c.arrows_into(c.dom(h)).into_iter().filter(|&g| s.contains(&c.comp(h, g))).collect()
}

impl Topology {
    /// Only the maximal sieves cover.
    pub fn minimal(c: &FiniteCategory) -> Self {
        Topology { covers: (0..c.n_objects()).map(|y| vec![c.arrows_into(y).into_iter().collect()]).collect() }
    }

    pub fn covers(&self, y: usize, s: &BTreeSet<usize>) -> bool {
        self.covers[y].contains(s)
    }

    /// Checks the topology axioms, naming the first failure found.
    pub fn validate(&self, c: &FiniteCategory) -> Result<(), ConstructorError> {
        let fail =
            |axiom: TopologyAxiom, detail: String| Err(ConstructorError::TopologyAxiomViolated { axiom, detail });
        if self.covers.len() != c.n_objects() {
            return fail(
                TopologyAxiom::WellFormed,
                format!("{} objects but {} cover lists", c.n_objects(), self.covers.len()),
            );
        }
        for y in 0..c.n_objects() {
            let name = &c.object_names()[y];
            for s in &self.covers[y] {
                if !is_sieve(c, y, s) {
                    return fail(TopologyAxiom::WellFormed, format!("{} is not a sieve on {name}", sieve_names(c, s)));
                }
            }
            let max: BTreeSet<usize> = c.arrows_into(y).into_iter().collect();
            if !self.covers(y, &max) {
                return fail(TopologyAxiom::Maximality, format!("the maximal sieve on {name} does not cover"));
            }
            for s in &self.covers[y] {
                for h in c.arrows_into(y) {
                    let pulled = pullback_sieve(c, h, s);
                    if !self.covers(c.dom(h), &pulled) {
                        return fail(
                            TopologyAxiom::Stability,
                            format!(
                                "{} covers {name} but its pullback {} along {} does not cover",
                                sieve_names(c, s),
                                sieve_names(c, &pulled),
                                c.name(h)
                            ),
                        );
                    }
                }
            }
            for r in all_sieves(c, y) {
                if self.covers(y, &r) {
                    continue;
                }
                let locally =
                    self.covers[y].iter().find(|s| s.iter().all(|&h| self.covers(c.dom(h), &pullback_sieve(c, h, &r))));
                if let Some(s) = locally {
                    return fail(
                        TopologyAxiom::Transitivity,
                        format!(
                            "{} is locally covering along {} but does not cover {name}",
                            sieve_names(c, &r),
                            sieve_names(c, s)
                        ),
                    );
                }
            }
        }
        Ok(())
    }
}

/// All cribles of a finite category, with the spans behind each element.
#[derive(Debug, Clone)]
pub struct CribleQuantaloid {
    quantaloid: Quantaloid,
    /// Per hom `x * n + y`: every span `(f into y, g into x)` with a common
    /// domain.
    spans: Vec<Vec<(usize, usize)>>,
    /// Per hom: the span set of each lattice element.
    elements: Vec<Vec<FixedBitSet>>,
}

impl CribleQuantaloid {
    pub fn quantaloid(&self) -> &Quantaloid {
        &self.quantaloid
    }

    pub fn into_quantaloid(self) -> Quantaloid {
        self.quantaloid
    }

    pub fn spans(&self, x: usize, y: usize) -> &[(usize, usize)] {
        &self.spans[x * self.quantaloid.n_objects() + y]
    }

    /// The spans of element `e` of `hom(x, y)`.
    pub fn crible(&self, x: usize, y: usize, e: usize) -> Vec<(usize, usize)> {
        let i = x * self.quantaloid.n_objects() + y;
        self.elements[i][e].ones().map(|s| self.spans[i][s]).collect()
    }

    /// Element index of a span set, if it is one of the elements.
    pub fn element_of(&self, x: usize, y: usize, spans: &[(usize, usize)]) -> Option<usize> {
        let i = x * self.quantaloid.n_objects() + y;
        let set = to_bits(&self.spans[i], spans)?;
        self.elements[i].iter().position(|e| *e == set)
    }
}

fn to_bits(universe: &[(usize, usize)], spans: &[(usize, usize)]) -> Option<FixedBitSet> {
    let mut set = FixedBitSet::with_capacity(universe.len());
    for s in spans {
        set.insert(universe.iter().position(|u| u == s)?);
    }
    Some(set)
}

/// Span universes and crible operations shared by the plain and the
/// quotient construction.
struct Spans<'a> {
    c: &'a FiniteCategory,
    n: usize,
    universe: Vec<Vec<(usize, usize)>>,
    lookup: Vec<HashMap<(usize, usize), usize>>,
}

impl<'a> Spans<'a> {
    fn new(c: &'a FiniteCategory) -> Self {
        let n = c.n_objects();
        let mut universe = Vec::with_capacity(n * n);
        let mut lookup = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let mut spans = Vec::new();
                for f in c.arrows_into(y) {
                    for g in c.arrows_into(x) {
                        if c.dom(f) == c.dom(g) {
                            spans.push((f, g));
                        }
                    }
                }
                lookup.push(spans.iter().enumerate().map(|(i, &s)| (s, i)).collect());
                universe.push(spans);
            }
        }
        Spans { c, n, universe, lookup }
    }

    fn hom(&self, x: usize, y: usize) -> usize {
        x * self.n + y
    }

    fn empty(&self, x: usize, y: usize) -> FixedBitSet {
        FixedBitSet::with_capacity(self.universe[self.hom(x, y)].len())
    }

    fn close(&self, x: usize, y: usize, set: &FixedBitSet) -> FixedBitSet {
        let i = self.hom(x, y);
        let mut out = self.empty(x, y);
        for s in set.ones() {
            let (f, g) = self.universe[i][s];
            for h in self.c.arrows_into(self.c.dom(f)) {
                out.insert(self.lookup[i][&(self.c.comp(f, h), self.c.comp(g, h))]);
            }
        }
        out
    }

    fn is_closed(&self, x: usize, y: usize, set: &FixedBitSet) -> bool {
        self.close(x, y, set) == *set
    }

    /// Every crible `x ⇸ y`, as unions of principal ones.
    fn all_cribles(&self, x: usize, y: usize) -> Vec<FixedBitSet> {
        let i = self.hom(x, y);
        let principal: Vec<FixedBitSet> = (0..self.universe[i].len())
            .map(|s| {
                let mut one = self.empty(x, y);
                one.insert(s);
                self.close(x, y, &one)
            })
            .collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut all = vec![self.empty(x, y)];
        seen.insert(Vec::new());
        let mut next = 0;
        while next < all.len() {
            let current = all[next].clone();
            next += 1;
            for p in &principal {
                let mut u = current.clone();
                u.union_with(p);
                if seen.insert(u.ones().collect()) {
                    all.push(u);
                }
            }
        }
        all
    }

    /// `R ∘ S` for `S : x ⇸ y`, `R : y ⇸ z`.
    fn compose(&self, x: usize, y: usize, z: usize, r: &FixedBitSet, s: &FixedBitSet) -> FixedBitSet {
        let (ir, is, out) = (self.hom(y, z), self.hom(x, y), self.hom(x, z));
        let mut res = self.empty(x, z);
        for a in r.ones() {
            let (f, h) = self.universe[ir][a];
            for b in s.ones() {
                let (h2, g) = self.universe[is][b];
                if h == h2 {
                    res.insert(self.lookup[out][&(f, g)]);
                }
            }
        }
        res
    }

    fn identity(&self, x: usize) -> FixedBitSet {
        let i = self.hom(x, x);
        let mut set = self.empty(x, x);
        for f in self.c.arrows_into(x) {
            set.insert(self.lookup[i][&(f, f)]);
        }
        set
    }

    fn reverse(&self, x: usize, y: usize, r: &FixedBitSet) -> FixedBitSet {
        let (i, j) = (self.hom(x, y), self.hom(y, x));
        let mut out = self.empty(y, x);
        for s in r.ones() {
            let (f, g) = self.universe[i][s];
            out.insert(self.lookup[j][&(g, f)]);
        }
        out
    }

    /// `j(R) = { (f, g) : some covering sieve S on dom f has (f∘s, g∘s) ∈ R
    /// for every s ∈ S }`.
    fn nucleus(&self, topology: &Topology, x: usize, y: usize, r: &FixedBitSet) -> FixedBitSet {
        let i = self.hom(x, y);
        let mut out = self.empty(x, y);
        for (idx, &(f, g)) in self.universe[i].iter().enumerate() {
            let covered = topology.covers[self.c.dom(f)]
                .iter()
                .any(|s| s.iter().all(|&m| r.contains(self.lookup[i][&(self.c.comp(f, m), self.c.comp(g, m))])));
            if covered {
                out.insert(idx);
            }
        }
        out
    }

    fn label(&self, x: usize, y: usize, set: &FixedBitSet) -> String {
        if set.is_clear() {
            return "∅".into();
        }
        let i = self.hom(x, y);
        let parts: Vec<String> = set
            .ones()
            .map(|s| {
                let (f, g) = self.universe[i][s];
                format!("({},{})", self.c.name(f), self.c.name(g))
            })
            .collect();
        format!("{{{}}}", parts.join(","))
    }
}

fn inclusion_lattice(sets: &[FixedBitSet]) -> FiniteLattice {
    FiniteLattice::from_leq_fn(sets.len(), |a, b| sets[a].is_subset(&sets[b]))
        .expect("cribles closed under intersection form a lattice")
}

/// Canonical element order: by size, then by the sorted span indices.
fn sort_canonical(sets: &mut [FixedBitSet]) {
    sets.sort_by(|a, b| {
        a.count_ones(..)
            .cmp(&b.count_ones(..))
            .then_with(|| a.ones().collect::<Vec<_>>().cmp(&b.ones().collect::<Vec<_>>()))
    });
}

fn build(c: &FiniteCategory, topology: Option<&Topology>) -> Result<CribleQuantaloid, ConstructorError> {
    let spans = Spans::new(c);
    let n = c.n_objects();
    let j = |x: usize, y: usize, r: &FixedBitSet| match topology {
        Some(t) => spans.nucleus(t, x, y, r),
        None => r.clone(),
    };
    let mut elements: Vec<Vec<FixedBitSet>> = Vec::with_capacity(n * n);
    let mut index: Vec<HashMap<Vec<usize>, usize>> = Vec::with_capacity(n * n);
    let mut homs = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let mut closed: Vec<FixedBitSet> =
                spans.all_cribles(x, y).into_iter().filter(|r| j(x, y, r) == *r).collect();
            sort_canonical(&mut closed);
            let labels = closed.iter().map(|r| spans.label(x, y, r)).collect();
            homs.push(HomSpec::new(inclusion_lattice(&closed), labels));
            index.push(closed.iter().enumerate().map(|(k, r)| (r.ones().collect(), k)).collect());
            elements.push(closed);
        }
    }
    let find = |x: usize, y: usize, r: &FixedBitSet| -> usize { index[x * n + y][&r.ones().collect::<Vec<_>>()] };
    let identity: Vec<usize> = (0..n).map(|x| find(x, x, &j(x, x, &spans.identity(x)))).collect();
    let compose = |x: usize, y: usize, z: usize, g: usize, f: usize| {
        let r = spans.compose(x, y, z, &elements[y * n + z][g], &elements[x * n + y][f]);
        find(x, z, &j(x, z, &r))
    };
    let involution = |x: usize, y: usize, f: usize| find(y, x, &j(y, x, &spans.reverse(x, y, &elements[x * n + y][f])));
    let q = Quantaloid::build(c.object_names().to_vec(), homs, identity, compose, Some(&involution))
        .map_err(|e| ConstructorError::InvalidCategory(e.to_string()))?;
    Ok(CribleQuantaloid { quantaloid: q, spans: spans.universe, elements })
}

/// The quantaloid of all cribles, with span reversal as involution.
pub fn crible_quantaloid(c: &FiniteCategory) -> Result<CribleQuantaloid, ConstructorError> {
    build(c, None)
}

/// The quantaloid of `j`-closed cribles for the nucleus induced by a
/// topology: composition `j(R ∘ S)`, joins `j(⋃)`, identity `j(1)`.
pub fn quotient_quantaloid(c: &FiniteCategory, topology: &Topology) -> Result<CribleQuantaloid, ConstructorError> {
    topology.validate(c)?;
    build(c, Some(topology))
}

/// The nucleus induced by a topology, as a map on the elements of the full
/// crible quantaloid.
#[derive(Debug, Clone)]
pub struct Nucleus {
    /// Per hom `x * n + y`: element index to element index.
    pub maps: Vec<Vec<usize>>,
}

impl Nucleus {
    pub fn apply(&self, q: &Quantaloid, x: usize, y: usize, e: usize) -> usize {
        self.maps[x * q.n_objects() + y][e]
    }
}

pub fn nucleus_from_topology(
    c: &FiniteCategory,
    topology: &Topology,
    cribles: &CribleQuantaloid,
) -> Result<Nucleus, ConstructorError> {
    topology.validate(c)?;
    let spans = Spans::new(c);
    let n = c.n_objects();
    let mut maps = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let i = x * n + y;
            let map = cribles.elements[i]
                .iter()
                .map(|r| {
                    let jr = spans.nucleus(topology, x, y, r);
                    cribles.elements[i].iter().position(|e| *e == jr).expect("j of a crible is a crible")
                })
                .collect();
            maps.push(map);
        }
    }
    Ok(Nucleus { maps })
}

/// Checks that a span set is closed under precomposition.
pub fn validate_crible(
    c: &FiniteCategory,
    x: usize,
    y: usize,
    spans: &[(usize, usize)],
) -> Result<(), ConstructorError> {
    let s = Spans::new(c);
    let set = to_bits(&s.universe[s.hom(x, y)], spans)
        .ok_or_else(|| ConstructorError::NotACrible("a span has the wrong endpoints".into()))?;
    if s.is_closed(x, y, &set) {
        Ok(())
    } else {
        Err(ConstructorError::NotACrible(format!("{} is not closed under precomposition", s.label(x, y, &set))))
    }
}

/// One element map per hom, indexed by `x * n + y`.
pub type HomMaps = Vec<Vec<usize>>;

/// For a groupoid, the map sending a crible `R : D ⇸ C` to
/// `{ f ∘ g⁻¹ : (f, g) ∈ R }`, as bitmask elements of the free quantaloid,
/// and its inverse sending a subset to the crible generated by the spans
/// `(s, 1_D)`. Both are tabulated per hom.
pub fn groupoid_crible_maps(
    c: &FiniteCategory,
    cribles: &CribleQuantaloid,
) -> Result<(HomMaps, HomMaps), ConstructorError> {
    if !c.is_groupoid() {
        return Err(ConstructorError::NotAGroupoid);
    }
    let n = c.n_objects();
    let spans = Spans::new(c);
    let (mut forward, mut backward) = (Vec::new(), Vec::new());
    for d in 0..n {
        for cc in 0..n {
            let i = d * n + cc;
            let arrows = c.hom(d, cc);
            let bit = |m: usize| 1usize << arrows.iter().position(|&a| a == m).expect("typed arrow");
            forward.push(
                cribles.elements[i]
                    .iter()
                    .map(|r| {
                        r.ones()
                            .map(|s| {
                                let (f, g) = spans.universe[i][s];
                                bit(c.comp(f, c.inverse(g).expect("groupoid")))
                            })
                            .fold(0, |acc, b| acc | b)
                    })
                    .collect(),
            );
            backward.push(
                (0..1usize << arrows.len())
                    .map(|mask| {
                        let mut gens = spans.empty(d, cc);
                        for (k, &s) in arrows.iter().enumerate() {
                            if mask >> k & 1 == 1 {
                                gens.insert(spans.lookup[i][&(s, c.identity(d))]);
                            }
                        }
                        let r = spans.close(d, cc, &gens);
                        cribles.elements[i].iter().position(|e| *e == r).expect("closed span set")
                    })
                    .collect(),
            );
        }
    }
    Ok((forward, backward))
}

/// The two-object poset `u ≤ v` where the single sieve `{u ≤ v}` also covers
/// `v`.
pub fn example_poset_site() -> (FiniteCategory, Topology) {
    let c = FiniteCategory::poset(&["u", "v"], &[(0, 1)]).expect("a two-element chain");
    let m = c.morphism_index("u≤v").expect("the nontrivial arrow");
    let mut t = Topology::minimal(&c);
    t.covers[1].push(BTreeSet::from([m]));
    (c, t)
}
