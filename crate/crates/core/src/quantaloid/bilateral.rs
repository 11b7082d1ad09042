//! Decision procedures for the two bilaterality conditions on an involutive
//! quantaloid.
//!
//! Both conditions quantify over finite families of pairs
//! `(f_i : X -> X_i, g_i : X_i -> X)` at each object `X`. A family refutes the
//! condition when `1_X <= ⋁ g_i ∘ f_i` (plus, for the plain condition, the
//! pairwise compatibility inequalities) while
//! `1_X ≰ ⋁ (g_i ∧ f_iᵒ) ∘ (g_iᵒ ∧ f_i)`.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use super::{MorphismRef, Quantaloid, QuantaloidError};

pub const DEFAULT_MAX_PAIRS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BilateralityMode {
    /// Covering premise together with the pairwise compatibility premises.
    Cauchy,
    /// Covering premise only.
    Strong,
}

impl BilateralityMode {
    pub fn property_name(&self) -> &'static str {
        match self {
            BilateralityMode::Cauchy => "Cauchy-bilateral",
            BilateralityMode::Strong => "strongly Cauchy-bilateral",
        }
    }
}

impl fmt::Display for BilateralityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.property_name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BilateralityOptions {
    /// Largest candidate pool searched exhaustively for the compatibility
    /// variant.
    pub max_pairs: usize,
    /// Accept the plain condition as soon as the strong one holds.
    pub strong_shortcut: bool,
}

impl Default for BilateralityOptions {
    fn default() -> Self {
        BilateralityOptions { max_pairs: DEFAULT_MAX_PAIRS, strong_shortcut: true }
    }
}

/// One member `(f : X -> via, g : via -> X)` of a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilyPair {
    pub f: MorphismRef,
    pub g: MorphismRef,
}

impl FamilyPair {
    pub fn via(&self) -> usize {
        self.f.dst
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub object: usize,
    pub family: Vec<FamilyPair>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilateralityReport {
    pub mode: BilateralityMode,
    pub holds: bool,
    pub witness: Option<Witness>,
}

#[derive(Clone, Copy)]
struct Candidate {
    pair: FamilyPair,
    cover: usize,
    term: usize,
}

/// `(g ∧ fᵒ) ∘ (gᵒ ∧ f)` for `f : x -> y`, `g : y -> x`.
fn conclusion_term(q: &Quantaloid, x: usize, y: usize, f: usize, g: usize) -> usize {
    let left = q.hom(y, x).meet(g, q.inv(x, y, f));
    let right = q.hom(x, y).meet(q.inv(y, x, g), f);
    q.comp(x, y, x, left, right)
}

fn compatible(q: &Quantaloid, x: usize, a: FamilyPair, b: FamilyPair) -> bool {
    // f_k g_j f_j <= f_k and g_j f_j g_k <= g_k with j = a, k = b
    let (yj, yk) = (a.via(), b.via());
    let gf = q.comp(x, yj, x, a.g.elem, a.f.elem);
    q.hom(x, yk).leq(q.comp(x, x, yk, b.f.elem, gf), b.f.elem)
        && q.hom(yk, x).leq(q.comp(yk, x, x, gf, b.g.elem), b.g.elem)
}

/// Pairs at `x` that can occur in a minimal refuting family: the covering
/// contribution is nonzero and the conclusion term alone does not reach the
/// identity. With `self_compatible`, the pair must also satisfy the
/// compatibility premises against itself.
fn candidate_pool(q: &Quantaloid, x: usize, self_compatible: bool) -> Vec<Candidate> {
    let id = q.id(x);
    let end = q.hom(x, x);
    let mut pool = Vec::new();
    for y in 0..q.n_objects() {
        for f in 0..q.hom(x, y).size() {
            for g in 0..q.hom(y, x).size() {
                let cover = q.comp(x, y, x, g, f);
                if cover == end.bottom() {
                    continue;
                }
                let term = conclusion_term(q, x, y, f, g);
                if end.leq(id, term) {
                    continue;
                }
                let pair = FamilyPair { f: MorphismRef::new(x, y, f), g: MorphismRef::new(y, x, g) };
                if self_compatible && !compatible(q, x, pair, pair) {
                    continue;
                }
                pool.push(Candidate { pair, cover, term });
            }
        }
    }
    pool
}

/// Re-checks the premise of `mode` for a witness family.
pub fn premise_holds(q: &Quantaloid, mode: BilateralityMode, witness: &Witness) -> bool {
    let x = witness.object;
    let end = q.hom(x, x);
    let cover = end.join_all(witness.family.iter().map(|p| q.comp(x, p.via(), x, p.g.elem, p.f.elem)));
    if !end.leq(q.id(x), cover) {
        return false;
    }
    match mode {
        BilateralityMode::Strong => true,
        BilateralityMode::Cauchy => {
            witness.family.iter().all(|&a| witness.family.iter().all(|&b| compatible(q, x, a, b)))
        }
    }
}

/// Re-checks the shared conclusion for a witness family. Requires an
/// involution.
pub fn conclusion_holds(q: &Quantaloid, witness: &Witness) -> bool {
    let x = witness.object;
    let end = q.hom(x, x);
    let join = end.join_all(witness.family.iter().map(|p| conclusion_term(q, x, p.via(), p.f.elem, p.g.elem)));
    end.leq(q.id(x), join)
}

pub fn check_strong_cauchy_bilateral(q: &Quantaloid) -> Result<BilateralityReport, QuantaloidError> {
    q.require_involution()?;
    for x in 0..q.n_objects() {
        if let Some(family) = strong_refutation(q, x) {
            return Ok(BilateralityReport {
                mode: BilateralityMode::Strong,
                holds: false,
                witness: Some(Witness { object: x, family }),
            });
        }
    }
    Ok(BilateralityReport { mode: BilateralityMode::Strong, holds: true, witness: None })
}

/// Breadth-first search over reachable `(cover, conclusion)` joins finds the
/// least size of a refuting family; a memoised lexicographic descent then
/// picks the first family of that size.
fn strong_refutation(q: &Quantaloid, x: usize) -> Option<Vec<FamilyPair>> {
    let end = q.hom(x, x);
    let id = q.id(x);
    let refutes = |(c, t): (usize, usize)| end.leq(id, c) && !end.leq(id, t);
    let start = (end.bottom(), end.bottom());
    if refutes(start) {
        return Some(Vec::new());
    }
    let pool = candidate_pool(q, x, false);
    let mut depth = vec![usize::MAX; end.size() * end.size()];
    depth[start.0 * end.size() + start.1] = 0;
    let mut queue = VecDeque::from([start]);
    let mut target = None;
    while let Some((c, t)) = queue.pop_front() {
        let d = depth[c * end.size() + t];
        if refutes((c, t)) {
            target = Some(d);
            break;
        }
        for cand in &pool {
            let next = (end.join(c, cand.cover), end.join(t, cand.term));
            if end.leq(id, next.1) {
                continue;
            }
            let slot = &mut depth[next.0 * end.size() + next.1];
            if *slot == usize::MAX {
                *slot = d + 1;
                queue.push_back(next);
            }
        }
    }
    let k = target?;
    let mut failed = HashSet::new();
    let mut chosen = Vec::with_capacity(k);
    let found = descend(end, id, &pool, 0, k, start, &mut chosen, &mut failed);
    debug_assert!(found);
    Some(chosen.into_iter().map(|i| pool[i].pair).collect())
}

#[allow(clippy::too_many_arguments)]
fn descend(
    end: &crate::lattice::FiniteLattice,
    id: usize,
    pool: &[Candidate],
    from: usize,
    remaining: usize,
    state: (usize, usize),
    chosen: &mut Vec<usize>,
    failed: &mut HashSet<(usize, usize, (usize, usize))>,
) -> bool {
    if remaining == 0 {
        return end.leq(id, state.0) && !end.leq(id, state.1);
    }
    if failed.contains(&(from, remaining, state)) {
        return false;
    }
    for i in from..pool.len() {
        if pool.len() - i < remaining {
            break;
        }
        let next = (end.join(state.0, pool[i].cover), end.join(state.1, pool[i].term));
        if end.leq(id, next.1) {
            continue;
        }
        chosen.push(i);
        if descend(end, id, pool, i + 1, remaining - 1, next, chosen, failed) {
            return true;
        }
        chosen.pop();
    }
    failed.insert((from, remaining, state));
    false
}

pub fn check_cauchy_bilateral(q: &Quantaloid) -> Result<BilateralityReport, QuantaloidError> {
    check_cauchy_bilateral_with(q, BilateralityOptions::default())
}

pub fn check_cauchy_bilateral_with(
    q: &Quantaloid,
    options: BilateralityOptions,
) -> Result<BilateralityReport, QuantaloidError> {
    q.require_involution()?;
    let holds = BilateralityReport { mode: BilateralityMode::Cauchy, holds: true, witness: None };
    if options.strong_shortcut && check_strong_cauchy_bilateral(q)?.holds {
        return Ok(holds);
    }
    for x in 0..q.n_objects() {
        let end = q.hom(x, x);
        let id = q.id(x);
        if end.leq(id, end.bottom()) {
            // the empty family covers, and so does the conclusion
            continue;
        }
        let pool = candidate_pool(q, x, true);
        if pool.len() > options.max_pairs {
            return Err(QuantaloidError::SearchCapExceeded { object: x, pool: pool.len(), cap: options.max_pairs });
        }
        let compat: Vec<Vec<bool>> = pool
            .iter()
            .map(|a| {
                pool.iter().map(|b| compatible(q, x, a.pair, b.pair) && compatible(q, x, b.pair, a.pair)).collect()
            })
            .collect();
        let mut search = CliqueSearch { end, id, pool: &pool, compat: &compat, best: None, current: Vec::new() };
        search.extend(0, (end.bottom(), end.bottom()));
        if let Some(best) = search.best {
            return Ok(BilateralityReport {
                mode: BilateralityMode::Cauchy,
                holds: false,
                witness: Some(Witness { object: x, family: best.into_iter().map(|i| pool[i].pair).collect() }),
            });
        }
    }
    Ok(holds)
}

struct CliqueSearch<'a> {
    end: &'a crate::lattice::FiniteLattice,
    id: usize,
    pool: &'a [Candidate],
    compat: &'a [Vec<bool>],
    best: Option<Vec<usize>>,
    current: Vec<usize>,
}

impl CliqueSearch<'_> {
    /// Pre-order traversal of compatible index sets; among sets of equal size
    /// the first one reached is lexicographically least, so only strictly
    /// smaller refutations replace the incumbent.
    fn extend(&mut self, from: usize, state: (usize, usize)) {
        for i in from..self.pool.len() {
            if let Some(best) = &self.best {
                if self.current.len() + 1 >= best.len() {
                    return;
                }
            }
            if !self.current.iter().all(|&j| self.compat[i][j]) {
                continue;
            }
            let next = (self.end.join(state.0, self.pool[i].cover), self.end.join(state.1, self.pool[i].term));
            if self.end.leq(self.id, next.1) {
                continue;
            }
            self.current.push(i);
            if self.end.leq(self.id, next.0) {
                self.best = Some(self.current.clone());
            } else {
                self.extend(i + 1, next);
            }
            self.current.pop();
        }
    }
}
