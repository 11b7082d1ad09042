//! Finite quantaloids with an optional involution.
//!
//! A quantaloid here is a finite category whose hom-sets are finite complete
//! lattices and whose composition preserves joins in each variable. Objects
//! and lattice elements are dense indices; the labels carried alongside are
//! only used for display and serialization.

mod bilateral;
mod split;

pub use bilateral::{
    check_cauchy_bilateral, check_cauchy_bilateral_with, check_strong_cauchy_bilateral, conclusion_holds,
    premise_holds, BilateralityMode, BilateralityOptions, BilateralityReport, FamilyPair, Witness, DEFAULT_MAX_PAIRS,
};
pub use split::split_idempotents;

use std::fmt;

use thiserror::Error;

use crate::lattice::FiniteLattice;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuantaloidError {
    #[error("malformed quantaloid: {0}")]
    Malformed(String),
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("the quantaloid carries no involution")]
    NoInvolution,
    #[error("search cap exceeded at object {object}: candidate pool of {pool} pairs exceeds the cap of {cap}")]
    SearchCapExceeded { object: usize, pool: usize, cap: usize },
}

/// An arrow `elem : src -> dst` of a quantaloid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MorphismRef {
    pub src: usize,
    pub dst: usize,
    pub elem: usize,
}

impl MorphismRef {
    pub fn new(src: usize, dst: usize, elem: usize) -> Self {
        MorphismRef { src, dst, elem }
    }
}

/// A hom-lattice together with display labels for its elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomSpec {
    pub lattice: FiniteLattice,
    pub labels: Vec<String>,
}

impl HomSpec {
    pub fn new(lattice: FiniteLattice, labels: Vec<String>) -> Self {
        HomSpec { lattice, labels }
    }

    /// Labels are the element indices themselves.
    pub fn unlabelled(lattice: FiniteLattice) -> Self {
        let labels = (0..lattice.size()).map(|i| i.to_string()).collect();
        HomSpec { lattice, labels }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quantaloid {
    objects: Vec<String>,
    homs: Vec<HomSpec>,
    /// Indexed by `(x * n + y) * n + z`; each table maps `(g, f)` with
    /// `g : y -> z`, `f : x -> y` to `g ∘ f : x -> z`, row-major in `g`.
    compose: Vec<Vec<usize>>,
    identity: Vec<usize>,
    /// Indexed by `x * n + y`; maps `hom(x, y)` into `hom(y, x)`.
    involution: Option<Vec<Vec<usize>>>,
}

/// The axiom a [`LawViolation`] refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Law {
    Associativity,
    LeftUnit,
    RightUnit,
    JoinsInFirstArgument,
    JoinsInSecondArgument,
    InvolutionMonotone,
    InvolutionReversesComposition,
    InvolutionInvolutive,
}

impl Law {
    pub fn name(&self) -> &'static str {
        match self {
            Law::Associativity => "associativity",
            Law::LeftUnit => "left unit",
            Law::RightUnit => "right unit",
            Law::JoinsInFirstArgument => "join preservation (first argument)",
            Law::JoinsInSecondArgument => "join preservation (second argument)",
            Law::InvolutionMonotone => "involution monotone",
            Law::InvolutionReversesComposition => "involution reverses composition",
            Law::InvolutionInvolutive => "involution involutive",
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawViolation {
    pub law: Law,
    pub detail: String,
}

impl fmt::Display for LawViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.law, self.detail)
    }
}

impl Quantaloid {
    /// Assembles a quantaloid from explicit tables, checking only that the
    /// tables are structurally well formed. Use [`Quantaloid::validate`] for
    /// the axioms.
    pub fn from_parts(
        objects: Vec<String>,
        homs: Vec<HomSpec>,
        compose: Vec<Vec<usize>>,
        identity: Vec<usize>,
        involution: Option<Vec<Vec<usize>>>,
    ) -> Result<Self, QuantaloidError> {
        let n = objects.len();
        let bad = |msg: String| Err(QuantaloidError::Malformed(msg));
        if n == 0 {
            return bad("no objects".into());
        }
        if homs.len() != n * n {
            return bad(format!("expected {} hom-lattices, found {}", n * n, homs.len()));
        }
        for (i, h) in homs.iter().enumerate() {
            if h.labels.len() != h.lattice.size() {
                return bad(format!(
                    "hom {} -> {} has {} labels for {} elements",
                    objects[i / n],
                    objects[i % n],
                    h.labels.len(),
                    h.lattice.size()
                ));
            }
        }
        if compose.len() != n * n * n {
            return bad(format!("expected {} composition tables, found {}", n * n * n, compose.len()));
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let table = &compose[(x * n + y) * n + z];
                    let (gs, fs, out) = (
                        homs[y * n + z].lattice.size(),
                        homs[x * n + y].lattice.size(),
                        homs[x * n + z].lattice.size(),
                    );
                    if table.len() != gs * fs {
                        return bad(format!(
                            "composition table {} -> {} -> {} has {} entries, expected {}",
                            objects[x],
                            objects[y],
                            objects[z],
                            table.len(),
                            gs * fs
                        ));
                    }
                    if let Some(&v) = table.iter().find(|&&v| v >= out) {
                        return bad(format!(
                            "composition table {} -> {} -> {} has out-of-range entry {v}",
                            objects[x], objects[y], objects[z]
                        ));
                    }
                }
            }
        }
        if identity.len() != n {
            return bad(format!("expected {n} identities, found {}", identity.len()));
        }
        for x in 0..n {
            if identity[x] >= homs[x * n + x].lattice.size() {
                return bad(format!("identity of {} out of range", objects[x]));
            }
        }
        if let Some(inv) = &involution {
            if inv.len() != n * n {
                return bad(format!("expected {} involution maps, found {}", n * n, inv.len()));
            }
            for x in 0..n {
                for y in 0..n {
                    let map = &inv[x * n + y];
                    if map.len() != homs[x * n + y].lattice.size()
                        || map.iter().any(|&v| v >= homs[y * n + x].lattice.size())
                    {
                        return bad(format!(
                            "involution on {} -> {} does not map into {} -> {}",
                            objects[x], objects[y], objects[y], objects[x]
                        ));
                    }
                }
            }
        }
        Ok(Quantaloid { objects, homs, compose, identity, involution })
    }

    /// Tabulates composition and involution from closures.
    pub fn build(
        objects: Vec<String>,
        homs: Vec<HomSpec>,
        identity: Vec<usize>,
        compose: impl Fn(usize, usize, usize, usize, usize) -> usize,
        involution: Option<&dyn Fn(usize, usize, usize) -> usize>,
    ) -> Result<Self, QuantaloidError> {
        let n = objects.len();
        if homs.len() != n * n {
            return Err(QuantaloidError::Malformed(format!("expected {} hom-lattices, found {}", n * n, homs.len())));
        }
        let mut tables = Vec::with_capacity(n * n * n);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let (gs, fs) = (homs[y * n + z].lattice.size(), homs[x * n + y].lattice.size());
                    let mut table = Vec::with_capacity(gs * fs);
                    for g in 0..gs {
                        for f in 0..fs {
                            table.push(compose(x, y, z, g, f));
                        }
                    }
                    tables.push(table);
                }
            }
        }
        let inv = involution.map(|inv| {
            let mut maps = Vec::with_capacity(n * n);
            for x in 0..n {
                for y in 0..n {
                    maps.push((0..homs[x * n + y].lattice.size()).map(|f| inv(x, y, f)).collect());
                }
            }
            maps
        });
        Self::from_parts(objects, homs, tables, identity, inv)
    }

    /// One-object quantaloid (a unital quantale).
    pub fn quantale(
        object: &str,
        hom: HomSpec,
        unit: usize,
        multiply: impl Fn(usize, usize) -> usize,
        involution: Option<&dyn Fn(usize) -> usize>,
    ) -> Result<Self, QuantaloidError> {
        let inv_adapter;
        let inv: Option<&dyn Fn(usize, usize, usize) -> usize> = match involution {
            Some(i) => {
                inv_adapter = move |_: usize, _: usize, f: usize| i(f);
                Some(&inv_adapter)
            }
            None => None,
        };
        Self::build(vec![object.to_string()], vec![hom], vec![unit], |_, _, _, g, f| multiply(g, f), inv)
    }

    pub fn with_involution(self, involution: Option<Vec<Vec<usize>>>) -> Result<Self, QuantaloidError> {
        Self::from_parts(self.objects, self.homs, self.compose, self.identity, involution)
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn object_name(&self, x: usize) -> &str {
        &self.objects[x]
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    #[inline]
    pub fn hom(&self, x: usize, y: usize) -> &FiniteLattice {
        &self.homs[x * self.objects.len() + y].lattice
    }

    pub fn hom_spec(&self, x: usize, y: usize) -> &HomSpec {
        &self.homs[x * self.objects.len() + y]
    }

    pub fn labels(&self, x: usize, y: usize) -> &[String] {
        &self.homs[x * self.objects.len() + y].labels
    }

    pub fn label(&self, x: usize, y: usize, e: usize) -> &str {
        &self.labels(x, y)[e]
    }

    pub fn elem_by_label(&self, x: usize, y: usize, label: &str) -> Option<usize> {
        self.labels(x, y).iter().position(|l| l == label)
    }

    /// Looks up an arrow by object names and element label.
    pub fn morphism(&self, src: &str, dst: &str, label: &str) -> Option<MorphismRef> {
        let (x, y) = (self.object_index(src)?, self.object_index(dst)?);
        Some(MorphismRef::new(x, y, self.elem_by_label(x, y, label)?))
    }

    pub fn describe(&self, m: MorphismRef) -> String {
        self.label(m.src, m.dst, m.elem).to_string()
    }

    pub fn composition_table(&self, x: usize, y: usize, z: usize) -> &[usize] {
        let n = self.objects.len();
        &self.compose[(x * n + y) * n + z]
    }

    pub fn identities(&self) -> &[usize] {
        &self.identity
    }

    pub fn involution_maps(&self) -> Option<&[Vec<usize>]> {
        self.involution.as_deref()
    }

    pub fn is_involutive(&self) -> bool {
        self.involution.is_some()
    }

    /// `g ∘ f` for `f : x -> y`, `g : y -> z`.
    #[inline]
    pub fn comp(&self, x: usize, y: usize, z: usize, g: usize, f: usize) -> usize {
        let n = self.objects.len();
        let fs = self.homs[x * n + y].lattice.size();
        self.compose[(x * n + y) * n + z][g * fs + f]
    }

    #[inline]
    pub fn id(&self, x: usize) -> usize {
        self.identity[x]
    }

    /// Involute of `f : x -> y`, an element of `hom(y, x)`. Panics without an
    /// involution; use [`Quantaloid::involute`] for the checked version.
    #[inline]
    pub fn inv(&self, x: usize, y: usize, f: usize) -> usize {
        let n = self.objects.len();
        self.involution.as_ref().expect("involutive quantaloid")[x * n + y][f]
    }

    pub(crate) fn require_involution(&self) -> Result<(), QuantaloidError> {
        if self.involution.is_some() {
            Ok(())
        } else {
            Err(QuantaloidError::NoInvolution)
        }
    }

    fn check_ref(&self, m: MorphismRef) -> Result<(), QuantaloidError> {
        let n = self.objects.len();
        if m.src >= n || m.dst >= n || m.elem >= self.hom(m.src, m.dst).size() {
            return Err(QuantaloidError::TypeMismatch(format!("{m:?} does not name an arrow")));
        }
        Ok(())
    }

    pub fn compose(&self, g: MorphismRef, f: MorphismRef) -> Result<MorphismRef, QuantaloidError> {
        self.check_ref(g)?;
        self.check_ref(f)?;
        if f.dst != g.src {
            return Err(QuantaloidError::TypeMismatch(format!(
                "cannot compose {} -> {} after {} -> {}",
                self.objects[g.src], self.objects[g.dst], self.objects[f.src], self.objects[f.dst]
            )));
        }
        Ok(MorphismRef::new(f.src, g.dst, self.comp(f.src, f.dst, g.dst, g.elem, f.elem)))
    }

    pub fn identity(&self, x: usize) -> MorphismRef {
        MorphismRef::new(x, x, self.identity[x])
    }

    pub fn involute(&self, f: MorphismRef) -> Result<MorphismRef, QuantaloidError> {
        self.check_ref(f)?;
        self.require_involution()?;
        Ok(MorphismRef::new(f.dst, f.src, self.inv(f.src, f.dst, f.elem)))
    }

    /// Greatest `k : x -> y` with `g ∘ k <= h`, for `g : y -> z`, `h : x -> z`.
    pub fn rres(&self, x: usize, y: usize, z: usize, g: usize, h: usize) -> usize {
        let target = self.hom(x, z);
        let candidates = (0..self.hom(x, y).size()).filter(|&k| target.leq(self.comp(x, y, z, g, k), h));
        self.hom(x, y).join_all(candidates)
    }

    /// Greatest `k : y -> z` with `k ∘ f <= h`, for `f : x -> y`, `h : x -> z`.
    pub fn lres(&self, x: usize, y: usize, z: usize, f: usize, h: usize) -> usize {
        let target = self.hom(x, z);
        let candidates = (0..self.hom(y, z).size()).filter(|&k| target.leq(self.comp(x, y, z, k, f), h));
        self.hom(y, z).join_all(candidates)
    }

    /// Right residual of `h : X -> Z` by `g : Y -> Z`, an arrow `X -> Y`.
    pub fn right_residual(&self, g: MorphismRef, h: MorphismRef) -> Result<MorphismRef, QuantaloidError> {
        self.check_ref(g)?;
        self.check_ref(h)?;
        if g.dst != h.dst {
            return Err(QuantaloidError::TypeMismatch("right residual needs a common codomain".into()));
        }
        Ok(MorphismRef::new(h.src, g.src, self.rres(h.src, g.src, g.dst, g.elem, h.elem)))
    }

    /// Left residual of `h : X -> Z` by `f : X -> Y`, an arrow `Y -> Z`.
    pub fn left_residual(&self, f: MorphismRef, h: MorphismRef) -> Result<MorphismRef, QuantaloidError> {
        self.check_ref(f)?;
        self.check_ref(h)?;
        if f.src != h.src {
            return Err(QuantaloidError::TypeMismatch("left residual needs a common domain".into()));
        }
        Ok(MorphismRef::new(f.dst, h.dst, self.lres(f.src, f.dst, h.dst, f.elem, h.elem)))
    }

    /// `f ⊣ g` for `f : x -> y`, `g : y -> x`.
    pub fn adjoint_pair(&self, x: usize, y: usize, f: usize, g: usize) -> bool {
        self.hom(x, x).leq(self.id(x), self.comp(x, y, x, g, f))
            && self.hom(y, y).leq(self.comp(y, x, y, f, g), self.id(y))
    }

    pub fn is_left_adjoint(&self, f: MorphismRef, g: MorphismRef) -> Result<bool, QuantaloidError> {
        self.check_ref(f)?;
        self.check_ref(g)?;
        if f.src != g.dst || f.dst != g.src {
            return Err(QuantaloidError::TypeMismatch("adjoint pair must run in opposite directions".into()));
        }
        Ok(self.adjoint_pair(f.src, f.dst, f.elem, g.elem))
    }

    /// The greatest `g` with `f ∘ g <= 1`; `f` is a left adjoint exactly when
    /// it is left adjoint to this candidate.
    pub fn right_adjoint_candidate(&self, f: MorphismRef) -> Result<MorphismRef, QuantaloidError> {
        self.check_ref(f)?;
        let (x, y) = (f.src, f.dst);
        Ok(MorphismRef::new(y, x, self.rres(y, x, y, f.elem, self.id(y))))
    }

    /// Left adjoint whose right adjoint is its involute.
    pub fn is_symmetric_left_adjoint(&self, f: MorphismRef) -> Result<bool, QuantaloidError> {
        let fo = self.involute(f)?;
        self.is_left_adjoint(f, fo)
    }

    /// Checks every axiom and reports the first counterexample found for each
    /// violated law. An empty report means the quantaloid is valid.
    pub fn validate(&self) -> Vec<LawViolation> {
        let mut out = Vec::new();
        let mut report = |law: Law, detail: String| {
            if !out.iter().any(|v: &LawViolation| v.law == law) {
                out.push(LawViolation { law, detail });
            }
        };
        let n = self.n_objects();
        let name = |x: usize| self.objects[x].as_str();

        for x in 0..n {
            for y in 0..n {
                for f in 0..self.hom(x, y).size() {
                    if self.comp(x, y, y, self.id(y), f) != f {
                        report(
                            Law::LeftUnit,
                            format!("1_{} ∘ {} != {}", name(y), self.label(x, y, f), self.label(x, y, f)),
                        );
                    }
                    if self.comp(x, x, y, f, self.id(x)) != f {
                        report(
                            Law::RightUnit,
                            format!("{} ∘ 1_{} != {}", self.label(x, y, f), name(x), self.label(x, y, f)),
                        );
                    }
                }
            }
        }

        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for w in 0..n {
                        'assoc: for h in 0..self.hom(z, w).size() {
                            for g in 0..self.hom(y, z).size() {
                                let hg = self.comp(y, z, w, h, g);
                                for f in 0..self.hom(x, y).size() {
                                    let lhs = self.comp(x, z, w, h, self.comp(x, y, z, g, f));
                                    let rhs = self.comp(x, y, w, hg, f);
                                    if lhs != rhs {
                                        report(
                                            Law::Associativity,
                                            format!(
                                                "h={}, g={}, f={}: h∘(g∘f)={} but (h∘g)∘f={}",
                                                self.label(z, w, h),
                                                self.label(y, z, g),
                                                self.label(x, y, f),
                                                self.label(x, w, lhs),
                                                self.label(x, w, rhs)
                                            ),
                                        );
                                        break 'assoc;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }

        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let (gl, fl, out_l) = (self.hom(y, z), self.hom(x, y), self.hom(x, z));
                    for g in 0..gl.size() {
                        if self.comp(x, y, z, g, fl.bottom()) != out_l.bottom() {
                            report(Law::JoinsInSecondArgument, format!("{} ∘ ⊥ is not ⊥", self.label(y, z, g)));
                        }
                        for f1 in 0..fl.size() {
                            for f2 in f1 + 1..fl.size() {
                                let lhs = self.comp(x, y, z, g, fl.join(f1, f2));
                                let rhs = out_l.join(self.comp(x, y, z, g, f1), self.comp(x, y, z, g, f2));
                                if lhs != rhs {
                                    report(
                                        Law::JoinsInSecondArgument,
                                        format!(
                                            "g={}, f1={}, f2={}: g∘(f1∨f2)={} but g∘f1 ∨ g∘f2={}",
                                            self.label(y, z, g),
                                            self.label(x, y, f1),
                                            self.label(x, y, f2),
                                            self.label(x, z, lhs),
                                            self.label(x, z, rhs)
                                        ),
                                    );
                                }
                            }
                        }
                    }
                    for f in 0..fl.size() {
                        if self.comp(x, y, z, gl.bottom(), f) != out_l.bottom() {
                            report(Law::JoinsInFirstArgument, format!("⊥ ∘ {} is not ⊥", self.label(x, y, f)));
                        }
                        for g1 in 0..gl.size() {
                            for g2 in g1 + 1..gl.size() {
                                let lhs = self.comp(x, y, z, gl.join(g1, g2), f);
                                let rhs = out_l.join(self.comp(x, y, z, g1, f), self.comp(x, y, z, g2, f));
                                if lhs != rhs {
                                    report(
                                        Law::JoinsInFirstArgument,
                                        format!(
                                            "g1={}, g2={}, f={}: (g1∨g2)∘f={} but g1∘f ∨ g2∘f={}",
                                            self.label(y, z, g1),
                                            self.label(y, z, g2),
                                            self.label(x, y, f),
                                            self.label(x, z, lhs),
                                            self.label(x, z, rhs)
                                        ),
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }

        if self.involution.is_some() {
            out.extend(self.involution_violations());
        }
        out
    }

    /// The involution laws alone: monotone, involutive, and
    /// composition-reversing.
    pub fn involution_violations(&self) -> Vec<LawViolation> {
        let mut out = Vec::new();
        if self.involution.is_none() {
            return out;
        }
        let mut report = |law: Law, detail: String| {
            if !out.iter().any(|v: &LawViolation| v.law == law) {
                out.push(LawViolation { law, detail });
            }
        };
        let n = self.n_objects();
        for x in 0..n {
            for y in 0..n {
                let l = self.hom(x, y);
                for f in 0..l.size() {
                    if self.inv(y, x, self.inv(x, y, f)) != f {
                        report(
                            Law::InvolutionInvolutive,
                            format!("{}ᵒᵒ != {}", self.label(x, y, f), self.label(x, y, f)),
                        );
                    }
                    for g in 0..l.size() {
                        if l.leq(f, g) && !self.hom(y, x).leq(self.inv(x, y, f), self.inv(x, y, g)) {
                            report(
                                Law::InvolutionMonotone,
                                format!(
                                    "{} <= {} but their involutes are not ordered",
                                    self.label(x, y, f),
                                    self.label(x, y, g)
                                ),
                            );
                        }
                    }
                }
                for z in 0..n {
                    for g in 0..self.hom(y, z).size() {
                        for f in 0..l.size() {
                            let lhs = self.inv(x, z, self.comp(x, y, z, g, f));
                            let rhs = self.comp(z, y, x, self.inv(x, y, f), self.inv(y, z, g));
                            if lhs != rhs {
                                report(
                                    Law::InvolutionReversesComposition,
                                    format!(
                                        "g={}, f={}: (g∘f)ᵒ={} but fᵒ∘gᵒ={}",
                                        self.label(y, z, g),
                                        self.label(x, y, f),
                                        self.label(z, x, lhs),
                                        self.label(z, x, rhs)
                                    ),
                                );
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// First triple `(g, f, h)` with `g∘f ∧ h ≰ g∘(f ∧ gᵒ∘h)`, where
    /// `f : z -> y`, `g : y -> x`, `h : z -> x`.
    pub fn modular_law_witness(&self) -> Result<Option<(MorphismRef, MorphismRef, MorphismRef)>, QuantaloidError> {
        self.require_involution()?;
        let n = self.n_objects();
        for z in 0..n {
            for y in 0..n {
                for x in 0..n {
                    let (lf, lzx) = (self.hom(z, y), self.hom(z, x));
                    for g in 0..self.hom(y, x).size() {
                        let go = self.inv(y, x, g);
                        for f in 0..lf.size() {
                            let gf = self.comp(z, y, x, g, f);
                            for h in 0..lzx.size() {
                                let lhs = lzx.meet(gf, h);
                                let goh = self.comp(z, x, y, go, h);
                                let rhs = self.comp(z, y, x, g, lf.meet(f, goh));
                                if !lzx.leq(lhs, rhs) {
                                    return Ok(Some((
                                        MorphismRef::new(y, x, g),
                                        MorphismRef::new(z, y, f),
                                        MorphismRef::new(z, x, h),
                                    )));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    pub fn is_modular(&self) -> Result<bool, QuantaloidError> {
        Ok(self.modular_law_witness()?.is_none())
    }

    /// Every hom-lattice is distributive (a finite locale).
    pub fn is_locally_localic(&self) -> bool {
        self.homs.iter().all(|h| h.lattice.is_distributive())
    }

    /// The identity on each object is the top of its endo-hom.
    pub fn is_integral(&self) -> bool {
        (0..self.n_objects()).all(|x| self.id(x) == self.hom(x, x).top())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::FiniteCategory;
    use crate::constructors::{
        example_e7_quantale, free_quantaloid, group_quantale, interval_quantale, locale_quantale,
    };

    fn two_chain() -> Quantaloid {
        let hom = HomSpec::new(FiniteLattice::chain(2), vec!["⊥".into(), "⊤".into()]);
        Quantaloid::quantale("•", hom, 1, |g, f| g.min(f), Some(&|f| f)).unwrap()
    }

    fn z3() -> Quantaloid {
        group_quantale(&FiniteCategory::cyclic_group(3)).unwrap()
    }

    fn m(q: &Quantaloid, label: &str) -> MorphismRef {
        q.morphism(q.object_name(0), q.object_name(0), label).unwrap()
    }

    #[test]
    fn two_chain_quantale_is_valid() {
        assert!(two_chain().validate().is_empty());
    }

    fn e7_with_aa(q: &Quantaloid, value: &str) -> Quantaloid {
        let (a, v) = (q.elem_by_label(0, 0, "a").unwrap(), q.elem_by_label(0, 0, value).unwrap());
        let mut table = q.composition_table(0, 0, 0).to_vec();
        table[a * q.hom(0, 0).size() + a] = v;
        Quantaloid::from_parts(
            q.object_names().to_vec(),
            vec![q.hom_spec(0, 0).clone()],
            vec![table],
            q.identities().to_vec(),
            q.involution_maps().map(|m| m.to_vec()),
        )
        .unwrap()
    }

    #[test]
    fn e7_is_valid() {
        assert!(example_e7_quantale().validate().is_empty());
    }

    #[test]
    fn e7_with_aa_top_is_still_a_quantale() {
        // every product involving a∘a is absorbed by ⊤ or by a∘b = a
        let q = e7_with_aa(&example_e7_quantale(), "⊤");
        assert!(q.validate().is_empty());
    }

    #[test]
    fn e7_with_aa_one_breaks_associativity() {
        let q = e7_with_aa(&example_e7_quantale(), "1");
        let report = q.validate();
        // (a∘a)∘b = b but a∘(a∘b) = a∘a = 1
        assert!(report.iter().any(|v| v.law == Law::Associativity), "{report:?}");
    }

    #[test]
    fn compose_examples() {
        let q = example_e7_quantale();
        assert_eq!(q.compose(m(&q, "a"), m(&q, "a")).unwrap(), m(&q, "b"));
        assert_eq!(q.compose(q.identity(0), m(&q, "a")).unwrap(), m(&q, "a"));
        let i3 = interval_quantale(3);
        assert_eq!(i3.comp(0, 0, 0, 2, 2), 3);
    }

    #[test]
    fn compose_type_mismatch() {
        let c = FiniteCategory::codiscrete(2);
        let q = free_quantaloid(&c, false).unwrap();
        let f = MorphismRef::new(0, 1, 1);
        assert!(matches!(q.compose(f, f), Err(QuantaloidError::TypeMismatch(_))));
    }

    #[test]
    fn residual_examples() {
        let i3 = interval_quantale(3);
        // 1 + k >= 2 numerically has least solution k = 1
        assert_eq!(i3.right_residual(MorphismRef::new(0, 0, 1), MorphismRef::new(0, 0, 2)).unwrap().elem, 1);
        let q = example_e7_quantale();
        let h = m(&q, "b");
        assert_eq!(q.right_residual(q.identity(0), h).unwrap(), h);
        let z2 = free_quantaloid(&FiniteCategory::cyclic_group(2), true).unwrap();
        let r = z2.right_residual(m(&z2, "{σ}"), m(&z2, "{1}")).unwrap();
        assert_eq!(z2.describe(r), "{σ}");
    }

    #[test]
    fn adjoint_examples() {
        let q = z3();
        assert!(q.is_left_adjoint(q.identity(0), q.identity(0)).unwrap());
        assert!(q.is_left_adjoint(m(&q, "{a}"), m(&q, "{b}")).unwrap());
        assert_eq!(q.right_adjoint_candidate(m(&q, "{a}")).unwrap(), m(&q, "{b}"));
        let ab = m(&q, "{a,b}");
        let cand = q.right_adjoint_candidate(ab).unwrap();
        assert_eq!(q.describe(cand), "∅");
        assert!(!q.is_left_adjoint(ab, cand).unwrap());
        let e7 = example_e7_quantale();
        assert!(!e7.is_left_adjoint(m(&e7, "⊤"), m(&e7, "a")).unwrap());
        let one = e7.right_adjoint_candidate(e7.identity(0)).unwrap();
        assert!(e7.is_left_adjoint(e7.identity(0), one).unwrap());
    }

    #[test]
    fn symmetric_left_adjoints() {
        let q = z3();
        assert!(q.is_symmetric_left_adjoint(q.identity(0)).unwrap());
        assert!(!q.is_symmetric_left_adjoint(m(&q, "{a}")).unwrap());
        let z2 = free_quantaloid(&FiniteCategory::cyclic_group(2), true).unwrap();
        assert!(z2.is_symmetric_left_adjoint(m(&z2, "{σ}")).unwrap());
        let plain = free_quantaloid(&FiniteCategory::cyclic_group(2), false).unwrap();
        assert_eq!(plain.is_symmetric_left_adjoint(plain.identity(0)), Err(QuantaloidError::NoInvolution));
    }

    #[test]
    fn modularity_examples() {
        let z2 = free_quantaloid(&FiniteCategory::cyclic_group(2), true).unwrap();
        assert!(z2.is_modular().unwrap());
        let i3 = interval_quantale(3);
        let (g, f, h) = i3.modular_law_witness().unwrap().expect("interval quantale is not modular");
        // lhs = max(g+f, h), rhs = g + max(f, g+h), capped; lhs must be numerically below rhs
        let cap = |v: usize| v.min(3);
        assert!(h.elem.max(cap(g.elem + f.elem)) < cap(g.elem + f.elem.max(cap(g.elem + h.elem))));
        // the triple named by hand fails too
        let lhs = i3.hom(0, 0).meet(i3.comp(0, 0, 0, 1, 1), 2);
        let rhs = i3.comp(0, 0, 0, 1, i3.hom(0, 0).meet(1, i3.comp(0, 0, 0, 1, 2)));
        assert_eq!((lhs, rhs), (2, 3));
        assert!(!example_e7_quantale().is_modular().unwrap());
    }

    #[test]
    fn localic_and_integral() {
        let i3 = interval_quantale(3);
        assert!(i3.is_locally_localic());
        assert!(i3.is_integral());
        let e7 = example_e7_quantale();
        assert!(!e7.is_locally_localic());
        assert!(!e7.is_integral());
        assert!(two_chain().is_locally_localic());
        assert!(locale_quantale(&FiniteLattice::diamond()).unwrap().is_integral());
    }

    #[test]
    fn malformed_tables_are_rejected() {
        let q = two_chain();
        let err = Quantaloid::from_parts(
            q.object_names().to_vec(),
            vec![q.hom_spec(0, 0).clone()],
            vec![vec![0, 0, 0]],
            vec![1],
            None,
        )
        .unwrap_err();
        assert!(matches!(err, QuantaloidError::Malformed(_)));
    }
}
