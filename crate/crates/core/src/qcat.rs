//! Categories enriched in a finite quantaloid, functors between them, and
//! distributors.
//!
//! A category stores `hom[y * n + x] = A(y, x)`, an element of
//! `Q(t x, t y)`. A distributor `Φ : A ⇸ B` stores `Φ(b, a)` in
//! `Q(t a, t b)` at `b * |A| + a`. Presheaves are distributors out of a
//! one-object unit category.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::quantaloid::{Quantaloid, QuantaloidError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QCatError {
    #[error(transparent)]
    Quantaloid(#[from] QuantaloidError),
    #[error("malformed: {0}")]
    Malformed(String),
    #[error("axioms violated: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("not symmetric: {0}")]
    NotSymmetric(String),
    #[error("not a left adjoint: {0}")]
    NotLeftAdjoint(String),
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    Unit,
    Composition,
    LeftAction,
    RightAction,
    Type,
    Functoriality,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::Unit => "unit",
            ViolationKind::Composition => "composition",
            ViolationKind::LeftAction => "left action",
            ViolationKind::RightAction => "right action",
            ViolationKind::Type => "type preservation",
            ViolationKind::Functoriality => "functoriality",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.detail)
    }
}

#[derive(Debug, PartialEq, Eq)]
struct CategoryData {
    base: Arc<Quantaloid>,
    names: Vec<String>,
    types: Vec<usize>,
    hom: Vec<usize>,
}

/// A validated category enriched in a finite quantaloid. Cloning is cheap.
#[derive(Debug, Clone)]
pub struct QCategory(Arc<CategoryData>);

impl PartialEq for QCategory {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || ((Arc::ptr_eq(&self.0.base, &other.0.base) || self.0.base == other.0.base)
                && self.0.names == other.0.names
                && self.0.types == other.0.types
                && self.0.hom == other.0.hom)
    }
}

impl Eq for QCategory {}

impl QCategory {
    pub fn new(
        base: Arc<Quantaloid>,
        names: Vec<String>,
        types: Vec<usize>,
        hom: Vec<usize>,
    ) -> Result<Self, QCatError> {
        let report = Self::violations(&base, &types, &hom)?;
        if !report.is_empty() {
            return Err(QCatError::Invalid(report));
        }
        if names.len() != types.len() {
            return Err(QCatError::Malformed(format!("{} names for {} objects", names.len(), types.len())));
        }
        Ok(QCategory(Arc::new(CategoryData { base, names, types, hom })))
    }

    /// Unit and composition inequalities that fail; structural problems are
    /// errors instead.
    pub fn violations(base: &Quantaloid, types: &[usize], hom: &[usize]) -> Result<Vec<Violation>, QCatError> {
        let n = types.len();
        if let Some(&t) = types.iter().find(|&&t| t >= base.n_objects()) {
            return Err(QCatError::Malformed(format!("type {t} is not an object of the base")));
        }
        if hom.len() != n * n {
            return Err(QCatError::Malformed(format!("hom matrix has {} entries, expected {}", hom.len(), n * n)));
        }
        for y in 0..n {
            for x in 0..n {
                if hom[y * n + x] >= base.hom(types[x], types[y]).size() {
                    return Err(QCatError::Malformed(format!("hom({y}, {x}) is out of range")));
                }
            }
        }
        let mut out = Vec::new();
        for x in 0..n {
            let t = types[x];
            if !base.hom(t, t).leq(base.id(t), hom[x * n + x]) {
                out.push(Violation { kind: ViolationKind::Unit, detail: format!("1 ≰ hom({x}, {x})") });
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let (tx, ty, tz) = (types[x], types[y], types[z]);
                    let lhs = base.comp(tx, ty, tz, hom[z * n + y], hom[y * n + x]);
                    if !base.hom(tx, tz).leq(lhs, hom[z * n + x]) {
                        out.push(Violation {
                            kind: ViolationKind::Composition,
                            detail: format!("hom({z}, {y}) ∘ hom({y}, {x}) ≰ hom({z}, {x})"),
                        });
                    }
                }
            }
        }
        Ok(out)
    }

    /// One object of type `x` with hom `1_x`.
    pub fn unit(base: Arc<Quantaloid>, x: usize) -> Self {
        let hom = vec![base.id(x)];
        let name = format!("*_{}", base.object_name(x));
        QCategory::new(base, vec![name], vec![x], hom).expect("unit categories are categories")
    }

    pub fn base(&self) -> &Arc<Quantaloid> {
        &self.0.base
    }

    pub fn len(&self) -> usize {
        self.0.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.types.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.0.names[x]
    }

    pub fn types(&self) -> &[usize] {
        &self.0.types
    }

    pub fn type_of(&self, x: usize) -> usize {
        self.0.types[x]
    }

    /// `A(y, x)`, an element of `Q(t x, t y)`.
    #[inline]
    pub fn hom(&self, y: usize, x: usize) -> usize {
        self.0.hom[y * self.len() + x]
    }

    pub fn hom_matrix(&self) -> &[usize] {
        &self.0.hom
    }

    pub fn is_symmetric(&self) -> Result<bool, QCatError> {
        self.0.base.require_involution()?;
        Ok(self.asymmetric_pair().is_none())
    }

    /// First `(y, x)` with `A(y, x) != A(x, y)ᵒ`.
    pub fn asymmetric_pair(&self) -> Option<(usize, usize)> {
        let q = &self.0.base;
        let n = self.len();
        (0..n)
            .flat_map(|y| (0..n).map(move |x| (y, x)))
            .find(|&(y, x)| self.hom(y, x) != q.inv(self.type_of(y), self.type_of(x), self.hom(x, y)))
    }

    pub(crate) fn require_symmetric(&self, what: &str) -> Result<(), QCatError> {
        if self.is_symmetric()? {
            Ok(())
        } else {
            let (y, x) = self.asymmetric_pair().expect("asymmetric");
            Err(QCatError::NotSymmetric(format!("{what}: hom({y}, {x}) is not the involute of hom({x}, {y})")))
        }
    }

    /// `A_s(y, x) = A(y, x) ∧ A(x, y)ᵒ`.
    pub fn symmetrise(&self) -> Result<QCategory, QCatError> {
        let q = &self.0.base;
        q.require_involution()?;
        let n = self.len();
        let hom = (0..n * n)
            .map(|i| {
                let (y, x) = (i / n, i % n);
                let (tx, ty) = (self.type_of(x), self.type_of(y));
                q.hom(tx, ty).meet(self.hom(y, x), q.inv(ty, tx, self.hom(x, y)))
            })
            .collect();
        QCategory::new(q.clone(), self.0.names.clone(), self.0.types.clone(), hom)
    }

    /// The identity-on-objects functor `A_s -> A`.
    pub fn symmetrisation_functor(&self) -> Result<QFunctor, QCatError> {
        let sym = self.symmetrise()?;
        QFunctor::new(sym, self.clone(), (0..self.len()).collect())
    }

    pub fn identity_distributor(&self) -> Distributor {
        Distributor::new(self.clone(), self.clone(), self.0.hom.clone()).expect("hom is a distributor")
    }

    pub(crate) fn same_as(&self, other: &QCategory) -> bool {
        self == other
    }
}

/// A functor between categories over the same base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QFunctor {
    src: QCategory,
    dst: QCategory,
    map: Vec<usize>,
}

impl QFunctor {
    pub fn new(src: QCategory, dst: QCategory, map: Vec<usize>) -> Result<Self, QCatError> {
        let report = Self::violations(&src, &dst, &map)?;
        if !report.is_empty() {
            return Err(QCatError::Invalid(report));
        }
        Ok(QFunctor { src, dst, map })
    }

    pub fn violations(src: &QCategory, dst: &QCategory, map: &[usize]) -> Result<Vec<Violation>, QCatError> {
        if map.len() != src.len() || map.iter().any(|&y| y >= dst.len()) {
            return Err(QCatError::Malformed("object map does not fit the categories".into()));
        }
        if !Arc::ptr_eq(src.base(), dst.base()) && src.base() != dst.base() {
            return Err(QCatError::TypeMismatch("functor between categories over different bases".into()));
        }
        let q = src.base();
        let mut out = Vec::new();
        for (x, &fx) in map.iter().enumerate() {
            if src.type_of(x) != dst.type_of(fx) {
                out.push(Violation { kind: ViolationKind::Type, detail: format!("object {x} changes type") });
            }
        }
        if !out.is_empty() {
            return Ok(out);
        }
        for y in 0..src.len() {
            for x in 0..src.len() {
                let l = q.hom(src.type_of(x), src.type_of(y));
                if !l.leq(src.hom(y, x), dst.hom(map[y], map[x])) {
                    out.push(Violation {
                        kind: ViolationKind::Functoriality,
                        detail: format!("A({y}, {x}) ≰ B(F{y}, F{x})"),
                    });
                }
            }
        }
        Ok(out)
    }

    pub fn identity(a: &QCategory) -> Self {
        QFunctor { src: a.clone(), dst: a.clone(), map: (0..a.len()).collect() }
    }

    /// `G ∘ F`.
    pub fn then(&self, g: &QFunctor) -> Result<QFunctor, QCatError> {
        if !self.dst.same_as(&g.src) {
            return Err(QCatError::TypeMismatch("functors are not composable".into()));
        }
        Ok(QFunctor { src: self.src.clone(), dst: g.dst.clone(), map: self.map.iter().map(|&y| g.map[y]).collect() })
    }

    pub fn src(&self) -> &QCategory {
        &self.src
    }

    pub fn dst(&self) -> &QCategory {
        &self.dst
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `F ≤ G` when `1_{t x} ≤ B(F x, G x)` for every `x`.
    pub fn leq(&self, g: &QFunctor) -> Result<bool, QCatError> {
        if !self.src.same_as(&g.src) || !self.dst.same_as(&g.dst) {
            return Err(QCatError::TypeMismatch("functors must share source and target".into()));
        }
        let q = self.src.base();
        Ok((0..self.src.len()).all(|x| {
            let t = self.src.type_of(x);
            q.hom(t, t).leq(q.id(t), self.dst.hom(self.map[x], g.map[x]))
        }))
    }

    /// `B(-, F-) : A ⇸ B`.
    pub fn graph(&self) -> Distributor {
        let (a, b) = (&self.src, &self.dst);
        let entries = (0..b.len() * a.len()).map(|i| b.hom(i / a.len(), self.map[i % a.len()])).collect();
        Distributor::new(a.clone(), b.clone(), entries).expect("graphs are distributors")
    }

    /// `B(F-, -) : B ⇸ A`.
    pub fn cograph(&self) -> Distributor {
        let (a, b) = (&self.src, &self.dst);
        let entries = (0..a.len() * b.len()).map(|i| b.hom(self.map[i / b.len()], i % b.len())).collect();
        Distributor::new(b.clone(), a.clone(), entries).expect("cographs are distributors")
    }
}

/// A distributor `Φ : A ⇸ B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distributor {
    src: QCategory,
    dst: QCategory,
    entries: Vec<usize>,
}

impl Distributor {
    pub fn new(src: QCategory, dst: QCategory, entries: Vec<usize>) -> Result<Self, QCatError> {
        let report = Self::violations(&src, &dst, &entries)?;
        if !report.is_empty() {
            return Err(QCatError::Invalid(report));
        }
        Ok(Distributor { src, dst, entries })
    }

    pub fn violations(src: &QCategory, dst: &QCategory, entries: &[usize]) -> Result<Vec<Violation>, QCatError> {
        if !Arc::ptr_eq(src.base(), dst.base()) && src.base() != dst.base() {
            return Err(QCatError::TypeMismatch("distributor between categories over different bases".into()));
        }
        let q = src.base();
        let (na, nb) = (src.len(), dst.len());
        if entries.len() != na * nb {
            return Err(QCatError::Malformed(format!("matrix has {} entries, expected {}", entries.len(), na * nb)));
        }
        for b in 0..nb {
            for a in 0..na {
                if entries[b * na + a] >= q.hom(src.type_of(a), dst.type_of(b)).size() {
                    return Err(QCatError::Malformed(format!("entry ({b}, {a}) is out of range")));
                }
            }
        }
        let mut out = Vec::new();
        for b in 0..nb {
            for a in 0..na {
                let (ta, tb) = (src.type_of(a), dst.type_of(b));
                let phi = entries[b * na + a];
                for b2 in 0..nb {
                    let tb2 = dst.type_of(b2);
                    let lhs = q.comp(ta, tb, tb2, dst.hom(b2, b), phi);
                    if !q.hom(ta, tb2).leq(lhs, entries[b2 * na + a]) {
                        out.push(Violation {
                            kind: ViolationKind::LeftAction,
                            detail: format!("B({b2}, {b}) ∘ Φ({b}, {a}) ≰ Φ({b2}, {a})"),
                        });
                    }
                }
                for a2 in 0..na {
                    let ta2 = src.type_of(a2);
                    let lhs = q.comp(ta2, ta, tb, phi, src.hom(a, a2));
                    if !q.hom(ta2, tb).leq(lhs, entries[b * na + a2]) {
                        out.push(Violation {
                            kind: ViolationKind::RightAction,
                            detail: format!("Φ({b}, {a}) ∘ A({a}, {a2}) ≰ Φ({b}, {a2})"),
                        });
                    }
                }
            }
        }
        Ok(out)
    }

    /// A presheaf on `a` of type `x`: a column `φ(a) ∈ Q(x, t a)`.
    pub fn presheaf(a: &QCategory, x: usize, column: Vec<usize>) -> Result<Self, QCatError> {
        Distributor::new(QCategory::unit(a.base().clone(), x), a.clone(), column)
    }

    /// The representable presheaf `A(-, x)`.
    pub fn representable(a: &QCategory, x: usize) -> Self {
        let column = (0..a.len()).map(|y| a.hom(y, x)).collect();
        Distributor::presheaf(a, a.type_of(x), column).expect("representables are presheaves")
    }

    pub fn src(&self) -> &QCategory {
        &self.src
    }

    pub fn dst(&self) -> &QCategory {
        &self.dst
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    /// `Φ(b, a)`.
    #[inline]
    pub fn entry(&self, b: usize, a: usize) -> usize {
        self.entries[b * self.src.len() + a]
    }

    /// The type of a presheaf, when the source has a single object.
    pub fn presheaf_type(&self) -> Option<usize> {
        (self.src.len() == 1).then(|| self.src.type_of(0))
    }

    /// Column of a presheaf.
    pub fn column(&self) -> &[usize] {
        &self.entries
    }

    fn base(&self) -> &Quantaloid {
        self.src.base()
    }

    /// `(Ψ ⊗ Φ)(c, a) = ⋁_b Ψ(c, b) ∘ Φ(b, a)` with `self = Ψ`.
    pub fn after(&self, phi: &Distributor) -> Result<Distributor, QCatError> {
        if !phi.dst.same_as(&self.src) {
            return Err(QCatError::TypeMismatch("middle categories differ".into()));
        }
        let q = self.base();
        let (a, b, c) = (&phi.src, &phi.dst, &self.dst);
        let mut entries = Vec::with_capacity(c.len() * a.len());
        for z in 0..c.len() {
            for x in 0..a.len() {
                let (tx, tz) = (a.type_of(x), c.type_of(z));
                let terms = (0..b.len()).map(|y| q.comp(tx, b.type_of(y), tz, self.entry(z, y), phi.entry(y, x)));
                entries.push(q.hom(tx, tz).join_all(terms));
            }
        }
        Ok(Distributor { src: a.clone(), dst: c.clone(), entries })
    }

    fn require_parallel(&self, other: &Distributor) -> Result<(), QCatError> {
        if self.src.same_as(&other.src) && self.dst.same_as(&other.dst) {
            Ok(())
        } else {
            Err(QCatError::TypeMismatch("distributors are not parallel".into()))
        }
    }

    pub fn leq(&self, other: &Distributor) -> Result<bool, QCatError> {
        self.require_parallel(other)?;
        let q = self.base();
        let na = self.src.len();
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .enumerate()
            .all(|(i, (&x, &y))| q.hom(self.src.type_of(i % na), self.dst.type_of(i / na)).leq(x, y)))
    }

    pub fn meet(&self, other: &Distributor) -> Result<Distributor, QCatError> {
        self.require_parallel(other)?;
        let q = self.base();
        let na = self.src.len();
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .enumerate()
            .map(|(i, (&x, &y))| q.hom(self.src.type_of(i % na), self.dst.type_of(i / na)).meet(x, y))
            .collect();
        Ok(Distributor { src: self.src.clone(), dst: self.dst.clone(), entries })
    }

    pub fn join(&self, other: &Distributor) -> Result<Distributor, QCatError> {
        self.require_parallel(other)?;
        let q = self.base();
        let na = self.src.len();
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .enumerate()
            .map(|(i, (&x, &y))| q.hom(self.src.type_of(i % na), self.dst.type_of(i / na)).join(x, y))
            .collect();
        Ok(Distributor { src: self.src.clone(), dst: self.dst.clone(), entries })
    }

    /// `Φᵒ(a, b) = Φ(b, a)ᵒ`, defined between symmetric categories.
    pub fn involute(&self) -> Result<Distributor, QCatError> {
        self.src.require_symmetric("source")?;
        self.dst.require_symmetric("target")?;
        Ok(self.involute_unchecked())
    }

    /// Entrywise transpose-and-involute without the symmetry requirement;
    /// the result is only a distributor `B ⇸ A` when both sides are
    /// symmetric.
    fn involute_unchecked(&self) -> Distributor {
        let q = self.base();
        let (na, nb) = (self.src.len(), self.dst.len());
        let entries = (0..na * nb)
            .map(|i| {
                let (a, b) = (i / nb, i % nb);
                q.inv(self.src.type_of(a), self.dst.type_of(b), self.entry(b, a))
            })
            .collect();
        Distributor { src: self.dst.clone(), dst: self.src.clone(), entries }
    }

    /// Re-reads the same matrix as a distributor between other categories
    /// with the same objects and types.
    pub fn retype(&self, src: &QCategory, dst: &QCategory) -> Result<Distributor, QCatError> {
        Distributor::new(src.clone(), dst.clone(), self.entries.clone())
    }

    /// The greatest `Ψ : B ⇸ A` with `Φ ⊗ Ψ ≤ B`:
    /// `Ψ(a, b) = ⋀_{b'} B(b', b) ↙ Φ(b', a)`.
    pub fn right_adjoint_candidate(&self) -> Distributor {
        let q = self.base();
        let (a, b) = (&self.src, &self.dst);
        let mut entries = Vec::with_capacity(a.len() * b.len());
        for x in 0..a.len() {
            for y in 0..b.len() {
                let (ta, tb) = (a.type_of(x), b.type_of(y));
                let terms = (0..b.len()).map(|y2| q.rres(tb, ta, b.type_of(y2), self.entry(y2, x), b.hom(y2, y)));
                entries.push(q.hom(tb, ta).meet_all(terms));
            }
        }
        Distributor::new(b.clone(), a.clone(), entries).expect("residuals of a distributor form a distributor")
    }

    /// `Φ ⊣ Ψ`: `Φ ⊗ Ψ ≤ B` and `A ≤ Ψ ⊗ Φ`.
    pub fn is_left_adjoint_to(&self, psi: &Distributor) -> Result<bool, QCatError> {
        let counit = self.after(psi)?;
        let unit = psi.after(self)?;
        Ok(counit.leq(&self.dst.identity_distributor())? && self.src.identity_distributor().leq(&unit)?)
    }

    pub fn is_left_adjoint(&self) -> bool {
        self.is_left_adjoint_to(&self.right_adjoint_candidate()).expect("candidate is typed")
    }

    /// `Φ ⊣ Φᵒ`, between symmetric categories.
    pub fn is_symmetric_left_adjoint(&self) -> Result<bool, QCatError> {
        let inv = self.involute()?;
        self.is_left_adjoint_to(&inv)
    }

    /// `Ψ_s : A_s ⇸ B_s`, the meet of `B(S_B-, -) ⊗ Ψ ⊗ A(-, S_A-)` with the
    /// involute of `A(S_A-, -) ⊗ Ψ* ⊗ B(-, S_B-)`.
    pub fn symmetrise(&self) -> Result<Distributor, QCatError> {
        self.base().require_involution()?;
        if !self.is_left_adjoint() {
            return Err(QCatError::NotLeftAdjoint("symmetrisation needs a left adjoint distributor".into()));
        }
        let star = self.right_adjoint_candidate();
        let sa = self.src.symmetrisation_functor()?;
        let sb = self.dst.symmetrisation_functor()?;
        let first = sb.cograph().after(self)?.after(&sa.graph())?;
        let second = sa.cograph().after(&star)?.after(&sb.graph())?;
        first.meet(&second.involute()?)
    }
}
