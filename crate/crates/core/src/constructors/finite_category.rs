use super::ConstructorError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub dom: usize,
    pub cod: usize,
}

/// A finite category given by its full composition table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<usize>,
    /// `compose[g * m + f]` is `g ∘ f` when `dom g = cod f`.
    compose: Vec<Option<usize>>,
}

impl FiniteCategory {
    /// Validates the table against the category axioms.
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<usize>,
        compose: Vec<Option<usize>>,
    ) -> Result<Self, ConstructorError> {
        let bad = |msg: String| Err(ConstructorError::InvalidCategory(msg));
        let (n, m) = (objects.len(), morphisms.len());
        if n == 0 {
            return bad("no objects".into());
        }
        if let Some(f) = morphisms.iter().find(|f| f.dom >= n || f.cod >= n) {
            return bad(format!("morphism {} has an unknown endpoint", f.name));
        }
        if identities.len() != n {
            return bad(format!("expected {n} identities, found {}", identities.len()));
        }
        for (x, &i) in identities.iter().enumerate() {
            if i >= m || morphisms[i].dom != x || morphisms[i].cod != x {
                return bad(format!("identity of {} is not an endomorphism of it", objects[x]));
            }
        }
        if compose.len() != m * m {
            return bad(format!("composition table has {} entries, expected {}", compose.len(), m * m));
        }
        for g in 0..m {
            for f in 0..m {
                let entry = compose[g * m + f];
                let composable = morphisms[g].dom == morphisms[f].cod;
                match (composable, entry) {
                    (true, None) => return bad(format!("{} ∘ {} is missing", morphisms[g].name, morphisms[f].name)),
                    (false, Some(_)) => {
                        return bad(format!(
                            "{} ∘ {} is defined but not composable",
                            morphisms[g].name, morphisms[f].name
                        ))
                    }
                    (true, Some(h)) => {
                        if h >= m || morphisms[h].dom != morphisms[f].dom || morphisms[h].cod != morphisms[g].cod {
                            return bad(format!("{} ∘ {} has the wrong type", morphisms[g].name, morphisms[f].name));
                        }
                    }
                    (false, None) => {}
                }
            }
        }
        let c = FiniteCategory { objects, morphisms, identities, compose };
        for f in 0..m {
            let (d, e) = (c.morphisms[f].dom, c.morphisms[f].cod);
            if c.comp(c.identities[e], f) != f || c.comp(f, c.identities[d]) != f {
                return bad(format!("unit law fails at {}", c.morphisms[f].name));
            }
        }
        for h in 0..m {
            for g in c.composable_before(h) {
                let hg = c.comp(h, g);
                for f in c.composable_before(g) {
                    if c.comp(h, c.comp(g, f)) != c.comp(hg, f) {
                        return bad(format!(
                            "associativity fails at ({}, {}, {})",
                            c.morphisms[h].name, c.morphisms[g].name, c.morphisms[f].name
                        ));
                    }
                }
            }
        }
        Ok(c)
    }

    /// Builds from a partial composition function.
    pub fn from_fn(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<usize>,
        compose: impl Fn(usize, usize) -> Option<usize>,
    ) -> Result<Self, ConstructorError> {
        let m = morphisms.len();
        let table = (0..m * m).map(|i| compose(i / m, i % m)).collect();
        Self::new(objects, morphisms, identities, table)
    }

    /// The cyclic group of order `n` as a one-object category.
    pub fn cyclic_group(n: usize) -> Self {
        assert!(n >= 1, "cyclic group of order zero");
        let names: Vec<String> = match n {
            1 => vec!["1".into()],
            2 => vec!["1".into(), "σ".into()],
            3 => vec!["1".into(), "a".into(), "b".into()],
            _ => std::iter::once("1".to_string()).chain((1..n).map(|k| format!("g^{k}"))).collect(),
        };
        Self::group("•", names, |a, b| (a + b) % n).expect("cyclic groups are groups")
    }

    /// A finite group on elements `0..names.len()` with `0` the unit.
    pub fn group(
        object: &str,
        names: Vec<String>,
        mul: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, ConstructorError> {
        let morphisms = names.into_iter().map(|name| Morphism { name, dom: 0, cod: 0 }).collect();
        Self::from_fn(vec![object.to_string()], morphisms, vec![0], |g, f| Some(mul(g, f)))
    }

    /// The poset on `names` generated by `leq` pairs, with one morphism
    /// `x -> y` whenever `x <= y`.
    pub fn poset(names: &[&str], leq: &[(usize, usize)]) -> Result<Self, ConstructorError> {
        let n = names.len();
        let order = {
            let mut rel = vec![false; n * n];
            for i in 0..n {
                rel[i * n + i] = true;
            }
            for &(a, b) in leq {
                if a >= n || b >= n {
                    return Err(ConstructorError::InvalidCategory(format!("order pair ({a}, {b}) out of range")));
                }
                rel[a * n + b] = true;
            }
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        if rel[i * n + k] && rel[k * n + j] {
                            rel[i * n + j] = true;
                        }
                    }
                }
            }
            rel
        };
        for a in 0..n {
            for b in 0..n {
                if a != b && order[a * n + b] && order[b * n + a] {
                    return Err(ConstructorError::InvalidCategory(format!(
                        "{} and {} form a cycle",
                        names[a], names[b]
                    )));
                }
            }
        }
        let mut morphisms = Vec::new();
        let mut index = vec![usize::MAX; n * n];
        for a in 0..n {
            for b in 0..n {
                if order[a * n + b] {
                    index[a * n + b] = morphisms.len();
                    let name = if a == b { format!("1_{}", names[a]) } else { format!("{}≤{}", names[a], names[b]) };
                    morphisms.push(Morphism { name, dom: a, cod: b });
                }
            }
        }
        let identities = (0..n).map(|a| index[a * n + a]).collect();
        let ends: Vec<(usize, usize)> = morphisms.iter().map(|f| (f.dom, f.cod)).collect();
        Self::from_fn(names.iter().map(|s| s.to_string()).collect(), morphisms, identities, |g, f| {
            let ((gd, gc), (fd, fc)) = (ends[g], ends[f]);
            (gd == fc).then(|| index[fd * n + gc])
        })
    }

    /// Exactly one morphism between any two of `n` objects.
    pub fn codiscrete(n: usize) -> Self {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let morphisms = (0..n * n)
            .map(|i| {
                let (a, b) = (i / n, i % n);
                let name = if a == b { format!("1_{a}") } else { format!("{a}→{b}") };
                Morphism { name, dom: a, cod: b }
            })
            .collect();
        let identities = (0..n).map(|a| a * n + a).collect();
        Self::from_fn(names, morphisms, identities, |g, f| (g / n == f % n).then_some((f / n) * n + g % n))
            .expect("codiscrete categories are categories")
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn n_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn morphism(&self, f: usize) -> &Morphism {
        &self.morphisms[f]
    }

    pub fn morphism_index(&self, name: &str) -> Option<usize> {
        self.morphisms.iter().position(|f| f.name == name)
    }

    pub fn name(&self, f: usize) -> &str {
        &self.morphisms[f].name
    }

    pub fn dom(&self, f: usize) -> usize {
        self.morphisms[f].dom
    }

    pub fn cod(&self, f: usize) -> usize {
        self.morphisms[f].cod
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identities[x]
    }

    pub fn identities(&self) -> &[usize] {
        &self.identities
    }

    /// `g ∘ f`; panics when not composable.
    pub fn comp(&self, g: usize, f: usize) -> usize {
        self.compose[g * self.morphisms.len() + f].expect("composable morphisms")
    }

    pub fn try_comp(&self, g: usize, f: usize) -> Option<usize> {
        self.compose[g * self.morphisms.len() + f]
    }

    /// Morphisms `x -> y` in index order.
    pub fn hom(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.morphisms.len()).filter(|&f| self.morphisms[f].dom == x && self.morphisms[f].cod == y).collect()
    }

    /// Morphisms with codomain `y`.
    pub fn arrows_into(&self, y: usize) -> Vec<usize> {
        (0..self.morphisms.len()).filter(|&f| self.morphisms[f].cod == y).collect()
    }

    fn composable_before(&self, g: usize) -> impl Iterator<Item = usize> + '_ {
        let d = self.morphisms[g].dom;
        (0..self.morphisms.len()).filter(move |&f| self.morphisms[f].cod == d)
    }

    pub fn inverse(&self, f: usize) -> Option<usize> {
        let (d, c) = (self.dom(f), self.cod(f));
        self.hom(c, d)
            .into_iter()
            .find(|&g| self.comp(g, f) == self.identities[d] && self.comp(f, g) == self.identities[c])
    }

    pub fn is_groupoid(&self) -> bool {
        (0..self.morphisms.len()).all(|f| self.inverse(f).is_some())
    }

    pub fn is_commutative(&self) -> bool {
        let m = self.morphisms.len();
        (0..m).all(|g| (0..m).all(|f| self.try_comp(g, f) == self.try_comp(f, g)))
    }
}
