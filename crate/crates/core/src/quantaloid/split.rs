use super::{HomSpec, Quantaloid, QuantaloidError};

/// Splits the idempotents: objects are pairs `(X, e)` with `e ∘ e = e`, and
/// arrows `(X, e) -> (Y, f)` are the `g` with `f ∘ g = g = g ∘ e`. When the
/// input is involutive only self-involutive idempotents are kept, so that
/// the involution restricts.
pub fn split_idempotents(q: &Quantaloid) -> Result<Quantaloid, QuantaloidError> {
    let n = q.n_objects();
    let mut objs: Vec<(usize, usize)> = Vec::new();
    for x in 0..n {
        for e in 0..q.hom(x, x).size() {
            if q.comp(x, x, x, e, e) != e {
                continue;
            }
            if q.is_involutive() && q.inv(x, x, e) != e {
                continue;
            }
            objs.push((x, e));
        }
    }
    let m = objs.len();
    let mut elems: Vec<Vec<usize>> = Vec::with_capacity(m * m);
    let mut homs = Vec::with_capacity(m * m);
    for &(x, e) in &objs {
        for &(y, f) in &objs {
            let keep: Vec<usize> =
                (0..q.hom(x, y).size()).filter(|&g| q.comp(x, y, y, f, g) == g && q.comp(x, x, y, g, e) == g).collect();
            let lattice = q
                .hom(x, y)
                .induced(&keep)
                .map_err(|err| QuantaloidError::Malformed(format!("split hom is not a lattice: {err}")))?;
            let labels = keep.iter().map(|&g| q.label(x, y, g).to_string()).collect();
            homs.push(HomSpec::new(lattice, labels));
            elems.push(keep);
        }
    }
    let pos = |i: usize, j: usize, g: usize| -> usize {
        elems[i * m + j].binary_search(&g).expect("closed under the inherited structure")
    };
    let names = objs.iter().map(|&(x, e)| format!("({},{})", q.object_name(x), q.label(x, x, e))).collect();
    let identity = (0..m).map(|i| pos(i, i, objs[i].1)).collect();
    let compose = |i: usize, j: usize, k: usize, g: usize, f: usize| {
        let (x, y, z) = (objs[i].0, objs[j].0, objs[k].0);
        pos(i, k, q.comp(x, y, z, elems[j * m + k][g], elems[i * m + j][f]))
    };
    let involution = |i: usize, j: usize, f: usize| {
        let (x, y) = (objs[i].0, objs[j].0);
        pos(j, i, q.inv(x, y, elems[i * m + j][f]))
    };
    let inv: Option<&dyn Fn(usize, usize, usize) -> usize> = if q.is_involutive() { Some(&involution) } else { None };
    Quantaloid::build(names, homs, identity, compose, inv)
}
