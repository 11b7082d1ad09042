//! Finite complete lattices.
//!
//! Elements are dense indices `0..size`. The order is stored reflexively and
//! transitively closed, and binary join/meet tables are precomputed at
//! construction so that every later lookup is O(1).

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("a lattice needs at least one element")]
    Empty,
    #[error("element index {index} out of range for a lattice of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("not a partial order: {a} <= {b} and {b} <= {a} with {a} != {b}")]
    NotAPartialOrder { a: usize, b: usize },
    #[error("not a lattice: elements {a} and {b} have no {bound}")]
    NotALattice { a: usize, b: usize, bound: Bound },
}

/// Which bound was missing when a poset failed to be a lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    LeastUpper,
    GreatestLower,
}

impl std::fmt::Display for Bound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Bound::LeastUpper => f.write_str("least upper bound"),
            Bound::GreatestLower => f.write_str("greatest lower bound"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    size: usize,
    leq: Vec<bool>,
    join: Vec<usize>,
    meet: Vec<usize>,
    bottom: usize,
    top: usize,
}

impl FiniteLattice {
    /// Builds a lattice from any generating relation: the reflexive and
    /// transitive closure of `pairs` is taken before validation.
    pub fn from_order(size: usize, pairs: &[(usize, usize)]) -> Result<Self, LatticeError> {
        if size == 0 {
            return Err(LatticeError::Empty);
        }
        let mut leq = vec![false; size * size];
        for i in 0..size {
            leq[i * size + i] = true;
        }
        for &(a, b) in pairs {
            for index in [a, b] {
                if index >= size {
                    return Err(LatticeError::IndexOutOfRange { index, size });
                }
            }
            leq[a * size + b] = true;
        }
        // Warshall
        for k in 0..size {
            for i in 0..size {
                if leq[i * size + k] {
                    for j in 0..size {
                        if leq[k * size + j] {
                            leq[i * size + j] = true;
                        }
                    }
                }
            }
        }
        for a in 0..size {
            for b in a + 1..size {
                if leq[a * size + b] && leq[b * size + a] {
                    return Err(LatticeError::NotAPartialOrder { a, b });
                }
            }
        }
        Self::from_closed_order(size, leq)
    }

    /// Builds a lattice from a predicate that is already a partial order.
    pub fn from_leq_fn(size: usize, le: impl Fn(usize, usize) -> bool) -> Result<Self, LatticeError> {
        let mut pairs = Vec::new();
        for a in 0..size {
            for b in 0..size {
                if a != b && le(a, b) {
                    pairs.push((a, b));
                }
            }
        }
        Self::from_order(size, &pairs)
    }

    fn from_closed_order(size: usize, leq: Vec<bool>) -> Result<Self, LatticeError> {
        let le = |a: usize, b: usize| leq[a * size + b];
        let mut join = vec![0; size * size];
        let mut meet = vec![0; size * size];
        for a in 0..size {
            for b in a..size {
                let uppers: Vec<usize> = (0..size).filter(|&u| le(a, u) && le(b, u)).collect();
                let lub = uppers
                    .iter()
                    .copied()
                    .find(|&u| uppers.iter().all(|&v| le(u, v)))
                    .ok_or(LatticeError::NotALattice { a, b, bound: Bound::LeastUpper })?;
                let lowers: Vec<usize> = (0..size).filter(|&l| le(l, a) && le(l, b)).collect();
                let glb = lowers
                    .iter()
                    .copied()
                    .find(|&l| lowers.iter().all(|&v| le(v, l)))
                    .ok_or(LatticeError::NotALattice { a, b, bound: Bound::GreatestLower })?;
                join[a * size + b] = lub;
                join[b * size + a] = lub;
                meet[a * size + b] = glb;
                meet[b * size + a] = glb;
            }
        }
        let bottom = (1..size).fold(0, |acc, x| meet[acc * size + x]);
        let top = (1..size).fold(0, |acc, x| join[acc * size + x]);
        Ok(FiniteLattice { size, leq, join, meet, bottom, top })
    }

    /// The chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_order(n, &pairs).expect("a chain is a lattice")
    }

    /// Subsets of an `bits`-element set, encoded as bitmasks; element `i` is
    /// the subset whose characteristic bits are `i`.
    pub fn powerset(bits: u32) -> Self {
        assert!(bits < 16, "powerset lattice too large");
        let size = 1usize << bits;
        let mut leq = vec![false; size * size];
        let mut join = vec![0; size * size];
        let mut meet = vec![0; size * size];
        for a in 0..size {
            for b in 0..size {
                leq[a * size + b] = a & !b == 0;
                join[a * size + b] = a | b;
                meet[a * size + b] = a & b;
            }
        }
        FiniteLattice { size, leq, join, meet, bottom: 0, top: size - 1 }
    }

    /// The four-element Boolean square `0 < x, y < 1` with indices
    /// `0 = bottom, 1 = x, 2 = y, 3 = top`.
    pub fn diamond() -> Self {
        Self::from_order(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).expect("the diamond is a lattice")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.size + b]
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.size + b]
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.size + b]
    }

    /// Supremum of an arbitrary family; the empty join is the bottom.
    pub fn join_all(&self, elems: impl IntoIterator<Item = usize>) -> usize {
        elems.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    /// Infimum of an arbitrary family; the empty meet is the top.
    pub fn meet_all(&self, elems: impl IntoIterator<Item = usize>) -> usize {
        elems.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    /// Range-checked supremum.
    pub fn try_join(&self, elems: &[usize]) -> Result<usize, LatticeError> {
        self.check_range(elems)?;
        Ok(self.join_all(elems.iter().copied()))
    }

    /// Range-checked infimum.
    pub fn try_meet(&self, elems: &[usize]) -> Result<usize, LatticeError> {
        self.check_range(elems)?;
        Ok(self.meet_all(elems.iter().copied()))
    }

    fn check_range(&self, elems: &[usize]) -> Result<(), LatticeError> {
        match elems.iter().find(|&&e| e >= self.size) {
            Some(&index) => Err(LatticeError::IndexOutOfRange { index, size: self.size }),
            None => Ok(()),
        }
    }

    /// First triple `(a, b, c)` with `a ∧ (b ∨ c) != (a ∧ b) ∨ (a ∧ c)`.
    pub fn distributivity_witness(&self) -> Option<(usize, usize, usize)> {
        let n = self.size;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let lhs = self.meet(a, self.join(b, c));
                    let rhs = self.join(self.meet(a, b), self.meet(a, c));
                    if lhs != rhs {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// Finite distributive lattices are exactly the finite locales.
    pub fn is_distributive(&self) -> bool {
        self.distributivity_witness().is_none()
    }

    /// Covering pairs `(a, b)` with `a < b` and nothing strictly between,
    /// sorted. This is the canonical generating relation used for I/O.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.size;
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a == b || !self.leq(a, b) {
                    continue;
                }
                let between = (0..n).any(|c| c != a && c != b && self.leq(a, c) && self.leq(c, b));
                if !between {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Sub-lattice induced on `elems` (given in the order that becomes the
    /// new indexing). The induced order must itself be a lattice.
    pub fn induced(&self, elems: &[usize]) -> Result<Self, LatticeError> {
        Self::from_leq_fn(elems.len(), |i, j| self.leq(elems[i], elems[j]))
    }
}
