//! Loopless matroids given by their bases, with the lattice of flats and
//! the minor constructions (deletion, contraction, localization).
//!
//! Ground sets are ordered lists of element ids; all subsets are stored as
//! bitsets over the positions in that order, so every computation is
//! deterministic and reproducible.

use std::collections::HashMap;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use thiserror::Error;

/// External element identifier.
pub type ElementId = u32;
/// Subset of the ground set as a bitmask over element positions.
pub type Mask = u64;

/// Ground sets larger than this are validated by sampling instead of an
/// exhaustive basis-exchange check, unless full validation is forced.
pub const DEFAULT_VALIDATION_BOUND: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatroidError {
    #[error("basis list is empty")]
    EmptyBases,
    #[error("bases have unequal sizes")]
    UnequalBasisSizes,
    #[error("basis exchange axiom violated for bases {0:?} and {1:?}")]
    ExchangeAxiomViolated(Vec<ElementId>, Vec<ElementId>),
    #[error("element {0} lies in no basis (loop)")]
    LoopDetected(ElementId),
    #[error("invalid rank {d} for ground set of size {n}")]
    InvalidRank { n: usize, d: usize },
    #[error("element {0} is not in the ground set")]
    ElementNotInGroundSet(ElementId),
    #[error("{0:?} is not a flat")]
    NotAFlat(Vec<ElementId>),
    #[error("duplicate element id {0}")]
    DuplicateElement(ElementId),
    #[error("basis contains unknown element {0}")]
    UnknownElement(ElementId),
    #[error("ground set of size {0} exceeds the supported maximum of 64")]
    GroundSetTooLarge(usize),
}

/// Identifier of a flat inside its lattice.
pub type FlatId = usize;

/// A closed set together with its rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flat {
    pub members: Mask,
    pub rank: usize,
}

/// The lattice of flats, grouped by rank, with covers and the join table.
#[derive(Debug, Clone)]
pub struct FlatsLattice {
    pub flats: Vec<Flat>,
    pub by_rank: Vec<Vec<FlatId>>,
    index: HashMap<Mask, FlatId>,
    pub covers: Vec<Vec<FlatId>>,
    join: Vec<FlatId>,
}

impl FlatsLattice {
    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn id_of(&self, members: Mask) -> Option<FlatId> {
        self.index.get(&members).copied()
    }

    pub fn join(&self, a: FlatId, b: FlatId) -> FlatId {
        self.join[a * self.flats.len() + b]
    }
}

/// A loopless matroid on an ordered ground set.
#[derive(Debug, Clone)]
pub struct Matroid {
    elements: Vec<ElementId>,
    position: HashMap<ElementId, usize>,
    bases: Vec<Mask>,
    rank: usize,
    lattice: FlatsLattice,
}

impl PartialEq for Matroid {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements && self.bases == other.bases
    }
}
impl Eq for Matroid {}

impl Matroid {
    /// Builds and validates a matroid from its list of bases.
    pub fn from_bases(
        elements: Vec<ElementId>,
        bases: Vec<Vec<ElementId>>,
    ) -> Result<Arc<Matroid>, MatroidError> {
        Self::from_bases_with_bound(elements, bases, DEFAULT_VALIDATION_BOUND, false)
    }

    /// As `from_bases`, with control over the exchange-axiom validation:
    /// exhaustive up to `bound` elements (or always when `force_full`),
    /// sampled beyond it.
    pub fn from_bases_with_bound(
        elements: Vec<ElementId>,
        bases: Vec<Vec<ElementId>>,
        bound: usize,
        force_full: bool,
    ) -> Result<Arc<Matroid>, MatroidError> {
        let n = elements.len();
        if n > 64 {
            return Err(MatroidError::GroundSetTooLarge(n));
        }
        let mut position = HashMap::new();
        for (i, &e) in elements.iter().enumerate() {
            if position.insert(e, i).is_some() {
                return Err(MatroidError::DuplicateElement(e));
            }
        }
        if bases.is_empty() {
            return Err(MatroidError::EmptyBases);
        }
        let mut basis_masks = Vec::with_capacity(bases.len());
        for b in &bases {
            let mut m: Mask = 0;
            for &e in b {
                let &p = position.get(&e).ok_or(MatroidError::UnknownElement(e))?;
                m |= 1 << p;
            }
            basis_masks.push(m);
        }
        basis_masks.sort_unstable();
        basis_masks.dedup();
        let d = basis_masks[0].count_ones() as usize;
        if basis_masks.iter().any(|m| m.count_ones() as usize != d) {
            return Err(MatroidError::UnequalBasisSizes);
        }
        let covered: Mask = basis_masks.iter().fold(0, |a, b| a | b);
        for (p, &e) in elements.iter().enumerate() {
            if covered & (1 << p) == 0 {
                return Err(MatroidError::LoopDetected(e));
            }
        }
        check_exchange(&elements, &basis_masks, bound, force_full)?;
        let lattice = build_lattice(n, d, &basis_masks);
        Ok(Arc::new(Matroid { elements, position, bases: basis_masks, rank: d, lattice }))
    }

    /// Uniform matroid U_{d,n} on elements 1..=n.
    pub fn uniform(n: usize, d: usize) -> Result<Arc<Matroid>, MatroidError> {
        if d < 1 || d > n {
            return Err(MatroidError::InvalidRank { n, d });
        }
        let elements: Vec<ElementId> = (1..=n as ElementId).collect();
        let mut bases = Vec::new();
        for m in 0u64..(1 << n) {
            if m.count_ones() as usize == d {
                bases.push(mask_to_elements(m, &elements));
            }
        }
        Matroid::from_bases(elements, bases)
    }

    /// Boolean (free) matroid on elements 1..=n.
    pub fn boolean(n: usize) -> Result<Arc<Matroid>, MatroidError> {
        if n == 0 {
            return Matroid::from_bases(vec![], vec![vec![]]);
        }
        Matroid::uniform(n, n)
    }

    /// Matroid on the empty ground set.
    pub fn empty() -> Arc<Matroid> {
        Matroid::from_bases(vec![], vec![vec![]]).expect("empty matroid is valid")
    }

    /// Graphic matroid of a loopless multigraph; elements are edge ids 1..=m
    /// and bases are the spanning forests.
    pub fn graphic(edges: &[(u32, u32)]) -> Result<Arc<Matroid>, MatroidError> {
        let m = edges.len();
        if m > 64 {
            return Err(MatroidError::GroundSetTooLarge(m));
        }
        for (idx, &(a, b)) in edges.iter().enumerate() {
            if a == b {
                return Err(MatroidError::LoopDetected(idx as ElementId + 1));
            }
        }
        let elements: Vec<ElementId> = (1..=m as ElementId).collect();
        let mut verts: Vec<u32> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        verts.sort_unstable();
        verts.dedup();
        let vid: HashMap<u32, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let rank = {
            let mut uf = UnionFind::new(verts.len());
            let mut r = 0;
            for &(a, b) in edges {
                if uf.union(vid[&a], vid[&b]) {
                    r += 1;
                }
            }
            r
        };
        let mut bases = Vec::new();
        for sub in 0u64..(1 << m) {
            if sub.count_ones() as usize != rank {
                continue;
            }
            let mut uf = UnionFind::new(verts.len());
            let mut acyclic = true;
            for (i, &(a, b)) in edges.iter().enumerate() {
                if sub & (1 << i) != 0 && !uf.union(vid[&a], vid[&b]) {
                    acyclic = false;
                    break;
                }
            }
            if acyclic {
                bases.push(mask_to_elements(sub, &elements));
            }
        }
        Matroid::from_bases(elements, bases)
    }

    pub fn elements(&self) -> &[ElementId] {
        &self.elements
    }

    pub fn ground_size(&self) -> usize {
        self.elements.len()
    }

    pub fn full_mask(&self) -> Mask {
        if self.elements.is_empty() {
            0
        } else {
            (1u64 << self.elements.len()) - 1
        }
    }

    pub fn bases(&self) -> &[Mask] {
        &self.bases
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn position_of(&self, e: ElementId) -> Result<usize, MatroidError> {
        self.position.get(&e).copied().ok_or(MatroidError::ElementNotInGroundSet(e))
    }

    pub fn mask_of(&self, elems: &[ElementId]) -> Result<Mask, MatroidError> {
        let mut m = 0;
        for &e in elems {
            m |= 1 << self.position_of(e)?;
        }
        Ok(m)
    }

    pub fn elements_of(&self, mask: Mask) -> Vec<ElementId> {
        mask_to_elements(mask, &self.elements)
    }

    /// Rank of a subset: the largest intersection with a basis.
    pub fn rank_of(&self, s: Mask) -> usize {
        self.bases.iter().map(|b| (b & s).count_ones() as usize).max().unwrap_or(0)
    }

    pub fn is_independent(&self, s: Mask) -> bool {
        self.rank_of(s) == s.count_ones() as usize
    }

    /// Closure: all elements whose addition keeps the rank.
    pub fn closure(&self, s: Mask) -> Mask {
        let r = self.rank_of(s);
        let mut c = s;
        for p in 0..self.elements.len() {
            let bit = 1 << p;
            if c & bit == 0 && self.rank_of(s | bit) == r {
                c |= bit;
            }
        }
        c
    }

    pub fn is_flat(&self, s: Mask) -> bool {
        self.lattice.id_of(s).is_some()
    }

    pub fn lattice(&self) -> &FlatsLattice {
        &self.lattice
    }

    pub fn flat(&self, id: FlatId) -> &Flat {
        &self.lattice.flats[id]
    }

    /// Whether removing `i` drops the rank.
    pub fn is_coloop(&self, i: ElementId) -> Result<bool, MatroidError> {
        let p = self.position_of(i)?;
        let rest = self.full_mask() & !(1 << p);
        Ok(self.rank_of(rest) == self.rank.saturating_sub(1) && self.rank > 0)
    }

    /// Deletion of one element; flats are the flats of the original with
    /// the element removed.
    pub fn deletion(&self, i: ElementId) -> Result<Arc<Matroid>, MatroidError> {
        let p = self.position_of(i)?;
        let keep: Vec<ElementId> = self.elements.iter().copied().filter(|&e| e != i).collect();
        let avoid: Vec<Mask> = self.bases.iter().copied().filter(|b| b & (1 << p) == 0).collect();
        let new_bases: Vec<Vec<ElementId>> = if avoid.is_empty() {
            self.bases.iter().map(|&b| mask_to_elements(b & !(1 << p), &self.elements)).collect()
        } else {
            avoid.iter().map(|&b| mask_to_elements(b, &self.elements)).collect()
        };
        Matroid::from_bases(keep, new_bases)
    }

    /// Contraction by a flat: the matroid on the complement whose flats
    /// are the flats containing the given one.
    pub fn contraction_by_flat(&self, f: Mask) -> Result<Arc<Matroid>, MatroidError> {
        let fid =
            self.lattice.id_of(f).ok_or(MatroidError::NotAFlat(self.elements_of(f)))?;
        let fr = self.lattice.flats[fid].rank;
        let keep: Vec<ElementId> = self.elements_of(self.full_mask() & !f);
        let target = self.rank - fr;
        let mut bases = Vec::new();
        let free = self.full_mask() & !f;
        for sub in submasks(free) {
            if sub.count_ones() as usize == target
                && self.rank_of(sub | f) == target + fr
            {
                bases.push(mask_to_elements(sub, &self.elements));
            }
        }
        Matroid::from_bases(keep, bases)
    }

    /// Localization at a flat: the matroid induced on the flat itself.
    pub fn localization(&self, f: Mask) -> Result<Arc<Matroid>, MatroidError> {
        if self.lattice.id_of(f).is_none() {
            return Err(MatroidError::NotAFlat(self.elements_of(f)));
        }
        let keep = self.elements_of(f);
        let target = self.rank_of(f);
        let mut bases = Vec::new();
        for sub in submasks(f) {
            if sub.count_ones() as usize == target && self.is_independent(sub) {
                bases.push(mask_to_elements(sub, &self.elements));
            }
        }
        Matroid::from_bases(keep, bases)
    }

    /// The collections of flats F with both F and F+i closed: the second
    /// component drops the empty set.
    pub fn s_sets(&self, i: ElementId) -> Result<(Vec<Mask>, Vec<Mask>), MatroidError> {
        let p = self.position_of(i)?;
        let ibit = 1u64 << p;
        let rest = self.full_mask() & !ibit;
        let mut with_empty = Vec::new();
        for fl in &self.lattice.flats {
            let f = fl.members;
            if f & ibit == 0 && f != rest && self.is_flat(f | ibit) {
                with_empty.push(f);
            }
        }
        with_empty.sort_unstable_by_key(|&f| (f.count_ones(), f));
        let nonempty: Vec<Mask> = with_empty.iter().copied().filter(|&f| f != 0).collect();
        Ok((with_empty, nonempty))
    }

    /// Lexicographically first basis of a flat, by element position.
    pub fn flat_basis(&self, f: Mask) -> Result<Mask, MatroidError> {
        if self.lattice.id_of(f).is_none() {
            return Err(MatroidError::NotAFlat(self.elements_of(f)));
        }
        let target = self.rank_of(f);
        let mut acc: Mask = 0;
        for p in 0..self.elements.len() {
            let bit = 1 << p;
            if f & bit != 0 && self.is_independent(acc | bit) {
                acc |= bit;
                if acc.count_ones() as usize == target {
                    break;
                }
            }
        }
        Ok(acc)
    }

    /// A second basis of the flat when one exists, preferring high positions.
    pub fn flat_basis_alt(&self, f: Mask) -> Result<Mask, MatroidError> {
        if self.lattice.id_of(f).is_none() {
            return Err(MatroidError::NotAFlat(self.elements_of(f)));
        }
        let target = self.rank_of(f);
        let mut acc: Mask = 0;
        for p in (0..self.elements.len()).rev() {
            let bit = 1 << p;
            if f & bit != 0 && self.is_independent(acc | bit) {
                acc |= bit;
                if acc.count_ones() as usize == target {
                    break;
                }
            }
        }
        Ok(acc)
    }
}

fn mask_to_elements(mask: Mask, elements: &[ElementId]) -> Vec<ElementId> {
    (0..elements.len()).filter(|&p| mask & (1 << p) != 0).map(|p| elements[p]).collect()
}

/// All submasks of `m`, including 0 and m itself.
pub fn submasks(m: Mask) -> Vec<Mask> {
    let mut out = Vec::new();
    let mut s = m;
    loop {
        out.push(s);
        if s == 0 {
            break;
        }
        s = (s - 1) & m;
    }
    out.reverse();
    out
}

fn check_exchange(
    elements: &[ElementId],
    bases: &[Mask],
    bound: usize,
    force_full: bool,
) -> Result<(), MatroidError> {
    let n = elements.len();
    let to_elems = |m: Mask| mask_to_elements(m, elements);
    let exchange_ok = |b1: Mask, b2: Mask| -> bool {
        let mut only1 = b1 & !b2;
        while only1 != 0 {
            let x = only1 & only1.wrapping_neg();
            only1 &= only1 - 1;
            let mut only2 = b2 & !b1;
            let mut found = false;
            while only2 != 0 {
                let y = only2 & only2.wrapping_neg();
                only2 &= only2 - 1;
                let candidate = (b1 & !x) | y;
                if bases.binary_search(&candidate).is_ok() {
                    found = true;
                    break;
                }
            }
            if !found {
                return false;
            }
        }
        true
    };
    if force_full || n <= bound {
        for (i, &b1) in bases.iter().enumerate() {
            for &b2 in bases.iter().skip(i + 1) {
                if !exchange_ok(b1, b2) {
                    return Err(MatroidError::ExchangeAxiomViolated(to_elems(b1), to_elems(b2)));
                }
                if !exchange_ok(b2, b1) {
                    return Err(MatroidError::ExchangeAxiomViolated(to_elems(b2), to_elems(b1)));
                }
            }
        }
    } else {
        // Seeded spot check: deterministic across runs.
        let mut rng = StdRng::seed_from_u64(0x6d61_7472_6f69);
        let samples = 4096.min(bases.len() * bases.len());
        for _ in 0..samples {
            let b1 = bases[rng.gen_range(0..bases.len())];
            let b2 = bases[rng.gen_range(0..bases.len())];
            if !exchange_ok(b1, b2) {
                return Err(MatroidError::ExchangeAxiomViolated(to_elems(b1), to_elems(b2)));
            }
        }
    }
    Ok(())
}

/// Builds the lattice bottom-up from the closure operator. The loopless
/// axiom makes the closure of the empty set empty, and the flat partition
/// property makes the covers of F exactly the closures cl(F+i).
fn build_lattice(n: usize, rank: usize, bases: &[Mask]) -> FlatsLattice {
    let rank_of = |s: Mask| bases.iter().map(|b| (b & s).count_ones() as usize).max().unwrap_or(0);
    let closure = |s: Mask| {
        let r = rank_of(s);
        let mut c = s;
        for p in 0..n {
            let bit = 1 << p;
            if c & bit == 0 && rank_of(s | bit) == r {
                c |= bit;
            }
        }
        c
    };
    let full: Mask = if n == 0 { 0 } else { (1u64 << n) - 1 };
    let mut by_rank: Vec<Vec<Mask>> = vec![Vec::new(); rank + 1];
    let bottom = closure(0);
    debug_assert_eq!(bottom, 0, "loopless matroid must have the empty flat");
    by_rank[0].push(0);
    for r in 0..rank {
        let mut next: Vec<Mask> = Vec::new();
        for &f in &by_rank[r] {
            for p in 0..n {
                let bit = 1 << p;
                if f & bit == 0 {
                    next.push(closure(f | bit));
                }
            }
        }
        next.sort_unstable();
        next.dedup();
        by_rank[r + 1] = next;
    }
    debug_assert_eq!(by_rank[rank], vec![full]);

    let mut flats = Vec::new();
    let mut ids_by_rank = Vec::new();
    let mut index = HashMap::new();
    for (r, group) in by_rank.iter().enumerate() {
        let mut ids = Vec::new();
        for &m in group {
            let id = flats.len();
            index.insert(m, id);
            flats.push(Flat { members: m, rank: r });
            ids.push(id);
        }
        ids_by_rank.push(ids);
    }
    let mut covers = vec![Vec::new(); flats.len()];
    for (id, fl) in flats.iter().enumerate() {
        if fl.rank == rank {
            continue;
        }
        let mut cov: Vec<FlatId> = Vec::new();
        for p in 0..n {
            let bit = 1 << p;
            if fl.members & bit == 0 {
                cov.push(index[&closure(fl.members | bit)]);
            }
        }
        cov.sort_unstable();
        cov.dedup();
        covers[id] = cov;
    }
    let len = flats.len();
    let mut join = vec![0; len * len];
    for a in 0..len {
        for b in 0..len {
            join[a * len + b] = index[&closure(flats[a].members | flats[b].members)];
        }
    }
    FlatsLattice { flats, by_rank: ids_by_rank, index, covers, join }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }
    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let r = self.find(self.parent[x]);
            self.parent[x] = r;
        }
        self.parent[x]
    }
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            false
        } else {
            self.parent[ra] = rb;
            true
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force flats: closures of all subsets, deduplicated.
    fn flats_by_closure(m: &Matroid) -> Vec<Mask> {
        let mut out: Vec<Mask> = submasks(m.full_mask())
            .into_iter()
            .map(|s| m.closure(s))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    #[test]
    fn boolean_two_is_free() {
        let m = Matroid::from_bases(vec![1, 2], vec![vec![1, 2]]).unwrap();
        assert_eq!(m.rank(), 2);
        let counts: Vec<usize> = m.lattice().by_rank.iter().map(|g| g.len()).collect();
        assert_eq!(counts, vec![1, 2, 1]);
    }

    #[test]
    fn uniform_23_flats() {
        let m = Matroid::uniform(3, 2).unwrap();
        assert_eq!(m.rank(), 2);
        let counts: Vec<usize> = m.lattice().by_rank.iter().map(|g| g.len()).collect();
        assert_eq!(counts, vec![1, 3, 1]);
        // Oracle: brute-force closure of every subset.
        let brute = flats_by_closure(&m);
        let mut ours: Vec<Mask> = m.lattice().flats.iter().map(|f| f.members).collect();
        ours.sort_unstable();
        assert_eq!(ours, brute);
    }

    #[test]
    fn loop_detected() {
        let err = Matroid::from_bases(vec![1, 2], vec![vec![1]]).unwrap_err();
        assert_eq!(err, MatroidError::LoopDetected(2));
    }

    #[test]
    fn empty_and_unequal_bases() {
        assert_eq!(
            Matroid::from_bases(vec![1], vec![]).unwrap_err(),
            MatroidError::EmptyBases
        );
        assert_eq!(
            Matroid::from_bases(vec![1, 2], vec![vec![1], vec![1, 2]]).unwrap_err(),
            MatroidError::UnequalBasisSizes
        );
    }

    #[test]
    fn exchange_axiom_rejects_non_matroid() {
        // {1,2} and {3,4} with nothing in between cannot satisfy exchange.
        let err = Matroid::from_bases(vec![1, 2, 3, 4], vec![vec![1, 2], vec![3, 4]]);
        assert!(matches!(err.unwrap_err(), MatroidError::ExchangeAxiomViolated(_, _)));
    }

    #[test]
    fn uniform_invalid_rank() {
        assert!(matches!(
            Matroid::uniform(2, 3).unwrap_err(),
            MatroidError::InvalidRank { n: 2, d: 3 }
        ));
    }

    #[test]
    fn u12_flats() {
        let m = Matroid::uniform(2, 1).unwrap();
        let counts: Vec<usize> = m.lattice().by_rank.iter().map(|g| g.len()).collect();
        assert_eq!(counts, vec![1, 1]);
        assert!(!m.is_flat(m.mask_of(&[1]).unwrap()));
    }

    #[test]
    fn graphic_triangle_is_u23() {
        let g = Matroid::graphic(&[(0, 1), (1, 2), (0, 2)]).unwrap();
        let u = Matroid::uniform(3, 2).unwrap();
        assert_eq!(g.rank(), u.rank());
        assert_eq!(g.bases().len(), u.bases().len());
        // Oracle: enumerate spanning trees of the triangle directly.
        assert_eq!(g.bases().len(), 3);
    }

    #[test]
    fn graphic_self_loop_rejected() {
        assert!(matches!(
            Matroid::graphic(&[(0, 0), (0, 1)]).unwrap_err(),
            MatroidError::LoopDetected(1)
        ));
    }

    #[test]
    fn minors_match_examples() {
        let u = Matroid::uniform(3, 2).unwrap();
        let del = u.deletion(3).unwrap();
        assert_eq!(del.elements(), &[1, 2]);
        assert_eq!(del.rank(), 2);
        assert_eq!(del.bases().len(), 1);

        let f = u.mask_of(&[1]).unwrap();
        let con = u.contraction_by_flat(f).unwrap();
        assert_eq!(con.elements(), &[2, 3]);
        assert_eq!(con.rank(), 1);
        assert_eq!(con.bases().len(), 2); // U_{1,2}

        let loc = u.localization(f).unwrap();
        assert_eq!(loc.elements(), &[1]);
        assert_eq!(loc.rank(), 1);

        assert!(matches!(
            u.contraction_by_flat(u.mask_of(&[1, 2]).unwrap()),
            Err(MatroidError::NotAFlat(_))
        ));
    }

    #[test]
    fn coloop_examples() {
        let b2 = Matroid::boolean(2).unwrap();
        assert!(b2.is_coloop(1).unwrap());
        let u = Matroid::uniform(3, 2).unwrap();
        assert!(!u.is_coloop(3).unwrap());
        let u12 = Matroid::uniform(2, 1).unwrap();
        assert!(!u12.is_coloop(1).unwrap());
        assert!(matches!(u12.is_coloop(9), Err(MatroidError::ElementNotInGroundSet(9))));
    }

    #[test]
    fn s_sets_examples() {
        let b2 = Matroid::boolean(2).unwrap();
        let (s, s_ne) = b2.s_sets(2).unwrap();
        assert_eq!(s, vec![0]);
        assert!(s_ne.is_empty());

        let u = Matroid::uniform(3, 2).unwrap();
        let (s, s_ne) = u.s_sets(3).unwrap();
        assert_eq!(s, vec![0]);
        assert!(s_ne.is_empty());

        // Proper subsets of E minus the element only: {1,2} is excluded.
        let b3 = Matroid::boolean(3).unwrap();
        let (s, s_ne) = b3.s_sets(3).unwrap();
        assert_eq!(s.len(), 3); // empty, {1}, {2}
        assert_eq!(s_ne.len(), 2);
    }

    #[test]
    fn s_sets_downward_closed() {
        for m in [Matroid::boolean(4).unwrap(), Matroid::uniform(4, 3).unwrap()] {
            for &i in m.elements() {
                let (s, _) = m.s_sets(i).unwrap();
                for &f in &s {
                    for fl in &m.lattice().flats {
                        if fl.members != f && fl.members & !f == 0 {
                            assert!(
                                s.contains(&fl.members),
                                "downward closure fails below {f:#b}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn minor_rank_identities() {
        let m = Matroid::uniform(4, 3).unwrap();
        let i = 4;
        let del = m.deletion(i).unwrap();
        for s in submasks(del.full_mask()) {
            let lifted = m.mask_of(&del.elements_of(s)).unwrap();
            assert_eq!(del.rank_of(s), m.rank_of(lifted));
        }
        let f = m.closure(m.mask_of(&[1]).unwrap());
        let con = m.contraction_by_flat(f).unwrap();
        let fr = m.rank_of(f);
        for s in submasks(con.full_mask()) {
            let lifted = m.mask_of(&con.elements_of(s)).unwrap();
            assert_eq!(con.rank_of(s), m.rank_of(lifted | f) - fr);
        }
    }

    #[test]
    fn flat_axioms_hold() {
        for m in [
            Matroid::boolean(3).unwrap(),
            Matroid::uniform(4, 2).unwrap(),
            Matroid::graphic(&[(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap(),
        ] {
            let lat = m.lattice();
            // Intersections of flats are flats.
            for a in &lat.flats {
                for b in &lat.flats {
                    assert!(m.is_flat(a.members & b.members));
                }
            }
            // Flat partition: each outside element lies in exactly one cover.
            for (id, f) in lat.flats.iter().enumerate() {
                if f.rank == m.rank() {
                    continue;
                }
                for p in 0..m.ground_size() {
                    let bit = 1 << p;
                    if f.members & bit == 0 {
                        let hits = lat.covers[id]
                            .iter()
                            .filter(|&&c| lat.flats[c].members & bit != 0)
                            .count();
                        assert_eq!(hits, 1);
                    }
                }
            }
        }
    }

    #[test]
    fn empty_and_singleton_ground_sets() {
        let e = Matroid::empty();
        assert_eq!(e.rank(), 0);
        assert_eq!(e.lattice().len(), 1);
        let b1 = Matroid::boolean(1).unwrap();
        assert_eq!(b1.rank(), 1);
        assert_eq!(b1.lattice().len(), 2);
    }
}
