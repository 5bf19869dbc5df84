//! The Chow ring and the augmented Chow ring of a loopless matroid as
//! graded rational algebras with explicit per-degree monomial bases.
//!
//! Both rings are presented by variables indexed by flats. The plain ring
//! has a variable for every nonempty proper flat, modulo linear relations
//! (one for each pair of ground-set elements) and the vanishing of
//! products over incomparable flats. The augmented ring has a variable
//! for every proper flat including the empty one; the element generators
//! y_i are eliminated up front via y_i = sum of x_F over flats F not
//! containing i, which turns the remaining relations into quadrics in the
//! x variables. Monomials supported on chains of flats span both rings,
//! and per-degree exact row reduction produces a canonical basis of pivot
//! complements together with a normal-form map used for multiplication.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::linalg::{Echelon, Int, Mat, Rat};
use crate::matroid::{Mask, Matroid, MatroidError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChowError {
    #[error("elements belong to different rings")]
    RingMismatch,
    #[error("expected a homogeneous element of degree {expected}, got {got}")]
    WrongDegree { expected: usize, got: usize },
    #[error("the degree map of the Chow ring needs a nonempty ground set")]
    EmptyGroundSet,
    #[error("matroid error: {0}")]
    Matroid(#[from] MatroidError),
}

/// Which of the two graded algebras to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Plain,
    Augmented,
}

/// A monomial on a chain of variable flats: (variable id, exponent) pairs
/// sorted along the chain.
pub type Monomial = Vec<(u32, u32)>;

/// Homogeneous ring element in coordinates over the canonical basis of
/// its degree. Elements of degree beyond the top are identically zero and
/// carry no coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub ring: u64,
    pub degree: usize,
    pub coords: Vec<Rat>,
}

impl Element {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

struct DegreeData {
    monos: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    /// Positions in `monos` of the basis (non-pivot) monomials, ascending.
    basis: Vec<usize>,
    /// Normal form of every spanning monomial over the basis.
    nf: Vec<Vec<Rat>>,
}

static RING_TOKENS: AtomicU64 = AtomicU64::new(1);

/// One of the two Chow rings of a matroid, fully materialized.
pub struct ChowRing {
    token: u64,
    matroid: Arc<Matroid>,
    variant: Variant,
    /// Variable flats as masks, sorted by (rank, mask).
    vars: Vec<Mask>,
    var_ranks: Vec<usize>,
    var_index: HashMap<Mask, u32>,
    top: usize,
    degrees: Vec<DegreeData>,
    /// Row functional on the top-degree basis sending every monomial of a
    /// complete flag to 1. Absent for the plain ring on an empty ground set.
    degree_functional: Option<Vec<Rat>>,
    /// Linear relation generators (plain variant), sparse over variables.
    linear_rel: Vec<Vec<(u32, i64)>>,
    /// Quadratic relation generators (augmented variant), as unit-coefficient
    /// sums of degree-2 chain monomials.
    quad_rel: Vec<Vec<Monomial>>,
}

impl ChowRing {
    /// Builds the ring of the given variant with bases and normal forms in
    /// every degree.
    pub fn build(matroid: &Arc<Matroid>, variant: Variant) -> Arc<ChowRing> {
        let pres = Presentation::new(matroid, variant);
        let top = pres.top;
        let degrees: Vec<DegreeData> = (0..=top)
            .into_par_iter()
            .map(|k| pres.reduce_degree(k))
            .collect();
        let mut ring = ChowRing {
            token: RING_TOKENS.fetch_add(1, Ordering::Relaxed),
            matroid: Arc::clone(matroid),
            variant,
            vars: pres.vars,
            var_ranks: pres.var_ranks,
            var_index: pres.var_index,
            top,
            degrees,
            degree_functional: None,
            linear_rel: pres.linear,
            quad_rel: pres.quadratic,
        };
        ring.degree_functional = ring.build_degree_functional();
        Arc::new(ring)
    }

    /// Graded dimensions only, skipping normal forms. This is the cheap
    /// path for large Boolean matroids where only Hilbert data is needed.
    pub fn graded_dimensions(matroid: &Arc<Matroid>, variant: Variant) -> Vec<usize> {
        let pres = Presentation::new(matroid, variant);
        (0..=pres.top)
            .into_par_iter()
            .map(|k| pres.rank_degree(k))
            .collect()
    }

    pub fn matroid(&self) -> &Arc<Matroid> {
        &self.matroid
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn token(&self) -> u64 {
        self.token
    }

    pub fn dim(&self, k: usize) -> usize {
        if k > self.top {
            0
        } else {
            self.degrees[k].basis.len()
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.top).map(|k| self.dim(k)).collect()
    }

    /// Variable flats in canonical order.
    pub fn vars(&self) -> &[Mask] {
        &self.vars
    }

    pub fn var_id(&self, flat: Mask) -> Option<u32> {
        self.var_index.get(&flat).copied()
    }

    pub fn var_flat(&self, v: u32) -> Mask {
        self.vars[v as usize]
    }

    pub fn var_rank(&self, v: u32) -> usize {
        self.var_ranks[v as usize]
    }

    /// Linear relation generators of the presentation (plain variant).
    pub fn linear_relations(&self) -> &[Vec<(u32, i64)>] {
        &self.linear_rel
    }

    /// Quadratic relation generators of the presentation (augmented
    /// variant), each a unit-coefficient sum of degree-2 chain monomials.
    pub fn quadratic_relations(&self) -> &[Vec<Monomial>] {
        &self.quad_rel
    }

    pub fn basis_monomial(&self, k: usize, i: usize) -> &Monomial {
        &self.degrees[k].monos[self.degrees[k].basis[i]]
    }

    pub fn zero(&self, degree: usize) -> Element {
        Element { ring: self.token, degree, coords: vec![Rat::zero(); self.dim(degree)] }
    }

    pub fn one(&self) -> Element {
        let mut e = self.zero(0);
        e.coords[0] = Rat::one();
        e
    }

    /// Normal form of an arbitrary chain monomial; zero above the top.
    pub fn monomial_element(&self, mono: &Monomial) -> Element {
        let degree: usize = mono.iter().map(|&(_, e)| e as usize).sum();
        if degree > self.top {
            return self.zero(degree);
        }
        let dd = &self.degrees[degree];
        let idx = *dd
            .index
            .get(mono)
            .unwrap_or_else(|| panic!("monomial outside the spanning set"));
        Element { ring: self.token, degree, coords: dd.nf[idx].clone() }
    }

    /// The class of a single variable.
    pub fn var_element(&self, var: u32) -> Element {
        self.monomial_element(&vec![(var, 1)])
    }

    /// The degree-1 class of y_i in the augmented ring: the sum of the
    /// variables over flats not containing i.
    pub fn y_generator(&self, element: crate::matroid::ElementId) -> Result<Element, ChowError> {
        assert_eq!(self.variant, Variant::Augmented);
        let p = self.matroid.position_of(element)?;
        let mut e = self.zero(1);
        for (v, &f) in self.vars.iter().enumerate() {
            if f & (1 << p) == 0 {
                let x = self.var_element(v as u32);
                add_into(&mut e.coords, &x.coords, &Rat::one());
            }
        }
        Ok(e)
    }

    /// y_F: the product of y_i over a basis of the flat, independent of
    /// the chosen basis. The independence is verified with a second basis.
    pub fn y_element(&self, flat: Mask) -> Result<Element, ChowError> {
        assert_eq!(self.variant, Variant::Augmented);
        let b1 = self.matroid.flat_basis(flat)?;
        let b2 = self.matroid.flat_basis_alt(flat)?;
        let prod = |b: Mask| -> Result<Element, ChowError> {
            let mut acc = self.one();
            for p in 0..self.matroid.ground_size() {
                if b & (1 << p) != 0 {
                    let yi = self.y_generator(self.matroid.elements()[p])?;
                    acc = self.mul(&acc, &yi);
                }
            }
            Ok(acc)
        };
        let e1 = prod(b1)?;
        if b2 != b1 {
            let e2 = prod(b2)?;
            assert_eq!(e1, e2, "y_F depends on the chosen basis of the flat");
        }
        Ok(e1)
    }

    pub fn add(&self, a: &Element, b: &Element) -> Element {
        assert_eq!(a.degree, b.degree);
        let mut out = a.clone();
        add_into(&mut out.coords, &b.coords, &Rat::one());
        out
    }

    pub fn scale(&self, a: &Element, c: &Rat) -> Element {
        Element {
            ring: a.ring,
            degree: a.degree,
            coords: a.coords.iter().map(|v| v * c).collect(),
        }
    }

    /// Checked product of two elements of this ring.
    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element, ChowError> {
        if a.ring != self.token || b.ring != self.token {
            return Err(ChowError::RingMismatch);
        }
        Ok(self.mul(a, b))
    }

    pub(crate) fn mul(&self, a: &Element, b: &Element) -> Element {
        let degree = a.degree + b.degree;
        let mut out = self.zero(degree);
        if degree > self.top {
            return out;
        }
        let dd = &self.degrees[degree];
        for (i, ca) in a.coords.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            let ma = self.basis_monomial(a.degree, i);
            for (j, cb) in b.coords.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let mb = self.basis_monomial(b.degree, j);
                let Some(m) = self.merge_monomials(ma, mb) else {
                    continue;
                };
                let idx = dd.index[&m];
                let c = ca * cb;
                add_into(&mut out.coords, &dd.nf[idx], &c);
            }
        }
        out
    }

    pub fn power(&self, a: &Element, e: usize) -> Element {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Product of chain monomials; None when supports are incomparable.
    fn merge_monomials(&self, a: &Monomial, b: &Monomial) -> Option<Monomial> {
        let mut out: Monomial = a.clone();
        'next: for &(v, e) in b {
            let fv = self.vars[v as usize];
            for &mut (w, ref mut we) in out.iter_mut() {
                if w == v {
                    *we += e;
                    continue 'next;
                }
                let fw = self.vars[w as usize];
                if fv & !fw != 0 && fw & !fv != 0 {
                    return None; // incomparable supports
                }
            }
            out.push((v, e));
        }
        out.sort_unstable_by_key(|&(v, _)| (self.var_ranks[v as usize], self.vars[v as usize]));
        Some(out)
    }

    /// Degree of a top-degree element: the linear functional sending every
    /// complete-flag monomial to 1.
    pub fn degree_value(&self, a: &Element) -> Result<Rat, ChowError> {
        if a.degree != self.top {
            return Err(ChowError::WrongDegree { expected: self.top, got: a.degree });
        }
        let f = self.degree_functional.as_ref().ok_or(ChowError::EmptyGroundSet)?;
        let mut s = Rat::zero();
        for (c, v) in f.iter().zip(a.coords.iter()) {
            if !c.is_zero() && !v.is_zero() {
                s += c * v;
            }
        }
        Ok(s)
    }

    pub fn has_degree_map(&self) -> bool {
        self.degree_functional.is_some()
    }

    /// Degree functional as a row vector on the top-degree basis.
    pub fn degree_row(&self) -> Result<Vec<Rat>, ChowError> {
        self.degree_functional.clone().ok_or(ChowError::EmptyGroundSet)
    }

    /// Matrix of multiplication by `a` from degree k to degree k + deg a,
    /// in the canonical bases.
    pub fn mult_matrix(&self, a: &Element, k: usize) -> Mat {
        let target = k + a.degree;
        let mut cols = Vec::with_capacity(self.dim(k));
        for i in 0..self.dim(k) {
            let mut b = self.zero(k);
            b.coords[i] = Rat::one();
            cols.push(self.mul(a, &b).coords);
        }
        Mat::from_cols(cols, self.dim(target))
    }

    /// Matrix of the Poincaré pairing between degrees k and top - k.
    pub fn pairing_matrix(&self, k: usize) -> Result<Mat, ChowError> {
        let kc = self.top - k;
        let mut m = Mat::zero(self.dim(k), self.dim(kc));
        for i in 0..self.dim(k) {
            let mut a = self.zero(k);
            a.coords[i] = Rat::one();
            for j in 0..self.dim(kc) {
                let mut b = self.zero(kc);
                b.coords[j] = Rat::one();
                m[(i, j)] = self.degree_value(&self.mul(&a, &b))?;
            }
        }
        Ok(m)
    }

    /// Monomials of the complete flags defining the degree map.
    pub fn complete_flag_monomials(&self) -> Vec<Monomial> {
        let start_rank = match self.variant {
            Variant::Plain => 1,
            Variant::Augmented => 0,
        };
        let d = self.matroid.rank();
        let mut flags = Vec::new();
        if self.top == 0 {
            flags.push(Vec::new());
            return flags;
        }
        let mut stack: Vec<Monomial> = Vec::new();
        for (v, &r) in self.var_ranks.iter().enumerate() {
            if r == start_rank {
                stack.push(vec![(v as u32, 1)]);
            }
        }
        while let Some(m) = stack.pop() {
            let (last, _) = *m.last().unwrap();
            let lf = self.vars[last as usize];
            let lr = self.var_ranks[last as usize];
            if lr == d - 1 {
                flags.push(m);
                continue;
            }
            for (v, &f) in self.vars.iter().enumerate() {
                if self.var_ranks[v] == lr + 1 && f & lf == lf {
                    let mut next = m.clone();
                    next.push((v as u32, 1));
                    stack.push(next);
                }
            }
        }
        flags
    }

    fn build_degree_functional(&self) -> Option<Vec<Rat>> {
        if self.variant == Variant::Plain && self.matroid.ground_size() == 0 {
            return None;
        }
        let flags = self.complete_flag_monomials();
        assert!(!flags.is_empty(), "a loopless matroid has a complete flag of flats");
        assert_eq!(
            self.dim(self.top),
            1,
            "top graded piece must be one-dimensional"
        );
        let first = self.monomial_element(&flags[0]);
        for f in &flags[1..] {
            assert_eq!(
                self.monomial_element(f),
                first,
                "complete-flag monomials must agree in the top degree"
            );
        }
        let mu = first.coords[0].clone();
        assert!(!mu.is_zero(), "flag monomial vanishes in the top degree");
        Some(vec![mu.recip()])
    }

    /// The distinguished degree-1 classes: alpha (both variants) and beta
    /// (plain variant only). Both are independent of the auxiliary element
    /// used in their definition, which is verified over all choices.
    pub fn distinguished(&self) -> Result<Distinguished, ChowError> {
        match self.variant {
            Variant::Augmented => {
                let mut alpha = self.zero(1);
                for v in 0..self.vars.len() {
                    let x = self.var_element(v as u32);
                    add_into(&mut alpha.coords, &x.coords, &Rat::one());
                }
                Ok(Distinguished { alpha, beta: None })
            }
            Variant::Plain => {
                let n = self.matroid.ground_size();
                if n == 0 {
                    return Err(ChowError::EmptyGroundSet);
                }
                let sum_over = |keep: &dyn Fn(Mask) -> bool| {
                    let mut e = self.zero(1);
                    for (v, &f) in self.vars.iter().enumerate() {
                        if keep(f) {
                            let x = self.var_element(v as u32);
                            add_into(&mut e.coords, &x.coords, &Rat::one());
                        }
                    }
                    e
                };
                let alphas: Vec<Element> =
                    (0..n).map(|p| sum_over(&|f| f & (1 << p) != 0)).collect();
                let betas: Vec<Element> =
                    (0..n).map(|p| sum_over(&|f| f & (1 << p) == 0)).collect();
                for a in &alphas[1..] {
                    assert_eq!(*a, alphas[0], "alpha must not depend on the chosen element");
                }
                for b in &betas[1..] {
                    assert_eq!(*b, betas[0], "beta must not depend on the chosen element");
                }
                Ok(Distinguished { alpha: alphas[0].clone(), beta: Some(betas[0].clone()) })
            }
        }
    }

    /// Verifies that the graded Möbius algebra embeds: the classes y_F of
    /// rank-k flats are linearly independent in degree k, and products
    /// follow the join rule.
    pub fn mobius_algebra(&self) -> Result<MobiusReport, ChowError> {
        assert_eq!(self.variant, Variant::Augmented);
        let lat = self.matroid.lattice();
        let mut failures = Vec::new();
        let mut y: Vec<Element> = Vec::with_capacity(lat.len());
        for fl in &lat.flats {
            y.push(self.y_element(fl.members)?);
        }
        let mut injective = true;
        for (r, group) in lat.by_rank.iter().enumerate() {
            let cols: Vec<Vec<Rat>> = group.iter().map(|&id| y[id].coords.clone()).collect();
            let m = Mat::from_cols(cols, self.dim(r));
            if m.rank() != group.len() {
                injective = false;
                failures.push(format!("rank-{r} classes are linearly dependent"));
            }
        }
        let mut rule = true;
        for a in 0..lat.len() {
            for b in 0..lat.len() {
                let prod = self.mul(&y[a], &y[b]);
                let ra = lat.flats[a].rank;
                let rb = lat.flats[b].rank;
                let j = lat.join(a, b);
                let expected = if ra + rb == lat.flats[j].rank {
                    y[j].clone()
                } else {
                    self.zero(ra + rb)
                };
                if prod != expected {
                    rule = false;
                    failures.push(format!(
                        "product rule fails for flats {:?} and {:?}",
                        self.matroid.elements_of(lat.flats[a].members),
                        self.matroid.elements_of(lat.flats[b].members)
                    ));
                }
            }
        }
        Ok(MobiusReport { injective, multiplication_rule: rule, failures })
    }
}

/// Distinguished degree-1 classes of a Chow ring.
pub struct Distinguished {
    pub alpha: Element,
    pub beta: Option<Element>,
}

/// Memoizes built rings by ground set, bases and variant, so that the
/// map and decomposition layers share ring objects for common minors.
#[derive(Default)]
pub struct RingCache {
    map: std::sync::Mutex<HashMap<(Vec<crate::matroid::ElementId>, Vec<Mask>, Variant), Arc<ChowRing>>>,
}

impl RingCache {
    pub fn new() -> RingCache {
        RingCache::default()
    }

    pub fn ring(&self, m: &Arc<Matroid>, variant: Variant) -> Arc<ChowRing> {
        let key = (m.elements().to_vec(), m.bases().to_vec(), variant);
        if let Some(r) = self.map.lock().unwrap().get(&key) {
            return Arc::clone(r);
        }
        let built = ChowRing::build(m, variant);
        self.map.lock().unwrap().entry(key).or_insert(built).clone()
    }
}

/// Verdicts for the graded Möbius subalgebra of an augmented Chow ring.
#[derive(Debug, Clone, serde::Serialize)]
pub struct MobiusReport {
    pub injective: bool,
    pub multiplication_rule: bool,
    pub failures: Vec<String>,
}

impl MobiusReport {
    pub fn pass(&self) -> bool {
        self.injective && self.multiplication_rule
    }
}

pub(crate) fn add_into(acc: &mut [Rat], v: &[Rat], c: &Rat) {
    debug_assert_eq!(acc.len(), v.len());
    for (a, b) in acc.iter_mut().zip(v.iter()) {
        if !b.is_zero() {
            *a += b * c;
        }
    }
}

/// The raw presentation data shared by the full build and the
/// dimensions-only path.
struct Presentation {
    vars: Vec<Mask>,
    var_ranks: Vec<usize>,
    var_index: HashMap<Mask, u32>,
    /// Strict supersets of each variable flat, for chain enumeration.
    above: Vec<Vec<u32>>,
    top: usize,
    /// Linear relation generators (plain variant), sparse over variables.
    linear: Vec<Vec<(u32, i64)>>,
    /// Quadratic relation generators (augmented variant): lists of
    /// degree-2 monomials with unit coefficients.
    quadratic: Vec<Vec<Monomial>>,
}

impl Presentation {
    fn new(matroid: &Arc<Matroid>, variant: Variant) -> Presentation {
        let full = matroid.full_mask();
        let lat = matroid.lattice();
        let mut flats: Vec<(usize, Mask)> = lat
            .flats
            .iter()
            .filter(|f| f.members != full)
            .map(|f| (f.rank, f.members))
            .collect();
        if variant == Variant::Plain {
            flats.retain(|&(_, m)| m != 0);
        }
        flats.sort_unstable();
        let vars: Vec<Mask> = flats.iter().map(|&(_, m)| m).collect();
        let var_ranks: Vec<usize> = flats.iter().map(|&(r, _)| r).collect();
        let var_index: HashMap<Mask, u32> =
            vars.iter().enumerate().map(|(i, &m)| (m, i as u32)).collect();
        let above: Vec<Vec<u32>> = vars
            .iter()
            .map(|&f| {
                vars.iter()
                    .enumerate()
                    .filter(|&(_, &g)| g != f && g & f == f)
                    .map(|(i, _)| i as u32)
                    .collect()
            })
            .collect();
        let d = matroid.rank();
        let top = match variant {
            Variant::Plain => d.saturating_sub(1),
            Variant::Augmented => d,
        };
        let n = matroid.ground_size();
        let mut linear = Vec::new();
        let mut quadratic = Vec::new();
        match variant {
            Variant::Plain => {
                for p in 1..n {
                    let mut row: Vec<(u32, i64)> = Vec::new();
                    for (v, &f) in vars.iter().enumerate() {
                        let c = (f & 1 != 0) as i64 - (f & (1 << p) != 0) as i64;
                        if c != 0 {
                            row.push((v as u32, c));
                        }
                    }
                    linear.push(row);
                }
            }
            Variant::Augmented => {
                for p in 0..n {
                    let pbit = 1u64 << p;
                    for (vf, &f) in vars.iter().enumerate() {
                        if f & pbit != 0 {
                            continue;
                        }
                        let mut terms: Vec<Monomial> = Vec::new();
                        for (vg, &g) in vars.iter().enumerate() {
                            if g & pbit != 0 {
                                continue;
                            }
                            if g & !f != 0 && f & !g != 0 {
                                continue; // incomparable, product vanishes
                            }
                            let mono = if vf == vg {
                                vec![(vf as u32, 2)]
                            } else {
                                let (a, b) = if var_ranks[vf] < var_ranks[vg]
                                    || (var_ranks[vf] == var_ranks[vg] && vars[vf] < vars[vg])
                                {
                                    (vf, vg)
                                } else {
                                    (vg, vf)
                                };
                                vec![(a as u32, 1), (b as u32, 1)]
                            };
                            terms.push(mono);
                        }
                        quadratic.push(terms);
                    }
                }
            }
        }
        Presentation { vars, var_ranks, var_index, above, top, linear, quadratic }
    }

    /// All chain monomials of the given total degree, in canonical order.
    fn spanning(&self, k: usize) -> Vec<Monomial> {
        if k == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        // Depth-first over chains; exponents distributed afterwards.
        let mut chains: Vec<Vec<u32>> = Vec::new();
        let mut stack: Vec<Vec<u32>> = (0..self.vars.len() as u32).map(|v| vec![v]).collect();
        while let Some(c) = stack.pop() {
            if c.len() <= k {
                chains.push(c.clone());
                if c.len() < k {
                    for &nxt in &self.above[*c.last().unwrap() as usize] {
                        let mut c2 = c.clone();
                        c2.push(nxt);
                        stack.push(c2);
                    }
                }
            }
        }
        for chain in chains {
            let l = chain.len();
            for comp in compositions(k as u32, l) {
                out.push(chain.iter().copied().zip(comp).collect::<Monomial>());
            }
        }
        out.sort_unstable_by(|a, b| self.mono_cmp(a, b));
        out
    }

    /// Canonical monomial order: rank of the smallest flat, then the flat
    /// bitsets lexicographically, then the exponent vectors.
    fn mono_cmp(&self, a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
        let ra = a.first().map_or(0, |&(v, _)| self.var_ranks[v as usize]);
        let rb = b.first().map_or(0, |&(v, _)| self.var_ranks[v as usize]);
        ra.cmp(&rb)
            .then_with(|| {
                let ma = a.iter().map(|&(v, _)| self.vars[v as usize]);
                let mb = b.iter().map(|&(v, _)| self.vars[v as usize]);
                ma.cmp(mb)
            })
            .then_with(|| a.iter().map(|&(_, e)| e).cmp(b.iter().map(|&(_, e)| e)))
    }

    /// Multiplies a chain monomial by one variable, if comparable.
    fn mono_times_var(&self, m: &Monomial, v: u32) -> Option<Monomial> {
        let fv = self.vars[v as usize];
        let mut out = m.clone();
        for &mut (w, ref mut e) in out.iter_mut() {
            if w == v {
                *e += 1;
                return Some(out);
            }
            let fw = self.vars[w as usize];
            if fv & !fw != 0 && fw & !fv != 0 {
                return None;
            }
        }
        out.push((v, 1));
        out.sort_unstable_by_key(|&(w, _)| (self.var_ranks[w as usize], self.vars[w as usize]));
        Some(out)
    }

    fn mono_times_mono(&self, m: &Monomial, n: &Monomial) -> Option<Monomial> {
        let mut out = m.clone();
        for &(v, e) in n {
            for _ in 0..e {
                out = self.mono_times_var(&out, v)?;
            }
        }
        Some(out)
    }

    /// Relation rows of degree k in the coordinates of `monos`.
    fn relation_rows(
        &self,
        k: usize,
        index: &HashMap<Monomial, usize>,
    ) -> Vec<Vec<(u32, Int)>> {
        let mut rows = Vec::new();
        if !self.linear.is_empty() && k >= 1 {
            let lower = self.spanning(k - 1);
            for m in &lower {
                for l in &self.linear {
                    let mut row: Vec<(u32, Int)> = Vec::new();
                    for &(v, c) in l {
                        if let Some(prod) = self.mono_times_var(m, v) {
                            row.push((index[&prod] as u32, Int::from(c)));
                        }
                    }
                    row.sort_unstable_by_key(|&(c, _)| c);
                    if !row.is_empty() {
                        rows.push(row);
                    }
                }
            }
        }
        if !self.quadratic.is_empty() && k >= 2 {
            let lower = self.spanning(k - 2);
            for m in &lower {
                for q in &self.quadratic {
                    let mut row: Vec<(u32, Int)> = Vec::new();
                    for term in q {
                        if let Some(prod) = self.mono_times_mono(m, term) {
                            row.push((index[&prod] as u32, Int::from(1)));
                        }
                    }
                    row.sort_unstable_by_key(|&(c, _)| c);
                    if !row.is_empty() {
                        rows.push(row);
                    }
                }
            }
        }
        rows
    }

    fn reduce_degree(&self, k: usize) -> DegreeData {
        let monos = self.spanning(k);
        let index: HashMap<Monomial, usize> =
            monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let mut ech = Echelon::new(monos.len());
        for row in self.relation_rows(k, &index) {
            ech.insert(row);
        }
        let rref = ech.into_rref();
        let basis: Vec<usize> = rref.free.iter().map(|&c| c as usize).collect();
        let basis_pos: HashMap<u32, usize> =
            rref.free.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let dim = basis.len();
        let mut nf = vec![Vec::new(); monos.len()];
        for i in 0..monos.len() {
            let mut v = vec![Rat::zero(); dim];
            if let Some(pos) = basis_pos.get(&(i as u32)) {
                v[*pos] = Rat::one();
            } else if let Some(row) = rref.pivot_expansion(i as u32) {
                for (c, coef) in row {
                    v[basis_pos[c]] = -coef.clone();
                }
            }
            nf[i] = v;
        }
        DegreeData { monos, index, basis, nf }
    }

    fn rank_degree(&self, k: usize) -> usize {
        let monos = self.spanning(k);
        let index: HashMap<Monomial, usize> =
            monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let mut ech = Echelon::new(monos.len());
        for row in self.relation_rows(k, &index) {
            ech.insert(row);
        }
        monos.len() - ech.rank()
    }
}

/// Compositions of `total` into `parts` positive integers.
fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 1..=(total - parts as u32 + 1) {
        for rest in compositions(total - first, parts - 1) {
            let mut v = Vec::with_capacity(parts);
            v.push(first);
            v.extend(rest);
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn boolean(n: usize) -> Arc<Matroid> {
        Matroid::boolean(n).unwrap()
    }

    #[test]
    fn plain_dims_of_small_booleans() {
        let r = ChowRing::build(&boolean(3), Variant::Plain);
        assert_eq!(r.dims(), vec![1, 4, 1]);
        let r2 = ChowRing::build(&boolean(2), Variant::Plain);
        assert_eq!(r2.dims(), vec![1, 1]);
    }

    #[test]
    fn augmented_b1_basis() {
        let r = ChowRing::build(&boolean(1), Variant::Augmented);
        assert_eq!(r.dims(), vec![1, 1]);
        // Single variable x_empty; its square vanishes.
        let x = r.var_element(0);
        assert!(r.mul(&x, &x).is_zero());
    }

    #[test]
    fn u23_plain_degree_one_collapses() {
        let u = Matroid::uniform(3, 2).unwrap();
        let r = ChowRing::build(&u, Variant::Plain);
        assert_eq!(r.dims(), vec![1, 1]);
        let x1 = r.var_element(0);
        let x2 = r.var_element(1);
        let x3 = r.var_element(2);
        assert_eq!(x1, x2);
        assert_eq!(x2, x3);
    }

    #[test]
    fn incomparable_products_vanish() {
        let r = ChowRing::build(&boolean(2), Variant::Plain);
        let x1 = r.var_element(0);
        let x2 = r.var_element(1);
        assert!(r.mul(&x1, &x2).is_zero());
        // x1 = x2 forces x1^2 = x1 x2 = 0 as well.
        assert!(r.mul(&x1, &x1).is_zero());
        let one = r.one();
        assert_eq!(r.mul(&one, &x1), x1);
    }

    #[test]
    fn ring_mismatch_detected() {
        let r = ChowRing::build(&boolean(2), Variant::Plain);
        let s = ChowRing::build(&boolean(2), Variant::Plain);
        let a = r.one();
        let b = s.one();
        assert!(matches!(r.multiply(&a, &b), Err(ChowError::RingMismatch)));
    }

    #[test]
    fn degree_map_examples() {
        let r = ChowRing::build(&boolean(2), Variant::Plain);
        let x1 = r.var_element(0);
        assert_eq!(r.degree_value(&x1).unwrap(), Rat::one());

        let ra = ChowRing::build(&boolean(2), Variant::Augmented);
        // x_empty * x_{1}: a complete flag of proper flats.
        let e = ra.var_id(0).unwrap();
        let f1 = ra.var_id(0b01).unwrap();
        let m = ra.monomial_element(&vec![(e, 1), (f1, 1)]);
        assert_eq!(ra.degree_value(&m).unwrap(), Rat::one());

        let z = r.zero(r.top());
        assert_eq!(r.degree_value(&z).unwrap(), Rat::zero());

        let wrong = r.one();
        assert!(matches!(
            r.degree_value(&wrong),
            Err(ChowError::WrongDegree { expected: 1, got: 0 })
        ));
    }

    #[test]
    fn empty_ground_set_rings() {
        let e = Matroid::empty();
        let p = ChowRing::build(&e, Variant::Plain);
        assert_eq!(p.dims(), vec![1]);
        assert!(!p.has_degree_map());
        let a = ChowRing::build(&e, Variant::Augmented);
        assert_eq!(a.dims(), vec![1]);
        assert_eq!(a.degree_value(&a.one()).unwrap(), Rat::one());
    }

    #[test]
    fn y_elements_in_small_rings() {
        let r = ChowRing::build(&boolean(1), Variant::Augmented);
        let y1 = r.y_element(0b1).unwrap();
        let x_empty = r.var_element(0);
        assert_eq!(y1, x_empty);
        let y0 = r.y_element(0).unwrap();
        assert_eq!(y0, r.one());

        // Basis independence where two bases exist.
        let u = Matroid::uniform(2, 1).unwrap();
        let ru = ChowRing::build(&u, Variant::Augmented);
        let ye = ru.y_element(ru.matroid().full_mask()).unwrap();
        assert!(!ye.is_zero());
    }

    #[test]
    fn distinguished_examples() {
        let u = Matroid::uniform(3, 2).unwrap();
        let r = ChowRing::build(&u, Variant::Plain);
        let d = r.distinguished().unwrap();
        assert_eq!(d.alpha, r.var_element(0));

        let b2 = ChowRing::build(&boolean(2), Variant::Plain);
        let d2 = b2.distinguished().unwrap();
        assert_eq!(d2.beta.unwrap(), b2.var_element(0));

        let b1 = ChowRing::build(&boolean(1), Variant::Augmented);
        let d1 = b1.distinguished().unwrap();
        assert_eq!(d1.alpha, b1.var_element(0));
    }

    #[test]
    fn pairing_matrices() {
        let r = ChowRing::build(&boolean(2), Variant::Plain);
        let p = r.pairing_matrix(0).unwrap();
        assert_eq!((p.rows, p.cols), (1, 1));
        assert_eq!(p[(0, 0)], Rat::one());

        let b1 = ChowRing::build(&boolean(1), Variant::Augmented);
        let p = b1.pairing_matrix(1).unwrap();
        assert_eq!(p[(0, 0)], Rat::one());

        let b3 = ChowRing::build(&boolean(3), Variant::Plain);
        let p = b3.pairing_matrix(1).unwrap();
        assert_eq!((p.rows, p.cols), (4, 4));
        assert!(!p.det().is_zero());
    }

    #[test]
    fn mobius_small() {
        let r = ChowRing::build(&boolean(2), Variant::Augmented);
        let rep = r.mobius_algebra().unwrap();
        assert!(rep.pass(), "{:?}", rep.failures);
        let m = r.matroid().clone();
        let y1 = r.y_element(m.mask_of(&[1]).unwrap()).unwrap();
        let y2 = r.y_element(m.mask_of(&[2]).unwrap()).unwrap();
        let ye = r.y_element(m.full_mask()).unwrap();
        assert_eq!(r.mul(&y1, &y2), ye);
    }

    #[test]
    fn degrees_above_top_vanish() {
        for (m, variant) in [
            (boolean(3), Variant::Plain),
            (boolean(3), Variant::Augmented),
            (Matroid::uniform(4, 2).unwrap(), Variant::Plain),
            (Matroid::uniform(4, 2).unwrap(), Variant::Augmented),
        ] {
            let pres = Presentation::new(&m, variant);
            let k = pres.top + 1;
            assert_eq!(pres.rank_degree(k), 0, "degree {k} must vanish");
        }
    }

    #[test]
    fn dims_only_path_matches_full_build() {
        let m = boolean(4);
        let full = ChowRing::build(&m, Variant::Plain).dims();
        let fast = ChowRing::graded_dimensions(&m, Variant::Plain);
        assert_eq!(full, fast);
        let fulla = ChowRing::build(&m, Variant::Augmented).dims();
        let fasta = ChowRing::graded_dimensions(&m, Variant::Augmented);
        assert_eq!(fulla, fasta);
    }
}
