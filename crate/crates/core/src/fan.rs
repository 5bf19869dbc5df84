//! The Bergman fan and the augmented Bergman fan of a loopless matroid,
//! their stars, balanced weight spaces, and structural certificates.
//!
//! Fans live in an integer lattice or an explicit quotient of one. A
//! quotient is handled by fixing a complement basis: the quotient vectors
//! are put in row echelon form with unit pivots and every vector is
//! reduced to canonical coordinates on the non-pivot positions, so all
//! fan data is exact integer data.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{rows_extend_to_lattice_basis, Mat, Rat};
use crate::matroid::{ElementId, Mask, Matroid};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FanError {
    #[error("ray {0} is not in the fan")]
    RayNotInFan(usize),
    #[error("fan is not complete: {0}")]
    FanNotComplete(String),
    #[error("star does not match its model fan: {0}")]
    StarModelMismatch(String),
}

/// Ambient lattice Z^dim modulo a saturated sublattice spanned by the
/// quotient vectors. Canonical coordinates live on the non-pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmbientLattice {
    pub dim: usize,
    quotient: Vec<Vec<i64>>,
    pivots: Vec<usize>,
    kept: Vec<usize>,
}

impl AmbientLattice {
    pub fn new(dim: usize, quotient_vectors: Vec<Vec<i64>>) -> AmbientLattice {
        let mut pivots: Vec<usize> = Vec::new();
        let mut rows: Vec<Vec<i64>> = Vec::new();
        for mut r in quotient_vectors {
            assert_eq!(r.len(), dim);
            loop {
                let Some(p) = r.iter().position(|&v| v != 0) else {
                    break;
                };
                if let Some(i) = pivots.iter().position(|&q| q == p) {
                    let c = r[p] / rows[i][p];
                    assert_eq!(c * rows[i][p], r[p], "quotient pivots must divide exactly");
                    for (a, b) in r.iter_mut().zip(rows[i].iter()) {
                        *a -= c * b;
                    }
                } else {
                    assert_eq!(r[p].abs(), 1, "quotient vectors must have unit pivots");
                    if r[p] == -1 {
                        for a in r.iter_mut() {
                            *a = -*a;
                        }
                    }
                    pivots.push(p);
                    rows.push(r);
                    break;
                }
            }
        }
        let mut order: Vec<usize> = (0..pivots.len()).collect();
        order.sort_unstable_by_key(|&i| pivots[i]);
        let quotient: Vec<Vec<i64>> = order.iter().map(|&i| rows[i].clone()).collect();
        let pivots: Vec<usize> = order.iter().map(|&i| pivots[i]).collect();
        let kept: Vec<usize> = (0..dim).filter(|p| !pivots.contains(p)).collect();
        AmbientLattice { dim, quotient, pivots, kept }
    }

    /// Canonical coordinates of the class of an ambient vector.
    pub fn project(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.dim);
        let mut w = v.to_vec();
        for (q, &p) in self.quotient.iter().zip(self.pivots.iter()) {
            let c = w[p];
            if c != 0 {
                for (a, b) in w.iter_mut().zip(q.iter()) {
                    *a -= c * b;
                }
            }
        }
        self.kept.iter().map(|&p| w[p]).collect()
    }

    /// A representative in Z^dim of the given canonical coordinates.
    pub fn lift(&self, w: &[i64]) -> Vec<i64> {
        assert_eq!(w.len(), self.kept.len());
        let mut v = vec![0i64; self.dim];
        for (&p, &x) in self.kept.iter().zip(w.iter()) {
            v[p] = x;
        }
        v
    }

    pub fn canonical_dim(&self) -> usize {
        self.kept.len()
    }

    pub fn kept_positions(&self) -> &[usize] {
        &self.kept
    }

    pub fn quotient_vectors(&self) -> &[Vec<i64>] {
        &self.quotient
    }
}

/// How a ray arises in a matroid fan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "value")]
pub enum RayLabel {
    /// Ray of a ground-set element in the augmented fan.
    Element(ElementId),
    /// Ray of a proper flat in the augmented fan.
    ProperFlat(Mask),
    /// Ray of a nonempty proper flat in the Bergman fan.
    BergmanFlat(Mask),
    Unlabeled,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ray {
    /// Primitive generator in canonical coordinates.
    pub generator: Vec<i64>,
    pub label: RayLabel,
}

/// Tag carried by a cone of a matroid fan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConeTag {
    /// Compatible pair: independent set and flag of proper flats.
    IndepFlag { indep: Mask, flag: Vec<Mask> },
    /// Flag of nonempty proper flats.
    Flag { flag: Vec<Mask> },
    None,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    /// Sorted ray indices.
    pub rays: Vec<u32>,
    pub tag: ConeTag,
}

/// A rational simplicial fan, fully enumerated and closed under faces.
#[derive(Debug, Clone)]
pub struct Fan {
    pub ambient: AmbientLattice,
    pub rays: Vec<Ray>,
    ray_index: HashMap<Vec<i64>, u32>,
    /// All cones grouped by dimension; dimension 0 is the origin.
    pub cones_by_dim: Vec<Vec<Cone>>,
    cone_set: HashSet<Vec<u32>>,
}

fn primitive(mut v: Vec<i64>) -> Vec<i64> {
    let mut g: i64 = 0;
    for &x in &v {
        g = num_integer::gcd(g, x.abs());
    }
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
    v
}

impl Fan {
    /// Builds a fan from maximal cones, closing under faces.
    pub fn from_cones(ambient: AmbientLattice, rays: Vec<Ray>, maximal: Vec<Cone>) -> Fan {
        let mut ray_index = HashMap::new();
        for (i, r) in rays.iter().enumerate() {
            assert_eq!(r.generator.len(), ambient.canonical_dim());
            assert_eq!(r.generator, primitive(r.generator.clone()), "rays must be primitive");
            let prev = ray_index.insert(r.generator.clone(), i as u32);
            assert!(prev.is_none(), "duplicate ray generator");
        }
        let mut cone_map: HashMap<Vec<u32>, ConeTag> = HashMap::new();
        cone_map.insert(Vec::new(), ConeTag::None);
        for c in &maximal {
            let mut sorted = c.rays.clone();
            sorted.sort_unstable();
            let k = sorted.len();
            for sub in 0u64..(1 << k) {
                let face: Vec<u32> =
                    (0..k).filter(|&i| sub & (1 << i) != 0).map(|i| sorted[i]).collect();
                let tag = if face.len() == k { c.tag.clone() } else { ConeTag::None };
                cone_map.entry(face).or_insert(tag);
            }
        }
        let maxdim = cone_map.keys().map(|k| k.len()).max().unwrap_or(0);
        let mut cones_by_dim: Vec<Vec<Cone>> = vec![Vec::new(); maxdim + 1];
        let mut cone_set = HashSet::new();
        let mut entries: Vec<(Vec<u32>, ConeTag)> = cone_map.into_iter().collect();
        entries.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        for (rays_of_cone, tag) in entries {
            cone_set.insert(rays_of_cone.clone());
            cones_by_dim[rays_of_cone.len()].push(Cone { rays: rays_of_cone, tag });
        }
        Fan { ambient, rays, ray_index, cones_by_dim, cone_set }
    }

    pub fn dim(&self) -> usize {
        self.cones_by_dim.len() - 1
    }

    pub fn ray_id(&self, generator: &[i64]) -> Option<u32> {
        self.ray_index.get(generator).copied()
    }

    pub fn ray_by_label(&self, label: RayLabel) -> Option<u32> {
        self.rays.iter().position(|r| r.label == label).map(|i| i as u32)
    }

    pub fn maximal_cones(&self) -> &[Cone] {
        &self.cones_by_dim[self.dim()]
    }

    pub fn cone_count(&self) -> usize {
        self.cones_by_dim.iter().map(|g| g.len()).sum()
    }

    pub fn has_cone(&self, rays: &[u32]) -> bool {
        let mut k = rays.to_vec();
        k.sort_unstable();
        self.cone_set.contains(&k)
    }

    /// Whether every cone is a face of a maximal-dimension cone.
    pub fn is_pure(&self) -> bool {
        let top = self.maximal_cones();
        self.cones_by_dim
            .iter()
            .flatten()
            .all(|c| top.iter().any(|t| c.rays.iter().all(|r| t.rays.contains(r))))
    }

    /// Every cone's ray generators extend to a basis of the lattice.
    pub fn check_unimodular(&self) -> bool {
        self.cones_by_dim.iter().flatten().all(|c| {
            let rows: Vec<Vec<i64>> =
                c.rays.iter().map(|&r| self.rays[r as usize].generator.clone()).collect();
            rows_extend_to_lattice_basis(&rows)
        })
    }

    /// Facet graph connectivity, adjacency through shared codimension-1
    /// faces.
    pub fn check_codim1_connected(&self) -> bool {
        let facets = self.maximal_cones();
        if facets.len() <= 1 {
            return true;
        }
        let d = self.dim();
        let mut by_wall: HashMap<Vec<u32>, Vec<usize>> = HashMap::new();
        for (i, f) in facets.iter().enumerate() {
            for skip in 0..d {
                let wall: Vec<u32> = f
                    .rays
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != skip)
                    .map(|(_, &r)| r)
                    .collect();
                by_wall.entry(wall).or_default().push(i);
            }
        }
        let mut parent: Vec<usize> = (0..facets.len()).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let r = find(parent, parent[x]);
                parent[x] = r;
            }
            parent[x]
        }
        for group in by_wall.values() {
            for w in group.windows(2) {
                let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        let root = find(&mut parent, 0);
        (0..facets.len()).all(|i| find(&mut parent, i) == root)
    }

    /// The walls of a complete simplicial fan: every codimension-1 cone
    /// together with the two facets it separates.
    pub fn walls(&self) -> Result<Vec<Wall>, FanError> {
        let d = self.dim();
        if d != self.ambient.canonical_dim() {
            return Err(FanError::FanNotComplete(format!(
                "top dimension {d} is below the ambient dimension {}",
                self.ambient.canonical_dim()
            )));
        }
        if d == 0 {
            return Ok(Vec::new());
        }
        let facets = self.maximal_cones();
        let mut by_wall: HashMap<Vec<u32>, Vec<(usize, u32)>> = HashMap::new();
        for (i, f) in facets.iter().enumerate() {
            for skip in 0..d {
                let wall: Vec<u32> = f
                    .rays
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != skip)
                    .map(|(_, &r)| r)
                    .collect();
                by_wall.entry(wall).or_default().push((i, f.rays[skip]));
            }
        }
        let mut keys: Vec<Vec<u32>> = by_wall.keys().cloned().collect();
        keys.sort_unstable();
        let mut walls = Vec::new();
        for k in keys {
            let side = &by_wall[&k];
            if side.len() != 2 {
                return Err(FanError::FanNotComplete(format!(
                    "codimension-1 cone {k:?} lies in {} facets",
                    side.len()
                )));
            }
            walls.push(Wall {
                rays: k,
                facets: [side[0].0, side[1].0],
                opposite: [side[0].1, side[1].1],
            });
        }
        Ok(walls)
    }

    /// For a wall with opposite rays u1, u2, the unique coefficients a_v
    /// with u1 + u2 = sum of a_v over the wall rays v.
    pub fn wall_relation(&self, wall: &Wall) -> Vec<Rat> {
        let d = self.ambient.canonical_dim();
        let u1 = &self.rays[wall.opposite[0] as usize].generator;
        let u2 = &self.rays[wall.opposite[1] as usize].generator;
        let rhs: Vec<Rat> = (0..d).map(|i| Rat::from_integer((u1[i] + u2[i]).into())).collect();
        let cols: Vec<Vec<Rat>> = wall
            .rays
            .iter()
            .map(|&r| {
                self.rays[r as usize]
                    .generator
                    .iter()
                    .map(|&x| Rat::from_integer(x.into()))
                    .collect()
            })
            .collect();
        let a = Mat::from_cols(cols, d);
        let mut aug = Mat::hcat(&[&a, &Mat::from_cols(vec![rhs], d)]);
        let pivots = aug.rref();
        let mut x = vec![Rat::zero(); wall.rays.len()];
        for (r, &p) in pivots.iter().enumerate() {
            assert!(p < wall.rays.len(), "wall relation is inconsistent");
            x[p] = aug[(r, wall.rays.len())].clone();
        }
        x
    }

    /// The star of a ray: cones containing it, projected to the quotient
    /// by the ray.
    pub fn star_of_ray_raw(&self, ray: u32) -> Result<Fan, FanError> {
        if ray as usize >= self.rays.len() {
            return Err(FanError::RayNotInFan(ray as usize));
        }
        let gen = self.ambient.lift(&self.rays[ray as usize].generator);
        let mut quotient = self.ambient.quotient_vectors().to_vec();
        quotient.push(gen);
        let ambient = AmbientLattice::new(self.ambient.dim, quotient);
        let mut star_rays: Vec<Ray> = Vec::new();
        let mut seen: HashMap<Vec<i64>, u32> = HashMap::new();
        let mut maximal: Vec<Cone> = Vec::new();
        for group in &self.cones_by_dim {
            for c in group {
                if !c.rays.contains(&ray) {
                    continue;
                }
                let mut new_rays = Vec::new();
                for &r in &c.rays {
                    if r == ray {
                        continue;
                    }
                    let v = primitive(
                        ambient.project(&self.ambient.lift(&self.rays[r as usize].generator)),
                    );
                    let id = *seen.entry(v.clone()).or_insert_with(|| {
                        star_rays
                            .push(Ray { generator: v.clone(), label: self.rays[r as usize].label });
                        (star_rays.len() - 1) as u32
                    });
                    new_rays.push(id);
                }
                new_rays.sort_unstable();
                maximal.push(Cone { rays: new_rays, tag: ConeTag::None });
            }
        }
        Ok(Fan::from_cones(ambient, star_rays, maximal))
    }

    /// Product fan: rays are the disjoint union, cones are pairwise sums.
    pub fn product(a: &Fan, b: &Fan) -> Fan {
        let dim = a.ambient.canonical_dim() + b.ambient.canonical_dim();
        let ambient = AmbientLattice::new(dim, Vec::new());
        let mut rays = Vec::new();
        for r in &a.rays {
            let mut g = r.generator.clone();
            g.extend(std::iter::repeat(0).take(b.ambient.canonical_dim()));
            rays.push(Ray { generator: g, label: r.label });
        }
        let off = a.rays.len() as u32;
        for r in &b.rays {
            let mut g = vec![0; a.ambient.canonical_dim()];
            g.extend(r.generator.iter().copied());
            rays.push(Ray { generator: g, label: r.label });
        }
        let mut maximal = Vec::new();
        for ca in a.maximal_cones() {
            for cb in b.maximal_cones() {
                let mut rays_of = ca.rays.clone();
                rays_of.extend(cb.rays.iter().map(|&r| r + off));
                rays_of.sort_unstable();
                maximal.push(Cone { rays: rays_of, tag: ConeTag::None });
            }
        }
        Fan::from_cones(ambient, rays, maximal)
    }
}

/// A codimension-1 cone of a complete fan with its two incident facets
/// and their opposite rays.
#[derive(Debug, Clone)]
pub struct Wall {
    pub rays: Vec<u32>,
    pub facets: [usize; 2],
    pub opposite: [u32; 2],
}

/// The Bergman fan: cones are flags of nonempty proper flats, living in
/// the quotient of R^E by the all-ones vector.
pub fn bergman_fan(m: &Arc<Matroid>) -> Fan {
    let n = m.ground_size();
    let ambient = AmbientLattice::new(n, if n == 0 { Vec::new() } else { vec![vec![1; n]] });
    let full = m.full_mask();
    let mut flats: Vec<Mask> = m
        .lattice()
        .flats
        .iter()
        .filter(|f| f.members != 0 && f.members != full)
        .map(|f| f.members)
        .collect();
    flats.sort_unstable_by_key(|&f| (f.count_ones(), f));
    let mut rays = Vec::new();
    let mut ray_of_flat: HashMap<Mask, u32> = HashMap::new();
    for &f in &flats {
        let v: Vec<i64> = (0..n).map(|p| (f >> p & 1) as i64).collect();
        ray_of_flat.insert(f, rays.len() as u32);
        rays.push(Ray {
            generator: primitive(ambient.project(&v)),
            label: RayLabel::BergmanFlat(f),
        });
    }
    let mut maximal = Vec::new();
    let mut stack: Vec<Vec<Mask>> = vec![Vec::new()];
    while let Some(flag) = stack.pop() {
        let mut extended = false;
        for &f in &flats {
            if flag.last().map_or(true, |&l| l & f == l && l != f) {
                let mut next = flag.clone();
                next.push(f);
                stack.push(next);
                extended = true;
            }
        }
        if !extended {
            let rays_of: Vec<u32> = flag.iter().map(|f| ray_of_flat[f]).collect();
            maximal.push(Cone { rays: rays_of, tag: ConeTag::Flag { flag } });
        }
    }
    Fan::from_cones(ambient, rays, maximal)
}

/// The augmented Bergman fan: cones are compatible pairs of an
/// independent set and a flag of proper flats, living in R^E. Maximal
/// cones pair a basis of a flat with a complete flag above it.
pub fn augmented_bergman_fan(m: &Arc<Matroid>) -> Fan {
    let n = m.ground_size();
    let ambient = AmbientLattice::new(n, Vec::new());
    let lat = m.lattice();
    let full = m.full_mask();
    let mut flats: Vec<Mask> = if n == 0 {
        Vec::new()
    } else {
        lat.flats.iter().filter(|f| f.members != full).map(|f| f.members).collect()
    };
    flats.sort_unstable_by_key(|&f| (f.count_ones(), f));
    let mut rays = Vec::new();
    let mut ray_of_elem: HashMap<usize, u32> = HashMap::new();
    let mut ray_of_flat: HashMap<Mask, u32> = HashMap::new();
    for p in 0..n {
        let mut v = vec![0i64; n];
        v[p] = 1;
        ray_of_elem.insert(p, rays.len() as u32);
        rays.push(Ray { generator: v, label: RayLabel::Element(m.elements()[p]) });
    }
    for &f in &flats {
        let v: Vec<i64> = (0..n).map(|p| -(((full & !f) >> p & 1) as i64)).collect();
        ray_of_flat.insert(f, rays.len() as u32);
        rays.push(Ray { generator: v, label: RayLabel::ProperFlat(f) });
    }
    let mut maximal = Vec::new();
    for fl in &lat.flats {
        let f0 = fl.members;
        let r0 = fl.rank;
        let mut indeps = Vec::new();
        for sub in crate::matroid::submasks(f0) {
            if sub.count_ones() as usize == r0 && m.is_independent(sub) {
                indeps.push(sub);
            }
        }
        let mut flags: Vec<Vec<Mask>> = Vec::new();
        if f0 == full {
            flags.push(Vec::new());
        } else {
            let mut stack: Vec<Vec<Mask>> = vec![vec![f0]];
            while let Some(flag) = stack.pop() {
                let last = *flag.last().unwrap();
                if m.rank_of(last) == m.rank() - 1 {
                    flags.push(flag);
                    continue;
                }
                for fl2 in &lat.flats {
                    let g = fl2.members;
                    if g != full && fl2.rank == m.rank_of(last) + 1 && g & last == last {
                        let mut next = flag.clone();
                        next.push(g);
                        stack.push(next);
                    }
                }
            }
        }
        for &i_set in &indeps {
            for flag in &flags {
                let mut rays_of: Vec<u32> = (0..n)
                    .filter(|&p| i_set & (1 << p) != 0)
                    .map(|p| ray_of_elem[&p])
                    .collect();
                rays_of.extend(flag.iter().map(|g| ray_of_flat[g]));
                rays_of.sort_unstable();
                maximal.push(Cone {
                    rays: rays_of,
                    tag: ConeTag::IndepFlag { indep: i_set, flag: flag.clone() },
                });
            }
        }
    }
    Fan::from_cones(ambient, rays, maximal)
}

/// A rational weight on the k-dimensional cones of a fan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Weighting {
    pub dim: usize,
    pub values: Vec<Rat>,
}

impl Weighting {
    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }
}

/// Exact basis of the space of balanced weights in dimension k: for each
/// (k-1)-cone, the weighted sum of the opposite rays of the incident
/// k-cones must lie in the span of the cone. The span condition is
/// imposed by reducing each opposite ray modulo an exact row reduction
/// of the cone's ray matrix.
pub fn balanced_weight_space(fan: &Fan, k: usize) -> Vec<Weighting> {
    assert!(k <= fan.dim(), "weight dimension exceeds fan dimension");
    if k == 0 {
        return vec![Weighting { dim: 0, values: vec![Rat::from_integer(1.into())] }];
    }
    let cones_k = &fan.cones_by_dim[k];
    let cones_km1 = &fan.cones_by_dim[k - 1];
    let d = fan.ambient.canonical_dim();
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for tau in cones_km1 {
        let mut span = if tau.rays.is_empty() {
            Mat::zero(0, d)
        } else {
            Mat::from_rows(
                tau.rays
                    .iter()
                    .map(|&r| {
                        fan.rays[r as usize]
                            .generator
                            .iter()
                            .map(|&x| Rat::from_integer(x.into()))
                            .collect()
                    })
                    .collect(),
            )
        };
        let pivots = span.rref();
        let reduce = |v: &[i64]| -> Vec<Rat> {
            let mut w: Vec<Rat> = v.iter().map(|&x| Rat::from_integer(x.into())).collect();
            for (r, &p) in pivots.iter().enumerate() {
                if !w[p].is_zero() {
                    let c = w[p].clone();
                    for j in 0..d {
                        let s = &w[j] - &c * &span[(r, j)];
                        w[j] = s;
                    }
                }
            }
            w
        };
        let mut coeff: Vec<Vec<Rat>> = vec![vec![Rat::zero(); cones_k.len()]; d];
        let mut any = false;
        for (i, sigma) in cones_k.iter().enumerate() {
            if !tau.rays.iter().all(|r| sigma.rays.contains(r)) {
                continue;
            }
            let extra: Vec<u32> =
                sigma.rays.iter().copied().filter(|r| !tau.rays.contains(r)).collect();
            if extra.len() != 1 {
                continue;
            }
            any = true;
            let red = reduce(&fan.rays[extra[0] as usize].generator);
            for (j, val) in red.into_iter().enumerate() {
                coeff[j][i] = val;
            }
        }
        if any {
            for row in coeff {
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let system =
        if rows.is_empty() { Mat::zero(0, cones_k.len()) } else { Mat::from_rows(rows) };
    let ns = system.nullspace();
    (0..ns.cols).map(|j| Weighting { dim: k, values: ns.col(j) }).collect()
}

/// Which model identifies the star of a ray.
#[derive(Debug, Clone, Serialize)]
pub enum StarModel {
    /// Augmented fan of the contraction by the closure of the element.
    ElementRay { element: ElementId },
    /// Bergman fan of the contraction times the augmented fan of the
    /// localization.
    FlatRay { flat: Vec<ElementId> },
    /// Bergman fan of the contraction times the Bergman fan of the
    /// localization.
    BergmanRay { flat: Vec<ElementId> },
}

/// Star of a ray with its verified model identification.
pub struct StarReport {
    pub star: Fan,
    pub model: Fan,
    pub descriptor: StarModel,
    /// Pairs (star ray id, model ray id) matched by primitive generators.
    pub ray_bijection: Vec<(u32, u32)>,
}

/// Computes the star of a labeled ray of a matroid fan and verifies the
/// combinatorial isomorphism with its model fan. The identification maps
/// each unit coordinate of the model to the corresponding ground-set
/// coordinate, so matching reduces to comparing primitive generators.
pub fn star_of_ray(m: &Arc<Matroid>, fan: &Fan, ray: u32) -> Result<StarReport, FanError> {
    if ray as usize >= fan.rays.len() {
        return Err(FanError::RayNotInFan(ray as usize));
    }
    let star = fan.star_of_ray_raw(ray)?;
    let n = m.ground_size();
    let (model, descriptor, embed): (Fan, StarModel, Vec<Vec<i64>>) =
        match fan.rays[ray as usize].label {
            RayLabel::Element(e) => {
                let p = m.position_of(e).expect("labeled element is in the ground set");
                let cl = m.closure(1 << p);
                let contraction = m.contraction_by_flat(cl).expect("closure is a flat");
                let model = augmented_bergman_fan(&contraction);
                let embed: Vec<Vec<i64>> = contraction
                    .elements()
                    .iter()
                    .map(|&el| unit_vector(n, m.position_of(el).unwrap()))
                    .collect();
                (model, StarModel::ElementRay { element: e }, embed)
            }
            RayLabel::ProperFlat(f) => {
                let contraction = m.contraction_by_flat(f).expect("label is a flat");
                let localization = m.localization(f).expect("label is a flat");
                let left = bergman_fan(&contraction);
                let right = augmented_bergman_fan(&localization);
                let embed = product_embedding(m, &contraction, &left, &localization, &right, n);
                let model = Fan::product(&left, &right);
                (model, StarModel::FlatRay { flat: m.elements_of(f) }, embed)
            }
            RayLabel::BergmanFlat(f) => {
                let contraction = m.contraction_by_flat(f).expect("label is a flat");
                let localization = m.localization(f).expect("label is a flat");
                let left = bergman_fan(&contraction);
                let right = bergman_fan(&localization);
                let embed = product_embedding(m, &contraction, &left, &localization, &right, n);
                let model = Fan::product(&left, &right);
                (model, StarModel::BergmanRay { flat: m.elements_of(f) }, embed)
            }
            RayLabel::Unlabeled => {
                return Err(FanError::StarModelMismatch("ray has no model label".into()))
            }
        };
    if model.rays.len() != star.rays.len() {
        return Err(FanError::StarModelMismatch(format!(
            "ray counts differ: star {}, model {}",
            star.rays.len(),
            model.rays.len()
        )));
    }
    let mut model_to_star: HashMap<u32, u32> = HashMap::new();
    let mut pairs = Vec::new();
    for (mi, r) in model.rays.iter().enumerate() {
        let mut ambient_vec = vec![0i64; n];
        for (j, &c) in r.generator.iter().enumerate() {
            for (k, &e) in embed[j].iter().enumerate() {
                ambient_vec[k] += c * e;
            }
        }
        let image = primitive(star.ambient.project(&ambient_vec));
        let Some(si) = star.ray_id(&image) else {
            return Err(FanError::StarModelMismatch(format!(
                "model ray {mi} has no counterpart in the star"
            )));
        };
        model_to_star.insert(mi as u32, si);
        pairs.push((si, mi as u32));
    }
    if pairs.iter().map(|&(s, _)| s).collect::<HashSet<_>>().len() != star.rays.len() {
        return Err(FanError::StarModelMismatch("ray matching is not a bijection".into()));
    }
    if model.cone_count() != star.cone_count() {
        return Err(FanError::StarModelMismatch(format!(
            "cone counts differ: star {}, model {}",
            star.cone_count(),
            model.cone_count()
        )));
    }
    for group in &model.cones_by_dim {
        for c in group {
            let mapped: Vec<u32> = c.rays.iter().map(|r| model_to_star[r]).collect();
            if !star.has_cone(&mapped) {
                return Err(FanError::StarModelMismatch(format!(
                    "model cone {:?} is missing in the star",
                    c.rays
                )));
            }
        }
    }
    pairs.sort_unstable();
    Ok(StarReport { star, model, descriptor, ray_bijection: pairs })
}

fn unit_vector(n: usize, p: usize) -> Vec<i64> {
    let mut v = vec![0i64; n];
    v[p] = 1;
    v
}

/// Embedding of model product coordinates into R^E: left factor first
/// (contraction, on canonical positions of its quotient), then the right
/// factor (localization).
fn product_embedding(
    m: &Arc<Matroid>,
    contraction: &Arc<Matroid>,
    left: &Fan,
    localization: &Arc<Matroid>,
    right: &Fan,
    n: usize,
) -> Vec<Vec<i64>> {
    let mut embed: Vec<Vec<i64>> = Vec::new();
    for &pos in left.ambient.kept_positions() {
        let el = contraction.elements()[pos];
        embed.push(unit_vector(n, m.position_of(el).unwrap()));
    }
    for &pos in right.ambient.kept_positions() {
        let el = localization.elements()[pos];
        embed.push(unit_vector(n, m.position_of(el).unwrap()));
    }
    embed
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b2_fan() -> (Arc<Matroid>, Fan) {
        let m = Matroid::boolean(2).unwrap();
        let f = augmented_bergman_fan(&m);
        (m, f)
    }

    #[test]
    fn augmented_fan_of_b2_matches_known_structure() {
        let (_, f) = b2_fan();
        assert_eq!(f.rays.len(), 5);
        let gens: HashSet<Vec<i64>> = f.rays.iter().map(|r| r.generator.clone()).collect();
        for v in [vec![1, 0], vec![0, 1], vec![-1, -1], vec![0, -1], vec![-1, 0]] {
            assert!(gens.contains(&v), "missing ray {v:?}");
        }
        assert_eq!(f.maximal_cones().len(), 5);
        assert_eq!(f.dim(), 2);
        assert!(f.is_pure());
        assert!(f.check_unimodular());
        assert!(f.check_codim1_connected());
    }

    #[test]
    fn b2_facets_are_the_five_expected_pairs() {
        let (m, f) = b2_fan();
        let mut tags: Vec<(Mask, Vec<Mask>)> = f
            .maximal_cones()
            .iter()
            .map(|c| match &c.tag {
                ConeTag::IndepFlag { indep, flag } => (*indep, flag.clone()),
                _ => panic!("augmented cones must carry pair tags"),
            })
            .collect();
        tags.sort();
        let e1 = m.mask_of(&[1]).unwrap();
        let e2 = m.mask_of(&[2]).unwrap();
        let mut expected = vec![
            (e1 | e2, vec![]),
            (e2, vec![e2]),
            (e1, vec![e1]),
            (0, vec![0, e1]),
            (0, vec![0, e2]),
        ];
        expected.sort();
        assert_eq!(tags, expected);
    }

    #[test]
    fn bergman_fan_of_u23() {
        let m = Matroid::uniform(3, 2).unwrap();
        let f = bergman_fan(&m);
        assert_eq!(f.rays.len(), 3);
        assert_eq!(f.dim(), 1);
        assert_eq!(f.maximal_cones().len(), 3);
        assert!(f.check_codim1_connected());
        assert!(f.check_unimodular());
    }

    #[test]
    fn rank_one_bergman_fan_is_a_point() {
        let m = Matroid::uniform(2, 1).unwrap();
        let f = bergman_fan(&m);
        assert_eq!(f.dim(), 0);
        assert_eq!(f.cone_count(), 1);
        assert!(f.check_unimodular());
        assert!(f.check_codim1_connected());
    }

    #[test]
    fn star_of_empty_flat_ray_is_bergman_fan() {
        let (m, f) = b2_fan();
        let ray = f.ray_by_label(RayLabel::ProperFlat(0)).unwrap();
        let rep = star_of_ray(&m, &f, ray).unwrap();
        let bergman = bergman_fan(&m);
        assert_eq!(rep.star.rays.len(), bergman.rays.len());
        assert_eq!(rep.star.cone_count(), bergman.cone_count());
    }

    #[test]
    fn star_of_element_ray() {
        let (m, f) = b2_fan();
        let ray = f.ray_by_label(RayLabel::Element(1)).unwrap();
        let rep = star_of_ray(&m, &f, ray).unwrap();
        // Model: augmented fan of the rank-1 Boolean matroid on {2}, which
        // has the origin and two opposite rays.
        assert_eq!(rep.star.cone_count(), 3);
        assert!(matches!(rep.descriptor, StarModel::ElementRay { element: 1 }));
    }

    #[test]
    fn star_of_singleton_flat_ray_is_product() {
        let (m, f) = b2_fan();
        let fl = m.mask_of(&[1]).unwrap();
        let ray = f.ray_by_label(RayLabel::ProperFlat(fl)).unwrap();
        let rep = star_of_ray(&m, &f, ray).unwrap();
        assert!(matches!(rep.descriptor, StarModel::FlatRay { .. }));
        assert_eq!(rep.star.cone_count(), 3);
    }

    #[test]
    fn star_assertions_hold_for_every_ray() {
        for m in [
            Matroid::boolean(3).unwrap(),
            Matroid::uniform(3, 2).unwrap(),
            Matroid::uniform(4, 2).unwrap(),
        ] {
            let f = augmented_bergman_fan(&m);
            for r in 0..f.rays.len() as u32 {
                star_of_ray(&m, &f, r).unwrap();
            }
            let bf = bergman_fan(&m);
            for r in 0..bf.rays.len() as u32 {
                star_of_ray(&m, &bf, r).unwrap();
            }
        }
    }

    #[test]
    fn ray_not_in_fan() {
        let (m, f) = b2_fan();
        assert!(matches!(star_of_ray(&m, &f, 99), Err(FanError::RayNotInFan(99))));
    }

    #[test]
    fn balanced_weights_unique_in_top_dimension() {
        let (_, f) = b2_fan();
        let basis = balanced_weight_space(&f, 2);
        assert_eq!(basis.len(), 1);
        assert!(basis[0].is_constant());

        let u = Matroid::uniform(3, 2).unwrap();
        let bf = bergman_fan(&u);
        let basis = balanced_weight_space(&bf, 1);
        assert_eq!(basis.len(), 1);
        assert!(basis[0].is_constant());
    }

    #[test]
    fn toy_line_fan_balancing() {
        let ambient = AmbientLattice::new(1, Vec::new());
        let rays = vec![
            Ray { generator: vec![1], label: RayLabel::Unlabeled },
            Ray { generator: vec![-1], label: RayLabel::Unlabeled },
        ];
        let maximal = vec![
            Cone { rays: vec![0], tag: ConeTag::None },
            Cone { rays: vec![1], tag: ConeTag::None },
        ];
        let f = Fan::from_cones(ambient, rays, maximal);
        let basis = balanced_weight_space(&f, 1);
        assert_eq!(basis.len(), 1);
        assert!(basis[0].is_constant());
    }

    #[test]
    fn quotient_matroid_fans_are_subfans() {
        for m in [Matroid::uniform(3, 2).unwrap(), Matroid::uniform(4, 3).unwrap()] {
            let b = Matroid::boolean(m.ground_size()).unwrap();
            let fm = augmented_bergman_fan(&m);
            let fb = augmented_bergman_fan(&b);
            for group in &fm.cones_by_dim {
                for c in group {
                    let mapped: Vec<u32> = c
                        .rays
                        .iter()
                        .map(|&r| fb.ray_id(&fm.rays[r as usize].generator).unwrap())
                        .collect();
                    assert!(fb.has_cone(&mapped));
                }
            }
            let bm = bergman_fan(&m);
            let bb = bergman_fan(&b);
            for group in &bm.cones_by_dim {
                for c in group {
                    let mapped: Vec<u32> = c
                        .rays
                        .iter()
                        .map(|&r| bb.ray_id(&bm.rays[r as usize].generator).unwrap())
                        .collect();
                    assert!(bb.has_cone(&mapped));
                }
            }
        }
    }

    #[test]
    fn walls_of_complete_fans() {
        let (_, f) = b2_fan();
        let walls = f.walls().unwrap();
        assert_eq!(walls.len(), 5);
        for w in &walls {
            let rel = f.wall_relation(w);
            assert_eq!(rel.len(), w.rays.len());
        }
        let u = Matroid::uniform(3, 2).unwrap();
        assert!(bergman_fan(&u).walls().is_err());
    }
}
