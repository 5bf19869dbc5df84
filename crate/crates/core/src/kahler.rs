//! Strictly convex piecewise linear functions on the complete Boolean
//! fans, and exact hard Lefschetz and Hodge-Riemann verification for the
//! Chow rings of a matroid.
//!
//! Strict convexity is certified wall by wall: across each codimension-1
//! cone of a complete simplicial unimodular fan the two opposite rays
//! satisfy u1 + u2 = sum a_v v over the wall rays, and the function must
//! satisfy f(u1) + f(u2) > sum a_v f(v) strictly. The certified function
//! restricts to a degree-1 class of the Chow ring by sending each ray
//! variable to its value and dropping rays whose label is not a flat.
//! Positivity of the Hodge-Riemann forms is decided by exact congruence
//! diagonalization; no numerical linear algebra is involved.

use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::chow::{add_into, ChowError, ChowRing, Element, RingCache, Variant};
use crate::fan::{augmented_bergman_fan, bergman_fan, Fan, FanError, RayLabel};
use crate::linalg::{rat_string, symmetric_inertia, Mat, Rat};
use crate::matroid::{Matroid, MatroidError};

#[derive(Debug, Error)]
pub enum KahlerError {
    #[error("fan error: {0}")]
    Fan(#[from] FanError),
    #[error("function is not certified strictly convex (wall {0:?})")]
    NotCertifiedConvex(Vec<u32>),
    #[error("search for a strictly convex function exhausted the budget of {0} candidates")]
    SearchExhausted(usize),
    #[error("Hodge-Riemann form is degenerate in degree {0}")]
    DegenerateForm(usize),
    #[error("function does not live on the Boolean fan of this ring")]
    FanMismatch,
    #[error("ring error: {0}")]
    Chow(#[from] ChowError),
    #[error("matroid error: {0}")]
    Matroid(#[from] MatroidError),
}

/// A piecewise linear function on a simplicial fan, given by its values
/// on the rays.
#[derive(Clone)]
pub struct PlFunction {
    pub fan: Arc<Fan>,
    pub values: Vec<Rat>,
}

/// A wall where the strict inequality fails, with the slack value.
#[derive(Debug, Clone, Serialize)]
pub struct WallWitness {
    pub wall_rays: Vec<u32>,
    pub facets: [usize; 2],
    pub slack: String,
}

/// Outcome of a strict convexity check.
#[derive(Debug, Clone)]
pub struct ConvexityOutcome {
    pub strict: bool,
    pub witness: Option<WallWitness>,
}

/// Certifies strict convexity across every wall of a complete simplicial
/// fan; the first violated wall is returned as a witness.
pub fn strict_convexity_certificate(pl: &PlFunction) -> Result<ConvexityOutcome, KahlerError> {
    assert_eq!(pl.values.len(), pl.fan.rays.len());
    let walls = pl.fan.walls()?;
    for w in &walls {
        let rel = pl.fan.wall_relation(w);
        let mut slack = &pl.values[w.opposite[0] as usize] + &pl.values[w.opposite[1] as usize];
        for (a, &r) in rel.iter().zip(w.rays.iter()) {
            slack -= a * &pl.values[r as usize];
        }
        if slack <= Rat::zero() {
            return Ok(ConvexityOutcome {
                strict: false,
                witness: Some(WallWitness {
                    wall_rays: w.rays.clone(),
                    facets: w.facets,
                    slack: rat_string(&slack),
                }),
            });
        }
    }
    Ok(ConvexityOutcome { strict: true, witness: None })
}

/// A piecewise linear function that passed the strict convexity
/// certificate.
pub struct Certified {
    pub pl: PlFunction,
}

pub fn certify(pl: PlFunction) -> Result<Certified, KahlerError> {
    let outcome = strict_convexity_certificate(&pl)?;
    if outcome.strict {
        Ok(Certified { pl })
    } else {
        Err(KahlerError::NotCertifiedConvex(outcome.witness.unwrap().wall_rays))
    }
}

/// Budget for the fallback search over small integer ray values.
const SEARCH_BUDGET: usize = 100_000;

/// A certified strictly convex function on a complete Boolean fan.
///
/// The seeds are support functions of explicit polytopes: for the
/// Bergman fan of the Boolean matroid the ray of a subset S takes the
/// value |S| (n - |S|), and for the augmented fan the element rays take
/// 0 while the ray of a subset S takes 2^n - 2^|S|. If a seed failed the
/// certificate the deterministic box search would take over, growing the
/// coordinate bound until the budget is exhausted.
pub fn default_lefschetz(fan: &Arc<Fan>) -> Result<Certified, KahlerError> {
    let values: Vec<Rat> = fan
        .rays
        .iter()
        .map(|r| match r.label {
            RayLabel::BergmanFlat(s) => {
                let k = s.count_ones() as i64;
                let n = fan.ambient.dim as i64;
                Rat::from_integer((k * (n - k)).into())
            }
            RayLabel::ProperFlat(s) => {
                let k = s.count_ones();
                let n = fan.ambient.dim as u32;
                Rat::from_integer(((1i64 << n) - (1i64 << k)).into())
            }
            RayLabel::Element(_) => Rat::zero(),
            RayLabel::Unlabeled => Rat::zero(),
        })
        .collect();
    let seed = PlFunction { fan: Arc::clone(fan), values };
    match certify(seed) {
        Ok(c) => Ok(c),
        Err(KahlerError::NotCertifiedConvex(_)) => search_lefschetz(fan),
        Err(e) => Err(e),
    }
}

/// Deterministic lexicographic search over integer ray values in a
/// growing box.
fn search_lefschetz(fan: &Arc<Fan>) -> Result<Certified, KahlerError> {
    let nrays = fan.rays.len();
    let n = fan.ambient.dim as i64;
    let max_bound = (n * n).max(1);
    let mut tried = 0usize;
    for bound in 1..=max_bound {
        let width = (2 * bound + 1) as usize;
        let mut idx = vec![0usize; nrays];
        loop {
            tried += 1;
            if tried > SEARCH_BUDGET {
                return Err(KahlerError::SearchExhausted(tried - 1));
            }
            let values: Vec<Rat> =
                idx.iter().map(|&i| Rat::from_integer((i as i64 - bound).into())).collect();
            let pl = PlFunction { fan: Arc::clone(fan), values };
            if let Ok(outcome) = strict_convexity_certificate(&pl) {
                if outcome.strict {
                    return Ok(Certified { pl });
                }
            }
            // Advance the lexicographic counter.
            let mut pos = nrays;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < width {
                    break;
                }
                idx[pos] = 0;
                if pos == 0 {
                    break;
                }
            }
            if idx.iter().all(|&i| i == 0) {
                break;
            }
        }
    }
    Err(KahlerError::SearchExhausted(tried))
}

/// The Boolean matroid on the same ordered ground set as the given one.
pub fn boolean_on(m: &Arc<Matroid>) -> Arc<Matroid> {
    Matroid::from_bases(m.elements().to_vec(), vec![m.elements().to_vec()])
        .expect("free matroid is valid")
}

/// The complete Boolean fan matching a ring variant.
pub fn boolean_fan(m: &Arc<Matroid>, variant: Variant) -> Arc<Fan> {
    let b = boolean_on(m);
    Arc::new(match variant {
        Variant::Plain => bergman_fan(&b),
        Variant::Augmented => augmented_bergman_fan(&b),
    })
}

/// Restricts a certified function on the Boolean fan to a degree-1 class
/// of the Chow ring: ray values weight the corresponding variables, and
/// rays of non-flats are dropped.
pub fn lefschetz_element(ring: &Arc<ChowRing>, cert: &Certified) -> Result<Element, KahlerError> {
    let fan = &cert.pl.fan;
    let n = ring.matroid().ground_size();
    if fan.ambient.dim != n {
        return Err(KahlerError::FanMismatch);
    }
    let expect_rays = match ring.variant() {
        Variant::Plain => (1usize << n) - 2,
        Variant::Augmented => n + (1 << n) - 1,
    };
    if fan.rays.len() != expect_rays && n > 0 {
        return Err(KahlerError::FanMismatch);
    }
    let mut ell = ring.zero(1);
    for (r, ray) in fan.rays.iter().enumerate() {
        let c = &cert.pl.values[r];
        if c.is_zero() {
            continue;
        }
        match (ray.label, ring.variant()) {
            (RayLabel::BergmanFlat(s), Variant::Plain) => {
                if let Some(v) = ring.var_id(s) {
                    add_into(&mut ell.coords, &ring.var_element(v).coords, c);
                }
            }
            (RayLabel::ProperFlat(s), Variant::Augmented) => {
                if let Some(v) = ring.var_id(s) {
                    add_into(&mut ell.coords, &ring.var_element(v).coords, c);
                }
            }
            (RayLabel::Element(e), Variant::Augmented) => {
                let y = ring.y_generator(e)?;
                add_into(&mut ell.coords, &y.coords, c);
            }
            _ => return Err(KahlerError::FanMismatch),
        }
    }
    Ok(ell)
}

/// Per-degree verdicts of the Kähler package checks.
#[derive(Debug, Clone, Serialize)]
pub struct KahlerDegreeReport {
    pub k: usize,
    /// The Poincaré pairing between k and top-k is nondegenerate.
    pub poincare: bool,
    /// Multiplication by the appropriate power of the Lefschetz element
    /// is an isomorphism onto the complementary degree.
    pub hard_lefschetz: bool,
    /// The Hodge-Riemann form is positive definite on the primitive part.
    pub hr_primitive_definite: bool,
    /// Signature of the full Hodge-Riemann form.
    pub signature: i64,
    /// Alternating-sum signature predicted from the graded dimensions.
    pub signature_expected: i64,
    pub hodge_riemann: bool,
    pub primitive_dim: usize,
}

/// Full report for one ring and one certified Lefschetz element.
#[derive(Debug, Clone, Serialize)]
pub struct KahlerReport {
    pub matroid: String,
    pub variant: Variant,
    pub ell: Vec<String>,
    pub per_degree: Vec<KahlerDegreeReport>,
    /// Hodge-Riemann implies hard Lefschetz implies Poincaré duality in
    /// every degree of the report.
    pub chain_consistent: bool,
    pub pass: bool,
}

fn signature_formula(ring: &ChowRing, k: usize) -> i64 {
    let dim = |j: i64| -> i64 {
        if j < 0 {
            0
        } else {
            ring.dim(j as usize) as i64
        }
    };
    let mut s = 0i64;
    for j in 0..=k as i64 {
        let sign = if (k as i64 - j) % 2 == 0 { 1 } else { -1 };
        s += sign * (dim(j) - dim(j - 1));
    }
    s
}

fn degree_report(
    ring: &Arc<ChowRing>,
    ell: &Element,
    k: usize,
) -> Result<KahlerDegreeReport, KahlerError> {
    let top = ring.top();
    let e = top - 2 * k;
    let dk = ring.dim(k);
    let pairing = ring.pairing_matrix(k)?;
    let poincare = pairing.rows == pairing.cols && (dk == 0 || !pairing.det().is_zero());

    // Power of the Lefschetz element as a matrix from degree k.
    let mut lpow = Mat::identity(dk);
    for j in 0..e {
        lpow = ring.mult_matrix(ell, k + j).mul(&lpow);
    }
    let square = ring.dim(top - k) == dk;
    let hard_lefschetz = square && (dk == 0 || !lpow.det().is_zero());

    // Hodge-Riemann form on degree k.
    let sign = if k % 2 == 0 { Rat::one() } else { -Rat::one() };
    let mut gram = pairing.mul(&lpow);
    for i in 0..gram.rows {
        for j in 0..gram.cols {
            let v = &gram[(i, j)] * &sign;
            gram[(i, j)] = v;
        }
    }
    assert!(gram.is_symmetric(), "Hodge-Riemann form must be symmetric");

    // Primitive part: kernel of one more power of the element.
    let next = ring.mult_matrix(ell, top - k).mul(&lpow);
    let kernel = next.nullspace();
    let primitive_dim = kernel.cols;
    let restricted = kernel.transpose().mul(&gram).mul(&kernel);
    let prim_inertia = symmetric_inertia(&restricted);
    let hr_primitive_definite = prim_inertia.is_positive_definite();

    let full_inertia = symmetric_inertia(&gram);
    if full_inertia.zero > 0 {
        return Ok(KahlerDegreeReport {
            k,
            poincare,
            hard_lefschetz,
            hr_primitive_definite: false,
            signature: full_inertia.signature(),
            signature_expected: signature_formula(ring, k),
            hodge_riemann: false,
            primitive_dim,
        });
    }
    let signature = full_inertia.signature();
    let signature_expected = signature_formula(ring, k);
    let hodge_riemann = hr_primitive_definite && signature == signature_expected;
    Ok(KahlerDegreeReport {
        k,
        poincare,
        hard_lefschetz,
        hr_primitive_definite,
        signature,
        signature_expected,
        hodge_riemann,
        primitive_dim,
    })
}

/// Hard Lefschetz verdicts for every degree in range.
pub fn hard_lefschetz_check(
    ring: &Arc<ChowRing>,
    cert: &Certified,
) -> Result<Vec<KahlerDegreeReport>, KahlerError> {
    let ell = lefschetz_element(ring, cert)?;
    (0..=ring.top() / 2).map(|k| degree_report(ring, &ell, k)).collect()
}

/// Hodge-Riemann verdicts and signatures for every degree in range.
pub fn hodge_riemann_check(
    ring: &Arc<ChowRing>,
    cert: &Certified,
) -> Result<Vec<KahlerDegreeReport>, KahlerError> {
    hard_lefschetz_check(ring, cert)
}

/// Runs the full package for one matroid and one variant with the default
/// certified Lefschetz element.
pub fn kahler_package(
    cache: &RingCache,
    m: &Arc<Matroid>,
    variant: Variant,
) -> Result<KahlerReport, KahlerError> {
    let ring = cache.ring(m, variant);
    let fan = boolean_fan(m, variant);
    let cert = default_lefschetz(&fan)?;
    let per_degree = hard_lefschetz_check(&ring, &cert)?;
    let chain_consistent = per_degree
        .iter()
        .all(|r| (!r.hodge_riemann || r.hard_lefschetz) && (!r.hard_lefschetz || r.poincare));
    let pass = chain_consistent
        && per_degree.iter().all(|r| r.poincare && r.hard_lefschetz && r.hodge_riemann);
    Ok(KahlerReport {
        matroid: format!("n{}r{}", m.ground_size(), m.rank()),
        variant,
        ell: cert.pl.values.iter().map(rat_string).collect(),
        per_degree,
        chain_consistent,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cache() -> RingCache {
        RingCache::new()
    }

    #[test]
    fn b2_plain_certificate() {
        let b2 = Matroid::boolean(2).unwrap();
        let fan = Arc::new(bergman_fan(&b2));
        let pl = PlFunction { fan: Arc::clone(&fan), values: vec![Rat::one(), Rat::one()] };
        assert!(strict_convexity_certificate(&pl).unwrap().strict);
        // A globally linear function is convex but not strictly.
        let lin = PlFunction { fan, values: vec![Rat::one(), -Rat::one()] };
        let outcome = strict_convexity_certificate(&lin).unwrap();
        assert!(!outcome.strict);
        assert!(outcome.witness.is_some());
    }

    #[test]
    fn default_seeds_certify() {
        for n in 1..=4 {
            let b = Matroid::boolean(n).unwrap();
            let bf = Arc::new(bergman_fan(&b));
            let c = default_lefschetz(&bf).unwrap();
            if n == 2 {
                assert_eq!(c.pl.values, vec![Rat::one(), Rat::one()]);
            }
            if n == 3 {
                let two = Rat::from_integer(2.into());
                assert!(c.pl.values.iter().all(|v| *v == two));
            }
            let af = Arc::new(augmented_bergman_fan(&b));
            default_lefschetz(&af).unwrap();
        }
    }

    #[test]
    fn incomplete_fan_rejected() {
        let u = Matroid::uniform(3, 2).unwrap();
        let fan = Arc::new(bergman_fan(&u));
        let pl = PlFunction { fan, values: vec![Rat::one(); 3] };
        assert!(matches!(
            strict_convexity_certificate(&pl),
            Err(KahlerError::Fan(FanError::FanNotComplete(_)))
        ));
    }

    #[test]
    fn linear_shift_preserves_certificate() {
        let b3 = Matroid::boolean(3).unwrap();
        let fan = Arc::new(bergman_fan(&b3));
        let cert = default_lefschetz(&fan).unwrap();
        // Add an integer linear functional evaluated on the rays.
        let lambda = [3i64, -2, 5];
        let shifted: Vec<Rat> = fan
            .rays
            .iter()
            .zip(cert.pl.values.iter())
            .map(|(r, v)| {
                let lift = fan.ambient.lift(&r.generator);
                let dot: i64 = lift.iter().zip(lambda.iter()).map(|(a, b)| a * b).sum();
                v + Rat::from_integer(dot.into())
            })
            .collect();
        let pl = PlFunction { fan: Arc::clone(&fan), values: shifted };
        assert!(strict_convexity_certificate(&pl).unwrap().strict);
    }

    #[test]
    fn hl_example_on_b2_plain() {
        let c = cache();
        let b2 = Matroid::boolean(2).unwrap();
        let ring = c.ring(&b2, Variant::Plain);
        let fan = boolean_fan(&b2, Variant::Plain);
        let cert = default_lefschetz(&fan).unwrap();
        let ell = lefschetz_element(&ring, &cert).unwrap();
        // ell = x_{1} + x_{2} = 2 x_{1}: the map from degree 0 is [2].
        let m = ring.mult_matrix(&ell, 0);
        assert_eq!(m[(0, 0)], Rat::from_integer(2.into()));
        let reports = hard_lefschetz_check(&ring, &cert).unwrap();
        assert!(reports.iter().all(|r| r.hard_lefschetz && r.hodge_riemann));
    }

    #[test]
    fn hr_signature_on_b3_plain() {
        let c = cache();
        let b3 = Matroid::boolean(3).unwrap();
        let rep = kahler_package(&c, &b3, Variant::Plain).unwrap();
        assert!(rep.pass);
        let k1 = rep.per_degree.iter().find(|r| r.k == 1).unwrap();
        // Signature of the degree-1 form: 3 positive, 1 negative.
        assert_eq!(k1.signature, 2);
        assert_eq!(k1.signature_expected, 2);
        assert_eq!(k1.primitive_dim, 3);
        // Exponent 0 in degree 1: the map is the identity.
        assert!(k1.hard_lefschetz);
    }

    #[test]
    fn package_on_small_matroids() {
        let c = cache();
        for m in [
            Matroid::boolean(1).unwrap(),
            Matroid::boolean(2).unwrap(),
            Matroid::uniform(3, 2).unwrap(),
        ] {
            for variant in [Variant::Plain, Variant::Augmented] {
                let rep = kahler_package(&c, &m, variant).unwrap();
                assert!(rep.pass, "package fails for {:?} {:?}", m.elements(), variant);
            }
        }
    }

    #[test]
    fn scaling_invariance() {
        let c = cache();
        let b3 = Matroid::boolean(3).unwrap();
        let ring = c.ring(&b3, Variant::Plain);
        let fan = boolean_fan(&b3, Variant::Plain);
        let cert = default_lefschetz(&fan).unwrap();
        let doubled = PlFunction {
            fan: Arc::clone(&cert.pl.fan),
            values: cert.pl.values.iter().map(|v| v * Rat::from_integer(2.into())).collect(),
        };
        let cert2 = certify(doubled).unwrap();
        let a = hard_lefschetz_check(&ring, &cert).unwrap();
        let b = hard_lefschetz_check(&ring, &cert2).unwrap();
        for (x, y) in a.iter().zip(b.iter()) {
            assert_eq!(x.hard_lefschetz, y.hard_lefschetz);
            assert_eq!(x.hodge_riemann, y.hodge_riemann);
            assert_eq!(x.signature, y.signature);
        }
    }
}
