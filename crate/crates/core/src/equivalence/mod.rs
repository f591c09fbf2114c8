//! Lattice and combinatorial equivalence of polytopes.

mod incidence;
mod normal_form;

use std::sync::OnceLock;

use thiserror::Error;

use crate::polytope::Polytope;
use crate::Rational;

pub use incidence::{incidence_canonical_key, IncidenceCanonicalKey};
pub use normal_form::{normal_form, NormalForm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EquivalenceError {
    #[error("lattice normal form needs a lattice polytope")]
    NotLattice,
}

/// Invariants of one polytope, computed once and compared many times.
///
/// Comparison runs from cheap to expensive: dimension, lattice point count,
/// f-vector, normalized volume, incidence key, then the normal form. For
/// reflexive polytopes the normal form is taken on whichever of `P` and its
/// polar has fewer vertices; both sides agree because the polar of a
/// lattice-equivalent reflexive polytope is lattice-equivalent.
#[derive(Debug)]
pub struct LatticeProfile {
    polytope: Polytope,
    n_lattice_points: usize,
    f_vector: Vec<usize>,
    normalized_volume: Rational,
    incidence_key: IncidenceCanonicalKey,
    class_form: OnceLock<(bool, NormalForm)>,
}

impl LatticeProfile {
    pub fn new(p: &Polytope) -> Result<Self, EquivalenceError> {
        if !p.properties().is_lattice {
            return Err(EquivalenceError::NotLattice);
        }
        Ok(Self {
            polytope: p.clone(),
            n_lattice_points: p.n_lattice_points(),
            f_vector: p.f_vector(),
            normalized_volume: p.volume_and_centroid().normalized_volume,
            incidence_key: incidence_canonical_key(p),
            class_form: OnceLock::new(),
        })
    }

    pub fn polytope(&self) -> &Polytope {
        &self.polytope
    }

    pub fn n_lattice_points(&self) -> usize {
        self.n_lattice_points
    }

    pub fn f_vector(&self) -> &[usize] {
        &self.f_vector
    }

    pub fn incidence_key(&self) -> &IncidenceCanonicalKey {
        &self.incidence_key
    }

    /// `(taken_on_polar, form)`.
    pub fn class_form(&self) -> &(bool, NormalForm) {
        self.class_form.get_or_init(|| {
            let p = &self.polytope;
            if p.properties().is_reflexive {
                let dual = p.polar_dual().expect("reflexive polytopes contain the origin");
                if dual.n_vertices() < p.n_vertices() {
                    return (true, normal_form(&dual).expect("polar of a reflexive polytope is lattice"));
                }
            }
            (false, normal_form(p).expect("checked lattice"))
        })
    }

    pub fn is_isomorphic(&self, other: &LatticeProfile) -> bool {
        self.polytope.dim() == other.polytope.dim()
            && self.n_lattice_points == other.n_lattice_points
            && self.f_vector == other.f_vector
            && self.normalized_volume == other.normalized_volume
            && self.incidence_key == other.incidence_key
            && self.class_form() == other.class_form()
    }
}

/// True iff an affine lattice automorphism of `Z^d` maps one vertex set onto the other.
///
/// Polytopes of different dimension, or that are not lattice polytopes, are
/// never isomorphic.
pub fn lattice_isomorphic(p: &Polytope, q: &Polytope) -> bool {
    if p.dim() != q.dim() {
        return false;
    }
    match (LatticeProfile::new(p), LatticeProfile::new(q)) {
        (Ok(a), Ok(b)) => a.is_isomorphic(&b),
        _ => false,
    }
}
