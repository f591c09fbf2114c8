//! Exact convex polytopes in homogeneous coordinates.
//!
//! Vertices are rows `[1, x_1, .., x_d]`. Facets are rows `[b, -A]` meaning
//! `b - <A, x> >= 0`, scaled so that the normal `A` is a primitive integer
//! vector. This is the layout of the published `VERTICES` / `FACETS` fields.

mod faces;
pub(crate) mod hull;
mod lattice;
mod measure;

use fixedbitset::FixedBitSet;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{self, primitive_ray, Int, IntMatrix, Rational};

pub(crate) use lattice::BoxScan;
pub use measure::{EhrhartData, VolumeAndCentroid};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("no points given")]
    Empty,
    #[error("point {index} has dimension {found}, expected {expected}")]
    RaggedInput { index: usize, expected: usize, found: usize },
    #[error("points span an affine space of dimension {rank} < {dim}")]
    NotFullDimensional { rank: usize, dim: usize },
    #[error("origin is not in the interior")]
    OriginNotInterior,
    #[error("polytope is not a lattice polytope")]
    NotLattice,
    #[error("polytope is unbounded")]
    Unbounded,
    #[error("point is not a vertex")]
    NotAVertex,
    #[error("dimension must be positive")]
    ZeroDimension,
}

/// A full-dimensional polytope with both representations and its vertex–facet incidences.
#[derive(Clone, Debug)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vec<Rational>>,
    facets: Vec<Vec<Rational>>,
    /// `incidence[i]` holds the vertices on facet `i`.
    incidence: Vec<FixedBitSet>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PolytopeProperties {
    pub is_full_dimensional: bool,
    pub contains_origin_strictly: bool,
    pub is_lattice: bool,
    pub is_reflexive: bool,
    pub is_simplicial: bool,
    pub is_smooth: bool,
}

fn to_rational_row(row: &[Int]) -> Vec<Rational> {
    row.iter().map(|x| Rational::from_integer(x.clone())).collect()
}

fn dot_rational(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Scales a facet row so that its normal part is a primitive integer vector.
fn normalize_facet(h: &[Rational]) -> Vec<Rational> {
    let normal = primitive_ray(&h[1..]).expect("bounded polytope has no zero normal");
    let idx = normal.iter().position(|x| !x.is_zero()).expect("nonzero");
    let scale = Rational::from_integer(normal[idx].clone()) / &h[idx + 1];
    h.iter().map(|x| x * &scale).collect()
}

impl Polytope {
    /// Convex hull of integer points.
    pub fn from_vertices(points: &[Vec<Int>]) -> Result<Self, PolytopeError> {
        let rational: Vec<Vec<Rational>> = points.iter().map(|p| to_rational_row(p)).collect();
        Self::from_rational_points(&rational)
    }

    pub fn from_i64_vertices(points: &[Vec<i64>]) -> Result<Self, PolytopeError> {
        let ints: Vec<Vec<Int>> = points.iter().map(|p| p.iter().map(|&x| Int::from(x)).collect()).collect();
        Self::from_vertices(&ints)
    }

    /// Convex hull of rational points. Redundant points are dropped.
    pub fn from_rational_points(points: &[Vec<Rational>]) -> Result<Self, PolytopeError> {
        let first = points.first().ok_or(PolytopeError::Empty)?;
        let dim = first.len();
        if dim == 0 {
            return Err(PolytopeError::ZeroDimension);
        }
        if let Some((index, p)) = points.iter().enumerate().find(|(_, p)| p.len() != dim) {
            return Err(PolytopeError::RaggedInput { index, expected: dim, found: p.len() });
        }
        let mut unique: Vec<Vec<Rational>> = Vec::with_capacity(points.len());
        for p in points {
            if !unique.contains(p) {
                unique.push(p.clone());
            }
        }
        let homogeneous: Vec<Vec<Rational>> =
            unique.iter().map(|p| std::iter::once(Rational::one()).chain(p.iter().cloned()).collect()).collect();
        let rows: Vec<Vec<Int>> = homogeneous.iter().map(|h| primitive_ray(h).expect("leading 1")).collect();
        let rays = hull::extreme_rays(&rows, dim + 1).map_err(|hull::ConeError::NotPointed { rank, .. }| {
            PolytopeError::NotFullDimensional { rank: rank.saturating_sub(1), dim }
        })?;

        // point i is a vertex iff no other point lies on a strict superset of its facets
        let n = homogeneous.len();
        let on_facets: Vec<FixedBitSet> = (0..n)
            .map(|i| {
                let mut s = FixedBitSet::with_capacity(rays.len());
                for (f, r) in rays.iter().enumerate() {
                    if r.tight.contains(i) {
                        s.insert(f);
                    }
                }
                s
            })
            .collect();
        let vertices: Vec<Vec<Rational>> = (0..n)
            .filter(|&i| {
                !(0..n).any(|j| j != i && on_facets[i].is_subset(&on_facets[j]) && on_facets[i] != on_facets[j])
            })
            .map(|i| homogeneous[i].clone())
            .collect();
        let facets: Vec<Vec<Rational>> = rays.iter().map(|r| normalize_facet(&to_rational_row(&r.coords))).collect();
        Ok(Self::assemble(dim, vertices, facets))
    }

    /// Builds a polytope from matching V- and H-representations.
    pub(crate) fn assemble(dim: usize, vertices: Vec<Vec<Rational>>, facets: Vec<Vec<Rational>>) -> Self {
        let incidence = facets
            .iter()
            .map(|f| {
                let mut s = FixedBitSet::with_capacity(vertices.len());
                for (j, v) in vertices.iter().enumerate() {
                    if dot_rational(f, v).is_zero() {
                        s.insert(j);
                    }
                }
                s
            })
            .collect();
        Self { dim, vertices, facets, incidence }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Homogeneous vertex rows `[1, x]`.
    pub fn vertices(&self) -> &[Vec<Rational>] {
        &self.vertices
    }

    /// Facet rows `[b, -A]`.
    pub fn facets(&self) -> &[Vec<Rational>] {
        &self.facets
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_facets(&self) -> usize {
        self.facets.len()
    }

    /// Vertex sets of the facets, indexed like [`Polytope::facets`].
    pub fn incidence(&self) -> &[FixedBitSet] {
        &self.incidence
    }

    pub fn facet_contains(&self, facet: usize, vertex: usize) -> bool {
        self.incidence[facet].contains(vertex)
    }

    /// Affine vertex coordinates (the homogenizing 1 dropped).
    pub fn vertex_points(&self) -> Vec<Vec<Rational>> {
        self.vertices.iter().map(|v| v[1..].to_vec()).collect()
    }

    /// Affine integer vertex coordinates, if every vertex is a lattice point.
    pub fn integer_vertices(&self) -> Option<Vec<Vec<Int>>> {
        self.vertices.iter().map(|v| v[1..].iter().map(|x| x.is_integer().then(|| x.to_integer())).collect()).collect()
    }

    /// Homogeneous integer vertex rows, if the polytope is a lattice polytope.
    pub fn homogeneous_integer_vertices(&self) -> Option<Vec<Vec<Int>>> {
        self.vertices.iter().map(|v| v.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect()).collect()
    }

    /// Facet rows as integers, if `b` is integral for every facet.
    pub fn integer_facets(&self) -> Option<Vec<Vec<Int>>> {
        self.facets.iter().map(|f| f.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect()).collect()
    }

    /// Vertex rows sorted lexicographically; a representation-independent view.
    pub fn sorted_vertices(&self) -> Vec<Vec<Rational>> {
        let mut v = self.vertices.clone();
        v.sort();
        v
    }

    pub fn sorted_facets(&self) -> Vec<Vec<Rational>> {
        let mut f = self.facets.clone();
        f.sort();
        f
    }

    pub fn vertex_index(&self, point: &[Rational]) -> Option<usize> {
        self.vertices.iter().position(|v| &v[1..] == point)
    }

    pub fn contains_origin_strictly(&self) -> bool {
        self.facets.iter().all(|f| f[0].is_positive())
    }

    /// The polar polytope `{ y : 1 + <x, y> >= 0 for all x in P }`.
    ///
    /// Its vertices are the facet rows of `self` rescaled to `b = 1`, and its
    /// facets are the vertex rows of `self`; incidence is transposed. Applying
    /// it twice returns the original rows exactly.
    pub fn polar_dual(&self) -> Result<Polytope, PolytopeError> {
        if !self.contains_origin_strictly() {
            return Err(PolytopeError::OriginNotInterior);
        }
        let vertices: Vec<Vec<Rational>> = self
            .facets
            .iter()
            .map(|f| {
                let b = f[0].clone();
                f.iter().map(|x| x / &b).collect()
            })
            .collect();
        let facets: Vec<Vec<Rational>> = self.vertices.iter().map(|v| normalize_facet(v)).collect();
        let mut incidence: Vec<FixedBitSet> =
            (0..facets.len()).map(|_| FixedBitSet::with_capacity(vertices.len())).collect();
        for (i, s) in self.incidence.iter().enumerate() {
            for j in s.ones() {
                incidence[j].insert(i);
            }
        }
        Ok(Polytope { dim: self.dim, vertices, facets, incidence })
    }

    /// Image under `x -> U x`.
    pub fn linear_image(&self, u: &IntMatrix) -> Result<Polytope, PolytopeError> {
        assert_eq!(u.cols(), self.dim, "transform dimension");
        let pts: Vec<Vec<Rational>> = self.vertex_points().iter().map(|p| u.apply_rational(p)).collect();
        Polytope::from_rational_points(&pts)
    }

    /// Translate by an integer vector.
    pub fn translate(&self, t: &[Int]) -> Result<Polytope, PolytopeError> {
        let pts: Vec<Vec<Rational>> = self
            .vertex_points()
            .into_iter()
            .map(|p| p.iter().zip(t).map(|(x, y)| x + Rational::from_integer(y.clone())).collect())
            .collect();
        Polytope::from_rational_points(&pts)
    }

    pub fn properties(&self) -> PolytopeProperties {
        let is_lattice = self.vertices.iter().all(|v| v.iter().all(Rational::is_integer));
        let contains_origin_strictly = self.contains_origin_strictly();
        let is_reflexive = is_lattice && contains_origin_strictly && self.facets.iter().all(|f| f[0].is_one());
        let is_simplicial = self.incidence.iter().all(|s| s.count_ones(..) == self.dim);
        let is_smooth = is_reflexive && is_simplicial && self.facets_unimodular();
        PolytopeProperties {
            is_full_dimensional: true,
            contains_origin_strictly,
            is_lattice,
            is_reflexive,
            is_simplicial,
            is_smooth,
        }
    }

    fn facets_unimodular(&self) -> bool {
        let Some(points) = self.integer_vertices() else {
            return false;
        };
        self.incidence.iter().all(|s| {
            let m: Vec<Vec<Int>> = s.ones().map(|j| points[j].clone()).collect();
            m.len() == self.dim && exact::bareiss_det(m).abs().is_one()
        })
    }

    /// Rows of the facet inequalities cleared of denominators.
    pub(crate) fn integer_inequalities(&self) -> Vec<Vec<Int>> {
        self.facets.iter().map(|f| primitive_ray(f).expect("nonzero facet row")).collect()
    }
}
