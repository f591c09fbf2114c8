//! Products, free sums, the smooth Fano simplex, skew bipyramids and
//! generalized simplex sums.
//!
//! Everything here works with polytopes in the Fano convention (vertices are
//! the primitive ray generators); the database stores the polars.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::equivalence::incidence_canonical_key;
use crate::exact::{Int, Rational};
use crate::polytope::hull::{extreme_rays, ConeError};
use crate::polytope::{Polytope, PolytopeError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error("the origin must be an interior point of both factors")]
    OriginNotInterior,
    #[error("{0:?} is not a vertex")]
    NotAVertex(Vec<Int>),
    #[error("simplex dimension must be at least 1")]
    ZeroDimension,
    #[error("the region for the shifted vertex is unbounded")]
    UnboundedRegion,
    #[error("shifted vertex {0:?} must differ from e_(a+b) only in the first a coordinates")]
    BadShift(Vec<Int>),
    #[error("simplex sum with shifted vertex {0:?} keeps the combinatorial type but is not smooth Fano")]
    NotSmooth(Vec<Int>),
}

fn rational(x: i64) -> Rational {
    Rational::from_integer(Int::from(x))
}

fn zeros(n: usize) -> Vec<Rational> {
    vec![Rational::zero(); n]
}

/// Cartesian product; facets are the two factors' facets embedded side by side.
pub fn product(p: &Polytope, q: &Polytope) -> Polytope {
    let (a, b) = (p.dim(), q.dim());
    let mut vertices = Vec::with_capacity(p.n_vertices() * q.n_vertices());
    for v in p.vertices() {
        for w in q.vertices() {
            vertices.push(v.iter().chain(&w[1..]).cloned().collect());
        }
    }
    let facets = p
        .facets()
        .iter()
        .map(|f| f.iter().cloned().chain(zeros(b)).collect())
        .chain(
            q.facets()
                .iter()
                .map(|f| std::iter::once(f[0].clone()).chain(zeros(a)).chain(f[1..].iter().cloned()).collect()),
        )
        .collect();
    Polytope::assemble(a + b, vertices, facets)
}

/// `conv((P × 0) ∪ (0 × Q))`.
pub fn free_sum(p: &Polytope, q: &Polytope) -> Result<Polytope, ConstructionError> {
    if !p.contains_origin_strictly() || !q.contains_origin_strictly() {
        return Err(ConstructionError::OriginNotInterior);
    }
    let (a, b) = (p.dim(), q.dim());
    let points: Vec<Vec<Rational>> = p
        .vertex_points()
        .into_iter()
        .map(|v| v.into_iter().chain(zeros(b)).collect())
        .chain(q.vertex_points().into_iter().map(|w| zeros(a).into_iter().chain(w).collect()))
        .collect();
    Ok(Polytope::from_rational_points(&points)?)
}

/// `conv(e_1, .., e_b, -(e_1 + .. + e_b))`.
pub fn fano_simplex(b: usize) -> Result<Polytope, ConstructionError> {
    if b == 0 {
        return Err(ConstructionError::ZeroDimension);
    }
    let mut points: Vec<Vec<Rational>> = (0..b).map(|i| (0..b).map(|j| rational((i == j) as i64)).collect()).collect();
    points.push(vec![rational(-1); b]);
    Ok(Polytope::from_rational_points(&points)?)
}

/// `sbip(P, v) = conv(P × {0} ∪ {-e_(d+1), v + e_(d+1)})`.
pub fn skew_bipyramid(p: &Polytope, v: &[Int]) -> Result<Polytope, ConstructionError> {
    let vr: Vec<Rational> = v.iter().map(|x| Rational::from_integer(x.clone())).collect();
    if p.vertex_index(&vr).is_none() {
        return Err(ConstructionError::NotAVertex(v.to_vec()));
    }
    let d = p.dim();
    let mut points: Vec<Vec<Rational>> = p
        .vertex_points()
        .into_iter()
        .map(|w| w.into_iter().chain(std::iter::once(Rational::zero())).collect())
        .collect();
    let mut bottom = zeros(d + 1);
    bottom[d] = rational(-1);
    points.push(bottom);
    points.push(vr.into_iter().chain(std::iter::once(Rational::one())).collect());
    Ok(Polytope::from_rational_points(&points)?)
}

/// A free sum `P ⊕ Δ_b` with the simplex vertex `e_(a+b)` moved to `shifted_vertex`.
#[derive(Clone, Debug)]
pub struct SimplexSumSpec {
    pub base: Polytope,
    pub simplex_dim: usize,
    /// Full `(a+b)`-vector; the last `b` entries are those of `e_(a+b)`.
    pub shifted_vertex: Vec<Int>,
}

impl SimplexSumSpec {
    pub fn realize(&self) -> Result<Polytope, ConstructionError> {
        let a = self.base.dim();
        let b = self.simplex_dim;
        let ok = self.shifted_vertex.len() == a + b
            && self.shifted_vertex[a..a + b - 1].iter().all(Zero::is_zero)
            && self.shifted_vertex[a + b - 1].is_one();
        if !ok {
            return Err(ConstructionError::BadShift(self.shifted_vertex.clone()));
        }
        let sum = free_sum(&self.base, &fano_simplex(b)?)?;
        Ok(replace_apex(&sum, &self.shifted_vertex)?)
    }
}

/// The candidate region's lattice points and the resulting polytope.
#[derive(Clone, Debug)]
pub struct SimplexSum {
    pub shifted_vertex: Vec<Int>,
    pub polytope: Polytope,
}

fn apex(dim: usize) -> Vec<Rational> {
    let mut v = zeros(dim);
    v[dim - 1] = Rational::one();
    v
}

fn replace_apex(sum: &Polytope, shifted: &[Int]) -> Result<Polytope, PolytopeError> {
    let top = apex(sum.dim());
    let mut points: Vec<Vec<Rational>> = sum.vertex_points().into_iter().filter(|w| *w != top).collect();
    points.push(shifted.iter().map(|x| Rational::from_integer(x.clone())).collect());
    Polytope::from_rational_points(&points)
}

/// All generalized simplex sums of `p` with the `b`-dimensional smooth Fano simplex.
///
/// The shifted vertex `v' = (x, e_b)` ranges over lattice points `x` that
/// satisfy every facet inequality of `R = P ⊕ Δ_b` not containing `e_(a+b)`,
/// restricted to the hyperplane through `e_(a+b)` parallel to `R^a`.
/// Candidates that change the combinatorial type are dropped; the survivors
/// (including `R` itself, at `x = 0`) must be smooth Fano.
pub fn simplex_sum_candidates(p: &Polytope, b: usize) -> Result<Vec<SimplexSum>, ConstructionError> {
    let a = p.dim();
    let sum = free_sum(p, &fano_simplex(b)?)?;
    let n = a + b;
    let top = sum.vertex_index(&apex(n)).expect("apex is a vertex of the free sum");

    let region: Vec<Vec<Int>> = sum
        .integer_inequalities()
        .into_iter()
        .zip(sum.incidence())
        .filter(|(_, on)| !on.contains(top))
        .map(|(h, _)| {
            let mut row = Vec::with_capacity(a + 1);
            row.push(&h[0] + &h[n]);
            row.extend_from_slice(&h[1..=a]);
            row
        })
        .collect();

    let (lo, hi) = region_box(&region, a)?;
    let key = incidence_canonical_key(&sum);
    let mut out = Vec::new();
    let mut failure = None;
    crate::polytope::BoxScan::new(&region, lo, hi, false).for_each(|x| {
        if failure.is_some() {
            return;
        }
        let mut shifted: Vec<Int> = x.to_vec();
        shifted.extend((0..b).map(|i| Int::from((i + 1 == b) as i64)));
        let candidate = match replace_apex(&sum, &shifted) {
            Ok(c) => c,
            Err(e) => {
                failure = Some(ConstructionError::Polytope(e));
                return;
            }
        };
        if candidate.n_vertices() != sum.n_vertices() || incidence_canonical_key(&candidate) != key {
            return;
        }
        if !candidate.properties().is_smooth {
            failure = Some(ConstructionError::NotSmooth(shifted));
            return;
        }
        out.push(SimplexSum { shifted_vertex: shifted, polytope: candidate });
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Integer bounding box of `{ x : r_0 + <r', x> >= 0 }`, proving boundedness first.
fn region_box(rows: &[Vec<Int>], dim: usize) -> Result<(Vec<Int>, Vec<Int>), ConstructionError> {
    let mut constraints = rows.to_vec();
    let mut t_nonneg = vec![Int::zero(); dim + 1];
    t_nonneg[0] = Int::one();
    constraints.push(t_nonneg);
    let rays = extreme_rays(&constraints, dim + 1)
        .map_err(|ConeError::NotPointed { .. }| ConstructionError::UnboundedRegion)?;
    if rays.iter().any(|r| r.coords[0].is_zero()) {
        return Err(ConstructionError::UnboundedRegion);
    }
    let points: Vec<Vec<Rational>> = rays
        .iter()
        .filter(|r| r.coords[0].is_positive())
        .map(|r| r.coords[1..].iter().map(|x| Rational::new(x.clone(), r.coords[0].clone())).collect())
        .collect();
    let mut lo = Vec::with_capacity(dim);
    let mut hi = Vec::with_capacity(dim);
    for i in 0..dim {
        let min = points.iter().map(|p| &p[i]).min().expect("nonempty region");
        let max = points.iter().map(|p| &p[i]).max().expect("nonempty region");
        lo.push(min.ceil().to_integer());
        hi.push(max.floor().to_integer());
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivalence::lattice_isomorphic;
    use crate::exact::rat;

    fn poly(v: &[Vec<i64>]) -> Polytope {
        Polytope::from_i64_vertices(v).unwrap()
    }

    fn segment() -> Polytope {
        poly(&[vec![-1], vec![1]])
    }

    fn hexagon() -> Polytope {
        poly(&[vec![1, 0], vec![0, 1], vec![-1, 1], vec![-1, 0], vec![0, -1], vec![1, -1]])
    }

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn products() {
        let sq = product(&segment(), &segment());
        assert_eq!((sq.n_vertices(), sq.n_facets()), (4, 4));
        assert_eq!(sq.sorted_vertices(), poly(&[vec![1, 1], vec![-1, 1], vec![-1, -1], vec![1, -1]]).sorted_vertices());
        let pent = poly(&[vec![-1, -1], vec![-1, 1], vec![0, 1], vec![1, 0], vec![1, -1]]);
        let prism = product(&pent, &segment());
        assert_eq!((prism.n_vertices(), prism.n_facets()), (10, 7));
        assert_eq!(prism.f_vector(), vec![10, 15, 7]);
    }

    #[test]
    fn free_sums() {
        let cross = free_sum(&segment(), &segment()).unwrap();
        assert_eq!(
            cross.sorted_vertices(),
            poly(&[vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]]).sorted_vertices()
        );
        let bip = free_sum(&hexagon(), &segment()).unwrap();
        assert_eq!((bip.n_vertices(), bip.n_facets()), (8, 12));
        assert!(bip.properties().is_smooth);
        let off = poly(&[vec![0], vec![1]]);
        assert_eq!(free_sum(&off, &segment()).unwrap_err(), ConstructionError::OriginNotInterior);
    }

    #[test]
    fn free_sum_is_dual_of_product_of_duals() {
        let a = hexagon();
        let b = segment();
        let direct = free_sum(&a, &b).unwrap();
        let via_dual = product(&a.polar_dual().unwrap(), &b.polar_dual().unwrap()).polar_dual().unwrap();
        assert_eq!(direct.sorted_vertices(), via_dual.sorted_vertices());
        assert_eq!(direct.sorted_facets(), via_dual.sorted_facets());
    }

    #[test]
    fn simplices() {
        let p3 = fano_simplex(2).unwrap();
        assert_eq!(p3.sorted_vertices(), poly(&[vec![1, 0], vec![0, 1], vec![-1, -1]]).sorted_vertices());
        assert_eq!(fano_simplex(1).unwrap().sorted_vertices(), segment().sorted_vertices());
        let s3 = fano_simplex(3).unwrap();
        assert_eq!((s3.n_vertices(), s3.n_facets()), (4, 4));
        assert!(s3.properties().is_smooth);
        assert_eq!(fano_simplex(0).unwrap_err(), ConstructionError::ZeroDimension);
    }

    #[test]
    fn skew_bipyramids() {
        let s = skew_bipyramid(&segment(), &ints(&[1])).unwrap();
        assert_eq!(s.sorted_vertices(), poly(&[vec![1, 0], vec![-1, 0], vec![0, -1], vec![1, 1]]).sorted_vertices());
        let p4b = poly(&[vec![1, 0], vec![0, 1], vec![-1, 0], vec![1, -1]]);
        assert!(lattice_isomorphic(&s, &p4b));
        assert!(s.properties().is_smooth);

        let hb = skew_bipyramid(&hexagon(), &ints(&[1, 0])).unwrap();
        assert!(hb.properties().is_smooth);
        assert!(hb.vertex_index(&[rat(1), rat(0), rat(1)]).is_some());
        assert_eq!(hb.n_vertices(), 8);
        assert!(!lattice_isomorphic(&hb, &free_sum(&hexagon(), &segment()).unwrap()));

        assert_eq!(skew_bipyramid(&segment(), &ints(&[0])).unwrap_err(), ConstructionError::NotAVertex(ints(&[0])));
    }

    #[test]
    fn simplex_sums_over_a_segment() {
        let cands = simplex_sum_candidates(&segment(), 1).unwrap();
        let shifts: Vec<Vec<Int>> = cands.iter().map(|c| c.shifted_vertex.clone()).collect();
        assert_eq!(shifts, vec![ints(&[-1, 1]), ints(&[0, 1]), ints(&[1, 1])]);
        let cross = poly(&[vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]]);
        let p4b = poly(&[vec![1, 0], vec![0, 1], vec![-1, 0], vec![1, -1]]);
        assert!(lattice_isomorphic(&cands[1].polytope, &cross));
        assert!(lattice_isomorphic(&cands[0].polytope, &p4b));
        assert!(lattice_isomorphic(&cands[2].polytope, &p4b));

        let tri = simplex_sum_candidates(&segment(), 2).unwrap();
        let segment_sum = poly(&[vec![1, 0, 0], vec![-1, 0, 0], vec![0, 1, 1], vec![0, -1, 0], vec![0, 0, -1]]);
        let shifted_sum = poly(&[vec![1, 0, 0], vec![-1, 0, 0], vec![1, 1, 1], vec![0, -1, 0], vec![0, 0, -1]]);
        assert!(tri.iter().any(|c| lattice_isomorphic(&c.polytope, &segment_sum)));
        assert!(tri.iter().any(|c| lattice_isomorphic(&c.polytope, &shifted_sum)));
        let r = free_sum(&segment(), &fano_simplex(2).unwrap()).unwrap();
        for c in &tri {
            assert_eq!(c.polytope.f_vector(), r.f_vector());
            assert!(c.polytope.properties().is_smooth);
        }
    }

    #[test]
    fn spec_realization_checks_the_shift() {
        let spec = SimplexSumSpec { base: segment(), simplex_dim: 2, shifted_vertex: ints(&[1, 0, 1]) };
        let p = spec.realize().unwrap();
        assert!(p.properties().is_smooth);
        let bad = SimplexSumSpec { base: segment(), simplex_dim: 2, shifted_vertex: ints(&[1, 1, 1]) };
        assert!(matches!(bad.realize(), Err(ConstructionError::BadShift(_))));
    }
}
