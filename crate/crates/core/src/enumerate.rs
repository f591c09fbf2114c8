//! Classification of smooth Fano polytopes in small dimension by facet growing.
//!
//! Every smooth Fano polytope has a facet whose vertices form a lattice
//! basis, so up to lattice equivalence `conv(e_1, .., e_d)` is a facet and all
//! other vertices have coordinate sum `<= 0`. Starting from that facet, the
//! search repeatedly picks an open ridge and tries every vertex that could
//! close it with a new unimodular facet. The search runs in `i64`; every
//! result is rebuilt as an exact [`Polytope`] and checked before it is kept.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use thiserror::Error;

use crate::equivalence::{normal_form, NormalForm};
use crate::polytope::Polytope;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumerateError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("coordinate bound must be at least 1")]
    ZeroBound,
}

/// Classes found, in normal-form order, plus search statistics.
#[derive(Debug)]
pub struct EnumerationReport {
    pub dim: usize,
    pub bound: i64,
    pub polytopes: Vec<Polytope>,
    pub normal_forms: Vec<NormalForm>,
    /// Leaves that closed up as a sphere.
    pub closed: usize,
    /// Branches cut because a new vertex would exceed `3d` vertices.
    pub cap_hits: usize,
    /// Closed complexes that failed the exact smoothness check.
    pub rejected: usize,
}

/// All smooth Fano `d`-polytopes, up to lattice equivalence, having a
/// realization with `conv(e_1, .., e_d)` as a facet and coordinates in `[-bound, bound]`.
pub fn enumerate_smooth_fano(d: usize, bound: i64) -> Result<EnumerationReport, EnumerateError> {
    if d == 0 {
        return Err(EnumerateError::ZeroDimension);
    }
    if bound < 1 {
        return Err(EnumerateError::ZeroBound);
    }
    let pool = vertex_pool(d, bound);
    let start = State::initial(d);
    let ridge = start.open_ridge().expect("the initial facet has open ridges");
    let branches = start.candidates(&pool);

    let results: Vec<Outcome> = branches
        .into_par_iter()
        .map(|w| {
            let mut out = Outcome::default();
            start.try_branch(&ridge, &w, &pool, &mut out);
            out
        })
        .collect();

    let mut closed = 0;
    let mut cap_hits = 0;
    let mut leaves: BTreeSet<Vec<Vec<i64>>> = BTreeSet::new();
    for r in results {
        closed += r.closed;
        cap_hits += r.cap_hits;
        leaves.extend(r.leaves);
    }

    let mut rejected = 0;
    let mut classes: BTreeMap<NormalForm, Polytope> = BTreeMap::new();
    for vertices in leaves {
        let p = match Polytope::from_i64_vertices(&vertices) {
            Ok(p) => p,
            Err(_) => {
                rejected += 1;
                continue;
            }
        };
        if p.n_vertices() != vertices.len() || !p.properties().is_smooth {
            rejected += 1;
            continue;
        }
        let nf = normal_form(&p).expect("smooth Fano polytopes are lattice polytopes");
        classes.entry(nf).or_insert(p);
    }
    let (normal_forms, polytopes) = classes.into_iter().unzip();
    Ok(EnumerationReport { dim: d, bound, polytopes, normal_forms, closed, cap_hits, rejected })
}

fn vertex_pool(d: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut pool = Vec::new();
    let mut x = vec![-bound; d];
    loop {
        if x.iter().sum::<i64>() <= 0 && gcd_all(&x) == 1 {
            pool.push(x.clone());
        }
        let mut i = 0;
        loop {
            if i == d {
                return pool;
            }
            if x[i] < bound {
                x[i] += 1;
                break;
            }
            x[i] = -bound;
            i += 1;
        }
    }
}

fn gcd_all(x: &[i64]) -> i64 {
    x.iter().fold(0i64, |g, &v| num_integer::gcd(g, v))
}

fn det(rows: &[&[i64]]) -> i64 {
    let n = rows.len();
    if n == 0 {
        return 1;
    }
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    (sign * m[n - 1][n - 1]) as i64
}

/// Integer `n` with `<n, v> = 1` for each row `v` of a unimodular matrix.
fn facet_normal(rows: &[&[i64]], det_value: i64) -> Vec<i64> {
    let d = rows.len();
    let ones = vec![1i64; d];
    (0..d)
        .map(|k| {
            // Cramer on the transposed system
            let cols: Vec<Vec<i64>> = rows
                .iter()
                .zip(&ones)
                .map(|(r, &o)| {
                    let mut r = r.to_vec();
                    r[k] = o;
                    r
                })
                .collect();
            let refs: Vec<&[i64]> = cols.iter().map(Vec::as_slice).collect();
            det(&refs) / det_value
        })
        .collect()
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Default)]
struct Outcome {
    leaves: Vec<Vec<Vec<i64>>>,
    closed: usize,
    cap_hits: usize,
}

#[derive(Clone)]
struct Facet {
    vertices: Vec<usize>,
    normal: Vec<i64>,
}

#[derive(Clone)]
struct State {
    vertices: Vec<Vec<i64>>,
    facets: Vec<Facet>,
    /// ridge (sorted vertex ids) -> incident facet count
    ridges: BTreeMap<Vec<usize>, u8>,
}

fn ridges_of(facet: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0..facet.len()).map(move |skip| facet.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect())
}

impl State {
    fn initial(d: usize) -> Self {
        let vertices: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| (i == j) as i64).collect()).collect();
        let mut s = State { vertices, facets: Vec::new(), ridges: BTreeMap::new() };
        s.add_facet((0..d).collect(), vec![1; d]);
        s
    }

    fn add_facet(&mut self, mut vertices: Vec<usize>, normal: Vec<i64>) {
        vertices.sort_unstable();
        for r in ridges_of(&vertices) {
            *self.ridges.entry(r).or_insert(0) += 1;
        }
        self.facets.push(Facet { vertices, normal });
    }

    fn open_ridge(&self) -> Option<Vec<usize>> {
        self.ridges.iter().find(|(_, &c)| c == 1).map(|(r, _)| r.clone())
    }

    fn index_of(&self, w: &[i64]) -> Option<usize> {
        self.vertices.iter().position(|v| v == w)
    }

    /// Existing vertices first, then new pool vertices strictly below every facet.
    fn candidates(&self, pool: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<i64>> = self.vertices.clone();
        out.extend(
            pool.iter()
                .filter(|w| self.index_of(w).is_none())
                .filter(|w| self.facets.iter().all(|f| dot(&f.normal, w) < 1))
                .cloned(),
        );
        out
    }

    /// Closes `ridge` with a new facet through `w`, or `None` if that is impossible.
    fn extend(&self, ridge: &[usize], w: &[i64]) -> Option<State> {
        let existing = self.index_of(w);
        if existing.is_some_and(|i| ridge.contains(&i)) {
            return None;
        }
        let owner = self
            .facets
            .iter()
            .find(|f| ridge.iter().all(|r| f.vertices.contains(r)))
            .expect("open ridge lies in a facet");
        if existing.is_some_and(|i| owner.vertices.contains(&i)) {
            return None;
        }
        let mut rows: Vec<&[i64]> = ridge.iter().map(|&i| self.vertices[i].as_slice()).collect();
        rows.push(w);
        let dv = det(&rows);
        if dv.abs() != 1 {
            return None;
        }
        let normal = facet_normal(&rows, dv);
        let w_index = existing.unwrap_or(self.vertices.len());
        let mut new_facet: Vec<usize> = ridge.to_vec();
        new_facet.push(w_index);
        for (i, v) in self.vertices.iter().enumerate() {
            if !new_facet.contains(&i) && dot(&normal, v) >= 1 {
                return None;
            }
        }
        new_facet.sort_unstable();
        for r in ridges_of(&new_facet) {
            if self.ridges.get(&r).copied().unwrap_or(0) >= 2 {
                return None;
            }
        }
        let mut next = self.clone();
        if existing.is_none() {
            next.vertices.push(w.to_vec());
        }
        next.add_facet(new_facet, normal);
        Some(next)
    }

    fn search(&self, pool: &[Vec<i64>], out: &mut Outcome) {
        let Some(ridge) = self.open_ridge() else {
            out.closed += 1;
            let mut vs = self.vertices.clone();
            vs.sort();
            out.leaves.push(vs);
            return;
        };
        for w in self.candidates(pool) {
            self.try_branch(&ridge, &w, pool, out);
        }
    }

    fn try_branch(&self, ridge: &[usize], w: &[i64], pool: &[Vec<i64>], out: &mut Outcome) {
        let d = self.vertices[0].len();
        if self.index_of(w).is_none() && self.vertices.len() + 1 > 3 * d {
            out.cap_hits += 1;
            return;
        }
        if let Some(next) = self.extend(ridge, w) {
            next.search(pool, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_determinants() {
        assert_eq!(det(&[&[-1, -1], &[1, -1]]), 2);
        assert_eq!(det(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]), -1);
        assert_eq!(det(&[&[1, 2], &[2, 4]]), 0);
        let rows: [&[i64]; 2] = [&[1, 0], &[-1, -1]];
        let n = facet_normal(&rows, det(&rows));
        assert_eq!(n, vec![1, -2]);
    }

    #[test]
    fn pool_excludes_the_base_facet() {
        let pool = vertex_pool(2, 1);
        assert!(!pool.contains(&vec![1, 0]));
        assert!(pool.contains(&vec![-1, 1]));
        assert!(!pool.contains(&vec![0, 0]));
        assert_eq!(pool.len(), 5);
    }

    #[test]
    fn dimension_one_is_the_segment() {
        let r = enumerate_smooth_fano(1, 2).unwrap();
        assert_eq!(r.polytopes.len(), 1);
        assert_eq!(r.polytopes[0].n_vertices(), 2);
    }

    #[test]
    fn five_polygons() {
        let r = enumerate_smooth_fano(2, 2).unwrap();
        assert_eq!(r.polytopes.len(), 5);
        let mut nv: Vec<usize> = r.polytopes.iter().map(Polytope::n_vertices).collect();
        nv.sort_unstable();
        assert_eq!(nv, vec![3, 4, 4, 5, 6]);
        assert_eq!(r.rejected, 0);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert_eq!(enumerate_smooth_fano(0, 2).unwrap_err(), EnumerateError::ZeroDimension);
        assert_eq!(enumerate_smooth_fano(2, 0).unwrap_err(), EnumerateError::ZeroBound);
    }
}
