//! Exact double description for pointed polyhedral cones.
//!
//! [`extreme_rays`] takes constraint rows `a_i` and returns the extreme rays
//! of `{ y : a_i · y >= 0 }`. Feeding homogenized points `[1, x]` yields facet
//! rows `[b, -A]`; feeding homogenized inequalities plus `[1, 0, .., 0]`
//! yields vertices (`t > 0`) and recession directions (`t = 0`).

use fixedbitset::FixedBitSet;
use num_traits::{Signed, Zero};

use crate::exact::{primitive_ray, rank, solve_rational, Int, Rational};

#[derive(Clone, Debug)]
pub(crate) struct Ray {
    pub coords: Vec<Int>,
    /// Constraints (by input index) that vanish on this ray.
    pub tight: FixedBitSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum ConeError {
    /// The constraint rows do not have full column rank.
    NotPointed { rank: usize, dim: usize },
}

fn dot(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).fold(Int::zero(), |acc, (x, y)| acc + x * y)
}

pub(crate) fn extreme_rays(constraints: &[Vec<Int>], dim: usize) -> Result<Vec<Ray>, ConeError> {
    let m = constraints.len();

    let mut basis: Vec<usize> = Vec::with_capacity(dim);
    let mut chosen: Vec<Vec<Int>> = Vec::with_capacity(dim);
    for (i, row) in constraints.iter().enumerate() {
        if basis.len() == dim {
            break;
        }
        chosen.push(row.clone());
        if rank(&chosen) == chosen.len() {
            basis.push(i);
        } else {
            chosen.pop();
        }
    }
    if basis.len() < dim {
        return Err(ConeError::NotPointed { rank: basis.len(), dim });
    }

    let b_rat: Vec<Vec<Rational>> =
        chosen.iter().map(|row| row.iter().map(|x| Rational::from_integer(x.clone())).collect()).collect();
    let mut rays: Vec<Ray> = (0..dim)
        .map(|j| {
            let e: Vec<Rational> = (0..dim).map(|i| Rational::from_integer(Int::from((i == j) as i64))).collect();
            let sol = solve_rational(&b_rat, &e).expect("independent rows");
            let coords = primitive_ray(&sol).expect("nonzero ray");
            let mut tight = FixedBitSet::with_capacity(m);
            for (k, &bi) in basis.iter().enumerate() {
                if k != j {
                    tight.insert(bi);
                }
            }
            Ray { coords, tight }
        })
        .collect();

    let mut in_basis = FixedBitSet::with_capacity(m);
    for &bi in &basis {
        in_basis.insert(bi);
    }

    for (ci, row) in constraints.iter().enumerate() {
        if in_basis.contains(ci) {
            continue;
        }
        let values: Vec<Int> = rays.iter().map(|r| dot(row, &r.coords)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
        if neg.is_empty() {
            for (i, r) in rays.iter_mut().enumerate() {
                if values[i].is_zero() {
                    r.tight.insert(ci);
                }
            }
            continue;
        }

        let mut fresh: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let mut common = rays[p].tight.clone();
                common.intersect_with(&rays[q].tight);
                if common.count_ones(..) + 2 < dim {
                    continue;
                }
                let adjacent = rays.iter().enumerate().all(|(k, r)| k == p || k == q || !common.is_subset(&r.tight));
                if !adjacent {
                    continue;
                }
                let vp = &values[p];
                let vq = -&values[q];
                let combo: Vec<Int> =
                    rays[q].coords.iter().zip(&rays[p].coords).map(|(yq, yp)| vp * yq + &vq * yp).collect();
                let coords = crate::exact::primitive_part(&combo).expect("adjacent rays are independent");
                common.insert(ci);
                fresh.push(Ray { coords, tight: common });
            }
        }

        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            if values[i].is_negative() {
                continue;
            }
            if values[i].is_zero() {
                r.tight.insert(ci);
            }
            next.push(r);
        }
        next.extend(fresh);
        rays = next;
    }
    Ok(rays)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(v: &[&[i64]]) -> Vec<Vec<Int>> {
        v.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect()
    }

    #[test]
    fn square_facets() {
        let pts = rows(&[&[1, 1, 1], &[1, -1, 1], &[1, -1, -1], &[1, 1, -1]]);
        let mut rays: Vec<Vec<Int>> = extreme_rays(&pts, 3).unwrap().into_iter().map(|r| r.coords).collect();
        rays.sort();
        assert_eq!(rays, rows(&[&[1, -1, 0], &[1, 0, -1], &[1, 0, 1], &[1, 1, 0]]));
    }

    #[test]
    fn degenerate_input_rejected() {
        let pts = rows(&[&[1, 0, 0], &[1, 1, 1], &[1, 2, 2]]);
        assert!(matches!(extreme_rays(&pts, 3), Err(ConeError::NotPointed { rank: 2, dim: 3 })));
    }

    #[test]
    fn octahedron_has_eight_facets() {
        let pts = rows(&[&[1, 1, 0, 0], &[1, -1, 0, 0], &[1, 0, 1, 0], &[1, 0, -1, 0], &[1, 0, 0, 1], &[1, 0, 0, -1]]);
        let rays = extreme_rays(&pts, 4).unwrap();
        assert_eq!(rays.len(), 8);
        for r in &rays {
            assert_eq!(r.tight.count_ones(..), 3);
        }
    }
}
