use num_traits::{Signed, Zero};

use super::Polytope;
use crate::exact::{div_floor, Int};

/// Lattice points of `{ x : b_j + <h_j, x> >= 0 }` inside an integer box.
///
/// Coordinates are fixed left to right; at each level the admissible range of
/// the next coordinate is cut down using the residual of every inequality
/// plus the best case over the still-free coordinates, so empty slabs are
/// never entered. Points are produced in lexicographic order.
pub(crate) struct BoxScan<'a> {
    rows: &'a [Vec<Int>],
    lo: Vec<Int>,
    hi: Vec<Int>,
    /// `slack[j][t]` = sum over `i >= t` of `max(h_ji * lo_i, h_ji * hi_i)`.
    slack: Vec<Vec<Int>>,
    strict: bool,
}

impl<'a> BoxScan<'a> {
    pub(crate) fn new(rows: &'a [Vec<Int>], lo: Vec<Int>, hi: Vec<Int>, strict: bool) -> Self {
        let d = lo.len();
        let slack = rows
            .iter()
            .map(|row| {
                let mut s = vec![Int::zero(); d + 1];
                for t in (0..d).rev() {
                    let c = &row[t + 1];
                    let best = std::cmp::max(c * &lo[t], c * &hi[t]);
                    s[t] = &s[t + 1] + best;
                }
                s
            })
            .collect();
        Self { rows, lo, hi, slack, strict }
    }

    pub(crate) fn for_each(&self, mut visit: impl FnMut(&[Int])) {
        if self.lo.iter().zip(&self.hi).any(|(l, h)| l > h) {
            return;
        }
        let residual: Vec<Int> = self.rows.iter().map(|r| r[0].clone()).collect();
        let mut point = Vec::with_capacity(self.lo.len());
        self.descend(0, &residual, &mut point, &mut visit);
    }

    fn descend(&self, t: usize, residual: &[Int], point: &mut Vec<Int>, visit: &mut impl FnMut(&[Int])) {
        let d = self.lo.len();
        if t == d {
            let ok = if self.strict {
                residual.iter().all(Signed::is_positive)
            } else {
                residual.iter().all(|r| !r.is_negative())
            };
            if ok {
                visit(point);
            }
            return;
        }
        let mut lo = self.lo[t].clone();
        let mut hi = self.hi[t].clone();
        for (j, row) in self.rows.iter().enumerate() {
            let c = &row[t + 1];
            let room = &residual[j] + &self.slack[j][t + 1];
            if c.is_zero() {
                if room.is_negative() {
                    return;
                }
            } else if c.is_positive() {
                // c x >= -room
                let bound = -div_floor(&room, c);
                if bound > lo {
                    lo = bound;
                }
            } else {
                let bound = div_floor(&room, &-c);
                if bound < hi {
                    hi = bound;
                }
            }
        }
        let mut x = lo;
        while x <= hi {
            let next: Vec<Int> = self.rows.iter().zip(residual).map(|(row, r)| r + &row[t + 1] * &x).collect();
            point.push(x.clone());
            self.descend(t + 1, &next, point, visit);
            point.pop();
            x += 1;
        }
    }
}

impl Polytope {
    fn scan_dilate(&self, k: u64, strict: bool, visit: impl FnMut(&[Int])) {
        let kk = Int::from(k);
        let rows: Vec<Vec<Int>> = self
            .integer_inequalities()
            .into_iter()
            .map(|mut r| {
                r[0] *= &kk;
                r
            })
            .collect();
        let d = self.dim;
        let mut lo = Vec::with_capacity(d);
        let mut hi = Vec::with_capacity(d);
        for i in 1..=d {
            let min = self.vertices.iter().map(|v| &v[i]).min().expect("nonempty").clone();
            let max = self.vertices.iter().map(|v| &v[i]).max().expect("nonempty").clone();
            let kr = crate::exact::Rational::from_integer(kk.clone());
            lo.push((min * &kr).ceil().to_integer());
            hi.push((max * &kr).floor().to_integer());
        }
        BoxScan::new(&rows, lo, hi, strict).for_each(visit);
    }

    /// All lattice points, in lexicographic order.
    pub fn lattice_points(&self) -> Vec<Vec<Int>> {
        let mut out = Vec::new();
        self.scan_dilate(1, false, |p| out.push(p.to_vec()));
        out
    }

    /// Lattice points strictly inside.
    pub fn interior_lattice_points(&self) -> Vec<Vec<Int>> {
        let mut out = Vec::new();
        self.scan_dilate(1, true, |p| out.push(p.to_vec()));
        out
    }

    pub fn n_lattice_points(&self) -> usize {
        self.count_dilate(1)
    }

    /// `|kP ∩ Z^d|`.
    pub fn count_dilate(&self, k: u64) -> usize {
        let mut n = 0usize;
        self.scan_dilate(k, false, |_| n += 1);
        n
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::Polytope;

    fn brute_force(p: &Polytope, k: i64, radius: i64) -> usize {
        let rows = p.integer_inequalities();
        let d = p.dim();
        let mut count = 0;
        let side = 2 * radius + 1;
        for code in 0..side.pow(d as u32) {
            let mut c = code;
            let mut x = Vec::new();
            for _ in 0..d {
                x.push(c % side - radius);
                c /= side;
            }
            let inside = rows.iter().all(|r| {
                let mut s = &r[0] * Int::from(k);
                for (a, xi) in r[1..].iter().zip(&x) {
                    s += a * Int::from(*xi);
                }
                !s.is_negative()
            });
            if inside {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn published_pentagon_has_eight_points() {
        let p = Polytope::from_i64_vertices(&[vec![-1, -1], vec![-1, 1], vec![0, 1], vec![1, 0], vec![1, -1]]).unwrap();
        assert_eq!(p.lattice_points().len(), 8);
        assert_eq!(p.count_dilate(2), 22);
        assert_eq!(p.count_dilate(2), brute_force(&p, 2, 4));
    }

    #[test]
    fn hexagon_points_match_box_scan() {
        let hex =
            Polytope::from_i64_vertices(&[vec![1, 0], vec![0, 1], vec![-1, 1], vec![-1, 0], vec![0, -1], vec![1, -1]])
                .unwrap();
        let pts = hex.lattice_points();
        assert_eq!(pts.len(), 7);
        assert_eq!(pts.len(), brute_force(&hex, 1, 3));
        let absent = [vec![Int::from(1), Int::from(1)], vec![Int::from(-1), Int::from(-1)]];
        assert!(absent.iter().all(|a| !pts.contains(a)));
        let mut sorted = pts.clone();
        sorted.sort();
        assert_eq!(pts, sorted);
    }

    #[test]
    fn square_points_and_interior() {
        let sq = Polytope::from_i64_vertices(&[vec![1, 1], vec![-1, 1], vec![-1, -1], vec![1, -1]]).unwrap();
        assert_eq!(sq.n_lattice_points(), 9);
        assert_eq!(sq.interior_lattice_points(), vec![vec![Int::zero(), Int::zero()]]);
        assert_eq!(sq.count_dilate(0), 1);
    }

    #[test]
    fn skinny_simplex_matches_brute_force() {
        let p = Polytope::from_i64_vertices(&[vec![3, 1, 0], vec![-2, 0, 1], vec![0, -1, -1], vec![1, 2, -2]]).unwrap();
        for k in 1..=3 {
            assert_eq!(p.count_dilate(k), brute_force(&p, k as i64, 3 * k as i64 + 1));
        }
    }
}
