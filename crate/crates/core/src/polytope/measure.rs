use num_integer::binomial;
use num_traits::{One, Signed, Zero};

use super::{Polytope, PolytopeError};
use crate::exact::{solve_rational, Int, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumeAndCentroid {
    pub euclidean_volume: Rational,
    /// `d!` times the euclidean volume.
    pub normalized_volume: Rational,
    /// Homogeneous `[1, c]`.
    pub centroid: Vec<Rational>,
}

impl VolumeAndCentroid {
    /// The normalized volume as an integer; `None` unless it is integral.
    pub fn lattice_volume(&self) -> Option<Int> {
        self.normalized_volume.is_integer().then(|| self.normalized_volume.to_integer())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EhrhartData {
    /// Ehrhart polynomial coefficients, ascending degree.
    pub coefficients: Vec<Rational>,
    pub h_star: Vec<Int>,
}

impl EhrhartData {
    pub fn evaluate(&self, k: u64) -> Rational {
        let x = Rational::from_integer(Int::from(k));
        self.coefficients.iter().rev().fold(Rational::zero(), |acc, c| acc * &x + c)
    }
}

fn det_rational(mut a: Vec<Vec<Rational>>) -> Rational {
    let n = a.len();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &a[c][c];
            for j in c..n {
                let delta = &f * &a[c][j];
                a[i][j] -= delta;
            }
        }
    }
    det
}

fn factorial(n: usize) -> Int {
    (1..=n).fold(Int::one(), |acc, k| acc * Int::from(k))
}

impl Polytope {
    /// Volume and centroid by summing over the pulling triangulation.
    pub fn volume_and_centroid(&self) -> VolumeAndCentroid {
        let d = self.dim;
        let pts = self.vertex_points();
        let mut total = Rational::zero();
        let mut moment = vec![Rational::zero(); d];
        for simplex in self.triangulation() {
            let base = &pts[simplex[0]];
            let m: Vec<Vec<Rational>> =
                simplex[1..].iter().map(|&j| pts[j].iter().zip(base).map(|(a, b)| a - b).collect()).collect();
            let w = det_rational(m).abs();
            for &j in &simplex {
                for (acc, x) in moment.iter_mut().zip(&pts[j]) {
                    *acc += &w * x;
                }
            }
            total += w;
        }
        let scale = &total * Rational::from_integer(Int::from(d + 1));
        let centroid = std::iter::once(Rational::one()).chain(moment.into_iter().map(|m| m / &scale)).collect();
        VolumeAndCentroid {
            euclidean_volume: &total / Rational::from_integer(factorial(d)),
            normalized_volume: total,
            centroid,
        }
    }

    /// Ehrhart polynomial by interpolation through `|kP ∩ Z^d|`, `k = 0..d`,
    /// and the h*-vector of the Ehrhart series numerator.
    pub fn ehrhart(&self) -> Result<EhrhartData, PolytopeError> {
        if !self.properties().is_lattice {
            return Err(PolytopeError::NotLattice);
        }
        let d = self.dim;
        let counts: Vec<Int> = (0..=d as u64).map(|k| Int::from(self.count_dilate(k))).collect();
        let vandermonde: Vec<Vec<Rational>> =
            (0..=d).map(|k| (0..=d).map(|j| Rational::from_integer(Int::from(k).pow(j as u32))).collect()).collect();
        let values: Vec<Rational> = counts.iter().map(|c| Rational::from_integer(c.clone())).collect();
        let coefficients = solve_rational(&vandermonde, &values).expect("distinct interpolation nodes");
        Ok(EhrhartData { coefficients, h_star: h_star_from_counts(&counts) })
    }
}

/// `h*_j = sum_i (-1)^i C(d+1, i) L(j - i)` for `j = 0..d`.
pub(crate) fn h_star_from_counts(counts: &[Int]) -> Vec<Int> {
    let d = counts.len() - 1;
    (0..=d)
        .map(|j| {
            (0..=j).fold(Int::zero(), |acc, i| {
                let term = Int::from(binomial(d + 1, i)) * &counts[j - i];
                if i % 2 == 0 {
                    acc + term
                } else {
                    acc - term
                }
            })
        })
        .collect()
}
