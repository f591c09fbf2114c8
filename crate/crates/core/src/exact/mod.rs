//! Exact scalars and integer linear algebra.
//!
//! Every geometric quantity in the crate is carried either as an unbounded
//! [`Int`] or as a [`Rational`] kept in lowest terms with a positive
//! denominator. Nothing in here ever rounds.

mod hnf;
mod matrix;
mod unimodular;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use hnf::{hermite_normal_form, IncrementalHnf};
pub use matrix::IntMatrix;
pub use unimodular::random_unimodular;

/// Arbitrary-precision signed integer.
pub type Int = BigInt;

/// Arbitrary-precision rational, always normalized (lowest terms, denominator > 0).
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix shape mismatch: expected {expected} entries, got {actual}")]
    Shape { expected: usize, actual: usize },
    #[error("linear system is singular")]
    Singular,
    #[error("zero vector has no primitive part")]
    ZeroVector,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// Shorthand for building an [`Int`] from a machine integer.
pub fn int(v: i64) -> Int {
    Int::from(v)
}

/// Shorthand for an integral [`Rational`].
pub fn rat(v: i64) -> Rational {
    Rational::from_integer(Int::from(v))
}

/// Parses `"7/2"`, `"-2/21"` or `"3"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: Int = n.trim().parse().ok()?;
            let d: Int = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => s.parse::<Int>().ok().map(Rational::from_integer),
    }
}

/// Renders a rational the way the published data does: `"7/2"`, `"1"`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Greatest common divisor of all entries (non-negative, zero for the zero vector).
pub fn gcd_of(v: &[Int]) -> Int {
    v.iter().fold(Int::zero(), |g, x| g.gcd(x))
}

/// Divides a nonzero integer vector by the gcd of its entries.
pub fn primitive_part(v: &[Int]) -> Result<Vec<Int>, ExactError> {
    let g = gcd_of(v);
    if g.is_zero() {
        return Err(ExactError::ZeroVector);
    }
    Ok(v.iter().map(|x| x / &g).collect())
}

/// Smallest positive integer vector on the ray through a rational vector.
pub fn primitive_ray(v: &[Rational]) -> Result<Vec<Int>, ExactError> {
    let lcm = v.iter().fold(Int::one(), |l, x| l.lcm(x.denom()));
    let scaled: Vec<Int> = v.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect();
    primitive_part(&scaled)
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntMatrix) -> Result<Int, ExactError> {
    if m.rows() != m.cols() {
        return Err(ExactError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    Ok(bareiss_det(m.to_rows()))
}

pub(crate) fn bareiss_det(mut a: Vec<Vec<Int>>) -> Int {
    let n = a.len();
    if n == 0 {
        return Int::one();
    }
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return Int::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Rank of an integer matrix given as rows.
pub fn rank(rows: &[Vec<Int>]) -> usize {
    let mut a: Vec<Vec<Int>> = rows.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..a.len() {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            let g = a[r][c].clone();
            for j in c..cols {
                a[i][j] = &a[i][j] * &g - &a[r][j] * &f;
            }
        }
        r += 1;
        if r == a.len() {
            break;
        }
    }
    r
}

/// Solves `a · x = b` exactly by Gauss–Jordan elimination.
pub fn solve_rational(a: &[Vec<Rational>], b: &[Rational]) -> Result<Vec<Rational>, ExactError> {
    let n = a.len();
    if b.len() != n {
        return Err(ExactError::Dimension(format!("{} equations but {} right-hand sides", n, b.len())));
    }
    if let Some(row) = a.iter().find(|row| row.len() != n) {
        return Err(ExactError::NotSquare { rows: n, cols: row.len() });
    }
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero()).ok_or(ExactError::Singular)?;
        m.swap(c, p);
        let pivot = m[c][c].clone();
        for v in m[c].iter_mut() {
            *v /= &pivot;
        }
        for i in 0..n {
            if i == c || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..=n {
                let delta = &f * &m[c][j];
                m[i][j] -= delta;
            }
        }
    }
    Ok(m.into_iter().map(|mut row| row.pop().expect("augmented column")).collect())
}

/// `floor(a / b)` for `b > 0`.
pub(crate) fn div_floor(a: &Int, b: &Int) -> Int {
    a.div_floor(b)
}

pub(crate) fn abs(a: &Int) -> Int {
    a.abs()
}
