use num_traits::{Signed, Zero};

use super::{abs, div_floor, Int, IntMatrix};

/// Row-style Hermite normal form built one column at a time.
///
/// After pushing columns `c_0..c_k` the returned columns are exactly the
/// first `k+1` columns of `HNF([c_0 .. c_k | anything])`: later row
/// operations only touch rows that are zero on earlier columns, or add
/// multiples of such a row. This prefix property is what lets the normal
/// form search compare partial vertex orderings.
///
/// Conventions: echelon staircase descending to the right, pivots positive,
/// entries above a pivot reduced into `[0, pivot)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IncrementalHnf {
    transform: Vec<Vec<Int>>,
    rank: usize,
}

impl IncrementalHnf {
    pub fn new(rows: usize) -> Self {
        Self { transform: IntMatrix::identity(rows).to_rows(), rank: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn transform(&self) -> IntMatrix {
        IntMatrix::from_rows(self.transform.clone())
    }

    /// Appends a column and returns its reduced image.
    pub fn push_column(&mut self, column: &[Int]) -> Vec<Int> {
        let n = self.transform.len();
        assert_eq!(column.len(), n, "column length");
        let mut w: Vec<Int> = self
            .transform
            .iter()
            .map(|row| row.iter().zip(column).fold(Int::zero(), |acc, (a, b)| acc + a * b))
            .collect();
        let r = self.rank;
        if r == n {
            return w;
        }
        loop {
            let pivot = (r..n).filter(|&i| !w[i].is_zero()).min_by(|&a, &b| abs(&w[a]).cmp(&abs(&w[b])));
            let Some(p) = pivot else {
                // no new pivot; column lies in the span of earlier pivot rows
                return w;
            };
            w.swap(r, p);
            self.transform.swap(r, p);
            let mut done = true;
            for i in r + 1..n {
                if w[i].is_zero() {
                    continue;
                }
                let q = &w[i] / &w[r];
                self.sub_row_multiple(i, r, &q, &mut w);
                if !w[i].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if w[r].is_negative() {
            w[r] = -w[r].clone();
            for x in self.transform[r].iter_mut() {
                *x = -x.clone();
            }
        }
        for i in 0..r {
            let q = div_floor(&w[i], &w[r]);
            if !q.is_zero() {
                self.sub_row_multiple(i, r, &q, &mut w);
            }
        }
        self.rank += 1;
        w
    }

    fn sub_row_multiple(&mut self, target: usize, source: usize, q: &Int, w: &mut [Int]) {
        let delta = q * &w[source];
        w[target] -= delta;
        let (src, dst) = if source < target {
            let (a, b) = self.transform.split_at_mut(target);
            (&a[source], &mut b[0])
        } else {
            let (a, b) = self.transform.split_at_mut(source);
            (&b[0], &mut a[target])
        };
        for (d, s) in dst.iter_mut().zip(src) {
            *d -= q * s;
        }
    }
}

/// Row-style Hermite normal form: returns `(h, t)` with `h = t · m` and `t` unimodular.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut builder = IncrementalHnf::new(m.rows());
    let columns: Vec<Vec<Int>> = (0..m.cols())
        .map(|j| {
            let c: Vec<Int> = (0..m.rows()).map(|i| m.get(i, j).clone()).collect();
            builder.push_column(&c)
        })
        .collect();
    let h = IntMatrix::from_rows(columns).transpose();
    let h = if m.cols() == 0 { IntMatrix::zeros(m.rows(), 0) } else { h };
    (h, builder.transform())
}
