use std::collections::HashSet;

use fixedbitset::FixedBitSet;
use sha2::{Digest, Sha256};

use super::incidence::IncidenceGraph;
use super::EquivalenceError;
use crate::exact::{IncrementalHnf, Int, IntMatrix};
use crate::polytope::Polytope;

/// Canonical representative of a lattice-equivalence class.
///
/// `matrix` has one row per vertex in canonical order; row `k` is column `k`
/// of the Hermite normal form of the homogeneous vertex matrix `[1; x]`
/// under the minimizing vertex ordering.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalForm {
    matrix: IntMatrix,
    digest: [u8; 32],
}

impl NormalForm {
    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn digest(&self) -> &[u8; 32] {
        &self.digest
    }

    pub fn digest_hex(&self) -> String {
        hex::encode(self.digest)
    }

    fn from_rows(rows: Vec<Vec<Int>>) -> Self {
        let matrix = IntMatrix::from_rows(rows);
        let mut hasher = Sha256::new();
        hasher.update((matrix.rows() as u64).to_be_bytes());
        hasher.update((matrix.cols() as u64).to_be_bytes());
        for x in matrix.entries() {
            let bytes = x.to_signed_bytes_be();
            hasher.update((bytes.len() as u32).to_be_bytes());
            hasher.update(&bytes);
        }
        Self { matrix, digest: hasher.finalize().into() }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct State {
    hnf: IncrementalHnf,
    used: FixedBitSet,
}

/// Lattice normal form: the lexicographic minimum, over admissible vertex
/// orderings, of the Hermite normal form of the homogeneous vertex matrix.
///
/// Working in homogeneous coordinates makes the form invariant under every
/// affine map preserving `Z^d`. Admissible orderings list vertices grouped by
/// their equitable incidence colour; the search keeps, level by level, only
/// the partial orderings whose next HNF column is minimal.
pub fn normal_form(p: &Polytope) -> Result<NormalForm, EquivalenceError> {
    let columns = p.homogeneous_integer_vertices().ok_or(EquivalenceError::NotLattice)?;
    let colors = IncidenceGraph::of(p).vertex_colors();
    Ok(normal_form_of_columns(&columns, &colors))
}

pub(crate) fn normal_form_of_columns(columns: &[Vec<Int>], colors: &[usize]) -> NormalForm {
    let r = columns.len();
    let n = columns.first().map_or(0, Vec::len);
    let mut sequence: Vec<usize> = colors.to_vec();
    sequence.sort_unstable();

    let mut states = vec![State { hnf: IncrementalHnf::new(n), used: FixedBitSet::with_capacity(r) }];
    let mut rows: Vec<Vec<Int>> = Vec::with_capacity(r);
    for &color in &sequence {
        let mut best: Option<Vec<Int>> = None;
        let mut next: Vec<State> = Vec::new();
        let mut seen: HashSet<State> = HashSet::new();
        for state in &states {
            for j in (0..r).filter(|&j| colors[j] == color && !state.used.contains(j)) {
                let mut hnf = state.hnf.clone();
                let w = hnf.push_column(&columns[j]);
                let ord = best.as_ref().map(|b| w.cmp(b));
                match ord {
                    Some(std::cmp::Ordering::Greater) => continue,
                    Some(std::cmp::Ordering::Less) | None => {
                        best = Some(w);
                        next.clear();
                        seen.clear();
                    }
                    Some(std::cmp::Ordering::Equal) => {}
                }
                let mut used = state.used.clone();
                used.insert(j);
                let candidate = State { hnf, used };
                if seen.insert(candidate.clone()) {
                    next.push(candidate);
                }
            }
        }
        rows.push(best.expect("a vertex of the required colour remains"));
        states = next;
    }
    NormalForm::from_rows(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::random_unimodular;

    fn poly(v: &[Vec<i64>]) -> Polytope {
        Polytope::from_i64_vertices(v).unwrap()
    }

    #[test]
    fn invariant_under_unimodular_maps_and_translation() {
        let hex = poly(&[vec![1, 0], vec![0, 1], vec![-1, 1], vec![-1, 0], vec![0, -1], vec![1, -1]]);
        let nf = normal_form(&hex).unwrap();
        for seed in 0..20 {
            let u = random_unimodular(2, seed, 20);
            assert_eq!(normal_form(&hex.linear_image(&u).unwrap()).unwrap(), nf);
        }
        let moved = hex.translate(&[Int::from(3), Int::from(-7)]).unwrap();
        assert_eq!(normal_form(&moved).unwrap(), nf);
    }

    #[test]
    fn square_vs_p4b() {
        let sq = poly(&[vec![1, 1], vec![-1, 1], vec![-1, -1], vec![1, -1]]);
        let cross = poly(&[vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]]);
        let p4b = poly(&[vec![1, 0], vec![0, 1], vec![-1, 0], vec![1, -1]]);
        let nfs = [normal_form(&sq).unwrap(), normal_form(&cross).unwrap(), normal_form(&p4b).unwrap()];
        assert_ne!(nfs[0], nfs[1]);
        assert_ne!(nfs[1], nfs[2]);
        assert_ne!(nfs[0], nfs[2]);
        assert_eq!(nfs[0].digest_hex().len(), 64);
    }

    #[test]
    fn rejects_rational_vertices() {
        let t = poly(&[vec![2, 0], vec![0, 1], vec![-1, -1]]);
        assert_eq!(normal_form(&t.polar_dual().unwrap()), Err(EquivalenceError::NotLattice));
    }
}
