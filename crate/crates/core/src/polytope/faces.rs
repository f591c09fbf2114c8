use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;

use super::Polytope;

impl Polytope {
    /// The facets of a face: inclusion-maximal proper nonempty intersections
    /// of the face with facets of the polytope.
    pub(crate) fn subfaces(&self, face: &FixedBitSet) -> Vec<FixedBitSet> {
        let mut candidates: BTreeSet<FixedBitSet> = BTreeSet::new();
        for facet in &self.incidence {
            let mut s = face.clone();
            s.intersect_with(facet);
            if s.is_clear() || s == *face {
                continue;
            }
            candidates.insert(s);
        }
        let candidates: Vec<FixedBitSet> = candidates.into_iter().collect();
        candidates.iter().filter(|s| !candidates.iter().any(|t| t != *s && s.is_subset(t))).cloned().collect()
    }

    /// All proper nonempty faces as vertex sets, indexed by face dimension `0..dim`.
    pub fn faces_by_dimension(&self) -> Vec<Vec<FixedBitSet>> {
        let d = self.dim;
        let mut levels: Vec<Vec<FixedBitSet>> = vec![Vec::new(); d];
        let top: BTreeSet<FixedBitSet> = self.incidence.iter().cloned().collect();
        levels[d - 1] = top.into_iter().collect();
        for k in (1..d).rev() {
            let mut next: BTreeSet<FixedBitSet> = BTreeSet::new();
            for face in &levels[k] {
                next.extend(self.subfaces(face));
            }
            levels[k - 1] = next.into_iter().collect();
        }
        levels
    }

    /// Number of faces of each dimension `0..dim`.
    pub fn f_vector(&self) -> Vec<usize> {
        self.faces_by_dimension().iter().map(Vec::len).collect()
    }

    /// Pulling triangulation: cone from the first vertex of each face over
    /// the subfaces not containing it, recursively. Returns vertex index sets.
    pub fn triangulation(&self) -> Vec<Vec<usize>> {
        let mut all = FixedBitSet::with_capacity(self.n_vertices());
        all.insert_range(..);
        let mut out = Vec::new();
        self.pull(&all, self.dim, &mut Vec::new(), &mut out);
        out
    }

    fn pull(&self, face: &FixedBitSet, dim: usize, apexes: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let apex = face.ones().next().expect("nonempty face");
        if dim == 0 {
            let mut s = apexes.clone();
            s.push(apex);
            out.push(s);
            return;
        }
        apexes.push(apex);
        for sub in self.subfaces(face) {
            if !sub.contains(apex) {
                self.pull(&sub, dim - 1, apexes, out);
            }
        }
        apexes.pop();
    }
}
