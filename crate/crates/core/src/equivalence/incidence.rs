//! Canonical form of the vertex–facet incidence relation.
//!
//! Individualization/refinement over the bipartite incidence graph: colour
//! refinement to an equitable ordered partition, branch on the first
//! non-singleton cell, keep the lexicographically smallest leaf matrix.
//! Automorphisms found at equal leaves prune sibling branches that lie in
//! the same orbit of the pointwise stabilizer of the current path.

use fixedbitset::FixedBitSet;

use crate::polytope::Polytope;

/// Canonical incidence matrix bytes; equal iff the incidence structures are isomorphic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IncidenceCanonicalKey {
    n_vertices: usize,
    n_facets: usize,
    bits: Vec<u8>,
}

impl IncidenceCanonicalKey {
    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_facets(&self) -> usize {
        self.n_facets
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bits
    }
}

/// Bipartite graph: nodes `0..nv` are vertices, `nv..nv+nf` are facets.
pub(crate) struct IncidenceGraph {
    nv: usize,
    nf: usize,
    adj: Vec<Vec<usize>>,
}

impl IncidenceGraph {
    pub(crate) fn new(n_vertices: usize, facets: &[FixedBitSet]) -> Self {
        let nf = facets.len();
        let mut adj = vec![Vec::new(); n_vertices + nf];
        for (i, f) in facets.iter().enumerate() {
            for j in f.ones() {
                adj[n_vertices + i].push(j);
                adj[j].push(n_vertices + i);
            }
        }
        Self { nv: n_vertices, nf, adj }
    }

    pub(crate) fn of(p: &Polytope) -> Self {
        Self::new(p.n_vertices(), p.incidence())
    }

    fn len(&self) -> usize {
        self.nv + self.nf
    }

    fn initial(&self) -> Vec<usize> {
        let mut cells: Vec<usize> = (0..self.len()).map(|x| usize::from(x >= self.nv)).collect();
        if self.nv == 0 {
            cells.iter_mut().for_each(|c| *c = 0);
        }
        cells
    }

    /// Refines to the coarsest equitable partition below `cells`. Cell ids are
    /// assigned from sorted signatures, so they are isomorphism-invariant.
    fn refine(&self, cells: &mut Vec<usize>) -> usize {
        let mut count = count_cells(cells);
        loop {
            let sigs: Vec<(usize, Vec<usize>)> = (0..self.len())
                .map(|x| {
                    let mut nb: Vec<usize> = self.adj[x].iter().map(|&y| cells[y]).collect();
                    nb.sort_unstable();
                    (cells[x], nb)
                })
                .collect();
            let mut distinct: Vec<&(usize, Vec<usize>)> = sigs.iter().collect();
            distinct.sort();
            distinct.dedup();
            let next: Vec<usize> = sigs.iter().map(|s| distinct.binary_search(&s).expect("present")).collect();
            let n = distinct.len();
            *cells = next;
            if n == count {
                return n;
            }
            count = n;
        }
    }

    fn leaf_bits(&self, cells: &[usize]) -> Vec<u8> {
        // discrete partition: cell id is the position
        let mut vpos = vec![0usize; self.nv];
        let mut forder = vec![0usize; self.nf];
        for x in 0..self.len() {
            if x < self.nv {
                vpos[x] = cells[x];
            } else {
                forder[cells[x] - self.nv] = x;
            }
        }
        let row_bytes = self.nv.div_ceil(8);
        let mut bits = vec![0u8; row_bytes * self.nf];
        for (r, &f) in forder.iter().enumerate() {
            for &v in &self.adj[f] {
                let c = vpos[v];
                bits[r * row_bytes + c / 8] |= 0x80 >> (c % 8);
            }
        }
        bits
    }

    /// Vertex colours of the root equitable partition.
    pub(crate) fn vertex_colors(&self) -> Vec<usize> {
        let mut cells = self.initial();
        self.refine(&mut cells);
        cells[..self.nv].to_vec()
    }

    pub(crate) fn canonical_key(&self) -> IncidenceCanonicalKey {
        let mut cells = self.initial();
        self.refine(&mut cells);
        let mut search = Search { graph: self, best: None, automorphisms: Vec::new() };
        search.descend(cells, &mut Vec::new());
        let (bits, _) = search.best.expect("at least one leaf");
        IncidenceCanonicalKey { n_vertices: self.nv, n_facets: self.nf, bits }
    }
}

fn count_cells(cells: &[usize]) -> usize {
    cells.iter().max().map_or(0, |m| m + 1)
}

struct Search<'a> {
    graph: &'a IncidenceGraph,
    /// Best leaf bits and its labeling (node -> position).
    best: Option<(Vec<u8>, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn descend(&mut self, mut cells: Vec<usize>, path: &mut Vec<usize>) {
        let n = self.graph.len();
        let count = self.graph.refine(&mut cells);
        if count == n {
            self.leaf(&cells);
            return;
        }
        let mut sizes = vec![0usize; count];
        for &c in &cells {
            sizes[c] += 1;
        }
        let target = (0..count).find(|&c| sizes[c] > 1).expect("non-discrete partition");
        let members: Vec<usize> = (0..n).filter(|&x| cells[x] == target).collect();
        let mut explored: Vec<usize> = Vec::new();
        for &x in &members {
            if !explored.is_empty() && self.same_orbit(path, x, &explored) {
                continue;
            }
            explored.push(x);
            let mut child = cells.clone();
            for c in child.iter_mut() {
                if *c > target {
                    *c += 1;
                }
            }
            for &y in &members {
                if y != x {
                    child[y] = target + 1;
                }
            }
            path.push(x);
            self.descend(child, path);
            path.pop();
        }
    }

    /// Whether `x` shares an orbit with an explored node under the found
    /// automorphisms that fix `path` pointwise.
    fn same_orbit(&self, path: &[usize], x: usize, explored: &[usize]) -> bool {
        let n = self.graph.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut a: usize) -> usize {
            while parent[a] != a {
                parent[a] = parent[parent[a]];
                a = parent[a];
            }
            a
        }
        let mut any = false;
        for g in &self.automorphisms {
            if path.iter().all(|&p| g[p] == p) {
                any = true;
                for a in 0..n {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, g[a]));
                    if ra != rb {
                        parent[ra] = rb;
                    }
                }
            }
        }
        if !any {
            return false;
        }
        let rx = find(&mut parent, x);
        explored.iter().any(|&e| find(&mut parent, e) == rx)
    }

    fn leaf(&mut self, cells: &[usize]) {
        let bits = self.graph.leaf_bits(cells);
        match &self.best {
            None => self.best = Some((bits, cells.to_vec())),
            Some((best, labeling)) => match bits.cmp(best) {
                std::cmp::Ordering::Less => self.best = Some((bits, cells.to_vec())),
                std::cmp::Ordering::Equal => {
                    // node x at position labeling[x] in the best leaf maps to
                    // the node holding that position in this leaf
                    let mut at = vec![0usize; cells.len()];
                    for (y, &pos) in cells.iter().enumerate() {
                        at[pos] = y;
                    }
                    let g: Vec<usize> = labeling.iter().map(|&pos| at[pos]).collect();
                    if g.iter().enumerate().any(|(a, &b)| a != b) {
                        self.automorphisms.push(g);
                    }
                }
                std::cmp::Ordering::Greater => {}
            },
        }
    }
}

/// Canonical key of the vertex–facet incidence of `p`.
pub fn incidence_canonical_key(p: &Polytope) -> IncidenceCanonicalKey {
    IncidenceGraph::of(p).canonical_key()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn shuffled_key(nv: usize, facets: &[Vec<usize>], seed: u64) -> IncidenceCanonicalKey {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut vperm: Vec<usize> = (0..nv).collect();
        vperm.shuffle(&mut rng);
        let mut rows: Vec<FixedBitSet> = facets
            .iter()
            .map(|f| {
                let mut s = FixedBitSet::with_capacity(nv);
                for &v in f {
                    s.insert(vperm[v]);
                }
                s
            })
            .collect();
        rows.shuffle(&mut rng);
        IncidenceGraph::new(nv, &rows).canonical_key()
    }

    #[test]
    fn cube_key_invariant_under_shuffles() {
        // 3-cube: vertex bits (x, y, z), facets x=0/1, y=0/1, z=0/1
        let facets: Vec<Vec<usize>> = (0..3)
            .flat_map(|axis| (0..2).map(move |side| (0..8).filter(|v| (v >> axis) & 1 == side).collect()))
            .collect();
        let key = shuffled_key(8, &facets, 0);
        for seed in 1..100 {
            assert_eq!(shuffled_key(8, &facets, seed), key);
        }
    }

    #[test]
    fn distinguishes_non_isomorphic() {
        // square vs. triangle-with-pendant structures of equal size
        let square = vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]];
        let other = vec![vec![0, 1], vec![1, 2], vec![2, 0], vec![3, 0]];
        assert_ne!(shuffled_key(4, &square, 1), shuffled_key(4, &other, 1));
    }
}
