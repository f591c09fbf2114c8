//! Building the `SmoothReflexive` collection and counting decompositions.
//!
//! The collection stores polar duals of smooth Fano polytopes. Constructions
//! run on the Fano side and are polarized once before identification, except
//! free sums, which are identified as products of stored polytopes.

mod document;
mod table;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::constructions::{
    fano_simplex, product, simplex_sum_candidates, skew_bipyramid, ConstructionError, SimplexSumSpec,
};
use crate::docstore::{document_id, DocStore, DocStoreError, FindOptions, Query, DEFAULT_INDEXES};
use crate::enumerate::{enumerate_smooth_fano, EnumerateError};
use crate::equivalence::LatticeProfile;
use crate::exact::Int;
use crate::polytope::{Polytope, PolytopeError};

pub use document::{polytope_document, polytope_from_document};
pub use table::{parse_table, render_table, table_rows, TableRow};

pub const GROUP: &str = "LatticePolytopes";
pub const COLLECTION: &str = "SmoothReflexive";
pub const GROUP_DESCRIPTION: &str = "This database contains various classes of lattice polytopes.";

/// Number of smooth Fano classes per dimension, starting at `d = 1`.
pub const KNOWN_COUNTS: [usize; 8] = [1, 5, 18, 124, 866, 7622, 72256, 749892];

/// Largest dimension `build_collection` will enumerate.
pub const MAX_BUILD_DIM: usize = 3;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("polytope not found")]
    NotFound,
    #[error("collection {GROUP}/{COLLECTION} is already populated")]
    AlreadyPopulated,
    #[error("dimension {dim} has {found} documents, expected {expected}")]
    IncompleteCorpus { dim: usize, expected: usize, found: usize },
    #[error("dimension must be between 1 and {max}, got {got}")]
    Dimension { got: usize, max: usize },
    #[error("document {id}: {message}")]
    BadDocument { id: String, message: String },
    #[error(transparent)]
    Store(#[from] DocStoreError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Enumerate(#[from] EnumerateError),
}

fn dim_query(d: usize) -> Query {
    Query::parse(&json!({ "DIM": d })).expect("static query")
}

/// Enumerates the smooth Fano classes for `1..=max_dim`, stores their polars.
///
/// Ids are `F.{d}D.{k:04}` with `k` counting from 0 in normal-form order.
pub fn build_collection(store: &mut DocStore, max_dim: usize) -> Result<usize, PipelineError> {
    if max_dim == 0 || max_dim > MAX_BUILD_DIM {
        return Err(PipelineError::Dimension { got: max_dim, max: MAX_BUILD_DIM });
    }
    if store.collection(GROUP, COLLECTION).is_ok_and(|c| !c.is_empty()) {
        return Err(PipelineError::AlreadyPopulated);
    }
    let mut docs = Vec::new();
    for d in 1..=max_dim {
        let report = enumerate_smooth_fano(d, 2)?;
        let built: Vec<Value> = report
            .polytopes
            .par_iter()
            .enumerate()
            .map(|(k, fano)| polytope_document(&format!("F.{d}D.{k:04}"), &fano.polar_dual()?))
            .collect::<Result<_, _>>()?;
        docs.extend(built);
    }
    store.ensure_group(GROUP, GROUP_DESCRIPTION);
    if store.collection(GROUP, COLLECTION).is_err() {
        let description = format!(
            "A complete collection of smooth reflexive lattice polytopes in dimensions up to {max_dim}, up to lattice equivalence."
        );
        let info = json!({
            "dual": true,
            "convention": "entries are the polar duals of smooth Fano polytopes; polarize to obtain the polytope whose vertices are the primitive ray generators",
            "fields": ["DIM", "VERTICES", "FACETS", "F_VECTOR", "EHRHART_POLYNOMIAL_COEFF", "H_STAR_VECTOR", "CENTROID",
                       "N_LATTICE_POINTS", "N_VERTICES", "N_FACETS", "LATTICE_VOLUME", "polyDB"],
        });
        store.create_collection(GROUP, COLLECTION, &description, info, &DEFAULT_INDEXES)?;
    }
    let n = docs.len();
    for doc in docs {
        store.insert(GROUP, COLLECTION, doc)?;
    }
    Ok(n)
}

/// Checks that dimensions `1..=d` hold exactly the known number of classes.
pub fn check_corpus(store: &DocStore, d: usize) -> Result<(), PipelineError> {
    let c = store.collection(GROUP, COLLECTION)?;
    for dim in 1..=d {
        let found = c.count(&dim_query(dim));
        let expected = KNOWN_COUNTS.get(dim - 1).copied().unwrap_or(found);
        if found != expected {
            return Err(PipelineError::IncompleteCorpus { dim, expected, found });
        }
    }
    Ok(())
}

/// Read-only view of the collection with precomputed isomorphism invariants.
pub struct Identifier<'a> {
    store: &'a DocStore,
    profiles: HashMap<String, LatticeProfile>,
    polytopes: BTreeMap<usize, Vec<(String, Polytope)>>,
}

impl<'a> Identifier<'a> {
    /// Loads and profiles every stored polytope of the given dimensions.
    pub fn new(store: &'a DocStore, dims: impl IntoIterator<Item = usize>) -> Result<Self, PipelineError> {
        let c = store.collection(GROUP, COLLECTION)?;
        let mut polytopes = BTreeMap::new();
        let mut profiles = HashMap::new();
        for d in dims {
            let docs = c.find(&dim_query(d), FindOptions::default());
            let loaded: Vec<(String, Polytope, LatticeProfile)> = docs
                .par_iter()
                .map(|doc| {
                    let id = document_id(doc)?.to_string();
                    let p = polytope_from_document(doc)?;
                    let profile = LatticeProfile::new(&p)
                        .map_err(|e| PipelineError::BadDocument { id: id.clone(), message: e.to_string() })?;
                    profile.class_form();
                    Ok((id, p, profile))
                })
                .collect::<Result<_, PipelineError>>()?;
            let entry: &mut Vec<(String, Polytope)> = polytopes.entry(d).or_default();
            for (id, p, profile) in loaded {
                entry.push((id.clone(), p));
                profiles.insert(id, profile);
            }
        }
        Ok(Self { store, profiles, polytopes })
    }

    /// Stored polytopes of dimension `d`, in `_id` order.
    pub fn polytopes(&self, d: usize) -> &[(String, Polytope)] {
        self.polytopes.get(&d).map_or(&[], Vec::as_slice)
    }

    /// `_id` of the stored polytope lattice-isomorphic to `p` (database convention).
    pub fn identify(&self, p: &Polytope) -> Result<String, PipelineError> {
        let query = Query::parse(&json!({
            "DIM": p.dim(),
            "N_VERTICES": p.n_vertices(),
            "N_FACETS": p.n_facets(),
            "N_LATTICE_POINTS": p.n_lattice_points(),
        }))
        .expect("static query");
        let candidates = self.store.db_query(&query, GROUP, COLLECTION, FindOptions::default())?;
        if candidates.is_empty() {
            return Err(PipelineError::NotFound);
        }
        let mine = LatticeProfile::new(p).map_err(|_| PipelineError::NotFound)?;
        for doc in candidates {
            let id = document_id(&doc)?;
            let found = match self.profiles.get(id) {
                Some(theirs) => theirs.is_isomorphic(&mine),
                None => {
                    let q = polytope_from_document(&doc)?;
                    LatticeProfile::new(&q).is_ok_and(|theirs| theirs.is_isomorphic(&mine))
                }
            };
            if found {
                return Ok(id.to_string());
            }
        }
        Err(PipelineError::NotFound)
    }
}

/// One-off identification; builds the invariants it needs on the fly.
pub fn identify_smooth_fano(p: &Polytope, store: &DocStore) -> Result<String, PipelineError> {
    Identifier::new(store, [])?.identify(p)
}

/// How a decomposable polytope was obtained.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Split {
    /// Free sum of the two stored classes (a product on the stored side).
    FreeSum { left: String, right: String },
    /// `sbip(P, v)` with `P` the polar of the stored class.
    SkewBipyramid { base: String, vertex: Vec<Int> },
    /// Generalized simplex sum of the polar of the stored class with the `b`-simplex.
    SimplexSum { base: Option<String>, simplex_dim: usize, shifted_vertex: Vec<Int> },
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vec = |v: &[Int]| v.iter().map(Int::to_string).collect::<Vec<_>>().join(",");
        match self {
            Split::FreeSum { left, right } => write!(f, "({left}, {right})"),
            Split::SkewBipyramid { base, vertex } => write!(f, "({base}, sbip[{}])", vec(vertex)),
            Split::SimplexSum { base, simplex_dim, shifted_vertex } => {
                let base = base.as_deref().unwrap_or("-");
                write!(f, "({base}, simplex-{simplex_dim}[{}])", vec(shifted_vertex))
            }
        }
    }
}

pub type Splits = BTreeMap<String, BTreeSet<Split>>;

fn merge(found: Vec<(String, Split)>, splits: Option<&mut Splits>) -> BTreeSet<String> {
    let ids = found.iter().map(|(id, _)| id.clone()).collect();
    if let Some(splits) = splits {
        for (id, split) in found {
            splits.entry(id).or_default().insert(split);
        }
    }
    ids
}

fn polar(p: &Polytope) -> Result<Polytope, PipelineError> {
    Ok(p.polar_dual()?)
}

/// Ids of all free sums in dimension `d`.
pub fn all_free_sums_in_dim(
    ident: &Identifier,
    d: usize,
    splits: Option<&mut Splits>,
) -> Result<BTreeSet<String>, PipelineError> {
    let mut pairs = Vec::new();
    for n in 1..=d / 2 {
        for (a, p) in ident.polytopes(n) {
            for (b, q) in ident.polytopes(d - n) {
                pairs.push((a, p, b, q));
            }
        }
    }
    let found: Vec<(String, Split)> = pairs
        .par_iter()
        .map(|(a, p, b, q)| {
            let id = ident.identify(&product(p, q))?;
            Ok((id, Split::FreeSum { left: a.to_string(), right: b.to_string() }))
        })
        .collect::<Result<_, PipelineError>>()?;
    Ok(merge(found, splits))
}

/// Ids of all smooth skew bipyramids `sbip(P, v)` in dimension `d`.
pub fn all_skew_bipyramids_in_dim(
    ident: &Identifier,
    d: usize,
    splits: Option<&mut Splits>,
) -> Result<BTreeSet<String>, PipelineError> {
    if d < 2 {
        return Ok(BTreeSet::new());
    }
    let mut jobs = Vec::new();
    for (id, stored) in ident.polytopes(d - 1) {
        let fano = polar(stored)?;
        for v in fano.integer_vertices().expect("smooth Fano polytopes are lattice polytopes") {
            jobs.push((id, fano.clone(), v));
        }
    }
    let found: Vec<(String, Split)> = jobs
        .par_iter()
        .map(|(base, fano, v)| {
            let id = ident.identify(&polar(&skew_bipyramid(fano, v)?)?)?;
            Ok((id, Split::SkewBipyramid { base: base.to_string(), vertex: v.clone() }))
        })
        .collect::<Result<_, PipelineError>>()?;
    Ok(merge(found, splits))
}

/// Ids of all generalized smooth simplex sums with the `b`-simplex in dimension `d`.
pub fn skew_simplex_sums_in_dim(
    ident: &Identifier,
    d: usize,
    b: usize,
    splits: Option<&mut Splits>,
) -> Result<BTreeSet<String>, PipelineError> {
    if b == 0 || b > d {
        return Err(PipelineError::Dimension { got: b, max: d });
    }
    if b == d {
        let id = ident.identify(&polar(&fano_simplex(d)?)?)?;
        let split = Split::SimplexSum { base: None, simplex_dim: d, shifted_vertex: Vec::new() };
        return Ok(merge(vec![(id, split)], splits));
    }
    let a = d - b;
    let per_base: Vec<Vec<(String, Split)>> = ident
        .polytopes(a)
        .par_iter()
        .map(|(base, stored)| {
            let fano = polar(stored)?;
            simplex_sum_candidates(&fano, b)?
                .into_iter()
                .map(|c| {
                    let id = ident.identify(&polar(&c.polytope)?)?;
                    let split = Split::SimplexSum {
                        base: Some(base.clone()),
                        simplex_dim: b,
                        shifted_vertex: c.shifted_vertex,
                    };
                    Ok((id, split))
                })
                .collect::<Result<Vec<_>, PipelineError>>()
        })
        .collect::<Result<_, PipelineError>>()?;
    Ok(merge(per_base.into_iter().flatten().collect(), splits))
}

/// Rebuilds the polytope a split describes and identifies it again.
pub fn replay_split(ident: &Identifier, split: &Split) -> Result<String, PipelineError> {
    let stored = |id: &str| -> Result<Polytope, PipelineError> {
        let doc = ident.store.get(GROUP, COLLECTION, id)?.ok_or(PipelineError::NotFound)?;
        polytope_from_document(&doc)
    };
    let p = match split {
        Split::FreeSum { left, right } => product(&stored(left)?, &stored(right)?),
        Split::SkewBipyramid { base, vertex } => polar(&skew_bipyramid(&polar(&stored(base)?)?, vertex)?)?,
        Split::SimplexSum { base: None, simplex_dim, .. } => polar(&fano_simplex(*simplex_dim)?)?,
        Split::SimplexSum { base: Some(base), simplex_dim, shifted_vertex } => {
            let spec = SimplexSumSpec {
                base: polar(&stored(base)?)?,
                simplex_dim: *simplex_dim,
                shifted_vertex: shifted_vertex.clone(),
            };
            polar(&spec.realize()?)?
        }
    };
    ident.identify(&p)
}

/// One column of the decomposition table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionReport {
    pub dimension: usize,
    pub n_polytopes: usize,
    pub free_sum_ids: BTreeSet<String>,
    pub skew_bipyramid_ids: BTreeSet<String>,
    pub simplex_sum_ids_by_b: BTreeMap<usize, BTreeSet<String>>,
    pub union_simplex_ids: BTreeSet<String>,
    pub total_decomposable_ids: BTreeSet<String>,
    pub splits: Option<Splits>,
}

/// Runs every construction for dimension `d` against a complete corpus.
pub fn decomposition_stats(store: &DocStore, d: usize, splitinfo: bool) -> Result<DecompositionReport, PipelineError> {
    if d == 0 {
        return Err(PipelineError::Dimension { got: d, max: KNOWN_COUNTS.len() });
    }
    check_corpus(store, d)?;
    let ident = Identifier::new(store, 1..=d)?;
    let mut splits = splitinfo.then(Splits::new);
    let free_sum_ids = all_free_sums_in_dim(&ident, d, splits.as_mut())?;
    let skew_bipyramid_ids = all_skew_bipyramids_in_dim(&ident, d, splits.as_mut())?;
    let mut simplex_sum_ids_by_b = BTreeMap::new();
    for b in 1..=d {
        simplex_sum_ids_by_b.insert(b, skew_simplex_sums_in_dim(&ident, d, b, splits.as_mut())?);
    }
    let union_simplex_ids: BTreeSet<String> = simplex_sum_ids_by_b.values().flatten().cloned().collect();
    let total_decomposable_ids = free_sum_ids.union(&union_simplex_ids).cloned().collect();
    Ok(DecompositionReport {
        dimension: d,
        n_polytopes: ident.polytopes(d).len(),
        free_sum_ids,
        skew_bipyramid_ids,
        simplex_sum_ids_by_b,
        union_simplex_ids,
        total_decomposable_ids,
        splits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_store() -> DocStore {
        let mut s = DocStore::new();
        build_collection(&mut s, 2).unwrap();
        s
    }

    #[test]
    fn builds_one_and_five() {
        let s = small_store();
        let c = s.collection(GROUP, COLLECTION).unwrap();
        assert_eq!(c.len(), 6);
        assert_eq!(c.count(&dim_query(2)), 5);
        assert!(c.get("F.1D.0000").is_some());
        assert!(s
            .db_info()
            .starts_with("DATABASE: LatticePolytopes\nThis database contains various classes of lattice polytopes.\n"));
        let mut again = s.clone();
        assert!(matches!(build_collection(&mut again, 2), Err(PipelineError::AlreadyPopulated)));
        assert!(matches!(build_collection(&mut DocStore::new(), 4), Err(PipelineError::Dimension { .. })));
    }

    #[test]
    fn identifies_the_square() {
        let s = small_store();
        let seg = Polytope::from_i64_vertices(&[vec![-1], vec![1]]).unwrap();
        let id = identify_smooth_fano(&product(&seg, &seg), &s).unwrap();
        assert!(id.starts_with("F.2D."));
        let off = Polytope::from_i64_vertices(&[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        assert!(matches!(identify_smooth_fano(&off, &s), Err(PipelineError::NotFound)));
    }

    #[test]
    fn dimension_two_column() {
        let s = small_store();
        let r = decomposition_stats(&s, 2, true).unwrap();
        assert_eq!(r.n_polytopes, 5);
        assert_eq!(r.free_sum_ids.len(), 1);
        assert_eq!(r.skew_bipyramid_ids.len(), 1);
        assert_eq!(r.simplex_sum_ids_by_b[&1].len(), 2);
        assert_eq!(r.simplex_sum_ids_by_b[&2].len(), 1);
        assert_eq!(r.union_simplex_ids.len(), 3);
        assert_eq!(r.total_decomposable_ids.len(), 3);
        let ident = Identifier::new(&s, 1..=2).unwrap();
        for (id, splits) in r.splits.as_ref().unwrap() {
            for split in splits {
                assert_eq!(&replay_split(&ident, split).unwrap(), id, "{split}");
            }
        }
    }

    #[test]
    fn incomplete_corpus_is_refused() {
        let mut s = DocStore::new();
        build_collection(&mut s, 1).unwrap();
        assert!(matches!(
            decomposition_stats(&s, 2, false),
            Err(PipelineError::IncompleteCorpus { dim: 2, expected: 5, found: 0 })
        ));
    }
}
