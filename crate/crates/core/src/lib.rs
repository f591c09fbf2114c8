//! Exact lattice-polytope engine with an embedded document store.
//!
//! The crate is organized bottom-up:
//!
//! * [`exact`]: unbounded integers, rationals, Hermite normal form.
//! * [`polytope`]: the [`Polytope`] type, hulls, duality, lattice invariants.
//! * [`equivalence`]: combinatorial keys and lattice normal forms.
//! * [`constructions`]: products, free sums, skew bipyramids, simplex sums.
//! * [`enumerate`]: brute-force classification of smooth Fano polytopes for `d <= 3`.
//! * [`docstore`]: collections of JSON documents with a small query language.
//! * [`pipeline`]: building the `SmoothReflexive` collection and counting decompositions.

pub mod constructions;
pub mod docstore;
pub mod enumerate;
pub mod equivalence;
pub mod exact;
pub mod pipeline;
pub mod polytope;

pub use constructions::ConstructionError;
pub use docstore::{Cursor, DocStore, DocStoreError, FindOptions, Query, QueryError};
pub use enumerate::{enumerate_smooth_fano, EnumerateError, EnumerationReport};
pub use equivalence::{
    incidence_canonical_key, lattice_isomorphic, normal_form, EquivalenceError, IncidenceCanonicalKey, LatticeProfile,
    NormalForm,
};
pub use exact::{Int, IntMatrix, Rational};
pub use pipeline::{decomposition_stats, identify_smooth_fano, DecompositionReport, PipelineError};
pub use polytope::{Polytope, PolytopeError, PolytopeProperties};
