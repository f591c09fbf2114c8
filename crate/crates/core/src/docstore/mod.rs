//! Embedded document store: groups of collections of JSON documents keyed by `_id`.
//!
//! Every group carries a `type_information` collection holding one document
//! per collection (its description and schema notes). Collections keep hash
//! indexes on declared scalar fields; queries with top-level equalities on
//! indexed fields only visit the matching buckets.

mod persist;
mod query;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use serde_json::{json, Value};
use thiserror::Error;

pub use query::{lookup, values_equal, Condition, Query, QueryError};

use query::exact_integer;

pub const TYPE_INFORMATION: &str = "type_information";

/// Fields indexed when a collection is created without an explicit list.
pub const DEFAULT_INDEXES: [&str; 4] = ["DIM", "N_VERTICES", "N_FACETS", "N_LATTICE_POINTS"];

#[derive(Debug, Error)]
pub enum DocStoreError {
    #[error("unknown collection group {0}")]
    UnknownGroup(String),
    #[error("unknown collection {group}/{collection}")]
    UnknownCollection { group: String, collection: String },
    #[error("collection {group}/{collection} already exists")]
    CollectionExists { group: String, collection: String },
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error("document has no string _id")]
    MissingId,
    #[error("duplicate _id {0}")]
    DuplicateId(String),
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("cursor is exhausted")]
    CursorExhausted,
    #[error("corrupt store: {0}")]
    Corrupt(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SortOrder {
    #[default]
    IdAscending,
    IdDescending,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FindOptions {
    pub skip: usize,
    pub limit: Option<usize>,
    pub sort: SortOrder,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum IndexKey {
    Int(i128),
    Float(u64),
    Str(String),
    Other(String),
}

impl IndexKey {
    fn of(v: &Value) -> Self {
        match v {
            Value::Number(n) => match exact_integer(v) {
                Some(i) => IndexKey::Int(i),
                None => IndexKey::Float(n.as_f64().unwrap_or(f64::NAN).to_bits()),
            },
            Value::String(s) => IndexKey::Str(s.clone()),
            other => IndexKey::Other(other.to_string()),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Collection {
    docs: BTreeMap<String, Arc<Value>>,
    indexes: BTreeMap<String, HashMap<IndexKey, BTreeSet<String>>>,
}

impl Collection {
    pub fn with_indexes<S: AsRef<str>>(fields: &[S]) -> Self {
        let indexes = fields.iter().map(|f| (f.as_ref().to_string(), HashMap::new())).collect();
        Self { docs: BTreeMap::new(), indexes }
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    pub fn indexed_fields(&self) -> impl Iterator<Item = &str> {
        self.indexes.keys().map(String::as_str)
    }

    pub fn get(&self, id: &str) -> Option<Arc<Value>> {
        self.docs.get(id).cloned()
    }

    pub fn documents(&self) -> impl Iterator<Item = &Arc<Value>> {
        self.docs.values()
    }

    pub fn insert(&mut self, doc: Value) -> Result<(), DocStoreError> {
        let id = document_id(&doc)?.to_string();
        if self.docs.contains_key(&id) {
            return Err(DocStoreError::DuplicateId(id));
        }
        for (field, index) in &mut self.indexes {
            if let Some(v) = lookup(&doc, field) {
                index.entry(IndexKey::of(v)).or_default().insert(id.clone());
            }
        }
        self.docs.insert(id, Arc::new(doc));
        Ok(())
    }

    /// Matching documents, using indexes where the query allows.
    pub fn find(&self, q: &Query, opts: FindOptions) -> Vec<Arc<Value>> {
        match self.candidates(q) {
            Some(ids) => {
                let docs = ids.iter().map(|id| &self.docs[id]).filter(|d| q.matches(d));
                paginate(docs, ids.len(), opts)
            }
            None => self.scan(q, opts),
        }
    }

    /// Full scan, ignoring indexes.
    pub fn scan(&self, q: &Query, opts: FindOptions) -> Vec<Arc<Value>> {
        paginate(self.docs.values().filter(|d| q.matches(d)), self.docs.len(), opts)
    }

    pub fn count(&self, q: &Query) -> usize {
        self.find(q, FindOptions::default()).len()
    }

    fn candidates(&self, q: &Query) -> Option<BTreeSet<String>> {
        let mut best: Option<BTreeSet<String>> = None;
        for (path, values) in q.equalities() {
            let Some(index) = self.indexes.get(path) else { continue };
            let mut hits = BTreeSet::new();
            for v in values {
                if let Some(ids) = index.get(&IndexKey::of(v)) {
                    hits.extend(ids.iter().cloned());
                }
            }
            best = Some(match best {
                None => hits,
                Some(prev) => prev.intersection(&hits).cloned().collect(),
            });
        }
        best
    }
}

fn paginate<'a>(
    docs: impl DoubleEndedIterator<Item = &'a Arc<Value>>,
    hint: usize,
    opts: FindOptions,
) -> Vec<Arc<Value>> {
    let limit = opts.limit.unwrap_or(usize::MAX);
    let mut out = Vec::with_capacity(hint.min(limit));
    match opts.sort {
        SortOrder::IdAscending => out.extend(docs.skip(opts.skip).take(limit).cloned()),
        SortOrder::IdDescending => out.extend(docs.rev().skip(opts.skip).take(limit).cloned()),
    }
    out
}

pub fn document_id(doc: &Value) -> Result<&str, DocStoreError> {
    doc.get("_id").and_then(Value::as_str).ok_or(DocStoreError::MissingId)
}

#[derive(Clone, Debug, Default)]
pub struct Group {
    pub description: String,
    collections: BTreeMap<String, Collection>,
}

impl Group {
    fn new(description: &str) -> Self {
        let mut collections = BTreeMap::new();
        collections.insert(TYPE_INFORMATION.to_string(), Collection::default());
        Self { description: description.to_string(), collections }
    }

    pub fn collection_names(&self) -> impl Iterator<Item = &str> {
        self.collections.keys().map(String::as_str)
    }

    /// Description recorded in `type_information`, if any.
    pub fn collection_description(&self, name: &str) -> Option<String> {
        let info = self.collections.get(TYPE_INFORMATION)?.get(name)?;
        info.get("description").and_then(Value::as_str).map(str::to_string)
    }
}

/// Forward-only iterator over a snapshot of a result set.
#[derive(Debug)]
pub struct Cursor {
    docs: Vec<Arc<Value>>,
    pos: usize,
}

impl Cursor {
    pub fn at_end(&self) -> bool {
        self.pos >= self.docs.len()
    }

    #[allow(clippy::should_implement_trait)]
    pub fn next(&mut self) -> Result<Arc<Value>, DocStoreError> {
        let doc = self.docs.get(self.pos).cloned().ok_or(DocStoreError::CursorExhausted)?;
        self.pos += 1;
        Ok(doc)
    }

    pub fn remaining(&self) -> usize {
        self.docs.len().saturating_sub(self.pos)
    }
}

#[derive(Clone, Debug, Default)]
pub struct DocStore {
    groups: BTreeMap<String, Group>,
}

impl DocStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn group_names(&self) -> impl Iterator<Item = &str> {
        self.groups.keys().map(String::as_str)
    }

    pub fn group(&self, name: &str) -> Result<&Group, DocStoreError> {
        self.groups.get(name).ok_or_else(|| DocStoreError::UnknownGroup(name.to_string()))
    }

    /// Creates the group if missing; an existing description is kept unless `description` is non-empty.
    pub fn ensure_group(&mut self, name: &str, description: &str) -> &mut Group {
        let g = self.groups.entry(name.to_string()).or_insert_with(|| Group::new(description));
        if !description.is_empty() {
            g.description = description.to_string();
        }
        g
    }

    /// Creates a collection and records `info` (merged with `description`) in `type_information`.
    pub fn create_collection<S: AsRef<str>>(
        &mut self,
        group: &str,
        name: &str,
        description: &str,
        info: Value,
        indexes: &[S],
    ) -> Result<(), DocStoreError> {
        let g = self.ensure_group(group, "");
        if g.collections.contains_key(name) {
            return Err(DocStoreError::CollectionExists { group: group.into(), collection: name.into() });
        }
        let mut doc = match info {
            Value::Object(m) => m,
            _ => serde_json::Map::new(),
        };
        doc.insert("_id".into(), json!(name));
        doc.insert("description".into(), json!(description));
        g.collections
            .get_mut(TYPE_INFORMATION)
            .expect("every group has type_information")
            .insert(Value::Object(doc))?;
        g.collections.insert(name.to_string(), Collection::with_indexes(indexes));
        Ok(())
    }

    pub fn collection(&self, group: &str, name: &str) -> Result<&Collection, DocStoreError> {
        self.group(group)?
            .collections
            .get(name)
            .ok_or_else(|| DocStoreError::UnknownCollection { group: group.to_string(), collection: name.to_string() })
    }

    fn collection_mut(&mut self, group: &str, name: &str) -> Result<&mut Collection, DocStoreError> {
        let g = self.groups.get_mut(group).ok_or_else(|| DocStoreError::UnknownGroup(group.to_string()))?;
        g.collections
            .get_mut(name)
            .ok_or_else(|| DocStoreError::UnknownCollection { group: group.to_string(), collection: name.to_string() })
    }

    pub fn insert(&mut self, group: &str, name: &str, doc: Value) -> Result<(), DocStoreError> {
        self.collection_mut(group, name)?.insert(doc)
    }

    pub fn get(&self, group: &str, name: &str, id: &str) -> Result<Option<Arc<Value>>, DocStoreError> {
        Ok(self.collection(group, name)?.get(id))
    }

    pub fn db_query(
        &self,
        q: &Query,
        group: &str,
        name: &str,
        opts: FindOptions,
    ) -> Result<Vec<Arc<Value>>, DocStoreError> {
        Ok(self.collection(group, name)?.find(q, opts))
    }

    pub fn db_cursor(&self, q: &Query, group: &str, name: &str, opts: FindOptions) -> Result<Cursor, DocStoreError> {
        Ok(Cursor { docs: self.db_query(q, group, name, opts)?, pos: 0 })
    }

    /// Groups and their collections with descriptions, in lexicographic order.
    pub fn db_info(&self) -> String {
        let mut blocks = Vec::new();
        for (gname, g) in &self.groups {
            let mut text = format!("DATABASE: {gname}\n{}\n", g.description);
            for cname in g.collections.keys().filter(|c| *c != TYPE_INFORMATION) {
                let desc = g.collection_description(cname).unwrap_or_default();
                text.push_str(&format!("\nCollection: {cname}\n{desc}\n"));
            }
            blocks.push(text);
        }
        blocks.join("\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn store() -> DocStore {
        let mut s = DocStore::new();
        s.ensure_group("G", "A group.");
        s.create_collection("G", "C", "A collection.", json!({}), &DEFAULT_INDEXES).unwrap();
        for (id, dim, nf) in [("b", 2, 4), ("a", 2, 3), ("c", 3, 5), ("d", 3, 6)] {
            s.insert("G", "C", json!({"_id": id, "DIM": dim, "N_FACETS": nf})).unwrap();
        }
        s
    }

    #[test]
    fn info_listing() {
        assert_eq!(DocStore::new().db_info(), "");
        let mut s = store();
        assert_eq!(s.db_info(), "DATABASE: G\nA group.\n\nCollection: C\nA collection.\n");
        s.ensure_group("A", "First.");
        let info = s.db_info();
        assert!(info.find("DATABASE: A").unwrap() < info.find("DATABASE: G").unwrap());
    }

    #[test]
    fn queries_sort_by_id() {
        let s = store();
        let q = Query::parse(&json!({"DIM": 2})).unwrap();
        let ids: Vec<String> = s
            .db_query(&q, "G", "C", FindOptions::default())
            .unwrap()
            .iter()
            .map(|d| document_id(d).unwrap().to_string())
            .collect();
        assert_eq!(ids, ["a", "b"]);
        let opts = FindOptions { skip: 1, limit: Some(2), sort: SortOrder::IdDescending };
        let ids: Vec<String> = s
            .db_query(&Query::all(), "G", "C", opts)
            .unwrap()
            .iter()
            .map(|d| document_id(d).unwrap().to_string())
            .collect();
        assert_eq!(ids, ["c", "b"]);
    }

    #[test]
    fn errors() {
        let mut s = store();
        assert!(matches!(s.insert("G", "C", json!({"_id": "a"})), Err(DocStoreError::DuplicateId(id)) if id == "a"));
        assert!(matches!(s.insert("G", "C", json!({"x": 1})), Err(DocStoreError::MissingId)));
        assert!(matches!(s.collection("G", "X"), Err(DocStoreError::UnknownCollection { .. })));
        assert!(matches!(s.collection("X", "C"), Err(DocStoreError::UnknownGroup(_))));
        assert!(matches!(
            s.create_collection("G", "C", "", json!({}), &DEFAULT_INDEXES),
            Err(DocStoreError::CollectionExists { .. })
        ));
    }

    #[test]
    fn cursor_snapshot() {
        let mut s = store();
        let q = Query::parse(&json!({"DIM": 3})).unwrap();
        let mut cur = s.db_cursor(&q, "G", "C", FindOptions::default()).unwrap();
        s.insert("G", "C", json!({"_id": "e", "DIM": 3})).unwrap();
        let mut seen = 0;
        while !cur.at_end() {
            cur.next().unwrap();
            seen += 1;
        }
        assert_eq!(seen, 2);
        assert!(matches!(cur.next(), Err(DocStoreError::CursorExhausted)));
        let empty = s.db_cursor(&Query::parse(&json!({"DIM": 9})).unwrap(), "G", "C", FindOptions::default()).unwrap();
        assert!(empty.at_end());
    }

    #[test]
    fn index_agrees_with_scan() {
        let s = store();
        let c = s.collection("G", "C").unwrap();
        for q in [
            json!({"DIM": 3}),
            json!({"DIM": 3.0, "N_FACETS": {"$in": [5, 7]}}),
            json!({"DIM": {"$in": [2, 3]}, "N_FACETS": {"$gt": 3}}),
            json!({"$or": [{"DIM": 2}, {"N_FACETS": 6}]}),
        ] {
            let q = Query::parse(&q).unwrap();
            assert_eq!(c.find(&q, FindOptions::default()), c.scan(&q, FindOptions::default()));
        }
    }

    #[test]
    fn type_information_is_kept_per_group() {
        let s = store();
        let info = s.get("G", TYPE_INFORMATION, "C").unwrap().unwrap();
        assert_eq!(info["description"], "A collection.");
    }
}
