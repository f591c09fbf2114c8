//! On-disk layout: `manifest.json` plus one NDJSON file per collection at
//! `<group>/<collection>.ndjson`, documents sorted by `_id`.

use std::collections::HashSet;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde_json::{json, Value};

use super::{document_id, Collection, DocStore, DocStoreError, Group, DEFAULT_INDEXES};

const MANIFEST: &str = "manifest.json";
const FORMAT: u64 = 1;

fn check_name(name: &str) -> Result<(), DocStoreError> {
    let ok = !name.is_empty()
        && !name.starts_with('.')
        && name.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'));
    if ok {
        Ok(())
    } else {
        Err(DocStoreError::Corrupt(format!("invalid group or collection name {name:?}")))
    }
}

/// Parses NDJSON; blank lines are skipped. Fails on the first bad line
/// or on an `_id` repeated within the input or already in `existing`.
fn parse_ndjson(input: impl Read, existing: Option<&Collection>) -> Result<Vec<Value>, DocStoreError> {
    let mut docs = Vec::new();
    let mut ids = HashSet::new();
    for (i, line) in BufReader::new(input).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let malformed = |message: String| DocStoreError::Malformed { line: i + 1, message };
        let doc: Value = serde_json::from_str(&line).map_err(|e| malformed(e.to_string()))?;
        let id = document_id(&doc).map_err(|e| malformed(e.to_string()))?.to_string();
        if existing.is_some_and(|c| c.get(&id).is_some()) || !ids.insert(id.clone()) {
            return Err(DocStoreError::DuplicateId(id));
        }
        docs.push(doc);
    }
    Ok(docs)
}

fn write_ndjson(c: &Collection, out: impl Write) -> Result<usize, DocStoreError> {
    let mut w = BufWriter::new(out);
    for doc in c.documents() {
        serde_json::to_writer(&mut w, doc.as_ref()).map_err(std::io::Error::from)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(c.len())
}

fn write_atomic(path: &Path, f: impl FnOnce(&mut fs::File) -> Result<(), DocStoreError>) -> Result<(), DocStoreError> {
    let tmp = path.with_extension("tmp");
    let mut file = fs::File::create(&tmp)?;
    f(&mut file)?;
    file.sync_all()?;
    fs::rename(&tmp, path)?;
    Ok(())
}

impl DocStore {
    /// Loads a store directory; a directory without a manifest is an empty store.
    pub fn open(dir: impl AsRef<Path>) -> Result<Self, DocStoreError> {
        let dir = dir.as_ref();
        let manifest_path = dir.join(MANIFEST);
        if !manifest_path.exists() {
            return Ok(Self::new());
        }
        let manifest: Value = serde_json::from_slice(&fs::read(&manifest_path)?)
            .map_err(|e| DocStoreError::Corrupt(format!("{}: {e}", manifest_path.display())))?;
        let groups = manifest
            .get("groups")
            .and_then(Value::as_object)
            .ok_or_else(|| DocStoreError::Corrupt("manifest has no groups".into()))?;
        let mut store = Self::new();
        for (gname, g) in groups {
            check_name(gname)?;
            let description = g.get("description").and_then(Value::as_str).unwrap_or_default();
            let mut group = Group::new(description);
            let collections = g.get("collections").and_then(Value::as_object).cloned().unwrap_or_default();
            for (cname, meta) in &collections {
                check_name(cname)?;
                let indexes: Vec<String> = meta
                    .get("indexes")
                    .and_then(Value::as_array)
                    .map(|a| a.iter().filter_map(Value::as_str).map(str::to_string).collect())
                    .unwrap_or_default();
                let mut c = Collection::with_indexes(&indexes);
                let path = dir.join(gname).join(format!("{cname}.ndjson"));
                for doc in parse_ndjson(fs::File::open(&path)?, None).map_err(|e| match e {
                    DocStoreError::Malformed { line, message } => {
                        DocStoreError::Corrupt(format!("{}:{line}: {message}", path.display()))
                    }
                    other => other,
                })? {
                    c.insert(doc)?;
                }
                group.collections.insert(cname.clone(), c);
            }
            store.groups.insert(gname.clone(), group);
        }
        Ok(store)
    }

    /// Writes every collection, then the manifest.
    pub fn save(&self, dir: impl AsRef<Path>) -> Result<(), DocStoreError> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir)?;
        let mut groups = serde_json::Map::new();
        for (gname, g) in &self.groups {
            check_name(gname)?;
            let gdir = dir.join(gname);
            fs::create_dir_all(&gdir)?;
            let mut collections = serde_json::Map::new();
            for (cname, c) in &g.collections {
                check_name(cname)?;
                write_atomic(&gdir.join(format!("{cname}.ndjson")), |f| write_ndjson(c, f).map(|_| ()))?;
                collections.insert(cname.clone(), json!({ "indexes": c.indexed_fields().collect::<Vec<_>>() }));
            }
            groups.insert(gname.clone(), json!({ "description": g.description, "collections": collections }));
        }
        let manifest = json!({ "format": FORMAT, "groups": groups });
        write_atomic(&dir.join(MANIFEST), |f| {
            serde_json::to_writer_pretty(&mut *f, &manifest).map_err(std::io::Error::from)?;
            f.write_all(b"\n")?;
            Ok(())
        })
    }

    /// Adds every line of an NDJSON stream, or nothing if any line is bad.
    /// A missing collection is created with the default indexes.
    pub fn import_ndjson(&mut self, input: impl Read, group: &str, name: &str) -> Result<usize, DocStoreError> {
        let existing = self.group(group).ok().and_then(|g| g.collections.get(name));
        let docs = parse_ndjson(input, existing)?;
        if self.collection(group, name).is_err() {
            self.create_collection(group, name, "", json!({}), &DEFAULT_INDEXES)?;
        }
        let n = docs.len();
        let c = self.collection_mut(group, name)?;
        for doc in docs {
            c.insert(doc)?;
        }
        Ok(n)
    }

    pub fn export_ndjson(&self, out: impl Write, group: &str, name: &str) -> Result<usize, DocStoreError> {
        write_ndjson(self.collection(group, name)?, out)
    }

    pub fn import_collection(
        &mut self,
        path: impl AsRef<Path>,
        group: &str,
        name: &str,
    ) -> Result<usize, DocStoreError> {
        self.import_ndjson(fs::File::open(path)?, group, name)
    }

    pub fn export_collection(&self, path: impl AsRef<Path>, group: &str, name: &str) -> Result<usize, DocStoreError> {
        let c = self.collection(group, name)?;
        let mut n = 0;
        write_atomic(path.as_ref(), |f| {
            n = write_ndjson(c, f)?;
            Ok(())
        })?;
        Ok(n)
    }
}
