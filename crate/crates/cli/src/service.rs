//! Read-only HTTP/JSON view of a store.
//!
//! Routing lives in [`handle`], a pure function of the request, so the same
//! code answers both the socket server and the tests.

use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, Method, StatusCode, Uri};
use axum::response::{IntoResponse, Response};
use axum::Router;
use fanodb_core::docstore::{DocStore, DocStoreError, FindOptions, Query};
use serde_json::{json, Value};

fn error(status: u16, message: impl std::fmt::Display) -> (u16, String) {
    (status, json!({ "error": message.to_string() }).to_string())
}

fn info(store: &DocStore) -> Value {
    let mut groups = serde_json::Map::new();
    for gname in store.group_names() {
        let g = store.group(gname).expect("listed group");
        let collections: Vec<Value> =
            g.collection_names().map(|c| json!({ "name": c, "description": g.collection_description(c) })).collect();
        groups.insert(gname.to_string(), json!({ "description": g.description, "collections": collections }));
    }
    json!({ "info": store.db_info(), "groups": groups })
}

fn store_error(e: DocStoreError) -> (u16, String) {
    match e {
        DocStoreError::UnknownGroup(_) | DocStoreError::UnknownCollection { .. } => error(404, e),
        DocStoreError::Query(_) => error(400, e),
        other => error(500, other),
    }
}

fn query(store: &DocStore, group: &str, collection: &str, body: &[u8]) -> (u16, String) {
    let body: Value = match serde_json::from_slice(body) {
        Ok(v) => v,
        Err(e) => return error(400, format!("request body: {e}")),
    };
    let q = match body.get("q").map(Query::parse).unwrap_or_else(|| Ok(Query::all())) {
        Ok(q) => q,
        Err(e) => return error(400, e),
    };
    let count = |key: &str| match body.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => v.as_u64().map(|n| Some(n as usize)).ok_or_else(|| format!("{key} must be a non-negative integer")),
    };
    let (skip, limit) = match (count("skip"), count("limit")) {
        (Ok(s), Ok(l)) => (s.unwrap_or(0), l),
        (Err(e), _) | (_, Err(e)) => return error(400, e),
    };
    let all = match store.db_query(&q, group, collection, FindOptions::default()) {
        Ok(all) => all,
        Err(e) => return store_error(e),
    };
    let documents: Vec<&Value> = all.iter().skip(skip).take(limit.unwrap_or(usize::MAX)).map(|d| d.as_ref()).collect();
    (200, json!({ "total": all.len(), "documents": documents }).to_string())
}

/// `(status, JSON body)` for one request.
pub fn handle(store: &DocStore, method: &str, path: &str, body: &[u8]) -> (u16, String) {
    let parts: Vec<&str> = path.trim_matches('/').split('/').collect();
    match (method, parts.as_slice()) {
        ("GET", ["info"]) => (200, info(store).to_string()),
        ("POST", [group, collection, "query"]) => query(store, group, collection, body),
        ("GET", [group, collection, id]) => match store.get(group, collection, id) {
            Ok(Some(doc)) => (200, doc.to_string()),
            Ok(None) => error(404, format!("no document {id} in {group}/{collection}")),
            Err(e) => store_error(e),
        },
        (_, ["info"]) | (_, [_, _, _]) => error(405, format!("method {method} not allowed")),
        _ => error(404, format!("no route for {path}")),
    }
}

async fn route(State(store): State<Arc<DocStore>>, method: Method, uri: Uri, body: Bytes) -> Response {
    let (status, body) = handle(&store, method.as_str(), uri.path(), &body);
    let status = StatusCode::from_u16(status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

pub fn router(store: Arc<DocStore>) -> Router {
    Router::new().fallback(route).with_state(store)
}

pub async fn serve(store: Arc<DocStore>, listener: tokio::net::TcpListener) -> std::io::Result<()> {
    axum::serve(listener, router(store)).await
}
