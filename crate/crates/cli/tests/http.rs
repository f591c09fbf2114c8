use std::sync::Arc;

use fanodb_cli::service::{handle, serve};
use fanodb_core::docstore::DocStore;
use fanodb_core::pipeline::build_collection;
use serde_json::Value;
use tokio::io::{AsyncReadExt, AsyncWriteExt};

async fn request(addr: std::net::SocketAddr, method: &str, path: &str, body: &str) -> (u16, String) {
    let mut stream = tokio::net::TcpStream::connect(addr).await.unwrap();
    let req = format!(
        "{method} {path} HTTP/1.1\r\nHost: test\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
        body.len()
    );
    stream.write_all(req.as_bytes()).await.unwrap();
    let mut raw = String::new();
    stream.read_to_string(&mut raw).await.unwrap();
    let status = raw[9..12].parse().unwrap();
    let body = raw.split("\r\n\r\n").nth(1).unwrap_or_default().to_string();
    (status, body)
}

#[tokio::test(flavor = "multi_thread")]
async fn serves_the_built_store() {
    let mut store = DocStore::new();
    build_collection(&mut store, 2).unwrap();
    let store = Arc::new(store);
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(serve(store.clone(), listener));

    let (status, body) = request(addr, "POST", "/LatticePolytopes/SmoothReflexive/query", r#"{"q":{"DIM":2}}"#).await;
    assert_eq!(status, 200);
    let v: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v["total"], 5);
    assert_eq!(body, handle(&store, "POST", "/LatticePolytopes/SmoothReflexive/query", br#"{"q":{"DIM":2}}"#).1);

    let pentagon = v["documents"].as_array().unwrap().iter().find(|d| d["N_VERTICES"] == 5).unwrap();
    let id = pentagon["_id"].as_str().unwrap();
    let (status, body) = request(addr, "GET", &format!("/LatticePolytopes/SmoothReflexive/{id}"), "").await;
    assert_eq!(status, 200);
    let doc: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(doc["F_VECTOR"], serde_json::json!([5, 5]));

    let (status, _) =
        request(addr, "POST", "/LatticePolytopes/SmoothReflexive/query", r#"{"q":{"DIM":{"$frobnicate":2}}}"#).await;
    assert_eq!(status, 400);
    let (status, _) = request(addr, "GET", "/LatticePolytopes/SmoothReflexive/F.9D.0000", "").await;
    assert_eq!(status, 404);
    let (status, body) = request(addr, "GET", "/info", "").await;
    assert_eq!(status, 200);
    assert!(body.contains("SmoothReflexive"));
}
