use std::collections::BTreeSet;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use imog::parse_document;
use imog::service::{router, AppState, ServiceConfig};
use imog_core::AbstractionLevel;
use serde_json::{json, Value};
use tower::ServiceExt;

const FULL: &str = include_str!("../../../fixtures/escooter.imog.json");
const CONTEXT: &str = include_str!("../../../fixtures/escooter-context.imog.json");

fn app(text: &str, config: ServiceConfig) -> Router {
    router(AppState::new(parse_document(text).unwrap(), config))
}

fn context_app() -> Router {
    app(CONTEXT, ServiceConfig::default())
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>, if_match: Option<&str>) -> (StatusCode, Option<String>, Value) {
    let mut req = Request::builder().method(method).uri(uri);
    if let Some(rev) = if_match {
        req = req.header("If-Match", rev);
    }
    let req = match body {
        Some(b) => req.header("content-type", "application/json").body(Body::from(b.to_string())),
        None => req.body(Body::empty()),
    }
    .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let etag = resp.headers().get("etag").map(|v| v.to_str().unwrap().to_string());
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() { Value::Null } else { serde_json::from_slice(&bytes).unwrap() };
    (status, etag, value)
}

fn ids(v: &Value) -> BTreeSet<String> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect()
}

#[tokio::test]
async fn analysis() {
    let (status, etag, body) = call(&context_app(), "GET", "/api/fp/analysis", None, None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(etag.as_deref(), Some("\"0\""));
    assert_eq!(body, json!({"count": 16, "void": false, "dead": []}));

    let levels = [AbstractionLevel::Context].into_iter().collect();
    let filtered = app(FULL, ServiceConfig { levels, groups: true, ..Default::default() });
    let (_, _, body) = call(&filtered, "GET", "/api/fp/analysis", None, None).await;
    assert_eq!(body["count"], 8);
}

#[tokio::test]
async fn decisions() {
    let app = context_app();
    let (_, _, initial) = call(&app, "GET", "/api/fp/decisions", None, None).await;
    assert_eq!(ids(&initial["forcedIn"]).len(), 4);

    let (status, etag, body) = call(&app, "POST", "/api/fp/decisions", Some(json!({"id": "fp.simple", "state": "in"})), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(etag.as_deref(), Some("\"1\""));
    assert_eq!(body["revision"], 1);
    assert!(ids(&body["forcedOut"]).contains("fp.comfort"));
    assert_eq!(body["decisions"], json!({"fp.simple": "in"}));

    // conflict: answered, not committed
    let (status, _, body) = call(&app, "POST", "/api/fp/decisions", Some(json!({"id": "fp.driving", "state": "out"})), None).await;
    assert_eq!(status, StatusCode::OK);
    assert!(body["conflict"].is_object());
    assert_eq!(body["revision"], 1);
    assert_eq!(body["decisions"], json!({"fp.simple": "in"}));
    let (_, etag, _) = call(&app, "GET", "/api/fp/decisions", None, None).await;
    assert_eq!(etag.as_deref(), Some("\"1\""));

    let (_, _, body) = call(&app, "POST", "/api/fp/decisions", Some(json!({"id": "fp.simple", "clear": true})), Some("\"1\"")).await;
    assert_eq!(body["revision"], 2);
    assert_eq!(body["decisions"], json!({}));
    assert_eq!(body["remaining"], 16);
}

#[tokio::test]
async fn decision_errors() {
    let app = context_app();
    let post = |body: Value, rev: Option<&'static str>| {
        let app = app.clone();
        async move { call(&app, "POST", "/api/fp/decisions", Some(body), rev).await }
    };
    assert_eq!(post(json!({"id": "fp.nothing", "state": "in"}), None).await.0, StatusCode::NOT_FOUND);
    assert_eq!(post(json!({"id": "fp.simple", "state": "maybe"}), None).await.0, StatusCode::BAD_REQUEST);
    assert_eq!(post(json!({"id": "fp.simple"}), None).await.0, StatusCode::BAD_REQUEST);
    assert_eq!(post(json!({"id": "fp.simple", "state": "in", "x": 1}), None).await.0, StatusCode::BAD_REQUEST);
    let (status, _, body) = post(json!({"id": "fp.simple", "state": "in"}), Some("\"7\"")).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["error"], "revisionMismatch");
    assert_eq!(post(json!({"id": "fp.simple", "state": "in"}), Some("seven")).await.0, StatusCode::BAD_REQUEST);
    // nothing above changed the session
    let (_, etag, _) = call(&app, "GET", "/api/model", None, None).await;
    assert_eq!(etag.as_deref(), Some("\"0\""));
}

#[tokio::test]
async fn resolve() {
    let app = app(FULL, ServiceConfig::default());
    let (status, etag, body) = call(&app, "POST", "/api/sp/resolve", Some(json!({"blockId": "sp.escooter"})), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["name"], "E-Scooter");
    assert_eq!(etag.as_deref(), Some("\"0\""));

    let sel = json!({"blockId": "sp.escooter", "selections": {"variantChoices": {"sp.escooter": "sp.comfort"}}});
    let (_, etag, body) = call(&app, "POST", "/api/sp/resolve", Some(sel), None).await;
    assert_eq!(body["name"], "Comfort+ E-Scooter");
    assert_eq!(etag.as_deref(), Some("\"1\""));

    let unknown = json!({"blockId": "sp.none"});
    assert_eq!(call(&app, "POST", "/api/sp/resolve", Some(unknown), None).await.0, StatusCode::NOT_FOUND);
    let illegal = json!({"blockId": "sp.escooter", "selections": {"variantChoices": {"sp.escooter": "sp.motor"}}});
    assert_eq!(call(&app, "POST", "/api/sp/resolve", Some(illegal), None).await.0, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn trace_report() {
    let (status, _, body) = call(&app(FULL, ServiceConfig::default()), "GET", "/api/trace/report", None, None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["unallocatedFunctions"], json!([]));
    assert_eq!(body["danglingLinks"], json!([]));
}

#[tokio::test]
async fn model_replacement() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.imog.json");
    std::fs::write(&path, CONTEXT).unwrap();
    let app = app(CONTEXT, ServiceConfig { path: Some(path.clone()), ..Default::default() });

    let (_, _, doc) = call(&app, "GET", "/api/model", None, None).await;
    assert_eq!(doc, serde_json::from_str::<Value>(CONTEXT).unwrap());

    let mut broken = doc.clone();
    broken["functional"]["roots"] = json!(["fp.missing"]);
    let (status, _, body) = call(&app, "POST", "/api/model", Some(broken), None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["error"], "invalidModel");
    let (status, _, body) = call(&app, "POST", "/api/model", Some(json!({"imogVersion": "1.4"})), None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["detail"]["error"], "schema");

    call(&app, "POST", "/api/fp/decisions", Some(json!({"id": "fp.simple", "state": "in"})), None).await;
    assert_eq!(call(&app, "POST", "/api/model", Some(doc.clone()), Some("\"0\"")).await.0, StatusCode::CONFLICT);

    let mut renamed = doc.clone();
    renamed["functional"]["blocks"][0]["name"] = json!("Renamed");
    let (status, etag, body) = call(&app, "POST", "/api/model", Some(renamed.clone()), Some("\"1\"")).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    assert_eq!(etag.as_deref(), Some("\"2\""));
    assert_eq!(body["revision"], 2);
    let saved = std::fs::read_to_string(&path).unwrap();
    assert_eq!(serde_json::from_str::<Value>(&saved).unwrap(), renamed);
    assert!(saved.ends_with("}\n"));
    let (_, _, state) = call(&app, "GET", "/api/fp/decisions", None, None).await;
    assert_eq!(state["decisions"], json!({}));
}

#[tokio::test]
async fn cors_and_reads_are_pure() {
    let app = context_app();
    let req = Request::builder()
        .method("OPTIONS")
        .uri("/api/fp/decisions")
        .header("Origin", "http://localhost:5173")
        .header("Access-Control-Request-Method", "POST")
        .body(Body::empty())
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    assert!(resp.headers().contains_key("access-control-allow-origin"));
    for uri in ["/api/model", "/api/fp/analysis", "/api/fp/decisions", "/api/trace/report"] {
        let (status, etag, _) = call(&app, "GET", uri, None, None).await;
        assert_eq!(status, StatusCode::OK, "{uri}");
        assert_eq!(etag.as_deref(), Some("\"0\""), "{uri}");
    }
    assert_eq!(call(&app, "GET", "/api/nothing", None, None).await.0, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn concurrent_writers_serialize() {
    let app = context_app();
    let ids = ["fp.simple", "fp.loadingCapacity", "fp.carrying", "fp.balancing", "fp.maintaining"];
    let tasks: Vec<_> = ids
        .iter()
        .map(|id| {
            let app = app.clone();
            let body = json!({"id": id, "state": "in"});
            tokio::spawn(async move { call(&app, "POST", "/api/fp/decisions", Some(body), None).await })
        })
        .collect();
    let mut revisions = BTreeSet::new();
    for t in tasks {
        let (status, _, body) = t.await.unwrap();
        assert_eq!(status, StatusCode::OK);
        if body["conflict"].is_null() {
            revisions.insert(body["revision"].as_u64().unwrap());
        }
    }
    let (_, _, state) = call(&app, "GET", "/api/fp/decisions", None, None).await;
    let committed = state["decisions"].as_object().unwrap().len() as u64;
    assert_eq!(state["revision"].as_u64().unwrap(), committed);
    assert_eq!(revisions, (1..=committed).collect());
}
