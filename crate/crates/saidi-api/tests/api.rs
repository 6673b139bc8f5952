use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use saidi_api::{app, Config};
use serde_json::{json, Value};
use tower::ServiceExt;

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/");

fn read(name: &str) -> String {
    std::fs::read_to_string(format!("{DATA}{name}")).unwrap()
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<String>) -> (StatusCode, Value) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map(Body::from).unwrap_or_else(Body::empty))
        .unwrap();
    let res = app.clone().oneshot(req).await.unwrap();
    let status = res.status();
    let bytes = res.into_body().collect().await.unwrap().to_bytes();
    let v = if bytes.is_empty() { Value::Null } else { serde_json::from_slice(&bytes).unwrap() };
    (status, v)
}

async fn session(app: &Router, doc: String) -> String {
    let (s, v) = call(app, "POST", "/sessions", Some(doc)).await;
    assert_eq!(s, StatusCode::CREATED, "{v}");
    v["id"].as_str().unwrap().to_string()
}

#[tokio::test]
async fn saidi_and_errors() {
    let app = app(Config::default());
    let id = session(&app, read("ring3.json")).await;
    let (s, v) = call(&app, "GET", &format!("/sessions/{id}/saidi?p=0.1"), None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["normalized"], 0.0301);
    assert_eq!(v["mode"], "exact");
    let (s, v) = call(&app, "GET", &format!("/sessions/{id}/saidi?mode=k-order&k=2&p=0.1"), None).await;
    assert_eq!((s, v["k"].as_u64()), (StatusCode::OK, Some(2)));

    for q in ["p=1.5", "p=abc", "mode=fast"] {
        let (s, _) = call(&app, "GET", &format!("/sessions/{id}/saidi?{q}"), None).await;
        assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY, "{q}");
    }
    let (s, _) = call(&app, "GET", "/sessions/nope/saidi", None).await;
    assert_eq!(s, StatusCode::NOT_FOUND);

    let bad = read("ring3.json").replacen("\"p_fail\": 0.1", "\"p_fail\": 2", 1);
    let (s, v) = call(&app, "POST", "/sessions", Some(bad)).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["path"], "edges[0].p_fail");
    let (s, _) = call(&app, "POST", "/sessions", Some("{".into())).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
}

#[tokio::test]
async fn risks_table() {
    let app = app(Config::default());
    let id = session(&app, read("feeder33.json")).await;
    let (s, v) = call(&app, "GET", &format!("/sessions/{id}/risks?top=5"), None).await;
    assert_eq!(s, StatusCode::OK);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0]["cutset"]["edges"], json!(["l1"]));
    assert_eq!(rows[0]["disconnected_nodes"].as_array().unwrap().len(), 32);
    let (_, v) = call(&app, "GET", &format!("/sessions/{id}/risks?top=0"), None).await;
    assert_eq!(v, json!([]));
    let (s, _) = call(&app, "GET", &format!("/sessions/{id}/risks?order=4"), None).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
}

#[tokio::test]
async fn whatif_commit_undo() {
    let app = app(Config::default());
    let id = session(&app, read("ring3.json")).await;
    let saidi = |app: Router, id: String| async move { call(&app, "GET", &format!("/sessions/{id}/saidi"), None).await.1["saidi"].clone() };
    let before = saidi(app.clone(), id.clone()).await;

    let edge = json!({"u": "s", "v": "v2", "p_fail": 0.1, "cost": 2});
    let (s, a) = call(&app, "POST", &format!("/sessions/{id}/whatif"), Some(edge.to_string())).await;
    assert_eq!(s, StatusCode::OK, "{a}");
    let (_, b) = call(&app, "POST", &format!("/sessions/{id}/whatif"), Some(edge.to_string())).await;
    assert_eq!(a, b, "what-if does not change the session");
    assert!(a["delta"].as_f64().unwrap() > 0.0);
    assert_eq!(a["saidi_before"], before);
    assert!(a["updated_top_risks"].is_array());
    assert_eq!(saidi(app.clone(), id.clone()).await, before);

    let (s, v) = call(&app, "POST", &format!("/sessions/{id}/commit"), Some(json!({ "edge": edge }).to_string())).await;
    assert_eq!(s, StatusCode::OK, "{v}");
    assert_eq!(saidi(app.clone(), id.clone()).await, a["new_saidi"]);
    let (_, audit) = call(&app, "GET", &format!("/sessions/{id}/audit"), None).await;
    assert_eq!(audit["hubs"], 2, "v2 became a hub");

    let (s, _) = call(&app, "POST", &format!("/sessions/{id}/undo"), None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(saidi(app.clone(), id.clone()).await, before);
    let (s, _) = call(&app, "POST", &format!("/sessions/{id}/undo"), None).await;
    assert_eq!(s, StatusCode::CONFLICT);

    let bad = json!({"u": "s", "v": "zz", "p_fail": 0.1});
    let (s, _) = call(&app, "POST", &format!("/sessions/{id}/whatif"), Some(bad.to_string())).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
}

#[tokio::test]
async fn undo_stack_is_capped() {
    let app = app(Config { undo_depth: 2, ..Config::default() });
    let id = session(&app, read("ring3.json")).await;
    for _ in 0..4 {
        let body = json!({"edge": {"u": "v1", "v": "v3", "p_fail": 0.2}});
        let (_, v) = call(&app, "POST", &format!("/sessions/{id}/commit"), Some(body.to_string())).await;
        assert!(v["undo_depth"].as_u64().unwrap() <= 2);
    }
    let codes: Vec<StatusCode> = undo_codes(&app, &id, 3).await;
    assert_eq!(codes, [StatusCode::OK, StatusCode::OK, StatusCode::CONFLICT]);
}

async fn undo_codes(app: &Router, id: &str, n: usize) -> Vec<StatusCode> {
    let mut out = Vec::new();
    for _ in 0..n {
        out.push(call(app, "POST", &format!("/sessions/{id}/undo"), None).await.0);
    }
    out
}

#[tokio::test]
async fn suggest_uses_document_candidates() {
    let app = app(Config::default());
    let mut doc: Value = serde_json::from_str(&read("ring3.json")).unwrap();
    doc["candidates"] = json!([
        {"id": "a", "u": "s", "v": "v2", "p_fail": 0.1, "cost": 1},
        {"id": "b", "u": "v1", "v": "v3", "p_fail": 0.1, "cost": 1}
    ]);
    let id = session(&app, doc.to_string()).await;
    let (s, v) = call(&app, "GET", &format!("/sessions/{id}/suggest?budget=0"), None).await;
    assert_eq!(s, StatusCode::OK, "{v}");
    assert_eq!(v["steps"], json!([]));
    let (_, v) = call(&app, "GET", &format!("/sessions/{id}/suggest?budget=1"), None).await;
    assert_eq!(v["steps"].as_array().unwrap().len(), 1);
    assert_eq!(v["steps"][0]["delta"]["candidate"]["id"], "a");
    let (s, _) = call(&app, "GET", &format!("/sessions/{id}/suggest"), None).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    // the document comes back with its candidates
    let (_, back) = call(&app, "GET", &format!("/sessions/{id}"), None).await;
    assert_eq!(back["candidates"], doc["candidates"]);
}

#[tokio::test]
async fn long_exact_runs_are_polled() {
    let app = app(Config { async_edges: 3, ..Config::default() });
    let id = session(&app, read("ring3.json")).await;
    let (s, v) = call(&app, "GET", &format!("/sessions/{id}/saidi?p=0.1"), None).await;
    assert_eq!(s, StatusCode::ACCEPTED);
    let poll = v["poll"].as_str().unwrap().to_string();
    let mut got = None;
    for _ in 0..200 {
        let (s, v) = call(&app, "GET", &poll, None).await;
        if s == StatusCode::OK {
            got = Some(v);
            break;
        }
        assert_eq!(s, StatusCode::ACCEPTED);
        tokio::time::sleep(std::time::Duration::from_millis(10)).await;
    }
    assert_eq!(got.unwrap()["normalized"], 0.0301);
    // k-order answers at once
    let (s, _) = call(&app, "GET", &format!("/sessions/{id}/saidi?mode=k-order"), None).await;
    assert_eq!(s, StatusCode::OK);
    let (s, _) = call(&app, "GET", "/jobs/unknown", None).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn token_and_session_cap() {
    let app = app(Config { token: Some("t0k".into()), session_cap: 1, ..Config::default() });
    let (s, _) = call(&app, "POST", "/sessions", Some(read("ring3.json"))).await;
    assert_eq!(s, StatusCode::UNAUTHORIZED);
    let req = |doc: String| {
        Request::builder()
            .method("POST")
            .uri("/sessions")
            .header("authorization", "Bearer t0k")
            .body(Body::from(doc))
            .unwrap()
    };
    assert_eq!(app.clone().oneshot(req(read("ring3.json"))).await.unwrap().status(), StatusCode::CREATED);
    assert_eq!(app.clone().oneshot(req(read("ring3.json"))).await.unwrap().status(), StatusCode::SERVICE_UNAVAILABLE);
}

#[tokio::test]
async fn answers_match_the_cli() {
    let app = app(Config::default());
    let id = session(&app, read("feeder33.json")).await;
    let (_, v) = call(&app, "GET", &format!("/sessions/{id}/saidi"), None).await;
    let out = std::process::Command::new(env!("CARGO"))
        .args(["run", "-q", "-p", "saidi-cli", "--", "analyze", "--json"])
        .arg(format!("{DATA}feeder33.json"))
        .output()
        .unwrap();
    let cli: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v, cli);
}
