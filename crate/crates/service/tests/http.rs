use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use seechart_core::api::SESSION_HEADER;
use seechart_core::deconstruct::{render_svg, RenderOptions};
use seechart_core::{ChartSpec, LengthLevel, Pipeline};
use seechart_service::{router, AppState, Config};

fn fixture(name: &str) -> ChartSpec {
    let path = format!("{}/../../fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
    ChartSpec::from_json_validated(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn app() -> Router {
    router(AppState::default())
}

struct Reply {
    status: StatusCode,
    session: Option<String>,
    body: String,
}

impl Reply {
    fn json(&self) -> Value {
        serde_json::from_str(&self.body).unwrap_or_else(|e| panic!("{e}: {}", self.body))
    }

    fn code(&self) -> String {
        self.json()["error"]["code"].as_str().unwrap().to_string()
    }
}

async fn call(
    app: &Router,
    method: &str,
    uri: &str,
    session: Option<&str>,
    body: impl Into<Body>,
) -> Reply {
    let mut req = Request::builder().method(method).uri(uri);
    if let Some(s) = session {
        req = req.header(SESSION_HEADER, s);
    }
    let resp = app
        .clone()
        .oneshot(req.body(body.into()).unwrap())
        .await
        .unwrap();
    let status = resp.status();
    let session = resp
        .headers()
        .get(SESSION_HEADER)
        .map(|v| v.to_str().unwrap().to_string());
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    Reply {
        status,
        session,
        body: String::from_utf8(bytes.to_vec()).unwrap(),
    }
}

async fn post(app: &Router, uri: &str, body: Value) -> Reply {
    call(app, "POST", uri, None, body.to_string()).await
}

#[tokio::test]
async fn health() {
    let r = call(&app(), "GET", "/v1/health", None, Body::empty()).await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(r.json()["status"], "ok");
}

#[tokio::test]
async fn deconstruct_svg_body() {
    let spec = fixture("subaru");
    let svg = render_svg(&spec, &RenderOptions::default());
    let r = call(&app(), "POST", "/v1/deconstruct", None, svg).await;
    assert_eq!(r.status, StatusCode::OK);
    let v = r.json();
    assert_eq!(v["warnings"], json!([]));
    let back: ChartSpec = serde_json::from_value(v).unwrap();
    assert_eq!(back, spec);
}

#[tokio::test]
async fn deconstruct_errors() {
    let app = app();
    let r = call(&app, "POST", "/v1/deconstruct", None, "<svg><g></svg>").await;
    assert_eq!(
        (r.status, r.code().as_str()),
        (StatusCode::BAD_REQUEST, "malformed_svg")
    );
    let r = call(
        &app,
        "POST",
        "/v1/deconstruct",
        None,
        "<svg xmlns=\"http://www.w3.org/2000/svg\"/>",
    )
    .await;
    assert_eq!(
        (r.status, r.code().as_str()),
        (StatusCode::UNPROCESSABLE_ENTITY, "no_chart_found")
    );
}

#[tokio::test]
async fn summarize_is_deterministic_and_matches_the_library() {
    let app = app();
    let spec = fixture("subaru");
    let body = json!({"chart": spec, "level": "long", "seed": 7});
    let a = post(&app, "/v1/summarize", body.clone()).await;
    let b = post(&app, "/v1/summarize", body).await;
    assert_eq!(a.status, StatusCode::OK);
    assert_eq!(a.body, b.body);
    let want = Pipeline::default()
        .summarize(&spec, LengthLevel::Long, 7)
        .unwrap();
    assert_eq!(a.json()["text"], want.text);
    assert_eq!(a.json()["seed"], 7);
}

#[tokio::test]
async fn random_seed_is_echoed() {
    let app = app();
    let spec = fixture("nepal");
    let r = post(&app, "/v1/summarize", json!({"chart": spec})).await;
    let v = r.json();
    assert_eq!(v["length_level"], "moderate");
    let seed = v["seed"].as_u64().unwrap();
    let replay = post(&app, "/v1/summarize", json!({"chart": spec, "seed": seed})).await;
    assert_eq!(replay.json()["text"], v["text"]);
}

#[tokio::test]
async fn malformed_and_invalid_bodies() {
    let app = app();
    let r = call(&app, "POST", "/v1/summarize", None, "{not json").await;
    assert_eq!(
        (r.status, r.code().as_str()),
        (StatusCode::BAD_REQUEST, "malformed_body")
    );
    let r = post(&app, "/v1/summarize", json!({"level": "long"})).await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
    let mut spec = fixture("subaru");
    spec.series[0].points[3].value = f64::NAN;
    // NaN serializes as null, which is not a number
    let r = post(&app, "/v1/summarize", json!({"chart": spec})).await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
    let mut spec = fixture("subaru");
    spec.series[0].points.clear();
    let r = post(&app, "/v1/summarize", json!({"chart": spec})).await;
    assert_eq!(
        (r.status, r.code().as_str()),
        (StatusCode::UNPROCESSABLE_ENTITY, "invalid_chart")
    );
}

#[tokio::test]
async fn stateless_selection() {
    let app = app();
    let spec = fixture("honduras");
    let r = post(
        &app,
        "/v1/selection/summarize",
        json!({"chart": spec, "indices": []}),
    )
    .await;
    assert_eq!(
        (r.status, r.code().as_str()),
        (StatusCode::UNPROCESSABLE_ENTITY, "empty_selection")
    );
    let r = post(
        &app,
        "/v1/selection/summarize",
        json!({"chart": spec, "indices": [40]}),
    )
    .await;
    assert_eq!(
        (r.status, r.code().as_str()),
        (StatusCode::UNPROCESSABLE_ENTITY, "invalid_selection")
    );
    let r = post(
        &app,
        "/v1/selection/summarize",
        json!({"chart": spec, "indices": [3, 4, 5], "seed": 1}),
    )
    .await;
    assert_eq!(r.status, StatusCode::OK);
    let v = r.json();
    assert_eq!(v["description"], "Year 2012 to 2014 are selected.");
    let text = v["summary"]["text"].as_str().unwrap();
    for year in 2009..=2019 {
        if !(2012..=2014).contains(&year) {
            assert!(!text.contains(&year.to_string()), "{year} in {text}");
        }
    }
}

#[tokio::test]
async fn insights_plan_and_answer() {
    let app = app();
    let spec = fixture("honduras");
    let r = post(&app, "/v1/insights", json!({"chart": spec})).await;
    assert_eq!(r.status, StatusCode::OK);
    assert!(r.json()["messages"].as_array().unwrap().len() > 3);
    let r = post(&app, "/v1/plan", json!({"chart": spec, "level": "short"})).await;
    assert_eq!(r.json()["length_level"], "short");
    let r = post(
        &app,
        "/v1/answer",
        json!({"chart": spec, "query": "What is the value of 2011?"}),
    )
    .await;
    assert_eq!(
        r.json()["text"],
        "We have found multiple values for Year 2011. These are, Agriculture is 36.62, Industry is 19.36, Services is 44.02."
    );
}

#[tokio::test]
async fn session_flow() {
    let app = app();
    let spec = fixture("honduras");
    let r = post(&app, "/v1/charts", json!({"chart": spec, "seed": 5})).await;
    assert_eq!(r.status, StatusCode::OK);
    let reg = r.json();
    let sid = r.session.clone().unwrap();
    assert_eq!(reg["session_id"], sid.as_str());
    assert_eq!(reg["index"], 0);
    let id = reg["chart_id"].as_str().unwrap().to_string();
    let s = Some(sid.as_str());

    let t = call(
        &app,
        "GET",
        &format!("/v1/charts/{id}/title"),
        s,
        Body::empty(),
    )
    .await;
    assert!(
        t.json()["text"]
            .as_str()
            .unwrap()
            .starts_with("This is a Multi Line chart"),
        "{}",
        t.body
    );

    // default level, then an explicit one that sticks
    let sum = call(
        &app,
        "GET",
        &format!("/v1/charts/{id}/summary"),
        s,
        Body::empty(),
    )
    .await;
    assert_eq!(sum.json()["length_level"], "moderate");
    assert_eq!(sum.json()["seed"], 5);
    let want = Pipeline::default()
        .summarize(&spec, LengthLevel::Moderate, 5)
        .unwrap()
        .text;
    assert_eq!(sum.json()["text"], want);
    call(
        &app,
        "GET",
        &format!("/v1/charts/{id}/summary?level=short"),
        s,
        Body::empty(),
    )
    .await;
    let info = call(&app, "GET", "/v1/session", s, Body::empty()).await;
    assert_eq!(info.json()["level"], "short");
    assert_eq!(info.json()["active"], id.as_str());

    let p = call(
        &app,
        "GET",
        &format!("/v1/charts/{id}/point?series=2&index=2"),
        s,
        Body::empty(),
    )
    .await;
    assert_eq!(
        p.json()["text"],
        "For Services, in Year 2011, the Share of total employment was, 44.02."
    );
    let p = call(
        &app,
        "GET",
        &format!("/v1/charts/{id}/point?series=0&index=99"),
        s,
        Body::empty(),
    )
    .await;
    assert_eq!(p.status, StatusCode::NOT_FOUND);
    let p = call(
        &app,
        "GET",
        &format!("/v1/charts/{id}/point?series=0"),
        s,
        Body::empty(),
    )
    .await;
    assert_eq!(p.status, StatusCode::BAD_REQUEST);

    let sel = call(
        &app,
        "POST",
        &format!("/v1/charts/{id}/selection/summarize"),
        s,
        json!({"indices": [1, 2, 5]}).to_string(),
    )
    .await;
    assert_eq!(
        sel.json()["description"],
        "Year 2010 to 2011, and 2014 are selected."
    );
    let bad = call(
        &app,
        "POST",
        &format!("/v1/charts/{id}/selection/summarize"),
        s,
        json!({"indices": []}).to_string(),
    )
    .await;
    assert_eq!(bad.status, StatusCode::UNPROCESSABLE_ENTITY);
    // the rejected selection did not replace the stored one
    let cur = call(
        &app,
        "GET",
        &format!("/v1/charts/{id}/selection"),
        s,
        Body::empty(),
    )
    .await;
    assert_eq!(cur.json()["selection"]["indices"], json!([1, 2, 5]));
    let cleared = call(
        &app,
        "DELETE",
        &format!("/v1/charts/{id}/selection"),
        s,
        Body::empty(),
    )
    .await;
    assert_eq!(cleared.json()["selection"], Value::Null);

    let a = call(
        &app,
        "POST",
        &format!("/v1/charts/{id}/answer"),
        s,
        json!({"query": "2011"}).to_string(),
    )
    .await;
    assert!(a.json()["found"].as_bool().unwrap());
}

#[tokio::test]
async fn register_from_source_and_navigate() {
    let app = app();
    let first = post(&app, "/v1/charts", json!({"chart": fixture("subaru")})).await;
    let sid = first.session.unwrap();
    let svg = render_svg(&fixture("nepal"), &RenderOptions::default());
    let second = call(
        &app,
        "POST",
        "/v1/charts",
        Some(&sid),
        json!({"source": svg}).to_string(),
    )
    .await;
    assert_eq!(second.status, StatusCode::OK);
    assert_eq!(second.json()["index"], 1);
    let info = call(&app, "GET", "/v1/session", Some(&sid), Body::empty())
        .await
        .json();
    assert_eq!(info["charts"].as_array().unwrap().len(), 2);
    let neither = call(&app, "POST", "/v1/charts", Some(&sid), "{}").await;
    assert_eq!(neither.status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn session_errors_and_isolation() {
    let app = app();
    let a = post(&app, "/v1/charts", json!({"chart": fixture("subaru")})).await;
    let b = post(&app, "/v1/charts", json!({"chart": fixture("nepal")})).await;
    let id_a = a.json()["chart_id"].as_str().unwrap().to_string();
    let sid_b = b.session.unwrap();
    assert_ne!(a.session.as_deref(), Some(sid_b.as_str()));

    let uri = format!("/v1/charts/{id_a}/title");
    let r = call(&app, "GET", &uri, Some(&sid_b), Body::empty()).await;
    assert_eq!(
        (r.status, r.code().as_str()),
        (StatusCode::NOT_FOUND, "unknown_chart")
    );
    let r = call(&app, "GET", &uri, None, Body::empty()).await;
    assert_eq!(
        (r.status, r.code().as_str()),
        (StatusCode::BAD_REQUEST, "missing_session")
    );
    let r = call(&app, "GET", &uri, Some("no-such-session"), Body::empty()).await;
    assert_eq!(
        (r.status, r.code().as_str()),
        (StatusCode::NOT_FOUND, "unknown_session")
    );
    let r = call(&app, "GET", "/v1/nowhere", None, Body::empty()).await;
    assert_eq!(r.status, StatusCode::NOT_FOUND);
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn concurrent_sessions_do_not_interfere() {
    let app = app();
    let mut tasks = Vec::new();
    for i in 0..16u64 {
        let app = app.clone();
        tasks.push(tokio::spawn(async move {
            let name = ["subaru", "nepal", "honduras"][i as usize % 3];
            let spec = fixture(name);
            let r = post(&app, "/v1/charts", json!({"chart": spec, "seed": i})).await;
            let sid = r.session.clone().unwrap();
            let id = r.json()["chart_id"].as_str().unwrap().to_string();
            let level = ["short", "moderate", "long"][i as usize % 3];
            let mut texts = Vec::new();
            for _ in 0..3 {
                let s = call(
                    &app,
                    "GET",
                    &format!("/v1/charts/{id}/summary?level={level}"),
                    Some(&sid),
                    Body::empty(),
                )
                .await;
                texts.push(s.json()["text"].as_str().unwrap().to_string());
            }
            let want = Pipeline::default()
                .summarize(&spec, level.parse().unwrap(), i)
                .unwrap()
                .text;
            texts.iter().all(|t| *t == want)
        }));
    }
    for t in tasks {
        assert!(t.await.unwrap());
    }
}

#[tokio::test]
async fn template_overrides_from_config() {
    let dir = std::env::temp_dir().join(format!("seechart-svc-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("t.json");
    std::fs::write(
        &path,
        r#"{"DerivedValue": [
            {"text": "Mean {mean:d1}, total {sum}."},
            {"text": "Total {sum}, mean {mean:d1}."}
        ]}"#,
    )
    .unwrap();
    let config = Config {
        templates: Some(path),
        ..Config::default()
    };
    let app = router(AppState::new(config.pipeline().unwrap()));
    let r = post(
        &app,
        "/v1/summarize",
        json!({"chart": fixture("subaru"), "level": "long", "seed": 3}),
    )
    .await;
    let text = r.json()["text"].as_str().unwrap().to_string();
    assert!(
        text.contains("Mean 252.4, total 10601.") || text.contains("Total 10601, mean 252.4."),
        "{text}"
    );
    std::fs::remove_dir_all(dir).ok();
}
