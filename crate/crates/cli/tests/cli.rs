use std::io::Write;
use std::process::{Command, Output, Stdio};

use seechart_core::deconstruct::{render_svg, to_vegalite, RenderOptions};
use seechart_core::{ChartSpec, LengthLevel, Pipeline};

fn fixture_path(name: &str) -> String {
    format!("{}/../../fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

fn fixture(name: &str) -> ChartSpec {
    ChartSpec::from_json_validated(&std::fs::read_to_string(fixture_path(name)).unwrap()).unwrap()
}

fn seechart(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seechart"))
        .args(args)
        .env_remove("SEECHART_SERVER")
        .output()
        .unwrap()
}

fn seechart_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_seechart"))
        .args(args)
        .env_remove("SEECHART_SERVER")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn temp_file(name: &str, contents: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("seechart-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn short_summary_is_three_sentences_and_deterministic() {
    let path = fixture_path("subaru");
    let args = ["summarize", &path, "--length", "short", "--seed", "7"];
    let a = seechart(&args);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(stdout(&a), stdout(&seechart(&args)));
    let want = Pipeline::default()
        .summarize(&fixture("subaru"), LengthLevel::Short, 7)
        .unwrap();
    assert_eq!(want.sentences.len(), 3);
    assert_eq!(stdout(&a), format!("{}\n", want.text));
    // an explicit seed is not echoed
    assert!(stderr(&a).is_empty());
}

#[test]
fn random_seed_is_printed_and_replays() {
    let path = fixture_path("nepal");
    let o = seechart(&["summarize", &path]);
    assert!(o.status.success());
    let err = stderr(&o);
    let seed = err.trim().strip_prefix("seed: ").expect(&err);
    let again = seechart(&["summarize", &path, "--seed", seed]);
    assert_eq!(stdout(&again), stdout(&o));
}

#[test]
fn answer_multi_value_question() {
    let path = fixture_path("honduras");
    let o = seechart(&["answer", &path, "--query", "What is the value of 2011?"]);
    assert_eq!(
        stdout(&o),
        "We have found multiple values for Year 2011. These are, Agriculture is 36.62, Industry is 19.36, Services is 44.02.\n"
    );
    let j = seechart(&["answer", &path, "--query", "2011", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&j.stdout).unwrap();
    assert_eq!(v["found"], true);
}

#[test]
fn partial_summary_of_first_three_points() {
    let path = fixture_path("honduras");
    let o = seechart(&[
        "summarize",
        &path,
        "--select",
        "0-2",
        "--seed",
        "1",
        "--json",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["description"], "Year 2009 to 2011 are selected.");
    let text = v["summary"]["text"].as_str().unwrap();
    for year in 2012..=2019 {
        assert!(!text.contains(&year.to_string()), "{year}: {text}");
    }
    let series = seechart(&[
        "summarize",
        &path,
        "--select",
        "0-2",
        "--series",
        "1",
        "--seed",
        "1",
    ]);
    assert!(stdout(&series).contains("Industry"));
}

#[test]
fn deconstruct_svg_and_vegalite_files() {
    let spec = fixture("nepal");
    let svg = temp_file("nepal.svg", &render_svg(&spec, &RenderOptions::default()));
    let o = seechart(&["deconstruct", svg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["warnings"], serde_json::json!([]));
    let back: ChartSpec = serde_json::from_value(v).unwrap();
    assert_eq!(back, spec);

    let vl = temp_file(
        "subaru.vl.json",
        &to_vegalite(&fixture("subaru")).to_string(),
    );
    let o = seechart(&["summarize", vl.to_str().unwrap(), "--seed", "3"]);
    assert!(stdout(&o).contains("829"));

    let geo = seechart(&["deconstruct", svg.to_str().unwrap(), "--geometry"]);
    let back: ChartSpec = serde_json::from_slice(&geo.stdout).unwrap();
    // whole-number ticks, two-decimal data
    assert!(back.series[0].values().iter().all(|v| v.fract() == 0.0));
}

#[test]
fn reads_stdin() {
    let spec = fixture("subaru");
    let o = seechart_stdin(&["summarize", "-", "--seed", "2"], &spec.to_json());
    assert!(o.status.success());
    assert!(stdout(&o).contains("Sep 2018"));
}

#[test]
fn insights_and_plan_emit_json() {
    let path = fixture_path("subaru");
    let o = seechart(&["insights", &path]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["category"], "IntroEncoding");
    let o = seechart(&["plan", &path, "--length", "long"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["length_level"], "long");
}

#[test]
fn usage_errors_exit_1() {
    for args in [
        vec!["summarize"],
        vec!["summarize", "x.json", "--length", "huge"],
        vec!["frobnicate"],
        vec!["summarize", "x.json", "--series", "1"],
    ] {
        let o = seechart(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
    }
    let path = fixture_path("subaru");
    let o = seechart(&[
        "--server",
        "http://127.0.0.1:9",
        "summarize",
        &path,
        "--templates",
        "t.json",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error[usage]"));
    assert_eq!(seechart(&["--help"]).status.code(), Some(0));
}

#[test]
fn input_errors_exit_2_with_stable_codes() {
    let cases: Vec<(Vec<String>, &str)> = vec![
        (
            vec!["summarize".into(), "/no/such/file.json".into()],
            "unreadable_input",
        ),
        (
            vec![
                "summarize".into(),
                temp_file("bad.json", "{\"chartType\": 3}")
                    .to_str()
                    .unwrap()
                    .into(),
            ],
            "malformed_spec",
        ),
        (
            vec![
                "summarize".into(),
                fixture_path("honduras"),
                "--select".into(),
                "5-1".into(),
            ],
            "invalid_selection",
        ),
        (
            vec![
                "summarize".into(),
                fixture_path("honduras"),
                "--select".into(),
                "50".into(),
            ],
            "invalid_selection",
        ),
        (
            vec![
                "deconstruct".into(),
                temp_file("bad.svg", "<svg><g></svg>")
                    .to_str()
                    .unwrap()
                    .into(),
            ],
            "malformed_svg",
        ),
    ];
    for (args, code) in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let o = seechart(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(
            stderr(&o).starts_with(&format!("error[{code}]")),
            "{}",
            stderr(&o)
        );
    }
}

#[test]
fn unreachable_server_exits_3() {
    let path = fixture_path("subaru");
    let o = seechart(&[
        "--server",
        "http://127.0.0.1:9",
        "summarize",
        &path,
        "--seed",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).starts_with("error[service_unavailable]"));
}

#[test]
fn server_mode_matches_local() {
    let rt = tokio::runtime::Runtime::new().unwrap();
    let url = rt.block_on(async {
        let l = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
        let url = format!("http://{}", l.local_addr().unwrap());
        tokio::spawn(seechart_service::serve_on(
            l,
            seechart_service::AppState::default(),
        ));
        url
    });
    let path = fixture_path("honduras");
    for args in [
        vec![
            "summarize",
            path.as_str(),
            "--length",
            "long",
            "--seed",
            "9",
        ],
        vec!["answer", path.as_str(), "--query", "maximum"],
        vec!["insights", path.as_str()],
        vec!["plan", path.as_str(), "--length", "short"],
        vec!["deconstruct", path.as_str()],
    ] {
        let local = seechart(&args);
        let mut remote_args = vec!["--server", url.as_str()];
        remote_args.extend(&args);
        let remote = seechart(&remote_args);
        assert!(remote.status.success(), "{args:?}: {}", stderr(&remote));
        assert_eq!(stdout(&local), stdout(&remote), "{args:?}");
    }
    let o = seechart(&[
        "--server",
        &url,
        "summarize",
        &path,
        "--select",
        "",
        "--seed",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}
