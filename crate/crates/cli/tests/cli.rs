use std::fs;
use std::net::TcpListener;
use std::path::Path;
use std::process::{Command, Output};

fn tacsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tacsim")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn run_game(dir: &Path, seed: &str) -> Output {
    tacsim(&["run-game", "--seed", seed, "--agents", "tota,random×7", "--out", dir.to_str().unwrap()])
}

#[test]
fn run_game_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_game(dir.path(), "42");
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["transactions.jsonl", "result.json", "scores.txt"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let result: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("result.json")).unwrap()).unwrap();
    assert_eq!(result["seed"], 42);
    assert_eq!(result["agents"].as_array().unwrap().len(), 8);
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.contains("tota") && stdout.contains("digest"));
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(code(&tacsim(&[])), 1);
    assert_eq!(code(&tacsim(&["frobnicate"])), 1);
    assert_eq!(code(&tacsim(&["run-game", "--seed", "minus-one"])), 1);
    assert_eq!(code(&tacsim(&["run-game", "--agents", "tota,random×6"])), 1);
    assert_eq!(code(&tacsim(&["run-game", "--agents", "tota,wizard×7"])), 1);
    assert_eq!(code(&tacsim(&["run-game", "--time-scale", "-1"])), 1);
    assert_eq!(code(&tacsim(&["agent", "--kind", "wizard", "--connect", "127.0.0.1:1"])), 1);
    assert_eq!(code(&tacsim(&["--help"])), 0);
}

#[test]
fn unreachable_external_agent_exits_2() {
    // Reserve a port, then free it so nothing listens there.
    let port = TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let dir = tempfile::tempdir().unwrap();
    let agents = format!("external:127.0.0.1:{port},random×7");
    let o = tacsim(&["run-game", "--agents", &agents, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("cannot reach agent"));
}

#[test]
fn replay_verify_detects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run_game(dir.path(), "7")), 0);
    let log = dir.path().join("transactions.jsonl");
    let log_s = log.to_str().unwrap();
    assert_eq!(code(&tacsim(&["replay-verify", log_s])), 0);
    assert_eq!(code(&tacsim(&["replay-verify", log_s, "--seed", "8"])), 2);
    assert_eq!(code(&tacsim(&["replay-verify", log_s, "--agents", "random×8"])), 2);

    let text = fs::read_to_string(&log).unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    let mut tx: serde_json::Value = serde_json::from_str(&lines[0]).unwrap();
    tx["price"] = (tx["price"].as_i64().unwrap() + 1).into();
    lines[0] = tx.to_string();
    let tampered = dir.path().join("tampered.jsonl");
    fs::write(&tampered, lines.join("\n") + "\n").unwrap();
    let o = tacsim(&["replay-verify", tampered.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("FAIL"));

    assert_eq!(code(&tacsim(&["replay-verify", "/nonexistent/log.jsonl"])), 2);
}

#[test]
fn tournament_summary_matches_game_results() {
    let dir = tempfile::tempdir().unwrap();
    let o = tacsim(&["run-tournament", "--games", "3", "--seed", "10", "--agents", "tota,greedy,random×6", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));

    let mut by_kind: std::collections::BTreeMap<&str, Vec<i64>> = Default::default();
    for i in 0..3 {
        let r: serde_json::Value =
            serde_json::from_slice(&fs::read(dir.path().join(format!("game-{i:03}/result.json"))).unwrap()).unwrap();
        assert_eq!(r["seed"], 10 + i);
        for a in r["agents"].as_array().unwrap() {
            let kind = match a["agent_id"].as_u64().unwrap() {
                0 => "tota",
                1 => "greedy",
                _ => "random",
            };
            by_kind.entry(kind).or_default().push(a["score"].as_i64().unwrap());
        }
    }
    let summary: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("summary.json")).unwrap()).unwrap();
    let rows = summary["kinds"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for row in rows {
        let scores = &by_kind[row["kind"].as_str().unwrap()];
        let mean = scores.iter().sum::<i64>() as f64 / scores.len() as f64;
        assert!((row["mean"].as_f64().unwrap() - mean).abs() < 1e-9);
        assert_eq!(row["min"].as_i64().unwrap(), *scores.iter().min().unwrap());
        assert_eq!(row["max"].as_i64().unwrap(), *scores.iter().max().unwrap());
    }
    let csv = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 3);
}

#[test]
fn empty_tournament() {
    let dir = tempfile::tempdir().unwrap();
    let o = tacsim(&["run-tournament", "--games", "0", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let summary: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["kinds"].as_array().unwrap().len(), 0);
}

#[test]
fn solve_reads_an_instance() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("instance.json");
    fs::write(
        &inst,
        r#"{"preferences":[{"preferred_arrival":1,"preferred_departure":3,"hotel_premium":100,"event_premiums":[0,50,0]}],
            "holdings":{"flight_in:1":1},
            "prices":{"flight_out:3":40,"hotel:alt:1":0,"hotel:alt:2":0}}"#,
    )
    .unwrap();
    for method in ["greedy", "exact"] {
        let o = tacsim(&["solve", inst.to_str().unwrap(), "--method", method]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        // Owned inbound flight, bought outbound, free alternative hotel.
        assert_eq!(v["objective"], 1000 - 40);
        assert_eq!(v["packages"][0]["hotel"], "alt");
    }
    fs::write(&inst, "{not json").unwrap();
    assert_eq!(code(&tacsim(&["solve", inst.to_str().unwrap()])), 2);
}

#[test]
fn agent_subcommand_plays_a_socket_seat() {
    let port = TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap().to_string();
    let server = std::thread::spawn(move || {
        tacsim(&["run-game", "--seed", "42", "--port", &port.to_string(), "--agents", "socket,random×7", "--out", &out])
    });
    let addr = format!("127.0.0.1:{port}");
    let mut agent = None;
    for _ in 0..100 {
        let o = tacsim(&["agent", "--kind", "tota", "--connect", &addr]);
        if code(&o) == 0 {
            agent = Some(o);
            break;
        }
        std::thread::sleep(std::time::Duration::from_millis(50));
    }
    let agent = agent.expect("agent connected");
    let server = server.join().unwrap();
    assert_eq!(code(&server), 0, "{}", String::from_utf8_lossy(&server.stderr));
    assert_eq!(String::from_utf8_lossy(&agent.stdout).lines().count(), 8);

    // Same game as with TOTA in-process.
    let local = tempfile::tempdir().unwrap();
    assert_eq!(code(&run_game(local.path(), "42")), 0);
    assert_eq!(
        fs::read(dir.path().join("transactions.jsonl")).unwrap(),
        fs::read(local.path().join("transactions.jsonl")).unwrap()
    );
}
