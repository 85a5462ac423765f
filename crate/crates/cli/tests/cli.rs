use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn fanforge(args: &[&str], stdin: Option<&[u8]>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_fanforge"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or_default()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn tmp(name: &str) -> PathBuf {
    let d = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&d).unwrap();
    d.join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn rank_one_fan() {
    let o = fanforge(&["fan", "--type", "A", "--rank", "1"], None);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "{\"dim\":1,\"rays\":[[1],[-1]],\"cones\":[[0],[1]],\"labels\":[\"(1)\",\"(-1)\"]}\n"
    );
}

#[test]
fn snake_fan_piped_into_report() {
    let seed = tmp("snake.json");
    std::fs::write(
        &seed,
        r#"{"triangulation": {"polygon": 6, "diagonals": [[2,6],[2,5],[3,5]]}}"#,
    )
    .unwrap();
    let fan = fanforge(
        &[
            "fan",
            "--type",
            "A",
            "--rank",
            "3",
            "--seed",
            seed.to_str().unwrap(),
        ],
        None,
    );
    assert!(fan.status.success());
    let rep = fanforge(&["typecone", "--report"], Some(&fan.stdout));
    assert!(
        stdout(&rep).contains("facets=6 expected=6 uerp=true"),
        "{}",
        stdout(&rep)
    );
}

#[test]
fn verify_accepts_realizations_and_rejects_corruption() {
    let (fan, tc, roff, bad) = (
        tmp("d4.json"),
        tmp("d4tc.json"),
        tmp("d4.roff"),
        tmp("d4bad.roff"),
    );
    let s = |p: &PathBuf| p.to_str().unwrap().to_string();
    assert!(
        fanforge(&["fan", "--type", "D", "--rank", "4", "-o", &s(&fan)], None)
            .status
            .success()
    );
    assert!(
        fanforge(&["typecone", "--fan", &s(&fan), "-o", &s(&tc)], None)
            .status
            .success()
    );
    let realize = [
        "realize",
        "--fan",
        &s(&fan),
        "--typecone",
        &s(&tc),
        "--c",
        "1,2,3,1/2,5,1,1,1,2,3,1,1",
        "-o",
        &s(&roff),
    ];
    assert!(fanforge(&realize, None).status.success());
    let ok = fanforge(
        &["verify", "--fan", &s(&fan), "--polytope", &s(&roff)],
        None,
    );
    assert_eq!(
        ok.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&ok.stderr)
    );

    // Move one vertex far out: it stays a vertex but the facets change.
    let text = std::fs::read_to_string(&roff).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    lines[2] = "100/1 100/1 100/1 100/1".into();
    std::fs::write(&bad, lines.join("\n") + "\n").unwrap();
    let o = fanforge(&["verify", "--fan", &s(&fan), "--polytope", &s(&bad)], None);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(String::from_utf8_lossy(&o.stderr).lines().count(), 1);
}

#[test]
fn h_outside_the_type_cone_fails_verification() {
    let (fan, tc, roff) = (tmp("a2.json"), tmp("a2tc.json"), tmp("a2h.roff"));
    let s = |p: &PathBuf| p.to_str().unwrap().to_string();
    assert!(
        fanforge(&["fan", "--type", "A", "--rank", "2", "-o", &s(&fan)], None)
            .status
            .success()
    );
    assert!(
        fanforge(&["typecone", "--fan", &s(&fan), "-o", &s(&tc)], None)
            .status
            .success()
    );
    // Rays in canonical order (1,0),(0,1),(0,-1),(-1,1),(-1,0): loosening
    // the (-1,1) bound leaves a square.
    let r = fanforge(
        &[
            "realize",
            "--fan",
            &s(&fan),
            "--typecone",
            &s(&tc),
            "--h",
            "2,2,0,5,0",
            "-o",
            &s(&roff),
        ],
        None,
    );
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let o = fanforge(
        &["verify", "--fan", &s(&fan), "--polytope", &s(&roff)],
        None,
    );
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn input_errors_exit_two_with_one_line() {
    for args in [
        vec!["fan", "--type", "Q", "--rank", "2"],
        vec!["fan", "--rank", "2"],
        vec!["fan", "--unknown"],
        vec!["typecone"],
        vec!["abhy", "--type", "A", "--rank", "2", "--c", "1,0,1"],
        vec!["abhy", "--type", "A", "--rank", "2", "--c", "1,x,1"],
        vec!["--threads", "0", "paper-a2"],
    ] {
        let o = fanforge(&args, Some(b"not json"));
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&o.stderr);
        assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
        assert!(err.starts_with("error: input: "), "{err}");
    }
}

#[test]
fn budget_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_fanforge"))
        .args(["fan", "--type", "A", "--rank", "3"])
        .env("FANFORGE_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("more than 5 clusters"));
}

#[test]
fn help_exits_cleanly() {
    assert!(fanforge(&["--help"], None).status.success());
}
