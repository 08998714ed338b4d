use std::process::{Command, Output};

fn labstate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_labstate"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scenario(name: &str) -> String {
    format!("{}/scenarios/{name}.scn", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn hardy_file_reports_exact_probabilities() {
    let o = labstate(&["run", &scenario("hardy")]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("P(6,9) = 9/16"), "{text}");
    assert!(text.contains("P(Annihilation) = 1/4"), "{text}");
    assert!(!text.contains('.'), "exact mode printed a decimal: {text}");
}

#[test]
fn dud_file_always_reaches_d6() {
    let text = stdout(&labstate(&["run", &scenario("ev-dud")]));
    assert!(text.contains("P(D6) = 1\n"), "{text}");
    assert!(text.contains("P(Explode) = 0\n"), "{text}");
}

#[test]
fn float_mode() {
    let text = stdout(&labstate(&["run", "hardy", "--float"]));
    assert!(text.contains("P(6,9) = 0.5625"), "{text}");
    assert!(text.contains("P(6,8) = 0.0625"), "{text}");
}

#[test]
fn stage_limit() {
    let text = stdout(&labstate(&["run", "ev-active", "--stage", "1"]));
    assert_eq!(
        text.lines().filter(|l| !l.starts_with("P(")).count(),
        2,
        "{text}"
    );
    assert!(text.contains("P(Explode) = 1/2"), "{text}");
}

#[test]
fn verify_blocks_pass() {
    for block in ["ev", "hardy", "bitops", "flows"] {
        let o = labstate(&["verify", block]);
        assert_eq!(o.status.code(), Some(0), "{block}: {}", stdout(&o));
        assert!(stdout(&o).trim_end().ends_with(&format!("{block}: PASS")));
    }
}

#[test]
fn parse_failures_exit_with_two() {
    let dir = std::env::temp_dir().join(format!("labstate-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.scn");
    std::fs::write(&bad, "esds 2\ninit A1\nstage s\n  map A1 -> (1)*A9\n").unwrap();
    let o = labstate(&["run", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));

    let unmatched = dir.join("unmatched.scn");
    std::fs::write(&unmatched, "esds 3\ninit A1\nstage s\n  map A2 -> (1)*A3\n").unwrap();
    assert_eq!(
        labstate(&["run", unmatched.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );

    let relay = dir.join("relay.scn");
    std::fs::write(
        &relay,
        "esds 2\ninit (1)*A1\nstage s\n  map A1 -> (1)*A2\noutcome x : signal@2\n",
    )
    .unwrap();
    assert_eq!(
        labstate(&["run", relay.to_str().unwrap()]).status.code(),
        Some(0)
    );

    assert_eq!(
        labstate(&["run", "/nonexistent/file.scn"]).status.code(),
        Some(2)
    );
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn auxiliary_commands() {
    let table = stdout(&labstate(&["table"]));
    assert!(table.contains(" A |  Z  A  Z P0"), "{table}");
    assert_eq!(stdout(&labstate(&["stockpile", "--limit"])).trim(), "1/3");
    assert_eq!(
        stdout(&labstate(&["stockpile", "--sweeps", "1"])).trim(),
        "1/4"
    );
    let ev = stdout(&labstate(&["ev", "--omega-a", "1/2"]));
    assert!(
        ev.contains("P(D6) = 5/8") && ev.contains("P(D7) = 1/8"),
        "{ev}"
    );
}
