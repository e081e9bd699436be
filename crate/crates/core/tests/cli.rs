use std::path::Path;
use std::process::Command;

fn mpmab(dir: &Path, args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_mpmab"))
        .current_dir(dir)
        .args(args)
        .env_remove("MPMAB_THREADS")
        .output()
        .unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn preset_schedule_file() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = mpmab(
        dir.path(),
        &["schedule", "--preset", "table2a", "--out", "s.csv"],
    );
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(dir.path().join("s.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("player,start,end"));
    assert_eq!(lines.next(), Some("1,431945,1291229"));
    assert_eq!(text.lines().count(), 11);
    // Existing files need --force.
    let (code, _, err) = mpmab(
        dir.path(),
        &["schedule", "--preset", "table2a", "--out", "s.csv"],
    );
    assert_eq!(code, 2, "{err}");
    let (code, _, _) = mpmab(
        dir.path(),
        &[
            "schedule", "--preset", "table2b", "--out", "s.csv", "--force",
        ],
    );
    assert_eq!(code, 0);
    assert!(std::fs::read_to_string(dir.path().join("s.csv"))
        .unwrap()
        .contains("\n5,80000,2000000\n"));
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, err) = mpmab(dir.path(), &["run", "--bogus"]);
    assert_eq!(code, 1);
    assert!(err.contains("Usage"), "{err}");
    // Both schedule sources at once.
    let (code, _, _) = mpmab(
        dir.path(),
        &[
            "schedule", "--random", "--T", "100", "--M", "2", "--preset", "table2a", "--out",
            "x.csv",
        ],
    );
    assert_eq!(code, 1);
    assert!(!dir.path().join("x.csv").exists());
    let (code, _, _) = mpmab(
        dir.path(),
        &["schedule", "--preset", "table7", "--out", "x.csv"],
    );
    assert_eq!(code, 1);
    let (code, _, _) = mpmab(
        dir.path(),
        &[
            "schedule", "--random", "--T", "100", "--M", "1", "--out", "x.csv",
        ],
    );
    assert_eq!(code, 1);
    let (code, _, _) = mpmab(dir.path(), &[]);
    assert_eq!(code, 1);
}

#[test]
fn invalid_config_reports_the_bound() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("bad.json"),
        r#"{"env":{"K":4},"schedule":{"random":{"players":3}},"T":1000,"algorithms":["ace"],"m":3}"#,
    )
    .unwrap();
    let (code, _, err) = mpmab(dir.path(), &["run", "--config", "bad.json", "--out", "o"]);
    assert_eq!(code, 1);
    assert!(err.contains("m_t <= m <= K/2"), "{err}");
    let (code, _, _) = mpmab(
        dir.path(),
        &["run", "--config", "missing.json", "--out", "o"],
    );
    assert_eq!(code, 2);
}

#[test]
fn run_batch_plot_presets() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("c.json"),
        r#"{"env":{"K":6},"schedule":{"file":{"path":"s.csv"}},"T":2000,"algorithms":["ace","ucb(2.0)"],"repeats":2}"#,
    )
    .unwrap();
    assert_eq!(
        mpmab(
            dir.path(),
            &["schedule", "--random", "--T", "2000", "--M", "3", "--seed", "5", "--out", "s.csv"]
        )
        .0,
        0
    );
    let (code, out, err) = mpmab(
        dir.path(),
        &["run", "--config", "c.json", "--seed", "3", "--out", "run"],
    );
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("ace: final regret"));
    let trace = std::fs::read_to_string(dir.path().join("run/ace.trace.csv")).unwrap();
    assert!(trace.starts_with("t,cum_regret,collisions,active_players\n"));
    assert_eq!(trace.lines().count(), 2001);
    let phases = std::fs::read_to_string(dir.path().join("run/ace.phases.csv")).unwrap();
    assert!(phases.starts_with("t,player,phase,exploit_arm\n"));

    let (code, _, err) = mpmab(
        dir.path(),
        &[
            "batch",
            "--config",
            "c.json",
            "--repeats",
            "3",
            "--out",
            "b/nested",
        ],
    );
    assert_eq!(code, 0, "{err}");
    let agg = std::fs::read_to_string(dir.path().join("b/nested/ace.csv")).unwrap();
    assert!(agg.starts_with("t,mean_regret,stderr\n"));
    assert_eq!(agg.lines().count(), 2001);
    assert!(dir.path().join("b/nested/regret.svg").exists());

    let (code, _, err) = mpmab(
        dir.path(),
        &[
            "plot",
            "--in",
            "b/nested/ace.csv",
            "b/nested/ucb-2.0.csv",
            "--out",
            "p.svg",
        ],
    );
    assert_eq!(code, 0, "{err}");
    let svg = std::fs::read_to_string(dir.path().join("p.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains(">ucb-2.0</text>"));

    let (code, out, _) = mpmab(dir.path(), &["presets"]);
    assert_eq!(code, 0);
    for id in [
        "table2a", "table2b", "table5", "table6a", "table6b", "table6c",
    ] {
        assert!(out.contains(id));
    }
}
