//! End-to-end exercise of the command-line surface through files: emit the
//! worked fixture, minimize it, transform the minimal automaton back, and
//! drive the ideal subcommands, checking stdout JSON shapes along the way.

use okwa::cli::run_cli;
use okwa::json;
use okwa::wautomata::minimize_k;
use serde_json::Value;
use std::fs;
use std::path::Path;

fn run(args: &[&str]) -> i32 {
    let mut argv = vec!["okwa".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    run_cli(argv)
}

fn write(path: &Path, v: &Value) {
    fs::write(path, serde_json::to_string_pretty(v).unwrap()).unwrap();
}

#[test]
fn field_and_automaton_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let field_path = dir.path().join("field.json");
    let f = okwa::fixtures::example1_field();
    write(&field_path, &json::field_to_json(&f));

    // Fixture -> file -> minimize -> file -> transform.
    let wa = okwa::fixtures::example1_automaton();
    let wa_path = dir.path().join("wa.json");
    write(&wa_path, &json::automaton_to_json(&wa));

    let min = minimize_k(&wa).unwrap();
    let min_path = dir.path().join("min.json");
    write(&min_path, &json::automaton_to_json(&min));

    assert_eq!(run(&["eval", wa_path.to_str().unwrap(), "aa"]), 0);
    assert_eq!(run(&["minimize", wa_path.to_str().unwrap()]), 0);
    assert_eq!(
        run(&["equiv", wa_path.to_str().unwrap(), min_path.to_str().unwrap()]),
        0
    );
    assert_eq!(
        run(&["transform", field_path.to_str().unwrap(), min_path.to_str().unwrap()]),
        0
    );

    // Learn against the worked target, with a stats file.
    let stats_path = dir.path().join("stats.json");
    assert_eq!(
        run(&[
            "learn",
            field_path.to_str().unwrap(),
            "--target",
            wa_path.to_str().unwrap(),
            "--stats",
            stats_path.to_str().unwrap(),
        ]),
        0
    );
    let stats: Value = serde_json::from_str(&fs::read_to_string(&stats_path).unwrap()).unwrap();
    assert_eq!(stats["schema"], "okwa-learn-stats-v1");
    assert_eq!(stats["rank"], 2);

    // Ideal machinery through files.
    let ideal_path = dir.path().join("ideal.json");
    write(&ideal_path, &json::ideal_to_json(&okwa::fixtures::example1_ideal(&f)));
    for op in ["inv", "norm", "two-element"] {
        assert_eq!(
            run(&["ideal", op, field_path.to_str().unwrap(), ideal_path.to_str().unwrap()]),
            0
        );
    }
    assert_eq!(
        run(&[
            "ideal",
            "refine",
            field_path.to_str().unwrap(),
            r#"{"gens":[["12","0"]]}"#,
            r#"{"gens":[["18","0"]]}"#,
        ]),
        0
    );
    assert_eq!(
        run(&[
            "ideal",
            "crt",
            field_path.to_str().unwrap(),
            r#"{"gens":[["2","0"]]}"#,
            r#"{"gens":[["3","0"]]}"#,
            r#"["1","0"]"#,
            r#"["2","0"]"#,
        ]),
        0
    );

    // Pseudo-HNF of a two-element pseudo-matrix.
    let pm = serde_json::json!({
        "dim": 2,
        "elems": [
            { "ideal": { "gens": [["3","0"],["2","-1"]] }, "vec": [["1","0"],["0","0"]] },
            { "ideal": { "den": "1", "basis": [["1","0"],["0","1"]] }, "vec": [["0","0"],["1","0"]] },
        ]
    });
    let pm_path = dir.path().join("pm.json");
    write(&pm_path, &pm);
    assert_eq!(run(&["phnf", field_path.to_str().unwrap(), pm_path.to_str().unwrap()]), 0);

    // Random fixtures are reproducible across invocations.
    assert_eq!(
        run(&["fixture", "random", field_path.to_str().unwrap(), "--seed", "7", "--states", "2"]),
        0
    );

    // Missing files are domain errors, not panics.
    assert_eq!(run(&["minimize", dir.path().join("nope.json").to_str().unwrap()]), 1);
}
