//! End-to-end checks of the binary: output shapes and the exit-code
//! contract (0 pass, 1 check failure, 2 usage, 3 budget).

use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dembed"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("utf8 stdout"),
        String::from_utf8(out.stderr).expect("utf8 stderr"),
    )
}

fn body(stdout: &str) -> Vec<&str> {
    stdout.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn gen_single_vertex_tree_has_no_edges() {
    let (code, stdout, _) = run(&["gen", "tree", "-n", "0"]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("# manifest command=gen"));
    assert!(body(&stdout).is_empty());
}

#[test]
fn gen_first_level_diamond_lists_2k_edges() {
    let (code, stdout, _) = run(&["gen", "diamond", "-m", "1", "-k", "3", "--format", "edges"]);
    assert_eq!(code, 0);
    assert_eq!(body(&stdout).len(), 6);
}

#[test]
fn gen_dot_labels_generations_and_keeps_endpoints_blank() {
    let (code, stdout, _) = run(&["gen", "diamond", "-m", "2", "-k", "2", "--format", "dot"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.matches(" -- ").count(), 16);
    assert!(stdout.contains("\"B\" [label=\"\"]"));
    assert!(stdout.contains("\"I::1\" [label=\"2\"]"));
    assert!(stdout.contains("\"I:1L:1\" [label=\"1\"]"));
}

#[test]
fn dist_answers_match_the_known_geometry() {
    let (code, stdout, _) = run(&["dist", "diamond", "-m", "10", "-k", "2", "B", "T"]);
    assert_eq!(code, 0);
    assert_eq!(body(&stdout), ["1024"]);

    let (code, stdout, _) = run(&["dist", "tree", "1110", "11101"]);
    assert_eq!(code, 0);
    assert_eq!(body(&stdout), ["1"]);
}

#[test]
fn star_embedding_of_depth_three_reports_distortion_six() {
    let (code, stdout, _) = run(&["embed", "-n", "3", "--mode", "star"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("distortion 6/1\n"));
    assert!(stdout.contains("- -> B\n"));
}

#[test]
fn out_flag_routes_the_map_to_a_file_and_the_report_to_stdout() {
    let dir = std::env::temp_dir().join("dembed-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("map.txt");
    let path_str = path.to_str().unwrap();
    let (code, stdout, _) = run(&[
        "embed", "-n", "1", "--mode", "exact", "-m", "1", "-k", "2", "--out", path_str,
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("distortion 1/1\n"));
    assert!(stdout.contains("exhausted true\n"));
    let file = std::fs::read_to_string(&path).unwrap();
    assert!(file.contains("- -> B\n"));
    assert!(!stdout.contains(" -> "));
}

#[test]
fn usage_errors_exit_with_code_two() {
    for args in [
        &["dist", "tree", "012", "0"] as &[&str],
        &["dist", "diamond", "-m", "2", "-k", "2", "I:9L:1", "T"],
        &["embed", "-n", "0", "--mode", "star"],
        &["embed", "-n", "2", "--mode", "star", "-m", "2", "-k", "2"],
        &["embed", "-n", "2", "--mode", "exact"],
        &["table", "--n-min", "1", "--n-max", "2", "--modes", "exact"],
        &[
            "sepset",
            "-m",
            "2",
            "-k",
            "2",
            "--separation",
            "2",
            "--region",
            "3L",
        ],
        &[
            "verify",
            "witness",
            "-n",
            "100",
            "-k",
            "2",
            "-p",
            "0",
            "--alpha-schedule",
            "n-over-log2",
        ],
    ] {
        let (code, _, stderr) = run(args);
        assert_eq!(code, 2, "expected usage error for {args:?}: {stderr}");
    }
}

#[test]
fn budget_errors_exit_with_code_three() {
    for args in [
        &[
            "gen",
            "diamond",
            "-m",
            "9",
            "-k",
            "2",
            "--budget-vertices",
            "1000",
        ] as &[&str],
        &["embed", "-n", "1", "--mode", "exact", "-m", "9", "-k", "2"],
        &["sepset", "-m", "3", "-k", "3", "--separation", "2"],
        &[
            "sepset",
            "-m",
            "3",
            "-k",
            "2",
            "--separation",
            "2",
            "--budget-region",
            "65",
        ],
    ] {
        let (code, _, stderr) = run(args);
        assert_eq!(code, 3, "expected budget error for {args:?}: {stderr}");
    }
}

#[test]
fn failed_checks_exit_with_code_one_but_still_print_the_artifact() {
    let (code, stdout, stderr) = run(&[
        "verify",
        "witness",
        "-n",
        "4096",
        "-k",
        "2",
        "-p",
        "0",
        "--alpha-schedule",
        "n-over-3",
    ]);
    assert_eq!(code, 1, "{stderr}");
    assert!(stdout.contains("feasible false\n"));
    assert!(stdout.ends_with("result fail\n"));
}

#[test]
fn empty_table_range_prints_the_header_and_passes() {
    let (code, stdout, _) = run(&["table", "--n-min", "5", "--n-max", "4"]);
    assert_eq!(code, 0);
    let rows = body(&stdout);
    assert_eq!(rows.len(), 1);
    assert!(rows[0].starts_with("n,star,"));
}

#[test]
fn region_scoped_sepset_respects_the_raised_budget() {
    let (code, stdout, _) = run(&[
        "sepset",
        "-m",
        "3",
        "-k",
        "2",
        "--separation",
        "4",
        "--budget-region",
        "64",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("size 8\n"));
    assert!(stdout.contains("exact true\n"));
}
