use std::process::{Command, Output};

fn kuforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kuforge"))
        .args(args)
        .env_remove("KUFORGE_DEGREE_BOUND")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Second column of a one-table TSV output.
fn tsv_column(text: &str, col: usize) -> Vec<String> {
    text.lines().skip(2).map(|l| l.split('\t').nth(col).unwrap().to_string()).collect()
}

#[test]
fn ltilde_low_degrees() {
    let o = kuforge(&["dims", "--functor", "Ltilde", "--rank", "2", "--max-degree", "5"]);
    assert!(o.status.success());
    assert_eq!(tsv_column(&stdout(&o), 1), ["1", "0", "2", "0", "3", "0"]);
}

#[test]
fn rank_one_ku_homology() {
    let o = kuforge(&["ku-hom", "--rank", "1", "--max-degree", "9", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["subcommand"], "ku-hom");
    assert_eq!(v["rank"], 1);
    assert_eq!(v["max_degree"], 9);
    let rows = v["tables"]["ku_hom"].as_array().unwrap();
    for d in 1..=5u32 {
        let row = &rows[2 * d as usize - 1];
        assert_eq!(row["degree"], 2 * d - 1);
        let want = if d == 1 { "Z/2".to_string() } else { format!("Z/2^{d}") };
        assert_eq!(row["cotorsion"], want);
    }
}

#[test]
fn verify_milnor_rank_two() {
    let o = kuforge(&["verify", "--suite", "milnor", "--rank", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn verify_ss_rank_two_small() {
    let o = kuforge(&["verify", "--suite", "ss", "--rank", "2", "--max-degree", "6", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["tables"]["summary"][0]["passed"], true);
}

#[test]
fn output_is_deterministic() {
    let args = ["ss", "--rank", "3", "--max-degree", "8", "--format", "json"];
    let a = kuforge(&args);
    let b = kuforge(&["--jobs", "1", "ss", "--rank", "3", "--max-degree", "8", "--format", "json"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn argument_errors_exit_two() {
    assert_eq!(kuforge(&["dims", "--functor", "nope"]).status.code(), Some(2));
    assert_eq!(kuforge(&["dims", "--functor", "S", "--rank", "0"]).status.code(), Some(2));
    assert_eq!(kuforge(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(kuforge(&["localcoh", "--module", "lfrak", "--i", "5", "--rank", "2"]).status.code(), Some(2));
    assert_eq!(kuforge(&["ss", "--rank", "1"]).status.code(), Some(2));
}

#[test]
fn env_bound_sets_default() {
    let o = Command::new(env!("CARGO_BIN_EXE_kuforge"))
        .args(["dims", "--functor", "S"])
        .env("KUFORGE_DEGREE_BOUND", "3")
        .output()
        .unwrap();
    assert_eq!(tsv_column(&stdout(&o), 0), ["0", "1", "2", "3"]);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("kuforge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("k.tsv");
    let o = kuforge(&["dims", "--functor", "K", "--rank", "3", "--max-degree", "4", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(tsv_column(&text, 1), ["1", "0", "3", "3", "7"]);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn localcoh_duality_route_matches_cech() {
    let base = ["localcoh", "--module", "tors-ku", "--rank", "2", "--max-degree", "4", "--min-degree", "-8"];
    let cech = kuforge(&base);
    let mut args = base.to_vec();
    args.extend(["--route", "duality"]);
    let dual = kuforge(&args);
    let table = |o: &Output| stdout(o).split("# local_cohomology").nth(1).unwrap().to_string();
    assert_eq!(table(&cech), table(&dual));
}
