use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use focal_cli::bench::{random_mass, run_bench, BenchConfig};
use focal_cli::commands::TransformFile;
use focal_cli::io::{evidence_to_file, load_evidence, parse_evidence, save_evidence, Evidence};
use focal_core::DEFAULT_MEM_CAP_BYTES;
use tempfile::TempDir;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn focal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_focal"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn transform_file(out: &Output) -> TransformFile {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn commonality_listing_matches_golden_file() {
    let out = focal(&["transform", path_str(&data("running.json")), "--to", "q"]);
    let golden: TransformFile = serde_json::from_str(&fs::read_to_string(data("running_q.json")).unwrap()).unwrap();
    let got = transform_file(&out);
    assert_eq!(got.frame, golden.frame);
    assert_eq!(got.values.len(), golden.values.len());
    for (a, b) in got.values.iter().zip(&golden.values) {
        assert_eq!(a.set, b.set);
        assert!((a.value - b.value).abs() <= 1e-12, "{a:?} vs {b:?}");
    }
}

#[test]
fn weights_listing() {
    let out = focal(&["transform", path_str(&data("running.json")), "--to", "w"]);
    let got = transform_file(&out);
    let want = [
        (vec!["a", "b", "c"], 10.0),
        (vec!["a", "b"], 0.5),
        (vec!["b", "c"], 1.0 / 3.0),
        (vec!["a"], 0.25),
        (vec!["b"], 1.5),
        (vec![], 1.6),
    ];
    assert_eq!(got.values.len(), want.len());
    for (set, v) in want {
        let entry = got.values.iter().find(|e| e.set == set).unwrap();
        assert!((entry.value - v).abs() <= 1e-12, "{set:?}: {}", entry.value);
    }
}

#[test]
fn engines_write_identical_files() {
    let dir = TempDir::new().unwrap();
    let running = data("running.json");
    for to in ["q", "b", "w", "bel", "pl", "mass-from-q", "mass-from-w"] {
        let files: Vec<Vec<u8>> = ["naive", "fmt", "focal"]
            .iter()
            .map(|e| {
                let out = dir.path().join(format!("{to}-{e}.json"));
                let run = focal(&["transform", path_str(&running), "--to", to, "--engine", e, "-o", path_str(&out)]);
                assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
                fs::read(out).unwrap()
            })
            .collect();
        assert_eq!(files[0], files[1], "{to}");
        assert_eq!(files[1], files[2], "{to}");
    }

    for seed in 0..4 {
        let input = dir.path().join(format!("random{seed}.json"));
        let m = random_mass(9, 20, seed).unwrap();
        save_evidence(&input, &Evidence { mass: m, metadata: None }).unwrap();
        for to in ["q", "b", "mass-from-q"] {
            let run = |e: &str| {
                let out = focal(&["transform", path_str(&input), "--to", to, "--engine", e]);
                assert!(out.status.success());
                out.stdout
            };
            assert_eq!(run("fmt"), run("focal"), "seed {seed} {to}");
        }
    }
}

#[test]
fn focal_point_listing() {
    let out = focal(&["transform", path_str(&data("running.json")), "--to", "q", "--show-focal-points"]);
    assert!(out.status.success());
    let listing = String::from_utf8(out.stderr).unwrap();
    assert!(listing.contains("6 focal points"), "{listing}");
    assert!(listing.contains("{b}  <- intersection of {a,b}, {b,c}, {a,b,c}"), "{listing}");
    assert!(listing.contains("{a}  <- generator"), "{listing}");
}

#[test]
fn cautious_fusion_of_the_two_sources() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("fused.json");
    let run = focal(&[
        "fuse",
        path_str(&data("source1.json")),
        path_str(&data("source2.json")),
        "--rule",
        "cautious",
        "-o",
        path_str(&out_path),
    ]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let fused = load_evidence(&out_path).unwrap();
    let golden = load_evidence(&data("cautious_fused.json")).unwrap();
    assert_eq!(fused.mass.len(), golden.mass.len());
    assert!(fused.mass.max_abs_diff(&golden.mass) <= 1e-12);

    let conj = focal(&[
        "fuse",
        path_str(&data("source1.json")),
        path_str(&data("source2.json")),
        "--rule",
        "conjunctive",
    ]);
    let direct = parse_evidence(std::str::from_utf8(&conj.stdout).unwrap()).unwrap();
    assert!(direct.mass.max_abs_diff(&golden.mass) <= 1e-12);

    let normalized = focal(&[
        "fuse",
        path_str(&data("source1.json")),
        path_str(&data("source2.json")),
        "--rule",
        "cautious",
        "--normalize",
    ]);
    let n = parse_evidence(std::str::from_utf8(&normalized.stdout).unwrap()).unwrap();
    assert_eq!(n.mass.get(0), 0.0);
    assert!((n.mass.get(0b0110) - 0.06 / 0.26).abs() <= 1e-12);
}

#[test]
fn single_input_passes_through() {
    let out = focal(&["fuse", path_str(&data("source1.json")), "--rule", "dempster"]);
    assert!(out.status.success());
    let original = load_evidence(&data("source1.json")).unwrap();
    let expected = focal_cli::io::to_json(&evidence_to_file(&original));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), expected);
}

#[test]
fn dempster_fold_is_order_independent() {
    let dir = TempDir::new().unwrap();
    let paths: Vec<PathBuf> = (0..3)
        .map(|i| {
            let p = dir.path().join(format!("m{i}.json"));
            save_evidence(&p, &Evidence { mass: random_mass(6, 10, 40 + i).unwrap(), metadata: None }).unwrap();
            p
        })
        .collect();
    let orders = [[0, 1, 2], [2, 0, 1], [1, 2, 0], [2, 1, 0]];
    let results: Vec<Evidence> = orders
        .iter()
        .map(|o| {
            let args: Vec<&str> = ["fuse"]
                .into_iter()
                .chain(o.iter().map(|&i| path_str(&paths[i])))
                .chain(["--rule", "dempster"])
                .collect();
            let out = focal(&args);
            assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
            parse_evidence(std::str::from_utf8(&out.stdout).unwrap()).unwrap()
        })
        .collect();
    for r in &results[1..] {
        assert!(r.mass.max_abs_diff(&results[0].mass) <= 1e-11);
    }
}

#[test]
fn frames_in_another_order_are_aligned() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("reordered.json");
    fs::write(
        &p,
        r#"{"frame": ["d", "c", "b", "a"], "masses": [
            {"set": ["b", "c"], "mass": 0.3}, {"set": ["c", "d"], "mass": 0.1}, {"set": ["c"], "mass": 0.6}]}"#,
    )
    .unwrap();
    let run = |second: &Path| {
        let out = focal(&["fuse", path_str(&data("source1.json")), path_str(second), "--rule", "cautious"]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };
    assert_eq!(run(&p), run(&data("source2.json")));
}

#[test]
fn ablation_report() {
    let out = focal(&["ablate", path_str(&data("running.json")), "--point", "b", "--weight", "1"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["old_weight"], 1.5);
    assert_eq!(report["is_valid_mass"], true);
    let mass = report["mass"].as_array().unwrap();
    let empty = mass.iter().find(|e| e["set"].as_array().unwrap().is_empty()).unwrap();
    assert!((empty["value"].as_f64().unwrap() - 0.2).abs() <= 1e-12);

    let out = focal(&["ablate", path_str(&data("running.json")), "--point", "a,b", "--weight", "1"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["is_valid_mass"], false);
    assert!(String::from_utf8_lossy(&out.stderr).contains("negative"));

    let out = focal(&["ablate", path_str(&data("running.json")), "--point", "c", "--weight", "1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let running = data("running.json");
    let missing = dir.path().join("missing.json");
    assert_eq!(focal(&["transform", path_str(&missing), "--to", "q"]).status.code(), Some(1));

    let broken = dir.path().join("broken.json");
    fs::write(&broken, "{\"frame\": [\"a\"], \"masses\": [").unwrap();
    let out = focal(&["transform", path_str(&broken), "--to", "q"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));

    let empty = dir.path().join("empty.json");
    fs::write(&empty, r#"{"frame": ["a", "b"], "masses": []}"#).unwrap();
    assert_eq!(focal(&["transform", path_str(&empty), "--to", "q"]).status.code(), Some(3));

    // No mass on the empty set: the disjunctive weights are undefined.
    assert_eq!(focal(&["transform", path_str(&running), "--to", "v"]).status.code(), Some(4));

    let out = focal(&["transform", path_str(&running), "--to", "q", "--engine", "fmt", "--mem-cap-bytes", "16"]);
    assert_eq!(out.status.code(), Some(5));
    assert_eq!(focal(&["transform", path_str(&running), "--to", "q", "--mem-cap-bytes", "16"]).status.code(), Some(0));

    let conflict_a = dir.path().join("ca.json");
    let conflict_b = dir.path().join("cb.json");
    fs::write(&conflict_a, r#"{"frame": ["a", "b"], "masses": [{"set": ["a"], "mass": 1}]}"#).unwrap();
    fs::write(&conflict_b, r#"{"frame": ["a", "b"], "masses": [{"set": ["b"], "mass": 1}]}"#).unwrap();
    let out = focal(&["fuse", path_str(&conflict_a), path_str(&conflict_b), "--rule", "dempster"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn duplicate_entries_are_summed_with_a_warning() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("dup.json");
    fs::write(
        &p,
        r#"{"frame": ["a", "b"], "masses": [
            {"set": ["a"], "mass": 0.25}, {"set": ["b"], "mass": 0.5}, {"set": ["a"], "mass": 0.25}]}"#,
    )
    .unwrap();
    let out = focal(&["fuse", path_str(&p), "--rule", "conjunctive", "--normalize"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("duplicate"));
    let ev = parse_evidence(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(ev.mass.get(0b01), 0.5);
}

#[test]
fn load_save_round_trip() {
    let dir = TempDir::new().unwrap();
    for seed in 0..10 {
        let m = random_mass(12, 30, seed).unwrap();
        let p = dir.path().join("m.json");
        save_evidence(&p, &Evidence { mass: m.clone(), metadata: None }).unwrap();
        let back = load_evidence(&p).unwrap();
        assert_eq!(back.mass.as_set_function().entries(), m.as_set_function().entries());
    }
}

fn config(sizes: Vec<usize>, supports: Vec<usize>, seeds: u64) -> BenchConfig {
    BenchConfig {
        sizes,
        supports,
        seeds,
        first_seed: 0,
        cap: DEFAULT_MEM_CAP_BYTES,
        naive_max_n: 12,
        repeats: 1,
    }
}

#[test]
fn bench_engines_agree_on_small_frames() {
    let rows = run_bench(&config(vec![12], vec![8], 5)).unwrap();
    assert_eq!(rows.len(), 5 * 4 * 3);
    for r in &rows {
        assert_eq!(r.ok, "true", "{r:?}");
        assert!(r.wall_ns.is_some());
    }
}

#[test]
fn bench_skips_dense_engines_over_the_cap() {
    let rows = run_bench(&config(vec![24], vec![30], 1)).unwrap();
    for r in &rows {
        match r.engine.as_str() {
            "focal" => assert_eq!(r.ok, "true", "{r:?}"),
            "fmt" => assert_eq!(r.ok, "skipped-mem-cap"),
            _ => assert!(r.ok.starts_with("skipped"), "{r:?}"),
        }
    }
}

#[test]
fn bench_csv_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("bench.csv");
    let args = ["bench", "--sizes", "3,6", "--supports", "4", "--seeds", "2", "--repeats", "1", "-o", path_str(&p)];
    let strip = |text: String| -> Vec<String> {
        text.lines()
            .map(|l| {
                let mut f: Vec<&str> = l.split(',').collect();
                f.remove(6);
                f.join(",")
            })
            .collect()
    };
    assert!(focal(&args).status.success());
    let first = fs::read_to_string(&p).unwrap();
    assert!(first.starts_with("engine,operation,N,supp,fp,seed,wall_ns,ok\n"));
    assert!(focal(&args).status.success());
    assert_eq!(strip(first), strip(fs::read_to_string(&p).unwrap()));
}
