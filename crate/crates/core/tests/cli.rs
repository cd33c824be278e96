use std::fs;
use std::path::Path;

use serde_json::Value;
use tempfile::TempDir;

use tamari::cli::{run, EXIT_FAIL, EXIT_INPUT, EXIT_PASS};
use tamari::io::{Cache, Kind};
use tamari::simplicial::{increasing_flips, Triangulation};
use tamari::subset::Subset;
use tamari::zonotopal::{cubillage_from_inversion_set, InversionSet};

struct Run {
    code: i32,
    out: String,
    err: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.out).unwrap_or_else(|e| panic!("{e}: {}", self.out))
    }
}

fn tamari(cache: &Path, args: &[&str]) -> Run {
    let mut argv = vec!["tamari".to_string(), "--cache-dir".into(), cache.display().to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn write_json(dir: &TempDir, name: &str, v: &impl serde::Serialize) -> String {
    let p = dir.path().join(name);
    fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p.display().to_string()
}

fn heptagon() -> (Triangulation, Triangulation) {
    let t = Triangulation::parse(7, 2, "123 136 345 356 167").unwrap();
    let s = Subset::parse(7, "1236").unwrap();
    let (_, u) = increasing_flips(&t).into_iter().find(|(f, _)| f.s == s).unwrap();
    (t, u)
}

#[test]
fn enumerate_reports_sizes() {
    let dir = TempDir::new().unwrap();
    for (kind, n, d, size) in [("hst", "6", "2", 14), ("bruhat", "4", "1", 8), ("bruhat", "3", "1", 2), ("bruhat", "3", "2", 1), ("hst", "7", "1", 32)] {
        let r = tamari(dir.path(), &["enumerate", "--kind", kind, "--n", n, "--delta", d]);
        assert_eq!(r.code, EXIT_PASS, "{}", r.err);
        let v = r.json();
        assert_eq!(v["elements"], size);
        assert_eq!(v["cache_hit"], false);
    }
    let r = tamari(dir.path(), &["enumerate", "--kind", "hst", "--n", "6", "--delta", "2"]);
    assert_eq!(r.json()["cache_hit"], true);
}

#[test]
fn enumerate_text_and_out_file() {
    let dir = TempDir::new().unwrap();
    let r = tamari(dir.path(), &["--no-cache", "enumerate", "--kind", "hst", "--n", "5", "--delta", "2", "--format", "text"]);
    assert_eq!(r.code, EXIT_PASS);
    assert_eq!(r.out.lines().count(), 5);

    let target = dir.path().join("s52.json");
    let r = tamari(dir.path(), &["--out", target.to_str().unwrap(), "enumerate", "--kind", "hst", "--n", "5", "--delta", "2"]);
    assert_eq!(r.code, EXIT_PASS, "{}", r.err);
    let cached = fs::read(Cache::new(dir.path()).path(Kind::Hst, 5, 2)).unwrap();
    assert_eq!(fs::read(&target).unwrap(), cached);

    let r = tamari(dir.path(), &["inspect", target.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_PASS);
    assert!(r.out.contains("elements 5"), "{}", r.out);
}

#[test]
fn cache_files_are_byte_stable() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    for dir in [&a, &b] {
        let r = tamari(dir.path(), &["enumerate", "--kind", "bruhat", "--n", "5", "--delta", "2"]);
        assert_eq!(r.code, EXIT_PASS);
    }
    let p = |d: &TempDir| fs::read(Cache::new(d.path()).path(Kind::Bruhat, 5, 2)).unwrap();
    assert_eq!(p(&a), p(&b));
    let again = tamari(a.path(), &["enumerate", "--kind", "bruhat", "--n", "5", "--delta", "2"]);
    assert_eq!(again.json()["cache_hit"], true);
    assert_eq!(p(&a), p(&b));
}

#[test]
fn verify_single_cells() {
    let dir = TempDir::new().unwrap();
    for (n, d) in [("4", "1"), ("6", "2"), ("5", "3")] {
        let r = tamari(dir.path(), &["verify", "--n", n, "--delta", d]);
        assert_eq!(r.code, EXIT_PASS, "{}", r.err);
        let v = r.json();
        assert_eq!(v["pass"], true);
        assert_eq!(v["cells"][0]["map"]["is_quotient_map"], true);
    }
}

#[test]
fn map_g_on_a_one_flip_cubillage() {
    let dir = TempDir::new().unwrap();
    let q = cubillage_from_inversion_set(&InversionSet::new(4, 1, [Subset::parse(4, "123").unwrap()]).unwrap()).unwrap();
    let input = write_json(&dir, "q.json", &q.to_json(true).unwrap());
    let r = tamari(dir.path(), &["map", "--g", "--input", &input]);
    assert_eq!(r.code, EXIT_PASS, "{}", r.err);
    let v = r.json();
    assert_eq!(v["direction"], "g");
    assert_eq!(v["audit"]["source_internal"], serde_json::json!([[3]]));
    assert_eq!(v["audit"]["triangulation"]["simplices"], serde_json::json!([[1, 3], [3, 4]]));

    let r = tamari(dir.path(), &["map", "--g", "--index", "--input", &input]);
    assert_eq!(r.code, EXIT_PASS, "{}", r.err);
    let r = tamari(dir.path(), &["map", "--gbar", "--input", &input]);
    assert_eq!(r.code, EXIT_PASS, "{}", r.err);
    assert_eq!(r.json()["direction"], "gbar");
}

#[test]
fn witness_commands() {
    let dir = TempDir::new().unwrap();
    let (t, u) = heptagon();
    let from = write_json(&dir, "t.json", &t.to_json());
    let to = write_json(&dir, "u.json", &u.to_json());

    let r = tamari(dir.path(), &["witness", "surject", "--tri", &from]);
    assert_eq!(r.code, EXIT_PASS, "{}", r.err);
    assert_eq!(r.json()["route"], "U(T)");
    assert_eq!(r.json()["image_matches"], true);

    let r = tamari(dir.path(), &["witness", "full", "--from", &from, "--to", &to]);
    assert_eq!(r.code, EXIT_PASS, "{}", r.err);
    let v = r.json();
    assert_eq!(v["steps"].as_array().unwrap().len(), 6);
    assert_eq!(v["flip_set"], serde_json::json!([1, 2, 3, 6]));

    let r = tamari(dir.path(), &["witness", "full", "--from", &to, "--to", &from]);
    assert_eq!(r.code, EXIT_INPUT);

    let odd = Triangulation::parse(5, 3, "1234 1245 2345").unwrap();
    let p = write_json(&dir, "odd.json", &odd.to_json());
    let r = tamari(dir.path(), &["witness", "surject", "--tri", &p]);
    assert_eq!(r.code, EXIT_PASS, "{}", r.err);
    assert_eq!(r.json()["route"], "completion");
}

#[test]
fn broken_schedule_exits_with_failure() {
    let dir = TempDir::new().unwrap();
    let t = Triangulation::parse(6, 2, "125 156 234 245").unwrap();
    let u = Triangulation::parse(6, 2, "125 156 235 345").unwrap();
    let from = write_json(&dir, "t.json", &t.to_json());
    let to = write_json(&dir, "u.json", &u.to_json());
    let r = tamari(dir.path(), &["witness", "full", "--from", &from, "--to", &to]);
    assert_eq!(r.code, EXIT_FAIL);
    let e: Value = serde_json::from_str(&r.err).unwrap();
    assert!(e["message"].as_str().unwrap().contains("decreasing"), "{}", r.err);
}

#[test]
fn export_dot() {
    let dir = TempDir::new().unwrap();
    let r = tamari(dir.path(), &["export", "--kind", "hst", "--n", "5", "--delta", "2"]);
    assert_eq!(r.code, EXIT_PASS);
    assert!(r.out.starts_with("digraph \"S_5_2\""), "{}", r.out);
    assert_eq!(r.out.matches("->").count(), 5);
    let r = tamari(dir.path(), &["enumerate", "--kind", "bruhat", "--n", "4", "--delta", "1", "--format", "dot"]);
    assert!(r.out.starts_with("digraph \"B_4_2\""));
}

#[test]
fn bad_input_exits_two() {
    let dir = TempDir::new().unwrap();
    for args in [
        &["enumerate", "--kind", "hst", "--n", "2", "--delta", "2"][..],
        &["enumerate", "--kind", "nope", "--n", "5", "--delta", "2"],
        &["verify", "--n", "5"],
        &["inspect", "/definitely/not/here.json"],
        &["frobnicate"],
    ] {
        let r = tamari(dir.path(), args);
        assert_eq!(r.code, EXIT_INPUT, "{args:?}: {}", r.err);
    }
    let junk = dir.path().join("junk.json");
    fs::write(&junk, "{\"n\": 4, \"dim\": 2, \"spectrum\": [[1], [9]]}").unwrap();
    let r = tamari(dir.path(), &["map", "--g", "--input", junk.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_INPUT);
    let e: Value = serde_json::from_str(&r.err).unwrap();
    assert!(e["error"].is_string());
    assert_eq!(tamari(dir.path(), &["--help"]).code, EXIT_PASS);
}
