use std::fs;
use std::process::{Command, Output};

use ldic_cli::commands::SimulationDocument;
use ldic_cli::docs::{sweep_rows_from_csv, MetricsDocument, RegionDocument, SweepDocument, Verdict};
use ldic_cli::golden::{Assertion, GoldenFile, EMBEDDED};
use ldic_core::simulator::{dims_oracle, Part};
use ldic_core::{ChannelParams, Rational, User};
use quick_xml::events::Event;
use quick_xml::Reader;

fn ldic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ldic")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn r(s: &str) -> Rational {
    s.parse().unwrap()
}

#[test]
fn region_verdict_equal_for_useless_feedback() {
    let o = ldic(&["region", "--params", "10,9,2,15,0,0", "--compare", "10,9,2,15,10,15", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: RegionDocument = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc.verdict, Some(Verdict::Equal));
    assert_eq!(doc.region.vertices, doc.compare.unwrap().vertices);
}

#[test]
fn region_zero_channel_is_a_point() {
    let o = ldic(&["region", "--params", "0,0,0,0,0,0", "--format", "json"]);
    let doc: RegionDocument = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc.region.vertices.len(), 1);
    assert_eq!((doc.region.vertices[0].r1.clone(), doc.region.vertices[0].r2.clone()), (r("0"), r("0")));
}

#[test]
fn region_first_example_has_five_vertices() {
    let o = ldic(&["region", "--params", "20,15,12,13,0,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("vertices: (0, 0) (20, 0) (18, 4) (14, 8) (0, 15)"), "{}", stdout(&o));
}

#[test]
fn region_json_round_trips() {
    let o = ldic(&["region", "--params", "20,15,12,13,20,15", "--compare", "20,15,12,13,0,0", "--format", "json"]);
    let text = stdout(&o);
    let doc: RegionDocument = serde_json::from_str(&text).unwrap();
    assert_eq!(doc.verdict, Some(Verdict::Superset));
    let again: RegionDocument = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
    assert_eq!(doc, again);
    assert!(text.contains("\"r1\": \"20\""));
}

fn svg_summary(text: &str) -> (usize, Vec<String>) {
    let mut reader = Reader::from_str(text);
    let mut polygons = 0;
    let mut texts = Vec::new();
    let mut depth = 0i32;
    loop {
        match reader.read_event().expect("well-formed XML") {
            Event::Start(e) => {
                depth += 1;
                if e.name().as_ref() == b"polygon" {
                    polygons += 1;
                }
            }
            Event::Empty(e) => {
                if e.name().as_ref() == b"polygon" {
                    polygons += 1;
                }
            }
            Event::End(_) => depth -= 1,
            Event::Text(t) => texts.push(t.unescape().unwrap().into_owned()),
            Event::Eof => break,
            _ => {}
        }
    }
    assert_eq!(depth, 0);
    (polygons, texts)
}

#[test]
fn svg_has_one_polygon_per_region_and_legend() {
    let o = ldic(&["region", "--params", "20,15,12,13,0,0", "--compare", "20,15,12,13,15,14", "--format", "svg"]);
    let (polygons, texts) = svg_summary(&stdout(&o));
    assert_eq!(polygons, 2);
    assert!(texts.iter().any(|t| t.ends_with("without feedback")));
    assert!(texts.iter().any(|t| t.ends_with(" with feedback")));
    assert!(texts.iter().any(|t| t.starts_with("R1")) && texts.iter().any(|t| t.starts_with("R2")));

    let o = ldic(&["region", "--params", "0,0,0,0,0,0", "--format", "svg"]);
    assert_eq!(svg_summary(&stdout(&o)).0, 1);
}

#[test]
fn metrics_documents() {
    let cases = [("7,8,15,13,11,9", ["2", "3", "0"]), ("10,10,3,8,10,10", ["2", "2", "1"]), ("9,4,6,2,0,0", ["0", "0", "0"])];
    for (params, expected) in cases {
        let o = ldic(&["metrics", "--params", params, "--format", "json"]);
        assert_eq!(o.status.code(), Some(0));
        let doc: MetricsDocument = serde_json::from_str(&stdout(&o)).unwrap();
        let got = [doc.report.delta1.to_string(), doc.report.delta2.to_string(), doc.report.sigma.to_string()];
        assert_eq!(got, expected.map(String::from), "{params}");
        let again: MetricsDocument = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
        assert_eq!(doc, again);
    }
    let text = stdout(&ldic(&["metrics", "--params", "20,15,12,13,20,15"]));
    assert!(text.contains("Delta2 = 7/2 (3.5)"), "{text}");
}

#[test]
fn sweep_full_grid_of_first_example() {
    let o = ldic(&["sweep", "--base", "20,15,12,13", "--fb1", "0..20", "--fb2", "0..15"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = sweep_rows_from_csv(&stdout(&o)).unwrap();
    assert_eq!(rows.len(), 21 * 16);
    let cell = rows.iter().find(|r| r.fb1 == 20 && r.fb2 == 15).unwrap();
    assert_eq!((cell.delta1.clone(), cell.delta2.clone(), cell.sigma.clone()), (r("7"), r("7/2"), r("0")));
    let order: Vec<(u64, u64)> = rows.iter().map(|r| (r.fb1, r.fb2)).collect();
    let mut sorted = order.clone();
    sorted.sort();
    assert_eq!(order, sorted);
}

#[test]
fn sweep_useless_side_column_is_zero() {
    let o = ldic(&["sweep", "--base", "10,20,6,12", "--fb1", "0..12", "--fb2", "0", "--format", "json"]);
    let doc: SweepDocument = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc.rows.len(), 13);
    assert!(doc.rows.iter().all(|r| r.delta1.is_zero() && r.delta2.is_zero() && r.sigma.is_zero()));
    assert_eq!(doc.cell(5, 0).unwrap().fb1, 5);
    let again: SweepDocument = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
    assert_eq!(doc, again);
}

#[test]
fn sweep_single_cell_and_errors() {
    let o = ldic(&["sweep", "--base", "3,4,5,6", "--fb1", "0..0", "--fb2", "0..0"]);
    assert_eq!(stdout(&o), "fb1,fb2,delta1,delta2,sigma\n0,0,0,0,0\n");
    assert_eq!(ldic(&["sweep", "--base", "3,4,5,6", "--fb1", "4..1", "--fb2", "0"]).status.code(), Some(2));
    assert_eq!(ldic(&["sweep", "--base", "3,4,5", "--fb1", "0", "--fb2", "0"]).status.code(), Some(2));
    assert_eq!(ldic(&["sweep", "--base", "3,4,5,6", "--fb1", "0", "--fb2", "0", "--format", "svg"]).status.code(), Some(2));
    let decimal = stdout(&ldic(&["sweep", "--base", "20,15,12,13", "--fb1", "20", "--fb2", "15", "--decimal"]));
    assert!(decimal.contains("20,15,7,7/2,0,7,3.5,0"), "{decimal}");
}

#[test]
fn verify_small_ranges() {
    let o = ldic(&["verify", "--max-param", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("tuples: 1 "));
    let o = ldic(&["verify", "--max-param", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["tuples"], 729);
    assert!(v["properties"].as_array().unwrap().iter().all(|p| p["failed"] == 0 && p["passed"] == 729));
}

#[test]
fn examples_report_the_single_inconsistent_gain() {
    let o = ldic(&["examples"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    let failures: Vec<&str> = text.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(failures, vec!["FAIL  Delta2(10,20,6,12,10,11): expected 2, got 3"]);
    assert!(text.ends_with("32/33 golden assertions match\n"));

    let o = ldic(&["examples", "--json"]);
    let list: Vec<Assertion> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(list.len(), GoldenFile::embedded().assertion_count());
}

#[test]
fn examples_with_golden_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let mut g = GoldenFile::embedded();
    let k = g.gains.iter().position(|c| c.params == [10, 20, 6, 12, 10, 11]).unwrap();
    g.gains[k].delta2 = r("3");
    let fixed = dir.path().join("fixed.toml");
    fs::write(&fixed, toml::to_string(&g).unwrap()).unwrap();
    let o = ldic(&["examples", "--golden", fixed.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let corrupted = dir.path().join("corrupted.toml");
    fs::write(&corrupted, EMBEDDED.replace("delta1 = \"7\"", "delta1 = \"8\"")).unwrap();
    let o = ldic(&["examples", "--golden", corrupted.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL  Delta1(20,15,12,13,20,15): expected 8, got 7"));

    let broken = dir.path().join("broken.toml");
    fs::write(&broken, "[[gains]]\nparams = 3\n").unwrap();
    assert_eq!(ldic(&["examples", "--golden", broken.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn simulate_zero_policy() {
    let o = ldic(&["simulate", "--params", "4,3,2,1,2,2", "--policy", "zero", "--uses", "3", "--format", "json"]);
    let doc: SimulationDocument = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc.trace.uses.len(), 3);
    assert!(doc.trace.uses.iter().all(|u| u.x1.is_zero() && u.x2.is_zero() && u.y1.is_zero() && u.y2.is_zero()));
    assert_eq!(doc.levels.len(), 4);
}

#[test]
fn simulate_impulse_reachability_matches_oracle() {
    let p: ChannelParams = "20,15,12,13,15,14".parse().unwrap();
    for user in User::BOTH {
        let oracle = dims_oracle(&p, user);
        for level in 1..=20u64 {
            let args = [
                "simulate", "--params", "20,15,12,13,15,14", "--policy", "impulse", "--uses", "2", "--format", "json",
                "--user", &user.to_string(), "--level", &level.to_string(),
            ];
            let doc: SimulationDocument = serde_json::from_str(&stdout(&ldic(&args))).unwrap();
            let first = &doc.trace.uses[0];
            let (own, other) = match user {
                User::One => (&first.y1, &first.y2),
                User::Two => (&first.y2, &first.y1),
            };
            let expect = |part: Part| oracle.levels_of(part).contains(&level);
            assert_eq!(!own.is_zero(), expect(Part::C) || expect(Part::P), "user {user} level {level}");
            assert_eq!(!other.is_zero(), expect(Part::C) || expect(Part::D), "user {user} level {level}");
            let fb_other = match user {
                User::One => &doc.trace.uses[1].fb2,
                User::Two => &doc.trace.uses[1].fb1,
            };
            assert_eq!(!fb_other.is_zero(), expect(Part::CF) || expect(Part::DF), "user {user} level {level}");
        }
    }
}

#[test]
fn simulate_is_deterministic_and_validates() {
    let args = ["simulate", "--params", "5,4,3,6,2,3", "--policy", "random", "--seed", "42", "--uses", "6"];
    assert_eq!(stdout(&ldic(&args)), stdout(&ldic(&args)));
    let other = ["simulate", "--params", "5,4,3,6,2,3", "--policy", "random", "--seed", "43", "--uses", "6"];
    assert_ne!(stdout(&ldic(&args)), stdout(&ldic(&other)));
    assert_eq!(ldic(&["simulate", "--params", "1,1,1,1,1,1", "--policy", "telepathy"]).status.code(), Some(2));
    assert_eq!(ldic(&["simulate", "--params", "1,1,1,1,1,1", "--uses", "0"]).status.code(), Some(2));
    assert_eq!(
        ldic(&["simulate", "--params", "1,1,1,1,1,1", "--policy", "impulse", "--level", "3"]).status.code(),
        Some(2)
    );
}

#[test]
fn malformed_parameters_are_usage_errors() {
    for bad in ["1,2,3", "1,2,3,4,5,x", "1,-2,3,4,5,6", ""] {
        let o = ldic(&["region", "--params", bad]);
        assert_eq!(o.status.code(), Some(2), "{bad:?}");
    }
    assert_eq!(ldic(&[]).status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested").join("region.json");
    let o = ldic(&["region", "--params", "3,3,1,1,0,0", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let doc: RegionDocument = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc.region.params.to_string(), "3,3,1,1,0,0");
}

#[test]
fn manifest_jobs_are_cached() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("jobs.toml");
    fs::write(
        &manifest,
        r#"
out_dir = "results"

[[job]]
name = "example-5"
command = "region"
params = "10,9,2,15,0,0"
compare = "10,9,2,15,10,15"
format = "svg"

[[job]]
command = "sweep"
base = "20,15,12,13"
fb1 = "19..20"
fb2 = "15"
decimal = true

[[job]]
command = "verify"
max_param = 1
"#,
    )
    .unwrap();
    let m = manifest.to_str().unwrap();
    let first = ldic(&["--manifest", m]);
    assert_eq!(first.status.code(), Some(0), "{}", String::from_utf8_lossy(&first.stderr));
    let log = stdout(&first);
    assert_eq!(log.matches(": wrote ").count(), 3, "{log}");
    assert!(log.starts_with("example-5 region: wrote "), "{log}");
    assert!(log.contains("job 2 sweep: wrote "), "{log}");
    let files: Vec<_> = fs::read_dir(dir.path().join("results")).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(files.len(), 3);
    assert!(files.iter().any(|f| f.extension().unwrap() == "svg"));

    let second = stdout(&ldic(&["--manifest", m]));
    assert_eq!(second.matches(": cached ").count(), 3, "{second}");

    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "[[job]]\ncommand = \"region\"\nparams = \"1,2\"\n").unwrap();
    assert_eq!(ldic(&["--manifest", bad.to_str().unwrap()]).status.code(), Some(2));
    fs::write(&bad, "[[job]]\nparams = \"1,2,3,4,5,6\"\n").unwrap();
    assert_eq!(ldic(&["--manifest", bad.to_str().unwrap()]).status.code(), Some(2));
    let twice = "[[job]]\nname = \"a\"\ncommand = \"verify\"\n\n[[job]]\nname = \"a\"\ncommand = \"examples\"\n";
    fs::write(&bad, twice).unwrap();
    let dup = ldic(&["--manifest", bad.to_str().unwrap()]);
    assert_eq!(dup.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&dup.stderr).contains("duplicate job name"));
}
