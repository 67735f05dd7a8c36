use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use tempfile::TempDir;

fn sse() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sse"))
}

fn run(args: &[&str]) -> Output {
    sse().args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

fn write(dir: &TempDir, name: &str, bytes: &[u8]) -> String {
    let p = path(dir, name);
    std::fs::write(&p, bytes).unwrap();
    p
}

#[test]
fn encode_matches_hand_trace() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "words.txt", b"dog\ncar\ncat\ncard\n");
    let output = path(&dir, "words.sse");
    let out = run(&["encode", &input, &output]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let bytes = std::fs::read(&output).unwrap();
    assert_eq!(&bytes[..7], b"SSE1\x01\x00 ");
    assert_eq!(&bytes[7..], b"car\n   d\n  t\ndog\n");

    let json = report(&out);
    assert_eq!(json["schema_version"], 1);
    assert_eq!(json["command"], "encode");
    assert_eq!(json["inputs"][0]["bytes"], 17);
    assert_eq!(json["results"]["payload_bytes"], 17);
    assert!(json["elapsed_ms"].is_number());

    let decoded = path(&dir, "words.out");
    let out = run(&["decode", &output, &decoded]);
    assert_eq!(code(&out), 0);
    assert_eq!(std::fs::read(&decoded).unwrap(), b"car\ncard\ncat\ndog\n");
}

#[test]
fn counted_mode_and_flags() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "in.txt", b"B\r\na\r\nab\r\n");
    let output = path(&dir, "in.sse");
    let out = run(&["encode", &input, &output, "--mode", "counted", "--ci-sort", "--crlf"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let bytes = std::fs::read(&output).unwrap();
    assert_eq!(&bytes[..7], b"SSE1\x01\x03 ");
    assert_eq!(&bytes[7..], b"0 a\n1 b\n0 B\n");
    let decoded = path(&dir, "out.txt");
    assert_eq!(code(&run(&["decode", &output, &decoded])), 0);
    assert_eq!(std::fs::read(&decoded).unwrap(), b"a\nab\nB\n");
}

#[test]
fn space_in_input_is_an_alphabet_violation() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "phrases.txt", b"hello world\nfoo\n");
    let out = run(&["encode", &input, &path(&dir, "x.sse")]);
    assert_eq!(code(&out), 2);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("0x20") && stderr.contains("--empty auto"), "{stderr}");

    let output = path(&dir, "auto.sse");
    let out = run(&["encode", &input, &output, "--empty", "auto"]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["config"]["empty_symbol"], "0x00");
    let decoded = path(&dir, "auto.txt");
    assert_eq!(code(&run(&["decode", &output, &decoded])), 0);
    assert_eq!(std::fs::read(&decoded).unwrap(), b"foo\nhello world\n");
}

#[test]
fn missing_input_is_io_error() {
    let dir = TempDir::new().unwrap();
    let out = run(&["encode", &path(&dir, "nope.txt"), &path(&dir, "x.sse")]);
    assert_eq!(code(&out), 3);
}

#[test]
fn max_bytes_guard() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "big.txt", b"aaaa\nbbbb\n");
    let out = run(&["encode", &input, &path(&dir, "x.sse"), "--max-bytes", "9"]);
    assert_eq!(code(&out), 3);
    let out = run(&["encode", &input, &path(&dir, "x.sse"), "--max-bytes", "10"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn decode_errors() {
    let dir = TempDir::new().unwrap();
    let bad_magic = write(&dir, "bad.sse", b"XXE1\x01\x00 car\n");
    assert_eq!(code(&run(&["decode", &bad_magic, "-"])), 4);
    let bad_version = write(&dir, "ver.sse", b"SSE1\x09\x00 car\n");
    assert_eq!(code(&run(&["decode", &bad_version, "-"])), 4);

    let truncated = write(&dir, "trunc.sse", b"SSE1\x01\x00 car\n   d");
    assert_eq!(code(&run(&["decode", &truncated, "-"])), 5);
    let short = write(&dir, "short.sse", b"SSE1\x01");
    assert_eq!(code(&run(&["decode", &short, "-"])), 5);
    let overlong = write(&dir, "over.sse", b"SSE1\x01\x00 ab\n    c\n");
    assert_eq!(code(&run(&["decode", &overlong, "-"])), 5);
    let malformed = write(&dir, "mal.sse", b"SSE1\x01\x01 x car\n");
    assert_eq!(code(&run(&["decode", &malformed, "-"])), 5);
}

#[test]
fn stdin_to_stdout_streaming() {
    let mut child = sse()
        .args(["encode", "-", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"dog\ncar\ncat\ncard").unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(code(&out), 0);
    assert_eq!(out.stdout, b"SSE1\x01\x00 car\n   d\n  t\ndog\n");
    // the report moves to stderr when stdout carries data
    let json: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(json["command"], "encode");

    let mut child = sse()
        .args(["decode", "-", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(&out.stdout).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.stdout, b"car\ncard\ncat\ndog\n");
}

#[test]
fn analyze_reports_entropies() {
    let dir = TempDir::new().unwrap();
    let words = path(&dir, "words.txt");
    assert_eq!(code(&run(&["gen", "word:5000:1", "--out", &words])), 0);
    let out = run(&["analyze", &words]);
    assert_eq!(code(&out), 0);
    let r = &report(&out)["results"];
    assert!(r["target_ratio"].as_f64().unwrap() < r["source_ratio"].as_f64().unwrap());
    for check in ["counts_not_increased", "empty_count_balance", "probabilities_bounded", "empty_probability_balance"] {
        assert_eq!(r["formula_checks"][check], true, "{check}");
    }
    assert!(r["empty_count"].as_u64().unwrap() > 0);

    let plain = write(&dir, "plain.txt", b"abc\ndef\nghi\n");
    let r = report(&run(&["analyze", &plain]))["results"].clone();
    assert_eq!(r["empty_count"], 0);
    assert_eq!(r["target_ratio"], r["source_ratio"]);
}

#[test]
fn simulate_writes_reproducible_csv() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (path(&dir, "a.csv"), path(&dir, "b.csv"));
    let args = ["simulate", "--sizes", "2..8", "--trials", "3", "--lines", "100", "--seed", "7", "--out"];
    let out = sse().args(args).arg(&a).output().unwrap();
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["results"]["rows"].as_array().unwrap().len(), 7);
    assert_eq!(code(&sse().args(args).arg(&b).output().unwrap()), 0);
    let csv = std::fs::read(&a).unwrap();
    assert_eq!(csv, std::fs::read(&b).unwrap());
    let text = String::from_utf8(csv).unwrap();
    assert!(text.starts_with("# {"));
    assert_eq!(text.lines().count(), 2 + 7);
    assert!(text.lines().nth(1).unwrap().starts_with("alphabet_size,source_mean"));
}

#[test]
fn simulate_default_row_count() {
    // the full default study is exercised by the acceptance suite; one trial
    // per size keeps this check fast
    let dir = TempDir::new().unwrap();
    let csv = path(&dir, "d.csv");
    let out = run(&["simulate", "--trials", "1", "--lines", "50", "--out", &csv]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 2 + 51);
}

fn bench(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    report(&out)["results"].clone()
}

#[test]
fn bench_families_follow_table_direction() {
    let url = bench(&["bench", "--gen", "url:10000:42", "--codec", "builtin"]);
    let word = bench(&["bench", "--gen", "word:10000:42"]);
    let hex = bench(&["bench", "--gen", "hex:10000:42"]);
    let f = |v: &Value, col: &str, key: &str| v[col][key].as_f64().unwrap();
    assert!(f(&url, "entropy", "sse") < f(&url, "entropy", "source"));
    assert!(f(&word, "entropy", "sse") < f(&word, "entropy", "source"));
    // hex gains the least: its ratio of ratios is closest to 1
    let distance = |v: &Value| (f(v, "actual", "ratio_of_ratios") - 1.0).abs();
    assert!(distance(&hex) < distance(&word));
    assert!(distance(&hex) < distance(&url));
    assert_eq!(url["lines"], 10000);
}

#[test]
fn bench_on_file_and_external_codec() {
    let dir = TempDir::new().unwrap();
    let corpus = path(&dir, "urls.txt");
    assert_eq!(code(&run(&["gen", "url:2000:3", "--out", &corpus])), 0);
    let r = bench(&["bench", &corpus, "--codec", "cmd:sh -c 'gzip -9 -c {in} > {out}'"]);
    assert!(r["codec"].as_str().unwrap().contains("gzip"));
    assert!(r["actual"]["source"].as_f64().unwrap() < 1.0);

    let out = run(&["bench", "--gen", "url:100:1", "--codec", "cmd:nonexistent {in} {out}"]);
    assert_eq!(code(&out), 6);
    let out = run(&["bench", "--gen", "url:100:1", "--codec", "cmd:sh -c 'exit 1' {in} {out}"]);
    assert_eq!(code(&out), 6);
}

#[test]
fn gen_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (path(&dir, "a.txt"), path(&dir, "b.txt"));
    assert_eq!(code(&run(&["gen", "hex:100:9", "--out", &a])), 0);
    assert_eq!(code(&run(&["gen", "hex:100:9", "--out", &b])), 0);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(std::fs::read(&a).unwrap().len(), 100 * 33);
    assert_eq!(code(&run(&["gen", "zip:1:1"])), 1);
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(code(&run(&["frobnicate"])), 1);
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "in.txt", b"abc\n");
    assert_eq!(code(&run(&["encode", &input, &path(&dir, "x.sse"), "--empty", "nope"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn encode_decode_identity_on_sorted_files() {
    let dir = TempDir::new().unwrap();
    for (i, spec) in ["word:3000:5", "url:3000:5", "hex:3000:5"].iter().enumerate() {
        let raw = path(&dir, &format!("raw{i}.txt"));
        assert_eq!(code(&run(&["gen", spec, "--out", &raw])), 0);
        let mut lines: Vec<Vec<u8>> = std::fs::read(&raw)
            .unwrap()
            .split(|&b| b == b'\n')
            .filter(|l| !l.is_empty())
            .map(<[u8]>::to_vec)
            .collect();
        lines.sort();
        let sorted: Vec<u8> = lines.iter().flat_map(|l| l.iter().copied().chain(*b"\n")).collect();
        let sorted_path = write(&dir, &format!("sorted{i}.txt"), &sorted);
        for mode in ["literal", "counted"] {
            let container = path(&dir, &format!("c{i}{mode}.sse"));
            let back = path(&dir, &format!("b{i}{mode}.txt"));
            assert_eq!(code(&run(&["encode", &sorted_path, &container, "--mode", mode])), 0);
            assert_eq!(code(&run(&["decode", &container, &back])), 0);
            assert_eq!(std::fs::read(Path::new(&back)).unwrap(), sorted);
        }
    }
}
