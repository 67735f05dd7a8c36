use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::Path;
use std::time::{Duration, Instant};

use serde_json::json;

use sse_core::backend::{BuiltinHuffman, Codec, ExternalCommand};
use sse_core::bench::bench_lines;
use sse_core::corpus::{generate, read_lines, CorpusSpec};
use sse_core::entropy::sse_entropy_report;
use sse_core::simulate::{run_study, write_csv, StudyConfig};
use sse_core::transform::{choose_empty_symbol, sort_lines};
use sse_core::{decode_container, encode_container, Collation, LineSet, RunMode, SseConfig};

use crate::error::CliError;
use crate::report::{CliReport, InputInfo};
use crate::{ModeArg, TransformArgs};

fn is_stdio(path: &Path) -> bool {
    path.as_os_str() == "-"
}

fn read_input(path: &Path, limit: u64) -> Result<Vec<u8>, CliError> {
    let reader: Box<dyn Read> = if is_stdio(path) {
        Box::new(io::stdin().lock())
    } else {
        Box::new(File::open(path).map_err(|e| CliError::io(path, e))?)
    };
    let mut buf = Vec::new();
    reader
        .take(limit.saturating_add(1))
        .read_to_end(&mut buf)
        .map_err(|e| CliError::io(path, e))?;
    if buf.len() as u64 > limit {
        return Err(CliError::TooLarge {
            path: path.to_path_buf(),
            limit,
        });
    }
    Ok(buf)
}

fn write_output(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let result = if is_stdio(path) {
        let mut out = io::stdout().lock();
        out.write_all(bytes).and_then(|()| out.flush())
    } else {
        File::create(path).and_then(|f| {
            let mut w = BufWriter::new(f);
            w.write_all(bytes)?;
            w.flush()
        })
    };
    result.map_err(|e| CliError::io(path, e))
}

fn parse_byte(s: &str) -> Option<u8> {
    match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u8::from_str_radix(hex, 16).ok(),
        None => s.parse().ok(),
    }
}

fn build_config(args: &TransformArgs, mode: ModeArg, lines: &LineSet) -> Result<SseConfig, CliError> {
    let empty = if args.empty.eq_ignore_ascii_case("auto") {
        choose_empty_symbol(lines)?
    } else {
        parse_byte(&args.empty).ok_or_else(|| CliError::Usage(format!("--empty {:?}: expected auto or 0xNN", args.empty)))?
    };
    let run_mode = match mode {
        ModeArg::Literal => RunMode::Literal,
        ModeArg::Counted => RunMode::Counted,
    };
    let collation = if args.ci_sort {
        Collation::CaseInsensitiveByteWise
    } else {
        Collation::ByteWise
    };
    Ok(SseConfig::default()
        .with_empty_symbol(empty)?
        .with_run_mode(run_mode)?
        .with_collation(collation))
}

fn config_json(cfg: &SseConfig) -> serde_json::Value {
    json!({
        "empty_symbol": format!("0x{:02X}", cfg.empty_symbol()),
        "run_mode": format!("{:?}", cfg.run_mode()).to_lowercase(),
        "collation": match cfg.collation() {
            Collation::ByteWise => "bytewise",
            Collation::CaseInsensitiveByteWise => "case-insensitive",
        },
    })
}

pub fn encode(input: &Path, output: &Path, args: &TransformArgs, mode: ModeArg) -> Result<(), CliError> {
    let started = Instant::now();
    let text = read_input(input, args.max_bytes)?;
    let lines = read_lines(&text[..], args.crlf).map_err(|e| CliError::io(input, e))?;
    let config = build_config(args, mode, &lines)?;
    let container = encode_container(&lines, &config)?;
    let bytes = container.to_bytes();
    write_output(output, &bytes)?;

    let mut report = CliReport::new("encode", started);
    report.inputs.push(InputInfo::new(input, text.len()));
    report.config = config_json(&config);
    report.results = json!({
        "output": output.display().to_string(),
        "lines": lines.len(),
        "sorted_bytes": lines.text_len(),
        "container_bytes": bytes.len(),
        "payload_bytes": container.payload.len(),
    });
    report.emit(is_stdio(output));
    Ok(())
}

pub fn decode(input: &Path, output: &Path) -> Result<(), CliError> {
    let started = Instant::now();
    let bytes = read_input(input, u64::MAX)?;
    let lines = decode_container(&bytes)?;
    let text = lines.to_text();
    write_output(output, &text)?;

    let mut report = CliReport::new("decode", started);
    report.inputs.push(InputInfo::new(input, bytes.len()));
    report.results = json!({
        "output": output.display().to_string(),
        "lines": lines.len(),
        "bytes": text.len(),
    });
    report.emit(is_stdio(output));
    Ok(())
}

pub fn analyze(input: &Path, args: &TransformArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let text = read_input(input, args.max_bytes)?;
    let lines = read_lines(&text[..], args.crlf).map_err(|e| CliError::io(input, e))?;
    if lines.is_empty() {
        return Err(CliError::Usage(format!("{}: no lines to analyze", input.display())));
    }
    // the entropy identities are defined for the literal form
    let config = build_config(args, ModeArg::Literal, &lines)?;
    let container = encode_container(&lines, &config)?;
    let source = sort_lines(&lines, config.collation()).to_text();
    let entropy = sse_entropy_report(&source, &container.payload, config.empty_symbol())
        .map_err(|e| CliError::Usage(e.to_string()))?;

    let mut report = CliReport::new("analyze", started);
    report.inputs.push(InputInfo::new(input, text.len()));
    report.config = config_json(&config);
    report.results = serde_json::to_value(&entropy).expect("report serializes");
    report.emit(false);
    Ok(())
}

pub fn simulate(cfg: &StudyConfig, out: &Path) -> Result<(), CliError> {
    let started = Instant::now();
    let rows = run_study(cfg)?;
    let mut csv = Vec::new();
    write_csv(&mut csv, cfg, &rows).expect("writing to memory");
    write_output(out, &csv)?;

    let mut report = CliReport::new("simulate", started);
    report.config = serde_json::to_value(cfg).expect("config serializes");
    report.results = json!({
        "output": out.display().to_string(),
        "rows": rows,
    });
    report.emit(is_stdio(out));
    Ok(())
}

fn parse_codec(codec: &str, timeout: u64) -> Result<Box<dyn Codec>, CliError> {
    if codec == "builtin" {
        return Ok(Box::new(BuiltinHuffman));
    }
    match codec.strip_prefix("cmd:") {
        Some(template) => Ok(Box::new(
            ExternalCommand::new(template).with_timeout(Duration::from_secs(timeout)),
        )),
        None => Err(CliError::Usage(format!("--codec {codec:?}: expected builtin or cmd:<template>"))),
    }
}

pub fn bench(
    corpus: Option<&Path>,
    gen: Option<&str>,
    codec: &str,
    timeout: u64,
    args: &TransformArgs,
    mode: ModeArg,
) -> Result<(), CliError> {
    let started = Instant::now();
    let codec = parse_codec(codec, timeout)?;
    let (label, lines, input) = match (corpus, gen) {
        (Some(path), _) => {
            let text = read_input(path, args.max_bytes)?;
            let lines = read_lines(&text[..], args.crlf).map_err(|e| CliError::io(path, e))?;
            (path.display().to_string(), lines, Some(InputInfo::new(path, text.len())))
        }
        (None, Some(spec)) => {
            let spec: CorpusSpec = spec.parse()?;
            (format!("{}:{}:{}", spec.family, spec.count, spec.seed), generate(&spec), None)
        }
        (None, None) => return Err(CliError::Usage("give a corpus path or --gen".into())),
    };
    if lines.is_empty() {
        return Err(CliError::Usage(format!("{label}: corpus has no lines")));
    }
    let config = build_config(args, mode, &lines)?;
    let row = bench_lines(label, &lines, &config, codec.as_ref())?;

    let mut report = CliReport::new("bench", started);
    report.inputs.extend(input);
    let mut config_echo = config_json(&config);
    config_echo["codec"] = json!(codec.describe());
    report.config = config_echo;
    report.results = serde_json::to_value(&row).expect("row serializes");
    report.emit(false);
    Ok(())
}

pub fn gen(spec: &str, out: &Path) -> Result<(), CliError> {
    let started = Instant::now();
    let spec: CorpusSpec = spec.parse()?;
    let lines = generate(&spec);
    let text = lines.to_text();
    write_output(out, &text)?;

    let mut report = CliReport::new("gen", started);
    report.config = serde_json::to_value(spec).expect("spec serializes");
    report.results = json!({
        "output": out.display().to_string(),
        "lines": lines.len(),
        "bytes": text.len(),
    });
    report.emit(is_stdio(out));
    Ok(())
}
