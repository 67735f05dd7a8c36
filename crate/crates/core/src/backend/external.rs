//! Runs a user-supplied compressor command and measures its output size.
//!
//! The template is split like a shell command line; `{in}` and `{out}` are
//! replaced by temporary file paths. Use `sh -c '...'` when the tool writes to
//! standard output, e.g. `sh -c 'xz -9e -c {in} > {out}'`.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use super::{BackendError, CodecResult};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(300);
const POLL_INTERVAL: Duration = Duration::from_millis(5);

/// Splits the template and substitutes the placeholders.
fn build_argv(template: &str, input: &Path, output: &Path) -> Result<Vec<String>, BackendError> {
    if !template.contains("{in}") || !template.contains("{out}") {
        return Err(BackendError::InvalidTemplate(format!(
            "{template:?} must contain both {{in}} and {{out}}"
        )));
    }
    let words = shell_words::split(template).map_err(|e| BackendError::InvalidTemplate(e.to_string()))?;
    if words.is_empty() {
        return Err(BackendError::InvalidTemplate("empty command".into()));
    }
    let (input, output) = (input.to_string_lossy(), output.to_string_lossy());
    Ok(words
        .into_iter()
        .map(|w| w.replace("{in}", &input).replace("{out}", &output))
        .collect())
}

pub fn external_compress(template: &str, input: &[u8], timeout: Duration) -> Result<CodecResult, BackendError> {
    let dir = tempfile::Builder::new().prefix("sse-codec-").tempdir()?;
    let in_path = dir.path().join("input.bin");
    let out_path = dir.path().join("output.bin");
    std::fs::write(&in_path, input)?;
    let argv = build_argv(template, &in_path, &out_path)?;

    match run(&argv, timeout).and_then(|()| Ok(std::fs::metadata(&out_path)?.len())) {
        Ok(compressed_size) => Ok(CodecResult::new(input.len() as u64, compressed_size)),
        Err(err) => {
            let kept = dir.keep();
            Err(err.with_kept_files(kept))
        }
    }
}

fn run(argv: &[String], timeout: Duration) -> Result<(), BackendError> {
    let mut child = Command::new(&argv[0])
        .args(&argv[1..])
        .stdin(Stdio::null())
        .stdout(Stdio::null())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => BackendError::ToolNotFound(argv[0].clone()),
            _ => BackendError::Io(e),
        })?;

    // drain stderr on a thread so a chatty tool cannot block on a full pipe
    let mut stderr = child.stderr.take().expect("stderr is piped");
    let reader = std::thread::spawn(move || {
        let mut buf = Vec::new();
        let _ = stderr.read_to_end(&mut buf);
        buf
    });

    let deadline = Instant::now() + timeout;
    let status = loop {
        if let Some(status) = child.try_wait()? {
            break status;
        }
        if Instant::now() >= deadline {
            let _ = child.kill();
            let _ = child.wait();
            return Err(BackendError::Timeout {
                command: argv.join(" "),
                seconds: timeout.as_secs_f64(),
                kept: None,
            });
        }
        std::thread::sleep(POLL_INTERVAL);
    };
    let diagnostics = String::from_utf8_lossy(&reader.join().unwrap_or_default()).into_owned();
    if !status.success() {
        return Err(BackendError::NonZeroExit {
            command: argv.join(" "),
            code: status.code(),
            stderr: diagnostics,
            kept: None,
        });
    }
    Ok(())
}

impl BackendError {
    fn with_kept_files(self, dir: PathBuf) -> Self {
        match self {
            BackendError::NonZeroExit {
                command, code, stderr, ..
            } => BackendError::NonZeroExit {
                command,
                code,
                stderr,
                kept: Some(dir),
            },
            BackendError::Timeout { command, seconds, .. } => BackendError::Timeout {
                command,
                seconds,
                kept: Some(dir),
            },
            other => other,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn placeholders_are_substituted() {
        let argv = build_argv("gzip -c {in} --out={out}", Path::new("/t/a"), Path::new("/t/b")).unwrap();
        assert_eq!(argv, ["gzip", "-c", "/t/a", "--out=/t/b"]);
        let argv = build_argv("sh -c 'cat {in} > {out}'", Path::new("/t/a"), Path::new("/t/b")).unwrap();
        assert_eq!(argv, ["sh", "-c", "cat /t/a > /t/b"]);
    }

    #[test]
    fn template_needs_both_placeholders() {
        assert!(matches!(
            build_argv("gzip {in}", Path::new("a"), Path::new("b")),
            Err(BackendError::InvalidTemplate(_))
        ));
        assert!(matches!(
            build_argv("sh -c 'unterminated {in} {out}", Path::new("a"), Path::new("b")),
            Err(BackendError::InvalidTemplate(_))
        ));
    }

    #[test]
    fn missing_tool() {
        let err = external_compress("definitely-not-a-compressor-xyz {in} {out}", b"abc", DEFAULT_TIMEOUT).unwrap_err();
        assert!(matches!(err, BackendError::ToolNotFound(ref t) if t == "definitely-not-a-compressor-xyz"));
    }

    #[test]
    fn copy_command_measures_output() {
        let r = external_compress("cp {in} {out}", b"hello world", DEFAULT_TIMEOUT).unwrap();
        assert_eq!((r.original_size, r.compressed_size), (11, 11));
        assert_eq!(r.ratio, 1.0);
    }

    #[test]
    fn degenerate_input_compresses() {
        let input = vec![b'a'; 64 * 1024];
        let r = external_compress("sh -c 'gzip -9 -c {in} > {out}'", &input, DEFAULT_TIMEOUT).unwrap();
        assert!(r.ratio < 0.05, "ratio {}", r.ratio);
    }

    #[test]
    fn failing_tool_keeps_files() {
        let err = external_compress("sh -c 'echo boom >&2; exit 3' {in} {out}", b"x", DEFAULT_TIMEOUT).unwrap_err();
        match err {
            BackendError::NonZeroExit { code, stderr, kept, .. } => {
                assert_eq!(code, Some(3));
                assert!(stderr.contains("boom"));
                let kept = kept.unwrap();
                assert!(kept.join("input.bin").exists());
                std::fs::remove_dir_all(kept).unwrap();
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn slow_tool_times_out() {
        let err = external_compress("sh -c 'sleep 5' {in} {out}", b"x", Duration::from_millis(100)).unwrap_err();
        match err {
            BackendError::Timeout { kept, .. } => std::fs::remove_dir_all(kept.unwrap()).unwrap(),
            other => panic!("unexpected {other:?}"),
        }
    }
}
