mod args;
mod commands;
mod manifest;
mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use eapprox::par::Execution;

use args::{Cli, Command, GlobalOpts};
use commands::{dispatch, CliError, Ctx};
use manifest::{sha256_hex, OutputRecord, RunManifest};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

/// Result of one command, rendered but not yet written.
struct Executed {
    text: String,
    manifest: RunManifest,
    failure: Option<String>,
}

fn execution(jobs: Option<u32>) -> Execution {
    #[cfg(feature = "parallel")]
    {
        if let Some(j) = jobs {
            // A pool can only be installed once per process; later calls keep the first.
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(j as usize)
                .build_global();
            if j == 1 {
                return Execution::Sequential;
            }
        }
        Execution::Parallel
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = jobs;
        Execution::Sequential
    }
}

fn execute(
    global: &GlobalOpts,
    command: &Command,
    output_label: String,
) -> Result<Executed, CliError> {
    let ctx = Ctx {
        prec: global.prec,
        digits: global.digits as usize,
        exec: execution(global.jobs),
    };
    let (name, mut params, report) = dispatch(command, &ctx)?;
    let format = match global.format {
        args::Format::Csv => "csv",
        args::Format::Json => "json",
    };
    params.insert("format".into(), format.into());
    params.insert("digits".into(), global.digits.to_string());
    let mut manifest = RunManifest::new(name, params, global.prec);
    manifest.outputs.push(OutputRecord {
        path: output_label,
        sha256: None,
    });
    let text = report::render(&report, global.format, &manifest);
    manifest.outputs[0].sha256 = Some(sha256_hex(text.as_bytes()));
    Ok(Executed {
        text,
        manifest,
        failure: report.failure,
    })
}

fn manifest_path(global: &GlobalOpts) -> Option<PathBuf> {
    global.manifest.clone().or_else(|| {
        global.output.as_ref().map(|o| {
            let mut s = o.clone().into_os_string();
            s.push(".manifest.json");
            PathBuf::from(s)
        })
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(CliError::io(format!("writing {}", path.display())))
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    if let Command::Replay(r) = &cli.command {
        return replay(&r.manifest);
    }
    let label = cli
        .global
        .output
        .as_ref()
        .map_or_else(|| "-".to_owned(), |p| p.display().to_string());
    let done = execute(&cli.global, &cli.command, label)?;

    match &cli.global.output {
        Some(path) => write_file(path, &done.text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(done.text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(CliError::io("writing stdout"))?;
        }
    }
    match manifest_path(&cli.global) {
        Some(path) => write_file(&path, &done.manifest.to_json())?,
        None => eprint!("manifest: {}", done.manifest.to_json()),
    }

    if let Some(msg) = done.failure {
        eprintln!("check failed: {msg}");
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

fn replay(path: &Path) -> Result<ExitCode, CliError> {
    let recorded = RunManifest::load(path)
        .map_err(CliError::io(format!("reading manifest {}", path.display())))?;
    let Some(OutputRecord {
        path: label,
        sha256: Some(expected),
    }) = recorded.outputs.first().cloned()
    else {
        return Err(CliError::Usage("manifest records no output hash".into()));
    };
    if recorded.tool_version != env!("CARGO_PKG_VERSION") {
        eprintln!(
            "warning: manifest written by version {}, replaying with {}",
            recorded.tool_version,
            env!("CARGO_PKG_VERSION")
        );
    }
    let cli = Cli::try_parse_from(recorded.argv())
        .map_err(|e| CliError::Usage(format!("manifest arguments rejected: {e}")))?;
    let done = execute(&cli.global, &cli.command, label.clone())?;
    let actual = done.manifest.outputs[0].sha256.clone().unwrap_or_default();
    if actual != expected {
        return Err(CliError::Mismatch(format!(
            "{label}: recorded sha256 {expected}, replay produced {actual}"
        )));
    }
    println!("replay ok: {} {label} sha256={actual}", recorded.command);
    Ok(ExitCode::SUCCESS)
}
