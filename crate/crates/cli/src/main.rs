mod args;
mod commands;

use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use args::{Cli, Command, GlobalArgs};

/// Usage problems exit with 2, failed computations with 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(String),
}

impl From<vertexkit::Error> for CliError {
    fn from(e: vertexkit::Error) -> Self {
        use vertexkit::Error as E;
        match e {
            E::ParseRational(_) | E::InvalidRing(_) => CliError::Usage(e.to_string()),
            other => CliError::Compute(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

/// What a command produced, in every format it supports.
pub struct Output {
    pub json: Value,
    /// One JSON document per line instead of a single document.
    pub json_lines: Option<Vec<Value>>,
    pub csv: Option<Table>,
    pub text: Option<String>,
}

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Output {
    pub fn json(value: impl Serialize) -> Self {
        Output {
            json: serde_json::to_value(value).expect("serializable"),
            json_lines: None,
            csv: None,
            text: None,
        }
    }

    pub fn with_text(mut self, text: String) -> Self {
        self.text = Some(text);
        self
    }

    pub fn with_csv(mut self, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        self.csv = Some(Table { header: header.iter().map(|s| s.to_string()).collect(), rows });
        self
    }

    pub fn with_lines(mut self, lines: Vec<Value>) -> Self {
        self.json_lines = Some(lines);
        self
    }
}

/// Keys that a config file may set.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub order: Option<usize>,
    pub terms: Option<usize>,
    pub ring: Option<String>,
    pub json: Option<bool>,
    pub csv: Option<bool>,
    pub jobs: Option<usize>,
    pub seed: Option<u64>,
}

fn apply_config(g: &mut GlobalArgs, path: &Path) -> CliResult<()> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let c: Config = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))?;
    g.order = c.order.or(g.order);
    g.terms = c.terms.or(g.terms);
    g.ring = c.ring.or(g.ring.take());
    g.json = c.json.unwrap_or(g.json);
    g.csv = c.csv.unwrap_or(g.csv);
    g.jobs = c.jobs.or(g.jobs);
    g.seed = c.seed.or(g.seed);
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub command_line: Vec<String>,
    pub config: Config,
    pub tool_version: String,
    pub elapsed_ms: u128,
    pub output_sha256: String,
}

/// Sorted keys, two-space indentation, trailing newline.
fn render_json(v: &Value) -> String {
    // serde_json's default map is ordered, so keys come out sorted
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn render(out: &Output, g: &GlobalArgs) -> CliResult<String> {
    if g.csv {
        let Some(table) = &out.csv else {
            return usage("this command has no CSV form");
        };
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&table.header).map_err(|e| CliError::Compute(e.to_string()))?;
        for row in &table.rows {
            w.write_record(row).map_err(|e| CliError::Compute(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Compute(e.to_string()))?;
        return Ok(String::from_utf8(bytes).expect("utf-8"));
    }
    if g.json {
        if let Some(lines) = &out.json_lines {
            let mut s = String::new();
            for l in lines {
                s.push_str(&serde_json::to_string(l).expect("serializable"));
                s.push('\n');
            }
            return Ok(s);
        }
        return Ok(render_json(&out.json));
    }
    Ok(match &out.text {
        Some(t) => format!("{t}\n"),
        None => render_json(&out.json),
    })
}

fn digest(s: &str) -> String {
    hex::encode(Sha256::digest(s.as_bytes()))
}

/// Parses `argv`, runs the command and returns the rendered output.
fn execute(argv: &[String]) -> CliResult<(String, GlobalArgs)> {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Ok((e.to_string(), GlobalArgs::default()));
            }
            return Err(CliError::Usage(e.render().to_string()));
        }
    };
    let mut g = cli.global.clone();
    if let Some(path) = &g.config.clone() {
        apply_config(&mut g, path)?;
    }
    if g.json && g.csv {
        return usage("--json and --csv are exclusive");
    }
    if let Some(k) = g.jobs {
        if k == 0 {
            return usage("--jobs must be at least 1");
        }
        // only the first call can size the global pool; later ones are no-ops
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
    }
    let out = match cli.command {
        Command::Replay { path } => return replay(&path).map(|s| (s, g)),
        Command::Fgl(c) => commands::fgl(c, &g)?,
        Command::Hs(c) => commands::hs(c, &g)?,
        Command::Mf(c) => commands::mf(c, &g)?,
        Command::Mlde(c) => commands::mlde(c, &g)?,
        Command::Pierce(c) => commands::pierce(c, &g)?,
        Command::Theta(c) => commands::theta(c, &g)?,
    };
    Ok((render(&out, &g)?, g))
}

fn strip_manifest_flag(argv: &[String]) -> Vec<String> {
    let mut out = Vec::with_capacity(argv.len());
    let mut skip = false;
    for a in argv {
        if skip {
            skip = false;
        } else if a == "--manifest" {
            skip = true;
        } else if !a.starts_with("--manifest=") {
            out.push(a.clone());
        }
    }
    out
}

fn replay(path: &Path) -> CliResult<String> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read manifest {}: {e}", path.display())))?;
    let m: Manifest = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad manifest: {e}")))?;
    let (output, _) = execute(&strip_manifest_flag(&m.command_line))?;
    let got = digest(&output);
    let report = serde_json::json!({
        "expected_sha256": m.output_sha256,
        "output_sha256": got,
        "identical": got == m.output_sha256,
    });
    if got != m.output_sha256 {
        return Err(CliError::Compute(format!("replay output differs: {}", render_json(&report).trim_end())));
    }
    Ok(render_json(&report))
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let started = Instant::now();
    match execute(&argv) {
        Ok((output, g)) => {
            print!("{output}");
            if let Some(path) = &g.manifest {
                let manifest = Manifest {
                    command_line: argv.clone(),
                    config: Config {
                        order: g.order,
                        terms: g.terms,
                        ring: g.ring.clone(),
                        json: Some(g.json),
                        csv: Some(g.csv),
                        jobs: g.jobs,
                        seed: g.seed,
                    },
                    tool_version: env!("CARGO_PKG_VERSION").to_string(),
                    elapsed_ms: started.elapsed().as_millis(),
                    output_sha256: digest(&output),
                };
                let body = serde_json::to_string_pretty(&manifest).expect("serializable");
                if let Err(e) = fs::write(path, body + "\n") {
                    eprintln!("error: cannot write manifest {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            }
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("{}", msg.trim_end());
            ExitCode::from(2)
        }
        Err(CliError::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
