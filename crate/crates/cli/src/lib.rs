//! One-shot and interactive command-line access to the query pipeline.

use std::io::{BufRead, Write};
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use indexmap::IndexMap;
use nl2vis::ingest::{infer_metadata, load_dataset_path, SourceFormat};
use nl2vis::{serialize, Analyzer, Config, Error};

pub const EXIT_OK: u8 = 0;
pub const EXIT_DATA: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Analytic,
    Vegalite,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Tsv,
    Json,
}

impl From<Format> for SourceFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => SourceFormat::Csv,
            Format::Tsv => SourceFormat::Tsv,
            Format::Json => SourceFormat::Json,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "nl2vis", about = "Turn a natural-language query over a dataset into charts")]
pub struct CliArgs {
    /// Dataset file (CSV, TSV or JSON records).
    #[arg(long = "data")]
    pub data_path: PathBuf,
    /// Input format; guessed from the file extension when omitted.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Query to analyze (required unless --repl).
    #[arg(long)]
    pub query: Option<String>,
    /// JSON object mapping attribute names to alias lists.
    #[arg(long = "alias-map")]
    pub alias_map_path: Option<PathBuf>,
    /// JSON configuration file.
    #[arg(long = "config", env = "NL2VIS_CONFIG")]
    pub config_path: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "analytic")]
    pub output: Output,
    /// Include the debug section in analytic output.
    #[arg(long)]
    pub debug: bool,
    /// Read queries line by line from standard input.
    #[arg(long)]
    pub repl: bool,
    /// Treat each REPL query as a follow-up to the previous one.
    #[arg(long)]
    pub dialog: bool,
}

fn build_analyzer(args: &CliArgs, err: &mut dyn Write) -> Result<Analyzer, u8> {
    let config = match &args.config_path {
        Some(p) => Config::load(p).map_err(|e| {
            let _ = writeln!(err, "error: config {}: {e}", p.display());
            EXIT_USAGE
        })?,
        None => Config::default(),
    };
    let data_error = |e: Error, err: &mut dyn Write| {
        let _ = writeln!(err, "error: {}: {e}", args.data_path.display());
        EXIT_DATA
    };
    let dataset = load_dataset_path(&args.data_path, args.format.map(Into::into)).map_err(|e| data_error(e, err))?;
    let profile = infer_metadata(dataset).map_err(|e| data_error(e, err))?;
    let name = args
        .data_path
        .file_stem()
        .map_or_else(|| "data".to_string(), |s| s.to_string_lossy().into_owned());
    let mut analyzer = Analyzer::new(profile, config)
        .map_err(|e| {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        })?
        .with_data_name(name);
    for w in analyzer.warnings() {
        let _ = writeln!(err, "warning: {w}");
    }
    if let Some(path) = &args.alias_map_path {
        let text = std::fs::read_to_string(path).map_err(|e| {
            let _ = writeln!(err, "error: alias map {}: {e}", path.display());
            EXIT_DATA
        })?;
        let aliases: IndexMap<String, Vec<String>> = serde_json::from_str(&text).map_err(|e| {
            let _ = writeln!(err, "error: alias map {}: {e}", path.display());
            EXIT_DATA
        })?;
        analyzer.set_alias_map(&aliases).map_err(|e| {
            let _ = writeln!(err, "error: alias map: {e}");
            EXIT_DATA
        })?;
    }
    Ok(analyzer)
}

fn answer(
    analyzer: &mut Analyzer,
    args: &CliArgs,
    query: &str,
    dialog: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), u8> {
    let spec = analyzer.analyze_query(query, dialog, args.debug, None).map_err(|e| {
        let _ = writeln!(err, "error: {e}");
        if matches!(e, Error::EmptyQuery) {
            EXIT_USAGE
        } else {
            EXIT_DATA
        }
    })?;
    if matches!(args.output, Output::Analytic | Output::Both) {
        let _ = writeln!(out, "{}", serialize(&spec));
    }
    if matches!(args.output, Output::Vegalite | Output::Both) {
        match spec.vis_list.into_iter().next() {
            Some(entry) => {
                let mut vl = entry.vl_spec;
                vl.data.values = Some(analyzer.profile().records_json(None));
                let _ = writeln!(out, "{}", serde_json::to_string(&vl).expect("spec serializes"));
            }
            None => {
                let _ = writeln!(err, "note: {}", Error::NoVisualization);
            }
        }
    }
    Ok(())
}

/// Run with the given argument vector (program name first). Returns the exit code.
pub fn run(argv: &[String], input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let args = match CliArgs::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
            } else {
                let _ = write!(out, "{}", e.render());
            }
            return code;
        }
    };
    if !args.repl && args.query.as_deref().is_none_or(|q| q.trim().is_empty()) {
        let _ = writeln!(err, "error: a non-empty --query is required unless --repl is given\n");
        let _ = write!(err, "{}", <CliArgs as clap::CommandFactory>::command().render_usage());
        let _ = writeln!(err);
        return EXIT_USAGE;
    }
    let mut analyzer = match build_analyzer(&args, err) {
        Ok(a) => a,
        Err(code) => return code,
    };
    if !args.repl {
        let query = args.query.clone().unwrap_or_default();
        return match answer(&mut analyzer, &args, &query, false, out, err) {
            Ok(()) => EXIT_OK,
            Err(code) => code,
        };
    }

    let mut line = String::new();
    loop {
        let _ = write!(err, "> ");
        let _ = err.flush();
        line.clear();
        match input.read_line(&mut line) {
            Ok(0) => break,
            Ok(_) => {}
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return EXIT_DATA;
            }
        }
        let query = line.trim();
        if query.is_empty() {
            continue;
        }
        if matches!(query, ":quit" | ":q" | "exit") {
            break;
        }
        // Errors on one line do not end the session.
        let _ = answer(&mut analyzer, &args, query, args.dialog, out, err);
        let _ = out.flush();
    }
    EXIT_OK
}
