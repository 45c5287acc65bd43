use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::Parser;
use nl2vis::Config;
use nl2vis_server::{router, AppState, ServiceConfig};

#[derive(Debug, Parser)]
#[command(name = "nl2vis-server", about = "Serve natural-language chart queries over HTTP")]
struct Args {
    #[arg(long, env = "NL2VIS_BIND", default_value = "127.0.0.1:8080")]
    bind: SocketAddr,
    #[arg(long, env = "NL2VIS_CONFIG")]
    config: Option<PathBuf>,
    /// Preload a dataset, as `name=path`. Repeatable.
    #[arg(long = "dataset", value_parser = parse_dataset)]
    datasets: Vec<(String, PathBuf)>,
    /// Idle seconds before a dialog session is dropped.
    #[arg(long, default_value_t = 1800)]
    session_ttl: u64,
    #[arg(long, default_value_t = 25)]
    max_upload_mb: usize,
}

fn parse_dataset(s: &str) -> Result<(String, PathBuf), String> {
    let (name, path) = s.split_once('=').ok_or("expected name=path")?;
    if name.is_empty() || path.is_empty() {
        return Err("expected name=path".into());
    }
    Ok((name.to_string(), PathBuf::from(path)))
}

#[tokio::main]
async fn main() -> ExitCode {
    let args = Args::parse();
    let analyzer = match &args.config {
        Some(path) => match Config::load(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        },
        None => Config::default(),
    };
    let state = AppState::new(ServiceConfig {
        analyzer,
        session_ttl: Duration::from_secs(args.session_ttl),
        max_upload_bytes: args.max_upload_mb * 1024 * 1024,
    });
    for (name, path) in &args.datasets {
        match state.add_dataset_path(name, path) {
            Ok(id) => eprintln!("loaded {name} as {id}"),
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
    }

    let sweeper = state.clone();
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(Duration::from_secs(60));
        loop {
            tick.tick().await;
            sweeper.prune_sessions();
        }
    });

    let listener = match tokio::net::TcpListener::bind(args.bind).await {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: cannot bind {}: {e}", args.bind);
            return ExitCode::from(1);
        }
    };
    eprintln!("listening on {}", args.bind);
    if let Err(e) = axum::serve(listener, router(state)).await {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
