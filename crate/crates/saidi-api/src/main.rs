use clap::Parser;
use saidi_api::{app, Config};
use std::path::PathBuf;

/// Serve the saidi planner API.
#[derive(Parser)]
#[command(name = "saidi-api", version)]
struct Args {
    #[arg(long, default_value = "127.0.0.1:8080")]
    bind: String,
    /// async worker threads; engine work runs on the blocking pool
    #[arg(long, default_value_t = 4)]
    workers: usize,
    #[arg(long, default_value_t = 256)]
    session_cap: usize,
    #[arg(long, default_value_t = 32)]
    undo_depth: usize,
    /// exact runs above this many edges answer 202 with a poll token
    #[arg(long, default_value_t = 60)]
    async_edges: usize,
    /// require `Authorization: Bearer <token>`
    #[arg(long, env = "SAIDI_API_TOKEN")]
    token: Option<String>,
    /// write each session's current document here
    #[arg(long)]
    persist_dir: Option<PathBuf>,
}

fn main() -> std::io::Result<()> {
    let a = Args::parse();
    let config = Config {
        session_cap: a.session_cap,
        undo_depth: a.undo_depth,
        async_edges: a.async_edges,
        token: a.token,
        persist_dir: a.persist_dir,
    };
    tokio::runtime::Builder::new_multi_thread()
        .worker_threads(a.workers.max(1))
        .enable_all()
        .build()?
        .block_on(async {
            let listener = tokio::net::TcpListener::bind(&a.bind).await?;
            eprintln!("listening on {}", listener.local_addr()?);
            axum::serve(listener, app(config)).await
        })
}
