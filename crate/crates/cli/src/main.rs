use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use bricolage_core::{CollectionIndex, Error};
use clap::{Args, Parser, Subcommand};

mod query;

/// Ingest, query and serve print collections by their material qualities.
#[derive(Debug, Parser)]
#[command(name = "bricolage", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a manifest and build the index (palettes, size categories, timeline).
    Ingest(IngestArgs),
    /// Print the ids of anthologies matching a filter, in collection order.
    Query(query::QueryArgs),
    /// Serve the HTTP API over an index.
    Serve(ServeArgs),
    /// Write the ten-item synthetic sample collection.
    Sample {
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
struct IngestArgs {
    #[arg(long)]
    manifest: PathBuf,
    /// Directory that manifest image paths are relative to.
    #[arg(long)]
    images: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Palette entries per cover.
    #[arg(long, default_value_t = bricolage_core::palette::K_MAX, value_parser = parse_k)]
    k_colors: usize,
}

fn parse_k(raw: &str) -> Result<usize, String> {
    let limit = bricolage_core::palette::K_LIMIT;
    match raw.parse::<usize>() {
        Ok(k) if (1..=limit).contains(&k) => Ok(k),
        _ => Err(format!("expected an integer in 1..={limit}")),
    }
}

#[derive(Debug, Args)]
struct ServeArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long)]
    images: PathBuf,
    #[arg(long, env = "BRICOLAGE_DATA_DIR")]
    data_dir: PathBuf,
    #[arg(long, default_value_t = 8080)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    host: String,
    /// Static UI bundle served at `/`.
    #[arg(long)]
    static_dir: Option<PathBuf>,
}

/// Failure with its exit status: 1 for runtime errors, 2 for bad input.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        Failure { code: 1, error }
    }
}

fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::MalformedManifest(_)
            | Error::DuplicateId(_)
            | Error::InvalidDimension { .. }
            | Error::InvalidYear { .. }
            | Error::EmptyStories(_)
            | Error::MissingImage(_)
            | Error::ImageDecode { .. }
            | Error::EmptyImage
            | Error::EmptyCollection
    )
}

fn ingest(args: IngestArgs) -> Result<(), Failure> {
    let manifest = std::fs::read(&args.manifest).with_context(|| format!("reading {}", args.manifest.display()))?;
    let index = CollectionIndex::ingest(&manifest, &args.images, args.k_colors).map_err(|e| {
        let code = if is_input_error(&e) { 2 } else { 1 };
        Failure { code, error: anyhow::anyhow!("{}: {e} [{}]", args.manifest.display(), e.code()) }
    })?;
    std::fs::write(&args.out, index.to_json()).with_context(|| format!("writing {}", args.out.display()))?;
    eprintln!(
        "indexed {} anthologies into {} size categories -> {}",
        index.collection().len(),
        index.size_categories().len(),
        args.out.display()
    );
    Ok(())
}

fn serve(args: ServeArgs) -> Result<(), Failure> {
    let runtime = tokio::runtime::Builder::new_multi_thread().enable_all().build().context("starting runtime")?;
    runtime
        .block_on(bricolage_service::serve(bricolage_service::ServeConfig {
            index_path: args.index,
            image_root: args.images,
            data_dir: args.data_dir,
            host: args.host,
            port: args.port,
            static_dir: args.static_dir,
        }))
        .map_err(|e| Failure::from(anyhow::Error::new(e)))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Ingest(args) => ingest(args),
        Command::Query(args) => query::run(args),
        Command::Serve(args) => serve(args),
        Command::Sample { out } => {
            bricolage_core::sample::write_sample(&out).with_context(|| format!("writing sample to {}", out.display()))?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::from_default_env())
        .with_writer(std::io::stderr)
        .init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure { code, error }) => {
            eprintln!("error: {error:#}");
            ExitCode::from(code)
        }
    }
}
