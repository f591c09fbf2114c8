//! `fanodb` command-line tool: store maintenance, queries, the decomposition
//! table and a read-only HTTP service.

pub mod service;

use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use fanodb_core::docstore::{DocStore, DocStoreError, FindOptions, Query, SortOrder};
use fanodb_core::pipeline::{self, render_table, table_rows, PipelineError, COLLECTION, GROUP};
use fanodb_core::{enumerate_smooth_fano, EnumerateError};
use serde_json::json;
use thiserror::Error;

#[derive(Parser, Debug)]
#[command(name = "fanodb", version, about = "Smooth Fano polytope database tools")]
pub struct Cli {
    /// Store directory.
    #[arg(long, env = "FANODB_STORE", default_value = "fanodb-store", global = true)]
    pub store: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Ndjson,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List collection groups and collections.
    Info,
    /// Print matching documents, one JSON object per line.
    Query {
        #[arg(long, default_value = GROUP)]
        group: String,
        #[arg(long, default_value = COLLECTION)]
        collection: String,
        #[arg(long, default_value = "{}")]
        q: String,
        #[arg(long, default_value_t = 0)]
        skip: usize,
        #[arg(long)]
        limit: Option<usize>,
        /// Sort by `_id` descending.
        #[arg(long)]
        desc: bool,
        /// Print only the number of matches.
        #[arg(long)]
        count: bool,
    },
    /// Add the documents of an NDJSON file to a collection.
    Import {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value = GROUP)]
        group: String,
        #[arg(long, default_value = COLLECTION)]
        collection: String,
    },
    /// Write a collection as NDJSON sorted by `_id`.
    Export {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value = GROUP)]
        group: String,
        #[arg(long, default_value = COLLECTION)]
        collection: String,
    },
    /// Enumerate and store the smooth reflexive polytopes up to a dimension.
    Build {
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
    },
    /// Count smooth Fano classes in one dimension.
    Enumerate {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 2)]
        bound: i64,
        /// Also print each class's vertices.
        #[arg(long)]
        list: bool,
    },
    /// Count free sums, skew bipyramids and simplex sums.
    Decompose {
        /// One or more dimensions, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        dim: Vec<usize>,
        #[arg(long)]
        splitinfo: bool,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Serve the store read-only over HTTP.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: String,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Store(#[from] DocStoreError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Enumerate(#[from] EnumerateError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 3 malformed query, 4 missing collection, 5 not found, 6 I/O, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        let store = match self {
            CliError::Store(e) | CliError::Pipeline(PipelineError::Store(e)) => Some(e),
            _ => None,
        };
        match (self, store) {
            (_, Some(DocStoreError::Query(_))) => 3,
            (_, Some(DocStoreError::UnknownGroup(_) | DocStoreError::UnknownCollection { .. })) => 4,
            (_, Some(DocStoreError::Io(_))) | (CliError::Io(_), _) => 6,
            (CliError::Pipeline(PipelineError::NotFound), _) => 5,
            _ => 1,
        }
    }
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Info => {
            let store = DocStore::open(&cli.store)?;
            write!(out, "{}", store.db_info())?;
        }
        Command::Query { group, collection, q, skip, limit, desc, count } => {
            let store = DocStore::open(&cli.store)?;
            let q = Query::parse_str(&q).map_err(DocStoreError::from)?;
            let sort = if desc { SortOrder::IdDescending } else { SortOrder::IdAscending };
            let docs = store.db_query(&q, &group, &collection, FindOptions { skip, limit, sort })?;
            if count {
                writeln!(out, "{}", docs.len())?;
            } else {
                for d in docs {
                    writeln!(out, "{d}")?;
                }
            }
        }
        Command::Import { file, group, collection } => {
            let mut store = DocStore::open(&cli.store)?;
            let n = store.import_collection(&file, &group, &collection)?;
            store.save(&cli.store)?;
            writeln!(out, "imported {n} documents into {group}/{collection}")?;
        }
        Command::Export { file, group, collection } => {
            let store = DocStore::open(&cli.store)?;
            let n = store.export_collection(&file, &group, &collection)?;
            writeln!(out, "exported {n} documents from {group}/{collection}")?;
        }
        Command::Build { max_dim } => {
            let mut store = DocStore::open(&cli.store)?;
            let n = pipeline::build_collection(&mut store, max_dim)?;
            store.save(&cli.store)?;
            writeln!(out, "stored {n} documents in {GROUP}/{COLLECTION}")?;
        }
        Command::Enumerate { dim, bound, list } => {
            let r = enumerate_smooth_fano(dim, bound)?;
            let noun = if r.polytopes.len() == 1 { "class" } else { "classes" };
            writeln!(
                out,
                "dimension {dim}: {} {noun} (bound {bound}, {} closed complexes, {} cap hits)",
                r.polytopes.len(),
                r.closed,
                r.cap_hits
            )?;
            if list {
                for (p, nf) in r.polytopes.iter().zip(&r.normal_forms) {
                    let vertices: Vec<Vec<String>> = p
                        .integer_vertices()
                        .expect("lattice polytope")
                        .iter()
                        .map(|v| v.iter().map(|x| x.to_string()).collect())
                        .collect();
                    writeln!(out, "{}", json!({ "normal_form": nf.digest_hex(), "vertices": vertices }))?;
                }
            }
        }
        Command::Decompose { dim, splitinfo, format } => {
            let store = DocStore::open(&cli.store)?;
            let reports = dim
                .iter()
                .map(|&d| pipeline::decomposition_stats(&store, d, splitinfo))
                .collect::<Result<Vec<_>, _>>()?;
            match format {
                Format::Table => {
                    write!(out, "{}", render_table(&reports))?;
                    if splitinfo {
                        writeln!(out, "# splits")?;
                        for r in &reports {
                            for (id, splits) in r.splits.iter().flatten() {
                                let list: Vec<String> = splits.iter().map(ToString::to_string).collect();
                                writeln!(out, "# {id} {}", list.join(" "))?;
                            }
                        }
                    }
                }
                Format::Ndjson => {
                    for row in table_rows(&reports) {
                        writeln!(out, "{}", row.to_json())?;
                    }
                    for r in &reports {
                        for (id, splits) in r.splits.iter().flatten() {
                            let list: Vec<String> = splits.iter().map(ToString::to_string).collect();
                            writeln!(out, "{}", json!({ "dimension": r.dimension, "_id": id, "splits": list }))?;
                        }
                    }
                }
            }
        }
        Command::Serve { addr } => {
            let store = Arc::new(DocStore::open(&cli.store)?);
            let runtime = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
            runtime.block_on(async {
                let listener = tokio::net::TcpListener::bind(&addr).await?;
                eprintln!("serving {} on http://{}", cli.store.display(), listener.local_addr()?);
                service::serve(store, listener).await
            })?;
        }
    }
    Ok(())
}
