//! Command implementations behind the `gslab` binary.
//!
//! Every command is a plain function taking parsed arguments and returning a
//! [`report::Rendered`] document, so integration tests can drive the exact
//! code path the binary runs without spawning a process. Output is
//! deterministic: the same arguments and seed produce byte-identical output.

pub mod cmds;
pub mod crosscheck;
pub mod graph_io;
pub mod report;

use thiserror::Error;

/// Seed used by every command when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 1729;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments detected after clap parsing (domain violations, unknown
    /// names, malformed ranges). Exits with the same code clap uses.
    #[error("usage: {0}")]
    Usage(String),
    /// A crosscheck suite ran to completion and at least one check failed.
    #[error("{0} check(s) failed")]
    ChecksFailed(usize),
    #[error(transparent)]
    Graph(#[from] graph_core::GraphError),
    #[error(transparent)]
    Moments(#[from] moments::MomentsError),
    #[error(transparent)]
    Entanglement(#[from] entanglement::EntanglementError),
    #[error(transparent)]
    Subgraph(#[from] subgraphs::SubgraphError),
    #[error(transparent)]
    Krawtchouk(#[from] krawtchouk::DomainError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Process exit code: 1 for failed checks, 2 for everything else
    /// (matching clap's own exit code for argument errors).
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ChecksFailed(_) => 1,
            _ => 2,
        }
    }
}
