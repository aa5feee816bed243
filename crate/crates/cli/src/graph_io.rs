//! Graph interchange format: `{"n": 5, "edges": [[0,1],[2,3]]}`.
//!
//! Written edges are sorted with the smaller endpoint first, so output is
//! canonical; input order and endpoint order are accepted liberally. Unknown
//! fields are ignored, which lets the metadata-bearing output of `sample` be
//! fed straight back in as a host graph.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::CliError;
use graph_core::Graph;

#[derive(Debug, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl GraphJson {
    pub fn from_graph(g: &Graph) -> Self {
        let mut edges = g.edges();
        edges.sort_unstable();
        GraphJson { n: g.n(), edges }
    }

    pub fn to_graph(&self) -> Result<Graph, CliError> {
        Ok(Graph::from_edges(self.n, &self.edges)?)
    }
}

pub fn load_graph(path: &Path) -> Result<Graph, CliError> {
    let text = std::fs::read_to_string(path)?;
    let parsed: GraphJson = serde_json::from_str(&text)?;
    parsed.to_graph()
}
