//! Local certification of bounded genus and demigenus.
//!
//! The crate embeds graphs as signed rotation systems, unfolds them onto the
//! plane by cutting along cycles and paths, records each vertex's cutting
//! history, and turns those histories into per-node certificates that a
//! one-round distributed verifier checks.

pub mod corpus;
pub mod embedding;
pub mod generate;
pub mod graph;
pub mod histories;
pub mod oracle;
pub mod pls;
pub mod surgery;
pub mod textfmt;

pub use embedding::{BoundaryWalk, Dart, DirCorner, EmbeddingError, EmbeddingScheme, Sign, SurfaceKind};
pub use graph::{degeneracy_order, spanning_tree, Edge, Graph, GraphError, SpanningTree, VertexId};
pub use textfmt::{format_scheme, parse_scheme, ParseError};
