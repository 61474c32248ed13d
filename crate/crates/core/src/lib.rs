//! Erdős–Hajnal machinery for graphs of bounded VC-dimension: regularity
//! partitions, pure blockades, restricted subgraphs, cograph extraction, and
//! their hypergraph and tournament counterparts.

pub mod bigraph;
pub mod blockade;
pub mod engine;
pub mod error;
pub mod experiment;
pub mod gen;
pub mod graph;
pub mod hyper;
pub mod oracle;
pub mod params;
pub mod rational;
pub mod regularity;
pub mod tournament;
pub mod turan;
pub mod vc;
pub mod vertex_set;

pub use bigraph::Bigraph;
pub use blockade::{Blockade, PureBlockade};
pub use engine::{clique_or_stable, CliqueOrStable, ExtractionOutcome, Restricted};
pub use error::{BoundNotMet, Error, Result, Stage};
pub use graph::{Equipartition, Graph, SetKind, Side};
pub use hyper::Hypergraph;
pub use params::ExponentParams;
pub use rational::Rational;
pub use tournament::Tournament;
pub use vertex_set::VertexSet;
