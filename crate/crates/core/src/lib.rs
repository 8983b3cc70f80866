//! Independent transversals and strong colourings of vertex-partitioned
//! graphs.
//!
//! A graph `G` together with a partition of its vertices into `k` classes of
//! size `r` is *strongly coloured* by splitting `V(G)` into `r` independent
//! transversals — independent sets meeting every class exactly once.
//!
//! * [`it`]: independent transversal search, pinned transversals, the Haxell
//!   condition and exhaustive partition search.
//! * [`fractional`]: exact fractional weightings of the transversals.
//! * [`nibble`]: partial colourings through a random transversal hypergraph
//!   and a semi-random matching.
//! * [`absorber`] and [`pipeline`]: absorbing sets and the full colouring.
//! * [`oracle`]: brute-force strong chromatic numbers for tiny graphs.
//! * [`tiling`]: perfect clique tilings of `k`-partite graphs.
//!
//! ```
//! use strongcol::{strong_colouring, verify_it_partition, Graph, Partition, PipelineConfig};
//!
//! let g = Graph::cycle(6).unwrap();
//! let p = Partition::new(6, vec![vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
//! let out = strong_colouring(&g, &p, 0.5, &PipelineConfig::default()).unwrap();
//! assert!(verify_it_partition(&g, &p, &out.transversals).valid);
//! ```

pub mod absorber;
pub mod artifact;
pub mod error;
pub mod fractional;
pub mod graph;
pub mod instances;
pub mod io;
pub mod it;
pub mod nibble;
pub mod oracle;
pub mod partition;
pub mod pipeline;
pub mod simplex;
pub mod tiling;
pub mod transversal;

pub use absorber::{absorb, build_absorbing_set, find_absorbers_for, AbsorberParams, AbsorbingFamily};
pub use artifact::{Artifact, Certificate};
pub use error::{Error, Result};
pub use fractional::{solve_fractional_weighting, verify_weighting, FractionalWeighting, Weights};
pub use graph::Graph;
pub use instances::{generate, InstanceSpec};
pub use io::{parse_graph, parse_partition, write_graph, write_partition};
pub use it::{
    check_haxell_condition, count_pinned_its, find_independent_transversal, find_it_partition, find_pinned_it,
    HaxellReport, NodeBudget,
};
pub use nibble::{partial_strong_colouring, NibbleParams, PartialColouring};
pub use oracle::{check_all_partitions_cpt, is_strongly_r_colourable, strong_chromatic_number, OracleBudget};
pub use partition::{Classes, Partition, VertexSet};
pub use pipeline::{strong_colouring, PipelineConfig, PipelineTrace, StrongColouring};
pub use tiling::{find_perfect_kk_tiling, Tiling};
pub use transversal::{verify_it_partition, ItPartitionReport, Transversal};
