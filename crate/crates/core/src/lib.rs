//! Exact combinatorics of cyclic symbolic sequences and their ultrametric
//! cluster structure.
//!
//! Sequences of length `n` over an `ℓ`-letter alphabet are grouped by the
//! counts of their length-`p` cyclic windows (frequency vectors). Two
//! sequences sharing the level-`p` vector are *p-close*; the relation nests
//! as `p` grows and induces an ultrametric on necklaces. The crate provides:
//!
//! * [`seqcore`]: alphabets, canonical necklace representatives, necklace and
//!   level-1 cluster counting.
//! * [`freqspace`]: frequency vectors, projection, raising and the
//!   ultrametric distance.
//! * [`debruijn`]: de Bruijn graphs, weighted subgraphs, connectivity, exact
//!   Eulerian circuit counting and circuit enumeration.
//! * [`lowering`]: the multi-valued inverse of raising (block-wise flow
//!   balance solving followed by a connectivity filter), plus the wavelet
//!   basis used to verify the block decomposition.
//! * [`clustertree`]: the hierarchical cluster tree and its export formats.
//! * [`twofold`]: counting of binary two-fold de Bruijn sequences.

pub mod clustertree;
pub mod debruijn;
mod decimal;
mod error;
pub mod freqspace;
pub mod lowering;
pub mod seqcore;
pub mod twofold;

pub use error::{Error, Result};

pub use clustertree::{build_tree, ClusterNode, ClusterTree, ExportFormat, TreeOptions};
pub use debruijn::{
    count_debruijn_sequences, count_eulerian_cycles, DeBruijnGraph, Multigraph, MultigraphMinor,
    WeightedSubgraph,
};
pub use freqspace::{project, raise, FrequencyVector};
pub use lowering::{count_members, lower, solve_step1};
pub use seqcore::{canonicalize, necklace_count, Alphabet, Composition, CyclicSequence};
