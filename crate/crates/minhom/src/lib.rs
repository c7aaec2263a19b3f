//! Exact minimum-cost graph homomorphism toolkit.
//!
//! Given a fixed target graph `H` (loops allowed) and an input graph `G`
//! with per-assignment costs, the minimum-cost homomorphism problem asks for
//! an edge-preserving map `V(G) -> V(H)` of least total cost. The crate
//! classifies any target into the polynomial/NP-complete dichotomy with a
//! machine-checkable certificate either way, solves polynomial targets
//! exactly through a single minimum-cut construction per component, converts
//! ordering certificates to inclusion-free interval representations and
//! back, and ships exhaustive oracles plus hardness-gadget generators for
//! end-to-end verification.

pub mod flow;
pub mod graph;
pub mod instance;
pub mod intervals;
pub mod oracle;
pub mod recognition;
pub mod reductions;
pub mod solver;
pub mod synth;

pub use graph::{Bipartition, Graph, GraphError, InducedEmbedding, LoopProfile, OddCycleWitness};
pub use instance::{Instance, InstanceError};
pub use intervals::{Interval, IntervalError, IntervalRep};
pub use recognition::{Classification, MinMaxOrdering, NpcCertificate, RecognitionError};
pub use reductions::{GadgetInstance, GadgetKind, ReductionError, ThreePartiteGraph};
pub use solver::{Cost, CostTable, Homomorphism, SolveResult, SolverError};
