//! Engines for three models of computation in slime mould.
//!
//! * [`actin`]: a two-chain excitable automaton over tri-state nodes, with
//!   space-time recording and a localization (glider / gun) detector.
//! * [`proximity`]: planar proximity graphs over point sets (Delaunay,
//!   Gabriel, relative neighbourhood, minimum spanning tree), the
//!   containment check between them, and random / small-world reference
//!   topologies with clustering metrics.
//! * [`swarm`]: a lattice-based multi-agent plasmodium that senses, follows
//!   and deposits a diffusing chemoattractant and suppresses the projection
//!   of stimulus nodes it engulfs.
//!
//! All randomness flows through [`rng::SimRng`], seeded explicitly.

pub mod actin;
pub mod pgm;
pub mod proximity;
pub mod rng;
pub mod swarm;
