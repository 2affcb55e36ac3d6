//! Programs that print programs, read as ordinal notations.
//!
//! * [`objlang`]: a tiny string language with a parser, canonical printer
//!   and fuel-bounded evaluator.
//! * [`ordinals`]: Cantor normal form arithmetic below ε₀, fundamental
//!   sequences, descent walks and the hydra game.
//! * [`notation`]: compiling ordinals to notation programs, recognizing
//!   them, and checking arbitrary programs under fuel.
//! * [`lineage`]: seeded simulations of agents with ordinal intelligence.

pub mod lineage;
pub mod notation;
pub mod objlang;
pub mod ordinals;
