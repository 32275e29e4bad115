//! Power-dispatch scenario simulation and instruction-dataset generation.

pub mod black_start;
pub mod cli;
pub mod corpus;
pub mod dispatch;
pub mod grid;
pub mod instruct;
pub mod power_flow;
pub mod rng;
pub mod scenario;
