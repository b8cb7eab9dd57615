//! Exact tautological intersection numbers on moduli spaces of stable
//! curves, with a stable-graph evaluator for Chiodo classes.

pub mod exact;
pub mod poly;
pub mod intersection;
pub mod report;
pub mod hodge;
pub mod graphs;
pub mod omega;
pub mod invariants;
pub mod applications;
