pub mod board;
pub mod graph;
pub mod winsets;
