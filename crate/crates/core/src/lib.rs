pub mod cli;
pub mod fstruct;
pub mod generator;
pub mod grammar;
pub mod semgraph;
pub mod tagcore;
