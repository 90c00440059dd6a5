//! File formats, random experiments and the command-line front end.

pub mod cli;
pub mod experiment;
pub mod input;
pub mod output;
