//! File formats, corpus generation and the command-line front end for
//! `cwb-core`.

pub mod app;
pub mod corpus;
pub mod formats;
