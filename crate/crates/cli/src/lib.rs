//! Command-line front end for the nilpotent growth toolkit.

pub mod args;
pub mod cache;
pub mod commands;
pub mod plot;
