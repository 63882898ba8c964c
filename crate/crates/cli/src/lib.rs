//! Command-line front end and HTTP service for bipolar PROMETHEE.

pub mod args;
pub mod commands;
pub mod render;
pub mod service;
