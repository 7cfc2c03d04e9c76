//! Exact semiparametric inference for sequential order statistics.

pub mod baseline;
pub mod cli;
pub mod data;
pub mod error;
pub mod estimate;
pub mod gof;
pub mod mc;
pub mod model;
pub mod param_test;
pub mod plot;
pub mod ranks;
pub mod reliasoft;
pub mod sampling;
pub mod step;

pub use baseline::BaselineCdf;
pub use data::DataMatrix;
pub use error::{Error, Result};
pub use model::{ModelParams, Shape};
pub use ranks::{RankStructure, TiePolicy};
pub use step::StepFunction;
