//! Toolkit for discriminating between similar languages and language varieties.
//!
//! The crate is organised around the evaluation workflow of the DSL shared
//! tasks:
//!
//! * [`corpus`] reads `text<TAB>label` corpora, restricts them to language
//!   groups and draws balanced subsamples.
//! * [`features`] turns text into sparse character / word n-gram vectors.
//! * [`classifiers`] trains flat and two-stage (group, then language) models.
//!   Trainers are registered by name in a [`classifiers::TrainerRegistry`].
//! * [`ensemble`] fuses the outputs of many systems (plurality, majority,
//!   oracle, accuracy@N). Combiners are registered by name in a
//!   [`ensemble::CombinerRegistry`].
//! * [`evaluation`] scores predictions, runs learning curves and summarises
//!   human annotation experiments.

pub mod classifiers;
pub mod corpus;
pub mod ensemble;
mod error;
pub mod evaluation;
pub mod features;
pub mod rng;

pub use error::{Error, Result};
