//! Bibliometric screening and network analysis for funding-acknowledgement
//! investigations: corpus screening, researcher disambiguation, trust
//! markers, temporal clustering of publication activity, co-authorship
//! metrics and grant aggregation.

pub mod compositional;
pub mod config;
pub mod corpus;
pub mod country;
pub mod funding;
pub mod hclust;
pub mod metrics;
pub mod model;
pub mod money;
pub mod network;
pub mod par;
pub mod report;
pub mod resolve;
pub mod screening;
pub mod synth;
pub mod temporal;
pub mod text;
pub mod trust;
pub mod validity;
