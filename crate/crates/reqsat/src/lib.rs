//! Front end for the requirement contradiction analyzer: report
//! rendering, the end-to-end pipeline behind the CLI, and the HTTP
//! service. All analysis logic lives in `reqsat-core`.

pub mod pipeline;
pub mod report;
pub mod service;
