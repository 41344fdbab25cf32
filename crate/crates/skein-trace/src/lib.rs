//! File formats, the compute pipeline and the instance corpus on top of
//! `skein-core`.

pub mod corpus;
pub mod io;
pub mod relabel;
pub mod run;
