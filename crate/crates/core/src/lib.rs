//! Exact algebra for hermitian cubic norm structures.

pub mod auto;
pub mod hcns;
pub mod hermform;
pub mod instances;
pub mod io;
pub mod lie;
pub mod linalg;
pub mod moufang;
pub mod oneinv;
pub mod perm;
pub mod report;
pub mod scalars;
pub mod suites;
pub mod universal;
