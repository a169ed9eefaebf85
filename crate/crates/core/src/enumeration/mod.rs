//! Gauge orbits of commuting diagonal representations into `SO(n)`.

pub mod appendix;
pub mod scan;
pub mod tokens;

pub use appendix::{parse_list, verify_appendix, AppendixReport};
pub use scan::{
    enumerate, inclusion_exclusion_so3, nogo_scan, canonical_representative, NoGoReport,
    OrbitCatalog, OrbitRecord, ScanMode, ScanOptions, tau_triple_scan, TauTripleReport,
};
pub use tokens::{OrbitKey, SignVector, TokenTuple};
