//! Exact counts of finite-index subrings and orders in rings given by integer
//! structure constants, plus the numerical checks built on them.

#![allow(clippy::needless_range_loop)]

pub mod count;
pub mod error;
pub mod galois;
pub mod hnf;
pub mod modular;
pub mod oracle;
pub mod poly;
pub mod ring;
pub mod series;
pub mod table;
pub mod verify;

pub use count::{
    count_for_diagonal, count_index, local_factor_coeffs, mu_volume, Counter, MuVolume, Strategy,
};
pub use error::{Error, Result};
pub use galois::{
    burnside_r, close_group, cycle_stats, r2_closed_forms, r2_orbits, CycleTypeStats, GroupKind,
    PermGroup,
};
pub use hnf::{closure_check, unital_check, HnfRep};
pub use oracle::{count_global, lattice_contains, GlobalHnf};
pub use poly::{find_irreducible, FpPoly, IntPoly};
pub use ring::{
    make_monogenic_ring, make_split_ring, make_unramified_product, product_ring, ring_from_kind,
    SplittingType, StructureRing, Violation,
};
pub use series::{
    assemble_counts, fit_log_power, splitting_type_of, AsymptoticFit, Family, RamifiedPolicy,
    SeriesProfile,
};
pub use table::{parse_cache_line, CacheRecord, LocalCountTable};
pub use verify::{
    check_congruence_props, check_mu_bounds, check_quintic_exponent, check_wishful, verify_a1,
    A1Check, BoundCheckReport,
};
