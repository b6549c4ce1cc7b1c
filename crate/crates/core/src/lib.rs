//! Exact arithmetic for binary multiplicative character sums over sets with
//! small additive doubling.
//!
//! Everything here is `no_std` (with `alloc`): prime fields with discrete-log
//! tables, multiplicative characters carried as unit-root indices, set algebra
//! and generalized arithmetic progressions over `F_p`, multiplicative
//! representation profiles and energies, Paley graph cliques, and a verifier
//! that walks the chain of inequalities bounding `sum_{a in A, b in B} chi(a + b)`.
//!
//! IO, configuration and the command line live in the `charsum-lab` crate.

#![cfg_attr(not(test), no_std)]
#![deny(missing_docs)]

extern crate alloc;

mod bitset;
pub mod charsum;
pub mod energy;
mod error;
pub mod field;
pub mod paley;
pub mod roots;
pub mod sets;
pub mod trace;

pub use self::{
    charsum::{
        char_sum, davenport_check, translate_average, weil_sum, CharSum, DavenportReport,
        SplitPoly, TranslateAverage, WeilReport,
    },
    energy::{
        e3_bound_report, e3_mult, holder_chain_check, nu_profile, ratio_profile, system_count,
        system_count_with_zeros, E3BoundReport, HolderCheck, NuProfile, RatioProfile, SystemCount,
        ZeroPolicy,
    },
    error::{Error, Result},
    field::{find_primitive_root, is_prime, make_character, Character, PrimeField},
    paley::{build_paley, clique_growth_report, CliqueGrowthReport, CliqueRow, PaleyGraph},
    roots::UnitRootSum,
    sets::{box_containment, BoxContainment, FpSet, Gap, GapEnumeration},
    trace::{proof_trace, ProofTrace, Status, Verdict},
};
