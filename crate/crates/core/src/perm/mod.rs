//! Permutations, structural predicates, enumeration and pattern counting.

pub mod count;
pub(crate) mod fast;
pub mod enumerate;
mod permutation;
pub mod stats;

pub use count::{
    count_homomorphisms, count_monomorphisms, count_occurrences, count_patterns, density,
    density_hom, density_mon, dominating_patterns, PatternCounts,
};
pub use enumerate::{
    enumerate_patterns, enumerate_patterns_capped, permutations_of_order, CanonicalPatternList,
    PatternClass, DEFAULT_ENUMERATION_CAP,
};
pub use fast::count_occurrences_small;
pub use permutation::Permutation;
pub use stats::{sample_uniform_statistics, UniformStatistics};
