//! Local-unitary invariants of multipartite quantum states.
//!
//! The crate has two halves. The exact half counts invariants: symmetric
//! group characters, stable and bounded-dimension invariant counts, the
//! Hilbert series and its Euler-product exponents, and brute-force orbit
//! censuses used as independent oracles. The numeric half evaluates
//! invariants on concrete states: partial traces, purification, the
//! degree-four pure-state invariants `I_A`, the purities `J_A`, the
//! parity transform relating them, `η_A`, the Meyer-Wallach measure and
//! the higher-degree analogues.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod census;
pub mod characters;
pub mod combinatorics;
pub mod dimensions;
pub mod invariants;
pub mod series;
pub mod states;
pub mod subset;

pub use census::{conjugation_orbit_count, count_subgroup_classes, is_transitive, CensusError, PermTuple};
pub use characters::{
    inner_product, irreducible_character, kronecker_multiplicity, CharacterError, CharacterTable, ClassFunction,
};
pub use combinatorics::{centralizer_order, partitions_of, CycleType, Partition, Permutation};
pub use dimensions::{
    mixed_dimension, qubit_dimension, restricted_dimension, stable_dimension, stable_dimension_via_characters,
    DimensionError, DimensionQuery,
};
pub use invariants::{
    basis_vector_m2, eta, higher_basis_vector, higher_invariant, i_from_j, invariant_i, invariant_j, j_from_i,
    meyer_wallach, InvariantError, InvariantVector, SymmetricTensor,
};
pub use series::{
    euler_exponents, free_generator_count, generator_counts, hilbert_series, GeneratorCounts, PowerSeries, SeriesError,
};
pub use states::{
    invariant_space_rank, partial_trace, permutation_contraction, projector, purify, random_pure_state, DensityMatrix,
    PureState, StateError,
};
pub use subset::{SubsetError, SubsetMask};
