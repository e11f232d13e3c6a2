//! Noncrossing partition calculus, the intertwiner maps `T_p` over a
//! multimatrix algebra with a state, decorated partitions over a group and
//! the fusion rules of free wreath products.

pub mod algebra;
pub mod decorated;
pub mod fusion;
pub mod group;
pub mod partition;
pub mod tensor_maps;
mod union_find;

pub use algebra::{AlgebraError, MultiMatrixAlgebra};
pub use decorated::{DecoratedError, DecoratedPartition};
pub use fusion::{FusionError, FusionRing, RepCombination, Word, WordRing};
pub use group::{Group, GroupElement, GroupError};
pub use partition::{Partition, PartitionError};
pub use tensor_maps::{TensorMap, TensorMapError};
