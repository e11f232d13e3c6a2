//! Noncrossing partitions whose points carry group elements.
//!
//! A decoration is admissible when, in every block, the product of the
//! upper labels equals the product of the lower labels. Products are read
//! left to right within each row; a row without points in the block
//! contributes the identity.

use serde::{Deserialize, Serialize};

use crate::group::{Group, GroupElement, GroupError};
use crate::partition::{self, Partition, PartitionError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DecoratedError {
    #[error("NC({upper},{lower}) cannot carry {got_upper} upper and {got_lower} lower labels")]
    LabelCount {
        upper: usize,
        lower: usize,
        got_upper: usize,
        got_lower: usize,
    },
    #[error("decoration is not admissible")]
    NotAdmissible,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecoratedPartition {
    pub partition: Partition,
    pub upper_labels: Vec<GroupElement>,
    pub lower_labels: Vec<GroupElement>,
}

fn check_lengths(
    p: &Partition,
    upper: &[GroupElement],
    lower: &[GroupElement],
) -> Result<(), DecoratedError> {
    if upper.len() != p.upper_count() || lower.len() != p.lower_count() {
        return Err(DecoratedError::LabelCount {
            upper: p.upper_count(),
            lower: p.lower_count(),
            got_upper: upper.len(),
            got_lower: lower.len(),
        });
    }
    Ok(())
}

/// Per-block product test.
pub fn is_admissible(
    group: &Group,
    p: &Partition,
    upper: &[GroupElement],
    lower: &[GroupElement],
) -> Result<bool, DecoratedError> {
    check_lengths(p, upper, lower)?;
    for &x in upper.iter().chain(lower) {
        group.check(x)?;
    }
    for block in p.blocks() {
        let top = group.product(block.upper.iter().map(|&i| &upper[i]))?;
        let bottom = group.product(block.lower.iter().map(|&j| &lower[j]))?;
        if top != bottom {
            return Ok(false);
        }
    }
    Ok(true)
}

impl DecoratedPartition {
    pub fn new(
        group: &Group,
        partition: Partition,
        upper_labels: Vec<GroupElement>,
        lower_labels: Vec<GroupElement>,
    ) -> Result<Self, DecoratedError> {
        if !is_admissible(group, &partition, &upper_labels, &lower_labels)? {
            return Err(DecoratedError::NotAdmissible);
        }
        Ok(DecoratedPartition {
            partition,
            upper_labels,
            lower_labels,
        })
    }

    pub fn tensor(&self, other: &DecoratedPartition) -> DecoratedPartition {
        DecoratedPartition {
            partition: self.partition.tensor(&other.partition),
            upper_labels: [self.upper_labels.as_slice(), &other.upper_labels].concat(),
            lower_labels: [self.lower_labels.as_slice(), &other.lower_labels].concat(),
        }
    }

    pub fn adjoint(&self) -> DecoratedPartition {
        DecoratedPartition {
            partition: self.partition.adjoint(),
            upper_labels: self.lower_labels.clone(),
            lower_labels: self.upper_labels.clone(),
        }
    }

    /// Stacks `self` over `below`; the middle labels must agree.
    pub fn compose(&self, below: &DecoratedPartition) -> Result<DecoratedPartition, DecoratedError> {
        if self.lower_labels != below.upper_labels {
            return Err(PartitionError::Shape("middle labels differ".into()).into());
        }
        let comp = self.partition.compose(&below.partition)?;
        Ok(DecoratedPartition {
            partition: comp.result,
            upper_labels: self.upper_labels.clone(),
            lower_labels: below.lower_labels.clone(),
        })
    }

    pub fn to_json(&self, group: &Group) -> DecoratedJson {
        let names = |v: &[GroupElement]| v.iter().map(|&x| group.name(x)).collect();
        DecoratedJson {
            partition: self.partition.clone(),
            upper_labels: names(&self.upper_labels),
            lower_labels: names(&self.lower_labels),
        }
    }

    pub fn from_json(group: &Group, json: &DecoratedJson) -> Result<Self, DecoratedError> {
        let parse = |v: &[String]| {
            v.iter()
                .map(|s| group.parse_element(s))
                .collect::<Result<Vec<_>, _>>()
        };
        Self::new(
            group,
            json.partition.clone(),
            parse(&json.upper_labels)?,
            parse(&json.lower_labels)?,
        )
    }
}

/// File form: the partition object extended with label arrays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecoratedJson {
    #[serde(flatten)]
    pub partition: Partition,
    pub upper_labels: Vec<String>,
    pub lower_labels: Vec<String>,
}

/// Visits the admissible elements of `NC_Γ(g_1..g_k; h_1..h_l)` in the
/// enumeration order of NC(k, l).
pub fn for_each_decorated(
    group: &Group,
    upper: &[GroupElement],
    lower: &[GroupElement],
    max_points: usize,
    mut visit: impl FnMut(&Partition),
) -> Result<(), DecoratedError> {
    for &x in upper.iter().chain(lower) {
        group.check(x)?;
    }
    let mut failure = None;
    partition::for_each_partition(upper.len(), lower.len(), max_points, |p| {
        if failure.is_some() {
            return;
        }
        match is_admissible(group, p, upper, lower) {
            Ok(true) => visit(p),
            Ok(false) => {}
            Err(e) => failure = Some(e),
        }
    })?;
    failure.map_or(Ok(()), Err)
}

pub fn enumerate_decorated(
    group: &Group,
    upper: &[GroupElement],
    lower: &[GroupElement],
) -> Result<Vec<DecoratedPartition>, DecoratedError> {
    let mut out = Vec::new();
    for_each_decorated(group, upper, lower, partition::DEFAULT_MAX_POINTS, |p| {
        out.push(DecoratedPartition {
            partition: p.clone(),
            upper_labels: upper.to_vec(),
            lower_labels: lower.to_vec(),
        })
    })?;
    Ok(out)
}

/// `dim Hom(⊗ a(g_i), ⊗ a(h_j))`, counted as admissible diagrams.
pub fn decorated_hom_dimension(
    group: &Group,
    upper: &[GroupElement],
    lower: &[GroupElement],
) -> Result<u64, DecoratedError> {
    decorated_count_with_limit(group, upper, lower, partition::DEFAULT_MAX_POINTS)
}

pub fn decorated_count_with_limit(
    group: &Group,
    upper: &[GroupElement],
    lower: &[GroupElement],
    max_points: usize,
) -> Result<u64, DecoratedError> {
    let mut n = 0;
    for_each_decorated(group, upper, lower, max_points, |_| n += 1)?;
    Ok(n)
}
