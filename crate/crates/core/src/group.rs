//! Discrete groups used to decorate diagram points and to spell fusion
//! words: finite cyclic groups, the integers, and finite groups given by an
//! explicit multiplication table.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::path::Path;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("element belongs to a different group")]
    Mismatch,
    #[error("element {0} is out of range for this group")]
    OutOfRange(i64),
    #[error("unknown element name {0:?}")]
    UnknownName(String),
    #[error("invalid group table: {0}")]
    InvalidTable(String),
    #[error("invalid group spec {0:?}; expected cyclic:<s>, integers or table:<path>")]
    Spec(String),
    #[error("integer overflow in group operation")]
    Overflow,
    #[error("cannot read group table {path}: {message}")]
    Io { path: String, message: String },
}

/// A group element. Only meaningful together with the [`Group`] that
/// produced it; the tag identifies that group structurally.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    value: i64,
    tag: u64,
}

impl GroupElement {
    /// Residue for cyclic groups, the integer itself for ℤ, the row index
    /// for table groups.
    pub fn value(&self) -> i64 {
        self.value
    }
}

/// Multiplication table of a finite group, in its JSON file form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupTable {
    pub elements: Vec<String>,
    pub identity: String,
    pub table: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Kind {
    Cyclic(u64),
    Integers,
    Table {
        table: GroupTable,
        identity: usize,
        inverse: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    kind: Kind,
    tag: u64,
}

impl Group {
    fn with_kind(kind: Kind) -> Self {
        let mut h = DefaultHasher::new();
        kind.hash(&mut h);
        Group {
            tag: h.finish(),
            kind,
        }
    }

    /// ℤ/sℤ with elements `0..s`.
    pub fn cyclic(order: u64) -> Result<Self, GroupError> {
        if order == 0 || order > i64::MAX as u64 {
            return Err(GroupError::Spec(format!("cyclic:{order}")));
        }
        Ok(Self::with_kind(Kind::Cyclic(order)))
    }

    pub fn integers() -> Self {
        Self::with_kind(Kind::Integers)
    }

    /// Loads a finite group from its table, checking closure, identity,
    /// inverses and associativity.
    pub fn from_table(table: GroupTable) -> Result<Self, GroupError> {
        let bad = |m: String| Err(GroupError::InvalidTable(m));
        let n = table.elements.len();
        if n == 0 {
            return bad("no elements".into());
        }
        let mut names = table.elements.clone();
        names.sort();
        names.dedup();
        if names.len() != n {
            return bad("duplicate element names".into());
        }
        let Some(identity) = table.elements.iter().position(|e| *e == table.identity) else {
            return bad(format!("identity {:?} is not an element", table.identity));
        };
        if table.table.len() != n || table.table.iter().any(|row| row.len() != n) {
            return bad(format!("table must be {n}×{n}"));
        }
        if table.table.iter().flatten().any(|&x| x >= n) {
            return bad("table entry out of range".into());
        }
        let t = &table.table;
        for (a, row) in t.iter().enumerate() {
            if t[identity][a] != a || row[identity] != a {
                return bad(format!("{:?} is not a two-sided identity", table.identity));
            }
        }
        let mut inverse = vec![usize::MAX; n];
        for a in 0..n {
            let right: Vec<usize> = (0..n).filter(|&b| t[a][b] == identity).collect();
            if right.len() != 1 || t[right[0]][a] != identity {
                return bad(format!("{:?} has no unique inverse", table.elements[a]));
            }
            inverse[a] = right[0];
        }
        for a in 0..n {
            for b in 0..n {
                let ab = t[a][b];
                for c in 0..n {
                    if t[ab][c] != t[a][t[b][c]] {
                        return bad(format!(
                            "not associative at ({}, {}, {})",
                            table.elements[a], table.elements[b], table.elements[c]
                        ));
                    }
                }
            }
        }
        Ok(Self::with_kind(Kind::Table {
            table,
            identity,
            inverse,
        }))
    }

    pub fn from_table_file(path: impl AsRef<Path>) -> Result<Self, GroupError> {
        let path = path.as_ref();
        let io = |message: String| GroupError::Io {
            path: path.display().to_string(),
            message,
        };
        let text = std::fs::read_to_string(path).map_err(|e| io(e.to_string()))?;
        let table: GroupTable = serde_json::from_str(&text).map_err(|e| io(e.to_string()))?;
        Self::from_table(table)
    }

    /// Parses `cyclic:<s>`, `integers` or `table:<path>`.
    pub fn from_spec(spec: &str) -> Result<Self, GroupError> {
        let spec = spec.trim();
        if spec == "integers" {
            return Ok(Self::integers());
        }
        if let Some(order) = spec.strip_prefix("cyclic:") {
            let order = order
                .trim()
                .parse()
                .map_err(|_| GroupError::Spec(spec.to_string()))?;
            return Self::cyclic(order);
        }
        if let Some(path) = spec.strip_prefix("table:") {
            return Self::from_table_file(path);
        }
        Err(GroupError::Spec(spec.to_string()))
    }

    /// Number of elements, `None` for ℤ.
    pub fn order(&self) -> Option<u64> {
        match &self.kind {
            Kind::Cyclic(s) => Some(*s),
            Kind::Integers => None,
            Kind::Table { table, .. } => Some(table.elements.len() as u64),
        }
    }

    /// All elements of a finite group in their canonical order.
    pub fn elements(&self) -> Option<Vec<GroupElement>> {
        let n = self.order()?;
        Some((0..n as i64).map(|v| self.elem(v)).collect())
    }

    pub fn is_abelian(&self) -> bool {
        match &self.kind {
            Kind::Table { table, .. } => {
                let t = &table.table;
                (0..t.len()).all(|a| (0..a).all(|b| t[a][b] == t[b][a]))
            }
            _ => true,
        }
    }

    fn elem(&self, value: i64) -> GroupElement {
        GroupElement {
            value,
            tag: self.tag,
        }
    }

    /// The element with the given raw value (residue, integer or index).
    pub fn element(&self, value: i64) -> Result<GroupElement, GroupError> {
        let ok = match self.order() {
            Some(n) => (0..n as i64).contains(&value),
            None => true,
        };
        if ok {
            Ok(self.elem(value))
        } else {
            Err(GroupError::OutOfRange(value))
        }
    }

    pub fn contains(&self, a: GroupElement) -> bool {
        a.tag == self.tag && self.element(a.value).is_ok()
    }

    pub fn check(&self, a: GroupElement) -> Result<(), GroupError> {
        if a.tag != self.tag {
            Err(GroupError::Mismatch)
        } else {
            self.element(a.value).map(|_| ())
        }
    }

    pub fn identity(&self) -> GroupElement {
        match &self.kind {
            Kind::Table { identity, .. } => self.elem(*identity as i64),
            _ => self.elem(0),
        }
    }

    pub fn is_identity(&self, a: GroupElement) -> bool {
        a == self.identity()
    }

    pub fn mul(&self, a: GroupElement, b: GroupElement) -> Result<GroupElement, GroupError> {
        self.check(a)?;
        self.check(b)?;
        self.mul_unchecked(a, b)
    }

    pub fn inv(&self, a: GroupElement) -> Result<GroupElement, GroupError> {
        self.check(a)?;
        self.inv_unchecked(a)
    }

    pub(crate) fn mul_unchecked(
        &self,
        a: GroupElement,
        b: GroupElement,
    ) -> Result<GroupElement, GroupError> {
        let value = match &self.kind {
            Kind::Cyclic(s) => ((a.value as i128 + b.value as i128) % *s as i128) as i64,
            Kind::Integers => a.value.checked_add(b.value).ok_or(GroupError::Overflow)?,
            Kind::Table { table, .. } => table.table[a.value as usize][b.value as usize] as i64,
        };
        Ok(self.elem(value))
    }

    pub(crate) fn inv_unchecked(&self, a: GroupElement) -> Result<GroupElement, GroupError> {
        let value = match &self.kind {
            Kind::Cyclic(s) => (*s as i64 - a.value) % *s as i64,
            Kind::Integers => a.value.checked_neg().ok_or(GroupError::Overflow)?,
            Kind::Table { inverse, .. } => inverse[a.value as usize] as i64,
        };
        Ok(self.elem(value))
    }

    /// Product of a sequence, left to right; the identity for an empty one.
    pub fn product<'a>(
        &self,
        elements: impl IntoIterator<Item = &'a GroupElement>,
    ) -> Result<GroupElement, GroupError> {
        elements
            .into_iter()
            .try_fold(self.identity(), |acc, &x| self.mul(acc, x))
    }

    /// Display name. The identity is always `e`; in ℤ/2 the generator is `s`.
    pub fn name(&self, a: GroupElement) -> String {
        match &self.kind {
            Kind::Table { table, .. } => table
                .elements
                .get(a.value as usize)
                .cloned()
                .unwrap_or_else(|| format!("?{}", a.value)),
            Kind::Cyclic(2) if a.value == 1 => "s".to_string(),
            _ if a.value == 0 => "e".to_string(),
            _ => a.value.to_string(),
        }
    }

    /// Inverse of [`Group::name`]. Cyclic groups also accept any integer
    /// (reduced modulo the order).
    pub fn parse_element(&self, name: &str) -> Result<GroupElement, GroupError> {
        let name = name.trim();
        let unknown = || GroupError::UnknownName(name.to_string());
        match &self.kind {
            Kind::Table { table, .. } => table
                .elements
                .iter()
                .position(|e| e == name)
                .map(|i| self.elem(i as i64))
                .ok_or_else(unknown),
            Kind::Cyclic(s) => match name {
                "e" => Ok(self.identity()),
                "s" if *s == 2 => Ok(self.elem(1)),
                _ => {
                    let v: i64 = name.parse().map_err(|_| unknown())?;
                    Ok(self.elem(v.rem_euclid(*s as i64)))
                }
            },
            Kind::Integers => match name {
                "e" => Ok(self.identity()),
                _ => Ok(self.elem(name.parse().map_err(|_| unknown())?)),
            },
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Cyclic(s) => write!(f, "cyclic:{s}"),
            Kind::Integers => write!(f, "integers"),
            Kind::Table { table, .. } => write!(f, "table[{}]", table.elements.len()),
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn s3() -> Group {
        let table: GroupTable =
            serde_json::from_str(include_str!("../tests/data/s3.json")).unwrap();
        Group::from_table(table).unwrap()
    }

    fn all_groups() -> Vec<Group> {
        vec![
            Group::cyclic(1).unwrap(),
            Group::cyclic(2).unwrap(),
            Group::cyclic(3).unwrap(),
            Group::cyclic(6).unwrap(),
            s3(),
        ]
    }

    #[test]
    fn identities() {
        assert_eq!(Group::cyclic(3).unwrap().identity().value(), 0);
        assert_eq!(Group::integers().identity().value(), 0);
        let g = s3();
        assert_eq!(g.name(g.identity()), "e");
    }

    #[test]
    fn basic_products() {
        let z3 = Group::cyclic(3).unwrap();
        let (one, two) = (z3.element(1).unwrap(), z3.element(2).unwrap());
        assert_eq!(z3.mul(one, two).unwrap(), z3.identity());
        let z = Group::integers();
        assert_eq!(z.inv(z.element(5).unwrap()).unwrap().value(), -5);
    }

    #[test]
    fn s3_transpositions_compose_to_a_three_cycle() {
        let g = s3();
        let a = g.parse_element("a").unwrap();
        let b = g.parse_element("b").unwrap();
        let ab = g.mul(a, b).unwrap();
        assert!(["r", "r2"].contains(&g.name(ab).as_str()));
        assert_ne!(g.mul(a, b).unwrap(), g.mul(b, a).unwrap());
        assert!(!g.is_abelian());
        assert!(Group::cyclic(5).unwrap().is_abelian());
    }

    #[test]
    fn axioms_on_finite_groups() {
        for g in all_groups() {
            let els = g.elements().unwrap();
            let e = g.identity();
            for &a in &els {
                assert_eq!(g.mul(e, a).unwrap(), a);
                assert_eq!(g.mul(a, e).unwrap(), a);
                let ai = g.inv(a).unwrap();
                assert_eq!(g.mul(a, ai).unwrap(), e);
                assert_eq!(g.inv(ai).unwrap(), a);
                for &b in &els {
                    for &c in &els {
                        let left = g.mul(g.mul(a, b).unwrap(), c).unwrap();
                        let right = g.mul(a, g.mul(b, c).unwrap()).unwrap();
                        assert_eq!(left, right);
                    }
                }
            }
        }
    }

    #[test]
    fn cross_group_mixing_is_rejected() {
        let z2 = Group::cyclic(2).unwrap();
        let z3 = Group::cyclic(3).unwrap();
        let x = z3.element(1).unwrap();
        assert_eq!(z2.mul(x, z2.identity()), Err(GroupError::Mismatch));
        assert_eq!(z2.inv(x), Err(GroupError::Mismatch));
        // Structurally equal groups interoperate.
        let z3b = Group::from_spec("cyclic:3").unwrap();
        assert!(z3b.mul(x, x).is_ok());
        assert_eq!(z3.element(3), Err(GroupError::OutOfRange(3)));
    }

    #[test]
    fn names_round_trip() {
        for g in all_groups() {
            for a in g.elements().unwrap() {
                assert_eq!(g.parse_element(&g.name(a)).unwrap(), a);
            }
        }
        let z2 = Group::cyclic(2).unwrap();
        assert_eq!(z2.name(z2.element(1).unwrap()), "s");
        let z = Group::integers();
        assert_eq!(z.parse_element("-7").unwrap().value(), -7);
        assert!(z.parse_element("x").is_err());
    }

    #[test]
    fn bad_tables_are_rejected() {
        let not_group = GroupTable {
            elements: vec!["e".into(), "a".into()],
            identity: "e".into(),
            table: vec![vec![0, 1], vec![1, 1]],
        };
        assert!(matches!(
            Group::from_table(not_group),
            Err(GroupError::InvalidTable(_))
        ));
        let wrong_identity = GroupTable {
            elements: vec!["e".into(), "a".into()],
            identity: "a".into(),
            table: vec![vec![0, 1], vec![1, 0]],
        };
        assert!(Group::from_table(wrong_identity).is_err());
        assert!(Group::from_spec("dihedral:4").is_err());
        assert!(Group::from_spec("cyclic:0").is_err());
    }

    #[test]
    fn integer_overflow_is_reported() {
        let z = Group::integers();
        let big = z.element(i64::MAX).unwrap();
        assert_eq!(z.mul(big, big), Err(GroupError::Overflow));
    }
}
