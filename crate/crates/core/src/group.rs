//! Finite groups given by multiplication tables, and homomorphisms to ℤ₂.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("EmptyGroup: a group needs at least one element")]
    EmptyGroup,
    #[error("MalformedTable: row {row} has {len} entries, expected {n}")]
    MalformedTable { row: usize, len: usize, n: usize },
    #[error("EntryOutOfRange: table[{a}][{b}] = {value} is not below {n}")]
    EntryOutOfRange { a: usize, b: usize, value: usize, n: usize },
    #[error("NotAssociative: ({0}·{1})·{2} != {0}·({1}·{2})")]
    NotAssociative(usize, usize, usize),
    #[error("NoIdentity: no element acts as a two-sided identity")]
    NoIdentity,
    #[error("NoInverse: element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("NotHomomorphism: values fail at ({0}, {1})")]
    NotHomomorphism(usize, usize),
    #[error("HomLength: expected {expected} values, found {found}")]
    HomLength { expected: usize, found: usize },
    #[error("NotZ2Value: value {value} at element {at} is not 0 or 1")]
    NotZ2Value { at: usize, value: u8 },
}

/// A finite group `{0, .., n-1}` with a validated multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a multiplication table: associativity, a two-sided identity
    /// and two-sided inverses.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::EmptyGroup);
        }
        for (row, r) in table.iter().enumerate() {
            if r.len() != n {
                return Err(GroupError::MalformedTable { row, len: r.len(), n });
            }
            if let Some((b, &value)) = r.iter().enumerate().find(|(_, v)| **v >= n) {
                return Err(GroupError::EntryOutOfRange { a: row, b, value, n });
            }
        }
        let identity =
            (0..n).find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a)).ok_or(GroupError::NoIdentity)?;
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let inv =
                (0..n).find(|&b| table[a][b] == identity && table[b][a] == identity).ok_or(GroupError::NoInverse(a))?;
            inverse.push(inv);
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        Ok(Self { table, identity, inverse })
    }

    /// The cyclic group ℤₙ with `a·b = a + b mod n`.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(table).expect("cyclic table is a group")
    }

    /// Direct product `G × H`, element `(g, h)` indexed as `g * |H| + h`.
    pub fn product(g: &FiniteGroup, h: &FiniteGroup) -> Self {
        let (n, m) = (g.order(), h.order());
        let table =
            (0..n * m).map(|x| (0..n * m).map(|y| g.mul(x / m, y / m) * m + h.mul(x % m, y % m)).collect()).collect();
        Self::from_table(table).expect("product of groups is a group")
    }

    /// ℤ₂ × ℤ₂ with `(a, b)` indexed as `2a + b`.
    pub fn klein() -> Self {
        Self::product(&Self::cyclic(2), &Self::cyclic(2))
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    /// All homomorphisms `G → ℤ₂`, in lexicographic order of their value vectors.
    pub fn z2_homs(&self) -> Vec<Z2Hom> {
        let n = self.order();
        let mut out = Vec::new();
        if n > 24 {
            // Enumerate by brute force only for small groups; beyond that
            // the caller should construct homomorphisms explicitly.
            return out;
        }
        for mask in 0u32..(1 << n) {
            let values: Vec<u8> = (0..n).map(|g| ((mask >> (n - 1 - g)) & 1) as u8).collect();
            if let Ok(h) = Z2Hom::new(self, values) {
                out.push(h);
            }
        }
        out
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson { n: self.order(), table: self.table.clone() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupJson {
    pub n: usize,
    pub table: Vec<Vec<usize>>,
}

impl TryFrom<GroupJson> for FiniteGroup {
    type Error = GroupError;

    fn try_from(j: GroupJson) -> Result<Self, GroupError> {
        if j.table.len() != j.n {
            return Err(GroupError::MalformedTable { row: j.table.len(), len: 0, n: j.n });
        }
        FiniteGroup::from_table(j.table)
    }
}

/// A homomorphism `G → ℤ₂`, stored as its value on every element.
///
/// Deserializes from either `{"values": [..]}` or a bare array; the result
/// must be revalidated against its group with [`Z2Hom::new`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "HomRepr")]
pub struct Z2Hom {
    values: Vec<u8>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum HomRepr {
    Object { values: Vec<u8> },
    Plain(Vec<u8>),
}

impl From<HomRepr> for Z2Hom {
    fn from(r: HomRepr) -> Self {
        match r {
            HomRepr::Object { values } | HomRepr::Plain(values) => Z2Hom { values },
        }
    }
}

impl Z2Hom {
    pub fn new(group: &FiniteGroup, values: Vec<u8>) -> Result<Self, GroupError> {
        if values.len() != group.order() {
            return Err(GroupError::HomLength { expected: group.order(), found: values.len() });
        }
        if let Some((at, &value)) = values.iter().enumerate().find(|(_, v)| **v > 1) {
            return Err(GroupError::NotZ2Value { at, value });
        }
        for g in group.elements() {
            for h in group.elements() {
                if values[group.mul(g, h)] != (values[g] ^ values[h]) {
                    return Err(GroupError::NotHomomorphism(g, h));
                }
            }
        }
        Ok(Self { values })
    }

    pub fn trivial(group: &FiniteGroup) -> Self {
        Self { values: vec![0; group.order()] }
    }

    /// The identity map on ℤ₂ (time reversal twist).
    pub fn z2_identity() -> Self {
        Self { values: vec![0, 1] }
    }

    #[inline]
    pub fn at(&self, g: usize) -> u8 {
        self.values[g]
    }

    #[inline]
    pub fn flag(&self, g: usize) -> bool {
        self.values[g] == 1
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|v| *v == 0)
    }

    /// Pointwise sum in ℤ₂.
    pub fn add(&self, other: &Z2Hom) -> Z2Hom {
        assert_eq!(self.len(), other.len(), "homomorphisms on different groups");
        Z2Hom { values: self.values.iter().zip(&other.values).map(|(a, b)| a ^ b).collect() }
    }

    /// `k · self` for `k ∈ ℤ₂`.
    pub fn scale(&self, k: u8) -> Z2Hom {
        Z2Hom { values: self.values.iter().map(|v| v & (k & 1)).collect() }
    }
}
