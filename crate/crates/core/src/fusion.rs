//! Fusion rules of the free wreath product of a discrete group dual by a
//! quantum automorphism group.
//!
//! Irreducible representations are indexed by words over the group. The
//! empty word is the trivial representation and `(e)` is the nontrivial
//! irreducible `ω(e) = a(e) ⊖ 1`; letters equal to the identity are never
//! reduced away. For a state that is not a δ-form the quantum group splits
//! as a free product, and its irreducibles are alternating words of
//! nontrivial irreducibles of the factors.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Debug};
use std::hash::Hash;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::MultiMatrixAlgebra;
use crate::group::{Group, GroupElement, GroupError};

/// Smallest `dim B` for which the word fusion rules hold.
pub const MIN_ALGEBRA_DIM: usize = 4;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FusionError {
    #[error("fusion of words needs two nonempty operands")]
    EmptyOperand,
    #[error("dim B = {0} is below 4; the word fusion rules do not apply")]
    SmallAlgebra(usize),
    #[error("invalid alternating word: {0}")]
    Alternating(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A word `(g_1, …, g_k)` over the group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<GroupElement>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<GroupElement>) -> Self {
        Word(letters)
    }

    pub fn letter(g: GroupElement) -> Self {
        Word(vec![g])
    }

    pub fn letters(&self) -> &[GroupElement] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parses comma-separated element names; the empty string is the empty
    /// word (and so is `∅`).
    pub fn parse(group: &Group, text: &str) -> Result<Self, GroupError> {
        let text = text.trim();
        if text.is_empty() || text == "∅" {
            return Ok(Word::empty());
        }
        let text = text
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(text);
        text.split(',')
            .map(|name| group.parse_element(name))
            .collect::<Result<_, _>>()
            .map(Word)
    }

    pub fn names(&self, group: &Group) -> Vec<String> {
        self.0.iter().map(|&g| group.name(g)).collect()
    }

    /// `∅` for the empty word, `(g1,…,gk)` otherwise.
    pub fn display(&self, group: &Group) -> String {
        if self.is_empty() {
            "∅".to_string()
        } else {
            format!("({})", self.names(group).join(","))
        }
    }

    fn check(&self, group: &Group) -> Result<(), GroupError> {
        self.0.iter().try_for_each(|&g| group.check(g))
    }
}

/// Words sort by length, then letter by letter in the group's element order.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| {
                let a = self.0.iter().map(|g| g.value());
                let b = other.0.iter().map(|g| g.value());
                a.cmp(b)
            })
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite formal sum of labels with positive multiplicities, kept in
/// canonical order.
#[derive(Clone, PartialEq, Eq)]
pub struct Combination<T: Ord>(BTreeMap<T, u64>);

pub type RepCombination = Combination<Word>;

impl<T: Ord> Default for Combination<T> {
    fn default() -> Self {
        Combination(BTreeMap::new())
    }
}

impl<T: Ord + Clone> Combination<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(x: T) -> Self {
        let mut c = Self::new();
        c.add(x, 1);
        c
    }

    pub fn add(&mut self, x: T, mult: u64) {
        if mult > 0 {
            *self.0.entry(x).or_insert(0) += mult;
        }
    }

    pub fn add_all(&mut self, other: &Combination<T>, scale: u64) {
        for (x, &m) in &other.0 {
            self.add(x.clone(), m * scale);
        }
    }

    pub fn multiplicity(&self, x: &T) -> u64 {
        self.0.get(x).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, u64)> {
        self.0.iter().map(|(x, &m)| (x, m))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of multiplicities.
    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }
}

impl<T: Ord + Debug> Debug for Combination<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.0.iter()).finish()
    }
}

/// One entry of the JSON output `[{"word": [...], "mult": m}, …]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct WordMultiplicity {
    pub word: Vec<String>,
    pub mult: u64,
}

impl RepCombination {
    pub fn to_json(&self, group: &Group) -> Vec<WordMultiplicity> {
        self.iter()
            .map(|(w, mult)| WordMultiplicity {
                word: w.names(group),
                mult,
            })
            .collect()
    }

    /// `{∅:1,(e):1,(s,s):1}`.
    pub fn display(&self, group: &Group) -> String {
        let parts: Vec<String> = self
            .iter()
            .map(|(w, m)| format!("{}:{}", w.display(group), m))
            .collect();
        format!("{{{}}}", parts.join(","))
    }
}

/// `(g_1,…,g_k)‾ = (g_k^{-1},…,g_1^{-1})`.
pub fn involution(group: &Group, x: &Word) -> Result<Word, FusionError> {
    x.check(group)?;
    x.0.iter()
        .rev()
        .map(|&g| group.inv_unchecked(g))
        .collect::<Result<_, _>>()
        .map(Word)
        .map_err(Into::into)
}

pub fn concat(x: &Word, y: &Word) -> Word {
    Word([x.0.as_slice(), &y.0].concat())
}

/// `(g_1,…,g_k).(h_1,…,h_l) = (g_1,…,g_k h_1,…,h_l)`.
pub fn fuse_words(group: &Group, x: &Word, y: &Word) -> Result<Word, FusionError> {
    let (Some(&last), Some(&first)) = (x.0.last(), y.0.first()) else {
        return Err(FusionError::EmptyOperand);
    };
    let mut letters = Vec::with_capacity(x.len() + y.len() - 1);
    letters.extend_from_slice(&x.0[..x.len() - 1]);
    letters.push(group.mul(last, first)?);
    letters.extend_from_slice(&y.0[1..]);
    Ok(Word(letters))
}

/// Decomposes `ω(x) ⊗ ω(y)`: for every splitting `x = u t`, `y = t̄ v` add
/// `ω(u v)`, and also `ω(u.v)` when `u` and `v` are both nonempty.
pub fn fusion_product(group: &Group, x: &Word, y: &Word) -> Result<RepCombination, FusionError> {
    x.check(group)?;
    y.check(group)?;
    let mut out = Combination::new();
    for t in 0..=x.len().min(y.len()) {
        if t > 0 {
            // t̄ must be a prefix of y; extending t only adds a new letter
            // to compare, so the first mismatch ends the search.
            let g = x.0[x.len() - t];
            if y.0[t - 1] != group.inv_unchecked(g)? {
                break;
            }
        }
        let u = Word(x.0[..x.len() - t].to_vec());
        let v = Word(y.0[t..].to_vec());
        if !u.is_empty() && !v.is_empty() {
            out.add(fuse_words(group, &u, &v)?, 1);
        }
        out.add(concat(&u, &v), 1);
    }
    Ok(out)
}

/// Multiplicity of the trivial representation in `ω(x) ⊗ ω(y)`.
pub fn multiplicity_of_trivial(group: &Group, x: &Word, y: &Word) -> Result<u64, FusionError> {
    Ok((*y == involution(group, x)?) as u64)
}

/// Multiplicity of the trivial representation in `a(g_1) ⊗ … ⊗ a(g_k)`,
/// expanding `a(g) = ω(g) ⊕ δ_{g,e} 1`.
pub fn a_rep_trivial_multiplicity(group: &Group, letters: &[GroupElement]) -> Result<u64, FusionError> {
    let mut acc = Combination::single(Word::empty());
    for &g in letters {
        group.check(g)?;
        let omega = Word::letter(g);
        let mut next = Combination::new();
        for (w, m) in acc.iter() {
            next.add_all(&fusion_product(group, w, &omega)?, m);
            if group.is_identity(g) {
                next.add(w.clone(), m);
            }
        }
        acc = next;
    }
    Ok(acc.multiplicity(&Word::empty()))
}

/// `dim Hom(a(g_1) ⊗ … ⊗ a(g_k), a(h_1) ⊗ … ⊗ a(h_l))` read off the fusion
/// rules, using `a(g)‾ = a(g^{-1})` to move the domain to the other side.
pub fn hom_dimension_via_fusion(
    group: &Group,
    upper: &[GroupElement],
    lower: &[GroupElement],
) -> Result<u64, FusionError> {
    let mut letters = upper
        .iter()
        .rev()
        .map(|&g| group.inv(g))
        .collect::<Result<Vec<_>, _>>()?;
    letters.extend_from_slice(lower);
    a_rep_trivial_multiplicity(group, &letters)
}

/// Dimensions of the irreducibles `ω(x)` for a fixed `n = dim B`, memoized.
///
/// Reading `ω(x') ⊗ ω(g)` off the fusion rules gives
/// `d(x', g) = d(x')·(n − [g=e]) − d(x'.g) − [last(x') = g^{-1}]·d(x' minus its last letter)`.
#[derive(Debug, Clone)]
pub struct DimensionTable<'g> {
    group: &'g Group,
    n: usize,
    memo: HashMap<Word, BigInt>,
}

impl<'g> DimensionTable<'g> {
    pub fn new(group: &'g Group, n: usize) -> Result<Self, FusionError> {
        if n < MIN_ALGEBRA_DIM {
            return Err(FusionError::SmallAlgebra(n));
        }
        Ok(DimensionTable {
            group,
            n,
            memo: HashMap::new(),
        })
    }

    pub fn dimension(&mut self, x: &Word) -> Result<BigInt, FusionError> {
        x.check(self.group)?;
        self.dim(x)
    }

    fn dim(&mut self, x: &Word) -> Result<BigInt, FusionError> {
        if let Some(d) = self.memo.get(x) {
            return Ok(d.clone());
        }
        let d = match x.0.split_last() {
            None => BigInt::one(),
            Some((&g, prefix)) => {
                let letter = BigInt::from(self.n - self.group.is_identity(g) as usize);
                let prefix = Word(prefix.to_vec());
                if prefix.is_empty() {
                    letter
                } else {
                    let mut d = self.dim(&prefix)? * letter;
                    d -= self.dim(&fuse_words(self.group, &prefix, &Word::letter(g))?)?;
                    let last = *prefix.0.last().unwrap();
                    if last == self.group.inv_unchecked(g)? {
                        d -= self.dim(&Word(prefix.0[..prefix.len() - 1].to_vec()))?;
                    }
                    d
                }
            }
        };
        self.memo.insert(x.clone(), d.clone());
        Ok(d)
    }
}

/// `dim ω(x)` for `dim B = n ≥ 4`.
pub fn dimension(group: &Group, x: &Word, n: usize) -> Result<BigInt, FusionError> {
    DimensionTable::new(group, n)?.dimension(x)
}

/// A based ring with duality and an integer dimension function.
pub trait FusionRing {
    type Label: Clone + Ord + Hash + Debug;

    fn trivial(&self) -> Self::Label;

    fn is_trivial(&self, x: &Self::Label) -> bool {
        *x == self.trivial()
    }

    fn dual(&self, x: &Self::Label) -> Result<Self::Label, FusionError>;

    fn fuse(&self, x: &Self::Label, y: &Self::Label) -> Result<Combination<Self::Label>, FusionError>;

    fn dimension(&self, x: &Self::Label) -> Result<BigInt, FusionError>;
}

/// The word fusion ring of one δ-form factor with `dim B = n`.
#[derive(Debug, Clone)]
pub struct WordRing {
    group: Group,
    n: usize,
}

impl WordRing {
    pub fn new(group: Group, n: usize) -> Result<Self, FusionError> {
        if n < MIN_ALGEBRA_DIM {
            return Err(FusionError::SmallAlgebra(n));
        }
        Ok(WordRing { group, n })
    }

    /// One ring per factor of the coarsest δ-form decomposition of `algebra`.
    pub fn for_algebra(group: &Group, algebra: &MultiMatrixAlgebra) -> Result<Vec<WordRing>, FusionError> {
        algebra
            .decompose_by_delta()
            .iter()
            .map(|f| WordRing::new(group.clone(), f.algebra.dim()))
            .collect()
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn algebra_dim(&self) -> usize {
        self.n
    }
}

impl FusionRing for WordRing {
    type Label = Word;

    fn trivial(&self) -> Word {
        Word::empty()
    }

    fn dual(&self, x: &Word) -> Result<Word, FusionError> {
        involution(&self.group, x)
    }

    fn fuse(&self, x: &Word, y: &Word) -> Result<RepCombination, FusionError> {
        fusion_product(&self.group, x, y)
    }

    fn dimension(&self, x: &Word) -> Result<BigInt, FusionError> {
        dimension(&self.group, x, self.n)
    }
}

/// An irreducible of a free product: `(factor, label)` pairs with
/// neighbouring factors distinct and every label nontrivial.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlternatingWord<L>(Vec<(usize, L)>);

impl<L: Clone + Ord + Hash + Debug> AlternatingWord<L> {
    pub fn empty() -> Self {
        AlternatingWord(Vec::new())
    }

    pub fn new<R: FusionRing<Label = L>>(rings: &[R], letters: Vec<(usize, L)>) -> Result<Self, FusionError> {
        for (pos, (factor, label)) in letters.iter().enumerate() {
            let ring = rings.get(*factor).ok_or_else(|| {
                FusionError::Alternating(format!("factor {factor} does not exist"))
            })?;
            if ring.is_trivial(label) {
                return Err(FusionError::Alternating(format!("letter {pos} is trivial")));
            }
            if pos > 0 && letters[pos - 1].0 == *factor {
                return Err(FusionError::Alternating(format!(
                    "letters {} and {pos} lie in the same factor",
                    pos - 1
                )));
            }
        }
        Ok(AlternatingWord(letters))
    }

    pub fn letters(&self) -> &[(usize, L)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Dimension of an alternating word: the product over its letters.
pub fn alternating_dimension<R: FusionRing>(
    rings: &[R],
    w: &AlternatingWord<R::Label>,
) -> Result<BigInt, FusionError> {
    w.0.iter().try_fold(BigInt::one(), |acc, (f, label)| {
        Ok(acc * rings[*f].dimension(label)?)
    })
}

/// Dual of an alternating word: reversed, each letter dualized.
pub fn alternating_dual<R: FusionRing>(
    rings: &[R],
    w: &AlternatingWord<R::Label>,
) -> Result<AlternatingWord<R::Label>, FusionError> {
    let letters = w
        .0
        .iter()
        .rev()
        .map(|(f, l)| Ok((*f, rings[*f].dual(l)?)))
        .collect::<Result<_, FusionError>>()?;
    Ok(AlternatingWord(letters))
}

/// Tensor product of two irreducibles of the free product.
///
/// Letters from different factors just concatenate. When the boundary
/// letters share a factor they are fused there: each nontrivial summand is
/// spliced in place, and a trivial summand cancels the boundary pair and
/// the rule recurses on what remains.
pub fn free_product_fusion<R: FusionRing>(
    rings: &[R],
    w1: &AlternatingWord<R::Label>,
    w2: &AlternatingWord<R::Label>,
) -> Result<Combination<AlternatingWord<R::Label>>, FusionError> {
    let (Some((left, head)), Some((right, tail))) = (w1.0.split_last(), w2.0.split_first()) else {
        let only = if w1.is_empty() { w2 } else { w1 };
        return Ok(Combination::single(only.clone()));
    };
    if left.0 != right.0 {
        return Ok(Combination::single(AlternatingWord([w1.0.as_slice(), &w2.0].concat())));
    }
    let factor = left.0;
    let ring = &rings[factor];
    let mut out = Combination::new();
    for (label, m) in ring.fuse(&left.1, &right.1)?.iter() {
        if ring.is_trivial(label) {
            let inner = free_product_fusion(rings, &AlternatingWord(head.to_vec()), &AlternatingWord(tail.to_vec()))?;
            out.add_all(&inner, m);
        } else {
            let mut letters = head.to_vec();
            letters.push((factor, label.clone()));
            letters.extend_from_slice(tail);
            out.add(AlternatingWord(letters), m);
        }
    }
    Ok(out)
}

/// `Σ mult · dim` over a combination of words.
pub fn combination_dimension(group: &Group, c: &RepCombination, n: usize) -> Result<BigInt, FusionError> {
    let mut table = DimensionTable::new(group, n)?;
    let mut total = BigInt::zero();
    for (w, m) in c.iter() {
        total += table.dimension(w)? * BigInt::from(m);
    }
    Ok(total)
}
