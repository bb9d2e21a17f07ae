//! Generator symbols and the global canonical order used by all normal
//! forms.
//!
//! Every algebra in this crate is presented by a finite set of generators.
//! A generator carries a sort key `(block, slot, tag, index)`; sorting by
//! this key fixes one total order for the whole crate:
//! ghosts (by cosimplicial slot, then tag, then Lie-basis index), then
//! coordinate generators, then Hopf-slot generators, then momenta, then
//! antighosts. Commutative normal forms sort monomials by this order with
//! Koszul signs, and the quantized algebras normal-order words by the same
//! order, so stripping hats is degree- and order-preserving.

use crate::grading::Bidegree;
use std::fmt;

/// Locality tag: which vertex or edge of a directed graph a generator
/// belongs to. `None` for instances that are not graph-indexed.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub enum Tag {
    #[default]
    None,
    Vertex(String),
    Edge(String),
}

impl Tag {
    pub fn suffix(&self) -> String {
        match self {
            Tag::None => String::new(),
            Tag::Vertex(v) => format!("_{}", v),
            Tag::Edge(e) => format!("_{}", e),
        }
    }
}

/// Block class in the canonical generator order. The declaration order of
/// the variants is the sort order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Block {
    /// Ghost generators `theta` of bidegree (1,0).
    Ghost,
    /// Coordinate generators of the base affine scheme, bidegree (0,0).
    Coord,
    /// Generators of the Hopf tensor slots of a cosimplicial level, bidegree (0,0).
    HopfSlot,
    /// Momentum (tangent frame) generators, bidegree (0,0).
    Momentum,
    /// Antighost generators `t` of bidegree (0,1).
    Antighost,
}

/// Canonical sort key of a generator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GenKey {
    pub block: Block,
    /// Cosimplicial slot: ghost slot `j` (0..=n) or Hopf slot `k` (1..=n); 0 otherwise.
    pub slot: u8,
    pub tag: Tag,
    /// Index within (block, slot, tag): Lie-basis index or local generator number.
    pub index: u32,
}

impl GenKey {
    pub fn new(block: Block, slot: u8, tag: Tag, index: u32) -> Self {
        GenKey { block, slot, tag, index }
    }

    pub fn plain(block: Block, index: u32) -> Self {
        GenKey::new(block, 0, Tag::None, index)
    }
}

/// Index of a generator inside its ambient algebra. Ids are assigned in
/// ascending `GenKey` order, so comparing ids compares canonical positions.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenId(pub u32);

impl GenId {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for GenId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{}", self.0)
    }
}

#[derive(Clone, Debug)]
pub struct GenInfo {
    pub name: String,
    pub key: GenKey,
    pub bidegree: Bidegree,
    /// Laurent-invertible generator (torus coordinates). Must be even.
    pub invertible: bool,
}

impl GenInfo {
    pub fn new(name: impl Into<String>, key: GenKey, bidegree: Bidegree) -> Self {
        GenInfo {
            name: name.into(),
            key,
            bidegree,
            invertible: false,
        }
    }

    pub fn invertible(mut self) -> Self {
        assert!(!self.bidegree.is_odd(), "invertible generators must be even");
        self.invertible = true;
        self
    }
}
