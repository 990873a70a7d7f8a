//! Frames of discernment and subsets encoded as bit vectors.
//!
//! A [`Frame`] is an ordered finite universe of elementary events; element
//! order is fixed at construction and defines the bit positions of every
//! [`Subset`] over it. Product frames are ordinary frames whose elements are
//! tuples.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::Error;

/// Hard cap on frame arity; keeps 2^|Ξ| enumeration feasible.
pub const MAX_FRAME_LEN: usize = 24;

/// An elementary event: a plain name, or a tuple for product frames.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Element {
    Atom(String),
    Tuple(Vec<String>),
}

impl Element {
    pub fn atom(name: impl Into<String>) -> Self {
        Element::Atom(name.into())
    }

    pub fn tuple<I, S>(parts: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Element::Tuple(parts.into_iter().map(Into::into).collect())
    }

    /// Flat component list: atoms have one component, tuples their parts.
    pub fn components(&self) -> Vec<String> {
        match self {
            Element::Atom(s) => vec![s.clone()],
            Element::Tuple(parts) => parts.clone(),
        }
    }

    fn from_components(comps: &[String]) -> Self {
        if comps.len() == 1 {
            Element::Atom(comps[0].clone())
        } else {
            Element::Tuple(comps.to_vec())
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Atom(s) => write!(f, "{}", s),
            Element::Tuple(parts) => write!(f, "({})", parts.join(",")),
        }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl From<&str> for Element {
    fn from(s: &str) -> Self {
        Element::Atom(s.to_string())
    }
}

#[derive(Debug)]
struct FrameData {
    elements: Vec<Element>,
    index: HashMap<Element, usize>,
}

/// Ordered frame of discernment (symbolically: the universe Ξ).
///
/// Cheap to clone; frames compare equal iff their element lists are equal.
#[derive(Clone, Debug)]
pub struct Frame(Arc<FrameData>);

impl Frame {
    pub fn new(elements: Vec<Element>) -> Result<Self, Error> {
        if elements.is_empty() {
            return Err(Error::EmptyFrame);
        }
        if elements.len() > MAX_FRAME_LEN {
            return Err(Error::FrameTooLarge(elements.len()));
        }
        let mut index = HashMap::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(Error::DuplicateElement(e.to_string()));
            }
        }
        Ok(Frame(Arc::new(FrameData { elements, index })))
    }

    pub fn from_names<I, S>(names: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Frame::new(names.into_iter().map(|s| Element::Atom(s.into())).collect())
    }

    /// Product frame: tuple elements in row-major order (`self` outer).
    /// Tuple components of already-product operands are flattened.
    pub fn product(&self, other: &Frame) -> Result<Frame, Error> {
        let mut elements = Vec::with_capacity(self.len() * other.len());
        for a in self.elements() {
            for b in other.elements() {
                let mut comps = a.components();
                comps.extend(b.components());
                elements.push(Element::from_components(&comps));
            }
        }
        Frame::new(elements)
    }

    pub fn len(&self) -> usize {
        self.0.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty frames
    }

    pub fn elements(&self) -> &[Element] {
        &self.0.elements
    }

    pub fn element(&self, i: usize) -> &Element {
        &self.0.elements[i]
    }

    pub fn index_of(&self, e: &Element) -> Option<usize> {
        self.0.index.get(e).copied()
    }

    pub fn empty_set(&self) -> Subset {
        Subset {
            frame: self.clone(),
            bits: 0,
        }
    }

    pub fn full_set(&self) -> Subset {
        Subset {
            frame: self.clone(),
            bits: self.full_bits(),
        }
    }

    pub fn full_bits(&self) -> u32 {
        if self.len() == 32 {
            u32::MAX
        } else {
            (1u32 << self.len()) - 1
        }
    }

    pub fn singleton(&self, i: usize) -> Subset {
        assert!(i < self.len());
        Subset {
            frame: self.clone(),
            bits: 1 << i,
        }
    }

    /// Subset from raw bits; high bits beyond the frame are rejected.
    pub fn subset_from_bits(&self, bits: u32) -> Subset {
        assert_eq!(bits & !self.full_bits(), 0, "bits outside frame");
        Subset {
            frame: self.clone(),
            bits,
        }
    }

    /// Subset from a list of elements; unknown elements are an error.
    pub fn subset_of<'a, I>(&self, elems: I) -> Result<Subset, Error>
    where
        I: IntoIterator<Item = &'a Element>,
    {
        let mut bits = 0u32;
        for e in elems {
            let i = self
                .index_of(e)
                .ok_or_else(|| Error::UnknownElement(e.to_string()))?;
            bits |= 1 << i;
        }
        Ok(self.subset_from_bits(bits))
    }

    pub fn subset_of_names<I, S>(&self, names: I) -> Result<Subset, Error>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let elems: Vec<Element> = names
            .into_iter()
            .map(|s| Element::Atom(s.as_ref().to_string()))
            .collect();
        self.subset_of(elems.iter())
    }

    /// All 2^|Ξ| subsets in bit order (∅ first, Ξ last).
    pub fn all_subsets(&self) -> impl Iterator<Item = Subset> + '_ {
        (0..=self.full_bits()).map(move |bits| self.subset_from_bits(bits))
    }

    pub fn same_frame(&self, other: &Frame) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.elements == other.0.elements
    }
}

impl PartialEq for Frame {
    fn eq(&self, other: &Self) -> bool {
        self.same_frame(other)
    }
}

impl Eq for Frame {}

/// Subset of a frame as a characteristic bit vector; bit i holds element i.
#[derive(Clone)]
pub struct Subset {
    frame: Frame,
    bits: u32,
}

impl Subset {
    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_full(&self) -> bool {
        self.bits == self.frame.full_bits()
    }

    pub fn len(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn contains(&self, e: &Element) -> bool {
        match self.frame.index_of(e) {
            Some(i) => self.bits & (1 << i) != 0,
            None => false,
        }
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        debug_assert!(self.frame.same_frame(&other.frame));
        self.bits & !other.bits == 0
    }

    pub fn intersect(&self, other: &Subset) -> Subset {
        debug_assert!(self.frame.same_frame(&other.frame));
        Subset {
            frame: self.frame.clone(),
            bits: self.bits & other.bits,
        }
    }

    pub fn union(&self, other: &Subset) -> Subset {
        debug_assert!(self.frame.same_frame(&other.frame));
        Subset {
            frame: self.frame.clone(),
            bits: self.bits | other.bits,
        }
    }

    pub fn complement(&self) -> Subset {
        Subset {
            frame: self.frame.clone(),
            bits: !self.bits & self.frame.full_bits(),
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = &Element> + '_ {
        self.frame
            .elements()
            .iter()
            .enumerate()
            .filter(move |(i, _)| self.bits & (1 << i) != 0)
            .map(|(_, e)| e)
    }
}

impl PartialEq for Subset {
    fn eq(&self, other: &Self) -> bool {
        self.frame.same_frame(&other.frame) && self.bits == other.bits
    }
}

impl Eq for Subset {}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", e)?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
