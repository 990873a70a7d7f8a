//! Dempster combination and the surrounding algebra: conditioning, simple
//! support functions, vacuous extension to product frames, and Möbius
//! inversion from belief values back to masses.
//!
//! Conflict is never silently discarded: every combination reports the
//! pre-normalization mass on ∅ and the normalization constant c.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::frame::{Frame, Subset};
use crate::mass::{FocalJson, MassFunction, ValidationMode};
use crate::rational::Rat;
use crate::Error;

/// Result of a Dempster combination, conflict included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinationResult {
    pub combined: MassFunction,
    /// Pre-normalization mass that fell on the empty set.
    pub conflict_mass: Rat,
    /// c = 1/(1 − conflict).
    pub normalization_constant: Rat,
}

impl CombinationResult {
    pub fn to_json(&self) -> CombinationResultJson {
        let mass = self.combined.to_json();
        CombinationResultJson {
            frame: mass.frame,
            focals: mass.focals,
            mode: mass.mode,
            conflict: self.conflict_mass.clone(),
            c: self.normalization_constant.clone(),
        }
    }
}

/// MassFunction JSON plus "conflict" and "c" rational-string fields.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CombinationResultJson {
    pub frame: Vec<crate::frame::Element>,
    pub focals: Vec<FocalJson>,
    pub mode: ValidationMode,
    pub conflict: Rat,
    pub c: Rat,
}

/// Dempster's rule: m(A) = c · Σ_{B∩C=A, A≠∅} m1(B)·m2(C).
///
/// Both operands must be strict; the rule is undefined for signed masses.
pub fn dempster_combine(
    m1: &MassFunction,
    m2: &MassFunction,
) -> Result<CombinationResult, Error> {
    if !m1.frame().same_frame(m2.frame()) {
        return Err(Error::FrameMismatch);
    }
    if m1.mode() != ValidationMode::Strict || m2.mode() != ValidationMode::Strict {
        return Err(Error::SignedCombination);
    }
    let frame = m1.frame().clone();
    let mut acc: BTreeMap<u32, Rat> = BTreeMap::new();
    let mut conflict = Rat::zero();
    for (b, mb) in m1.focals() {
        for (c, mc) in m2.focals() {
            let product = mb * mc;
            let inter = b.bits() & c.bits();
            if inter == 0 {
                conflict += product;
            } else {
                *acc.entry(inter).or_insert_with(Rat::zero) += product;
            }
        }
    }
    if conflict.is_one() {
        return Err(Error::TotalConflict(conflict.to_string()));
    }
    let c = (Rat::one() - &conflict).recip();
    let assignments: Vec<(Subset, Rat)> = acc
        .into_iter()
        .map(|(bits, m)| (frame.subset_from_bits(bits), m * &c))
        .collect();
    let combined = MassFunction::make(&frame, assignments, ValidationMode::Strict)?;
    Ok(CombinationResult {
        combined,
        conflict_mass: conflict,
        normalization_constant: c,
    })
}

/// Simple support function: all mass on a single nonempty subset.
pub fn simple_support(frame: &Frame, label: &Subset) -> Result<MassFunction, Error> {
    if !label.frame().same_frame(frame) {
        return Err(Error::FrameMismatch);
    }
    if label.is_empty() {
        return Err(Error::EmptyLabel);
    }
    MassFunction::make(frame, vec![(label.clone(), Rat::one())], ValidationMode::Strict)
}

/// Shaferian conditioning: combination with the simple support function on C.
pub fn condition(m: &MassFunction, c: &Subset) -> Result<CombinationResult, Error> {
    let support = simple_support(m.frame(), c)?;
    dempster_combine(m, &support)
}

/// Carry a mass function to a product frame: each focal maps to the
/// cylinder of tuples whose matching coordinate block lies in the focal.
///
/// The target must have tuple elements with a contiguous component block
/// ranging exactly over the source frame's elements.
pub fn vacuous_extension(m: &MassFunction, target: &Frame) -> Result<MassFunction, Error> {
    let src = m.frame();
    let width = src.element(0).components().len();
    let target_comps: Vec<Vec<String>> = target
        .elements()
        .iter()
        .map(|e| e.components())
        .collect();
    let tuple_len = target_comps[0].len();
    if target_comps.iter().any(|c| c.len() != tuple_len) || tuple_len <= width {
        return Err(Error::NotAProductExtension);
    }
    let src_comps: Vec<Vec<String>> = src.elements().iter().map(|e| e.components()).collect();

    // Find the coordinate block whose projections are exactly the source set.
    'offsets: for offset in 0..=(tuple_len - width) {
        let mut proj_index = Vec::with_capacity(target.len());
        for comps in &target_comps {
            let block = &comps[offset..offset + width];
            match src_comps.iter().position(|s| s.as_slice() == block) {
                Some(i) => proj_index.push(i),
                None => continue 'offsets,
            }
        }
        let mut seen = vec![false; src.len()];
        for &i in &proj_index {
            seen[i] = true;
        }
        if seen.iter().any(|&s| !s) {
            continue;
        }
        let assignments: Vec<(Subset, Rat)> = m
            .focals()
            .map(|(set, mass)| {
                let mut bits = 0u32;
                for (t, &s) in proj_index.iter().enumerate() {
                    if set.bits() & (1 << s) != 0 {
                        bits |= 1 << t;
                    }
                }
                (target.subset_from_bits(bits), mass.clone())
            })
            .collect();
        return MassFunction::make(target, assignments, ValidationMode::Strict);
    }
    Err(Error::NotAProductExtension)
}

/// Möbius inversion: recover m from Bel over all subsets, then validate.
///
/// Doubles as an is-this-a-belief-function test: inputs whose inversion
/// yields negative masses or mass on ∅ are rejected.
pub fn mass_from_belief(
    frame: &Frame,
    bel_values: &[(Subset, Rat)],
) -> Result<MassFunction, Error> {
    let n = frame.len();
    if n > 16 {
        return Err(Error::CapacityExceeded(format!(
            "Möbius inversion needs 2^{n} table entries; frames above 16 elements are rejected"
        )));
    }
    let size = 1usize << n;
    let mut table: Vec<Option<Rat>> = vec![None; size];
    for (set, bel) in bel_values {
        if !set.frame().same_frame(frame) {
            return Err(Error::FrameMismatch);
        }
        let idx = set.bits() as usize;
        if table[idx].is_some() {
            return Err(Error::DuplicateBeliefEntry(set.to_string()));
        }
        table[idx] = Some(bel.clone());
    }
    let mut values: Vec<Rat> = Vec::with_capacity(size);
    for (idx, v) in table.into_iter().enumerate() {
        match v {
            Some(v) => values.push(v),
            None => {
                return Err(Error::IncompleteBeliefMap(
                    frame.subset_from_bits(idx as u32).to_string(),
                ))
            }
        }
    }
    // In-place subset Möbius transform: after the sweep, values[A] holds
    // Σ_{B⊆A} (−1)^{|A−B|} Bel(B).
    for bit in 0..n {
        let step = 1usize << bit;
        for a in 0..size {
            if a & step != 0 {
                let lower = values[a ^ step].clone();
                values[a] -= &lower;
            }
        }
    }
    let assignments: Vec<(Subset, Rat)> = values
        .into_iter()
        .enumerate()
        .filter(|(_, m)| !m.is_zero())
        .map(|(bits, m)| (frame.subset_from_bits(bits as u32), m))
        .collect();
    MassFunction::make(frame, assignments, ValidationMode::Strict)
        .map_err(|e| Error::NotABeliefFunction(e.to_string()))
}
