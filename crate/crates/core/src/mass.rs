//! Mass functions (basic probability assignments) and the derived set
//! functions Bel, Pl and Q.
//!
//! Two validation modes are supported. `Strict` is the usual definition:
//! nonnegative masses summing to one with nothing on the empty set.
//! `Generalized` admits signed masses as long as Σ|m(A)| = 1 and every
//! belief value Σ_{A⊆B} m(A) stays nonnegative; it exists because some
//! axiomatizations are literally written that way.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::frame::{Element, Frame, Subset};
use crate::rational::Rat;
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValidationMode {
    Strict,
    Generalized,
}

/// A validated basic probability assignment over a frame.
///
/// Only nonzero masses are stored; the keys are the focal elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MassFunction {
    frame: Frame,
    focals: BTreeMap<u32, Rat>,
    mode: ValidationMode,
}

impl MassFunction {
    /// Build and validate a mass function. Duplicate subsets are summed
    /// before validation; zero entries are dropped.
    pub fn make(
        frame: &Frame,
        assignments: impl IntoIterator<Item = (Subset, Rat)>,
        mode: ValidationMode,
    ) -> Result<Self, Error> {
        let mut focals: BTreeMap<u32, Rat> = BTreeMap::new();
        for (set, mass) in assignments {
            if !set.frame().same_frame(frame) {
                return Err(Error::FrameMismatch);
            }
            *focals.entry(set.bits()).or_insert_with(Rat::zero) += &mass;
        }
        focals.retain(|_, m| !m.is_zero());

        if let Some(m0) = focals.get(&0) {
            if !m0.is_zero() {
                return Err(Error::EmptyFocal);
            }
        }
        match mode {
            ValidationMode::Strict => {
                if focals.values().any(|m| m.is_negative()) {
                    return Err(Error::NegativeMass);
                }
                let total: Rat = focals.values().sum();
                if !total.is_one() {
                    return Err(Error::NotNormalized(total.to_string()));
                }
            }
            ValidationMode::Generalized => {
                let total_abs: Rat = focals.values().map(|m| m.abs()).sum();
                if !total_abs.is_one() {
                    return Err(Error::NotNormalized(total_abs.to_string()));
                }
                check_nonnegative_beliefs(frame, &focals)?;
            }
        }
        Ok(MassFunction {
            frame: frame.clone(),
            focals,
            mode,
        })
    }

    /// Total ignorance: all mass on the full frame.
    pub fn vacuous(frame: &Frame) -> Self {
        let mut focals = BTreeMap::new();
        focals.insert(frame.full_bits(), Rat::one());
        MassFunction {
            frame: frame.clone(),
            focals,
            mode: ValidationMode::Strict,
        }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn mode(&self) -> ValidationMode {
        self.mode
    }

    pub fn is_vacuous(&self) -> bool {
        self.focals.len() == 1 && self.focals.contains_key(&self.frame.full_bits())
    }

    /// Focal elements with their masses, in bit order.
    pub fn focals(&self) -> impl Iterator<Item = (Subset, &Rat)> + '_ {
        self.focals
            .iter()
            .map(|(&bits, m)| (self.frame.subset_from_bits(bits), m))
    }

    pub fn focal_count(&self) -> usize {
        self.focals.len()
    }

    pub fn mass(&self, set: &Subset) -> Result<Rat, Error> {
        self.check_frame(set)?;
        Ok(self
            .focals
            .get(&set.bits())
            .cloned()
            .unwrap_or_else(Rat::zero))
    }

    /// Bel(A) = Σ_{B⊆A} m(B).
    pub fn belief(&self, set: &Subset) -> Result<Rat, Error> {
        self.check_frame(set)?;
        let a = set.bits();
        Ok(self
            .focals
            .iter()
            .filter(|(&b, _)| b & !a == 0)
            .map(|(_, m)| m)
            .sum())
    }

    /// Pl(A) = 1 − Bel(Ξ − A) = Σ_{B∩A≠∅} m(B).
    pub fn plausibility(&self, set: &Subset) -> Result<Rat, Error> {
        Ok(Rat::one() - self.belief(&set.complement())?)
    }

    /// Q(A) = Σ_{A⊆B} m(B).
    pub fn commonality(&self, set: &Subset) -> Result<Rat, Error> {
        self.check_frame(set)?;
        let a = set.bits();
        Ok(self
            .focals
            .iter()
            .filter(|(&b, _)| a & !b == 0)
            .map(|(_, m)| m)
            .sum())
    }

    fn check_frame(&self, set: &Subset) -> Result<(), Error> {
        if set.frame().same_frame(&self.frame) {
            Ok(())
        } else {
            Err(Error::FrameMismatch)
        }
    }

    pub fn to_json(&self) -> MassFunctionJson {
        MassFunctionJson {
            frame: self.frame.elements().to_vec(),
            focals: self
                .focals()
                .map(|(set, m)| FocalJson {
                    set: set.elements().cloned().collect(),
                    mass: m.clone(),
                })
                .collect(),
            mode: self.mode,
        }
    }

    pub fn from_json(json: &MassFunctionJson) -> Result<Self, Error> {
        let frame = Frame::new(json.frame.clone())?;
        let assignments: Vec<(Subset, Rat)> = json
            .focals
            .iter()
            .map(|f| Ok((frame.subset_of(f.set.iter())?, f.mass.clone())))
            .collect::<Result<_, Error>>()?;
        MassFunction::make(&frame, assignments, json.mode)
    }
}

/// Signed-mode belief check: every Bel(B) must be nonnegative. Any B has
/// the same belief as the union of the focals it contains, so checking
/// unions of focals suffices; small frames use a dense sweep instead.
fn check_nonnegative_beliefs(frame: &Frame, focals: &BTreeMap<u32, Rat>) -> Result<(), Error> {
    if frame.len() <= 16 {
        for b in 0..=frame.full_bits() {
            let bel: Rat = focals
                .iter()
                .filter(|(&a, _)| a & !b == 0)
                .map(|(_, m)| m)
                .sum();
            if bel.is_negative() {
                return Err(Error::NegativeBelief(
                    frame.subset_from_bits(b).to_string(),
                ));
            }
        }
        return Ok(());
    }
    let mut unions: std::collections::BTreeSet<u32> = std::collections::BTreeSet::new();
    unions.insert(0);
    for &f in focals.keys() {
        let existing: Vec<u32> = unions.iter().copied().collect();
        for u in existing {
            unions.insert(u | f);
        }
    }
    for b in unions {
        let bel: Rat = focals
            .iter()
            .filter(|(&a, _)| a & !b == 0)
            .map(|(_, m)| m)
            .sum();
        if bel.is_negative() {
            return Err(Error::NegativeBelief(
                frame.subset_from_bits(b).to_string(),
            ));
        }
    }
    Ok(())
}

/// Wire format: masses as exact "numerator/denominator" strings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MassFunctionJson {
    pub frame: Vec<Element>,
    pub focals: Vec<FocalJson>,
    pub mode: ValidationMode,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FocalJson {
    pub set: Vec<Element>,
    pub mass: Rat,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d_frame() -> Frame {
        Frame::from_names(["d1", "d2", "d3"]).unwrap()
    }

    /// The worked three-element mass: m({d1})=2/5, m({d3})=1/5, m({d2,d3})=2/5.
    pub(crate) fn table1_mass() -> MassFunction {
        let f = d_frame();
        MassFunction::make(
            &f,
            vec![
                (f.subset_of_names(["d1"]).unwrap(), Rat::new(2, 5)),
                (f.subset_of_names(["d3"]).unwrap(), Rat::new(1, 5)),
                (f.subset_of_names(["d2", "d3"]).unwrap(), Rat::new(2, 5)),
            ],
            ValidationMode::Strict,
        )
        .unwrap()
    }

    #[test]
    fn make_valid_and_vacuous() {
        let m = table1_mass();
        assert_eq!(m.focal_count(), 3);

        let f = d_frame();
        let v = MassFunction::make(
            &f,
            vec![(f.full_set(), Rat::one())],
            ValidationMode::Strict,
        )
        .unwrap();
        assert!(v.is_vacuous());
        assert_eq!(v, MassFunction::vacuous(&f));
    }

    #[test]
    fn make_rejects_empty_focal() {
        let f = d_frame();
        let err = MassFunction::make(
            &f,
            vec![
                (f.subset_of_names(["d1"]).unwrap(), Rat::new(1, 2)),
                (f.empty_set(), Rat::new(1, 2)),
            ],
            ValidationMode::Strict,
        )
        .unwrap_err();
        assert!(matches!(err, Error::EmptyFocal));
    }

    #[test]
    fn make_rejects_bad_sum_and_sign() {
        let f = d_frame();
        let err = MassFunction::make(
            &f,
            vec![(f.subset_of_names(["d1"]).unwrap(), Rat::new(1, 2))],
            ValidationMode::Strict,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotNormalized(_)));

        let err = MassFunction::make(
            &f,
            vec![
                (f.subset_of_names(["d1"]).unwrap(), Rat::new(3, 2)),
                (f.subset_of_names(["d2"]).unwrap(), Rat::new(-1, 2)),
            ],
            ValidationMode::Strict,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NegativeMass));
    }

    #[test]
    fn duplicates_summed_before_validation() {
        let f = d_frame();
        let s = f.subset_of_names(["d1"]).unwrap();
        let m = MassFunction::make(
            &f,
            vec![
                (s.clone(), Rat::new(1, 2)),
                (s.clone(), Rat::new(1, 2)),
            ],
            ValidationMode::Strict,
        )
        .unwrap();
        assert_eq!(m.mass(&s).unwrap(), Rat::one());
    }

    #[test]
    fn generalized_mode_signed_masses() {
        let f = Frame::from_names(["a", "b"]).unwrap();
        let a = f.subset_of_names(["a"]).unwrap();
        // m({a}) = 2/3, m({a,b}) = ... a signed example: m({a})=2/3, m(Ξ)=-1/3
        // would give Bel(Ξ) = 1/3 ≥ 0 and Bel({a}) = 2/3, but Σ|m| = 1.
        let m = MassFunction::make(
            &f,
            vec![
                (a.clone(), Rat::new(2, 3)),
                (f.full_set(), Rat::new(-1, 3)),
            ],
            ValidationMode::Generalized,
        )
        .unwrap();
        assert_eq!(m.belief(&f.full_set()).unwrap(), Rat::new(1, 3));

        // Negative belief somewhere: rejected.
        let err = MassFunction::make(
            &f,
            vec![
                (a.clone(), Rat::new(-1, 3)),
                (f.full_set(), Rat::new(2, 3)),
            ],
            ValidationMode::Generalized,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NegativeBelief(_)));
    }

    #[test]
    fn belief_examples() {
        let m = table1_mass();
        let f = m.frame().clone();
        assert_eq!(
            m.belief(&f.subset_of_names(["d1", "d3"]).unwrap()).unwrap(),
            Rat::new(3, 5)
        );
        assert_eq!(m.belief(&f.full_set()).unwrap(), Rat::one());
        assert_eq!(
            m.belief(&f.subset_of_names(["d2"]).unwrap()).unwrap(),
            Rat::zero()
        );
    }

    #[test]
    fn plausibility_examples() {
        let m = table1_mass();
        let f = m.frame().clone();
        assert_eq!(
            m.plausibility(&f.subset_of_names(["d3"]).unwrap()).unwrap(),
            Rat::new(3, 5)
        );
        assert_eq!(m.plausibility(&f.empty_set()).unwrap(), Rat::zero());
        assert_eq!(
            m.plausibility(&f.subset_of_names(["d1", "d2"]).unwrap())
                .unwrap(),
            Rat::new(4, 5)
        );
    }

    #[test]
    fn commonality_examples() {
        let m = table1_mass();
        let f = m.frame().clone();
        // supersets of {d2} among the focals: only {d2,d3}
        assert_eq!(
            m.commonality(&f.subset_of_names(["d2"]).unwrap()).unwrap(),
            Rat::new(2, 5)
        );
        assert_eq!(m.commonality(&f.empty_set()).unwrap(), Rat::one());
        let v = MassFunction::vacuous(&f);
        assert_eq!(v.commonality(&f.full_set()).unwrap(), Rat::one());
    }

    #[test]
    fn frame_mismatch_detected() {
        let m = table1_mass();
        let other = Frame::from_names(["x", "y"]).unwrap();
        assert!(matches!(
            m.belief(&other.full_set()),
            Err(Error::FrameMismatch)
        ));
    }

    #[test]
    fn json_round_trip() {
        let m = table1_mass();
        let json = serde_json::to_string(&m.to_json()).unwrap();
        let back = MassFunction::from_json(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back, m);
    }
}
