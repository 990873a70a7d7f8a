//! Weighted populations of objects with set-valued attributes, labelings,
//! and labeling processes.
//!
//! The measurement method is the canonical one: M(ω, A) is true iff A meets
//! the object's true set-value. A labeling attaches a subset to each object
//! (∅ = discarded); the modified measurement intersects the query with the
//! label first. Population-level m/Bel/Pl are weighted frequencies of the
//! corresponding tests, and labeling processes rewrite labelings either
//! deterministically (one label) or by randomized per-object selection.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::combine::{dempster_combine, CombinationResult};
use crate::frame::{Element, Frame, Subset};
use crate::mass::{MassFunction, ValidationMode};
use crate::rational::Rat;
use crate::Error;

/// One object: a nonempty true set-value and a positive weight.
#[derive(Clone, Debug)]
pub struct PopObject {
    pub id: String,
    pub value: Subset,
    pub weight: Rat,
}

/// A weighted population over a frame. Weights need not sum to 1.
#[derive(Clone, Debug)]
pub struct Population {
    frame: Frame,
    objects: Vec<PopObject>,
    index: BTreeMap<String, usize>,
}

impl Population {
    pub fn new(frame: Frame, objects: Vec<PopObject>) -> Result<Self, Error> {
        let mut index = BTreeMap::new();
        for (i, o) in objects.iter().enumerate() {
            if !o.value.frame().same_frame(&frame) {
                return Err(Error::FrameMismatch);
            }
            if o.value.is_empty() {
                return Err(Error::EmptyTrueValue(o.id.clone()));
            }
            if !o.weight.is_positive() {
                return Err(Error::NonPositiveWeight(o.id.clone()));
            }
            if index.insert(o.id.clone(), i).is_some() {
                return Err(Error::DuplicateObject(o.id.clone()));
            }
        }
        Ok(Population {
            frame,
            objects,
            index,
        })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn objects(&self) -> &[PopObject] {
        &self.objects
    }

    pub fn object(&self, id: &str) -> Result<&PopObject, Error> {
        self.index
            .get(id)
            .map(|&i| &self.objects[i])
            .ok_or_else(|| Error::UnknownObject(id.to_string()))
    }

    pub fn to_json(&self) -> PopulationJson {
        PopulationJson {
            frame: self.frame.elements().to_vec(),
            objects: self
                .objects
                .iter()
                .map(|o| PopObjectJson {
                    id: o.id.clone(),
                    value: o.value.elements().cloned().collect(),
                    weight: o.weight.clone(),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &PopulationJson) -> Result<Self, Error> {
        let frame = Frame::new(json.frame.clone())?;
        let objects = json
            .objects
            .iter()
            .map(|o| {
                Ok(PopObject {
                    id: o.id.clone(),
                    value: frame.subset_of(o.value.iter())?,
                    weight: o.weight.clone(),
                })
            })
            .collect::<Result<_, Error>>()?;
        Population::new(frame, objects)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PopulationJson {
    pub frame: Vec<Element>,
    pub objects: Vec<PopObjectJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PopObjectJson {
    pub id: String,
    pub value: Vec<Element>,
    pub weight: Rat,
}

/// Per-object labels; ∅ means the object is discarded from the population
/// under this labeling. Admissibility: a nonempty label must meet the
/// object's true value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labeling {
    labels: BTreeMap<String, Subset>,
}

impl Labeling {
    pub fn new(pop: &Population, labels: BTreeMap<String, Subset>) -> Result<Self, Error> {
        for (id, label) in &labels {
            let obj = pop.object(id)?;
            if !label.frame().same_frame(pop.frame()) {
                return Err(Error::FrameMismatch);
            }
            if !label.is_empty() && label.intersect(&obj.value).is_empty() {
                return Err(Error::InadmissibleLabel(id.clone()));
            }
        }
        for o in pop.objects() {
            if !labels.contains_key(&o.id) {
                return Err(Error::UnknownObject(o.id.clone()));
            }
        }
        Ok(Labeling { labels })
    }

    /// Every object labeled with the full frame.
    pub fn unlabeled(pop: &Population) -> Self {
        Labeling {
            labels: pop
                .objects()
                .iter()
                .map(|o| (o.id.clone(), pop.frame().full_set()))
                .collect(),
        }
    }

    pub fn label(&self, id: &str) -> Option<&Subset> {
        self.labels.get(id)
    }

    /// Ids still in the population (nonempty label).
    pub fn surviving<'a>(&'a self, pop: &'a Population) -> impl Iterator<Item = &'a PopObject> {
        pop.objects()
            .iter()
            .filter(|o| self.labels.get(&o.id).map_or(false, |l| !l.is_empty()))
    }
}

/// M(ω, A): does A meet the object's true set-value?
pub fn measure(pop: &Population, id: &str, set: &Subset) -> Result<bool, Error> {
    let obj = pop.object(id)?;
    if !set.frame().same_frame(pop.frame()) {
        return Err(Error::FrameMismatch);
    }
    Ok(!set.intersect(&obj.value).is_empty())
}

/// M_l(ω, A) = M(ω, A ∩ l(ω)); undefined on discarded objects.
pub fn modified_measure(
    pop: &Population,
    l: &Labeling,
    id: &str,
    set: &Subset,
) -> Result<bool, Error> {
    let label = l.label(id).ok_or_else(|| Error::UnknownObject(id.into()))?;
    if label.is_empty() {
        return Err(Error::DiscardedObject(id.to_string()));
    }
    measure(pop, id, &set.intersect(label))
}

fn surviving_weight(pop: &Population, l: &Labeling) -> Rat {
    l.surviving(pop).map(|o| o.weight.clone()).sum()
}

/// Population-level mass: the weight fraction of surviving objects whose
/// label-restricted true value l(ω)∩V(ω) equals A.
pub fn pop_mass(pop: &Population, l: &Labeling) -> Result<MassFunction, Error> {
    let total = surviving_weight(pop, l);
    if total.is_zero() {
        return Err(Error::EmptyPopulation);
    }
    let mut acc: BTreeMap<u32, Rat> = BTreeMap::new();
    for o in l.surviving(pop) {
        let restricted = o.value.intersect(l.label(&o.id).unwrap());
        *acc.entry(restricted.bits()).or_insert_with(Rat::zero) += &o.weight;
    }
    let frame = pop.frame().clone();
    let assignments: Vec<(Subset, Rat)> = acc
        .into_iter()
        .map(|(bits, w)| (frame.subset_from_bits(bits), w / &total))
        .collect();
    MassFunction::make(&frame, assignments, ValidationMode::Strict)
}

/// Bel from the definition: weighted probability of ¬M_l(ω, Ξ−A).
pub fn pop_belief(pop: &Population, l: &Labeling, set: &Subset) -> Result<Rat, Error> {
    let total = surviving_weight(pop, l);
    if total.is_zero() {
        return Err(Error::EmptyPopulation);
    }
    let comp = set.complement();
    let mut hit = Rat::zero();
    for o in l.surviving(pop) {
        if !modified_measure(pop, l, &o.id, &comp)? {
            hit += &o.weight;
        }
    }
    Ok(hit / total)
}

/// Pl from the definition: weighted probability of M_l(ω, A).
pub fn pop_plausibility(pop: &Population, l: &Labeling, set: &Subset) -> Result<Rat, Error> {
    let total = surviving_weight(pop, l);
    if total.is_zero() {
        return Err(Error::EmptyPopulation);
    }
    let mut hit = Rat::zero();
    for o in l.surviving(pop) {
        if modified_measure(pop, l, &o.id, set)? {
            hit += &o.weight;
        }
    }
    Ok(hit / total)
}

/// Simple labeling process: discard objects failing M_l(ω, L), intersect
/// the labels of the rest with L.
pub fn apply_simple_process(
    pop: &Population,
    l: &Labeling,
    label: &Subset,
) -> Result<Labeling, Error> {
    if label.is_empty() {
        return Err(Error::EmptyLabel);
    }
    if !label.frame().same_frame(pop.frame()) {
        return Err(Error::FrameMismatch);
    }
    let mut labels = BTreeMap::new();
    for o in pop.objects() {
        let old = l.label(&o.id).unwrap();
        let new = if old.is_empty() {
            pop.frame().empty_set()
        } else if label.intersect(old).intersect(&o.value).is_empty() {
            // M_l(ω, L) = FALSE
            pop.frame().empty_set()
        } else {
            old.intersect(label)
        };
        labels.insert(o.id.clone(), new);
    }
    Ok(Labeling { labels })
}

/// Both routes to the post-process belief state and their comparison.
#[derive(Clone, Debug)]
pub struct SimpleProcessReport {
    pub via_process: MassFunction,
    pub via_dempster: CombinationResult,
    pub equal: bool,
}

/// Compare Bel over the processed population against Dempster combination
/// with the simple support function on L.
pub fn verify_simple_process(
    pop: &Population,
    l: &Labeling,
    label: &Subset,
) -> Result<SimpleProcessReport, Error> {
    let l2 = apply_simple_process(pop, l, label)?;
    let via_process = pop_mass(pop, &l2)?;
    let support = crate::combine::simple_support(pop.frame(), label)?;
    let via_dempster = dempster_combine(&pop_mass(pop, l)?, &support)?;
    let equal = via_process == via_dempster.combined;
    Ok(SimpleProcessReport {
        via_process,
        via_dempster,
        equal,
    })
}

/// Randomized labeling process: candidate labels with positive selection
/// probabilities summing to one. One label is the simple process.
#[derive(Clone, Debug)]
pub struct LabelingProcessSpec {
    entries: Vec<(Subset, Rat)>,
}

impl LabelingProcessSpec {
    pub fn new(entries: Vec<(Subset, Rat)>) -> Result<Self, Error> {
        if entries.is_empty() {
            return Err(Error::InvalidProcess("no labels".into()));
        }
        let frame = entries[0].0.frame().clone();
        let mut seen = std::collections::BTreeSet::new();
        for (label, p) in &entries {
            if !label.frame().same_frame(&frame) {
                return Err(Error::FrameMismatch);
            }
            if label.is_empty() {
                return Err(Error::InvalidProcess("empty label".into()));
            }
            if !p.is_positive() {
                return Err(Error::InvalidProcess(format!(
                    "selection probability {p} for {label} is not positive"
                )));
            }
            if !seen.insert(label.bits()) {
                return Err(Error::InvalidProcess(format!("duplicate label {label}")));
            }
        }
        let total: Rat = entries.iter().map(|(_, p)| p).sum();
        if !total.is_one() {
            return Err(Error::InvalidProcess(format!(
                "selection probabilities sum to {total}, not 1"
            )));
        }
        Ok(LabelingProcessSpec { entries })
    }

    pub fn entries(&self) -> &[(Subset, Rat)] {
        &self.entries
    }

    pub fn label_count(&self) -> usize {
        self.entries.len()
    }

    pub fn frame(&self) -> &Frame {
        self.entries[0].0.frame()
    }

    /// The process mass function m^{LP}: selection probabilities as masses.
    pub fn process_mass(&self) -> MassFunction {
        MassFunction::make(self.frame(), self.entries.clone(), ValidationMode::Strict)
            .expect("validated at construction")
    }

    pub fn to_json(&self) -> ProcessJson {
        ProcessJson {
            labels: self
                .entries
                .iter()
                .map(|(s, p)| ProcessLabelJson {
                    set: s.elements().cloned().collect(),
                    p: p.clone(),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &ProcessJson, frame: &Frame) -> Result<Self, Error> {
        let entries = json
            .labels
            .iter()
            .map(|e| Ok((frame.subset_of(e.set.iter())?, e.p.clone())))
            .collect::<Result<_, Error>>()?;
        LabelingProcessSpec::new(entries)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProcessJson {
    pub labels: Vec<ProcessLabelJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProcessLabelJson {
    pub set: Vec<Element>,
    pub p: Rat,
}

/// How to evaluate a randomized process.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimulationMode {
    /// Enumerate all k^n per-object assignments; k^n capped at 10^6.
    ExactExpectation,
    /// Seeded sampling of assignments; trial t depends only on (seed, t).
    MonteCarlo { trials: u64, seed: u64 },
}

/// Bel values over every subset of the frame, indexed by subset bits.
pub type BelVector = Vec<Rat>;

fn bel_vector(pop: &Population, l: &Labeling) -> Result<BelVector, Error> {
    let m = pop_mass(pop, l)?;
    pop.frame()
        .all_subsets()
        .map(|s| m.belief(&s))
        .collect()
}

/// Exact finite-population expectation over all label assignments.
#[derive(Clone, Debug)]
pub struct ExactExpectation {
    /// E[Bel | P″ nonempty], per subset.
    pub expected_bel: BelVector,
    /// Total probability of assignments leaving the population empty.
    pub empty_probability: Rat,
    /// |expected_bel − dempster_bel| per subset.
    pub deviations: Vec<Rat>,
}

#[derive(Clone, Debug)]
pub struct MonteCarloSummary {
    pub trials: u64,
    pub seed: u64,
    pub empty_outcomes: u64,
    /// Sample mean of Bel over nonempty outcomes, per subset (exact).
    pub mean_bel: BelVector,
    /// Standard error of each mean, for tolerance checks.
    pub std_err: Vec<f64>,
}

/// Report on a randomized labeling process: the Dempster prediction, the
/// infinite-population (distributional-limit) Bel, and whichever sampled or
/// enumerated evaluation was requested.
#[derive(Clone, Debug)]
pub struct GeneralProcessReport {
    pub dempster: CombinationResult,
    pub dempster_bel: BelVector,
    /// Bel of the weight-splitting limit population; equals the Dempster
    /// prediction exactly.
    pub limit_bel: BelVector,
    pub limit_matches_dempster: bool,
    pub exact: Option<ExactExpectation>,
    pub monte_carlo: Option<MonteCarloSummary>,
}

/// Evaluate a randomized labeling process and compare against the Dempster
/// combination of the population mass with the process mass.
pub fn apply_general_process(
    pop: &Population,
    l: &Labeling,
    proc: &LabelingProcessSpec,
    mode: SimulationMode,
) -> Result<GeneralProcessReport, Error> {
    if !proc.frame().same_frame(pop.frame()) {
        return Err(Error::FrameMismatch);
    }
    let frame = pop.frame().clone();
    let base_mass = pop_mass(pop, l)?;
    let dempster = dempster_combine(&base_mass, &proc.process_mass())?;
    let dempster_bel: BelVector = frame
        .all_subsets()
        .map(|s| dempster.combined.belief(&s))
        .collect::<Result<_, Error>>()?;

    let limit_bel = limit_population_bel(pop, l, proc)?;
    let limit_matches_dempster = limit_bel == dempster_bel;

    let mut report = GeneralProcessReport {
        dempster,
        dempster_bel,
        limit_bel,
        limit_matches_dempster,
        exact: None,
        monte_carlo: None,
    };
    match mode {
        SimulationMode::ExactExpectation => {
            report.exact = Some(exact_expectation(pop, l, proc, &report.dempster_bel)?);
        }
        SimulationMode::MonteCarlo { trials, seed } => {
            report.monte_carlo = Some(monte_carlo(pop, l, proc, trials, seed)?);
        }
    }
    Ok(report)
}

/// Infinite-population reading: each object's weight splits across the
/// candidate labels in selection proportions.
fn limit_population_bel(
    pop: &Population,
    l: &Labeling,
    proc: &LabelingProcessSpec,
) -> Result<BelVector, Error> {
    let frame = pop.frame().clone();
    let mut objects = Vec::new();
    for o in l.surviving(pop) {
        let old = l.label(&o.id).unwrap();
        for (j, (label, p)) in proc.entries().iter().enumerate() {
            let new = old.intersect(label);
            if new.intersect(&o.value).is_empty() {
                continue; // discarded under this selection
            }
            objects.push(PopObject {
                id: format!("{}#{}", o.id, j),
                value: o.value.clone(),
                weight: &o.weight * p,
            });
        }
    }
    let split = Population::new(frame.clone(), objects)?;
    let labels: BTreeMap<String, Subset> = split
        .objects()
        .iter()
        .map(|o| {
            let (base, j) = o.id.rsplit_once('#').unwrap();
            let j: usize = j.parse().unwrap();
            let old = l.label(base).unwrap();
            (o.id.clone(), old.intersect(&proc.entries()[j].0))
        })
        .collect();
    let split_l = Labeling::new(&split, labels)?;
    bel_vector(&split, &split_l)
}

fn exact_expectation(
    pop: &Population,
    l: &Labeling,
    proc: &LabelingProcessSpec,
    dempster_bel: &BelVector,
) -> Result<ExactExpectation, Error> {
    let survivors: Vec<&PopObject> = l.surviving(pop).collect();
    let k = proc.label_count();
    let n = survivors.len();
    let outcomes = (k as f64).powi(n as i32);
    if outcomes > 1e6 {
        return Err(Error::CapacityExceeded(format!(
            "{k}^{n} assignments exceed the exact-enumeration bound; use Monte Carlo"
        )));
    }
    let size = (pop.frame().full_bits() as usize) + 1;
    let mut weighted_bel = vec![Rat::zero(); size];
    let mut nonempty_prob = Rat::zero();
    let mut empty_prob = Rat::zero();

    let mut choice = vec![0usize; n];
    loop {
        let mut prob = Rat::one();
        for &c in &choice {
            prob = prob * &proc.entries()[c].1;
        }
        let labels: BTreeMap<String, Subset> = pop
            .objects()
            .iter()
            .map(|o| (o.id.clone(), pop.frame().empty_set()))
            .chain(survivors.iter().zip(&choice).map(|(o, &c)| {
                let old = l.label(&o.id).unwrap();
                let label = &proc.entries()[c].0;
                let new = if label.intersect(old).intersect(&o.value).is_empty() {
                    pop.frame().empty_set()
                } else {
                    old.intersect(label)
                };
                (o.id.clone(), new)
            }))
            .collect();
        let l2 = Labeling { labels };
        match bel_vector(pop, &l2) {
            Ok(bel) => {
                for (acc, b) in weighted_bel.iter_mut().zip(bel) {
                    *acc += b * &prob;
                }
                nonempty_prob += &prob;
            }
            Err(Error::EmptyPopulation) => empty_prob += &prob,
            Err(e) => return Err(e),
        }

        // mixed-radix increment
        let mut pos = 0;
        loop {
            if pos == n {
                let expected_bel: BelVector = if nonempty_prob.is_zero() {
                    vec![Rat::zero(); size]
                } else {
                    weighted_bel
                        .iter()
                        .map(|b| b / &nonempty_prob)
                        .collect()
                };
                let deviations = expected_bel
                    .iter()
                    .zip(dempster_bel)
                    .map(|(a, b)| (a - b).abs())
                    .collect();
                return Ok(ExactExpectation {
                    expected_bel,
                    empty_probability: empty_prob,
                    deviations,
                });
            }
            choice[pos] += 1;
            if choice[pos] < k {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

fn monte_carlo(
    pop: &Population,
    l: &Labeling,
    proc: &LabelingProcessSpec,
    trials: u64,
    seed: u64,
) -> Result<MonteCarloSummary, Error> {
    if trials == 0 {
        return Err(Error::InvalidProcess("zero trials".into()));
    }
    let survivors: Vec<&PopObject> = l.surviving(pop).collect();
    let size = (pop.frame().full_bits() as usize) + 1;
    // cumulative selection thresholds, compared against u/2^64
    let cum: Vec<Rat> = proc
        .entries()
        .iter()
        .scan(Rat::zero(), |acc, (_, p)| {
            *acc += p;
            Some(acc.clone())
        })
        .collect();
    let two64 = Rat::from_big(1.into(), num::BigInt::from(2).pow(64)); // 2^-64
    let mut sum_bel = vec![Rat::zero(); size];
    let mut sum_sq = vec![0f64; size];
    let mut empty_outcomes = 0u64;

    for t in 0..trials {
        // trial randomness depends only on (seed, t)
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t);
        let mut labels: BTreeMap<String, Subset> = pop
            .objects()
            .iter()
            .map(|o| (o.id.clone(), pop.frame().empty_set()))
            .collect();
        for o in &survivors {
            let u = Rat::from_big(rng.gen::<u64>().into(), 1.into()) * &two64;
            let mut pick = proc.label_count() - 1;
            for (j, threshold) in cum.iter().enumerate() {
                if u < *threshold {
                    pick = j;
                    break;
                }
            }
            let old = l.label(&o.id).unwrap();
            let label = &proc.entries()[pick].0;
            let new = if label.intersect(old).intersect(&o.value).is_empty() {
                pop.frame().empty_set()
            } else {
                old.intersect(label)
            };
            labels.insert(o.id.clone(), new);
        }
        let l2 = Labeling { labels };
        match bel_vector(pop, &l2) {
            Ok(bel) => {
                for ((acc, sq), b) in sum_bel.iter_mut().zip(sum_sq.iter_mut()).zip(bel) {
                    *sq += b.to_f64() * b.to_f64();
                    *acc += b;
                }
            }
            Err(Error::EmptyPopulation) => empty_outcomes += 1,
            Err(e) => return Err(e),
        }
    }
    let n = trials - empty_outcomes;
    if n == 0 {
        return Err(Error::EmptyPopulation);
    }
    let nf = n as f64;
    let mean_bel: BelVector = sum_bel
        .iter()
        .map(|s| s / Rat::from_big(n.into(), 1.into()))
        .collect();
    let std_err = sum_bel
        .iter()
        .zip(&sum_sq)
        .map(|(s, sq)| {
            let mean = s.to_f64() / nf;
            let var = (sq / nf - mean * mean).max(0.0);
            (var / nf).sqrt()
        })
        .collect();
    Ok(MonteCarloSummary {
        trials,
        seed,
        empty_outcomes,
        mean_bel,
        std_err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn small_pop() -> (Population, Labeling) {
        fixtures::table1_population()
    }

    #[test]
    fn measure_axioms_cases() {
        let (pop, _) = small_pop();
        let f = pop.frame().clone();
        // row2 has true value {d2,d3}
        assert!(measure(&pop, "row2", &f.subset_of_names(["d1", "d2"]).unwrap()).unwrap());
        assert!(measure(&pop, "row2", &f.full_set()).unwrap());
        assert!(!measure(&pop, "row2", &f.empty_set()).unwrap());
        assert!(matches!(
            measure(&pop, "nope", &f.full_set()),
            Err(Error::UnknownObject(_))
        ));
    }

    #[test]
    fn measure_def1_axioms_hold() {
        let (pop, _) = small_pop();
        let f = pop.frame().clone();
        for o in pop.objects() {
            for a in f.all_subsets() {
                let ma = measure(&pop, &o.id, &a).unwrap();
                // upward monotone
                for b in f.all_subsets() {
                    if a.is_subset_of(&b) && ma {
                        assert!(measure(&pop, &o.id, &b).unwrap());
                    }
                }
                // singleton witness downward
                if ma && a.len() > 1 {
                    assert!(a
                        .elements()
                        .any(|e| measure(&pop, &o.id, &f.subset_of([e.clone()].iter()).unwrap())
                            .unwrap()));
                }
            }
        }
    }

    #[test]
    fn modified_measure_cases() {
        let (pop, l) = small_pop();
        let f = pop.frame().clone();
        // unlabeled: modified = plain
        for a in f.all_subsets() {
            assert_eq!(
                modified_measure(&pop, &l, "row2", &a).unwrap(),
                measure(&pop, "row2", &a).unwrap()
            );
        }
        // label {d2} on true value {d2,d3}: query {d3} now fails
        let mut labels: BTreeMap<String, Subset> = pop
            .objects()
            .iter()
            .map(|o| (o.id.clone(), f.full_set()))
            .collect();
        labels.insert("row2".into(), f.subset_of_names(["d2"]).unwrap());
        let l2 = Labeling::new(&pop, labels).unwrap();
        assert!(!modified_measure(&pop, &l2, "row2", &f.subset_of_names(["d3"]).unwrap()).unwrap());

        // discarded object
        let mut labels: BTreeMap<String, Subset> = pop
            .objects()
            .iter()
            .map(|o| (o.id.clone(), f.full_set()))
            .collect();
        labels.insert("row2".into(), f.empty_set());
        let l3 = Labeling::new(&pop, labels).unwrap();
        assert!(matches!(
            modified_measure(&pop, &l3, "row2", &f.full_set()),
            Err(Error::DiscardedObject(_))
        ));
    }

    #[test]
    fn pop_mass_matches_table1() {
        let (pop, l) = small_pop();
        let f = pop.frame().clone();
        let m = pop_mass(&pop, &l).unwrap();
        assert_eq!(
            m.mass(&f.subset_of_names(["d1"]).unwrap()).unwrap(),
            Rat::new(2, 5)
        );
        assert_eq!(
            m.mass(&f.subset_of_names(["d3"]).unwrap()).unwrap(),
            Rat::new(1, 5)
        );
        assert_eq!(
            m.mass(&f.subset_of_names(["d2", "d3"]).unwrap()).unwrap(),
            Rat::new(2, 5)
        );
    }

    #[test]
    fn pop_mass_one_object_label() {
        let f = Frame::from_names(["d1", "d2", "d3"]).unwrap();
        let pop = Population::new(
            f.clone(),
            vec![PopObject {
                id: "o".into(),
                value: f.subset_of_names(["d1", "d2"]).unwrap(),
                weight: Rat::one(),
            }],
        )
        .unwrap();
        let l = Labeling::new(
            &pop,
            BTreeMap::from([("o".to_string(), f.subset_of_names(["d2", "d3"]).unwrap())]),
        )
        .unwrap();
        let m = pop_mass(&pop, &l).unwrap();
        assert_eq!(
            m.mass(&f.subset_of_names(["d2"]).unwrap()).unwrap(),
            Rat::one()
        );
    }

    #[test]
    fn pop_belief_and_plausibility() {
        let (pop, l) = small_pop();
        let f = pop.frame().clone();
        let a = f.subset_of_names(["d2", "d3"]).unwrap();
        assert_eq!(pop_belief(&pop, &l, &a).unwrap(), Rat::new(3, 5));
        assert_eq!(pop_plausibility(&pop, &l, &a).unwrap(), Rat::new(3, 5));
        assert_eq!(pop_belief(&pop, &l, &f.full_set()).unwrap(), Rat::one());
        assert_eq!(
            pop_plausibility(&pop, &l, &f.full_set()).unwrap(),
            Rat::one()
        );

        // one object, true {d1,d2}, label Ξ: Bel({d1}) = 0, Pl({d1}) = 1
        let pop1 = Population::new(
            f.clone(),
            vec![PopObject {
                id: "o".into(),
                value: f.subset_of_names(["d1", "d2"]).unwrap(),
                weight: Rat::one(),
            }],
        )
        .unwrap();
        let l1 = Labeling::unlabeled(&pop1);
        let d1 = f.subset_of_names(["d1"]).unwrap();
        assert_eq!(pop_belief(&pop1, &l1, &d1).unwrap(), Rat::zero());
        assert_eq!(pop_plausibility(&pop1, &l1, &d1).unwrap(), Rat::one());
    }

    #[test]
    fn simple_process_survivor_pattern() {
        let (pop, l) = small_pop();
        let f = pop.frame().clone();
        let label = f.subset_of_names(["d1", "d2"]).unwrap();
        let l2 = apply_simple_process(&pop, &l, &label).unwrap();
        let survivors: Vec<&str> = l2.surviving(&pop).map(|o| o.id.as_str()).collect();
        assert_eq!(survivors, ["row1", "row2", "row3", "row5"]);
        for o in l2.surviving(&pop) {
            assert_eq!(l2.label(&o.id), Some(&label));
        }

        // L = Ξ leaves the labeling unchanged
        let l3 = apply_simple_process(&pop, &l, &f.full_set()).unwrap();
        assert_eq!(l3, l);

        // disjoint L discards everything
        let f2 = Frame::from_names(["x", "y"]).unwrap();
        let pop2 = Population::new(
            f2.clone(),
            vec![PopObject {
                id: "o".into(),
                value: f2.subset_of_names(["x"]).unwrap(),
                weight: Rat::one(),
            }],
        )
        .unwrap();
        let l4 = apply_simple_process(
            &pop2,
            &Labeling::unlabeled(&pop2),
            &f2.subset_of_names(["y"]).unwrap(),
        )
        .unwrap();
        assert_eq!(l4.surviving(&pop2).count(), 0);
    }

    #[test]
    fn simple_process_idempotent() {
        let (pop, l) = small_pop();
        let f = pop.frame().clone();
        let label = f.subset_of_names(["d1", "d2"]).unwrap();
        let once = apply_simple_process(&pop, &l, &label).unwrap();
        let twice = apply_simple_process(&pop, &once, &label).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn theorem8_on_table1() {
        let (pop, l) = small_pop();
        let f = pop.frame().clone();
        let label = f.subset_of_names(["d1", "d2"]).unwrap();
        let report = verify_simple_process(&pop, &l, &label).unwrap();
        assert!(report.equal);
        let half = Rat::new(1, 2);
        assert_eq!(
            report
                .via_process
                .mass(&f.subset_of_names(["d1"]).unwrap())
                .unwrap(),
            half
        );
        assert_eq!(
            report
                .via_process
                .mass(&f.subset_of_names(["d2"]).unwrap())
                .unwrap(),
            half
        );

        let trivial = verify_simple_process(&pop, &l, &f.full_set()).unwrap();
        assert!(trivial.equal);
    }

    #[test]
    fn process_spec_validation() {
        let f = Frame::from_names(["d1", "d2", "d3"]).unwrap();
        let l12 = f.subset_of_names(["d1", "d2"]).unwrap();
        let l3 = f.subset_of_names(["d3"]).unwrap();
        let proc = LabelingProcessSpec::new(vec![
            (l12.clone(), Rat::new(1, 2)),
            (l3.clone(), Rat::new(1, 2)),
        ])
        .unwrap();
        let m = proc.process_mass();
        assert_eq!(m.mass(&l12).unwrap(), Rat::new(1, 2));

        assert!(LabelingProcessSpec::new(vec![]).is_err());
        assert!(LabelingProcessSpec::new(vec![(f.empty_set(), Rat::one())]).is_err());
        assert!(
            LabelingProcessSpec::new(vec![(l12.clone(), Rat::new(1, 2))]).is_err(),
            "probabilities must sum to 1"
        );
        assert!(LabelingProcessSpec::new(vec![
            (l12.clone(), Rat::new(1, 2)),
            (l12.clone(), Rat::new(1, 2)),
        ])
        .is_err());
    }

    #[test]
    fn general_process_k1_reduces_to_simple() {
        let (pop, l) = small_pop();
        let f = pop.frame().clone();
        let label = f.subset_of_names(["d1", "d2"]).unwrap();
        let proc = LabelingProcessSpec::new(vec![(label.clone(), Rat::one())]).unwrap();
        let report =
            apply_general_process(&pop, &l, &proc, SimulationMode::ExactExpectation).unwrap();
        let exact = report.exact.unwrap();
        assert!(exact.empty_probability.is_zero());
        assert_eq!(exact.expected_bel, report.dempster_bel);
        assert!(report.limit_matches_dempster);

        let simple = verify_simple_process(&pop, &l, &label).unwrap();
        let simple_bel: Vec<Rat> = f
            .all_subsets()
            .map(|s| simple.via_process.belief(&s).unwrap())
            .collect();
        assert_eq!(exact.expected_bel, simple_bel);
    }

    #[test]
    fn general_process_two_labels_exact() {
        let (pop, l) = small_pop();
        let f = pop.frame().clone();
        let proc = LabelingProcessSpec::new(vec![
            (f.subset_of_names(["d1", "d2"]).unwrap(), Rat::new(1, 2)),
            (f.subset_of_names(["d3"]).unwrap(), Rat::new(1, 2)),
        ])
        .unwrap();
        let report =
            apply_general_process(&pop, &l, &proc, SimulationMode::ExactExpectation).unwrap();
        assert!(report.limit_matches_dempster);
        let exact = report.exact.unwrap();
        // no assignment can empty this population: rows 1 and 5 survive the
        // first label, row 4 the second, and rows 2/3 survive both
        assert!(exact.empty_probability.is_zero());
        // finite-population expectation deviates from the Dempster value
        assert!(exact.deviations.iter().any(|d| !d.is_zero()));
    }

    #[test]
    fn monte_carlo_deterministic() {
        let (pop, l) = small_pop();
        let f = pop.frame().clone();
        let proc = LabelingProcessSpec::new(vec![
            (f.subset_of_names(["d1", "d2"]).unwrap(), Rat::new(1, 2)),
            (f.subset_of_names(["d3"]).unwrap(), Rat::new(1, 2)),
        ])
        .unwrap();
        let mode = SimulationMode::MonteCarlo {
            trials: 500,
            seed: 7,
        };
        let r1 = apply_general_process(&pop, &l, &proc, mode).unwrap();
        let r2 = apply_general_process(&pop, &l, &proc, mode).unwrap();
        let mc1 = r1.monte_carlo.unwrap();
        let mc2 = r2.monte_carlo.unwrap();
        assert_eq!(mc1.mean_bel, mc2.mean_bel);
        assert_eq!(mc1.empty_outcomes, mc2.empty_outcomes);
    }

    #[test]
    fn capacity_bound_enforced() {
        let f = Frame::from_names(["a", "b"]).unwrap();
        let objects: Vec<PopObject> = (0..25)
            .map(|i| PopObject {
                id: format!("o{i}"),
                value: f.full_set(),
                weight: Rat::one(),
            })
            .collect();
        let pop = Population::new(f.clone(), objects).unwrap();
        let l = Labeling::unlabeled(&pop);
        let proc = LabelingProcessSpec::new(vec![
            (f.subset_of_names(["a"]).unwrap(), Rat::new(1, 2)),
            (f.subset_of_names(["b"]).unwrap(), Rat::new(1, 2)),
        ])
        .unwrap();
        assert!(matches!(
            apply_general_process(&pop, &l, &proc, SimulationMode::ExactExpectation),
            Err(Error::CapacityExceeded(_))
        ));
    }

    #[test]
    fn population_validation() {
        let f = Frame::from_names(["a", "b"]).unwrap();
        let bad = Population::new(
            f.clone(),
            vec![PopObject {
                id: "o".into(),
                value: f.empty_set(),
                weight: Rat::one(),
            }],
        );
        assert!(matches!(bad, Err(Error::EmptyTrueValue(_))));

        let bad = Population::new(
            f.clone(),
            vec![PopObject {
                id: "o".into(),
                value: f.full_set(),
                weight: Rat::zero(),
            }],
        );
        assert!(matches!(bad, Err(Error::NonPositiveWeight(_))));

        // inadmissible label: no overlap with the true value
        let pop = Population::new(
            f.clone(),
            vec![PopObject {
                id: "o".into(),
                value: f.subset_of_names(["a"]).unwrap(),
                weight: Rat::one(),
            }],
        )
        .unwrap();
        let bad = Labeling::new(
            &pop,
            BTreeMap::from([("o".to_string(), f.subset_of_names(["b"]).unwrap())]),
        );
        assert!(matches!(bad, Err(Error::InadmissibleLabel(_))));
    }

    #[test]
    fn population_json_round_trip() {
        let (pop, _) = small_pop();
        let json = serde_json::to_string(&pop.to_json()).unwrap();
        let back = Population::from_json(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back.objects().len(), pop.objects().len());
        assert_eq!(back.frame(), pop.frame());
    }
}
