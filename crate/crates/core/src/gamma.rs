//! Frequency-based compatibility mappings over tabular data.
//!
//! A Γ mapping sends each record to the set of target values that co-occur
//! with the record's observable value. The mass of a subset is the fraction
//! of records mapped to it. Restricting Γ to a condition set models
//! conditioning; the honesty audit detects records whose restricted set no
//! longer contains the true target value.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;

use crate::frame::{Frame, Subset};
use crate::mass::{MassFunction, ValidationMode};
use crate::rational::Rat;
use crate::Error;

/// Rectangular table of string-valued attributes, no missing cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DatasetTable {
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl DatasetTable {
    pub fn new(columns: Vec<String>, rows: Vec<Vec<String>>) -> Result<Self, Error> {
        if columns.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let mut seen = BTreeSet::new();
        for c in &columns {
            if !seen.insert(c.clone()) {
                return Err(Error::DuplicateAttribute(c.clone()));
            }
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != columns.len() {
                return Err(Error::RaggedRow(i + 1));
            }
            if row.iter().any(|cell| cell.is_empty()) {
                return Err(Error::MissingValue(i + 1));
            }
        }
        Ok(DatasetTable { columns, rows })
    }

    /// CSV ingestion: header row of attribute names, comma-separated UTF-8.
    pub fn from_csv(reader: impl Read) -> Result<Self, Error> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .from_reader(reader);
        let columns: Vec<String> = rdr
            .headers()
            .map_err(|e| Error::Csv(e.to_string()))?
            .iter()
            .map(|s| s.trim().to_string())
            .collect();
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| Error::Csv(e.to_string()))?;
            rows.push(rec.iter().map(|s| s.trim().to_string()).collect());
        }
        DatasetTable::new(columns, rows)
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn column_index(&self, name: &str) -> Result<usize, Error> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::UnknownAttribute(name.to_string()))
    }

    /// Cell value; `row` is 1-based to match tabular presentations.
    pub fn cell(&self, row: usize, col: usize) -> &str {
        &self.rows[row - 1][col]
    }
}

/// Per-record compatibility mapping Γ from an observable attribute to
/// subsets of the target attribute's domain. Row indices are 1-based.
#[derive(Clone, Debug)]
pub struct GammaMapping {
    pub observable: String,
    pub target: String,
    target_domain: Frame,
    map: BTreeMap<String, Subset>,
    per_row: BTreeMap<usize, Subset>,
}

impl GammaMapping {
    pub fn target_domain(&self) -> &Frame {
        &self.target_domain
    }

    /// Γ for an observable value, if any surviving row carries it.
    pub fn gamma_of(&self, observable_value: &str) -> Option<&Subset> {
        self.map.get(observable_value)
    }

    pub fn row_gamma(&self, row: usize) -> Option<&Subset> {
        self.per_row.get(&row)
    }

    pub fn row_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.per_row.keys().copied()
    }

    pub fn row_count(&self) -> usize {
        self.per_row.len()
    }
}

/// Build Γ from data: Γ(a) = set of target values co-occurring with
/// observable value a; each row gets Γ of its own observable value.
///
/// The target domain's element order is first appearance in the data.
pub fn build_gamma(
    data: &DatasetTable,
    observable: &str,
    target: &str,
) -> Result<GammaMapping, Error> {
    if data.row_count() == 0 {
        return Err(Error::EmptyDataset);
    }
    let obs_col = data.column_index(observable)?;
    let tgt_col = data.column_index(target)?;

    let mut domain_order: Vec<String> = Vec::new();
    for r in 1..=data.row_count() {
        let v = data.cell(r, tgt_col);
        if !domain_order.iter().any(|d| d == v) {
            domain_order.push(v.to_string());
        }
    }
    let frame = Frame::from_names(domain_order)?;

    let mut cooccur: BTreeMap<String, u32> = BTreeMap::new();
    for r in 1..=data.row_count() {
        let obs = data.cell(r, obs_col).to_string();
        let tgt = frame
            .subset_of_names([data.cell(r, tgt_col)])
            .expect("domain built from this column");
        *cooccur.entry(obs).or_insert(0) |= tgt.bits();
    }
    let map: BTreeMap<String, Subset> = cooccur
        .into_iter()
        .map(|(k, bits)| (k, frame.subset_from_bits(bits)))
        .collect();
    let per_row: BTreeMap<usize, Subset> = (1..=data.row_count())
        .map(|r| (r, map[data.cell(r, obs_col)].clone()))
        .collect();
    Ok(GammaMapping {
        observable: observable.to_string(),
        target: target.to_string(),
        target_domain: frame,
        map,
        per_row,
    })
}

/// Empirical mass: m(A) = |{ω : Γ(ω) = A}| / |rows|, exactly.
pub fn bpa_from_gamma(g: &GammaMapping) -> Result<MassFunction, Error> {
    let n = g.per_row.len();
    if n == 0 {
        return Err(Error::EmptyDataset);
    }
    let mut counts: BTreeMap<u32, i64> = BTreeMap::new();
    for s in g.per_row.values() {
        *counts.entry(s.bits()).or_insert(0) += 1;
    }
    let frame = g.target_domain.clone();
    let assignments: Vec<(Subset, Rat)> = counts
        .into_iter()
        .map(|(bits, c)| (frame.subset_from_bits(bits), Rat::new(c, n as i64)))
        .collect();
    MassFunction::make(&frame, assignments, ValidationMode::Strict)
}

/// Restrict Γ to a condition set: drop rows whose Γ misses C, intersect
/// the rest. Returns the restricted mapping and the surviving row indices.
pub fn condition_gamma(
    g: &GammaMapping,
    c: &Subset,
) -> Result<(GammaMapping, BTreeSet<usize>), Error> {
    if c.is_empty() {
        return Err(Error::EmptyLabel);
    }
    if !c.frame().same_frame(&g.target_domain) {
        return Err(Error::FrameMismatch);
    }
    let mut per_row = BTreeMap::new();
    for (&r, s) in &g.per_row {
        let inter = s.intersect(c);
        if !inter.is_empty() {
            per_row.insert(r, inter);
        }
    }
    if per_row.is_empty() {
        return Err(Error::NoSurvivors);
    }
    let map: BTreeMap<String, Subset> = g
        .map
        .iter()
        .filter_map(|(k, s)| {
            let inter = s.intersect(c);
            (!inter.is_empty()).then(|| (k.clone(), inter))
        })
        .collect();
    let survivors: BTreeSet<usize> = per_row.keys().copied().collect();
    Ok((
        GammaMapping {
            observable: g.observable.clone(),
            target: g.target.clone(),
            target_domain: g.target_domain.clone(),
            map,
            per_row,
        },
        survivors,
    ))
}

/// Rows whose actual target value is no longer inside their (possibly
/// restricted) Γ set. Fresh mappings never violate this.
pub fn audit_honesty(g: &GammaMapping, data: &DatasetTable) -> Result<Vec<usize>, Error> {
    let tgt_col = data.column_index(&g.target)?;
    let mut violations = Vec::new();
    for (&r, s) in &g.per_row {
        let actual = g
            .target_domain
            .subset_of_names([data.cell(r, tgt_col)])
            .map_err(|_| Error::UnknownAttribute(data.cell(r, tgt_col).to_string()))?;
        if s.intersect(&actual).is_empty() {
            violations.push(r);
        }
    }
    Ok(violations)
}

/// Verdicts on two mappings over the same rows: exact factorization of the
/// joint distribution of (Γ, Γ′), vacuity of each marginal, and whether
/// Dempster combination of the marginal bpas matches the bpa of the
/// pointwise intersection Γ″(ω) = Γ(ω)∩Γ′(ω).
#[derive(Clone, Debug)]
pub struct IndependenceReport {
    pub independent: bool,
    pub g1_vacuous: bool,
    pub g2_vacuous: bool,
    /// None when either side of the comparison is undefined (total
    /// conflict on one, no surviving intersection rows on the other).
    pub combination_matches: Option<bool>,
    pub rows: usize,
}

pub fn independence_report(
    g1: &GammaMapping,
    g2: &GammaMapping,
) -> Result<IndependenceReport, Error> {
    if !g1.target_domain.same_frame(&g2.target_domain) {
        return Err(Error::FrameMismatch);
    }
    let keys1: Vec<usize> = g1.per_row.keys().copied().collect();
    let keys2: Vec<usize> = g2.per_row.keys().copied().collect();
    if keys1 != keys2 {
        return Err(Error::RowMismatch);
    }
    let n = keys1.len() as i64;

    let mut joint: BTreeMap<(u32, u32), i64> = BTreeMap::new();
    let mut marg1: BTreeMap<u32, i64> = BTreeMap::new();
    let mut marg2: BTreeMap<u32, i64> = BTreeMap::new();
    for r in &keys1 {
        let a = g1.per_row[r].bits();
        let b = g2.per_row[r].bits();
        *joint.entry((a, b)).or_insert(0) += 1;
        *marg1.entry(a).or_insert(0) += 1;
        *marg2.entry(b).or_insert(0) += 1;
    }
    // Exact factorization: n·count(a,b) = count(a)·count(b) on the whole
    // support cross-product (absent pairs count 0).
    let mut independent = true;
    'outer: for (&a, &ca) in &marg1 {
        for (&b, &cb) in &marg2 {
            let cab = joint.get(&(a, b)).copied().unwrap_or(0);
            if n * cab != ca * cb {
                independent = false;
                break 'outer;
            }
        }
    }

    let full = g1.target_domain.full_bits();
    let g1_vacuous = marg1.len() == 1 && marg1.contains_key(&full);
    let g2_vacuous = marg2.len() == 1 && marg2.contains_key(&full);

    // bpa(g1) ⊕ bpa(g2) vs bpa of pointwise intersections.
    let m1 = bpa_from_gamma(g1)?;
    let m2 = bpa_from_gamma(g2)?;
    let combined = crate::combine::dempster_combine(&m1, &m2);
    let frame = g1.target_domain.clone();
    let mut inter_counts: BTreeMap<u32, i64> = BTreeMap::new();
    let mut surviving = 0i64;
    for r in &keys1 {
        let bits = g1.per_row[r].bits() & g2.per_row[r].bits();
        if bits != 0 {
            *inter_counts.entry(bits).or_insert(0) += 1;
            surviving += 1;
        }
    }
    let combination_matches = match (combined, surviving) {
        (Err(Error::TotalConflict(_)), 0) => None,
        (Err(e), _) => return Err(e),
        (Ok(_), 0) => Some(false),
        (Ok(r), _) => {
            let assignments: Vec<(Subset, Rat)> = inter_counts
                .into_iter()
                .map(|(bits, c)| (frame.subset_from_bits(bits), Rat::new(c, surviving)))
                .collect();
            let inter_mass =
                MassFunction::make(&frame, assignments, ValidationMode::Strict)?;
            Some(inter_mass == r.combined)
        }
    };

    Ok(IndependenceReport {
        independent,
        g1_vacuous,
        g2_vacuous,
        combination_matches,
        rows: n as usize,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn build_gamma_table1() {
        let data = fixtures::table1();
        let g = build_gamma(&data, "A", "D").unwrap();
        let f = g.target_domain().clone();
        assert_eq!(
            g.gamma_of("a1"),
            Some(&f.subset_of_names(["d1"]).unwrap())
        );
        assert_eq!(
            g.gamma_of("a2"),
            Some(&f.subset_of_names(["d2", "d3"]).unwrap())
        );
        assert_eq!(
            g.gamma_of("a3"),
            Some(&f.subset_of_names(["d3"]).unwrap())
        );
        assert_eq!(
            g.gamma_of("a4"),
            Some(&f.subset_of_names(["d1"]).unwrap())
        );
    }

    #[test]
    fn build_gamma_table2_vacuous_side() {
        let data = fixtures::table2();
        let g = build_gamma(&data, "B", "D").unwrap();
        let full = g.target_domain().full_set();
        for r in 1..=data.row_count() {
            assert_eq!(g.row_gamma(r), Some(&full));
        }
    }

    #[test]
    fn build_gamma_single_row() {
        let data =
            DatasetTable::new(vec!["A".into(), "D".into()], vec![vec!["a".into(), "d".into()]])
                .unwrap();
        let g = build_gamma(&data, "A", "D").unwrap();
        assert_eq!(g.gamma_of("a").unwrap().len(), 1);
    }

    #[test]
    fn build_gamma_errors() {
        let data = fixtures::table1();
        assert!(matches!(
            build_gamma(&data, "Z", "D"),
            Err(Error::UnknownAttribute(_))
        ));
        let empty = DatasetTable::new(vec!["A".into(), "D".into()], vec![]).unwrap();
        assert!(matches!(
            build_gamma(&empty, "A", "D"),
            Err(Error::EmptyDataset)
        ));
    }

    #[test]
    fn bpa_table1() {
        let g = build_gamma(&fixtures::table1(), "A", "D").unwrap();
        let m = bpa_from_gamma(&g).unwrap();
        let f = g.target_domain().clone();
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
    fn bpa_table2_gamma_prime_vacuous() {
        let g = build_gamma(&fixtures::table2(), "B", "D").unwrap();
        assert!(bpa_from_gamma(&g).unwrap().is_vacuous());
    }

    #[test]
    fn bpa_identical_rows() {
        let rows = vec![vec!["a".into(), "d".into()]; 4];
        let data = DatasetTable::new(vec!["A".into(), "D".into()], rows).unwrap();
        let g = build_gamma(&data, "A", "D").unwrap();
        let m = bpa_from_gamma(&g).unwrap();
        assert_eq!(m.focal_count(), 1);
        let (s, v) = m.focals().next().map(|(s, v)| (s, v.clone())).unwrap();
        assert_eq!(s.len(), 1);
        assert!(v.is_one());
    }

    #[test]
    fn condition_gamma_table4() {
        let g = build_gamma(&fixtures::table1(), "A", "D").unwrap();
        let f = g.target_domain().clone();
        let c = f.subset_of_names(["d1", "d2"]).unwrap();
        let (g2, survivors) = condition_gamma(&g, &c).unwrap();
        assert_eq!(survivors, BTreeSet::from([1, 2, 3, 5]));
        let d1 = f.subset_of_names(["d1"]).unwrap();
        let d2 = f.subset_of_names(["d2"]).unwrap();
        assert_eq!(g2.row_gamma(1), Some(&d1));
        assert_eq!(g2.row_gamma(2), Some(&d2));
        assert_eq!(g2.row_gamma(3), Some(&d2));
        assert_eq!(g2.row_gamma(5), Some(&d1));
    }

    #[test]
    fn condition_gamma_full_and_singleton() {
        let g = build_gamma(&fixtures::table1(), "A", "D").unwrap();
        let f = g.target_domain().clone();
        let (g_full, survivors) = condition_gamma(&g, &f.full_set()).unwrap();
        assert_eq!(survivors.len(), 5);
        for r in 1..=5 {
            assert_eq!(g_full.row_gamma(r), g.row_gamma(r));
        }

        let (g_d2, survivors) = condition_gamma(&g, &f.subset_of_names(["d2"]).unwrap()).unwrap();
        assert_eq!(survivors, BTreeSet::from([2, 3]));
        let m = bpa_from_gamma(&g_d2).unwrap();
        assert_eq!(
            m.mass(&f.subset_of_names(["d2"]).unwrap()).unwrap(),
            Rat::one()
        );
    }

    #[test]
    fn audit_flags_row3_after_restriction() {
        let data = fixtures::table1();
        let g = build_gamma(&data, "A", "D").unwrap();
        let f = g.target_domain().clone();
        assert!(audit_honesty(&g, &data).unwrap().is_empty());

        let (g2, _) = condition_gamma(&g, &f.subset_of_names(["d1", "d2"]).unwrap()).unwrap();
        assert_eq!(audit_honesty(&g2, &data).unwrap(), vec![3]);

        let (g3, _) = condition_gamma(&g, &f.full_set()).unwrap();
        assert!(audit_honesty(&g3, &data).unwrap().is_empty());
    }

    #[test]
    fn independence_table2() {
        let data = fixtures::table2();
        let g1 = build_gamma(&data, "A", "D").unwrap();
        let g2 = build_gamma(&data, "B", "D").unwrap();
        let r = independence_report(&g1, &g2).unwrap();
        assert!(r.independent);
        assert!(!r.g1_vacuous);
        assert!(r.g2_vacuous);
        assert_eq!(r.combination_matches, Some(true));
    }

    #[test]
    fn self_dependence() {
        let g = build_gamma(&fixtures::table1(), "A", "D").unwrap();
        let r = independence_report(&g, &g).unwrap();
        assert!(!r.independent);
    }

    #[test]
    fn csv_round_trip_and_missing_cell() {
        let csv = "A,D\na1,d1\na2,d2\n";
        let data = DatasetTable::from_csv(csv.as_bytes()).unwrap();
        assert_eq!(data.row_count(), 2);
        assert_eq!(data.cell(2, 1), "d2");

        let bad = "A,D\na1\n";
        assert!(DatasetTable::from_csv(bad.as_bytes()).is_err());
    }
}
