//! Shared worked-example fixtures used by the replication suite, the CLI
//! and the tests.

use crate::frame::Frame;
use crate::gamma::{build_gamma, DatasetTable};
use crate::population::{Labeling, PopObject, Population};
use crate::rational::Rat;

/// Five records over observable A and hidden D; a1/a3/a4 determine D,
/// a2 leaves {d2,d3} open.
pub fn table1() -> DatasetTable {
    let rows = [
        ("a1", "d1"),
        ("a2", "d2"),
        ("a2", "d3"),
        ("a3", "d3"),
        ("a4", "d1"),
    ];
    DatasetTable::new(
        vec!["A".into(), "D".into()],
        rows.iter()
            .map(|(a, d)| vec![a.to_string(), d.to_string()])
            .collect(),
    )
    .unwrap()
}

/// Twenty records adding an attribute B that varies independently of A and
/// predicts nothing about D.
pub fn table2() -> DatasetTable {
    let base = [
        ("a1", "d1"),
        ("a2", "d2"),
        ("a2", "d3"),
        ("a3", "d3"),
        ("a4", "d1"),
    ];
    let mut rows = Vec::new();
    for b in ["b1", "b2", "b3", "b4"] {
        for (a, d) in base {
            rows.push(vec![a.to_string(), b.to_string(), d.to_string()]);
        }
    }
    DatasetTable::new(vec!["A".into(), "B".into(), "D".into()], rows).unwrap()
}

/// The table-1 records as a weighted population: each row an object whose
/// true set-value is its Γ set, unit weight.
pub fn table1_population() -> (Population, Labeling) {
    let data = table1();
    let g = build_gamma(&data, "A", "D").unwrap();
    let frame = g.target_domain().clone();
    let objects: Vec<PopObject> = (1..=data.row_count())
        .map(|r| PopObject {
            id: format!("row{r}"),
            value: g.row_gamma(r).unwrap().clone(),
            weight: Rat::one(),
        })
        .collect();
    let pop = Population::new(frame, objects).unwrap();
    let l = Labeling::unlabeled(&pop);
    (pop, l)
}

/// Two-element weapon frame.
pub fn weapon_frame() -> Frame {
    Frame::from_names(["gun", "knife"]).unwrap()
}

/// Weapon × outcome product frame, elements (weapon, fate).
pub fn weapon_fate_frame() -> Frame {
    weapon_frame()
        .product(&Frame::from_names(["rescue", "let_die"]).unwrap())
        .unwrap()
}
