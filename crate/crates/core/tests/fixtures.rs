mod common;

use common::{alexander_from_diagram, load_table};
use gordian::{knot_determinant, realize};

#[test]
fn fixture_rows_match_their_diagrams() {
    let table = load_table("knots_le8.csv");
    assert!(table.errors.is_empty(), "{:?}", table.errors);
    assert_eq!(table.records.len(), 35);
    let mut bad = vec![];
    for rec in &table.records {
        let d = realize(&rec.dt).unwrap();
        let det = knot_determinant(&d);
        let alex = alexander_from_diagram(&d);
        let want = rec.alexander.as_ref().unwrap().normalize().unwrap();
        if Some(det) != rec.determinant_claimed || alex != want {
            bad.push(format!("{}: det {det} alexander {alex} (table {want})", rec.name));
        }
    }
    assert!(bad.is_empty(), "{}", bad.join("\n"));
}
