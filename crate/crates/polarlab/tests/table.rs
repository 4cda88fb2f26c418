use std::path::Path;

use polarlab::table::{fmt_f64, header, Table};
use polarlab::LabError;
use proptest::prelude::*;

fn sample() -> Table {
    let mut t = Table::new(
        header("kind = \"polarize\"\nn = 8"),
        &["index", "value", "label"],
    );
    t.push(vec!["0".into(), fmt_f64(0.1), "plain".into()]);
    t.push(vec!["1".into(), fmt_f64(-2.5e-300), "with, comma".into()]);
    t
}

#[test]
fn header_lines_come_first() {
    let text = sample().to_string();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# polarlab "));
    assert_eq!(lines[1], "# kind = \"polarize\"");
    assert_eq!(lines[2], "# n = 8");
    assert_eq!(lines[3], "index,value,label");
    assert_eq!(lines[5], "1,-2.5000000000000000e-300,\"with, comma\"");
}

#[test]
fn text_round_trips_byte_for_byte() {
    let t = sample();
    let text = t.to_string();
    let back = Table::parse(&text, Path::new("t.csv")).unwrap();
    assert_eq!(back, t);
    assert_eq!(back.to_string(), text);
    assert_eq!(back.floats("value").unwrap(), vec![0.1, -2.5e-300]);
}

#[test]
fn empty_and_tableless_files_are_missing_input() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "").unwrap();
    assert!(matches!(
        Table::read(&empty),
        Err(LabError::MissingInput(_))
    ));
    let only_header = dir.path().join("header.csv");
    std::fs::write(&only_header, "# polarlab 0\n").unwrap();
    assert!(matches!(
        Table::read(&only_header),
        Err(LabError::MissingInput(_))
    ));
}

#[test]
fn unknown_column_is_missing_input() {
    assert!(matches!(
        sample().floats("nope"),
        Err(LabError::MissingInput(_))
    ));
    assert!(matches!(
        sample().floats("label"),
        Err(LabError::MissingInput(_))
    ));
}

#[test]
fn files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("t.csv");
    sample().write(&p).unwrap();
    let first = std::fs::read(&p).unwrap();
    Table::read(&p).unwrap().write(&p).unwrap();
    assert_eq!(std::fs::read(&p).unwrap(), first);
}

proptest! {
    #[test]
    fn floats_survive_formatting(bits in any::<u64>()) {
        let x = f64::from_bits(bits);
        prop_assume!(x.is_finite());
        let back: f64 = fmt_f64(x).parse().unwrap();
        prop_assert_eq!(back.to_bits(), x.to_bits());
    }

    #[test]
    fn random_tables_round_trip(
        values in prop::collection::vec(prop::num::f64::NORMAL | prop::num::f64::ZERO, 0..40),
        comments in prop::collection::vec("[a-z =\"0-9]{0,12}", 0..4),
    ) {
        let mut t = Table::new(comments, &["i", "x"]);
        for (i, v) in values.iter().enumerate() {
            t.push(vec![i.to_string(), fmt_f64(*v)]);
        }
        let text = t.to_string();
        let back = Table::parse(&text, Path::new("r.csv")).unwrap();
        prop_assert_eq!(back.to_string(), text);
        let xs = back.floats("x").unwrap();
        for (a, b) in xs.iter().zip(&values) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}
