use std::fs;
use std::path::Path;

use moduli::quadforms::{ClassNumberTable, Discriminant};
use moduli::tables::{
    default_data_dir, real_genus_field, DataTables, DEFAULT_SCAN_CAP, H_MAXIMA_FILE,
    TABLE_2_1_FILE, TABLE_4_1_FILE,
};
use moduli::Error;

fn copy_data(to: &Path) {
    for f in [TABLE_2_1_FILE, TABLE_4_1_FILE, H_MAXIMA_FILE] {
        fs::copy(default_data_dir().join(f), to.join(f)).unwrap();
    }
}

#[test]
fn bundled_tables_load() {
    let t = DataTables::load(&default_data_dir()).unwrap();
    assert_eq!(t.table_2_1.len(), 101);
    assert_eq!(t.table_4_1.len(), 11);
    assert_eq!(t.h_maxima.max_abs(1).unwrap(), 163);
    assert_eq!(t.h_maxima.max_abs(2).unwrap(), 427);
    assert_eq!(t.h_maxima.max_abs(3).unwrap(), 907);
    assert_eq!(t.h_maxima.max_abs(13).unwrap(), 20563);
    assert!(t.h_maxima.max_abs(33).is_err());
    assert!(t.is_in_table_2_1(Discriminant::new(-5460).unwrap()));
    assert!(!t.is_in_table_2_1(Discriminant::new(-23).unwrap()));
}

#[test]
fn regeneration_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    DataTables::generate(&ClassNumberTable::scan(DEFAULT_SCAN_CAP))
        .write(dir.path())
        .unwrap();
    for f in [TABLE_2_1_FILE, TABLE_4_1_FILE, H_MAXIMA_FILE] {
        assert_eq!(
            fs::read(dir.path().join(f)).unwrap(),
            fs::read(default_data_dir().join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn corrupted_table_fails_checksum() {
    let dir = tempfile::tempdir().unwrap();
    copy_data(dir.path());
    let path = dir.path().join(TABLE_2_1_FILE);
    let body = fs::read_to_string(&path)
        .unwrap()
        .replacen("-5460", "-5461", 1);
    fs::write(&path, body).unwrap();
    match DataTables::load(dir.path()) {
        Err(Error::Checksum { path: p, .. }) => assert!(p.ends_with(TABLE_2_1_FILE)),
        other => panic!("expected checksum failure, got {other:?}"),
    }
}

#[test]
fn missing_table_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    copy_data(dir.path());
    fs::remove_file(dir.path().join(H_MAXIMA_FILE)).unwrap();
    assert!(matches!(
        DataTables::load(dir.path()),
        Err(Error::Io { .. })
    ));
}

#[test]
fn largest_two_elementary_discriminant() {
    let t = DataTables::load(&default_data_dir()).unwrap();
    let max = t.table_2_1.iter().map(|r| r.disc.abs()).max().unwrap();
    assert_eq!(max, 7392);
    let row = t.table_2_1.iter().find(|r| r.disc.abs() == 5460).unwrap();
    assert_eq!(row.class_number, 16);
    assert_eq!(real_genus_field(row.disc).basis().len(), 4);
    assert_eq!(row.field.label(), "3,5,7,13");
}
