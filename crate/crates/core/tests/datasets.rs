use caratheodory::datasets::{load, synthetic, write_csv, DatasetSpec, InvalidRows};
use caratheodory::Error;

fn temp_path(name: &str) -> std::path::PathBuf {
    std::env::temp_dir().join(format!("caratheodory-{}-{name}", std::process::id()))
}

#[test]
fn csv_file_round_trip() {
    let (a, b) = synthetic::<f64>(50, 3, -1e6, 1e6, 51).unwrap();
    let path = temp_path("round.csv");
    write_csv(std::fs::File::create(&path).unwrap(), &a, &b, true).unwrap();
    let ds = load::<f64>(&DatasetSpec::csv(&path, vec![0, 1, 2], 3, true)).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(ds.a, a);
    assert_eq!(ds.b, b);
}

#[test]
fn f32_round_trip() {
    let (a, b) = synthetic::<f32>(30, 2, 0.0, 1000.0, 52).unwrap();
    let path = temp_path("round32.csv");
    write_csv(std::fs::File::create(&path).unwrap(), &a, &b, false).unwrap();
    let ds = load::<f32>(&DatasetSpec::csv(&path, vec![0, 1], 2, false)).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(ds.a, a);
    assert_eq!(ds.b, b);
}

#[test]
fn reordered_columns_and_dropped_rows() {
    let path = temp_path("mixed.csv");
    std::fs::write(&path, "y,x0,x1\n1.5,2,3\n,4,5\n2.5,6,7\n").unwrap();
    let mut spec = DatasetSpec::csv(&path, vec![2, 1], 0, true);
    assert!(matches!(load::<f64>(&spec), Err(Error::Parse { row: 2, col: 0, .. })));
    spec.invalid_rows = InvalidRows::Drop;
    let ds = load::<f64>(&spec).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(ds.dropped_rows, 1);
    assert_eq!(ds.a.row(1), &[7.0, 6.0]);
    assert_eq!(ds.b, vec![1.5, 2.5]);
}

#[test]
fn synthetic_spec_matches_generator() {
    let ds = load::<f64>(&DatasetSpec::synthetic(4, 2, 0.0, 1000.0, 9)).unwrap();
    let (a, b) = synthetic::<f64>(4, 2, 0.0, 1000.0, 9).unwrap();
    assert_eq!((ds.a, ds.b), (a, b));
}

#[test]
fn missing_file_is_an_io_error() {
    let spec = DatasetSpec::csv(temp_path("absent.csv"), vec![0], 1, false);
    assert!(matches!(load::<f64>(&spec), Err(Error::Io(_))));
}
