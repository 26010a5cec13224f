//! Golden-file tests for the two plain-text external formats: the bank
//! description and the pyramid dump. Regenerate with
//! `TPCTF_REGEN_GOLDEN=1 cargo test -p tpctf --test golden`.

use std::fs;
use std::path::PathBuf;

use ndarray::Array2;

use tpctf::filterbank::{build_spline_bank, tpctf6_bank, SplineVariant};
use tpctf::transform::{forward, TransformSpec};

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn check_or_regen(name: &str, actual: &str) {
    let path = golden_path(name);
    if std::env::var("TPCTF_REGEN_GOLDEN").is_ok() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, actual).unwrap();
        return;
    }
    let want = fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("missing golden {name} ({e}); run with TPCTF_REGEN_GOLDEN=1"));
    assert_eq!(want, actual, "golden {name} drifted");
}

#[test]
fn bank_descriptions_are_stable() {
    check_or_regen("tpctf6_bank.txt", &tpctf6_bank().describe());
    check_or_regen(
        "spline_linear_bank.txt",
        &build_spline_bank(SplineVariant::Linear).describe(),
    );
}

/// The dump format itself must stay parseable and numerically stable; the
/// values are compared at 1e-9 so last-ulp libm differences across
/// platforms cannot break the test.
#[test]
fn pyramid_dump_is_stable() {
    let n = 16usize;
    let image = Array2::from_shape_fn((n, n), |(i, j)| (i * n + j) as f64);
    let spec = TransformSpec::tpctf6(1);
    let pyr = forward(&image, &spec).unwrap();
    let dump = pyr.dump();

    let path = golden_path("pyramid_16x16.txt");
    if std::env::var("TPCTF_REGEN_GOLDEN").is_ok() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, &dump).unwrap();
        return;
    }
    let want = fs::read_to_string(&path).expect("missing golden pyramid_16x16.txt");

    let mut want_lines = want.lines();
    let mut got_lines = dump.lines();
    let mut line_no = 0usize;
    loop {
        line_no += 1;
        match (want_lines.next(), got_lines.next()) {
            (None, None) => break,
            (Some(w), Some(g)) => {
                let w_nums: Vec<f64> = w
                    .split_whitespace()
                    .filter_map(|t| t.parse::<f64>().ok())
                    .collect();
                if w_nums.len() == 2 && w.split_whitespace().count() == 2 {
                    let g_nums: Vec<f64> = g
                        .split_whitespace()
                        .map(|t| t.parse::<f64>().unwrap())
                        .collect();
                    assert_eq!(g_nums.len(), 2, "line {line_no}");
                    for (a, b) in w_nums.iter().zip(g_nums.iter()) {
                        assert!((a - b).abs() <= 1e-9, "line {line_no}: {a} vs {b}");
                    }
                } else {
                    assert_eq!(w, g, "line {line_no}");
                }
            }
            other => panic!("dump length mismatch at line {line_no}: {other:?}"),
        }
    }
}
