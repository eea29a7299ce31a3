//! Regenerates the JSON fixtures under `fixtures/`.
//!
//!     cargo run -p phasemat --example gen_fixtures

#[path = "../tests/common/mod.rs"]
mod common;

use std::path::Path;

use num_complex::Complex64;
use phasemat::canonical::canonicalize;
use phasemat::json::{MatrixDoc, PhirotopeDoc};
use phasemat::{ComplexMatrix, Phase, Phirotope};

use common::{oracle_canonical_matrix, ph, random_matrix, rng, TOL};

pub const REALIZABLE_SEED: u64 = 20_241_017;

fn write(dir: &Path, name: &str, value: &impl serde::Serialize) {
    let mut text = serde_json::to_string_pretty(value).unwrap();
    text.push('\n');
    std::fs::write(dir.join(name), text).unwrap();
    println!("wrote {name}");
}

fn lex_phirotope(n: usize, r: usize, values: &[Option<f64>]) -> Phirotope {
    let v = values.iter().map(|x| x.map_or(Phase::ZERO, ph)).collect();
    Phirotope::new_unchecked(n, r, v, TOL).unwrap()
}

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    std::fs::create_dir_all(&dir).unwrap();

    let polar = |r: f64, x: f64| Complex64::from_polar(r, x * std::f64::consts::PI);
    let c = |re: f64| Complex64::new(re, 0.0);
    let runex = ComplexMatrix::from_rows(&[
        vec![c(1.), c(0.), c(0.), polar(0.5, 0.25), polar(1. / 3., 0.5)],
        vec![c(0.), c(1.), c(0.), c(1.), polar(4. / 3., 0.25)],
        vec![c(0.), c(0.), c(1.), c(0.), c(-1.)],
    ])
    .unwrap();
    let mut runex_doc = MatrixDoc::from(&runex);
    // exact angles instead of atan2 round-off
    runex_doc.entries[0][3].as_mut().unwrap().angle_over_pi = 0.25;
    runex_doc.entries[0][4].as_mut().unwrap().angle_over_pi = 0.5;
    runex_doc.entries[1][4].as_mut().unwrap().angle_over_pi = 0.25;
    write(&dir, "runex_matrix.json", &runex_doc);

    // values on 3-subsets of 1..=5 in lexicographic order
    let runex_phi = lex_phirotope(
        5,
        3,
        &[
            Some(0.0),
            None,
            Some(1.0),
            Some(1.0),
            Some(1.25),
            Some(1.0),
            Some(0.25),
            Some(0.5),
            Some(0.25),
            Some(0.5),
        ],
    );
    write(&dir, "runex_phirotope.json", &PhirotopeDoc::from(&runex_phi));

    let nonreal = lex_phirotope(
        5,
        2,
        &[
            Some(0.0),
            Some(0.0),
            Some(0.0),
            Some(0.0),
            Some(1.0),
            Some(1.5),
            Some(4.0 / 3.0),
            Some(1.75),
            Some(5.0 / 3.0),
            Some(5.0 / 6.0),
        ],
    );
    write(&dir, "nonreal2ex_phirotope.json", &PhirotopeDoc::from(&nonreal));

    // all ones except φ(3, 4) = i on four elements
    let corrupted = lex_phirotope(
        4,
        2,
        &[Some(0.0), Some(0.0), Some(0.0), Some(0.0), Some(0.0), Some(0.5)],
    );
    write(&dir, "corrupted_phirotope.json", &PhirotopeDoc::from(&corrupted));

    let mut g = rng(REALIZABLE_SEED);
    let (m, phi) = loop {
        let m = random_matrix(&mut g, 3, 6);
        let phi = Phirotope::from_matrix(&m, TOL).unwrap();
        let canonical = canonicalize(&phi).unwrap().canonical;
        if phi.is_uniform() && canonical.values().iter().any(|v| !v.is_real(TOL)) {
            break (m, phi);
        }
    };
    let (canonical, expected) = oracle_canonical_matrix(&m, TOL);
    write(&dir, "realizable_rank3_phirotope.json", &PhirotopeDoc::from(&phi));
    write(&dir, "realizable_rank3_canonical.json", &PhirotopeDoc::from(&canonical));
    write(
        &dir,
        "realizable_rank3_expected_matrix.json",
        &MatrixDoc::from(&expected),
    );
    write(
        &dir,
        "realizable_rank3_verify.json",
        &serde_json::json!({
            "phirotope": PhirotopeDoc::from(&canonical),
            "matrix": MatrixDoc::from(&expected),
        }),
    );
}
