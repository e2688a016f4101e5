//! Fixture commands shared by the golden-file tests and the acceptance run.

#![allow(dead_code)]

use std::path::{Path, PathBuf};

pub fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

pub fn golden_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Runs the command line with no seed in the environment.
pub fn call(args: &[String]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("dirichlet-ruc".to_string()).chain(args.iter().cloned());
    let code = dirichlet_ruc_cli::run_with(argv, None, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

/// `(golden file, arguments)`; `@name` expands to a fixture path.
pub const CASES: &[(&str, &str)] = &[
    ("bohr_factorize.csv", "bohr factorize 12 1 63 360"),
    ("bohr_index.csv", "bohr index 0 2 0 1"),
    ("bohr_primes.csv", "bohr primes 30"),
    ("bohr_ap.json", "--format json bohr ap --length 10 --bound 3000"),
    ("norm_hilbert4.csv", "norm --p 2 --input @hilbert4.json"),
    ("norm_function.json", "--format json norm --input @function_l1.json --seed 7"),
    ("circle_norm.csv", "circle-norm --p 1 --input @sup_summing.json"),
    ("rad_norm.csv", "rad-norm --input @sup_summing.json"),
    ("hprad_norm.csv", "hprad-norm --input @sup_summing.json --seed 7"),
    ("ruc_ratio.csv", "ruc-ratio --input @sup_summing.json --seed 7"),
    ("rud_ratio.json", "--format json ruc-ratio --rud --p 1 --input @sup_summing.json --seed 7 --samples 2000"),
    ("ruc_search.csv", "ruc-search --input @sup_summing.json --restarts 2 --iterations 2 --seed 7 --samples 1000"),
    ("type_witness.csv", "type-witness --input @l1_basis.json"),
    ("cotype_witness.csv", "cotype-witness --input @sup_basis.json"),
    ("experiment_prime_ap.csv", "experiment prime-ap --lengths 3..10 --bound 3000 --seed 7"),
    ("experiment_lacunary.csv", "experiment lacunary"),
    ("experiment_summing.csv", "experiment summing --lengths 1..4 --seed 7 --samples 5000"),
    ("experiment_summing_input.csv", "experiment summing --input @summing_scalar.json"),
    ("experiment_kernel.json", "--format json experiment kernel --ns 8,16,32,64"),
];

pub fn expand(args: &str) -> Vec<String> {
    args.split_whitespace()
        .map(|a| match a.strip_prefix('@') {
            Some(name) => fixture(name),
            None => a.to_string(),
        })
        .collect()
}

pub const MALFORMED: &[(&str, &str)] = &[
    ("bad_duplicate.json", "/terms/2/n"),
    ("bad_complex.json", "/terms/0/x/1"),
    ("bad_exponent.json", "/space/r"),
];
