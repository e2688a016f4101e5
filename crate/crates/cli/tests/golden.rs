//! Byte-for-byte comparison against tests/golden; set UPDATE_GOLDEN=1 to
//! rewrite the files.

mod common;

use common::{call, expand, golden_path, CASES};

#[test]
fn outputs_match_golden_files() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut failures = Vec::new();
    for (name, args) in CASES {
        let (code, out, err) = call(&expand(args));
        assert_eq!(code, 0, "{args}: {err}");
        let path = golden_path(name);
        if update {
            std::fs::write(&path, &out).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        if want != out {
            failures.push(format!("{name}:\n--- expected\n{want}--- got\n{out}"));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn reruns_are_identical() {
    for (_, args) in CASES.iter().filter(|(n, _)| n.contains("ratio") || n.contains("summing")) {
        let a = call(&expand(args));
        let b = call(&expand(args));
        assert_eq!(a, b, "{args}");
    }
}

#[test]
fn thread_count_does_not_change_output() {
    for (_, args) in CASES.iter().filter(|(n, _)| n.starts_with("ruc") || n.starts_with("hprad")) {
        let mut one = expand(args);
        one.extend(["--threads".into(), "1".into()]);
        let mut three = expand(args);
        three.extend(["--threads".into(), "3".into()]);
        assert_eq!(call(&one).1, call(&three).1, "{args}");
    }
}
