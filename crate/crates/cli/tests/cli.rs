use std::process::{Command, Output};

fn invbraid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_invbraid"))
        .args(args)
        .output()
        .unwrap()
}

#[test]
fn verify_exit_codes() {
    assert_eq!(
        invbraid(&["verify", "--type", "A", "--rank", "3"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        invbraid(&[
            "verify",
            "--type",
            "A",
            "--rank",
            "3",
            "--twist",
            "reverse",
            "--relations",
            "hat"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(
        invbraid(&["verify", "--type", "~A", "--rank", "2"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        invbraid(&["verify", "--type", "Q", "--rank", "2"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn forest_rejects_commuting_pair() {
    assert_eq!(
        invbraid(&["forest", "--type", "A", "--rank", "3", "--pair", "1,3"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn span_output_is_byte_identical() {
    let args = ["span", "--type", "B", "--rank", "3", "--jobs", "2"];
    let a = invbraid(&args);
    let b = invbraid(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], "invbraid.span");
    assert_eq!(v["perfectly_braided"], false);
}
