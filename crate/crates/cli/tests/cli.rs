use std::fs;
use std::process::{Command, Output};

fn qsteg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsteg"))
        .args(args)
        .env_remove("QSTEG_SEED")
        .env_remove("QSTEG_SAMPLES")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn field(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .to_string()
}

#[test]
fn encode_worked_example() {
    let out = qsteg(&["encode", "--value", "41", "--rank-mode", "--nbar", "0.56"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(field(&text, "codeword"), "10001100");
    assert_eq!(field(&text, "length"), "8");
    assert_eq!(field(&text, "zeros"), "5");
    assert_eq!(field(&text, "photon_positions"), "1,5,6");
    let photons: Vec<u64> = field(&text, "photons")
        .split(',')
        .map(|p| p.parse().unwrap())
        .collect();
    assert_eq!(photons.len(), 8);
    assert!(photons
        .iter()
        .zip("10001100".chars())
        .all(|(&n, c)| (n > 0) == (c == '1')));
}

#[test]
fn encode_zero_is_first_codeword() {
    let out = qsteg(&["encode", "--value", "0", "--nbar", "0.56", "--bits", "6"]);
    let text = stdout(&out);
    let word = field(&text, "codeword");
    let weight = word.chars().filter(|&c| c == '1').count();
    let expected = format!("{}{}", "0".repeat(word.len() - weight), "1".repeat(weight));
    assert_eq!(word, expected);
}

#[test]
fn decode_examples() {
    let text = stdout(&qsteg(&["decode", "--codeword", "10001100"]));
    assert_eq!(field(&text, "rank"), "41");
    let text = stdout(&qsteg(&["decode", "--codeword", "00000111"]));
    assert_eq!(field(&text, "rank"), "1");
    assert_eq!(field(&text, "value"), "0");
}

#[test]
fn encode_decode_round_trip() {
    for (value, nbar) in [
        ("0", "0.3"),
        ("1234567", "1.5"),
        ("0b1011", "0.56"),
        ("18446744073709551615", "4"),
    ] {
        let bits = if value.starts_with("0b") { 4 } else { 64 };
        let bits = bits.to_string();
        let enc = stdout(&qsteg(&[
            "encode", "--value", value, "--nbar", nbar, "--bits", &bits,
        ]));
        let word = field(&enc, "codeword");
        let dec = qsteg(&[
            "decode",
            "--codeword",
            &word,
            "--nbar",
            nbar,
            "--bits",
            &bits,
        ]);
        assert!(
            dec.status.success(),
            "{}",
            String::from_utf8_lossy(&dec.stderr)
        );
        let expected = match value.strip_prefix("0b") {
            Some(b) => u64::from_str_radix(b, 2).unwrap().to_string(),
            None => value.to_string(),
        };
        assert_eq!(field(&stdout(&dec), "value"), expected);
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(
        qsteg(&[
            "decode",
            "--codeword",
            "1000110",
            "--nbar",
            "0.56",
            "--bits",
            "6"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        qsteg(&["encode", "--value", "99", "--nbar", "1", "--bits", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(qsteg(&["figure", "fig2"]).status.code(), Some(2));
    assert_eq!(
        qsteg(&["figure", "fig1", "--nbar-grid", "1:0:0.1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        qsteg(&["encode", "--value", "1", "--nbar", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn figure_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = qsteg(&[
            "figure",
            "fig3",
            "--nbar-grid",
            "0.5:1.5:0.5",
            "--rc-grid",
            "0.3:0.5:0.1",
            "--samples",
            "5000",
            "--seed",
            "9",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    let lines: Vec<&str> = text.lines().collect();
    assert!(
        lines[0].starts_with("# ")
            && lines[0].contains("seed=9")
            && lines[0].contains("samples=5000")
    );
    assert_eq!(lines[1], "n_bar,r_c,p_err,std_err");
    assert_eq!(lines.len(), 2 + 3 * 3);
}

#[test]
fn seed_changes_simulated_figure() {
    let args = |seed: &'static str| {
        vec![
            "figure",
            "fig3",
            "--nbar-grid",
            "1",
            "--rc-grid",
            "0.4",
            "--samples",
            "2000",
            "--seed",
            seed,
        ]
    };
    assert_ne!(stdout(&qsteg(&args("1"))), stdout(&qsteg(&args("2"))));
}

#[test]
fn environment_overrides_flags() {
    let out = Command::new(env!("CARGO_BIN_EXE_qsteg"))
        .args([
            "figure",
            "fig3",
            "--nbar-grid",
            "1",
            "--rc-grid",
            "0.4",
            "--samples",
            "100",
        ])
        .env("QSTEG_SEED", "77")
        .output()
        .unwrap();
    assert!(stdout(&out).lines().next().unwrap().contains("seed=77"));
}

#[test]
fn json_output() {
    let out = qsteg(&[
        "figure",
        "fig7",
        "--nbar-grid",
        "0.5:1:0.5",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["metadata"]["figure"], "fig7");
    let records = v["records"].as_array().unwrap();
    assert_eq!(records.len(), 2);
    for r in records {
        let fock = r["fock_rate"].as_f64().unwrap();
        let hel = r["helstrom_rate"].as_f64().unwrap();
        let hom = r["homodyne_rate"].as_f64().unwrap();
        assert!(fock >= hel && hel >= hom, "{r}");
    }
}

#[test]
fn fig1_curves_increase_and_key_dominates() {
    let text = stdout(&qsteg(&["figure", "fig1", "--nbar-grid", "0.2:4:0.2"]));
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(2)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    for w in rows.windows(2) {
        assert!(w[1][2] > w[0][2] && w[1][4] > w[0][4]);
    }
    assert!(rows.iter().all(|r| r[4] >= r[2]));
}

#[test]
fn verify_suites_exit_codes() {
    let out = qsteg(&["verify", "codec"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(
        text.lines().all(|l| l.starts_with("[codec] PASS")),
        "{text}"
    );
    assert!(text.contains("56 strings"));
    let out = qsteg(&["verify", "trace-distance"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("closed/direct ratio"));
}
