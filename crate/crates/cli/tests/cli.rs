use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn swcc(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_swcc"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const POLARITY: &[&str] = &["--scheme", "polarity", "--n", "21", "--ell", "7", "--a", "3"];
const W: &[&str] = &["--scheme", "w", "--n", "16", "--ell", "10", "--a", "1", "--b", "9"];
const W_ECC: &[&str] = &[
    "--scheme", "w-ecc", "--n", "32", "--ell", "16", "--a", "1", "--b", "15", "--inner-a", "2", "--inner-b", "14",
];

fn with(cmd: &str, params: &[&str]) -> Vec<String> {
    std::iter::once(cmd).chain(params.iter().copied()).map(str::to_owned).collect()
}

fn run(args: &[String], stdin: &str) -> Output {
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    swcc(&args, stdin)
}

#[test]
fn polarity_example() {
    let o = run(&with("encode", POLARITY), "110000011001111100\n");
    assert!(o.status.success());
    assert_eq!(stdout(&o), "001111101100101111000\n");
    let o = run(&with("decode", POLARITY), "001111101100101111000\n");
    assert_eq!(stdout(&o), "110000011001111100\n");
}

#[test]
fn empty_input_gives_empty_output() {
    let o = run(&with("encode", W), "");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "");
}

#[test]
fn malformed_line_exits_2_with_line_number() {
    let o = run(&with("encode", W), "000000000000000\n000000000000200\n");
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let o = run(&with("encode", W), "0000\n");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn infeasible_parameters_exit_1_naming_the_check() {
    let o = swcc(&["encode", "--scheme", "w", "--n", "16", "--ell", "10", "--a", "2", "--b", "8"], "");
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("window capacity"));
    let o = swcc(&["count", "--n", "12", "--ell", "4", "--a", "3", "--b", "1"], "");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn missing_input_file_exits_3() {
    let o = swcc(&["encode", "--scheme", "w", "--n", "16", "--ell", "10", "--a", "1", "--b", "9", "-i", "/nonexistent/in"], "");
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn undecodable_lines_exit_4_and_keep_alignment() {
    let bad = "1100000000000000\n";
    let good = run(&with("encode", W), "010101010101010\n");
    let input = format!("{bad}{}", stdout(&good));
    let o = run(&with("decode", W), &input);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(stdout(&o), "\n010101010101010\n");
    let mut strict = with("decode", W);
    strict.push("--strict".into());
    let o = run(&strict, &input);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(stdout(&o), "");
}

#[test]
fn budget_exceeded_exits_5() {
    let o = swcc(&["enumerate", "--n", "30", "--ell", "4", "--a", "1", "--b", "3", "--budget", "1024"], "");
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn count_table_and_json() {
    let o = swcc(&["count", "--n", "12", "--ell", "4", "--a", "1", "--b", "3", "--mode", "subblock"], "");
    assert!(o.status.success());
    assert!(stdout(&o).contains("2744"));
    let o = swcc(&["count", "--n", "12", "--ell", "4", "--a", "1", "--b", "3", "--json"], "");
    let rows: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rows[0]["count"], "2744");
    assert_eq!(rows[1]["class"], "W");
}

#[test]
fn enumerate_lists_balanced_words() {
    let o = swcc(&["enumerate", "--n", "6", "--ell", "6", "--a", "3", "--b", "3"], "");
    assert!(o.status.success());
    let text = stdout(&o);
    let words: Vec<&str> = text.lines().collect();
    assert_eq!(words.len(), 20);
    assert_eq!(words[0], "000111");
    assert_eq!(words[19], "111000");
}

#[test]
fn verify_bounds_reports_holds() {
    let o = swcc(&["verify-bounds", "--n", "16", "--ell", "10", "--a", "1", "--b", "9"], "");
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("bound                 holds"));
    assert!(text.contains("sufficient condition not met"));
}

#[test]
fn profile_flags() {
    let o = swcc(&["rate", "--scheme", "s-prime", "--n", "24", "--ell", "12", "--p1", "1/4", "--p2", "3/4", "--json"], "");
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["payload_len"], 16);
    assert_eq!(r["verified"], r["samples"]);
}

#[test]
fn corrupt_then_decode_w_ecc() {
    let dir = tempfile::tempdir().unwrap();
    let payload = "0110100110010110011010011001011\n".repeat(5);
    let code = stdout(&run(&with("encode", W_ECC), &payload));
    let code_path = dir.path().join("code");
    fs::write(&code_path, &code).unwrap();
    let bad_path = dir.path().join("bad");
    let mut args = with("corrupt", W_ECC);
    args.extend(["--seed", "7", "-i"].map(str::to_owned));
    args.push(code_path.to_string_lossy().into_owned());
    args.push("-o".into());
    args.push(bad_path.to_string_lossy().into_owned());
    assert!(run(&args, "").status.success());

    let flips = fs::read_to_string(Path::new(&format!("{}.flips", bad_path.display()))).unwrap();
    assert_eq!(flips.lines().count(), 5);
    for line in flips.lines() {
        let positions: Vec<usize> = line.split_whitespace().map(|p| p.parse().unwrap()).collect();
        // at most one flip per 26-bit block
        let mut blocks: Vec<usize> = positions.iter().map(|p| (p - 1) / 26).collect();
        blocks.dedup();
        assert_eq!(blocks.len(), positions.len());
    }

    let o = run(&with("decode", W_ECC), &fs::read_to_string(&bad_path).unwrap());
    assert!(o.status.success());
    assert_eq!(stdout(&o), payload);
    assert!(String::from_utf8_lossy(&o.stderr).contains("correction"));
}

#[test]
fn corrupt_rate_zero_is_identity() {
    let code = stdout(&run(&with("encode", W), "000000000000000\n111111111111111\n"));
    let mut args = with("corrupt", W);
    args.extend(["--rate", "0", "--flips", "/dev/null"].map(str::to_owned));
    let o = run(&args, &code);
    assert_eq!(stdout(&o), code);
}

#[test]
fn every_scheme_pipes_to_identity() {
    let cases: &[(&[&str], usize)] = &[
        (&["--scheme", "s", "--n", "32", "--ell", "16", "--p1", "1/3", "--p2", "2/3"], 24),
        (&["--scheme", "s-prime", "--n", "24", "--ell", "12", "--p1", "1/4", "--p2", "3/4"], 16),
        (POLARITY, 18),
        (W, 15),
        (&["--scheme", "s-ecc", "--n", "24", "--ell", "24", "--p1", "1/4", "--p2", "3/4"], 8),
        (W_ECC, 31),
    ];
    for (params, k) in cases {
        let input: String = (0..8u32)
            .map(|i| (0..*k).map(|j| if (i * 7 + j as u32 * 3) % 5 < 2 { '1' } else { '0' }).collect::<String>() + "\n")
            .collect();
        let code = run(&with("encode", params), &input);
        assert!(code.status.success(), "{params:?}: {}", String::from_utf8_lossy(&code.stderr));
        let back = run(&with("decode", params), &stdout(&code));
        assert_eq!(stdout(&back), input, "{params:?}");
    }
}
