use serde_json::Value;
use solvtwist_cli::{run_with_env, EXIT_CONVERGENCE, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE};

struct Output {
    code: i32,
    out: String,
    err: String,
}

fn call_env(args: &[&str], env_tol: Option<&str>) -> Output {
    let argv: Vec<String> = std::iter::once("solvtwist").chain(args.iter().copied()).map(String::from).collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with_env(&argv, env_tol, &mut out, &mut err);
    Output { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn call(args: &[&str]) -> Output {
    call_env(args, None)
}

fn json(args: &[&str]) -> Value {
    let o = call(args);
    assert_eq!(o.code, EXIT_OK, "{}", o.err);
    serde_json::from_str(&o.out).unwrap()
}

#[test]
fn balance_json() {
    let o = call(&["balance", "--tau", "11", "--json"]);
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(o.out, "{\"m0\":\"sqrt(10)\",\"h\":0.909223229616,\"r\":6,\"qc_norm\":0.948683298051}\n");
    let o = call(&["--precision", "6", "balance", "--tau", "9", "--json"]);
    assert_eq!(o.out, "{\"m0\":\"sqrt(5)\",\"h\":0.721818,\"r\":4,\"qc_norm\":0.894427}\n");
}

#[test]
fn bound_json_keys_and_values() {
    let v = json(&["bound", "--teich", "3.737118", "--chi", "-2", "--tau", "11", "--json"]);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        ["linch", "twisted_safe", "twisted_constructed", "twistbound_rho", "normalized", "volume_upper", "params"]
    );
    assert_eq!(v["twisted_safe"].as_f64().unwrap(), 43.4891705019);
    assert_eq!(v["twisted_constructed"].as_f64().unwrap(), 38.0694157577);
    assert_eq!(v["params"]["h_min"].as_f64().unwrap(), 0.783399618486);
    assert_eq!(v["params"]["tau"], 11);
    let v = json(&["bound", "--teich", "3.737118", "--chi", "-2", "--tau", "11", "--rho", "1.1", "--json"]);
    assert_eq!(v["twistbound_rho"].as_f64().unwrap(), 45.4190322312);
}

#[test]
fn hypothesis_and_domain_errors_exit_2() {
    let o = call(&["bound", "--teich", "1", "--chi", "-2", "--tau", "8"]);
    assert_eq!(o.code, EXIT_DOMAIN);
    assert!(o.err.contains("requires tau_alpha >= 9"), "{}", o.err);
    assert!(o.out.is_empty());
    assert_eq!(call(&["bound", "--teich", "1", "--chi", "1", "--tau", "11"]).code, EXIT_DOMAIN);
    assert_eq!(call(&["balance", "--tau", "3"]).code, EXIT_DOMAIN);
    assert_eq!(call(&["dilatation", "--matrix", "1,1,0,1"]).code, EXIT_DOMAIN);
    assert_eq!(call(&["surger", "--k", "1", "--curve", "beta"]).code, EXIT_DOMAIN);
    assert_eq!(call(&["family", "--kind", "glued", "--rho", "0.5"]).code, EXIT_DOMAIN);
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(call(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(call(&["balance"]).code, EXIT_USAGE);
    assert_eq!(call(&["balance", "--tau", "11", "--bogus"]).code, EXIT_USAGE);
    assert_eq!(call(&["reproduce", "c99"]).code, EXIT_USAGE);
    assert_eq!(call(&["--budget", "999", "balance", "--tau", "11"]).code, EXIT_USAGE);
    assert_eq!(call(&["--tol", "0", "area", "--modulus", "1"]).code, EXIT_USAGE);
    assert_eq!(call(&["dilatation", "--matrix", "1,2,3"]).code, EXIT_USAGE);
    assert_eq!(call_env(&["area", "--modulus", "1"], Some("abc")).code, EXIT_USAGE);
    let help = call(&["--help"]);
    assert_eq!(help.code, EXIT_OK);
    assert!(help.out.contains("reproduce"));
}

#[test]
fn convergence_failure_exits_3() {
    let o = call(&["--tol", "1e-300", "--budget", "1000", "area", "--modulus", "1"]);
    assert_eq!(o.code, EXIT_CONVERGENCE, "{}", o.err);
    assert!(o.err.contains("did not converge"));
}

#[test]
fn area_matches_closed_form() {
    let v = json(&["area", "--modulus", "2"]);
    assert!(v["abs_err"].as_f64().unwrap() < 1e-9);
    assert_eq!(v["closed"].to_string(), "1.57079632679");
    let v = json(&["area", "--modulus", "1", "--fraction", "0.3333333333333333"]);
    assert!((v["closed"].as_f64().unwrap() - 1.813_799_364_234_218).abs() < 1e-9);
}

#[test]
fn env_tolerance_is_used_and_flag_wins() {
    let args = ["area", "--modulus", "1", "--fraction", "0.9"];
    let loose = call_env(&args, Some("1e-2"));
    let tight = call_env(&args, Some("1e-12"));
    assert_eq!(loose.code, EXIT_OK);
    assert_ne!(loose.out, tight.out);
    let flagged = call_env(&["--tol", "1e-12", "area", "--modulus", "1", "--fraction", "0.9"], Some("1e-2"));
    assert_eq!(flagged.out, tight.out);
}

#[test]
fn family_csv() {
    let o = call(&["family", "--kind", "repar", "--h", "0.5", "--samples", "10"]);
    assert_eq!(o.code, EXIT_OK);
    let lines: Vec<&str> = o.out.lines().collect();
    assert_eq!(lines[0], "s,integrand,sqrt_integrand");
    assert_eq!(lines.len(), 12);
    let expected = 8.0 * std::f64::consts::PI / 0.25;
    for line in &lines[1..] {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert!((cols[1] - expected).abs() < 1e-9 * expected);
        assert!((cols[2] * cols[2] - cols[1]).abs() < 1e-8 * expected);
    }
    for kind in ["pinch", "twist", "glued"] {
        let o = call(&["family", "--kind", kind, "--samples", "50"]);
        assert_eq!(o.code, EXIT_OK, "{kind}: {}", o.err);
        assert_eq!(o.out.lines().count(), 52);
    }
    let o = call(&["family", "--kind", "glued", "--k", "-4", "--h", "0.909316", "--rho", "1.1", "--samples", "200"]);
    let ceiling = 8.0 * 1.1 * std::f64::consts::PI / (0.909316f64 * 0.909316);
    for line in o.out.lines().skip(1) {
        let v: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!(v <= ceiling * (1.0 + 1e-11));
    }
}

#[test]
fn surger_words() {
    assert_eq!(call(&["surger", "--k", "6"]).out, "phi\n");
    assert_eq!(call(&["surger", "--k", "9", "--curve", "alpha"]).out, "T_alpha^3 phi\n");
    assert_eq!(call(&["surger", "--k", "-1"]).out, "T_alpha^-7 phi\n");
}

#[test]
fn surger_from_file() {
    let dir = std::env::temp_dir().join(format!("solvtwist-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("torus.json");
    std::fs::write(
        &path,
        r#"{"fiber_chi":-4,"curves":[{"label":"gamma","tau":9}],"teich_length":2.0,"monodromy":[{"label":"gamma","power":1}]}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let o = call(&["surger", "--k", "4", "--curve", "gamma", "--torus", p]);
    assert_eq!(o.out, "T_gamma phi\n", "{}", o.err);
    std::fs::write(&path, "{not json").unwrap();
    assert_eq!(call(&["surger", "--k", "4", "--torus", p]).code, EXIT_DOMAIN);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn dilatation_default_is_genus2_matrix() {
    let v = json(&["dilatation", "--json"]);
    assert_eq!(v["lambda"], "21 + 2*sqrt(110)");
    assert_eq!(v["trace"], "42");
    assert_eq!(v["lambda_float"].as_f64().unwrap(), 41.9761769634);
    assert_eq!(v["expanding_slope"], "-10 + sqrt(110)");
}

#[test]
fn reproduce_table() {
    let o = call(&["reproduce", "c57"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.out.contains("PASS 4 ln(lambda) <= 14.95: 14.9484089688"));
    assert!(o.out.contains("PASS sqrt(c) * 4 ln(lambda) <= 124"));
    assert!(!o.out.contains("FAIL"));
    let csv = call(&["reproduce", "c57", "--max-genus", "3", "--csv"]).out;
    assert_eq!(
        csv,
        "genus,chi,teich_bound,wp_bound,wp_ceiling,normalized,in_phi\n\
         2,-2,7.4742044844,86.9779742541,87.6812408671,123.005430818,true\n\
         3,-4,3.7371022422,61.5027154089,62,123.005430818,true\n"
    );
    let v = json(&["reproduce", "c57", "--max-genus", "5", "--json"]);
    assert_eq!(v["genus_table"].as_array().unwrap().len(), 4);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["reproduce", "c57", "--json"][..],
        &["bound", "--teich", "2.5", "--chi", "-6", "--tau", "40", "--rho", "1.3"],
        &["family", "--kind", "glued", "--k", "7", "--samples", "300"],
        &["area", "--modulus", "0.5", "--fraction", "0.7", "--output", "text"],
    ] {
        let first = call(args);
        assert_eq!(first.code, EXIT_OK);
        for _ in 0..3 {
            assert_eq!(call(args).out, first.out);
        }
    }
}

#[test]
fn global_output_mode() {
    let o = call(&["--output", "csv", "balance", "--tau", "11"]);
    assert_eq!(o.out, "m0,h,r,qc_norm\nsqrt(10),0.909223229616,6,0.948683298051\n");
    let o = call(&["balance", "--tau", "11", "--output", "json"]);
    assert!(o.out.starts_with('{'));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_solvtwist");
    let status = |args: &[&str]| std::process::Command::new(bin).args(args).output().unwrap();
    let ok = status(&["balance", "--tau", "11", "--json"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8(ok.stdout).unwrap(), call(&["balance", "--tau", "11", "--json"]).out);
    assert_eq!(status(&["bound", "--teich", "1", "--chi", "-2", "--tau", "8"]).status.code(), Some(2));
    assert_eq!(status(&["nope"]).status.code(), Some(1));
    let env = std::process::Command::new(bin)
        .args(["--budget", "1000", "area", "--modulus", "1"])
        .env("SOLVTWIST_TOL", "1e-300")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(3));
}
