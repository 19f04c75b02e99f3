//! End-to-end tests against the compiled `rootkit` binary: exit codes,
//! output shapes, schema conformance, and byte-level reproducibility.

use serde_json::Value;
use std::process::Command;

fn run_with_env(args: &[&str], envs: &[(&str, &str)]) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_rootkit"));
    cmd.args(args).env_remove("ROOTKIT_THREADS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    (
        out.status.code().expect("no signal"),
        String::from_utf8(out.stdout).expect("utf-8 stdout"),
        String::from_utf8(out.stderr).expect("utf-8 stderr"),
    )
}

fn run(args: &[&str]) -> (i32, String, String) {
    run_with_env(args, &[])
}

// ---------------------------------------------------------------------------
// a subset JSON-Schema validator, enough for docs/output-schema.json
// ---------------------------------------------------------------------------

fn resolve<'a>(reference: &str, root: &'a Value) -> &'a Value {
    let mut node = root;
    for part in reference.trim_start_matches("#/").split('/') {
        node = node.get(part).unwrap_or_else(|| panic!("unresolvable $ref {reference}"));
    }
    node
}

fn validate(value: &Value, schema: &Value, root: &Value) -> Result<(), String> {
    if let Some(reference) = schema.get("$ref").and_then(Value::as_str) {
        return validate(value, resolve(reference, root), root);
    }
    if let Some(variants) = schema.get("oneOf").and_then(Value::as_array) {
        let mut errors = Vec::new();
        for variant in variants {
            match validate(value, variant, root) {
                Ok(()) => return Ok(()),
                Err(e) => errors.push(e),
            }
        }
        return Err(format!("no oneOf variant matched: {errors:?}"));
    }
    if let Some(ty) = schema.get("type").and_then(Value::as_str) {
        let ok = match ty {
            "object" => value.is_object(),
            "array" => value.is_array(),
            "string" => value.is_string(),
            "integer" => value.as_f64().is_some_and(|x| x.fract() == 0.0),
            "number" => value.is_number(),
            "null" => value.is_null(),
            "boolean" => value.is_boolean(),
            other => panic!("unsupported type {other}"),
        };
        if !ok {
            return Err(format!("expected {ty}, got {value}"));
        }
    }
    if let Some(allowed) = schema.get("enum").and_then(Value::as_array) {
        if !allowed.contains(value) {
            return Err(format!("{value} not in enum {allowed:?}"));
        }
    }
    if let Some(min) = schema.get("minimum").and_then(Value::as_f64) {
        if value.as_f64().is_none_or(|x| x < min) {
            return Err(format!("{value} below minimum {min}"));
        }
    }
    if let Some(obj) = value.as_object() {
        if let Some(required) = schema.get("required").and_then(Value::as_array) {
            for key in required.iter().filter_map(Value::as_str) {
                if !obj.contains_key(key) {
                    return Err(format!("missing required field {key}"));
                }
            }
        }
        if let Some(props) = schema.get("properties").and_then(Value::as_object) {
            for (key, sub) in props {
                if let Some(v) = obj.get(key) {
                    validate(v, sub, root).map_err(|e| format!("{key}: {e}"))?;
                }
            }
            if schema.get("additionalProperties") == Some(&Value::Bool(false)) {
                for key in obj.keys() {
                    if !props.contains_key(key) {
                        return Err(format!("unexpected field {key}"));
                    }
                }
            }
        }
    }
    if let Some(arr) = value.as_array() {
        if let Some(min) = schema.get("minItems").and_then(Value::as_u64) {
            if (arr.len() as u64) < min {
                return Err(format!("array shorter than {min}"));
            }
        }
        if let Some(items) = schema.get("items") {
            for (i, v) in arr.iter().enumerate() {
                validate(v, items, root).map_err(|e| format!("[{i}]: {e}"))?;
            }
        }
    }
    Ok(())
}

fn schema() -> Value {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/output-schema.json");
    serde_json::from_str(&std::fs::read_to_string(path).expect("schema file exists"))
        .expect("schema parses")
}

fn assert_valid(doc: &str) -> Value {
    let value: Value = serde_json::from_str(doc).expect("output is JSON");
    let schema = schema();
    validate(&value, &schema, &schema).unwrap_or_else(|e| panic!("schema violation: {e}\n{doc}"));
    value
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

#[test]
fn solve_json_converged_report() {
    let (code, out, _) = run(&["solve", "--problem", "sqrt612", "--x0", "10", "--method", "newton"]);
    assert_eq!(code, 0);
    let v = assert_valid(&out);
    assert_eq!(v["status"], "converged");
    assert_eq!(v["iterations"], 6);
    assert_eq!(v["root"].as_f64(), Some(612.0_f64.sqrt()));
    let trace = v["trace"].as_array().unwrap();
    assert_eq!(trace.len(), 7);
    assert_eq!(trace[1]["x"].as_f64(), Some(35.6));
    assert_eq!(trace[0]["step"].as_f64(), Some(25.6));
    // diagnostics are null exactly on the final point
    assert!(trace[6]["q"].is_null());
    assert!(!trace[5]["q"].is_null());
    // 17-significant-digit serialization round-trips the caught root exactly
    assert!(out.contains("2.4738633753705962e"), "{out}");
}

#[test]
fn solve_json_cycle_report_carries_period() {
    let (code, out, _) =
        run(&["solve", "--problem", "cubic_cycle", "--x0", "0", "--method", "newton"]);
    assert_eq!(code, 1);
    let v = assert_valid(&out);
    assert_eq!(v["status"], "cycle");
    assert_eq!(v["period"], 2);
    assert_eq!(v["root"], Value::Null);
    assert_eq!(v["iterations"], 3);
}

#[test]
fn solve_json_encodes_non_finite_diagnostics_as_strings() {
    // f = 1 - x² at 0 sits exactly on a turning point: q = -inf, zero step
    let (code, out, _) =
        run(&["solve", "--expr", "1 - x^2", "--x0", "0", "--method", "hnr2"]);
    assert_eq!(code, 1);
    let v = assert_valid(&out);
    assert_eq!(v["status"], "stationary");
    assert_eq!(v["trace"][0]["q"], "-inf");
    assert_eq!(v["trace"][0]["multiplier"].as_f64(), Some(0.0));
}

#[test]
fn solve_exit_codes_classify_failures() {
    // tanh overshoot saturates f' to zero: numerical failure, not non-convergence
    let (code, out, _) =
        run(&["solve", "--expr", "tanh(x)", "--x0", "1.5", "--method", "newton"]);
    assert_eq!(code, 3);
    let v = assert_valid(&out);
    assert_eq!(v["status"], "undefined_step");
    assert_eq!(v["iterations"], 2);

    // hnr1 exponential overflow: exit 3 with the offending exponent on stderr
    let (code, _, err) =
        run(&["solve", "--problem", "cubic_cycle", "--x0", "0.83", "--method", "hnr1"]);
    assert_eq!(code, 3);
    assert!(err.contains("1.0206364418990046e3"), "{err}");

    // domain exit: newton on log x jumps below zero
    let (code, _, err) =
        run(&["solve", "--problem", "log_family(1,1,0)", "--x0", "3", "--method", "newton"]);
    assert_eq!(code, 3);
    assert!(err.contains("left the domain"), "{err}");
}

#[test]
fn solve_usage_errors_exit_2() {
    let (code, _, err) = run(&["solve", "--expr", "x^", "--x0", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("parse error at offset 2"), "{err}");

    let (code, _, err) = run(&["solve", "--problem", "quintic", "--x0", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown problem"), "{err}");

    let (code, _, _) = run(&["solve", "--x0", "1"]); // no target
    assert_eq!(code, 2);
    let (code, _, _) =
        run(&["solve", "--problem", "tanh", "--expr", "x", "--x0", "1"]); // both targets
    assert_eq!(code, 2);
    let (code, _, _) =
        run(&["solve", "--problem", "tanh", "--x0", "1", "--method", "bogus"]);
    assert_eq!(code, 2);
}

#[test]
fn solve_csv_prints_the_trace_table() {
    let (code, out, err) = run(&[
        "solve", "--problem", "sqrt612", "--x0", "10", "--method", "newton", "--format", "csv",
    ]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "iter,x,f,fprime,fsecond,q,multiplier,step");
    assert_eq!(lines.len(), 8);
    assert!(lines[1].starts_with("0,1.0000000000000000e1,-5.1200000000000000e2,"));
    // no diagnostics on the final row: three empty trailing cells
    assert!(lines[7].ends_with(",,"), "{}", lines[7]);
    assert!(err.contains("status converged"));
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

#[test]
fn sweep_emits_csv_with_canonical_roots() {
    let (code, out, _) = run(&[
        "sweep", "--problem", "fractal_cubic", "--method", "newton", "--from", "2.3528", "--to",
        "2.3529", "--points", "11",
    ]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "x0,status,root,iterations,max_excursion");
    assert_eq!(lines.len(), 12);
    // matched roots print the catalog value, not the raw estimate
    assert_eq!(
        lines[1],
        "2.3527999999999998e0,converged,1.0000000000000000e0,10,2.3527999999999998e0"
    );
    assert!(lines.iter().skip(1).all(|l| l.contains(",converged,")));
}

#[test]
fn sweep_keeps_failed_rows() {
    let (code, out, _) = run(&[
        "sweep", "--problem", "cubic_cycle", "--method", "hnr1", "--from", "0.8", "--to", "0.86",
        "--step", "0.03",
    ]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    // 0.8 + 2*0.03 lands above --to in floating point, so the grid stops at 0.83
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[1], "8.0000000000000004e-1,eval_failed,,1,");
    assert_eq!(lines[2], "8.3000000000000007e-1,overflow,,0,");
}

#[test]
fn sweep_range_validation_exits_2() {
    for bad in [
        vec!["sweep", "--problem", "tanh", "--from", "1", "--to", "0", "--points", "5"],
        vec!["sweep", "--problem", "tanh", "--from", "0", "--to", "1", "--points", "1"],
        vec!["sweep", "--problem", "tanh", "--from", "0", "--to", "1", "--step", "-0.1"],
        vec!["sweep", "--problem", "tanh", "--from", "0", "--to", "1"], // neither points nor step
    ] {
        let (code, _, _) = run(&bad);
        assert_eq!(code, 2, "expected usage failure for {bad:?}");
    }
}

// ---------------------------------------------------------------------------
// boundary
// ---------------------------------------------------------------------------

#[test]
fn boundary_brackets_the_newton_tanh_threshold() {
    let (code, out, _) = run(&[
        "boundary", "--problem", "tanh", "--method", "newton", "--lo", "0.5", "--hi", "2",
        "--resolution", "1e-6",
    ]);
    assert_eq!(code, 0);
    let v = assert_valid(&out);
    let location = v["location"].as_f64().unwrap();
    assert!((location - 1.088659).abs() <= 1e-5, "location {location}");
    assert_eq!(v["predicate"], "root(0) vs failed");
    let (lo, hi) = (v["lo"].as_f64().unwrap(), v["hi"].as_f64().unwrap());
    assert!(hi - lo <= 1e-6);
}

#[test]
fn boundary_without_an_outcome_flip_exits_1() {
    let (code, out, err) = run(&[
        "boundary", "--problem", "tanh", "--method", "hnr2", "--lo", "1", "--hi", "4",
        "--resolution", "1e-6",
    ]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("no boundary"), "{err}");

    let (code, _, _) = run(&[
        "boundary", "--problem", "tanh", "--method", "newton", "--lo", "2", "--hi", "0.5",
        "--resolution", "1e-6",
    ]);
    assert_eq!(code, 2);
}

// ---------------------------------------------------------------------------
// reproduce
// ---------------------------------------------------------------------------

#[test]
fn reproduce_outcomes_are_stable() {
    let (code, out, _) = run(&["reproduce", "sqrt612"]);
    assert_eq!(code, 0, "{out}");
    assert!(!out.contains("FAIL"));
    assert!(out.contains("PASS newton: error sequence"));

    let (code, out, _) = run(&["reproduce", "cubic-turning"]);
    assert_eq!(code, 0, "{out}");

    let (code, out, _) = run(&["reproduce", "fractal-scan"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("contain the pattern [1, -3, 4, -3, 4]"));

    // the hnr2 tanh boundary does not exist: hnr2 converges on both sides,
    // so this experiment fails its published assertions and exits 1
    let (code, out, _) = run(&["reproduce", "tanh-basin"]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("PASS newton boundary"));
    assert!(out.contains("FAIL hnr2 boundary"));

    let (code, _, err) = run(&["reproduce", "heat-equation"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown experiment"));
}

// ---------------------------------------------------------------------------
// reproducibility
// ---------------------------------------------------------------------------

#[test]
fn identical_invocations_are_byte_identical() {
    let args = [
        "sweep", "--problem", "fractal_cubic", "--method", "hnr2", "--from", "-4", "--to", "5",
        "--points", "200",
    ];
    let (c1, out1, _) = run(&args);
    let (c2, out2, _) = run(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(out1, out2);

    let solve_args = ["solve", "--problem", "sqrt612", "--x0", "10"];
    let (_, s1, _) = run(&solve_args);
    let (_, s2, _) = run(&solve_args);
    assert_eq!(s1, s2);
}

#[test]
fn thread_cap_never_changes_output() {
    let args = [
        "sweep", "--problem", "fractal_cubic", "--method", "newton", "--from", "-4", "--to", "5",
        "--points", "300",
    ];
    let (c1, capped, _) = run_with_env(&args, &[("ROOTKIT_THREADS", "1")]);
    let (c2, free, _) = run(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(capped, free);

    let (code, _, err) = run_with_env(&args, &[("ROOTKIT_THREADS", "zero")]);
    assert_eq!(code, 2);
    assert!(err.contains("ROOTKIT_THREADS"), "{err}");
}
