use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn dwarith(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dwarith")).args(args).output().expect("binary runs")
}

fn on(command: &str, config: &Path, extra: &[&str]) -> Output {
    let mut args = vec![command, "--config", config.to_str().unwrap()];
    args.extend_from_slice(extra);
    dwarith(&args)
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dwarith-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(format!("{name}.toml"));
    std::fs::write(&path, body).unwrap();
    path
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn suite_over_shipped_models_passes() {
    let out = on("suite", &configs(), &[]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn output_is_byte_deterministic() {
    for command in ["validate", "homs", "lambda", "cs", "partition", "hdim", "glue", "transport"] {
        for format in ["text", "structured"] {
            let path = configs().join("z4_xyz.toml");
            let a = on(command, &path, &["--format", format]);
            let b = on(command, &path, &["--format", format]);
            assert_eq!(a.status.code(), Some(0), "{command}: {}", stdout(&a));
            assert_eq!(a.stdout, b.stdout, "{command} --format {format}");
        }
    }
}

#[test]
fn hdim_on_the_trivial_model() {
    let out = on("hdim", &configs().join("trivial.toml"), &["--format", "structured"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let r = report["locals"].as_array().unwrap().iter().find(|l| l["name"] == "r").unwrap();
    assert_eq!(r["dimension"], 2);
    assert_eq!(r["basis"].as_array().unwrap().len(), 2);
}

#[test]
fn glue_on_the_trivial_model() {
    let out = on("glue", &configs().join("trivial.toml"), &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("equal: true"), "{text}");
    assert!(text.contains("glued:") && text.contains("direct:"));
}

#[test]
fn reciprocity_violation_is_a_model_violation() {
    let out = on("validate", &configs().join("reciprocity_violation.toml"), &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("ReciprocityViolation"));
}

#[test]
fn schema_errors_exit_with_two() {
    let bad = scratch("schema", "name = \"bad\"\nmodulus = \"two\"\n");
    let out = on("validate", &bad, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("SchemaError"));
    assert_eq!(on("validate", &configs(), &[]).status.code(), Some(2));
    assert_eq!(dwarith(&["validate"]).status.code(), Some(2));
}

#[test]
fn failed_checks_exit_with_three() {
    let body = std::fs::read_to_string(configs().join("klein_paired.toml")).unwrap();
    let wrong = scratch("expect", &format!("{body}\n[expect]\nerror = \"ReciprocityViolation\"\n"));
    let out = on("suite", &wrong, &[]);
    assert_eq!(out.status.code(), Some(3), "{}", stdout(&out));
}

#[test]
fn report_can_be_written_to_a_file() {
    let path = configs().join("minimal.toml");
    let target = std::env::temp_dir().join(format!("dwarith-cli-{}-out.txt", std::process::id()));
    let out = on("homs", &path, &["--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&target).unwrap(), on("homs", &path, &[]).stdout);
}
