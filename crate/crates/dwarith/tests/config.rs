mod common;

use common::{config, config_names, tuples};
use dwarith::cochain::Cochain;
use dwarith::config::parse_config;
use dwarith::error::Error;

const HEADER: &str = "name = \"t\"\nmodulus = 2\ngauge_group = \"cyclic(2)\"\n";

fn errors(doc: &str) -> Vec<Error> {
    match parse_config(doc) {
        Ok(_) => panic!("document was accepted"),
        Err(e) => e,
    }
}

#[test]
fn minimal_document_parses() {
    let cfg = config("minimal");
    assert_eq!(cfg.name, "minimal");
    assert_eq!(cfg.modulus, 2);
    assert_eq!(cfg.locals.len(), 1);
    assert!(cfg.globals.is_empty() && cfg.gluings.is_empty() && cfg.expect_error.is_none());
    assert_eq!(cfg.checks.seeds.len(), 3);
    assert!(cfg.gauge.cocycle().is_zero());
}

#[test]
fn every_shipped_document_parses() {
    let names = config_names();
    assert!(names.len() >= 4);
    for name in names {
        let cfg = config(&name);
        assert_eq!(cfg.name, name);
    }
}

#[test]
fn non_cocycle_reports_the_first_violating_tuple() {
    let doc = format!("{HEADER}[cocycle]\nkind = \"entries\"\nentries = [[1, 1, 0, 1]]\n");
    let errs = errors(&doc);
    let Error::NotACocycle { tuple, value } = &errs[0] else { panic!("{errs:?}") };
    let z2 = common::group(dwarith::group::FiniteGroup::cyclic(2));
    let mut c = Cochain::zero(z2, 3, 2);
    c.set(&[1, 1, 0], 1);
    let dc = common::d(&c);
    let first = tuples(2, 4).into_iter().find(|t| dc.get(t) != 0).unwrap();
    assert_eq!(tuple, &first);
    assert_eq!(*value, dc.get(&first));
}

#[test]
fn unknown_names_are_dangling_references() {
    let doc = format!(
        "{HEADER}[cocycle]\nkind = \"zero\"\n\n[[globals]]\nlabel = \"S\"\ngroup = \"abelian(2,2)\"\nattachments = [{{ local = \"nope\", iota = [2, 1] }}]\n\n[[globals]]\nlabel = \"T\"\ngroup = \"abelian(2,2)\"\nattachments = [{{ local = \"gone\", iota = [2, 1] }}]\n"
    );
    let errs = errors(&doc);
    let names: Vec<&str> = errs
        .iter()
        .filter_map(|e| match e {
            Error::DanglingReference { name, .. } => Some(name.as_str()),
            _ => None,
        })
        .collect();
    assert_eq!(names, ["nope", "gone"]);
}

#[test]
fn schema_errors_carry_a_path() {
    let errs = errors("name = \"t\"\nmodulus = \"two\"\ngauge_group = \"cyclic(2)\"\n[cocycle]\nkind = \"zero\"\n");
    assert!(matches!(&errs[0], Error::SchemaError { path, .. } if path.contains("modulus")), "{errs:?}");
    let errs = errors(&format!("{HEADER}colour = 3\n[cocycle]\nkind = \"zero\"\n"));
    assert_eq!(errs[0].code(), "SchemaError");
    let errs = errors(&format!("{HEADER}[cocycle]\nkind = \"zero\"\n[[locals]]\nname = \"q\"\nkind = \"klein\"\norientation = 2\n"));
    assert!(matches!(&errs[0], Error::SchemaError { path, .. } if path.contains("orientation")), "{errs:?}");
}

#[test]
fn expected_error_is_recorded() {
    assert_eq!(config("reciprocity_violation").expect_error.as_deref(), Some("ReciprocityViolation"));
    assert_eq!(config("inconsistent_closed").expect_error.as_deref(), Some("ModelViolation"));
}
