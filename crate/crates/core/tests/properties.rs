mod common;

#[test]
fn catalan_recursion() {
    common::catalan_recursion().unwrap();
}

#[test]
fn injectivity() {
    common::injectivity().unwrap();
}

#[test]
fn oracle_laws() {
    common::oracle_laws().unwrap();
}

#[test]
fn export_determinism() {
    common::export_determinism().unwrap();
}
