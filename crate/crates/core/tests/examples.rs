// Each example is compiled in and run once.

#[allow(dead_code)]
mod simulate_batch {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/simulate_batch.rs"
    ));
}

#[test]
fn simulate_batch_runs() {
    simulate_batch::run_example().expect("simulate_batch example should run");
}

#[allow(dead_code)]
mod exact_pmf {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/exact_pmf.rs"
    ));
}

#[test]
fn exact_pmf_runs() {
    exact_pmf::run_example().expect("exact_pmf example should run");
}

#[allow(dead_code)]
mod moment_tables {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/moment_tables.rs"
    ));
}

#[test]
fn moment_tables_runs() {
    moment_tables::run_example().expect("moment_tables example should run");
}

#[allow(dead_code)]
mod asymptotic_constants {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/asymptotic_constants.rs"
    ));
}

#[test]
fn asymptotic_constants_runs() {
    asymptotic_constants::run_example().expect("asymptotic_constants example should run");
}

#[allow(dead_code)]
mod clt_moments {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/clt_moments.rs"
    ));
}

#[test]
fn clt_moments_runs() {
    clt_moments::run_example().expect("clt_moments example should run");
}

#[allow(dead_code)]
mod lemma_limit {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/lemma_limit.rs"
    ));
}

#[test]
fn lemma_limit_runs() {
    lemma_limit::run_example().expect("lemma_limit example should run");
}

#[allow(dead_code)]
mod fixed_point {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/fixed_point.rs"
    ));
}

#[test]
fn fixed_point_runs() {
    fixed_point::run_example().expect("fixed_point example should run");
}

#[allow(dead_code)]
mod drift_bound {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/drift_bound.rs"
    ));
}

#[test]
fn drift_bound_runs() {
    drift_bound::run_example().expect("drift_bound example should run");
}

#[allow(dead_code)]
mod cross_checks {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/cross_checks.rs"
    ));
}

#[test]
fn cross_checks_runs() {
    cross_checks::run_example().expect("cross_checks example should run");
}

#[allow(dead_code)]
mod cli_envelope {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/cli_envelope.rs"
    ));
}

#[test]
fn cli_envelope_runs() {
    cli_envelope::run_example().expect("cli_envelope example should run");
}
