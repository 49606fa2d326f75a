#![no_main]

use std::sync::Arc;

use excol::field::FieldSpec;
use excol::module::parse_module;
use excol::quiver::{parse_and_build, QuiverAlgebra, ISING_DSL};
use libfuzzer_sys::fuzz_target;
use std::sync::OnceLock;

static ALG: OnceLock<Arc<QuiverAlgebra>> = OnceLock::new();

fuzz_target!(|data: &str| {
    let alg = ALG.get_or_init(|| Arc::new(parse_and_build(ISING_DSL, FieldSpec::Q).unwrap()));
    let _ = parse_module(data, alg);
});
