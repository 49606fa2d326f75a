#![no_main]

use excol::field::FieldSpec;
use excol::quiver::parse_and_build;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let _ = parse_and_build(data, FieldSpec::Q);
});
