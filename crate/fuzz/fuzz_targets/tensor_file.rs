#![no_main]

use excol::ncplane::parse_tensor;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let _ = parse_tensor(data);
});
