#![no_main]

use excol::surface::parse_recipe;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let _ = parse_recipe(data);
});
