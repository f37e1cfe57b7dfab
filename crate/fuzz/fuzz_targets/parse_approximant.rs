#![no_main]

use libfuzzer_sys::fuzz_target;
use unirat::io::{approximant_from_json, approximant_to_json};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(a) = approximant_from_json(text) else { return };
    for x in [-3.0, 0.0, 0.5, 7.25] {
        let _ = a.eval(x);
    }
    // Loaded approximants survive a round trip.
    let again = approximant_from_json(&approximant_to_json(&a)).expect("round trip");
    assert_eq!(again.kind(), a.kind());
});
