#![no_main]

use libfuzzer_sys::fuzz_target;
use unirat::io::parse_nodes;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(nodes) = parse_nodes(text) {
        assert!(nodes.iter().all(|x| x.is_finite()));
    }
});
