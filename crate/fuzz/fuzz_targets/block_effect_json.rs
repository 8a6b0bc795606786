#![no_main]

use libfuzzer_sys::fuzz_target;
use pontryagin_core::effect::BlockEffect;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(e) = BlockEffect::from_json_str(text, 1e-9) {
        let back = BlockEffect::from_json_str(&e.to_json_string(), 1e-9)
            .expect("serialized effect parses");
        assert_eq!(back.layout(), e.layout());
    }
});
