#![no_main]

use libfuzzer_sys::fuzz_target;
use pontryagin_core::group::{FiniteGroup, GroupDescriptor};

fn reads_files(desc: &GroupDescriptor) -> bool {
    match desc {
        GroupDescriptor::Table(_) => true,
        GroupDescriptor::Product(a, b) => reads_files(a) || reads_files(b),
        _ => false,
    }
}

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(desc) = text.parse::<GroupDescriptor>() {
        let again: GroupDescriptor = desc.to_string().parse().expect("display output parses");
        assert_eq!(again, desc);
        if !reads_files(&desc) {
            if let Ok(g) = FiniteGroup::build(&desc) {
                assert!(g.order() >= 1);
            }
        }
    }
});
