//! Replays the checked-in fuzz corpus through the same entry points the fuzz
//! targets drive, so seeds stay meaningful as the parsers change.

use std::fs;
use std::path::PathBuf;

use pontryagin_core::convex::{CoproductPoint, CoproductSpace};
use pontryagin_core::effect::BlockEffect;
use pontryagin_core::group::{FiniteGroup, GroupDescriptor};
use pontryagin_core::verify::RunReport;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|entry| {
            let path = entry.unwrap().path();
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            (name, fs::read_to_string(&path).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

fn accepted(target: &str, parse: impl Fn(&str) -> bool) -> Vec<String> {
    seeds(target)
        .into_iter()
        .filter(|(_, text)| parse(text))
        .map(|(name, _)| name)
        .collect()
}

#[test]
fn descriptor_seeds() {
    let ok = accepted("parse_group_descriptor", |t| {
        t.parse::<GroupDescriptor>().is_ok()
    });
    assert_eq!(
        ok,
        [
            "cyclic",
            "dihedral",
            "nested_product",
            "quaternion",
            "symmetric",
            "table"
        ]
    );
}

#[test]
fn group_table_seeds() {
    let ok = accepted("group_table_json", |t| {
        FiniteGroup::from_table_json("seed", t).is_ok()
    });
    assert_eq!(ok, ["trivial", "z3"]);
}

#[test]
fn block_effect_seeds() {
    let ok = accepted("block_effect_json", |t| {
        BlockEffect::from_json_str(t, 1e-9).is_ok()
    });
    assert_eq!(ok, ["two_blocks"]);
}

#[test]
fn coproduct_point_seeds() {
    let space = CoproductSpace::density(&[1, 1, 2]).unwrap();
    let ok = accepted("coproduct_point_json", |t| {
        CoproductPoint::from_json_str(t, &space, 1e-9).is_ok()
    });
    assert_eq!(ok, ["mixed_block", "two_vertices"]);
}

#[test]
fn report_seeds() {
    let ok = accepted("report_json", |t| RunReport::from_json(t).is_ok());
    assert_eq!(ok, ["pass", "skipped"]);
}
