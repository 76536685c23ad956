//! Writes the checked-in fuzz corpus seeds.

use spslab::cache::encode_kernel;
use spslab::grid::{RadialFunction, RadialGrid};
use spslab::io::{profile_to_csv, profile_to_json};
use spslab::riesz::assemble_kernel;

fn main() {
    let root = std::path::Path::new("fuzz/corpus");
    // small but valid kernel cache blob
    let grid = RadialGrid::new(0.5, 2.0, 16, 3).unwrap();
    let kernel = assemble_kernel(&grid, 2.0).unwrap();
    std::fs::write(
        root.join("kernel_cache/valid_small.bin"),
        encode_kernel(&kernel),
    )
    .unwrap();
    std::fs::write(
        root.join("kernel_cache/truncated.bin"),
        &encode_kernel(&kernel)[..40],
    )
    .unwrap();

    let u = RadialFunction::from_fn(&grid, |r| (-r).exp());
    std::fs::write(root.join("profile_csv/valid_small.csv"), profile_to_csv(&u)).unwrap();
    std::fs::write(root.join("profile_csv/header_only.csv"), "r,u\n").unwrap();
    std::fs::write(
        root.join("profile_json/valid_small.json"),
        serde_json::to_vec_pretty(&profile_to_json(&u)).unwrap(),
    )
    .unwrap();
    std::fs::write(root.join("profile_json/empty.json"), "{}").unwrap();

    std::fs::write(
        root.join("sweep_config/valid_small.json"),
        br#"{"n": 3, "alpha": "2", "p_values": ["2"], "q_values": ["2.8", "3", "4"], "m": 256}"#,
    )
    .unwrap();
    std::fs::write(
        root.join("sweep_config/fractions.json"),
        br#"{"n": 3, "alpha": "2", "p_values": ["2"], "q_values": ["18/7"], "m": 64, "workers": 2}"#,
    )
    .unwrap();
    println!("seeds written");
}
