//! Sample inputs shipped with the crate.

pub const QUINTIC_NEWTON: &str = include_str!("../data/quintic_newton.vert");
pub const P4_FAN: &str = include_str!("../data/p4_fan.vert");
pub const CROSS: &str = include_str!("../data/cross.vert");
pub const S44A: &str = include_str!("../data/44a.laurent");
pub const S44B: &str = include_str!("../data/44b.laurent");
pub const S48A1: &str = include_str!("../data/48a1.laurent");
pub const S48A2: &str = include_str!("../data/48a2.laurent");
pub const S48B: &str = include_str!("../data/48b.laurent");
pub const S65: &str = include_str!("../data/65.laurent");

/// `(file name, contents)` for every sample.
pub const ALL: &[(&str, &str)] = &[
    ("quintic_newton.vert", QUINTIC_NEWTON),
    ("p4_fan.vert", P4_FAN),
    ("cross.vert", CROSS),
    ("44a.laurent", S44A),
    ("44b.laurent", S44B),
    ("48a1.laurent", S48A1),
    ("48a2.laurent", S48A2),
    ("48b.laurent", S48B),
    ("65.laurent", S65),
];

/// Directory holding the sample files in the source tree.
pub fn data_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data")
}
