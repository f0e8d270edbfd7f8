//! Graph files and scenarios shipped with the crate.

macro_rules! bundle {
    ($($name:literal),* $(,)?) => {
        /// `(file name, contents)` of every bundled graph.
        pub const GRAPHS: &[(&str, &str)] = &[
            $((concat!($name, ".cox"), include_str!(concat!("../data/", $name, ".cox")))),*
        ];
    };
}

bundle!("c2", "c3", "coxmax", "n9", "n11", "t234", "t235", "t236", "t237");

macro_rules! scenarios {
    ($($name:literal),* $(,)?) => {
        /// `(file name, contents)` of every bundled scenario.
        pub const SCENARIOS: &[(&str, &str)] = &[
            $((concat!($name, ".scn"), include_str!(concat!("../data/", $name, ".scn")))),*
        ];
    };
}

scenarios!("c2", "c3", "coxmax", "hexlet", "n9", "n11", "e8", "t237");

/// Looks up a bundled graph by file name, with or without extension.
pub fn graph(name: &str) -> Option<&'static str> {
    lookup(GRAPHS, name, ".cox")
}

/// Looks up a bundled scenario by file name, with or without extension.
pub fn scenario(name: &str) -> Option<&'static str> {
    lookup(SCENARIOS, name, ".scn")
}

fn lookup(table: &[(&str, &'static str)], name: &str, ext: &str) -> Option<&'static str> {
    let base = name.strip_suffix(ext).unwrap_or(name);
    table
        .iter()
        .find(|(n, _)| n.strip_suffix(ext) == Some(base))
        .map(|(_, text)| *text)
}
