//! Reading and writing instance directories and program files.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use bfgp_core::{parse_instance, parse_program, serialize_instance, InstanceSpec, Program};

/// Extension of instance files written by `gen`.
pub const INSTANCE_EXT: &str = "inst";

/// Every `*.inst` file of `dir`, sorted by file name.
pub fn load_instances(dir: &Path) -> Result<Vec<(PathBuf, InstanceSpec)>> {
    let mut paths = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))? {
        let path = entry?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == INSTANCE_EXT) {
            paths.push(path);
        }
    }
    if paths.is_empty() {
        bail!("no .{INSTANCE_EXT} files in {}", dir.display());
    }
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let text =
                fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
            let spec = parse_instance(&text).with_context(|| format!("parsing {}", p.display()))?;
            Ok((p, spec))
        })
        .collect()
}

/// Writes `specs` as `<prefix>-<index>.inst` files, creating `dir`.
pub fn write_instances(dir: &Path, prefix: &str, specs: &[InstanceSpec]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let width = specs.len().to_string().len().max(3);
    specs
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let path = dir.join(format!("{prefix}-{i:0width$}.{INSTANCE_EXT}"));
            fs::write(&path, serialize_instance(s))
                .with_context(|| format!("writing {}", path.display()))?;
            Ok(path)
        })
        .collect()
}

/// Pointer names in text go up to `z255`.
const MAX_POINTERS: usize = 255;

/// Parses a program file. Its pointer count is not known yet, so any
/// pointer name is accepted here.
pub fn load_program(path: &Path) -> Result<Program> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_program(&text, None, MAX_POINTERS).with_context(|| format!("parsing {}", path.display()))
}
