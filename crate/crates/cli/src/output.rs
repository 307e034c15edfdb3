use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::CliError;

/// Writes each `(file name, contents)` to a temporary sibling and renames it
/// into place.
pub fn write_all(dir: &Path, files: &[(String, String)]) -> Result<Vec<PathBuf>, CliError> {
    let io = |what: &str, p: &Path, e: std::io::Error| {
        CliError::Io(format!("{what} {}: {e}", p.display()))
    };
    fs::create_dir_all(dir).map_err(|e| io("cannot create", dir, e))?;
    let mut written = Vec::with_capacity(files.len());
    for (name, contents) in files {
        let target = dir.join(name);
        let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
        let mut f = fs::File::create(&tmp).map_err(|e| io("cannot create", &tmp, e))?;
        f.write_all(contents.as_bytes())
            .and_then(|_| f.sync_all())
            .map_err(|e| io("cannot write", &tmp, e))?;
        fs::rename(&tmp, &target).map_err(|e| io("cannot rename into", &target, e))?;
        written.push(target);
    }
    Ok(written)
}
