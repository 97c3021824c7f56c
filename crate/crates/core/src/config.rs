//! Loading problem definitions from TOML files.

use std::path::Path;

use crate::problem::ProblemSpec;
use crate::{Error, Result};

/// Read and parse a problem definition. I/O and syntax problems both map
/// to [`Error::Parse`]; semantic checks happen later in
/// [`crate::problem::validate`].
pub fn load_problem(path: &Path) -> Result<ProblemSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}
