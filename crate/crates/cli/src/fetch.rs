use std::env;
use std::fs;
use std::path::PathBuf;

use oseq::oeis::{bfile_url, OeisReference};

use crate::commands::Failure;

/// `$OSEQ_CACHE_DIR`, else `$XDG_CACHE_HOME/oseq`, else `$HOME/.cache/oseq`.
pub fn cache_dir() -> PathBuf {
    if let Some(dir) = env::var_os("OSEQ_CACHE_DIR") {
        return PathBuf::from(dir);
    }
    if let Some(dir) = env::var_os("XDG_CACHE_HOME") {
        return PathBuf::from(dir).join("oseq");
    }
    env::var_os("HOME")
        .map(|h| PathBuf::from(h).join(".cache").join("oseq"))
        .unwrap_or_else(|| PathBuf::from(".oseq-cache"))
}

/// The b-file for `id`, from the cache directory if present, otherwise over
/// HTTP (and then stored for the next run).
pub fn b_file(id: &str) -> Result<OeisReference, Failure> {
    let path = cache_dir().join(format!("b{}.txt", id.trim_start_matches('A')));
    let text = if path.exists() {
        fs::read_to_string(&path)?
    } else {
        let url = bfile_url(id);
        let text = ureq::get(&url)
            .call()
            .and_then(|mut resp| resp.body_mut().read_to_string())
            .map_err(|e| Failure::Network(format!("GET {url}: {e}")))?;
        // validate before caching
        OeisReference::parse(id, &text)?;
        fs::create_dir_all(path.parent().expect("file in a directory"))?;
        fs::write(&path, &text)?;
        text
    };
    Ok(OeisReference::parse(id, &text)?)
}
