//! Source file ingestion.

use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SourceError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: file decodes to an empty character sequence")]
    Empty { path: PathBuf },
}

/// A JavaScript source file, decoded to UTF-8.
///
/// Invalid byte sequences are replaced with U+FFFD rather than rejected, so
/// real-world corpora with mixed encodings still flow through the pipeline.
/// Files that decode to an empty character sequence are rejected.
#[derive(Debug, Clone)]
pub struct SourceFile {
    pub path: PathBuf,
    pub text: String,
}

impl SourceFile {
    pub fn read(path: impl AsRef<Path>) -> Result<Self, SourceError> {
        let path = path.as_ref().to_path_buf();
        let bytes = std::fs::read(&path).map_err(|source| SourceError::Io {
            path: path.clone(),
            source,
        })?;
        let text = String::from_utf8_lossy(&bytes).into_owned();
        if text.is_empty() {
            return Err(SourceError::Empty { path });
        }
        Ok(SourceFile { path, text })
    }

    /// Wrap an in-memory string; used by tests and by stages that re-parse
    /// intermediate code.
    pub fn from_text(name: impl Into<PathBuf>, text: impl Into<String>) -> Self {
        SourceFile {
            path: name.into(),
            text: text.into(),
        }
    }

    /// SHA-256 of the decoded text, lowercase hex.
    pub fn digest(&self) -> String {
        content_digest(&self.text)
    }
}

/// SHA-256 of a string, lowercase hex. Used as the content key for caches.
pub fn content_digest(text: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    hex::encode(hasher.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.js");
        std::fs::write(&path, b"").unwrap();
        assert!(matches!(
            SourceFile::read(&path),
            Err(SourceError::Empty { .. })
        ));
    }

    #[test]
    fn lossy_decode_of_invalid_utf8() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.js");
        std::fs::write(&path, b"var a = 1; \xff\xfe").unwrap();
        let sf = SourceFile::read(&path).unwrap();
        assert!(sf.text.starts_with("var a = 1;"));
        assert!(sf.text.contains('\u{FFFD}'));
    }

    #[test]
    fn digest_is_stable() {
        let a = SourceFile::from_text("a.js", "var a=1;");
        let b = SourceFile::from_text("b.js", "var a=1;");
        assert_eq!(a.digest(), b.digest());
        assert_eq!(a.digest().len(), 64);
    }
}
