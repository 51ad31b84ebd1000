use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;
use walkdir::WalkDir;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SkipReason {
    /// Neither a `using Xunit` directive nor a `[Fact]`/`[Theory]` attribute.
    NotATestFile,
    /// Passed the textual filter, but parsing found no type with a test method.
    NoTestSuites,
    Unreadable,
}

impl SkipReason {
    pub fn as_str(self) -> &'static str {
        match self {
            SkipReason::NotATestFile => "not-a-test-file",
            SkipReason::NoTestSuites => "no-test-suites",
            SkipReason::Unreadable => "unreadable",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkippedFile {
    pub path: String,
    pub reason: SkipReason,
}

/// A `.cs` file that passed the textual pre-filter, with its raw contents.
#[derive(Debug, Clone)]
pub struct Candidate {
    /// Path relative to the discovery root, `/`-separated.
    pub path: String,
    pub bytes: Vec<u8>,
}

#[derive(Debug, Clone, Default)]
pub struct Discovery {
    pub candidates: Vec<Candidate>,
    pub skipped: Vec<SkippedFile>,
}

/// `path` relative to `root` with `/` separators. A root that is itself a
/// file yields its file name.
pub fn relative_path(root: &Path, path: &Path) -> String {
    let rel = match path.strip_prefix(root) {
        Ok(r) if !r.as_os_str().is_empty() => r.to_path_buf(),
        _ => path.file_name().map(PathBuf::from).unwrap_or_else(|| path.to_path_buf()),
    };
    rel.components()
        .map(|c| c.as_os_str().to_string_lossy())
        .collect::<Vec<_>>()
        .join("/")
}

/// Textual pre-filter: a `using` directive for `Xunit` or a `Fact`/`Theory`
/// attribute.
pub fn is_test_file_candidate(text: &str) -> bool {
    text.lines().any(uses_xunit) || has_test_attribute(text)
}

fn uses_xunit(line: &str) -> bool {
    let line = line.trim_start();
    let line = line.strip_prefix("global ").map(str::trim_start).unwrap_or(line);
    let Some(rest) = line.strip_prefix("using ") else {
        return false;
    };
    let rest = rest.trim_start();
    let rest = rest.strip_prefix("static ").map(str::trim_start).unwrap_or(rest);
    // Alias form: `using X = Xunit.Assert;`
    let rest = match rest.split_once('=') {
        Some((_, target)) => target.trim_start(),
        None => rest,
    };
    let rest = rest.strip_prefix("global::").unwrap_or(rest);
    rest.strip_prefix("Xunit")
        .is_some_and(|after| !after.starts_with(|c: char| c.is_alphanumeric() || c == '_'))
}

fn has_test_attribute(text: &str) -> bool {
    ["Fact", "Theory"].iter().any(|name| {
        text.match_indices(name).any(|(at, _)| {
            let before = text[..at].trim_end().chars().last();
            let after = &text[at + name.len()..];
            let after = after.strip_prefix("Attribute").unwrap_or(after);
            matches!(before, Some('[' | ',' | '.' | ':'))
                && !after.starts_with(|c: char| c.is_alphanumeric() || c == '_')
        })
    })
}

/// Every `.cs` file under `root` (recursively, in path order), split into
/// candidates and skipped files. `root` may also be a single file.
pub fn discover_test_files(root: &Path) -> io::Result<Discovery> {
    let meta = fs::metadata(root)?;
    let mut out = Discovery::default();
    if meta.is_file() {
        classify_file(root, root, &mut out);
        return Ok(out);
    }
    fs::read_dir(root)?;
    let walker = WalkDir::new(root).sort_by_file_name().follow_links(false);
    for entry in walker {
        let entry = match entry {
            Ok(e) => e,
            Err(err) => {
                if let Some(path) = err.path() {
                    if path.extension().is_some_and(|e| e == "cs") || path.is_dir() {
                        out.skipped.push(SkippedFile {
                            path: relative_path(root, path),
                            reason: SkipReason::Unreadable,
                        });
                    }
                }
                continue;
            }
        };
        let path = entry.path();
        if entry.file_type().is_file() && path.extension().is_some_and(|e| e == "cs") {
            classify_file(root, path, &mut out);
        }
    }
    out.candidates.sort_by(|a, b| a.path.cmp(&b.path));
    out.skipped.sort_by(|a, b| a.path.cmp(&b.path));
    Ok(out)
}

fn classify_file(root: &Path, path: &Path, out: &mut Discovery) {
    let rel = relative_path(root, path);
    match fs::read(path) {
        Ok(bytes) => {
            if is_test_file_candidate(&String::from_utf8_lossy(&bytes)) {
                out.candidates.push(Candidate { path: rel, bytes });
            } else {
                out.skipped.push(SkippedFile {
                    path: rel,
                    reason: SkipReason::NotATestFile,
                });
            }
        }
        Err(_) => out.skipped.push(SkippedFile {
            path: rel,
            reason: SkipReason::Unreadable,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefilter() {
        assert!(is_test_file_candidate("using Xunit;\nclass T { }"));
        assert!(is_test_file_candidate("global using Xunit.Abstractions;"));
        assert!(is_test_file_candidate("using static Xunit.Assert;"));
        assert!(is_test_file_candidate("class T { [Theory] void A(int x) { } }"));
        assert!(is_test_file_candidate("class T { [Xunit.FactAttribute] void A() { } }"));
        assert!(is_test_file_candidate("class T { [Trait(\"a\",\"b\"), Fact] void A() { } }"));
        assert!(!is_test_file_candidate("using XunitExtras;\nclass P { }"));
        assert!(!is_test_file_candidate("class P { string Fact; [Factory] void A() { } }"));
    }

    #[test]
    fn discovers_in_path_order() {
        let dir = tempfile::tempdir().unwrap();
        fs::create_dir(dir.path().join("sub")).unwrap();
        fs::write(dir.path().join("sub/b.cs"), "using Xunit; class T { [Fact] void A(){} }").unwrap();
        fs::write(dir.path().join("a.cs"), "class T { [Theory] void A(int x){} }").unwrap();
        fs::write(dir.path().join("p.cs"), "class P { }").unwrap();
        fs::write(dir.path().join("notes.txt"), "[Fact]").unwrap();
        let d = discover_test_files(dir.path()).unwrap();
        let paths: Vec<_> = d.candidates.iter().map(|c| c.path.as_str()).collect();
        assert_eq!(paths, ["a.cs", "sub/b.cs"]);
        assert_eq!(
            d.skipped,
            [SkippedFile {
                path: "p.cs".into(),
                reason: SkipReason::NotATestFile
            }]
        );
    }

    #[test]
    fn missing_root_is_an_error() {
        assert!(discover_test_files(Path::new("/definitely/not/here")).is_err());
    }

    #[test]
    fn single_file_root() {
        let dir = tempfile::tempdir().unwrap();
        let f = dir.path().join("one.cs");
        fs::write(&f, "using Xunit;").unwrap();
        let d = discover_test_files(&f).unwrap();
        assert_eq!(d.candidates[0].path, "one.cs");
    }
}
