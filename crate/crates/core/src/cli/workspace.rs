//! A workspace is a directory of flat files built by `ingest`.
//!
//! `corpus.tsv` is the normalized corpus; `vocabulary.tsv`, `vectors.txt` and
//! `index.tsv` are readable dumps of the derived structures. `manifest.json`
//! records a SHA-256 for every file. Loading checks every file on disk, then
//! rebuilds everything from `corpus.tsv` and checks that the rebuild
//! reproduces each checksum.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::collection::Collection;
use crate::corpus::{Analyzer, Corpus, CorpusFormat};
use crate::error::{Error, Result};
use crate::persist::{read_string, sha256_hex, write_atomic};

pub const CORPUS_FILE: &str = "corpus.tsv";
pub const VOCABULARY_FILE: &str = "vocabulary.tsv";
pub const VECTORS_FILE: &str = "vectors.txt";
pub const INDEX_FILE: &str = "index.tsv";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceInfo {
    pub path: String,
    pub format: CorpusFormat,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorkspaceManifest {
    pub tool: String,
    pub version: String,
    pub source: SourceInfo,
    pub num_docs: usize,
    pub vocabulary_size: usize,
    pub files: BTreeMap<String, String>,
}

fn derived_files(collection: &Collection) -> Vec<(&'static str, String)> {
    vec![
        (CORPUS_FILE, collection.corpus().to_lines()),
        (VOCABULARY_FILE, collection.vocabulary().to_tsv()),
        (VECTORS_FILE, collection.vector_dump()),
        (INDEX_FILE, collection.index_dump()),
    ]
}

/// Reads `source`, builds the collection and persists it into `dir`.
pub fn ingest(source: impl AsRef<Path>, format: CorpusFormat, dir: impl AsRef<Path>) -> Result<WorkspaceManifest> {
    let source = source.as_ref();
    let dir = dir.as_ref();
    let raw = read_string(source)?;
    let corpus = Corpus::parse(&raw, format)?;
    let collection = Collection::build(corpus, Analyzer::smart());
    let mut files = BTreeMap::new();
    for (name, contents) in derived_files(&collection) {
        write_atomic(dir.join(name), contents.as_bytes())?;
        files.insert(name.to_string(), sha256_hex(contents.as_bytes()));
    }
    let manifest = WorkspaceManifest {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        source: SourceInfo {
            path: source.display().to_string(),
            format,
            sha256: sha256_hex(raw.as_bytes()),
        },
        num_docs: collection.len(),
        vocabulary_size: collection.vocabulary().len(),
        files,
    };
    let mut json = serde_json::to_string_pretty(&manifest)?;
    json.push('\n');
    write_atomic(dir.join(MANIFEST_FILE), json.as_bytes())?;
    Ok(manifest)
}

#[derive(Debug)]
pub struct Workspace {
    pub dir: PathBuf,
    pub manifest: WorkspaceManifest,
    /// SHA-256 of `manifest.json` itself, which pins every other file.
    pub manifest_sha256: String,
    pub collection: Collection,
}

/// Loads a workspace, verifying every recorded checksum.
pub fn load(dir: impl AsRef<Path>) -> Result<Workspace> {
    let dir = dir.as_ref();
    let manifest_raw = read_string(dir.join(MANIFEST_FILE))?;
    let manifest: WorkspaceManifest = serde_json::from_str(&manifest_raw)?;
    let corpus_raw = read_string(dir.join(CORPUS_FILE))?;
    check(&manifest, CORPUS_FILE, &sha256_hex(corpus_raw.as_bytes()))?;
    let corpus = Corpus::parse(&corpus_raw, CorpusFormat::Lines)?;
    let collection = Collection::build(corpus, Analyzer::smart());
    // the files on disk and a fresh rebuild must both match the manifest
    for (name, contents) in derived_files(&collection).into_iter().skip(1) {
        let on_disk = std::fs::read(dir.join(name)).map_err(|e| Error::io(dir.join(name), e))?;
        check(&manifest, name, &sha256_hex(&on_disk))?;
        check(&manifest, name, &sha256_hex(contents.as_bytes()))?;
    }
    Ok(Workspace {
        dir: dir.to_path_buf(),
        manifest_sha256: sha256_hex(manifest_raw.as_bytes()),
        manifest,
        collection,
    })
}

fn check(manifest: &WorkspaceManifest, name: &str, found: &str) -> Result<()> {
    let expected = manifest
        .files
        .get(name)
        .ok_or_else(|| Error::malformed(MANIFEST_FILE, format!("no checksum for {name}")))?;
    if expected != found {
        return Err(Error::ChecksumMismatch {
            what: name.to_string(),
            expected: expected.clone(),
            found: found.to_string(),
        });
    }
    Ok(())
}
