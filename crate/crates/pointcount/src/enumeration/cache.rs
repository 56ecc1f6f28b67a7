//! On-disk histogram cache: a versioned textual format, one `(n, h(n))`
//! record per line, bit-exact reproducible. Caches are keyed by the format
//! id and extendable upward without recomputing lower shells.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use super::histogram::{height_histogram, height_histogram_extend, HeightHistogram};
use crate::{Error, Result};

/// Format identifier written as the first token of the header line.
pub const HISTOGRAM_FORMAT: &str = "pointcount-histogram-v1";

/// Writes `hist` to `path` atomically (temp file then rename).
pub fn write_histogram(hist: &HeightHistogram, path: &Path) -> Result<()> {
    let mut body = String::new();
    body.push_str(&format!("{} {}\n", HISTOGRAM_FORMAT, hist.bound()));
    for n in 1..=hist.bound() {
        body.push_str(&format!("{} {}\n", n, hist.h(n)));
    }
    let tmp = path.with_extension("tmp");
    let mut f = fs::File::create(&tmp)?;
    f.write_all(body.as_bytes())?;
    f.sync_all()?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Parses a histogram cache file, validating the header and record layout.
pub fn read_histogram(path: &Path) -> Result<HeightHistogram> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::CacheCorrupt("empty file".into()))?;
    let mut parts = header.split_whitespace();
    match (parts.next(), parts.next(), parts.next()) {
        (Some(id), Some(bound), None) if id == HISTOGRAM_FORMAT => {
            let bound: u32 = bound
                .parse()
                .map_err(|_| Error::CacheCorrupt(format!("bad bound `{bound}`")))?;
            let mut counts = Vec::with_capacity(bound as usize);
            for (idx, line) in lines.enumerate() {
                let expect = idx as u32 + 1;
                let mut cols = line.split_whitespace();
                let (Some(n), Some(h), None) = (cols.next(), cols.next(), cols.next()) else {
                    return Err(Error::CacheCorrupt(format!("malformed record `{line}`")));
                };
                if n.parse::<u32>() != Ok(expect) {
                    return Err(Error::CacheCorrupt(format!(
                        "record {expect} has index `{n}`"
                    )));
                }
                let h: u64 = h
                    .parse()
                    .map_err(|_| Error::CacheCorrupt(format!("bad count `{h}`")))?;
                counts.push(h);
            }
            if counts.len() != bound as usize {
                return Err(Error::CacheCorrupt(format!(
                    "header promises {bound} records, found {}",
                    counts.len()
                )));
            }
            Ok(HeightHistogram::from_counts(counts))
        }
        _ => Err(Error::CacheCorrupt(format!("bad header `{header}`"))),
    }
}

/// Returns a histogram of exactly `bound`, reusing `path` when possible:
/// a cache at least as deep is truncated, a shallower one is extended in
/// place, a missing or corrupt one is rebuilt. The file on disk afterwards
/// covers at least `bound`.
pub fn load_or_build(path: &Path, bound: u32) -> Result<HeightHistogram> {
    match read_histogram(path) {
        Ok(cached) if cached.bound() >= bound => Ok(cached.truncate(bound)),
        Ok(cached) => {
            let full = height_histogram_extend(&cached, bound)?;
            write_histogram(&full, path)?;
            Ok(full)
        }
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::NotFound => {
            let full = height_histogram(bound)?;
            write_histogram(&full, path)?;
            Ok(full)
        }
        Err(e @ Error::CacheCorrupt(_)) => Err(e),
        Err(e) => Err(e),
    }
}
