//! Ordered multisets of measured bitstrings and their text file format.
//!
//! The file format matches released experiment data: one bitstring per line,
//! exactly n characters from {0,1} with qubit n-1 leftmost, LF line endings,
//! no header.

use std::io::{BufRead, Write};
use std::path::Path;

use crate::bits::check_width;
use crate::error::{Error, Result};

/// An ordered multiset of n-bit basis indices plus provenance metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleSet {
    n: usize,
    samples: Vec<u64>,
    source_tag: String,
    seed: Option<u64>,
}

impl SampleSet {
    pub fn new(n: usize, samples: Vec<u64>, source_tag: &str, seed: Option<u64>) -> Result<Self> {
        check_width(n)?;
        if let Some(&bad) = samples.iter().find(|&&s| s >> n != 0) {
            return Err(Error::Parse(format!("sample {bad} does not fit in {n} bits")));
        }
        Ok(SampleSet { n, samples, source_tag: source_tag.to_string(), seed })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn values(&self) -> &[u64] {
        &self.samples
    }

    pub fn source_tag(&self) -> &str {
        &self.source_tag
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Per-bin counts, length 2^n. Requires n small enough for a dense array.
    pub fn counts(&self) -> Result<Vec<u64>> {
        crate::dist::check_explicit_width(self.n)?;
        let mut counts = vec![0u64; 1 << self.n];
        for &s in &self.samples {
            counts[s as usize] += 1;
        }
        Ok(counts)
    }

    pub fn write_text<W: Write>(&self, mut w: W) -> Result<()> {
        let mut line = String::with_capacity(self.n + 1);
        for &s in &self.samples {
            line.clear();
            for q in (0..self.n).rev() {
                line.push(if (s >> q) & 1 == 1 { '1' } else { '0' });
            }
            line.push('\n');
            w.write_all(line.as_bytes())?;
        }
        Ok(())
    }

    /// Reads the line format; rejects ragged lines and foreign characters.
    pub fn read_text<R: BufRead>(r: R, source_tag: &str) -> Result<Self> {
        let mut samples = Vec::new();
        let mut n = 0usize;
        for (no, line) in r.lines().enumerate() {
            let line = line?;
            if no == 0 {
                n = line.len();
                check_width(n).map_err(|_| Error::SampleLine {
                    line: 1,
                    reason: format!("bitstring length {} unsupported", line.len()),
                })?;
            } else if line.len() != n {
                return Err(Error::SampleLine {
                    line: no + 1,
                    reason: format!("ragged line: expected {n} characters, got {}", line.len()),
                });
            }
            let mut value = 0u64;
            for (i, ch) in line.bytes().enumerate() {
                match ch {
                    b'0' => {}
                    b'1' => value |= 1 << (n - 1 - i),
                    other => {
                        return Err(Error::SampleLine {
                            line: no + 1,
                            reason: format!("invalid character {:?}", other as char),
                        })
                    }
                }
            }
            samples.push(value);
        }
        if samples.is_empty() {
            return Err(Error::EmptySamples);
        }
        SampleSet::new(n, samples, source_tag, None)
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_text(std::io::BufWriter::new(file))
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        let tag = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        Self::read_text(std::io::BufReader::new(file), &tag)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let s = SampleSet::new(4, vec![0, 1, 9, 15, 1], "t", Some(3)).unwrap();
        let mut buf = Vec::new();
        s.write_text(&mut buf).unwrap();
        assert_eq!(buf, b"0000\n0001\n1001\n1111\n0001\n");
        let back = SampleSet::read_text(buf.as_slice(), "t").unwrap();
        assert_eq!(back.values(), s.values());
        assert_eq!(back.n(), 4);
    }

    #[test]
    fn qubit_n_minus_1_is_leftmost() {
        let s = SampleSet::new(3, vec![0b001], "t", None).unwrap();
        let mut buf = Vec::new();
        s.write_text(&mut buf).unwrap();
        assert_eq!(buf, b"001\n");
    }

    #[test]
    fn rejects_ragged_and_bad_chars() {
        let err = SampleSet::read_text("0101\n011\n".as_bytes(), "t").unwrap_err();
        assert!(matches!(err, Error::SampleLine { line: 2, .. }));
        let err = SampleSet::read_text("0101\n01a1\n".as_bytes(), "t").unwrap_err();
        assert!(matches!(err, Error::SampleLine { line: 2, .. }));
    }

    #[test]
    fn rejects_wide_samples() {
        assert!(SampleSet::new(2, vec![4], "t", None).is_err());
    }
}
