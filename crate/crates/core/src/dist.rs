//! Explicit probability distributions over n-bit strings.

use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::bits::check_width;
use crate::error::{Error, Result};
use crate::rng::Prng;
use crate::samples::SampleSet;
use crate::MAX_EXPLICIT_QUBITS;

/// Tolerance on the total probability mass.
pub const NORM_TOL: f64 = 1e-9;

/// Magic bytes of the binary distribution file format.
pub const QSLD_MAGIC: &[u8; 4] = b"QSLD";
const QSLD_VERSION: u8 = 1;

/// Number of draws handed to one worker when sampling is parallelized.
/// Fixed so that output does not depend on the worker count.
const SAMPLE_CHUNK: usize = 1 << 16;

/// A dense array of 2^n probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplicitDistribution {
    n: usize,
    probs: Vec<f64>,
}

/// Neumaier compensated sum; used wherever a 2^n-length sum feeds a tolerance.
pub(crate) fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

impl ExplicitDistribution {
    /// Validates entries (nonnegative, summing to 1 within `NORM_TOL`).
    pub fn new(n: usize, probs: Vec<f64>) -> Result<Self> {
        check_explicit_width(n)?;
        if probs.len() != 1 << n {
            return Err(Error::InvalidDistribution(format!(
                "expected {} entries for {} qubits, got {}",
                1usize << n,
                n,
                probs.len()
            )));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidDistribution(format!("bad entry {p}")));
        }
        let total = compensated_sum(probs.iter().copied());
        if (total - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidDistribution(format!(
                "entries sum to {total}, not 1"
            )));
        }
        Ok(ExplicitDistribution { n, probs })
    }

    /// Normalizes arbitrary nonnegative weights into a distribution.
    pub fn from_weights(n: usize, mut weights: Vec<f64>) -> Result<Self> {
        check_explicit_width(n)?;
        if weights.len() != 1 << n {
            return Err(Error::InvalidDistribution(format!(
                "expected {} weights, got {}",
                1usize << n,
                weights.len()
            )));
        }
        let total = compensated_sum(weights.iter().copied());
        if !(total.is_finite() && total > 0.0) {
            return Err(Error::InvalidDistribution(format!("weight sum {total}")));
        }
        for w in &mut weights {
            *w /= total;
        }
        Self::new(n, weights)
    }

    pub fn uniform(n: usize) -> Result<Self> {
        check_explicit_width(n)?;
        let len = 1usize << n;
        Ok(ExplicitDistribution { n, probs: vec![1.0 / len as f64; len] })
    }

    pub fn point_mass(n: usize, index: u64) -> Result<Self> {
        check_explicit_width(n)?;
        let len = 1usize << n;
        if index >= len as u64 {
            return Err(Error::InvalidDistribution(format!(
                "point mass index {index} out of range"
            )));
        }
        let mut probs = vec![0.0; len];
        probs[index as usize] = 1.0;
        Ok(ExplicitDistribution { n, probs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn prob(&self, index: u64) -> f64 {
        self.probs[index as usize]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// f·P + (1-f)·Uniform.
    pub fn mix_with_uniform(&self, f: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&f) {
            return Err(Error::InvalidDistribution(format!(
                "mixing fidelity {f} outside [0, 1]"
            )));
        }
        let u = (1.0 - f) / self.len() as f64;
        let probs = self.probs.iter().map(|p| f * p + u).collect();
        ExplicitDistribution::new(self.n, probs)
    }

    /// `count` i.i.d. draws by inverse CDF with binary search. Deterministic
    /// given the seed of `rng`.
    pub fn sample(&self, count: usize, rng: &mut Prng, tag: &str) -> Result<SampleSet> {
        if count == 0 {
            return Err(Error::EmptyRequest);
        }
        let cdf = self.cdf()?;
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            out.push(draw(&cdf, rng));
        }
        SampleSet::new(self.n, out, tag, None)
    }

    /// Parallel variant of [`ExplicitDistribution::sample`]. Work is split
    /// into fixed-size chunks, chunk `i` uses `Prng::derive_seed(seed, i)`,
    /// and results are concatenated in chunk order, so the output depends
    /// only on `seed`, never on the worker count.
    pub fn sample_seeded(&self, count: usize, seed: u64, tag: &str) -> Result<SampleSet> {
        if count == 0 {
            return Err(Error::EmptyRequest);
        }
        let cdf = self.cdf()?;
        let chunks: Vec<(u64, usize)> = (0..count.div_ceil(SAMPLE_CHUNK))
            .map(|i| (i as u64, SAMPLE_CHUNK.min(count - i * SAMPLE_CHUNK)))
            .collect();
        let parts: Vec<Vec<u64>> = chunks
            .par_iter()
            .map(|&(i, len)| {
                let mut rng = Prng::new(Prng::derive_seed(seed, i));
                (0..len).map(|_| draw(&cdf, &mut rng)).collect()
            })
            .collect();
        let mut out = Vec::with_capacity(count);
        for p in parts {
            out.extend_from_slice(&p);
        }
        SampleSet::new(self.n, out, tag, Some(seed))
    }

    /// Empirical distribution of a sample set: `probs[j] = count(j)/N`.
    pub fn empirical(samples: &SampleSet) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySamples);
        }
        check_explicit_width(samples.n())?;
        let mut counts = vec![0u64; 1 << samples.n()];
        for &s in samples.values() {
            counts[s as usize] += 1;
        }
        let total = samples.len() as f64;
        let probs = counts.iter().map(|&c| c as f64 / total).collect();
        ExplicitDistribution::new(samples.n(), probs)
    }

    fn cdf(&self) -> Result<Vec<f64>> {
        let mut cdf = Vec::with_capacity(self.probs.len());
        let mut acc = 0.0;
        for &p in &self.probs {
            acc += p;
            cdf.push(acc);
        }
        let total = *cdf.last().expect("nonempty");
        if (total - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidDistribution(format!(
                "cumulative mass {total}, not 1"
            )));
        }
        Ok(cdf)
    }

    // ---- file formats ----

    /// Binary format: magic "QSLD", version byte, qubit-count byte, then 2^n
    /// little-endian IEEE f64 probabilities.
    pub fn write_qsld<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(QSLD_MAGIC)?;
        w.write_all(&[QSLD_VERSION, self.n as u8])?;
        for p in &self.probs {
            w.write_all(&p.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_qsld<R: Read>(mut r: R) -> Result<Self> {
        let mut head = [0u8; 6];
        r.read_exact(&mut head)?;
        if &head[..4] != QSLD_MAGIC {
            return Err(Error::Parse("not a QSLD file (bad magic)".into()));
        }
        if head[4] != QSLD_VERSION {
            return Err(Error::Parse(format!("unsupported QSLD version {}", head[4])));
        }
        let n = head[5] as usize;
        check_explicit_width(n)?;
        let mut probs = vec![0.0f64; 1 << n];
        let mut buf = [0u8; 8];
        for p in &mut probs {
            r.read_exact(&mut buf)?;
            *p = f64::from_le_bytes(buf);
        }
        let mut extra = [0u8; 1];
        if r.read(&mut extra)? != 0 {
            return Err(Error::Parse("trailing bytes after QSLD payload".into()));
        }
        ExplicitDistribution::new(n, probs)
    }

    /// CSV alternative (`index,probability` with a header), capped at n <= 16.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        if self.n > 16 {
            return Err(Error::InvalidDistribution(format!(
                "csv output capped at 16 qubits, got {}",
                self.n
            )));
        }
        writeln!(w, "index,probability")?;
        for (i, p) in self.probs.iter().enumerate() {
            writeln!(w, "{i},{p}")?;
        }
        Ok(())
    }

    pub fn read_csv<R: Read>(mut r: R) -> Result<Self> {
        let mut text = String::new();
        r.read_to_string(&mut text)?;
        let mut rows = Vec::new();
        for (no, line) in text.lines().enumerate() {
            if no == 0 && line.trim() == "index,probability" {
                continue;
            }
            let (idx, prob) = line
                .split_once(',')
                .ok_or_else(|| Error::SampleLine { line: no + 1, reason: "expected index,probability".into() })?;
            let idx: usize = idx.trim().parse().map_err(|e| Error::SampleLine {
                line: no + 1,
                reason: format!("bad index: {e}"),
            })?;
            let prob: f64 = prob.trim().parse().map_err(|e| Error::SampleLine {
                line: no + 1,
                reason: format!("bad probability: {e}"),
            })?;
            if idx != rows.len() {
                return Err(Error::SampleLine {
                    line: no + 1,
                    reason: format!("expected index {}, got {idx}", rows.len()),
                });
            }
            rows.push(prob);
        }
        let n = rows.len().trailing_zeros() as usize;
        if rows.is_empty() || rows.len() != 1 << n {
            return Err(Error::Parse(format!("{} rows is not a power of two", rows.len())));
        }
        ExplicitDistribution::new(n, rows)
    }

    /// Dispatches on extension: `.csv` is text, anything else is QSLD binary.
    pub fn write_file(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        let mut w = std::io::BufWriter::new(file);
        if path.extension().is_some_and(|e| e == "csv") {
            self.write_csv(&mut w)
        } else {
            self.write_qsld(&mut w)
        }
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        let r = std::io::BufReader::new(file);
        if path.extension().is_some_and(|e| e == "csv") {
            Self::read_csv(r)
        } else {
            Self::read_qsld(r)
        }
    }
}

fn draw(cdf: &[f64], rng: &mut Prng) -> u64 {
    let u = rng.next_f64();
    let idx = cdf.partition_point(|&c| c <= u);
    idx.min(cdf.len() - 1) as u64
}

pub(crate) fn check_explicit_width(n: usize) -> Result<()> {
    check_width(n)?;
    if n > MAX_EXPLICIT_QUBITS {
        return Err(Error::QubitCount { n, max: MAX_EXPLICIT_QUBITS });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_mass_sampling() {
        let d = ExplicitDistribution::point_mass(3, 5).unwrap();
        let mut rng = Prng::new(1);
        let s = d.sample(4, &mut rng, "t").unwrap();
        assert_eq!(s.values(), &[5, 5, 5, 5]);
    }

    #[test]
    fn uniform_one_qubit_frequency() {
        let d = ExplicitDistribution::uniform(1).unwrap();
        let mut rng = Prng::new(123);
        let s = d.sample(1_000_000, &mut rng, "t").unwrap();
        let ones = s.values().iter().filter(|&&v| v == 1).count() as f64;
        let frac = ones / 1e6;
        assert!((0.498..=0.502).contains(&frac), "fraction {frac}");
    }

    #[test]
    fn zero_count_is_an_error() {
        let d = ExplicitDistribution::uniform(2).unwrap();
        let mut rng = Prng::new(1);
        assert!(matches!(d.sample(0, &mut rng, "t"), Err(Error::EmptyRequest)));
    }

    #[test]
    fn rejects_unnormalized() {
        assert!(ExplicitDistribution::new(1, vec![0.6, 0.6]).is_err());
        assert!(ExplicitDistribution::new(1, vec![-0.1, 1.1]).is_err());
        assert!(ExplicitDistribution::new(1, vec![0.5, 0.25, 0.25]).is_err());
    }

    #[test]
    fn empirical_basics() {
        let s = SampleSet::new(1, vec![0, 0, 1, 1], "t", None).unwrap();
        let d = ExplicitDistribution::empirical(&s).unwrap();
        assert_eq!(d.probs(), &[0.5, 0.5]);

        let s = SampleSet::new(3, vec![5, 5, 5, 5], "t", None).unwrap();
        let d = ExplicitDistribution::empirical(&s).unwrap();
        assert_eq!(d.prob(5), 1.0);
        assert_eq!(d.probs().iter().sum::<f64>(), 1.0);
    }

    #[test]
    fn sampling_is_deterministic_and_split_invariant() {
        let d = ExplicitDistribution::from_weights(4, (1..=16).map(f64::from).collect()).unwrap();
        let a = d.sample_seeded(200_000, 9, "t").unwrap();
        let b = d.sample_seeded(200_000, 9, "t").unwrap();
        assert_eq!(a.values(), b.values());
    }

    #[test]
    fn zero_probability_bins_never_drawn() {
        let d = ExplicitDistribution::new(2, vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        let mut rng = Prng::new(5);
        let s = d.sample(10_000, &mut rng, "t").unwrap();
        assert!(s.values().iter().all(|&v| v == 0 || v == 3));
    }

    #[test]
    fn qsld_round_trip() {
        let d = ExplicitDistribution::from_weights(3, (1..=8).map(f64::from).collect()).unwrap();
        let mut buf = Vec::new();
        d.write_qsld(&mut buf).unwrap();
        assert_eq!(&buf[..4], QSLD_MAGIC);
        let back = ExplicitDistribution::read_qsld(buf.as_slice()).unwrap();
        assert_eq!(d, back);
    }

    #[test]
    fn csv_round_trip_and_cap() {
        let d = ExplicitDistribution::uniform(2).unwrap();
        let mut buf = Vec::new();
        d.write_csv(&mut buf).unwrap();
        let back = ExplicitDistribution::read_csv(buf.as_slice()).unwrap();
        assert_eq!(d, back);
    }

    #[test]
    fn mix_with_uniform_endpoints() {
        let d = ExplicitDistribution::point_mass(2, 3).unwrap();
        assert_eq!(d.mix_with_uniform(1.0).unwrap(), d);
        let u = d.mix_with_uniform(0.0).unwrap();
        assert_eq!(u, ExplicitDistribution::uniform(2).unwrap());
    }
}
