//! Desk-scale generative baselines: a variable-order autoregressive table
//! model (sequential, bit-by-bit generation) and a product-Bernoulli model
//! (one-shot generation). Both are exact maximum-likelihood fits, so the
//! capacity axis is the context length k alone.
//!
//! Bits are generated in position order 0..n (least significant first,
//! matching the global bit convention). The context at position t is the
//! last min(t, k) generated bits, packed with the newest bit in the lowest
//! context bit: ctx = Σ_j bit_{t-1-j}·2^j.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dist::{check_explicit_width, ExplicitDistribution};
use crate::error::{Error, Result};
use crate::metrics;
use crate::rng::Prng;
use crate::samples::SampleSet;

/// Enumeration cap for explicit model distributions.
pub const MODEL_ENUMERATION_CAP: usize = 20;

/// Variable-order autoregressive table model.
///
/// P(bit_t = 1 | context) = (count_1 + α) / (count + 2α) for observed
/// (t, context) cells; unobserved contexts fall back to 1/2 at generation
/// time. With α = 0 and full order the model reproduces empirical
/// frequencies exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct ArTableModel {
    n: usize,
    k: usize,
    alpha: f64,
    table: BTreeMap<(usize, u64), f64>,
}

impl ArTableModel {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Number of stored table entries.
    pub fn parameter_count(&self) -> usize {
        self.table.len()
    }

    fn context_of(&self, partial: u64, t: usize) -> u64 {
        context_value(partial, t, self.k)
    }

    /// P(bit_t = 1 | already-generated bits of `partial`).
    pub fn prob_one(&self, partial: u64, t: usize) -> f64 {
        *self.table.get(&(t, self.context_of(partial, t))).unwrap_or(&0.5)
    }
}

/// ctx = Σ_j bit_{t-1-j}(partial)·2^j over the last min(t, k) positions.
fn context_value(partial: u64, t: usize, k: usize) -> u64 {
    let len = t.min(k);
    let mut ctx = 0u64;
    for j in 0..len {
        ctx |= ((partial >> (t - 1 - j)) & 1) << j;
    }
    ctx
}

/// Fits the autoregressive table by counting; exact and deterministic.
pub fn fit_ar(samples: &SampleSet, k: usize, alpha: f64) -> Result<ArTableModel> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let n = samples.n();
    if k + 1 > n {
        return Err(Error::InvalidModel(format!(
            "context order {k} too large for {n}-bit strings (max {})",
            n - 1
        )));
    }
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidModel(format!("smoothing alpha {alpha} invalid")));
    }
    let mut counts: BTreeMap<(usize, u64), (u64, u64)> = BTreeMap::new();
    for &s in samples.values() {
        for t in 0..n {
            let ctx = context_value(s, t, k);
            let cell = counts.entry((t, ctx)).or_insert((0, 0));
            cell.0 += 1;
            cell.1 += (s >> t) & 1;
        }
    }
    let table = counts
        .into_iter()
        .map(|(key, (total, ones))| {
            (key, (ones as f64 + alpha) / (total as f64 + 2.0 * alpha))
        })
        .collect();
    Ok(ArTableModel { n, k, alpha, table })
}

/// Product-Bernoulli model: independent per-position bit probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductModel {
    n: usize,
    p_one: Vec<f64>,
}

impl ProductModel {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &[f64] {
        &self.p_one
    }

    pub fn parameter_count(&self) -> usize {
        self.n
    }
}

/// p_t = empirical frequency of bit 1 at position t.
pub fn fit_product(samples: &SampleSet) -> Result<ProductModel> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let n = samples.n();
    let total = samples.len() as f64;
    let mut ones = vec![0u64; n];
    for &s in samples.values() {
        for (t, item) in ones.iter_mut().enumerate() {
            *item += (s >> t) & 1;
        }
    }
    Ok(ProductModel { n, p_one: ones.iter().map(|&o| o as f64 / total).collect() })
}

/// Either trained generator.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Ar(ArTableModel),
    Product(ProductModel),
}

impl Model {
    pub fn n(&self) -> usize {
        match self {
            Model::Ar(m) => m.n,
            Model::Product(m) => m.n,
        }
    }

    pub fn parameter_count(&self) -> usize {
        match self {
            Model::Ar(m) => m.parameter_count(),
            Model::Product(m) => m.parameter_count(),
        }
    }

    /// Draws `count` strings. Autoregressive models generate bit by bit,
    /// feeding each sampled bit back as context; the product model draws all
    /// bits independently.
    pub fn sample(&self, count: usize, rng: &mut Prng, tag: &str) -> Result<SampleSet> {
        if count == 0 {
            return Err(Error::EmptyRequest);
        }
        let n = self.n();
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let mut s = 0u64;
            match self {
                Model::Ar(m) => {
                    for t in 0..n {
                        if rng.next_f64() < m.prob_one(s, t) {
                            s |= 1 << t;
                        }
                    }
                }
                Model::Product(m) => {
                    for (t, &p) in m.p_one.iter().enumerate() {
                        if rng.next_f64() < p {
                            s |= 1 << t;
                        }
                    }
                }
            }
            out.push(s);
        }
        SampleSet::new(n, out, tag, None)
    }

    /// The model's explicit distribution by enumerating all 2^n strings and
    /// multiplying conditionals; capped at n <= 20.
    pub fn distribution(&self) -> Result<ExplicitDistribution> {
        let n = self.n();
        if n > MODEL_ENUMERATION_CAP {
            return Err(Error::QubitCount { n, max: MODEL_ENUMERATION_CAP });
        }
        check_explicit_width(n)?;
        let probs: Vec<f64> = (0..1u64 << n)
            .map(|s| {
                let mut p = 1.0;
                for t in 0..n {
                    let bit = (s >> t) & 1;
                    let p1 = match self {
                        Model::Ar(m) => m.prob_one(s, t),
                        Model::Product(m) => m.p_one[t],
                    };
                    p *= if bit == 1 { p1 } else { 1.0 - p1 };
                }
                p
            })
            .collect();
        ExplicitDistribution::new(n, probs)
    }

    pub fn to_json(&self) -> String {
        let file = match self {
            Model::Ar(m) => ModelFile {
                kind: "ar_table".into(),
                n: m.n,
                k: m.k,
                alpha: m.alpha,
                entries: m
                    .table
                    .iter()
                    .map(|(&(t, ctx), &p)| {
                        let len = t.min(m.k);
                        (t, bits_text(ctx, len), p)
                    })
                    .collect(),
            },
            Model::Product(m) => ModelFile {
                kind: "product".into(),
                n: m.n,
                k: 0,
                alpha: 0.0,
                entries: m.p_one.iter().enumerate().map(|(t, &p)| (t, String::new(), p)).collect(),
            },
        };
        serde_json::to_string_pretty(&file).expect("model serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text)?;
        crate::bits::check_width(file.n)?;
        match file.kind.as_str() {
            "ar_table" => {
                let mut table = BTreeMap::new();
                for (t, ctx_text, p) in &file.entries {
                    if *t >= file.n || !(0.0..=1.0).contains(p) {
                        return Err(Error::InvalidModel(format!("bad entry ({t}, {p})")));
                    }
                    table.insert((*t, bits_value(ctx_text)?), *p);
                }
                Ok(Model::Ar(ArTableModel { n: file.n, k: file.k, alpha: file.alpha, table }))
            }
            "product" => {
                let mut p_one = vec![0.5; file.n];
                for (t, _, p) in &file.entries {
                    if *t >= file.n || !(0.0..=1.0).contains(p) {
                        return Err(Error::InvalidModel(format!("bad entry ({t}, {p})")));
                    }
                    p_one[*t] = *p;
                }
                Ok(Model::Product(ProductModel { n: file.n, p_one }))
            }
            other => Err(Error::InvalidModel(format!("unknown model type {other:?}"))),
        }
    }

    pub fn write_file(&self, path: &std::path::Path) -> Result<()> {
        Ok(std::fs::write(path, self.to_json())?)
    }

    pub fn read_file(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Context rendered oldest-position-first, so text index 0 is bit t-len.
fn bits_text(ctx: u64, len: usize) -> String {
    (0..len).rev().map(|j| if (ctx >> j) & 1 == 1 { '1' } else { '0' }).collect()
}

fn bits_value(text: &str) -> Result<u64> {
    let mut v = 0u64;
    for (i, ch) in text.chars().enumerate() {
        match ch {
            '0' => {}
            '1' => v |= 1 << (text.len() - 1 - i),
            other => return Err(Error::InvalidModel(format!("bad context character {other:?}"))),
        }
    }
    Ok(v)
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    #[serde(rename = "type")]
    kind: String,
    n: usize,
    k: usize,
    alpha: f64,
    entries: Vec<(usize, String, f64)>,
}

// ---------------------------------------------------------------------------
// Capacity sweep
// ---------------------------------------------------------------------------

/// A training set paired with the distribution that generated it.
pub struct CapacityDataset<'a> {
    pub tag: String,
    pub samples: &'a SampleSet,
    pub truth: &'a ExplicitDistribution,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityRow {
    pub dataset_tag: String,
    pub k: usize,
    pub parameter_count: usize,
    pub fidelity: f64,
}

/// Fits one AR model per (dataset, order), samples `eval_count` strings from
/// each and reports XEB fidelity against the dataset's generating
/// distribution.
pub fn capacity_sweep(
    datasets: &[CapacityDataset<'_>],
    orders: &[usize],
    alpha: f64,
    eval_count: usize,
    seed: u64,
) -> Result<Vec<CapacityRow>> {
    let mut rows = Vec::new();
    for (d_idx, ds) in datasets.iter().enumerate() {
        for (k_idx, &k) in orders.iter().enumerate() {
            let model = Model::Ar(fit_ar(ds.samples, k, alpha)?);
            let run_seed = Prng::derive_seed(seed, (d_idx * orders.len() + k_idx) as u64);
            let mut rng = Prng::new(run_seed);
            let generated = model.sample(eval_count, &mut rng, &format!("{}_k{k}", ds.tag))?;
            let xeb = metrics::xeb(&generated, ds.truth)?;
            rows.push(CapacityRow {
                dataset_tag: ds.tag.clone(),
                k,
                parameter_count: model.parameter_count(),
                fidelity: xeb.fidelity,
            });
        }
    }
    Ok(rows)
}

pub fn capacity_csv(rows: &[CapacityRow]) -> String {
    let mut out = String::from("k,parameter_count,fidelity,dataset_tag\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{}\n", r.k, r.parameter_count, r.fidelity, r.dataset_tag));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::total_variation;
    use crate::porter_thomas::{make_dataset, Ordering};

    #[test]
    fn point_mass_dataset_regenerates_itself() {
        let s = SampleSet::new(4, vec![0b1011; 100], "t", None).unwrap();
        let m = Model::Ar(fit_ar(&s, 3, 1e-9).unwrap());
        let mut rng = Prng::new(1);
        let out = m.sample(50, &mut rng, "gen").unwrap();
        assert!(out.values().iter().all(|&v| v == 0b1011));
        // product model on a deterministic dataset stores only 0/1
        let p = fit_product(&s).unwrap();
        assert_eq!(p.probs(), &[1.0, 1.0, 0.0, 1.0]);
    }

    #[test]
    fn product_fit_of_two_strings() {
        let s = SampleSet::new(2, vec![0b00, 0b11], "t", None).unwrap();
        let p = fit_product(&s).unwrap();
        assert_eq!(p.probs(), &[0.5, 0.5]);
    }

    #[test]
    fn full_order_zero_smoothing_equals_empirical() {
        let (_, samples) = make_dataset(8, &Ordering::Integer, 20_000, 3).unwrap();
        let empirical = ExplicitDistribution::empirical(&samples).unwrap();
        let m = Model::Ar(fit_ar(&samples, 7, 0.0).unwrap());
        let dist = m.distribution().unwrap();
        let tv = total_variation(&dist, &empirical).unwrap();
        assert!(tv < 1e-12, "tv {tv}");
    }

    #[test]
    fn smoothed_probabilities_stay_inside_open_interval() {
        let s = SampleSet::new(3, vec![0b000; 50], "t", None).unwrap();
        let m = fit_ar(&s, 2, 0.5).unwrap();
        for &p in m.table.values() {
            assert!(p > 0.0 && p < 1.0);
        }
    }

    #[test]
    fn product_distribution_is_outer_product_of_marginals() {
        let s = SampleSet::new(3, vec![0b001, 0b011, 0b111, 0b001], "t", None).unwrap();
        let p = fit_product(&s).unwrap();
        let marg = p.probs().to_vec();
        let d = Model::Product(p).distribution().unwrap();
        for idx in 0..8u64 {
            let mut expect = 1.0;
            for (t, &pt) in marg.iter().enumerate() {
                expect *= if (idx >> t) & 1 == 1 { pt } else { 1.0 - pt };
            }
            assert!((d.prob(idx) - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn parameter_count_monotone_in_order() {
        let (_, samples) = make_dataset(8, &Ordering::Integer, 5_000, 9).unwrap();
        let mut last = 0;
        for k in 0..8 {
            let m = fit_ar(&samples, k, 0.5).unwrap();
            assert!(m.parameter_count() >= last, "k={k}");
            last = m.parameter_count();
        }
        // k = 0 stores one cell per position
        assert_eq!(fit_ar(&samples, 0, 0.5).unwrap().parameter_count(), 8);
    }

    #[test]
    fn full_order_model_tracks_ordered_pt_target() {
        let (dist, samples) = make_dataset(12, &Ordering::Integer, 500_000, 21).unwrap();
        let m = Model::Ar(fit_ar(&samples, 11, 0.05).unwrap());
        let tv = total_variation(&m.distribution().unwrap(), &dist).unwrap();
        assert!(tv < 0.05, "tv {tv}");
    }

    #[test]
    fn model_json_round_trip() {
        let (_, samples) = make_dataset(6, &Ordering::Integer, 2_000, 5).unwrap();
        for model in [
            Model::Ar(fit_ar(&samples, 3, 0.5).unwrap()),
            Model::Product(fit_product(&samples).unwrap()),
        ] {
            let text = model.to_json();
            let back = Model::from_json(&text).unwrap();
            assert_eq!(model, back);
        }
    }

    #[test]
    fn errors_on_empty_and_oversized_order() {
        let empty = SampleSet::new(4, vec![], "t", None).unwrap();
        assert!(matches!(fit_ar(&empty, 1, 0.5), Err(Error::EmptySamples)));
        assert!(matches!(fit_product(&empty), Err(Error::EmptySamples)));
        let s = SampleSet::new(4, vec![1], "t", None).unwrap();
        assert!(fit_ar(&s, 4, 0.5).is_err());
        assert!(fit_ar(&s, 3, 0.5).is_ok());
    }

    #[test]
    fn capacity_sweep_rows_and_monotone_tendency() {
        let (dist, samples) = make_dataset(10, &Ordering::Integer, 100_000, 13).unwrap();
        let ds = CapacityDataset { tag: "pt10".into(), samples: &samples, truth: &dist };
        let rows = capacity_sweep(&[ds], &[0, 2, 5, 9], 0.5, 50_000, 17).unwrap();
        assert_eq!(rows.len(), 4);
        // more context never hurts, up to sampling noise
        for w in rows.windows(2) {
            assert!(w[1].fidelity >= w[0].fidelity - 0.03, "{rows:?}");
        }
        let csv = capacity_csv(&rows);
        assert!(csv.starts_with("k,parameter_count,fidelity,dataset_tag\n"));
        assert_eq!(csv.lines().count(), 5);
    }
}
