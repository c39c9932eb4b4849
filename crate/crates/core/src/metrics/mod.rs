//! Evaluation metrics: XEB fidelity, χ² goodness of fit, entropy, L1
//! distance, conditional-probability structure, and exponential curve fits.

pub mod special;

use rayon::prelude::*;

use crate::dist::{compensated_sum, ExplicitDistribution};
use crate::error::{Error, Result};
use crate::samples::SampleSet;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.5772156649015329;

// ---------------------------------------------------------------------------
// XEB fidelity
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XebResult {
    pub fidelity: f64,
    pub sample_count: usize,
    pub standard_error: f64,
}

/// Linear cross-entropy sample fidelity, F = 2^n · mean(P(s)) - 1.
///
/// This is the sample-mean estimator: it reads 1 for ideal samples from a
/// deep-circuit (Porter-Thomas shaped) distribution and 0 for uniform
/// samples, at any sample count. The standard error is the sample standard
/// deviation of 2^n·P(s) divided by √N.
pub fn xeb(samples: &SampleSet, truth: &ExplicitDistribution) -> Result<XebResult> {
    if samples.n() != truth.n() {
        return Err(Error::WidthMismatch { left: samples.n(), right: truth.n() });
    }
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let dim = truth.len() as f64;
    let n = samples.len();
    let mean = compensated_sum(samples.values().iter().map(|&s| truth.prob(s))) / n as f64;
    let scaled_mean = dim * mean;
    let var = if n > 1 {
        compensated_sum(
            samples.values().iter().map(|&s| {
                let d = dim * truth.prob(s) - scaled_mean;
                d * d
            }),
        ) / (n - 1) as f64
    } else {
        0.0
    };
    Ok(XebResult {
        fidelity: scaled_mean - 1.0,
        sample_count: n,
        standard_error: (var / n as f64).sqrt(),
    })
}

/// The raw linear form 2·Σ_{s∈samples} P(s) - 1 without sample-mean
/// normalization. Kept for transparency next to [`xeb`]; it equals 1 for
/// ideal deep-circuit samples only at specific sample counts.
pub fn xeb_raw(samples: &SampleSet, truth: &ExplicitDistribution) -> Result<f64> {
    if samples.n() != truth.n() {
        return Err(Error::WidthMismatch { left: samples.n(), right: truth.n() });
    }
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    Ok(2.0 * compensated_sum(samples.values().iter().map(|&s| truth.prob(s))) - 1.0)
}

impl XebResult {
    pub fn csv_header() -> &'static str {
        "fidelity,sample_count,standard_error"
    }

    pub fn to_csv_row(&self) -> String {
        format!("{},{},{}", self.fidelity, self.sample_count, self.standard_error)
    }
}

// ---------------------------------------------------------------------------
// χ² goodness of fit
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chi2Result {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
}

/// Pearson χ² of observed per-bin counts against a null distribution.
///
/// statistic = Σ (x_i - N·p_i)² / (N·p_i) over bins with p_i > 0;
/// dof = bins - 1; the p-value is the regularized upper incomplete gamma
/// Q(dof/2, χ²/2). A bin with zero null probability but nonzero count is an
/// impossible outcome and rejected.
pub fn chi2_test(observed: &[u64], null: &ExplicitDistribution) -> Result<Chi2Result> {
    if observed.len() != null.len() {
        return Err(Error::InvalidDistribution(format!(
            "{} observed bins vs {} null bins",
            observed.len(),
            null.len()
        )));
    }
    let total: u64 = observed.iter().sum();
    if total == 0 {
        return Err(Error::EmptySamples);
    }
    let n_f = total as f64;
    let mut terms = Vec::with_capacity(observed.len());
    for (bin, (&x, &p)) in observed.iter().zip(null.probs()).enumerate() {
        if p <= 0.0 {
            if x > 0 {
                return Err(Error::ImpossibleOutcome { bin: bin as u64, count: x });
            }
            continue;
        }
        let m = n_f * p;
        let d = x as f64 - m;
        terms.push(d * d / m);
    }
    let statistic = compensated_sum(terms);
    let dof = observed.len() - 1;
    let p_value = special::gamma_q(dof as f64 / 2.0, statistic / 2.0);
    Ok(Chi2Result { statistic, degrees_of_freedom: dof, p_value })
}

pub fn chi2_from_samples(samples: &SampleSet, null: &ExplicitDistribution) -> Result<Chi2Result> {
    if samples.n() != null.n() {
        return Err(Error::WidthMismatch { left: samples.n(), right: null.n() });
    }
    chi2_test(&samples.counts()?, null)
}

impl Chi2Result {
    pub fn csv_header() -> &'static str {
        "statistic,degrees_of_freedom,p_value"
    }

    pub fn to_csv_row(&self) -> String {
        format!("{},{},{}", self.statistic, self.degrees_of_freedom, self.p_value)
    }
}

// ---------------------------------------------------------------------------
// Entropy and L1 distance
// ---------------------------------------------------------------------------

/// Shannon entropy -Σ p·ln p in nats, skipping zero entries.
pub fn entropy(dist: &ExplicitDistribution) -> f64 {
    -compensated_sum(dist.probs().iter().filter(|&&p| p > 0.0).map(|&p| p * p.ln()))
}

/// Entropy of the ideal deep-circuit (Porter-Thomas) profile:
/// ln(2^n) - 1 + γ.
pub fn pt_reference_entropy(n: usize) -> f64 {
    n as f64 * std::f64::consts::LN_2 - 1.0 + EULER_GAMMA
}

/// Raw L1 distance Σ|a - b|. Total variation distance is half of this.
pub fn l1_distance(a: &ExplicitDistribution, b: &ExplicitDistribution) -> Result<f64> {
    if a.n() != b.n() {
        return Err(Error::WidthMismatch { left: a.n(), right: b.n() });
    }
    Ok(compensated_sum(
        a.probs().iter().zip(b.probs()).map(|(x, y)| (x - y).abs()),
    ))
}

/// Total variation distance, L1/2.
pub fn total_variation(a: &ExplicitDistribution, b: &ExplicitDistribution) -> Result<f64> {
    Ok(l1_distance(a, b)? / 2.0)
}

// ---------------------------------------------------------------------------
// Conditional-probability structure
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalEntry {
    pub target: usize,
    pub conditioning: Vec<usize>,
    /// Bit j of `assignment` is the value fixed for `conditioning[j]`.
    pub assignment: u64,
    /// P(target = 1 | assignment); `None` when the conditioning event has
    /// zero probability.
    pub p_one: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderReport {
    pub order: usize,
    /// max |P - 1/2| over defined entries.
    pub max_deviation: f64,
    pub entries: Vec<ConditionalEntry>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalReport {
    pub n: usize,
    pub orders: Vec<OrderReport>,
}

/// Exact conditional probabilities P(target = 1 | conditioning assignment)
/// for every target bit, conditioning set of size 1..=max_order and
/// assignment, by marginalization sums over the explicit distribution.
pub fn conditional_report(
    dist: &ExplicitDistribution,
    max_order: usize,
) -> Result<ConditionalReport> {
    if !(1..=3).contains(&max_order) {
        return Err(Error::Parse(format!("conditioning order {max_order} outside 1..=3")));
    }
    let n = dist.n();
    if max_order >= 3 && n > 20 {
        return Err(Error::QubitCount { n, max: 20 });
    }
    if max_order >= n {
        return Err(Error::Parse(format!(
            "conditioning order {max_order} needs more than {n} qubits"
        )));
    }
    let mut orders = Vec::new();
    for order in 1..=max_order {
        let tasks: Vec<(usize, Vec<usize>)> = (0..n)
            .flat_map(|target| {
                let others: Vec<usize> = (0..n).filter(|&q| q != target).collect();
                combinations(&others, order).into_iter().map(move |c| (target, c))
            })
            .collect();
        let groups: Vec<Vec<ConditionalEntry>> = tasks
            .par_iter()
            .map(|(target, conditioning)| conditionals_for(dist, *target, conditioning))
            .collect();
        let entries: Vec<ConditionalEntry> = groups.into_iter().flatten().collect();
        let max_deviation = entries
            .iter()
            .filter_map(|e| e.p_one)
            .map(|p| (p - 0.5).abs())
            .fold(0.0, f64::max);
        orders.push(OrderReport { order, max_deviation, entries });
    }
    Ok(ConditionalReport { n, orders })
}

fn conditionals_for(
    dist: &ExplicitDistribution,
    target: usize,
    conditioning: &[usize],
) -> Vec<ConditionalEntry> {
    let cells = 1usize << conditioning.len();
    // one pass: joint mass per (assignment, target-bit) cell
    let mut mass = vec![0.0f64; cells * 2];
    for (idx, &p) in dist.probs().iter().enumerate() {
        let mut a = 0usize;
        for (j, &q) in conditioning.iter().enumerate() {
            a |= ((idx >> q) & 1) << j;
        }
        let t = (idx >> target) & 1;
        mass[a * 2 + t] += p;
    }
    (0..cells)
        .map(|a| {
            let zero = mass[a * 2];
            let one = mass[a * 2 + 1];
            let tot = zero + one;
            ConditionalEntry {
                target,
                conditioning: conditioning.to_vec(),
                assignment: a as u64,
                p_one: (tot > 0.0).then(|| one / tot),
            }
        })
        .collect()
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn go(items: &[usize], k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..items.len() {
            current.push(items[i]);
            go(items, k, i + 1, current, out);
            current.pop();
        }
    }
    go(items, k, 0, &mut current, &mut out);
    out
}

impl ConditionalReport {
    pub fn csv_header() -> &'static str {
        "order,target,conditioning,assignment,probability"
    }

    /// One row per entry; undefined entries render an empty probability.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::csv_header());
        out.push('\n');
        for order in &self.orders {
            for e in &order.entries {
                let cond = e
                    .conditioning
                    .iter()
                    .map(|q| q.to_string())
                    .collect::<Vec<_>>()
                    .join("|");
                let p = e.p_one.map(|p| p.to_string()).unwrap_or_default();
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    order.order, e.target, cond, e.assignment, p
                ));
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Exponential curve fitting
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub rms_residual: f64,
    /// Set when y is constant (fit reduces to the mean) or the optimum sits
    /// at b = 0 where `a` and `c` are not separately identifiable.
    pub degenerate: bool,
}

/// Least-squares fit of y = a·e^{bx} + c.
///
/// `b` is located by a coarse scan plus golden-section refinement over the
/// documented bracket |b| <= 40 / max|x|; at each candidate b, (a, c) solve
/// the linear problem in closed form.
pub fn fit_exponential(points: &[(f64, f64)]) -> Result<ExpFit> {
    if points.len() < 4 {
        return Err(Error::Parse(format!(
            "exponential fit needs at least 4 points, got {}",
            points.len()
        )));
    }
    let mut xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    if xs.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Parse("exponential fit needs distinct x values".into()));
    }
    if points.iter().any(|&(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::Parse("exponential fit needs finite points".into()));
    }

    let y_mean = points.iter().map(|p| p.1).sum::<f64>() / points.len() as f64;
    let y_var: f64 = points.iter().map(|p| (p.1 - y_mean).powi(2)).sum();
    if y_var == 0.0 {
        return Ok(ExpFit { a: 0.0, b: 0.0, c: y_mean, rms_residual: 0.0, degenerate: true });
    }

    let x_scale = points.iter().map(|p| p.0.abs()).fold(0.0, f64::max);
    let b_max = 40.0 / x_scale;

    let sse = |b: f64| solve_linear(points, b).3;

    // coarse scan, then golden-section inside the best neighborhood
    let grid = 400usize;
    let mut best_i = 0usize;
    let mut best = f64::INFINITY;
    for i in 0..=grid {
        let b = -b_max + 2.0 * b_max * i as f64 / grid as f64;
        let v = sse(b);
        if v < best {
            best = v;
            best_i = i;
        }
    }
    let mut lo = -b_max + 2.0 * b_max * best_i.saturating_sub(1) as f64 / grid as f64;
    let mut hi = -b_max + 2.0 * b_max * (best_i + 1).min(grid) as f64 / grid as f64;
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut m1 = hi - inv_phi * (hi - lo);
    let mut m2 = lo + inv_phi * (hi - lo);
    let mut f1 = sse(m1);
    let mut f2 = sse(m2);
    for _ in 0..200 {
        if (hi - lo).abs() < 1e-14 * b_max.max(1.0) {
            break;
        }
        if f1 <= f2 {
            hi = m2;
            m2 = m1;
            f2 = f1;
            m1 = hi - inv_phi * (hi - lo);
            f1 = sse(m1);
        } else {
            lo = m1;
            m1 = m2;
            f1 = f2;
            m2 = lo + inv_phi * (hi - lo);
            f2 = sse(m2);
        }
    }
    let b = if f1 <= f2 { m1 } else { m2 };
    let (a, b, c, best_sse) = solve_linear(points, b);
    let degenerate = a == 0.0;
    Ok(ExpFit {
        a,
        b: if degenerate { 0.0 } else { b },
        c,
        rms_residual: (best_sse / points.len() as f64).max(0.0).sqrt(),
        degenerate,
    })
}

/// Closed-form (a, c) minimizing Σ(y - a·e^{bx} - c)² at fixed b.
fn solve_linear(points: &[(f64, f64)], b: f64) -> (f64, f64, f64, f64) {
    let n = points.len() as f64;
    let us: Vec<f64> = points.iter().map(|&(x, _)| (b * x).exp()).collect();
    let u_mean = us.iter().sum::<f64>() / n;
    let y_mean = points.iter().map(|p| p.1).sum::<f64>() / n;
    let mut suu = 0.0;
    let mut suy = 0.0;
    let mut syy = 0.0;
    for (&(_, y), &u) in points.iter().zip(&us) {
        suu += (u - u_mean) * (u - u_mean);
        suy += (u - u_mean) * (y - y_mean);
        syy += (y - y_mean) * (y - y_mean);
    }
    if suu < 1e-300 || !suu.is_finite() {
        // e^{bx} indistinguishable from constant: mean-only fit
        return (0.0, b, y_mean, syy);
    }
    let a = suy / suu;
    let c = y_mean - a * u_mean;
    let sse = (syy - a * suy).max(0.0);
    (a, b, c, sse)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Prng;

    #[test]
    fn xeb_of_argmax_sampler() {
        // all samples on the most likely string: F = 2^n·P(j*) - 1
        let d = ExplicitDistribution::new(2, vec![0.1, 0.6, 0.2, 0.1]).unwrap();
        let s = SampleSet::new(2, vec![1; 50], "t", None).unwrap();
        let r = xeb(&s, &d).unwrap();
        assert!((r.fidelity - (4.0 * 0.6 - 1.0)).abs() < 1e-12);
        assert!(r.standard_error.abs() < 1e-12);
    }

    #[test]
    fn xeb_of_uniform_samples_near_zero() {
        let mut rng = Prng::new(4);
        let truth = crate::porter_thomas::porter_thomas_probs(10, &mut rng).unwrap();
        let uni = ExplicitDistribution::uniform(10).unwrap();
        let s = uni.sample(100_000, &mut Prng::new(9), "t").unwrap();
        let r = xeb(&s, &truth).unwrap();
        assert!(r.fidelity.abs() < 4.0 * r.standard_error + 0.02, "{r:?}");
    }

    #[test]
    fn chi2_exact_counts_give_zero_and_p_one() {
        let d = ExplicitDistribution::uniform(3).unwrap();
        let observed = vec![25u64; 8];
        let r = chi2_test(&observed, &d).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.degrees_of_freedom, 7);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn chi2_textbook_value() {
        // n=1 uniform, observed (60, 40): χ² = 10²/50 + 10²/50 = 4
        let d = ExplicitDistribution::uniform(1).unwrap();
        let r = chi2_test(&[60, 40], &d).unwrap();
        assert!((r.statistic - 4.0).abs() < 1e-12);
        assert_eq!(r.degrees_of_freedom, 1);
    }

    #[test]
    fn chi2_impossible_outcome() {
        let d = ExplicitDistribution::new(1, vec![1.0, 0.0]).unwrap();
        let err = chi2_test(&[5, 1], &d).unwrap_err();
        assert!(matches!(err, Error::ImpossibleOutcome { bin: 1, count: 1 }));
    }

    #[test]
    fn entropy_values() {
        let point = ExplicitDistribution::point_mass(4, 3).unwrap();
        assert_eq!(entropy(&point), 0.0);
        let uni = ExplicitDistribution::uniform(12).unwrap();
        assert!((entropy(&uni) - 4096f64.ln()).abs() < 1e-9);
        assert!((pt_reference_entropy(12) - 7.8950).abs() < 5e-5);
    }

    #[test]
    fn l1_distance_cases() {
        let a = ExplicitDistribution::point_mass(2, 0).unwrap();
        let b = ExplicitDistribution::point_mass(2, 3).unwrap();
        assert_eq!(l1_distance(&a, &a).unwrap(), 0.0);
        assert_eq!(l1_distance(&a, &b).unwrap(), 2.0);
        assert_eq!(total_variation(&a, &b).unwrap(), 1.0);
    }

    #[test]
    fn l1_is_a_metric_on_random_triples() {
        let mut rng = Prng::new(8);
        for _ in 0..20 {
            let d1 = crate::porter_thomas::porter_thomas_probs(5, &mut rng).unwrap();
            let d2 = crate::porter_thomas::porter_thomas_probs(5, &mut rng).unwrap();
            let d3 = crate::porter_thomas::porter_thomas_probs(5, &mut rng).unwrap();
            let ab = l1_distance(&d1, &d2).unwrap();
            let ba = l1_distance(&d2, &d1).unwrap();
            assert!((ab - ba).abs() < 1e-12);
            let ac = l1_distance(&d1, &d3).unwrap();
            let cb = l1_distance(&d3, &d2).unwrap();
            assert!(ab <= ac + cb + 1e-12);
        }
    }

    #[test]
    fn conditionals_uniform_and_point_mass() {
        let uni = ExplicitDistribution::uniform(4).unwrap();
        let r = conditional_report(&uni, 3).unwrap();
        for o in &r.orders {
            assert!(o.max_deviation < 1e-12);
        }

        let pm = ExplicitDistribution::point_mass(2, 0b11).unwrap();
        let r = conditional_report(&pm, 1).unwrap();
        let e = r.orders[0]
            .entries
            .iter()
            .find(|e| e.target == 0 && e.conditioning == vec![1] && e.assignment == 1)
            .unwrap();
        assert_eq!(e.p_one, Some(1.0));
        // conditioning on qubit 1 = 0 is a zero-probability event
        let u = r.orders[0]
            .entries
            .iter()
            .find(|e| e.target == 0 && e.conditioning == vec![1] && e.assignment == 0)
            .unwrap();
        assert_eq!(u.p_one, None);
    }

    #[test]
    fn conditionals_of_product_distribution_are_flat_in_conditioning() {
        // per-bit marginals only; conditioning must change nothing
        let p = [0.3, 0.8, 0.55];
        let mut probs = vec![0.0; 8];
        for (idx, item) in probs.iter_mut().enumerate() {
            let mut v = 1.0;
            for (q, &pq) in p.iter().enumerate() {
                v *= if (idx >> q) & 1 == 1 { pq } else { 1.0 - pq };
            }
            *item = v;
        }
        let d = ExplicitDistribution::new(3, probs).unwrap();
        let r = conditional_report(&d, 2).unwrap();
        for o in &r.orders {
            for e in &o.entries {
                let expect = p[e.target];
                assert!((e.p_one.unwrap() - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn exponential_fit_recovers_noiseless_parameters() {
        let pts: Vec<(f64, f64)> =
            (0..=5).map(|i| (i as f64, 2.0 * (0.5 * i as f64).exp() + 1.0)).collect();
        let fit = fit_exponential(&pts).unwrap();
        assert!((fit.a - 2.0).abs() < 1e-6, "{fit:?}");
        assert!((fit.b - 0.5).abs() < 1e-6, "{fit:?}");
        assert!((fit.c - 1.0).abs() < 1e-6, "{fit:?}");
        assert!(fit.rms_residual < 1e-7);
        assert!(!fit.degenerate);
    }

    #[test]
    fn exponential_fit_constant_flags_degenerate() {
        let pts: Vec<(f64, f64)> = (0..6).map(|i| (i as f64, 3.0)).collect();
        let fit = fit_exponential(&pts).unwrap();
        assert_eq!((fit.a, fit.b, fit.c), (0.0, 0.0, 3.0));
        assert!(fit.degenerate);
    }

    #[test]
    fn exponential_fit_rejects_bad_input() {
        assert!(fit_exponential(&[(0.0, 1.0), (1.0, 2.0)]).is_err());
        assert!(fit_exponential(&[(0.0, 1.0), (0.0, 2.0), (1.0, 3.0), (2.0, 4.0)]).is_err());
    }
}
