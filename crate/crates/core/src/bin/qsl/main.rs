//! Batch command-line front end for the sampling lab.
//!
//! Every run is reproducible from its flag set: all randomness is seeded,
//! outputs are byte-stable across reruns and thread counts, and each run
//! writes a manifest (flags, input digests, outputs) next to its primary
//! output file.

mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qsl_core::circuit::{Circuit, Connectivity, TwoQubit, DEFAULT_FSIM_PHI, DEFAULT_FSIM_THETA};
use qsl_core::dbm;
use qsl_core::learner::{self, Model};
use qsl_core::metrics;
use qsl_core::porter_thomas::{self, Ordering, SubsetMask};
use qsl_core::simulator::{self, NoiseModel, SimOptions};
use qsl_core::{Error, ExplicitDistribution, Prng, SampleSet};

#[derive(Parser)]
#[command(name = "qsl", version, about = "Random-circuit sampling lab: simulate, generate, train, evaluate")]
struct Cli {
    /// Worker threads (default: QSL_THREADS env var, then all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Memory cap for state vectors and distributions, in GiB.
    #[arg(long, global = true, default_value_t = 1.0)]
    mem_cap_gib: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a random circuit and write it as JSON.
    Circuit(CircuitArgs),
    /// Simulate a circuit file into an output distribution file.
    Simulate(SimulateArgs),
    /// Draw bitstring samples from a circuit or distribution file.
    Sample(SampleArgs),
    /// Generate an ordered Porter-Thomas distribution (and samples).
    Ptgen(PtgenArgs),
    /// Fit a generative model to a sample file.
    Train(TrainArgs),
    /// Evaluate samples or a model against a truth distribution.
    Eval(EvalArgs),
    /// Structure analyses emitting CSV.
    #[command(subcommand)]
    Analyze(AnalyzeCommand),
}

#[derive(Args)]
struct CircuitArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    depth: usize,
    /// "chain" or "grid:RxC".
    #[arg(long, default_value = "chain")]
    connectivity: String,
    /// "cz" or "fsim".
    #[arg(long, default_value = "fsim")]
    two_qubit: String,
    #[arg(long, default_value_t = DEFAULT_FSIM_THETA)]
    fsim_theta: f64,
    #[arg(long, default_value_t = DEFAULT_FSIM_PHI)]
    fsim_phi: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Forbid a qubit drawing the same single-qubit gate in consecutive
    /// cycles.
    #[arg(long)]
    no_repeat_singles: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    circuit: PathBuf,
    /// Mix with uniform noise: keep this fidelity fraction of the signal.
    #[arg(long)]
    noise_f: Option<f64>,
    /// Output distribution file: binary, or CSV when the extension is .csv.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long, conflicts_with = "dist")]
    circuit: Option<PathBuf>,
    #[arg(long)]
    dist: Option<PathBuf>,
    #[arg(long)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    noise_f: Option<f64>,
    /// Output text file, one bitstring per line.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PtgenArgs {
    #[arg(long)]
    n: usize,
    /// "integer", "parity" or "permute".
    #[arg(long, default_value = "integer")]
    order: String,
    /// Explicit parity mask as a bitstring (qubit n-1 leftmost).
    #[arg(long, conflicts_with = "mask_bits")]
    mask: Option<String>,
    /// Draw a random parity mask with this many set bits.
    #[arg(long)]
    mask_bits: Option<usize>,
    #[arg(long, default_value_t = 0)]
    perm_seed: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    out_dist: PathBuf,
    #[arg(long)]
    out_samples: Option<PathBuf>,
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    samples: PathBuf,
    /// Autoregressive table model with this context length.
    #[arg(long, conflicts_with = "product")]
    ar_order: Option<usize>,
    /// Product-Bernoulli (one-shot) model.
    #[arg(long)]
    product: bool,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    /// Truth distribution file.
    #[arg(long)]
    truth: PathBuf,
    /// Evaluate an existing sample file.
    #[arg(long)]
    samples: Option<PathBuf>,
    /// Evaluate fresh samples drawn from a model file.
    #[arg(long, conflicts_with = "samples")]
    model: Option<PathBuf>,
    /// Evaluate uniform random samples (baseline).
    #[arg(long, conflicts_with_all = ["samples", "model"])]
    uniform: bool,
    /// Sample count when generating from a model or the uniform baseline.
    #[arg(long, default_value_t = 200_000)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also report the raw linear form 2·ΣP(s) - 1.
    #[arg(long)]
    raw: bool,
    /// Also run the χ² goodness-of-fit test.
    #[arg(long)]
    chi2: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum AnalyzeCommand {
    /// Output-distribution entropy across depths, with the ideal reference.
    EntropySweep(EntropySweepArgs),
    /// Conditional-probability tables of a distribution file.
    Conditionals(ConditionalsArgs),
    /// Network growth: stated counting rules vs a constructed network.
    DbmCount(DbmCountArgs),
    /// Autoregressive capacity sweep over context lengths.
    CapacitySweep(CapacitySweepArgs),
    /// Exponential fit y = a·e^{bx} + c over columns of a sweep CSV.
    CapacityFit(CapacityFitArgs),
}

#[derive(Args)]
struct EntropySweepArgs {
    #[arg(long)]
    n: usize,
    /// Inclusive depth range "lo:hi".
    #[arg(long)]
    depths: String,
    #[arg(long, default_value_t = 5)]
    seeds: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "chain")]
    connectivity: String,
    #[arg(long, default_value = "fsim")]
    two_qubit: String,
    #[arg(long, default_value_t = DEFAULT_FSIM_THETA)]
    fsim_theta: f64,
    #[arg(long, default_value_t = DEFAULT_FSIM_PHI)]
    fsim_phi: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ConditionalsArgs {
    #[arg(long)]
    dist: PathBuf,
    #[arg(long, default_value_t = 3)]
    max_order: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DbmCountArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    depth: usize,
    #[arg(long, default_value = "chain")]
    connectivity: String,
    #[arg(long, default_value = "fsim")]
    two_qubit: String,
    #[arg(long, default_value_t = DEFAULT_FSIM_THETA)]
    fsim_theta: f64,
    #[arg(long, default_value_t = DEFAULT_FSIM_PHI)]
    fsim_phi: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// "spin" or "bit".
    #[arg(long, default_value = "spin")]
    domain: String,
    /// "corrected" or "verbatim" mixing-mediator branch.
    #[arg(long, default_value = "corrected")]
    step3: String,
    /// "explicit" or "integrated" mediator form.
    #[arg(long, default_value = "explicit")]
    mediator: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CapacitySweepArgs {
    #[arg(long)]
    samples: PathBuf,
    #[arg(long)]
    truth: PathBuf,
    /// Inclusive order range "lo:hi".
    #[arg(long)]
    orders: String,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long, default_value_t = 200_000)]
    eval_count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    tag: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CapacityFitArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "k")]
    x_column: String,
    #[arg(long, default_value = "parameter_count")]
    y_column: String,
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            e.print().expect("stderr");
            return ExitCode::from(2);
        }
    };
    let threads = cli
        .threads
        .or_else(|| std::env::var("QSL_THREADS").ok().and_then(|v| v.parse().ok()));
    if let Some(t) = threads {
        // ignore failures: the global pool can only be set once
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
    let opts = SimOptions { mem_cap_gib: cli.mem_cap_gib };
    match run(cli, &opts) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::ResourceCap { .. } => ExitCode::from(4),
                _ => ExitCode::from(3),
            }
        }
    }
}

fn run(cli: Cli, opts: &SimOptions) -> qsl_core::Result<()> {
    match cli.command {
        Command::Circuit(a) => cmd_circuit(a),
        Command::Simulate(a) => cmd_simulate(a, opts),
        Command::Sample(a) => cmd_sample(a, opts),
        Command::Ptgen(a) => cmd_ptgen(a),
        Command::Train(a) => cmd_train(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Analyze(a) => match a {
            AnalyzeCommand::EntropySweep(a) => cmd_entropy_sweep(a, opts),
            AnalyzeCommand::Conditionals(a) => cmd_conditionals(a),
            AnalyzeCommand::DbmCount(a) => cmd_dbm_count(a),
            AnalyzeCommand::CapacitySweep(a) => cmd_capacity_sweep(a),
            AnalyzeCommand::CapacityFit(a) => cmd_capacity_fit(a),
        },
    }
}

fn parse_two_qubit(kind: &str, theta: f64, phi: f64) -> qsl_core::Result<TwoQubit> {
    match kind {
        "cz" => Ok(TwoQubit::Cz),
        "fsim" => Ok(TwoQubit::FSim { theta, phi }),
        other => Err(Error::Parse(format!("unknown two-qubit gate {other:?}"))),
    }
}

fn parse_range(text: &str) -> qsl_core::Result<(usize, usize)> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("range {text:?} must be lo:hi")))?;
    let lo = lo.parse().map_err(|e| Error::Parse(format!("bad range start: {e}")))?;
    let hi = hi.parse().map_err(|e| Error::Parse(format!("bad range end: {e}")))?;
    if lo > hi {
        return Err(Error::Parse(format!("empty range {text:?}")));
    }
    Ok((lo, hi))
}

fn cmd_circuit(a: CircuitArgs) -> qsl_core::Result<()> {
    let connectivity = Connectivity::parse(&a.connectivity)?;
    let two_qubit = parse_two_qubit(&a.two_qubit, a.fsim_theta, a.fsim_phi)?;
    let circuit = Circuit::random_with(
        a.n,
        a.depth,
        &connectivity,
        two_qubit,
        a.seed,
        a.no_repeat_singles,
    )?;
    circuit.write_file(&a.out)?;
    println!(
        "circuit: {} qubits, {} cycles, {} single-qubit gates, {} two-qubit gates -> {}",
        circuit.n,
        circuit.depth(),
        circuit.single_gate_count(),
        circuit.pair_gate_count(),
        a.out.display()
    );
    manifest::write(&a.out, &[], &[&a.out])
}

fn cmd_simulate(a: SimulateArgs, opts: &SimOptions) -> qsl_core::Result<()> {
    let circuit = Circuit::read_file(&a.circuit)?;
    let state = simulator::simulate(&circuit, opts)?;
    let norm = state.norm_sq();
    let mut dist = state.probabilities()?;
    if let Some(f) = a.noise_f {
        dist = simulator::apply_noise(&dist, &NoiseModel::new(f)?);
    }
    dist.write_file(&a.out)?;
    println!(
        "simulated {} qubits depth {}: |ψ|² = {:.12}, entropy {:.6} (ideal deep-circuit reference {:.6}) -> {}",
        circuit.n,
        circuit.depth(),
        norm,
        metrics::entropy(&dist),
        metrics::pt_reference_entropy(circuit.n),
        a.out.display()
    );
    manifest::write(&a.out, &[&a.circuit], &[&a.out])
}

fn cmd_sample(a: SampleArgs, opts: &SimOptions) -> qsl_core::Result<()> {
    let (mut dist, input, tag) = match (&a.circuit, &a.dist) {
        (Some(path), None) => {
            let circuit = Circuit::read_file(path)?;
            (simulator::output_distribution(&circuit, opts)?, path.clone(), format!("circuit:{}", path.display()))
        }
        (None, Some(path)) => {
            (ExplicitDistribution::read_file(path)?, path.clone(), format!("dist:{}", path.display()))
        }
        _ => return Err(Error::Parse("pass exactly one of --circuit or --dist".into())),
    };
    if let Some(f) = a.noise_f {
        dist = simulator::apply_noise(&dist, &NoiseModel::new(f)?);
    }
    let samples = dist.sample_seeded(a.count, a.seed, &tag)?;
    samples.write_file(&a.out)?;
    println!("{} samples of {} bits -> {}", samples.len(), samples.n(), a.out.display());
    manifest::write(&a.out, &[&input], &[&a.out])
}

fn cmd_ptgen(a: PtgenArgs) -> qsl_core::Result<()> {
    let ordering = match a.order.as_str() {
        "integer" => Ordering::Integer,
        "parity" => {
            let mask = match (&a.mask, a.mask_bits) {
                (Some(text), None) => {
                    let idx = qsl_core::BasisIndex::from_bit_string(text)?;
                    if idx.width() != a.n {
                        return Err(Error::WidthMismatch { left: idx.width(), right: a.n });
                    }
                    SubsetMask::new(idx.value(), a.n)?
                }
                (None, Some(m)) => {
                    let mut rng = Prng::new(Prng::derive_seed(a.seed, 2));
                    SubsetMask::random(a.n, m, &mut rng)?
                }
                _ => return Err(Error::Parse("parity order needs --mask or --mask-bits".into())),
            };
            Ordering::SubsetParity(mask)
        }
        "permute" => Ordering::RandomPermutation { seed: a.perm_seed },
        other => return Err(Error::Parse(format!("unknown order {other:?}"))),
    };
    let mut outputs: Vec<&std::path::Path> = vec![&a.out_dist];
    let dist = match (a.count, &a.out_samples) {
        (Some(count), Some(out_samples)) => {
            let (d, samples) = porter_thomas::make_dataset(a.n, &ordering, count, a.seed)?;
            samples.write_file(out_samples)?;
            println!("{} samples tagged {:?}", samples.len(), samples.source_tag());
            outputs.push(out_samples);
            d
        }
        (None, None) => {
            let mut rng = Prng::new(Prng::derive_seed(a.seed, 0));
            let raw = porter_thomas::porter_thomas_probs(a.n, &mut rng)?;
            porter_thomas::apply_ordering(&raw, &ordering)?
        }
        _ => return Err(Error::Parse("--count and --out-samples go together".into())),
    };
    dist.write_file(&a.out_dist)?;
    println!(
        "{} distribution on {} qubits, entropy {:.6} -> {}",
        ordering.tag(),
        a.n,
        metrics::entropy(&dist),
        a.out_dist.display()
    );
    manifest::write(&a.out_dist, &[], &outputs)
}

fn cmd_train(a: TrainArgs) -> qsl_core::Result<()> {
    let samples = SampleSet::read_file(&a.samples)?;
    let model = if a.product {
        Model::Product(learner::fit_product(&samples)?)
    } else {
        let k = a
            .ar_order
            .ok_or_else(|| Error::Parse("pass --ar-order K or --product".into()))?;
        Model::Ar(learner::fit_ar(&samples, k, a.alpha)?)
    };
    model.write_file(&a.out)?;
    println!(
        "trained on {} samples: {} parameters -> {}",
        samples.len(),
        model.parameter_count(),
        a.out.display()
    );
    manifest::write(&a.out, &[&a.samples], &[&a.out])
}

fn cmd_eval(a: EvalArgs) -> qsl_core::Result<()> {
    let truth = ExplicitDistribution::read_file(&a.truth)?;
    let mut inputs: Vec<&std::path::Path> = vec![&a.truth];
    let samples = if let Some(path) = &a.samples {
        inputs.push(path);
        SampleSet::read_file(path)?
    } else if let Some(path) = &a.model {
        inputs.push(path);
        let model = Model::read_file(path)?;
        let mut rng = Prng::new(a.seed);
        model.sample(a.count, &mut rng, &format!("model:{}", path.display()))?
    } else if a.uniform {
        ExplicitDistribution::uniform(truth.n())?.sample_seeded(a.count, a.seed, "uniform")?
    } else {
        return Err(Error::Parse("pass one of --samples, --model or --uniform".into()));
    };

    let xeb = metrics::xeb(&samples, &truth)?;
    let mut header = String::from(metrics::XebResult::csv_header());
    let mut row = xeb.to_csv_row();
    println!(
        "xeb fidelity {:.6} ± {:.6} over {} samples",
        xeb.fidelity, xeb.standard_error, xeb.sample_count
    );
    if a.raw {
        let raw = metrics::xeb_raw(&samples, &truth)?;
        header.push_str(",raw_linear_form");
        row.push_str(&format!(",{raw}"));
        println!("raw linear form {raw:.6}");
    }
    if a.chi2 {
        let chi2 = metrics::chi2_from_samples(&samples, &truth)?;
        header.push_str(",chi2_statistic,chi2_dof,chi2_p_value");
        row.push_str(&format!(
            ",{},{},{}",
            chi2.statistic, chi2.degrees_of_freedom, chi2.p_value
        ));
        println!(
            "chi2 {:.3} with {} dof: p = {:.6}",
            chi2.statistic, chi2.degrees_of_freedom, chi2.p_value
        );
    }
    std::fs::write(&a.out, format!("{header}\n{row}\n"))?;
    manifest::write(&a.out, &inputs, &[&a.out])
}

fn cmd_entropy_sweep(a: EntropySweepArgs, opts: &SimOptions) -> qsl_core::Result<()> {
    let connectivity = Connectivity::parse(&a.connectivity)?;
    let two_qubit = parse_two_qubit(&a.two_qubit, a.fsim_theta, a.fsim_phi)?;
    let (lo, hi) = parse_range(&a.depths)?;
    let reference = metrics::pt_reference_entropy(a.n);
    let mut csv = String::from("depth,seed,entropy,pt_reference\n");
    for depth in lo..=hi {
        for s in 0..a.seeds {
            let seed = Prng::derive_seed(a.seed, (depth as u64) << 32 | s);
            let c = Circuit::random(a.n, depth, &connectivity, two_qubit, seed)?;
            let h = metrics::entropy(&simulator::output_distribution(&c, opts)?);
            csv.push_str(&format!("{depth},{seed},{h},{reference}\n"));
        }
    }
    std::fs::write(&a.out, csv)?;
    println!("entropy sweep depths {lo}..={hi} x {} seeds -> {}", a.seeds, a.out.display());
    manifest::write(&a.out, &[], &[&a.out])
}

fn cmd_conditionals(a: ConditionalsArgs) -> qsl_core::Result<()> {
    let dist = ExplicitDistribution::read_file(&a.dist)?;
    let report = metrics::conditional_report(&dist, a.max_order)?;
    for o in &report.orders {
        println!("order {}: max deviation from 1/2 is {:.6}", o.order, o.max_deviation);
    }
    std::fs::write(&a.out, report.to_csv())?;
    manifest::write(&a.out, &[&a.dist], &[&a.out])
}

fn cmd_dbm_count(a: DbmCountArgs) -> qsl_core::Result<()> {
    let connectivity = Connectivity::parse(&a.connectivity)?;
    let two_qubit = parse_two_qubit(&a.two_qubit, a.fsim_theta, a.fsim_phi)?;
    let circuit = Circuit::random(a.n, a.depth, &connectivity, two_qubit, a.seed)?;
    let config = dbm::DbmConfig {
        domain: match a.domain.as_str() {
            "spin" => dbm::PhysicalDomain::Spin,
            "bit" => dbm::PhysicalDomain::Bit,
            other => return Err(Error::Parse(format!("unknown domain {other:?}"))),
        },
        step3: match a.step3.as_str() {
            "corrected" => dbm::FsimStep3::Corrected,
            "verbatim" => dbm::FsimStep3::Verbatim,
            other => return Err(Error::Parse(format!("unknown step3 branch {other:?}"))),
        },
        mediator: match a.mediator.as_str() {
            "explicit" => dbm::MediatorForm::Explicit,
            "integrated" => dbm::MediatorForm::Integrated,
            other => return Err(Error::Parse(format!("unknown mediator form {other:?}"))),
        },
        swap_route: true,
    };
    let outcome = dbm::build(&circuit, &config)?;
    let rule = dbm::size_recurrence(a.n, a.depth);
    let csv = qsl_core::dbm::comparison_csv(&rule, &outcome.report);
    let built = outcome.report.final_counts();
    let stated = rule.final_counts();
    println!(
        "stated rules: {} hidden, {} deep; constructed: {} hidden, {} deep, {} edges",
        stated.hidden, stated.deep, built.hidden, built.deep, built.edges
    );
    for note in outcome.network.notes() {
        println!("note: {note}");
    }
    std::fs::write(&a.out, csv)?;
    manifest::write(&a.out, &[], &[&a.out])
}

fn cmd_capacity_sweep(a: CapacitySweepArgs) -> qsl_core::Result<()> {
    let samples = SampleSet::read_file(&a.samples)?;
    let truth = ExplicitDistribution::read_file(&a.truth)?;
    let (lo, hi) = parse_range(&a.orders)?;
    let orders: Vec<usize> = (lo..=hi).collect();
    let tag = a.tag.unwrap_or_else(|| samples.source_tag().to_string());
    let ds = learner::CapacityDataset { tag, samples: &samples, truth: &truth };
    let rows = learner::capacity_sweep(&[ds], &orders, a.alpha, a.eval_count, a.seed)?;
    for r in &rows {
        println!("k={}: {} parameters, fidelity {:.4}", r.k, r.parameter_count, r.fidelity);
    }
    std::fs::write(&a.out, learner::capacity_csv(&rows))?;
    manifest::write(&a.out, &[&a.samples, &a.truth], &[&a.out])
}

fn cmd_capacity_fit(a: CapacityFitArgs) -> qsl_core::Result<()> {
    let text = std::fs::read_to_string(&a.input)?;
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty csv".into()))?;
    let cols: Vec<&str> = header.split(',').collect();
    let x_idx = cols
        .iter()
        .position(|c| *c == a.x_column)
        .ok_or_else(|| Error::Parse(format!("no column {:?} in {header:?}", a.x_column)))?;
    let y_idx = cols
        .iter()
        .position(|c| *c == a.y_column)
        .ok_or_else(|| Error::Parse(format!("no column {:?} in {header:?}", a.y_column)))?;
    let mut points = Vec::new();
    for (no, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let x: f64 = fields
            .get(x_idx)
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::SampleLine { line: no + 2, reason: "bad x value".into() })?;
        let y: f64 = fields
            .get(y_idx)
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::SampleLine { line: no + 2, reason: "bad y value".into() })?;
        points.push((x, y));
    }
    let fit = metrics::fit_exponential(&points)?;
    println!(
        "fit y = a·exp(b·x) + c: a = {:.6}, b = {:.6}, c = {:.6}, rms residual {:.6}{}",
        fit.a,
        fit.b,
        fit.c,
        fit.rms_residual,
        if fit.degenerate { " (degenerate)" } else { "" }
    );
    let csv = format!(
        "a,b,c,rms_residual,degenerate\n{},{},{},{},{}\n",
        fit.a, fit.b, fit.c, fit.rms_residual, fit.degenerate
    );
    std::fs::write(&a.out, csv)?;
    manifest::write(&a.out, &[&a.input], &[&a.out])
}
