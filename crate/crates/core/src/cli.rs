//! Command-line front end. `main` only forwards to [`run`].

use std::ffi::OsString;
use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::analysis::{
    find_diverse_equal_scores, heat_map_exact, heat_map_sampled, signature, top_patterns, MIScore,
    DEFAULT_BASELINES, DEFAULT_EXACT_WINDOW, DEFAULT_SAMPLED_WINDOW,
};
use crate::energy::{structure_energy, EnergyParams};
use crate::fold::Folder;
use crate::partition::{PartitionEngine, PatternConstraint};
use crate::sampler::{BoltzmannSampler, RNG_ALGORITHM};
use crate::sequence::{parse_fasta, FastaRecord, Sequence};
use crate::structure::{parse_dot_bracket, parse_pair_list, SecondaryStructure, StructureCounts};

/// Version tag of every JSON document the CLI writes.
pub const SCHEMA: &str = "seqsem/1";

#[derive(Parser, Debug)]
#[command(
    name = "seqsem",
    version,
    about = "Sequence ensembles of a fixed RNA secondary structure"
)]
struct Cli {
    /// Energy parameter file (TOML); the built-in set when omitted.
    #[arg(long, global = true)]
    params: Option<PathBuf>,
    /// Temperature in degrees Celsius; only rescales RT.
    #[arg(long, global = true, value_parser = parse_temperature)]
    temperature: Option<f64>,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write a JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct StructureInput {
    /// Structure file, dot-bracket or pair list; stdin when omitted.
    structure: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// ln Q(S): the log partition function over all sequences.
    Partition(StructureInput),
    /// Probability that an interval carries a given pattern.
    Pattern {
        #[arg(long, num_args = 2, value_names = ["I", "J"])]
        interval: Vec<usize>,
        #[arg(long)]
        pattern: String,
        /// Also list the most frequent patterns of this many samples.
        #[arg(long, requires = "seed")]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 10)]
        top: usize,
        #[command(flatten)]
        input: StructureInput,
    },
    /// Draw sequences from the Boltzmann distribution of a structure.
    Sample {
        #[arg(short = 'n', long = "count")]
        count: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = SampleFormat::Fasta)]
        format: SampleFormat,
        #[command(flatten)]
        input: StructureInput,
    },
    /// Energy of sequences on a structure.
    Eval {
        /// Structure file.
        structure: PathBuf,
        /// FASTA file; stdin when omitted.
        sequences: Option<PathBuf>,
    },
    /// Minimum free energy structure of each sequence.
    Fold {
        /// FASTA file; stdin when omitted.
        sequences: Option<PathBuf>,
        #[arg(long, default_value_t = crate::fold::DEFAULT_MAX_INTERIOR)]
        max_interior: usize,
    },
    /// ln Q(sigma): the log partition function over all structures.
    Seqpf {
        sequences: Option<PathBuf>,
        #[arg(long, default_value_t = crate::fold::DEFAULT_MAX_INTERIOR)]
        max_interior: usize,
    },
    /// Pattern-entropy heat map.
    Heatmap {
        /// Sample this many sequences.
        #[arg(
            short = 'n',
            long = "count",
            conflicts_with = "exact",
            required_unless_present = "exact"
        )]
        count: Option<usize>,
        #[arg(long, conflicts_with = "exact", required_unless_present = "exact")]
        seed: Option<u64>,
        /// Use exact pattern probabilities instead of a sample.
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        window: Option<usize>,
        /// Allow exact windows above the default limit.
        #[arg(long, default_value_t = DEFAULT_EXACT_WINDOW)]
        exact_limit: usize,
        /// CSV destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a grayscale PGM image.
        #[arg(long)]
        pgm: Option<PathBuf>,
        /// Report the widest interval whose heat exceeds this value.
        #[arg(long)]
        threshold: Option<f64>,
        #[command(flatten)]
        input: StructureInput,
    },
    /// Refolding frequency and energy gaps against random-structure baselines.
    Signature {
        #[arg(short = 'n', long = "count")]
        count: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BASELINES)]
        baselines: usize,
        #[arg(long, default_value_t = crate::fold::DEFAULT_MAX_INTERIOR)]
        max_interior: usize,
        #[command(flatten)]
        input: StructureInput,
    },
    /// Mutual-information terms of sequences against a structure.
    Mi {
        /// Structure file.
        structure: PathBuf,
        /// FASTA file; stdin when omitted.
        sequences: Option<PathBuf>,
        /// Search for three scores within this relative tolerance.
        #[arg(long)]
        find_triple: Option<f64>,
        #[arg(long, default_value_t = 0.5)]
        max_identity: f64,
    },
    /// Uniformly random structures of a given length.
    RandomStructures {
        #[arg(long)]
        length: usize,
        #[arg(short = 'n', long = "count", default_value_t = 1)]
        count: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = StructureFormat::DotBracket)]
        format: StructureFormat,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SampleFormat {
    Fasta,
    Jsonl,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StructureFormat {
    DotBracket,
    PairList,
}

/// An error in the user's input, reported with exit status 1.
#[derive(Debug)]
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type CliResult<T = ()> = Result<T, InputError>;

/// Run the CLI and return the process exit status: 0 on success, 1 for bad
/// input, 2 for bad usage.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    if let Some(t) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build_global();
    }
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = execute(&cli, &mut out).and_then(|()| out.flush().map_err(InputError::from));
    match result {
        Ok(()) => 0,
        Err(InputError(message)) if message.contains("Broken pipe") => 0,
        Err(InputError(message)) => {
            eprintln!("error: {message}");
            1
        }
    }
}

/// `x` to 9 significant digits, without trailing zeros.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..15).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        let fixed = format!(
            "{:.*}",
            decimals,
            mantissa.parse::<f64>().expect("mantissa") * 10f64.powi(exp)
        );
        trim_zeros(&fixed)
    } else {
        format!("{}e{}", trim_zeros(mantissa), exp)
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

fn parse_temperature(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if t.is_finite() && t > -273.15 {
        Ok(t)
    } else {
        Err(format!("{t} C is not above absolute zero"))
    }
}

fn load_params(cli: &Cli) -> CliResult<EnergyParams> {
    let params = match &cli.params {
        Some(p) => {
            EnergyParams::from_file(p).map_err(|e| InputError(format!("{}: {e}", p.display())))?
        }
        None => EnergyParams::default_set(),
    };
    Ok(match cli.temperature {
        Some(t) => params.with_temperature(t),
        None => params,
    })
}

fn read_input(path: Option<&Path>) -> CliResult<(String, String)> {
    match path {
        Some(p) => {
            let text =
                fs::read_to_string(p).map_err(|e| InputError(format!("{}: {e}", p.display())))?;
            Ok((p.display().to_string(), text))
        }
        None => {
            let mut text = String::new();
            io::stdin().read_to_string(&mut text)?;
            Ok(("<stdin>".into(), text))
        }
    }
}

/// Dot-bracket (one line, `>` headers and `#` comments skipped) or a pair
/// list, recognized by a purely numeric first line.
pub fn parse_structure_text(
    text: &str,
) -> Result<SecondaryStructure, crate::error::StructureError> {
    let first = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty() && !l.starts_with('>'));
    match first {
        Some(l) if l.chars().all(|c| c.is_ascii_digit()) => parse_pair_list(text),
        Some(l) => parse_dot_bracket(l),
        None => Err(crate::error::StructureError::Missing),
    }
}

fn load_structure(input: &StructureInput) -> CliResult<SecondaryStructure> {
    load_structure_from(input.structure.as_deref())
}

fn load_structure_from(path: Option<&Path>) -> CliResult<SecondaryStructure> {
    let (name, text) = read_input(path)?;
    parse_structure_text(&text).map_err(|e| InputError(format!("{name}: {e}")))
}

fn load_sequences(path: Option<&Path>) -> CliResult<Vec<FastaRecord>> {
    let (name, text) = read_input(path)?;
    let records = parse_fasta(&text).map_err(|e| InputError(format!("{name}: {e}")))?;
    if records.is_empty() {
        return Err(InputError(format!("{name}: no sequences")));
    }
    Ok(records)
}

fn check_lengths(records: &[FastaRecord], s: &SecondaryStructure) -> CliResult {
    for r in records {
        if r.sequence.len() != s.len() {
            return Err(InputError(format!(
                "sequence {:?} has length {} but the structure has length {}",
                r.name,
                r.sequence.len(),
                s.len()
            )));
        }
    }
    Ok(())
}

fn document(params: &EnergyParams, command: &str, body: Value) -> Value {
    let mut doc = json!({
        "schema": SCHEMA,
        "command": command,
        "params_sha256": params.checksum(),
        "rt": params.rt(),
    });
    if let (Value::Object(d), Value::Object(b)) = (&mut doc, body) {
        d.extend(b);
    }
    doc
}

fn emit_json(out: &mut dyn Write, doc: &Value) -> CliResult {
    serde_json::to_writer_pretty(&mut *out, doc)?;
    writeln!(out)?;
    Ok(())
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn execute(cli: &Cli, out: &mut dyn Write) -> CliResult {
    let params = load_params(cli)?;
    match &cli.command {
        Command::Partition(input) => {
            let s = load_structure(input)?;
            let engine = PartitionEngine::new(&params, &s);
            let log_q = engine.unconstrained().log_q().ln();
            if cli.json {
                emit_json(
                    out,
                    &document(
                        &params,
                        "partition",
                        json!({"structure": s.dot_bracket(), "n": s.len(), "log_q": log_q}),
                    ),
                )?;
            } else {
                writeln!(out, "{}", format_sig(log_q))?;
            }
        }
        Command::Pattern {
            interval,
            pattern,
            samples,
            seed,
            top,
            input,
        } => {
            let s = load_structure(input)?;
            let (i, j) = (interval[0], interval[1]);
            let bases: Sequence = pattern
                .parse()
                .map_err(|e| InputError(format!("--pattern: {e}")))?;
            let c = PatternConstraint::interval(s.len(), i, j, bases.bases())?;
            let engine = PartitionEngine::new(&params, &s);
            let constrained = engine.constrained(&c)?.log_q().ln();
            let probability = engine.probability(&c)?;
            let ranked = match samples {
                Some(m) => {
                    let sampler = BoltzmannSampler::new(&params, &s, engine.unconstrained());
                    let seed = seed.expect("clap requires --seed with --samples");
                    let seqs: Vec<Sequence> = sampler
                        .ensemble(*m, seed)
                        .into_iter()
                        .map(|d| d.sequence)
                        .collect();
                    Some(top_patterns(&engine, &seqs, i, j, *top)?)
                }
                None => None,
            };
            if cli.json {
                let mut body = json!({
                    "structure": s.dot_bracket(),
                    "interval": [i, j],
                    "pattern": bases.to_string(),
                    "log_q_pattern": constrained,
                    "probability": probability,
                });
                if let Some(r) = &ranked {
                    body["top_patterns"] = to_value(r);
                    body["seed"] = json!(seed);
                }
                emit_json(out, &document(&params, "pattern", body))?;
            } else {
                writeln!(out, "pattern\t{bases}\t[{i},{j}]")?;
                writeln!(out, "ln_Q_pattern\t{}", format_sig(constrained))?;
                writeln!(out, "probability\t{}", format_sig(probability))?;
                for r in ranked.iter().flatten() {
                    writeln!(
                        out,
                        "{}\t{}\t{}\t{}",
                        r.pattern,
                        r.count,
                        format_sig(r.frequency),
                        format_sig(r.probability)
                    )?;
                }
            }
        }
        Command::Sample {
            count,
            seed,
            format,
            input,
        } => {
            let s = load_structure(input)?;
            let engine = PartitionEngine::new(&params, &s);
            let sampler = BoltzmannSampler::new(&params, &s, engine.unconstrained());
            let draws = sampler.ensemble(*count, *seed);
            match format {
                SampleFormat::Fasta => {
                    for (k, d) in draws.iter().enumerate() {
                        writeln!(
                            out,
                            ">sample_{} energy={} log_prob={}\n{}",
                            k + 1,
                            d.energy,
                            format_sig(d.log_prob),
                            d.sequence
                        )?;
                    }
                }
                SampleFormat::Jsonl => {
                    let header = document(
                        &params,
                        "sample",
                        json!({"structure": s.dot_bracket(), "seed": seed, "count": count, "rng": RNG_ALGORITHM, "log_q": engine.unconstrained().log_q().ln()}),
                    );
                    writeln!(out, "{}", serde_json::to_string(&header)?)?;
                    for d in &draws {
                        writeln!(out, "{}", serde_json::to_string(d)?)?;
                    }
                }
            }
        }
        Command::Eval {
            structure,
            sequences,
        } => {
            let s = load_structure_from(Some(structure))?;
            let records = load_sequences(sequences.as_deref())?;
            check_lengths(&records, &s)?;
            let rows = records
                .iter()
                .map(|r| Ok((r, structure_energy(&params, &r.sequence, &s)?)))
                .collect::<CliResult<Vec<_>>>()?;
            if cli.json {
                let list: Vec<Value> = rows
                    .iter()
                    .map(|(r, e)| json!({"name": r.name, "sequence": r.sequence.to_string(), "energy": e}))
                    .collect();
                emit_json(
                    out,
                    &document(
                        &params,
                        "eval",
                        json!({"structure": s.dot_bracket(), "sequences": list}),
                    ),
                )?;
            } else {
                for (r, e) in rows {
                    writeln!(out, "{}\t{}\t{}", r.name, r.sequence, e)?;
                }
            }
        }
        Command::Fold {
            sequences,
            max_interior,
        } => {
            let records = load_sequences(sequences.as_deref())?;
            let folder = Folder::new(&params).with_max_interior(*max_interior);
            let folds: Vec<_> = records
                .iter()
                .map(|r| (r, folder.mfe(&r.sequence)))
                .collect();
            if cli.json {
                let list: Vec<Value> = folds
                    .iter()
                    .map(|(r, f)| json!({"name": r.name, "sequence": r.sequence.to_string(), "structure": f.structure.dot_bracket(), "energy": f.energy}))
                    .collect();
                emit_json(
                    out,
                    &document(
                        &params,
                        "fold",
                        json!({"max_interior": max_interior, "results": list}),
                    ),
                )?;
            } else {
                for (r, f) in folds {
                    writeln!(
                        out,
                        ">{}\n{}\n{} ({})",
                        r.name, r.sequence, f.structure, f.energy
                    )?;
                }
            }
        }
        Command::Seqpf {
            sequences,
            max_interior,
        } => {
            let records = load_sequences(sequences.as_deref())?;
            let folder = Folder::new(&params).with_max_interior(*max_interior);
            let rows: Vec<_> = records
                .iter()
                .map(|r| (r, folder.partition(&r.sequence).log_q.ln()))
                .collect();
            if cli.json {
                let list: Vec<Value> = rows
                    .iter()
                    .map(|(r, q)| json!({"name": r.name, "sequence": r.sequence.to_string(), "log_q": q}))
                    .collect();
                emit_json(
                    out,
                    &document(
                        &params,
                        "seqpf",
                        json!({"max_interior": max_interior, "results": list}),
                    ),
                )?;
            } else {
                for (r, q) in rows {
                    writeln!(out, "{}\t{}", r.name, format_sig(q))?;
                }
            }
        }
        Command::Heatmap {
            count,
            seed,
            exact,
            window,
            exact_limit,
            out: csv_path,
            pgm,
            threshold,
            input,
        } => {
            let s = load_structure(input)?;
            let engine = PartitionEngine::new(&params, &s);
            let map = if *exact {
                heat_map_exact(
                    &engine,
                    window.unwrap_or(DEFAULT_EXACT_WINDOW),
                    *exact_limit,
                )?
            } else {
                let m = count.expect("clap requires --count without --exact");
                let seed = seed.expect("clap requires --seed without --exact");
                let sampler = BoltzmannSampler::new(&params, &s, engine.unconstrained());
                let seqs: Vec<Sequence> = sampler
                    .ensemble(m, seed)
                    .into_iter()
                    .map(|d| d.sequence)
                    .collect();
                heat_map_sampled(&seqs, s.len(), window.unwrap_or(DEFAULT_SAMPLED_WINDOW))?
            };
            let widest = threshold.map(|r| map.widest_above(r));
            if let Some(p) = pgm {
                fs::write(p, map.to_pgm())
                    .map_err(|e| InputError(format!("{}: {e}", p.display())))?;
            }
            match csv_path {
                Some(p) => fs::write(p, map.to_csv())
                    .map_err(|e| InputError(format!("{}: {e}", p.display())))?,
                None if !cli.json => out.write_all(map.to_csv().as_bytes())?,
                None => {}
            }
            if cli.json {
                let cells: Vec<Value> = map.iter().map(|(i, j, r)| json!([i, j, r])).collect();
                let mut body = json!({"structure": s.dot_bracket(), "window": map.window, "source": map.source, "heat": cells});
                if let Some(seed) = seed {
                    body["seed"] = json!(seed);
                }
                if let (Some(r), Some(w)) = (threshold, widest) {
                    body["threshold"] = json!(r);
                    body["widest_above_threshold"] =
                        json!(w.map(|(i, j, h)| json!({"interval": [i, j], "heat": h})));
                }
                emit_json(out, &document(&params, "heatmap", body))?;
            } else if let Some(w) = widest {
                let line = match w {
                    Some((i, j, h)) => format!("widest\t{i}\t{j}\t{}", format_sig(h)),
                    None => "widest\tnone".into(),
                };
                // The CSV may own stdout.
                if csv_path.is_some() {
                    writeln!(out, "{line}")?;
                } else {
                    eprintln!("{line}");
                }
            }
        }
        Command::Signature {
            count,
            seed,
            baselines,
            max_interior,
            input,
        } => {
            let s = load_structure(input)?;
            let folder = Folder::new(&params).with_max_interior(*max_interior);
            let report = signature(&folder, &params, &s, *count, *baselines, *seed)?;
            if cli.json {
                let mut body = to_value(&report);
                body["seed"] = json!(seed);
                body["max_interior"] = json!(max_interior);
                emit_json(out, &document(&params, "signature", body))?;
            } else {
                writeln!(
                    out,
                    "structure\tifr\trefolded\tzero_gap\tmedian_delta_eta\tq1\tq3"
                )?;
                let rows = std::iter::once(("target", &report.target))
                    .chain(report.baselines.iter().map(|b| ("baseline", b)));
                for (kind, sig) in rows {
                    let (m, q1, q3) = sig.summary.map(|x| (x.median, x.q1, x.q3)).unwrap_or((
                        f64::NAN,
                        f64::NAN,
                        f64::NAN,
                    ));
                    writeln!(
                        out,
                        "{kind} {}\t{}\t{}\t{}\t{}\t{}\t{}",
                        sig.structure,
                        format_sig(sig.ifr),
                        sig.refolded,
                        sig.zero_gap,
                        format_sig(m),
                        format_sig(q1),
                        format_sig(q3)
                    )?;
                }
            }
        }
        Command::Mi {
            structure,
            sequences,
            find_triple,
            max_identity,
        } => {
            let s = load_structure_from(Some(structure))?;
            let records = load_sequences(sequences.as_deref())?;
            check_lengths(&records, &s)?;
            let log_q_s = PartitionEngine::new(&params, &s).unconstrained().log_q();
            let folder = Folder::new(&params);
            let scores: Vec<MIScore> = records
                .iter()
                .map(|r| {
                    let log_q_sigma = folder.partition(&r.sequence).log_q;
                    crate::analysis::mi_score(&params, &r.sequence, &s, log_q_s, log_q_sigma)
                })
                .collect::<Result<_, _>>()?;
            let seqs: Vec<Sequence> = records.iter().map(|r| r.sequence.clone()).collect();
            let triple = find_triple
                .map(|tol| find_diverse_equal_scores(&seqs, &scores, tol, *max_identity));
            if cli.json {
                let list: Vec<Value> = records
                    .iter()
                    .zip(&scores)
                    .map(|(r, sc)| json!({"name": r.name, "sequence": r.sequence.to_string(), "score": sc}))
                    .collect();
                let mut body = json!({"structure": s.dot_bracket(), "log_q_structure": log_q_s.ln(), "scores": list});
                if let Some(t) = triple {
                    body["triple"] = to_value(&t);
                }
                emit_json(out, &document(&params, "mi", body))?;
            } else {
                for (r, sc) in records.iter().zip(&scores) {
                    writeln!(
                        out,
                        "{}\t{}\t{}\t{}",
                        r.name,
                        sc.sign,
                        format_sig(sc.log_magnitude),
                        format_sig(sc.value())
                    )?;
                }
                match triple {
                    Some(Some(t)) => writeln!(
                        out,
                        "triple\t{}\t{}\t{}",
                        records[t[0]].name, records[t[1]].name, records[t[2]].name
                    )?,
                    Some(None) => writeln!(out, "triple\tnone")?,
                    None => {}
                }
            }
        }
        Command::RandomStructures {
            length,
            count,
            seed,
            format,
        } => {
            let counts = StructureCounts::new(*length);
            let structures: Vec<SecondaryStructure> = (0..*count)
                .map(|k| counts.sample(*length, &mut crate::sampler::draw_rng(*seed, k as u64)))
                .collect();
            if cli.json {
                let list: Vec<String> = structures.iter().map(|s| s.dot_bracket()).collect();
                emit_json(
                    out,
                    &document(
                        &params,
                        "random-structures",
                        json!({"length": length, "seed": seed, "total": counts.get(*length).to_string(), "structures": list}),
                    ),
                )?;
            } else {
                for s in &structures {
                    match format {
                        StructureFormat::DotBracket => writeln!(out, "{s}")?,
                        StructureFormat::PairList => write!(out, "{}", s.pair_list())?,
                    }
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(1.0), "1");
        assert_eq!(format_sig(0.5), "0.5");
        assert_eq!(format_sig(-3.3), "-3.3");
        assert_eq!(format_sig(std::f64::consts::PI), "3.14159265");
        assert_eq!(format_sig(123456.789123), "123456.789");
        assert_eq!(format_sig(1.5e-9), "1.5e-9");
        assert_eq!(format_sig(2.0e20), "2e20");
        assert_eq!(format_sig(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn structure_text_detection() {
        assert_eq!(parse_structure_text("# c\n((....))\n").unwrap().len(), 8);
        assert_eq!(parse_structure_text("8\n1 8\n").unwrap().arcs().len(), 1);
        assert!(parse_structure_text("\n").is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["seqsem", "sample"]), 2);
        assert_eq!(run(["seqsem", "frobnicate"]), 2);
    }
}
