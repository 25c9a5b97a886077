//! Command-line surface for the toolkit.
//!
//! Exit codes: 0 when the checked property holds or the search succeeds,
//! 1 when it fails or nothing is found (with evidence printed), 2 on
//! malformed input or usage errors. All output is deterministic.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use relkit::{
    census, find_decomposition, generate, is_congruence, load_partition, load_structure,
    load_structure_unchecked, ma_degree, partition_to_string, qf_type, save_partition,
    save_structure, structure_to_string, DeltaSpec, Error, Family, FamilyParams, KBudget,
    Result, SearchConfig, SearchMethod, Structure, DEFAULT_BUDGET,
};

#[derive(Parser)]
#[command(
    name = "relkit",
    about = "Finite relational structures: type census, congruence checking, decomposition search"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the invariants of a structure file.
    Validate { structure: PathBuf },
    /// Print the canonical quantifier-free type of a tuple over a base set.
    Type {
        structure: PathBuf,
        /// Comma-separated element ids of the tuple.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        tuple: Vec<usize>,
        /// Comma-separated element ids of the base set.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        base: Vec<usize>,
        /// Comma-separated relation names; defaults to the full signature.
        #[arg(long)]
        delta: Option<String>,
    },
    /// Count distinct realized types per tuple length (CSV output).
    Census {
        structure: PathBuf,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        base: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        max_len: usize,
        #[arg(long)]
        delta: Option<String>,
        /// Also write the CSV to this path.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Verify that a partition file is a congruence over its base.
    Check {
        structure: PathBuf,
        partition: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        #[arg(long)]
        delta: Option<String>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Search for a decomposition within a size budget.
    Find {
        structure: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        #[arg(long, default_value = "components")]
        method: String,
        /// Restrict the search to partitions with an empty base.
        #[arg(long)]
        empty_base: bool,
        #[arg(long)]
        delta: Option<String>,
        /// Write the found partition to this path.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Generate a structure from a named family.
    Gen {
        /// mated-pairs | equivalence | two-class | unary-cube | path | cycle | complete | star
        family: String,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long)]
        u: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        /// Write the structure to this path instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-relation slot-degree diagnostic (CSV output).
    Degree { structure: PathBuf },
    /// Reproducible experiment sweeps (CSV output).
    Experiment {
        #[command(subcommand)]
        cmd: ExperimentCmd,
    },
}

#[derive(Subcommand)]
enum ExperimentCmd {
    /// Length-1 census of mated-pairs over transversal vs component-closed bases.
    Boundedness {
        /// Comma-separated values of m to sweep.
        #[arg(long, value_delimiter = ',', required = true)]
        m: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Length-1 census of equivalence structures over a transversal base.
    LowerBound {
        #[arg(long, value_delimiter = ',', required = true)]
        m: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        s: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Component-method decomposition search across sizes and budgets.
    DecompositionSweep {
        #[arg(long)]
        family: String,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        /// One value applied to every n, or one value per n.
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        max_len: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn delta_for(s: &Structure, names: &Option<String>) -> Result<DeltaSpec> {
    match names {
        None => Ok(DeltaSpec::full(s.signature())),
        Some(names) => DeltaSpec::from_names(
            s.signature(),
            names.split(',').filter(|n| !n.is_empty()),
        ),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    print!("{text}");
    if let Some(path) = out {
        std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    Ok(())
}

fn family_params(
    family: &str,
    m: Option<usize>,
    s: Option<usize>,
    u: Option<usize>,
    n: Option<usize>,
) -> Result<FamilyParams> {
    let need = |value: Option<usize>, flag: &str| {
        value.ok_or_else(|| Error::BadParameter {
            reason: format!("family `{family}` requires --{flag}"),
        })
    };
    Ok(match family.parse::<Family>()? {
        Family::MatedPairs => FamilyParams::MatedPairs { m: need(m, "m")? },
        Family::Equivalence => FamilyParams::Equivalence {
            m: need(m, "m")?,
            s: need(s, "s")?,
        },
        Family::TwoClass => FamilyParams::TwoClass { s: need(s, "s")? },
        Family::UnaryCube => FamilyParams::UnaryCube { u: need(u, "u")? },
        Family::Path => FamilyParams::Path { n: need(n, "n")? },
        Family::Cycle => FamilyParams::Cycle { n: need(n, "n")? },
        Family::Complete => FamilyParams::Complete { n: need(n, "n")? },
        Family::Star => FamilyParams::Star { n: need(n, "n")? },
    })
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Validate { structure } => {
            let s = load_structure_unchecked(&structure)?;
            let violations = s.validate();
            if violations.is_empty() {
                println!("ok");
                Ok(0)
            } else {
                for v in &violations {
                    println!("{v}");
                }
                Ok(1)
            }
        }
        Command::Type {
            structure,
            tuple,
            base,
            delta,
        } => {
            let s = load_structure(&structure)?;
            let delta = delta_for(&s, &delta)?;
            let base: BTreeSet<usize> = base.into_iter().collect();
            let ty = qf_type(&s, &tuple, &base, &delta)?;
            println!("{}", ty.canonical_string());
            Ok(0)
        }
        Command::Census {
            structure,
            base,
            max_len,
            delta,
            out,
            budget,
        } => {
            let s = load_structure(&structure)?;
            let delta = delta_for(&s, &delta)?;
            let base: BTreeSet<usize> = base.into_iter().collect();
            let report = census(&s, &base, max_len, &delta, budget)?;
            emit(&out, &report.to_csv())?;
            Ok(0)
        }
        Command::Check {
            structure,
            partition,
            max_len,
            delta,
            budget,
        } => {
            let s = load_structure(&structure)?;
            let part = load_partition(&partition, s.size())?;
            let delta = delta_for(&s, &delta)?;
            let verdict = is_congruence(&s, &part, max_len, &delta, budget)?;
            println!("{verdict}");
            Ok(if verdict.holds { 0 } else { 1 })
        }
        Command::Find {
            structure,
            k,
            max_len,
            method,
            empty_base,
            delta,
            out,
            budget,
        } => {
            let s = load_structure(&structure)?;
            let delta = delta_for(&s, &delta)?;
            let method: SearchMethod = method.parse()?;
            let config = SearchConfig {
                max_len,
                empty_base,
                budget,
                ..SearchConfig::default()
            };
            match find_decomposition(&s, KBudget::new(k)?, method, &delta, &config)? {
                Some((part, verdict)) => {
                    print!("{}", partition_to_string(&part));
                    println!("{verdict}");
                    if let Some(path) = out {
                        save_partition(&part, &path)?;
                    }
                    Ok(0)
                }
                None => {
                    println!("no decomposition found");
                    Ok(1)
                }
            }
        }
        Command::Gen {
            family,
            m,
            s,
            u,
            n,
            out,
        } => {
            let params = family_params(&family, m, s, u, n)?;
            let structure = generate(params)?;
            match out {
                Some(path) => save_structure(&structure, &path)?,
                None => print!("{}", structure_to_string(&structure)),
            }
            Ok(0)
        }
        Command::Degree { structure } => {
            let s = load_structure(&structure)?;
            println!("relation,degree");
            for (name, degree) in ma_degree(&s) {
                println!("{name},{degree}");
            }
            Ok(0)
        }
        Command::Experiment { cmd } => {
            let (csv, out) = match cmd {
                ExperimentCmd::Boundedness { m, out } => (experiment_boundedness(&m)?, out),
                ExperimentCmd::LowerBound { m, s, out } => (experiment_lower_bound(&m, s)?, out),
                ExperimentCmd::DecompositionSweep {
                    family,
                    n,
                    k,
                    max_len,
                    out,
                } => (experiment_sweep(&family, &n, &k, max_len)?, out),
            };
            emit(&out, &csv)?;
            Ok(0)
        }
    }
}

/// Transversal base (one element per pair) vs a component-closed base of
/// comparable size (whole pairs). The transversal census grows with m while
/// the closed census stays at one type.
fn experiment_boundedness(ms: &[usize]) -> Result<String> {
    let mut csv = String::from("family,m,base_kind,len,count\n");
    for &m in ms {
        let s = generate(FamilyParams::MatedPairs { m })?;
        let delta = DeltaSpec::full(s.signature());
        let transversal: BTreeSet<usize> = (0..m).collect();
        let closed: BTreeSet<usize> = (0..m.div_ceil(2)).flat_map(|i| [i, m + i]).collect();
        for (kind, base) in [("transversal", transversal), ("closed", closed)] {
            let report = census(&s, &base, 1, &delta, DEFAULT_BUDGET)?;
            csv.push_str(&format!(
                "mated-pairs,{m},{kind},1,{}\n",
                report.count_repfree(1)
            ));
        }
    }
    Ok(csv)
}

/// Census of equivalence(m, s) over a transversal base: each remaining
/// element names its class representative, so the count is at least m.
fn experiment_lower_bound(ms: &[usize], s: usize) -> Result<String> {
    let mut csv = String::from("family,m,s,len,count\n");
    for &m in ms {
        let st = generate(FamilyParams::Equivalence { m, s })?;
        let delta = DeltaSpec::full(st.signature());
        let transversal: BTreeSet<usize> = (0..m).map(|i| i * s).collect();
        let report = census(&st, &transversal, 1, &delta, DEFAULT_BUDGET)?;
        csv.push_str(&format!(
            "equivalence,{m},{s},1,{}\n",
            report.count_repfree(1)
        ));
    }
    Ok(csv)
}

fn experiment_sweep(family: &str, ns: &[usize], ks: &[usize], max_len: usize) -> Result<String> {
    if ks.len() != 1 && ks.len() != ns.len() {
        return Err(Error::BadParameter {
            reason: "--k takes one value or one per --n".to_string(),
        });
    }
    let mut csv = String::from("family,n,k,found,base_size\n");
    for (i, &n) in ns.iter().enumerate() {
        let k = if ks.len() == 1 { ks[0] } else { ks[i] };
        let s = generate(family_params(family, Some(n), None, None, Some(n))?)?;
        let delta = DeltaSpec::full(s.signature());
        let config = SearchConfig {
            max_len,
            ..SearchConfig::default()
        };
        let found = find_decomposition(
            &s,
            KBudget::new(k)?,
            SearchMethod::Components,
            &delta,
            &config,
        )?;
        match found {
            Some((part, _)) => {
                csv.push_str(&format!("{family},{n},{k},found,{}\n", part.base().len()))
            }
            None => csv.push_str(&format!("{family},{n},{k},absent,\n")),
        }
    }
    Ok(csv)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
