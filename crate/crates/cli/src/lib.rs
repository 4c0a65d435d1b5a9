//! Command-line front end for `lu-invariants`.
//!
//! [`run`] parses arguments and returns the exit code with the captured
//! output, so the binary is a thin wrapper and tests can drive commands
//! in-process. Tables are tab-separated with `#` header lines; floats use
//! nine decimal places.

pub mod state_file;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use lu_invariants::census::CensusError;
use lu_invariants::invariants::{i_vector, j_vector};
use lu_invariants::states::default_sample_count;
use lu_invariants::{
    conjugation_orbit_count, count_subgroup_classes, euler_exponents, hilbert_series, i_from_j, invariant_i,
    invariant_j, invariant_space_rank, j_from_i, meyer_wallach, mixed_dimension, restricted_dimension,
    stable_dimension, CharacterTable, DimensionError, DimensionQuery, InvariantError, SeriesError, StateError,
    SubsetError, SubsetMask,
};
use thiserror::Error;

use crate::state_file::{read_state, StateFile, StateFileError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BOUND: i32 = 3;
pub const EXIT_ASSERTION: i32 = 4;

/// Largest `(m!)^k` column count accepted by `rank-oracle`.
pub const MAX_ORACLE_COLUMNS: usize = 4096;

/// Largest residual tolerated between the computed and transformed vectors.
pub const TRANSFORM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "luinv", version, about = "Counts and evaluates local-unitary invariants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InvariantKind {
    #[value(name = "I")]
    I,
    #[value(name = "J")]
    J,
    #[value(name = "eta")]
    Eta,
    #[value(name = "Q")]
    Q,
    #[value(name = "higher")]
    Higher,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dimension of the degree-(m, m) invariants.
    Dims {
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        m: usize,
        /// Either all k local dimensions, or the k-1 system dimensions with
        /// an environment of dimension >= m appended.
        #[arg(long, value_delimiter = ',')]
        local_dims: Option<Vec<usize>>,
        /// Mixed-state invariants of k parties.
        #[arg(long)]
        mixed: bool,
    },
    /// Hilbert series coefficients and Euler-product exponents.
    Hilbert {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        order: usize,
    },
    /// Conjugacy classes of finite-index subgroups of a free group.
    Subgroups {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        max_index: usize,
    },
    /// Orbits of simultaneous conjugation on tuples of permutations.
    Orbits {
        #[arg(long)]
        tuple_length: usize,
        #[arg(long)]
        m: usize,
    },
    /// Character table of the symmetric group.
    CharTable {
        #[arg(long)]
        m: usize,
    },
    /// Evaluates one invariant on a state file.
    Eval {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, value_enum)]
        invariant: InvariantKind,
        /// Comma-separated 1-based sites; empty for the empty set.
        #[arg(long, value_parser = parse_sites)]
        subset: Option<Sites>,
        #[arg(long)]
        m: Option<usize>,
    },
    /// All I_A and J_A of a pure state and the parity-transform residual.
    Transform {
        #[arg(long)]
        state: PathBuf,
    },
    /// Numerical rank of the invariant span, against the exact count.
    RankOracle {
        #[arg(long, value_delimiter = ',', required = true)]
        local_dims: Vec<usize>,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: u64,
    },
}

/// 1-based sites of a subset, e.g. `1,3`; `{}` or the empty string for the
/// empty set.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Sites(Vec<usize>);

fn parse_sites(text: &str) -> Result<Sites, String> {
    let inner = text.trim().trim_start_matches('{').trim_end_matches('}').trim();
    if inner.is_empty() {
        return Ok(Sites(Vec::new()));
    }
    inner
        .split(',')
        .map(|w| w.trim().parse::<usize>().map_err(|_| format!("`{w}` is not a site number")))
        .collect::<Result<_, _>>()
        .map(Sites)
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Bound(String),
    #[error("{0}")]
    Assertion(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Input(_) => EXIT_INPUT,
            CliError::Bound(_) => EXIT_BOUND,
            CliError::Assertion(_) => EXIT_ASSERTION,
        }
    }
}

impl From<DimensionError> for CliError {
    fn from(e: DimensionError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<SubsetError> for CliError {
    fn from(e: SubsetError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<CensusError> for CliError {
    fn from(e: CensusError) -> Self {
        match e {
            CensusError::BoundExceeded { .. } => CliError::Bound(e.to_string()),
            CensusError::InvalidQuery(_) => CliError::Usage(e.to_string()),
        }
    }
}

impl From<SeriesError> for CliError {
    fn from(e: SeriesError) -> Self {
        match e {
            SeriesError::NonIntegral { .. } | SeriesError::Negative { .. } => CliError::Assertion(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<StateError> for CliError {
    fn from(e: StateError) -> Self {
        match e {
            StateError::InsufficientSamples { .. } | StateError::ZeroDimension | StateError::SubsetMismatch { .. } => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<InvariantError> for CliError {
    fn from(e: InvariantError) -> Self {
        match e {
            InvariantError::TooLarge { .. } => CliError::Bound(e.to_string()),
            InvariantError::FormsDisagree { .. } => CliError::Assertion(e.to_string()),
            InvariantError::NotNormalized(_) => CliError::Input(e.to_string()),
            InvariantError::State(inner) => inner.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<StateFileError> for CliError {
    fn from(e: StateFileError) -> Self {
        CliError::Input(e.to_string())
    }
}

/// Exit code and captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs one command. The first item of `args` is the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
            };
        }
    };
    let mut out = String::new();
    match execute(cli.command, &mut out) {
        Ok(()) => Outcome { code: EXIT_OK, stdout: out, stderr: String::new() },
        Err(e) => Outcome { code: e.code(), stdout: out, stderr: format!("error: {e}\n") },
    }
}

/// Nine decimal places, without a sign on values that round to zero.
pub fn format_float(x: f64) -> String {
    let s = format!("{x:.9}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

fn execute(command: Command, out: &mut String) -> Result<(), CliError> {
    match command {
        Command::Dims { k, m, local_dims, mixed } => dims(k, m, local_dims, mixed, out),
        Command::Hilbert { k, order } => hilbert(k, order, out),
        Command::Subgroups { rank, max_index } => {
            let _ = writeln!(out, "# index\tclasses");
            for d in 1..=max_index {
                let _ = writeln!(out, "{d}\t{}", count_subgroup_classes(rank, d)?);
            }
            Ok(())
        }
        Command::Orbits { tuple_length, m } => {
            let _ = writeln!(out, "{}", conjugation_orbit_count(tuple_length, m)?);
            Ok(())
        }
        Command::CharTable { m } => {
            char_table(m, out);
            Ok(())
        }
        Command::Eval { state, invariant, subset, m } => eval(&read_state(&state)?, invariant, subset, m, out),
        Command::Transform { state } => transform(&read_state(&state)?, out),
        Command::RankOracle { local_dims, m, samples, seed } => rank_oracle(&local_dims, m, samples, seed, out),
    }
}

fn dims(
    k: Option<usize>,
    m: usize,
    local_dims: Option<Vec<usize>>,
    mixed: bool,
    out: &mut String,
) -> Result<(), CliError> {
    let value = match (local_dims, mixed) {
        (Some(_), true) => return Err(CliError::Usage("--mixed cannot be combined with --local-dims".into())),
        (None, mixed) => {
            let k = k.ok_or_else(|| CliError::Usage("--k is required without --local-dims".into()))?;
            if k == 0 {
                return Err(DimensionError::NoSubsystems.into());
            }
            if mixed {
                mixed_dimension(k, m)
            } else {
                stable_dimension(k, m)
            }
        }
        (Some(dims), false) => {
            if dims.contains(&0) {
                return Err(DimensionError::ZeroLocalDim.into());
            }
            match k {
                Some(k) if k == dims.len() => DimensionQuery::new(k, m, Some(dims))?.dimension(),
                Some(k) if k == dims.len() + 1 => restricted_dimension(&dims, m),
                None => restricted_dimension(&dims, m),
                Some(k) => {
                    return Err(CliError::Usage(format!(
                        "--local-dims has {} entries; expected k = {k} or k - 1 = {}",
                        dims.len(),
                        k.saturating_sub(1)
                    )))
                }
            }
        }
    };
    let _ = writeln!(out, "{value}");
    Ok(())
}

fn hilbert(k: usize, order: usize, out: &mut String) -> Result<(), CliError> {
    if k == 0 {
        return Err(DimensionError::NoSubsystems.into());
    }
    let series = hilbert_series(k, order);
    let counts = euler_exponents(&series)?;
    let _ = writeln!(out, "# coefficients d_{{{k},0..{order}}}");
    let coeffs: Vec<String> = series.coeffs().iter().map(|c| c.to_string()).collect();
    let _ = writeln!(out, "{}", coeffs.join("\t"));
    let _ = writeln!(out, "# d\tu_d");
    for (i, u) in counts.as_slice().iter().enumerate() {
        let _ = writeln!(out, "{}\t{u}", i + 1);
    }
    Ok(())
}

fn char_table(m: usize, out: &mut String) {
    let table = CharacterTable::new(m);
    let classes: Vec<String> = table.partitions().iter().map(|p| p.to_string()).collect();
    let _ = writeln!(out, "# partition\t{}", classes.join("\t"));
    for (lambda, row) in table.rows() {
        let values: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{lambda}\t{}", values.join("\t"));
    }
}

fn require_pure<'a>(state: &'a StateFile, what: &str) -> Result<&'a lu_invariants::PureState, CliError> {
    state.as_pure().ok_or_else(|| CliError::Usage(format!("{what} needs a pure state")))
}

fn eval(
    state: &StateFile,
    invariant: InvariantKind,
    subset: Option<Sites>,
    m: Option<usize>,
    out: &mut String,
) -> Result<(), CliError> {
    let k = state.parties();
    let subset = || -> Result<SubsetMask, CliError> {
        let sites =
            subset.as_ref().map(|s| s.0.as_slice()).ok_or_else(|| CliError::Usage("--subset is required".into()))?;
        Ok(SubsetMask::from_members(k, sites)?)
    };
    let value = match invariant {
        InvariantKind::I => invariant_i(require_pure(state, "I")?, &subset()?)?,
        InvariantKind::J => invariant_j(&state.density(), &subset()?)?,
        InvariantKind::Eta => lu_invariants::eta(&state.density(), &subset()?)?,
        InvariantKind::Q => meyer_wallach(require_pure(state, "Q")?)?,
        InvariantKind::Higher => {
            let m = m.ok_or_else(|| CliError::Usage("--m is required for higher".into()))?;
            lu_invariants::higher_invariant(require_pure(state, "higher")?, &subset()?, m)?
        }
    };
    let _ = writeln!(out, "{}", format_float(value));
    Ok(())
}

fn transform(state: &StateFile, out: &mut String) -> Result<(), CliError> {
    let psi = require_pure(state, "transform")?;
    let i = i_vector(psi)?;
    let j = j_vector(&state.density())?;
    let residual = j_from_i(&i).max_abs_diff(&j).max(i_from_j(&j).max_abs_diff(&i));
    let _ = writeln!(out, "# subset\tI\tJ");
    for a in SubsetMask::all(state.parties()) {
        let _ = writeln!(out, "{a}\t{}\t{}", format_float(i.get(&a)), format_float(j.get(&a)));
    }
    let _ = writeln!(out, "# max residual");
    let _ = writeln!(out, "{}", format_float(residual));
    if residual >= TRANSFORM_TOLERANCE {
        return Err(CliError::Assertion(format!("transform residual {residual:e} exceeds {TRANSFORM_TOLERANCE:e}")));
    }
    Ok(())
}

fn rank_oracle(dims: &[usize], m: usize, samples: Option<usize>, seed: u64, out: &mut String) -> Result<(), CliError> {
    let fact = (1..=m).try_fold(1usize, |acc, i| acc.checked_mul(i));
    let columns = fact.and_then(|f| f.checked_pow(dims.len() as u32));
    match columns {
        Some(c) if c <= MAX_ORACLE_COLUMNS => {}
        _ => {
            return Err(CliError::Bound(format!(
                "refusing (m!)^k columns above {MAX_ORACLE_COLUMNS} for m = {m}, k = {}",
                dims.len()
            )))
        }
    }
    let samples = samples.unwrap_or_else(|| default_sample_count(dims.len(), m));
    let rank = invariant_space_rank(dims, m, samples, seed)?;
    let exact = restricted_dimension(dims, m);
    let _ = writeln!(out, "# rank\trestricted_dimension");
    let _ = writeln!(out, "{rank}\t{exact}");
    if exact != rank.into() {
        return Err(CliError::Assertion(format!("numerical rank {rank} differs from exact count {exact}")));
    }
    Ok(())
}
