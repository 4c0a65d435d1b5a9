//! Plain-text state files.
//!
//! ```text
//! pure
//! dims 2 2
//! 0.7071067811865476 0
//! 0 0
//! 0 0
//! 0.7071067811865476 0
//! ```
//!
//! The first line is `pure` or `mixed`, the second `dims` followed by the
//! local dimensions. Then one `re im` pair per line: `Π n_i` amplitudes for
//! a pure state, `(Π n_i)²` matrix entries (row outer, column inner) for a
//! mixed one. Indices are row-major with the last subsystem fastest. Lines
//! starting with `#` and blank lines are skipped.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use lu_invariants::states::StateError;
use lu_invariants::{projector, DensityMatrix, PureState};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StateFileError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("expected {expected} coefficients, found {found}")]
    Count { expected: usize, found: usize },
    #[error(transparent)]
    State(#[from] StateError),
}

#[derive(Debug, Clone)]
pub enum StateFile {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl StateFile {
    pub fn dims(&self) -> &[usize] {
        match self {
            StateFile::Pure(psi) => psi.dims(),
            StateFile::Mixed(rho) => rho.dims(),
        }
    }

    pub fn parties(&self) -> usize {
        self.dims().len()
    }

    /// The density matrix, `ψψ*` for a pure state.
    pub fn density(&self) -> DensityMatrix {
        match self {
            StateFile::Pure(psi) => projector(psi),
            StateFile::Mixed(rho) => rho.clone(),
        }
    }

    pub fn as_pure(&self) -> Option<&PureState> {
        match self {
            StateFile::Pure(psi) => Some(psi),
            StateFile::Mixed(_) => None,
        }
    }
}

pub fn read_state(path: &Path) -> Result<StateFile, StateFileError> {
    let text =
        fs::read_to_string(path).map_err(|source| StateFileError::Io { path: path.display().to_string(), source })?;
    parse_state(&text)
}

pub fn parse_state(text: &str) -> Result<StateFile, StateFileError> {
    let mut lines =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let parse_err = |line: usize, message: &str| StateFileError::Parse { line, message: message.to_string() };

    let (kind_line, kind) = lines.next().ok_or_else(|| parse_err(0, "empty file"))?;
    let pure = match kind {
        "pure" => true,
        "mixed" => false,
        _ => return Err(parse_err(kind_line, "expected `pure` or `mixed`")),
    };

    let (dims_line, dims_text) = lines.next().ok_or_else(|| parse_err(kind_line, "missing `dims` line"))?;
    let mut words = dims_text.split_whitespace();
    if words.next() != Some("dims") {
        return Err(parse_err(dims_line, "expected `dims n1 n2 ...`"));
    }
    let dims = words
        .map(|w| w.parse::<usize>().ok().filter(|&n| n > 0))
        .collect::<Option<Vec<usize>>>()
        .ok_or_else(|| parse_err(dims_line, "local dimensions must be positive integers"))?;
    if dims.is_empty() {
        return Err(parse_err(dims_line, "at least one local dimension is required"));
    }

    let mut coeffs = Vec::new();
    for (line, text) in lines {
        let parts: Vec<&str> = text.split_whitespace().collect();
        let [re, im] = parts[..] else {
            return Err(parse_err(line, "expected `re im`"));
        };
        let re: f64 = re.parse().map_err(|_| parse_err(line, "real part is not a number"))?;
        let im: f64 = im.parse().map_err(|_| parse_err(line, "imaginary part is not a number"))?;
        if !re.is_finite() || !im.is_finite() {
            return Err(parse_err(line, "coefficients must be finite"));
        }
        coeffs.push(Complex64::new(re, im));
    }

    let total: usize = dims.iter().product();
    let expected = if pure { total } else { total * total };
    if coeffs.len() != expected {
        return Err(StateFileError::Count { expected, found: coeffs.len() });
    }
    if pure {
        Ok(StateFile::Pure(PureState::new(dims, coeffs)?))
    } else {
        let rho = DensityMatrix::from_entries(dims, &coeffs)?;
        rho.validate_physical()?;
        Ok(StateFile::Mixed(rho))
    }
}

fn write_header(out: &mut String, kind: &str, dims: &[usize]) {
    out.push_str(kind);
    out.push_str("\ndims");
    for n in dims {
        let _ = write!(out, " {n}");
    }
    out.push('\n');
}

/// Serializes with shortest round-trip float formatting.
pub fn format_pure(psi: &PureState) -> String {
    let mut out = String::new();
    write_header(&mut out, "pure", psi.dims());
    for c in psi.coeffs() {
        let _ = writeln!(out, "{} {}", c.re, c.im);
    }
    out
}

pub fn format_mixed(rho: &DensityMatrix) -> String {
    let mut out = String::new();
    write_header(&mut out, "mixed", rho.dims());
    let m = rho.matrix();
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let z = m[(r, c)];
            let _ = writeln!(out, "{} {}", z.re, z.im);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use lu_invariants::states::random_mixed_state;

    #[test]
    fn pure_roundtrip_is_exact() {
        let psi = lu_invariants::random_pure_state(&[2, 3], 5).unwrap();
        let StateFile::Pure(back) = parse_state(&format_pure(&psi)).unwrap() else {
            panic!("expected a pure state");
        };
        assert_eq!(back, psi);
    }

    #[test]
    fn mixed_roundtrip_is_exact() {
        let rho = random_mixed_state(&[2, 2], 2, 9).unwrap();
        let StateFile::Mixed(back) = parse_state(&format_mixed(&rho)).unwrap() else {
            panic!("expected a mixed state");
        };
        assert_eq!(back.matrix(), rho.matrix());
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let text = "# Bell\npure\n\ndims 2 2\n1 0\n# middle\n0 0\n0 0\n1 0\n";
        let state = parse_state(text).unwrap();
        assert_eq!(state.dims(), &[2, 2]);
        assert!(state.as_pure().is_some());
    }

    #[test]
    fn malformed_files_are_rejected() {
        assert!(matches!(parse_state(""), Err(StateFileError::Parse { .. })));
        assert!(matches!(parse_state("qubit\ndims 2\n1 0\n0 0\n"), Err(StateFileError::Parse { line: 1, .. })));
        assert!(matches!(parse_state("pure\ndims 2 0\n"), Err(StateFileError::Parse { line: 2, .. })));
        assert!(matches!(parse_state("pure\ndims 2\n1 0\n"), Err(StateFileError::Count { expected: 2, found: 1 })));
        assert!(matches!(parse_state("pure\ndims 2\n1\n0 0\n"), Err(StateFileError::Parse { line: 3, .. })));
        assert!(matches!(parse_state("pure\ndims 2\nx 0\n0 0\n"), Err(StateFileError::Parse { line: 3, .. })));
        let not_hermitian = "mixed\ndims 2\n0.5 0\n0.5 0\n0 0\n0.5 0\n";
        assert!(matches!(parse_state(not_hermitian), Err(StateFileError::State(StateError::NotHermitian(_)))));
        let negative = "mixed\ndims 2\n1.5 0\n0 0\n0 0\n-0.5 0\n";
        assert!(matches!(parse_state(negative), Err(StateFileError::State(StateError::NotPositive(_)))));
    }
}
