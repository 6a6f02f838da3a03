//! JSON state files: `{"dim": N, "matrix": [[[re, im], ...], ...]}`.

use std::fmt::Write as _;

use num_complex::Complex;
use serde::Deserialize;
use serde_json::value::RawValue;

use super::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix};
use crate::scalar::Real;

/// Parsed, not yet validated, state file.
#[derive(Clone, Debug, Deserialize)]
pub struct StateFile {
    pub dim: usize,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl StateFile {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn into_state<T: Real>(self) -> Result<DensityMatrix<T>> {
        if self.dim == 0 || self.matrix.len() != self.dim {
            return Err(Error::Parse(format!(
                "declared dim {} but matrix has {} rows",
                self.dim,
                self.matrix.len()
            )));
        }
        let mut rows = Vec::with_capacity(self.dim);
        for (i, row) in self.matrix.into_iter().enumerate() {
            if row.len() != self.dim {
                return Err(Error::Parse(format!("row {i} has {} entries, expected {}", row.len(), self.dim)));
            }
            rows.push(row.into_iter().map(|[re, im]| Complex::new(T::lit(re), T::lit(im))).collect());
        }
        let m = ComplexMatrix::from_rows(rows)?;
        DensityMatrix::new(HermitianMatrix::new(m)?)
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
fn fmt_f64(out: &mut String, x: f64) {
    write!(out, "{x:.16e}").unwrap();
}

/// Serializes a state in the state-file schema.
pub fn write_state_json<T: Real>(rho: &DensityMatrix<T>) -> String {
    let n = rho.dim();
    let m = rho.matrix();
    let mut out = String::with_capacity(64 * n * n);
    write!(out, "{{\"dim\":{n},\"matrix\":[").unwrap();
    for i in 0..n {
        if i > 0 {
            out.push(',');
        }
        out.push('[');
        for j in 0..n {
            if j > 0 {
                out.push(',');
            }
            let z = m[(i, j)];
            out.push('[');
            fmt_f64(&mut out, z.re.to_f64_lossy());
            out.push(',');
            fmt_f64(&mut out, z.im.to_f64_lossy());
            out.push(']');
        }
        out.push(']');
    }
    out.push_str("]}");
    out
}

/// The state file as an embeddable JSON value (keeps the 17-digit formatting).
pub fn state_json_value<T: Real>(rho: &DensityMatrix<T>) -> Box<RawValue> {
    RawValue::from_string(write_state_json(rho)).expect("writer emits valid JSON")
}

pub fn read_state_json<T: Real>(text: &str) -> Result<DensityMatrix<T>> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.into_state()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::StateSampler;

    #[test]
    fn round_trip_is_exact() {
        let mut s = StateSampler::new(3, 12);
        for _ in 0..10 {
            let rho: DensityMatrix<f64> = s.sample_state().unwrap();
            let text = write_state_json(&rho);
            let back: DensityMatrix<f64> = read_state_json(&text).unwrap();
            assert_eq!(back.matrix(), rho.matrix());
        }
    }

    #[test]
    fn writes_seventeen_digits() {
        let rho = DensityMatrix::<f64>::maximally_mixed(2);
        let text = write_state_json(&rho);
        assert!(text.starts_with("{\"dim\":2,\"matrix\":[[[5.0000000000000000e-1,"));
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["dim"], 2);
    }

    #[test]
    fn reader_validates() {
        let not_hermitian = r#"{"dim":2,"matrix":[[[0.5,0],[0.3,0]],[[0,0],[0.5,0]]]}"#;
        assert!(matches!(read_state_json::<f64>(not_hermitian), Err(Error::NotHermitian(_))));
        let bad_trace = r#"{"dim":2,"matrix":[[[0.5,0],[0,0]],[[0,0],[0.6,0]]]}"#;
        assert!(matches!(read_state_json::<f64>(bad_trace), Err(Error::InvalidTrace(_))));
        let negative = r#"{"dim":2,"matrix":[[[1.5,0],[0,0]],[[0,0],[-0.5,0]]]}"#;
        assert!(matches!(read_state_json::<f64>(negative), Err(Error::NotPositive(_))));
        let ragged = r#"{"dim":2,"matrix":[[[1,0]],[[0,0],[0,0]]]}"#;
        assert!(matches!(read_state_json::<f64>(ragged), Err(Error::Parse(_))));
        let wrong_dim = r#"{"dim":3,"matrix":[[[1,0],[0,0]],[[0,0],[0,0]]]}"#;
        assert!(matches!(read_state_json::<f64>(wrong_dim), Err(Error::Parse(_))));
        assert!(matches!(read_state_json::<f64>("not json"), Err(Error::Parse(_))));
    }
}
