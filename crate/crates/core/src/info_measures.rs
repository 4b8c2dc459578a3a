//! Scalar information measures shared by the rest of the crate.
//!
//! All quantities are in bits. `0 · log 0` is taken to be `0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rate or information quantity in bits (per channel use where applicable).
pub type Bits = f64;

/// Tolerance used when validating that probabilities sum to one.
pub const DIST_TOL: f64 = 1e-12;

/// Mutual information values in `[-MI_CLAMP, 0)` are reported as zero.
pub const MI_CLAMP: f64 = 1e-12;

/// Gaussian rate function `g(x) = ½·log2(1 + x)`.
pub fn g(x: f64) -> Result<Bits> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("g(x) requires finite x >= 0, got {x}")));
    }
    Ok(g_unchecked(x))
}

#[inline]
pub(crate) fn g_unchecked(x: f64) -> Bits {
    0.5 * (1.0 + x).log2()
}

#[inline]
fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

/// A probability vector over a finite alphabet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        check_distribution(&entries, "probability vector")?;
        Ok(ProbVector(entries))
    }

    /// Uniform distribution over `n` symbols.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Validation("alphabet must be non-empty".into()));
        }
        Ok(ProbVector(vec![1.0 / n as f64; n]))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl std::ops::Index<usize> for ProbVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl TryFrom<Vec<f64>> for ProbVector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        ProbVector::new(v)
    }
}

impl From<ProbVector> for Vec<f64> {
    fn from(p: ProbVector) -> Vec<f64> {
        p.0
    }
}

fn check_distribution(entries: &[f64], what: &str) -> Result<()> {
    if entries.is_empty() {
        return Err(Error::Validation(format!("{what} is empty")));
    }
    if let Some((i, p)) = entries
        .iter()
        .enumerate()
        .find(|(_, p)| !p.is_finite() || **p < 0.0)
    {
        return Err(Error::Validation(format!(
            "{what} entry {i} is {p}, expected a finite value >= 0"
        )));
    }
    let total: f64 = entries.iter().sum();
    if (total - 1.0).abs() > DIST_TOL {
        return Err(Error::Validation(format!(
            "{what} sums to {total}, expected 1 within {DIST_TOL:e}"
        )));
    }
    Ok(())
}

/// Shannon entropy of a probability vector, in bits.
pub fn entropy(p: &ProbVector) -> Bits {
    entropy_raw(p.as_slice())
}

/// Entropy of non-negative weights that are already known to be a distribution.
pub(crate) fn entropy_raw(p: &[f64]) -> Bits {
    p.iter().map(|&x| plogp(x)).sum()
}

/// A joint distribution over a finite product alphabet, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct JointMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl JointMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::Validation(format!(
                "joint matrix of shape {rows}x{cols} needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        check_distribution(&data, "joint distribution")?;
        Ok(JointMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Validation("joint matrix rows differ in length".into()));
        }
        JointMatrix::new(rows.len(), ncols, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn row_marginal(&self) -> Vec<f64> {
        self.data.chunks(self.cols).map(|r| r.iter().sum()).collect()
    }

    pub fn col_marginal(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for row in self.data.chunks(self.cols) {
            for (o, x) in out.iter_mut().zip(row) {
                *o += x;
            }
        }
        out
    }
}

/// `I = H(rows) + H(cols) − H(joint)`, clamped to zero for tiny negative values.
pub fn mutual_information(joint: &JointMatrix) -> Bits {
    mi_raw(joint.rows, joint.cols, &joint.data)
}

/// [`mutual_information`] on a row-major slice already known to be a distribution.
pub(crate) fn mi_raw(rows: usize, cols: usize, data: &[f64]) -> Bits {
    debug_assert_eq!(data.len(), rows * cols);
    let mut col = vec![0.0; cols];
    let mut h_row = 0.0;
    let mut h_joint = 0.0;
    for r in data.chunks(cols) {
        let mut rs = 0.0;
        for (c, &x) in r.iter().enumerate() {
            col[c] += x;
            rs += x;
            h_joint += plogp(x);
        }
        h_row += plogp(rs);
    }
    let h_col: f64 = col.iter().map(|&x| plogp(x)).sum();
    clamp_mi(h_row + h_col - h_joint)
}

#[inline]
pub(crate) fn clamp_mi(v: f64) -> f64 {
    if (-MI_CLAMP..0.0).contains(&v) {
        0.0
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn g_values() {
        assert_eq!(g(0.0).unwrap(), 0.0);
        close(g(3.0).unwrap(), 1.0, 1e-15);
        close(g(1.0).unwrap(), 0.5, 1e-15);
        assert!(matches!(g(-1e-3), Err(Error::Domain(_))));
        assert!(g(f64::NAN).is_err());
    }

    #[test]
    fn entropy_values() {
        close(entropy(&ProbVector::new(vec![0.5, 0.5]).unwrap()), 1.0, 1e-15);
        assert_eq!(entropy(&ProbVector::new(vec![1.0, 0.0]).unwrap()), 0.0);
        close(entropy(&ProbVector::uniform(4).unwrap()), 2.0, 1e-15);
    }

    #[test]
    fn invalid_distributions_rejected() {
        assert!(ProbVector::new(vec![0.6, 0.6]).is_err());
        assert!(ProbVector::new(vec![1.1, -0.1]).is_err());
        assert!(ProbVector::new(vec![]).is_err());
        assert!(JointMatrix::new(2, 2, vec![0.25; 3]).is_err());
        assert!(JointMatrix::from_rows(&[vec![0.5, 0.5], vec![0.1]]).is_err());
        assert!(serde_json::from_str::<ProbVector>("[0.2, 0.2]").is_err());
    }

    #[test]
    fn mi_values() {
        let corr = JointMatrix::from_rows(&[vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap();
        close(mutual_information(&corr), 1.0, 1e-15);
        let prod = JointMatrix::from_rows(&[vec![0.25, 0.25], vec![0.25, 0.25]]).unwrap();
        assert_eq!(mutual_information(&prod), 0.0);
        // H(X)+H(Y)-H(X,Y) = 2 - (-2·0.4·log2 0.4 - 2·0.1·log2 0.1)
        let bsc = JointMatrix::from_rows(&[vec![0.4, 0.1], vec![0.1, 0.4]]).unwrap();
        close(mutual_information(&bsc), 0.278072, 1e-6);
    }

    #[test]
    fn marginals() {
        let j = JointMatrix::from_rows(&[vec![0.1, 0.2, 0.3], vec![0.0, 0.15, 0.25]]).unwrap();
        let r = j.row_marginal();
        close(r[0], 0.6, 1e-15);
        close(r[1], 0.4, 1e-15);
        let c = j.col_marginal();
        close(c[2], 0.55, 1e-15);
        assert_eq!((j.rows(), j.cols()), (2, 3));
    }
}
