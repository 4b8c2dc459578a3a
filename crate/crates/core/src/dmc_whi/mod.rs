//! Discrete memoryless wiretap channel with a helping interferer.

mod lp;
pub mod optimize;
pub mod regions;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info_measures::{mi_raw, Bits, ProbVector, DIST_TOL};
use crate::profile::{MiProfile, ProfilePair};

pub use optimize::{
    satisfies_strong, satisfies_very_strong, satisfies_weak, strong_formula,
    theorem1_rate_fixed_input, weak_formula, RateTriple,
};
pub use regions::{build_regions, HalfSpace, Normal, Polyhedron, RegionSet};

/// Transition kernel `p(y1, y2 | x1, x2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dmc {
    n_x1: usize,
    n_x2: usize,
    n_y1: usize,
    n_y2: usize,
    /// Indexed `[x1][x2][y1][y2]`, row-major.
    kernel: Vec<f64>,
}

/// On-disk channel description.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelFile {
    pub nx1: usize,
    pub nx2: usize,
    pub ny1: usize,
    pub ny2: usize,
    pub kernel: Vec<Vec<Vec<Vec<f64>>>>,
}

impl Dmc {
    pub fn new(n_x1: usize, n_x2: usize, n_y1: usize, n_y2: usize, kernel: Vec<f64>) -> Result<Self> {
        if [n_x1, n_x2, n_y1, n_y2].contains(&0) {
            return Err(Error::Validation("alphabet sizes must be >= 1".into()));
        }
        let expected = n_x1 * n_x2 * n_y1 * n_y2;
        if kernel.len() != expected {
            return Err(Error::Validation(format!(
                "kernel has {} entries, expected {expected}",
                kernel.len()
            )));
        }
        let slice = n_y1 * n_y2;
        for (s, chunk) in kernel.chunks(slice).enumerate() {
            let (x1, x2) = (s / n_x2, s % n_x2);
            if let Some(p) = chunk.iter().find(|p| !p.is_finite() || **p < 0.0) {
                return Err(Error::Validation(format!(
                    "kernel slice [x1={x1}][x2={x2}] has invalid entry {p}"
                )));
            }
            let total: f64 = chunk.iter().sum();
            if (total - 1.0).abs() > DIST_TOL {
                return Err(Error::Validation(format!(
                    "kernel slice [x1={x1}][x2={x2}] sums to {total}, expected 1 within {DIST_TOL:e}"
                )));
            }
        }
        Ok(Dmc { n_x1, n_x2, n_y1, n_y2, kernel })
    }

    /// Builds a kernel from a function `p(x1, x2, y1, y2)`.
    pub fn from_fn(
        n_x1: usize,
        n_x2: usize,
        n_y1: usize,
        n_y2: usize,
        f: impl Fn(usize, usize, usize, usize) -> f64,
    ) -> Result<Self> {
        let mut kernel = Vec::with_capacity(n_x1 * n_x2 * n_y1 * n_y2);
        for x1 in 0..n_x1 {
            for x2 in 0..n_x2 {
                for y1 in 0..n_y1 {
                    for y2 in 0..n_y2 {
                        kernel.push(f(x1, x2, y1, y2));
                    }
                }
            }
        }
        Dmc::new(n_x1, n_x2, n_y1, n_y2, kernel)
    }

    /// Channel whose outputs are conditionally independent given the inputs.
    pub fn from_marginals(
        n_x1: usize,
        n_x2: usize,
        n_y1: usize,
        n_y2: usize,
        w1: impl Fn(usize, usize, usize) -> f64,
        w2: impl Fn(usize, usize, usize) -> f64,
    ) -> Result<Self> {
        Dmc::from_fn(n_x1, n_x2, n_y1, n_y2, |x1, x2, y1, y2| w1(x1, x2, y1) * w2(x1, x2, y2))
    }

    pub fn from_file(file: ChannelFile) -> Result<Self> {
        let ChannelFile { nx1, nx2, ny1, ny2, kernel } = file;
        if kernel.len() != nx1 {
            return Err(Error::Validation(format!(
                "kernel has {} x1 slices, expected nx1 = {nx1}",
                kernel.len()
            )));
        }
        let mut flat = Vec::with_capacity(nx1 * nx2 * ny1 * ny2);
        for (x1, a) in kernel.iter().enumerate() {
            if a.len() != nx2 {
                return Err(Error::Validation(format!(
                    "kernel slice [x1={x1}] has {} x2 entries, expected {nx2}",
                    a.len()
                )));
            }
            for (x2, b) in a.iter().enumerate() {
                if b.len() != ny1 || b.iter().any(|c| c.len() != ny2) {
                    return Err(Error::Validation(format!(
                        "kernel slice [x1={x1}][x2={x2}] is not {ny1}x{ny2}"
                    )));
                }
                flat.extend(b.iter().flatten());
            }
        }
        Dmc::new(nx1, nx2, ny1, ny2, flat)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ChannelFile = serde_json::from_str(text)
            .map_err(|e| Error::Validation(format!("malformed channel file: {e}")))?;
        Dmc::from_file(file)
    }

    pub fn to_file(&self) -> ChannelFile {
        let kernel = (0..self.n_x1)
            .map(|x1| {
                (0..self.n_x2)
                    .map(|x2| {
                        (0..self.n_y1)
                            .map(|y1| (0..self.n_y2).map(|y2| self.p(x1, x2, y1, y2)).collect())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        ChannelFile { nx1: self.n_x1, nx2: self.n_x2, ny1: self.n_y1, ny2: self.n_y2, kernel }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("channel file serializes")
    }

    pub fn n_x1(&self) -> usize {
        self.n_x1
    }
    pub fn n_x2(&self) -> usize {
        self.n_x2
    }
    pub fn n_y1(&self) -> usize {
        self.n_y1
    }
    pub fn n_y2(&self) -> usize {
        self.n_y2
    }

    #[inline]
    pub fn p(&self, x1: usize, x2: usize, y1: usize, y2: usize) -> f64 {
        self.kernel[((x1 * self.n_x2 + x2) * self.n_y1 + y1) * self.n_y2 + y2]
    }

    /// `p(y1 | x1, x2)` indexed `[x1][x2][y1]`.
    pub fn receiver_kernel(&self) -> Vec<f64> {
        self.kernel.chunks(self.n_y2).map(|c| c.iter().sum()).collect()
    }

    /// `p(y2 | x1, x2)` indexed `[x1][x2][y2]`.
    pub fn eavesdropper_kernel(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n_x1 * self.n_x2 * self.n_y2];
        for (s, slice) in self.kernel.chunks(self.n_y1 * self.n_y2).enumerate() {
            for row in slice.chunks(self.n_y2) {
                for (y2, p) in row.iter().enumerate() {
                    out[s * self.n_y2 + y2] += p;
                }
            }
        }
        out
    }

    fn check_input(&self, input: &ProductInput) -> Result<()> {
        if input.px1.len() != self.n_x1 || input.px2.len() != self.n_x2 {
            return Err(Error::Validation(format!(
                "input sizes ({}, {}) do not match channel alphabets ({}, {})",
                input.px1.len(),
                input.px2.len(),
                self.n_x1,
                self.n_x2
            )));
        }
        Ok(())
    }
}

/// Independent input distributions of the source and the helper.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductInput {
    pub px1: ProbVector,
    pub px2: ProbVector,
}

impl ProductInput {
    pub fn new(px1: ProbVector, px2: ProbVector) -> Self {
        ProductInput { px1, px2 }
    }

    pub fn uniform(n_x1: usize, n_x2: usize) -> Result<Self> {
        Ok(ProductInput { px1: ProbVector::uniform(n_x1)?, px2: ProbVector::uniform(n_x2)? })
    }
}

/// Profile of one receiver with kernel `w[x1][x2][y]`.
fn profile_for(w: &[f64], n_x1: usize, n_x2: usize, n_y: usize, input: &ProductInput) -> MiProfile {
    let (px1, px2) = (input.px1.as_slice(), input.px2.as_slice());
    let at = |x1: usize, x2: usize, y: usize| w[(x1 * n_x2 + x2) * n_y + y];

    let mut joint = Vec::with_capacity(n_x1 * n_x2 * n_y);
    let mut j1 = vec![0.0; n_x1 * n_y];
    let mut j2 = vec![0.0; n_x2 * n_y];
    for x1 in 0..n_x1 {
        for x2 in 0..n_x2 {
            for y in 0..n_y {
                let p = px1[x1] * px2[x2] * at(x1, x2, y);
                joint.push(p);
                j1[x1 * n_y + y] += p;
                j2[x2 * n_y + y] += p;
            }
        }
    }

    // I(X1;Y|X2) = Σ p(x2) I(X1;Y|X2=x2), each term on the conditional joint.
    let mut cond = vec![0.0; n_x1 * n_y];
    let mut i1_given_2 = 0.0;
    for x2 in (0..n_x2).filter(|&x2| px2[x2] > 0.0) {
        for x1 in 0..n_x1 {
            for y in 0..n_y {
                cond[x1 * n_y + y] = px1[x1] * at(x1, x2, y);
            }
        }
        i1_given_2 += px2[x2] * mi_raw(n_x1, n_y, &cond);
    }
    let mut cond = vec![0.0; n_x2 * n_y];
    let mut i2_given_1 = 0.0;
    for x1 in (0..n_x1).filter(|&x1| px1[x1] > 0.0) {
        for x2 in 0..n_x2 {
            for y in 0..n_y {
                cond[x2 * n_y + y] = px2[x2] * at(x1, x2, y);
            }
        }
        i2_given_1 += px1[x1] * mi_raw(n_x2, n_y, &cond);
    }

    MiProfile {
        i1_given_2,
        i2_given_1,
        i_sum: mi_raw(n_x1 * n_x2, n_y, &joint),
        i1_alone: mi_raw(n_x1, n_y, &j1),
        i2_alone: mi_raw(n_x2, n_y, &j2),
    }
}

/// Mutual-information profiles at both outputs under a product input.
pub fn mi_profile_dmc(ch: &Dmc, input: &ProductInput) -> Result<ProfilePair> {
    ch.check_input(input)?;
    Ok(ProfilePair {
        receiver: profile_for(&ch.receiver_kernel(), ch.n_x1, ch.n_x2, ch.n_y1, input),
        eavesdropper: profile_for(&ch.eavesdropper_kernel(), ch.n_x1, ch.n_x2, ch.n_y2, input),
    })
}

/// All compositions of `resolution` into `parts` non-negative integers, in
/// lexicographic order, scaled to probability vectors.
pub fn simplex_lattice(parts: usize, resolution: usize) -> Vec<ProbVector> {
    fn rec(left: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(left - k, parts - 1, cur, out);
            cur.pop();
        }
    }
    if parts == 0 || resolution == 0 {
        return vec![];
    }
    let mut comps = Vec::new();
    rec(resolution, parts, &mut Vec::with_capacity(parts), &mut comps);
    let scale = resolution as f64;
    comps
        .into_iter()
        .map(|c| ProbVector::new(c.into_iter().map(|k| k as f64 / scale).collect()).expect("lattice point"))
        .collect()
}

/// Best secret rate over the lattice of product inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Result {
    pub rate_bits: Bits,
    pub input: ProductInput,
    pub triple: RateTriple,
}

/// Maximizes [`theorem1_rate_fixed_input`] over product inputs whose
/// probabilities are multiples of `1/grid_resolution`. Ties go to the
/// lexicographically first `(px1, px2)` lattice point.
pub fn theorem1_rate(ch: &Dmc, grid_resolution: usize) -> Result<Theorem1Result> {
    if grid_resolution == 0 {
        return Err(Error::Validation("grid resolution must be >= 1".into()));
    }
    let l1 = simplex_lattice(ch.n_x1, grid_resolution);
    let l2 = simplex_lattice(ch.n_x2, grid_resolution);
    let w1 = ch.receiver_kernel();
    let w2 = ch.eavesdropper_kernel();
    let points: Vec<(usize, usize)> =
        (0..l1.len()).flat_map(|i| (0..l2.len()).map(move |j| (i, j))).collect();
    let evals: Vec<(Bits, RateTriple)> = points
        .par_iter()
        .map(|&(i, j)| {
            let input = ProductInput { px1: l1[i].clone(), px2: l2[j].clone() };
            let pair = ProfilePair {
                receiver: profile_for(&w1, ch.n_x1, ch.n_x2, ch.n_y1, &input),
                eavesdropper: profile_for(&w2, ch.n_x1, ch.n_x2, ch.n_y2, &input),
            };
            theorem1_rate_fixed_input(&pair)
        })
        .collect();
    let mut best = 0;
    for (k, e) in evals.iter().enumerate() {
        if e.0 > evals[best].0 {
            best = k;
        }
    }
    let (i, j) = points[best];
    Ok(Theorem1Result {
        rate_bits: evals[best].0,
        input: ProductInput { px1: l1[i].clone(), px2: l2[j].clone() },
        triple: evals[best].1,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InterferenceClass {
    VeryStrong,
    Strong,
    Weak,
    Mixed,
}

impl std::fmt::Display for InterferenceClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Interference class certified only over the distributions that were tested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterferenceReport {
    pub class: InterferenceClass,
    pub tested_distributions: usize,
}

/// Slack used when comparing mutual informations during classification.
pub const CLASSIFY_SLACK: f64 = 1e-12;

/// Classifies from precomputed profiles. Very strong takes precedence, then
/// strong, then weak.
pub fn classify_profiles(pairs: &[ProfilePair]) -> Result<InterferenceReport> {
    if pairs.is_empty() {
        return Err(Error::Validation("no distributions to classify over".into()));
    }
    let all = |f: fn(&ProfilePair, f64) -> bool| pairs.iter().all(|p| f(p, CLASSIFY_SLACK));
    let class = if all(satisfies_very_strong) {
        InterferenceClass::VeryStrong
    } else if all(satisfies_strong) {
        InterferenceClass::Strong
    } else if all(satisfies_weak) {
        InterferenceClass::Weak
    } else {
        InterferenceClass::Mixed
    };
    Ok(InterferenceReport { class, tested_distributions: pairs.len() })
}

pub fn classify_interference(ch: &Dmc, inputs: &[ProductInput]) -> Result<InterferenceReport> {
    if inputs.is_empty() {
        return Err(Error::Validation("no distributions to classify over".into()));
    }
    let pairs = inputs
        .iter()
        .map(|i| mi_profile_dmc(ch, i))
        .collect::<Result<Vec<_>>>()?;
    classify_profiles(&pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    fn ind(c: bool) -> f64 {
        if c { 1.0 } else { 0.0 }
    }

    fn u2() -> ProductInput {
        ProductInput::uniform(2, 2).unwrap()
    }

    #[test]
    fn noiseless_receiver() {
        let ch = Dmc::from_marginals(2, 2, 2, 2, |x1, _, y| ind(y == x1), |_, _, _| 0.5).unwrap();
        let pair = mi_profile_dmc(&ch, &u2()).unwrap();
        close(pair.receiver.i1_given_2, 1.0, 1e-15);
        close(pair.receiver.i1_alone, 1.0, 1e-15);
        assert_eq!(pair.eavesdropper, MiProfile::ZERO);
    }

    #[test]
    fn xor_receiver() {
        let ch = Dmc::from_marginals(2, 2, 2, 2, |x1, x2, y| ind(y == x1 ^ x2), |_, _, _| 0.5).unwrap();
        let pair = mi_profile_dmc(&ch, &u2()).unwrap();
        assert_eq!(pair.receiver.i1_alone, 0.0);
        close(pair.receiver.i1_given_2, 1.0, 1e-15);
        close(pair.receiver.i_sum, 1.0, 1e-15);
    }

    #[test]
    fn dimension_mismatch() {
        let ch = Dmc::from_marginals(2, 2, 2, 2, |x1, _, y| ind(y == x1), |_, _, _| 0.5).unwrap();
        let bad = ProductInput::uniform(3, 2).unwrap();
        assert!(matches!(mi_profile_dmc(&ch, &bad), Err(Error::Validation(_))));
    }

    #[test]
    fn kernel_validation_names_slice() {
        let mut file = Dmc::from_marginals(2, 2, 2, 2, |_, _, _| 0.5, |_, _, _| 0.5)
            .unwrap()
            .to_file();
        file.kernel[1][0][0][0] = 0.3;
        let err = Dmc::from_file(file.clone()).unwrap_err().to_string();
        assert!(err.contains("[x1=1][x2=0]"), "{err}");
        file.kernel[1][0][0][0] = -0.25;
        file.kernel[1][0][0][1] = 0.75;
        assert!(Dmc::from_file(file).unwrap_err().to_string().contains("[x1=1][x2=0]"));
        assert!(Dmc::from_json("{\"nx1\":2}").is_err());
        assert!(Dmc::new(2, 2, 2, 2, vec![0.25; 15]).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let ch = Dmc::from_marginals(2, 3, 2, 2, |x1, x2, y| if (x1 + x2) % 2 == y { 0.9 } else { 0.1 }, |_, _, _| 0.5)
            .unwrap();
        assert_eq!(Dmc::from_json(&ch.to_json()).unwrap(), ch);
    }

    #[test]
    fn lattice_sizes_and_order() {
        assert_eq!(simplex_lattice(2, 4).len(), 5);
        assert_eq!(simplex_lattice(3, 4).len(), 15);
        let l = simplex_lattice(2, 2);
        assert_eq!(l[0].as_slice(), &[0.0, 1.0]);
        assert_eq!(l[2].as_slice(), &[1.0, 0.0]);
        assert_eq!(simplex_lattice(1, 3)[0].as_slice(), &[1.0]);
    }

    #[test]
    fn theorem1_rate_examples() {
        let ch = Dmc::from_marginals(2, 2, 2, 2, |x1, _, y| ind(y == x1), |_, _, _| 0.5).unwrap();
        let r = theorem1_rate(&ch, 4).unwrap();
        close(r.rate_bits, 1.0, 1e-12);
        assert_eq!(r.input.px1.as_slice(), &[0.5, 0.5]);

        // Y1 and Y2 are copies of the same noisy observation.
        let same = Dmc::from_fn(2, 2, 2, 2, |x1, x2, y1, y2| {
            let p = if y1 == x1 ^ (x2 & x1) { 0.8 } else { 0.2 };
            p * ind(y1 == y2)
        })
        .unwrap();
        assert_eq!(theorem1_rate(&same, 8).unwrap().rate_bits, 0.0);
        assert!(theorem1_rate(&same, 0).is_err());
    }

    #[test]
    fn classify_requires_inputs() {
        let ch = Dmc::from_marginals(2, 2, 2, 2, |_, _, _| 0.5, |_, _, _| 0.5).unwrap();
        assert!(classify_interference(&ch, &[]).is_err());
    }
}
