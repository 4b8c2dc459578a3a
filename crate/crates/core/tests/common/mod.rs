//! Test-only oracles, independent of the library's optimizer.

#![allow(dead_code)]

use rand::Rng;
use wthi_core::{MiProfile, ProfilePair};

/// Random profile consistent with the chain rule for independent inputs.
pub fn random_profile<R: Rng>(rng: &mut R, scale: f64) -> MiProfile {
    let a: f64 = rng.gen_range(0.0..scale);
    let b: f64 = rng.gen_range(0.0..scale);
    let s = rng.gen_range(a.max(b)..=a + b);
    MiProfile { i1_given_2: a, i2_given_1: b, i_sum: s, i1_alone: s - b, i2_alone: s - a }
}

/// Receiver decodes `(r1, r2)`, from the region definitions as written.
fn receiver_decodes(p: &MiProfile, r1: f64, r2: f64) -> bool {
    let mac = r1 <= p.i1_given_2 && r2 <= p.i2_given_1 && r1 + r2 <= p.i_sum;
    let tan = r1 <= p.i1_alone && r2 > p.i2_given_1;
    mac || tan
}

/// Eavesdropper decodes `(r1d, r2)`, with the strict inequalities as written.
fn eavesdropper_decodes(p: &MiProfile, r1d: f64, r2: f64) -> bool {
    let mac = r1d < p.i1_given_2 && r2 < p.i2_given_1 && r1d + r2 < p.i_sum;
    let tan = r1d < p.i1_alone && r2 > p.i2_given_1;
    mac || tan
}

/// Exhaustive scan of the `(R1s, R1d, R2)` lattice with spacing `step`.
///
/// Once `R2` is fixed the constraints on `R1` and `R1d` decouple, so the
/// cube scan reduces to, for each `R2`, the largest decodable `R1` and the
/// smallest eavesdropper-safe `R1d`. No point of the cube is skipped.
pub fn grid_scan_rate(pair: &ProfilePair, step: f64) -> f64 {
    let top = pair.receiver.max_constant().max(pair.eavesdropper.max_constant()) + 2.0 * step;
    let k = (top / step).ceil() as usize;
    let mut best = 0.0f64;
    for i2 in 0..=k {
        let r2 = i2 as f64 * step;
        let r1_max = (0..=k)
            .rev()
            .map(|i| i as f64 * step)
            .find(|&r1| receiver_decodes(&pair.receiver, r1, r2));
        let r1d_min = (0..=k)
            .map(|i| i as f64 * step)
            .find(|&r1d| !eavesdropper_decodes(&pair.eavesdropper, r1d, r2));
        if let (Some(r1), Some(r1d)) = (r1_max, r1d_min) {
            if r1d <= r1 {
                best = best.max(r1 - r1d);
            }
        }
    }
    best
}

/// Which piece of the Gaussian closed form applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GaussBranch {
    VeryStrong,
    StrongSourceLimited,
    StrongSumLimited,
    StrongZero,
    WeakHelperNoise,
    WeakNoHelper,
}

pub fn gauss_branch(a: f64, p1: f64, p2: f64) -> GaussBranch {
    if a >= 1.0 + p2 {
        GaussBranch::VeryStrong
    } else if a >= 1.0 {
        if p1 < p2 && a > 1.0 + p1 {
            GaussBranch::StrongSourceLimited
        } else if p1 < p2 {
            GaussBranch::StrongSumLimited
        } else {
            GaussBranch::StrongZero
        }
    } else if p1 > p2 {
        GaussBranch::WeakHelperNoise
    } else {
        GaussBranch::WeakNoHelper
    }
}

/// Grid of `(a, P1, P2)` touching every branch, including exact boundaries.
pub fn gaussian_grid() -> Vec<(f64, f64, f64)> {
    let gains = [0.1, 0.3, 0.5, 0.8, 0.99, 1.0, 1.2, 1.5, 2.0, 2.5, 3.0, 4.0, 6.0];
    let powers = [0.0, 0.25, 0.5, 1.0, 2.0, 2.0 / 3.0, 3.0, 5.0];
    let mut out = Vec::new();
    for &a in &gains {
        for &p1 in &powers {
            for &p2 in &powers {
                out.push((a, p1, p2));
            }
        }
    }
    out
}

/// Golden-section search for the maximizer of a unimodal `f` on `[lo, hi]`.
pub fn golden_section_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while hi - lo > tol {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    0.5 * (lo + hi)
}

pub fn gauss_g(x: f64) -> f64 {
    0.5 * (1.0 + x).log2()
}
