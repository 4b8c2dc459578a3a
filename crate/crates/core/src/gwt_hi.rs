//! Closed-form rates for the symmetric Gaussian wiretap channel with a
//! helping interferer:
//!
//! ```text
//! Y1 = X1 + √a·X2 + N1
//! Y2 = √a·X1 + X2 + N2
//! ```
//!
//! with unit-variance noise and average power budgets `P̄1`, `P̄2`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info_measures::{g_unchecked as g, Bits};
use crate::profile::{MiProfile, ProfilePair};

/// Channel gain and power budgets of the symmetric Gaussian model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianWthi {
    pub a: f64,
    pub p1_max: f64,
    pub p2_max: f64,
}

impl GaussianWthi {
    pub fn new(a: f64, p1_max: f64, p2_max: f64) -> Result<Self> {
        check_nonneg("a", a)?;
        check_nonneg("p1_max", p1_max)?;
        check_nonneg("p2_max", p2_max)?;
        Ok(GaussianWthi { a, p1_max, p2_max })
    }

    /// Allocation using the full budgets.
    pub fn full_power(&self) -> PowerAllocation {
        PowerAllocation { p1: self.p1_max, p2: self.p2_max }
    }
}

fn check_nonneg(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::Validation(format!("{name} must be finite and >= 0, got {v}")))
    }
}

/// Transmit and interferer powers actually used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerAllocation {
    pub p1: f64,
    pub p2: f64,
}

impl PowerAllocation {
    pub fn new(p1: f64, p2: f64) -> Result<Self> {
        check_nonneg("p1", p1)?;
        check_nonneg("p2", p2)?;
        Ok(PowerAllocation { p1, p2 })
    }

    /// Checks the allocation against the budgets of `ch`.
    pub fn within(&self, ch: &GaussianWthi) -> bool {
        self.p1 <= ch.p1_max && self.p2 <= ch.p2_max
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    VeryStrong,
    Strong,
    Weak,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::VeryStrong => "VeryStrong",
            Regime::Strong => "Strong",
            Regime::Weak => "Weak",
        })
    }
}

pub fn classify_regime(a: f64, p2: f64) -> Regime {
    if a >= 1.0 + p2 {
        Regime::VeryStrong
    } else if a >= 1.0 {
        Regime::Strong
    } else {
        Regime::Weak
    }
}

/// Mutual-information profiles induced by independent Gaussian codebooks of
/// powers `alloc.p1` and `alloc.p2`.
pub fn gaussian_mi_profile(a: f64, alloc: PowerAllocation) -> ProfilePair {
    let PowerAllocation { p1, p2 } = alloc;
    let receiver = MiProfile {
        i1_given_2: g(p1),
        i2_given_1: g(a * p2),
        i_sum: g(p1 + a * p2),
        i1_alone: g(p1 / (1.0 + a * p2)),
        i2_alone: g(a * p2 / (1.0 + p1)),
    };
    let eavesdropper = MiProfile {
        i1_given_2: g(a * p1),
        i2_given_1: g(p2),
        i_sum: g(a * p1 + p2),
        i1_alone: g(a * p1 / (1.0 + p2)),
        i2_alone: g(p2 / (1.0 + a * p1)),
    };
    ProfilePair { receiver, eavesdropper }
}

/// Secrecy capacity of the Gaussian wiretap channel without the interferer.
pub fn wiretap_baseline(a: f64, p1: f64) -> Bits {
    if a < 1.0 {
        (g(p1) - g(a * p1)).max(0.0)
    } else {
        0.0
    }
}

/// Piecewise achievable secrecy rate at a fixed power allocation.
pub fn secrecy_rate(a: f64, alloc: PowerAllocation) -> Bits {
    let PowerAllocation { p1, p2 } = alloc;
    let rate = match classify_regime(a, p2) {
        Regime::VeryStrong => 0.0,
        Regime::Strong => {
            if p1 < p2 && a > 1.0 + p1 {
                g(p1) - g(a * p1 / (1.0 + p2))
            } else if p1 < p2 {
                g(p1 + a * p2) - g(a * p1 + p2)
            } else {
                0.0
            }
        }
        Regime::Weak => {
            if p1 > p2 {
                g(p1 / (1.0 + a * p2)) - g(a * p1 / (1.0 + p2))
            } else {
                g(p1) - g(a * p1)
            }
        }
    };
    rate.max(0.0)
}

/// Optimal interferer power when `a < 1` and the source uses `p1_max`.
pub fn weak_interferer_power(a: f64, p1_max: f64) -> f64 {
    ((1.0 + (1.0 + a) * p1_max).sqrt() - 1.0) / (1.0 + a)
}

/// Rate-maximizing power allocation within the budgets of `ch`, together
/// with the secrecy rate it achieves.
pub fn power_control(ch: &GaussianWthi) -> (PowerAllocation, Bits) {
    let a = ch.a;
    let alloc = if a >= 1.0 {
        if ch.p2_max > a - 1.0 {
            PowerAllocation { p1: ch.p1_max.min(a - 1.0), p2: ch.p2_max }
        } else {
            PowerAllocation { p1: 0.0, p2: 0.0 }
        }
    } else {
        PowerAllocation {
            p1: ch.p1_max,
            p2: ch.p2_max.min(weak_interferer_power(a, ch.p1_max)),
        }
    };
    (alloc, secrecy_rate(a, alloc))
}

/// Limit of the power-controlled secrecy rate as both budgets grow without bound.
pub fn asymptotic_rate(a: f64) -> Result<Bits> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!("asymptotic rate requires finite a > 0, got {a}")));
    }
    Ok(if a >= 1.0 { 0.5 * a.log2() } else { (1.0 / a).log2() })
}

/// Parameter varied by [`sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVar {
    A,
    P1Max,
    P2Max,
}

/// One row of a sweep table. Field names are the CSV/JSON column names.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub rate_bits: Bits,
    pub baseline_bits: Bits,
    pub regime: Regime,
    pub p1: f64,
    pub p2: f64,
}

/// CSV header matching [`SweepRow`].
pub const SWEEP_CSV_HEADER: &str = "value,rate_bits,baseline_bits,regime,p1,p2";

/// Evaluates the secrecy rate along `grid` for the chosen variable. Rows are
/// returned in grid order.
pub fn sweep(
    ch: &GaussianWthi,
    var: SweepVar,
    grid: &[f64],
    with_power_control: bool,
) -> Result<Vec<SweepRow>> {
    if grid.is_empty() {
        return Err(Error::Validation("sweep grid is empty".into()));
    }
    if let Some(v) = grid.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(Error::Validation(format!("sweep grid value {v} must be finite and >= 0")));
    }
    let rows = grid
        .par_iter()
        .map(|&value| {
            let mut point = *ch;
            match var {
                SweepVar::A => point.a = value,
                SweepVar::P1Max => point.p1_max = value,
                SweepVar::P2Max => point.p2_max = value,
            }
            let (alloc, rate_bits) = if with_power_control {
                power_control(&point)
            } else {
                let alloc = point.full_power();
                (alloc, secrecy_rate(point.a, alloc))
            };
            SweepRow {
                value,
                rate_bits,
                baseline_bits: wiretap_baseline(point.a, point.p1_max),
                regime: classify_regime(point.a, alloc.p2),
                p1: alloc.p1,
                p2: alloc.p2,
            }
        })
        .collect();
    Ok(rows)
}

/// `n` evenly spaced points from `from` to `to` inclusive.
pub fn linspace(from: f64, to: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![from],
        _ => {
            let span = to - from;
            let last = (n - 1) as f64;
            (0..n).map(|i| from + span * i as f64 / last).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    fn alloc(p1: f64, p2: f64) -> PowerAllocation {
        PowerAllocation::new(p1, p2).unwrap()
    }

    #[test]
    fn regimes() {
        assert_eq!(classify_regime(3.0, 2.0), Regime::VeryStrong);
        assert_eq!(classify_regime(2.0, 2.0), Regime::Strong);
        assert_eq!(classify_regime(1.0, 2.0), Regime::Strong);
        assert_eq!(classify_regime(0.5, 2.0), Regime::Weak);
        assert_eq!(classify_regime(1.0, 0.0), Regime::VeryStrong);
    }

    #[test]
    fn profile_examples() {
        let p = gaussian_mi_profile(1.0, alloc(3.0, 0.0));
        close(p.receiver.i1_given_2, 1.0, 1e-15);
        assert_eq!(p.receiver.i2_given_1, 0.0);
        // g(5) = ½·log2 6
        let p = gaussian_mi_profile(2.0, alloc(1.0, 2.0));
        close(p.receiver.i_sum, 1.292481, 1e-6);
        let p = gaussian_mi_profile(0.5, alloc(2.0, 2.0 / 3.0));
        close(p.receiver.i1_alone, 0.660964, 1e-6);
    }

    #[test]
    fn baseline_examples() {
        close(wiretap_baseline(0.5, 2.0), 0.292481, 1e-6);
        assert_eq!(wiretap_baseline(1.0, 5.0), 0.0);
        assert_eq!(wiretap_baseline(0.5, 0.0), 0.0);
    }

    #[test]
    fn secrecy_rate_examples() {
        assert_eq!(secrecy_rate(3.0, alloc(2.0, 2.0)), 0.0);
        close(secrecy_rate(2.0, alloc(1.0, 2.0)), g(5.0) - g(4.0), 1e-15);
        // ½·log2(6/5)
        close(secrecy_rate(2.0, alloc(1.0, 2.0)), 0.131517, 1e-6);
        close(secrecy_rate(0.5, alloc(2.0, 2.0 / 3.0)), 0.321928, 1e-6);
        assert_eq!(secrecy_rate(0.7, alloc(0.0, 1.0)), 0.0);
    }

    #[test]
    fn branch_boundaries_are_pinned() {
        // a = 1 + P1 takes the decode-both branch.
        close(secrecy_rate(2.0, alloc(1.0, 2.0)), g(1.0 + 4.0) - g(2.0 + 2.0), 1e-15);
        // P1 = P2 with a < 1 takes the no-helper branch; the other branch
        // agrees there, both being ½·log2((1+P)/(1+aP)).
        assert_eq!(secrecy_rate(0.5, alloc(1.0, 1.0)), g(1.0) - g(0.5));
        close(g(1.0 / 1.5) - g(0.5 / 2.0), g(1.0) - g(0.5), 1e-15);
        // P1 >= P2 in the strong regime gives zero.
        assert_eq!(secrecy_rate(1.5, alloc(2.0, 2.0)), 0.0);
    }

    #[test]
    fn power_control_examples() {
        let (al, _) = power_control(&GaussianWthi::new(2.0, 2.0, 2.0).unwrap());
        assert_eq!(al, alloc(1.0, 2.0));
        let (al, _) = power_control(&GaussianWthi::new(0.5, 2.0, 2.0).unwrap());
        assert_eq!(al.p1, 2.0);
        close(al.p2, 2.0 / 3.0, 1e-15);
        let (al, r) = power_control(&GaussianWthi::new(2.0, 2.0, 0.5).unwrap());
        assert_eq!(al, alloc(0.0, 0.0));
        assert_eq!(r, 0.0);
    }

    #[test]
    fn asymptotic_examples() {
        close(asymptotic_rate(4.0).unwrap(), 1.0, 1e-15);
        assert_eq!(asymptotic_rate(1.0).unwrap(), 0.0);
        close(asymptotic_rate(0.5).unwrap(), 1.0, 1e-15);
        assert!(matches!(asymptotic_rate(0.0), Err(Error::Domain(_))));
        assert!(asymptotic_rate(-1.0).is_err());
    }

    #[test]
    fn sweep_examples() {
        let ch = GaussianWthi::new(2.0, 2.0, 0.0).unwrap();
        let rows = sweep(&ch, SweepVar::P2Max, &[0.5, 1.0], true).unwrap();
        assert!(rows.iter().all(|r| r.rate_bits == 0.0));

        let ch = GaussianWthi::new(0.0, 2.0, 2.0).unwrap();
        let rows = sweep(&ch, SweepVar::A, &[3.0, 3.5, 4.0], true).unwrap();
        assert!(rows.iter().all(|r| r.rate_bits == 0.0));

        let grid = linspace(1.0, 3.0, 2001);
        let rows = sweep(&ch, SweepVar::A, &grid, true).unwrap();
        let best = rows
            .iter()
            .max_by(|x, y| x.rate_bits.total_cmp(&y.rate_bits))
            .unwrap();
        assert!((best.value - 3f64.sqrt()).abs() < 1e-3, "{}", best.value);
        assert_eq!(rows.len(), grid.len());
        assert!(rows.windows(2).all(|w| w[0].value < w[1].value));
    }

    #[test]
    fn sweep_rejects_bad_grids() {
        let ch = GaussianWthi::new(1.0, 1.0, 1.0).unwrap();
        assert!(sweep(&ch, SweepVar::A, &[], true).is_err());
        assert!(sweep(&ch, SweepVar::A, &[-1.0], true).is_err());
        assert!(sweep(&ch, SweepVar::A, &[f64::INFINITY], false).is_err());
    }

    #[test]
    fn sweep_without_power_control_uses_budgets() {
        let ch = GaussianWthi::new(0.5, 2.0, 2.0).unwrap();
        let rows = sweep(&ch, SweepVar::P1Max, &[1.0, 3.0], false).unwrap();
        assert_eq!((rows[1].p1, rows[1].p2), (3.0, 2.0));
        close(rows[1].rate_bits, secrecy_rate(0.5, alloc(3.0, 2.0)), 0.0);
        close(rows[1].baseline_bits, wiretap_baseline(0.5, 3.0), 0.0);
    }

    #[test]
    fn invalid_channels() {
        assert!(GaussianWthi::new(-1.0, 1.0, 1.0).is_err());
        assert!(GaussianWthi::new(1.0, f64::NAN, 1.0).is_err());
        assert!(PowerAllocation::new(1.0, -2.0).is_err());
        let ch = GaussianWthi::new(2.0, 2.0, 2.0).unwrap();
        assert!(power_control(&ch).0.within(&ch));
    }

    #[test]
    fn linspace_endpoints() {
        let v = linspace(0.0, 4.0, 401);
        assert_eq!(v.len(), 401);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[400], 4.0);
        close(v[300], 3.0, 1e-12);
        assert_eq!(linspace(1.0, 2.0, 1), vec![1.0]);
    }
}
