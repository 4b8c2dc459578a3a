//! The four rate regions in the `(R1, R2)` plane.
//!
//! Every polyhedron lives in the non-negative quadrant; the quadrant itself is
//! implicit and not listed among the half-spaces.

use serde::{Deserialize, Serialize};

use crate::info_measures::Bits;
use crate::profile::{MiProfile, ProfilePair};

/// Normal directions that occur in the region definitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Normal {
    /// `R1`
    R1,
    /// `R2`
    R2,
    /// `R1 + R2`
    Sum,
    /// `−R1`
    NegR1,
    /// `−R2`
    NegR2,
}

impl Normal {
    pub fn coefficients(self) -> (f64, f64) {
        match self {
            Normal::R1 => (1.0, 0.0),
            Normal::R2 => (0.0, 1.0),
            Normal::Sum => (1.0, 1.0),
            Normal::NegR1 => (-1.0, 0.0),
            Normal::NegR2 => (0.0, -1.0),
        }
    }
}

/// `normal · (R1, R2) <= bound`, or `<` when `strict`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfSpace {
    pub normal: Normal,
    pub bound: Bits,
    pub strict: bool,
}

impl HalfSpace {
    fn closed(normal: Normal, bound: Bits) -> Self {
        HalfSpace { normal, bound, strict: false }
    }

    fn open(normal: Normal, bound: Bits) -> Self {
        HalfSpace { normal, bound, strict: true }
    }

    pub fn value(&self, r1: f64, r2: f64) -> f64 {
        let (c1, c2) = self.normal.coefficients();
        c1 * r1 + c2 * r2
    }

    pub fn holds(&self, r1: f64, r2: f64) -> bool {
        let v = self.value(r1, r2);
        if self.strict {
            v < self.bound
        } else {
            v <= self.bound
        }
    }

    pub fn holds_closed(&self, r1: f64, r2: f64) -> bool {
        self.value(r1, r2) <= self.bound
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyhedron {
    pub halfspaces: Vec<HalfSpace>,
}

impl Polyhedron {
    /// Membership honoring strict inequalities.
    pub fn contains(&self, r1: f64, r2: f64) -> bool {
        r1 >= 0.0 && r2 >= 0.0 && self.halfspaces.iter().all(|h| h.holds(r1, r2))
    }

    /// Membership in the closure.
    pub fn closure_contains(&self, r1: f64, r2: f64) -> bool {
        r1 >= 0.0 && r2 >= 0.0 && self.halfspaces.iter().all(|h| h.holds_closed(r1, r2))
    }

    /// Whether the set (with strictness honored) has no points.
    pub fn is_empty(&self) -> bool {
        // With only the five normals, the set is a box clipped by sum rows.
        let mut lo = [(0.0f64, false); 2];
        let mut hi = [(f64::INFINITY, false); 2];
        let mut sum = (f64::INFINITY, false);
        let tighten_hi = |slot: &mut (f64, bool), b: f64, s: bool| {
            if b < slot.0 || (b == slot.0 && s) {
                *slot = (b, s);
            }
        };
        for h in &self.halfspaces {
            match h.normal {
                Normal::R1 => tighten_hi(&mut hi[0], h.bound, h.strict),
                Normal::R2 => tighten_hi(&mut hi[1], h.bound, h.strict),
                Normal::Sum => tighten_hi(&mut sum, h.bound, h.strict),
                Normal::NegR1 | Normal::NegR2 => {
                    let i = usize::from(h.normal == Normal::NegR2);
                    let b = -h.bound;
                    if b > lo[i].0 || (b == lo[i].0 && h.strict) {
                        lo[i] = (b, h.strict);
                    }
                }
            }
        }
        let interval_empty = |l: (f64, bool), u: (f64, bool)| l.0 > u.0 || (l.0 == u.0 && (l.1 || u.1));
        if interval_empty(lo[0], hi[0]) || interval_empty(lo[1], hi[1]) {
            return true;
        }
        let low_sum = lo[0].0 + lo[1].0;
        low_sum > sum.0 || (low_sum == sum.0 && (lo[0].1 || lo[1].1 || sum.1))
    }

    /// Vertices of the closure, in the order the boundary lines are paired.
    /// Unbounded closures report only their finite corners.
    pub fn vertices(&self) -> Vec<(f64, f64)> {
        let mut lines: Vec<(f64, f64, f64)> = vec![(-1.0, 0.0, 0.0), (0.0, -1.0, 0.0)];
        lines.extend(self.halfspaces.iter().map(|h| {
            let (c1, c2) = h.normal.coefficients();
            (c1, c2, h.bound)
        }));
        let mut out: Vec<(f64, f64)> = Vec::new();
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                let (a1, b1, c1) = lines[i];
                let (a2, b2, c2) = lines[j];
                let det = a1 * b2 - a2 * b1;
                if det.abs() < 1e-15 {
                    continue;
                }
                let r1 = (c1 * b2 - c2 * b1) / det;
                let r2 = (a1 * c2 - a2 * c1) / det;
                let eps = 1e-12;
                let ok = r1 >= -eps
                    && r2 >= -eps
                    && self.halfspaces.iter().all(|h| h.value(r1, r2) <= h.bound + eps);
                if ok && !out.iter().any(|&(x, y)| (x - r1).abs() < eps && (y - r2).abs() < eps) {
                    out.push((r1.max(0.0), r2.max(0.0)));
                }
            }
        }
        out
    }
}

/// The receiver's and the eavesdropper's decodable regions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionSet {
    /// Receiver decodes both codewords.
    pub r1_mac: Polyhedron,
    /// Receiver decodes the source codeword treating the helper as noise.
    pub r1_s: Polyhedron,
    /// Eavesdropper decodes both codewords.
    pub r2_mac: Polyhedron,
    /// Eavesdropper decodes the source codeword treating the helper as noise.
    pub r2_s: Polyhedron,
}

fn mac(p: &MiProfile, strict: bool) -> Polyhedron {
    let mk = if strict { HalfSpace::open } else { HalfSpace::closed };
    Polyhedron {
        halfspaces: vec![
            mk(Normal::R1, p.i1_given_2),
            mk(Normal::R2, p.i2_given_1),
            mk(Normal::Sum, p.i_sum),
        ],
    }
}

fn treat_as_noise(p: &MiProfile, strict: bool) -> Polyhedron {
    let mk = if strict { HalfSpace::open } else { HalfSpace::closed };
    Polyhedron {
        halfspaces: vec![mk(Normal::R1, p.i1_alone), mk(Normal::NegR2, -p.i2_given_1)],
    }
}

/// Builds all four regions. Receiver regions are closed; the eavesdropper's
/// carry strict inequalities.
pub fn build_regions(pair: &ProfilePair) -> RegionSet {
    RegionSet {
        r1_mac: mac(&pair.receiver, false),
        r1_s: treat_as_noise(&pair.receiver, false),
        r2_mac: mac(&pair.eavesdropper, true),
        r2_s: treat_as_noise(&pair.eavesdropper, true),
    }
}
