//! Maximum secret rate `R1s = R1 − R1d` for a fixed input distribution.
//!
//! The receiver must be able to decode the source codeword, so `(R1, R2)`
//! lies in the union of its two regions. The eavesdropper must be unable to
//! resolve the dummy randomness, so `(R1d, R2)` avoids both of its regions.
//! The complement of a union of two polyhedra is not convex; it splits into
//! at most six convex pieces, one per pair of violated half-spaces (one from
//! each eavesdropper region). Crossing those with the two receiver pieces
//! leaves at most twelve small linear programs in `(R1, R1d, R2)`.
//!
//! The eavesdropper is credited with the boundary of its regions, so every
//! complement piece is an open set. A piece contributes only if it has
//! interior points. Its supremum is then the maximum over its closure.

use serde::{Deserialize, Serialize};

use super::lp::{maximize, Row};
use super::regions::{build_regions, HalfSpace, Polyhedron, RegionSet};
use crate::info_measures::Bits;
use crate::profile::ProfilePair;

/// Split of the source rate into secret and dummy parts, plus the helper rate.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RateTriple {
    pub r1s: Bits,
    pub r1d: Bits,
    pub r2: Bits,
}

impl RateTriple {
    pub fn r1(&self) -> Bits {
        self.r1s + self.r1d
    }
}

/// Interior margin below which a strict piece counts as empty.
const INTERIOR_EPS: f64 = 1e-12;

// Variable order: [R1, R1d, R2].
const OBJECTIVE: [f64; 3] = [1.0, -1.0, 0.0];

fn receiver_rows(poly: &Polyhedron) -> Vec<Row<3>> {
    poly.halfspaces
        .iter()
        .map(|h| {
            let (c1, c2) = h.normal.coefficients();
            Row::new([c1, 0.0, c2], h.bound)
        })
        .collect()
}

/// Negation of an eavesdropper half-space over `(R1d, R2)`, as a row that
/// must hold strictly.
fn violated(h: &HalfSpace) -> Row<3> {
    let (c1, c2) = h.normal.coefficients();
    Row::new([0.0, -c1, -c2], -h.bound)
}

fn domain_rows(cap: f64) -> Vec<Row<3>> {
    vec![
        Row::new([-1.0, 0.0, 0.0], 0.0),
        Row::new([0.0, -1.0, 0.0], 0.0),
        Row::new([0.0, 0.0, -1.0], 0.0),
        Row::new([-1.0, 1.0, 0.0], 0.0),
        Row::new([0.0, 0.0, 1.0], cap),
    ]
}

/// Whether `closed ∧ strict` has a point satisfying every strict row with
/// positive margin.
fn has_interior(closed: &[Row<3>], strict: &[Row<3>]) -> bool {
    let mut rows: Vec<Row<4>> = Vec::with_capacity(closed.len() + strict.len() + 1);
    for r in closed {
        rows.push(Row::new([r.coef[0], r.coef[1], r.coef[2], 0.0], r.bound));
    }
    for r in strict {
        rows.push(Row::new([r.coef[0], r.coef[1], r.coef[2], 1.0], r.bound));
    }
    rows.push(Row::new([0.0, 0.0, 0.0, 1.0], 1.0));
    matches!(maximize(&[0.0, 0.0, 0.0, 1.0], &rows), Some((t, _)) if t > INTERIOR_EPS)
}

/// The complement pieces as lists of strictly-violated rows.
fn complement_pieces(regions: &RegionSet) -> Vec<[Row<3>; 2]> {
    let mut out = Vec::with_capacity(6);
    for c in &regions.r2_mac.halfspaces {
        for d in &regions.r2_s.halfspaces {
            out.push([violated(c), violated(d)]);
        }
    }
    out
}

/// Maximizes the secret rate for fixed mutual-information profiles. Returns
/// the rate (never negative) and one triple attaining it.
pub fn theorem1_rate_fixed_input(pair: &ProfilePair) -> (Bits, RateTriple) {
    let regions = build_regions(pair);
    let cap = pair.receiver.max_constant().max(pair.eavesdropper.max_constant()) + 1.0;
    let domain = domain_rows(cap);
    let pieces = complement_pieces(&regions);

    let mut best = (0.0, RateTriple::default());
    for receiver in [&regions.r1_mac, &regions.r1_s] {
        let mut closed = domain.clone();
        closed.extend(receiver_rows(receiver));
        for strict in &pieces {
            let mut rows = closed.clone();
            rows.extend_from_slice(strict);
            let Some((value, x)) = maximize(&OBJECTIVE, &rows) else {
                continue;
            };
            if value > best.0 + 1e-13 && has_interior(&closed, strict) {
                let r1 = x[0].max(0.0);
                let r1d = x[1].max(0.0);
                best = (
                    value,
                    RateTriple { r1s: (r1 - r1d).max(0.0), r1d, r2: x[2].max(0.0) },
                );
            }
        }
    }
    best
}

/// `min[I(X1,X2;Y1) − I(X1,X2;Y2), I(X1;Y1|X2) − I(X1;Y2)]⁺`.
pub fn strong_formula(pair: &ProfilePair) -> Bits {
    let (rx, ev) = (&pair.receiver, &pair.eavesdropper);
    (rx.i_sum - ev.i_sum).min(rx.i1_given_2 - ev.i1_alone).max(0.0)
}

/// `max(Δ1, Δ2)⁺` with `Δ1 = I(X1;Y1|X2) − I(X1;Y2|X2)` and
/// `Δ2 = I(X1;Y1) − I(X1;Y2)`.
pub fn weak_formula(pair: &ProfilePair) -> Bits {
    let (rx, ev) = (&pair.receiver, &pair.eavesdropper);
    (rx.i1_given_2 - ev.i1_given_2).max(rx.i1_alone - ev.i1_alone).max(0.0)
}

/// Strong interference: `I(X1;Y1|X2) <= I(X1;Y2|X2)` and `I(X2;Y2|X1) <= I(X2;Y1|X1)`.
pub fn satisfies_strong(pair: &ProfilePair, slack: f64) -> bool {
    let (rx, ev) = (&pair.receiver, &pair.eavesdropper);
    rx.i1_given_2 <= ev.i1_given_2 + slack && ev.i2_given_1 <= rx.i2_given_1 + slack
}

/// Weak interference: `I(X1;Y1|X2) >= I(X1;Y2|X2)` and `I(X2;Y2|X1) >= I(X2;Y1|X1)`.
pub fn satisfies_weak(pair: &ProfilePair, slack: f64) -> bool {
    let (rx, ev) = (&pair.receiver, &pair.eavesdropper);
    rx.i1_given_2 + slack >= ev.i1_given_2 && ev.i2_given_1 + slack >= rx.i2_given_1
}

/// `I(X1;Y2) >= I(X1;Y1|X2)`: the eavesdropper alone sees at least as much
/// of the source as the receiver with the helper removed.
pub fn satisfies_very_strong(pair: &ProfilePair, slack: f64) -> bool {
    pair.eavesdropper.i1_alone + slack >= pair.receiver.i1_given_2
}
