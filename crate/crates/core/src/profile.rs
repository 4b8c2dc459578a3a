//! Mutual-information profiles: the five numbers per receiver that fix every
//! rate region of the wiretap channel with a helping interferer.

use serde::{Deserialize, Serialize};

use crate::info_measures::Bits;

/// Mutual-information terms seen at one receiver output `Y`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MiProfile {
    /// `I(X1; Y | X2)`
    pub i1_given_2: Bits,
    /// `I(X2; Y | X1)`
    pub i2_given_1: Bits,
    /// `I(X1, X2; Y)`
    pub i_sum: Bits,
    /// `I(X1; Y)`
    pub i1_alone: Bits,
    /// `I(X2; Y)`
    pub i2_alone: Bits,
}

impl MiProfile {
    pub const ZERO: MiProfile = MiProfile {
        i1_given_2: 0.0,
        i2_given_1: 0.0,
        i_sum: 0.0,
        i1_alone: 0.0,
        i2_alone: 0.0,
    };

    /// Builds a profile from the two conditional terms and the sum rate,
    /// filling the single-user terms by the chain rule for independent inputs.
    pub fn from_mac(i1_given_2: Bits, i2_given_1: Bits, i_sum: Bits) -> Self {
        MiProfile {
            i1_given_2,
            i2_given_1,
            i_sum,
            i1_alone: (i_sum - i2_given_1).max(0.0),
            i2_alone: (i_sum - i1_given_2).max(0.0),
        }
    }

    pub fn max_constant(&self) -> Bits {
        [self.i1_given_2, self.i2_given_1, self.i_sum, self.i1_alone, self.i2_alone]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// Profiles at the intended receiver (`Y1`) and the eavesdropper (`Y2`).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ProfilePair {
    pub receiver: MiProfile,
    pub eavesdropper: MiProfile,
}

impl ProfilePair {
    pub fn new(receiver: MiProfile, eavesdropper: MiProfile) -> Self {
        ProfilePair { receiver, eavesdropper }
    }
}
