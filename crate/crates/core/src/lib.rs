//! Achievable secrecy rates for the wiretap channel with a helping interferer.
//!
//! * [`gwt_hi`]: closed-form rates, power control and sweeps for the
//!   symmetric Gaussian model.
//! * [`dmc_whi`]: rate regions and an exact rate optimizer for discrete
//!   memoryless channels.
//! * [`binning_sim`]: sampled binning codes with exact equivocation, used as
//!   a ground-truth check on small channels.

pub mod binning_sim;
pub mod dmc_whi;
pub mod error;
pub mod gwt_hi;
pub mod info_measures;
pub mod profile;

pub use error::{Error, Result};
pub use info_measures::{Bits, ProbVector};
pub use profile::{MiProfile, ProfilePair};
