//! Numerical laboratory for a quantum public-key encryption scheme built on
//! single-qubit rotations.
//!
//! * [`protocol`]: keys, public-key qubits, parity-codeword encryption and
//!   decryption.
//! * [`symspace`]: density operators of many public-key copies in the
//!   symmetric Hamming-weight basis, their spectra and entropy bounds.
//! * [`bayes`]: the projective-measurement attack with Bayesian state
//!   estimation, computed exactly.
//! * [`symmetry`]: the single-copy symmetry-test attack and forward-search
//!   closed forms.
//! * [`montecarlo`]: seeded simulation of full protocol runs under attack.

pub mod bayes;
pub mod eigen;
pub mod error;
pub mod montecarlo;
pub mod numeric;
pub mod parity;
pub mod protocol;
pub mod symmetry;
pub mod symspace;

pub use bayes::{BayesAttack, Basis, BlochEstimate, CodewordLengths, MeasurementOutcome, PosteriorDistribution};
pub use error::{Error, Result};
pub use montecarlo::{AttackKind, EstimateWithError, PairBasis, TrialConfig};
pub use protocol::{CipherState, Codeword, Decryption, PrivateKey, ProtocolParams, QubitAngle};
pub use symmetry::{PairOutcome, PairTableRow};
pub use symspace::{CriticalResolution, OneWayCheck, Spectrum, SymmetricDensityOperator};
