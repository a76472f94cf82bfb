//! Stable matchings in hospital-residents instances where hospitals have lower quotas and may
//! stay closed.
//!
//! A hospital is either closed or receives between `l(h)` and `u(h)` residents. A matching is
//! stable if it has no blocking pair (an open hospital and a resident who would both gain) and
//! no blocking coalition (a closed hospital together with `l(h)` residents who all prefer it).
//! With ties only strict improvements count (weak stability).

pub mod enumsolver;
pub mod error;
pub mod exec;
pub mod fixtures;
pub mod gadgets;
pub mod ilp;
pub mod io;
pub mod model;
pub mod openset;
pub mod oracle;
pub mod q2;
pub mod random;
pub mod stability;

pub use error::{Error, Result};
pub use exec::Exec;
pub use model::{Hospital, HospitalPrefs, Instance, Matching, Resident};
pub use stability::{check_stability, StabilityReport};
