//! Finite-group engine for twisted conjugacy.
//!
//! For an automorphism `φ` of a finite group `G`, two elements `x, y` are
//! `φ`-conjugate when `y = z⁻¹ x φ(z)` for some `z`. The class of the
//! identity is the displacement set `[G, φ] = {g⁻¹ φ(g)}`. This crate builds
//! the groups of interest, enumerates their automorphisms, computes
//! displacement sets and twisted classes, and checks structural claims about
//! them with machine-readable reports.
//!
//! ```
//! use twisted_core::constructions::{build, GroupSpec};
//! use twisted_core::automorphisms::inner;
//! use twisted_core::twisted::displacement_set;
//!
//! let s3 = build(&"sym:3".parse::<GroupSpec>()?)?.group;
//! let phi = inner(&s3, s3.parse_element("(123)")?);
//! let d = displacement_set(&s3, &phi)?;
//! assert_eq!(s3.labels(d.members()), ["1", "(132)"]);
//! assert!(!d.is_subgroup());
//! # Ok::<(), twisted_core::Error>(())
//! ```

pub mod automorphisms;
pub mod constructions;
mod error;
pub mod group;
pub mod twisted;
mod util;
pub mod verify;

pub use error::{Error, Result};
pub use util::{gcd, inv_mod, is_prime, lcm, pow_mod, prime_power};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/groups.md")]
    mod groups {}
    #[doc = include_str!("../../../book/src/automorphisms.md")]
    mod automorphisms {}
    #[doc = include_str!("../../../book/src/twisted.md")]
    mod twisted {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cache-format.md")]
    mod cache_format {}
}
