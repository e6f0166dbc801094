//! Rooted tree maps on the free algebra `Q<x,y>` and the linear relations
//! among multiple zeta values that they induce.
//!
//! The crate is organised bottom-up:
//!
//! * [`forest`]: canonical non-planar rooted trees and forests, grafting, enumeration.
//! * [`hopf`]: the Connes–Kreimer Hopf algebra of forests (coproduct, counit,
//!   antipode, natural growth).
//! * [`words`]: words and polynomials in `x`, `y`, the maps `φ`, `τ`, `χ_x`.
//! * [`treemap`]: the linear operator attached to each forest, with the
//!   companion operators `ψ_f` and `φ_f`.
//! * [`stuffle`]: the harmonic product, the Kawashima space and exact
//!   membership certificates.
//! * [`mzvnum`]: rigorous high-precision evaluation of multiple zeta values.
//! * [`relations`]: relation records as emitted by the command-line tool.
//! * [`acceptance`]: the end-to-end acceptance criteria, shared by the test
//!   suite and the `selftest` subcommand.
//!
//! ```
//! use rtmaps::forest::Forest;
//! use rtmaps::treemap::apply;
//! use rtmaps::words::Poly;
//!
//! let dot: Forest = "[]".parse().unwrap();
//! let image = apply(&dot, &Poly::parse_word("xy").unwrap());
//! // ζ(2,1) − ζ(3): Euler's relation.
//! assert_eq!(image.to_string(), "-xxy + xyy");
//! ```

pub mod acceptance;
pub mod error;
pub mod forest;
pub mod hopf;
pub mod linalg;
pub mod mzvnum;
pub mod rational;
pub mod relations;
pub mod stuffle;
pub mod treemap;
pub mod words;

pub use error::{Error, Result};
pub use rational::Q;

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/forests.md")]
    mod forests {}
    #[doc = include_str!("../../../book/src/hopf.md")]
    mod hopf {}
    #[doc = include_str!("../../../book/src/words.md")]
    mod words {}
    #[doc = include_str!("../../../book/src/tree_maps.md")]
    mod tree_maps {}
    #[doc = include_str!("../../../book/src/stuffle.md")]
    mod stuffle {}
    #[doc = include_str!("../../../book/src/numerics.md")]
    mod numerics {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
