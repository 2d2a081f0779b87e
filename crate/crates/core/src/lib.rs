// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bundle;
pub mod classify;
pub mod cochain;
pub mod groupexp;
pub mod lie;
pub mod ratpoly;
pub mod schrod;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/algebras.md")]
    struct Algebras;
    #[doc = include_str!("../../../book/src/cochains.md")]
    struct Cochains;
    #[doc = include_str!("../../../book/src/classification.md")]
    struct Classification;
    #[doc = include_str!("../../../book/src/finite-exponents.md")]
    struct FiniteExponents;
    #[doc = include_str!("../../../book/src/bundle.md")]
    struct Bundle;
    #[doc = include_str!("../../../book/src/schrodinger.md")]
    struct Schrodinger;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}
