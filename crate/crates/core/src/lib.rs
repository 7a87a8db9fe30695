//! Term kernel for higher-order reasoning tools.
//!
//! Types and terms of the second-order polymorphic λ-calculus in a locally
//! nameless spine representation with explicit substitutions. Every type,
//! term and substitution is hash-consed in a [`Kernel`], so syntactic
//! equality is a pointer comparison. On top of the kernel sit a suite of
//! β-normalization strategies, η-expansion, a term index and TPTP support.

mod intern;

pub mod index;
pub mod kernel;
pub mod normalize;
pub mod pretty;
pub mod signature;
pub mod term;
pub mod tptp;
pub mod types;

pub use kernel::{BankStats, Kernel, TypeError};
pub use normalize::{NormalizationStats, Normalizer, Strategy};
pub use pretty::Style;
pub use signature::{ConstId, Signature};
pub use term::{Arg, Front, Head, HeadSymbol, Spine, Subst, TermNode, TermRef};
pub use types::{BaseId, TypeBank, TypeNode, TypeRef, TypeSubst};
