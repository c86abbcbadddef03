//! Finite, exactly-computed models of presheaf toposes, their open and
//! closed reflections, Artin glueings, and adjoint split extensions, with
//! every claimed universal property verified by exhaustive enumeration at
//! desk scale.
//!
//! The building blocks stack up as follows:
//!
//! - [`finset`]: finite sets and tables; all (co)limits and exponentials.
//! - [`base`] and [`presheaf`]: finite base categories and presheaves of
//!   finite sets over them — the concrete toposes.
//! - [`cat`], [`functor`], [`nat`]: the intensional category layer; objects,
//!   morphisms, lex functors and transformations as comparable values.
//! - [`topos`]: open and closed reflections at a subterminal; kernels and
//!   cokernels of lex functors.
//! - [`glue`]: the glueing category along a functor, its fibration
//!   structure, and the comparison of any extension with its glueing form.
//! - [`ext`]: adjoint split extensions, their morphisms and 2-cells, and the
//!   equivalence with transformations between glued functors.
//! - [`ext_functor`]: pre- and postcomposition actions on extensions, their
//!   collation, and finite colimits of extensions.
//! - [`scenario`]: the text format and runner behind the `artin-glue` binary.
//!
//! Every law is checked over [`probe::ProbeSet`]s: finite families of
//! objects and morphisms enumerated exhaustively below a size cap. Reported
//! equality of functors or transformations always means probe equality.
//!
//! The `examples/` directory of this crate walks through each capability;
//! `cargo run -p artin-glue -- check scenarios/finset2_glueing.scn` runs the
//! scenario-file interface.

pub mod base;
pub mod cat;
pub mod ext;
pub mod ext_functor;
pub mod finset;
pub mod functor;
pub mod glue;
pub mod label;
pub mod laws;
pub mod nat;
pub mod presheaf;
pub mod probe;
pub mod report;
pub mod scenario;
pub mod topos;

pub use base::{BaseArrow, BaseCat, BaseFunctor};
pub use cat::{Cat, CatError, GlMor, GlObj, Membership, Mor, Obj};
pub use ext::{ExtError, ExtMorphism, Extension};
pub use finset::{FinFn, FinSet};
pub use functor::Functor;
pub use label::Label;
pub use laws::{LawCheck, LawReport};
pub use nat::{Adjunction, NatTrans};
pub use presheaf::{Presheaf, PresheafMor, Subterminal};
pub use probe::{ProbeConfig, ProbeSet};
