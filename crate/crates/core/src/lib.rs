//! Alexander modules, Blanchfield pairings and inversion-induced maps of
//! strongly invertible knots, computed exactly over Q[t, t^-1] from Seifert
//! matrices, together with the equivariant slice obstructions and the
//! equivariant 4-genus lower bound they yield.
//!
//! The layers build on each other:
//!
//! * [`ring`]: Laurent polynomials, rational functions and classes in Q(t)/Λ.
//! * [`linalg`]: determinants, inverses over Q(t), Smith normal form over Λ.
//! * [`module`]: finitely presented Λ-modules and their elements.
//! * [`blanchfield`]: Gram matrices of the Blanchfield pairing.
//! * [`involution`]: semilinear maps modelling the inversion-induced map.
//! * [`witt`]: abstract equivariant Blanchfield triples and metabolizers.
//! * [`obstruction`]: the k = 0 certificate, slice verdicts and genus bounds.
//! * [`catalog`]: builtin knot families and the knot file format.

pub mod blanchfield;
pub mod catalog;
pub mod involution;
pub mod linalg;
pub mod module;
pub mod obstruction;
pub mod ring;
pub mod witt;

pub use blanchfield::GramPairing;
pub use involution::SemilinearMap;
pub use linalg::{LambdaMatrix, SnfResult};
pub use module::{ModuleElement, PresentedModule};
pub use ring::{LaurentPoly, Rational, RationalFn, TorsionClass};
pub use witt::EquivariantTriple;
