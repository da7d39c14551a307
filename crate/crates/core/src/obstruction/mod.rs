//! Equivariant slice obstructions.
//!
//! If a τ-invariant metabolizer `P` exists then `Bl(x, τx) = 0` for every
//! `x ∈ P`, and `P ≠ 0` whenever the order of `H` is not a unit. A
//! certificate that `Bl(x, τx) = 0` forces `x = 0` therefore rules out
//! equivariant algebraic sliceness, and feeds the equivariant 4-genus bound
//! `(grk(H) - 2k) / 4`.

mod certificate;
mod quadratic;

pub use certificate::{
    certify_k0, tau_quadratic, triple_digest, CertVerdict, CertifyOptions, CoprimePart, Counterexample, EliminationStep,
    QuadraticCertificate, TauQuadratic, Weight,
};
pub use quadratic::{sum_of_squares, Definite, QuadForm, Signature};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::blanchfield::BlanchfieldError;
use crate::catalog::{self, CatalogError, Spec};
use crate::involution::{InvolutionError, Twist};
use crate::module::ModuleError;
use crate::ring::{symmetric_quadratic_tests, LaurentPoly, Rational, RingError};
use crate::witt::EquivariantTriple;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObstructionError {
    #[error("quadratic forms disagree with direct evaluation of Bl(x, τx)")]
    SelfCheck,
    #[error("pairing values are not annihilated by the exponent of the module")]
    Exponent,
    #[error("certificate was computed for a different triple")]
    CertificateMismatch,
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Blanchfield(#[from] BlanchfieldError),
    #[error(transparent)]
    Involution(#[from] InvolutionError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

fn as_string<T: ToString, S: Serializer>(x: &T, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// `ĝ4 >= bound_rational`, rounded up in `bound_integer`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenusBound {
    pub grk: usize,
    pub k_upper: usize,
    #[serde(serialize_with = "as_string")]
    pub bound_rational: Rational,
    #[serde(serialize_with = "as_string")]
    pub bound_integer: BigInt,
}

/// `max(0, (grk - 2k) / 4)` with `k = 0` when `cert` certifies, otherwise
/// `k = min(grk, user_k)` (default `grk`).
pub fn genus_lower_bound(
    t: &EquivariantTriple,
    cert: &QuadraticCertificate,
    user_k: Option<usize>,
) -> Result<GenusBound, ObstructionError> {
    if cert.digest != triple_digest(t) {
        return Err(ObstructionError::CertificateMismatch);
    }
    let grk = t.module().generating_rank();
    let k_upper = if cert.certified() { 0 } else { user_k.map_or(grk, |k| k.min(grk)) };
    let raw = Rational::new(BigInt::from(grk as i64 - 2 * k_upper as i64), BigInt::from(4));
    let bound_rational = if raw.is_negative() { Rational::zero() } else { raw };
    let bound_integer = bound_rational.ceil().to_integer();
    Ok(GenusBound { grk, k_upper, bound_rational, bound_integer })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SliceVerdict {
    NotEquivariantlyAlgebraicallySlice,
    Inconclusive,
}

impl SliceVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            SliceVerdict::NotEquivariantlyAlgebraicallySlice => "NOT_EQUIVARIANTLY_ALGEBRAICALLY_SLICE",
            SliceVerdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SliceReport {
    pub verdict: SliceVerdict,
    pub reason: String,
    pub certificate: QuadraticCertificate,
}

/// Combines a certificate with the order of `H` into a verdict.
pub fn equivariant_slice_verdict(t: &EquivariantTriple, opts: &CertifyOptions) -> Result<SliceReport, ObstructionError> {
    let certificate = certify_k0(t, opts)?;
    let order = t.order();
    let (verdict, reason) = match certificate.verdict {
        CertVerdict::CertifiedK0 if !order.is_unit() => (
            SliceVerdict::NotEquivariantlyAlgebraicallySlice,
            format!(
                "order {order} is not a unit, so a τ-invariant metabolizer would be nonzero; \
                 Bl(x, τx) = 0 forces x = 0, so no such metabolizer exists"
            ),
        ),
        CertVerdict::CertifiedK0 => (SliceVerdict::Inconclusive, "the module is trivial".to_string()),
        CertVerdict::Counterexample => {
            (SliceVerdict::Inconclusive, "a nonzero x with Bl(x, τx) = 0 exists, so the k = 0 test does not apply".to_string())
        }
        CertVerdict::Undecided => {
            (SliceVerdict::Inconclusive, "the search neither certified k = 0 nor found an isotropic vector".to_string())
        }
    };
    Ok(SliceReport { verdict, reason, certificate })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AmphichiralVerdict {
    NotEquivariantlySlice,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hypothesis {
    pub name: &'static str,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AmphichiralReport {
    pub a: i64,
    pub n: u32,
    pub polynomial: LaurentPoly,
    /// `|p(-1)|`, the value Fox-Milnor requires to be a square.
    #[serde(serialize_with = "as_string")]
    pub witness: BigInt,
    #[serde(serialize_with = "as_string")]
    pub discriminant: BigInt,
    pub branch: &'static str,
    pub hypotheses: Vec<Hypothesis>,
    pub verdict: AmphichiralVerdict,
}

/// `#^n K_a` for the twist knot `K_a`, from its cyclic module `Λ/p_a`.
///
/// For odd `n` the sum is concordant to `K_a`, and Fox-Milnor decides.
/// For even `n` the argument needs `p_a` irreducible, `τ` acting as
/// conjugation on the generator and `Bl(1, 1) ≠ 0`; then a τ-invariant
/// metabolizer would contain an `x` with `Bl(x, τx) = 0` and `x ≠ 0`, which
/// the norm form of the quadratic field rules out when `|p_a(-1)|` is not a
/// square.
pub fn amphichiral_obstruction(a: i64, n: u32) -> Result<AmphichiralReport, ObstructionError> {
    if n == 0 {
        return Err(CatalogError::InvalidParams { name: "amphichiral".into(), reason: "n must be positive".into() }.into());
    }
    let spec = catalog::twist_ka_cyclic(a)?;
    let t = catalog::assemble(&Spec::Triple(spec))?;
    let p = t.order();
    let tests = symmetric_quadratic_tests(&p)?;
    let fox_fails = Hypothesis { name: "fox_milnor_fails", holds: !tests.fox_milnor_possible };
    let (branch, hypotheses) = if n % 2 == 1 {
        ("odd", vec![fox_fails])
    } else {
        let gen = t.module().generator(0);
        let tau = t.involution();
        let fixes = tau.twist() == Twist::Conjugate && t.module().element_equal(&tau.apply(&gen)?, &gen);
        let b11 = t.pairing().pair(&gen, &gen)?;
        let hypotheses = vec![
            Hypothesis { name: "irreducible", holds: tests.irreducible },
            fox_fails,
            Hypothesis { name: "tau_fixes_generator", holds: fixes },
            Hypothesis { name: "pairing_nonzero_on_generator", holds: !b11.is_zero() },
        ];
        ("even", hypotheses)
    };
    let verdict = if hypotheses.iter().all(|h| h.holds) {
        AmphichiralVerdict::NotEquivariantlySlice
    } else {
        AmphichiralVerdict::Inconclusive
    };
    Ok(AmphichiralReport { a, n, polynomial: p, witness: tests.witness, discriminant: tests.discriminant, branch, hypotheses, verdict })
}
