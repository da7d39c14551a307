//! Builtin knot families with Seifert matrices and involution data, a small
//! expression language naming them, and a line-based file format.
//!
//! File format (UTF-8, one `key=value` per line, `#` comments):
//!
//! ```text
//! schema=1
//! kind=knot
//! name=nine46
//! params=
//! seifert=0,2;1,0
//! involution=0, 1; 1, 0
//! notes=
//! ```
//!
//! `involution` is either a matrix of Laurent polynomials (rows separated by
//! `;`, entries by `,`; column `j` is the image of generator `j`, applied
//! after conjugating coefficients) or one of `swap`, `conjugation`,
//! `negated_conjugation`. A `kind=triple` file replaces `seifert` by
//! `relations` (a polynomial matrix whose columns are relators) and `gram`
//! (a matrix of classes `(p)/(q)` in Q(t)/Λ).

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::blanchfield::{BlanchfieldError, GramPairing};
use crate::involution::{swap_involution, InvolutionError, SemilinearMap};
use crate::linalg::{det, seifert_pencil, LambdaMatrix};
use crate::module::{ModuleError, PresentedModule};
use crate::ring::{normalize_alexander, parse_rational, LaurentPoly, Rational, TorsionClass};
use crate::witt::{Axiom, EquivariantTriple, WittError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("missing key '{0}'")]
    MissingKey(&'static str),
    #[error("unknown builtin '{0}'")]
    UnknownBuiltin(String),
    #[error("invalid parameters for {name}: {reason}")]
    InvalidParams { name: String, reason: String },
    #[error("triple fails validation: {}", .0.iter().map(|a| a.name()).collect::<Vec<_>>().join(", "))]
    Validation(Vec<Axiom>),
    #[error("io error: {0}")]
    Io(String),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Blanchfield(#[from] BlanchfieldError),
    #[error(transparent)]
    Involution(#[from] InvolutionError),
    #[error(transparent)]
    Witt(#[from] WittError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NamedInvolution {
    Swap,
    Conjugation,
    NegatedConjugation,
}

impl NamedInvolution {
    fn name(&self) -> &'static str {
        match self {
            NamedInvolution::Swap => "swap",
            NamedInvolution::Conjugation => "conjugation",
            NamedInvolution::NegatedConjugation => "negated_conjugation",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        match s {
            "swap" => Some(NamedInvolution::Swap),
            "conjugation" => Some(NamedInvolution::Conjugation),
            "negated_conjugation" => Some(NamedInvolution::NegatedConjugation),
            _ => None,
        }
    }

    /// Matrix form on `n` generators.
    fn matrix(&self, n: usize) -> LambdaMatrix {
        match self {
            NamedInvolution::Conjugation => LambdaMatrix::identity(n),
            NamedInvolution::NegatedConjugation => -&LambdaMatrix::identity(n),
            NamedInvolution::Swap => {
                let h = n / 2;
                LambdaMatrix::from_fn(n, n, |i, j| if (i + h) % n.max(1) == j { LaurentPoly::one() } else { LaurentPoly::zero() })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InvolutionSpec {
    Matrix(LambdaMatrix),
    Named(NamedInvolution),
}

impl InvolutionSpec {
    fn to_matrix(&self, n: usize) -> LambdaMatrix {
        match self {
            InvolutionSpec::Matrix(m) => m.clone(),
            InvolutionSpec::Named(k) => k.matrix(n),
        }
    }

    fn build(&self, module: Arc<PresentedModule>) -> Result<SemilinearMap, CatalogError> {
        Ok(match self {
            InvolutionSpec::Matrix(m) => SemilinearMap::new(module, m.clone())?,
            InvolutionSpec::Named(NamedInvolution::Swap) => swap_involution(module)?,
            InvolutionSpec::Named(NamedInvolution::Conjugation) => SemilinearMap::conjugation(module),
            InvolutionSpec::Named(NamedInvolution::NegatedConjugation) => SemilinearMap::negated_conjugation(module),
        })
    }
}

/// A knot given by a Seifert matrix and involution data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnotSpec {
    pub name: String,
    pub params: Vec<(String, Rational)>,
    pub seifert: Vec<Vec<i64>>,
    pub involution: InvolutionSpec,
    pub notes: String,
}

/// An abstract triple given by relations, Gram matrix and involution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleSpec {
    pub name: String,
    pub params: Vec<(String, Rational)>,
    pub relations: LambdaMatrix,
    pub gram: Vec<Vec<TorsionClass>>,
    pub involution: InvolutionSpec,
    pub notes: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Spec {
    Knot(KnotSpec),
    Triple(TripleSpec),
}

impl KnotSpec {
    pub fn seifert_matrix(&self) -> LambdaMatrix {
        LambdaMatrix::from_int_rows(&self.seifert).expect("rectangular Seifert matrix")
    }

    /// Normalized `det(tA - A^T)`.
    pub fn alexander_polynomial(&self) -> Result<LaurentPoly, CatalogError> {
        let d = det(&seifert_pencil(&self.seifert_matrix())).map_err(ModuleError::from)?;
        Ok(normalize_alexander(&d))
    }

    /// Equivariant connected sum: block Seifert matrix and block involution.
    pub fn sum(&self, other: &KnotSpec) -> KnotSpec {
        let (a, b) = (self.seifert.len(), other.seifert.len());
        let mut seifert = Vec::with_capacity(a + b);
        for r in &self.seifert {
            let mut row = r.clone();
            row.extend(std::iter::repeat_n(0, b));
            seifert.push(row);
        }
        for r in &other.seifert {
            let mut row = vec![0; a];
            row.extend(r.iter().copied());
            seifert.push(row);
        }
        let inv = self.involution.to_matrix(a).block_diag(&other.involution.to_matrix(b));
        KnotSpec {
            name: format!("{}#{}", self.name, other.name),
            params: Vec::new(),
            seifert,
            involution: InvolutionSpec::Matrix(inv),
            notes: String::new(),
        }
    }
}

impl Spec {
    pub fn name(&self) -> &str {
        match self {
            Spec::Knot(k) => &k.name,
            Spec::Triple(t) => &t.name,
        }
    }

    /// The triple presentation: relations `tA - A^T` and the Seifert Gram matrix.
    pub fn to_triple_spec(&self) -> Result<TripleSpec, CatalogError> {
        match self {
            Spec::Triple(t) => Ok(t.clone()),
            Spec::Knot(k) => {
                let g = GramPairing::from_seifert(&k.seifert_matrix())?;
                Ok(TripleSpec {
                    name: k.name.clone(),
                    params: k.params.clone(),
                    relations: g.module().relations().clone(),
                    gram: g.gram().to_vec(),
                    involution: k.involution.clone(),
                    notes: k.notes.clone(),
                })
            }
        }
    }

    /// Equivariant sum; stays a knot spec when both sides are knots.
    pub fn sum(&self, other: &Spec) -> Result<Spec, CatalogError> {
        if let (Spec::Knot(a), Spec::Knot(b)) = (self, other) {
            return Ok(Spec::Knot(a.sum(b)));
        }
        let (a, b) = (self.to_triple_spec()?, other.to_triple_spec()?);
        let (na, nb) = (a.relations.rows(), b.relations.rows());
        let n = na + nb;
        let gram = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match (i < na, j < na) {
                        (true, true) => a.gram[i][j].clone(),
                        (false, false) => b.gram[i - na][j - na].clone(),
                        _ => TorsionClass::zero(),
                    })
                    .collect()
            })
            .collect();
        Ok(Spec::Triple(TripleSpec {
            name: format!("{}#{}", a.name, b.name),
            params: Vec::new(),
            relations: a.relations.block_diag(&b.relations),
            gram,
            involution: InvolutionSpec::Matrix(a.involution.to_matrix(na).block_diag(&b.involution.to_matrix(nb))),
            notes: String::new(),
        }))
    }
}

fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn lin(c0: i64, c1: i64) -> LaurentPoly {
    LaurentPoly::from_ints(0, &[c0, c1])
}

fn invalid(name: &str, reason: impl Into<String>) -> CatalogError {
    CatalogError::InvalidParams { name: name.to_string(), reason: reason.into() }
}

fn to_int(name: &str, what: &str, x: &Rational) -> Result<i64, CatalogError> {
    if !x.is_integer() {
        return Err(invalid(name, format!("{what} must be an integer")));
    }
    i64::try_from(x.to_integer()).map_err(|_| invalid(name, format!("{what} is too large")))
}

pub fn unknot() -> KnotSpec {
    KnotSpec {
        name: "unknot".into(),
        params: Vec::new(),
        seifert: Vec::new(),
        involution: InvolutionSpec::Named(NamedInvolution::Conjugation),
        notes: "trivial module".into(),
    }
}

/// Seifert matrix `[[0,2],[1,0]]`; the involution swaps `b_1` and `b_2`.
pub fn nine46() -> KnotSpec {
    KnotSpec {
        name: "nine46".into(),
        params: Vec::new(),
        seifert: vec![vec![0, 2], vec![1, 0]],
        involution: InvolutionSpec::Matrix(LambdaMatrix::from_int_rows(&[vec![0, 1], vec![1, 0]]).expect("2x2")),
        notes: "module Λ/(t-2) ⊕ Λ/(2t-1); τ(p1 b1 + p2 b2) = conj(p2) b1 + conj(p1) b2".into(),
    }
}

/// Genus-one Seifert matrix `[[0, m+1], [m, l]]` with `τ(y1) = c y2`,
/// `τ(y2) = y1 / c` for `y1 = ((m+1)t - m) b1`, `y2 = (mt - (m+1)) b1`.
///
/// The module is cyclic on `b1`, with `b2 = -(m/l)((m+1)t - m) b1`, and
/// `b1 = α y1 + β y2` for `α = m/(2m+1)`, `β = -(m+1)/(2m+1)`.
pub fn genus_one_slice(m: i64, l: i64, c: &Rational) -> Result<KnotSpec, CatalogError> {
    let name = "genus_one_slice";
    if m == 0 || m == -1 {
        return Err(invalid(name, "m must not be 0 or -1"));
    }
    if l == 0 {
        return Err(invalid(name, "l must be nonzero"));
    }
    if c.is_zero() {
        return Err(invalid(name, "c must be nonzero"));
    }
    let alpha = Rational::new(m.into(), (2 * m + 1).into());
    let beta = Rational::new((-(m + 1)).into(), (2 * m + 1).into());
    let y1 = lin(-m, m + 1);
    let y2 = lin(-(m + 1), m);
    let tau_b1 = &y2.scale(&(&alpha * c)) + &y1.scale(&(&beta / c));
    let b2_factor = y1.conj().scale(&Rational::new((-m).into(), l.into()));
    let tau_b2 = &b2_factor * &tau_b1;
    let inv = LambdaMatrix::from_rows(vec![vec![tau_b1, tau_b2], vec![LaurentPoly::zero(), LaurentPoly::zero()]]).expect("2x2");
    Ok(KnotSpec {
        name: name.into(),
        params: vec![("m".into(), rat(m)), ("l".into(), rat(l)), ("c".into(), c.clone())],
        seifert: vec![vec![0, m + 1], vec![m, l]],
        involution: InvolutionSpec::Matrix(inv),
        notes: "cyclic on b1; τ(y1) = c y2, τ(y2) = y1/c with y1 = ((m+1)t-m) b1, y2 = (mt-(m+1)) b1".into(),
    })
}

/// Seifert matrix `[[a,0],[1,-a]]`; `b1 = -a(t-1) b2` and `τ` fixes `b2` up to conjugation.
pub fn twist_ka(a: i64) -> Result<KnotSpec, CatalogError> {
    if a < 1 {
        return Err(invalid("twist_Ka", "a must be at least 1"));
    }
    let tau_b1 = LaurentPoly::from_ints(-1, &[-a, a]);
    let inv = LambdaMatrix::from_rows(vec![
        vec![LaurentPoly::zero(), LaurentPoly::zero()],
        vec![tau_b1, LaurentPoly::one()],
    ])
    .expect("2x2");
    Ok(KnotSpec {
        name: "twist_Ka".into(),
        params: vec![("a".into(), rat(a))],
        seifert: vec![vec![a, 0], vec![1, -a]],
        involution: InvolutionSpec::Matrix(inv),
        notes: "cyclic on b2 with order a^2 t^2 - (2a^2+1) t + a^2; τ(q b2) = conj(q) b2".into(),
    })
}

/// `Λ/(p_a)` with the pairing of `b2` from [`twist_ka`] and `τ = conjugation`.
pub fn twist_ka_cyclic(a: i64) -> Result<TripleSpec, CatalogError> {
    let k = twist_ka(a)?;
    let g = GramPairing::from_seifert(&k.seifert_matrix())?;
    let aa = a * a;
    let p = LaurentPoly::from_ints(0, &[aa, -(2 * aa + 1), aa]);
    Ok(TripleSpec {
        name: "twist_Ka_cyclic".into(),
        params: vec![("a".into(), rat(a))],
        relations: LambdaMatrix::diagonal(&[p]),
        gram: vec![vec![g.gram()[1][1].clone()]],
        involution: InvolutionSpec::Named(NamedInvolution::Conjugation),
        notes: "cyclic presentation of twist_Ka on the generator b2".into(),
    })
}

pub fn figure_eight() -> KnotSpec {
    let mut k = twist_ka(1).expect("a = 1 is valid");
    k.name = "figure_eight".into();
    k.params.clear();
    k.notes = "module Λ/(t - 3 + t^-1) on b2; τ(q(t) b2) = q(t^-1) b2".into();
    k
}

/// Seifert matrix `[[1,0],[1,-2]]`; cyclic on `b2` with `τ(q b2) = -conj(q) b2`.
pub fn stevedore() -> KnotSpec {
    let inv = LambdaMatrix::from_rows(vec![
        vec![LaurentPoly::zero(), LaurentPoly::zero()],
        vec![LaurentPoly::from_ints(-1, &[2, -2]), LaurentPoly::from_int(-1)],
    ])
    .expect("2x2");
    KnotSpec {
        name: "stevedore".into(),
        params: Vec::new(),
        seifert: vec![vec![1, 0], vec![1, -2]],
        involution: InvolutionSpec::Matrix(inv),
        notes: "module Λ/(2t - 5 + 2t^-1) on b2; τ(p(t) b2) = -p(t^-1) b2".into(),
    }
}

/// Seifert matrix `[[-1,1],[0,-1]]`; cyclic on `b1` with `τ(q b1) = conj(q) b1`.
pub fn trefoil() -> KnotSpec {
    let inv = LambdaMatrix::from_rows(vec![
        vec![LaurentPoly::one(), LaurentPoly::from_ints(-1, &[-1, 1])],
        vec![LaurentPoly::zero(), LaurentPoly::zero()],
    ])
    .expect("2x2");
    KnotSpec {
        name: "trefoil".into(),
        params: Vec::new(),
        seifert: vec![vec![-1, 1], vec![0, -1]],
        involution: InvolutionSpec::Matrix(inv),
        notes: "module Λ/(t - 1 + t^-1) on b1; b2 = (1-t) b1".into(),
    }
}

/// `P(a,-a,a)` for odd `a >= 3`: the standard matrix `[[0,(1-a)/2],[-(a+1)/2,0]]`
/// is congruent to the genus-one shape with `m = (a-1)/2`, `l = -a` via the
/// basis `(b2, -b1 - b2)`.
pub fn pretzel(a: i64, c: &Rational) -> Result<KnotSpec, CatalogError> {
    if a < 3 || a % 2 == 0 {
        return Err(invalid("pretzel", "a must be odd and at least 3"));
    }
    let mut k = genus_one_slice((a - 1) / 2, -a, c)?;
    k.name = "pretzel".into();
    k.params = vec![("a".into(), rat(a)), ("c".into(), c.clone())];
    k.notes = format!("P({a},{},{a}) in genus-one form m = {}, l = {}", -a, (a - 1) / 2, -a);
    Ok(k)
}

/// `[b, b+2]^+` for even `b >= 2`: with `p = b/2` the matrix `[[p,0],[1,-(p+1)]]`
/// has the same Alexander module as the genus-one shape `m = p`, `l = -(p+1)`.
pub fn twist_bb2(b: i64, c: &Rational) -> Result<KnotSpec, CatalogError> {
    if b < 2 || b % 2 != 0 {
        return Err(invalid("twist_bb2", "b must be even and at least 2"));
    }
    let p = b / 2;
    let mut k = genus_one_slice(p, -(p + 1), c)?;
    k.name = "twist_bb2".into();
    k.params = vec![("b".into(), rat(b)), ("c".into(), c.clone())];
    k.notes = format!("[{b},{}]+ in genus-one form m = {p}, l = {}", b + 2, -(p + 1));
    Ok(k)
}

/// `J # J^r`: Seifert matrix `diag(A, A^T)` with `τ(x, y) = (conj y, conj x)`.
pub fn swap_double(j: &KnotSpec) -> KnotSpec {
    let n = j.seifert.len();
    let mut seifert = vec![vec![0i64; 2 * n]; 2 * n];
    for i in 0..n {
        for k in 0..n {
            seifert[i][k] = j.seifert[i][k];
            seifert[n + i][n + k] = j.seifert[k][i];
        }
    }
    KnotSpec {
        name: format!("swap_double({})", j.name),
        params: Vec::new(),
        seifert,
        involution: InvolutionSpec::Named(NamedInvolution::Swap),
        notes: "second block is the transpose; τ swaps the blocks".into(),
    }
}

/// Builtin families and their parameter signatures.
pub const BUILTINS: &[(&str, &str, &str)] = &[
    ("unknot", "", "trivial knot"),
    ("nine46", "", "9_46 with the block-swapping inversion"),
    ("genus_one_slice", "m, l[, c]", "genus-one Seifert matrix [[0,m+1],[m,l]], τ(y1) = c y2"),
    ("twist_Ka", "a", "twist knot with Seifert matrix [[a,0],[1,-a]]"),
    ("twist_Ka_cyclic", "a", "cyclic presentation Λ/p_a of twist_Ka"),
    ("figure_eight", "", "twist_Ka with a = 1"),
    ("stevedore", "", "stevedore knot, τ = -conjugation"),
    ("trefoil", "", "trefoil, τ = conjugation on b1"),
    ("pretzel", "a[, c]", "pretzel P(a,-a,a), a odd >= 3"),
    ("twist_bb2", "b[, c]", "[b, b+2]+ two-bridge knot, b even >= 2"),
    ("swap_double", "J", "J # J^r with the swap involution"),
    ("sum", "S1, S2, ...", "equivariant connected sum"),
];

fn arity(name: &str, args: &[Rational], min: usize, max: usize) -> Result<(), CatalogError> {
    if args.len() < min || args.len() > max {
        return Err(invalid(name, format!("expected {min}..={max} arguments, got {}", args.len())));
    }
    Ok(())
}

/// A numeric builtin by name.
pub fn builtin(name: &str, args: &[Rational]) -> Result<Spec, CatalogError> {
    let c_or_one = |i: usize| args.get(i).cloned().unwrap_or_else(Rational::one);
    Ok(match name {
        "unknot" => {
            arity(name, args, 0, 0)?;
            Spec::Knot(unknot())
        }
        "nine46" => {
            arity(name, args, 0, 0)?;
            Spec::Knot(nine46())
        }
        "figure_eight" => {
            arity(name, args, 0, 0)?;
            Spec::Knot(figure_eight())
        }
        "stevedore" => {
            arity(name, args, 0, 0)?;
            Spec::Knot(stevedore())
        }
        "trefoil" => {
            arity(name, args, 0, 0)?;
            Spec::Knot(trefoil())
        }
        "genus_one_slice" => {
            arity(name, args, 2, 3)?;
            Spec::Knot(genus_one_slice(to_int(name, "m", &args[0])?, to_int(name, "l", &args[1])?, &c_or_one(2))?)
        }
        "twist_Ka" => {
            arity(name, args, 1, 1)?;
            Spec::Knot(twist_ka(to_int(name, "a", &args[0])?)?)
        }
        "twist_Ka_cyclic" => {
            arity(name, args, 1, 1)?;
            Spec::Triple(twist_ka_cyclic(to_int(name, "a", &args[0])?)?)
        }
        "pretzel" => {
            arity(name, args, 1, 2)?;
            Spec::Knot(pretzel(to_int(name, "a", &args[0])?, &c_or_one(1))?)
        }
        "twist_bb2" => {
            arity(name, args, 1, 2)?;
            Spec::Knot(twist_bb2(to_int(name, "b", &args[0])?, &c_or_one(1))?)
        }
        _ => return Err(CatalogError::UnknownBuiltin(name.to_string())),
    })
}

/// Bundles module, pairing and involution and validates the result.
pub fn assemble(spec: &Spec) -> Result<EquivariantTriple, CatalogError> {
    let t = assemble_unchecked(spec)?;
    let report = t.validate();
    if !report.all_passed() {
        return Err(CatalogError::Validation(report.failures()));
    }
    Ok(t)
}

/// Like [`assemble`] but leaves validation to the caller.
pub fn assemble_unchecked(spec: &Spec) -> Result<EquivariantTriple, CatalogError> {
    match spec {
        Spec::Knot(k) => {
            let pairing = GramPairing::from_seifert(&k.seifert_matrix())?;
            let tau = k.involution.build(pairing.module().clone())?;
            Ok(EquivariantTriple::new(pairing, tau)?)
        }
        Spec::Triple(t) => {
            let module = Arc::new(PresentedModule::new(t.relations.clone())?);
            let pairing = GramPairing::new(module.clone(), t.gram.clone())?;
            let tau = t.involution.build(module)?;
            Ok(EquivariantTriple::new(pairing, tau)?)
        }
    }
}

// ---------------------------------------------------------------------------
// expressions

struct ExprParser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> ExprParser<'a> {
    fn err(&self, message: impl Into<String>) -> CatalogError {
        CatalogError::Parse { line: 1, column: self.pos + 1, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String, CatalogError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_')).unwrap_or(rest.len());
        if len == 0 {
            return Err(self.err("expected a name"));
        }
        self.pos += len;
        Ok(rest[..len].to_string())
    }

    fn number(&mut self) -> Result<Rational, CatalogError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest.find(|c: char| !(c.is_ascii_digit() || c == '-' || c == '/' || c == '+')).unwrap_or(rest.len());
        let start = self.pos;
        let r = parse_rational(&rest[..len]).map_err(|e| CatalogError::Parse {
            line: 1,
            column: start + e.position + 1,
            message: e.message,
        })?;
        if len == 0 {
            return Err(self.err("expected a number"));
        }
        self.pos += len;
        Ok(r)
    }

    fn expr(&mut self) -> Result<Spec, CatalogError> {
        let name = self.ident()?;
        match name.as_str() {
            "sum" | "swap_double" => {
                if !self.eat('(') {
                    return Err(self.err("expected '('"));
                }
                let mut items = vec![self.expr()?];
                while self.eat(',') {
                    items.push(self.expr()?);
                }
                if !self.eat(')') {
                    return Err(self.err("expected ')'"));
                }
                if name == "swap_double" {
                    match items.as_slice() {
                        [Spec::Knot(k)] => Ok(Spec::Knot(swap_double(k))),
                        _ => Err(invalid("swap_double", "expected one knot with a Seifert matrix")),
                    }
                } else {
                    let mut it = items.into_iter();
                    let first = it.next().expect("nonempty");
                    it.try_fold(first, |acc, s| acc.sum(&s))
                }
            }
            _ => {
                let mut args = Vec::new();
                if self.eat('(') && !self.eat(')') {
                    args.push(self.number()?);
                    while self.eat(',') {
                        args.push(self.number()?);
                    }
                    if !self.eat(')') {
                        return Err(self.err("expected ')'"));
                    }
                }
                builtin(&name, &args)
            }
        }
    }
}

/// Parses `nine46`, `genus_one_slice(1, 2, 1/2)`, `sum(nine46, swap_double(trefoil))`, ...
pub fn parse_expr(src: &str) -> Result<Spec, CatalogError> {
    let mut p = ExprParser { src, pos: 0 };
    let s = p.expr()?;
    p.skip_ws();
    if p.pos != src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(s)
}

// ---------------------------------------------------------------------------
// files

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('\n', "\\n")
}

fn unescape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            match chars.next() {
                Some('n') => out.push('\n'),
                Some(other) => out.push(other),
                None => out.push('\\'),
            }
        } else {
            out.push(c);
        }
    }
    out
}

fn fmt_grid<T: std::fmt::Display>(rows: impl Iterator<Item = Vec<T>>) -> String {
    rows.map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")).collect::<Vec<_>>().join("; ")
}

fn fmt_matrix(m: &LambdaMatrix) -> String {
    fmt_grid((0..m.rows()).map(|i| m.row(i)))
}

fn fmt_params(p: &[(String, Rational)]) -> String {
    p.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",")
}

fn fmt_involution(i: &InvolutionSpec) -> String {
    match i {
        InvolutionSpec::Named(n) => n.name().to_string(),
        InvolutionSpec::Matrix(m) => fmt_matrix(m),
    }
}

/// Serializes a spec in the catalog file format.
pub fn to_text(spec: &Spec) -> String {
    let mut s = String::from("schema=1\n");
    match spec {
        Spec::Knot(k) => {
            let _ = writeln!(s, "kind=knot");
            let _ = writeln!(s, "name={}", k.name);
            let _ = writeln!(s, "params={}", fmt_params(&k.params));
            let _ = writeln!(s, "seifert={}", fmt_grid(k.seifert.iter().cloned()).replace(", ", ","));
            let _ = writeln!(s, "involution={}", fmt_involution(&k.involution));
            let _ = writeln!(s, "notes={}", escape(&k.notes));
        }
        Spec::Triple(t) => {
            let _ = writeln!(s, "kind=triple");
            let _ = writeln!(s, "name={}", t.name);
            let _ = writeln!(s, "params={}", fmt_params(&t.params));
            let _ = writeln!(s, "relations={}", fmt_matrix(&t.relations));
            let gram = t.gram.iter().map(|r| r.iter().map(|g| g.representative().to_string()).collect::<Vec<_>>());
            let _ = writeln!(s, "gram={}", fmt_grid(gram));
            let _ = writeln!(s, "involution={}", fmt_involution(&t.involution));
            let _ = writeln!(s, "notes={}", escape(&t.notes));
        }
    }
    s
}

struct Field<'a> {
    line: usize,
    /// 1-based column where the value starts.
    column: usize,
    value: &'a str,
}

fn cells<'a>(f: &Field<'a>) -> Vec<Vec<(usize, &'a str)>> {
    if f.value.trim().is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut offset = 0;
    for row in f.value.split(';') {
        let mut r = Vec::new();
        let mut roff = offset;
        for cell in row.split(',') {
            r.push((f.column + roff, cell));
            roff += cell.len() + 1;
        }
        out.push(r);
        offset += row.len() + 1;
    }
    out
}

fn perr(line: usize, column: usize, message: impl Into<String>) -> CatalogError {
    CatalogError::Parse { line, column, message: message.into() }
}

fn parse_cells<T>(f: &Field<'_>, mut parse: impl FnMut(&str) -> Result<T, (usize, String)>) -> Result<Vec<Vec<T>>, CatalogError> {
    let grid = cells(f);
    let width = grid.first().map_or(0, Vec::len);
    let mut out = Vec::with_capacity(grid.len());
    for row in &grid {
        if row.len() != width {
            return Err(perr(f.line, row[0].0, "rows have different lengths"));
        }
        let mut r = Vec::with_capacity(row.len());
        for &(col, cell) in row {
            r.push(parse(cell).map_err(|(off, msg)| perr(f.line, col + off, msg))?);
        }
        out.push(r);
    }
    Ok(out)
}

fn poly_cell(cell: &str) -> Result<LaurentPoly, (usize, String)> {
    cell.parse::<LaurentPoly>().map_err(|e| (e.position, e.message))
}

fn poly_matrix(f: &Field<'_>) -> Result<LambdaMatrix, CatalogError> {
    let rows = parse_cells(f, poly_cell)?;
    Ok(LambdaMatrix::from_rows(rows).expect("checked rectangular"))
}

fn parse_involution(f: &Field<'_>) -> Result<InvolutionSpec, CatalogError> {
    match NamedInvolution::from_name(f.value.trim()) {
        Some(n) => Ok(InvolutionSpec::Named(n)),
        None => Ok(InvolutionSpec::Matrix(poly_matrix(f)?)),
    }
}

fn parse_params(f: &Field<'_>) -> Result<Vec<(String, Rational)>, CatalogError> {
    if f.value.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut col = f.column;
    for item in f.value.split(',') {
        let (k, v) = item.split_once('=').ok_or_else(|| perr(f.line, col, "expected name=value"))?;
        let vcol = col + k.len() + 1;
        let r = parse_rational(v.trim()).map_err(|e| perr(f.line, vcol + e.position, e.message))?;
        out.push((k.trim().to_string(), r));
        col += item.len() + 1;
    }
    Ok(out)
}

/// Parses the catalog file format.
pub fn from_text(text: &str) -> Result<Spec, CatalogError> {
    const KEYS: [&str; 9] = ["schema", "kind", "name", "params", "seifert", "relations", "gram", "involution", "notes"];
    let mut fields: Vec<(&str, Field<'_>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let indent = raw.len() - trimmed.len();
        let (key, value) = trimmed.split_once('=').ok_or_else(|| perr(line, indent + 1, "expected key=value"))?;
        let key = key.trim_end();
        if !KEYS.contains(&key) {
            return Err(perr(line, indent + 1, format!("unknown key '{key}'")));
        }
        if fields.iter().any(|(k, _)| *k == key) {
            return Err(perr(line, indent + 1, format!("duplicate key '{key}'")));
        }
        let column = indent + trimmed.find('=').expect("split found '='") + 2;
        fields.push((key, Field { line, column, value }));
    }
    let get = |k: &'static str| fields.iter().find(|(key, _)| *key == k).map(|(_, f)| f);
    let need = |k: &'static str| get(k).ok_or(CatalogError::MissingKey(k));

    let schema = need("schema")?;
    if schema.value.trim() != "1" {
        return Err(perr(schema.line, schema.column, format!("unsupported schema '{}'", schema.value.trim())));
    }
    let name = need("name")?.value.trim().to_string();
    let params = match get("params") {
        Some(f) => parse_params(f)?,
        None => Vec::new(),
    };
    let notes = get("notes").map(|f| unescape(f.value)).unwrap_or_default();
    let involution = parse_involution(need("involution")?)?;
    let kind = need("kind")?;
    match kind.value.trim() {
        "knot" => {
            for k in ["relations", "gram"] {
                if let Some(f) = get(k) {
                    return Err(perr(f.line, 1, format!("key '{k}' is not allowed for kind=knot")));
                }
            }
            let f = need("seifert")?;
            let seifert = parse_cells(f, |c| c.trim().parse::<i64>().map_err(|e| (c.len() - c.trim_start().len(), format!("bad integer: {e}"))))?;
            let n = seifert.len();
            if seifert.iter().any(|r| r.len() != n) {
                return Err(perr(f.line, f.column, "Seifert matrix must be square"));
            }
            let spec = KnotSpec { name, params, seifert, involution, notes };
            PresentedModule::from_seifert(&spec.seifert_matrix())?;
            Ok(Spec::Knot(spec))
        }
        "triple" => {
            if let Some(f) = get("seifert") {
                return Err(perr(f.line, 1, "key 'seifert' is not allowed for kind=triple"));
            }
            let relations = poly_matrix(need("relations")?)?;
            let gram = parse_cells(need("gram")?, |c| c.parse::<TorsionClass>().map_err(|e| (e.position, e.message)))?;
            Ok(Spec::Triple(TripleSpec { name, params, relations, gram, involution, notes }))
        }
        other => Err(perr(kind.line, kind.column, format!("unknown kind '{other}'"))),
    }
}

pub fn load(path: &Path) -> Result<Spec, CatalogError> {
    let text = std::fs::read_to_string(path).map_err(|e| CatalogError::Io(format!("{}: {e}", path.display())))?;
    from_text(&text)
}

pub fn save(spec: &Spec, path: &Path) -> Result<(), CatalogError> {
    std::fs::write(path, to_text(spec)).map_err(|e| CatalogError::Io(format!("{}: {e}", path.display())))
}
