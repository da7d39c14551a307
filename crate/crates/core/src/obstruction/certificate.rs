//! The map `x -> Bl(x, τx)` as a family of rational quadratic forms, and the
//! search for a certificate that it has no nonzero zero.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::quadratic::{Definite, QuadForm};
use super::ObstructionError;
use crate::module::{ModuleElement, QBasis};
use crate::ring::{coprime_split, gcd_free_basis, linear_factors, multiplicity, LaurentPoly, Rational, TorsionClass};
use crate::witt::EquivariantTriple;

/// The forms belonging to one coprime factor `f^e` of the exponent of `H`.
///
/// `forms[r](c)` is the coefficient of `t^r` in the numerator of the
/// `f^e`-part of `Bl(x, τx)` for `x` with coordinates `c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoprimePart {
    pub factor: LaurentPoly,
    pub exponent: u32,
    pub denominator: LaurentPoly,
    pub forms: Vec<QuadForm>,
}

/// `Bl(x, τx)` in coordinates of a rational basis of `H`.
#[derive(Debug, Clone)]
pub struct TauQuadratic {
    pub basis: QBasis,
    pub parts: Vec<CoprimePart>,
}

impl TauQuadratic {
    pub fn dim(&self) -> usize {
        self.basis.dim
    }

    /// Every form, tagged with `(part, index)`.
    pub fn forms(&self) -> impl Iterator<Item = ((usize, usize), &QuadForm)> + '_ {
        self.parts.iter().enumerate().flat_map(|(p, part)| part.forms.iter().enumerate().map(move |(r, f)| ((p, r), f)))
    }

    /// `Bl(x, τx)` reassembled from the forms.
    pub fn value(&self, coords: &[Rational]) -> TorsionClass {
        let mut acc = TorsionClass::zero();
        for part in &self.parts {
            let c: Vec<Rational> = part.forms.iter().map(|f| f.eval(coords)).collect();
            acc = &acc + &TorsionClass::from_coords(&part.denominator, &c);
        }
        acc
    }

    pub fn vanishes_at(&self, coords: &[Rational]) -> bool {
        self.forms().all(|(_, f)| f.eval(coords).is_zero())
    }
}

fn direct_value(t: &EquivariantTriple, x: &ModuleElement) -> TorsionClass {
    let tx = t.involution().apply(x).expect("element of the module");
    t.pairing().pair(x, &tx).expect("element of the module")
}

fn random_rational(rng: &mut ChaCha8Rng, height: i64) -> Rational {
    Rational::new(rng.gen_range(-height..=height).into(), rng.gen_range(1..=height).into())
}

/// Builds the forms and checks them against direct evaluation on 20 seeded
/// random vectors.
pub fn tau_quadratic(t: &EquivariantTriple) -> Result<TauQuadratic, ObstructionError> {
    let module = t.module();
    let basis = module.q_basis()?;
    let n = basis.dim;

    let exponent = module.invariant_factors().last().cloned().unwrap_or_else(LaurentPoly::one);
    let mut factors = Vec::new();
    let mut dens = Vec::new();
    // split off linear factors so rational eigenvalues get their own forms
    let mut pieces = module.invariant_factors().to_vec();
    pieces.extend(linear_factors(&exponent));
    for f in gcd_free_basis(&pieces) {
        let e = multiplicity(&exponent, &f);
        dens.push(f.pow(e));
        factors.push((f, e));
    }

    let elems: Vec<ModuleElement> = (0..n).map(|k| basis.basis_element(k)).collect();
    let images: Vec<ModuleElement> = elems.iter().map(|e| t.involution().apply(e)).collect::<Result<_, _>>()?;

    // raw[p][r][k][l]: coefficient r of the p-part of Bl(e_k, τ e_l)
    let mut raw: Vec<Vec<Vec<Vec<Rational>>>> =
        dens.iter().map(|d| vec![vec![vec![Rational::zero(); n]; n]; d.span().unwrap_or(0)]).collect();
    for k in 0..n {
        for l in 0..n {
            let v = t.pairing().pair(&elems[k], &images[l])?;
            if v.is_zero() {
                continue;
            }
            let split = coprime_split(&v, &dens).map_err(|_| ObstructionError::Exponent)?;
            for (p, part) in split.iter().enumerate() {
                let c = part.coords_over(&dens[p]).ok_or(ObstructionError::Exponent)?;
                for (r, x) in c.into_iter().enumerate() {
                    raw[p][r][k][l] = x;
                }
            }
        }
    }
    let parts = factors
        .into_iter()
        .zip(dens)
        .zip(raw)
        .map(|(((factor, exponent), denominator), m)| CoprimePart {
            factor,
            exponent,
            denominator,
            forms: m.into_iter().map(QuadForm::new).collect(),
        })
        .collect();
    let q = TauQuadratic { basis, parts };

    let mut rng = ChaCha8Rng::seed_from_u64(0x7a75);
    for _ in 0..20 {
        let c: Vec<Rational> = (0..n).map(|_| random_rational(&mut rng, 9)).collect();
        let x = q.basis.element(&c);
        if q.value(&c) != direct_value(t, &x) {
            return Err(ObstructionError::SelfCheck);
        }
    }
    Ok(q)
}

/// Outcome of [`certify_k0`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CertVerdict {
    /// `Bl(x, τx) = 0` forces `x = 0`.
    CertifiedK0,
    /// A nonzero `x` with `Bl(x, τx) = 0`, verified directly.
    Counterexample,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Weight {
    pub part: usize,
    pub form: usize,
    pub weight: i64,
}

/// One elimination. Restricted to the current subspace `V`, `Σ w Q` is
/// semidefinite and nonzero, so every common zero of the forms in `V` lies in
/// its radical, which becomes the new `V`. A definite combination leaves `{0}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EliminationStep {
    pub weights: Vec<Weight>,
    pub sign: &'static str,
    /// Rank of the combination on `V`.
    pub rank: usize,
    /// Basis of the radical, as coordinate vectors; empty once certified.
    pub remaining: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    /// Coordinates in the rational basis.
    pub coords: Vec<String>,
    /// The same element in the module's generators.
    pub element: Vec<LaurentPoly>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadraticCertificate {
    pub verdict: CertVerdict,
    /// SHA-256 of the triple the certificate was computed for.
    pub digest: String,
    pub dim: usize,
    pub parts: Vec<CoprimePart>,
    pub steps: Vec<EliminationStep>,
    pub counterexample: Option<Counterexample>,
    pub seed: u64,
}

impl QuadraticCertificate {
    pub fn certified(&self) -> bool {
        self.verdict == CertVerdict::CertifiedK0
    }

    /// Replays the elimination steps against the stored forms.
    pub fn check_steps(&self) -> bool {
        if !self.certified() {
            return true;
        }
        let mut basis = identity(self.dim);
        for step in &self.steps {
            let mut comb = QuadForm::zeros(self.dim);
            for w in &step.weights {
                let Some(f) = self.parts.get(w.part).and_then(|p| p.forms.get(w.form)) else {
                    return false;
                };
                comb = comb.add_scaled(f, &Rational::from_integer(w.weight.into()));
            }
            let Some((sign, rank, next)) = reduce(&comb, &basis) else {
                return false;
            };
            let rendered: Vec<Vec<String>> = next.iter().map(|v| v.iter().map(ToString::to_string).collect()).collect();
            if sign.name() != step.sign || rank != step.rank || rendered != step.remaining {
                return false;
            }
            basis = next;
        }
        basis.is_empty()
    }
}

/// Search limits for [`certify_k0`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertifyOptions {
    pub seed: u64,
    /// Random rational vectors tried by the falsifier.
    pub random_trials: usize,
    /// Largest absolute weight in combinations.
    pub max_weight: i64,
    /// Combinations tried per elimination step.
    pub budget: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { seed: 0, random_trials: 2000, max_weight: 8, budget: 4000 }
    }
}

/// SHA-256 over a canonical rendering of the triple.
pub fn triple_digest(t: &EquivariantTriple) -> String {
    let mut h = Sha256::new();
    h.update(format!("relations:{}\n", t.module().relations()));
    for row in t.pairing().gram() {
        let cells: Vec<String> = row.iter().map(|g| g.representative().to_string()).collect();
        h.update(format!("gram:{}\n", cells.join(",")));
    }
    h.update(format!("tau:{}:{:?}\n", t.involution().matrix(), t.involution().twist()));
    hex::encode(h.finalize())
}

fn identity(n: usize) -> Vec<Vec<Rational>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect()
}

/// Sign, rank and the new subspace `K · rad(K^T C K)` when `C` is nonzero and
/// semidefinite on the span of `basis`.
fn reduce(comb: &QuadForm, basis: &[Vec<Rational>]) -> Option<(Definite, usize, Vec<Vec<Rational>>)> {
    let restricted = comb.congruent(basis);
    let (sign, rank) = restricted.semidefinite()?;
    let n = basis.first().map_or(0, Vec::len);
    let next = restricted.radical().iter().map(|a| combine(basis, a, n)).collect();
    Some((sign, rank, next))
}

/// `Σ a_j K_j` for coordinate vectors `K_j` of length `n`.
fn combine(basis: &[Vec<Rational>], a: &[Rational], n: usize) -> Vec<Rational> {
    (0..n).map(|i| basis.iter().zip(a).map(|(k, x)| &k[i] * x).sum()).collect()
}

/// Integer vectors of the given L1 norm with entries bounded by `h`.
fn weight_vectors(len: usize, norm: i64, h: i64, out: &mut Vec<Vec<i64>>, cap: usize) {
    fn rec(i: usize, left: i64, h: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>, cap: usize) {
        if out.len() >= cap {
            return;
        }
        if i == cur.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let rest = (cur.len() - i - 1) as i64;
        for a in 0..=left.min(h) {
            if left - a > rest * h {
                continue;
            }
            let signs: &[i64] = if a == 0 { &[1] } else { &[1, -1] };
            for &s in signs {
                cur[i] = s * a;
                rec(i + 1, left - a, h, cur, out, cap);
            }
        }
        cur[i] = 0;
    }
    let mut cur = vec![0; len];
    rec(0, norm, h, &mut cur, out, cap);
}

fn find_step(forms: &[((usize, usize), &QuadForm)], basis: &[Vec<Rational>], opts: &CertifyOptions) -> Option<(EliminationStep, Vec<Vec<Rational>>)> {
    let dim = basis.first().map_or(0, Vec::len);
    let live: Vec<((usize, usize), QuadForm)> = forms
        .iter()
        .filter(|(_, f)| !f.congruent(basis).is_zero())
        .map(|(tag, f)| (*tag, (*f).clone()))
        .collect();
    if live.is_empty() {
        return None;
    }
    let d = basis.len();
    let try_weights = |ws: &[(usize, i64)], need_definite: bool| -> Option<(EliminationStep, Vec<Vec<Rational>>)> {
        let mut comb = QuadForm::zeros(dim);
        for &(k, w) in ws {
            comb = comb.add_scaled(&live[k].1, &Rational::from_integer(w.into()));
        }
        let (sign, rank, next) = reduce(&comb, basis)?;
        if need_definite && rank < d {
            return None;
        }
        let step = EliminationStep {
            weights: ws.iter().map(|&(k, weight)| Weight { part: live[k].0 .0, form: live[k].0 .1, weight }).collect(),
            sign: sign.name(),
            rank,
            remaining: next.iter().map(|v| v.iter().map(ToString::to_string).collect()).collect(),
        };
        Some((step, next))
    };

    for k in 0..live.len() {
        if let Some(s) = try_weights(&[(k, 1)], true) {
            return Some(s);
        }
    }
    // semidefinite forms with their signs: the radical of the sum is the
    // intersection of their radicals
    let signed: Vec<(usize, i64)> =
        (0..live.len()).filter_map(|k| live[k].1.congruent(basis).semidefinite_sign().map(|s| (k, s))).collect();
    if !signed.is_empty() {
        if let Some(s) = try_weights(&signed, false) {
            return Some(s);
        }
    }
    let mut tried = 0;
    for norm in 2..=opts.max_weight * live.len() as i64 {
        let mut ws = Vec::new();
        weight_vectors(live.len(), norm, opts.max_weight, &mut ws, opts.budget - tried);
        for w in ws {
            tried += 1;
            // w and -w give the same test
            if w.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                continue;
            }
            let pairs: Vec<(usize, i64)> = w.iter().enumerate().filter(|(_, &x)| x != 0).map(|(k, &x)| (k, x)).collect();
            if let Some(s) = try_weights(&pairs, false) {
                return Some(s);
            }
        }
        if tried >= opts.budget {
            break;
        }
    }
    None
}

fn falsify(t: &EquivariantTriple, q: &TauQuadratic, basis: &[Vec<Rational>], opts: &CertifyOptions) -> Option<Counterexample> {
    let n = q.dim();
    let module = t.module();
    // isotropic vectors lie in the surviving subspace, so search there first
    let mut candidates: Vec<Vec<Rational>> = basis.to_vec();
    for k in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[k] = Rational::one();
        candidates.push(e);
    }
    let tt = LaurentPoly::t();
    for i in 0..module.generators() {
        let g = module.generator(i);
        candidates.push(q.basis.coords(&g));
        candidates.push(q.basis.coords(&g.mul_poly(&tt)));
    }
    let base = candidates.len();
    for a in 0..base {
        for b in a + 1..base {
            let sum: Vec<Rational> = candidates[a].iter().zip(&candidates[b]).map(|(x, y)| x + y).collect();
            let diff: Vec<Rational> = candidates[a].iter().zip(&candidates[b]).map(|(x, y)| x - y).collect();
            candidates.push(sum);
            candidates.push(diff);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for trial in 0..opts.random_trials {
        let dense = rng.gen_bool(0.5);
        // alternate between the surviving subspace and the whole space
        let in_subspace = trial % 2 == 0 && !basis.is_empty();
        let len = if in_subspace { basis.len() } else { n };
        let a: Vec<Rational> = (0..len)
            .map(|_| if dense || rng.gen_bool(0.3) { random_rational(&mut rng, 32) } else { Rational::zero() })
            .collect();
        candidates.push(if in_subspace { combine(basis, &a, n) } else { a });
    }
    for c in candidates {
        if c.iter().all(Zero::is_zero) || !q.vanishes_at(&c) {
            continue;
        }
        let x = q.basis.element(&c);
        if module.is_zero(&x) || !direct_value(t, &x).is_zero() {
            continue;
        }
        return Some(Counterexample { coords: c.iter().map(ToString::to_string).collect(), element: x.into_coeffs() });
    }
    None
}

/// Decides whether `Bl(x, τx) = 0` forces `x = 0` on the rational points of `H`.
///
/// Elimination steps are sound by construction; when they stall a seeded
/// search looks for an isotropic vector, and otherwise the answer is
/// [`CertVerdict::Undecided`].
pub fn certify_k0(t: &EquivariantTriple, opts: &CertifyOptions) -> Result<QuadraticCertificate, ObstructionError> {
    let q = tau_quadratic(t)?;
    let n = q.dim();
    let forms: Vec<((usize, usize), &QuadForm)> = q.forms().filter(|(_, f)| !f.is_zero()).collect();
    let mut basis = identity(n);
    let mut steps = Vec::new();
    while !basis.is_empty() {
        match find_step(&forms, &basis, opts) {
            Some((s, next)) => {
                basis = next;
                steps.push(s);
            }
            None => break,
        }
    }
    let (verdict, counterexample) = if basis.is_empty() {
        (CertVerdict::CertifiedK0, None)
    } else {
        match falsify(t, &q, &basis, opts) {
            Some(c) => (CertVerdict::Counterexample, Some(c)),
            None => (CertVerdict::Undecided, None),
        }
    };
    if verdict != CertVerdict::CertifiedK0 {
        steps.clear();
    }
    Ok(QuadraticCertificate { verdict, digest: triple_digest(t), dim: n, parts: q.parts, steps, counterexample, seed: opts.seed })
}
