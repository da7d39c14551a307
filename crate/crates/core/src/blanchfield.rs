//! Gram matrices of the Blanchfield pairing over a presented module.
//!
//! For a Seifert matrix `A` the module is `Λ^n / (tA - A^T)` and
//! `Bl(x, y) = (t - 1) x^T (A - tA^T)^-1 conj(y)`, so the Gram matrix on the
//! generators is `(t - 1)(A - tA^T)^-1` read in Q(t)/Λ.

use std::sync::Arc;

use thiserror::Error;

use crate::linalg::{inverse_qt, seifert_pencil_dual, snf, LambdaMatrix, LinalgError};
use crate::module::{ModuleElement, ModuleError, PresentedModule};
use crate::ring::{LaurentPoly, RationalFn, TorsionClass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlanchfieldError {
    #[error("Gram matrix is {rows}x{cols} but the module has {generators} generators")]
    GramShape { rows: usize, cols: usize, generators: usize },
    #[error("A - tA^T is singular")]
    Singular,
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A sesquilinear pairing given by its values on generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramPairing {
    module: Arc<PresentedModule>,
    gram: Vec<Vec<TorsionClass>>,
}

impl GramPairing {
    pub fn new(module: Arc<PresentedModule>, gram: Vec<Vec<TorsionClass>>) -> Result<Self, BlanchfieldError> {
        let n = module.generators();
        if gram.len() != n || gram.iter().any(|r| r.len() != n) {
            return Err(BlanchfieldError::GramShape {
                rows: gram.len(),
                cols: gram.first().map_or(0, Vec::len),
                generators: n,
            });
        }
        Ok(GramPairing { module, gram })
    }

    /// The pairing of a Seifert matrix, on a freshly built Alexander module.
    pub fn from_seifert(a: &LambdaMatrix) -> Result<Self, BlanchfieldError> {
        let module = Arc::new(PresentedModule::from_seifert(a)?);
        Self::from_seifert_on(module, a)
    }

    /// The pairing of `a` on a module already built from it.
    pub fn from_seifert_on(module: Arc<PresentedModule>, a: &LambdaMatrix) -> Result<Self, BlanchfieldError> {
        let inv = inverse_qt(&seifert_pencil_dual(a)).map_err(|e| match e {
            LinalgError::Singular => BlanchfieldError::Singular,
            other => other.into(),
        })?;
        let tm1 = LaurentPoly::from_ints(0, &[-1, 1]);
        let gram = inv.iter().map(|row| row.iter().map(|f| TorsionClass::from_fn(&f.mul_poly(&tm1))).collect()).collect();
        Self::new(module, gram)
    }

    pub fn module(&self) -> &Arc<PresentedModule> {
        &self.module
    }

    pub fn gram(&self) -> &[Vec<TorsionClass>] {
        &self.gram
    }

    pub fn size(&self) -> usize {
        self.gram.len()
    }

    /// `x^T G conj(y)`.
    pub fn pair(&self, x: &ModuleElement, y: &ModuleElement) -> Result<TorsionClass, BlanchfieldError> {
        self.module.check_element(x)?;
        self.module.check_element(y)?;
        let ybar: Vec<LaurentPoly> = y.coeffs().iter().map(LaurentPoly::conj).collect();
        let mut acc = RationalFn::zero();
        for (i, xi) in x.coeffs().iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in ybar.iter().enumerate() {
                let g = &self.gram[i][j];
                if yj.is_zero() || g.is_zero() {
                    continue;
                }
                acc = &acc + &g.representative().mul_poly(&(xi * yj));
            }
        }
        Ok(TorsionClass::from_fn(&acc))
    }

    /// `Bl(y, x) = conj Bl(x, y)` on generators.
    pub fn check_hermitian(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (i..n).all(|j| self.gram[j][i] == self.gram[i][j].conj()))
    }

    /// Relations pair to zero on both sides.
    pub fn check_well_defined(&self) -> bool {
        let n = self.size();
        let rels = self.module.relations().columns();
        rels.iter().all(|r| {
            let r = ModuleElement::new(r.clone());
            (0..n).all(|j| {
                let g = self.module.generator(j);
                self.pair(&r, &g).expect("sizes match").is_zero() && self.pair(&g, &r).expect("sizes match").is_zero()
            })
        })
    }

    /// Vectors `x` whose adjoint `pair(x, -)` vanishes, as generators of a
    /// submodule of `Λ^n`: clear denominators with `D = lcm`, so that
    /// `x^T G ∈ Λ^n` becomes `N^T x = D z` for `N = D G`.
    pub fn adjoint_kernel(&self) -> Result<LambdaMatrix, BlanchfieldError> {
        let n = self.size();
        let mut dl = LaurentPoly::one();
        for row in &self.gram {
            for g in row {
                let d = g.denominator();
                let gcd = dl.gcd(d);
                dl = (&dl * d).div_exact(&gcd).expect("gcd divides");
            }
        }
        let numer = LambdaMatrix::from_fn(n, n, |i, j| {
            let g = &self.gram[i][j];
            g.numerator() * &dl.div_exact(g.denominator()).expect("lcm is a multiple")
        });
        let lhs = numer.transpose().hstack(&LambdaMatrix::identity(n).scale(&-&dl))?;
        let k = snf(&lhs)?.kernel();
        Ok(k.row_range(0..n))
    }

    /// The adjoint `x -> pair(x, -)` is injective on the module.
    pub fn check_nonsingular(&self) -> Result<bool, BlanchfieldError> {
        let k = self.adjoint_kernel()?;
        Ok(k.columns().into_iter().all(|c| self.module.is_zero(&ModuleElement::new(c))))
    }

    pub fn negate(&self) -> Self {
        GramPairing { module: self.module.clone(), gram: self.gram.iter().map(|r| r.iter().map(|g| -g).collect()).collect() }
    }

    /// Block sum on the direct-sum module.
    pub fn direct_sum(&self, other: &Self) -> Result<Self, BlanchfieldError> {
        let module = Arc::new(self.module.direct_sum(&other.module)?);
        Ok(self.direct_sum_on(other, module))
    }

    pub(crate) fn direct_sum_on(&self, other: &Self, module: Arc<PresentedModule>) -> Self {
        let (a, b) = (self.size(), other.size());
        let gram = (0..a + b)
            .map(|i| {
                (0..a + b)
                    .map(|j| match (i < a, j < a) {
                        (true, true) => self.gram[i][j].clone(),
                        (false, false) => other.gram[i - a][j - a].clone(),
                        _ => TorsionClass::zero(),
                    })
                    .collect()
            })
            .collect();
        GramPairing { module, gram }
    }

    /// Same Gram data on another (equal) module handle.
    pub(crate) fn with_module(&self, module: Arc<PresentedModule>) -> Self {
        GramPairing { module, gram: self.gram.clone() }
    }
}

/// Free-function form of [`GramPairing::from_seifert`].
pub fn gram_from_seifert(a: &LambdaMatrix) -> Result<GramPairing, BlanchfieldError> {
    GramPairing::from_seifert(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Rational;

    fn tc(s: &str) -> TorsionClass {
        s.parse().unwrap()
    }

    fn nine46() -> GramPairing {
        GramPairing::from_seifert(&LambdaMatrix::from_int_rows(&[vec![0, 2], vec![1, 0]]).unwrap()).unwrap()
    }

    #[test]
    fn nine46_gram() {
        let b = nine46();
        let g = b.gram();
        assert!(g[0][0].is_zero() && g[1][1].is_zero());
        assert_eq!(g[0][1], tc("(1 - t)/(2*t - 1)"));
        assert_eq!(g[1][0], tc("(1 - t)/(t - 2)"));
        assert!(b.check_hermitian());
        assert!(b.check_well_defined());
        assert!(b.check_nonsingular().unwrap());
    }

    #[test]
    fn nine46_pairing_with_swap() {
        let b = nine46();
        let m = b.module().clone();
        let (c1, c2) = (Rational::new(3.into(), 2.into()), Rational::from_integer((-5).into()));
        let x = &m.generator(0).scale(&c1) + &m.generator(1).scale(&c2);
        let y = &m.generator(0).scale(&c2) + &m.generator(1).scale(&c1);
        let expect = &tc("(1 - t)/(2*t - 1)").scale(&(&c1 * &c1)) + &tc("(1 - t)/(t - 2)").scale(&(&c2 * &c2));
        assert_eq!(b.pair(&x, &y).unwrap(), expect);
        assert!(b.pair(&x, &m.zero_element()).unwrap().is_zero());
    }

    #[test]
    fn genus_one_pairings() {
        for (m, l) in [(1i64, 1i64), (2, 3), (-3, 2)] {
            let a = LambdaMatrix::from_int_rows(&[vec![0, m + 1], vec![m, l]]).unwrap();
            let b = GramPairing::from_seifert(&a).unwrap();
            let f1 = LaurentPoly::from_ints(0, &[-m, m + 1]);
            let f2 = LaurentPoly::from_ints(0, &[-(m + 1), m]);
            let sq = LaurentPoly::from_ints(0, &[1, -1]).pow(2);
            // (t - 1) * (-l(1 - t)/Delta) = +l(1 - t)^2/Delta
            let g00 = TorsionClass::new(sq.scale(&Rational::from_integer(l.into())), &f1 * &f2).unwrap();
            assert_eq!(b.gram()[0][0], g00);
            let y1 = b.module().generator(0).mul_poly(&f1);
            let y2 = b.module().generator(0).mul_poly(&f2);
            assert!(b.pair(&y1, &y1).unwrap().is_zero());
            assert!(b.pair(&y2, &y2).unwrap().is_zero());
            let num = (&sq * &f1).shift(-1).scale(&Rational::from_integer((-l).into()));
            assert_eq!(b.pair(&y1, &y2).unwrap(), TorsionClass::new(num, f2.clone()).unwrap());
        }
    }

    #[test]
    fn degenerate_cases() {
        let u = GramPairing::from_seifert(&LambdaMatrix::zeros(0, 0)).unwrap();
        assert_eq!(u.size(), 0);
        assert!(u.check_hermitian());
        assert!(u.check_nonsingular().unwrap());

        let b = nine46();
        let mut g = b.gram().to_vec();
        g[0][1] = &g[0][1] + &tc("(1)/(t - 2)");
        let bad = GramPairing::new(b.module().clone(), g).unwrap();
        assert!(!bad.check_hermitian());

        let zero = GramPairing::new(b.module().clone(), vec![vec![TorsionClass::zero(); 2]; 2]).unwrap();
        assert!(!zero.check_nonsingular().unwrap());
        assert!(GramPairing::new(b.module().clone(), vec![]).is_err());
    }

    #[test]
    fn sums_block() {
        let b = nine46();
        let s = b.direct_sum(&b.negate()).unwrap();
        assert_eq!(s.size(), 4);
        assert!(s.check_hermitian() && s.check_well_defined());
        assert_eq!(s.gram()[2][3], -&b.gram()[0][1]);
        assert!(s.gram()[0][2].is_zero());
    }
}
