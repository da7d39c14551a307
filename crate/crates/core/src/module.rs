//! Finitely presented Λ-modules `Λ^n / R Λ^m` and their elements.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg::{det, seifert_pencil, snf, LambdaMatrix, LinalgError, SnfResult};
use crate::ring::{LaurentPoly, Rational, TorsionClass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("not a Seifert matrix: det(A - A^T) = {0}, expected ±1")]
    NotSeifert(String),
    #[error("Seifert matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("module has free rank {0}; a torsion module is required")]
    NotTorsion(usize),
    #[error("map does not send relations to relations")]
    NotWellDefined,
    #[error("element has {got} coefficients, module has {expected} generators")]
    WrongLength { expected: usize, got: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// An element of a presented module, as a coefficient vector over the generators.
///
/// Equality of elements depends on the module; use [`PresentedModule::element_equal`].
/// The derived `PartialEq` compares raw coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModuleElement {
    coeffs: Vec<LaurentPoly>,
}

impl ModuleElement {
    pub fn new(coeffs: Vec<LaurentPoly>) -> Self {
        ModuleElement { coeffs }
    }

    pub fn zero(n: usize) -> Self {
        ModuleElement { coeffs: vec![LaurentPoly::zero(); n] }
    }

    /// The `i`-th generator `b_i` of a module with `n` generators.
    pub fn generator(n: usize, i: usize) -> Self {
        let mut coeffs = vec![LaurentPoly::zero(); n];
        coeffs[i] = LaurentPoly::one();
        ModuleElement { coeffs }
    }

    pub fn coeffs(&self) -> &[LaurentPoly] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<LaurentPoly> {
        self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Raw zero test on the coefficient vector.
    pub fn is_zero_vector(&self) -> bool {
        self.coeffs.iter().all(LaurentPoly::is_zero)
    }

    pub fn mul_poly(&self, p: &LaurentPoly) -> Self {
        ModuleElement { coeffs: self.coeffs.iter().map(|c| c * p).collect() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        ModuleElement { coeffs: self.coeffs.iter().map(|x| x.scale(c)).collect() }
    }

    /// Coefficientwise conjugation.
    pub fn conj(&self) -> Self {
        ModuleElement { coeffs: self.coeffs.iter().map(LaurentPoly::conj).collect() }
    }

    /// Concatenation, the element `(self, other)` of a direct sum.
    pub fn concat(&self, other: &Self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.extend(other.coeffs.iter().cloned());
        ModuleElement { coeffs }
    }
}

impl Add for &ModuleElement {
    type Output = ModuleElement;
    fn add(self, rhs: &ModuleElement) -> ModuleElement {
        assert_eq!(self.len(), rhs.len(), "elements of different modules");
        ModuleElement { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &ModuleElement {
    type Output = ModuleElement;
    fn sub(self, rhs: &ModuleElement) -> ModuleElement {
        self + &(-rhs)
    }
}

impl Neg for &ModuleElement {
    type Output = ModuleElement;
    fn neg(self) -> ModuleElement {
        ModuleElement { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModuleElement{self}")
    }
}

/// `Λ^n` modulo the column span of `relations`, with its Smith form cached.
#[derive(Clone, PartialEq, Eq)]
pub struct PresentedModule {
    relations: LambdaMatrix,
    snf: SnfResult,
    order: LaurentPoly,
    free_rank: usize,
}

impl PresentedModule {
    /// Relations are the columns of `relations`; its row count is the number of generators.
    pub fn new(relations: LambdaMatrix) -> Result<Self, ModuleError> {
        let snf = snf(&relations)?;
        let free_rank = relations.rows() - snf.rank;
        let order = if free_rank > 0 {
            LaurentPoly::zero()
        } else {
            snf.invariant_factors.iter().fold(LaurentPoly::one(), |acc, d| &acc * d)
        };
        Ok(PresentedModule { relations, snf, order, free_rank })
    }

    /// Like [`new`](Self::new) but rejects modules with a free part.
    pub fn new_torsion(relations: LambdaMatrix) -> Result<Self, ModuleError> {
        let m = Self::new(relations)?;
        if m.free_rank > 0 {
            return Err(ModuleError::NotTorsion(m.free_rank));
        }
        Ok(m)
    }

    pub fn trivial() -> Self {
        Self::new(LambdaMatrix::zeros(0, 0)).expect("empty presentation")
    }

    /// `Λ/(p)` on one generator.
    pub fn cyclic(p: &LaurentPoly) -> Result<Self, ModuleError> {
        Self::new(LambdaMatrix::diagonal(std::slice::from_ref(p)))
    }

    /// The Alexander module presented by `tA - A^T` for a Seifert matrix `A`.
    pub fn from_seifert(a: &LambdaMatrix) -> Result<Self, ModuleError> {
        if !a.is_square() {
            return Err(ModuleError::NotSquare { rows: a.rows(), cols: a.cols() });
        }
        let skew = det(&(a - &a.transpose()))?;
        let ok = skew.is_constant() && skew.coeff(0).abs() == Rational::one();
        if !ok {
            return Err(ModuleError::NotSeifert(skew.to_string()));
        }
        Self::new_torsion(seifert_pencil(a))
    }

    pub fn generators(&self) -> usize {
        self.relations.rows()
    }

    pub fn relations(&self) -> &LambdaMatrix {
        &self.relations
    }

    pub fn snf(&self) -> &SnfResult {
        &self.snf
    }

    pub fn invariant_factors(&self) -> &[LaurentPoly] {
        &self.snf.invariant_factors
    }

    /// Monic product of the invariant factors; zero if the module has a free part.
    pub fn order(&self) -> &LaurentPoly {
        &self.order
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn is_torsion(&self) -> bool {
        self.free_rank == 0
    }

    /// Minimal number of generators.
    pub fn generating_rank(&self) -> usize {
        self.snf.invariant_factors.len() + self.free_rank
    }

    /// Isomorphism test via invariant factors.
    pub fn isomorphic(&self, other: &Self) -> bool {
        self.free_rank == other.free_rank && self.invariant_factors() == other.invariant_factors()
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self, ModuleError> {
        Self::new(self.relations.block_diag(&other.relations))
    }

    pub fn zero_element(&self) -> ModuleElement {
        ModuleElement::zero(self.generators())
    }

    pub fn generator(&self, i: usize) -> ModuleElement {
        ModuleElement::generator(self.generators(), i)
    }

    pub fn check_element(&self, x: &ModuleElement) -> Result<(), ModuleError> {
        if x.len() != self.generators() {
            return Err(ModuleError::WrongLength { expected: self.generators(), got: x.len() });
        }
        Ok(())
    }

    /// Relation coefficients `w` with `R w = x`, if `x` is zero in the module.
    pub fn relation_coefficients(&self, x: &ModuleElement) -> Option<Vec<LaurentPoly>> {
        self.snf.solve(x.coeffs())
    }

    pub fn is_zero(&self, x: &ModuleElement) -> bool {
        self.relation_coefficients(x).is_some()
    }

    /// Congruence modulo the relations.
    pub fn element_equal(&self, x: &ModuleElement, y: &ModuleElement) -> bool {
        self.is_zero(&(x - y))
    }

    /// Presentation of the submodule generated by `gens`, on those generators.
    ///
    /// The relations are the first `k` coordinates of the syzygies of `[G | -R]`.
    pub fn submodule_presentation(&self, gens: &[ModuleElement]) -> Result<Self, ModuleError> {
        for g in gens {
            self.check_element(g)?;
        }
        let k = gens.len();
        let g = LambdaMatrix::from_columns(self.generators(), &gens.iter().map(|g| g.coeffs().to_vec()).collect::<Vec<_>>())?;
        let stacked = g.hstack(&-&self.relations)?;
        let syz = snf(&stacked)?.kernel();
        Self::new(syz.row_range(0..k))
    }

    /// A Q-basis `t^j h_i` adapted to the cyclic decomposition.
    pub fn q_basis(&self) -> Result<QBasis, ModuleError> {
        if !self.is_torsion() {
            return Err(ModuleError::NotTorsion(self.free_rank));
        }
        let mut blocks = Vec::new();
        for (i, d) in self.snf.diagonal().into_iter().enumerate() {
            if d.is_unit() {
                continue;
            }
            let h = ModuleElement::new(self.snf.u_inv.column(i));
            blocks.push(QBlock { index: i, factor: d, generator: h });
        }
        let dim = blocks.iter().map(QBlock::dim).sum();
        let mut t_matrix = vec![vec![Rational::zero(); dim]; dim];
        let mut off = 0;
        for b in &blocks {
            let n = b.dim();
            for j in 0..n {
                if j + 1 < n {
                    t_matrix[off + j + 1][off + j] = Rational::one();
                } else {
                    for r in 0..n {
                        t_matrix[off + r][off + j] = -b.factor.coeff(r as i64);
                    }
                }
            }
            off += n;
        }
        Ok(QBasis { blocks, dim, t_matrix, u: self.snf.u.clone() })
    }
}

impl fmt::Debug for PresentedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PresentedModule")
            .field("generators", &self.generators())
            .field("relations", &self.relations)
            .field("invariant_factors", &self.invariant_factors())
            .field("free_rank", &self.free_rank)
            .finish()
    }
}

/// One cyclic summand `Λ/(d)` generated by `generator`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QBlock {
    /// Position of `d` on the Smith diagonal.
    pub index: usize,
    pub factor: LaurentPoly,
    pub generator: ModuleElement,
}

impl QBlock {
    pub fn dim(&self) -> usize {
        self.factor.span().expect("nonzero invariant factor")
    }
}

/// Rational basis of a torsion module together with the action of `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QBasis {
    pub blocks: Vec<QBlock>,
    pub dim: usize,
    /// Column `k` holds the coordinates of `t` times basis vector `k`.
    pub t_matrix: Vec<Vec<Rational>>,
    u: LambdaMatrix,
}

impl QBasis {
    /// Coordinates of `x` in the basis.
    pub fn coords(&self, x: &ModuleElement) -> Vec<Rational> {
        let y = self.u.mul_vec(x.coeffs());
        let mut out = Vec::with_capacity(self.dim);
        for b in &self.blocks {
            // residue of y_i modulo d_i, read off a torsion class with denominator d_i
            let c = TorsionClass::new(y[b.index].clone(), b.factor.clone()).expect("nonzero factor");
            out.extend(c.coords_over(&b.factor).expect("denominator divides the factor"));
        }
        out
    }

    /// The element with the given coordinates.
    pub fn element(&self, coords: &[Rational]) -> ModuleElement {
        assert_eq!(coords.len(), self.dim, "coordinate vector has the wrong length");
        let n = self.u.cols();
        let mut x = ModuleElement::zero(n);
        let mut off = 0;
        for b in &self.blocks {
            let poly = LaurentPoly::from_coeffs(0, coords[off..off + b.dim()].to_vec());
            x = &x + &b.generator.mul_poly(&poly);
            off += b.dim();
        }
        x
    }

    /// The `k`-th basis vector as a module element.
    pub fn basis_element(&self, k: usize) -> ModuleElement {
        let mut c = vec![Rational::zero(); self.dim];
        c[k] = Rational::one();
        self.element(&c)
    }
}

/// A Λ-linear map between presented modules, `x -> F x` on coefficient vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleMap {
    domain: PresentedModule,
    codomain: PresentedModule,
    matrix: LambdaMatrix,
}

impl ModuleMap {
    /// Fails with [`ModuleError::NotWellDefined`] unless `F` maps relations of
    /// the domain into the relation span of the codomain.
    pub fn new(domain: PresentedModule, codomain: PresentedModule, matrix: LambdaMatrix) -> Result<Self, ModuleError> {
        if matrix.rows() != codomain.generators() || matrix.cols() != domain.generators() {
            return Err(ModuleError::WrongLength { expected: domain.generators(), got: matrix.cols() });
        }
        for r in domain.relations().columns() {
            if !codomain.is_zero(&ModuleElement::new(matrix.mul_vec(&r))) {
                return Err(ModuleError::NotWellDefined);
            }
        }
        Ok(ModuleMap { domain, codomain, matrix })
    }

    pub fn domain(&self) -> &PresentedModule {
        &self.domain
    }

    pub fn codomain(&self) -> &PresentedModule {
        &self.codomain
    }

    pub fn apply(&self, x: &ModuleElement) -> Result<ModuleElement, ModuleError> {
        self.domain.check_element(x)?;
        Ok(ModuleElement::new(self.matrix.mul_vec(x.coeffs())))
    }

    /// The image, generated by the columns of `F` inside the codomain.
    pub fn image(&self) -> Result<PresentedModule, ModuleError> {
        let cols: Vec<ModuleElement> = self.matrix.columns().into_iter().map(ModuleElement::new).collect();
        self.codomain.submodule_presentation(&cols)
    }

    /// The kernel, generated by the projections of the syzygies of `[F | -R]`.
    pub fn kernel(&self) -> Result<PresentedModule, ModuleError> {
        let n = self.domain.generators();
        let stacked = self.matrix.hstack(&-self.codomain.relations())?;
        let syz = snf(&stacked)?.kernel().row_range(0..n);
        let gens: Vec<ModuleElement> = syz.columns().into_iter().map(ModuleElement::new).collect();
        self.domain.submodule_presentation(&gens)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    fn nine46() -> PresentedModule {
        PresentedModule::from_seifert(&LambdaMatrix::from_int_rows(&[vec![0, 2], vec![1, 0]]).unwrap()).unwrap()
    }

    #[test]
    fn nine46_module() {
        let m = nine46();
        assert_eq!(m.invariant_factors(), &[(p("t - 2") * p("2*t - 1")).monic_associate()]);
        assert_eq!(m.generating_rank(), 1);
        let split = PresentedModule::cyclic(&p("t - 2")).unwrap().direct_sum(&PresentedModule::cyclic(&p("2*t - 1")).unwrap()).unwrap();
        assert!(split.isomorphic(&m));
        assert_eq!(split.generating_rank(), 1);
    }

    #[test]
    fn trivial_and_errors() {
        let u = PresentedModule::from_seifert(&LambdaMatrix::zeros(0, 0)).unwrap();
        assert_eq!(u.generating_rank(), 0);
        assert_eq!(u.order(), &LaurentPoly::one());
        assert_eq!(u.q_basis().unwrap().dim, 0);
        let bad = LambdaMatrix::from_int_rows(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert!(matches!(PresentedModule::from_seifert(&bad), Err(ModuleError::NotSeifert(_))));
        let free = PresentedModule::new(LambdaMatrix::zeros(2, 1)).unwrap();
        assert_eq!(free.free_rank(), 2);
        assert!(matches!(free.q_basis(), Err(ModuleError::NotTorsion(2))));
    }

    #[test]
    fn genus_one_cyclic() {
        let a = LambdaMatrix::from_int_rows(&[vec![0, 2], vec![1, 2]]).unwrap();
        let m = PresentedModule::from_seifert(&a).unwrap();
        assert_eq!(m.generating_rank(), 1);
        assert!(m.order().associate_of(&(p("2*t - 1") * p("t - 2"))));
    }

    #[test]
    fn sums_and_ranks() {
        let m = nine46();
        let mut s = PresentedModule::trivial();
        for n in 1..=3 {
            s = s.direct_sum(&m).unwrap();
            assert_eq!(s.generating_rank(), n);
        }
        assert!(m.direct_sum(&PresentedModule::trivial()).unwrap().isomorphic(&m));
        let q = PresentedModule::cyclic(&p("t^2 - 3*t + 1")).unwrap();
        assert_eq!(q.direct_sum(&q).unwrap().generating_rank(), 2);
        assert_eq!(m.direct_sum(&q).unwrap().order(), &(m.order() * q.order()));
    }

    #[test]
    fn element_equality() {
        let c = PresentedModule::cyclic(&p("t - 2")).unwrap();
        let one = c.generator(0);
        assert!(c.element_equal(&one.mul_poly(&p("t")), &one.scale(&Rational::from_integer(2.into()))));
        let m = nine46();
        let b1 = m.generator(0);
        assert!(!m.is_zero(&b1));
        assert!(m.element_equal(&b1, &b1));
        // b_1 generates; the relations force (t-2)(2t-1) b_1 = 0
        assert!(m.is_zero(&b1.mul_poly(&(p("t - 2") * p("2*t - 1")))));
        assert!(!m.is_zero(&b1.mul_poly(&p("t - 2"))));
    }

    #[test]
    fn submodules() {
        let c = PresentedModule::cyclic(&(p("t - 2") * p("2*t - 1"))).unwrap();
        let sub = c.submodule_presentation(&[c.generator(0).mul_poly(&p("2*t - 1"))]).unwrap();
        assert!(sub.order().associate_of(&p("t - 2")));
        let all = c.submodule_presentation(&[c.generator(0)]).unwrap();
        assert!(all.isomorphic(&c));
        let none = c.submodule_presentation(&[]).unwrap();
        assert_eq!(none.order(), &LaurentPoly::one());
        assert_eq!(none.generators(), 0);
    }

    #[test]
    fn maps_image_kernel() {
        // multiplication by t - 2 on Λ/((t-2)(2t-1)) has image and kernel of order 2t-1 and t-2
        let m = PresentedModule::cyclic(&p("2*t^2 - 5*t + 2")).unwrap();
        let f = ModuleMap::new(m.clone(), m.clone(), LambdaMatrix::from_rows(vec![vec![p("t - 2")]]).unwrap()).unwrap();
        assert_eq!(f.domain().generating_rank(), 1);
        let n = nine46();
        let two = LambdaMatrix::identity(2).scale(&p("t - 2"));
        let g = ModuleMap::new(n.clone(), n.clone(), two).unwrap();
        assert!(g.kernel().unwrap().order().associate_of(&p("t - 2")));
        assert!(f.image().unwrap().order().associate_of(&p("2*t - 1")));
        assert!(f.kernel().unwrap().order().associate_of(&p("t - 2")));
        let c = PresentedModule::cyclic(&p("t - 2")).unwrap();
        assert_eq!(ModuleMap::new(c.clone(), m.clone(), LambdaMatrix::identity(1)), Err(ModuleError::NotWellDefined));
        assert!(ModuleMap::new(c, m, LambdaMatrix::from_rows(vec![vec![p("2*t - 1")]]).unwrap()).is_ok());
    }

    #[test]
    fn q_basis_companion() {
        let m = PresentedModule::cyclic(&p("t - 3 + t^-1")).unwrap();
        let qb = m.q_basis().unwrap();
        assert_eq!(qb.dim, 2);
        let r = |n: i64| Rational::from_integer(n.into());
        assert_eq!(qb.t_matrix, vec![vec![r(0), r(-1)], vec![r(1), r(3)]]);

        let n = nine46();
        let qb = n.q_basis().unwrap();
        assert_eq!(qb.dim, 2);
        for k in 0..qb.dim {
            let e = qb.basis_element(k);
            let mut c = vec![Rational::zero(); qb.dim];
            c[k] = Rational::one();
            assert_eq!(qb.coords(&e), c);
            let te = e.mul_poly(&LaurentPoly::t());
            let tc: Vec<Rational> = (0..qb.dim).map(|i| qb.t_matrix[i][k].clone()).collect();
            assert_eq!(qb.coords(&te), tc);
            assert!(n.element_equal(&qb.element(&qb.coords(&te)), &te));
        }
    }
}
