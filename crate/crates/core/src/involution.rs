//! Semilinear self-maps of presented modules, modelling inversion-induced maps.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blanchfield::GramPairing;
use crate::linalg::LambdaMatrix;
use crate::module::{ModuleElement, ModuleError, PresentedModule};
use crate::ring::LaurentPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvolutionError {
    #[error("matrix is {rows}x{cols} but the module has {generators} generators")]
    Shape { rows: usize, cols: usize, generators: usize },
    #[error("module is not a direct sum of two equal-size blocks")]
    NotEvenSplit,
    #[error("cannot combine a semilinear map with a linear one")]
    TwistMismatch,
    #[error(transparent)]
    Module(#[from] ModuleError),
}

/// How coefficients are treated before the matrix is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Twist {
    /// `x -> M conj(x)`, the semilinear case.
    Conjugate,
    /// `x -> M x`; only useful to model maps that fail semilinearity.
    Identity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemilinearMap {
    module: Arc<PresentedModule>,
    matrix: LambdaMatrix,
    twist: Twist,
}

impl SemilinearMap {
    /// `x -> matrix * conj(x)`; column `j` is the image of generator `j`.
    pub fn new(module: Arc<PresentedModule>, matrix: LambdaMatrix) -> Result<Self, InvolutionError> {
        Self::with_twist(module, matrix, Twist::Conjugate)
    }

    pub fn with_twist(module: Arc<PresentedModule>, matrix: LambdaMatrix, twist: Twist) -> Result<Self, InvolutionError> {
        let n = module.generators();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(InvolutionError::Shape { rows: matrix.rows(), cols: matrix.cols(), generators: n });
        }
        Ok(SemilinearMap { module, matrix, twist })
    }

    /// The map sending generator `j` to `images[j]`, extended semilinearly.
    pub fn from_images(module: Arc<PresentedModule>, images: &[ModuleElement]) -> Result<Self, InvolutionError> {
        let n = module.generators();
        if images.len() != n {
            return Err(InvolutionError::Shape { rows: n, cols: images.len(), generators: n });
        }
        for x in images {
            module.check_element(x)?;
        }
        let cols: Vec<Vec<LaurentPoly>> = images.iter().map(|x| x.coeffs().to_vec()).collect();
        let matrix = LambdaMatrix::from_columns(n, &cols).expect("checked lengths");
        Self::new(module, matrix)
    }

    /// `q(t) -> q(t^-1)` coefficientwise.
    pub fn conjugation(module: Arc<PresentedModule>) -> Self {
        let n = module.generators();
        SemilinearMap { module, matrix: LambdaMatrix::identity(n), twist: Twist::Conjugate }
    }

    /// `q(t) -> -q(t^-1)` coefficientwise.
    pub fn negated_conjugation(module: Arc<PresentedModule>) -> Self {
        let n = module.generators();
        SemilinearMap { module, matrix: -&LambdaMatrix::identity(n), twist: Twist::Conjugate }
    }

    pub fn module(&self) -> &Arc<PresentedModule> {
        &self.module
    }

    pub fn matrix(&self) -> &LambdaMatrix {
        &self.matrix
    }

    pub fn twist(&self) -> Twist {
        self.twist
    }

    fn apply_vec(&self, v: &[LaurentPoly]) -> Vec<LaurentPoly> {
        match self.twist {
            Twist::Conjugate => self.matrix.mul_vec(&v.iter().map(LaurentPoly::conj).collect::<Vec<_>>()),
            Twist::Identity => self.matrix.mul_vec(v),
        }
    }

    pub fn apply(&self, x: &ModuleElement) -> Result<ModuleElement, InvolutionError> {
        self.module.check_element(x)?;
        Ok(ModuleElement::new(self.apply_vec(x.coeffs())))
    }

    /// Relations map into the relation span, so the map descends to the module.
    pub fn check_well_defined(&self) -> bool {
        self.module.relations().columns().iter().all(|r| self.module.is_zero(&ModuleElement::new(self.apply_vec(r))))
    }

    /// `f(t x) = t^-1 f(x)` on generators.
    pub fn check_semilinear(&self) -> bool {
        let t = LaurentPoly::t();
        let tinv = LaurentPoly::monomial(num_traits::One::one(), -1);
        (0..self.module.generators()).all(|j| {
            let g = self.module.generator(j);
            let lhs = ModuleElement::new(self.apply_vec(g.mul_poly(&t).coeffs()));
            let rhs = ModuleElement::new(self.apply_vec(g.coeffs())).mul_poly(&tinv);
            self.module.element_equal(&lhs, &rhs)
        })
    }

    /// `f(f(g)) = g` on generators.
    pub fn check_squares_to_identity(&self) -> bool {
        (0..self.module.generators()).all(|j| {
            let g = self.module.generator(j);
            let ff = ModuleElement::new(self.apply_vec(&self.apply_vec(g.coeffs())));
            self.module.element_equal(&ff, &g)
        })
    }

    /// Well-defined and squares to the identity modulo relations.
    pub fn verify_involution(&self) -> bool {
        self.check_well_defined() && self.check_squares_to_identity()
    }

    /// `Bl(g_i, g_j) = conj Bl(f g_i, f g_j)` on all generator pairs.
    pub fn verify_anti_isometry(&self, b: &GramPairing) -> bool {
        let n = self.module.generators();
        if b.size() != n {
            return false;
        }
        let images: Vec<ModuleElement> = (0..n).map(|j| ModuleElement::new(self.apply_vec(self.module.generator(j).coeffs()))).collect();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let lhs = &b.gram()[i][j];
                let rhs = b.pair(&images[i], &images[j]).expect("sizes match").conj();
                *lhs == rhs
            })
        })
    }

    /// Block-diagonal map on the direct-sum module.
    pub fn direct_sum(&self, other: &Self) -> Result<Self, InvolutionError> {
        let module = Arc::new(self.module.direct_sum(&other.module)?);
        self.direct_sum_on(other, module)
    }

    pub(crate) fn direct_sum_on(&self, other: &Self, module: Arc<PresentedModule>) -> Result<Self, InvolutionError> {
        if self.twist != other.twist {
            return Err(InvolutionError::TwistMismatch);
        }
        Self::with_twist(module, self.matrix.block_diag(&other.matrix), self.twist)
    }
}

/// Free-function form of [`SemilinearMap::direct_sum`].
pub fn direct_sum_involution(a: &SemilinearMap, b: &SemilinearMap) -> Result<SemilinearMap, InvolutionError> {
    a.direct_sum(b)
}

/// `(x, y) -> (conj y, conj x)` on a module whose relations split into two
/// equal-size blocks. Whether this descends to the module depends on the
/// blocks being conjugate; see [`SemilinearMap::check_well_defined`].
pub fn swap_involution(module: Arc<PresentedModule>) -> Result<SemilinearMap, InvolutionError> {
    let n = module.generators();
    if !n.is_multiple_of(2) {
        return Err(InvolutionError::NotEvenSplit);
    }
    let h = n / 2;
    let rel = module.relations();
    let split = (0..rel.cols()).all(|c| {
        let top = (0..h).any(|i| !rel.get(i, c).is_zero());
        let bottom = (h..n).any(|i| !rel.get(i, c).is_zero());
        !(top && bottom)
    });
    if !split {
        return Err(InvolutionError::NotEvenSplit);
    }
    let matrix = LambdaMatrix::from_fn(n, n, |i, j| if (i + h) % n == j { LaurentPoly::one() } else { LaurentPoly::zero() });
    SemilinearMap::new(module, matrix)
}
