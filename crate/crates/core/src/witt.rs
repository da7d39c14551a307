//! Abstract equivariant Blanchfield triples `(H, Bl, τ)`, their sums and
//! inverses, and metabolizer certificates.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::blanchfield::{BlanchfieldError, GramPairing};
use crate::involution::{InvolutionError, SemilinearMap};
use crate::linalg::{snf, LambdaMatrix, LinalgError};
use crate::module::{ModuleElement, ModuleError, PresentedModule};
use crate::ring::{normalize_alexander, LaurentPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WittError {
    #[error("pairing and involution live on different modules")]
    ModuleMismatch,
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Blanchfield(#[from] BlanchfieldError),
    #[error(transparent)]
    Involution(#[from] InvolutionError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivariantTriple {
    module: Arc<PresentedModule>,
    pairing: GramPairing,
    involution: SemilinearMap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Torsion,
    Hermitian,
    RelationVanishing,
    Nonsingular,
    WellDefinedInvolution,
    Semilinear,
    Involutive,
    AntiIsometric,
    OneMinusTInvertible,
}

impl Axiom {
    pub const ALL: [Axiom; 9] = [
        Axiom::Torsion,
        Axiom::Hermitian,
        Axiom::RelationVanishing,
        Axiom::Nonsingular,
        Axiom::WellDefinedInvolution,
        Axiom::Semilinear,
        Axiom::Involutive,
        Axiom::AntiIsometric,
        Axiom::OneMinusTInvertible,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::Torsion => "torsion",
            Axiom::Hermitian => "hermitian",
            Axiom::RelationVanishing => "relation_vanishing",
            Axiom::Nonsingular => "nonsingular",
            Axiom::WellDefinedInvolution => "well_defined_involution",
            Axiom::Semilinear => "semilinear",
            Axiom::Involutive => "involutive",
            Axiom::AntiIsometric => "anti_isometric",
            Axiom::OneMinusTInvertible => "one_minus_t_invertible",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub axiom: Axiom,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn passed(&self, axiom: Axiom) -> bool {
        self.checks.iter().any(|c| c.axiom == axiom && c.passed)
    }

    pub fn failures(&self) -> Vec<Axiom> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.axiom).collect()
    }
}

/// Generators of a submodule, as elements of the ambient module.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SubmoduleWitness {
    pub generators: Vec<ModuleElement>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MetabolizerReport {
    /// The pairing vanishes on the submodule.
    pub isotropic: bool,
    /// `|P| conj|P|` agrees with `|H|` up to a unit.
    pub order_identity: bool,
    /// `τ(P) = P`.
    pub tau_invariant: bool,
    pub submodule_order: LaurentPoly,
    pub module_order: LaurentPoly,
}

impl MetabolizerReport {
    pub fn passed(&self) -> bool {
        self.isotropic && self.order_identity && self.tau_invariant
    }
}

impl EquivariantTriple {
    /// Pairs a Gram pairing with an involution on an equal module.
    pub fn new(pairing: GramPairing, involution: SemilinearMap) -> Result<Self, WittError> {
        let module = involution.module().clone();
        if !Arc::ptr_eq(pairing.module(), &module) && **pairing.module() != *module {
            return Err(WittError::ModuleMismatch);
        }
        let pairing = pairing.with_module(module.clone());
        Ok(EquivariantTriple { module, pairing, involution })
    }

    pub fn trivial() -> Self {
        let module = Arc::new(PresentedModule::trivial());
        let pairing = GramPairing::new(module.clone(), Vec::new()).expect("empty gram");
        let involution = SemilinearMap::conjugation(module.clone());
        EquivariantTriple { module, pairing, involution }
    }

    pub fn module(&self) -> &Arc<PresentedModule> {
        &self.module
    }

    pub fn pairing(&self) -> &GramPairing {
        &self.pairing
    }

    pub fn involution(&self) -> &SemilinearMap {
        &self.involution
    }

    /// Runs every structural check; failures are report entries, not errors.
    pub fn validate(&self) -> ValidationReport {
        let torsion = self.module.is_torsion();
        let checks = Axiom::ALL
            .iter()
            .map(|&axiom| {
                let passed = match axiom {
                    Axiom::Torsion => torsion,
                    Axiom::Hermitian => self.pairing.check_hermitian(),
                    Axiom::RelationVanishing => self.pairing.check_well_defined(),
                    Axiom::Nonsingular => torsion && self.pairing.check_nonsingular().unwrap_or(false),
                    Axiom::WellDefinedInvolution => self.involution.check_well_defined(),
                    Axiom::Semilinear => self.involution.check_semilinear(),
                    Axiom::Involutive => self.involution.check_squares_to_identity(),
                    Axiom::AntiIsometric => self.involution.verify_anti_isometry(&self.pairing),
                    Axiom::OneMinusTInvertible => {
                        torsion && self.module.order().eval(&num_traits::One::one()).is_some_and(|v| v != num_traits::Zero::zero())
                    }
                };
                Check { axiom, passed }
            })
            .collect();
        ValidationReport { checks }
    }

    /// `|H| = conj|H|` up to a unit.
    pub fn order_is_symmetric(&self) -> bool {
        let o = self.module.order();
        o.associate_of(&o.conj())
    }

    /// The symmetric-normalized order of `H`.
    pub fn order(&self) -> LaurentPoly {
        normalize_alexander(self.module.order())
    }

    /// Block sum `(H1 ⊕ H2, Bl1 ⊕ Bl2, τ1 ⊕ τ2)`.
    pub fn sum(&self, other: &Self) -> Result<Self, WittError> {
        let module = Arc::new(self.module.direct_sum(&other.module)?);
        let pairing = self.pairing.direct_sum_on(&other.pairing, module.clone());
        let involution = self.involution.direct_sum_on(&other.involution, module.clone())?;
        Ok(EquivariantTriple { module, pairing, involution })
    }

    /// `(H, -Bl, τ)`.
    pub fn negate(&self) -> Self {
        EquivariantTriple { module: self.module.clone(), pairing: self.pairing.negate(), involution: self.involution.clone() }
    }

    /// Checks the three metabolizer conditions for the submodule generated by `p`.
    pub fn is_metabolizer(&self, p: &SubmoduleWitness) -> Result<MetabolizerReport, WittError> {
        for g in &p.generators {
            self.module.check_element(g)?;
        }
        let gens = &p.generators;
        let isotropic = gens.iter().all(|x| gens.iter().all(|y| self.pairing.pair(x, y).expect("checked").is_zero()));

        let sub = self.module.submodule_presentation(gens)?;
        let po = sub.order().clone();
        let ho = self.module.order().clone();
        let order_identity = !po.is_zero() && (&po * &po.conj()).associate_of(&ho);

        let n = self.module.generators();
        let cols = |xs: &[ModuleElement]| {
            let c: Vec<Vec<LaurentPoly>> = xs.iter().map(|x| x.coeffs().to_vec()).collect();
            LambdaMatrix::from_columns(n, &c).expect("checked lengths")
        };
        let images: Vec<ModuleElement> = gens.iter().map(|g| self.involution.apply(g).expect("checked")).collect();
        let p_span = snf(&cols(gens).hstack(self.module.relations())?)?;
        let tau_p_span = snf(&cols(&images).hstack(self.module.relations())?)?;
        let tau_invariant = images.iter().all(|x| p_span.solve(x.coeffs()).is_some())
            && gens.iter().all(|g| tau_p_span.solve(g.coeffs()).is_some());

        Ok(MetabolizerReport {
            isotropic,
            order_identity,
            tau_invariant,
            submodule_order: normalize_alexander(&po),
            module_order: normalize_alexander(&ho),
        })
    }
}

/// Free-function form of [`EquivariantTriple::sum`].
pub fn sum(a: &EquivariantTriple, b: &EquivariantTriple) -> Result<EquivariantTriple, WittError> {
    a.sum(b)
}

/// Free-function form of [`EquivariantTriple::negate`].
pub fn negate(a: &EquivariantTriple) -> EquivariantTriple {
    a.negate()
}

/// The diagonal `{(x, x)}` inside `T ⊕ -T`, generated by `(g_i, g_i)`.
pub fn diagonal_metabolizer(t: &EquivariantTriple) -> SubmoduleWitness {
    let n = t.module.generators();
    let generators = (0..n)
        .map(|i| {
            let g = ModuleElement::generator(n, i);
            g.concat(&g)
        })
        .collect();
    SubmoduleWitness { generators }
}
