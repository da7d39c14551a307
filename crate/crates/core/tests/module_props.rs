mod common;

use common::*;
use eqknot::linalg::LambdaMatrix;
use eqknot::module::{ModuleElement, ModuleMap, PresentedModule};
use proptest::prelude::*;

/// Presentations with at most three generators and three relations.
fn presentation() -> impl Strategy<Value = PresentedModule> {
    matrix(3, 3).prop_map(|r| PresentedModule::new(r).unwrap())
}

fn torsion() -> impl Strategy<Value = PresentedModule> {
    square(3).prop_filter_map("torsion", |r| PresentedModule::new_torsion(r).ok())
}

/// `F` together with a codomain whose relations include `F R1`, so `F` is well defined.
fn module_map() -> impl Strategy<Value = ModuleMap> {
    (matrix(3, 3), matrix(3, 2), prop::collection::vec(entry(), 9)).prop_map(|(r1, r2, e)| {
        let (n, m) = (r1.rows(), r2.rows());
        let f = LambdaMatrix::new(m, n, e[..m * n].to_vec()).unwrap();
        let codomain = PresentedModule::new(r2.hstack(&(&f * &r1)).unwrap()).unwrap();
        ModuleMap::new(PresentedModule::new(r1).unwrap(), codomain, f).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn generating_rank_along_maps(f in module_map()) {
        let im = f.image().unwrap().generating_rank();
        let ker = f.kernel().unwrap().generating_rank();
        let a = f.domain().generating_rank();
        prop_assert!(im <= a);
        prop_assert!(a <= im + ker);
        prop_assert!(im <= f.codomain().generating_rank());
    }

    #[test]
    fn submodules_need_fewer_generators(b in presentation(), coeffs in prop::collection::vec(laurent(2), 9)) {
        let n = b.generators();
        let gens: Vec<ModuleElement> = coeffs.chunks(3).map(|c| ModuleElement::new(c[..n].to_vec())).collect();
        let a = b.submodule_presentation(&gens).unwrap();
        prop_assert!(a.generating_rank() <= b.generating_rank());
    }

    #[test]
    fn orders_multiply(m1 in torsion(), m2 in torsion()) {
        let s = m1.direct_sum(&m2).unwrap();
        prop_assert!(s.order().associate_of(&(m1.order() * m2.order())));
    }

    #[test]
    fn q_basis_matches_order(m in torsion()) {
        let b = m.q_basis().unwrap();
        prop_assert_eq!(b.dim, m.order().span().unwrap());
        let t = LambdaMatrix::from_fn(b.dim, b.dim, |i, j| eqknot::LaurentPoly::constant(b.t_matrix[i][j].clone()));
        prop_assert!(b.dim == 0 || !eqknot::linalg::det(&t).unwrap().is_zero());
    }
}
