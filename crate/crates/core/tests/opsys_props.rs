mod common;

use proptest::prelude::*;
use qrigid::opsys::{adjoin_unit, conjugate_system, reflexive_complement, transpose_system};
use qrigid::{GaussRational, OperatorSystem, Scalar, TolerancePolicy, C64};

fn check_complement<S: Scalar>(n: usize, d: usize, seed: u64) -> Result<(), TestCaseError> {
    let tol = TolerancePolicy::default();
    let t = common::tuple::<S>(n, d, seed);
    let (s, warn) = adjoin_unit(&t, &tol).unwrap();
    prop_assert!(warn.is_none());
    let c = reflexive_complement(&s, &tol);
    prop_assert!(c.contains_unit());
    prop_assert!(c.is_self_adjoint(&tol));
    prop_assert_eq!(s.dim(&tol) + c.dim(&tol), n * n + 1);
    let cc = reflexive_complement(&c, &tol);
    prop_assert!(cc.same_span(&s, &tol));
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn complement_identities_float(n in 2usize..7, frac in 0.0f64..1.0, seed in any::<u64>()) {
        let d = 1 + ((n * n - 2) as f64 * frac) as usize;
        check_complement::<C64>(n, d.min(n * n - 2), seed)?;
    }

    #[test]
    fn complement_identities_exact(n in 2usize..4, frac in 0.0f64..1.0, seed in any::<u64>()) {
        let d = 1 + ((n * n - 2) as f64 * frac) as usize;
        check_complement::<GaussRational>(n, d.min(n * n - 2), seed)?;
    }

    #[test]
    fn conjugation_and_transpose_agree_on_hermitian_systems(n in 2usize..5, d in 1usize..4, seed in any::<u64>()) {
        let tol = TolerancePolicy::default();
        let t = common::tuple::<GaussRational>(n, d, seed);
        let s = OperatorSystem::unital(&t, &tol).unwrap();
        prop_assert!(conjugate_system(&s).same_span(&transpose_system(&s), &tol));
    }
}

#[test]
fn trivial_and_full_are_complements() {
    let tol = TolerancePolicy::default();
    for n in 2..5 {
        let triv = OperatorSystem::<GaussRational>::trivial(n);
        let full = OperatorSystem::<GaussRational>::full(n);
        assert!(reflexive_complement(&triv, &tol).same_span(&full, &tol));
        assert!(reflexive_complement(&full, &tol).same_span(&triv, &tol));
    }
}
