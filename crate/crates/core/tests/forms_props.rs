//! Cartan calculus identities on random super forms.

use proptest::prelude::*;
use supertransport::forms::{self, ext_d, interior, lie_deriv, vf_bracket, Chart, SuperForm, VectorField};
use supertransport::poly::Ring;
use supertransport::random::RandomSource;
use supertransport::scalar::Rational;

type F = SuperForm<Rational>;

fn chart() -> Chart {
    Chart::standard(2, 2, 2).unwrap()
}

fn sign(p: u32) -> Rational {
    if p & 1 == 1 {
        Rational::from_integer((-1).into())
    } else {
        Rational::from_integer(1.into())
    }
}

fn graded_comm_ops(a: &F, b: &F, s: u32) -> F {
    a - &b.scale(&sign(s))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn d_squared_vanishes(seed in any::<u64>(), p in 0u32..3) {
        let ch = chart();
        let mut r = RandomSource::new(seed);
        let w: F = r.form(&ch, p, None);
        prop_assert!(ext_d(&ch, &ext_d(&ch, &w)).is_zero());
    }

    #[test]
    fn d_is_a_derivation(seed in any::<u64>(), p in 0u32..3, q in 0u32..2) {
        let ch = chart();
        let mut r = RandomSource::new(seed);
        let a: F = r.form(&ch, p, None);
        let b: F = r.form(&ch, q, None);
        let lhs = ext_d(&ch, &(&a * &b));
        let rhs = &(&ext_d(&ch, &a) * &b) + &(&a * &ext_d(&ch, &b)).scale(&sign(p));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn interior_is_a_derivation(seed in any::<u64>(), p in 0u32..3, q in 0u32..3, px in 0u8..2, pa in 0u8..2) {
        let ch = chart();
        let mut r = RandomSource::new(seed);
        let x = r.vector_field::<Rational>(&ch, px);
        let a: F = r.form(&ch, p, Some(pa));
        let b: F = r.form(&ch, q, None);
        let lhs = interior(&ch, &x, &(&a * &b));
        let s = sign(p + (px as u32) * (pa as u32));
        let rhs = &(&interior(&ch, &x, &a) * &b) + &(&a * &interior(&ch, &x, &b)).scale(&s);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn lie_derivative_commutes_with_d(seed in any::<u64>(), p in 0u32..3, px in 0u8..2) {
        let ch = chart();
        let mut r = RandomSource::new(seed);
        let x = r.vector_field::<Rational>(&ch, px);
        let w: F = r.form(&ch, p, None);
        prop_assert_eq!(ext_d(&ch, &lie_deriv(&ch, &x, &w)), lie_deriv(&ch, &x, &ext_d(&ch, &w)));
    }

    #[test]
    fn lie_interior_commutator(seed in any::<u64>(), p in 1u32..3, px in 0u8..2, py in 0u8..2) {
        let ch = chart();
        let mut r = RandomSource::new(seed);
        let x = r.vector_field::<Rational>(&ch, px);
        let y = r.vector_field::<Rational>(&ch, py);
        let w: F = r.form(&ch, p, None);
        let xy = vf_bracket(&ch, &x, &y).unwrap();
        let lhs = graded_comm_ops(
            &lie_deriv(&ch, &x, &interior(&ch, &y, &w)),
            &interior(&ch, &y, &lie_deriv(&ch, &x, &w)),
            px as u32 * py as u32,
        );
        prop_assert_eq!(lhs, interior(&ch, &xy, &w));
    }

    #[test]
    fn lie_derivatives_commute_like_fields(seed in any::<u64>(), p in 0u32..2, px in 0u8..2, py in 0u8..2) {
        let ch = chart();
        let mut r = RandomSource::new(seed);
        let x = r.vector_field::<Rational>(&ch, px);
        let y = r.vector_field::<Rational>(&ch, py);
        let w: F = r.form(&ch, p, None);
        let xy = vf_bracket(&ch, &x, &y).unwrap();
        let lhs = graded_comm_ops(
            &lie_deriv(&ch, &x, &lie_deriv(&ch, &y, &w)),
            &lie_deriv(&ch, &y, &lie_deriv(&ch, &x, &w)),
            px as u32 * py as u32,
        );
        prop_assert_eq!(lhs, lie_deriv(&ch, &xy, &w));
    }

    #[test]
    fn vector_field_jacobi(seed in any::<u64>(), px in 0u8..2, py in 0u8..2, pz in 0u8..2) {
        let ch = chart();
        let mut r = RandomSource::new(seed);
        let x = r.vector_field::<Rational>(&ch, px);
        let y = r.vector_field::<Rational>(&ch, py);
        let z = r.vector_field::<Rational>(&ch, pz);
        let b = |a: &VectorField<Rational>, c: &VectorField<Rational>| vf_bracket(&ch, a, c).unwrap();
        let t1 = b(&x, &b(&y, &z)).scale(&sign(px as u32 * pz as u32));
        let t2 = b(&y, &b(&z, &x)).scale(&sign(py as u32 * px as u32));
        let t3 = b(&z, &b(&x, &y)).scale(&sign(pz as u32 * py as u32));
        prop_assert!(t1.add(&t2).add(&t3).is_zero());
    }

    #[test]
    fn dual_coframe_pairs_to_identity(seed in any::<u64>()) {
        let ch = Chart::standard(2, 2, 1).unwrap();
        let mut r = RandomSource::new(seed);
        r.max_xdeg = 0;
        // unipotent perturbation of the coordinate frame keeps it invertible
        let frame: Vec<VectorField<Rational>> = (0..ch.dim())
            .map(|i| {
                let mut v = VectorField::coord(&ch, i);
                let p = ch.coord_parity(i);
                for j in 0..ch.dim() {
                    let c = r.superfield::<Rational>(&ch, Some((p + ch.coord_parity(j)) & 1));
                    v.comps[j] = &v.comps[j] + &c.filter(|m| m.g != 0);
                }
                v
            })
            .collect();
        let co = forms::dual_coframe(&ch, &frame, None).unwrap();
        for (i, x) in frame.iter().enumerate() {
            for (j, w) in co.iter().enumerate() {
                let v = forms::pairing(&ch, x, w);
                let want = if i == j { Ring::one() } else { Ring::zero() };
                prop_assert_eq!(v, want);
            }
        }
        let back = forms::dual_frame(&ch, &co, None).unwrap();
        prop_assert_eq!(back, frame);
    }
}
