//! Super translation group, Maurer–Cartan forms and connection identities.

use std::sync::Arc;

use proptest::prelude::*;
use supertransport::clifford::{GammaBasis, Representation};
use supertransport::forms::{self, bracket_wedge, curvature, Chart, LieValuedForm, SuperForm, VectorField};
use supertransport::poly::{Poly, Ring};
use supertransport::random::RandomSource;
use supertransport::scalar::{GaussRational, Scalar};
use supertransport::superfield::{self, Superfield};
use supertransport::superlie::{self, SuperLieAlgebra};

type S = GaussRational;
type F = SuperForm<S>;

fn gb() -> GammaBasis<S> {
    GammaBasis::build(Representation::Standard).unwrap()
}

fn t() -> Arc<SuperLieAlgebra<S>> {
    Arc::new(superlie::t134(&gb()).unwrap())
}

fn coords(ch: &Chart) -> Vec<Superfield<S>> {
    (0..ch.dim()).map(|j| ch.coord(j)).collect()
}

fn sgn(p: u8) -> S {
    if p & 1 == 1 {
        S::from_i64(-1)
    } else {
        S::one()
    }
}

#[test]
fn left_invariant_fields_differentiate_the_group_law() {
    let g = gb();
    let ch = superlie::t_chart(&["e0", "e1", "e2", "e3"]).unwrap();
    let z = coords(&ch);
    let eps: Vec<Superfield<S>> = (0..4).map(|a| ch.sigma(a)).collect();
    let zero = vec![Poly::zero(); 4];
    let frame = superlie::left_invariant_frame_t(&g, &ch);
    let right = superlie::right_invariant_frame_t(&g, &ch);
    let (hx, hth) = superlie::group_mul_t(&g, (&z[..4], &z[4..]), (&zero, &eps)).unwrap();
    let (kx, kth) = superlie::group_mul_t(&g, (&zero, &eps), (&z[..4], &z[4..])).unwrap();
    let sigma_free = |f: &Superfield<S>| f.filter(|m| m.g & ch.param_mask() == 0);
    for a in 0..4 {
        let e = ch.param(a);
        for (j, (h, k)) in hx.iter().chain(&hth).zip(kx.iter().chain(&kth)).enumerate() {
            let left = sigma_free(&superfield::partial_gen(h, e));
            assert_eq!(left, frame[4 + a].comps[j], "left field Q{a} on coordinate {j}");
            let r = sigma_free(&superfield::partial_gen(k, e));
            assert_eq!(r, right[4 + a].comps[j], "right field Q{a} on coordinate {j}");
        }
    }
}

#[test]
fn group_law_is_associative_with_inverse() {
    let g = gb();
    let mut r = RandomSource::new(7);
    let mask = 0xffff;
    for _ in 0..20 {
        let mut el = || -> (Vec<_>, Vec<_>) {
            ((0..4).map(|_| r.grassmann::<S>(mask, Some(0))).collect(), (0..4).map(|_| r.grassmann::<S>(mask, Some(1))).collect())
        };
        let (a, b, c) = (el(), el(), el());
        let ab = superlie::group_mul_t(&g, (&a.0, &a.1), (&b.0, &b.1)).unwrap();
        let ab_c = superlie::group_mul_t(&g, (&ab.0, &ab.1), (&c.0, &c.1)).unwrap();
        let bc = superlie::group_mul_t(&g, (&b.0, &b.1), (&c.0, &c.1)).unwrap();
        let a_bc = superlie::group_mul_t(&g, (&a.0, &a.1), (&bc.0, &bc.1)).unwrap();
        assert_eq!(ab_c, a_bc);
        let inv: (Vec<_>, Vec<_>) = (a.0.iter().map(|x| x.neg()).collect(), a.1.iter().map(|x| x.neg()).collect());
        let e = superlie::group_mul_t(&g, (&a.0, &a.1), (&inv.0, &inv.1)).unwrap();
        assert!(e.0.iter().chain(&e.1).all(Ring::is_zero));
    }
}

#[test]
fn frame_brackets_match_structure_constants() {
    let g = gb();
    let alg = t();
    let ch = superlie::t_chart(&[]).unwrap();
    let l = superlie::left_invariant_frame_t(&g, &ch);
    let r = superlie::right_invariant_frame_t(&g, &ch);
    for i in 0..8 {
        for j in 0..8 {
            let mut want_l = VectorField::zero(&ch);
            for (k, c) in &alg.f[i][j] {
                want_l = want_l.add(&l[*k].scale(c));
            }
            assert_eq!(forms::vf_bracket(&ch, &l[i], &l[j]).unwrap(), want_l);
            let mut want_r = VectorField::zero(&ch);
            for (k, c) in &alg.f[i][j] {
                want_r = want_r.sub(&r[*k].scale(c));
            }
            assert_eq!(forms::vf_bracket(&ch, &r[i], &r[j]).unwrap(), want_r);
            assert!(forms::vf_bracket(&ch, &l[i], &r[j]).unwrap().is_zero());
        }
    }
}

#[test]
fn maurer_cartan_form_is_flat_and_a_connection() {
    let g = gb();
    let alg = t();
    let ch = superlie::t_chart(&[]).unwrap();
    let frame = superlie::left_invariant_frame_t(&g, &ch);
    let mc = superlie::maurer_cartan_from_frame(alg.clone(), &ch, &frame).unwrap();
    let series = superlie::maurer_cartan_exp(alg.clone(), &ch, &coords(&ch), 4, 8).unwrap();
    assert_eq!(mc.comps, series.comps);
    assert!(curvature(&ch, &mc).unwrap().is_zero());
    let c1 = forms::curvature_with_factor(&ch, &mc, &S::one()).unwrap();
    assert!(!c1.is_zero());
    let rep = forms::verify_connection_axioms(&ch, &mc, &frame).unwrap();
    assert_eq!((rep.axiom_i, rep.axiom_ii), (0.0, 0.0));
}

#[test]
fn osp_maurer_cartan_matrix_matches_series() {
    let g = gb();
    let alg = Arc::new(superlie::osp14(&g, &S::from_i64(2)).unwrap());
    let ch = Chart::standard(1, 1, 0).unwrap();
    // g = exp(x P0 + θ Q1)
    let mut z = vec![Poly::zero(); alg.dim()];
    z[0] = ch.coord(0);
    z[11] = ch.coord(1);
    let jet = 3;
    let series = superlie::maurer_cartan_exp(alg.clone(), &ch, &z, jet, 12).unwrap();
    assert!(forms::curvature(&ch, &series).unwrap().map(|w| forms::truncate_form(w, jet - 1)).is_zero());
    let mats = alg.realization.clone().unwrap();
    // envelope M(a ⊗ X)_kl = (−1)^{|a||k|} a X_kl
    let mut xm = supertransport::superlinalg::SuperMatrix::<Superfield<S>>::zeros(1, 4);
    for (i, zi) in z.iter().enumerate() {
        if zi.is_zero() {
            continue;
        }
        let pa = alg.parity[i];
        let m = supertransport::superlinalg::SuperMatrix::from_fn(1, 4, |k, l| {
            let e = zi.scale(mats[i].get(k, l));
            if pa & (k >= 1) as u8 == 1 {
                e.neg()
            } else {
                e
            }
        });
        xm = xm.add(&m).unwrap();
    }
    let gm = supertransport::superlinalg::mexp(&xm, 8).unwrap().map(|e| superfield::truncate(e, jet + 2));
    let mm = superlie::maurer_cartan_matrix(alg.clone(), &ch, &gm, jet).unwrap();
    for (a, b) in mm.comps.iter().zip(&series.comps) {
        assert_eq!(forms::truncate_form(a, jet - 1), forms::truncate_form(b, jet - 1));
    }
}

fn random_lie_one_form(r: &mut RandomSource, ch: &Chart, alg: &SuperLieAlgebra<S>) -> LieValuedForm<S> {
    let comps = alg.parity.iter().map(|&p| r.form::<S>(ch, 1, Some(p))).collect();
    LieValuedForm { alg: Arc::new(alg.clone()), comps }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bianchi_identity(seed in any::<u64>()) {
        let alg = superlie::iso134(&gb()).unwrap();
        let ch = Chart::standard(2, 2, 1).unwrap();
        let mut r = RandomSource::new(seed);
        r.terms = 2;
        let a = random_lie_one_form(&mut r, &ch, &alg);
        prop_assert!(forms::bianchi_residual(&ch, &a).unwrap().is_zero());
    }

    #[test]
    fn covariant_derivative_squares_to_curvature(seed in any::<u64>(), p in 0u32..2) {
        let alg = superlie::iso134(&gb()).unwrap();
        let ch = Chart::standard(2, 2, 0).unwrap();
        let mut r = RandomSource::new(seed);
        r.terms = 2;
        let a = random_lie_one_form(&mut r, &ch, &alg);
        let w: Vec<F> = alg.parity.iter().map(|&q| r.form::<S>(&ch, p, Some(q))).collect();
        let rho: Vec<Vec<Vec<S>>> = (0..alg.dim()).map(|i| alg.ad_matrix(i)).collect();
        let dw = forms::cov_deriv(&ch, &a, &w, &rho).unwrap();
        let wl = LieValuedForm { alg: a.alg.clone(), comps: w.clone() };
        let direct = forms::ext_d(&ch, &w[0]) + bracket_wedge(&a, &wl).unwrap().comps[0].clone();
        prop_assert_eq!(&dw[0], &direct);
        let ddw = forms::cov_deriv(&ch, &a, &dw, &rho).unwrap();
        let f = curvature(&ch, &a).unwrap();
        let fw = bracket_wedge(&f, &wl).unwrap();
        prop_assert_eq!(ddw, fw.comps);
    }

    #[test]
    fn pairing_of_bracket_wedge(seed in any::<u64>(), px in 0u8..2, py in 0u8..2) {
        let alg = superlie::iso134(&gb()).unwrap();
        let ch = Chart::standard(2, 2, 1).unwrap();
        let mut r = RandomSource::new(seed);
        r.terms = 2;
        let a = random_lie_one_form(&mut r, &ch, &alg);
        let w = random_lie_one_form(&mut r, &ch, &alg);
        let x = r.vector_field::<S>(&ch, px);
        let y = r.vector_field::<S>(&ch, py);
        let bw = bracket_wedge(&a, &w).unwrap();
        let lhs: Vec<Superfield<S>> = bw.comps.iter().map(|c| forms::pairing2(&ch, &x, &y, c)).collect();
        let pa = |v: &VectorField<S>, l: &LieValuedForm<S>| -> Vec<Superfield<S>> { l.comps.iter().map(|c| forms::pairing(&ch, v, c)).collect() };
        let t1 = alg.bracket_ring(&pa(&x, &a), &pa(&y, &w));
        let t2 = alg.bracket_ring(&pa(&y, &a), &pa(&x, &w));
        let s = sgn(px & py);
        for k in 0..alg.dim() {
            let rhs = &t2[k].scale(&s) - &t1[k];
            prop_assert_eq!(&lhs[k], &rhs, "component {}", k);
        }
    }
}
