//! Cartan decomposition, supergravity blocks and identities, Killing data.

use std::sync::Arc;

use proptest::prelude::*;
use supertransport::cartan::{self, SugraFields, SusyMode};
use supertransport::clifford::{eps_down, GammaBasis, Representation, ETA};
use supertransport::forms::{self, Chart, LieValuedForm, SuperForm, VectorField};
use supertransport::poly::{Poly, Ring};
use supertransport::random::RandomSource;
use supertransport::scalar::{GaussRational, Scalar, C64};
use supertransport::superfield::{self, Superfield};
use supertransport::superlie::{self, LORENTZ_PAIRS};

type S = GaussRational;
type F = SuperForm<S>;

fn gb() -> GammaBasis<S> {
    GammaBasis::build(Representation::Standard).unwrap()
}

fn random_fields(r: &mut RandomSource, ch: &Chart) -> SugraFields<S> {
    let e = (0..4).map(|i| &ch.dz(i) + &r.form::<S>(ch, 1, Some(0))).collect();
    let omega = (0..6).map(|_| r.form::<S>(ch, 1, Some(0))).collect();
    let psi = (0..4).map(|_| r.form::<S>(ch, 1, Some(1))).collect();
    SugraFields::new(e, omega, psi).unwrap()
}

#[test]
fn decomposition_and_reassembly() {
    let g = gb();
    let alg = Arc::new(superlie::iso134(&g).unwrap());
    let ch = Chart::standard(4, 2, 0).unwrap();
    let mut r = RandomSource::new(3);
    r.terms = 2;
    let f = random_fields(&mut r, &ch);
    let a = f.to_connection(alg.clone()).unwrap();
    let split = cartan::ReductiveSplit::by_prefix(&alg, "M").unwrap();
    assert_eq!(split.h, (4..10).collect::<Vec<_>>());
    assert_eq!(split.stability_residual(&alg), 0.0);
    let (e, w) = cartan::decompose_cartan(&a, &split).unwrap();
    assert_eq!(e.add(&w).unwrap().comps, a.comps);
    assert!(e.comps[4..10].iter().all(Poly::is_zero));
    assert_eq!(&e.comps[..4], &f.e[..]);
    assert_eq!(&e.comps[10..], &f.psi[..]);
    assert_eq!(SugraFields::from_connection(&a).unwrap(), f);
    // only 𝔥-components
    let (e0, _) = cartan::decompose_cartan(&w, &split).unwrap();
    assert!(e0.is_zero());
    // trivial 𝔥 on the translation group
    let m = cartan::super_minkowski(&g, &[]).unwrap();
    let triv = cartan::ReductiveSplit::new(&m.alg, vec![]).unwrap();
    let (e1, w1) = cartan::decompose_cartan(&m.mc, &triv).unwrap();
    assert_eq!(e1.comps, m.mc.comps);
    assert!(w1.is_zero());
    // P is not a subalgebra complement stable under [P, ·]
    let bad = cartan::ReductiveSplit::by_prefix(&alg, "P").unwrap();
    assert!(bad.stability_residual(&alg) > 0.0);
}

#[test]
fn cartan_data_invariants() {
    let g = gb();
    let alg = Arc::new(superlie::iso134(&g).unwrap());
    let split = cartan::ReductiveSplit::by_prefix(&alg, "M").unwrap();
    let s = cartan::t134_metric(&g).unwrap();
    assert_eq!(cartan::metric_invariance_residual(&alg, &split, &s), 0.0);
    // a non-invariant metric on 𝔤/𝔥
    let mut m = vec![vec![S::zero(); 8]; 8];
    for i in 0..4 {
        m[i][i] = S::one();
        for j in 0..4 {
            m[4 + i][4 + j] = g.c[i][j].clone();
        }
    }
    let euclid = supertransport::superlinalg::SuperBilinearForm::new(vec![0, 0, 0, 0, 1, 1, 1, 1], m).unwrap();
    assert!(cartan::metric_invariance_residual(&alg, &split, &euclid) > 0.0);
    // Cartan condition on the full group chart of iso(1,3|4) near the origin
    let even: Vec<&str> = alg.labels[..10].iter().map(String::as_str).collect();
    let odd: Vec<&str> = alg.labels[10..].iter().map(String::as_str).collect();
    let ch = Chart::new(&even, &odd, &[]).unwrap();
    let z: Vec<Superfield<S>> = (0..14).map(|i| ch.coord(i)).collect();
    let mc = superlie::maurer_cartan_exp(alg.clone(), &ch, &z, 2, 8).unwrap();
    let data = cartan::CartanData::new(ch.clone(), mc.clone(), split.clone(), s.clone()).unwrap();
    data.cartan_condition(&[vec![S::zero(); 10]]).unwrap();
    assert!(cartan::CartanData::new(ch.clone(), mc.clone(), split.clone(), euclid).is_err());
    let pbad = cartan::ReductiveSplit::by_prefix(&alg, "P").unwrap();
    assert!(cartan::CartanData::new(ch.clone(), mc, pbad, s).is_err());
    // a connection with a missing direction violates the Cartan condition
    let degenerate = LieValuedForm::zero(alg.clone());
    let s2 = cartan::t134_metric(&g).unwrap();
    let d2 = cartan::CartanData::new(ch, degenerate, split, s2).unwrap();
    assert!(d2.cartan_condition(&[vec![S::zero(); 10]]).is_err());
}

#[test]
fn curvature_blocks_match_generic_curvature() {
    let g = gb();
    let alg = Arc::new(superlie::iso134(&g).unwrap());
    for (seed, ch) in [(1u64, Chart::standard(4, 2, 0).unwrap()), (2, Chart::standard(4, 0, 2).unwrap()), (5, Chart::standard(4, 1, 1).unwrap())] {
        let mut r = RandomSource::new(seed);
        r.terms = 2;
        let f = random_fields(&mut r, &ch);
        let blocks = cartan::cartan_curvature(&ch, &g, &f);
        let generic = forms::curvature(&ch, &f.to_connection(alg.clone()).unwrap()).unwrap();
        assert_eq!(blocks.as_fields(), generic.comps, "seed {seed}");
    }
}

#[test]
fn constant_gravitino_curvature() {
    let g = gb();
    let ch = Chart::standard(4, 0, 4).unwrap();
    // ψ^α = σ_α dx^α
    let psi: Vec<F> = (0..4).map(|a| &forms::func(&ch.sigma(a)) * &ch.dz(a)).collect();
    let e = (0..4).map(|i| ch.dz(i)).collect();
    let f = SugraFields::new(e, vec![Poly::zero(); 6], psi.clone()).unwrap();
    let c = cartan::cartan_curvature(&ch, &g, &f);
    assert!(c.falpha.iter().all(Poly::is_zero));
    for i in 0..4 {
        // −¼ Σ ψ^α (Cγ^I)_{αβ} ψ^β written out
        let cg = g.cg(&g.gamma_up[i]);
        let mut want: F = Poly::zero();
        for a in 0..4 {
            for b in 0..4 {
                want = &want + &(&psi[a] * &psi[b]).scale(&cg[a][b]);
            }
        }
        assert_eq!(c.fi[i], want.scale(&S::from_ratio(-1, 4)));
    }
}

#[test]
fn einstein_term_by_hand() {
    let g = gb();
    let ch = Chart::standard(4, 0, 0).unwrap();
    // ω^{01} = x^0 dx^1, so F^{01} = dx^0∧dx^1
    let mut omega = vec![Poly::zero(); 6];
    omega[0] = &forms::func(&ch.coord(0)) * &ch.dz(1);
    let f = SugraFields::new((0..4).map(|i| ch.dz(i)).collect(), omega, vec![Poly::zero(); 4]).unwrap();
    let c = cartan::cartan_curvature(&ch, &g, &f);
    assert_eq!(c.fij[0], &ch.dz::<S>(0) * &ch.dz(1));
    let vol = &(&(&ch.dz::<S>(0) * &ch.dz(1)) * &ch.dz(2)) * &ch.dz(3);
    // ½(ε_{01KL} + ε_{10KL}·(−1)) dx^0dx^1 dx^K dx^L over K,L ∈ {2,3}
    let want = vol.scale(&S::from_i64(2 * eps_down(0, 1, 2, 3)));
    assert_eq!(cartan::sugra_lagrangian(&ch, &g, &f), want);
    assert!(cartan::sugra_lagrangian(&ch, &g, &SugraFields::flat(&ch).unwrap()).is_zero());
}

#[test]
fn dl_identity_symbolic_gravitino() {
    let g = gb();
    let ch = Chart::standard(4, 4, 0).unwrap();
    // ψ^α = dθ^α + θ^α dx^α
    let psi: Vec<F> = (0..4).map(|a| &ch.dz(4 + a) + &(&forms::func(&ch.coord(4 + a)) * &ch.dz(a))).collect();
    let f = SugraFields::new((0..4).map(|i| ch.dz(i)).collect(), vec![Poly::zero(); 6], psi).unwrap();
    assert!(cartan::dl_identity_residual(&ch, &g, &f).is_zero());
    // not vacuous: ℒ and dℒ are non-zero
    let l = cartan::sugra_lagrangian(&ch, &g, &f);
    assert!(!forms::ext_d(&ch, &l).is_zero());
    let flat = SugraFields::flat(&ch).unwrap();
    assert!(cartan::dl_identity_residual(&ch, &g, &flat).is_zero());
}

#[test]
fn dl_identity_random_fields() {
    let g = gb();
    for (seed, ch) in [(11u64, Chart::standard(5, 0, 3).unwrap()), (12, Chart::standard(4, 1, 2).unwrap())] {
        let mut r = RandomSource::new(seed);
        r.terms = 2;
        let f = random_fields(&mut r, &ch);
        let dl = forms::ext_d(&ch, &cartan::sugra_lagrangian(&ch, &g, &f));
        assert!(!dl.is_zero(), "seed {seed}: dℒ vanishes, the check would be empty");
        assert!(cartan::dl_identity_residual(&ch, &g, &f).is_zero(), "seed {seed}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn majorana_flip(seed in any::<u64>()) {
        let g = gb();
        let ch = Chart::standard(3, 2, 2).unwrap();
        let mut r = RandomSource::new(seed);
        r.terms = 2;
        let psi: Vec<F> = (0..4).map(|_| r.form::<S>(&ch, 1, Some(1))).collect();
        let rho: Vec<F> = (0..4).map(|_| r.form::<S>(&ch, 2, Some(1))).collect();
        prop_assert_eq!(cartan::majorana_flip_residual(&g, &psi, &rho), 0.0);
    }

    #[test]
    fn induced_metric_graded_symmetry(seed in any::<u64>()) {
        let g = gb();
        let alg = Arc::new(superlie::iso134(&g).unwrap());
        let ch = Chart::standard(4, 2, 1).unwrap();
        let mut r = RandomSource::new(seed);
        r.terms = 2;
        let f = random_fields(&mut r, &ch);
        let split = cartan::ReductiveSplit::by_prefix(&alg, "M").unwrap();
        let gm = cartan::induced_metric(&f.to_connection(alg).unwrap(), &split, &cartan::t134_metric(&g).unwrap()).unwrap();
        prop_assert_eq!(gm.graded_symmetry_residual(&ch).unwrap(), 0.0);
    }
}

#[test]
fn flat_bosonic_metric() {
    let g = gb();
    let alg = Arc::new(superlie::iso134(&g).unwrap());
    let ch = Chart::standard(4, 0, 0).unwrap();
    let f = SugraFields::flat(&ch).unwrap();
    let split = cartan::ReductiveSplit::by_prefix(&alg, "M").unwrap();
    let gm = cartan::induced_metric(&f.to_connection(alg).unwrap(), &split, &cartan::t134_metric(&g).unwrap()).unwrap();
    let t = gm.table(&ch).unwrap();
    for a in 0..4 {
        for b in 0..4 {
            let want = if a == b { Superfield::from_scalar(S::from_i64(ETA[a])) } else { Poly::zero() };
            assert_eq!(t[a][b], want);
        }
    }
    assert!(gm.body_nondegenerate(&ch, &[vec![S::zero(); 4]]).unwrap());
}

#[test]
fn super_minkowski_metric_and_killing_fields() {
    let g = gb();
    let m = cartan::super_minkowski(&g, &[]).unwrap();
    let gm = m.metric(&g).unwrap();
    assert_eq!(gm.graded_symmetry_residual(&m.chart).unwrap(), 0.0);
    let t = gm.table(&m.chart).unwrap();
    // g(∂_I,∂_J) = η_IJ; the odd block equals C at θ = 0
    for i in 0..4 {
        for j in 0..4 {
            let want = if i == j { S::from_i64(ETA[i]) } else { S::zero() };
            assert_eq!(t[i][j], Superfield::from_scalar(want));
            let body = superfield::eval_body(&t[4 + i][4 + j], &vec![S::zero(); 4]);
            let theta_free = t[4 + i][4 + j].filter(|mono| mono.g == 0);
            assert_eq!(superfield::eval_body(&theta_free, &vec![S::zero(); 4]), body);
            assert_eq!(body, g.c[i][j]);
        }
    }
    assert_eq!(m.killing_residual(&g).unwrap(), 0.0);
    // left-invariant odd fields are not isometries of this metric in general,
    // but the left-invariant translations are
    for i in 0..4 {
        assert!(cartan::killing_residual(&m.chart, &gm, &m.left[i]).unwrap().iter().flatten().all(Poly::is_zero));
    }
    // a dilation is not Killing
    let mut dil = VectorField::zero(&m.chart);
    for i in 0..4 {
        dil = dil.add(&VectorField::coord(&m.chart, i).lmul(&m.chart.coord(i)));
    }
    assert!(cartan::killing_residual(&m.chart, &gm, &dil).unwrap().iter().flatten().any(|f| !f.is_zero()));
}

#[test]
fn flat_killing_spinors() {
    let g = gb();
    let m = cartan::super_minkowski(&g, &["e0", "e1", "e2", "e3"]).unwrap();
    let eps: Vec<Superfield<S>> = (0..4).map(|a| m.chart.sigma(a)).collect();
    let ep = m.eps_prime(&eps);
    assert_eq!(ep, eps);
    let f = m.fields().unwrap();
    assert!(cartan::killing_spinor_residual(&m.chart, &g, &f, &ep, None).iter().all(Poly::is_zero));
    // a non-constant spinor fails
    let bad: Vec<Superfield<S>> = eps.iter().map(|e| e * &m.chart.coord(0)).collect();
    assert!(cartan::killing_spinor_residual(&m.chart, &g, &f, &bad, None).iter().any(|w| !w.is_zero()));
}

#[test]
fn susy_variations() {
    let g = gb();
    let ch = Chart::standard(4, 0, 4).unwrap();
    let eps: Vec<Superfield<S>> = (0..4).map(|a| ch.sigma(a)).collect();
    let flat = SugraFields::flat(&ch).unwrap();
    let v = cartan::susy_variation(&ch, &g, &flat, &eps, SusyMode::Gauge, None).unwrap();
    assert!(v.de.iter().chain(&v.dpsi).chain(&v.domega).all(Poly::is_zero));
    // x-dependent ε: δψ = dε
    let epsx: Vec<Superfield<S>> = eps.iter().map(|e| e * &ch.coord(1)).collect();
    let v = cartan::susy_variation(&ch, &g, &flat, &epsx, SusyMode::Gauge, None).unwrap();
    for a in 0..4 {
        assert_eq!(v.dpsi[a], forms::ext_d(&ch, &forms::func(&epsx[a])));
    }
    // super Minkowski fields and a constant parameter
    let m = cartan::super_minkowski(&g, &["e0", "e1", "e2", "e3"]).unwrap();
    let f = m.fields().unwrap();
    let e4: Vec<Superfield<S>> = (0..4).map(|a| m.chart.sigma(a)).collect();
    let v = cartan::susy_variation(&m.chart, &g, &f, &e4, SusyMode::Rheonomic, None).unwrap();
    assert!(v.dpsi.iter().chain(&v.domega).all(Poly::is_zero));
    assert!(cartan::susy_variation(&m.chart, &g, &f, &[Poly::zero(), Poly::zero(), Poly::zero(), m.chart.coord(0)], SusyMode::Gauge, None).is_err());
}

#[test]
fn gauge_variation_is_the_covariant_derivative_of_the_parameter() {
    let g = gb();
    let alg = Arc::new(superlie::iso134(&g).unwrap());
    let ch = Chart::standard(4, 1, 5).unwrap();
    let mut r = RandomSource::new(21);
    r.terms = 2;
    let mut f = random_fields(&mut r, &ch);
    let eps: Vec<Superfield<S>> = (0..4).map(|a| &ch.sigma(a) + &(&ch.sigma(4) * &ch.coord(a))).collect();
    // δ𝒜 = dε + [𝒜, ε] in the Q-direction
    let a = f.to_connection(alg.clone()).unwrap();
    let mut w: Vec<F> = vec![Poly::zero(); 14];
    for k in 0..4 {
        w[10 + k] = forms::func(&eps[k]);
    }
    let rho: Vec<Vec<Vec<S>>> = (0..14).map(|i| alg.ad_matrix(i)).collect();
    let de = forms::cov_deriv(&ch, &a, &w, &rho).unwrap();
    let v = cartan::susy_variation(&ch, &g, &f, &eps, SusyMode::Gauge, None).unwrap();
    assert_eq!(&de[..4], &v.de[..]);
    assert_eq!(&de[10..], &v.dpsi[..]);
    assert!(de[4..10].iter().all(Poly::is_zero));
    f.psi = vec![Poly::zero(); 4];
    let v0 = cartan::susy_variation(&ch, &g, &f, &eps, SusyMode::Gauge, None).unwrap();
    assert!(v0.de.iter().all(Poly::is_zero));
}

/// `ρ^α_{KL}` and `ε^β` as independent odd generators.
fn symbolic_rho(ch: &Chart) -> (Vec<Vec<Vec<Superfield<S>>>>, Vec<Superfield<S>>) {
    let mut rho = vec![vec![vec![Poly::zero(); 4]; 4]; 4];
    for (p, &(k, l)) in LORENTZ_PAIRS.iter().enumerate() {
        for a in 0..4 {
            let s = ch.sigma(4 * p + a);
            rho[l][k][a] = s.neg();
            rho[k][l][a] = s;
        }
    }
    let eps = (0..4).map(|a| ch.sigma(24 + a)).collect();
    (rho, eps)
}

#[test]
fn third_rheonomy_condition_symbolic() {
    let g = gb();
    let ch = Chart::standard_with_cap(4, 0, 28, 32).unwrap();
    let (rho, eps) = symbolic_rho(&ch);
    let e: Vec<F> = (0..4).map(|i| ch.dz(i)).collect();
    let res = cartan::third_condition_residual(&g, &rho, &eps, &e);
    let worst = res.iter().map(Poly::max_abs).fold(0.0, f64::max);
    assert_eq!(worst, 0.0, "θ̄ ansatz leaves a residual in the third condition");
}

#[test]
fn rheonomy_on_flat_and_minkowski_fields() {
    let g = gb();
    let ch = Chart::standard(4, 4, 4).unwrap();
    let eps: Vec<Superfield<S>> = (0..4).map(|a| ch.sigma(a)).collect();
    let flat = SugraFields::flat(&ch).unwrap();
    let mut f = flat.clone();
    f.psi = (0..4).map(|a| ch.dz(4 + a)).collect();
    let rep = cartan::rheonomy_residuals(&ch, &g, &f, &eps, None).unwrap();
    assert_eq!(rep.third_condition, 0.0);
    assert_eq!(rep.gravitino_contraction, Some(0.0));
    // F^I = −¼ψ̄γ^Iψ with ψ = dθ has a non-zero odd contraction, but it
    // vanishes on the bosonic restriction
    assert_eq!(rep.torsion_contraction, Some(0.0));
    let m = cartan::super_minkowski(&g, &["e0", "e1", "e2", "e3"]).unwrap();
    let fm = m.fields().unwrap();
    let em: Vec<Superfield<S>> = (0..4).map(|a| m.chart.sigma(a)).collect();
    let rep = cartan::rheonomy_residuals(&m.chart, &g, &fm, &em, None).unwrap();
    assert_eq!((rep.torsion_contraction, rep.gravitino_contraction, rep.third_condition), (Some(0.0), Some(0.0), 0.0));
    // degenerate vielbein
    let mut d = flat;
    d.e[3] = Poly::zero();
    assert!(cartan::rheonomy_residuals(&ch, &g, &d, &eps, None).is_err());
}

#[test]
fn killing_bilinear_translation_part() {
    let g = gb();
    let l = S::from_i64(2);
    let inv_l = Scalar::inv(&l).unwrap();
    let osp = superlie::osp14(&g, &l).unwrap();
    let iso = superlie::iso134(&g).unwrap();
    let unit = |a: usize| -> Vec<S> { (0..4).map(|b| if a == b { S::one() } else { S::zero() }).collect() };
    for a in 0..4 {
        for b in 0..4 {
            let ko = cartan::killing_bilinear(&osp, &g, &inv_l, &unit(a), &unit(b)).unwrap();
            let ki = cartan::killing_bilinear(&iso, &g, &S::zero(), &unit(a), &unit(b)).unwrap();
            // the Lorentz part agrees with −(1/4L)ε̄γ^{IJ}η
            assert!(ko.m_residual < 1e-12, "({a},{b}) M residual {}", ko.m_residual);
            // L → ∞ leaves only translations
            assert!(ki.computed[4..].iter().all(|c| *c == 0.0));
            assert_eq!(ki.computed[..4], ko.computed[..4]);
            // symmetric under ε ↔ η since Cγ^I and Cγ^{IJ} are symmetric
            let swapped = cartan::killing_bilinear(&osp, &g, &inv_l, &unit(b), &unit(a)).unwrap();
            assert_eq!(swapped.computed, ko.computed);
        }
    }
}

#[test]
fn superads_jet_model() {
    let g = gb();
    let l = S::from_i64(2);
    let m0 = cartan::superads_model(&g, &l, 0, 0).unwrap();
    // at the origin z = 0
    for i in 0..14 {
        let at0 = m0.mc.comps[i].filter(|k| k.m.x.iter().all(|&e| e == 0) && k.m.g == 0);
        assert_eq!(at0, m0.chart.dz(i));
    }
    let m = cartan::superads_model(&g, &l, 2, 4).unwrap();
    assert_eq!(m.curvature_residual().unwrap(), 0.0);
    let eps: Vec<Superfield<S>> = (0..4).map(|a| m.chart.sigma(a)).collect();
    assert_eq!(m.killing_spinor_residual(&g, &eps).unwrap(), 0.0);
    // the wrong radius does not solve the twistor equation
    let f = m.fields().unwrap();
    let mut y = vec![Poly::zero(); 14];
    y[10..].clone_from_slice(&eps);
    let ep = m.eps_prime(&y)[10..].to_vec();
    let wrong = S::from_ratio(1, 2);
    let r = cartan::killing_spinor_residual(&m.chart, &g, &f, &ep, Some(&wrong));
    assert!(r.iter().any(|w| !forms::truncate_form(&cartan::bosonic_restriction(&m.chart, w), 1).is_zero()));
    assert!(cartan::superads_model(&g, &l, cartan::MAX_JET + 1, 0).is_err());
}

#[test]
fn superads_metric_at_origin() {
    let g = gb();
    let l = S::from_i64(3);
    let m = cartan::superads_model(&g, &l, 1, 0).unwrap();
    let t = m.metric_at_origin().unwrap();
    let l2 = Scalar::inv(&l.mul(&l)).unwrap();
    let l1 = Scalar::inv(&l).unwrap();
    let idx: Vec<usize> = (0..4).chain(10..14).collect();
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            let want = if a < 4 && b < 4 {
                if a == b { S::from_i64(ETA[a]).mul(&l2) } else { S::zero() }
            } else if a >= 4 && b >= 4 {
                g.c[a - 4][b - 4].mul(&l1)
            } else {
                S::zero()
            };
            assert_eq!(t[i][j], want, "entry ({i},{j})");
        }
    }
}

#[test]
fn ehresmann_lift_of_a_translation_connection() {
    let g = gb();
    let alg = Arc::new(superlie::t134(&g).unwrap());
    let base = Chart::standard(1, 1, 1).unwrap();
    let x = forms::func(&base.coord::<S>(0));
    let th = forms::func(&base.coord::<S>(1));
    let s = forms::func(&base.sigma::<S>(0));
    // a generic 𝔱-valued 1-form on the base
    let mut comps: Vec<F> = vec![Poly::zero(); 8];
    comps[0] = &x * &base.dz(0);
    comps[2] = &(&th * &s) * &base.dz(0) + base.dz(1).scale(&S::from_i64(3));
    comps[5] = &s * &base.dz(0);
    comps[6] = &x * &base.dz(1);
    let a = LieValuedForm::new(alg.clone(), comps).unwrap();
    let lift = cartan::extend_cartan_to_ehresmann(&base, &a, 3, 8).unwrap();
    assert_eq!(lift.fundamental.len(), 8);
    for (c, w) in lift.connection.comps.iter().zip(&a.comps) {
        assert_eq!(&cartan::pullback_at_identity(&lift, c), w);
    }
    let rep = forms::verify_connection_axioms(&lift.chart, &lift.connection, &lift.fundamental).unwrap();
    assert_eq!((rep.axiom_i, rep.axiom_ii), (0.0, 0.0));
    // 𝒜 = 0 gives the vertical Maurer–Cartan form
    let zero = cartan::extend_cartan_to_ehresmann(&base, &LieValuedForm::zero(alg.clone()), 3, 8).unwrap();
    let z: Vec<Superfield<S>> = (0..8).map(|i| if i < 4 { superfield::var(1 + i) } else { superfield::gen(1 + (i - 4)) }).collect();
    let mc = superlie::maurer_cartan_exp(alg, &zero.chart, &z, 3, 8).unwrap();
    assert_eq!(zero.connection.comps, mc.comps);
}

#[test]
fn sample_points_are_inside_the_domain() {
    let ch = Chart::standard(3, 0, 0).unwrap();
    for p in cartan::sample_points::<C64>(&ch, 5) {
        for (x, &(a, b)) in p.iter().zip(&ch.domain) {
            assert!(x.re >= a && x.re <= b);
        }
    }
}
