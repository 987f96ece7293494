//! Verification suites behind `supertransport verify`, `sugra` and
//! `killing`. Exact suites run on the rational backends and pass only on a
//! zero residual.

use std::sync::Arc;

use crate::cartan::{self, SugraFields, SusyMode};
use crate::clifford::{self, GammaBasis, Representation, ETA};
use crate::error::{Error, Result};
use crate::forms::{self, Chart, LieValuedForm, SuperForm, VectorField};
use crate::grassmann::{generator, GrassmannNumber};
use crate::poly::{Poly, Ring};
use crate::random::RandomSource;
use crate::report::VerificationReport;
use crate::scalar::{GaussRational, Rational, Scalar};
use crate::superfield::Superfield;
use crate::superlie::{self, SuperLieAlgebra, LORENTZ_PAIRS};

type Q = GaussRational;

pub const SUITES: &[&str] = &["clifford", "jacobi", "forms", "fierz", "mc-flatness", "connection-axioms"];

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Randomized cases; `None` picks the suite default.
    pub cases: Option<usize>,
    pub generators: usize,
    /// `t134`, `iso134`, `osp14` or `None` for all three.
    pub algebra: Option<String>,
    pub l: Q,
    pub representation: Representation,
    pub jet: u32,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: 0, cases: None, generators: 4, algebra: None, l: Q::one(), representation: Representation::Standard, jet: 2 }
    }
}

fn backend<S: Scalar>() -> &'static str {
    S::BACKEND.name()
}

pub fn run(name: &str, o: &SuiteOptions) -> Result<VerificationReport> {
    let mut r = match name {
        "clifford" => clifford_suite(o),
        "jacobi" => jacobi_suite(o),
        "forms" => forms_suite(o),
        "fierz" => fierz_suite(o),
        "mc-flatness" => mc_flatness_suite(o),
        "connection-axioms" => connection_axioms_suite(o),
        other => Err(Error::Unknown(format!("suite '{other}' ({})", SUITES.join(", ")))),
    }?;
    r.env("seed", o.seed);
    Ok(r)
}

fn gamma(o: &SuiteOptions) -> Result<GammaBasis<Q>> {
    GammaBasis::build(o.representation)
}

pub fn clifford_suite(o: &SuiteOptions) -> Result<VerificationReport> {
    let gb = gamma(o)?;
    let mut r = VerificationReport::new("clifford");
    r.env("representation", format!("{:?}", o.representation).to_lowercase());
    for (id, res) in gb.invariant_residuals() {
        r.exact(&id, "gamma matrix and charge conjugation identities", backend::<Q>(), res);
    }
    r.exact("epsilon-identity", "γ_* γ_{IJ} = ½ ε_{IJKL} γ^{KL} (symmetric part)", backend::<Q>(), gb.epsilon_identity_residual());
    r.env("gamma_star_sign", gb.gamma_star_sign);
    Ok(r)
}

fn selected(o: &SuiteOptions) -> Result<Vec<&'static str>> {
    match o.algebra.as_deref() {
        None | Some("all") => Ok(vec!["t134", "iso134", "osp14"]),
        Some("t134") => Ok(vec!["t134"]),
        Some("iso134") => Ok(vec!["iso134"]),
        Some("osp14") => Ok(vec!["osp14"]),
        Some(other) => Err(Error::Unknown(format!("algebra '{other}' (t134, iso134, osp14, all)"))),
    }
}

/// Residual of `−str(P_IP_J) = η_IJ/L²`, `−str(Q_αQ_β) = C_αβ/L` and the
/// vanishing `P`–`Q` block.
pub fn osp_form_target_residual(alg: &SuperLieAlgebra<Q>, gb: &GammaBasis<Q>, l: &Q) -> Result<f64> {
    let form = alg.form.as_ref().ok_or_else(|| Error::Unknown("osp14 without invariant form".into()))?;
    let inv = Scalar::inv(l).ok_or_else(|| Error::Calibration("L = 0".into()))?;
    let mut res: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let pp = if i == j { Q::from_i64(ETA[i]).mul(&inv).mul(&inv) } else { Q::zero() };
            res = res.max(form.get(i, j).sub(&pp).magnitude());
            res = res.max(form.get(10 + i, 10 + j).sub(&gb.c[i][j].mul(&inv)).magnitude());
            res = res.max(form.get(i, 10 + j).magnitude()).max(form.get(10 + j, i).magnitude());
        }
    }
    Ok(res)
}

pub fn jacobi_suite(o: &SuiteOptions) -> Result<VerificationReport> {
    let gb = gamma(o)?;
    let mut r = VerificationReport::new("jacobi");
    let b = backend::<Q>();
    for name in selected(o)? {
        let alg = match name {
            "t134" => superlie::t134(&gb)?,
            "iso134" => superlie::iso134(&gb)?,
            _ => superlie::osp14(&gb, &o.l)?,
        };
        r.exact(&format!("{name}-jacobi"), "graded Jacobi identity", b, alg.jacobi_residual());
        r.exact(&format!("{name}-antisymmetry"), "graded antisymmetry of the bracket", b, alg.antisymmetry_residual());
        r.exact(&format!("{name}-parity"), "bracket respects the grading", b, alg.parity_residual());
        if alg.realization.is_some() {
            r.exact(&format!("{name}-realization"), "matrix realization reproduces the brackets", b, alg.realization_residual()?);
        }
        if name == "osp14" {
            r.exact("osp14-form-targets", "−str(P_IP_J) = η_IJ/L², −str(Q_αQ_β) = C_αβ/L", b, osp_form_target_residual(&alg, &gb, &o.l)?);
            let all: Vec<usize> = (0..alg.dim()).collect();
            r.exact("osp14-form-invariance", "ad-invariance of the supertrace form", b, alg.form_invariance_residual(&all)?);
            r.exact("osp14-contraction", "L → ∞ contraction to iso(1,3|4)", b, superlie::contraction_residual(&gb)?);
            r.env("L", o.l.to_json());
        }
    }
    Ok(r)
}

/// `γ_Iψ(ψ̄γ^Iψ)` for `ψ^α` the first four generators (`generators = 4`) or
/// random odd combinations of `generators` generators.
pub fn fierz_suite(o: &SuiteOptions) -> Result<VerificationReport> {
    let n = o.generators;
    if !(4..=crate::poly::MAX_GENERATORS).contains(&n) {
        return Err(Error::Capacity(format!("Fierz needs 4..={} generators, got {n}", crate::poly::MAX_GENERATORS)));
    }
    let gb = gamma(o)?;
    let psi: Vec<GrassmannNumber<Q>> = if n == 4 {
        (0..4).map(generator).collect()
    } else {
        let mut rs = RandomSource::new(o.seed);
        rs.terms = 3;
        let mask = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        (0..4).map(|_| rs.grassmann(mask, Some(1))).collect()
    };
    let res = clifford::fierz_residual(&gb, &psi).iter().map(Poly::max_abs).fold(0.0, f64::max);
    let mut r = VerificationReport::new("fierz");
    r.env("generators", n);
    r.exact("fierz-cubic", "γ_Iψ(ψ̄γ^Iψ) = 0 for anticommuting Majorana ψ", backend::<Q>(), res);
    Ok(r)
}

fn sign(p: u32) -> Rational {
    if p & 1 == 1 {
        Rational::from_i64(-1)
    } else {
        Rational::one()
    }
}

/// Cartan calculus on random forms over the (2|2) chart with two
/// parametrizing generators.
pub fn forms_suite(o: &SuiteOptions) -> Result<VerificationReport> {
    let ch = Chart::standard(2, 2, 2)?;
    let cases = o.cases.unwrap_or(200);
    let mut rs = RandomSource::new(o.seed);
    let (mut d2, mut leib, mut li, mut ld): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for c in 0..cases {
        let p = (c % 3) as u32;
        let q = ((c / 3) % 2) as u32;
        let (px, py) = ((c % 2) as u8, ((c / 2) % 2) as u8);
        let w: SuperForm<Rational> = rs.form(&ch, p, None);
        let v: SuperForm<Rational> = rs.form(&ch, q, None);
        d2 = d2.max(forms::ext_d(&ch, &forms::ext_d(&ch, &w)).max_abs());
        let lhs = forms::ext_d(&ch, &(&w * &v));
        let rhs = &(&forms::ext_d(&ch, &w) * &v) + &(&w * &forms::ext_d(&ch, &v)).scale(&sign(p));
        leib = leib.max((&lhs - &rhs).max_abs());
        let x: VectorField<Rational> = rs.vector_field(&ch, px);
        let y: VectorField<Rational> = rs.vector_field(&ch, py);
        let w1: SuperForm<Rational> = rs.form(&ch, p + 1, None);
        let xy = forms::vf_bracket(&ch, &x, &y)?;
        let a = forms::lie_deriv(&ch, &x, &forms::interior(&ch, &y, &w1));
        let b = forms::interior(&ch, &y, &forms::lie_deriv(&ch, &x, &w1)).scale(&sign(px as u32 * py as u32));
        li = li.max((&(&a - &b) - &forms::interior(&ch, &xy, &w1)).max_abs());
        ld = ld.max((&forms::ext_d(&ch, &forms::lie_deriv(&ch, &x, &w)) - &forms::lie_deriv(&ch, &x, &forms::ext_d(&ch, &w))).max_abs());
    }
    let mut r = VerificationReport::new("forms");
    let b = backend::<Rational>();
    r.env("cases", cases);
    r.env("chart", "(2|2) with 2 parameters");
    r.exact("d-squared", "d² = 0", b, d2);
    r.exact("graded-leibniz", "d(α∧β) = dα∧β + (−1)^p α∧dβ", b, leib);
    r.exact("lie-interior", "[L_X, ι_Y] = ι_[X,Y]", b, li);
    r.exact("lie-d", "[L_X, d] = 0", b, ld);
    Ok(r)
}

pub fn mc_flatness_suite(o: &SuiteOptions) -> Result<VerificationReport> {
    let gb = gamma(o)?;
    let b = backend::<Q>();
    let alg = Arc::new(superlie::t134(&gb)?);
    let ch = superlie::t_chart(&[])?;
    let frame = superlie::left_invariant_frame_t(&gb, &ch);
    let mc = superlie::maurer_cartan_from_frame(alg.clone(), &ch, &frame)?;
    let mut r = VerificationReport::new("mc-flatness");
    r.exact("t134-flatness", "F(θ_MC) = 0 on the super translation group", b, forms::curvature(&ch, &mc)?.max_abs());
    let z: Vec<Superfield<Q>> = (0..ch.dim()).map(|j| ch.coord(j)).collect();
    let series = superlie::maurer_cartan_exp(alg, &ch, &z, 4, 8)?;
    r.exact("t134-series", "left-invariant coframe equals g⁻¹dg", b, series.sub(&mc)?.max_abs());
    // group law on random Grassmann points
    let cases = o.cases.unwrap_or(20);
    let mut rs = RandomSource::new(o.seed);
    let mask = 0xffff;
    let (mut assoc, mut inv): (f64, f64) = (0.0, 0.0);
    for _ in 0..cases {
        let mut el = || -> (Vec<GrassmannNumber<Q>>, Vec<GrassmannNumber<Q>>) {
            ((0..4).map(|_| rs.grassmann(mask, Some(0))).collect(), (0..4).map(|_| rs.grassmann(mask, Some(1))).collect())
        };
        let (a, bb, c) = (el(), el(), el());
        let ab = superlie::group_mul_t(&gb, (&a.0, &a.1), (&bb.0, &bb.1))?;
        let ab_c = superlie::group_mul_t(&gb, (&ab.0, &ab.1), (&c.0, &c.1))?;
        let bc = superlie::group_mul_t(&gb, (&bb.0, &bb.1), (&c.0, &c.1))?;
        let a_bc = superlie::group_mul_t(&gb, (&a.0, &a.1), (&bc.0, &bc.1))?;
        for (u, v) in ab_c.0.iter().chain(&ab_c.1).zip(a_bc.0.iter().chain(&a_bc.1)) {
            assoc = assoc.max((u - v).max_abs());
        }
        let ai: (Vec<_>, Vec<_>) = (a.0.iter().map(|x| x.neg()).collect(), a.1.iter().map(|x| x.neg()).collect());
        let e = superlie::group_mul_t(&gb, (&a.0, &a.1), (&ai.0, &ai.1))?;
        let e2 = superlie::group_mul_t(&gb, (&ai.0, &ai.1), (&a.0, &a.1))?;
        for x in e.0.iter().chain(&e.1).chain(&e2.0).chain(&e2.1) {
            inv = inv.max(x.max_abs());
        }
    }
    r.env("cases", cases);
    r.exact("t134-associativity", "(gh)k = g(hk) for the super translation group law", b, assoc);
    r.exact("t134-inverse", "g g⁻¹ = g⁻¹ g = e", b, inv);
    // OSp(1|4) on an exponential chart, flat through the jet order
    let m = cartan::superads_model(&gb, &o.l, o.jet.min(1), 0)?;
    r.exact("osp14-flatness-jet", "F(θ_MC) = 0 on OSp(1|4) through the jet order", b, m.curvature_residual()?);
    Ok(r)
}

pub fn connection_axioms_suite(o: &SuiteOptions) -> Result<VerificationReport> {
    let gb = gamma(o)?;
    let b = backend::<Q>();
    let t = Arc::new(superlie::t134(&gb)?);
    let ch = superlie::t_chart(&[])?;
    let frame = superlie::left_invariant_frame_t(&gb, &ch);
    let mc = superlie::maurer_cartan_from_frame(t, &ch, &frame)?;
    let mut r = VerificationReport::new("connection-axioms");
    let rep = forms::verify_connection_axioms(&ch, &mc, &frame)?;
    r.exact("mc-reproduces-generators", "⟨X̃|𝒜⟩ = X on fundamental fields", b, rep.axiom_i);
    r.exact("mc-equivariance", "L_X̃𝒜 + ad_X∘𝒜 = 0", b, rep.axiom_ii);
    let iso = superlie::iso134(&gb)?;
    let pch = Chart::standard(2, 2, 1)?;
    let mut rs = RandomSource::new(o.seed);
    rs.terms = 2;
    let cases = o.cases.unwrap_or(50);
    let random = |rs: &mut RandomSource| -> Result<LieValuedForm<Q>> {
        let comps = iso.parity.iter().map(|&p| rs.form::<Q>(&pch, 1, Some(p))).collect();
        LieValuedForm::new(Arc::new(iso.clone()), comps)
    };
    let probe = random(&mut rs)?;
    let c = forms::calibrate_curvature_factor(&ch, &mc, &pch, &probe)?;
    r.exact("curvature-factor", "calibrated factor equals the one used by curvature()", b, c.sub(&forms::curvature_factor()).magnitude());
    let mut bianchi: f64 = 0.0;
    for _ in 0..cases {
        bianchi = bianchi.max(forms::bianchi_residual(&pch, &random(&mut rs)?)?.max_abs());
    }
    r.env("cases", cases);
    r.exact("bianchi", "D^(𝒜)F(𝒜) = 0 for random iso(1,3|4) connections", b, bianchi);
    Ok(r)
}

/// Random supergravity fields with `e^I = dx^I + (random)`.
pub fn random_sugra_fields(rs: &mut RandomSource, ch: &Chart) -> Result<SugraFields<Q>> {
    let e = (0..4).map(|i| &ch.dz(i) + &rs.form::<Q>(ch, 1, Some(0))).collect();
    let omega = (0..6).map(|_| rs.form::<Q>(ch, 1, Some(0))).collect();
    let psi = (0..4).map(|_| rs.form::<Q>(ch, 1, Some(1))).collect();
    SugraFields::new(e, omega, psi)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SugraChecks {
    pub dl: bool,
    pub rheonomy: bool,
    pub susy: bool,
}

impl SugraChecks {
    pub fn all() -> Self {
        SugraChecks { dl: true, rheonomy: true, susy: true }
    }

    pub fn parse(list: &str) -> Result<Self> {
        let mut c = SugraChecks::default();
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item {
                "dl" => c.dl = true,
                "rheonomy" => c.rheonomy = true,
                "susy" => c.susy = true,
                other => return Err(Error::Unknown(format!("sugra check '{other}' (dl, rheonomy, susy)"))),
            }
        }
        Ok(c)
    }
}

/// `ψ^α = dθ^α + θ^α dx^α`, `e = dx`, `ω = 0` on the (4|4) chart.
pub fn symbolic_gravitino_fields(ch: &Chart) -> Result<SugraFields<Q>> {
    let psi = (0..4).map(|a| &ch.dz(4 + a) + &(&forms::func(&ch.coord(4 + a)) * &ch.dz(a))).collect();
    SugraFields::new((0..4).map(|i| ch.dz(i)).collect(), vec![Poly::zero(); 6], psi)
}

/// Symbolic `ρ^α_{KL}` (24 generators) and `ε^β` (4 generators) on a chart
/// with 28 parameters.
pub fn symbolic_rho(ch: &Chart) -> (Vec<Vec<Vec<Superfield<Q>>>>, Vec<Superfield<Q>>) {
    let mut rho = vec![vec![vec![Poly::zero(); 4]; 4]; 4];
    for (p, &(k, l)) in LORENTZ_PAIRS.iter().enumerate() {
        for a in 0..4 {
            let s: Superfield<Q> = ch.sigma(4 * p + a);
            rho[l][k][a] = s.neg();
            rho[k][l][a] = s;
        }
    }
    (rho, (0..4).map(|a| ch.sigma(24 + a)).collect())
}

/// Supergravity identities on symbolic and random fields, or on supplied
/// fields (whose chart must carry at least four parameters, used as `ε`).
pub fn sugra_suite(checks: SugraChecks, seed: u64, cases: usize, fields: Option<(&Chart, &SugraFields<Q>)>) -> Result<VerificationReport> {
    let gb = GammaBasis::<Q>::build(Representation::Standard)?;
    let b = backend::<Q>();
    let mut r = VerificationReport::new("sugra");
    r.env("seed", seed);
    if let Some((ch, f)) = fields {
        if checks.dl {
            r.exact("dl-identity-supplied", "dℒ equals the curvature expansion", b, cartan::dl_identity_residual(ch, &gb, f).max_abs());
        }
        if checks.rheonomy || checks.susy {
            if ch.k() < 4 {
                return Err(Error::Dim("supplied fields need four chart parameters to serve as ε".into()));
            }
            let eps: Vec<Superfield<Q>> = (0..4).map(|a| ch.sigma(a)).collect();
            if checks.rheonomy {
                let rep = cartan::rheonomy_residuals(ch, &gb, f, &eps, None)?;
                if let Some(t) = rep.torsion_contraction {
                    r.exact("rheonomy-torsion", "ι_X F^I = 0 on the bosonic restriction", b, t);
                }
                if let Some(t) = rep.gravitino_contraction {
                    r.exact("rheonomy-gravitino", "ι_X F^α = 0 on the bosonic restriction", b, t);
                }
                r.exact("rheonomy-third", "ε_IJKL θ̄^IJ ∧ e^K = −iρ̄γ_*γ_Lε", b, rep.third_condition);
            }
            if checks.susy {
                let v = cartan::susy_variation(ch, &gb, f, &eps, SusyMode::Gauge, None)?;
                r.env("susy_variation_max", v.de.iter().chain(&v.dpsi).map(Poly::max_abs).fold(0.0, f64::max));
            }
        }
        return Ok(r);
    }
    if checks.dl {
        let ch = Chart::standard(4, 4, 0)?;
        let f = symbolic_gravitino_fields(&ch)?;
        r.exact("dl-identity-symbolic", "dℒ equals the curvature expansion (Fierz cancellation)", b, cartan::dl_identity_residual(&ch, &gb, &f).max_abs());
        let mut rs = RandomSource::new(seed);
        rs.terms = 2;
        let charts = [Chart::standard(5, 0, 3)?, Chart::standard(4, 1, 2)?];
        let mut worst: f64 = 0.0;
        let mut vacuous = 0usize;
        for c in 0..cases {
            let ch = &charts[c % 2];
            let f = random_sugra_fields(&mut rs, ch)?;
            if forms::ext_d(ch, &cartan::sugra_lagrangian(ch, &gb, &f)).is_zero() {
                vacuous += 1;
            }
            worst = worst.max(cartan::dl_identity_residual(ch, &gb, &f).max_abs());
        }
        r.env("dl_cases", cases);
        r.exact("dl-identity-random", "dℒ equals the curvature expansion on random fields", b, worst);
        // every random case must exercise a nonzero dℒ
        r.exact("dl-random-nonvacuous", "random field sets with dℒ = 0", b, vacuous as f64);
    }
    if checks.rheonomy {
        let ch = Chart::standard_with_cap(4, 0, 28, 32)?;
        let (rho, eps) = symbolic_rho(&ch);
        let e: Vec<SuperForm<Q>> = (0..4).map(|i| ch.dz(i)).collect();
        let res = cartan::third_condition_residual(&gb, &rho, &eps, &e).iter().map(Poly::max_abs).fold(0.0, f64::max);
        r.exact("rheonomy-third-symbolic", "ε_IJKL θ̄^IJ ∧ e^K = −iρ̄γ_*γ_Lε with symbolic ρ", b, res);
        let m = cartan::super_minkowski(&gb, &["e0", "e1", "e2", "e3"])?;
        let fm = m.fields()?;
        let em: Vec<Superfield<Q>> = (0..4).map(|a| m.chart.sigma(a)).collect();
        let rep = cartan::rheonomy_residuals(&m.chart, &gb, &fm, &em, None)?;
        let worst = rep.torsion_contraction.unwrap_or(0.0).max(rep.gravitino_contraction.unwrap_or(0.0)).max(rep.third_condition);
        r.exact("rheonomy-minkowski", "rheonomy conditions on super Minkowski space", b, worst);
    }
    if checks.susy {
        let iso = Arc::new(superlie::iso134(&gb)?);
        let ch = Chart::standard(4, 1, 5)?;
        let mut rs = RandomSource::new(seed ^ 0x5eed);
        rs.terms = 2;
        let f = random_sugra_fields(&mut rs, &ch)?;
        let eps: Vec<Superfield<Q>> = (0..4).map(|a| &ch.sigma(a) + &(&ch.sigma(4) * &ch.coord(a))).collect();
        let a = f.to_connection(iso.clone())?;
        let mut w: Vec<SuperForm<Q>> = vec![Poly::zero(); 14];
        for k in 0..4 {
            w[10 + k] = forms::func(&eps[k]);
        }
        let rhom: Vec<Vec<Vec<Q>>> = (0..14).map(|i| iso.ad_matrix(i)).collect();
        let de = forms::cov_deriv(&ch, &a, &w, &rhom)?;
        let v = cartan::susy_variation(&ch, &gb, &f, &eps, SusyMode::Gauge, None)?;
        let mut res: f64 = 0.0;
        for i in 0..4 {
            res = res.max((&de[i] - &v.de[i]).max_abs()).max((&de[10 + i] - &v.dpsi[i]).max_abs());
        }
        for d in &de[4..10] {
            res = res.max(d.max_abs());
        }
        r.exact("susy-gauge", "δe = ½ε̄γψ, δψ = D^(ω)ε agree with D^(𝒜)ε", b, res);
        let m = cartan::super_minkowski(&gb, &["e0", "e1", "e2", "e3"])?;
        let em: Vec<Superfield<Q>> = (0..4).map(|a| m.chart.sigma(a)).collect();
        let v = cartan::susy_variation(&m.chart, &gb, &m.fields()?, &em, SusyMode::Gauge, None)?;
        r.exact("susy-minkowski", "constant ε preserves flat super Minkowski fields (δψ = 0)", b, v.dpsi.iter().map(Poly::max_abs).fold(0.0, f64::max));
    }
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KillingModel {
    Minkowski,
    Ads,
}

impl KillingModel {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "minkowski" => Ok(KillingModel::Minkowski),
            "ads" => Ok(KillingModel::Ads),
            other => Err(Error::Unknown(format!("model '{other}' (minkowski, ads)"))),
        }
    }
}

pub fn killing_suite(model: KillingModel, l: &Q, jet: u32) -> Result<VerificationReport> {
    let gb = GammaBasis::<Q>::build(Representation::Standard)?;
    let b = backend::<Q>();
    let mut r = VerificationReport::new("killing");
    match model {
        KillingModel::Minkowski => {
            r.env("model", "minkowski");
            let m = cartan::super_minkowski(&gb, &["e0", "e1", "e2", "e3"])?;
            let g = m.metric(&gb)?;
            r.exact("metric-graded-symmetry", "g(X,Y) = (−1)^{|X||Y|} g(Y,X)", b, g.graded_symmetry_residual(&m.chart)?);
            r.exact("right-invariant-killing", "L_X g = 0 for right-invariant X", b, m.killing_residual(&gb)?);
            let eps: Vec<Superfield<Q>> = (0..4).map(|a| m.chart.sigma(a)).collect();
            let ep = m.eps_prime(&eps);
            let res = cartan::killing_spinor_residual(&m.chart, &gb, &m.fields()?, &ep, None).iter().map(Poly::max_abs).fold(0.0, f64::max);
            r.exact("flat-killing-spinor", "D^(ω)ε′ = 0 for constant ε′ = ι_{ε^R}ψ", b, res);
        }
        KillingModel::Ads => {
            r.env("model", "ads");
            r.env("L", l.to_json());
            r.env("jet", jet);
            let m = cartan::superads_model(&gb, l, jet, 4)?;
            r.exact("ads-flatness-jet", "F(θ_MC) = 0 through the jet order", b, m.curvature_residual()?);
            let eps: Vec<Superfield<Q>> = (0..4).map(|a| m.chart.sigma(a)).collect();
            r.exact("ads-killing-spinor-jet", "D^(ω)ε′ − (1/2L)e^Iγ_Iε′ = 0 through the jet order", b, m.killing_spinor_residual(&gb, &eps)?);
            let t = m.metric_at_origin()?;
            let inv = Scalar::inv(l).ok_or_else(|| Error::Calibration("L = 0".into()))?;
            let mut mres: f64 = 0.0;
            for i in 0..4 {
                for j in 0..4 {
                    let pp = if i == j { Q::from_i64(ETA[i]).mul(&inv).mul(&inv) } else { Q::zero() };
                    mres = mres.max(t[i][j].sub(&pp).magnitude());
                    mres = mres.max(t[10 + i][10 + j].sub(&gb.c[i][j].mul(&inv)).magnitude());
                }
            }
            r.exact("ads-metric-origin", "g at the origin is η/L² ⊕ C/L", b, mres);
            let osp = superlie::osp14(&gb, l)?;
            let (mut pres, mut lres): (f64, f64) = (0.0, 0.0);
            for a in 0..4 {
                for c in 0..4 {
                    let unit = |k: usize| -> Vec<Q> { (0..4).map(|x| if x == k { Q::one() } else { Q::zero() }).collect() };
                    let kb = cartan::killing_bilinear(&osp, &gb, &inv, &unit(a), &unit(c))?;
                    pres = pres.max(kb.p_residual);
                    lres = lres.max(kb.m_residual);
                }
            }
            r.exact("killing-bilinear-lorentz", "−[ε,η] has M-part −(1/4L)ε̄γ^{IJ}η", b, lres);
            r.exact("killing-bilinear-translation", "−[ε,η] has P-part −ε̄γ^Iη", b, pres);
        }
    }
    Ok(r)
}
