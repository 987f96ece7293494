//! Super Cartan geometry: reductive splits, supervielbein and induced super
//! metric, N=1 D=4 supergravity (Lagrangian, dℒ identity, supersymmetry
//! variations, rheonomy), Killing vectors and spinors on the flat and AdS
//! models, and the Ehresmann lift to the G-extension.
//!
//! Basis order for iso(1,3|4) and osp(1|4): `P0..P3, M01,M02,M03,M12,M13,M23,
//! Q0..Q3`. The spin connection enters as `½ω^{IJ}M_{IJ}`, so the `M_{IJ}`
//! component (I<J) of a connection is `ω^{IJ}`.

use std::sync::Arc;

use serde::Serialize;

use crate::clifford::{self, eps_down, eps_up, GammaBasis, M4, ETA};
use crate::error::{Error, Result};
use crate::forms::{self, Chart, LieValuedForm, SuperForm, VectorField};
use crate::grassmann::GenTag;
use crate::poly::{FormKey, Key, Poly};
use crate::scalar::C64;
use crate::scalar::{ComplexField, Scalar};
use crate::superfield::{self, Superfield};
use crate::superlie::{self, lorentz_index, SuperLieAlgebra, LORENTZ_PAIRS};
use crate::superlinalg::{minv, solve, SuperBilinearForm, SuperMatrix};

pub const P_OFFSET: usize = 0;
pub const M_OFFSET: usize = 4;
pub const Q_OFFSET: usize = 10;
/// Largest supported jet order of the AdS model.
pub const MAX_JET: u32 = 4;

/// Partition of a basis into `𝔥` and the complement `𝔤/𝔥`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductiveSplit {
    pub h: Vec<usize>,
    pub m: Vec<usize>,
}

impl ReductiveSplit {
    pub fn new<S: Scalar>(alg: &SuperLieAlgebra<S>, h: Vec<usize>) -> Result<Self> {
        if h.iter().any(|&i| i >= alg.dim()) {
            return Err(Error::AlgebraMismatch("split index outside the algebra".into()));
        }
        let m = (0..alg.dim()).filter(|i| !h.contains(i)).collect();
        Ok(ReductiveSplit { h, m })
    }

    /// `𝔥` spanned by the generators whose label starts with `prefix`.
    pub fn by_prefix<S: Scalar>(alg: &SuperLieAlgebra<S>, prefix: &str) -> Result<Self> {
        Self::new(alg, alg.indices_with_prefix(prefix))
    }

    /// Largest `𝔥`-component of `[h, x]` for `h ∈ 𝔥`, `x ∈ 𝔤/𝔥`.
    pub fn stability_residual<S: Scalar>(&self, alg: &SuperLieAlgebra<S>) -> f64 {
        let mut r: f64 = 0.0;
        for &h in &self.h {
            for &x in &self.m {
                for (k, c) in &alg.f[h][x] {
                    if self.h.contains(k) {
                        r = r.max(c.magnitude());
                    }
                }
            }
        }
        r
    }
}

/// `(E, ω) = (pr_{𝔤/𝔥}∘𝒜, pr_𝔥∘𝒜)`.
pub fn decompose_cartan<S: Scalar>(a: &LieValuedForm<S>, split: &ReductiveSplit) -> Result<(LieValuedForm<S>, LieValuedForm<S>)> {
    if split.h.len() + split.m.len() != a.alg.dim() {
        return Err(Error::AlgebraMismatch("split does not partition the basis".into()));
    }
    let keep = |idx: &[usize]| {
        let comps = (0..a.alg.dim()).map(|i| if idx.contains(&i) { a.comps[i].clone() } else { Poly::zero() }).collect();
        LieValuedForm::new(a.alg.clone(), comps)
    };
    Ok((keep(&split.m)?, keep(&split.h)?))
}

/// `max |⟨X̃|E⟩|` over the given `𝔥`-fundamental fields.
pub fn horizontality_residual<S: Scalar>(chart: &Chart, e: &LieValuedForm<S>, fundamental_h: &[VectorField<S>]) -> f64 {
    fundamental_h
        .iter()
        .flat_map(|x| e.comps.iter().map(move |w| forms::pairing(chart, x, w).max_abs()))
        .fold(0.0, f64::max)
}

/// `𝒮([h,x],y) + (−1)^{|h||x|}𝒮(x,[h,y])` over `h ∈ 𝔥`, `x, y ∈ 𝔤/𝔥`;
/// `s` is indexed in the order of `split.m`.
pub fn metric_invariance_residual<S: Scalar>(alg: &SuperLieAlgebra<S>, split: &ReductiveSplit, s: &SuperBilinearForm<S>) -> f64 {
    let pos = |k: usize| split.m.iter().position(|&j| j == k);
    let mut r: f64 = 0.0;
    for &h in &split.h {
        for (a, &x) in split.m.iter().enumerate() {
            for (b, &y) in split.m.iter().enumerate() {
                let mut acc = S::zero();
                for (k, c) in &alg.f[h][x] {
                    if let Some(p) = pos(*k) {
                        acc.add_assign(&c.mul(s.get(p, b)));
                    }
                }
                let sg = if alg.parity[h] & alg.parity[x] == 1 { S::from_i64(-1) } else { S::one() };
                for (k, c) in &alg.f[h][y] {
                    if let Some(p) = pos(*k) {
                        acc.add_assign(&c.mul(s.get(a, p)).mul(&sg));
                    }
                }
                r = r.max(acc.magnitude());
            }
        }
    }
    r
}

/// Reductive super Cartan data on a chart.
#[derive(Clone, Debug)]
pub struct CartanData<S: Scalar> {
    pub split: ReductiveSplit,
    pub connection: LieValuedForm<S>,
    /// Metric on `𝔤/𝔥`, indexed in the order of `split.m`.
    pub metric: SuperBilinearForm<S>,
    pub chart: Chart,
}

impl<S: Scalar> CartanData<S> {
    pub fn new(chart: Chart, connection: LieValuedForm<S>, split: ReductiveSplit, metric: SuperBilinearForm<S>) -> Result<Self> {
        let alg = &connection.alg;
        if split.h.len() + split.m.len() != alg.dim() || metric.parities.len() != split.m.len() {
            return Err(Error::AlgebraMismatch("split or metric does not match the algebra".into()));
        }
        if split.stability_residual(alg) != 0.0 {
            return Err(Error::AlgebraMismatch("[𝔥, 𝔤/𝔥] leaves 𝔤/𝔥".into()));
        }
        if split.m.iter().zip(&metric.parities).any(|(&i, &p)| alg.parity[i] != p) {
            return Err(Error::Parity("metric parities differ from the basis".into()));
        }
        if metric_invariance_residual(alg, &split, &metric) != 0.0 {
            return Err(Error::AlgebraMismatch("metric is not ad(𝔥)-invariant".into()));
        }
        Ok(CartanData { split, connection, metric, chart })
    }

    pub fn decompose(&self) -> Result<(LieValuedForm<S>, LieValuedForm<S>)> {
        decompose_cartan(&self.connection, &self.split)
    }

    /// Body of `⟨∂_j|𝒜^i⟩` at the given even-coordinate points is invertible.
    pub fn cartan_condition(&self, points: &[Vec<S>]) -> Result<()> {
        let n = self.chart.dim();
        if n != self.connection.alg.dim() {
            return Err(Error::Dim(format!("chart dimension {n} differs from dim 𝔤 = {}", self.connection.alg.dim())));
        }
        let table: Vec<Vec<Superfield<S>>> = self
            .connection
            .comps
            .iter()
            .map(|w| (0..n).map(|j| forms::pairing(&self.chart, &VectorField::coord(&self.chart, j), w)).collect())
            .collect();
        for pt in points {
            let m: Vec<Vec<S>> = table.iter().map(|row| row.iter().map(|f| superfield::eval_body(f, pt)).collect()).collect();
            // a solvable system for every unit vector means an invertible matrix
            for j in 0..n {
                let mut b = vec![S::zero(); n];
                b[j] = S::one();
                if solve(&m, &b).is_none() {
                    return Err(Error::NotInvertible(format!("Cartan condition fails at {:?}", pt.iter().map(|s| s.to_c64().re).collect::<Vec<_>>())));
                }
            }
        }
        Ok(())
    }

    pub fn induced_metric(&self) -> Result<InducedMetric<S>> {
        induced_metric(&self.connection, &self.split, &self.metric)
    }
}

/// Super metric `g = Σ (−1)^{|e_i||e_j|}𝒮_ij E^i ⊗ E^j`.
#[derive(Clone, Debug)]
pub struct InducedMetric<S: Scalar> {
    pub comps: Vec<SuperForm<S>>,
    pub parity: Vec<u8>,
    pub s: SuperBilinearForm<S>,
}

pub fn induced_metric<S: Scalar>(a: &LieValuedForm<S>, split: &ReductiveSplit, s: &SuperBilinearForm<S>) -> Result<InducedMetric<S>> {
    if !s.is_nondegenerate() {
        return Err(Error::NotInvertible("degenerate metric on 𝔤/𝔥".into()));
    }
    if s.symmetry_residual() != 0.0 {
        return Err(Error::AlgebraMismatch("metric is not graded symmetric".into()));
    }
    Ok(InducedMetric {
        comps: split.m.iter().map(|&i| a.comps[i].clone()).collect(),
        parity: split.m.iter().map(|&i| a.alg.parity[i]).collect(),
        s: s.clone(),
    })
}

impl<S: Scalar> InducedMetric<S> {
    /// `g(X,Y) = Σ (−1)^{|i||j|}𝒮_ij (−1)^{|j||X|}⟨X|E^i⟩⟨Y|E^j⟩` for
    /// homogeneous `X`.
    pub fn eval(&self, chart: &Chart, x: &VectorField<S>, y: &VectorField<S>) -> Result<Superfield<S>> {
        let px = if x.is_zero() { 0 } else { x.parity(chart).ok_or_else(|| Error::Parity("vector field not homogeneous".into()))? };
        let xi: Vec<Superfield<S>> = self.comps.iter().map(|w| forms::pairing(chart, x, w)).collect();
        let yj: Vec<Superfield<S>> = self.comps.iter().map(|w| forms::pairing(chart, y, w)).collect();
        let mut acc = Poly::zero();
        for i in 0..self.comps.len() {
            if xi[i].is_zero() {
                continue;
            }
            for j in 0..self.comps.len() {
                let sij = self.s.get(i, j);
                if sij.is_zero() || yj[j].is_zero() {
                    continue;
                }
                let neg = (self.parity[i] & self.parity[j]) ^ (self.parity[j] & px);
                let v = (&xi[i] * &yj[j]).scale(sij);
                acc = if neg == 1 { &acc - &v } else { &acc + &v };
            }
        }
        Ok(acc)
    }

    /// `g(∂_a, ∂_b)` on the coordinate frame.
    pub fn table(&self, chart: &Chart) -> Result<Vec<Vec<Superfield<S>>>> {
        let n = chart.dim();
        (0..n)
            .map(|a| (0..n).map(|b| self.eval(chart, &VectorField::coord(chart, a), &VectorField::coord(chart, b))).collect())
            .collect()
    }

    /// `max |g(∂_a,∂_b) − (−1)^{|a||b|} g(∂_b,∂_a)|`.
    pub fn graded_symmetry_residual(&self, chart: &Chart) -> Result<f64> {
        let t = self.table(chart)?;
        let mut r: f64 = 0.0;
        for a in 0..t.len() {
            for b in 0..t.len() {
                let d = if chart.coord_parity(a) & chart.coord_parity(b) == 1 { &t[a][b] + &t[b][a] } else { &t[a][b] - &t[b][a] };
                r = r.max(d.max_abs());
            }
        }
        Ok(r)
    }

    /// Body of the coordinate table is non-degenerate at each point.
    pub fn body_nondegenerate(&self, chart: &Chart, points: &[Vec<S>]) -> Result<bool> {
        let t = self.table(chart)?;
        let n = t.len();
        for pt in points {
            let m: Vec<Vec<S>> = t.iter().map(|r| r.iter().map(|f| superfield::eval_body(f, pt)).collect()).collect();
            let sm = SuperMatrix::from_fn(chart.m(), chart.n(), |i, j| m[i][j].clone());
            if crate::superlinalg::scalar_inverse(&sm).is_none() && n > 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `(L_X g)(∂_a,∂_b) = X g_ab − g([X,∂_a],∂_b) − (−1)^{|X||a|} g(∂_a,[X,∂_b])`.
pub fn killing_residual<S: Scalar>(chart: &Chart, g: &InducedMetric<S>, x: &VectorField<S>) -> Result<Vec<Vec<Superfield<S>>>> {
    let px = x.parity(chart).ok_or_else(|| Error::Parity("Killing candidate not homogeneous".into()))?;
    let n = chart.dim();
    let coords: Vec<VectorField<S>> = (0..n).map(|a| VectorField::coord(chart, a)).collect();
    let br: Vec<VectorField<S>> = coords.iter().map(|c| forms::vf_bracket(chart, x, c)).collect::<Result<_>>()?;
    let t = g.table(chart)?;
    let mut out = vec![vec![Poly::zero(); n]; n];
    for a in 0..n {
        for b in 0..n {
            let mut v = &x.apply(chart, &t[a][b]) - &g.eval(chart, &br[a], &coords[b])?;
            let last = g.eval(chart, &coords[a], &br[b])?;
            v = if px & chart.coord_parity(a) == 1 { &v + &last } else { &v - &last };
            out[a][b] = v;
        }
    }
    Ok(out)
}

fn table_max<S: Scalar>(t: &[Vec<Superfield<S>>]) -> f64 {
    t.iter().flatten().map(Poly::max_abs).fold(0.0, f64::max)
}

/// Supergravity fields `𝒜 = e^IP_I + ½ω^{IJ}M_{IJ} + ψ^αQ_α`; `omega` holds
/// `ω^{IJ}` for `I<J` in the order of [`LORENTZ_PAIRS`].
#[derive(Clone, Debug, PartialEq)]
pub struct SugraFields<S: Scalar> {
    pub e: Vec<SuperForm<S>>,
    pub omega: Vec<SuperForm<S>>,
    pub psi: Vec<SuperForm<S>>,
}

impl<S: Scalar> SugraFields<S> {
    pub fn new(e: Vec<SuperForm<S>>, omega: Vec<SuperForm<S>>, psi: Vec<SuperForm<S>>) -> Result<Self> {
        if e.len() != 4 || omega.len() != 6 || psi.len() != 4 {
            return Err(Error::Arity { expected: 14, got: e.len() + omega.len() + psi.len() });
        }
        for (name, list, p) in [("e", &e, 0u8), ("omega", &omega, 0), ("psi", &psi, 1)] {
            for (i, w) in list.iter().enumerate() {
                if !w.has_parity(p) {
                    return Err(Error::Parity(format!("{name}[{i}] must have Grassmann parity {p}")));
                }
                if !w.is_zero() && forms::degree(w) != Some(1) {
                    return Err(Error::Dim(format!("{name}[{i}] must be a 1-form")));
                }
            }
        }
        Ok(SugraFields { e, omega, psi })
    }

    /// `e^I = dx^I`, `ω = 0`, `ψ = 0` (needs at least four even coordinates).
    pub fn flat(chart: &Chart) -> Result<Self> {
        if chart.m() < 4 {
            return Err(Error::Dim("flat fields need four even coordinates".into()));
        }
        Self::new((0..4).map(|i| chart.dz(i)).collect(), vec![Poly::zero(); 6], vec![Poly::zero(); 4])
    }

    /// `ω^{IJ}` for any ordered pair.
    pub fn omega_at(&self, i: usize, j: usize) -> SuperForm<S> {
        match lorentz_index(i, j) {
            None => Poly::zero(),
            Some((k, false)) => self.omega[k].clone(),
            Some((k, true)) => self.omega[k].neg(),
        }
    }

    pub fn to_connection(&self, alg: Arc<SuperLieAlgebra<S>>) -> Result<LieValuedForm<S>> {
        if alg.dim() != 14 {
            return Err(Error::AlgebraMismatch(format!("{} is not a 14-dimensional super Poincaré-type algebra", alg.name)));
        }
        let comps = self.e.iter().chain(&self.omega).chain(&self.psi).cloned().collect();
        LieValuedForm::new(alg, comps)
    }

    pub fn from_connection(a: &LieValuedForm<S>) -> Result<Self> {
        if a.alg.dim() != 14 {
            return Err(Error::AlgebraMismatch("expected a 14-dimensional algebra".into()));
        }
        Self::new(a.comps[..4].to_vec(), a.comps[4..10].to_vec(), a.comps[10..].to_vec())
    }

    pub fn max_abs(&self) -> f64 {
        self.e.iter().chain(&self.omega).chain(&self.psi).map(Poly::max_abs).fold(0.0, f64::max)
    }
}

fn forms_of<S: Scalar>(fs: &[Superfield<S>]) -> Vec<SuperForm<S>> {
    fs.iter().map(forms::func).collect()
}

fn mul_by<S: Scalar>(m: &M4<S>, v: &[SuperForm<S>]) -> Vec<SuperForm<S>> {
    clifford::apply(m, v)
}

fn mm<S: Scalar>(a: &M4<S>, b: &M4<S>) -> M4<S> {
    clifford::mmul(a, b)
}

/// `ψ̄ ∧ Γ χ = Σ ψ^α ∧ (CΓ)_{αβ} χ^β`.
pub fn bar<S: ComplexField>(gb: &GammaBasis<S>, psi: &[SuperForm<S>], gamma: &M4<S>, chi: &[SuperForm<S>]) -> SuperForm<S> {
    clifford::bilinear(gb, psi, gamma, chi)
}

/// `D^{(ω)}ψ = dψ + ¼ω^{IJ} ∧ γ_{IJ}ψ` on spinor-valued forms.
pub fn spin_covariant_derivative<S: ComplexField>(chart: &Chart, gb: &GammaBasis<S>, f: &SugraFields<S>, psi: &[SuperForm<S>]) -> Vec<SuperForm<S>> {
    let quarter = S::from_ratio(1, 4);
    let mut out: Vec<SuperForm<S>> = psi.iter().map(|p| forms::ext_d(chart, p)).collect();
    for i in 0..4 {
        for j in 0..4 {
            let w = f.omega_at(i, j);
            if w.is_zero() {
                continue;
            }
            let g = mul_by(&gb.gamma_ij(i, j), psi);
            for a in 0..4 {
                out[a] = &out[a] + &(&w * &g[a]).scale(&quarter);
            }
        }
    }
    out
}

/// Curvature blocks `F^I = Θ^I − ¼ψ̄∧γ^Iψ`, `F^{IJ} = F(ω)^{IJ}`,
/// `F^α = D^{(ω)}ψ^α`, with `Θ^I = de^I + ω^I_J∧e^J`.
#[derive(Clone, Debug, PartialEq)]
pub struct CartanCurvature<S: Scalar> {
    pub torsion: Vec<SuperForm<S>>,
    pub fi: Vec<SuperForm<S>>,
    /// `F^{IJ}` for `I<J`.
    pub fij: Vec<SuperForm<S>>,
    pub falpha: Vec<SuperForm<S>>,
}

impl<S: Scalar> CartanCurvature<S> {
    pub fn fij_at(&self, i: usize, j: usize) -> SuperForm<S> {
        match lorentz_index(i, j) {
            None => Poly::zero(),
            Some((k, false)) => self.fij[k].clone(),
            Some((k, true)) => self.fij[k].neg(),
        }
    }

    pub fn as_fields(&self) -> Vec<SuperForm<S>> {
        self.fi.iter().chain(&self.fij).chain(&self.falpha).cloned().collect()
    }
}

pub fn cartan_curvature<S: ComplexField>(chart: &Chart, gb: &GammaBasis<S>, f: &SugraFields<S>) -> CartanCurvature<S> {
    let quarter = S::from_ratio(1, 4);
    let mut torsion: Vec<SuperForm<S>> = f.e.iter().map(|w| forms::ext_d(chart, w)).collect();
    for i in 0..4 {
        for j in 0..4 {
            let w = f.omega_at(i, j);
            if !w.is_zero() {
                torsion[i] = &torsion[i] + &(&w * &f.e[j]).scale(&S::from_i64(ETA[j]));
            }
        }
    }
    let fi = (0..4).map(|i| &torsion[i] - &bar(gb, &f.psi, &gb.gamma_up[i], &f.psi).scale(&quarter)).collect();
    let fij = LORENTZ_PAIRS
        .iter()
        .map(|&(i, j)| {
            let mut w = forms::ext_d(chart, &f.omega_at(i, j));
            for k in 0..4 {
                let a = f.omega_at(i, k);
                let b = f.omega_at(k, j);
                if !a.is_zero() && !b.is_zero() {
                    w = &w + &(&a * &b).scale(&S::from_i64(ETA[k]));
                }
            }
            w
        })
        .collect();
    let falpha = spin_covariant_derivative(chart, gb, f, &f.psi);
    CartanCurvature { torsion, fi, fij, falpha }
}

/// `ℒ = ½F(ω)^{IJ}∧e^K∧e^L ε_{IJKL} + iψ̄∧γ_*γ_I D^{(ω)}ψ∧e^I`.
pub fn sugra_lagrangian<S: ComplexField>(chart: &Chart, gb: &GammaBasis<S>, f: &SugraFields<S>) -> SuperForm<S> {
    let curv = cartan_curvature(chart, gb, f);
    let half = S::from_ratio(1, 2);
    let mut l = einstein_term(&curv, &f.e).scale(&half);
    for i in 0..4 {
        let b = bar(gb, &f.psi, &mm(&gb.gamma_star, &gb.gamma[i]), &curv.falpha);
        l = &l + &(&b * &f.e[i]).scale(&S::i());
    }
    l
}

/// `Σ F^{IJ}∧e^K∧e^L ε_{IJKL}`.
pub fn einstein_term<S: Scalar>(curv: &CartanCurvature<S>, e: &[SuperForm<S>]) -> SuperForm<S> {
    let mut out = Poly::zero();
    for i in 0..4 {
        for j in 0..4 {
            let fij = curv.fij_at(i, j);
            if fij.is_zero() {
                continue;
            }
            for k in 0..4 {
                for l in 0..4 {
                    let eps = eps_down(i, j, k, l);
                    if eps != 0 {
                        out = &out + &(&(&fij * &e[k]) * &e[l]).scale(&S::from_i64(eps));
                    }
                }
            }
        }
    }
    out
}

/// `F^{IJ}∧F^K∧e^Lε_{IJKL} + iρ̄∧γ_*γ_Iρ∧e^I − iψ̄∧γ_*γ_Iρ∧F^I` with
/// `ρ = F^α`.
pub fn dl_rhs<S: ComplexField>(chart: &Chart, gb: &GammaBasis<S>, f: &SugraFields<S>) -> SuperForm<S> {
    let curv = cartan_curvature(chart, gb, f);
    let mut out = Poly::zero();
    for i in 0..4 {
        for j in 0..4 {
            let fij = curv.fij_at(i, j);
            if fij.is_zero() {
                continue;
            }
            for k in 0..4 {
                for l in 0..4 {
                    let eps = eps_down(i, j, k, l);
                    if eps != 0 {
                        out = &out + &(&(&fij * &curv.fi[k]) * &f.e[l]).scale(&S::from_i64(eps));
                    }
                }
            }
        }
    }
    let rho = &curv.falpha;
    for i in 0..4 {
        let g = mm(&gb.gamma_star, &gb.gamma[i]);
        let t1 = &bar(gb, rho, &g, rho) * &f.e[i];
        let t2 = &bar(gb, &f.psi, &g, rho) * &curv.fi[i];
        out = &out + &(&t1 - &t2).scale(&S::i());
    }
    out
}

/// `dℒ − RHS`; vanishes identically.
pub fn dl_identity_residual<S: ComplexField>(chart: &Chart, gb: &GammaBasis<S>, f: &SugraFields<S>) -> SuperForm<S> {
    let dl = forms::ext_d(chart, &sugra_lagrangian(chart, gb, f));
    &dl - &dl_rhs(chart, gb, f)
}

/// `Σ_I |ψ̄∧γ_*γ_Iρ − ρ̄∧γ_*γ_Iψ|` for odd 1-form `ψ` and odd 2-form `ρ`.
pub fn majorana_flip_residual<S: ComplexField>(gb: &GammaBasis<S>, psi: &[SuperForm<S>], rho: &[SuperForm<S>]) -> f64 {
    (0..4)
        .map(|i| {
            let g = mm(&gb.gamma_star, &gb.gamma[i]);
            (&bar(gb, psi, &g, rho) - &bar(gb, rho, &g, psi)).max_abs()
        })
        .fold(0.0, f64::max)
}

/// `θ̄^{IJ}_K ε e^K = −(i/4)(ε^{IJKL} b_{KLM} e^M + ε^{KLM[I} b_{KLM} e^{J]})`
/// with `b_{KLM} = ρ̄_{KL}γ_*γ_Mε` and weight-½ antisymmetrization; returns
/// the six `I<J` components.
pub fn theta_bar<S: ComplexField>(gb: &GammaBasis<S>, rho_ij: &[Vec<Vec<Superfield<S>>>], eps: &[Superfield<S>], e: &[SuperForm<S>]) -> Vec<SuperForm<S>> {
    let mut b = vec![vec![vec![Poly::zero(); 4]; 4]; 4];
    for k in 0..4 {
        for l in 0..4 {
            for m in 0..4 {
                b[k][l][m] = clifford::bilinear_raw(&gb.cg(&mm(&gb.gamma_star, &gb.gamma[m])), &rho_ij[k][l], eps);
            }
        }
    }
    let coef = S::i().mul(&S::from_ratio(-1, 4));
    let half = S::from_ratio(1, 2);
    LORENTZ_PAIRS
        .iter()
        .map(|&(i, j)| {
            let mut w: SuperForm<S> = Poly::zero();
            for k in 0..4 {
                for l in 0..4 {
                    for m in 0..4 {
                        if b[k][l][m].is_zero() {
                            continue;
                        }
                        let bf = forms::func(&b[k][l][m]);
                        let e1 = eps_up(i, j, k, l);
                        if e1 != 0 {
                            w = &w + &(&bf * &e[m]).scale(&S::from_i64(e1));
                        }
                        let e2 = eps_up(k, l, m, i);
                        if e2 != 0 {
                            w = &w + &(&bf * &e[j]).scale(&half.mul(&S::from_i64(e2)));
                        }
                        let e3 = eps_up(k, l, m, j);
                        if e3 != 0 {
                            w = &w - &(&bf * &e[i]).scale(&half.mul(&S::from_i64(e3)));
                        }
                    }
                }
            }
            w.scale(&coef)
        })
        .collect()
}

fn pair_at<S: Scalar>(v: &[SuperForm<S>], i: usize, j: usize) -> SuperForm<S> {
    match lorentz_index(i, j) {
        None => Poly::zero(),
        Some((k, false)) => v[k].clone(),
        Some((k, true)) => v[k].neg(),
    }
}

/// Third rheonomy condition with the `θ̄` ansatz inserted:
/// `Σ θ̄^{IJ} ∧ e^K ε_{IJKL} + iρ̄γ_*γ_Lε` for each `L`, where
/// `ρ = ½ρ_{IJ}e^I∧e^J`.
pub fn third_condition_residual<S: ComplexField>(gb: &GammaBasis<S>, rho_ij: &[Vec<Vec<Superfield<S>>>], eps: &[Superfield<S>], e: &[SuperForm<S>]) -> Vec<SuperForm<S>> {
    let th = theta_bar(gb, rho_ij, eps, e);
    let half = S::from_ratio(1, 2);
    let rho: Vec<SuperForm<S>> = (0..4)
        .map(|a| {
            let mut w = Poly::zero();
            for i in 0..4 {
                for j in 0..4 {
                    let c = &rho_ij[i][j][a];
                    if !c.is_zero() {
                        w = &w + &(&(&forms::func(c) * &e[i]) * &e[j]).scale(&half);
                    }
                }
            }
            w
        })
        .collect();
    let epsf = forms_of(eps);
    (0..4)
        .map(|l| {
            let mut lhs = Poly::zero();
            for i in 0..4 {
                for j in 0..4 {
                    let t = pair_at(&th, i, j);
                    if t.is_zero() {
                        continue;
                    }
                    for k in 0..4 {
                        let s = eps_down(i, j, k, l);
                        if s != 0 {
                            lhs = &lhs + &(&t * &e[k]).scale(&S::from_i64(s));
                        }
                    }
                }
            }
            let r = clifford::bilinear_raw(&gb.cg(&mm(&gb.gamma_star, &gb.gamma[l])), &rho, &epsf);
            &lhs + &r.scale(&S::i())
        })
        .collect()
}

/// Restriction to the bosonic sub-supermanifold: `θ = 0`, `dθ = 0`.
pub fn bosonic_restriction<S: Scalar>(chart: &Chart, w: &SuperForm<S>) -> SuperForm<S> {
    let coord = chart.gens.mask_of(GenTag::Coordinate);
    w.filter(|k| k.n_dth() == 0 && k.m.g & coord == 0)
}

/// Frame `e_I` dual to the bosonic restriction of `e^I` on a chart with four
/// even coordinates.
pub fn vielbein_frame<S: Scalar>(chart: &Chart, e: &[SuperForm<S>], jet: Option<u32>) -> Result<Vec<VectorField<S>>> {
    if chart.m() != 4 {
        return Err(Error::Dim("the vielbein frame needs exactly four even coordinates".into()));
    }
    let eb: Vec<SuperForm<S>> = e.iter().map(|w| bosonic_restriction(chart, w)).collect();
    let coeffs: Vec<Vec<Superfield<S>>> = eb.iter().map(|w| forms::one_form_coeffs(chart, w)).collect::<Result<_>>()?;
    let m = SuperMatrix::from_fn(4, 0, |i, mu| coeffs[i][mu].clone());
    let inv = minv(&m, jet).map_err(|_| Error::NotInvertible("degenerate vielbein".into()))?;
    Ok((0..4)
        .map(|i| {
            let mut comps = vec![Poly::zero(); chart.dim()];
            for (mu, c) in comps.iter_mut().enumerate().take(4) {
                *c = inv.get(mu, i).clone();
            }
            VectorField { comps }
        })
        .collect())
}

/// `ρ_{IJ}^α = ⟨e_J, e_I|ρ^α⟩` on the bosonic restriction.
pub fn rho_components<S: Scalar>(chart: &Chart, e: &[SuperForm<S>], rho: &[SuperForm<S>], jet: Option<u32>) -> Result<Vec<Vec<Vec<Superfield<S>>>>> {
    let fr = vielbein_frame(chart, e, jet)?;
    let rb: Vec<SuperForm<S>> = rho.iter().map(|w| bosonic_restriction(chart, w)).collect();
    Ok((0..4)
        .map(|i| (0..4).map(|j| rb.iter().map(|w| forms::pairing2(chart, &fr[j], &fr[i], w)).collect()).collect())
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SusyMode {
    Gauge,
    Rheonomic,
}

#[derive(Clone, Debug)]
pub struct SusyVariation<S: Scalar> {
    pub de: Vec<SuperForm<S>>,
    pub dpsi: Vec<SuperForm<S>>,
    pub domega: Vec<SuperForm<S>>,
}

/// `δe^I = ½ε̄γ^Iψ`, `δψ = D^{(ω)}ε`, and `δω^{IJ} = 0` (gauge) or
/// `θ̄^{IJ}_K ε e^K` (rheonomic, on the bosonic restriction).
pub fn susy_variation<S: ComplexField>(chart: &Chart, gb: &GammaBasis<S>, f: &SugraFields<S>, eps: &[Superfield<S>], mode: SusyMode, jet: Option<u32>) -> Result<SusyVariation<S>> {
    clifford::require_odd(eps)?;
    let ef = forms_of(eps);
    let half = S::from_ratio(1, 2);
    let de = (0..4).map(|i| bar(gb, &ef, &gb.gamma_up[i], &f.psi).scale(&half)).collect();
    let dpsi = spin_covariant_derivative(chart, gb, f, &ef);
    let domega = match mode {
        SusyMode::Gauge => vec![Poly::zero(); 6],
        SusyMode::Rheonomic => {
            let curv = cartan_curvature(chart, gb, f);
            let rho = rho_components(chart, &f.e, &curv.falpha, jet)?;
            let eb: Vec<SuperForm<S>> = f.e.iter().map(|w| bosonic_restriction(chart, w)).collect();
            theta_bar(gb, &rho, eps, &eb)
        }
    };
    Ok(SusyVariation { de, dpsi, domega })
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RheonomyReport {
    /// `ι_X F^I` on the bosonic restriction (needs a (4|4) chart).
    pub torsion_contraction: Option<f64>,
    /// `ι_X F^α` on the bosonic restriction (needs a (4|4) chart).
    pub gravitino_contraction: Option<f64>,
    pub third_condition: f64,
}

/// Residuals of the three rheonomy conditions for the odd parameter `ε`,
/// with `X` the horizontal field `⟨X|ψ⟩ = ε`, `⟨X|e⟩ = 0`.
pub fn rheonomy_residuals<S: ComplexField>(chart: &Chart, gb: &GammaBasis<S>, f: &SugraFields<S>, eps: &[Superfield<S>], jet: Option<u32>) -> Result<RheonomyReport> {
    clifford::require_odd(eps)?;
    let curv = cartan_curvature(chart, gb, f);
    let mut rep = RheonomyReport::default();
    if chart.m() == 4 && chart.n() == 4 {
        let cof: Vec<SuperForm<S>> = f.e.iter().chain(&f.psi).cloned().collect();
        let fr = forms::dual_frame(chart, &cof, jet)?;
        let mut x = VectorField::zero(chart);
        for a in 0..4 {
            x = x.add(&fr[4 + a].lmul(&eps[a]));
        }
        let contract = |ws: &[SuperForm<S>]| {
            ws.iter()
                .map(|w| bosonic_restriction(chart, &forms::interior(chart, &x, w)).max_abs())
                .fold(0.0, f64::max)
        };
        rep.torsion_contraction = Some(contract(&curv.fi));
        rep.gravitino_contraction = Some(contract(&curv.falpha));
    }
    let rho = rho_components(chart, &f.e, &curv.falpha, jet)?;
    let eb: Vec<SuperForm<S>> = f.e.iter().map(|w| bosonic_restriction(chart, w)).collect();
    rep.third_condition = third_condition_residual(gb, &rho, eps, &eb).iter().map(Poly::max_abs).fold(0.0, f64::max);
    Ok(rep)
}

/// `D^{(ω)}ε′ − (1/2L) e^Iγ_Iε′`; `inv_two_l = None` drops the last term.
pub fn killing_spinor_residual<S: ComplexField>(chart: &Chart, gb: &GammaBasis<S>, f: &SugraFields<S>, eps_prime: &[Superfield<S>], inv_two_l: Option<&S>) -> Vec<SuperForm<S>> {
    let ef = forms_of(eps_prime);
    let mut out = spin_covariant_derivative(chart, gb, f, &ef);
    if let Some(c) = inv_two_l {
        for i in 0..4 {
            let g = mul_by(&gb.gamma[i], &ef);
            for a in 0..4 {
                out[a] = &out[a] - &(&f.e[i] * &g[a]).scale(c);
            }
        }
    }
    out
}

/// The (4|4) super Minkowski chart with its left Maurer–Cartan form,
/// left- and right-invariant frames and `σ` parameters.
pub struct SuperMinkowski<S: Scalar> {
    pub alg: Arc<SuperLieAlgebra<S>>,
    pub chart: Chart,
    pub mc: LieValuedForm<S>,
    pub left: Vec<VectorField<S>>,
    pub right: Vec<VectorField<S>>,
}

pub fn super_minkowski<S: ComplexField>(gb: &GammaBasis<S>, params: &[&str]) -> Result<SuperMinkowski<S>> {
    let alg = Arc::new(superlie::t134(gb)?);
    let chart = superlie::t_chart(params)?;
    let left = superlie::left_invariant_frame_t(gb, &chart);
    let right = superlie::right_invariant_frame_t(gb, &chart);
    let mc = superlie::maurer_cartan_from_frame(alg.clone(), &chart, &left)?;
    Ok(SuperMinkowski { alg, chart, mc, left, right })
}

impl<S: ComplexField> SuperMinkowski<S> {
    /// `𝒮(P_I,P_J) = η_IJ`, `𝒮(Q_α,Q_β) = C_αβ`.
    pub fn metric(&self, gb: &GammaBasis<S>) -> Result<InducedMetric<S>> {
        let s = t134_metric(gb)?;
        let split = ReductiveSplit::new(&self.alg, vec![])?;
        induced_metric(&self.mc, &split, &s)
    }

    /// Supergravity fields `e^I = θ_MC^{P_I}`, `ω = 0`, `ψ = θ_MC^{Q}`.
    pub fn fields(&self) -> Result<SugraFields<S>> {
        SugraFields::new(self.mc.comps[..4].to_vec(), vec![Poly::zero(); 6], self.mc.comps[4..].to_vec())
    }

    /// Largest `L_X g` entry over all right-invariant fields.
    pub fn killing_residual(&self, gb: &GammaBasis<S>) -> Result<f64> {
        let g = self.metric(gb)?;
        let mut r: f64 = 0.0;
        for x in &self.right {
            r = r.max(table_max(&killing_residual(&self.chart, &g, x)?));
        }
        Ok(r)
    }

    /// `ε′ = ι_{ε^R}ψ` for `ε = Σ ε^α Q_α` with odd coefficients.
    pub fn eps_prime(&self, eps: &[Superfield<S>]) -> Vec<Superfield<S>> {
        let mut x = VectorField::zero(&self.chart);
        for a in 0..4 {
            x = x.add(&self.right[4 + a].lmul(&eps[a]));
        }
        self.mc.comps[4..].iter().map(|w| forms::pairing(&self.chart, &x, w)).collect()
    }
}

pub fn t134_metric<S: ComplexField>(gb: &GammaBasis<S>) -> Result<SuperBilinearForm<S>> {
    let mut m = vec![vec![S::zero(); 8]; 8];
    for i in 0..4 {
        m[i][i] = S::from_i64(ETA[i]);
        for j in 0..4 {
            m[4 + i][4 + j] = gb.c[i][j].clone();
        }
    }
    SuperBilinearForm::new(vec![0, 0, 0, 0, 1, 1, 1, 1], m)
}

/// `K* = −[ε,η]` for real spinors `ε, η ∈ 𝔤₁` against
/// `−ε̄γ^Iη P_I − (1/4L)ε̄γ^{IJ}η M_{IJ}`.
#[derive(Clone, Debug, Serialize)]
pub struct KillingBilinear {
    pub computed: Vec<f64>,
    pub formula: Vec<f64>,
    pub p_residual: f64,
    pub m_residual: f64,
}

pub fn killing_bilinear<S: ComplexField>(alg: &SuperLieAlgebra<S>, gb: &GammaBasis<S>, inv_l: &S, eps: &[S], eta: &[S]) -> Result<KillingBilinear> {
    if alg.dim() != 14 || eps.len() != 4 || eta.len() != 4 {
        return Err(Error::Arity { expected: 4, got: eps.len().min(eta.len()) });
    }
    let mut a = vec![S::zero(); 14];
    let mut b = vec![S::zero(); 14];
    a[Q_OFFSET..].clone_from_slice(eps);
    b[Q_OFFSET..].clone_from_slice(eta);
    let br = alg.bracket(&a, &b);
    let computed: Vec<S> = br[..Q_OFFSET].iter().map(|c| c.neg()).collect();
    let bl = |g: &M4<S>| clifford::bilinear_raw(&gb.cg(g), eps, eta);
    let mut formula = vec![S::zero(); Q_OFFSET];
    for i in 0..4 {
        formula[i] = bl(&gb.gamma_up[i]).neg();
    }
    // −(1/4L) Σ_{all IJ} = −(1/2L) Σ_{I<J}
    for (k, &(i, j)) in LORENTZ_PAIRS.iter().enumerate() {
        formula[M_OFFSET + k] = bl(&gb.gamma_ij_up(i, j)).mul(inv_l).mul(&S::from_ratio(-1, 2));
    }
    let d = |r: std::ops::Range<usize>| r.map(|k| computed[k].sub(&formula[k]).magnitude()).fold(0.0, f64::max);
    Ok(KillingBilinear {
        computed: computed.iter().map(|c| c.to_c64().re).collect(),
        formula: formula.iter().map(|c| c.to_c64().re).collect(),
        p_residual: d(0..4),
        m_residual: d(M_OFFSET..Q_OFFSET),
    })
}

/// OSp(1|4) on the exponential chart `g = exp(Σ z^i e_i)`, Maurer–Cartan
/// form kept to even-coordinate degree `jet`.
pub struct AdsModel<S: Scalar> {
    pub alg: Arc<SuperLieAlgebra<S>>,
    pub chart: Chart,
    pub z: Vec<Superfield<S>>,
    pub mc: LieValuedForm<S>,
    pub jet: u32,
    pub l: S,
}

pub fn superads_model<S: ComplexField>(gb: &GammaBasis<S>, l: &S, jet: u32, params: usize) -> Result<AdsModel<S>> {
    if jet > MAX_JET {
        return Err(Error::Capacity(format!("jet order {jet} exceeds {MAX_JET}")));
    }
    let alg = Arc::new(superlie::osp14(gb, l)?);
    let even: Vec<String> = alg.labels[..Q_OFFSET].to_vec();
    let odd: Vec<String> = alg.labels[Q_OFFSET..].to_vec();
    let par: Vec<String> = (1..=params).map(|i| format!("s{i}")).collect();
    let refs = |v: &[String]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let (e, o, p) = (refs(&even), refs(&odd), refs(&par));
    let chart = Chart::new(
        &e.iter().map(String::as_str).collect::<Vec<_>>(),
        &o.iter().map(String::as_str).collect::<Vec<_>>(),
        &p.iter().map(String::as_str).collect::<Vec<_>>(),
    )?;
    let z: Vec<Superfield<S>> = (0..alg.dim()).map(|i| chart.coord(i)).collect();
    let mc = superlie::maurer_cartan_exp(alg.clone(), &chart, &z, jet, jet as usize + 2 * chart.n() + 2)?;
    Ok(AdsModel { alg, chart, z, mc, jet, l: l.clone() })
}

impl<S: ComplexField> AdsModel<S> {
    /// `F(θ_MC) = dθ + ½[θ∧θ]` through degree `jet − 1`.
    pub fn curvature_residual(&self) -> Result<f64> {
        if self.jet == 0 {
            return Ok(0.0);
        }
        let j = self.jet - 1;
        let d = self.mc.ext_d(&self.chart).map(|w| forms::truncate_form(w, j));
        // only factor degrees p + q ≤ j contribute
        let mut br = LieValuedForm::zero(self.alg.clone());
        for p in 0..=j {
            let part = self.mc.map(|w| degree_part(w, p));
            let rest = self.mc.map(|w| forms::truncate_form(w, j - p));
            br = br.add(&forms::bracket_wedge(&part, &rest)?)?;
        }
        let f = d.add(&br.scale(&forms::curvature_factor()))?;
        Ok(f.max_abs())
    }

    pub fn fields(&self) -> Result<SugraFields<S>> {
        SugraFields::from_connection(&self.mc)
    }

    /// Twistor residual `D^{(ω)}ε′ − (1/2L)e^Iγ_Iε′` for `ε′ = ι_{ε^R}E`
    /// (the `Q`-part of `Ad_{g⁻¹}ε`), on the bosonic restriction through
    /// degree `jet − 1`.
    pub fn killing_spinor_residual(&self, gb: &GammaBasis<S>, eps: &[Superfield<S>]) -> Result<f64> {
        clifford::require_odd(eps)?;
        let mut y = vec![Poly::zero(); self.alg.dim()];
        y[Q_OFFSET..].clone_from_slice(eps);
        let ep = self.eps_prime(&y)[Q_OFFSET..].to_vec();
        let j = self.jet.saturating_sub(1);
        // θ = 0, dθ = 0 is a pullback, so restrict before differentiating
        let restrict = |w: &SuperForm<S>| bosonic_restriction(&self.chart, w);
        let f = self.fields()?;
        let low = |ws: &[SuperForm<S>]| ws.iter().map(|w| forms::truncate_form(&restrict(w), j)).collect::<Vec<_>>();
        let fb = SugraFields { e: low(&f.e), omega: low(&f.omega), psi: vec![Poly::zero(); 4] };
        let epb: Vec<Superfield<S>> = ep.iter().map(|e| forms::to_function(&restrict(&forms::func(e)))).collect();
        let inv = self.l.mul(&S::from_i64(2)).inv().ok_or_else(|| Error::Calibration("L = 0".into()))?;
        let r = killing_spinor_residual(&self.chart, gb, &fb, &epb, Some(&inv));
        Ok(r.iter().map(|w| forms::truncate_form(w, j).max_abs()).fold(0.0, f64::max))
    }

    /// `Ad_{exp(−Z)}y`, truncated to degree `jet` after every bracket.
    pub fn eps_prime(&self, y: &[Superfield<S>]) -> Vec<Superfield<S>> {
        let mut out: Vec<Superfield<S>> = y.iter().map(|f| superfield::truncate(f, self.jet)).collect();
        let mut term = out.clone();
        for k in 1..=(self.jet as usize + self.chart.n() + 1) {
            let f = S::from_ratio(-1, k as i64);
            term = self.alg.bracket_ring(&self.z, &term).iter().map(|t| superfield::truncate(&t.scale(&f), self.jet)).collect();
            if term.iter().all(Poly::is_zero) {
                break;
            }
            out = out.iter().zip(&term).map(|(a, b)| a + b).collect();
        }
        out
    }

    /// `g(∂_a,∂_b)` of the induced metric at the origin.
    pub fn metric_at_origin(&self) -> Result<Vec<Vec<S>>> {
        let split = ReductiveSplit::by_prefix(&self.alg, "M")?;
        let s = self.alg.form.clone().ok_or_else(|| Error::Unknown("osp(1|4) without invariant form".into()))?;
        let sm = restrict_form(&s, &split)?;
        let g = induced_metric(&self.mc, &split, &sm)?;
        let t = g.table(&self.chart)?;
        let zero = vec![S::zero(); self.chart.m()];
        Ok(t.iter().map(|r| r.iter().map(|f| superfield::eval_body(f, &zero)).collect()).collect())
    }
}

/// Part of `w` of even-coordinate degree exactly `p`.
fn degree_part<S: Scalar>(w: &SuperForm<S>, p: u32) -> SuperForm<S> {
    w.filter(|k| k.m.x.iter().map(|&e| e as u32).sum::<u32>() == p)
}

/// Restriction of a form on `𝔤` to `𝔤/𝔥`.
pub fn restrict_form<S: Scalar>(s: &SuperBilinearForm<S>, split: &ReductiveSplit) -> Result<SuperBilinearForm<S>> {
    let m: Vec<Vec<S>> = split.m.iter().map(|&i| split.m.iter().map(|&j| s.get(i, j).clone()).collect()).collect();
    SuperBilinearForm::new(split.m.iter().map(|&i| s.parities[i]).collect(), m)
}

/// Ehresmann connection on the trivial `G`-extension `U × G` together with
/// the fundamental (left-invariant, vertical) fields.
pub struct EhresmannLift<S: Scalar> {
    pub chart: Chart,
    pub connection: LieValuedForm<S>,
    pub fundamental: Vec<VectorField<S>>,
    /// Number of odd coordinates on the base chart.
    pub base_odd: usize,
    pub base_even: usize,
}

fn shift_generators(g: u32, from: usize, by: usize) -> u32 {
    let low = g & ((1u32 << from) - 1);
    let high = g >> from;
    low | (high << (from + by))
}

/// Pulls forms from the base chart onto `U × G`.
fn lift_form<S: Scalar>(base: &Chart, q: usize, w: &SuperForm<S>) -> SuperForm<S> {
    Poly::from_terms(
        w.terms()
            .iter()
            .map(|(k, c)| {
                let mut k2 = *k;
                k2.m.g = shift_generators(k.m.g, base.n(), q);
                (k2, c.clone())
            })
            .collect(),
    )
}

/// `g = e` pullback from `U × G` back to the base.
pub fn pullback_at_identity<S: Scalar>(lift: &EhresmannLift<S>, w: &SuperForm<S>) -> SuperForm<S> {
    let (m, n) = (lift.base_even, lift.base_odd);
    let q = lift.chart.n() - n;
    let gmask = ((1u32 << q) - 1) << n;
    Poly::from_terms(
        w.terms()
            .iter()
            .filter(|(k, _)| {
                k.dx >> m == 0 && k.dth[n..].iter().all(|&e| e == 0) && k.m.x[m..].iter().all(|&e| e == 0) && k.m.g & gmask == 0
            })
            .map(|(k, c)| {
                let mut k2 = *k;
                let g = k.m.g;
                k2.m.g = (g & ((1u32 << n) - 1)) | ((g >> (n + q)) << n);
                (k2, c.clone())
            })
            .collect(),
    )
}

/// `Ad_{g⁻¹}𝒜 + g⁻¹dg` on `U × G` with exponential coordinates on `G`.
pub fn extend_cartan_to_ehresmann<S: Scalar>(base: &Chart, a: &LieValuedForm<S>, jet: u32, max_terms: usize) -> Result<EhresmannLift<S>> {
    let alg = a.alg.clone();
    let even_idx: Vec<usize> = (0..alg.dim()).filter(|&i| alg.parity[i] == 0).collect();
    let odd_idx: Vec<usize> = (0..alg.dim()).filter(|&i| alg.parity[i] == 1).collect();
    let params: Vec<String> = base.gens.names()[base.n()..].to_vec();
    let mut even: Vec<String> = base.even.clone();
    even.extend(even_idx.iter().map(|&i| format!("g_{}", alg.labels[i])));
    let mut odd: Vec<String> = base.odd.clone();
    odd.extend(odd_idx.iter().map(|&i| format!("g_{}", alg.labels[i])));
    let r = |v: &[String]| v.iter().map(|s| s.to_string()).collect::<Vec<String>>();
    let (e, o, p) = (r(&even), r(&odd), r(&params));
    let chart = Chart::new(
        &e.iter().map(String::as_str).collect::<Vec<_>>(),
        &o.iter().map(String::as_str).collect::<Vec<_>>(),
        &p.iter().map(String::as_str).collect::<Vec<_>>(),
    )?;
    let q = odd_idx.len();
    let lifted = LieValuedForm::new(alg.clone(), a.comps.iter().map(|w| lift_form(base, q, w)).collect())?;
    let mut z = vec![Poly::zero(); alg.dim()];
    for (r, &i) in even_idx.iter().enumerate() {
        z[i] = superfield::var(base.m() + r);
    }
    for (r, &i) in odd_idx.iter().enumerate() {
        z[i] = superfield::gen(base.n() + r);
    }
    let connection = superlie::extend_to_ehresmann(&lifted, &chart, &z, jet, max_terms)?;
    let mc = superlie::maurer_cartan_exp(alg.clone(), &chart, &z, jet, max_terms)?;
    // coframe: base differentials, then the vertical Maurer–Cartan components
    let mut cof: Vec<SuperForm<S>> = (0..base.m()).map(|j| chart.dz(j)).collect();
    cof.extend((0..base.n()).map(|a| chart.dz(base.m() + even_idx.len() + a)));
    cof.extend(mc.comps.iter().cloned());
    // dual_frame pairs coframe[i] with frame[i]; order the base block as the
    // chart lists coordinates
    let frame = forms::dual_frame(&chart, &cof, Some(jet))?;
    let nb = base.m() + base.n();
    let fundamental = frame[nb..].to_vec();
    Ok(EhresmannLift { chart, connection, fundamental, base_odd: base.n(), base_even: base.m() })
}

/// Generic sampling points in the chart's box domain.
pub fn sample_points<S: Scalar>(chart: &Chart, n: usize) -> Vec<Vec<S>> {
    (0..n)
        .map(|k| {
            chart
                .domain
                .iter()
                .enumerate()
                .map(|(i, &(a, b))| {
                    let t = ((k * 7 + i * 3) % 11) as f64 / 11.0;
                    S::from_c64(C64::new(a + (b - a) * t, 0.0)).unwrap_or_else(S::zero)
                })
                .collect()
        })
        .collect()
}

/// Parity of a form key, re-exported for callers assembling forms by hand.
pub fn key_parity(k: FormKey) -> u8 {
    k.parity()
}
