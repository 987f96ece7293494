//! Finite-dimensional super Lie algebras by structure constants, the
//! super-Poincaré and orthosymplectic algebras, the super translation group
//! and Maurer–Cartan forms.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::clifford::{GammaBasis, M4, ETA};
use crate::error::{Error, Result};
use crate::forms::{self, Chart, LieValuedForm, SuperForm, VectorField};
use crate::poly::{Poly, Ring};
use crate::scalar::{ComplexField, Scalar};
use crate::superfield::Superfield;
use crate::superlinalg::{decompose, SuperBilinearForm, SuperMatrix};

/// Super Lie algebra with a homogeneous basis and structure constants
/// `[e_i,e_j] = f^k_ij e_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperLieAlgebra<S> {
    pub name: String,
    pub labels: Vec<String>,
    pub parity: Vec<u8>,
    /// `f[i][j]` is the sparse list of `(k, f^k_ij)`.
    pub f: Vec<Vec<Vec<(usize, S)>>>,
    /// Optional matrix realization `e_i ↦ mats[i]`.
    pub realization: Option<Vec<SuperMatrix<S>>>,
    /// Optional even graded-symmetric bilinear form.
    pub form: Option<SuperBilinearForm<S>>,
    /// Matrix `G` with `XᵀˢG + GX = 0` on the realization, when known.
    pub invariant_matrix: Option<SuperMatrix<S>>,
}

impl<S: Scalar> SuperLieAlgebra<S> {
    /// Builds from dense constants `c[i][j][k] = f^k_ij`.
    pub fn from_dense(name: &str, labels: Vec<String>, parity: Vec<u8>, c: Vec<Vec<Vec<S>>>) -> Result<Self> {
        let n = labels.len();
        if parity.len() != n || c.len() != n || c.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != n)) {
            return Err(Error::Dim("structure constant shape".into()));
        }
        let f = c
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|v| v.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect())
                    .collect()
            })
            .collect();
        Ok(SuperLieAlgebra { name: name.into(), labels, parity, f, realization: None, form: None, invariant_matrix: None })
    }

    /// Structure constants from a matrix realization by decomposing graded
    /// commutators in the span of the basis matrices.
    pub fn from_realization(name: &str, labels: Vec<String>, mats: Vec<SuperMatrix<S>>) -> Result<Self> {
        let n = mats.len();
        let parity: Vec<u8> = mats.iter().map(|m| m.parity()).collect::<Result<_>>()?;
        let basis: Vec<Vec<S>> = mats.iter().map(|m| m.entries().to_vec()).collect();
        let mut c = vec![vec![vec![S::zero(); n]; n]; n];
        for i in 0..n {
            for j in 0..n {
                let b = mats[i].graded_comm(&mats[j])?;
                c[i][j] = decompose(&basis, b.entries())
                    .ok_or_else(|| Error::AlgebraMismatch(format!("[{},{}] leaves the span", labels[i], labels[j])))?;
            }
        }
        let mut a = Self::from_dense(name, labels, parity, c)?;
        a.realization = Some(mats);
        Ok(a)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn index(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::Unknown(format!("generator '{label}' of {}", self.name)))
    }

    pub fn dense(&self, i: usize, j: usize) -> Vec<S> {
        let mut v = vec![S::zero(); self.dim()];
        for (k, c) in &self.f[i][j] {
            v[*k] = c.clone();
        }
        v
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> S {
        self.f[i][j].iter().find(|(kk, _)| *kk == k).map(|(_, c)| c.clone()).unwrap_or_else(S::zero)
    }

    /// Bracket of numeric coefficient vectors (homogeneous pieces bracket by
    /// the constants; no Grassmann signs).
    pub fn bracket(&self, a: &[S], b: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.dim()];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let ab = ai.mul(bj);
                for (k, c) in &self.f[i][j] {
                    out[*k].add_assign(&ab.mul(c));
                }
            }
        }
        out
    }

    /// Bracket in `R ⊗ 𝔤` for a graded ring `R`:
    /// `[a^i e_i, b^j e_j] = Σ a^i 𝔠^{|e_i|}(b^j) f^k_ij e_k`.
    pub fn bracket_ring<T: Ring<Scalar = S>>(&self, a: &[T], b: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.dim()];
        let binv: Vec<T> = b.iter().map(T::involute).collect();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() || self.f[i][j].is_empty() {
                    continue;
                }
                let p = ai.mul(if self.parity[i] == 1 { &binv[j] } else { bj });
                if p.is_zero() {
                    continue;
                }
                for (k, c) in &self.f[i][j] {
                    out[*k] = out[*k].add(&p.scale(c));
                }
            }
        }
        out
    }

    /// `(ad e_i)^k_j = f^k_ij`.
    pub fn ad_matrix(&self, i: usize) -> Vec<Vec<S>> {
        let n = self.dim();
        let mut m = vec![vec![S::zero(); n]; n];
        for j in 0..n {
            for (k, c) in &self.f[i][j] {
                m[*k][j] = c.clone();
            }
        }
        m
    }

    /// Max violation of `f^k_ij = −(−1)^{|i||j|} f^k_ji`.
    pub fn antisymmetry_residual(&self) -> f64 {
        let n = self.dim();
        let mut r: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let a = self.constant(i, j, k);
                    let b = self.constant(j, i, k);
                    let s = if self.parity[i] & self.parity[j] == 1 { a.sub(&b) } else { a.add(&b) };
                    r = r.max(s.magnitude());
                }
            }
        }
        r
    }

    /// Max magnitude of a constant with `|e_k| ≠ |e_i| + |e_j|`.
    pub fn parity_residual(&self) -> f64 {
        let mut r: f64 = 0.0;
        for (i, row) in self.f.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                for (k, c) in v {
                    if self.parity[*k] != (self.parity[i] + self.parity[j]) & 1 {
                        r = r.max(c.magnitude());
                    }
                }
            }
        }
        r
    }

    /// Max residual of the graded Jacobi identity
    /// `(−1)^{|i||k|}[e_i,[e_j,e_k]] + cyclic = 0` over all basis triples.
    pub fn jacobi_residual(&self) -> f64 {
        let n = self.dim();
        let unit = |i: usize| {
            let mut v = vec![S::zero(); n];
            v[i] = S::one();
            v
        };
        let mut r: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (pi, pj, pk) = (self.parity[i], self.parity[j], self.parity[k]);
                    let t1 = self.bracket(&unit(i), &self.dense(j, k));
                    let t2 = self.bracket(&unit(j), &self.dense(k, i));
                    let t3 = self.bracket(&unit(k), &self.dense(i, j));
                    let sg = |p: u8| if p & 1 == 1 { S::from_i64(-1) } else { S::one() };
                    let (s1, s2, s3) = (sg(pi * pk), sg(pj * pi), sg(pk * pj));
                    for l in 0..n {
                        let mut v = t1[l].mul(&s1);
                        v.add_assign(&t2[l].mul(&s2));
                        v.add_assign(&t3[l].mul(&s3));
                        r = r.max(v.magnitude());
                    }
                }
            }
        }
        r
    }

    /// Max residual of `[ρ(e_i),ρ(e_j)] = f^k_ij ρ(e_k)` for the realization.
    pub fn realization_residual(&self) -> Result<f64> {
        let mats = self.realization.as_ref().ok_or_else(|| Error::Unknown(format!("{} has no realization", self.name)))?;
        let mut r: f64 = 0.0;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let mut rhs = SuperMatrix::<S>::zeros(mats[0].dims().0, mats[0].dims().1);
                for (k, c) in &self.f[i][j] {
                    rhs = rhs.add(&mats[*k].scale(c))?;
                }
                r = r.max(mats[i].graded_comm(&mats[j])?.sub(&rhs)?.max_abs());
            }
        }
        Ok(r)
    }

    pub fn with_form(mut self, form: SuperBilinearForm<S>) -> Result<Self> {
        if form.parities != self.parity {
            return Err(Error::AlgebraMismatch("form parities differ from algebra parities".into()));
        }
        self.form = Some(form);
        Ok(self)
    }

    /// Max of `|𝒮([z,x],y) + (−1)^{|z||x|} 𝒮(x,[z,y])|` over `z` in `zs` and
    /// all basis `x, y`.
    pub fn form_invariance_residual(&self, zs: &[usize]) -> Result<f64> {
        let form = self.form.as_ref().ok_or_else(|| Error::Unknown(format!("{} has no bilinear form", self.name)))?;
        let n = self.dim();
        let mut r: f64 = 0.0;
        for &z in zs {
            for x in 0..n {
                for y in 0..n {
                    let zx = self.dense(z, x);
                    let zy = self.dense(z, y);
                    let mut acc = S::zero();
                    for k in 0..n {
                        acc.add_assign(&zx[k].mul(form.get(k, y)));
                        let t = form.get(x, k).mul(&zy[k]);
                        if self.parity[z] & self.parity[x] == 1 {
                            acc = acc.sub(&t);
                        } else {
                            acc.add_assign(&t);
                        }
                    }
                    r = r.max(acc.magnitude());
                }
            }
        }
        Ok(r)
    }

    pub fn to_json(&self) -> Value {
        let brackets: Vec<Value> = (0..self.dim())
            .flat_map(|i| (0..self.dim()).map(move |j| (i, j)))
            .filter(|&(i, j)| i <= j && !self.f[i][j].is_empty())
            .map(|(i, j)| {
                json!({
                    "left": self.labels[i],
                    "right": self.labels[j],
                    "result": self.f[i][j].iter().map(|(k, c)| json!({"generator": self.labels[*k], "coef": c.to_json()})).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "name": self.name,
            "basis": self.labels.iter().zip(&self.parity).map(|(l, p)| json!({"label": l, "parity": p})).collect::<Vec<_>>(),
            "brackets": brackets,
        })
    }

    /// Indices of basis elements whose label starts with `prefix`.
    pub fn indices_with_prefix(&self, prefix: &str) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.labels[i].starts_with(prefix)).collect()
    }
}

/// Ordered pairs `I<J` labelling the Lorentz generators `M_IJ`.
pub const LORENTZ_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Basis position of `M_IJ` inside the Lorentz block with its sign
/// (`M_JI = −M_IJ`); `None` on the diagonal.
pub fn lorentz_index(i: usize, j: usize) -> Option<(usize, bool)> {
    if i == j {
        return None;
    }
    let (a, b, neg) = if i < j { (i, j, false) } else { (j, i, true) };
    LORENTZ_PAIRS.iter().position(|&p| p == (a, b)).map(|k| (k, neg))
}

fn labels_p() -> Vec<String> {
    (0..4).map(|i| format!("P{i}")).collect()
}

fn labels_m() -> Vec<String> {
    LORENTZ_PAIRS.iter().map(|(a, b)| format!("M{a}{b}")).collect()
}

fn labels_q() -> Vec<String> {
    (0..4).map(|i| format!("Q{i}")).collect()
}

/// `𝔤𝔩(p|q)` on the elementary matrices `E_kl` (labels `E11, E12, …`).
pub fn gl<S: Scalar>(p: usize, q: usize) -> Result<SuperLieAlgebra<S>> {
    let n = p + q;
    if n == 0 || n > 9 {
        return Err(Error::Dim(format!("gl({p}|{q}) is outside 1 ≤ p + q ≤ 9")));
    }
    let mut labels = Vec::with_capacity(n * n);
    let mut mats = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            labels.push(format!("E{}{}", i + 1, j + 1));
            mats.push(SuperMatrix::from_fn(p, q, |a, b| if (a, b) == (i, j) { S::one() } else { S::zero() }));
        }
    }
    SuperLieAlgebra::from_realization(&format!("gl({p}|{q})"), labels, mats)
}

/// Super translation algebra `𝔱^{1,3|4}`: basis `P0..P3, Q0..Q3` with
/// `[Q_α,Q_β] = ½(Cγ^I)_{αβ} P_I`.
pub fn t134<S: ComplexField>(gb: &GammaBasis<S>) -> Result<SuperLieAlgebra<S>> {
    let mut labels = labels_p();
    labels.extend(labels_q());
    let parity = vec![0, 0, 0, 0, 1, 1, 1, 1];
    let mut c = vec![vec![vec![S::zero(); 8]; 8]; 8];
    let half = S::from_ratio(1, 2);
    for i in 0..4 {
        let cg = gb.cg(&gb.gamma_up[i]);
        for a in 0..4 {
            for b in 0..4 {
                c[4 + a][4 + b][i] = half.mul(&cg[a][b]);
            }
        }
    }
    let form = translation_form(gb, 4, 8);
    let mut alg = SuperLieAlgebra::from_dense("t134", labels, parity, c)?.with_form(form)?;
    alg.realization = Some(t134_realization(gb));
    Ok(alg)
}

/// Faithful realization of `𝔱^{1,3|4}` in `Mat(5|4)` on `span(v, u_I | w_α)`:
/// `P_I v = u_I`, `Q_α v = w_α`, `Q_α w_β = ¼(Cγ^I)_{αβ} u_I`.
pub fn t134_realization<S: ComplexField>(gb: &GammaBasis<S>) -> Vec<SuperMatrix<S>> {
    let mut mats = Vec::new();
    for i in 0..4 {
        let m = SuperMatrix::from_fn(5, 4, |r, c| if r == 1 + i && c == 0 { S::one() } else { S::zero() });
        mats.push(m.with_parity(0).expect("even"));
    }
    let q = S::from_ratio(1, 4);
    let cg: Vec<M4<S>> = (0..4).map(|i| gb.cg(&gb.gamma_up[i])).collect();
    for al in 0..4 {
        let m = SuperMatrix::from_fn(5, 4, |r, c| {
            if r == 5 + al && c == 0 {
                S::one()
            } else if (1..5).contains(&r) && c >= 5 {
                cg[r - 1][al][c - 5].mul(&q)
            } else {
                S::zero()
            }
        });
        mats.push(m.with_parity(1).expect("odd"));
    }
    mats
}

/// Adjoint realization `e_i ↦ ad(e_i)`; needs an even-first basis.
pub fn adjoint_realization<S: Scalar>(alg: &SuperLieAlgebra<S>) -> Result<Vec<SuperMatrix<S>>> {
    let p = alg.parity.iter().take_while(|&&x| x == 0).count();
    if alg.parity[p..].iter().any(|&x| x == 0) {
        return Err(Error::Dim("adjoint realization needs even basis elements first".into()));
    }
    let q = alg.dim() - p;
    (0..alg.dim())
        .map(|i| {
            let ad = alg.ad_matrix(i);
            SuperMatrix::from_fn(p, q, |r, c| ad[r][c].clone()).with_parity(alg.parity[i])
        })
        .collect()
}

/// `𝒮(P_I,P_J) = η_IJ`, `𝒮(Q_α,Q_β) = C_αβ` on a basis whose `P` block
/// starts at 0 and `Q` block at `q0`; everything else pairs to 0.
fn translation_form<S: ComplexField>(gb: &GammaBasis<S>, q0: usize, n: usize) -> SuperBilinearForm<S> {
    let mut m = vec![vec![S::zero(); n]; n];
    let mut par = vec![0u8; n];
    for i in 0..4 {
        m[i][i] = S::from_i64(ETA[i]);
        par[q0 + i] = 1;
    }
    for a in 0..4 {
        for b in 0..4 {
            m[q0 + a][q0 + b] = gb.c[a][b].clone();
        }
    }
    SuperBilinearForm::new(par, m).expect("translation form is graded symmetric")
}

/// Super-Poincaré algebra `𝔦𝔰𝔬(1,3|4)`: basis `P0..P3, M01..M23, Q0..Q3`.
pub fn iso134<S: ComplexField>(gb: &GammaBasis<S>) -> Result<SuperLieAlgebra<S>> {
    let mut labels = labels_p();
    labels.extend(labels_m());
    labels.extend(labels_q());
    let n = 14;
    let parity: Vec<u8> = (0..n).map(|i| (i >= 10) as u8).collect();
    let mut c = vec![vec![vec![S::zero(); n]; n]; n];
    let eta = |i: usize, j: usize| if i == j { ETA[i] } else { 0 };
    let m_idx = |i: usize, j: usize| lorentz_index(i, j).map(|(k, neg)| (4 + k, if neg { -1i64 } else { 1 }));
    let half = S::from_ratio(1, 2);
    for (mi, &(i, j)) in LORENTZ_PAIRS.iter().enumerate() {
        let mrow = 4 + mi;
        // [M_IJ, P_K] = η_JK P_I − η_IK P_J
        for k in 0..4 {
            let mut v = vec![S::zero(); n];
            v[i].add_assign(&S::from_i64(eta(j, k)));
            v[j].add_assign(&S::from_i64(-eta(i, k)));
            for (l, x) in v.iter().enumerate() {
                c[mrow][k][l] = x.clone();
                c[k][mrow][l] = x.neg();
            }
        }
        // [M_IJ, M_KL] = η_JK M_IL − η_IK M_JL − η_JL M_IK + η_IL M_JK
        for (mj, &(k, l)) in LORENTZ_PAIRS.iter().enumerate() {
            let mut v = vec![S::zero(); n];
            for (coef, a, b) in [(eta(j, k), i, l), (-eta(i, k), j, l), (-eta(j, l), i, k), (eta(i, l), j, k)] {
                if coef == 0 {
                    continue;
                }
                if let Some((idx, s)) = m_idx(a, b) {
                    v[idx].add_assign(&S::from_i64(coef * s));
                }
            }
            c[mrow][4 + mj] = v;
        }
        // [M_IJ, Q_α] = ½ (γ_IJ)_{βα} Q_β
        let g = gb.gamma_ij(i, j);
        for a in 0..4 {
            let mut v = vec![S::zero(); n];
            for b in 0..4 {
                v[10 + b] = half.mul(&g[b][a]);
            }
            for (l, x) in v.iter().enumerate() {
                c[mrow][10 + a][l] = x.clone();
                c[10 + a][mrow][l] = x.neg();
            }
        }
    }
    for k in 0..4 {
        let cg = gb.cg(&gb.gamma_up[k]);
        for a in 0..4 {
            for b in 0..4 {
                c[10 + a][10 + b][k] = half.mul(&cg[a][b]);
            }
        }
    }
    let mut form = translation_form(gb, 10, n);
    // the Lorentz block pairs trivially
    form.parities = parity.clone();
    let mut alg = SuperLieAlgebra::from_dense("iso134", labels, parity, c)?.with_form(form)?;
    alg.realization = Some(adjoint_realization(&alg)?);
    Ok(alg)
}

/// Normalizations of the orthosymplectic generators: `P_I = p·diag(0,γ_I)`,
/// `Q_α` with column `e_α` and row `a·e_αᵀC`.
#[derive(Clone, Debug)]
pub struct OspCalibration<S> {
    pub p: S,
    pub a: S,
    /// Even entry of the invariant form `G = diag(g0, C)`.
    pub g0: S,
}

fn osp_raw<S: ComplexField>(gb: &GammaBasis<S>, p: &S, a: &S) -> Vec<SuperMatrix<S>> {
    let blk = |m: &M4<S>, s: &S| {
        SuperMatrix::from_fn(1, 4, |r, c| if r >= 1 && c >= 1 { m[r - 1][c - 1].mul(s) } else { S::zero() })
            .with_parity(0)
            .expect("block diagonal is even")
    };
    let half = S::from_ratio(1, 2);
    let mut mats: Vec<SuperMatrix<S>> = (0..4).map(|i| blk(&gb.gamma[i], p)).collect();
    for &(i, j) in &LORENTZ_PAIRS {
        mats.push(blk(&gb.gamma_ij(i, j), &half));
    }
    for al in 0..4 {
        let m = SuperMatrix::from_fn(1, 4, |r, c| {
            if c == 0 && r == 1 + al {
                S::one()
            } else if r == 0 && c >= 1 {
                a.mul(&gb.c[al][c - 1])
            } else {
                S::zero()
            }
        });
        mats.push(m.with_parity(1).expect("off-diagonal is odd"));
    }
    mats
}

/// `−str(XY)` on the realization.
pub fn supertrace_form<S: Scalar>(mats: &[SuperMatrix<S>]) -> Result<Vec<Vec<S>>> {
    mats.iter()
        .map(|x| mats.iter().map(|y| Ok(x.mul(y)?.str().neg())).collect::<Result<Vec<S>>>())
        .collect()
}

/// Solves the generator normalizations against the targets
/// `−str(P_IP_J) = η_IJ/L²` and `−str(Q_αQ_β) = C_αβ/L`; the sign of `p` is
/// fixed so that `[P_I,Q_α]` carries `−1/(2L)`.
pub fn calibrate_osp<S: ComplexField>(gb: &GammaBasis<S>, l: &S) -> Result<OspCalibration<S>> {
    let raw = osp_raw(gb, &S::one(), &S::one());
    let st = supertrace_form(&raw)?;
    let linv = l.inv().ok_or_else(|| Error::Calibration("L must be nonzero".into()))?;
    // P block: −str = p²·κ with κ read off at unit normalization
    let kappa = st[0][0].clone();
    let p2 = S::from_i64(ETA[0]).mul(&linv).mul(&linv).div(&kappa).ok_or_else(|| Error::Calibration("degenerate P block".into()))?;
    for i in 0..4 {
        for j in 0..4 {
            let want = if i == j { S::from_i64(ETA[i]).mul(&linv).mul(&linv) } else { S::zero() };
            if st[i][j].mul(&p2).sub(&want).magnitude() > 1e-12 {
                return Err(Error::Calibration("P normalization is not uniform".into()));
            }
        }
    }
    let p = S::from_ratio(-1, 2).mul(&linv);
    if p.mul(&p).sub(&p2).magnitude() > 1e-12 {
        return Err(Error::Calibration("p² does not match the P target".into()));
    }
    // Q block is linear in a
    let (a0, b0) = (0..4)
        .flat_map(|a| (0..4).map(move |b| (a, b)))
        .find(|&(a, b)| !gb.c[a][b].is_zero())
        .expect("C is nonzero");
    let a = gb.c[a0][b0].mul(&linv).div(&st[10 + a0][10 + b0]).ok_or_else(|| Error::Calibration("degenerate Q block".into()))?;
    for x in 0..4 {
        for y in 0..4 {
            let want = gb.c[x][y].mul(&linv);
            if st[10 + x][10 + y].mul(&a).sub(&want).magnitude() > 1e-12 {
                return Err(Error::Calibration("Q normalization is not uniform".into()));
            }
        }
    }
    let g0 = a.inv().ok_or_else(|| Error::Calibration("degenerate Q normalization".into()))?;
    Ok(OspCalibration { p, a, g0 })
}

/// Max residual of the orthosymplectic condition `XᵀˢG + GX = 0`.
pub fn orthosymplectic_residual<S: ComplexField>(gb: &GammaBasis<S>, cal: &OspCalibration<S>, mats: &[SuperMatrix<S>]) -> Result<f64> {
    let g = osp_invariant_matrix(gb, cal)?;
    let mut res: f64 = 0.0;
    for x in mats {
        res = res.max(x.stranspose()?.mul(&g)?.add(&g.mul(x)?)?.max_abs());
    }
    Ok(res)
}

/// `𝔬𝔰𝔭(1|4)` at radius `L`, realized in `Mat(1|4)` with the same basis
/// order as [`iso134`]; carries `𝒮 = −str(XY)`.
pub fn osp14<S: ComplexField>(gb: &GammaBasis<S>, l: &S) -> Result<SuperLieAlgebra<S>> {
    let cal = calibrate_osp(gb, l)?;
    let mats = osp_raw(gb, &cal.p, &cal.a);
    if orthosymplectic_residual(gb, &cal, &mats)? > 1e-12 {
        return Err(Error::Calibration("generators violate the orthosymplectic condition".into()));
    }
    let mut labels = labels_p();
    labels.extend(labels_m());
    labels.extend(labels_q());
    let st = supertrace_form(&mats)?;
    let alg = SuperLieAlgebra::from_realization("osp14", labels, mats)?;
    let form = SuperBilinearForm::new(alg.parity.clone(), st)?;
    let mut alg = alg.with_form(form)?;
    alg.invariant_matrix = Some(osp_invariant_matrix(gb, &cal)?);
    Ok(alg)
}

/// `G = diag(g0, C)`.
pub fn osp_invariant_matrix<S: ComplexField>(gb: &GammaBasis<S>, cal: &OspCalibration<S>) -> Result<SuperMatrix<S>> {
    SuperMatrix::from_fn(1, 4, |r, c| match (r, c) {
        (0, 0) => cal.g0.clone(),
        (r, c) if r >= 1 && c >= 1 => gb.c[r - 1][c - 1].clone(),
        _ => S::zero(),
    })
    .with_parity(0)
}

/// Max over all constants of `|lim_{L→∞} f^k_ij(osp(L)) − f^k_ij(iso)|`.
///
/// Each constant is a polynomial of degree ≤ 2 in `u = 1/L`; it is
/// interpolated through `u = 1, ½, ⅓`, checked at `u = ¼`, and the limit is
/// the constant term.
pub fn contraction_residual<S: ComplexField>(gb: &GammaBasis<S>) -> Result<f64> {
    let iso = iso134(gb)?;
    let algs: Vec<SuperLieAlgebra<S>> = (1..=4).map(|l| osp14(gb, &S::from_i64(l))).collect::<Result<_>>()?;
    let us: Vec<S> = (1..=4).map(|l| S::from_ratio(1, l)).collect();
    let n = iso.dim();
    let mut r: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let ys: Vec<S> = algs.iter().map(|a| a.constant(i, j, k)).collect();
                // Lagrange interpolation on the first three nodes
                let eval = |u: &S| {
                    let mut acc = S::zero();
                    for a in 0..3 {
                        let mut w = ys[a].clone();
                        for b in 0..3 {
                            if a != b {
                                w = w.mul(&u.sub(&us[b])).mul(&us[a].sub(&us[b]).inv().unwrap());
                            }
                        }
                        acc.add_assign(&w);
                    }
                    acc
                };
                let check = eval(&us[3]).sub(&ys[3]).magnitude();
                if check > 1e-9 {
                    return Err(Error::Calibration(format!("constant f^{k}_{{{i}{j}}} is not quadratic in 1/L")));
                }
                r = r.max(eval(&S::zero()).sub(&iso.constant(i, j, k)).magnitude());
            }
        }
    }
    Ok(r)
}

/// Group law of the super translation group in coordinates `(x^I, θ^α)`:
/// `(x,θ)·(y,η) = (x + y − ¼(Cγ^I)_{αβ}θ^αη^β, θ + η)`.
pub fn group_mul_t<S: ComplexField, T: Ring<Scalar = S>>(gb: &GammaBasis<S>, g: (&[T], &[T]), h: (&[T], &[T])) -> Result<(Vec<T>, Vec<T>)> {
    let (x, th) = g;
    let (y, eta) = h;
    if x.len() != 4 || th.len() != 4 || y.len() != 4 || eta.len() != 4 {
        return Err(Error::Dim("super translation group elements have 4 even and 4 odd coordinates".into()));
    }
    for v in x.iter().chain(y) {
        if v.parity() != Some(0) {
            return Err(Error::Parity("even coordinate must be even".into()));
        }
    }
    for v in th.iter().chain(eta) {
        if v.parity() != Some(1) && !v.is_zero() {
            return Err(Error::Parity("odd coordinate must be odd".into()));
        }
    }
    let q = S::from_ratio(-1, 4);
    let z = (0..4)
        .map(|i| {
            let cg = gb.cg(&gb.gamma_up[i]);
            let mut acc = x[i].add(&y[i]);
            for a in 0..4 {
                for b in 0..4 {
                    if !cg[a][b].is_zero() {
                        acc = acc.add(&th[a].mul(&eta[b]).scale(&cg[a][b].mul(&q)));
                    }
                }
            }
            acc
        })
        .collect();
    let w = th.iter().zip(eta).map(|(a, b)| a.add(b)).collect();
    Ok((z, w))
}

/// Chart `(x0..x3 | th0..th3)` of the super translation group, with extra
/// parametrizing generators.
pub fn t_chart(params: &[&str]) -> Result<Chart> {
    Chart::new(&["x0", "x1", "x2", "x3"], &["th0", "th1", "th2", "th3"], params)
}

/// `∂_I` and `Q_α = ∂_α + s·¼(Cγ^I)_{αβ}θ^β ∂_I` on a chart whose first four
/// even and odd coordinates are `x, θ`; `s = +1` gives left-invariant, `−1`
/// right-invariant fields. Basis order `P0..P3, Q0..Q3`.
fn t_frame<S: ComplexField>(gb: &GammaBasis<S>, chart: &Chart, s: i64) -> Vec<VectorField<S>> {
    let m = chart.m();
    let mut frame: Vec<VectorField<S>> = (0..4).map(|i| VectorField::coord(chart, i)).collect();
    let q = S::from_ratio(s, 4);
    for al in 0..4 {
        let mut v = VectorField::coord(chart, m + al);
        for i in 0..4 {
            let cg = gb.cg(&gb.gamma_up[i]);
            let mut c = Poly::zero();
            for b in 0..4 {
                if !cg[al][b].is_zero() {
                    c = &c + &chart.coord::<S>(m + b).scale(&cg[al][b].mul(&q));
                }
            }
            v.comps[i] = &v.comps[i] + &c;
        }
        frame.push(v);
    }
    frame
}

pub fn left_invariant_frame_t<S: ComplexField>(gb: &GammaBasis<S>, chart: &Chart) -> Vec<VectorField<S>> {
    t_frame(gb, chart, 1)
}

pub fn right_invariant_frame_t<S: ComplexField>(gb: &GammaBasis<S>, chart: &Chart) -> Vec<VectorField<S>> {
    t_frame(gb, chart, -1)
}

/// Maurer–Cartan form as the coframe dual to a left-invariant frame.
pub fn maurer_cartan_from_frame<S: Scalar>(alg: Arc<SuperLieAlgebra<S>>, chart: &Chart, frame: &[VectorField<S>]) -> Result<LieValuedForm<S>> {
    let co = forms::dual_coframe(chart, frame, None)?;
    LieValuedForm::new(alg, co)
}

/// `exp(−ad_Z)` applied to `Y` in `R ⊗ 𝔤` (the series stops once a term
/// vanishes, or after `max_terms`).
pub fn ad_exp<S: Scalar, T: Ring<Scalar = S>>(alg: &SuperLieAlgebra<S>, z: &[T], y: &[T], sign: i64, max_terms: usize) -> Vec<T> {
    let mut out = y.to_vec();
    let mut term = y.to_vec();
    for k in 1..=max_terms {
        term = alg.bracket_ring(z, &term);
        let f = S::from_ratio(sign, k as i64);
        term = term.iter().map(|t| t.scale(&f)).collect();
        if term.iter().all(T::is_zero) {
            break;
        }
        out = out.iter().zip(&term).map(|(a, b)| a.add(b)).collect();
    }
    out
}

/// Maurer–Cartan form `g⁻¹dg` of `g = exp(Σ z^i e_i)` by the series
/// `Σ_k (−1)^k/(k+1)! ad_Z^k(dZ)`, with superfield coordinates `z^i` of
/// parity `|e_i|`. Even-variable degrees above `jet` are dropped.
pub fn maurer_cartan_exp<S: Scalar>(alg: Arc<SuperLieAlgebra<S>>, chart: &Chart, z: &[Superfield<S>], jet: u32, max_terms: usize) -> Result<LieValuedForm<S>> {
    if z.len() != alg.dim() {
        return Err(Error::Arity { expected: alg.dim(), got: z.len() });
    }
    for (i, zi) in z.iter().enumerate() {
        if !zi.is_zero() && zi.parity() != Some(alg.parity[i]) {
            return Err(Error::Parity(format!("coordinate of {} has the wrong parity", alg.labels[i])));
        }
    }
    let zf: Vec<SuperForm<S>> = z.iter().map(forms::func).collect();
    let dz: Vec<SuperForm<S>> = zf.iter().map(|f| forms::ext_d(chart, f)).collect();
    let mut out = dz.clone();
    let mut term = dz;
    for k in 1..=max_terms {
        term = alg.bracket_ring(&zf, &term);
        let f = S::from_ratio(-1, k as i64 + 1);
        term = term.iter().map(|t| forms::truncate_form(&t.scale(&f), jet)).collect();
        if term.iter().all(Poly::is_zero) {
            break;
        }
        out = out.iter().zip(&term).map(|(a, b)| a + b).collect();
    }
    LieValuedForm::new(alg, out)
}

/// Components of `g⁻¹dg` for a realization matrix `g` of superfields, read
/// off from `M(ω^i ⊗ e_i)_{kl} = (−1)^{|ω^i||k|} ω^i (e_i)_{kl}`.
pub fn maurer_cartan_matrix<S: Scalar>(alg: Arc<SuperLieAlgebra<S>>, chart: &Chart, g: &SuperMatrix<Superfield<S>>, jet: u32) -> Result<LieValuedForm<S>> {
    let mats = alg.realization.clone().ok_or_else(|| Error::Unknown(format!("{} has no realization", alg.name)))?;
    let (p, q) = g.dims();
    let n = p + q;
    let gi = crate::superlinalg::minv(g, Some(jet))?;
    let gif = gi.map(forms::func);
    let dg = g.map(|e| forms::ext_d(chart, &forms::func(e)));
    let w = gif.mul(&dg)?.map(|e| forms::truncate_form(e, jet));
    // untwist the row sign and decompose every form monomial
    let mut keys = std::collections::BTreeSet::new();
    for e in w.entries() {
        for (k, _) in e.terms() {
            keys.insert(*k);
        }
    }
    let basis: Vec<Vec<S>> = mats.iter().map(|m| m.entries().to_vec()).collect();
    let mut comps = vec![Poly::zero(); alg.dim()];
    for key in keys {
        let par = crate::poly::Key::parity(key);
        let flat: Vec<S> = (0..n * n)
            .map(|ix| {
                let (r, _) = (ix / n, ix % n);
                let c = w.entries()[ix].coef(&key);
                if par == 1 && w.index_parity(r) == 1 {
                    c.neg()
                } else {
                    c
                }
            })
            .collect();
        let c = decompose(&basis, &flat).ok_or_else(|| Error::AlgebraMismatch("g⁻¹dg leaves the algebra".into()))?;
        for (i, ci) in c.iter().enumerate() {
            if !ci.is_zero() {
                comps[i] = &comps[i] + &Poly::monomial(key, ci.clone());
            }
        }
    }
    LieValuedForm::new(alg, comps)
}

/// Ehresmann connection on `U × G` extending a base connection:
/// `Ad_{g⁻¹} 𝒜 + g⁻¹dg` with `g = exp(Σ z^i e_i)`.
pub fn extend_to_ehresmann<S: Scalar>(base: &LieValuedForm<S>, chart: &Chart, z: &[Superfield<S>], jet: u32, max_terms: usize) -> Result<LieValuedForm<S>> {
    let alg = base.alg.clone();
    let mc = maurer_cartan_exp(alg.clone(), chart, z, jet, max_terms)?;
    let zf: Vec<SuperForm<S>> = z.iter().map(forms::func).collect();
    let ad = ad_exp(&alg, &zf, &base.comps, -1, max_terms);
    let ad: Vec<SuperForm<S>> = ad.iter().map(|w| forms::truncate_form(w, jet)).collect();
    LieValuedForm::new(alg, ad)?.add(&mc)
}
