//! D=4 Clifford algebra with signature (−+++), charge conjugation and
//! Majorana bilinears.
//!
//! Spinor indices follow the northwest-southeast rule: `ψ̄_β = ψ^α C_{αβ}`,
//! so `ψ̄Γχ = ψ^α (CΓ)_{αβ} χ^β`. Components may live in any graded ring;
//! Grassmann signs then come from the ring product.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::poly::Ring;
use crate::scalar::{ComplexField, Scalar};

pub type M4<S> = Vec<Vec<S>>;

pub const ETA: [i64; 4] = [-1, 1, 1, 1];

pub fn mzero<S: Scalar>() -> M4<S> {
    vec![vec![S::zero(); 4]; 4]
}

pub fn mid<S: Scalar>() -> M4<S> {
    (0..4).map(|i| (0..4).map(|j| if i == j { S::one() } else { S::zero() }).collect()).collect()
}

pub fn mmul<S: Scalar>(a: &M4<S>, b: &M4<S>) -> M4<S> {
    (0..4)
        .map(|i| {
            (0..4)
                .map(|j| {
                    let mut acc = S::zero();
                    for k in 0..4 {
                        acc.add_assign(&a[i][k].mul(&b[k][j]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn madd<S: Scalar>(a: &M4<S>, b: &M4<S>) -> M4<S> {
    (0..4).map(|i| (0..4).map(|j| a[i][j].add(&b[i][j])).collect()).collect()
}

pub fn msub<S: Scalar>(a: &M4<S>, b: &M4<S>) -> M4<S> {
    (0..4).map(|i| (0..4).map(|j| a[i][j].sub(&b[i][j])).collect()).collect()
}

pub fn mscale<S: Scalar>(a: &M4<S>, s: &S) -> M4<S> {
    a.iter().map(|r| r.iter().map(|x| x.mul(s)).collect()).collect()
}

pub fn mtranspose<S: Scalar>(a: &M4<S>) -> M4<S> {
    (0..4).map(|i| (0..4).map(|j| a[j][i].clone()).collect()).collect()
}

pub fn mmax<S: Scalar>(a: &M4<S>) -> f64 {
    a.iter().flatten().map(|x| x.magnitude()).fold(0.0, f64::max)
}

/// Levi-Civita symbol with `ε^{0123} = 1` (upper indices).
pub fn eps_up(i: usize, j: usize, k: usize, l: usize) -> i64 {
    let v = [i, j, k, l];
    for a in 0..4 {
        for b in a + 1..4 {
            if v[a] == v[b] {
                return 0;
            }
        }
    }
    let mut inv = 0;
    for a in 0..4 {
        for b in a + 1..4 {
            if v[a] > v[b] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Lower-index symbol `ε_{IJKL} = −ε^{IJKL}` (one time-like index lowered).
pub fn eps_down(i: usize, j: usize, k: usize, l: usize) -> i64 {
    -eps_up(i, j, k, l)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Representation {
    /// `γ0 = iσ2⊗1, γ1 = σ1⊗1, γ2 = σ3⊗σ2, γ3 = σ3⊗σ1`.
    Standard,
    /// The standard matrices with every `γ_I` negated.
    Flipped,
}

impl Representation {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "standard" => Ok(Representation::Standard),
            "flipped" => Ok(Representation::Flipped),
            other => Err(Error::Unknown(format!("gamma representation '{other}'"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Representation::Standard => "standard",
            Representation::Flipped => "flipped",
        }
    }
}

#[derive(Clone, Debug)]
pub struct GammaBasis<S> {
    pub rep: Representation,
    /// `γ_I` (lower index).
    pub gamma: Vec<M4<S>>,
    /// `γ^I = η^{II} γ_I`.
    pub gamma_up: Vec<M4<S>>,
    pub c: M4<S>,
    pub gamma_star: M4<S>,
    /// `γ_* = s·i·γ^0γ^1γ^2γ^3` with this `s`.
    pub gamma_star_sign: i64,
}

fn kron<S: Scalar>(a: &[[S; 2]; 2], b: &[[S; 2]; 2]) -> M4<S> {
    let mut m = mzero();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    m[2 * i + k][2 * j + l] = a[i][j].mul(&b[k][l]);
                }
            }
        }
    }
    m
}

impl<S: ComplexField> GammaBasis<S> {
    pub fn build(rep: Representation) -> Result<Self> {
        let (o, z, i) = (S::one(), S::zero(), S::i());
        let id = [[o.clone(), z.clone()], [z.clone(), o.clone()]];
        let s1 = [[z.clone(), o.clone()], [o.clone(), z.clone()]];
        let s2 = [[z.clone(), i.neg()], [i.clone(), z.clone()]];
        let s3 = [[o.clone(), z.clone()], [z.clone(), o.neg()]];
        let is2 = [[z.clone(), o.clone()], [o.neg(), z.clone()]];
        let mut gamma = vec![kron(&is2, &id), kron(&s1, &id), kron(&s3, &s2), kron(&s3, &s1)];
        if rep == Representation::Flipped {
            gamma = gamma.iter().map(|g| mscale(g, &o.neg())).collect();
        }
        let gamma_up: Vec<M4<S>> = (0..4).map(|k| mscale(&gamma[k], &S::from_i64(ETA[k]))).collect();
        // C = iγ^3γ^1
        let c = mscale(&mmul(&gamma_up[3], &gamma_up[1]), &i);
        let prod = mmul(&mmul(&gamma_up[0], &gamma_up[1]), &mmul(&gamma_up[2], &gamma_up[3]));
        let mut gb = GammaBasis { rep, gamma, gamma_up, c, gamma_star: mzero(), gamma_star_sign: 0 };
        for sign in [1i64, -1] {
            gb.gamma_star = mscale(&prod, &i.mul(&S::from_i64(sign)));
            gb.gamma_star_sign = sign;
            if gb.epsilon_identity_residual() == 0.0 {
                return Ok(gb);
            }
        }
        Err(Error::Calibration("no normalization of γ_* satisfies the ε identity".into()))
    }

    /// `γ_{IJ} = ½(γ_Iγ_J − γ_Jγ_I)` (lower indices).
    pub fn gamma_ij(&self, i: usize, j: usize) -> M4<S> {
        let a = mmul(&self.gamma[i], &self.gamma[j]);
        let b = mmul(&self.gamma[j], &self.gamma[i]);
        mscale(&msub(&a, &b), &S::from_ratio(1, 2))
    }

    /// `γ^{IJ}` with both indices raised.
    pub fn gamma_ij_up(&self, i: usize, j: usize) -> M4<S> {
        mscale(&self.gamma_ij(i, j), &S::from_i64(ETA[i] * ETA[j]))
    }

    pub fn cg(&self, m: &M4<S>) -> M4<S> {
        mmul(&self.c, m)
    }

    /// Symmetric part residual of `½Cγ_*{γ_I,γ_JK} − iε_IJKL Cγ^L`; the
    /// identity holds on symmetric bilinears (odd 1-form spinors).
    pub fn epsilon_identity_residual(&self) -> f64 {
        let mut r: f64 = 0.0;
        let half = S::from_ratio(1, 2);
        for a in 0..4 {
            for b in 0..4 {
                for k in 0..4 {
                    let gjk = self.gamma_ij(b, k);
                    let anti = madd(&mmul(&self.gamma[a], &gjk), &mmul(&gjk, &self.gamma[a]));
                    let lhs = mscale(&self.cg(&mmul(&self.gamma_star, &anti)), &half);
                    let mut rhs = mzero();
                    for l in 0..4 {
                        let e = eps_down(a, b, k, l);
                        if e != 0 {
                            rhs = madd(&rhs, &mscale(&self.cg(&self.gamma_up[l]), &S::i().mul(&S::from_i64(e))));
                        }
                    }
                    let d = msub(&lhs, &rhs);
                    r = r.max(mmax(&madd(&d, &mtranspose(&d))));
                }
            }
        }
        r
    }

    /// Named residuals of all basis invariants (each should be exactly 0).
    pub fn invariant_residuals(&self) -> Vec<(String, f64)> {
        let mut out = Vec::new();
        let mut anti: f64 = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                let s = madd(&mmul(&self.gamma[a], &self.gamma[b]), &mmul(&self.gamma[b], &self.gamma[a]));
                let t = if a == b { mscale(&mid(), &S::from_i64(2 * ETA[a])) } else { mzero() };
                anti = anti.max(mmax(&msub(&s, &t)));
            }
        }
        out.push(("clifford-anticommutator".into(), anti));
        out.push(("c-antisymmetric".into(), mmax(&madd(&self.c, &mtranspose(&self.c)))));
        let mut cg: f64 = 0.0;
        let mut cgg: f64 = 0.0;
        for a in 0..4 {
            let m = self.cg(&self.gamma[a]);
            cg = cg.max(mmax(&msub(&mtranspose(&m), &m)));
            for b in 0..4 {
                let m = self.cg(&self.gamma_ij(a, b));
                cgg = cgg.max(mmax(&msub(&mtranspose(&m), &m)));
            }
        }
        out.push(("c-gamma-symmetric".into(), cg));
        out.push(("c-gamma2-symmetric".into(), cgg));
        let mut eps: f64 = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        eps = eps.max((eps_up(a, b, c, d) + eps_down(a, b, c, d)).abs() as f64);
                    }
                }
            }
        }
        out.push(("epsilon-lowering".into(), eps.max((eps_up(0, 1, 2, 3) - 1).abs() as f64)));
        let gs2 = msub(&mmul(&self.gamma_star, &self.gamma_star), &mid());
        out.push(("gamma-star-square".into(), mmax(&gs2)));
        out.push(("gamma-star-epsilon-identity".into(), self.epsilon_identity_residual()));
        out
    }

    pub fn conventions_json(&self) -> Value {
        let mj = |m: &M4<S>| -> Value {
            Value::Array(m.iter().map(|r| Value::Array(r.iter().map(|x| x.to_json()).collect())).collect())
        };
        json!({
            "representation": self.rep.name(),
            "signature": "-+++",
            "gamma_lower": self.gamma.iter().map(mj).collect::<Vec<_>>(),
            "charge_conjugation": mj(&self.c),
            "charge_conjugation_definition": "C = i gamma^3 gamma^1",
            "gamma_star": mj(&self.gamma_star),
            "gamma_star_definition": format!("{} i gamma^0 gamma^1 gamma^2 gamma^3", if self.gamma_star_sign > 0 { "+" } else { "-" }),
            "epsilon_upper_0123": 1,
            "gamma_ij_weight": "1/2 (g_I g_J - g_J g_I)",
            "spinor_conjugate": "psibar_b = psi^a C_ab",
        })
    }
}

/// `(mψ)^α = m_{αβ} ψ^β` for ring-valued components.
pub fn apply<S: Scalar, T: Ring<Scalar = S>>(m: &M4<S>, psi: &[T]) -> Vec<T> {
    (0..4)
        .map(|a| {
            let mut acc = T::zero();
            for b in 0..4 {
                if !m[a][b].is_zero() && !psi[b].is_zero() {
                    acc = acc.add(&psi[b].scale(&m[a][b]));
                }
            }
            acc
        })
        .collect()
}

/// `ψ̄Γχ = Σ ψ^α (CΓ)_{αβ} χ^β` with the ring product supplying Grassmann
/// or wedge signs.
pub fn bilinear<S: ComplexField, T: Ring<Scalar = S>>(gb: &GammaBasis<S>, psi: &[T], gamma: &M4<S>, chi: &[T]) -> T {
    let cg = gb.cg(gamma);
    bilinear_raw(&cg, psi, chi)
}

/// `Σ ψ^α M_{αβ} χ^β`.
pub fn bilinear_raw<S: Scalar, T: Ring<Scalar = S>>(m: &M4<S>, psi: &[T], chi: &[T]) -> T {
    let mut acc = T::zero();
    for a in 0..4 {
        if psi[a].is_zero() {
            continue;
        }
        for b in 0..4 {
            if m[a][b].is_zero() || chi[b].is_zero() {
                continue;
            }
            acc = acc.add(&psi[a].mul(&chi[b]).scale(&m[a][b]));
        }
    }
    acc
}

/// `Σ_I (γ_Iψ)(ψ̄γ^Iψ)`; vanishes identically for anticommuting data.
pub fn fierz_residual<S: ComplexField, T: Ring<Scalar = S>>(gb: &GammaBasis<S>, psi: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); 4];
    for i in 0..4 {
        let b = bilinear(gb, psi, &gb.gamma_up[i], psi);
        if b.is_zero() {
            continue;
        }
        let gp = apply(&gb.gamma[i], psi);
        for a in 0..4 {
            out[a] = out[a].add(&gp[a].mul(&b));
        }
    }
    out
}

pub fn require_odd<T: Ring>(psi: &[T]) -> Result<()> {
    if psi.len() != 4 {
        return Err(Error::Arity { expected: 4, got: psi.len() });
    }
    if psi.iter().any(|c| c.parity() != Some(1) && !c.is_zero()) {
        return Err(Error::Parity("spinor components must be odd".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussRational;

    type Q = GaussRational;

    #[test]
    fn invariants_exact() {
        for rep in [Representation::Standard, Representation::Flipped] {
            let gb = GammaBasis::<Q>::build(rep).unwrap();
            for (name, r) in gb.invariant_residuals() {
                assert_eq!(r, 0.0, "{name}");
            }
        }
        assert!(Representation::parse("majorana-real").is_err());
    }

    #[test]
    fn gamma0_squares_to_minus_one() {
        let gb = GammaBasis::<Q>::build(Representation::Standard).unwrap();
        let s = mmul(&gb.gamma[0], &gb.gamma[0]);
        assert_eq!(s, mscale(&mid(), &Q::from_i64(-1)));
    }
}
