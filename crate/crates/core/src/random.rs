//! Seeded random superfields, forms and vector fields with small integer
//! coefficients, for property tests and self-checks.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::forms::{self, Chart, SuperForm, VectorField};
use crate::grassmann::GrassmannNumber;
use crate::poly::{Blade, FormKey, Mono, Poly};
use crate::scalar::Scalar;
use crate::superfield::Superfield;

pub struct RandomSource {
    pub rng: ChaCha8Rng,
    /// Coefficients are drawn from `−coef..=coef` (zero excluded).
    pub coef: i64,
    pub max_xdeg: u8,
    pub terms: usize,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        RandomSource { rng: ChaCha8Rng::seed_from_u64(seed), coef: 3, max_xdeg: 2, terms: 3 }
    }

    fn coef<S: Scalar>(&mut self) -> S {
        let mut c = 0;
        while c == 0 {
            c = self.rng.gen_range(-self.coef..=self.coef);
        }
        S::from_i64(c)
    }

    fn blade(&mut self, mask: u32, parity: Option<u8>) -> Option<u32> {
        for _ in 0..32 {
            let b = self.rng.gen::<u32>() & mask & self.rng.gen::<u32>();
            if parity.map_or(true, |p| (b.count_ones() & 1) as u8 == p) {
                return Some(b);
            }
        }
        None
    }

    fn mono(&mut self, m: usize, mask: u32, parity: Option<u8>) -> Option<Mono> {
        let g = self.blade(mask, parity)?;
        let mut mo = Mono::blade(g);
        for i in 0..m {
            mo.x[i] = self.rng.gen_range(0..=self.max_xdeg);
        }
        Some(mo)
    }

    /// Grassmann number over the generators in `mask`.
    pub fn grassmann<S: Scalar>(&mut self, mask: u32, parity: Option<u8>) -> GrassmannNumber<S> {
        let mut t = Vec::new();
        for _ in 0..self.terms {
            if let Some(b) = self.blade(mask, parity) {
                t.push((Blade(b), self.coef()));
            }
        }
        Poly::from_terms(t)
    }

    /// Superfield on the chart (all generators, including σ).
    pub fn superfield<S: Scalar>(&mut self, chart: &Chart, parity: Option<u8>) -> Superfield<S> {
        let mask = chart.gens.mask();
        let mut t = Vec::new();
        for _ in 0..self.terms {
            if let Some(mo) = self.mono(chart.m(), mask, parity) {
                t.push((mo, self.coef()));
            }
        }
        Poly::from_terms(t)
    }

    /// Homogeneous `p`-form of the given Grassmann parity.
    pub fn form<S: Scalar>(&mut self, chart: &Chart, p: u32, parity: Option<u8>) -> SuperForm<S> {
        let mut t = Vec::new();
        for _ in 0..self.terms {
            let mut k = FormKey::default();
            for _ in 0..p {
                let j = self.rng.gen_range(0..chart.dim().max(1));
                if chart.dim() == 0 {
                    break;
                }
                if j < chart.m() {
                    k.dx |= 1 << j;
                } else {
                    k.dth[j - chart.m()] += 1;
                }
            }
            if k.degree() != p {
                continue;
            }
            let need = parity.map(|q| (q + (k.n_dth() & 1) as u8) & 1);
            let Some(mo) = self.mono(chart.m(), chart.gens.mask(), need) else { continue };
            k.m = mo;
            t.push((k, self.coef()));
        }
        Poly::from_terms(t)
    }

    /// Homogeneous vector field of the given parity.
    pub fn vector_field<S: Scalar>(&mut self, chart: &Chart, parity: u8) -> VectorField<S> {
        let comps = (0..chart.dim())
            .map(|j| {
                if self.rng.gen_bool(0.3) {
                    Poly::zero()
                } else {
                    self.superfield(chart, Some((parity + chart.coord_parity(j)) & 1))
                }
            })
            .collect();
        VectorField { comps }
    }

    /// Random 0-form of the given parity.
    pub fn function_form<S: Scalar>(&mut self, chart: &Chart, parity: Option<u8>) -> SuperForm<S> {
        forms::func(&self.superfield::<S>(chart, parity))
    }

    pub fn bit(&mut self) -> u8 {
        self.rng.gen_range(0..2)
    }
}
