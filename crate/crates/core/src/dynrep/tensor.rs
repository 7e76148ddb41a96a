//! Tensor products of evaluation modules with amplitudes kept in slot 1.
//!
//! A coefficient `g(P)` produced in slot `k` next to output weights `μ_2..μ_k` is moved
//! to slot 1 as `g(P - μ_2 - ... - μ_k)`.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use super::amplitude::PAmplitude;
use super::images::{entry_op, EntryKind};
use super::operator::{Atom, EvalModuleSpec, Module, SlotOperator};
use crate::error::Result;
use crate::theta::ModularParams;

/// A finite sum of slotwise products `X_1 ⊗ ... ⊗ X_n`.
#[derive(Clone, Debug)]
pub struct TensorOperator {
    pub terms: Vec<Vec<SlotOperator>>,
}

impl TensorOperator {
    pub fn identity(dims: &[usize]) -> Self {
        Self {
            terms: vec![dims.iter().map(|&d| SlotOperator::identity(d)).collect()],
        }
    }

    pub fn single(slots: Vec<SlotOperator>) -> Self {
        Self { terms: vec![slots] }
    }

    /// `self ∘ other`, composed slot by slot.
    pub fn compose(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let t: Vec<_> = a.iter().zip(b).map(|(x, y)| x.compose(y)).collect();
                if t.iter().all(|s| !s.atoms.is_empty()) {
                    terms.push(t);
                }
            }
        }
        Self { terms }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self { terms }
    }

    pub fn scale(&self, c: C64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut t = t.clone();
                t[0] = t[0].scale(c);
                t
            })
            .collect();
        Self { terms }
    }
}

/// Amplitudes over the tensor basis, all `P`-dependence attached to slot 1.
#[derive(Clone, Debug)]
pub struct TensorState {
    pub modules: Vec<Module>,
    pub amps: BTreeMap<Vec<usize>, PAmplitude>,
}

impl TensorState {
    pub fn new(modules: Vec<Module>) -> Self {
        Self {
            modules,
            amps: BTreeMap::new(),
        }
    }

    pub fn basis(modules: Vec<Module>, key: Vec<usize>, amp: PAmplitude) -> Self {
        let mut s = Self::new(modules);
        s.amps.insert(key, amp);
        s
    }

    pub fn insert(&mut self, key: Vec<usize>, amp: PAmplitude) {
        self.amps.insert(key, amp);
    }

    /// Total weight of a basis key.
    pub fn weight(&self, key: &[usize]) -> i64 {
        key.iter()
            .zip(&self.modules)
            .map(|(&m, md)| md.weight(m))
            .sum()
    }

    pub fn get(&self, key: &[usize], p: C64) -> C64 {
        self.amps.get(key).map_or(C64::new(0.0, 0.0), |a| a.eval(p))
    }

    /// Largest amplitude modulus over the samples.
    pub fn norm(&self, samples: &[C64]) -> f64 {
        let mut n = 0.0f64;
        for a in self.amps.values() {
            for &p in samples {
                let v = a.eval(p).norm();
                n = if v.is_nan() { f64::INFINITY } else { n.max(v) };
            }
        }
        n
    }

    /// `c · self`, with `c` a `P`-independent scalar.
    pub fn scale(&self, c: C64) -> Self {
        let amps = self
            .amps
            .iter()
            .map(|(k, a)| (k.clone(), a.scale(c)))
            .collect();
        Self {
            modules: self.modules.clone(),
            amps,
        }
    }

    /// Worst difference relative to `max(scale, 1e-300)`, with `scale` the larger state norm.
    pub fn distance(&self, other: &Self, samples: &[C64]) -> f64 {
        let scale = self.norm(samples).max(other.norm(samples)).max(1e-300);
        let mut keys: Vec<&Vec<usize>> = self.amps.keys().collect();
        keys.extend(other.amps.keys());
        let mut worst = 0.0f64;
        for k in keys {
            for &p in samples {
                let d = (self.get(k, p) - other.get(k, p)).norm();
                worst = if d.is_nan() {
                    f64::INFINITY
                } else {
                    worst.max(d)
                };
            }
        }
        worst / scale
    }
}

/// Apply a tensor operator once and renormalize into slot 1.
pub fn apply(op: &TensorOperator, state: &TensorState) -> TensorState {
    let n = state.modules.len();
    let mut out: BTreeMap<Vec<usize>, Vec<PAmplitude>> = BTreeMap::new();
    for term in &op.terms {
        debug_assert_eq!(term.len(), n);
        for (key, amp) in &state.amps {
            let per_slot: Vec<Vec<&Atom>> = (0..n)
                .map(|k| term[k].atoms.iter().filter(|a| a.from == key[k]).collect())
                .collect();
            if per_slot.iter().any(|v| v.is_empty()) {
                continue;
            }
            let mut idx = vec![0usize; n];
            loop {
                let atoms: Vec<&Atom> = (0..n).map(|k| per_slot[k][idx[k]]).collect();
                let to: Vec<usize> = atoms.iter().map(|a| a.to).collect();
                let mut factors = vec![atoms[0].coeff.clone(), amp.shift(atoms[0].qshift as f64)];
                let mut cum = 0i64;
                for k in 1..n {
                    cum += state.modules[k].weight(to[k]);
                    factors.push(atoms[k].coeff.shift(-(cum as f64)));
                }
                let term_amp = factors
                    .iter()
                    .skip(1)
                    .fold(factors[0].clone(), |acc, f| acc.mul(f));
                out.entry(to).or_default().push(term_amp);
                let mut k = 0;
                loop {
                    if k == n {
                        break;
                    }
                    idx[k] += 1;
                    if idx[k] < per_slot[k].len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == n {
                    break;
                }
            }
        }
    }
    let amps = out
        .into_iter()
        .map(|(k, v)| {
            (
                k,
                if v.len() == 1 {
                    v.into_iter().next().unwrap()
                } else {
                    PAmplitude::sum(&v)
                },
            )
        })
        .collect();
    TensorState {
        modules: state.modules.clone(),
        amps,
    }
}

/// `Δ(L_{ε1 ε2})(u) = Σ_ε' L_{ε1 ε'}(u) ⊗ L_{ε' ε2}(u)` on `V_a ⊗ V_b`.
pub fn coproduct_op(
    kind: EntryKind,
    u: C64,
    specs: &[EvalModuleSpec; 2],
    params: &ModularParams,
) -> Result<TensorOperator> {
    let (e1, e2) = kind.index();
    let mut terms = Vec::with_capacity(2);
    for ep in 0..2 {
        terms.push(vec![
            entry_op(EntryKind::from_index(e1, ep), u, &specs[0], params)?,
            entry_op(EntryKind::from_index(ep, e2), u, &specs[1], params)?,
        ]);
    }
    Ok(TensorOperator { terms })
}

/// The iterated coproduct on a triple product, `Σ L_{ε1 a} ⊗ L_{a b} ⊗ L_{b ε2}`.
pub fn coproduct3_op(
    kind: EntryKind,
    u: C64,
    specs: &[EvalModuleSpec; 3],
    params: &ModularParams,
) -> Result<TensorOperator> {
    let (e1, e2) = kind.index();
    let mut terms = Vec::with_capacity(4);
    for a in 0..2 {
        for b in 0..2 {
            terms.push(vec![
                entry_op(EntryKind::from_index(e1, a), u, &specs[0], params)?,
                entry_op(EntryKind::from_index(a, b), u, &specs[1], params)?,
                entry_op(EntryKind::from_index(b, e2), u, &specs[2], params)?,
            ]);
        }
    }
    Ok(TensorOperator { terms })
}

/// Fuse a two-slot operator into one operator on `V ⊗ W` seen as a single module.
///
/// The fused module carries its amplitude in the right factor, so the slot-1
/// coefficient is read at `P + ν_out` and the Q-shift picks up `ν_out - ν_in`.
pub fn fuse(op: &TensorOperator, m1: &Module, m2: &Module) -> (SlotOperator, Module) {
    let d2 = m2.dim();
    let module = Module {
        weights: (0..m1.dim() * d2)
            .map(|i| m1.weight(i / d2) + m2.weight(i % d2))
            .collect(),
    };
    let mut atoms = Vec::new();
    for term in &op.terms {
        for a in &term[0].atoms {
            for b in &term[1].atoms {
                let nu_in = m2.weight(b.from);
                let nu_out = m2.weight(b.to);
                atoms.push(Atom {
                    from: a.from * d2 + b.from,
                    to: a.to * d2 + b.to,
                    coeff: a.coeff.shift(nu_out as f64).mul(&b.coeff),
                    qshift: a.qshift + nu_out - nu_in,
                });
            }
        }
    }
    (
        SlotOperator {
            dim: module.dim(),
            atoms,
        }
        .merged(),
        module,
    )
}
