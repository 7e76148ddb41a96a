use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64 as C64;

use super::amplitude::PAmplitude;

/// Basis weights of a finite module (the `h`-eigenvalue of each basis vector).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Module {
    pub weights: Vec<i64>,
}

impl Module {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self, m: usize) -> i64 {
        self.weights[m]
    }
}

/// The evaluation module `V^{(l)}(q^{2v})`, basis `v_0..v_l` of weights `l - 2m`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalModuleSpec {
    pub l: usize,
    pub v: C64,
}

impl EvalModuleSpec {
    pub fn new(l: usize, v: C64) -> Self {
        Self { l, v }
    }

    pub fn weight(&self, m: usize) -> i64 {
        self.l as i64 - 2 * m as i64
    }

    pub fn module(&self) -> Module {
        Module {
            weights: (0..=self.l).map(|m| self.weight(m)).collect(),
        }
    }
}

/// One term of an operator: `F(P)|from> -> coeff(P) F(P + qshift)|to>`.
#[derive(Clone, Debug)]
pub struct Atom {
    pub from: usize,
    pub to: usize,
    pub coeff: PAmplitude,
    pub qshift: i64,
}

/// A finite sum of atoms on one module.
#[derive(Clone, Debug)]
pub struct SlotOperator {
    pub dim: usize,
    pub atoms: Vec<Atom>,
}

impl SlotOperator {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            atoms: Vec::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::shift_q(dim, 0)
    }

    /// `e^{aQ}`.
    pub fn shift_q(dim: usize, a: i64) -> Self {
        let atoms = (0..dim)
            .map(|m| Atom {
                from: m,
                to: m,
                coeff: PAmplitude::one(),
                qshift: a,
            })
            .collect();
        Self { dim, atoms }
    }

    /// `S^+`: `v_m -> v_{m-1}`.
    pub fn s_plus(dim: usize) -> Self {
        let atoms = (1..dim)
            .map(|m| Atom {
                from: m,
                to: m - 1,
                coeff: PAmplitude::one(),
                qshift: 0,
            })
            .collect();
        Self { dim, atoms }
    }

    /// `S^-`: `v_m -> v_{m+1}`.
    pub fn s_minus(dim: usize) -> Self {
        let atoms = (0..dim.saturating_sub(1))
            .map(|m| Atom {
                from: m,
                to: m + 1,
                coeff: PAmplitude::one(),
                qshift: 0,
            })
            .collect();
        Self { dim, atoms }
    }

    /// Diagonal multiplication by `f(P, h)`, `h` the weight of the state acted on.
    pub fn letter(module: &Module, f: impl Fn(C64, f64) -> C64 + Send + Sync + 'static) -> Self {
        let f = Arc::new(f);
        let atoms = module
            .weights
            .iter()
            .enumerate()
            .map(|(m, &h)| {
                let f = f.clone();
                let h = h as f64;
                Atom {
                    from: m,
                    to: m,
                    coeff: PAmplitude::new(move |p| f(p, h)),
                    qshift: 0,
                }
            })
            .collect();
        Self {
            dim: module.dim(),
            atoms,
        }
    }

    /// Multiplication by `f(P)`.
    pub fn mul_p(dim: usize, f: impl Fn(C64) -> C64 + Send + Sync + 'static) -> Self {
        let f = PAmplitude::new(f);
        let atoms = (0..dim)
            .map(|m| Atom {
                from: m,
                to: m,
                coeff: f.clone(),
                qshift: 0,
            })
            .collect();
        Self { dim, atoms }
    }

    /// Multiplication by `f(P + h)`.
    pub fn mul_ph(module: &Module, f: impl Fn(C64) -> C64 + Send + Sync + 'static) -> Self {
        Self::letter(module, move |p, h| f(p + h))
    }

    /// `self ∘ other`: `other` acts first.
    pub fn compose(&self, other: &Self) -> Self {
        let mut atoms = Vec::new();
        for a in &self.atoms {
            for b in other.atoms.iter().filter(|b| b.to == a.from) {
                atoms.push(Atom {
                    from: b.from,
                    to: a.to,
                    coeff: a.coeff.mul_shifted(&b.coeff, a.qshift as f64),
                    qshift: a.qshift + b.qshift,
                });
            }
        }
        Self {
            dim: self.dim,
            atoms,
        }
        .merged()
    }

    /// Composition of a word written left to right (the rightmost letter acts first).
    pub fn word(dim: usize, letters: &[SlotOperator]) -> Self {
        letters
            .iter()
            .fold(Self::identity(dim), |acc, x| acc.compose(x))
    }

    pub fn pow(&self, n: usize) -> Self {
        (0..n).fold(Self::identity(self.dim), |acc, _| acc.compose(self))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        Self {
            dim: self.dim,
            atoms,
        }
        .merged()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: C64) -> Self {
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom {
                coeff: a.coeff.scale(c),
                ..a.clone()
            })
            .collect();
        Self {
            dim: self.dim,
            atoms,
        }
    }

    /// Inverse of a diagonal operator `c(P) T_a`: `c(P - a)^{-1} T_{-a}`.
    pub fn inverse_diagonal(&self) -> Option<Self> {
        let mut atoms = Vec::with_capacity(self.atoms.len());
        for a in &self.atoms {
            if a.from != a.to || self.atoms.iter().filter(|b| b.from == a.from).count() != 1 {
                return None;
            }
            let c = a.coeff.shift(-(a.qshift as f64));
            let inv = match c {
                PAmplitude::Const(x) => PAmplitude::Const(1.0 / x),
                f => PAmplitude::new(move |p| 1.0 / f.eval(p)),
            };
            atoms.push(Atom {
                from: a.from,
                to: a.to,
                coeff: inv,
                qshift: -a.qshift,
            });
        }
        Some(Self {
            dim: self.dim,
            atoms,
        })
    }

    /// Atoms grouped by `(from, to, qshift)` with coefficients summed.
    pub fn merged(self) -> Self {
        let mut groups: BTreeMap<(usize, usize, i64), Vec<PAmplitude>> = BTreeMap::new();
        for a in self.atoms {
            groups
                .entry((a.from, a.to, a.qshift))
                .or_default()
                .push(a.coeff);
        }
        let atoms = groups
            .into_iter()
            .map(|((from, to, qshift), cs)| {
                let coeff = if cs.len() == 1 {
                    cs.into_iter().next().unwrap()
                } else {
                    PAmplitude::sum(&cs)
                };
                Atom {
                    from,
                    to,
                    coeff,
                    qshift,
                }
            })
            .collect();
        Self {
            dim: self.dim,
            atoms,
        }
    }

    /// Coefficient of the atom `from -> to` (summed over Q-shifts) at `P`.
    pub fn element(&self, from: usize, to: usize, p: C64) -> C64 {
        self.atoms
            .iter()
            .filter(|a| a.from == from && a.to == to)
            .map(|a| a.coeff.eval(p))
            .sum()
    }
}

/// Scale-aware residual between two operators at sampled `P`.
///
/// Atoms are grouped by `(from, to, qshift)`; each group's sum is divided by the
/// largest individual term in it (absolute below `1e-12`), and the worst group wins.
pub fn operator_residual(lhs: &SlotOperator, rhs: &SlotOperator, samples: &[C64]) -> f64 {
    let mut worst = 0.0f64;
    for &p in samples {
        let mut groups: BTreeMap<(usize, usize, i64), (C64, f64)> = BTreeMap::new();
        for (sign, op) in [(1.0, lhs), (-1.0, rhs)] {
            for a in &op.atoms {
                let v = a.coeff.eval(p);
                let g = groups
                    .entry((a.from, a.to, a.qshift))
                    .or_insert((C64::new(0.0, 0.0), 0.0));
                g.0 += sign * v;
                g.1 = g.1.max(v.norm());
            }
        }
        for (sum, scale) in groups.values() {
            let r = if *scale > 1e-12 {
                sum.norm() / scale
            } else {
                sum.norm()
            };
            worst = worst.max(if r.is_nan() { f64::INFINITY } else { r });
        }
    }
    worst
}
