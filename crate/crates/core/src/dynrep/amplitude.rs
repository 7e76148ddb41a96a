use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::error::{pole, Result};

type Func = Arc<dyn Fn(C64) -> C64 + Send + Sync>;

/// A meromorphic function of the dynamical parameter `P`, kept as an evaluable closure.
///
/// Constants are tracked separately so that compositions of shift and `S^±` letters do
/// not grow closure chains.
#[derive(Clone)]
pub enum PAmplitude {
    Const(C64),
    Func(Func),
}

impl fmt::Debug for PAmplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Const(c) => write!(f, "Const({c})"),
            Self::Func(_) => write!(f, "Func(..)"),
        }
    }
}

impl Default for PAmplitude {
    fn default() -> Self {
        Self::one()
    }
}

impl PAmplitude {
    pub fn new(f: impl Fn(C64) -> C64 + Send + Sync + 'static) -> Self {
        Self::Func(Arc::new(f))
    }

    pub fn constant(c: impl Into<C64>) -> Self {
        Self::Const(c.into())
    }

    pub fn one() -> Self {
        Self::Const(C64::new(1.0, 0.0))
    }

    pub fn zero() -> Self {
        Self::Const(C64::new(0.0, 0.0))
    }

    #[inline]
    pub fn eval(&self, p: C64) -> C64 {
        match self {
            Self::Const(c) => *c,
            Self::Func(f) => f(p),
        }
    }

    /// Evaluate, turning a non-finite value into a pole error.
    pub fn eval_checked(&self, p: C64) -> Result<C64> {
        let v = self.eval(p);
        if v.is_finite() {
            Ok(v)
        } else {
            pole(format!("amplitude is not finite at P = {p}"))
        }
    }

    /// `(T_a f)(P) = f(P + a)`.
    pub fn shift(&self, a: f64) -> Self {
        if a == 0.0 {
            return self.clone();
        }
        match self {
            Self::Const(_) => self.clone(),
            Self::Func(f) => {
                let f = f.clone();
                Self::new(move |p| f(p + a))
            }
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (Self::Const(a), Self::Const(b)) => Self::Const(a * b),
            (Self::Const(a), f) | (f, Self::Const(a)) => f.scale(*a),
            (Self::Func(f), Self::Func(g)) => {
                let (f, g) = (f.clone(), g.clone());
                Self::new(move |p| f(p) * g(p))
            }
        }
    }

    /// `P -> self(P) * other(P + a)`, the coefficient rule of atom composition.
    pub fn mul_shifted(&self, other: &Self, a: f64) -> Self {
        self.mul(&other.shift(a))
    }

    pub fn scale(&self, c: C64) -> Self {
        match self {
            Self::Const(a) => Self::Const(a * c),
            Self::Func(_) if c == C64::new(1.0, 0.0) => self.clone(),
            Self::Func(f) => {
                let f = f.clone();
                Self::new(move |p| c * f(p))
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::sum(&[self.clone(), other.clone()])
    }

    pub fn sum(items: &[Self]) -> Self {
        let mut constant = C64::new(0.0, 0.0);
        let mut funcs: Vec<Func> = Vec::new();
        for it in items {
            match it {
                Self::Const(c) => constant += c,
                Self::Func(f) => funcs.push(f.clone()),
            }
        }
        if funcs.is_empty() {
            return Self::Const(constant);
        }
        Self::new(move |p| funcs.iter().fold(constant, |acc, f| acc + f(p)))
    }

    pub fn is_const(&self) -> bool {
        matches!(self, Self::Const(_))
    }
}
