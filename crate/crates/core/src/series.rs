//! Terminating elliptic and basic hypergeometric series.

use num_complex::Complex64 as C64;

use crate::error::{pole, Error, Result};
use crate::theta::ModularParams;

const INT_EPS: f64 = 1e-9;

/// Neumaier-compensated complex accumulator.
#[derive(Default, Clone, Copy, Debug)]
pub struct CompensatedSum {
    sum: C64,
    comp: C64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: C64) {
        let (s_re, c_re) = two_sum(self.sum.re, x.re);
        let (s_im, c_im) = two_sum(self.sum.im, x.im);
        self.sum = C64::new(s_re, s_im);
        self.comp += C64::new(c_re, c_im);
    }

    pub fn value(&self) -> C64 {
        self.sum + self.comp
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let c = if a.abs() >= b.abs() {
        (a - s) + b
    } else {
        (b - s) + a
    };
    (s, c)
}

/// Nonnegative `n` with `x = -n`, if `x` is (numerically) a nonpositive integer.
pub fn nonpositive_integer(x: C64) -> Option<usize> {
    let n = x.re.round();
    if n <= 0.0 && (x - n).norm() < INT_EPS {
        Some((-n) as usize)
    } else {
        None
    }
}

/// Parameters of `_{s+1}V_s(u0; u_1, ..., u_{s-4})`.
#[derive(Clone, Debug)]
pub struct VSeriesSpec {
    pub u0: C64,
    pub numerator_params: Vec<C64>,
    /// Series subscript; the number of numerator parameters is `s - 4`.
    pub s: usize,
    pub params: ModularParams,
}

impl VSeriesSpec {
    pub fn new(u0: C64, numerator_params: Vec<C64>, params: ModularParams) -> Self {
        let s = numerator_params.len() + 4;
        Self {
            u0,
            numerator_params,
            s,
            params,
        }
    }

    /// Termination index: the smallest `n` with some `u_i = -n`.
    pub fn termination_index(&self) -> Option<usize> {
        self.numerator_params
            .iter()
            .filter_map(|&x| nonpositive_integer(x))
            .min()
    }

    /// The Frenkel–Turaev `_{10}V_9(b-c-s; -s, a-c, -a-c+1-s, b+d, b-d)`.
    pub fn frenkel_turaev(a: C64, b: C64, c: C64, d: C64, s: usize, params: ModularParams) -> Self {
        let sf = s as f64;
        Self::new(
            b - c - sf,
            vec![C64::new(-sf, 0.0), a - c, -a - c + 1.0 - sf, b + d, b - d],
            params,
        )
    }
}

fn v_term_ratio(spec: &VSeriesSpec, j: usize) -> Result<C64> {
    let pm = &spec.params;
    let jf = j as f64;
    let u0 = spec.u0;
    let mut num = pm.br(u0 + 2.0 * jf + 2.0) * pm.br(u0 + jf);
    let mut den = pm.br(u0 + 2.0 * jf) * pm.br(C64::from(1.0 + jf));
    for &x in &spec.numerator_params {
        num *= pm.br(x + jf);
        let d = u0 + 1.0 - x + jf;
        if pm.is_bracket_zero(d, 1e-12) {
            return pole(format!("denominator [{d}] vanishes at summation index {j}"));
        }
        den *= pm.br(d);
    }
    Ok(num / den)
}

/// The terminating very-well-poised series, summed up to its termination index.
pub fn elliptic_v(spec: &VSeriesSpec) -> Result<C64> {
    let n = spec.termination_index().ok_or_else(|| {
        Error::NonTerminating("no numerator parameter is a nonpositive integer".into())
    })?;
    elliptic_v_terms(spec, n)
}

/// Partial sum over `j = 0..=n` regardless of termination; once a term is exactly zero
/// every later term is zero too.
pub fn elliptic_v_terms(spec: &VSeriesSpec, n: usize) -> Result<C64> {
    if spec.params.is_bracket_zero(spec.u0, 1e-12) {
        return pole("[u0] vanishes");
    }
    let mut acc = CompensatedSum::default();
    let mut t = C64::new(1.0, 0.0);
    acc.add(t);
    for j in 0..n {
        t *= v_term_ratio(spec, j)?;
        if t == C64::new(0.0, 0.0) {
            break;
        }
        acc.add(t);
    }
    let v = acc.value();
    if !v.is_finite() {
        return pole("series sum is not finite");
    }
    Ok(v)
}

/// Balancing residual `|sum u_i - ((s-7)/2 + (s-5)/2 u0)|` and whether it is below `tol`.
pub fn check_balanced(spec: &VSeriesSpec) -> (bool, f64) {
    let s = spec.s as f64;
    let sum: C64 = spec.numerator_params.iter().sum();
    let res = (sum - ((s - 7.0) / 2.0 + (s - 5.0) / 2.0 * spec.u0)).norm();
    (res < spec.params.tol, res)
}

/// `[c-b, c+b, a+d, a-d]_s / [a-b, a+b, c+d, c-d]_s`.
pub fn frenkel_turaev_rhs(
    a: C64,
    b: C64,
    c: C64,
    d: C64,
    s: usize,
    params: &ModularParams,
) -> Result<C64> {
    let f = |x| params.fact(x, s);
    let den = f(a - b) * f(a + b) * f(c + d) * f(c - d);
    if den == C64::new(0.0, 0.0) {
        return pole("vanishing denominator factorial");
    }
    let v = f(c - b) * f(c + b) * f(a + d) * f(a - d) / den;
    if !v.is_finite() {
        return pole("closed form is not finite");
    }
    Ok(v)
}

/// `(a; Q)_n`.
pub fn poch(a: C64, base: C64, n: usize) -> C64 {
    let mut out = C64::new(1.0, 0.0);
    let mut bk = C64::new(1.0, 0.0);
    for _ in 0..n {
        out *= 1.0 - a * bk;
        bk *= base;
    }
    out
}

/// Parameters of a terminating basic series in base `base` with argument `z`.
///
/// For [`basic_phi`] the lists are the usual upper/lower parameters. For [`basic_w`]
/// the first upper entry is `a` and the rest are the `b_i`; `denominators` is unused.
#[derive(Clone, Debug)]
pub struct PhiSeriesSpec {
    pub numerators: Vec<C64>,
    pub denominators: Vec<C64>,
    pub base: C64,
    pub z: C64,
    /// Explicit termination index; detected from the numerators when `None`.
    pub terms: Option<usize>,
}

impl PhiSeriesSpec {
    pub fn phi(numerators: Vec<C64>, denominators: Vec<C64>, base: C64, z: C64) -> Self {
        Self {
            numerators,
            denominators,
            base,
            z,
            terms: None,
        }
    }

    pub fn very_well_poised(a: C64, bs: Vec<C64>, base: C64, z: C64) -> Self {
        let mut numerators = vec![a];
        numerators.extend(bs);
        Self {
            numerators,
            denominators: Vec::new(),
            base,
            z,
            terms: None,
        }
    }

    pub fn with_terms(mut self, n: usize) -> Self {
        self.terms = Some(n);
        self
    }

    fn detect(&self, skip_first: bool) -> Result<usize> {
        if let Some(n) = self.terms {
            return Ok(n);
        }
        let lb = self.base.ln();
        let start = usize::from(skip_first);
        self.numerators[start..]
            .iter()
            .filter_map(|&x| {
                if x == C64::new(1.0, 0.0) {
                    return Some(0);
                }
                let k = x.ln() / lb;
                nonpositive_integer(k)
            })
            .min()
            .ok_or_else(|| Error::NonTerminating("no upper parameter of the form base^{-k}".into()))
    }
}

/// Terminating `_{r+1}phi_r` summed term by term.
pub fn basic_phi(spec: &PhiSeriesSpec) -> Result<C64> {
    let n = spec.detect(false)?;
    let q = spec.base;
    let mut acc = CompensatedSum::default();
    let mut t = C64::new(1.0, 0.0);
    acc.add(t);
    for j in 0..n {
        let qj = q.powu(j as u32);
        let mut num = spec.z;
        let mut den = 1.0 - q * qj;
        for &a in &spec.numerators {
            num *= 1.0 - a * qj;
        }
        for &b in &spec.denominators {
            den *= 1.0 - b * qj;
        }
        if den.norm() == 0.0 {
            return pole(format!("lower parameter hits a zero at index {j}"));
        }
        t *= num / den;
        acc.add(t);
    }
    finite(acc.value())
}

/// Terminating very-well-poised `W(a; b_1, ...; base, z)`.
pub fn basic_w(spec: &PhiSeriesSpec) -> Result<C64> {
    let n = spec.detect(true)?;
    let q = spec.base;
    let a = spec.numerators[0];
    let bs = &spec.numerators[1..];
    let mut acc = CompensatedSum::default();
    let mut t = C64::new(1.0, 0.0);
    acc.add(t);
    for j in 0..n {
        let qj = q.powu(j as u32);
        let mut num = spec.z * (1.0 - a * qj * qj * q * q) * (1.0 - a * qj);
        let mut den = (1.0 - a * qj * qj) * (1.0 - q * qj);
        for &b in bs {
            num *= 1.0 - b * qj;
            den *= 1.0 - a * q / b * qj;
        }
        if den.norm() == 0.0 {
            return pole(format!("denominator vanishes at index {j}"));
        }
        t *= num / den;
        acc.add(t);
    }
    finite(acc.value())
}

fn finite(v: C64) -> Result<C64> {
    if v.is_finite() {
        Ok(v)
    } else {
        pole("series value is not finite")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_parameter_gives_one() {
        let pm = ModularParams::real(0.5, 3.0).unwrap();
        let spec = VSeriesSpec::new(
            C64::new(0.3, 0.1),
            vec![C64::new(0.0, 0.0), C64::new(0.7, 0.0)],
            pm,
        );
        assert_eq!(elliptic_v(&spec).unwrap(), C64::new(1.0, 0.0));
    }

    #[test]
    fn nonterminating_rejected() {
        let pm = ModularParams::real(0.5, 3.0).unwrap();
        let spec = VSeriesSpec::new(C64::new(0.3, 0.1), vec![C64::new(0.5, 0.0)], pm);
        assert!(matches!(elliptic_v(&spec), Err(Error::NonTerminating(_))));
    }

    #[test]
    fn phi_termination_detection() {
        let q = C64::new(0.36, 0.0);
        let spec = PhiSeriesSpec::phi(
            vec![q.powi(-2), C64::new(0.2, 0.0)],
            vec![C64::new(0.3, 0.0)],
            q,
            q,
        );
        let direct = 1.0
            + (1.0 - q.powi(-2)) * 0.8 / ((1.0 - q) * 0.7) * q
            + (1.0 - q.powi(-2)) * (1.0 - q.powi(-1)) * 0.8 * (1.0 - 0.2 * q)
                / ((1.0 - q) * (1.0 - q * q) * 0.7 * (1.0 - 0.3 * q))
                * q
                * q;
        assert!((basic_phi(&spec).unwrap() - direct).norm() < 1e-13);
    }
}
