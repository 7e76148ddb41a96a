//! Degenerations of the R-matrix and of the Clebsch–Gordan series as `p`, `z = q^{2u}`
//! or `x = q^{2P}` tend to zero, and the q-Racah / q-Hahn identifications.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::cgkit::{cg_v12_spec, SingularVectorSpec};
use crate::error::{domain, Result};
use crate::report::Residual;
use crate::rmatrix::{from_entries, r_entries_with, rho_plus, Mat4, REntries};
use crate::series::{basic_phi, basic_w, elliptic_v, poch, PhiSeriesSpec};
use crate::theta::{qpoch, ModularParams};

/// Limit-parameter values used by every numeric stage, loosest first.
pub const LIMIT_STEPS: [f64; 3] = [1e-6, 1e-8, 1e-10];

#[derive(Clone, Debug, Serialize)]
pub struct LimitPoint {
    pub param: f64,
    /// Worst-deviating entry of the reference and of the limit candidate.
    pub reference: C64,
    pub value: C64,
    /// Normalizer of `deviation`.
    pub scale: f64,
    pub deviation: f64,
}

impl LimitPoint {
    fn scalar(param: f64, reference: C64, value: C64) -> Self {
        Self {
            param,
            reference,
            value,
            scale: reference.norm().max(value.norm()),
            deviation: rel(reference, value),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitStage {
    pub name: String,
    /// Empty-parameter stages are exact transformations evaluated once.
    pub points: Vec<LimitPoint>,
    /// Order of the two-point Richardson extrapolation (0 for exact stages).
    pub extrapolation_order: u32,
    /// Relative deviation of the extrapolated value from the reference.
    pub richardson: f64,
}

impl LimitStage {
    fn exact(name: impl Into<String>, reference: C64, value: C64) -> Self {
        let pt = LimitPoint::scalar(0.0, reference, value);
        let deviation = pt.deviation;
        Self {
            name: name.into(),
            points: vec![pt],
            extrapolation_order: 0,
            richardson: deviation,
        }
    }

    fn numeric(name: impl Into<String>, points: Vec<LimitPoint>) -> Self {
        let n = points.len();
        let richardson = if n >= 2 {
            let (a, b) = (&points[n - 2], &points[n - 1]);
            let ext = (a.param * b.value - b.param * a.value) / (a.param - b.param);
            let d = (b.reference - ext).norm() / b.scale.max(1e-300);
            if d.is_finite() {
                d
            } else {
                f64::INFINITY
            }
        } else {
            points.last().map_or(f64::INFINITY, |p| p.deviation)
        };
        Self {
            name: name.into(),
            points,
            extrapolation_order: 1,
            richardson,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.extrapolation_order == 0
    }

    /// Deviation at the tightest parameter.
    pub fn final_deviation(&self) -> f64 {
        self.points.last().map_or(f64::INFINITY, |p| p.deviation)
    }

    /// Deviations strictly decrease as the parameter tightens.
    pub fn monotone(&self) -> bool {
        self.points
            .windows(2)
            .all(|w| w[1].deviation < w[0].deviation)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitReport {
    pub chain: String,
    pub stages: Vec<LimitStage>,
}

fn rel(a: C64, b: C64) -> f64 {
    let s = a.norm().max(b.norm());
    if s == 0.0 {
        0.0
    } else {
        let d = (a - b).norm() / s;
        if d.is_finite() {
            d
        } else {
            f64::INFINITY
        }
    }
}

/// Largest entrywise deviation relative to the largest reference entry.
pub fn matrix_deviation(reference: &Mat4, value: &Mat4) -> (f64, C64, C64) {
    let (d, r, v, _) = matrix_deviation_scaled(reference, value);
    (d, r, v)
}

fn matrix_deviation_scaled(reference: &Mat4, value: &Mat4) -> (f64, C64, C64, f64) {
    let scale = reference
        .iter()
        .flatten()
        .map(|x| x.norm())
        .fold(0.0, f64::max)
        .max(1e-300);
    let mut worst = (0.0, reference[0][0], value[0][0]);
    for i in 0..4 {
        for j in 0..4 {
            let d = (reference[i][j] - value[i][j]).norm() / scale;
            let d = if d.is_finite() { d } else { f64::INFINITY };
            if d > worst.0 {
                worst = (d, reference[i][j], value[i][j]);
            }
        }
    }
    (worst.0, worst.1, worst.2, scale)
}

fn point(param: f64, reference: &Mat4, value: &Mat4) -> LimitPoint {
    let (deviation, r, v, scale) = matrix_deviation_scaled(reference, value);
    LimitPoint {
        param,
        reference: r,
        value: v,
        scale,
        deviation,
    }
}

/// `b(z) = q(1-z)/(1-q^2 z)`.
fn b_trig(z: C64, q: f64) -> C64 {
    q * (1.0 - z) / (1.0 - q * q * z)
}

/// `c(z) = (1-q^2)/(1-q^2 z)`.
fn c_trig(z: C64, q: f64) -> C64 {
    (1.0 - q * q) / (1.0 - q * q * z)
}

/// Middle entries of the trigonometric dynamical matrix at `z = q^{2u}`, `x = q^{2s}`.
pub fn trig_entries(z: C64, x: C64, q: f64) -> REntries {
    let q2 = q * q;
    let (b, c) = (b_trig(z, q), c_trig(z, q));
    REntries {
        b: (1.0 - q2 * x) * (1.0 - x / q2) / ((1.0 - x) * (1.0 - x)) * b,
        c: (1.0 - x * z) / (1.0 - x) * c,
        b_bar: b,
        c_bar: (1.0 - x / z) / (1.0 - x) * z * c,
    }
}

/// `ρ_trig(z) = q^{1/2} (z^{-1}; q^4)(q^4 z^{-1}; q^4) / (q^2 z^{-1}; q^4)^2`.
pub fn rho_trig(z: C64, q: f64, trunc: usize) -> Result<C64> {
    let q4 = C64::from(q.powi(4));
    let w = 1.0 / z;
    Ok(
        q.sqrt() * qpoch(w, &[q4], trunc)? * qpoch(q4 * w, &[q4], trunc)?
            / qpoch(q * q * w, &[q4], trunc)?.powu(2),
    )
}

/// The `P`-dependent constant matrix reached from the trigonometric one as `z -> 0`
/// (up to an overall `q^{1/2}`).
pub fn r_dyn_const(x: C64, q: f64) -> Mat4 {
    let q2 = q * q;
    let e = REntries {
        b: q * (1.0 - q2 * x) * (1.0 - x / q2) / ((1.0 - x) * (1.0 - x)),
        c: (1.0 - q2) / (1.0 - x),
        b_bar: C64::from(q),
        c_bar: -x * (1.0 - q2) / (1.0 - x),
    };
    from_entries(C64::new(1.0, 0.0), &e)
}

/// The non-dynamical affine matrix reached as `x -> 0` (up to `ρ_trig`).
pub fn r_affine(z: C64, q: f64) -> Mat4 {
    let e = REntries {
        b: b_trig(z, q),
        c: c_trig(z, q),
        b_bar: b_trig(z, q),
        c_bar: z * c_trig(z, q),
    };
    from_entries(C64::new(1.0, 0.0), &e)
}

/// The constant matrix at the end of both routes (up to `q^{1/2}`).
pub fn r_const(q: f64) -> Mat4 {
    let e = REntries {
        b: C64::from(q),
        c: C64::from(1.0 - q * q),
        b_bar: C64::from(q),
        c_bar: C64::new(0.0, 0.0),
    };
    from_entries(C64::new(1.0, 0.0), &e)
}

/// `q^{-x^2/r}[x]`: the bracket with its Gaussian factor removed, which tends to
/// `q^{-x}(1 - q^{2x})` as `p -> 0`.
fn reduced_bracket(x: C64, params: &ModularParams) -> C64 {
    params.br(x) * params.qpow(-x * x / params.r)
}

fn r_for_nome(q: f64, p: f64) -> f64 {
    p.ln() / (2.0 * q.ln())
}

/// The R-matrix degeneration chain at fixed `q`, starting from generic `(u, s)`.
pub fn r_limit_chain(u: C64, s: C64, q: f64, trunc: usize) -> Result<LimitReport> {
    if !(0.0 < q && q < 1.0) {
        return domain("the limit chain needs 0 < q < 1");
    }
    let pm0 = ModularParams::real(q, 3.0)?.with_trunc(trunc)?;
    let z = pm0.qpow(2.0 * u);
    let x = pm0.qpow(2.0 * s);
    let trig = from_entries(C64::new(1.0, 0.0), &trig_entries(z, x, q));
    let mut stages = Vec::new();

    let mut ent = Vec::new();
    let mut rho = Vec::new();
    for &p in &LIMIT_STEPS {
        let pm = ModularParams::real(q, r_for_nome(q, p))?.with_trunc(trunc)?;
        let e = r_entries_with(u, s, |y| reduced_bracket(y, &pm))?;
        ent.push(point(p, &trig, &from_entries(C64::new(1.0, 0.0), &e)));
        let rp = rho_plus(u, &pm)? * pm.qpow(-2.0 * u / (2.0 * pm.r)) * q.sqrt();
        let rt = rho_trig(z, q, trunc)?;
        rho.push(LimitPoint::scalar(p, rt, rp));
    }
    stages.push(LimitStage::numeric(
        "elliptic -> trigonometric entries (p -> 0)",
        ent,
    ));
    stages.push(LimitStage::numeric(
        "elliptic -> trigonometric rho (p -> 0)",
        rho,
    ));

    let im_u = u.im;
    let im_s = s.im;
    let mut z_dyn = Vec::new();
    let mut z_aff = Vec::new();
    let mut x_aff = Vec::new();
    let mut x_dyn = Vec::new();
    for &t in &LIMIT_STEPS {
        // |z| = t and |x| = t along the fixed phases of u and s.
        let zt = pm0.qpow(C64::new(r_for_nome(q, t), im_u) * 2.0);
        let xt = pm0.qpow(C64::new(r_for_nome(q, t), im_s) * 2.0);
        z_dyn.push(point(
            t,
            &r_dyn_const(x, q),
            &from_entries(C64::new(1.0, 0.0), &trig_entries(zt, x, q)),
        ));
        x_aff.push(point(
            t,
            &r_affine(z, q),
            &from_entries(C64::new(1.0, 0.0), &trig_entries(z, xt, q)),
        ));
        z_aff.push(point(t, &r_const(q), &r_affine(zt, q)));
        x_dyn.push(point(t, &r_const(q), &r_dyn_const(xt, q)));
    }
    stages.push(LimitStage::numeric(
        "trigonometric -> dynamical constant (z -> 0)",
        z_dyn,
    ));
    stages.push(LimitStage::numeric(
        "trigonometric -> affine (x -> 0)",
        x_aff,
    ));
    stages.push(LimitStage::numeric("affine -> constant (z -> 0)", z_aff));
    stages.push(LimitStage::numeric(
        "dynamical constant -> constant (x -> 0)",
        x_dyn,
    ));

    // Both routes to the constant matrix, taken from the trigonometric matrix at small z and x.
    let t = LIMIT_STEPS[2];
    let zt = pm0.qpow(C64::new(r_for_nome(q, t), im_u) * 2.0);
    let xt = pm0.qpow(C64::new(r_for_nome(q, t), im_s) * 2.0);
    let via_dyn = from_entries(C64::new(1.0, 0.0), &trig_entries(zt, xt, q));
    let via_aff = r_affine(zt, q);
    let pt = point(t, &via_aff, &via_dyn);
    let d = pt.deviation;
    stages.push(LimitStage {
        name: "diagram: routes through affine and dynamical constant agree".into(),
        points: vec![pt],
        extrapolation_order: 0,
        richardson: d,
    });
    Ok(LimitReport {
        chain: "R-matrix".into(),
        stages,
    })
}

/// Integer data `(l1, l2, s, k, m)` of one coefficient in the series chain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChainParams {
    pub l1: usize,
    pub l2: usize,
    pub s: usize,
    pub k: usize,
    pub m: usize,
}

impl ChainParams {
    pub fn new(l1: usize, l2: usize, s: usize, k: usize, m: usize) -> Self {
        Self { l1, l2, s, k, m }
    }

    pub fn l(&self) -> usize {
        self.l1 + self.l2 - 2 * self.s
    }

    /// The prefactor·`_4φ_3` stage is finite only when `s + k <= l1`.
    pub fn four_phi_three_defined(&self) -> bool {
        self.s + self.k <= self.l1
    }
}

/// Parameter sets used by the limits suite.
pub const CHAIN_GRID: [(usize, usize, usize, usize, usize); 5] = [
    (2, 2, 1, 1, 1),
    (3, 2, 1, 1, 2),
    (3, 3, 2, 1, 2),
    (2, 3, 1, 1, 3),
    (3, 3, 1, 2, 2),
];

fn v12_args(
    cp: &ChainParams,
    u: C64,
    a: C64,
    p: C64,
    params: &ModularParams,
) -> Result<(C64, Vec<C64>)> {
    let spec = SingularVectorSpec::new(cp.l1, cp.l2, cp.s, a)?;
    let vs = cg_v12_spec(&spec, cp.m, cp.k, u, p, params);
    Ok((vs.u0, vs.numerator_params))
}

struct Base {
    q: f64,
    lq: f64,
}

impl Base {
    fn qq(&self, x: C64) -> C64 {
        (2.0 * x * self.lq).exp()
    }

    fn qf(&self, x: f64) -> C64 {
        self.qq(C64::from(x))
    }

    fn q2(&self) -> C64 {
        C64::from(self.q * self.q)
    }
}

fn w10(b: &Base, u0: C64, us: &[C64]) -> Result<C64> {
    basic_w(&PhiSeriesSpec::very_well_poised(
        b.qq(u0),
        us.iter().map(|&x| b.qq(x)).collect(),
        b.q2(),
        b.q2(),
    ))
}

fn w8(b: &Base, cp: &ChainParams, p: C64) -> Result<C64> {
    let (l1, l2, s, k, m, l) = (
        cp.l1 as f64,
        cp.l2 as f64,
        cp.s as f64,
        cp.k as f64,
        cp.m as f64,
        cp.l() as f64,
    );
    let bs = vec![
        b.qf(-s),
        b.qf(-k),
        b.qq(p - k),
        b.qf(l2 - s + 1.0),
        b.qq(p + m - 2.0 * k + l1 + 1.0),
    ];
    basic_w(&PhiSeriesSpec::very_well_poised(
        b.qq(p + m - 2.0 * k),
        bs,
        b.q2(),
        b.qf(-(l - m)),
    ))
}

/// Prefactor and `_4φ_3` of the exact transformation of the `_8W_7` stage.
fn w8_as_4phi3(b: &Base, cp: &ChainParams, p: C64) -> Result<(C64, PhiSeriesSpec)> {
    let (l1, l2, s, k, m, l) = (
        cp.l1 as f64,
        cp.l2 as f64,
        cp.s as f64,
        cp.k as f64,
        cp.m as f64,
        cp.l() as f64,
    );
    let q2 = b.q2();
    let mut pre = C64::new(1.0, 0.0);
    let factors = [
        (p + m - 2.0 * k + 1.0, 1),
        (C64::from(m + 1.0), 1),
        (p + m - k - l2 + s, 1),
        (C64::from(k - l1), 1),
        (p + m - k + 1.0, -1),
        (C64::from(m - k + 1.0), -1),
        (p + m - 2.0 * k - l2 + s, -1),
        (C64::from(-l1), -1),
    ];
    for (x, e) in factors {
        let f = poch(b.qq(x), q2, cp.s);
        pre *= if e > 0 { f } else { 1.0 / f };
    }
    pre *= b.qf(-s * k);
    let spec = PhiSeriesSpec::phi(
        vec![
            b.qf(-s),
            b.qf(-k),
            b.qq(-(p + m - k + s)),
            b.qf(l - m + 1.0),
        ],
        vec![
            b.qf(-(s + m)),
            b.qq(-(p + m - k + l1 - l - 1.0)),
            b.qf(l1 + 1.0 - s - k),
        ],
        q2,
        q2,
    );
    Ok((pre, spec))
}

fn three_phi_two_limit(b: &Base, cp: &ChainParams) -> Result<C64> {
    let (l1, s, k, m, l) = (
        cp.l1 as f64,
        cp.s as f64,
        cp.k as f64,
        cp.m as f64,
        cp.l() as f64,
    );
    let q2 = b.q2();
    let pre = poch(b.qf(m + 1.0), q2, cp.s) / poch(b.qf(m - k + 1.0), q2, cp.s);
    let phi = basic_phi(&PhiSeriesSpec::phi(
        vec![b.qf(-s), b.qf(-k), b.qf(-(s + l + 1.0))],
        vec![b.qf(-(s + m)), b.qf(-l1)],
        q2,
        q2,
    ))?;
    Ok(pre * phi)
}

/// The four-stage degeneration of one Clebsch–Gordan series at base `q`.
pub fn v12_chain(
    cp: &ChainParams,
    u: C64,
    a: C64,
    p: C64,
    q: f64,
    trunc: usize,
) -> Result<LimitReport> {
    if !(0.0 < q && q < 1.0) {
        return domain("the limit chain needs 0 < q < 1");
    }
    if cp.s > cp.l1.min(cp.l2) || cp.m > cp.l() {
        return domain(format!("invalid chain parameters {cp:?}"));
    }
    let b = Base { q, lq: q.ln() };
    let pm0 = ModularParams::real(q, 3.0)?.with_trunc(trunc)?;
    let (u0, us) = v12_args(cp, u, a, p, &pm0)?;
    let mut stages = Vec::new();

    let w10_ref = w10(&b, u0, &us)?;
    let mut pts = Vec::new();
    for &pp in &LIMIT_STEPS {
        let pm = ModularParams::real(q, r_for_nome(q, pp))?.with_trunc(trunc)?;
        let v = elliptic_v(&crate::series::VSeriesSpec::new(u0, us.clone(), pm))?;
        pts.push(LimitPoint::scalar(pp, w10_ref, v));
    }
    stages.push(LimitStage::numeric("12V11 -> 10W9 (p -> 0)", pts));

    let w8_ref = w8(&b, cp, p)?;
    let mut pts = Vec::new();
    for &zz in &LIMIT_STEPS {
        let uu = C64::new(zz.ln() / (2.0 * b.lq), u.im);
        let (u0z, usz) = v12_args(cp, uu, a, p, &pm0)?;
        let v = w10(&b, u0z, &usz)?;
        pts.push(LimitPoint::scalar(zz, w8_ref, v));
    }
    stages.push(LimitStage::numeric("10W9 -> 8W7 (z -> 0)", pts));

    if cp.four_phi_three_defined() {
        let (pre, spec) = w8_as_4phi3(&b, cp, p)?;
        stages.push(LimitStage::exact(
            "8W7 = prefactor * 4phi3",
            w8_ref,
            pre * basic_phi(&spec)?,
        ));
    }

    let lim = three_phi_two_limit(&b, cp)?;
    let mut pts = Vec::new();
    for &xx in &LIMIT_STEPS {
        let pp = C64::new(xx.ln() / (2.0 * b.lq), p.im);
        let v = w8(&b, cp, pp)?;
        pts.push(LimitPoint::scalar(xx, lim, v));
    }
    stages.push(LimitStage::numeric(
        "8W7 -> prefactor * 3phi2 (x -> 0)",
        pts,
    ));
    Ok(LimitReport {
        chain: format!(
            "series l1={} l2={} s={} k={} m={}",
            cp.l1, cp.l2, cp.s, cp.k, cp.m
        ),
        stages,
    })
}

/// `Q_n(q^{-x}; α, β, N | q) = 3φ2(q^{-n}, αβq^{n+1}, q^{-x}; αq, q^{-N}; q, q)`.
pub fn q_hahn(n: usize, x: usize, alpha: C64, beta: C64, big_n: usize, q: C64) -> Result<C64> {
    let qn = |k: usize| q.powi(-(k as i32));
    basic_phi(
        &PhiSeriesSpec::phi(
            vec![qn(n), alpha * beta * q.powi(n as i32 + 1), qn(x)],
            vec![alpha * q, qn(big_n)],
            q,
            q,
        )
        .with_terms(n.min(x)),
    )
}

fn q_hahn_weight(x: usize, alpha: C64, beta: C64, big_n: usize, q: C64) -> C64 {
    let qnn = q.powi(-(big_n as i32));
    poch(alpha * q, q, x) * poch(qnn, q, x)
        / (poch(q, q, x) * poch(qnn / beta, q, x))
        / (alpha * beta * q).powi(x as i32)
}

/// `R_n(μ(x); α, β, γ, δ | q) = 4φ3(q^{-n}, αβq^{n+1}, q^{-x}, γδq^{x+1}; αq, βδq, γq; q, q)`.
pub fn q_racah(
    n: usize,
    x: usize,
    alpha: C64,
    beta: C64,
    gamma: C64,
    delta: C64,
    q: C64,
) -> Result<C64> {
    let qn = |k: usize| q.powi(-(k as i32));
    basic_phi(
        &PhiSeriesSpec::phi(
            vec![
                qn(n),
                alpha * beta * q.powi(n as i32 + 1),
                qn(x),
                gamma * delta * q.powi(x as i32 + 1),
            ],
            vec![alpha * q, beta * delta * q, gamma * q],
            q,
            q,
        )
        .with_terms(n.min(x)),
    )
}

fn q_racah_weight(x: usize, alpha: C64, beta: C64, gamma: C64, delta: C64, q: C64) -> C64 {
    let gd = gamma * delta;
    let num = poch(alpha * q, q, x)
        * poch(beta * delta * q, q, x)
        * poch(gamma * q, q, x)
        * poch(gd * q, q, x);
    let den = poch(q, q, x)
        * poch(gd * q / alpha, q, x)
        * poch(gamma * q / beta, q, x)
        * poch(delta * q, q, x);
    num / den * (1.0 - gd * q.powi(2 * x as i32 + 1))
        / ((alpha * beta * q).powi(x as i32) * (1.0 - gd * q))
}

/// Largest off-diagonal Gram entry relative to the geometric mean of the diagonal ones.
fn gram_off_diagonal(
    big_n: usize,
    poly: impl Fn(usize, usize) -> Result<C64>,
    weight: impl Fn(usize) -> C64,
) -> Result<f64> {
    let mut g = vec![vec![C64::new(0.0, 0.0); big_n + 1]; big_n + 1];
    for i in 0..=big_n {
        for j in 0..=big_n {
            for x in 0..=big_n {
                g[i][j] += weight(x) * poly(i, x)? * poly(j, x)?;
            }
        }
    }
    let mut worst = 0.0f64;
    for i in 0..=big_n {
        for j in 0..=big_n {
            if i != j {
                worst = worst.max(g[i][j].norm() / (g[i][i].norm() * g[j][j].norm()).sqrt());
            }
        }
    }
    Ok(worst)
}

/// Orthogonality, duality and parameter identification of the terminal series of the chain.
pub fn qracah_identify(q: f64) -> Result<Vec<Residual>> {
    let qc = C64::from(q);
    let big_n = 3;
    let (al, be) = (C64::new(0.31, 0.0), C64::new(0.47, 0.0));
    let mut out = Vec::new();
    out.push(Residual::new(
        "q-Hahn orthogonality N=3",
        gram_off_diagonal(
            big_n,
            |n, x| q_hahn(n, x, al, be, big_n, qc),
            |x| q_hahn_weight(x, al, be, big_n, qc),
        )?,
    ));
    // αq = q^{-N} truncates the q-Racah grid.
    let alpha = qc.powi(-(big_n as i32) - 1);
    let (beta, gamma, delta) = (
        C64::new(0.43, 0.0),
        C64::new(0.29, 0.0),
        C64::new(0.61, 0.0),
    );
    out.push(Residual::new(
        "q-Racah orthogonality N=3",
        gram_off_diagonal(
            big_n,
            |n, x| q_racah(n, x, alpha, beta, gamma, delta, qc),
            |x| q_racah_weight(x, alpha, beta, gamma, delta, qc),
        )?,
    ));
    let mut dual = 0.0f64;
    let mut deg0 = 0.0f64;
    for n in 0..=big_n {
        for x in 0..=big_n {
            let lhs = q_racah(n, x, alpha, beta, gamma, delta, qc)?;
            let rhs = q_racah(x, n, gamma, delta, alpha, beta, qc)?;
            dual = dual.max(rel(lhs, rhs));
        }
        deg0 = deg0.max((q_hahn(0, n, al, be, big_n, qc)? - 1.0).norm());
        deg0 = deg0.max((q_racah(0, n, alpha, beta, gamma, delta, qc)? - 1.0).norm());
    }
    out.push(Residual::new("q-Racah duality", dual));
    out.push(Residual::new("degree-0 polynomials equal 1", deg0));

    let b = Base { q, lq: q.ln() };
    let p = C64::new(1.3, crate::sampling::P_OFFSET);
    let mut balance = 0.0f64;
    let mut hahn = 0.0f64;
    for (l1, l2, s, k, m) in CHAIN_GRID {
        let cp = ChainParams::new(l1, l2, s, k, m);
        let (_, spec) = w8_as_4phi3(&b, &cp, p)?;
        let num: C64 = spec.numerators.iter().product();
        let den: C64 = spec.denominators.iter().product();
        balance = balance.max(rel(den, b.q2() * num));
        let (sf, mf, lf) = (s as f64, m as f64, cp.l() as f64);
        let q2 = b.q2();
        // Q_n(q^{-2x}; α, β, N | q^2) with n = s, x = k, N = l1; αq^2 = q^{-2(s+m)}.
        let alpha = b.qf(-(sf + mf + 1.0));
        let beta = b.qf(mf - lf - sf - 1.0);
        let direct = basic_phi(&PhiSeriesSpec::phi(
            vec![b.qf(-sf), b.qf(-(k as f64)), b.qf(-(sf + lf + 1.0))],
            vec![b.qf(-(sf + mf)), b.qf(-(l1 as f64))],
            q2,
            q2,
        ))?;
        hahn = hahn.max(rel(direct, q_hahn(s, k, alpha, beta, l1, q2)?));
    }
    out.push(Residual::new("chain 4phi3 is balanced", balance));
    out.push(Residual::new(
        "chain 3phi2 = q-Hahn Q_s(q^{-2k}) with N = l1",
        hahn,
    ));
    Ok(out)
}
