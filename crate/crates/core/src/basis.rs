//! Basis pairs `[S(x), R(x)]` stored as truncated Fourier coefficient
//! sequences, their dilations `S(kx)`, and the validity checks that decide
//! whether the dilated family can analyze and reconstruct a signal.

use std::fmt;
use std::str::FromStr;

use crate::error::{GfdError, Result};
use crate::linalg::{self, Matrix};
use crate::signal::{analyze_fourier, sample_closed_form, FourierSpectrum};
use crate::tolerance::{Tolerances, FRAME_SINGULAR_REL};
use crate::waveform::Waveform;

/// Default harmonic depth of a basis function.
pub const DEFAULT_DEPTH: usize = 64;
/// Grid used to project closed-form generators onto their Fourier series.
pub const GENERATOR_SAMPLES: usize = 4096;
/// Projected coefficients this far below the largest one are quadrature
/// roundoff and are set to exactly zero.
pub const COEFFICIENT_CHOP: f64 = 1e-12;

/// Zero-mean periodic function `sum_q s_q cos(2 pi q x) + s'_q sin(2 pi q x)`,
/// `q = 1..=Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisFunction {
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl BasisFunction {
    /// Index 0 of each vector holds harmonic 1. The shorter side is zero-padded.
    pub fn new(mut cos: Vec<f64>, mut sin: Vec<f64>) -> Result<Self> {
        let depth = cos.len().max(sin.len());
        if depth == 0 {
            return Err(GfdError::Config("basis function has no coefficients".into()));
        }
        cos.resize(depth, 0.0);
        sin.resize(depth, 0.0);
        if cos.iter().chain(&sin).any(|v| !v.is_finite()) {
            return Err(GfdError::Config("basis coefficients must be finite".into()));
        }
        let f = Self { cos, sin };
        let energy = f.energy();
        if !(energy > 0.0 && energy.is_finite()) {
            return Err(GfdError::Config(format!(
                "basis function energy must be positive and finite, got {energy}"
            )));
        }
        Ok(f)
    }

    pub fn depth(&self) -> usize {
        self.cos.len()
    }

    /// Cosine coefficient `s_q`; zero outside `1..=Q`.
    pub fn cos(&self, q: usize) -> f64 {
        if q == 0 {
            return 0.0;
        }
        self.cos.get(q - 1).copied().unwrap_or(0.0)
    }

    /// Sine coefficient `s'_q`; zero outside `1..=Q`.
    pub fn sin(&self, q: usize) -> f64 {
        if q == 0 {
            return 0.0;
        }
        self.sin.get(q - 1).copied().unwrap_or(0.0)
    }

    pub fn cos_coeffs(&self) -> &[f64] {
        &self.cos
    }

    pub fn sin_coeffs(&self) -> &[f64] {
        &self.sin
    }

    /// `sum_q s_q^2 + s'_q^2`.
    pub fn energy(&self) -> f64 {
        self.cos.iter().chain(&self.sin).map(|v| v * v).sum()
    }

    pub fn spectrum(&self) -> FourierSpectrum {
        FourierSpectrum::from_coefficients(0.0, self.sin.clone(), self.cos.clone())
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(
            self.cos.iter().map(|v| c * v).collect(),
            self.sin.iter().map(|v| c * v).collect(),
        )
    }

    /// Value at `x`, summed from the stored coefficients.
    pub fn eval(&self, x: f64) -> f64 {
        (1..=self.depth())
            .map(|q| {
                let t = std::f64::consts::TAU * q as f64 * x;
                self.cos(q) * t.cos() + self.sin(q) * t.sin()
            })
            .sum()
    }

    /// Projects a closed-form zero-mean function onto its first `depth`
    /// harmonics on a [`GENERATOR_SAMPLES`] grid.
    pub fn from_closed_form<F: Fn(f64) -> f64>(f: F, depth: usize) -> Result<Self> {
        if depth == 0 || depth > GENERATOR_SAMPLES / 2 - 1 {
            return Err(GfdError::Config(format!(
                "basis depth must be in 1..={}, got {depth}",
                GENERATOR_SAMPLES / 2 - 1
            )));
        }
        let spec = analyze_fourier(&sample_closed_form(f, GENERATOR_SAMPLES)?, depth)?;
        let peak = spec
            .cos_coeffs()
            .iter()
            .chain(spec.sin_coeffs())
            .fold(0.0f64, |m, v| m.max(v.abs()));
        let chop = |v: &f64| if v.abs() <= COEFFICIENT_CHOP * peak { 0.0 } else { *v };
        Self::new(
            spec.cos_coeffs().iter().map(chop).collect(),
            spec.sin_coeffs().iter().map(chop).collect(),
        )
    }
}

/// The couple `[S, R]` whose dilations `S(kx), R(kx)` form the analysis family.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisPair {
    pub label: String,
    pub s: BasisFunction,
    pub r: BasisFunction,
}

impl BasisPair {
    pub fn new(label: impl Into<String>, s: BasisFunction, r: BasisFunction) -> Self {
        Self {
            label: label.into(),
            s,
            r,
        }
    }

    pub fn member(&self, which: Member) -> &BasisFunction {
        match which {
            Member::S => &self.s,
            Member::R => &self.r,
        }
    }

    pub fn swapped(&self) -> Self {
        Self::new(format!("{} (swapped)", self.label), self.r.clone(), self.s.clone())
    }

    pub fn depth(&self) -> usize {
        self.s.depth().max(self.r.depth())
    }

    /// `A S(kx) + B R(kx)` as a spectrum, truncated at `band_cap`.
    pub fn dilated_combination(&self, k: usize, a: f64, b: f64, band_cap: usize) -> FourierSpectrum {
        let top = (self.depth() * k).min(band_cap);
        let mut spec = FourierSpectrum::zeros(top);
        for q in 1..=self.depth() {
            let h = q * k;
            if h > band_cap {
                break;
            }
            spec.add(
                h,
                a * self.s.sin(q) + b * self.r.sin(q),
                a * self.s.cos(q) + b * self.r.cos(q),
            );
        }
        spec
    }
}

/// Selects one member of a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Member {
    S,
    R,
}

/// Builtin generator families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    /// `S = cos`, `R = sin`.
    SineCosine,
    /// `S` square wave, `R` sawtooth.
    SquareSaw,
    /// `S` square wave, `R` sinusoid.
    Square,
    /// `S` sawtooth, `R` sinusoid.
    Sawtooth,
    /// `S` triangle, `R` sinusoid.
    Triangle,
    /// `S` trapezoid, `R` sinusoid.
    Trapezoid,
    /// User-supplied coefficients; only constructible from a basis file.
    Custom,
}

impl BasisKind {
    pub const BUILTIN: [BasisKind; 6] = [
        BasisKind::SineCosine,
        BasisKind::SquareSaw,
        BasisKind::Square,
        BasisKind::Sawtooth,
        BasisKind::Triangle,
        BasisKind::Trapezoid,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BasisKind::SineCosine => "sine_cosine",
            BasisKind::SquareSaw => "square_saw",
            BasisKind::Square => "square",
            BasisKind::Sawtooth => "sawtooth",
            BasisKind::Triangle => "triangle",
            BasisKind::Trapezoid => "trapezoid",
            BasisKind::Custom => "custom",
        }
    }

    /// `(phase_S, phase_R)` in turns. `S` defaults to cosine phase and `R` to
    /// sine phase; two odd waveforms would have `s_1 = r_1 = 0` and fail the
    /// independence check.
    pub fn default_phases(self) -> (f64, f64) {
        match self {
            BasisKind::SineCosine | BasisKind::Custom => (0.0, 0.0),
            _ => (0.25, 0.0),
        }
    }

    fn waveforms(self) -> Option<(Waveform, Waveform)> {
        match self {
            BasisKind::SineCosine => Some((Waveform::Sinusoid, Waveform::Sinusoid)),
            BasisKind::SquareSaw => Some((Waveform::Square, Waveform::Sawtooth)),
            BasisKind::Square => Some((Waveform::Square, Waveform::Sinusoid)),
            BasisKind::Sawtooth => Some((Waveform::Sawtooth, Waveform::Sinusoid)),
            BasisKind::Triangle => Some((Waveform::Triangle, Waveform::Sinusoid)),
            BasisKind::Trapezoid => Some((Waveform::Trapezoid, Waveform::Sinusoid)),
            BasisKind::Custom => None,
        }
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BasisKind {
    type Err = GfdError;

    fn from_str(s: &str) -> Result<Self> {
        Self::BUILTIN
            .into_iter()
            .chain([BasisKind::Custom])
            .find(|k| k.name() == s)
            .ok_or_else(|| GfdError::Config(format!("unknown basis kind `{s}`")))
    }
}

/// Exact coefficients of `sin(2 pi (x + phase))`.
fn sinusoid(phase: f64, depth: usize) -> Result<BasisFunction> {
    let t = std::f64::consts::TAU * phase;
    let (sin_p, cos_p) = if phase == 0.0 { (0.0, 1.0) } else { t.sin_cos() };
    let mut cos = vec![0.0; depth];
    let mut sin = vec![0.0; depth];
    cos[0] = sin_p;
    sin[0] = cos_p;
    BasisFunction::new(cos, sin)
}

fn generator(w: Waveform, phase: f64, depth: usize) -> Result<BasisFunction> {
    match w {
        Waveform::Sinusoid => sinusoid(phase, depth),
        _ => BasisFunction::from_closed_form(|x| w.eval(x, phase), depth),
    }
}

/// Builds a builtin pair. Phases are in turns; `S(x) = w_S(x + phase_s)`.
/// For `sine_cosine`, `S` is the sinusoid shifted by a quarter turn on top of
/// `phase_s`, so zero phases give exactly `S = cos`, `R = sin`.
pub fn builtin_basis(kind: BasisKind, phase_s: f64, phase_r: f64, depth: usize) -> Result<BasisPair> {
    if depth == 0 {
        return Err(GfdError::Config("basis depth must be at least 1".into()));
    }
    if !phase_s.is_finite() || !phase_r.is_finite() {
        return Err(GfdError::Config("phases must be finite".into()));
    }
    let (ws, wr) = kind
        .waveforms()
        .ok_or_else(|| GfdError::Config("custom bases are loaded from a basis file, not generated".into()))?;
    let s = match kind {
        BasisKind::SineCosine => cosine(phase_s, depth)?,
        _ => generator(ws, phase_s, depth)?,
    };
    let r = generator(wr, phase_r, depth)?;
    let label = if (phase_s, phase_r) == kind.default_phases() {
        kind.name().to_string()
    } else {
        format!("{}(phase_s={phase_s}, phase_r={phase_r})", kind.name())
    };
    Ok(BasisPair::new(label, s, r))
}

fn cosine(phase: f64, depth: usize) -> Result<BasisFunction> {
    if phase == 0.0 {
        let mut cos = vec![0.0; depth];
        cos[0] = 1.0;
        return BasisFunction::new(cos, vec![0.0; depth]);
    }
    sinusoid(phase + 0.25, depth)
}

/// Default-phase builtin at [`DEFAULT_DEPTH`].
pub fn default_builtin(kind: BasisKind) -> Result<BasisPair> {
    let (ps, pr) = kind.default_phases();
    builtin_basis(kind, ps, pr, DEFAULT_DEPTH)
}

/// Spectrum of `b(kx)`: coefficient `q` lands on harmonic `q k`; anything above
/// `band_cap` is dropped.
pub fn dilate(b: &BasisFunction, k: usize, band_cap: usize) -> FourierSpectrum {
    assert!(k >= 1, "dilation index starts at 1");
    let top = (b.depth() * k).min(band_cap);
    let mut spec = FourierSpectrum::zeros(top);
    for q in 1..=b.depth() {
        let h = q * k;
        if h > band_cap {
            break;
        }
        spec.add(h, b.sin(q), b.cos(q));
    }
    spec
}

pub(crate) fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// `<u(kx), v(mx)>` over one period, restricted to harmonics `<= band_cap`.
/// Only harmonics that are multiples of `lcm(k, m)` are shared.
pub fn dilated_inner(u: &BasisFunction, k: usize, v: &BasisFunction, m: usize, band_cap: usize) -> f64 {
    let step = lcm(k, m);
    let mut sum = 0.0;
    let mut h = step;
    while h <= band_cap {
        let (q, p) = (h / k, h / m);
        if q > u.depth() || p > v.depth() {
            break;
        }
        sum += u.cos(q) * v.cos(p) + u.sin(q) * v.sin(p);
        h += step;
    }
    0.5 * sum
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndependenceReport {
    pub independent: bool,
    /// `|s_1 r'_1|`
    pub direct_product: f64,
    /// `|s'_1 r_1|`
    pub cross_product: f64,
}

impl IndependenceReport {
    pub fn margin(&self) -> f64 {
        (self.direct_product - self.cross_product).abs()
    }
}

/// Decides `|s_1 r'_1| != |s'_1 r_1|` with a relative margin.
pub fn check_independence(pair: &BasisPair, tol: &Tolerances) -> IndependenceReport {
    let direct = (pair.s.cos(1) * pair.r.sin(1)).abs();
    let cross = (pair.s.sin(1) * pair.r.cos(1)).abs();
    let scale = tol.independence_rel * (direct + cross + tol.independence_abs);
    IndependenceReport {
        independent: (direct - cross).abs() > scale,
        direct_product: direct,
        cross_product: cross,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceReport {
    pub converges: bool,
    /// `G_1 - sum_{i>=2} G_i` as `[[a, b], [b, c]]`.
    pub form: [[f64; 2]; 2],
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
}

/// Energy form of harmonic `i` acting on `(A, B)`: `|A (s_i, s'_i) + B (r_i, r'_i)|^2`.
fn harmonic_form(pair: &BasisPair, i: usize) -> [f64; 3] {
    let (s, sp, r, rp) = (pair.s.cos(i), pair.s.sin(i), pair.r.cos(i), pair.r.sin(i));
    [s * s + sp * sp, s * r + sp * rp, r * r + rp * rp]
}

/// The fundamental must carry more energy than all higher harmonics for every
/// combination `A S + B R`, `(A, B) != 0`. Equivalent to the 2x2 form
/// `G_1 - sum_{i>=2} G_i` being positive definite.
pub fn check_convergence(pair: &BasisPair, tol: &Tolerances) -> ConvergenceReport {
    let mut q = harmonic_form(pair, 1);
    for i in 2..=pair.depth() {
        let g = harmonic_form(pair, i);
        for (qv, gv) in q.iter_mut().zip(g) {
            *qv -= gv;
        }
    }
    let (lo, hi) = linalg::sym2_eigenvalues(q[0], q[1], q[2]);
    ConvergenceReport {
        converges: lo > tol.convergence,
        form: [[q[0], q[1]], [q[1], q[2]]],
        min_eigenvalue: lo,
        max_eigenvalue: hi,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orthogonality {
    Orthogonal,
    NonOrthogonal,
}

impl Orthogonality {
    fn from_max(max_abs: f64, tol: f64) -> Self {
        if max_abs <= tol {
            Orthogonality::Orthogonal
        } else {
            Orthogonality::NonOrthogonal
        }
    }
}

impl fmt::Display for Orthogonality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orthogonality::Orthogonal => "orthogonal",
            Orthogonality::NonOrthogonal => "non-orthogonal",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthogonalityReport {
    pub horizontal: Orthogonality,
    pub vertical: Orthogonality,
    /// Largest `|<S(kx), R(kx)>|` seen.
    pub max_horizontal: f64,
    /// Largest cross-dilation inner product magnitude seen.
    pub max_vertical: f64,
}

/// Horizontal: `<S(kx), R(kx)> = 0` for all `k <= k_max`. Vertical: every
/// inner product between members at distinct dilations `k != m <= k_max`
/// vanishes.
pub fn classify_orthogonality(pair: &BasisPair, k_max: usize, tol: &Tolerances) -> OrthogonalityReport {
    let cap = pair.depth() * k_max.max(1);
    let (s, r) = (&pair.s, &pair.r);
    let max_h = (1..=k_max)
        .map(|k| dilated_inner(s, k, r, k, cap).abs())
        .fold(0.0, f64::max);
    let mut max_v: f64 = 0.0;
    for k in 1..=k_max {
        for m in 1..=k_max {
            if k == m {
                continue;
            }
            for v in [
                dilated_inner(s, k, s, m, cap),
                dilated_inner(s, k, r, m, cap),
                dilated_inner(r, k, r, m, cap),
            ] {
                max_v = max_v.max(v.abs());
            }
        }
    }
    OrthogonalityReport {
        horizontal: Orthogonality::from_max(max_h, tol.orthogonality),
        vertical: Orthogonality::from_max(max_v, tol.orthogonality),
        max_horizontal: max_h,
        max_vertical: max_v,
    }
}

/// Row/column order of family matrices: `(S,1)..(S,N), (R,1)..(R,N)`.
pub fn family_index(order: usize, i: usize) -> (Member, usize) {
    if i < order {
        (Member::S, i + 1)
    } else {
        (Member::R, i - order + 1)
    }
}

/// Gram matrix of `{S(kx), R(kx)}_{k <= order}`, un-pruned and un-truncated.
pub fn family_gram(pair: &BasisPair, order: usize) -> Matrix {
    let cap = pair.depth() * order;
    Matrix::from_fn(2 * order, |i, j| {
        let (u, k) = family_index(order, i);
        let (v, m) = family_index(order, j);
        dilated_inner(pair.member(u), k, pair.member(v), m, cap)
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
    pub order: usize,
}

/// Extreme eigenvalues of the order-`N` family Gram matrix. A numerically
/// singular matrix reports `lower = 0`.
pub fn frame_bounds(pair: &BasisPair, order: usize) -> Result<FrameBounds> {
    if order == 0 {
        return Err(GfdError::Config("frame bounds need order >= 1".into()));
    }
    let ev = linalg::symmetric_eigenvalues(&family_gram(pair, order));
    let upper = ev.last().copied().unwrap_or(0.0).max(0.0);
    let mut lower = ev.first().copied().unwrap_or(0.0);
    if lower <= FRAME_SINGULAR_REL * upper {
        lower = 0.0;
    }
    Ok(FrameBounds { lower, upper, order })
}
