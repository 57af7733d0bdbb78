//! Analysis over a basis pair: the direct method solves the (pruned) Gram
//! system of the order-`N` dilated family in one shot; the indirect method
//! annihilates the residual's Fourier harmonics one frequency at a time,
//! correcting each step for the basis noise injected by earlier ones.

use std::fmt;
use std::str::FromStr;

use crate::basis::{self, check_independence, BasisPair, Member};
use crate::error::{GfdError, Result};
use crate::linalg::{self, Lu, Matrix};
use crate::schedule::BasisSchedule;
use crate::signal::{analyze_fourier, check_sample_count, norm, synthesize_fourier, FourierSpectrum, PeriodicSignal};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Direct,
    Indirect,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Indirect => "indirect",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = GfdError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Method::Direct),
            "indirect" => Ok(Method::Indirect),
            _ => Err(GfdError::Config(format!("unknown method `{s}`"))),
        }
    }
}

/// Which cross-frequency Gram entries the direct method keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pruning {
    /// Keep `(k, m)` iff `k m <= N` or the smaller index divides the larger.
    Paper,
    /// Keep `(k, m)` iff `lcm(k, m) <= N`, the first harmonic the two
    /// dilations share.
    Lcm,
    /// Keep everything.
    None,
}

impl Pruning {
    pub fn name(self) -> &'static str {
        match self {
            Pruning::Paper => "paper",
            Pruning::Lcm => "lcm",
            Pruning::None => "none",
        }
    }

    pub fn keeps(self, k: usize, m: usize, order: usize) -> bool {
        if k == m {
            return true;
        }
        match self {
            Pruning::Paper => {
                let (lo, hi) = (k.min(m), k.max(m));
                k * m <= order || hi % lo == 0
            }
            Pruning::Lcm => basis::lcm(k, m) <= order,
            Pruning::None => true,
        }
    }
}

impl fmt::Display for Pruning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Pruning {
    type Err = GfdError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Pruning::Paper),
            "lcm" => Ok(Pruning::Lcm),
            "none" => Ok(Pruning::None),
            _ => Err(GfdError::Config(format!("unknown pruning rule `{s}`"))),
        }
    }
}

/// The basis a decomposition was computed over.
#[derive(Debug, Clone, PartialEq)]
pub enum BasisSource {
    Pair(BasisPair),
    Schedule(BasisSchedule),
}

impl BasisSource {
    pub fn pair_for(&self, k: usize) -> &BasisPair {
        match self {
            BasisSource::Pair(p) => p,
            BasisSource::Schedule(s) => s.pair_for(k),
        }
    }
}

/// `f ~ c0 + sum_{k=1..N} A_k S(kx) + B_k R(kx)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub c0: f64,
    coeffs: Vec<(f64, f64)>,
    pub basis: BasisSource,
    pub method: Method,
    /// Set for direct decompositions.
    pub pruning: Option<Pruning>,
    /// One-norm condition number of the direct system.
    pub condition_estimate: Option<f64>,
}

impl Decomposition {
    /// `coeffs[k - 1] = (A_k, B_k)`.
    pub fn new(c0: f64, coeffs: Vec<(f64, f64)>, basis: BasisSource, method: Method) -> Result<Self> {
        if !c0.is_finite() || coeffs.iter().any(|(a, b)| !a.is_finite() || !b.is_finite()) {
            return Err(GfdError::Analysis("decomposition has non-finite coefficients".into()));
        }
        Ok(Self {
            c0,
            coeffs,
            basis,
            method,
            pruning: None,
            condition_estimate: None,
        })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// `A_k`; zero outside `1..=N`.
    pub fn a(&self, k: usize) -> f64 {
        k.checked_sub(1).and_then(|i| self.coeffs.get(i)).map_or(0.0, |c| c.0)
    }

    /// `B_k`; zero outside `1..=N`.
    pub fn b(&self, k: usize) -> f64 {
        k.checked_sub(1).and_then(|i| self.coeffs.get(i)).map_or(0.0, |c| c.1)
    }

    pub fn coefficients(&self) -> &[(f64, f64)] {
        &self.coeffs
    }

    /// `(k, A_k, B_k)` for `k = 1..=N`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        self.coeffs.iter().enumerate().map(|(i, &(a, b))| (i + 1, a, b))
    }

    pub fn with_coefficients(&self, c0: f64, coeffs: Vec<(f64, f64)>) -> Result<Self> {
        let mut d = Self::new(c0, coeffs, self.basis.clone(), self.method)?;
        d.pruning = self.pruning;
        d.condition_estimate = self.condition_estimate;
        Ok(d)
    }

    pub fn is_ill_conditioned(&self, tol: &Tolerances) -> bool {
        self.condition_estimate.is_some_and(|c| c > tol.condition_warn)
    }

    /// Largest `|A_k - A'_k|`, `|B_k - B'_k|` over `k <= up_to`.
    pub fn max_coefficient_gap(&self, other: &Decomposition, up_to: usize) -> f64 {
        (1..=up_to)
            .map(|k| (self.a(k) - other.a(k)).abs().max((self.b(k) - other.b(k)).abs()))
            .fold(0.0, f64::max)
    }
}

/// Spectrum of the reconstruction, every dilated member truncated at `band_cap`.
pub fn reconstruct_spectrum(d: &Decomposition, band_cap: usize) -> FourierSpectrum {
    let mut spec = FourierSpectrum::zeros(band_cap);
    spec.c0 = d.c0;
    for (k, a, b) in d.terms() {
        if k > band_cap {
            break;
        }
        let part = d.basis.pair_for(k).dilated_combination(k, a, b, band_cap);
        for (h, sa, sb) in part.terms() {
            spec.add(h, sa, sb);
        }
    }
    spec
}

/// Samples of `c0 + sum_k A_k S(kx) + B_k R(kx)` on `n` points.
pub fn reconstruct(d: &Decomposition, n: usize) -> Result<PeriodicSignal> {
    check_sample_count(n)?;
    synthesize_fourier(&reconstruct_spectrum(d, n / 2 - 1), n)
}

/// `f - reconstruct(d)`.
pub fn residual(f: &PeriodicSignal, d: &Decomposition) -> Result<PeriodicSignal> {
    if d.order() > f.max_harmonic() {
        return Err(GfdError::Dimension(format!(
            "decomposition of order {} exceeds the band of a {}-sample signal",
            d.order(),
            f.len()
        )));
    }
    f.sub(&reconstruct(d, f.len())?)
}

/// Norm of the residual, the RMS reconstruction error.
pub fn rms_error(f: &PeriodicSignal, d: &Decomposition) -> Result<f64> {
    Ok(norm(&residual(f, d)?))
}

fn check_order(f: &PeriodicSignal, order: usize) -> Result<()> {
    if order == 0 {
        return Err(GfdError::Config("order must be at least 1".into()));
    }
    if order > f.max_harmonic() {
        return Err(GfdError::Aliasing {
            harmonic: order,
            samples: f.len(),
            max: f.max_harmonic(),
        });
    }
    Ok(())
}

fn require_independent(pair: &BasisPair, tol: &Tolerances, context: &str) -> Result<()> {
    let rep = check_independence(pair, tol);
    if !rep.independent {
        return Err(GfdError::Analysis(format!(
            "dependent basis `{}`{context}: |s1 r1'| = {:e}, |s1' r1| = {:e}",
            pair.label, rep.direct_product, rep.cross_product
        )));
    }
    Ok(())
}

/// Solves the first-harmonic 2x2 system of `pair` for target cosine/sine
/// content at harmonic `n`.
fn solve_fundamental(pair: &BasisPair, n: usize, cos_rhs: f64, sin_rhs: f64, tol: &Tolerances) -> Result<(f64, f64)> {
    let (s1, s1p, r1, r1p) = (pair.s.cos(1), pair.s.sin(1), pair.r.cos(1), pair.r.sin(1));
    let det = s1 * r1p - r1 * s1p;
    let threshold = tol.independence_rel * ((s1 * r1p).abs() + (s1p * r1).abs() + tol.independence_abs);
    if det.abs() <= threshold {
        return Err(GfdError::IllConditionedBasis {
            harmonic: n,
            determinant: det,
            tolerance: threshold,
        });
    }
    Ok((
        (cos_rhs * r1p - r1 * sin_rhs) / det,
        (s1 * sin_rhs - s1p * cos_rhs) / det,
    ))
}

/// Frequency-by-frequency deflation. At harmonic `n` the Fourier content of
/// `f` is corrected by the noise every divisor `k | n, k < n` already put
/// there through coefficient `n / k` of the pair that analyzed `k`.
fn deflate(f: &PeriodicSignal, source: &BasisSource, order: usize, tol: &Tolerances) -> Result<Vec<(f64, f64)>> {
    let spec = analyze_fourier(f, order)?;
    let mut coeffs: Vec<(f64, f64)> = Vec::with_capacity(order);
    for n in 1..=order {
        let (mut cos_rhs, mut sin_rhs) = (spec.b(n), spec.a(n));
        for k in (1..n).filter(|k| n % k == 0) {
            let (ak, bk) = coeffs[k - 1];
            let p = source.pair_for(k);
            let q = n / k;
            cos_rhs -= ak * p.s.cos(q) + bk * p.r.cos(q);
            sin_rhs -= ak * p.s.sin(q) + bk * p.r.sin(q);
        }
        coeffs.push(solve_fundamental(source.pair_for(n), n, cos_rhs, sin_rhs, tol)?);
    }
    Ok(coeffs)
}

/// Indirect analysis: the residual's Fourier coefficients vanish at every
/// harmonic `<= order`, and `A_k, B_k` do not depend on `order`.
pub fn analyze_indirect(f: &PeriodicSignal, pair: &BasisPair, order: usize, tol: &Tolerances) -> Result<Decomposition> {
    check_order(f, order)?;
    require_independent(pair, tol, "")?;
    let source = BasisSource::Pair(pair.clone());
    let coeffs = deflate(f, &source, order, tol)?;
    Decomposition::new(f.mean(), coeffs, source, Method::Indirect)
}

/// Indirect analysis switching basis pairs by harmonic range.
pub fn analyze_multiband(
    f: &PeriodicSignal,
    schedule: &BasisSchedule,
    order: usize,
    tol: &Tolerances,
) -> Result<Decomposition> {
    check_order(f, order)?;
    for (i, seg) in schedule.segments().iter().enumerate() {
        require_independent(
            &seg.pair,
            tol,
            &format!(" in schedule segment {i} (start_k = {})", seg.start_k),
        )?;
    }
    let source = BasisSource::Schedule(schedule.clone());
    let coeffs = deflate(f, &source, order, tol).map_err(|e| match e {
        GfdError::IllConditionedBasis { harmonic, .. } => {
            GfdError::Analysis(format!("{e} (schedule segment {})", schedule.segment_index(harmonic)))
        }
        e => e,
    })?;
    Decomposition::new(f.mean(), coeffs, source, Method::Indirect)
}

/// The order-`N` normal-equation system, rows and columns ordered
/// `(S,1)..(S,N), (R,1)..(R,N)`.
#[derive(Debug, Clone)]
pub struct GramSystem {
    pub matrix: Matrix,
    pub rhs: Vec<f64>,
    /// `pruned[i * 2N + j]` marks entries zeroed by the pruning rule.
    pub pruned: Vec<bool>,
    pub order: usize,
    pub pruning: Pruning,
}

impl GramSystem {
    pub fn is_pruned(&self, i: usize, j: usize) -> bool {
        self.pruned[i * 2 * self.order + j]
    }
}

/// Entries are inner products of dilated members computed in coefficient
/// space with band cap `max(Q N, n/2 - 1)`; the right side is `<f, U(kx)>`.
pub fn build_gram_system(
    f: &PeriodicSignal,
    pair: &BasisPair,
    order: usize,
    pruning: Pruning,
    tol: &Tolerances,
) -> Result<GramSystem> {
    check_order(f, order)?;
    require_independent(pair, tol, "")?;
    let dim = 2 * order;
    let cap = (pair.depth() * order).max(f.max_harmonic());
    let mut pruned = vec![false; dim * dim];
    let matrix = Matrix::from_fn(dim, |i, j| {
        let (u, k) = basis::family_index(order, i);
        let (v, m) = basis::family_index(order, j);
        if pruning.keeps(k, m, order) {
            basis::dilated_inner(pair.member(u), k, pair.member(v), m, cap)
        } else {
            pruned[i * dim + j] = true;
            0.0
        }
    });
    // harmonics above Q N never meet a member
    let top = (pair.depth() * order).min(f.max_harmonic());
    let spec = analyze_fourier(f, top)?;
    let rhs = (0..dim)
        .map(|i| {
            let (u, k) = basis::family_index(order, i);
            let member = pair.member(u);
            0.5 * (1..=member.depth())
                .take_while(|q| q * k <= top)
                .map(|q| member.cos(q) * spec.b(q * k) + member.sin(q) * spec.a(q * k))
                .sum::<f64>()
        })
        .collect();
    Ok(GramSystem {
        matrix,
        rhs,
        pruned,
        order,
        pruning,
    })
}

/// Direct analysis: one dense solve of the (pruned) Gram system.
/// Coefficients depend on `order`.
pub fn analyze_direct(
    f: &PeriodicSignal,
    pair: &BasisPair,
    order: usize,
    pruning: Pruning,
    tol: &Tolerances,
) -> Result<Decomposition> {
    let sys = build_gram_system(f, pair, order, pruning, tol)?;
    let lu = Lu::factor(&sys.matrix).map_err(|e| match e {
        GfdError::Singular(col) => GfdError::Analysis(format!(
            "direct system is singular (column {col}, basis `{}`, order {order})",
            pair.label
        )),
        e => e,
    })?;
    let cond = linalg::condition_one_norm(&sys.matrix, &lu);
    if cond > tol.condition_warn {
        log::warn!(
            "direct system for `{}` at order {order} is ill-conditioned (cond1 = {cond:e})",
            pair.label
        );
    }
    let x = lu.solve(&sys.rhs);
    let coeffs = (0..order).map(|k| (x[k], x[order + k])).collect();
    let mut d = Decomposition::new(f.mean(), coeffs, BasisSource::Pair(pair.clone()), Method::Direct)?;
    d.pruning = Some(pruning);
    d.condition_estimate = Some(cond);
    Ok(d)
}

/// Convenience dispatcher over both methods.
pub fn analyze(
    f: &PeriodicSignal,
    pair: &BasisPair,
    order: usize,
    method: Method,
    pruning: Pruning,
    tol: &Tolerances,
) -> Result<Decomposition> {
    match method {
        Method::Direct => analyze_direct(f, pair, order, pruning, tol),
        Method::Indirect => analyze_indirect(f, pair, order, tol),
    }
}

/// Row index of `(member, k)` in an order-`N` system.
pub fn system_index(order: usize, member: Member, k: usize) -> usize {
    match member {
        Member::S => k - 1,
        Member::R => order + k - 1,
    }
}
