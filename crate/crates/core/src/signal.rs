//! Sampled periodic signals over one period `[0, 1)` and exact discrete
//! Fourier analysis/synthesis on the uniform grid.
//!
//! All inner products are uniform-grid means. For trigonometric polynomials
//! whose highest harmonic stays below `n / 2` the rectangle rule is exact, so
//! every other module can reduce its work to coefficient arithmetic and use
//! this layer as the reference.

use std::f64::consts::TAU;

use crate::error::{GfdError, Result};

/// Uniformly sampled real signal, `samples[j]` taken at `x_j = j / n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicSignal {
    samples: Vec<f64>,
}

impl PeriodicSignal {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        check_sample_count(samples.len())?;
        if let Some(j) = samples.iter().position(|v| !v.is_finite()) {
            return Err(GfdError::InvalidSignal(format!(
                "sample {j} is not finite ({})",
                samples[j]
            )));
        }
        Ok(Self { samples })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(vec![0.0; n])
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Highest harmonic that can be analyzed without aliasing, `n / 2 - 1`.
    pub fn max_harmonic(&self) -> usize {
        self.samples.len() / 2 - 1
    }

    /// Abscissa of sample `j`.
    pub fn x(&self, j: usize) -> f64 {
        j as f64 / self.samples.len() as f64
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    /// Pointwise linear combination `alpha * self + beta * other`.
    pub fn combine(&self, alpha: f64, other: &PeriodicSignal, beta: f64) -> Result<Self> {
        check_same_len(self, other)?;
        Self::new(
            self.samples
                .iter()
                .zip(&other.samples)
                .map(|(f, g)| alpha * f + beta * g)
                .collect(),
        )
    }

    pub fn sub(&self, other: &PeriodicSignal) -> Result<Self> {
        self.combine(1.0, other, -1.0)
    }

    pub fn max_abs_diff(&self, other: &PeriodicSignal) -> Result<f64> {
        check_same_len(self, other)?;
        Ok(self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(f, g)| (f - g).abs())
            .fold(0.0, f64::max))
    }
}

pub(crate) fn check_sample_count(n: usize) -> Result<()> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(GfdError::InvalidSignal(format!(
            "sample count must be even and at least 4, got {n}"
        )));
    }
    Ok(())
}

fn check_same_len(f: &PeriodicSignal, g: &PeriodicSignal) -> Result<()> {
    if f.len() != g.len() {
        return Err(GfdError::Dimension(format!(
            "signals have {} and {} samples",
            f.len(),
            g.len()
        )));
    }
    Ok(())
}

/// DC term plus per-harmonic sine (`a_k`) and cosine (`b_k`) coefficients for
/// harmonics `k = 1..=K`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSpectrum {
    pub c0: f64,
    sin: Vec<f64>,
    cos: Vec<f64>,
}

impl FourierSpectrum {
    pub fn zeros(max_harmonic: usize) -> Self {
        Self {
            c0: 0.0,
            sin: vec![0.0; max_harmonic],
            cos: vec![0.0; max_harmonic],
        }
    }

    /// Builds a spectrum from sine and cosine coefficient vectors, index 0
    /// holding harmonic 1. The shorter vector is zero-padded.
    pub fn from_coefficients(c0: f64, mut sin: Vec<f64>, mut cos: Vec<f64>) -> Self {
        let k = sin.len().max(cos.len());
        sin.resize(k, 0.0);
        cos.resize(k, 0.0);
        Self { c0, sin, cos }
    }

    pub fn max_harmonic(&self) -> usize {
        self.sin.len()
    }

    /// Sine coefficient of harmonic `k`; zero for `k = 0` or beyond the stored band.
    pub fn a(&self, k: usize) -> f64 {
        if k == 0 {
            return 0.0;
        }
        self.sin.get(k - 1).copied().unwrap_or(0.0)
    }

    /// Cosine coefficient of harmonic `k`; `c0` is kept separately.
    pub fn b(&self, k: usize) -> f64 {
        if k == 0 {
            return 0.0;
        }
        self.cos.get(k - 1).copied().unwrap_or(0.0)
    }

    pub fn sin_coeffs(&self) -> &[f64] {
        &self.sin
    }

    pub fn cos_coeffs(&self) -> &[f64] {
        &self.cos
    }

    /// Adds `a` and `b` to harmonic `k`, growing the band if needed.
    pub fn add(&mut self, k: usize, a: f64, b: f64) {
        assert!(k >= 1, "harmonic index starts at 1");
        if k > self.sin.len() {
            self.sin.resize(k, 0.0);
            self.cos.resize(k, 0.0);
        }
        self.sin[k - 1] += a;
        self.cos[k - 1] += b;
    }

    /// `(k, a_k, b_k)` for `k = 1..=K`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        self.sin
            .iter()
            .zip(&self.cos)
            .enumerate()
            .map(|(i, (&a, &b))| (i + 1, a, b))
    }

    /// Exact inner product of the two trigonometric polynomials over one period.
    pub fn inner(&self, other: &FourierSpectrum) -> f64 {
        let shared: f64 = self
            .terms()
            .zip(other.terms())
            .map(|((_, a1, b1), (_, a2, b2))| a1 * a2 + b1 * b2)
            .sum();
        self.c0 * other.c0 + 0.5 * shared
    }

    /// Keeps harmonics up to `k`, dropping everything above.
    pub fn truncated(&self, k: usize) -> Self {
        let k = k.min(self.max_harmonic());
        Self {
            c0: self.c0,
            sin: self.sin[..k].to_vec(),
            cos: self.cos[..k].to_vec(),
        }
    }
}

/// Lookup table of `sin(2 pi m / n)` and `cos(2 pi m / n)` for `m = 0..n`.
/// Products `k * j` are reduced mod `n`, so every grid evaluation of a
/// harmonic reads the same rounded value.
struct TrigTable {
    sin: Vec<f64>,
    cos: Vec<f64>,
}

impl TrigTable {
    fn new(n: usize) -> Self {
        let (sin, cos) = (0..n)
            .map(|m| {
                let t = TAU * m as f64 / n as f64;
                (t.sin(), t.cos())
            })
            .unzip();
        Self { sin, cos }
    }
}

/// Samples `evaluator` at `x_j = j / n`.
pub fn sample_closed_form<F>(evaluator: F, n: usize) -> Result<PeriodicSignal>
where
    F: Fn(f64) -> f64,
{
    check_sample_count(n)?;
    let samples = (0..n).map(|j| evaluator(j as f64 / n as f64)).collect();
    PeriodicSignal::new(samples)
}

/// Uniform-grid mean of the pointwise product.
pub fn inner_product(f: &PeriodicSignal, g: &PeriodicSignal) -> Result<f64> {
    check_same_len(f, g)?;
    let sum: f64 = f.samples.iter().zip(&g.samples).map(|(a, b)| a * b).sum();
    Ok(sum / f.len() as f64)
}

pub fn norm(f: &PeriodicSignal) -> f64 {
    inner_product(f, f).expect("a signal always matches itself").sqrt()
}

/// Fourier coefficients of `f` for harmonics `1..=max_harmonic`.
pub fn analyze_fourier(f: &PeriodicSignal, max_harmonic: usize) -> Result<FourierSpectrum> {
    let n = f.len();
    if max_harmonic > f.max_harmonic() {
        return Err(GfdError::Aliasing {
            harmonic: max_harmonic,
            samples: n,
            max: f.max_harmonic(),
        });
    }
    let table = TrigTable::new(n);
    let scale = 2.0 / n as f64;
    let mut sin = Vec::with_capacity(max_harmonic);
    let mut cos = Vec::with_capacity(max_harmonic);
    for k in 1..=max_harmonic {
        let (mut sa, mut sb) = (0.0, 0.0);
        for (j, &v) in f.samples.iter().enumerate() {
            let m = (k * j) % n;
            sa += v * table.sin[m];
            sb += v * table.cos[m];
        }
        sin.push(scale * sa);
        cos.push(scale * sb);
    }
    Ok(FourierSpectrum { c0: f.mean(), sin, cos })
}

/// Samples the trigonometric polynomial described by `spec` on `n` points.
pub fn synthesize_fourier(spec: &FourierSpectrum, n: usize) -> Result<PeriodicSignal> {
    check_sample_count(n)?;
    // Highest harmonic actually carrying energy decides aliasing, not the
    // stored length.
    let top = spec
        .terms()
        .filter(|&(_, a, b)| a != 0.0 || b != 0.0)
        .map(|(k, _, _)| k)
        .last()
        .unwrap_or(0);
    if top > n / 2 - 1 {
        return Err(GfdError::Aliasing {
            harmonic: top,
            samples: n,
            max: n / 2 - 1,
        });
    }
    let table = TrigTable::new(n);
    let samples = (0..n)
        .map(|j| {
            let mut v = spec.c0;
            for (k, a, b) in spec.terms().take(top) {
                let m = (k * j) % n;
                v += a * table.sin[m] + b * table.cos[m];
            }
            v
        })
        .collect();
    PeriodicSignal::new(samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sine(k: f64) -> impl Fn(f64) -> f64 {
        move |x| (TAU * k * x).sin()
    }

    fn square(x: f64) -> f64 {
        let s = (TAU * x).sin();
        // exact zero at the jump points x = 0, 0.5
        if (x * 2.0).fract() == 0.0 {
            0.0
        } else {
            s.signum()
        }
    }

    /// Composite Simpson rule on a fine grid, independent of the
    /// rectangle-rule path under test.
    fn simpson<F: Fn(f64) -> f64>(f: F, intervals: usize) -> f64 {
        let h = 1.0 / intervals as f64;
        let mut s = f(0.0) + f(1.0);
        for i in 1..intervals {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn sampling_examples() {
        let zero = sample_closed_form(|_| 0.0, 8).unwrap();
        assert!(zero.samples().iter().all(|&v| v == 0.0));

        let s = sample_closed_form(sine(1.0), 8).unwrap();
        let h = 0.5f64.sqrt();
        let expect = [0.0, h, 1.0, h, 0.0, -h, -1.0, -h];
        for (v, e) in s.samples().iter().zip(expect) {
            assert!((v - e).abs() < 1e-15);
        }

        let sq = sample_closed_form(square, 16).unwrap();
        assert_eq!(sq.samples()[0], 0.0);
        assert_eq!(sq.samples()[8], 0.0);
        assert!(sq.samples()[1..8].iter().all(|&v| v == 1.0));
        assert!(sq.samples()[9..].iter().all(|&v| v == -1.0));
    }

    #[test]
    fn sampling_rejects_bad_input() {
        assert!(matches!(
            sample_closed_form(|_| f64::NAN, 8),
            Err(GfdError::InvalidSignal(_))
        ));
        assert!(sample_closed_form(|_| 0.0, 7).is_err());
        assert!(sample_closed_form(|_| 0.0, 2).is_err());
    }

    #[test]
    fn inner_product_examples() {
        let s = sample_closed_form(sine(1.0), 64).unwrap();
        let c = sample_closed_form(|x| (TAU * x).cos(), 64).unwrap();
        assert!(inner_product(&s, &c).unwrap().abs() < 1e-15);
        assert!((inner_product(&s, &s).unwrap() - 0.5).abs() < 1e-15);

        let n = 4096;
        let sq = sample_closed_form(square, n).unwrap();
        let s = sample_closed_form(sine(1.0), n).unwrap();
        let oracle = simpson(|x| square(x) * (TAU * x).sin(), 1 << 16);
        assert!((oracle - 2.0 / PI).abs() < 1e-6);
        assert!((inner_product(&sq, &s).unwrap() - oracle).abs() < 1e-5);

        let short = PeriodicSignal::zeros(8).unwrap();
        assert!(matches!(inner_product(&s, &short), Err(GfdError::Dimension(_))));
    }

    #[test]
    fn norm_examples() {
        assert_eq!(norm(&PeriodicSignal::zeros(8).unwrap()), 0.0);
        let s = sample_closed_form(sine(1.0), 32).unwrap();
        assert!((norm(&s) - 0.5f64.sqrt()).abs() < 1e-15);
        let sq = sample_closed_form(square, 4096).unwrap();
        assert!((norm(&sq) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn fourier_examples() {
        let s = sample_closed_form(sine(1.0), 32).unwrap();
        let spec = analyze_fourier(&s, 4).unwrap();
        assert!((spec.a(1) - 1.0).abs() < 1e-15);
        assert!(spec.c0.abs() < 1e-15);
        for k in 2..=4 {
            assert!(spec.a(k).abs() < 1e-15 && spec.b(k).abs() < 1e-15);
        }
        assert!(spec.b(1).abs() < 1e-15);

        let one = sample_closed_form(|_| 1.0, 32).unwrap();
        let spec = analyze_fourier(&one, 4).unwrap();
        assert_eq!(spec.c0, 1.0);
        assert!(spec.terms().all(|(_, a, b)| a.abs() < 1e-15 && b.abs() < 1e-15));

        let sq = sample_closed_form(square, 4096).unwrap();
        let spec = analyze_fourier(&sq, 9).unwrap();
        for k in 1..=9 {
            let oracle = 2.0 * simpson(|x| square(x) * (TAU * k as f64 * x).sin(), 1 << 16);
            let classical = if k % 2 == 1 { 4.0 / (PI * k as f64) } else { 0.0 };
            assert!((oracle - classical).abs() < 1e-5, "k={k}");
            assert!((spec.a(k) - classical).abs() < 1e-3, "k={k}");
            assert!(spec.b(k).abs() < 1e-3);
        }
    }

    #[test]
    fn aliasing_is_rejected() {
        let s = PeriodicSignal::zeros(16).unwrap();
        assert!(analyze_fourier(&s, 7).is_ok());
        assert!(matches!(
            analyze_fourier(&s, 8),
            Err(GfdError::Aliasing { harmonic: 8, .. })
        ));
        let mut spec = FourierSpectrum::zeros(0);
        spec.add(8, 1.0, 0.0);
        assert!(synthesize_fourier(&spec, 16).is_err());
        assert!(synthesize_fourier(&spec, 18).is_ok());
    }

    #[test]
    fn synthesis_examples() {
        let spec = FourierSpectrum::from_coefficients(1.0, vec![], vec![]);
        let s = synthesize_fourier(&spec, 8).unwrap();
        assert!(s.samples().iter().all(|&v| v == 1.0));

        let spec = FourierSpectrum::from_coefficients(0.0, vec![1.0], vec![]);
        let s = synthesize_fourier(&spec, 8).unwrap();
        let direct = sample_closed_form(sine(1.0), 8).unwrap();
        assert!(s.max_abs_diff(&direct).unwrap() < 1e-15);
    }

    #[test]
    fn band_limited_round_trip() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let spec = FourierSpectrum::from_coefficients(
            rng.random_range(-1.0..1.0),
            (0..32).map(|_| rng.random_range(-1.0..1.0)).collect(),
            (0..32).map(|_| rng.random_range(-1.0..1.0)).collect(),
        );
        // sample directly from the closed form, not through synthesis
        let f = sample_closed_form(
            |x| {
                spec.c0
                    + spec
                        .terms()
                        .map(|(k, a, b)| {
                            let t = TAU * k as f64 * x;
                            a * t.sin() + b * t.cos()
                        })
                        .sum::<f64>()
            },
            128,
        )
        .unwrap();
        let back = synthesize_fourier(&analyze_fourier(&f, 32).unwrap(), 128).unwrap();
        assert!(back.max_abs_diff(&f).unwrap() < 1e-10);
    }

    #[test]
    fn discrete_harmonic_orthogonality() {
        let n = 32;
        for k in 1..n / 2 {
            let sk = sample_closed_form(sine(k as f64), n).unwrap();
            for m in 1..n / 2 {
                let sm = sample_closed_form(sine(m as f64), n).unwrap();
                let ip = inner_product(&sk, &sm).unwrap();
                let expect = if k == m { 0.5 } else { 0.0 };
                assert!((ip - expect).abs() < 1e-14, "k={k} m={m}");
            }
        }
    }

    #[test]
    fn spectrum_inner_matches_sampled() {
        let f = FourierSpectrum::from_coefficients(0.3, vec![1.0, 0.0, -0.5], vec![0.2, 0.7]);
        let g = FourierSpectrum::from_coefficients(-1.0, vec![0.4], vec![0.1, 0.0, 2.0, 1.0]);
        let fs = synthesize_fourier(&f, 16).unwrap();
        let gs = synthesize_fourier(&g, 16).unwrap();
        assert!((f.inner(&g) - inner_product(&fs, &gs).unwrap()).abs() < 1e-14);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn signal(n: usize) -> impl Strategy<Value = PeriodicSignal> {
            prop::collection::vec(-10.0f64..10.0, n).prop_map(|v| PeriodicSignal::new(v).unwrap())
        }

        proptest! {
            #[test]
            fn bilinear(f in signal(16), g in signal(16), h in signal(16),
                        alpha in -5.0f64..5.0, beta in -5.0f64..5.0) {
                let lhs = inner_product(&f.combine(alpha, &g, beta).unwrap(), &h).unwrap();
                let rhs = alpha * inner_product(&f, &h).unwrap() + beta * inner_product(&g, &h).unwrap();
                prop_assert!((lhs - rhs).abs() < 1e-10 * (1.0 + lhs.abs()));
            }

            #[test]
            fn norm_squared_is_self_inner(f in signal(24)) {
                let ip = inner_product(&f, &f).unwrap();
                prop_assert!((norm(&f).powi(2) - ip).abs() <= 4.0 * f64::EPSILON * ip);
            }

            #[test]
            fn spectrum_round_trip(
                c0 in -2.0f64..2.0,
                a in prop::collection::vec(-2.0f64..2.0, 1..12),
                b in prop::collection::vec(-2.0f64..2.0, 1..12),
                extra in 0usize..20,
            ) {
                let spec = FourierSpectrum::from_coefficients(c0, a, b);
                let k = spec.max_harmonic();
                let n = 2 * k + 2 + 2 * extra;
                let back = analyze_fourier(&synthesize_fourier(&spec, n).unwrap(), k).unwrap();
                prop_assert!((back.c0 - spec.c0).abs() < 1e-10);
                for ((_, a1, b1), (_, a2, b2)) in back.terms().zip(spec.terms()) {
                    prop_assert!((a1 - a2).abs() < 1e-10 && (b1 - b2).abs() < 1e-10);
                }
            }
        }
    }
}
