//! Generalized spectra and band filtering over decompositions.

use crate::decompose::Decomposition;
use crate::error::{GfdError, Result};
use crate::signal::FourierSpectrum;

/// `C0^2 + 1/2 sum_k (a_k^2 + b_k^2)`.
pub fn parseval_power(spec: &FourierSpectrum) -> f64 {
    spec.c0 * spec.c0 + 0.5 * spec.terms().map(|(_, a, b)| a * a + b * b).sum::<f64>()
}

/// Per-frequency energies `int_0^1 [A_k S(kt) + B_k R(kt)]^2 dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedSpectrum {
    /// `energies[k - 1]` belongs to frequency `k`.
    pub energies: Vec<f64>,
    pub c0_sq: f64,
}

impl GeneralizedSpectrum {
    pub fn entries(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.energies.iter().enumerate().map(|(i, &e)| (i + 1, e))
    }

    /// `c0^2 + sum_k energy_k`, the right side of the triangle bound.
    pub fn total(&self) -> f64 {
        self.c0_sq + self.energies.iter().sum::<f64>()
    }
}

/// Energies computed in coefficient space, each dilated component truncated
/// at `band_cap`.
pub fn generalized_spectrum(d: &Decomposition, band_cap: usize) -> GeneralizedSpectrum {
    let energies = d
        .terms()
        .map(|(k, a, b)| {
            let p = d.basis.pair_for(k);
            let sum: f64 = (1..=p.depth())
                .take_while(|q| q * k <= band_cap)
                .map(|q| {
                    let c = a * p.s.cos(q) + b * p.r.cos(q);
                    let s = a * p.s.sin(q) + b * p.r.sin(q);
                    c * c + s * s
                })
                .sum();
            0.5 * sum
        })
        .collect();
    GeneralizedSpectrum {
        energies,
        c0_sq: d.c0 * d.c0,
    }
}

/// Keeps frequencies `keep_from..=keep_to` and zeroes everything else,
/// including `c0`. Energies are not renormalized.
pub fn band_filter(d: &Decomposition, keep_from: usize, keep_to: usize) -> Result<Decomposition> {
    if keep_from < 1 || keep_from > keep_to || keep_to > d.order() {
        return Err(GfdError::Config(format!(
            "band [{keep_from}, {keep_to}] is empty or outside 1..={}",
            d.order()
        )));
    }
    let coeffs = d
        .terms()
        .map(|(k, a, b)| {
            if (keep_from..=keep_to).contains(&k) {
                (a, b)
            } else {
                (0.0, 0.0)
            }
        })
        .collect();
    d.with_coefficients(0.0, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{default_builtin, BasisFunction, BasisKind, BasisPair};
    use crate::decompose::{analyze_indirect, reconstruct, BasisSource, Method};
    use crate::signal::{analyze_fourier, synthesize_fourier};
    use crate::tolerance::Tolerances;

    fn source(kind: BasisKind) -> BasisSource {
        BasisSource::Pair(default_builtin(kind).unwrap())
    }

    fn random_decomposition(seed: u64, order: usize, kind: BasisKind) -> Decomposition {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let coeffs = (0..order)
            .map(|_| (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        Decomposition::new(rng.random_range(-1.0..1.0), coeffs, source(kind), Method::Indirect).unwrap()
    }

    #[test]
    fn parseval_examples() {
        assert_eq!(
            parseval_power(&FourierSpectrum::from_coefficients(0.0, vec![1.0], vec![])),
            0.5
        );
        assert_eq!(
            parseval_power(&FourierSpectrum::from_coefficients(1.0, vec![], vec![])),
            1.0
        );
    }

    #[test]
    fn generalized_spectrum_examples() {
        let d = random_decomposition(1, 6, BasisKind::SineCosine);
        let g = generalized_spectrum(&d, 1000);
        for ((k, e), (_, a, b)) in g.entries().zip(d.terms()) {
            assert!((e - 0.5 * (a * a + b * b)).abs() < 1e-15, "k={k}");
        }

        let s = BasisFunction::new(vec![1.0, 0.3], vec![]).unwrap();
        let r = BasisFunction::new(vec![], vec![1.0]).unwrap();
        let p = BasisPair::new("cos+", s, r);
        let d = Decomposition::new(0.0, vec![(1.0, 0.0)], BasisSource::Pair(p), Method::Indirect).unwrap();
        assert!((generalized_spectrum(&d, 64).energies[0] - 0.545).abs() < 1e-15);

        let zero = Decomposition::new(0.0, vec![(0.0, 0.0); 5], source(BasisKind::Square), Method::Indirect).unwrap();
        let g = generalized_spectrum(&zero, 64);
        assert!(g.energies.iter().all(|&e| e == 0.0));
        assert_eq!(g.total(), 0.0);
    }

    #[test]
    fn orthogonal_equality() {
        let f = synthesize_fourier(
            &FourierSpectrum::from_coefficients(0.3, vec![0.5, -1.0, 0.2], vec![1.0, 0.0, 0.7]),
            32,
        )
        .unwrap();
        let d = analyze_indirect(
            &f,
            &default_builtin(BasisKind::SineCosine).unwrap(),
            3,
            &Tolerances::default(),
        )
        .unwrap();
        let g = generalized_spectrum(&d, 15);
        let p = parseval_power(&analyze_fourier(&f, 15).unwrap());
        assert!((g.total() - p).abs() < 1e-10);
    }

    #[test]
    fn band_filter_examples() {
        let mut d = random_decomposition(2, 40, BasisKind::SquareSaw);
        d.c0 = 0.0;
        assert_eq!(band_filter(&d, 1, 40).unwrap(), d);

        let d = random_decomposition(3, 40, BasisKind::SquareSaw);
        let f = band_filter(&d, 4, 40).unwrap();
        assert_eq!(f.c0, 0.0);
        for k in 1..=3 {
            assert_eq!((f.a(k), f.b(k)), (0.0, 0.0));
        }
        for k in 4..=40 {
            assert_eq!((f.a(k), f.b(k)), (d.a(k), d.b(k)));
        }

        for bad in [(0, 3), (5, 4), (1, 41)] {
            assert!(matches!(band_filter(&d, bad.0, bad.1), Err(GfdError::Config(_))));
        }
    }

    #[test]
    fn single_component_filter_reconstructs_that_component() {
        let d = random_decomposition(4, 12, BasisKind::Triangle);
        let k = 5;
        let f = band_filter(&d, k, k).unwrap();
        let pair = d.basis.pair_for(k);
        // wide enough that S(5x) is not truncated
        let n = 2 * (pair.depth() * k + 4);
        let got = reconstruct(&f, n).unwrap();
        for (j, v) in got.samples().iter().enumerate() {
            let x = k as f64 * j as f64 / n as f64;
            let expect = d.a(k) * pair.s.eval(x) + d.b(k) * pair.r.eval(x);
            assert!((v - expect).abs() < 1e-12, "j={j}");
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn filter_is_idempotent(seed in any::<u64>(), from in 1usize..20, len in 0usize..20) {
                let d = random_decomposition(seed, 40, BasisKind::Square);
                let to = (from + len).min(40);
                let once = band_filter(&d, from, to).unwrap();
                prop_assert_eq!(band_filter(&once, from, to).unwrap(), once);
            }
        }
    }
}
