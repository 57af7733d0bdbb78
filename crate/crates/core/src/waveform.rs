//! Closed-form periodic generators on `[0, 1)`.
//!
//! Every waveform is defined in sine phase (odd about `x = 0`, rising through
//! zero there) with unit peak amplitude. A phase offset in turns shifts the
//! argument: `w(x + phase)`. Jump discontinuities take the midpoint value 0.

use std::f64::consts::TAU;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Waveform {
    Sinusoid,
    Square,
    Sawtooth,
    Triangle,
    Trapezoid,
}

impl Waveform {
    pub fn eval(self, x: f64, phase: f64) -> f64 {
        let t = (x + phase).rem_euclid(1.0);
        match self {
            Waveform::Sinusoid => (TAU * t).sin(),
            Waveform::Square => square(t),
            Waveform::Sawtooth => sawtooth(t),
            Waveform::Triangle => triangle(t),
            Waveform::Trapezoid => (2.0 * triangle(t)).clamp(-1.0, 1.0),
        }
    }
}

fn square(t: f64) -> f64 {
    if t == 0.0 || t == 0.5 {
        0.0
    } else if t < 0.5 {
        1.0
    } else {
        -1.0
    }
}

fn sawtooth(t: f64) -> f64 {
    if t == 0.5 {
        0.0
    } else if t < 0.5 {
        2.0 * t
    } else {
        2.0 * t - 2.0
    }
}

fn triangle(t: f64) -> f64 {
    if t <= 0.25 {
        4.0 * t
    } else if t <= 0.75 {
        2.0 - 4.0 * t
    } else {
        4.0 * t - 4.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jump_points_take_midpoint() {
        assert_eq!(Waveform::Square.eval(0.0, 0.0), 0.0);
        assert_eq!(Waveform::Square.eval(0.5, 0.0), 0.0);
        assert_eq!(Waveform::Square.eval(0.25, 0.0), 1.0);
        assert_eq!(Waveform::Sawtooth.eval(0.5, 0.0), 0.0);
        assert_eq!(Waveform::Sawtooth.eval(0.25, 0.0), 0.5);
        assert_eq!(Waveform::Sawtooth.eval(0.75, 0.0), -0.5);
    }

    #[test]
    fn phase_shifts_argument() {
        // cosine-phase square is +1 around x = 0
        assert_eq!(Waveform::Square.eval(0.0, 0.25), 1.0);
        assert_eq!(Waveform::Square.eval(0.5, 0.25), -1.0);
        assert!((Waveform::Sinusoid.eval(0.1, 0.25) - (TAU * 0.1).cos()).abs() < 1e-15);
        assert_eq!(Waveform::Triangle.eval(0.0, 0.25), 1.0);
        assert_eq!(Waveform::Trapezoid.eval(0.1, 0.0), 0.8);
        assert_eq!(Waveform::Trapezoid.eval(0.2, 0.0), 1.0);
    }

    #[test]
    fn odd_symmetry_in_sine_phase() {
        for w in [
            Waveform::Sinusoid,
            Waveform::Square,
            Waveform::Sawtooth,
            Waveform::Triangle,
            Waveform::Trapezoid,
        ] {
            for j in 1..64 {
                let x = j as f64 / 64.0;
                assert!((w.eval(x, 0.0) + w.eval(1.0 - x, 0.0)).abs() < 1e-12, "{w:?} {x}");
            }
        }
    }
}
