//! Polynomials, rational functions, Morse phases, amplitudes and periods.

mod forms;
mod phase;
mod poly;
mod rational;

pub use forms::{amplitude_build, omega_correction, period_functional, HolomorphicOneForm};
pub use phase::{
    argument_principle_count, build_phase, morse_check, CriticalInfo, HolomorphicPhase, MorseReport, PhaseStyle,
    MORSE_MARGIN,
};
pub use poly::Poly;
pub use rational::{meromorphic_with_divisor, Divisor, RationalFunction};

/// `z` as a complex number from a mesh point.
pub fn cz(p: [f64; 2]) -> num_complex::Complex64 {
    num_complex::Complex64::new(p[0], p[1])
}
