//! Pole hyperplanes of the continued series.
//!
//! For the shifted zeta and Dirichlet L-functions the suffix sum `s_d(j)`
//! is singular at
//!
//! ```text
//! −2K + K ln|Q|/ln α + (2n/q + ℓ) πi/ln α,
//! ```
//!
//! and for additive characters at
//!
//! ```text
//! −2K + log g_j/ln α + K ln|Q|/ln α + (2n + ℓ) πi/ln α,
//! ```
//!
//! with `K = k_j + ⋯ + k_d`, `n ∈ ℤ`, `ℓ = K` when `Q < 0` and `0` otherwise,
//! and `log` the principal branch (other branches are absorbed into `n`).
//! Since `|Q| < α²` the real part is strictly decreasing in `K`, so two
//! different `(K, n)` never name the same hyperplane.

use rug::float::Constant;
use rug::{Complex, Float};
use serde::Serialize;

use crate::additive::AdditiveTuple;
use crate::error::{Error, Result};
use crate::lucas::LucasParams;
use crate::rational::binomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PoleVariant {
    ShiftedZeta,
    Dirichlet,
    Additive,
}

/// One singular hyperplane `s_j + ⋯ + s_d = location`.
#[derive(Clone, Debug, PartialEq)]
pub struct PoleHyperplane {
    pub variant: PoleVariant,
    pub j: usize,
    /// `K = k_j + ⋯ + k_d`; the location depends on the multi-index only
    /// through this sum.
    pub k_sum: usize,
    /// Number of multi-indices `(k_j, …, k_d)` with that sum.
    pub multi_index_count: u64,
    pub n: i64,
    pub ell: u64,
    pub location: Complex,
}

/// A rectangle in the complex plane, bounds inclusive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Window {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Self {
        Window {
            re_min,
            re_max,
            im_min,
            im_max,
        }
    }

    /// The real segment `[re_min, re_max]`.
    pub fn real_segment(re_min: f64, re_max: f64) -> Self {
        Self::new(re_min, re_max, 0.0, 0.0)
    }

    pub fn contains(&self, z: &Complex) -> bool {
        let re = z.real().to_f64();
        let im = z.imag().to_f64();
        let slack = 1e-12;
        re >= self.re_min - slack
            && re <= self.re_max + slack
            && im >= self.im_min - slack
            && im <= self.im_max + slack
    }
}

/// Enumeration limits: `K ≤ k_max`, `|n| ≤ n_max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PoleBounds {
    pub k_max: usize,
    pub n_max: i64,
}

fn ell(params: &LucasParams, k_sum: usize) -> u64 {
    params.ell(k_sum as u64)
}

fn count_multi_indices(k_sum: usize, parts: usize) -> u64 {
    binomial((k_sum + parts - 1) as u32, (parts - 1) as u32)
        .to_u64()
        .unwrap_or(u64::MAX)
}

/// Location of the shifted-zeta hyperplane for `(K, n)`.
pub fn pole_location_zeta(
    params: &LucasParams,
    q: u64,
    k_sum: usize,
    n: i64,
    prec: u32,
) -> Complex {
    let wp = prec + 32;
    let ln_a = params.log_alpha(wp);
    let k = k_sum as i64;
    let re = Float::with_val(wp, params.log_abs_q(wp) * k) / &ln_a - 2 * k;
    // (2n/q + ℓ)π = (2n + qℓ)π/q
    let numer = 2 * n + (q * ell(params, k_sum)) as i64;
    let im = Float::with_val(wp, Constant::Pi) * numer / q / &ln_a;
    Complex::with_val(prec, (re, im))
}

/// Location of the additive hyperplane for `(K, n)` with `log_g` the
/// principal logarithm of `g_j`.
pub fn pole_location_additive(
    params: &LucasParams,
    log_g: &Complex,
    k_sum: usize,
    n: i64,
    prec: u32,
) -> Complex {
    let wp = prec + 32;
    let ln_a = params.log_alpha(wp);
    let base = pole_location_zeta(params, 1, k_sum, 0, wp);
    let ell_term = Float::with_val(wp, Constant::Pi) * (2 * n) / &ln_a;
    let mut z = Complex::with_val(wp, log_g / &ln_a) + base;
    *z.mut_imag() += ell_term;
    Complex::with_val(prec, z)
}

/// Hyperplanes of `s_d(j)` for the shifted zeta/Dirichlet family, depth `d`.
pub fn enumerate_poles_zeta(
    params: &LucasParams,
    q: u64,
    d: usize,
    j: usize,
    bounds: PoleBounds,
    window: Window,
    prec: u32,
) -> Result<Vec<PoleHyperplane>> {
    check_index(d, j)?;
    if q == 0 {
        return Err(Error::InvalidArgument("modulus must be positive".into()));
    }
    let variant = if q == 1 {
        PoleVariant::ShiftedZeta
    } else {
        PoleVariant::Dirichlet
    };
    let mut found = Vec::new();
    for k in 0..=bounds.k_max {
        for n in -bounds.n_max..=bounds.n_max {
            let location = pole_location_zeta(params, q, k, n, prec);
            if window.contains(&location) {
                found.push(PoleHyperplane {
                    variant,
                    j,
                    k_sum: k,
                    multi_index_count: count_multi_indices(k, d - j + 1),
                    n,
                    ell: ell(params, k),
                    location,
                });
            }
        }
    }
    found.sort_by_key(|h| (h.k_sum, h.n));
    Ok(found)
}

/// Hyperplanes of `s_d(j)` for the additive family `ℒ(s | f)`.
pub fn enumerate_poles_additive(
    params: &LucasParams,
    f: &AdditiveTuple,
    j: usize,
    bounds: PoleBounds,
    window: Window,
    prec: u32,
) -> Result<Vec<PoleHyperplane>> {
    let d = f.depth();
    check_index(d, j)?;
    let g = f.partial_product(j).to_complex(prec + 64);
    if g.is_zero() {
        return Err(Error::ZeroCharacterValue);
    }
    let log_g = Complex::with_val(prec + 32, g.ln_ref());
    let mut found = Vec::new();
    for k in 0..=bounds.k_max {
        for n in -bounds.n_max..=bounds.n_max {
            let location = pole_location_additive(params, &log_g, k, n, prec);
            if window.contains(&location) {
                found.push(PoleHyperplane {
                    variant: PoleVariant::Additive,
                    j,
                    k_sum: k,
                    multi_index_count: count_multi_indices(k, d - j + 1),
                    n,
                    ell: ell(params, k),
                    location,
                });
            }
        }
    }
    found.sort_by_key(|h| (h.k_sum, h.n));
    Ok(found)
}

fn check_index(d: usize, j: usize) -> Result<()> {
    if d == 0 || j == 0 || j > d {
        return Err(Error::InvalidArgument(format!(
            "suffix index {j} outside 1..={d}"
        )));
    }
    Ok(())
}

/// `(K, n)` pairs whose shifted-zeta hyperplane lies on the real axis:
/// `2n/q + ℓ = 0`, i.e. `n = −qℓ/2` when that is an integer.
pub fn real_axis_candidates(
    params: &LucasParams,
    q: u64,
    re_min: f64,
    re_max: f64,
    prec: u32,
) -> Vec<(usize, i64, f64)> {
    let mut out = Vec::new();
    let mut k = 0usize;
    loop {
        let l = ell(params, k);
        let real = pole_location_zeta(params, q, k, 0, prec).real().to_f64();
        if real < re_min - 1e-12 {
            break;
        }
        if (q * l).is_multiple_of(2) && real <= re_max + 1e-12 {
            out.push((k, -((q * l / 2) as i64), real));
        }
        k += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_real_poles() {
        let p = LucasParams::from_integers(1, -1).unwrap();
        let poles = enumerate_poles_zeta(
            &p,
            2,
            1,
            1,
            PoleBounds { k_max: 6, n_max: 6 },
            Window::real_segment(-5.0, 1.0),
            128,
        )
        .unwrap();
        let reals: Vec<f64> = poles.iter().map(|h| h.location.real().to_f64()).collect();
        assert_eq!(reals.len(), 3);
        for (x, want) in reals.iter().zip([0.0, -2.0, -4.0]) {
            assert!((x - want).abs() < 1e-30);
        }
        assert!(poles.iter().all(|h| h.n == -(h.k_sum as i64)));
    }

    #[test]
    fn q_one_imaginary_ladder() {
        let p = LucasParams::from_integers(3, 1).unwrap();
        let ln_a = p.log_alpha(128);
        let poles = enumerate_poles_zeta(
            &p,
            2,
            1,
            1,
            PoleBounds { k_max: 0, n_max: 2 },
            Window::new(-1.0, 1.0, -100.0, 100.0),
            128,
        )
        .unwrap();
        assert_eq!(poles.len(), 5);
        for h in &poles {
            let want = Float::with_val(128, Constant::Pi) * h.n / &ln_a;
            assert!((Float::with_val(128, h.location.imag() - want)).abs() < 1e-35);
            assert_eq!(h.location.real().to_f64(), 0.0);
        }
    }

    #[test]
    fn additive_locations() {
        let p = LucasParams::from_integers(3, 1).unwrap();
        let f = AdditiveTuple::from_rationals(&[rug::Rational::from((1, 2))]).unwrap();
        let poles = enumerate_poles_additive(
            &p,
            &f,
            1,
            PoleBounds { k_max: 0, n_max: 0 },
            Window::new(-10.0, 10.0, -1.0, 1.0),
            128,
        )
        .unwrap();
        let want = -(2f64.ln()) / p.log_alpha(64).to_f64();
        assert!((poles[0].location.real().to_f64() - want).abs() < 1e-14);

        let fib = LucasParams::from_integers(1, -1).unwrap();
        let minus = AdditiveTuple::from_rationals(&[rug::Rational::from(-1)]).unwrap();
        let h = &enumerate_poles_additive(
            &fib,
            &minus,
            1,
            PoleBounds { k_max: 0, n_max: 0 },
            Window::new(-1.0, 1.0, -20.0, 20.0),
            128,
        )
        .unwrap()[0];
        let im = std::f64::consts::PI / fib.log_alpha(64).to_f64();
        assert!((h.location.imag().to_f64() - im).abs() < 1e-12);
    }

    #[test]
    fn candidates_on_real_axis() {
        let fib = LucasParams::from_integers(1, -1).unwrap();
        // q = 3: qK must be even, so only even K
        let c = real_axis_candidates(&fib, 3, -6.0, 1.0, 128);
        assert_eq!(c.iter().map(|t| t.0).collect::<Vec<_>>(), vec![0, 2]);
        let c4 = real_axis_candidates(&fib, 4, -6.0, 1.0, 128);
        assert_eq!(
            c4.iter().map(|t| (t.0, t.1)).collect::<Vec<_>>(),
            vec![(0, 0), (1, -2), (2, -4), (3, -6)]
        );
    }
}
