//! Floating-point evaluation of the closed-form counts: the Kasteleyn
//! product, the two cosine products for Fibonacci numbers, and the radical
//! expressions for the regular 17-gon.
//!
//! These are checks against the exact integer counts, never a replacement
//! for them.

use std::f64::consts::PI;

use num_bigint::BigUint;
use num_traits::{FromPrimitive, ToPrimitive};

use crate::tiling::count_tilings_exact;

/// Worst-case relative error of a product of `n` correctly rounded factors,
/// each itself a few ulps off.
fn product_error_bound(value: f64, n: usize) -> f64 {
    value.abs() * 4.0 * (n as f64 + 1.0) * f64::EPSILON
}

/// Allowed `|raw - exact| / max(1, exact)` when reconciling with exact counts.
pub const KASTELEYN_RELATIVE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct KasteleynResult {
    pub raw: f64,
    pub rounded: BigUint,
    pub residual: f64,
}

impl KasteleynResult {
    pub fn relative_residual(&self) -> f64 {
        self.residual / self.rounded.to_f64().unwrap_or(f64::INFINITY).max(1.0)
    }
}

fn four_cos_sq(num: u32, den: u32) -> f64 {
    if 2 * num == den {
        return 0.0;
    }
    let c = (num as f64 * PI / den as f64).cos();
    4.0 * c * c
}

/// Product of `4cos^2(m pi/p) + 4cos^2(k pi/q)` over `1 <= m <= p/2`,
/// `1 <= k <= q/2`, factors taken in index order.
///
/// The `m = p/2` (or `k = q/2`) factor for even sides contributes
/// `4cos^2(pi/2) = 0` to its sum, so the product vanishes when both sides
/// are even and is unchanged otherwise.
pub fn kasteleyn_count(p: u32, q: u32) -> KasteleynResult {
    let factors: Vec<f64> = (1..=p / 2)
        .flat_map(|m| (1..=q / 2).map(move |k| four_cos_sq(m, p) + four_cos_sq(k, q)))
        .collect();
    let direct: f64 = factors.iter().product();
    if direct.is_finite() && product_error_bound(direct, factors.len()) < 0.25 {
        let rounded_f = direct.round();
        return KasteleynResult {
            raw: direct,
            rounded: BigUint::from_f64(rounded_f).unwrap_or_default(),
            residual: (direct - rounded_f).abs(),
        };
    }
    // Too large to round reliably: accumulate logarithms and take the
    // integer from the exact dynamic program.
    let raw = factors.iter().map(|f| f.ln()).sum::<f64>().exp();
    let exact = count_tilings_exact(p, q);
    let residual = (raw - exact.to_f64().unwrap_or(f64::INFINITY)).abs();
    KasteleynResult {
        raw,
        rounded: exact,
        residual,
    }
}

/// Whether the product equals 1 for a `2 x p` grid (meant for odd `p`).
pub fn kasteleyn_min2_check(p: u32) -> bool {
    kasteleyn_count(2, p).rounded == BigUint::from(1u32)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// `Even`: prod_{k=1}^{n-1} (1 + 4cos^2(k pi/2n)), which rounds to `F_{2n}`.
/// `Odd`: prod_{k=1}^{n} (1 + 4cos^2(k pi/(2n+1))), which rounds to `F_{2n+1}`.
pub fn fibonacci_product(n: u32, parity: Parity) -> (f64, BigUint) {
    let raw: f64 = match parity {
        Parity::Even => (1..n).map(|k| 1.0 + four_cos_sq(k, 2 * n)).product(),
        Parity::Odd => (1..=n).map(|k| 1.0 + four_cos_sq(k, 2 * n + 1)).product(),
    };
    (raw, BigUint::from_f64(raw.round()).unwrap_or_default())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeventeenGonValues {
    /// `sqrt(34 - 2 sqrt 17)`
    pub v: f64,
    /// `sqrt(17 + 3 sqrt 17 - sqrt(170 + 38 sqrt 17))`
    pub w: f64,
    /// `x_k = 1 + 4cos^2(k pi/17)` for `k = 1..=8`.
    pub x: [f64; 8],
}

/// Absolute deviations of each identity from its reference value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeventeenGonResiduals {
    pub gauss_radical: f64,
    pub cos_squared: f64,
    pub x1_closed_form: f64,
    pub product: f64,
}

pub fn seventeen_gon_values() -> SeventeenGonValues {
    let r17 = 17f64.sqrt();
    let v = (34.0 - 2.0 * r17).sqrt();
    let w = (17.0 + 3.0 * r17 - (170.0 + 38.0 * r17).sqrt()).sqrt();
    let x = std::array::from_fn(|i| 1.0 + four_cos_sq(i as u32 + 1, 17));
    SeventeenGonValues { v, w, x }
}

impl SeventeenGonValues {
    /// `16cos(2 pi/17)` expressed in nested square roots.
    pub fn gauss_radical(&self) -> f64 {
        17f64.sqrt() - 1.0 + self.v + 2.0 * self.w
    }

    /// `64 + (2 - v)v + 4w`, which equals `64cos^2(pi/17)`.
    pub fn cos_squared_radical(&self) -> f64 {
        64.0 + (2.0 - self.v) * self.v + 4.0 * self.w
    }

    /// `5 + (2 - v)v/16 + w/4`, which equals `x_1`.
    pub fn x1_closed_form(&self) -> f64 {
        5.0 + (2.0 - self.v) * self.v / 16.0 + self.w / 4.0
    }

    pub fn product(&self) -> f64 {
        self.x.iter().product()
    }

    pub fn residuals(&self) -> SeventeenGonResiduals {
        let c1 = (PI / 17.0).cos();
        SeventeenGonResiduals {
            gauss_radical: (self.gauss_radical() - 16.0 * (2.0 * PI / 17.0).cos()).abs(),
            cos_squared: (self.cos_squared_radical() - 64.0 * c1 * c1).abs(),
            x1_closed_form: (self.x1_closed_form() - self.x[0]).abs(),
            product: (self.product() - 1597.0).abs(),
        }
    }
}
