//! Gamma-family special functions in double precision.
//!
//! `log_gamma` uses a Lanczos sum below 10 and the Stirling series above;
//! `digamma` shifts its argument up by recurrence before applying the
//! asymptotic expansion. `log_binomial` avoids the catastrophic cancellation
//! of `lnΓ(a+1) − lnΓ(b+1) − lnΓ(a−b+1)` for large `a`.

use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("log_gamma requires x > 0, got {x}")));
    }
    Ok(ln_gamma(x))
}

pub(crate) fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Γ(x) = Γ(x+1)/x keeps the Lanczos sum in its accurate range
        return ln_gamma(x + 1.0) - x.ln();
    }
    if x >= 10.0 {
        return (x - 0.5) * x.ln() - x + HALF_LN_2PI + stirling_tail(x);
    }
    let z = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    HALF_LN_2PI + (z + 0.5) * t.ln() - t + acc.ln()
}

/// Stirling correction `lnΓ(x) − [(x−½)ln x − x + ½ln 2π]`, valid for x ≥ 10.
fn stirling_tail(x: f64) -> f64 {
    // B_{2j} / (2j (2j-1)) for j = 1..8
    const C: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
        -3617.0 / 122_400.0,
    ];
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut acc = 0.0;
    for c in C.iter().rev() {
        acc = acc * inv2 + c;
    }
    acc * inv
}

/// Digamma function ψ(x) for `x > 0`.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("digamma requires x > 0, got {x}")));
    }
    Ok(psi(x))
}

pub(crate) fn psi(mut x: f64) -> f64 {
    let mut shift = 0.0;
    while x < 10.0 {
        shift -= 1.0 / x;
        x += 1.0;
    }
    // B_{2j} / (2j) for j = 1..7
    const C: [f64; 7] =
        [1.0 / 12.0, -1.0 / 120.0, 1.0 / 252.0, -1.0 / 240.0, 1.0 / 132.0, -691.0 / 32_760.0, 1.0 / 12.0];
    let inv2 = 1.0 / (x * x);
    let mut acc = 0.0;
    for c in C.iter().rev() {
        acc = acc * inv2 + c;
    }
    shift + x.ln() - 0.5 / x - acc * inv2
}

/// `ln C(a, b)`. Symmetric in `b ↔ a − b` bit-for-bit.
pub fn log_binomial(a: u64, b: u64) -> Result<f64> {
    if b > a {
        return Err(Error::domain(format!("log_binomial requires b <= a, got ({a}, {b})")));
    }
    Ok(ln_choose(a, b))
}

pub(crate) fn ln_choose(a: u64, b: u64) -> f64 {
    let small = b.min(a - b);
    if small == 0 {
        return 0.0;
    }
    if small <= 64 {
        // Σ ln((a − s + i)/i), every term positive
        let base = (a - small) as f64;
        return (1..=small)
            .map(|i| {
                let i = i as f64;
                (base / i).ln_1p()
            })
            .sum();
    }
    let (a, b, c) = (a as f64, small as f64, (a - small) as f64);
    // a ln a − b ln b − c ln c = b ln(a/b) + c ln(a/c)
    let entropy = -b * (-c / a).ln_1p() - c * (-b / a).ln_1p();
    entropy - 0.5 * (2.0 * std::f64::consts::PI * b * c / a).ln() + stirling_tail(a + 1.0)
        - stirling_tail(b + 1.0)
        - stirling_tail(c + 1.0)
        + stirling_shift(a)
        - stirling_shift(b)
        - stirling_shift(c)
}

/// `lnΓ(x+1) − [x ln x − x + ½ ln(2πx)] − stirling_tail(x+1)`.
///
/// `stirling_tail` is expressed around `x+1`; this accounts for the shift
/// from `(x+½) ln(x+1) − (x+1)` back to `x ln x − x + ½ ln x`.
fn stirling_shift(x: f64) -> f64 {
    let r = 1.0 / x;
    // (x + ½) ln(1 + 1/x) − 1
    (x + 0.5) * r.ln_1p() - 1.0
}

/// Harmonic number H_d = Σ_{ℓ=1}^{d} 1/ℓ, summed smallest-first.
pub fn harmonic(d: u64) -> f64 {
    (1..=d).rev().map(|l| 1.0 / l as f64).sum()
}

#[cfg(test)]
#[allow(clippy::excessive_precision)] // reference digits kept as printed
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn log_gamma_trivial_points() {
        assert!(log_gamma(1.0).unwrap().abs() < 1e-14);
        assert!(log_gamma(2.0).unwrap().abs() < 1e-14);
        assert!((log_gamma(4.0).unwrap() - 6f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn log_gamma_matches_high_precision_values() {
        // mpmath, 40 digits
        let cases = [
            (0.5, 0.572_364_942_924_700_087_071_713_675_676_5),
            (0.75, 0.203_280_951_431_295_371_481_432_971_862_4),
            (1.5, -0.120_782_237_635_245_222_345_518_445_781_6),
            (3.7, 1.428_072_326_665_387_921_872_381_125_047_5),
            (10.25, 13.368_023_671_476_046_295_430_913_042_66),
            (123.456, 469.605_547_129_929_468_730_069_192_330_9),
            (2.5e5, 2_857_298.753_541_863_987_132_703_420_440_5),
            (1e6, 12_815_504.569_147_611_659_976_971_785_017),
        ];
        for (x, want) in cases {
            let got = log_gamma(x).unwrap();
            assert!(rel(got, want) <= 1e-12, "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn log_gamma_rejects_nonpositive() {
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.5).is_err());
        assert!(log_gamma(f64::NAN).is_err());
    }

    #[test]
    fn digamma_values() {
        assert!((digamma(1.0).unwrap() + EULER_GAMMA).abs() < 1e-14);
        let h4 = 1.0 + 0.5 + 1.0 / 3.0 + 0.25;
        assert!((digamma(5.0).unwrap() - (h4 - EULER_GAMMA)).abs() < 1e-14);
        let cases = [
            (2.5, 0.703_156_640_645_243_187_225_690_333_667_9),
            (0.5, -1.963_510_026_021_423_479_440_976_332_998_7),
            (0.1, -10.423_754_940_411_076_795_168_216_219_01),
            (7.3, 1.917_820_335_637_986_098_367_634_395_239_7),
            (40.5, 3.688_905_492_933_233_584_385_291_997_686_7),
            (1e-3, -1_000.575_571_931_810_300_471_472_614_469_6),
        ];
        for (x, want) in cases {
            let got = digamma(x).unwrap();
            assert!(rel(got, want) <= 1e-13, "x={x}: {got} vs {want}");
        }
        assert!(digamma(0.0).is_err());
    }

    #[test]
    fn digamma_recurrence_on_integers() {
        for d in 2..2000u64 {
            let lhs = psi(d as f64) - psi((d - 1) as f64);
            assert!((lhs - 1.0 / (d - 1) as f64).abs() < 1e-12, "d={d}");
        }
    }

    #[test]
    fn log_binomial_small_and_symmetric() {
        assert!((log_binomial(4, 2).unwrap() - 6f64.ln()).abs() < 1e-15);
        assert_eq!(log_binomial(17, 0).unwrap(), 0.0);
        assert_eq!(log_binomial(17, 17).unwrap(), 0.0);
        assert!(log_binomial(3, 4).is_err());
        for a in 0..300u64 {
            for b in 0..=a {
                assert_eq!(log_binomial(a, b).unwrap().to_bits(), log_binomial(a, a - b).unwrap().to_bits());
            }
        }
    }

    #[test]
    fn log_binomial_large_arguments() {
        // mpmath of exact integer binomials
        let cases = [
            (1_000_000, 10, 123.050_648_006_424_725_070_849_944_677_6),
            (10_000_000, 1, 16.118_095_650_958_319_788_125_940_182_79),
            (10_000_000, 5000, 42_998.084_787_591_916_746_977_536_663_91),
            (200, 100, 135.753_236_081_278_493_207_546_629_948_8),
            (1000, 300, 607.271_496_264_374_764_907_752_913_963_8),
        ];
        for (a, b, want) in cases {
            let got = log_binomial(a, b).unwrap();
            assert!(rel(got, want) <= 1e-10, "({a},{b}): {got} vs {want}");
        }
    }

    #[test]
    fn harmonic_numbers() {
        assert_eq!(harmonic(0), 0.0);
        assert!((harmonic(4) - 25.0 / 12.0).abs() < 1e-15);
    }
}
