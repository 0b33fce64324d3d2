//! Adaptive Gauss–Kronrod (7, 15) quadrature.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: usize = 50;

/// Integral estimate with its error bound.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

fn gk15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Integrates `f` over [a, b] to absolute tolerance `tol` by recursive bisection.
pub fn integrate(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<Quadrature> {
    let mut evaluations = 0;
    let mut counted = |x: f64| {
        evaluations += 1;
        f(x)
    };
    let (value, error) = recurse(&mut counted, a, b, tol, 0)?;
    Ok(Quadrature {
        value,
        error,
        evaluations,
    })
}

fn recurse(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64, depth: usize) -> Result<(f64, f64)> {
    let (value, err) = gk15(f, a, b);
    if !value.is_finite() {
        return Err(Error::numeric(format!("non-finite integrand on [{a}, {b}]")));
    }
    if err <= tol {
        return Ok((value, err));
    }
    if depth >= MAX_DEPTH {
        return Err(Error::Numeric {
            message: "adaptive quadrature did not converge".into(),
            trace: vec![format!("interval [{a}, {b}] error {err:e} > tol {tol:e} at depth {depth}")],
        });
    }
    let mid = 0.5 * (a + b);
    let (l, le) = recurse(f, a, mid, tol * 0.5, depth + 1)?;
    let (r, re) = recurse(f, mid, b, tol * 0.5, depth + 1)?;
    Ok((l + r, le + re))
}
