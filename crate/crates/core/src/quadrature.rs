//! Quadrature rules and compensated summation.

use crate::error::{Error, Result};
use crate::scalar::{c, cu, Real};

/// Neumaier compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct Compensated<T> {
    sum: T,
    comp: T,
}

impl<T: Real> Compensated<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            comp: T::zero(),
        }
    }

    pub fn add(&mut self, v: T) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp = self.comp + ((self.sum - t) + v);
        } else {
            self.comp = self.comp + ((v - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum + self.comp
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on `P_n`.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let nf = cu::<T>(n);
    let m = (n + 1) / 2;
    for i in 0..m {
        // Tricomi initial guess.
        let mut x = (T::PI() * (cu::<T>(i) + c(0.75)) / (nf + c(0.5))).cos();
        let mut dp = T::one();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x = x - dx;
            if dx.abs() <= T::epsilon() * c(2.0) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != T::zero() {
            dp = d;
        }
        let w = c::<T>(2.0) / ((T::one() - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = T::zero();
    }
    (nodes, weights)
}

fn legendre_with_derivative<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for k in 2..=n {
        let kf = cu::<T>(k);
        let p2 = ((c::<T>(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = cu::<T>(n);
    let d = nf * (x * p1 - p0) / (x * x - T::one());
    (p1, d)
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Seven-point Gauss weights at XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One Gauss-Kronrod 7/15 panel: `(kronrod estimate, error estimate)`.
///
/// The error estimate is the QUADPACK rescaling of `|kronrod - gauss|`.
pub fn gk15<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> (T, T) {
    let half = c::<T>(0.5);
    let center = half * (a + b);
    let radius = half * (b - a);
    let mut fv = [T::zero(); 15];
    fv[7] = f(center);
    for j in 0..7 {
        let dx = radius * c(XGK[j]);
        fv[j] = f(center - dx);
        fv[14 - j] = f(center + dx);
    }
    let mut kronrod = fv[7] * c(WGK[7]);
    let mut gauss = fv[7] * c(WG[3]);
    for j in 0..7 {
        let s = fv[j] + fv[14 - j];
        kronrod = kronrod + s * c(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + s * c(WG[j / 2]);
        }
    }
    let mean = kronrod * half;
    let mut resasc = (fv[7] - mean).abs() * c(WGK[7]);
    for j in 0..7 {
        resasc = resasc + ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs()) * c(WGK[j]);
    }
    let r = radius.abs();
    let resasc = resasc * r;
    let mut err = ((kronrod - gauss) * radius).abs();
    if resasc != T::zero() && err != T::zero() {
        let scaled = (c::<T>(200.0) * err / resasc).powf(c(1.5));
        err = resasc * scaled.min(T::one());
    }
    (kronrod * radius, err)
}

/// Adaptive Gauss-Kronrod integration of `f` over the consecutive intervals
/// defined by `breaks` (sorted, at least two entries).
///
/// Subdivides the panel with the largest error estimate until the total
/// estimate is below `max(abs_tol, rel_tol * |I|)`.
pub fn integrate_adaptive<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    breaks: &[T],
    abs_tol: T,
    rel_tol: T,
    max_panels: usize,
) -> Result<T> {
    let mut panels: Vec<(T, T, T, T)> = Vec::with_capacity(64);
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            let (v, e) = gk15(&mut f, w[0], w[1]);
            panels.push((w[0], w[1], v, e));
        }
    }
    loop {
        let mut total = Compensated::new();
        let mut err = T::zero();
        let mut worst = 0;
        let mut worst_err = -T::one();
        for (i, p) in panels.iter().enumerate() {
            total.add(p.2);
            err = err + p.3;
            if p.3 > worst_err {
                worst_err = p.3;
                worst = i;
            }
        }
        let value = total.value();
        if !value.is_finite() {
            return Err(Error::Quadrature);
        }
        if err <= abs_tol.max(rel_tol * value.abs()) {
            return Ok(value);
        }
        if panels.len() >= max_panels {
            // Accept roundoff-limited estimates: error no longer resolvable.
            if err <= c::<T>(1e3) * T::epsilon() * value.abs().max(abs_tol) {
                return Ok(value);
            }
            return Err(Error::Quadrature);
        }
        let (a, b, _, _) = panels[worst];
        let m = c::<T>(0.5) * (a + b);
        if !(m > a && m < b) {
            return Ok(value);
        }
        let (v1, e1) = gk15(&mut f, a, m);
        let (v2, e2) = gk15(&mut f, m, b);
        panels[worst] = (a, m, v1, e1);
        panels.push((m, b, v2, e2));
    }
}

/// Composite Simpson rule with `intervals` (made even) subintervals.
pub fn simpson<T: Real, F: FnMut(T) -> T>(mut f: F, a: T, b: T, intervals: usize) -> T {
    let n = if intervals % 2 == 0 {
        intervals.max(2)
    } else {
        intervals + 1
    };
    let h = (b - a) / cu::<T>(n);
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let x = a + h * cu::<T>(i);
        let wgt = if i % 2 == 1 { c::<T>(4.0) } else { c::<T>(2.0) };
        acc = acc + wgt * f(x);
    }
    acc * h / c(3.0)
}
