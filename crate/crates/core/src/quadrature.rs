//! Globally adaptive 21-point Gauss-Kronrod quadrature, plus a mapping of
//! the half line `[0, inf)` onto `(0, 1]` through `u = exp(-rate t)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub abs_error: f64,
    pub intervals: usize,
    /// `false` when the interval budget ran out before the tolerance was met.
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Tolerance {
    pub fn absolute(abs: f64) -> Self {
        Self {
            abs,
            rel: 0.0,
            max_intervals: 4000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// QUADPACK-style error rescaling.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut err = err.abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    err
}

fn gk21<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Segment {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let f_center = f(center);

    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    let mut res_gauss = 0.0;
    let mut res_kronrod = f_center * WGK[10];
    let mut res_abs = res_kronrod.abs();

    for j in 0..10 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * (f1 + f2);
        }
        res_kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
    }

    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let abs_half = half.abs();
    Segment {
        lo,
        hi,
        value: res_kronrod * half,
        error: rescale_error((res_kronrod - res_gauss) * half, res_abs * abs_half, res_asc * abs_half),
    }
}

/// Integrates `f` over `[lo, hi]`, bisecting the interval with the largest
/// error estimate until the total error meets `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: Tolerance) -> Integral {
    if lo == hi {
        return Integral {
            value: 0.0,
            abs_error: 0.0,
            intervals: 0,
            converged: true,
        };
    }
    let first = gk21(&f, lo, hi);
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::from([first]);

    let target = |v: f64| tol.abs.max(tol.rel * v.abs());
    while error > target(value) && heap.len() < tol.max_intervals {
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid == worst.lo || mid == worst.hi {
            // interval exhausted at machine precision
            heap.push(worst);
            break;
        }
        let left = gk21(&f, worst.lo, mid);
        let right = gk21(&f, mid, worst.hi);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // re-sum to shed the drift of the running updates
    let value: f64 = heap.iter().map(|s| s.value).sum();
    let error: f64 = heap.iter().map(|s| s.error).sum();
    Integral {
        value,
        abs_error: error,
        intervals: heap.len(),
        converged: error <= target(value),
    }
}

/// Integrates `f(t)` over `t` in `[0, inf)` after substituting
/// `u = exp(-rate t)`, `dt = du / (rate u)`.
///
/// The integrand must decay at least as fast as `exp(-rate t)` for the
/// transformed integrand to stay bounded at `u -> 0`.
pub fn integrate_half_line<F: Fn(f64) -> f64>(f: F, rate: f64, tol: Tolerance) -> Integral {
    integrate(
        |u: f64| {
            let t = -u.ln() / rate;
            f(t) / (rate * u)
        },
        0.0,
        1.0,
        tol,
    )
}
