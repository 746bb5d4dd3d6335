//! Small exact-arithmetic helpers shared by the phase, spiral and gap code.

/// Largest argument accepted by [`ceil_sq`] / [`floor_sq`]; keeps `x*x` below 2^52
/// so that every integer near the product is representable.
pub const SQ_ARG_LIMIT: f64 = 67_108_864.0; // 2^26

/// Error-free product: `a * b == p + e` exactly.
#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Error-free sum (Knuth): `a + b == s + e` exactly.
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let (s, e) = two_sum(self.sum, x);
        self.sum = s;
        self.comp += e;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Exact `ceil(x^2)` for `0 <= x <= 2^26`.
///
/// `x*x` is split into `p + e` with `|e| <= ulp(p)/2`. When `p` is not an integer its
/// distance to the nearest integer is at least `ulp(p) > |e|`, so only the integer
/// case needs the sign of the tail.
pub fn ceil_sq(x: f64) -> u64 {
    debug_assert!((0.0..=SQ_ARG_LIMIT).contains(&x), "ceil_sq argument {x}");
    let (p, e) = two_prod(x, x);
    let c = p.ceil();
    if p == c && e > 0.0 {
        c as u64 + 1
    } else {
        c as u64
    }
}

/// Exact `floor(x^2)` for `0 <= x <= 2^26`.
pub fn floor_sq(x: f64) -> u64 {
    debug_assert!((0.0..=SQ_ARG_LIMIT).contains(&x), "floor_sq argument {x}");
    let (p, e) = two_prod(x, x);
    let f = p.floor();
    if p == f && e < 0.0 {
        f as u64 - 1
    } else {
        f as u64
    }
}

/// Fractional part in `[0, 1)`; values that round up to 1 are pulled back below it.
#[inline]
pub fn frac(x: f64) -> f64 {
    clamp_unit(x - x.floor())
}

#[inline]
pub fn clamp_unit(f: f64) -> f64 {
    if f >= 1.0 {
        ONE_MINUS_ULP
    } else if f < 0.0 {
        0.0
    } else {
        f
    }
}

/// Largest double below one.
pub const ONE_MINUS_ULP: f64 = 1.0 - f64::EPSILON / 2.0;

/// Circular (torus) distance on `R/Z` between two values in `[0, 1)`.
#[inline]
pub fn circular_distance(x: f64, y: f64) -> f64 {
    let d = (x - y).abs();
    d.min(1.0 - d)
}
