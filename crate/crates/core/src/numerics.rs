//! Small numerical kernels shared by the series, closed-form and oracle paths.

/// Neumaier's variant of Kahan compensated summation.
#[derive(Copy, Clone, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

/// Compensated sum of `values` taken in ascending order.
///
/// The result depends only on the multiset of inputs, so any permutation of
/// the terms (mode relabelling, parallel partitioning) reproduces it bit for bit.
pub fn canonical_sum(values: &mut [f64]) -> f64 {
    values.sort_unstable_by(f64::total_cmp);
    let mut acc = CompensatedSum::new();
    acc.extend(values.iter().copied());
    acc.value()
}

/// Product of `values` taken in ascending order; order-independent like [`canonical_sum`].
pub fn canonical_product(values: &mut [f64]) -> f64 {
    values.sort_unstable_by(f64::total_cmp);
    values.iter().product()
}

/// `(1 - sqrt(1 - x)) / 2` without cancellation for small `x`.
///
/// This is the Helstrom error for two pure states of squared overlap `x`.
pub fn half_one_minus_sqrt_one_minus(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    0.5 * x / (1.0 + (1.0 - x).sqrt())
}

/// Largest `n` for which binomial rows are evaluated by direct products.
const DIRECT_ROW_MAX: u64 = 30;

/// Binomial probabilities `C(n, k) p^k (1-p)^(n-k)` for `k = 0..=n`.
///
/// Small `n` use exact coefficients. Larger `n` start from the mode with
/// weight 1, run the ratio recurrence outward in both directions until the
/// terms underflow, and normalize at the end, so no factorial or power ever
/// overflows.
pub fn binomial_row(n: u64, p: f64) -> Vec<f64> {
    let len = n as usize + 1;
    let mut row = vec![0.0; len];
    if p <= 0.0 {
        row[0] = 1.0;
        return row;
    }
    if p >= 1.0 {
        row[len - 1] = 1.0;
        return row;
    }
    let q = 1.0 - p;
    if n <= DIRECT_ROW_MAX {
        let mut coeff = 1.0f64;
        for k in 0..=n {
            if k > 0 {
                coeff = coeff * (n - k + 1) as f64 / k as f64;
            }
            row[k as usize] = coeff * p.powi(k as i32) * q.powi((n - k) as i32);
        }
        return row;
    }

    let odds = p / q;
    let mode = (((n + 1) as f64) * p).floor().min(n as f64) as usize;
    row[mode] = 1.0;
    let mut k = mode;
    while k < n as usize {
        let next = row[k] * (n as f64 - k as f64) / (k as f64 + 1.0) * odds;
        if next < f64::MIN_POSITIVE {
            break;
        }
        row[k + 1] = next;
        k += 1;
    }
    let mut k = mode;
    while k > 0 {
        let prev = row[k] * k as f64 / ((n as f64 - k as f64 + 1.0) * odds);
        if prev < f64::MIN_POSITIVE {
            break;
        }
        row[k - 1] = prev;
        k -= 1;
    }
    let total = canonical_sum(&mut row.clone());
    for v in &mut row {
        *v /= total;
    }
    row
}

/// `C(n, k) a^(n-k) b^k` for `k = 0..=n`, with `a, b >= 0`.
///
/// Written as `(a + b)^n` times a binomial row with success probability
/// `b / (a + b)`.
pub fn binomial_kernel_row(n: u64, a: f64, b: f64) -> Vec<f64> {
    let s = a + b;
    if s == 0.0 {
        let mut row = vec![0.0; n as usize + 1];
        if n == 0 {
            row[0] = 1.0;
        }
        return row;
    }
    let scale = s.powf(n as f64);
    let mut row = binomial_row(n, b / s);
    for v in &mut row {
        *v *= scale;
    }
    row
}

/// Result of a one-dimensional minimization on a closed interval.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Minimum {
    pub argmin: f64,
    pub value: f64,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the minimum of a convex function on `[lo, hi]`.
///
/// The interior search runs until the bracket is narrower than `tol`; the two
/// endpoints are then compared against the interior estimate so minima sitting
/// on the boundary are reported exactly. Ties resolve to the smaller argument.
pub fn golden_section_min<F>(f: F, lo: f64, hi: f64, tol: f64) -> Minimum
where
    F: Fn(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let interior = if fc <= fd {
        Minimum {
            argmin: c,
            value: fc,
        }
    } else {
        Minimum {
            argmin: d,
            value: fd,
        }
    };
    let mut best = Minimum {
        argmin: lo,
        value: f(lo),
    };
    for cand in [
        interior,
        Minimum {
            argmin: hi,
            value: f(hi),
        },
    ] {
        if cand.value < best.value {
            best = cand;
        }
    }
    best
}
