//! Exact arithmetic over integral powers of x = 1 + eps.
//!
//! The rounded market only ever needs values of the form x^t with integer
//! t, sums of such powers (bundle disutilities), and order comparisons
//! between those sums. Representing everything by its exponent keeps the
//! state small even when eps is tiny and t runs into the millions, where
//! materializing x^t as a fraction would be hopeless.
//!
//! Comparisons are decided exactly: common exponents cancel, small
//! exponents are compared by integer arithmetic, and everything else goes
//! through adaptive-precision fixed-point intervals with directed
//! rounding, escalating until the interval separates (with an exact
//! big-integer comparison as the final word).

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::instance::Rational;
use crate::market::MarketError;

/// Exponents below this bound are compared by exact integer arithmetic
/// directly; it keeps the fast path allocation-free of interval logic.
const EXACT_EXPONENT_CUTOFF: i64 = 2048;

/// Fixed-point precisions tried in order before falling back to exact
/// integers.
const PRECISIONS: [usize; 6] = [128, 512, 2048, 8192, 32768, 131072];

/// Comparison context for a fixed eps: x = 1 + eps = xnum / xden.
pub(crate) struct PowerCtx {
    xnum: BigUint,
    xden: BigUint,
    ln_x: f64,
}

impl PowerCtx {
    pub fn new(eps: &Rational) -> Result<Self, MarketError> {
        if !eps.is_positive() {
            return Err(MarketError::InvalidEps);
        }
        let x = eps + Rational::one();
        let xnum = x.numer().to_biguint().expect("positive numerator");
        let xden = x.denom().to_biguint().expect("positive denominator");
        let ln_x = eps.to_f64().unwrap_or(f64::MIN_POSITIVE).ln_1p();
        Ok(PowerCtx { xnum, xden, ln_x })
    }

    /// Compares sum(x^e for e in a) with sum(x^e for e in b). Exponents
    /// may repeat and may be negative.
    pub fn cmp_sums(&self, a: &[i64], b: &[i64]) -> Ordering {
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        a.sort_unstable();
        b.sort_unstable();
        cancel_common(&mut a, &mut b);
        match (a.is_empty(), b.is_empty()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        // Shift both sides so the smallest exponent is zero; multiplying
        // by a common positive power preserves the order.
        let shift = *a.iter().chain(&b).min().unwrap();
        for e in a.iter_mut().chain(&mut b) {
            *e -= shift;
        }
        let max_e = *a.iter().chain(&b).max().unwrap();
        if max_e <= EXACT_EXPONENT_CUTOFF {
            return self.cmp_sums_exact(&a, &b);
        }
        for &p in &PRECISIONS {
            let (lo_a, hi_a) = self.sum_bounds(&a, p);
            let (lo_b, hi_b) = self.sum_bounds(&b, p);
            if hi_a < lo_b {
                return Ordering::Less;
            }
            if lo_a > hi_b {
                return Ordering::Greater;
            }
        }
        self.cmp_sums_exact(&a, &b)
    }

    /// Compares x^e with the positive integer v. Requires e >= 0.
    pub fn cmp_pow_int(&self, e: i64, v: u64) -> Ordering {
        assert!(e >= 0 && v >= 1);
        if e <= EXACT_EXPONENT_CUTOFF {
            let lhs = pow_biguint(&self.xnum, e as u64);
            let rhs = BigUint::from(v) * pow_biguint(&self.xden, e as u64);
            return lhs.cmp(&rhs);
        }
        for &p in &PRECISIONS {
            let (lo, hi) = self.pow_bounds(e as u64, p);
            let target = BigUint::from(v) << p;
            if hi < target {
                return Ordering::Less;
            }
            if lo > target {
                return Ordering::Greater;
            }
        }
        let lhs = pow_biguint(&self.xnum, e as u64);
        let rhs = BigUint::from(v) * pow_biguint(&self.xden, e as u64);
        lhs.cmp(&rhs)
    }

    /// Smallest non-negative t with x^t >= v, i.e. the rounding exponent
    /// ceil(log_x v), for an integer v >= 1.
    pub fn ceil_log(&self, v: u64) -> Result<i64, MarketError> {
        if v == 1 {
            return Ok(0);
        }
        let guess = ((v as f64).ln() / self.ln_x).ceil();
        if !guess.is_finite() || guess > (1u64 << 40) as f64 {
            return Err(MarketError::ValueRange);
        }
        // Bracket the answer around the floating-point guess, then close
        // in by binary search on the monotone predicate x^t >= v.
        let mut hi = (guess as i64).max(1);
        while self.cmp_pow_int(hi, v) == Ordering::Less {
            hi = hi.checked_mul(2).ok_or(MarketError::ValueRange)?;
            if hi > 1 << 45 {
                return Err(MarketError::ValueRange);
            }
        }
        let mut lo = 0i64;
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.cmp_pow_int(mid, v) == Ordering::Less {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }

    /// Approximate magnitude of x^e, for display only.
    pub fn pow_f64(&self, e: i64) -> f64 {
        (e as f64 * self.ln_x).exp()
    }

    fn cmp_sums_exact(&self, a: &[i64], b: &[i64]) -> Ordering {
        let max_e = *a.iter().chain(b).max().unwrap() as u64;
        let eval = |side: &[i64]| -> BigUint {
            let mut total = BigUint::zero();
            for &e in side {
                let e = e as u64;
                total += pow_biguint(&self.xnum, e) * pow_biguint(&self.xden, max_e - e);
            }
            total
        };
        eval(a).cmp(&eval(b))
    }

    /// Lower/upper fixed-point bounds (scale 2^p) on sum(x^e).
    fn sum_bounds(&self, exps: &[i64], p: usize) -> (BigUint, BigUint) {
        let mut lo = BigUint::zero();
        let mut hi = BigUint::zero();
        for &e in exps {
            let (l, h) = self.pow_bounds(e as u64, p);
            lo += l;
            hi += h;
        }
        (lo, hi)
    }

    /// Lower/upper fixed-point bounds (scale 2^p) on x^e, e >= 0, via
    /// binary exponentiation with directed rounding. All intermediate
    /// values are >= 1, so truncation stays a lower bound.
    fn pow_bounds(&self, e: u64, p: usize) -> (BigUint, BigUint) {
        let base_lo = (&self.xnum << p) / &self.xden;
        let base_hi = ((&self.xnum << p) + &self.xden - 1u32) / &self.xden;
        let mut lo = BigUint::one() << p;
        let mut hi = lo.clone();
        if e == 0 {
            return (lo, hi);
        }
        let bits = 64 - e.leading_zeros();
        for i in (0..bits).rev() {
            lo = mul_down(&lo, &lo, p);
            hi = mul_up(&hi, &hi, p);
            if (e >> i) & 1 == 1 {
                lo = mul_down(&lo, &base_lo, p);
                hi = mul_up(&hi, &base_hi, p);
            }
        }
        (lo, hi)
    }
}

fn mul_down(a: &BigUint, b: &BigUint, p: usize) -> BigUint {
    (a * b) >> p
}

fn mul_up(a: &BigUint, b: &BigUint, p: usize) -> BigUint {
    ((a * b) + ((BigUint::one() << p) - 1u32)) >> p
}

fn pow_biguint(base: &BigUint, e: u64) -> BigUint {
    let e32 = u32::try_from(e).expect("exponent fits u32 in exact path");
    num_traits::Pow::pow(base, e32)
}

/// Removes elements common to both sorted vectors (multiset difference).
fn cancel_common(a: &mut Vec<i64>, b: &mut Vec<i64>) {
    let mut keep_a = Vec::with_capacity(a.len());
    let mut keep_b = Vec::with_capacity(b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Equal => {
                i += 1;
                j += 1;
            }
            Ordering::Less => {
                keep_a.push(a[i]);
                i += 1;
            }
            Ordering::Greater => {
                keep_b.push(b[j]);
                j += 1;
            }
        }
    }
    keep_a.extend_from_slice(&a[i..]);
    keep_b.extend_from_slice(&b[j..]);
    *a = keep_a;
    *b = keep_b;
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn ctx(num: i64, den: i64) -> PowerCtx {
        PowerCtx::new(&Rational::new(BigInt::from(num), BigInt::from(den))).unwrap()
    }

    #[test]
    fn ceil_log_small_eps() {
        // x = 1.5: 1.5^5 = 7.59 < 11 <= 1.5^6.
        let c = ctx(1, 2);
        assert_eq!(c.ceil_log(11).unwrap(), 6);
        assert_eq!(c.ceil_log(1).unwrap(), 0);
        assert_eq!(c.ceil_log(2).unwrap(), 2);
    }

    #[test]
    fn ceil_log_tiny_eps() {
        let c = ctx(1, 31944);
        let t = c.ceil_log(11).unwrap();
        // x^t >= 11 > x^(t-1), checked independently below.
        assert_eq!(c.cmp_pow_int(t, 11), Ordering::Greater);
        assert_eq!(c.cmp_pow_int(t - 1, 11), Ordering::Less);
        let expected = (11f64.ln() * 31944.0).round() as i64;
        assert!((t - expected).abs() <= 2, "t = {t}, expected about {expected}");
    }

    #[test]
    fn sum_comparison_small() {
        let c = ctx(1, 2);
        // x + x = 3 vs x^2 + 1 = 3.25
        assert_eq!(c.cmp_sums(&[1, 1], &[2, 0]), Ordering::Less);
        assert_eq!(c.cmp_sums(&[3], &[3]), Ordering::Equal);
        assert_eq!(c.cmp_sums(&[0, 0, 0], &[2]), Ordering::Greater);
        assert_eq!(c.cmp_sums(&[], &[0]), Ordering::Less);
    }

    #[test]
    fn sum_comparison_large_exponents() {
        let c = ctx(1, 31944);
        let t5 = c.ceil_log(5).unwrap();
        let t11 = c.ceil_log(11).unwrap();
        // Two copies of roughly 5 against roughly 11.
        assert_eq!(c.cmp_sums(&[t5, t5], &[t11]), Ordering::Less);
        // Shifting by one power is a strict change.
        assert_eq!(c.cmp_sums(&[t11], &[t11 - 1]), Ordering::Greater);
        // Multiset cancellation handles shared terms.
        assert_eq!(c.cmp_sums(&[t11, t5], &[t5, t11]), Ordering::Equal);
    }

    #[test]
    fn pow_int_boundaries() {
        let c = ctx(1, 2);
        // 1.5^4 = 5.0625
        assert_eq!(c.cmp_pow_int(4, 5), Ordering::Greater);
        assert_eq!(c.cmp_pow_int(4, 6), Ordering::Less);
        // 1.5^2 = 2.25, never equal to an integer beyond e=0.
        assert_eq!(c.cmp_pow_int(0, 1), Ordering::Equal);
    }
}
