//! Outward-rounded interval arithmetic on `f64`.
//!
//! Each operation computes the rounded-to-nearest result and then widens it
//! by one ulp (more for `ln`, which libm does not round correctly), so the
//! true real value always lies inside the returned interval.

use serde::Serialize;

use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

fn widen(lo: f64, hi: f64, ulps: u32) -> Interval {
    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..ulps {
        lo = lo.next_down();
        hi = hi.next_up();
    }
    Interval { lo, hi }
}

impl Interval {
    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// Enclosure of an exact rational.
    pub fn from_rational(q: &Rational) -> Self {
        let x = rational::to_f64(q);
        let exact = rational::from_f64(x);
        if exact == *q {
            Interval::point(x)
        } else if exact < *q {
            Interval { lo: x, hi: x.next_up() }
        } else {
            Interval { lo: x.next_down(), hi: x }
        }
    }

    pub fn from_u64(n: u64) -> Self {
        Interval::from_rational(&Rational::from_integer(n.into()))
    }

    pub fn add(self, o: Interval) -> Interval {
        widen(self.lo + o.lo, self.hi + o.hi, 1)
    }

    pub fn sub(self, o: Interval) -> Interval {
        widen(self.lo - o.hi, self.hi - o.lo, 1)
    }

    pub fn mul(self, o: Interval) -> Interval {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        widen(lo, hi, 1)
    }

    /// Division by an interval not containing zero.
    pub fn div(self, o: Interval) -> Interval {
        assert!(o.lo > 0.0 || o.hi < 0.0, "interval divisor contains zero");
        let c = [self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        widen(lo, hi, 1)
    }

    /// Square root of a nonnegative interval.
    pub fn sqrt(self) -> Interval {
        let lo = if self.lo <= 0.0 { 0.0 } else { self.lo.sqrt().next_down().max(0.0) };
        Interval {
            lo,
            hi: self.hi.max(0.0).sqrt().next_up(),
        }
    }

    /// Natural logarithm of a positive interval.
    pub fn ln(self) -> Interval {
        widen(self.lo.ln(), self.hi.ln(), 4)
    }

    pub fn min(self, o: Interval) -> Interval {
        Interval {
            lo: self.lo.min(o.lo),
            hi: self.hi.min(o.hi),
        }
    }

    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Certified `q <= self` for every real in the interval: `q <= lo`.
    pub fn certainly_ge(self, q: &Rational) -> bool {
        self.lo.is_finite() && *q <= rational::from_f64(self.lo)
    }

    /// Certified `q > self`: `q > hi`.
    pub fn certainly_lt(self, q: &Rational) -> bool {
        self.hi.is_finite() && *q > rational::from_f64(self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn sqrt_two_enclosed() {
        let s = Interval::from_u64(2).sqrt();
        assert!(s.lo < s.hi);
        assert!(s.contains(std::f64::consts::SQRT_2));
        let sq = s.mul(s);
        assert!(sq.lo <= 2.0 && 2.0 <= sq.hi);
    }

    #[test]
    fn third_enclosed() {
        let t = Interval::from_rational(&rat(1, 3));
        assert!(rational::from_f64(t.lo) <= rat(1, 3));
        assert!(rational::from_f64(t.hi) >= rat(1, 3));
    }

    #[test]
    fn ln_enclosed() {
        let l = Interval::from_u64(16).ln();
        assert!(l.contains(16f64.ln()));
    }

    #[test]
    fn certified_comparisons() {
        let s = Interval::from_u64(2).sqrt();
        assert!(s.certainly_ge(&rat(141, 100)));
        assert!(!s.certainly_ge(&rat(142, 100)));
        assert!(s.certainly_lt(&rat(142, 100)));
    }
}
