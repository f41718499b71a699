//! Second-order jets: a value together with its first two radial derivatives.
//!
//! Arithmetic on [`Jet`] propagates derivatives exactly (forward-mode
//! differentiation truncated at order two), so composite radial functions
//! such as `sqrt(1 + B r^2) * f(r)` never need hand-expanded chain rules.

use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    pub const fn new(value: f64, d1: f64, d2: f64) -> Self {
        Jet { value, d1, d2 }
    }

    pub const fn constant(value: f64) -> Self {
        Jet::new(value, 0.0, 0.0)
    }

    /// The independent variable `r` itself.
    pub const fn variable(r: f64) -> Self {
        Jet::new(r, 1.0, 0.0)
    }

    /// Component by derivative order (0, 1 or 2).
    pub fn order(&self, k: u8) -> f64 {
        match k {
            0 => self.value,
            1 => self.d1,
            _ => self.d2,
        }
    }

    pub fn sqrt(self) -> Jet {
        let s = self.value.sqrt();
        let d1 = self.d1 / (2.0 * s);
        let d2 = self.d2 / (2.0 * s) - self.d1 * self.d1 / (4.0 * s * s * s);
        Jet::new(s, d1, d2)
    }

    pub fn recip(self) -> Jet {
        let v = self.value;
        Jet::new(
            1.0 / v,
            -self.d1 / (v * v),
            -self.d2 / (v * v) + 2.0 * self.d1 * self.d1 / (v * v * v),
        )
    }

    pub fn powi(self, k: i32) -> Jet {
        let v = self.value;
        let kf = f64::from(k);
        let d1 = kf * v.powi(k - 1) * self.d1;
        let d2 = kf * (kf - 1.0) * v.powi(k - 2) * self.d1 * self.d1 + kf * v.powi(k - 1) * self.d2;
        Jet::new(v.powi(k), d1, d2)
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.d1.is_finite() && self.d2.is_finite()
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet::new(self.value + o.value, self.d1 + o.d1, self.d2 + o.d2)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet::new(self.value - o.value, self.d1 - o.d1, self.d2 - o.d2)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet::new(
            self.value * o.value,
            self.d1 * o.value + self.value * o.d1,
            self.d2 * o.value + 2.0 * self.d1 * o.d1 + self.value * o.d2,
        )
    }
}

impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet::new(-self.value, -self.d1, -self.d2)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, c: f64) -> Jet {
        Jet::new(self.value + c, self.d1, self.d2)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, c: f64) -> Jet {
        Jet::new(self.value * c, self.d1 * c, self.d2 * c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_rule_matches_polynomial() {
        // (r^2)(r^3) = r^5 at r = 2: 32, 80, 160
        let r = Jet::variable(2.0);
        let p = (r * r) * (r * r * r);
        assert_eq!(p, Jet::new(32.0, 80.0, 160.0));
        assert_eq!(r.powi(5), p);
    }

    #[test]
    fn sqrt_and_recip() {
        // sqrt(1 + r^2) at r = 0: 1, 0, 1
        let r = Jet::variable(0.0);
        let s = (r * r + 1.0).sqrt();
        assert_eq!(s, Jet::new(1.0, 0.0, 1.0));
        // 1/r at r = 2: 0.5, -0.25, 0.25
        let inv = Jet::variable(2.0).recip();
        assert_eq!(inv, Jet::new(0.5, -0.25, 0.25));
        assert_eq!(Jet::variable(2.0).powi(-1), inv);
    }
}
