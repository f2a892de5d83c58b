use std::f64::consts::TAU;
use std::fmt;

/// A rotation angle stored as the dyadic fraction `num / 2^den_pow2` of a
/// full turn.
///
/// Values are kept canonical: the numerator is reduced modulo one turn with
/// its sign preserved, so angles lie in (-2π, 2π), and common factors of two
/// are cancelled. Negation is therefore exact and an involution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Angle {
    num: i64,
    den_pow2: u32,
}

impl Angle {
    pub const ZERO: Angle = Angle { num: 0, den_pow2: 0 };

    /// `num / 2^den_pow2` turns.
    pub fn turns(num: i64, den_pow2: u32) -> Angle {
        let mut num = num;
        if den_pow2 < 63 {
            num %= 1i64 << den_pow2;
        }
        Angle { num, den_pow2 }.normalized()
    }

    /// `2π / 2^k`, the rotation of the QFT's `R_k` gate.
    pub fn rk(k: u32) -> Angle {
        Angle::turns(1, k)
    }

    fn normalized(mut self) -> Angle {
        if self.num == 0 {
            return Angle::ZERO;
        }
        let tz = self.num.trailing_zeros().min(self.den_pow2);
        self.num >>= tz;
        self.den_pow2 -= tz;
        self
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn den_pow2(&self) -> u32 {
        self.den_pow2
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn radians(&self) -> f64 {
        TAU * self.num as f64 * 2f64.powi(-(self.den_pow2 as i32))
    }
}

/// Exact sum modulo one turn.
impl std::ops::Add for Angle {
    type Output = Angle;

    fn add(self, other: Angle) -> Angle {
        let p = self.den_pow2.max(other.den_pow2);
        assert!(p < 62, "angle denominator 2^{p} too fine for exact addition");
        let lhs = self.num << (p - self.den_pow2);
        let rhs = other.num << (p - other.den_pow2);
        Angle::turns(lhs + rhs, p)
    }
}

impl std::ops::Neg for Angle {
    type Output = Angle;

    fn neg(self) -> Angle {
        Angle { num: -self.num, den_pow2: self.den_pow2 }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2π·{}/2^{}", self.num, self.den_pow2)
    }
}
