//! Exact rationals with an inline fast path.
//!
//! Values whose numerator and denominator fit in `i64` are kept inline and
//! combined in `i128`; anything larger falls back to `BigRational`. Results
//! are always in lowest terms, so equal values have equal representations.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use super::Rational;

#[derive(Clone, Debug)]
pub enum Num {
    /// Numerator and positive denominator, coprime, both within `+-i64::MAX`.
    Small(i64, i64),
    Big(Box<Rational>),
}

impl Num {
    pub const ZERO: Num = Num::Small(0, 1);
    pub const ONE: Num = Num::Small(1, 1);

    fn from_i128(n: i128, d: i128) -> Num {
        debug_assert!(d != 0);
        let g = gcd_u128(n.unsigned_abs(), d.unsigned_abs());
        let (mut n, mut d) = (n / g as i128, d / g as i128);
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (small(n), small(d)) {
            (Some(n), Some(d)) => Num::Small(n, d),
            _ => Num::Big(Box::new(Rational::new_raw(BigInt::from(n), BigInt::from(d)))),
        }
    }

    fn from_big(r: Rational) -> Num {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN => Num::Small(n, d),
            _ => Num::Big(Box::new(r)),
        }
    }

    pub fn from_rational(r: &Rational) -> Num {
        Num::from_big(r.clone())
    }

    pub fn to_rational(&self) -> Rational {
        match self {
            Num::Small(n, d) => Rational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Num::Big(r) => (**r).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Num::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Num::Small(1, 1))
    }

    pub fn signum(&self) -> i32 {
        match self {
            Num::Small(n, _) => n.signum() as i32,
            Num::Big(r) => {
                if r.is_positive() {
                    1
                } else if r.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn add(&self, o: &Num) -> Num {
        match (self, o) {
            (Num::Small(a, b), Num::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    return Num::from_i128(*a as i128 + *c as i128, 1);
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                Num::from_i128(a * d + c * b, b * d)
            }
            _ => Num::from_big(self.to_rational() + o.to_rational()),
        }
    }

    pub fn sub(&self, o: &Num) -> Num {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Num) -> Num {
        match (self, o) {
            (Num::Small(a, b), Num::Small(c, d)) => {
                let g1 = a.unsigned_abs().gcd(&d.unsigned_abs()).max(1) as i64;
                let g2 = c.unsigned_abs().gcd(&b.unsigned_abs()).max(1) as i64;
                let n = (a / g1) as i128 * (c / g2) as i128;
                let d = (b / g2) as i128 * (d / g1) as i128;
                match (small(n), small(d)) {
                    (Some(n), Some(d)) => Num::Small(n, d),
                    _ => Num::from_i128(n, d),
                }
            }
            _ => Num::from_big(self.to_rational() * o.to_rational()),
        }
    }

    pub fn recip(&self) -> Num {
        match self {
            Num::Small(n, d) => {
                assert!(*n != 0, "reciprocal of zero");
                if *n < 0 {
                    Num::Small(-d, -n)
                } else {
                    Num::Small(*d, *n)
                }
            }
            Num::Big(r) => Num::from_big(r.recip()),
        }
    }

    pub fn div(&self, o: &Num) -> Num {
        self.mul(&o.recip())
    }

    pub fn neg(&self) -> Num {
        match self {
            Num::Small(n, d) => Num::Small(-n, *d),
            Num::Big(r) => Num::Big(Box::new(-(**r).clone())),
        }
    }
}

fn small(v: i128) -> Option<i64> {
    (v.unsigned_abs() <= i64::MAX as u128).then_some(v as i64)
}

fn gcd_u128(a: u128, b: u128) -> u128 {
    if a == 0 {
        return b.max(1);
    }
    if b == 0 {
        return a;
    }
    if let (Ok(a), Ok(b)) = (u64::try_from(a), u64::try_from(b)) {
        return a.gcd(&b) as u128;
    }
    a.gcd(&b)
}

impl PartialEq for Num {
    fn eq(&self, o: &Num) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

impl Eq for Num {}

impl PartialOrd for Num {
    fn partial_cmp(&self, o: &Num) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Num {
    fn cmp(&self, o: &Num) -> Ordering {
        match (self, o) {
            (Num::Small(a, b), Num::Small(c, d)) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_rational().cmp(&o.to_rational()),
        }
    }
}
