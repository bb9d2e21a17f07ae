//! Bidegrees for chain-cochain bicomplexes.
//!
//! The cochain direction (gauge/ghost structure) counts positively, the
//! chain direction (derived/antifield structure) negatively; the total
//! degree of an element in bidegree `(i, j)` is `i - j` and the Koszul sign
//! rule is taken with respect to this total degree.

use std::fmt;
use std::ops::{Add, Neg, Sub};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Bidegree {
    /// Cochain (ghost) degree `i`.
    pub cochain: i32,
    /// Chain (antifield) degree `j`.
    pub chain: i32,
}

impl Bidegree {
    pub const ZERO: Bidegree = Bidegree { cochain: 0, chain: 0 };

    pub fn new(cochain: i32, chain: i32) -> Self {
        Bidegree { cochain, chain }
    }

    /// Total degree `i - j`; never stored, always recomputed.
    pub fn total(&self) -> i32 {
        self.cochain - self.chain
    }

    /// Parity of the total degree: `true` for odd.
    pub fn is_odd(&self) -> bool {
        self.total().rem_euclid(2) == 1
    }

    pub fn scaled(&self, k: i32) -> Bidegree {
        Bidegree::new(self.cochain * k, self.chain * k)
    }
}

impl Add for Bidegree {
    type Output = Bidegree;
    fn add(self, rhs: Bidegree) -> Bidegree {
        Bidegree::new(self.cochain + rhs.cochain, self.chain + rhs.chain)
    }
}

impl Sub for Bidegree {
    type Output = Bidegree;
    fn sub(self, rhs: Bidegree) -> Bidegree {
        Bidegree::new(self.cochain - rhs.cochain, self.chain - rhs.chain)
    }
}

impl Neg for Bidegree {
    type Output = Bidegree;
    fn neg(self) -> Bidegree {
        Bidegree::new(-self.cochain, -self.chain)
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.cochain, self.chain)
    }
}

impl fmt::Debug for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Koszul sign `(-1)^{|a||b|}` as a rational-friendly `i8`.
pub fn koszul_sign(a: Bidegree, b: Bidegree) -> i8 {
    if a.is_odd() && b.is_odd() {
        -1
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn total_degree_and_parity() {
        // antighost t: bidegree (0,1), total -1, odd
        let t = Bidegree::new(0, 1);
        assert_eq!(t.total(), -1);
        assert!(t.is_odd());
        // ghost theta: bidegree (1,0), total +1, odd
        let th = Bidegree::new(1, 0);
        assert_eq!(th.total(), 1);
        assert!(th.is_odd());
        // their product is even
        assert!(!(t + th).is_odd());
        assert_eq!(koszul_sign(t, th), -1);
        assert_eq!(koszul_sign(t, Bidegree::ZERO), 1);
    }
}
