//! Arithmetic in GF(2^m) for m <= 8 via log/antilog tables.

use crate::{Error, Result};

/// Primitive polynomial x^8 + x^4 + x^3 + x^2 + 1.
pub const GF256_POLY: u16 = 0x11D;
/// Primitive polynomial x^3 + x + 1.
pub const GF8_POLY: u16 = 0b1011;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisField {
    bits: u32,
    exp: Vec<u8>,
    log: Vec<u8>,
}

impl GaloisField {
    /// Builds GF(2^bits) from a primitive polynomial (including the x^bits
    /// term). Fails if the polynomial does not generate the full group.
    pub fn new(bits: u32, poly: u16) -> Result<Self> {
        if !(2..=8).contains(&bits) || poly >> bits != 1 {
            return Err(Error::InvalidParameter(format!("bad field GF(2^{bits}) / {poly:#x}")));
        }
        let order = (1usize << bits) - 1;
        let mut exp = vec![0u8; 2 * order];
        let mut log = vec![0u8; order + 1];
        let mut x: u16 = 1;
        for i in 0..order {
            if i > 0 && x == 1 {
                return Err(Error::InvalidParameter(format!("{poly:#x} is not primitive")));
            }
            exp[i] = x as u8;
            log[x as usize] = i as u8;
            x <<= 1;
            if x >> bits != 0 {
                x ^= poly;
            }
        }
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        Ok(Self { bits, exp, log })
    }

    pub fn gf256() -> Self {
        Self::new(8, GF256_POLY).expect("0x11D is primitive")
    }

    pub fn gf8() -> Self {
        Self::new(3, GF8_POLY).expect("x^3+x+1 is primitive")
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Number of nonzero elements, 2^m - 1.
    pub fn order(&self) -> usize {
        (1 << self.bits) - 1
    }

    pub fn size(&self) -> usize {
        1 << self.bits
    }

    /// alpha^i for any integer i.
    pub fn pow_alpha(&self, i: i64) -> u8 {
        self.exp[i.rem_euclid(self.order() as i64) as usize]
    }

    pub fn add(&self, a: u8, b: u8) -> u8 {
        a ^ b
    }

    pub fn mul(&self, a: u8, b: u8) -> u8 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
        }
    }

    pub fn inv(&self, a: u8) -> u8 {
        assert!(a != 0, "zero has no inverse");
        self.exp[self.order() - self.log[a as usize] as usize]
    }

    pub fn div(&self, a: u8, b: u8) -> u8 {
        self.mul(a, self.inv(b))
    }

    pub fn log(&self, a: u8) -> usize {
        assert!(a != 0, "log of zero");
        self.log[a as usize] as usize
    }

    /// Horner evaluation; `poly[0]` is the highest-degree coefficient.
    pub fn eval(&self, poly: &[u8], x: u8) -> u8 {
        poly.iter().fold(0, |acc, &c| self.mul(acc, x) ^ c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_exhaustive() {
        for f in [GaloisField::gf256(), GaloisField::gf8()] {
            let n = f.size() as u16;
            for a in 1..n {
                assert_eq!(f.mul(a as u8, f.inv(a as u8)), 1);
            }
            for a in 0..n {
                for b in 0..n {
                    let (a, b) = (a as u8, b as u8);
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    // Distributivity against a handful of c keeps this fast.
                    for c in [0u8, 1, 2, (n - 1) as u8, (a ^ b) & (n - 1) as u8] {
                        assert_eq!(f.mul(a, b ^ c), f.mul(a, b) ^ f.mul(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn distributivity_full_gf8() {
        let f = GaloisField::gf8();
        for a in 0..8u8 {
            for b in 0..8u8 {
                for c in 0..8u8 {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn carryless_multiplication_oracle() {
        // Schoolbook multiply-then-reduce, independent of the tables.
        fn slow(a: u8, b: u8, poly: u16, bits: u32) -> u8 {
            let mut prod: u16 = 0;
            for i in 0..8 {
                if (b >> i) & 1 == 1 {
                    prod ^= (a as u16) << i;
                }
            }
            for i in (bits..16).rev() {
                if (prod >> i) & 1 == 1 {
                    prod ^= poly << (i - bits);
                }
            }
            prod as u8
        }
        let f = GaloisField::gf256();
        for a in 0..=255u8 {
            for b in 0..=255u8 {
                assert_eq!(f.mul(a, b), slow(a, b, GF256_POLY, 8));
            }
        }
    }

    #[test]
    fn rejects_non_primitive() {
        // x^8+x^4+x^3+x+1 (AES) is irreducible but not primitive.
        assert!(GaloisField::new(8, 0x11B).is_err());
    }
}
