//! Systematic Reed-Solomon codes with bounded-distance (Berlekamp-Massey)
//! decoding.
//!
//! Codewords are laid out message first, then parity. Symbol `i` of an
//! `n`-symbol codeword is the coefficient of `x^(n-1-i)`. The generator has
//! roots alpha^1 .. alpha^(n-k). Any `n` up to the field order is accepted, so
//! shortened codes are just codes with smaller `n`.

use super::gf::GaloisField;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsCode {
    field: GaloisField,
    n: usize,
    k: usize,
    /// Generator polynomial, highest degree first (monic).
    generator: Vec<u8>,
}

/// Result of bounded-distance decoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RsDecoded {
    /// A codeword within distance t was found.
    Corrected { message: Vec<u8>, corrected: usize },
    /// More than t errors were detected.
    Failure,
}

impl RsDecoded {
    pub fn message(&self) -> Option<&[u8]> {
        match self {
            RsDecoded::Corrected { message, .. } => Some(message),
            RsDecoded::Failure => None,
        }
    }
}

impl RsCode {
    pub fn new(field: GaloisField, n: usize, k: usize) -> Result<Self> {
        if n > field.order() || k == 0 || k >= n || !(n - k).is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "RS({n},{k}) over GF(2^{}) needs k < n <= {} with n-k even",
                field.bits(),
                field.order()
            )));
        }
        let mut generator = vec![1u8];
        for i in 1..=(n - k) {
            let root = field.pow_alpha(i as i64);
            // multiply by (x - root)
            let mut next = vec![0u8; generator.len() + 1];
            for (j, &g) in generator.iter().enumerate() {
                next[j] ^= g;
                next[j + 1] ^= field.mul(g, root);
            }
            generator = next;
        }
        Ok(Self { field, n, k, generator })
    }

    /// RS(n, k) over GF(2^8) with the default primitive polynomial.
    pub fn gf256(n: usize, k: usize) -> Result<Self> {
        Self::new(GaloisField::gf256(), n, k)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn parity(&self) -> usize {
        self.n - self.k
    }

    /// Correctable symbol errors, (n - k) / 2.
    pub fn t(&self) -> usize {
        (self.n - self.k) / 2
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    /// Same parity count, shorter message: the code used for tail payloads.
    pub fn shortened(&self, k: usize) -> Result<Self> {
        Self::new(self.field.clone(), k + self.parity(), k)
    }

    pub fn encode(&self, message: &[u8]) -> Result<Vec<u8>> {
        if message.len() != self.k {
            return Err(Error::WrongLength { expected: self.k, actual: message.len() });
        }
        let f = &self.field;
        let np = self.parity();
        let mut rem = vec![0u8; np];
        for &m in message {
            let coef = m ^ rem[0];
            rem.rotate_left(1);
            rem[np - 1] = 0;
            if coef != 0 {
                for j in 0..np {
                    rem[j] ^= f.mul(self.generator[j + 1], coef);
                }
            }
        }
        let mut out = message.to_vec();
        out.extend_from_slice(&rem);
        Ok(out)
    }

    fn syndromes(&self, word: &[u8]) -> Vec<u8> {
        (1..=self.parity()).map(|j| self.field.eval(word, self.field.pow_alpha(j as i64))).collect()
    }

    /// True when `word` is a codeword (all syndromes zero).
    pub fn is_codeword(&self, word: &[u8]) -> bool {
        word.len() == self.n && self.syndromes(word).iter().all(|&s| s == 0)
    }

    pub fn decode(&self, received: &[u8]) -> Result<RsDecoded> {
        if received.len() != self.n {
            return Err(Error::WrongLength { expected: self.n, actual: received.len() });
        }
        let f = &self.field;
        let synd = self.syndromes(received);
        if synd.iter().all(|&s| s == 0) {
            return Ok(RsDecoded::Corrected { message: received[..self.k].to_vec(), corrected: 0 });
        }

        // Berlekamp-Massey; polynomials stored lowest degree first.
        let mut lambda = vec![1u8];
        let mut prev = vec![1u8];
        let mut l = 0usize;
        let mut shift = 1usize;
        let mut last_d = 1u8;
        for step in 0..synd.len() {
            let mut d = synd[step];
            for i in 1..=l.min(lambda.len() - 1) {
                d ^= f.mul(lambda[i], synd[step - i]);
            }
            if d == 0 {
                shift += 1;
                continue;
            }
            let coef = f.div(d, last_d);
            let mut next = lambda.clone();
            if next.len() < prev.len() + shift {
                next.resize(prev.len() + shift, 0);
            }
            for (i, &p) in prev.iter().enumerate() {
                next[i + shift] ^= f.mul(coef, p);
            }
            if 2 * l <= step {
                prev = lambda;
                l = step + 1 - l;
                last_d = d;
                shift = 1;
            } else {
                shift += 1;
            }
            lambda = next;
        }
        while lambda.len() > 1 && *lambda.last().unwrap() == 0 {
            lambda.pop();
        }
        let degree = lambda.len() - 1;
        if degree != l || l > self.t() {
            return Ok(RsDecoded::Failure);
        }

        // Chien search over the (possibly shortened) positions.
        let eval_low = |poly: &[u8], x: u8| poly.iter().rev().fold(0u8, |acc, &c| f.mul(acc, x) ^ c);
        let mut positions = Vec::new();
        for i in 0..self.n {
            let power = (self.n - 1 - i) as i64;
            if eval_low(&lambda, f.pow_alpha(-power)) == 0 {
                positions.push(i);
            }
        }
        if positions.len() != degree {
            return Ok(RsDecoded::Failure);
        }

        // Forney: omega = S(x) * lambda(x) mod x^(2t).
        let np = self.parity();
        let mut omega = vec![0u8; np];
        for (i, &s) in synd.iter().enumerate() {
            for (j, &c) in lambda.iter().enumerate() {
                if i + j < np {
                    omega[i + j] ^= f.mul(s, c);
                }
            }
        }
        let derivative: Vec<u8> = lambda.iter().enumerate().skip(1).map(|(i, &c)| if i % 2 == 1 { c } else { 0 }).collect();
        let mut word = received.to_vec();
        for &i in &positions {
            let power = (self.n - 1 - i) as i64;
            let x_inv = f.pow_alpha(-power);
            let denom = eval_low(&derivative, x_inv);
            if denom == 0 {
                return Ok(RsDecoded::Failure);
            }
            word[i] ^= f.div(eval_low(&omega, x_inv), denom);
        }
        if !self.is_codeword(&word) {
            return Ok(RsDecoded::Failure);
        }
        Ok(RsDecoded::Corrected { message: word[..self.k].to_vec(), corrected: positions.len() })
    }
}
