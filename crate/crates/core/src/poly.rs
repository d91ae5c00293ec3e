//! Integer polynomials, polynomials over the prime field `F_p`, and the
//! small amount of factorization machinery the ring constructors need.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::modular::{inv_mod, is_prime, mul_mod};

/// Polynomial with integer coefficients, stored lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Monic polynomial `x^deg + tail[deg-1] x^(deg-1) + ... + tail[0]`.
    pub fn monic_from_tail(tail: &[i64]) -> Self {
        let mut c: Vec<BigInt> = tail.iter().map(|&v| BigInt::from(v)).collect();
        c.push(BigInt::one());
        IntPoly::new(c)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_monic(&self) -> bool {
        self.degree() >= 1 && self.coeffs.last().is_some_and(One::is_one)
    }

    /// Reduce every coefficient into `[0, p)`.
    pub fn reduce_mod(&self, p: u64) -> FpPoly {
        let pb = BigInt::from(p);
        let c = self
            .coeffs
            .iter()
            .map(|a| a.mod_floor(&pb).to_u64().expect("residue fits u64"))
            .collect();
        FpPoly::new(p, c)
    }

    /// Coefficients of `x^n mod self` for a monic `self`, as a vector of length `deg`.
    pub fn power_of_x_mod(&self, n: usize) -> Vec<BigInt> {
        let d = self.degree();
        let mut cur = vec![BigInt::zero(); d];
        if n < d {
            cur[n] = BigInt::one();
            return cur;
        }
        cur[d - 1] = BigInt::one();
        for _ in d..=n {
            // multiply by x: shift up, then fold the x^d term back in.
            let top = cur[d - 1].clone();
            for i in (1..d).rev() {
                cur[i] = cur[i - 1].clone();
            }
            cur[0] = BigInt::zero();
            if !top.is_zero() {
                for (i, c) in cur.iter_mut().enumerate() {
                    *c -= &top * &self.coeffs[i];
                }
            }
        }
        cur
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() && !(i == 0 && first) {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { "-" } else { "+" })?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    f.write_str("x")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl FromStr for IntPoly {
    type Err = Error;

    /// Accepts sums of terms such as `x^3 - 2`, `x^2+x+1`, `3*x^2 - 4x + 7`.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let bytes = compact.as_bytes();
        let mut coeffs: Vec<BigInt> = Vec::new();
        let mut pos = 0;
        while pos < bytes.len() {
            let mut sign = BigInt::one();
            if bytes[pos] == b'+' || bytes[pos] == b'-' {
                if bytes[pos] == b'-' {
                    sign = -sign;
                }
                pos += 1;
            } else if pos != 0 {
                return Err(Error::Parse(format!(
                    "expected sign at offset {pos} in {s:?}"
                )));
            }
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            let coef = if pos > start {
                compact[start..pos]
                    .parse::<BigInt>()
                    .map_err(|e| Error::Parse(e.to_string()))?
            } else {
                BigInt::one()
            };
            let has_num = pos > start;
            if pos < bytes.len() && bytes[pos] == b'*' {
                if !has_num {
                    return Err(Error::Parse(format!("dangling '*' in {s:?}")));
                }
                pos += 1;
                if pos >= bytes.len() || bytes[pos] != b'x' {
                    return Err(Error::Parse(format!("expected 'x' after '*' in {s:?}")));
                }
            }
            let exp = if pos < bytes.len() && bytes[pos] == b'x' {
                pos += 1;
                if pos < bytes.len() && bytes[pos] == b'^' {
                    pos += 1;
                    let es = pos;
                    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    if es == pos {
                        return Err(Error::Parse(format!("missing exponent in {s:?}")));
                    }
                    compact[es..pos]
                        .parse::<usize>()
                        .ok()
                        .filter(|&e| e <= 64)
                        .ok_or_else(|| Error::Parse(format!("exponent out of range in {s:?}")))?
                } else {
                    1
                }
            } else if has_num {
                0
            } else {
                return Err(Error::Parse(format!(
                    "empty term at offset {start} in {s:?}"
                )));
            };
            if coeffs.len() <= exp {
                coeffs.resize(exp + 1, BigInt::zero());
            }
            coeffs[exp] += sign * coef;
        }
        Ok(IntPoly::new(coeffs))
    }
}

/// Polynomial over `F_p`, lowest degree first, always trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpPoly {
    p: u64,
    c: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        for v in c.iter_mut() {
            *v %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, c }
    }

    fn x(p: u64) -> Self {
        FpPoly::new(p, vec![0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    fn sub(&self, o: &FpPoly) -> FpPoly {
        let n = self.c.len().max(o.c.len());
        let p = self.p;
        let c = (0..n)
            .map(|i| {
                let a = self.c.get(i).copied().unwrap_or(0);
                let b = o.c.get(i).copied().unwrap_or(0);
                (a + p - b) % p
            })
            .collect();
        FpPoly::new(p, c)
    }

    fn mul(&self, o: &FpPoly) -> FpPoly {
        if self.is_zero() || o.is_zero() {
            return FpPoly::new(self.p, vec![]);
        }
        let p = self.p;
        let mut c = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] = (c[i + j] + mul_mod(a, b, p)) % p;
            }
        }
        FpPoly::new(p, c)
    }

    /// Quotient and remainder; panics on a zero divisor.
    fn div_rem(&self, d: &FpPoly) -> (FpPoly, FpPoly) {
        let p = self.p;
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = inv_mod(d.c[dd], p).expect("leading coefficient is a unit");
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (FpPoly::new(p, vec![]), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let coef = mul_mod(r[i], lead_inv, p);
            if coef == 0 {
                continue;
            }
            q[i - dd] = coef;
            for (j, &dc) in d.c.iter().enumerate() {
                let idx = i - dd + j;
                r[idx] = (r[idx] + p - mul_mod(coef, dc, p)) % p;
            }
        }
        (FpPoly::new(p, q), FpPoly::new(p, r))
    }

    fn rem(&self, d: &FpPoly) -> FpPoly {
        self.div_rem(d).1
    }

    fn monic(&self) -> FpPoly {
        match self.degree() {
            None => self.clone(),
            Some(d) => {
                let inv = inv_mod(self.c[d], self.p).expect("unit leading coefficient");
                FpPoly::new(
                    self.p,
                    self.c.iter().map(|&a| mul_mod(a, inv, self.p)).collect(),
                )
            }
        }
    }

    pub fn gcd(&self, o: &FpPoly) -> FpPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> FpPoly {
        let p = self.p;
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| mul_mod(a, i as u64 % p, p))
            .collect();
        FpPoly::new(p, c)
    }

    fn pow_mod(&self, mut e: u64, m: &FpPoly) -> FpPoly {
        let mut base = self.rem(m);
        let mut acc = FpPoly::new(self.p, vec![1]).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// True when the polynomial has no repeated factor over `F_p`.
    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => {
                let d = self.derivative();
                !d.is_zero() && self.gcd(&d).degree() == Some(0)
            }
        }
    }

    /// Distinct-degree factorization of a squarefree polynomial: the sorted
    /// multiset of degrees of its irreducible factors.
    pub fn factor_degrees(&self) -> Vec<usize> {
        let mut f = self.monic();
        let mut out = Vec::new();
        let x = FpPoly::x(self.p);
        let mut h = x.rem(&f);
        let mut i = 1;
        while let Some(df) = f.degree() {
            if df < 2 * i {
                if df > 0 {
                    out.push(df);
                }
                break;
            }
            h = h.pow_mod(self.p, &f);
            let g = f.gcd(&h.sub(&x));
            let dg = g.degree().unwrap_or(0);
            if dg > 0 {
                out.extend(std::iter::repeat_n(i, dg / i));
                f = f.div_rem(&g).0;
                h = h.rem(&f);
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    pub fn is_irreducible(&self) -> bool {
        match self.degree() {
            None | Some(0) => false,
            Some(1) => true,
            Some(d) => self.is_squarefree() && self.factor_degrees() == vec![d],
        }
    }
}

/// Lexicographically least monic polynomial of degree `f` irreducible mod `p`,
/// ordering by the coefficient tuple from `x^(f-1)` down to the constant term.
pub fn find_irreducible(p: u64, f: usize) -> Result<IntPoly> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if f == 0 {
        return Err(Error::InvalidRank(0));
    }
    // tuple[0] is the x^(f-1) coefficient, tuple[f-1] the constant term.
    let mut tuple = vec![0u64; f];
    loop {
        let mut c: Vec<u64> = tuple.iter().rev().copied().collect();
        c.push(1);
        if FpPoly::new(p, c.clone()).is_irreducible() {
            let tail: Vec<i64> = c[..f].iter().map(|&v| v as i64).collect();
            return Ok(IntPoly::monic_from_tail(&tail));
        }
        // odometer increment with the constant term as the fastest digit
        let mut idx = f;
        loop {
            if idx == 0 {
                unreachable!("irreducible polynomials of every degree exist over F_p");
            }
            idx -= 1;
            tuple[idx] += 1;
            if tuple[idx] < p {
                break;
            }
            tuple[idx] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_irreducible(p: u64, c: &[u64]) -> bool {
        // no factorization into two monic factors of positive degree
        let d = c.len() - 1;
        let target = FpPoly::new(p, c.to_vec());
        for da in 1..=d / 2 {
            let db = d - da;
            let count_a = p.pow(da as u32);
            let count_b = p.pow(db as u32);
            for ia in 0..count_a {
                let mut a: Vec<u64> = (0..da).map(|k| (ia / p.pow(k as u32)) % p).collect();
                a.push(1);
                for ib in 0..count_b {
                    let mut b: Vec<u64> = (0..db).map(|k| (ib / p.pow(k as u32)) % p).collect();
                    b.push(1);
                    if FpPoly::new(p, a.clone()).mul(&FpPoly::new(p, b)) == target {
                        return false;
                    }
                }
            }
        }
        true
    }

    #[test]
    fn irreducible_examples() {
        assert_eq!(find_irreducible(3, 1).unwrap().to_string(), "x");
        assert_eq!(find_irreducible(3, 2).unwrap().to_string(), "x^2+1");
        assert_eq!(find_irreducible(2, 3).unwrap().to_string(), "x^3+x+1");
        assert_eq!(find_irreducible(2, 2).unwrap().to_string(), "x^2+x+1");
    }

    #[test]
    fn irreducible_search_matches_exhaustive_order() {
        for p in [2u64, 3, 5] {
            for f in 1..=3usize {
                let got = find_irreducible(p, f).unwrap().reduce_mod(p);
                // walk the same order with the brute-force oracle
                let total = p.pow(f as u32);
                let mut expected = None;
                for idx in 0..total {
                    // idx encodes tuple with constant term as the fastest digit
                    let mut c = vec![0u64; f + 1];
                    for k in 0..f {
                        c[k] = (idx / p.pow(k as u32)) % p;
                    }
                    c[f] = 1;
                    if brute_irreducible(p, &c) {
                        expected = Some(c);
                        break;
                    }
                }
                assert_eq!(got.coeffs(), &expected.unwrap()[..], "p={p} f={f}");
            }
        }
    }

    #[test]
    fn factor_degrees_small() {
        // x^2+1 splits mod 5, is irreducible mod 3
        let f = IntPoly::from_i64(&[1, 0, 1]);
        assert_eq!(f.reduce_mod(5).factor_degrees(), vec![1, 1]);
        assert_eq!(f.reduce_mod(3).factor_degrees(), vec![2]);
        assert!(!f.reduce_mod(2).is_squarefree());
        // x^5 - x - 1 is irreducible mod 5 (Artin-Schreier)
        let g = IntPoly::from_i64(&[-1, -1, 0, 0, 0, 1]);
        assert_eq!(g.reduce_mod(5).factor_degrees(), vec![5]);
    }

    #[test]
    fn parse_and_display() {
        let f: IntPoly = "x^2 + x + 1".parse().unwrap();
        assert_eq!(f, IntPoly::from_i64(&[1, 1, 1]));
        let g: IntPoly = "x^3-2".parse().unwrap();
        assert_eq!(g.to_string(), "x^3-2");
        let h: IntPoly = "3*x^2 - 4x + 7".parse().unwrap();
        assert_eq!(h, IntPoly::from_i64(&[7, -4, 3]));
        assert_eq!(h.to_string(), "3*x^2-4*x+7");
        assert!("".parse::<IntPoly>().is_err());
        assert!("x^".parse::<IntPoly>().is_err());
        assert!("x++1".parse::<IntPoly>().is_err());
        assert!("2*".parse::<IntPoly>().is_err());
    }

    #[test]
    fn powers_of_x() {
        // x^2 = -x - 1 mod x^2+x+1 ; x^3 = 1
        let f = IntPoly::from_i64(&[1, 1, 1]);
        assert_eq!(
            f.power_of_x_mod(2),
            vec![BigInt::from(-1), BigInt::from(-1)]
        );
        assert_eq!(f.power_of_x_mod(3), vec![BigInt::from(1), BigInt::from(0)]);
    }
}
