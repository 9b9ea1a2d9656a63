//! Truncated p-adic integers Z/p^k Z, the Teichmüller character and
//! Bernoulli numbers modulo p.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::modarith::{add_mod, inv_mod, mul_mod, pow_mod, sub_mod};

/// An element of Z/p^prec Z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PadicResidue {
    value: u64,
    p: u64,
    prec: u32,
}

impl PadicResidue {
    pub fn new(value: i128, p: u64, prec: u32) -> Self {
        let m = p.pow(prec);
        Self { value: value.rem_euclid(m as i128) as u64, p, prec }
    }

    pub fn zero(p: u64, prec: u32) -> Self {
        Self { value: 0, p, prec }
    }

    pub fn one(p: u64, prec: u32) -> Self {
        Self::new(1, p, prec)
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.prec)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// Canonical map Z/p^k → Z/p^j for j ≤ k.
    pub fn reduce_to(&self, prec: u32) -> Self {
        assert!(prec <= self.prec, "cannot raise precision by reduction");
        Self::new(self.value as i128, self.p, prec)
    }

    /// Residue mod p.
    pub fn mod_p(&self) -> u64 {
        self.value % self.p
    }

    pub fn is_unit(&self) -> bool {
        self.value % self.p != 0
    }

    pub fn inverse(&self) -> Option<Self> {
        inv_mod(self.value, self.modulus()).map(|v| Self { value: v, ..*self })
    }

    /// Exact division by p, failing unless the value is divisible by p.
    /// The result drops one digit of precision.
    pub fn div_p(&self) -> Option<Self> {
        if self.prec == 0 || self.value % self.p != 0 {
            return None;
        }
        Some(Self { value: self.value / self.p, p: self.p, prec: self.prec - 1 })
    }

    pub fn scale(&self, k: i128) -> Self {
        *self * Self::new(k, self.p, self.prec)
    }

    pub fn pow(&self, e: u64) -> Self {
        Self { value: pow_mod(self.value, e, self.modulus()), ..*self }
    }

    fn check(&self, other: &Self) {
        assert!(
            self.p == other.p && self.prec == other.prec,
            "mixed p-adic precisions: {}^{} vs {}^{}",
            self.p,
            self.prec,
            other.p,
            other.prec
        );
    }
}

impl fmt::Display for PadicResidue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus())
    }
}

impl Add for PadicResidue {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.check(&rhs);
        Self { value: add_mod(self.value, rhs.value, self.modulus()), ..self }
    }
}

impl Sub for PadicResidue {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.check(&rhs);
        Self { value: sub_mod(self.value, rhs.value, self.modulus()), ..self }
    }
}

impl Mul for PadicResidue {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.check(&rhs);
        Self { value: mul_mod(self.value, rhs.value, self.modulus()), ..self }
    }
}

impl Neg for PadicResidue {
    type Output = Self;
    fn neg(self) -> Self {
        Self { value: sub_mod(0, self.value, self.modulus()), ..self }
    }
}

/// Teichmüller representative ω(a) = a^(p^(k−1)) mod p^k.
pub fn teichmuller(a: u64, p: u64, prec: u32) -> Result<PadicResidue> {
    if a % p == 0 {
        return Err(Error::NotAUnit { x: a, modulus: p });
    }
    let m = p.pow(prec);
    let v = pow_mod(a % p, p.pow(prec.saturating_sub(1)), m);
    Ok(PadicResidue { value: v, p, prec })
}

/// The character χ = ω^i of (Z/pZ)^×, extended by zero on multiples of p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CharOmegaPower {
    p: u64,
    /// Exponent in [0, p − 1).
    i: u64,
}

impl CharOmegaPower {
    pub fn new(i: i64, p: u64) -> Self {
        Self { p, i: i.rem_euclid(p as i64 - 1) as u64 }
    }

    /// ω^(-1), the character of the classical half-sum.
    pub fn omega_inverse(p: u64) -> Self {
        Self::new(-1, p)
    }

    pub fn exponent(&self) -> u64 {
        self.i
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn inverse(&self) -> Self {
        Self::new(-(self.i as i64), self.p)
    }

    pub fn is_trivial(&self) -> bool {
        self.i == 0
    }

    pub fn is_omega(&self) -> bool {
        self.i == 1
    }

    pub fn is_odd(&self) -> bool {
        self.i % 2 == 1
    }

    /// χ(−1) = (−1)^i.
    pub fn parity_sign(&self) -> i128 {
        if self.is_odd() {
            -1
        } else {
            1
        }
    }

    pub fn eval(&self, a: u64, prec: u32) -> PadicResidue {
        if a % self.p == 0 {
            return PadicResidue::zero(self.p, prec);
        }
        teichmuller(a, self.p, prec).expect("unit").pow(self.i)
    }

    /// Values on 0..p at the given precision, indexed by residue.
    pub fn table(&self, prec: u32) -> Vec<u64> {
        (0..self.p).map(|a| self.eval(a, prec).value()).collect()
    }

    pub(crate) fn require_admissible(&self) -> Result<()> {
        if self.is_trivial() || self.is_omega() {
            return Err(Error::ExcludedCharacter { i: self.i, p: self.p });
        }
        Ok(())
    }
}

impl fmt::Display for CharOmegaPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "omega^{}", self.i)
    }
}

/// B_0, …, B_upto mod p by the recurrence Σ_{j≤n} C(n+1, j) B_j = 0.
/// Requires upto ≤ p − 2 so every B_j involved is p-integral.
pub(crate) fn bernoulli_table_mod_p(upto: u64, p: u64) -> Vec<u64> {
    assert!(upto + 2 <= p);
    let n = upto as usize;
    // binomials mod p
    let mut binom = vec![vec![0u64; n + 2]; n + 2];
    for r in 0..n + 2 {
        binom[r][0] = 1;
        for c in 1..=r {
            binom[r][c] = (binom[r - 1][c - 1] + binom[r - 1][c]) % p;
        }
    }
    let mut b = vec![0u64; n + 1];
    b[0] = 1;
    for m in 1..=n {
        let s = (0..m).fold(0, |acc, j| add_mod(acc, mul_mod(binom[m + 1][j], b[j], p), p));
        let inv = inv_mod((m as u64 + 1) % p, p).expect("m + 1 < p");
        b[m] = mul_mod(sub_mod(0, s, p), inv, p);
    }
    b
}

/// B_n mod p for even 2 ≤ n ≤ p − 3.
pub fn bernoulli_mod_p(n: u64, p: u64) -> Result<u64> {
    if n % 2 == 1 || n < 2 || n + 3 > p {
        return Err(Error::Range(format!("bernoulli_mod_p needs even 2 <= n <= p - 3, got n = {n}, p = {p}")));
    }
    Ok(bernoulli_table_mod_p(n, p)[n as usize])
}

/// True when p divides none of B_2, B_4, …, B_{p−3}.
pub fn is_regular(p: u64) -> bool {
    if p < 5 {
        return true;
    }
    let b = bernoulli_table_mod_p(p - 3, p);
    (2..=p - 3).step_by(2).all(|n| b[n as usize] != 0)
}

/// B_{1,χ^{-1}} = (1/p) Σ_{a=1}^{p−1} a·χ^{-1}(a), returned at precision `prec`.
/// The sum is formed at precision `prec + 1` and divided by p exactly.
pub fn b1_chi_inverse(chi: CharOmegaPower, prec: u32) -> Result<PadicResidue> {
    chi.require_admissible()?;
    let p = chi.p();
    let inv = chi.inverse();
    let sum = (1..p).fold(PadicResidue::zero(p, prec + 1), |acc, a| acc + inv.eval(a, prec + 1).scale(a as i128));
    sum.div_p()
        .ok_or_else(|| Error::Internal(format!("sum a*{inv}(a) = {sum} is not divisible by p")))
}
