//! Morita's N-adic Gamma function, evaluated modulo N.
//!
//! Γ_N(x) mod N only depends on x mod N, so every argument is reduced to an
//! integer m in [0, N) and Γ_N(m) = (−1)^m ∏_{1≤i<m, N∤i} i is used.

use crate::error::{Error, Result};
use crate::modarith::{inv_mod, mul_mod, ModCtx};

/// Γ_N(m) mod N for 0 ≤ m ≤ N without a table; O(m).
pub fn gamma_int_direct(n: u64, m: u64) -> Result<u64> {
    if m > n {
        return Err(Error::Range(format!("gamma_int needs 0 <= m <= N, got m = {m}")));
    }
    let prod = (1..m).filter(|i| i % n != 0).fold(1 % n, |acc, i| mul_mod(acc, i, n));
    Ok(if m % 2 == 1 { (n - prod) % n } else { prod })
}

#[derive(Debug, Clone)]
pub struct GammaCache {
    ctx: ModCtx,
    /// prefix[m] = Γ_N(m) mod N for 0 ≤ m ≤ N.
    prefix: Option<Vec<u64>>,
}

impl GammaCache {
    /// Builds the full table in one O(N) pass.
    pub fn new(ctx: &ModCtx) -> Self {
        let n = ctx.n;
        let mut prefix = Vec::with_capacity(n as usize + 1);
        let mut prod = 1u64;
        for m in 0..=n {
            let val = if m == 0 { 1 } else if m % 2 == 1 { (n - prod) % n } else { prod };
            prefix.push(val);
            if m >= 1 && m % n != 0 {
                prod = mul_mod(prod, m, n);
            }
        }
        Self { ctx: ctx.clone(), prefix: Some(prefix) }
    }

    pub fn without_table(ctx: &ModCtx) -> Self {
        Self { ctx: ctx.clone(), prefix: None }
    }

    pub fn gamma_int(&self, m: u64) -> Result<u64> {
        match &self.prefix {
            Some(t) if m <= self.ctx.n => Ok(t[m as usize]),
            _ => gamma_int_direct(self.ctx.n, m),
        }
    }

    /// Γ_N(x) mod N for any N-adic integer x ≡ `x` (mod N).
    pub fn gamma_residue(&self, x: u64) -> u64 {
        self.gamma_int(x % self.ctx.n).expect("reduced argument")
    }

    /// Γ_N(a/p) mod N, via a/p ≡ a·p^{-1} (mod N).
    pub fn gamma_rational(&self, a: u64) -> Result<u64> {
        let ModCtx { p, n, .. } = self.ctx;
        if a % p == 0 {
            return Err(Error::Range(format!("gamma_rational needs gcd(a, p) = 1, got a = {a}")));
        }
        let p_inv = inv_mod(p, n).expect("p is a unit mod N");
        Ok(self.gamma_residue(mul_mod(a % n, p_inv, n)))
    }
}
