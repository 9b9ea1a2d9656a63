//! Order-p characters of F_N with values in Z[ζ_p], Jacobi sums, the p-th
//! power of the Gauss sum, the Λ logarithm at the prime above N fixed by the
//! embedding, and the p-th power residue symbol.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::cyclotomic::{CycInt, EmbeddingND};
use crate::error::{Error, Result};
use crate::modarith::{mul_mod, pow_mod, DLog, ModCtx};
use crate::padic::PadicResidue;

/// χ'(x) = ζ_p^{k(x)} where ζ^{k(x)} ≡ x^{−(N−1)/p} (mod N), i.e.
/// k(x) = −log(x) mod p.
#[derive(Debug, Clone)]
pub struct OrderPChar {
    ctx: ModCtx,
    /// k[x] for 1 ≤ x < N; k[0] is unused.
    k: Vec<u32>,
}

impl OrderPChar {
    pub fn new(ctx: &ModCtx, d: &DLog) -> Self {
        let p = ctx.p;
        let k = d
            .logs_upto(ctx.n - 1)
            .into_iter()
            .map(|l| ((p - l as u64 % p) % p) as u32)
            .collect();
        Self { ctx: ctx.clone(), k }
    }

    pub fn ctx(&self) -> &ModCtx {
        &self.ctx
    }

    /// k(x); x must be a unit mod N.
    pub fn exponent(&self, x: u64) -> Result<u64> {
        let r = x % self.ctx.n;
        if r == 0 {
            return Err(Error::NotAUnit { x, modulus: self.ctx.n });
        }
        Ok(self.k[r as usize] as u64)
    }

    /// χ'^i(x) as an element of Z[ζ_p].
    pub fn value(&self, x: u64, i: u64) -> Result<CycInt> {
        let p = self.ctx.p;
        Ok(CycInt::zeta_pow(p, self.exponent(x)? * (i % p) % p))
    }
}

/// J(χ'^i, χ'^j) = Σ_{a ≠ 0, 1} χ'^i(a)·χ'^j(1 − a), in one pass over F_N.
pub fn jacobi_sum(chi: &OrderPChar, i: u64, j: u64) -> Result<CycInt> {
    let ModCtx { p, n, .. } = chi.ctx;
    let (i, j) = (i % p, j % p);
    if i == 0 || j == 0 || (i + j) % p == 0 {
        return Err(Error::DegenerateCharacters { i, j });
    }
    let mut counts = vec![0i64; p as usize];
    for a in 2..n {
        let e = (i * chi.k[a as usize] as u64 + j * chi.k[(n + 1 - a) as usize] as u64) % p;
        counts[e as usize] += 1;
    }
    Ok(CycInt::new(p, counts))
}

/// β = 𝒢^p = −N·∏_{j=1}^{p−2} J(χ', χ'^j), exactly.
pub fn gauss_p_power(chi: &OrderPChar) -> Result<CycInt> {
    let ModCtx { p, n, .. } = chi.ctx;
    let prod = jacobi_product(chi)?;
    Ok(prod * CycInt::integer(p, -BigInt::from(n)))
}

/// ∏_{j=1}^{p−2} J(χ', χ'^j); the Jacobi sums are formed in parallel.
pub fn jacobi_product(chi: &OrderPChar) -> Result<CycInt> {
    let p = chi.ctx.p;
    let js: Vec<CycInt> = (1..p - 1).into_par_iter().map(|j| jacobi_sum(chi, 1, j)).collect::<Result<_>>()?;
    Ok(js.iter().fold(CycInt::one(p), |acc, j| &acc * j))
}

/// Λ of an element, a residue mod p^ν.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LambdaValue {
    pub val: PadicResidue,
}

/// Λ(x) = log of the unit part of x in Q_N, for x of N-adic valuation 0 or 1.
pub fn lambda(e: &EmbeddingND, d: &DLog, x: &CycInt, valuation: u32) -> Result<LambdaValue> {
    let ctx = e.ctx();
    let unit = match valuation {
        0 => {
            let r = e.reduce_mod_n(x);
            if r == 0 {
                return Err(Error::ValuationMismatch { expected: 0 });
            }
            r
        }
        1 => {
            let big = e.reduce_mod_n2(x);
            let n = BigUint::from(ctx.n);
            let (q, rem) = big.div_rem(&n);
            let unit = (q % &n).to_u64().expect("below N");
            if !rem.is_zero() || unit == 0 {
                return Err(Error::ValuationMismatch { expected: 1 });
            }
            unit
        }
        v => return Err(Error::Range(format!("lambda handles valuation 0 or 1, got {v}"))),
    };
    let l = d.log(unit)?;
    Ok(LambdaValue { val: PadicResidue::new(l as i128, ctx.p, ctx.nu) })
}

/// Λ(β/N) together with the valuation path used to obtain it.
#[derive(Debug, Clone)]
pub struct KummerValue {
    pub lambda: LambdaValue,
    pub valuation: u32,
}

/// Λ(β/N), with β/N = −∏J. If the quotient still reduces to 0 mod N the
/// valuation-1 path is used instead.
pub fn kummer_value(chi: &OrderPChar, e: &EmbeddingND, d: &DLog) -> Result<KummerValue> {
    let quotient = -jacobi_product(chi)?;
    match lambda(e, d, &quotient, 0) {
        Ok(lambda) => Ok(KummerValue { lambda, valuation: 0 }),
        Err(Error::ValuationMismatch { .. }) => Ok(KummerValue { lambda: lambda(e, d, &quotient, 1)?, valuation: 1 }),
        Err(err) => Err(err),
    }
}

/// True when Λ(β/N) ≡ 0 (mod p), i.e. β/N is locally a p-th power.
pub fn kummer_check(ctx: &ModCtx, e: &EmbeddingND, d: &DLog) -> Result<bool> {
    let chi = OrderPChar::new(ctx, d);
    Ok(kummer_value(&chi, e, d)?.lambda.val.mod_p() == 0)
}

/// The k ∈ Z/pZ with ζ^k ≡ x^{(N−1)/p} (mod N), found by scanning ⟨ζ⟩.
pub fn power_residue(e: &EmbeddingND, x: u64) -> Result<u64> {
    let ModCtx { p, n, zeta, .. } = *e.ctx();
    if x % n == 0 {
        return Err(Error::NotAUnit { x, modulus: n });
    }
    let y = pow_mod(x % n, (n - 1) / p, n);
    let mut z = 1u64;
    for k in 0..p {
        if z == y {
            return Ok(k);
        }
        z = mul_mod(z, zeta, n);
    }
    Err(Error::Internal(format!("{x}^((N-1)/p) is not a power of zeta mod {n}")))
}
