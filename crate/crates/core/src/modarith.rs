//! Word-size modular arithmetic, primality, primitive roots and the
//! discrete logarithm onto the p-primary quotient of (Z/NZ)^×.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};

/// Largest N for which [`DLog::new`] picks the full index table backend.
pub const TABLE_LIMIT: u64 = 1 << 20;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    add_mod(a % m, m - b % m, m)
}

/// `x^e mod m` by square-and-multiply. `m` must be at least 1; the result
/// is reduced (so `m = 1` always yields 0).
pub fn pow_mod(x: u64, mut e: u64, m: u64) -> u64 {
    let mut base = x % m;
    let mut acc = 1 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m` (any modulus, not only primes).
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Reduce a signed integer into `[0, m)`.
#[inline]
pub fn reduce_signed(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn miller_rabin_round(n: u64, d: u64, s: u32, a: u64) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic for every `u64`: the first twelve prime bases are a
/// proven witness set below 3.3 * 10^24.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &MR_BASES {
        if n % q == 0 {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    MR_BASES.iter().all(|&a| miller_rabin_round(n, d, s, a))
}

/// Primality for arbitrary-size integers. Exact below 2^64; above that it
/// runs Miller-Rabin with 24 fixed prime bases, so a composite passes with
/// probability at most 4^-24 (heuristically far less).
pub fn is_prime_big(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime(small);
    }
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut q = 2u64;
    let mut rounds = 0;
    while rounds < 24 {
        if is_prime(q) {
            rounds += 1;
            let mut x = BigUint::from(q).modpow(&d, n);
            if x != one && x != n_minus_1 {
                let mut witness = true;
                for _ in 1..s {
                    x = (&x * &x) % n;
                    if x == n_minus_1 {
                        witness = false;
                        break;
                    }
                }
                if witness {
                    return false;
                }
            }
        }
        q += 1;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        // Brent's cycle detection with batched gcds.
        let f = |x: u64| add_mod(mul_mod(x, x, n), c, n);
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let mut g = 1u64;
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..(128.min(r - k)) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

/// Prime factorization as sorted `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut primes = Vec::new();
    for q in 2..1000u64 {
        if q * q > n {
            break;
        }
        while n % q == 0 {
            primes.push(q);
            n /= q;
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            primes.push(m);
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for q in primes {
        match out.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => out.push((q, 1)),
        }
    }
    out
}

/// Exponent of `p` in `n` (n > 0).
pub fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

fn is_primitive_root(g: u64, n: u64, factors: &[(u64, u32)]) -> bool {
    g % n != 0 && factors.iter().all(|&(q, _)| pow_mod(g, (n - 1) / q, n) != 1)
}

/// Smallest primitive root of the prime `n` that is strictly greater than `after`.
pub fn next_primitive_root(n: u64, after: u64) -> u64 {
    let factors = factorize(n - 1);
    (after + 1..n)
        .find(|&g| is_primitive_root(g, n, &factors))
        .expect("a prime has primitive roots")
}

pub fn smallest_primitive_root(n: u64) -> u64 {
    next_primitive_root(n, 1)
}

/// The ambient pair (p, N) with N ≡ 1 (mod p), both prime, together with
/// the choices that pin down every normalization downstream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModCtx {
    pub p: u64,
    pub n: u64,
    /// Exact exponent of p in N − 1.
    pub nu: u32,
    /// p^nu.
    pub pnu: u64,
    /// Primitive root mod N; the smallest one unless chosen explicitly.
    pub g: u64,
    /// g^((N−1)/p^nu), a generator of the p^nu-torsion.
    pub h: u64,
    /// g^((N−1)/p), the image of ζ_p in F_N.
    pub zeta: u64,
}

impl ModCtx {
    pub fn new(p: u64, n: u64) -> Result<Self> {
        Self::validate(p, n)?;
        Self::build(p, n, smallest_primitive_root(n))
    }

    /// Same context but with a caller-chosen primitive root.
    pub fn with_generator(p: u64, n: u64, g: u64) -> Result<Self> {
        Self::validate(p, n)?;
        let factors = factorize(n - 1);
        if !is_primitive_root(g, n, &factors) {
            return Err(Error::Range(format!("{g} is not a primitive root mod {n}")));
        }
        Self::build(p, n, g)
    }

    fn validate(p: u64, n: u64) -> Result<()> {
        if p < 5 || n < 5 {
            return Err(Error::Range(format!("p and N must be >= 5 (p = {p}, N = {n})")));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if !is_prime(n) {
            return Err(Error::NotPrime(n));
        }
        if n % p != 1 {
            return Err(Error::CongruenceFailure { p, n });
        }
        // p-adic residues are carried at precision nu + 1 in a u64.
        if p.checked_mul(n - 1).is_none() {
            return Err(Error::Range(format!("p * (N - 1) overflows 64 bits (p = {p}, N = {n})")));
        }
        Ok(())
    }

    fn build(p: u64, n: u64, g: u64) -> Result<Self> {
        let nu = valuation(n - 1, p);
        let pnu = p.pow(nu);
        let h = pow_mod(g, (n - 1) / pnu, n);
        let zeta = pow_mod(g, (n - 1) / p, n);
        Ok(Self { p, n, nu, pnu, g, h, zeta })
    }

    /// (N − 1) / p^nu.
    pub fn cofactor(&self) -> u64 {
        (self.n - 1) / self.pnu
    }

    pub fn half(&self) -> u64 {
        (self.n - 1) / 2
    }
}

/// Baby-step giant-step in the cyclic group of order `order` generated by `gen`.
#[derive(Debug, Clone)]
struct Bsgs {
    n: u64,
    order: u64,
    step: u64,
    baby: HashMap<u64, u64>,
    giant: u64,
}

impl Bsgs {
    fn new(gen: u64, order: u64, n: u64) -> Self {
        let step = (order as f64).sqrt().ceil() as u64;
        let mut baby = HashMap::with_capacity(step as usize);
        let mut x = 1u64;
        for j in 0..step {
            baby.entry(x).or_insert(j);
            x = mul_mod(x, gen, n);
        }
        // gen^(-step)
        let giant = inv_mod(pow_mod(gen, step, n), n).expect("generator is a unit");
        Self { n, order, step, baby, giant }
    }

    fn solve(&self, y: u64) -> Option<u64> {
        let mut gamma = y;
        for i in 0..=self.step {
            if let Some(&j) = self.baby.get(&gamma) {
                let e = i * self.step + j;
                if e < self.order {
                    return Some(e);
                }
            }
            gamma = mul_mod(gamma, self.giant, self.n);
        }
        None
    }
}

#[derive(Debug, Clone)]
enum Backend {
    Table(Vec<u32>),
    PohligHellman,
}

/// The surjection log : (Z/NZ)^× → Z/p^nu Z normalized by log(g) = 1.
#[derive(Debug, Clone)]
pub struct DLog {
    ctx: ModCtx,
    digits: Bsgs,
    backend: Backend,
}

impl DLog {
    /// Full index table when N ≤ 2^20, Pohlig–Hellman otherwise.
    pub fn new(ctx: &ModCtx) -> Self {
        if ctx.n <= TABLE_LIMIT {
            Self::with_table(ctx)
        } else {
            Self::pohlig_hellman(ctx)
        }
    }

    pub fn pohlig_hellman(ctx: &ModCtx) -> Self {
        Self { ctx: ctx.clone(), digits: Bsgs::new(ctx.zeta, ctx.p, ctx.n), backend: Backend::PohligHellman }
    }

    /// Walks the powers of g once; O(N) time and memory.
    pub fn with_table(ctx: &ModCtx) -> Self {
        assert!(ctx.n <= u32::MAX as u64, "index table needs N < 2^32");
        let mut table = vec![0u32; ctx.n as usize];
        let mut x = 1u64;
        let mut e = 0u64;
        for _ in 0..ctx.n - 1 {
            table[x as usize] = e as u32;
            x = mul_mod(x, ctx.g, ctx.n);
            e += 1;
            if e == ctx.pnu {
                e = 0;
            }
        }
        Self { ctx: ctx.clone(), digits: Bsgs::new(ctx.zeta, ctx.p, ctx.n), backend: Backend::Table(table) }
    }

    pub fn ctx(&self) -> &ModCtx {
        &self.ctx
    }

    pub fn has_table(&self) -> bool {
        matches!(self.backend, Backend::Table(_))
    }

    pub fn log(&self, x: u64) -> Result<u64> {
        let n = self.ctx.n;
        let x = x % n;
        if x == 0 {
            return Err(Error::NotAUnit { x, modulus: n });
        }
        Ok(match &self.backend {
            Backend::Table(t) => t[x as usize] as u64,
            Backend::PohligHellman => self.log_ph(x),
        })
    }

    /// log of a signed integer representative.
    pub fn log_signed(&self, x: i128) -> Result<u64> {
        self.log(reduce_signed(x, self.ctx.n))
    }

    /// Pohlig–Hellman digits of ind_h(x^((N−1)/p^nu)) in base p.
    fn log_ph(&self, x: u64) -> u64 {
        let ModCtx { p, n, nu, h, .. } = self.ctx;
        let y = pow_mod(x, self.ctx.cofactor(), n);
        let h_inv = inv_mod(h, n).expect("h is a unit");
        let mut e = 0u64;
        let mut pk = 1u64;
        for k in 0..nu {
            // (y · h^-e)^(p^(nu-1-k)) = zeta^(digit k)
            let t = mul_mod(y, pow_mod(h_inv, e, n), n);
            let z = pow_mod(t, p.pow(nu - 1 - k), n);
            let d = self.digits.solve(z).expect("element lies in the p-torsion");
            e += d * pk;
            pk *= p;
        }
        e
    }

    /// log(k) for 0 ≤ k ≤ limit (entry 0 is a placeholder 0), limit < N.
    /// Uses the index table when present, otherwise a smallest-prime-factor
    /// sieve so that Pohlig–Hellman only runs on primes.
    pub fn logs_upto(&self, limit: u64) -> Vec<u32> {
        assert!(limit < self.ctx.n);
        let len = limit as usize + 1;
        if let Backend::Table(t) = &self.backend {
            return t[..len].to_vec();
        }
        let pnu = self.ctx.pnu;
        let mut spf = vec![0u32; len];
        let mut out = vec![0u32; len];
        for k in 2..len {
            if spf[k] == 0 {
                // k is prime
                let mut j = k;
                while j < len {
                    if spf[j] == 0 {
                        spf[j] = k as u32;
                    }
                    j += k;
                }
                out[k] = self.log_ph(k as u64) as u32;
            } else {
                let q = spf[k] as usize;
                out[k] = ((out[q] as u64 + out[k / q] as u64) % pnu) as u32;
            }
        }
        out
    }
}
