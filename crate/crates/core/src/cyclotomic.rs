//! Exact arithmetic in Z[ζ_p] on the power basis 1, ζ, …, ζ^(p−2), and the
//! reductions Z[ζ_p] → Z/NZ, Z/N²Z attached to ζ_p ↦ ζ.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::modarith::{add_mod, mul_mod, pow_mod, sub_mod, ModCtx};

/// Default coefficient bound for [`solve_norm_equation`].
pub const DEFAULT_NORM_BOUND: i64 = 10;

/// An element Σ c_j ζ_p^j of Z[ζ_p], always in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    p: u64,
    coeffs: Vec<BigInt>,
}

impl CycInt {
    /// Accepts up to p coefficients; a coefficient of ζ^(p−1) is folded
    /// back through 1 + ζ + … + ζ^(p−1) = 0.
    pub fn new<T: Into<BigInt>>(p: u64, coeffs: impl IntoIterator<Item = T>) -> Self {
        let mut full = vec![BigInt::zero(); p as usize];
        for (j, c) in coeffs.into_iter().enumerate() {
            assert!(j < p as usize, "too many coefficients for p = {p}");
            full[j] = c.into();
        }
        Self::from_cyclic(p, full)
    }

    /// Reduce a length-p vector (exponents mod p) to canonical form.
    fn from_cyclic(p: u64, mut full: Vec<BigInt>) -> Self {
        let top = full.pop().expect("p >= 1");
        if !top.is_zero() {
            for c in full.iter_mut() {
                *c -= &top;
            }
        }
        Self { p, coeffs: full }
    }

    pub fn zero(p: u64) -> Self {
        Self { p, coeffs: vec![BigInt::zero(); p as usize - 1] }
    }

    pub fn integer(p: u64, m: impl Into<BigInt>) -> Self {
        let mut x = Self::zero(p);
        x.coeffs[0] = m.into();
        x
    }

    pub fn one(p: u64) -> Self {
        Self::integer(p, 1)
    }

    /// ζ_p^k.
    pub fn zeta_pow(p: u64, k: u64) -> Self {
        let mut full = vec![BigInt::zero(); p as usize];
        full[(k % p) as usize] = BigInt::one();
        Self::from_cyclic(p, full)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Some(m) when the element is the rational integer m.
    pub fn as_integer(&self) -> Option<&BigInt> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| &self.coeffs[0])
    }

    /// σ_a : ζ ↦ ζ^a.
    pub fn galois(&self, a: u64) -> Self {
        let p = self.p;
        assert!(a % p != 0, "σ_a needs a unit a mod p");
        let mut full = vec![BigInt::zero(); p as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            full[((a % p) * j as u64 % p) as usize] += c;
        }
        Self::from_cyclic(p, full)
    }

    /// Complex conjugation σ_{−1}.
    pub fn conj(&self) -> Self {
        self.galois(self.p - 1)
    }

    /// N_{Q(ζ_p)/Q}(x) = ∏_a σ_a(x).
    pub fn norm(&self) -> Result<BigInt> {
        let prod = (1..self.p).fold(Self::one(self.p), |acc, a| &acc * &self.galois(a));
        prod.as_integer()
            .cloned()
            .ok_or_else(|| Error::Internal(format!("norm of {self} is not rational")))
    }

    /// Divide every coefficient by `d`, if all are divisible.
    pub fn div_exact(&self, d: &BigInt) -> Option<Self> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(Self { p: self.p, coeffs: out })
    }

    /// Evaluate at ζ_p ↦ `root` modulo `m` (m < 2^63).
    pub fn eval_mod(&self, root: u64, m: u64) -> u64 {
        let mb = BigInt::from(m);
        let mut acc = 0u64;
        let mut pw = 1 % m;
        for c in &self.coeffs {
            let r = c.mod_floor(&mb).to_u64().expect("reduced below m");
            acc = add_mod(acc, mul_mod(r, pw, m), m);
            pw = mul_mod(pw, root, m);
        }
        acc
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.p, other.p, "elements of different cyclotomic rings");
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = (c.sign(), c.abs());
            if first {
                if sign == Sign::Minus {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if sign == Sign::Minus { "-" } else { "+" })?;
            }
            first = false;
            match j {
                0 => write!(f, "{mag}")?,
                _ if mag.is_one() => write!(f, "z^{j}")?,
                _ => write!(f, "{mag}*z^{j}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a CycInt> for &'a CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        self.check(rhs);
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        CycInt { p: self.p, coeffs }
    }
}

impl<'a> Sub<&'a CycInt> for &'a CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        self.check(rhs);
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        CycInt { p: self.p, coeffs }
    }
}

impl<'a> Mul<&'a CycInt> for &'a CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        self.check(rhs);
        let p = self.p as usize;
        let mut full = vec![BigInt::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    full[(i + j) % p] += a * b;
                }
            }
        }
        CycInt::from_cyclic(self.p, full)
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt { p: self.p, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Add for CycInt {
    type Output = CycInt;
    fn add(self, rhs: CycInt) -> CycInt {
        &self + &rhs
    }
}

impl Sub for CycInt {
    type Output = CycInt;
    fn sub(self, rhs: CycInt) -> CycInt {
        &self - &rhs
    }
}

impl Mul for CycInt {
    type Output = CycInt;
    fn mul(self, rhs: CycInt) -> CycInt {
        &self * &rhs
    }
}

impl Neg for CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        -&self
    }
}

/// The embedding of Z[ζ_p] into Z_N fixed by ζ_p ↦ Teichmüller lift of
/// `ctx.zeta`, truncated to Z/NZ and Z/N²Z. Its kernel mod N is the prime 𝔭.
#[derive(Debug, Clone)]
pub struct EmbeddingND {
    ctx: ModCtx,
    n2: BigUint,
    zeta2: BigUint,
}

impl EmbeddingND {
    pub fn new(ctx: &ModCtx) -> Self {
        let n = BigUint::from(ctx.n);
        let n2 = &n * &n;
        // x^N is the Teichmüller lift mod N² of any x ≡ ζ (mod N)
        let zeta2 = BigUint::from(ctx.zeta).modpow(&n, &n2);
        Self { ctx: ctx.clone(), n2, zeta2 }
    }

    pub fn ctx(&self) -> &ModCtx {
        &self.ctx
    }

    pub fn zeta2(&self) -> &BigUint {
        &self.zeta2
    }

    pub fn n_squared(&self) -> &BigUint {
        &self.n2
    }

    pub fn reduce_mod_n(&self, x: &CycInt) -> u64 {
        x.eval_mod(self.ctx.zeta, self.ctx.n)
    }

    pub fn reduce_mod_n2(&self, x: &CycInt) -> BigUint {
        let m = BigInt::from(self.n2.clone());
        let mut acc = BigUint::zero();
        let mut pw = BigUint::one();
        for c in x.coeffs() {
            let r = c.mod_floor(&m).to_biguint().expect("non-negative");
            acc = (acc + r * &pw) % &self.n2;
            pw = (pw * &self.zeta2) % &self.n2;
        }
        acc
    }
}

/// Search [−B, B]^(p−1) for u with N(u) = N and u(ζ) ≡ 0 (mod N).
///
/// Vectors are visited shell by shell (sup-norm 1, 2, …, B) and
/// lexicographically inside a shell, so the answer is reproducible. A hit
/// that vanishes at ζ^a instead of ζ is returned as σ_a of itself.
pub fn solve_norm_equation(ctx: &ModCtx, bound: i64) -> Result<CycInt> {
    if bound < 1 {
        return Err(Error::Range(format!("norm bound must be >= 1, got {bound}")));
    }
    let p = ctx.p;
    let n = ctx.n;
    let dim = (p - 1) as usize;
    // roots[a-1] = ζ^a, powers[a-1][j] = ζ^(a j)
    let roots: Vec<u64> = (1..p).map(|a| pow_mod(ctx.zeta, a, n)).collect();
    let powers: Vec<Vec<u64>> =
        roots.iter().map(|&r| (0..dim as u64).map(|j| pow_mod(r, j, n)).collect()).collect();
    let target = BigInt::from(n);

    for r in 1..=bound {
        let hit = (-r..=r).into_par_iter().find_map_first(|lead| {
            shell_slice(p, n, r, lead, &powers, &target)
        });
        if let Some((coeffs, a)) = hit {
            return Ok(CycInt::new(p, coeffs).galois(a));
        }
    }
    Err(Error::NotFound { n, bound })
}

/// First vector (lead, c_1, …, c_{p−2}) of the sup-norm-`r` shell, in lex
/// order, vanishing at some ζ^a and of norm N. Returns it with that a.
fn shell_slice(p: u64, n: u64, r: i64, lead: i64, powers: &[Vec<u64>], target: &BigInt) -> Option<(Vec<i64>, u64)> {
    let dim = (p - 1) as usize;
    let mut c = vec![-r; dim];
    c[0] = lead;
    // values[a] = Σ c_j ζ^(a j) mod N, maintained incrementally
    let mut values: Vec<u64> = powers
        .iter()
        .map(|pw| c.iter().zip(pw).fold(0, |acc, (&cj, &w)| add_mod(acc, mul_mod(cj.rem_euclid(n as i64) as u64, w, n), n)))
        .collect();
    // number of coordinates with |c_j| == r; the shell needs at least one
    let mut at_edge = c.iter().filter(|x| x.abs() == r).count();
    loop {
        if at_edge > 0 {
            if let Some(a) = values.iter().position(|&v| v == 0) {
                let cand = CycInt::new(p, c.iter().copied());
                if cand.norm().ok().as_ref() == Some(target) {
                    return Some((c, a as u64 + 1));
                }
            }
        }
        // odometer over coordinates 1..dim, last one fastest
        let mut j = dim - 1;
        loop {
            if j == 0 {
                return None;
            }
            let old = c[j];
            if old < r {
                c[j] = old + 1;
                for (val, pw) in values.iter_mut().zip(powers) {
                    *val = add_mod(*val, pw[j], n);
                }
                at_edge = at_edge + usize::from(c[j].abs() == r) - usize::from(old.abs() == r);
                break;
            }
            c[j] = -r;
            let back = (2 * r) as u64 % n;
            for (val, pw) in values.iter_mut().zip(powers) {
                *val = sub_mod(*val, mul_mod(back, pw[j], n), n);
            }
            // old == r and new == -r are both on the edge
            j -= 1;
        }
    }
}
