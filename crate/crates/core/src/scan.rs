//! Scans over the primes N ≡ 1 (mod p) in a range. Contexts are processed
//! in parallel, reports come out in ascending N and then in check order,
//! whatever the thread count.

use std::time::Instant;

use rayon::prelude::*;

use crate::criteria::{into_report, run_check, CheckOptions, Prepared};
use crate::error::{Error, Result};
use crate::modarith::{is_prime, ModCtx};
use crate::report::{CheckKind, CheckReport};

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub p: u64,
    pub n_lo: u64,
    pub n_hi: u64,
    pub checks: Vec<CheckKind>,
    pub jobs: usize,
    pub norm_bound: i64,
    pub options: CheckOptions,
    /// Record per-check wall time in `ms`; off by default because it breaks
    /// byte-identical output.
    pub timing: bool,
}

impl ScanConfig {
    pub fn new(p: u64, n_lo: u64, n_hi: u64, checks: Vec<CheckKind>) -> Self {
        Self {
            p,
            n_lo,
            n_hi,
            checks,
            jobs: 1,
            norm_bound: crate::cyclotomic::DEFAULT_NORM_BOUND,
            options: CheckOptions::default(),
            timing: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_lo > self.n_hi {
            return Err(Error::Range(format!("empty range {}..{}", self.n_lo, self.n_hi)));
        }
        if self.checks.is_empty() {
            return Err(Error::Range("no checks selected".into()));
        }
        if self.jobs == 0 {
            return Err(Error::Range("jobs must be at least 1".into()));
        }
        if self.p < 5 || !is_prime(self.p) {
            return Err(Error::NotPrime(self.p));
        }
        Ok(())
    }
}

/// Primes N ≡ 1 (mod p) with lo ≤ N ≤ hi.
pub fn primes_1_mod_p(p: u64, lo: u64, hi: u64) -> Vec<u64> {
    let first = lo.max(2).saturating_sub(1).div_ceil(p).max(1);
    (first..)
        .map_while(|m| m.checked_mul(p).and_then(|x| x.checked_add(1)).filter(|&n| n <= hi))
        .filter(|&n| is_prime(n))
        .collect()
}

/// All reports for one N, in the configured check order.
pub fn reports_for(cfg: &ScanConfig, n: u64) -> Vec<CheckReport> {
    let ctx = match ModCtx::new(cfg.p, n) {
        Ok(c) => c,
        Err(e) => return cfg.checks.iter().map(|&k| CheckReport::bare(k, cfg.p, n).errored(&e)).collect(),
    };
    let prep = Prepared::new(ctx, cfg.norm_bound);
    cfg.checks
        .iter()
        .map(|&k| {
            let start = Instant::now();
            let mut r = into_report(k, cfg.p, n, Some(&prep.ctx), run_check(&prep, k, cfg.options));
            if cfg.timing {
                r.ms = Some(start.elapsed().as_millis() as u64);
            }
            r
        })
        .collect()
}

/// Runs the scan, handing reports to `sink` in order as blocks finish.
pub fn scan_with(cfg: &ScanConfig, mut sink: impl FnMut(CheckReport)) -> Result<()> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    let ns = primes_1_mod_p(cfg.p, cfg.n_lo, cfg.n_hi);
    for block in ns.chunks(cfg.jobs * 8) {
        let out: Vec<Vec<CheckReport>> = pool.install(|| block.par_iter().map(|&n| reports_for(cfg, n)).collect());
        out.into_iter().flatten().for_each(&mut sink);
    }
    Ok(())
}

pub fn scan(cfg: &ScanConfig) -> Result<Vec<CheckReport>> {
    let mut all = Vec::new();
    scan_with(cfg, |r| all.push(r))?;
    Ok(all)
}
