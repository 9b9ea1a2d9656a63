//! Check reports and their JSON-lines / CSV encodings.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modarith::ModCtx;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CheckKind {
    #[serde(rename = "ce")]
    Ce,
    #[serde(rename = "ab")]
    Ab,
    #[serde(rename = "thmP")]
    ThmP,
    #[serde(rename = "gamma")]
    Gamma,
    #[serde(rename = "p5")]
    P5,
    #[serde(rename = "bounds")]
    Bounds,
    #[serde(rename = "powerlog")]
    PowerLog,
    #[serde(rename = "si")]
    Si,
    #[serde(rename = "kummer")]
    Kummer,
}

impl CheckKind {
    pub const ALL: [CheckKind; 9] = [
        CheckKind::Ce,
        CheckKind::Ab,
        CheckKind::ThmP,
        CheckKind::Gamma,
        CheckKind::P5,
        CheckKind::Bounds,
        CheckKind::PowerLog,
        CheckKind::Si,
        CheckKind::Kummer,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Ce => "ce",
            CheckKind::Ab => "ab",
            CheckKind::ThmP => "thmP",
            CheckKind::Gamma => "gamma",
            CheckKind::P5 => "p5",
            CheckKind::Bounds => "bounds",
            CheckKind::PowerLog => "powerlog",
            CheckKind::Si => "si",
            CheckKind::Kummer => "kummer",
        }
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CheckKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Range(format!("unknown check {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Skipped,
    /// The computation itself failed; only produced by scans, which record
    /// the error and move on.
    Error,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Skipped => "skipped",
            Verdict::Error => "error",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: CheckKind,
    pub p: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub nu: u32,
    pub g: u64,
    pub verdict: Verdict,
    pub lhs: Option<u64>,
    pub rhs: Option<u64>,
    pub aux: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ms: Option<u64>,
}

impl CheckReport {
    pub fn new(check: CheckKind, ctx: &ModCtx) -> Self {
        let mut aux = BTreeMap::new();
        aux.insert("normalization".into(), format!("g={}", ctx.g));
        Self { check, p: ctx.p, n: ctx.n, nu: ctx.nu, g: ctx.g, verdict: Verdict::Skipped, lhs: None, rhs: None, aux, ms: None }
    }

    /// A report for a context that could not be built at all.
    pub fn bare(check: CheckKind, p: u64, n: u64) -> Self {
        Self { check, p, n, nu: 0, g: 0, verdict: Verdict::Skipped, lhs: None, rhs: None, aux: BTreeMap::new(), ms: None }
    }

    pub fn set(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.aux.insert(key.to_string(), value.to_string());
        self
    }

    pub fn skipped(mut self, reason: impl ToString) -> Self {
        self.verdict = Verdict::Skipped;
        self.set("reason", reason);
        self
    }

    pub fn errored(mut self, err: &Error) -> Self {
        self.verdict = Verdict::Error;
        self.set("error", err);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports always serialize")
    }

    pub fn from_json(line: &str) -> Result<Self> {
        serde_json::from_str(line).map_err(|e| Error::Range(format!("bad report line: {e}")))
    }
}

/// Flat CSV row; aux travels as a JSON object in a single cell.
#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    check: CheckKind,
    p: u64,
    #[serde(rename = "N")]
    n: u64,
    nu: u32,
    g: u64,
    verdict: Verdict,
    lhs: Option<u64>,
    rhs: Option<u64>,
    aux: String,
    ms: Option<u64>,
}

impl From<&CheckReport> for CsvRow {
    fn from(r: &CheckReport) -> Self {
        CsvRow {
            check: r.check,
            p: r.p,
            n: r.n,
            nu: r.nu,
            g: r.g,
            verdict: r.verdict,
            lhs: r.lhs,
            rhs: r.rhs,
            aux: serde_json::to_string(&r.aux).expect("string map"),
            ms: r.ms,
        }
    }
}

pub struct CsvReportWriter<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> CsvReportWriter<W> {
    pub fn new(w: W) -> Self {
        Self { inner: csv::Writer::from_writer(w) }
    }

    pub fn write(&mut self, r: &CheckReport) -> std::io::Result<()> {
        self.inner.serialize(CsvRow::from(r)).map_err(std::io::Error::other)?;
        self.inner.flush()
    }
}

pub fn write_csv<W: Write>(reports: &[CheckReport], w: W) -> std::io::Result<()> {
    let mut out = CsvReportWriter::new(w);
    reports.iter().try_for_each(|r| out.write(r))
}

pub fn read_csv<R: Read>(r: R) -> Result<Vec<CheckReport>> {
    let bad = |e: &dyn fmt::Display| Error::Range(format!("bad csv report: {e}"));
    csv::Reader::from_reader(r)
        .deserialize::<CsvRow>()
        .map(|row| {
            let row = row.map_err(|e| bad(&e))?;
            let aux = serde_json::from_str(&row.aux).map_err(|e| bad(&e))?;
            Ok(CheckReport {
                check: row.check,
                p: row.p,
                n: row.n,
                nu: row.nu,
                g: row.g,
                verdict: row.verdict,
                lhs: row.lhs,
                rhs: row.rhs,
                aux,
                ms: row.ms,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<CheckReport> {
        let ctx = ModCtx::new(5, 11).unwrap();
        let mut a = CheckReport::new(CheckKind::Ce, &ctx);
        a.verdict = Verdict::Fails;
        a.lhs = Some(4);
        a.rhs = Some(0);
        a.set("half_sum", "4 mod 5").set("note", "comma, \"quote\"");
        let b = CheckReport::new(CheckKind::ThmP, &ctx).skipped("no u");
        let mut c = CheckReport::bare(CheckKind::Ab, 5, 13).errored(&Error::CongruenceFailure { p: 5, n: 13 });
        c.ms = Some(3);
        vec![a, b, c]
    }

    #[test]
    fn kind_names_round_trip() {
        for k in CheckKind::ALL {
            assert_eq!(k.name().parse::<CheckKind>().unwrap(), k);
            assert_eq!(serde_json::to_string(&k).unwrap(), format!("\"{}\"", k.name()));
        }
        assert_eq!("THMP".parse::<CheckKind>().unwrap(), CheckKind::ThmP);
        assert!("nope".parse::<CheckKind>().is_err());
    }

    #[test]
    fn json_shape() {
        let r = &sample()[0];
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["check"], "ce");
        assert_eq!(v["N"], 11);
        assert_eq!(v["verdict"], "fails");
        assert_eq!(v["aux"]["normalization"], "g=2");
        assert!(v.get("ms").is_none());
    }

    #[test]
    fn json_round_trip() {
        for r in sample() {
            assert_eq!(CheckReport::from_json(&r.to_json()).unwrap(), r);
        }
    }

    #[test]
    fn csv_round_trip() {
        let reports = sample();
        let mut buf = Vec::new();
        write_csv(&reports, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("check,p,N,nu,g,verdict,lhs,rhs,aux,ms\n"));
        assert_eq!(read_csv(&buf[..]).unwrap(), reports);
    }
}
