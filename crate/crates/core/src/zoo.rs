//! The zoo truth table: every family of the Cantor zoo against its closed-form verdicts.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fractal::{make_cantor, Family};
use crate::index::SobolevIndex;
use crate::nullity::{classify_cantor, Justification, Verdict};
use crate::numeric::parse_rational;

const GOLDEN: &str = include_str!("../data/zoo_golden.csv");

/// One row of the committed golden table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZooCase {
    pub family: String,
    pub d: String,
    pub n: u32,
    pub p_star: String,
    pub s: f64,
    pub p: f64,
    pub verdict: Verdict,
}

impl ZooCase {
    pub fn build_family(&self) -> Result<Family> {
        let d = parse_rational(&self.d)?;
        let p_star = || -> Result<BigRational> {
            if self.p_star.is_empty() {
                return Err(Error::Invalid(format!("family {} needs p_star", self.family)));
            }
            parse_rational(&self.p_star)
        };
        Ok(match self.family.as_str() {
            "e" => Family::E { d, p_star: p_star()? },
            "fp" => Family::FP { d, p_star: p_star()? },
            "f1" => Family::F1 { d },
            "f_inf" => Family::FInf { d },
            other => return Err(Error::Invalid(format!("unknown zoo family {other:?}"))),
        })
    }

    pub fn label(&self) -> String {
        self.build_family().map(|f| f.label()).unwrap_or_else(|_| self.family.clone())
    }
}

/// Outcome of classifying one golden row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZooResult {
    pub case: ZooCase,
    pub got: Verdict,
    pub justification: Justification,
}

impl ZooResult {
    pub fn matches(&self) -> bool {
        self.got == self.case.verdict
    }
}

pub fn golden_cases() -> Result<Vec<ZooCase>> {
    parse_cases(GOLDEN)
}

pub fn parse_cases(text: &str) -> Result<Vec<ZooCase>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::Invalid("empty zoo table".into()))?;
    if header.trim() != "family,d,n,p_star,s,p,verdict" {
        return Err(Error::Invalid(format!("unexpected zoo header {header:?}")));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let bad = |what: &str| Error::Invalid(format!("zoo row {}: bad {what}", i + 2));
            let f: Vec<&str> = line.trim().split(',').collect();
            if f.len() != 7 {
                return Err(bad("column count"));
            }
            let verdict = match f[6] {
                "Null" => Verdict::Null,
                "NotNull" => Verdict::NotNull,
                _ => return Err(bad("verdict")),
            };
            Ok(ZooCase {
                family: f[0].to_string(),
                d: f[1].to_string(),
                n: f[2].parse().map_err(|_| bad("n"))?,
                p_star: f[3].to_string(),
                s: f[4].parse().map_err(|_| bad("s"))?,
                p: f[5].parse().map_err(|_| bad("p"))?,
                verdict,
            })
        })
        .collect()
}

pub fn run_case(case: &ZooCase) -> Result<ZooResult> {
    let spec = make_cantor(case.build_family()?, case.n)?;
    let v = classify_cantor(&spec, &SobolevIndex::new(case.s, case.p)?);
    Ok(ZooResult {
        case: case.clone(),
        got: v.verdict(),
        justification: v.justification(),
    })
}

pub fn run_golden() -> Result<Vec<ZooResult>> {
    golden_cases()?.iter().map(run_case).collect()
}
