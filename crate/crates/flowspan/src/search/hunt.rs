//! Exhaustive ratio hunts over [`super::enumerate_instances`].

use std::io::{Read, Write};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algorithms::{ld0_worst_makespan, li_makespan, worst_ld_makespan, DEFAULT_TIE_CAP};
use crate::caseanalysis::remaining_cases;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::oracle::{ratio_of, solve, OracleOptions, DEFAULT_BUDGET};
use crate::par::Parallelism;
use crate::rational::Rational;

use super::enumerate_instances;

pub const CSV_HEADER: [&str; 9] =
    ["instance-id", "m", "k", "p", "t_LD_worst", "t_opt", "ratio_num", "ratio_den", "status"];

/// Which makespan is compared against the optimum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Heuristic {
    /// Worst makespan over all LD tie resolutions.
    #[default]
    LdWorst,
    Li,
    /// Closed-form worst LD0 makespan.
    Ld0Worst,
}

impl Heuristic {
    fn makespan(self, inst: &Arc<Instance>) -> Result<Rational> {
        match self {
            Heuristic::LdWorst => worst_ld_makespan(inst, DEFAULT_TIE_CAP),
            Heuristic::Li => Ok(li_makespan(inst)),
            Heuristic::Ld0Worst => Ok(ld0_worst_makespan(inst)),
        }
    }
}

#[derive(Clone, Debug)]
pub struct HuntOptions {
    pub heuristic: Heuristic,
    /// Skip instances that are integer multiples of another.
    pub primitive_only: bool,
    /// Mark instances with ratio `≥ k/(k−1)`, which cannot be minimal
    /// counterexamples.
    pub filter_kk1: bool,
    pub budget: u64,
    pub parallelism: Parallelism,
}

impl Default for HuntOptions {
    fn default() -> Self {
        HuntOptions {
            heuristic: Heuristic::LdWorst,
            primitive_only: true,
            filter_kk1: false,
            budget: DEFAULT_BUDGET,
            parallelism: Parallelism::Sequential,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowStatus {
    #[serde(rename = "OK")]
    Ok,
    #[serde(rename = "VIOLATION")]
    Violation,
    #[serde(rename = "UNRESOLVED")]
    Unresolved,
    #[serde(rename = "NON-MINIMAL")]
    NonMinimal,
}

impl RowStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RowStatus::Ok => "OK",
            RowStatus::Violation => "VIOLATION",
            RowStatus::Unresolved => "UNRESOLVED",
            RowStatus::NonMinimal => "NON-MINIMAL",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        [RowStatus::Ok, RowStatus::Violation, RowStatus::Unresolved, RowStatus::NonMinimal]
            .into_iter()
            .find(|st| st.as_str() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HuntRow {
    pub id: usize,
    pub m: usize,
    pub k: usize,
    pub p: Vec<Rational>,
    pub heuristic: Option<Rational>,
    pub optimum: Option<Rational>,
    pub ratio: Option<Rational>,
    pub status: RowStatus,
    /// Why the row is unresolved.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HuntReport {
    pub m: usize,
    pub k: usize,
    pub lmax: u64,
    pub bound: Rational,
    pub heuristic: Heuristic,
    pub checked: usize,
    pub max_ratio: Option<Rational>,
    /// Instances attaining `max_ratio`, lexicographically ascending.
    pub argmax: Vec<Vec<Rational>>,
    pub violations: usize,
    pub unresolved: usize,
    pub non_minimal: usize,
    /// Set when a clean run would not settle the shape.
    pub disclaimer: Option<String>,
    pub rows: Vec<HuntRow>,
}

impl HuntReport {
    pub fn has_violation(&self) -> bool {
        self.violations > 0
    }

    /// One-line summary.
    pub fn summary(&self) -> String {
        let max = self.max_ratio.as_ref().map_or_else(|| "none".into(), ToString::to_string);
        let arg = self
            .argmax
            .first()
            .map(|p| p.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
            .unwrap_or_default();
        format!(
            "m={} k={} lmax={} checked={} max={} at [{}] bound={} violations={} unresolved={}",
            self.m, self.k, self.lmax, self.checked, max, arg, self.bound, self.violations, self.unresolved
        )
    }
}

pub fn hunt(m: usize, k: usize, lmax: u64, bound: &Rational, opts: &HuntOptions) -> Result<HuntReport> {
    if m == 0 || k == 0 {
        return Err(Error::InvalidInput("hunt needs m ≥ 1 and k ≥ 1".into()));
    }
    let instances: Vec<Instance> = enumerate_instances(m, k, lmax).primitive(opts.primitive_only).collect_all();
    let kk1 = (k >= 2).then(|| Rational::frac(k as i64, k as i64 - 1));
    let indexed: Vec<(usize, Instance)> = instances.into_iter().enumerate().collect();
    let rows = opts.parallelism.map(&indexed, |(id, inst)| evaluate(*id, inst, bound, kk1.as_ref(), opts));

    let mut max_ratio: Option<Rational> = None;
    for row in &rows {
        if let Some(r) = &row.ratio {
            if max_ratio.as_ref().is_none_or(|mx| r > mx) {
                max_ratio = Some(r.clone());
            }
        }
    }
    let mut argmax: Vec<Vec<Rational>> = match &max_ratio {
        Some(mx) => rows.iter().filter(|r| r.ratio.as_ref() == Some(mx)).map(|r| r.p.clone()).collect(),
        None => Vec::new(),
    };
    argmax.sort();
    let count = |st: RowStatus| rows.iter().filter(|r| r.status == st).count();
    let disclaimer = (m >= 4 && remaining_cases(m).is_ok_and(|ks| ks.contains(&k))).then(|| {
        format!(
            "evidence only: the bound for m ≥ 4 with k in {{4, 5}} is open; \
             this run covers integer instances with λ1 ≤ {lmax}"
        )
    });
    Ok(HuntReport {
        m,
        k,
        lmax,
        bound: bound.clone(),
        heuristic: opts.heuristic,
        checked: rows.len(),
        max_ratio,
        argmax,
        violations: count(RowStatus::Violation),
        unresolved: count(RowStatus::Unresolved),
        non_minimal: count(RowStatus::NonMinimal),
        disclaimer,
        rows,
    })
}

fn evaluate(id: usize, inst: &Instance, bound: &Rational, kk1: Option<&Rational>, opts: &HuntOptions) -> HuntRow {
    let arc = Arc::new(inst.clone());
    let mut row = HuntRow {
        id,
        m: inst.m(),
        k: inst.k(),
        p: inst.times().to_vec(),
        heuristic: None,
        optimum: None,
        ratio: None,
        status: RowStatus::Unresolved,
        note: None,
    };
    let heuristic = match opts.heuristic.makespan(&arc) {
        Ok(v) => v,
        Err(e) => {
            row.note = Some(e.to_string());
            return row;
        }
    };
    row.heuristic = Some(heuristic.clone());
    let oracle = OracleOptions { budget: opts.budget, ..OracleOptions::default() };
    let optimum = match solve(&arc, &oracle) {
        Ok(res) => res.makespan,
        Err(e) => {
            row.note = Some(e.to_string());
            return row;
        }
    };
    let ratio = ratio_of(&heuristic, &optimum);
    row.status = if &ratio > bound {
        RowStatus::Violation
    } else if opts.filter_kk1 && kk1.is_some_and(|t| &ratio >= t) {
        RowStatus::NonMinimal
    } else {
        RowStatus::Ok
    };
    row.optimum = Some(optimum);
    row.ratio = Some(ratio);
    row
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidInput(format!("csv: {e}"))
}

pub fn write_csv<W: Write>(rows: &[HuntRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    let opt = |v: &Option<Rational>| v.as_ref().map(ToString::to_string).unwrap_or_default();
    for r in rows {
        let (num, den) = match &r.ratio {
            Some(q) => (q.numer().to_string(), q.denom().to_string()),
            None => (String::new(), String::new()),
        };
        let p = r.p.iter().map(ToString::to_string).collect::<Vec<_>>().join(";");
        w.write_record([
            r.id.to_string(),
            r.m.to_string(),
            r.k.to_string(),
            p,
            opt(&r.heuristic),
            opt(&r.optimum),
            num,
            den,
            r.status.as_str().to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::InvalidInput(e.to_string()))?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<HuntRow>> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers().map_err(csv_err)?.clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(Error::InvalidInput("unexpected hunt report header".into()));
    }
    let parse_opt = |s: &str| -> Result<Option<Rational>> {
        if s.is_empty() {
            Ok(None)
        } else {
            Ok(Some(s.parse()?))
        }
    };
    let int = |s: &str| s.parse::<usize>().map_err(|e| Error::InvalidInput(e.to_string()));
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(csv_err)?;
        let ratio = match (parse_opt(&rec[6])?, parse_opt(&rec[7])?) {
            (Some(n), Some(d)) => Some(n.checked_div(&d)?),
            _ => None,
        };
        let p = rec[3].split(';').map(str::parse).collect::<std::result::Result<Vec<Rational>, _>>()?;
        rows.push(HuntRow {
            id: int(&rec[0])?,
            m: int(&rec[1])?,
            k: int(&rec[2])?,
            p,
            heuristic: parse_opt(&rec[4])?,
            optimum: parse_opt(&rec[5])?,
            ratio,
            status: RowStatus::parse(&rec[8]).ok_or_else(|| Error::InvalidInput(format!("status {}", &rec[8])))?,
            note: None,
        });
    }
    Ok(rows)
}
