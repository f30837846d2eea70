//! Report structures with a stable serialization contract.
//!
//! JSON reports are emitted one object per line with the field order fixed
//! by the struct declarations below; the CSV flattening uses the header in
//! [`VerificationReport::CSV_HEADER`]. Both carry `schema` = 1.

use serde::Serialize;

use crate::char_sums::SumTable;
use crate::identity::{IdentityDescriptor, Params};

pub const SCHEMA_VERSION: u32 = 1;

/// Instance parameters as plain integers: characters by dual exponent.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ParamsRepr {
    pub chars: Vec<u32>,
    pub elems: Vec<u32>,
    pub variant: u32,
}

impl ParamsRepr {
    pub fn from_params(p: &Params) -> ParamsRepr {
        ParamsRepr {
            chars: p.chars.iter().map(|c| c.k()).collect(),
            elems: p.elems.clone(),
            variant: p.variant,
        }
    }

    /// Compact one-field flattening used inside CSV rows:
    /// `c1|7;e3;v0` for chars [1,7], elems [3], variant 0.
    pub fn flat(&self) -> String {
        let cs: Vec<String> = self.chars.iter().map(|k| k.to_string()).collect();
        let es: Vec<String> = self.elems.iter().map(|e| e.to_string()).collect();
        format!("c{};e{};v{}", cs.join("|"), es.join("|"), self.variant)
    }
}

/// Outcome of one instance check or one scan.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub id: String,
    pub q: u32,
    pub backend: String,
    pub strategy: String,
    pub params: Option<ParamsRepr>,
    pub branch: Option<String>,
    pub residual: String,
    pub pass: bool,
    pub checked: u64,
    pub passed: u64,
    pub skipped: u64,
    pub witnesses: Vec<ParamsRepr>,
}

impl VerificationReport {
    pub const CSV_HEADER: &'static str =
        "schema,id,q,backend,strategy,params,branch,residual,pass,checked,passed,skipped,witnesses";

    pub(crate) fn single(desc: &IdentityDescriptor, t: &SumTable, params: &Params) -> Self {
        VerificationReport {
            schema: SCHEMA_VERSION,
            id: desc.id.to_string(),
            q: t.q(),
            backend: t.backend().label(),
            strategy: "instance".to_string(),
            params: Some(ParamsRepr::from_params(params)),
            branch: None,
            residual: String::new(),
            pass: true,
            checked: 0,
            passed: 0,
            skipped: 0,
            witnesses: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization")
    }

    pub fn to_csv_row(&self) -> String {
        let witnesses: Vec<String> = self.witnesses.iter().map(|w| w.flat()).collect();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.schema,
            self.id,
            self.q,
            self.backend,
            self.strategy,
            self.params.as_ref().map(|p| p.flat()).unwrap_or_default(),
            self.branch.clone().unwrap_or_default(),
            self.residual,
            self.pass,
            self.checked,
            self.passed,
            self.skipped,
            witnesses.join(" ")
        )
    }
}

/// A special value rendered as data: both sides plus the branch taken.
#[derive(Debug, Clone, Serialize)]
pub struct TabulatedValue {
    pub id: String,
    pub q: u32,
    pub backend: String,
    pub params: ParamsRepr,
    pub admissible: bool,
    pub branch: Option<String>,
    pub lhs: String,
    pub rhs: String,
    pub residual: String,
    pub pass: bool,
}

impl TabulatedValue {
    pub const CSV_HEADER: &'static str =
        "id,q,backend,params,admissible,branch,lhs,rhs,residual,pass";

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.id,
            self.q,
            self.backend,
            self.params.flat(),
            self.admissible,
            self.branch.clone().unwrap_or_default(),
            csv_quote(&self.lhs),
            csv_quote(&self.rhs),
            self.residual,
            self.pass
        )
    }
}

/// Values may contain commas in no current format, but quote defensively
/// anyway if one ever does.
fn csv_quote(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
