//! Finite-resolution evidence records. A certificate is a list of exact
//! comparisons `lhs REL rhs`; its pass flag is the conjunction of the asserted
//! ones and can always be recomputed from the stored values.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exact::{serde_q, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "==")]
    Eq,
    #[serde(rename = "!=")]
    Ne,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
}

impl Relation {
    pub fn eval(self, lhs: &Q, rhs: &Q) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Lt => lhs < rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ne => lhs != rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Gt => lhs > rhs,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Lt => "<",
            Relation::Eq => "==",
            Relation::Ne => "!=",
            Relation::Ge => ">=",
            Relation::Gt => ">",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub label: String,
    #[serde(with = "serde_q")]
    pub lhs: Q,
    pub relation: Relation,
    #[serde(with = "serde_q")]
    pub rhs: Q,
    /// Informational checks are reported but do not affect the pass flag.
    pub asserted: bool,
    pub holds: bool,
}

impl Check {
    pub fn recompute(&self) -> bool {
        self.relation.eval(&self.lhs, &self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped { reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub status: Status,
}

impl Certificate {
    pub fn new(name: impl Into<String>) -> Self {
        Certificate {
            name: name.into(),
            params: BTreeMap::new(),
            checks: Vec::new(),
            notes: Vec::new(),
            status: Status::Pass,
        }
    }

    pub fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Self {
        let mut c = Certificate::new(name);
        c.status = Status::Skipped {
            reason: reason.into(),
        };
        c
    }

    pub fn param(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn set_param(&mut self, key: &str, value: impl fmt::Display) {
        self.params.insert(key.to_string(), value.to_string());
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    fn push(&mut self, label: String, lhs: Q, relation: Relation, rhs: Q, asserted: bool) -> bool {
        let holds = relation.eval(&lhs, &rhs);
        self.checks.push(Check {
            label,
            lhs,
            relation,
            rhs,
            asserted,
            holds,
        });
        if asserted && !holds && !matches!(self.status, Status::Skipped { .. }) {
            self.status = Status::Fail;
        }
        holds
    }

    /// Adds an asserted comparison; returns whether it holds.
    pub fn assert(&mut self, label: impl Into<String>, lhs: Q, relation: Relation, rhs: Q) -> bool {
        self.push(label.into(), lhs, relation, rhs, true)
    }

    /// Adds a boolean assertion encoded as `value == 1`.
    pub fn assert_true(&mut self, label: impl Into<String>, value: bool) -> bool {
        self.assert(label, Q::from_integer((value as i64).into()), Relation::Eq, Q::from_integer(1.into()))
    }

    /// Records a comparison without letting it affect the pass flag.
    pub fn inform(&mut self, label: impl Into<String>, lhs: Q, relation: Relation, rhs: Q) -> bool {
        self.push(label.into(), lhs, relation, rhs, false)
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn is_skipped(&self) -> bool {
        matches!(self.status, Status::Skipped { .. })
    }

    /// Recomputes every stored flag from the stored exact values and checks the
    /// status agrees with them.
    pub fn verify_consistency(&self) -> bool {
        let flags_ok = self.checks.iter().all(|c| c.holds == c.recompute());
        let expected = self.checks.iter().filter(|c| c.asserted).all(Check::recompute);
        flags_ok
            && match self.status {
                Status::Pass => expected,
                Status::Fail => !expected,
                Status::Skipped { .. } => true,
            }
    }

    pub fn find(&self, label: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.label == label)
    }

    pub fn summary_line(&self) -> String {
        let state = match &self.status {
            Status::Pass => "PASS".to_string(),
            Status::Fail => "FAIL".to_string(),
            Status::Skipped { reason } => format!("SKIP ({reason})"),
        };
        let asserted = self.checks.iter().filter(|c| c.asserted).count();
        format!("{state} {} [{} checks]", self.name, asserted)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} {} {} -> {}",
            self.label,
            crate::exact::fmt_q(&self.lhs),
            self.relation.symbol(),
            crate::exact::fmt_q(&self.rhs),
            self.holds
        )
    }
}
