//! The JSON documents written by `--json` and read back by `verify`.
//! Every algebraic value is a string in the same grammar the commands accept,
//! so rationals always appear as `p/q`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Document {
    Qinv {
        algebra: Algebra,
        x: String,
        qinv: String,
        idempotent: String,
        cover: Value,
    },
    Gcd {
        algebra: Algebra,
        a: String,
        b: String,
        branches: Vec<GcdBranch>,
        cover: Value,
    },
    Sqfree {
        algebra: Algebra,
        f: String,
        branches: Vec<SqfreeBranch>,
        cover: Value,
    },
    Factor {
        algebra: Algebra,
        f: String,
        branches: Vec<FactorBranch>,
        cover: Value,
    },
    Puiseux {
        curve: String,
        order: usize,
        m: String,
        branches: Vec<PuiseuxBranch>,
        cover: Value,
    },
}

/// A tower both as displayed and as a `--tower` spec that parses back to it.
#[derive(Debug, Serialize, Deserialize)]
pub struct Algebra {
    pub display: String,
    pub spec: String,
}

/// Inputs restricted to the branch, then the certificate.
#[derive(Debug, Serialize, Deserialize)]
pub struct GcdBranch {
    pub path: Vec<usize>,
    pub algebra: Algebra,
    pub a: String,
    pub b: String,
    pub g: String,
    pub a1: String,
    pub b1: String,
    pub c: String,
    pub d: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SqfreeBranch {
    pub path: Vec<usize>,
    pub algebra: Algebra,
    pub f: String,
    pub h: String,
    pub g: String,
    pub q: String,
    pub r: String,
    pub s: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FactorBranch {
    pub path: Vec<usize>,
    pub algebra: Algebra,
    pub f: String,
    pub roots: Vec<Root>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Root {
    pub value: String,
    pub multiplicity: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PuiseuxBranch {
    pub path: Vec<usize>,
    pub algebra: Algebra,
    pub m: usize,
    /// `X` when `m = 1`, otherwise `T` with `X = T^m`.
    pub variable: String,
    pub series: Vec<String>,
    pub factors: Vec<String>,
}
