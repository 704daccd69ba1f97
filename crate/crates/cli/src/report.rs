//! The JSON report and conversions from library results.

use std::collections::BTreeMap;

use mustab::curves::{is_centered_at_infinity, Branch};
use mustab::groups::GroupElement;
use mustab::stabilizer::{Agreement, Check, Decomposition, Degeneration, Reduction, SubgroupDesc, SubgroupReport};
use mustab::{Error, ErrorClass};
use serde::{Deserialize, Serialize};

use crate::job::{BudgetsJson, JobSpec, SeriesJson};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;
pub const EXIT_VERIFICATION: i32 = 5;

pub fn exit_code(class: ErrorClass) -> i32 {
    match class {
        ErrorClass::InvalidInput => EXIT_INVALID,
        ErrorClass::Unsupported => EXIT_UNSUPPORTED,
        ErrorClass::Budget => EXIT_BUDGET,
        ErrorClass::Verification => EXIT_VERIFICATION,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub job: JobSpec,
    /// Budgets in effect after command-line overrides.
    pub budgets: BudgetsJson,
    pub algorithm: String,
    pub strict: bool,
    pub exit_code: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorJson>,
    pub results: Results,
    /// Wall-clock time; the only field that varies between identical runs.
    pub timing_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorJson {
    pub kind: String,
    pub class: String,
    pub message: String,
}

impl ErrorJson {
    pub fn from_error(e: &Error) -> ErrorJson {
        ErrorJson { kind: e.kind().into(), class: format!("{:?}", e.class()), message: e.to_string() }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Results {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branches: Option<Vec<BranchJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trusted_irreducible: Option<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub stabilizers: Vec<StabJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReductionJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iwasawa: Option<IwasawaJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchJson {
    pub entries: Vec<SeriesJson>,
    pub ramification: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub centered_at_infinity: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closure: Option<Vec<String>>,
}

impl BranchJson {
    pub fn from_branch(b: &Branch) -> BranchJson {
        BranchJson {
            entries: b.entries().iter().map(SeriesJson::from_series).collect(),
            ramification: b.ramification,
            centered_at_infinity: is_centered_at_infinity(b).ok(),
            closure: b.closure.as_ref().map(|c| c.gen_strings()),
        }
    }
}

pub fn element_json(g: &GroupElement) -> Vec<SeriesJson> {
    g.entries().iter().map(SeriesJson::from_series).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub params: Vec<String>,
    pub constraints: Vec<String>,
    /// Row-major entries, plus the inverse determinant for GL.
    pub entries: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagsJson {
    pub verified_subgroup: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solvable: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupJson {
    pub group: String,
    pub ideal: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameterization: Option<FamilyJson>,
    pub dim: usize,
    pub flags: FlagsJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<String>,
}

impl SubgroupJson {
    pub fn from_desc(h: &SubgroupDesc) -> SubgroupJson {
        let parameterization = h.family.as_ref().map(|f| FamilyJson {
            params: f.ring.vars.clone(),
            constraints: f.constraints.gen_strings(),
            entries: f.coords.iter().map(|p| f.ring.fmt_poly(p)).collect(),
        });
        SubgroupJson {
            group: h.scheme.to_string(),
            ideal: h.ideal.gen_strings(),
            parameterization,
            dim: h.dim,
            flags: FlagsJson { verified_subgroup: h.flags.verified_subgroup, solvable: h.flags.solvable },
            classification: h.classify().ok().map(|c| c.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub identity: Vec<String>,
    pub cosets: Vec<Vec<String>>,
    pub component_dims: Vec<usize>,
    pub complete: bool,
    pub equidimensional: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl DecompositionJson {
    pub fn from_decomposition(d: &Decomposition) -> DecompositionJson {
        DecompositionJson {
            identity: d.identity.ideal.gen_strings(),
            cosets: d.cosets.iter().map(|c| c.gen_strings()).collect(),
            component_dims: d.component_dims.clone(),
            complete: d.complete,
            equidimensional: d.equidimensional,
            note: d.note.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegenerationJson {
    pub model_degree: u32,
    pub fiber: Vec<String>,
    pub decomposition: DecompositionJson,
    pub stabilizer: SubgroupJson,
}

impl DegenerationJson {
    pub fn from_degeneration(d: &Degeneration) -> DegenerationJson {
        DegenerationJson {
            model_degree: d.model.degree,
            fiber: d.fiber.gen_strings(),
            decomposition: DecompositionJson::from_decomposition(&d.decomposition),
            stabilizer: SubgroupJson::from_desc(&d.stabilizer),
        }
    }
}

/// One algorithm's output or its error.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome<T> {
    Ok(T),
    Error(ErrorJson),
}

impl<T> Outcome<T> {
    pub fn from_result<S>(r: &Result<S, Error>, f: impl Fn(&S) -> T) -> Outcome<T> {
        match r {
            Ok(v) => Outcome::Ok(f(v)),
            Err(e) => Outcome::Error(ErrorJson::from_error(e)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub reparam: SeriesJson,
    pub correction: Vec<SeriesJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionJson {
    pub branch: BranchJson,
    pub certificate: CertificateJson,
    pub dim_before: usize,
    pub dim_after: usize,
    pub changed: bool,
    pub reduction_certified_minimal: bool,
}

impl ReductionJson {
    pub fn from_reduction(r: &Reduction) -> ReductionJson {
        ReductionJson {
            branch: BranchJson::from_branch(&r.branch),
            certificate: CertificateJson {
                reparam: SeriesJson::from_series(&r.certificate.reparam),
                correction: element_json(&r.certificate.correction),
            },
            dim_before: r.dim_before,
            dim_after: r.dim_after,
            changed: r.changed,
            reduction_certified_minimal: r.certified_minimal,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgreementJson {
    pub equal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub separating: Option<String>,
}

impl AgreementJson {
    pub fn from_agreement(a: &Agreement) -> AgreementJson {
        AgreementJson { equal: a.equal, separating: a.separating.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckJson {
    pub status: String,
    pub detail: String,
}

impl CheckJson {
    pub fn from_check(c: &Check) -> CheckJson {
        CheckJson { status: c.label().into(), detail: c.detail().into() }
    }

    pub fn is_failure(&self, strict: bool) -> bool {
        self.status == "fail" || (strict && self.status == "inconclusive")
    }
}

/// Stabilizer of one branch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabJson {
    pub branch: BranchJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReductionJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stabilizer: Option<SubgroupJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reparam: Option<Outcome<SubgroupJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degeneration: Option<Outcome<DegenerationJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agreement: Option<AgreementJson>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub checks: BTreeMap<String, CheckJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IwasawaJson {
    pub u: Vec<SeriesJson>,
    pub b: Vec<SeriesJson>,
    pub product_matches: bool,
    pub u_integral: bool,
    pub b_upper_triangular: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationJson {
    pub subgroup: SubgroupJson,
    pub identity: bool,
    pub multiplication: bool,
    pub inverse: bool,
    pub failures: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solvable: Option<CheckJson>,
}

impl VerificationJson {
    pub fn new(h: &SubgroupDesc, r: &SubgroupReport, solvable: Option<CheckJson>) -> VerificationJson {
        VerificationJson {
            subgroup: SubgroupJson::from_desc(h),
            identity: r.identity,
            multiplication: r.multiplication,
            inverse: r.inverse,
            failures: r.failures.clone(),
            solvable,
        }
    }

    pub fn is_subgroup(&self) -> bool {
        self.identity && self.multiplication && self.inverse
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(s: &str) -> Result<Report, serde_json::Error> {
        serde_json::from_str(s)
    }
}
