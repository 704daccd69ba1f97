//! Job descriptions and their translation into library inputs.

use mustab::algebra::{FieldSpec, Ideal, Ring, Scalar};
use mustab::curves::{validate_branch, Branch, PlaneCurveInput};
use mustab::groups::GroupScheme;
use mustab::series::{Exponent, PuiseuxSeries, HARD_CAP};
use mustab::stabilizer::{Algorithm, Budgets};
use mustab::{Error, Result};
use serde::{Deserialize, Serialize};

pub const MAX_DEGREE_BOUND: u32 = 16;
pub const MAX_ORDER_BUDGET: usize = 64;
pub const MAX_SAMPLE_BUDGET: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub field: FieldJson,
    pub group: GroupJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<InputJson>,
    pub command: Command,
    #[serde(default)]
    pub budgets: BudgetsJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algorithm: Option<String>,
    /// Ideal generators for `verify`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgroup: Option<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Places,
    Stab,
    Reduce,
    Iwasawa,
    Verify,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FieldJson {
    Q,
    QSqrt { d: i64 },
    Fp { p: u64 },
    /// `F_{p^n}` with a modulus chosen by the library.
    Fq { p: u64, n: usize },
}

impl FieldJson {
    pub fn to_field(&self) -> Result<FieldSpec> {
        match *self {
            FieldJson::Q => Ok(FieldSpec::Q),
            FieldJson::QSqrt { d } => FieldSpec::qsqrt(d),
            FieldJson::Fp { p } => FieldSpec::fp(p),
            FieldJson::Fq { p, n } => FieldSpec::fq_degree(p, n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum GroupJson {
    SL { n: usize },
    GL { n: usize },
    Additive { n: usize },
    Subgroup { parent: Box<GroupJson>, ideal: Vec<String> },
}

impl GroupJson {
    pub fn to_scheme(&self, field: &FieldSpec) -> Result<GroupScheme> {
        let check = |n: usize| if n == 0 { Err(Error::InvalidInput("group size must be positive".into())) } else { Ok(n) };
        match self {
            GroupJson::SL { n } => Ok(GroupScheme::SL(check(*n)?)),
            GroupJson::GL { n } => Ok(GroupScheme::GL(check(*n)?)),
            GroupJson::Additive { n } => Ok(GroupScheme::Additive(check(*n)?)),
            GroupJson::Subgroup { parent, ideal } => {
                let parent = parent.to_scheme(field)?;
                let gens: Vec<&str> = ideal.iter().map(String::as_str).collect();
                let ideal = Ideal::parse(&parent.coord_ring(field), &gens)?;
                GroupScheme::subgroup(parent, ideal)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InputJson {
    Branch { entries: Vec<SeriesJson> },
    PlaneCurve {
        f: String,
        embedding: Vec<String>,
        #[serde(default)]
        extend_field: bool,
    },
}

/// A number or a string in the literal grammars.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Lit {
    Int(i64),
    Str(String),
}

impl Lit {
    fn text(&self) -> String {
        match self {
            Lit::Int(n) => n.to_string(),
            Lit::Str(s) => s.clone(),
        }
    }
}

/// `[exponent, coefficient]` pairs and an optional precision; without
/// one the job precision applies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesJson {
    pub terms: Vec<(Lit, Lit)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prec: Option<Lit>,
}

impl SeriesJson {
    pub fn from_series(s: &PuiseuxSeries) -> SeriesJson {
        SeriesJson {
            terms: s.terms().iter().map(|(e, c)| (Lit::Str(e.to_string()), Lit::Str(c.to_string()))).collect(),
            prec: Some(Lit::Str(s.prec().to_string())),
        }
    }

    pub fn to_series(&self, field: &FieldSpec, default_prec: i64) -> Result<PuiseuxSeries> {
        let ring = Ring::new(field.clone(), Vec::<String>::new());
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| Ok((Exponent::parse(&e.text())?, parse_scalar(&ring, &c.text())?)))
            .collect::<Result<Vec<_>>>()?;
        let prec = match &self.prec {
            Some(p) => Exponent::parse(&p.text())?,
            None => Exponent::int(default_prec),
        };
        Ok(PuiseuxSeries::new(field.clone(), terms, prec))
    }
}

/// Field elements; `[c0,c1,..]` lists coordinates in `F_{p^n}`.
pub fn parse_scalar(ring: &Ring, s: &str) -> Result<Scalar> {
    let t = s.trim();
    if let Some(inner) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        let coeffs = inner
            .split(',')
            .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad coordinate {x:?} in {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        return Scalar::fq_from_coeffs(&ring.field, &coeffs);
    }
    ring.parse_scalar(t)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetsJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_bound: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order_budget: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_budget: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl BudgetsJson {
    /// Later values win.
    pub fn overlay(self, over: BudgetsJson) -> BudgetsJson {
        BudgetsJson {
            precision: over.precision.or(self.precision),
            degree_bound: over.degree_bound.or(self.degree_bound),
            order_budget: over.order_budget.or(self.order_budget),
            sample_budget: over.sample_budget.or(self.sample_budget),
            seed: over.seed.or(self.seed),
        }
    }

    pub fn resolve(&self) -> Result<Budgets> {
        let d = Budgets::default();
        let b = Budgets {
            precision: self.precision.unwrap_or(d.precision),
            degree_bound: self.degree_bound.unwrap_or(d.degree_bound),
            order_budget: self.order_budget.unwrap_or(d.order_budget),
            sample_budget: self.sample_budget.unwrap_or(d.sample_budget),
            seed: self.seed.unwrap_or(d.seed),
        };
        let bad = |what: &str, v: String, max: String| Err(Error::InvalidInput(format!("{what} = {v} outside 1..={max}")));
        if !(1..=HARD_CAP).contains(&b.precision) {
            return bad("precision", b.precision.to_string(), HARD_CAP.to_string());
        }
        if !(1..=MAX_DEGREE_BOUND).contains(&b.degree_bound) {
            return bad("degree_bound", b.degree_bound.to_string(), MAX_DEGREE_BOUND.to_string());
        }
        if !(1..=MAX_ORDER_BUDGET).contains(&b.order_budget) {
            return bad("order_budget", b.order_budget.to_string(), MAX_ORDER_BUDGET.to_string());
        }
        if !(1..=MAX_SAMPLE_BUDGET).contains(&b.sample_budget) {
            return bad("sample_budget", b.sample_budget.to_string(), MAX_SAMPLE_BUDGET.to_string());
        }
        Ok(b)
    }

    pub fn from_budgets(b: &Budgets) -> BudgetsJson {
        BudgetsJson {
            precision: Some(b.precision),
            degree_bound: Some(b.degree_bound),
            order_budget: Some(b.order_budget),
            sample_budget: Some(b.sample_budget),
            seed: Some(b.seed),
        }
    }
}

/// The job's inputs in library form.
pub struct Resolved {
    pub field: FieldSpec,
    pub scheme: GroupScheme,
    pub budgets: Budgets,
    pub algorithm: Algorithm,
}

impl JobSpec {
    pub fn from_json(s: &str) -> Result<JobSpec> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("job: {e}")))
    }

    pub fn resolve(&self, over: &BudgetsJson, algorithm: Option<Algorithm>) -> Result<Resolved> {
        let field = self.field.to_field()?;
        let scheme = self.group.to_scheme(&field)?;
        let budgets = self.budgets.overlay(*over).resolve()?;
        let algorithm = match (algorithm, &self.algorithm) {
            (Some(a), _) => a,
            (None, Some(s)) => Algorithm::parse(s)?,
            (None, None) => Algorithm::Both,
        };
        Ok(Resolved { field, scheme, budgets, algorithm })
    }

    pub fn branch_input(&self, r: &Resolved) -> Result<Branch> {
        match &self.input {
            Some(InputJson::Branch { entries }) => {
                let es = entries.iter().map(|e| e.to_series(&r.field, r.budgets.precision)).collect::<Result<Vec<_>>>()?;
                validate_branch(r.scheme.clone(), r.field.clone(), es)
            }
            Some(InputJson::PlaneCurve { .. }) => Err(Error::InvalidInput(format!("{:?} needs a branch input", self.command))),
            None => Err(Error::InvalidInput(format!("{:?} needs an input", self.command))),
        }
    }

    pub fn curve_input(&self, r: &Resolved) -> Result<PlaneCurveInput> {
        match &self.input {
            Some(InputJson::PlaneCurve { f, embedding, extend_field }) => {
                let emb: Vec<&str> = embedding.iter().map(String::as_str).collect();
                let mut input = PlaneCurveInput::parse(&r.field, f, r.scheme.clone(), &emb)?;
                input.extend_field = *extend_field;
                Ok(input)
            }
            _ => Err(Error::InvalidInput(format!("{:?} needs a plane_curve input", self.command))),
        }
    }
}
