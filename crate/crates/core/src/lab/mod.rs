//! Example families and executable checks for the stability results on
//! minimal-distance pairs.

pub mod checks;
pub mod examples;
pub mod hull_lemmas;
mod polygon;
pub mod separation;
pub mod theorems;

pub use checks::{
    fact2_check, fact2_check_with, fact2_suite, lemma_gamma17_suite, lemma_recession_check, lemma_recession_suite,
    perturbation_family, recession_instance, DistanceFamily,
};
pub use examples::{example_cone_hyperplane, example_hulls, example_nonconvex, example_two_cones, ShiftSign, TANGENT_CUTS};
pub use hull_lemmas::{lemma_ball_spread, lemma_block_intersection, lemma_cone_caps, lemma_hull_inclusion_suite};
pub use separation::{directional_bound, separation_margin, Separation};
pub use theorems::{
    prop_bounded_intersection_family, prop_bounded_suite, thm_stability_suite, thm_lur_family, thm_stability_family, track_pairs, two_cone_heights, LurBody, LurCase,
    TrackRun, LUR_TOL, STABILITY_TOL,
};

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::metrics::format_real;
use crate::sets::json::{parse_real, parse_vector};
use crate::sets::{piecewise_from_value, piecewise_to_json, real_to_json, set_from_value, set_to_json, vector_to_json};
use crate::sets::{PiecewiseSet, SetDescription};
use crate::vector::DenseVector;

/// A convex set or a finite union of convex pieces.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilySet {
    Convex(SetDescription),
    Pieces(PiecewiseSet),
}

impl FamilySet {
    pub fn dim(&self) -> usize {
        match self {
            FamilySet::Convex(s) => s.dim(),
            FamilySet::Pieces(p) => p.dim(),
        }
    }

    pub fn convex(&self) -> Option<&SetDescription> {
        match self {
            FamilySet::Convex(s) => Some(s),
            FamilySet::Pieces(_) => None,
        }
    }

    pub fn pieces(&self) -> PiecewiseSet {
        match self {
            FamilySet::Convex(s) => PiecewiseSet { pieces: vec![s.clone()] },
            FamilySet::Pieces(p) => p.clone(),
        }
    }

    pub fn contains(&self, x: &DenseVector, tol: f64) -> Result<bool> {
        match self {
            FamilySet::Convex(s) => s.contains(x, tol),
            FamilySet::Pieces(p) => p.contains(x, tol),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            FamilySet::Convex(s) => set_to_json(s),
            FamilySet::Pieces(p) => piecewise_to_json(p),
        }
    }

    fn from_json(v: &Value) -> Result<Self> {
        if v.get("type").and_then(Value::as_str) == Some("union") {
            Ok(FamilySet::Pieces(piecewise_from_value(v)?))
        } else {
            Ok(FamilySet::Convex(set_from_value(v)?))
        }
    }
}

/// Quantities an example predicts, with a note on where each comes from.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Expected {
    pub distance: Option<f64>,
    pub pair: Option<(DenseVector, DenseVector)>,
    pub bounds: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyInstance {
    pub name: String,
    pub n: usize,
    /// Ambient dimension of the finite-dimensional truncation.
    pub truncation: usize,
    pub a_n: FamilySet,
    pub b_n: FamilySet,
    pub limit_a: FamilySet,
    pub limit_b: FamilySet,
    pub expected: Expected,
    /// Free-form notes; keys `origin/<quantity>` say whether a value is
    /// stated by the construction or derived by hand.
    pub metadata: BTreeMap<String, String>,
}

fn obj_field<'a>(v: &'a Value, name: &str) -> Result<&'a Value> {
    v.get(name).ok_or_else(|| Error::Parse { pointer: format!("/{name}"), message: "missing field".into() })
}

impl FamilyInstance {
    pub fn to_json(&self) -> Value {
        let mut expected = Map::new();
        if let Some(d) = self.expected.distance {
            expected.insert("distance".into(), real_to_json(d));
        }
        if let Some((a, b)) = &self.expected.pair {
            expected.insert("pair".into(), json!([vector_to_json(a), vector_to_json(b)]));
        }
        let bounds: Map<String, Value> = self.expected.bounds.iter().map(|(k, v)| (k.clone(), real_to_json(*v))).collect();
        expected.insert("bounds".into(), Value::Object(bounds));
        json!({
            "name": self.name,
            "n": self.n,
            "truncation": self.truncation,
            "a_n": self.a_n.to_json(),
            "b_n": self.b_n.to_json(),
            "limit_a": self.limit_a.to_json(),
            "limit_b": self.limit_b.to_json(),
            "expected": Value::Object(expected),
            "metadata": self.metadata,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let name = obj_field(v, "name")?.as_str().unwrap_or_default().to_string();
        let n = obj_field(v, "n")?.as_u64().ok_or_else(|| Error::Parse { pointer: "/n".into(), message: "expected an integer".into() })?;
        let truncation = obj_field(v, "truncation")?
            .as_u64()
            .ok_or_else(|| Error::Parse { pointer: "/truncation".into(), message: "expected an integer".into() })?;
        let ex = obj_field(v, "expected")?;
        let mut expected = Expected::default();
        if let Some(d) = ex.get("distance") {
            expected.distance = Some(parse_real(d, "/expected/distance")?);
        }
        if let Some(p) = ex.get("pair") {
            expected.pair = Some((parse_vector(&p[0], "/expected/pair/0")?, parse_vector(&p[1], "/expected/pair/1")?));
        }
        if let Some(Value::Object(b)) = ex.get("bounds") {
            for (k, x) in b {
                expected.bounds.insert(k.clone(), parse_real(x, &format!("/expected/bounds/{k}"))?);
            }
        }
        let mut metadata = BTreeMap::new();
        if let Some(Value::Object(m)) = v.get("metadata") {
            for (k, x) in m {
                metadata.insert(k.clone(), x.as_str().unwrap_or_default().to_string());
            }
        }
        let inst = FamilyInstance {
            name,
            n: n as usize,
            truncation: truncation as usize,
            a_n: FamilySet::from_json(obj_field(v, "a_n")?)?,
            b_n: FamilySet::from_json(obj_field(v, "b_n")?)?,
            limit_a: FamilySet::from_json(obj_field(v, "limit_a")?)?,
            limit_b: FamilySet::from_json(obj_field(v, "limit_b")?)?,
            expected,
            metadata,
        };
        for s in [&inst.a_n, &inst.b_n, &inst.limit_a, &inst.limit_b] {
            if s.dim() != inst.truncation {
                return Err(Error::dim(inst.truncation, s.dim(), "family instance"));
            }
        }
        Ok(inst)
    }
}

/// One line of a check table.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub index: usize,
    pub observed: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Result of one executable check; `passed` iff every row is within its bound.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub observed: f64,
    pub bound: f64,
    pub trials: usize,
    pub worst_case: Option<String>,
    pub rows: Vec<CheckRow>,
    pub notes: Vec<String>,
}

impl CheckOutcome {
    pub fn new(name: &str) -> Self {
        CheckOutcome {
            name: name.into(),
            passed: true,
            observed: 0.0,
            bound: 0.0,
            trials: 0,
            worst_case: None,
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// Adds a row with `pass = observed ≤ bound` and keeps the worst margin.
    pub fn record(&mut self, index: usize, observed: f64, bound: f64, worst: impl FnOnce() -> String) {
        let pass = observed <= bound;
        let first = self.rows.is_empty();
        if first || observed - bound > self.observed - self.bound {
            self.observed = observed;
            self.bound = bound;
            self.worst_case = Some(worst());
        }
        self.passed &= pass;
        self.trials += 1;
        self.rows.push(CheckRow { index, observed, bound, pass });
    }

    pub fn fail(&mut self, note: impl Into<String>) {
        self.passed = false;
        self.notes.push(note.into());
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,observed,bound,pass\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{}\n", r.index, format_real(r.observed), format_real(r.bound), r.pass));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "passed": self.passed,
            "observed": real_to_json(self.observed),
            "bound": real_to_json(self.bound),
            "trials": self.trials,
            "worst_case": self.worst_case,
            "notes": self.notes,
        })
    }

    /// One-line summary.
    pub fn summary(&self) -> String {
        format!(
            "{} {}: observed {} vs bound {} over {} trials",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            format_real(self.observed),
            format_real(self.bound),
            self.trials
        )
    }
}
