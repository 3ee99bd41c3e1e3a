//! Report assembly. Field order in these structs is the JSON key order.

use std::fmt::Write as _;

use polyassoc::assoc::{DecisionPath, DegreeObstruction};
use polyassoc::oracle::{assoc_pointwise_detailed, OracleConfig, OracleError, OracleMode};
use polyassoc::poly::subset_members;
use polyassoc::structure::{BinaryOp, Reducibility, StructureReport};
use polyassoc::{AssocVerdict, Classification, Scalar, SparsePoly};
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Serialize)]
pub struct Report {
    pub command: &'static str,
    pub ring: String,
    pub n: usize,
    pub input: String,
    pub multilinear: bool,
    pub associative: bool,
    pub decision_path: &'static str,
    pub witness: Option<WitnessJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureJson>,
    pub oracle: OracleJson,
}

#[derive(Serialize)]
pub struct WitnessJson {
    pub slot: usize,
    pub monomial: String,
    pub subset: Option<Vec<usize>>,
    pub first: String,
    pub other: String,
    pub degree_obstruction: Option<ObstructionJson>,
}

#[derive(Serialize)]
pub struct ObstructionJson {
    pub slot: usize,
    pub var: usize,
    pub first_degree: u32,
    pub slot_degree: u32,
}

#[derive(Serialize)]
pub struct ClassificationJson {
    #[serde(rename = "type")]
    pub tag: &'static str,
    pub clause: Option<&'static str>,
    pub params: Map<String, Value>,
}

#[derive(Serialize)]
pub struct StructureJson {
    pub group: &'static str,
    pub skew: Option<String>,
    pub skew_verified: Option<bool>,
    pub skew_endomorphism: Option<bool>,
    pub medial: bool,
    pub medial_method: &'static str,
    pub reducible: &'static str,
    pub binary_op: Option<String>,
    pub params: Option<Map<String, Value>>,
    pub alternatives: Vec<Map<String, Value>>,
    pub reduction_verified: Option<bool>,
    pub notes: Vec<String>,
}

#[derive(Serialize)]
pub struct OracleJson {
    pub mode: &'static str,
    /// The grid is exact for the input's degrees; sampling is not.
    pub exact: bool,
    pub samples: Option<usize>,
    pub seed: Option<String>,
    pub agrees: bool,
    pub failure: Option<FailureJson>,
}

#[derive(Serialize)]
pub struct FailureJson {
    pub slot: usize,
    pub point: Vec<String>,
    pub first: String,
    pub other: String,
}

fn path_label(p: DecisionPath) -> &'static str {
    match p {
        DecisionPath::Multilinear => "multilinear",
        DecisionPath::SymmetricShortcut => "symmetric-shortcut",
        DecisionPath::Expansion => "expansion",
    }
}

fn obstruction_json(o: &DegreeObstruction) -> ObstructionJson {
    ObstructionJson {
        slot: o.slot,
        var: o.var,
        first_degree: o.first_degree,
        slot_degree: o.slot_degree,
    }
}

fn params_map(pairs: Vec<(&'static str, String)>) -> Map<String, Value> {
    pairs
        .into_iter()
        .map(|(k, v)| (k.to_string(), Value::String(v)))
        .collect()
}

fn op_params<R: Scalar>(op: &BinaryOp<R>) -> Map<String, Value> {
    params_map(match op {
        BinaryOp::Constant(c) => vec![("c", c.to_string())],
        BinaryOp::LeftZero | BinaryOp::RightZero => Vec::new(),
        BinaryOp::ShiftedSum(c0) => vec![("c0", c0.to_string())],
        BinaryOp::ScaledProduct(a0) => vec![("a0", a0.to_string())],
        BinaryOp::ShiftedProduct { a, b } => vec![("a", a.to_string()), ("b", b.to_string())],
    })
}

pub fn verdict_fields<R: Scalar>(
    verdict: &AssocVerdict<R>,
) -> (bool, &'static str, Option<WitnessJson>) {
    let witness = verdict.witness().map(|w| WitnessJson {
        slot: w.slot,
        monomial: w.monomial.to_string(),
        subset: w.subset().map(subset_members),
        first: w.first.to_string(),
        other: w.other.to_string(),
        degree_obstruction: verdict.degree_obstruction().map(obstruction_json),
    });
    (
        verdict.is_associative(),
        path_label(verdict.path()),
        witness,
    )
}

pub fn classification_json<R: Scalar>(cls: &Classification<R>) -> ClassificationJson {
    ClassificationJson {
        tag: cls.tag(),
        clause: cls.clause(),
        params: params_map(cls.params()),
    }
}

pub fn structure_json<R: Scalar>(s: &StructureReport<R>) -> StructureJson {
    let (binary_op, params, alternatives) = match &s.reducibility {
        Reducibility::Reducible { op, alternatives } => (
            Some(op.to_string()),
            Some(op_params(op)),
            alternatives.iter().map(op_params).collect(),
        ),
        _ => (None, None, Vec::new()),
    };
    StructureJson {
        group: s.group.label(),
        skew: s.skew.as_ref().map(ToString::to_string),
        skew_verified: s.skew_verified,
        skew_endomorphism: s.skew_endomorphism,
        medial: s.medial,
        medial_method: s.medial_method.label(),
        reducible: s.reducibility.label(),
        binary_op,
        params,
        alternatives,
        reduction_verified: s.reduction_verified,
        notes: s.notes.clone(),
    }
}

/// Pointwise cross-check: the exact grid when it fits under the guard,
/// seeded sampling otherwise.
pub fn oracle_json<R: Scalar>(
    p: &SparsePoly<R>,
    associative: bool,
    seed: u64,
) -> Result<OracleJson, OracleError> {
    let grid = OracleConfig::grid();
    let (cfg, result) = match assoc_pointwise_detailed(p, &grid) {
        Err(OracleError::GridTooLarge { .. }) => {
            let cfg = OracleConfig::random(1000, seed, 10);
            let r = assoc_pointwise_detailed(p, &cfg)?;
            (cfg, r)
        }
        other => (grid, other?),
    };
    let exact = cfg.mode == OracleMode::Grid;
    // sampling can miss a failure but never invents one
    let agrees = if exact {
        result.is_none() == associative
    } else {
        !(associative && result.is_some())
    };
    Ok(OracleJson {
        mode: if exact { "grid" } else { "random" },
        exact,
        samples: (!exact).then_some(cfg.samples),
        seed: (!exact).then(|| cfg.seed.to_string()),
        agrees,
        failure: result.map(|f| FailureJson {
            slot: f.slot,
            point: f.point.iter().map(ToString::to_string).collect(),
            first: f.first.to_string(),
            other: f.other.to_string(),
        }),
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn render_params(m: &Map<String, Value>) -> String {
    m.iter()
        .map(|(k, v)| format!("{k} = {}", v.as_str().unwrap_or_default()))
        .collect::<Vec<_>>()
        .join(", ")
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "ring: {}", self.ring);
        let _ = writeln!(out, "arity: {}", self.n);
        let _ = writeln!(out, "input: {}", self.input);
        let _ = writeln!(out, "multilinear: {}", yes_no(self.multilinear));
        let _ = writeln!(
            out,
            "associative: {} (decided by {})",
            yes_no(self.associative),
            self.decision_path
        );
        if let Some(w) = &self.witness {
            let _ = write!(out, "witness: slot {}, monomial {}", w.slot, w.monomial);
            if let Some(s) = &w.subset {
                let members: Vec<String> = s.iter().map(ToString::to_string).collect();
                let _ = write!(out, " (S = {{{}}})", members.join(","));
            }
            let _ = writeln!(
                out,
                ", coefficient {} in p_1 vs {} in p_{}",
                w.first, w.other, w.slot
            );
            if let Some(o) = &w.degree_obstruction {
                let _ = writeln!(
                    out,
                    "degree obstruction: x{} has degree {} in p_1 and {} in p_{}",
                    o.var, o.first_degree, o.slot_degree, o.slot
                );
            }
        }
        if let Some(c) = &self.classification {
            match c.clause {
                Some(clause) => {
                    let _ = write!(out, "type: {} (clause {clause})", c.tag);
                    if !c.params.is_empty() {
                        let _ = write!(out, ", {}", render_params(&c.params));
                    }
                    let _ = writeln!(out);
                }
                None => {
                    let _ = writeln!(out, "type: {}", c.tag);
                }
            }
        }
        if let Some(s) = &self.structure {
            let _ = writeln!(out, "n-ary group: {}", s.group);
            if let Some(skew) = &s.skew {
                let _ = writeln!(
                    out,
                    "skew: {skew} (identity {}, endomorphism {})",
                    yes_no(s.skew_verified == Some(true)),
                    yes_no(s.skew_endomorphism == Some(true))
                );
            }
            let _ = writeln!(out, "medial: {} ({})", yes_no(s.medial), s.medial_method);
            let _ = write!(out, "reducible: {}", s.reducible);
            if let (Some(op), Some(params)) = (&s.binary_op, &s.params) {
                if !params.is_empty() {
                    let _ = write!(out, ", {}", render_params(params));
                }
                let _ = write!(out, ", x o y = {op}");
                for alt in &s.alternatives {
                    let _ = write!(out, "; also {}", render_params(alt));
                }
            }
            let _ = writeln!(out);
            for note in &s.notes {
                let _ = writeln!(out, "note: {note}");
            }
        }
        let o = &self.oracle;
        let _ = write!(out, "oracle: {} ", o.mode);
        if let Some(n) = o.samples {
            let _ = write!(out, "({n} samples) ");
        }
        let _ = write!(out, "{}", if o.agrees { "agrees" } else { "DISAGREES" });
        if let Some(f) = &o.failure {
            let _ = write!(
                out,
                ", fails at ({}) slot {}: {} vs {}",
                f.point.join(","),
                f.slot,
                f.first,
                f.other
            );
        }
        let _ = writeln!(out);
        out
    }
}
