//! Command implementations behind the CLI binary.
//!
//! Each command takes raw JSON strings so that shape errors (exit 2) stay
//! separate from semantic errors (exit 1) and guard rejections (exit 3).
//! Everything returns a deterministic `serde_json::Value` result payload.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::embeddings::{
    self, apply, intertwine_count, random_spread_embedding, unbounded_colour_witness,
    SupportedVector,
};
use crate::harness::{self, CopySystem, HarnessError};
use crate::lipschitz::{leq, ColouringTable, FiniteMetricSpace, MetricSpaceDoc};
use crate::pumpkin::{
    pp_colour, pumpkin_dist, pumpkin_valid, Pumpkin, PumpkinError, PumpkinSpaceParams, TupleLinf,
};
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("input error: {0}")]
    Semantic(String),
    #[error("{0}")]
    Guard(String),
}

impl CliError {
    /// Exit-code contract: 0 success, 1 semantic input error, 2 parse error,
    /// 3 guard exceeded.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Semantic(_) => 1,
            CliError::Guard(_) => 3,
        }
    }
}

impl From<PumpkinError> for CliError {
    fn from(e: PumpkinError) -> Self {
        CliError::Semantic(e.to_string())
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::GuardExceeded { .. } => CliError::Guard(e.to_string()),
            other => CliError::Semantic(other.to_string()),
        }
    }
}

impl From<embeddings::EmbeddingError> for CliError {
    fn from(e: embeddings::EmbeddingError) -> Self {
        CliError::Semantic(e.to_string())
    }
}

impl From<crate::lipschitz::LipschitzError> for CliError {
    fn from(e: crate::lipschitz::LipschitzError) -> Self {
        CliError::Semantic(e.to_string())
    }
}

fn parse_json<'a, T: Deserialize<'a>>(src: &'a str) -> Result<T, CliError> {
    serde_json::from_str(src).map_err(|e| CliError::Parse(e.to_string()))
}

/// Flag state shared by the commands.
#[derive(Clone, Debug)]
pub struct Ctx {
    pub eps: Scalar,
    pub seed: u64,
    pub max_colourings: u128,
}

impl Ctx {
    /// Metric commands require a positive tolerance.
    fn params(&self) -> Result<PumpkinSpaceParams, CliError> {
        Ok(PumpkinSpaceParams::new(self.eps.clone())?)
    }
}

fn rational_value(v: &Scalar) -> Value {
    json!({ "rational": v.to_string(), "decimal": v.to_f64() })
}

/// Colour a tuple and diagnose the resulting pumpkin.
pub fn cmd_pp(tuple_json: &str, ctx: &Ctx) -> Result<Value, CliError> {
    ctx.params()?;
    let tuple: TupleLinf = parse_json(tuple_json)?;
    let p = pp_colour(&tuple)?;
    let diagnosis = pumpkin_valid(&p);
    Ok(json!({
        "pumpkin": p,
        "diagnosis": diagnosis,
    }))
}

/// Certified chain distance between two pumpkin files.
pub fn cmd_dist(left_json: &str, right_json: &str, ctx: &Ctx) -> Result<Value, CliError> {
    let params = ctx.params()?;
    let left: Pumpkin = parse_json(left_json)?;
    let right: Pumpkin = parse_json(right_json)?;
    let d = pumpkin_dist(&left, &right, params.eps())?;
    Ok(json!({
        "dist": rational_value(&d),
        "eps": params.eps().to_string(),
    }))
}

/// Quasiorder check: the lexicographically least 1-Lipschitz surjection
/// `source → target`, i.e. whether `target ≤ source`.
pub fn cmd_order(source_json: &str, target_json: &str) -> Result<Value, CliError> {
    let source_doc: MetricSpaceDoc = parse_json(source_json)?;
    let target_doc: MetricSpaceDoc = parse_json(target_json)?;
    let source = FiniteMetricSpace::new(source_doc.labels, source_doc.dist)?;
    let target = FiniteMetricSpace::new(target_doc.labels, target_doc.dist)?;
    let witness = leq(&target, &source);
    Ok(match witness {
        Some(map) => json!({
            "related": true,
            "witness": {
                "table": map.table,
                "source_labels": source.labels(),
                "target_labels": target.labels(),
            },
        }),
        None => json!({ "related": false, "witness": null }),
    })
}

/// Wire form of the oscillation experiment input: a colouring table over a
/// net of sphere tuples, with the domain metric induced by sup distance.
#[derive(Deserialize)]
struct OscillationDoc {
    tuples: Vec<TupleLinf>,
    target: MetricSpaceDoc,
    table: Vec<usize>,
}

/// Transport the net along sampled spread embeddings and report the minimum
/// observed image diameter. Transported points take the colour of the
/// nearest net point (least index on ties); count `0` reports the diameter
/// of the untransported net.
pub fn cmd_oscillation(doc_json: &str, count: usize, ctx: &Ctx) -> Result<Value, CliError> {
    ctx.params()?;
    let doc: OscillationDoc = parse_json(doc_json)?;
    if doc.tuples.is_empty() {
        return Err(CliError::Semantic("empty tuple net".into()));
    }
    let d = doc.tuples[0].dim();
    let cols = doc.tuples[0].len();
    for t in &doc.tuples {
        if t.dim() != d || t.len() != cols {
            return Err(CliError::Semantic(
                "net tuples must share one shape (d, n)".into(),
            ));
        }
    }
    // Domain metric: exact sup distances between net tuples.
    let dist: Vec<Vec<Scalar>> = doc
        .tuples
        .iter()
        .map(|a| {
            doc.tuples
                .iter()
                .map(|b| a.sup_distance(b).expect("same arity"))
                .collect()
        })
        .collect();
    let labels = (0..doc.tuples.len()).map(|i| format!("x{i}")).collect();
    let domain = FiniteMetricSpace::new(labels, dist)?;
    let target = FiniteMetricSpace::new(doc.target.labels, doc.target.dist)?;
    let colouring = ColouringTable::new(domain, target.clone(), doc.table)?;

    let image_diameter = |colours: &[usize]| -> Scalar {
        let mut m = Scalar::zero();
        for (i, &a) in colours.iter().enumerate() {
            for &b in &colours[i + 1..] {
                m = m.max(target.dist(a, b).clone());
            }
        }
        m
    };

    let base_diameter = image_diameter(colouring.table());
    let mut best = base_diameter.clone();
    let mut best_index: Option<usize> = None;
    let mut diameters = Vec::with_capacity(count);
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    for idx in 0..count {
        let sub_seed: u64 = rng.gen();
        let t = random_spread_embedding(cols, cols + 2, sub_seed)?;
        let mut colours = Vec::with_capacity(doc.tuples.len());
        for x in &doc.tuples {
            let y = apply(&t, x)?;
            let mut nearest = 0usize;
            let mut nearest_d = y.sup_distance(&doc.tuples[0])?;
            for (j, cand) in doc.tuples.iter().enumerate().skip(1) {
                let dj = y.sup_distance(cand)?;
                if dj < nearest_d {
                    nearest_d = dj;
                    nearest = j;
                }
            }
            colours.push(colouring.value(nearest));
        }
        let diam = image_diameter(&colours);
        diameters.push(diam.to_string());
        if diam < best {
            best = diam;
            best_index = Some(idx);
        }
    }

    Ok(json!({
        "net_size": doc.tuples.len(),
        "tuple_shape": { "d": d, "n": cols },
        "generator": "chacha8",
        "count": count,
        "base_diameter": rational_value(&base_diameter),
        "min_diameter": rational_value(&best),
        "best_embedding_index": best_index,
        "diameters": diameters,
    }))
}

/// Brute-force least colour count over the subcopies of a copy system.
pub fn cmd_ramsey(system_json: &str, ctx: &Ctx) -> Result<Value, CliError> {
    let system: CopySystem = parse_json(system_json)?;
    system.validate()?;
    let t = harness::min_colours_over_subcopies(&system, ctx.max_colourings)?;
    Ok(json!({
        "objects": system.objects.len(),
        "subcopies": system.subcopies.len(),
        "k": system.k,
        "min_colours": t,
    }))
}

/// Exhaustive combinatorial-line check.
pub fn cmd_hj(
    alphabet: usize,
    colours: usize,
    len: usize,
    ctx: &Ctx,
) -> Result<Value, CliError> {
    let holds = harness::hj_line_check(alphabet, colours, len, ctx.max_colourings)?;
    Ok(json!({
        "alphabet": alphabet,
        "colours": colours,
        "len": len,
        "every_colouring_has_monochromatic_line": holds,
    }))
}

/// Enumerate rigid surjections `[m] → [n]`.
pub fn cmd_rigid(m: usize, n: usize) -> Result<Value, CliError> {
    let list = harness::enumerate_rigid_surjections(m, n)?;
    let tables: Vec<&[usize]> = list.iter().map(|s| s.table()).collect();
    Ok(json!({
        "domain": m,
        "range": n,
        "count": tables.len(),
        "surjections": tables,
    }))
}

/// Wire form of the intertwine command: either a pair of disjointly
/// supported vectors, or a block sequence with a requested colour count.
#[derive(Deserialize)]
#[serde(untagged)]
enum IntertwineDoc {
    Pair {
        x: SupportedVector,
        y: SupportedVector,
    },
    Blocks {
        blocks: Vec<SupportedVector>,
        colours: usize,
    },
}

/// Count support intertwinings of a pair, or build witnesses attaining
/// counts `1..=colours` from a block sequence.
pub fn cmd_intertwine(doc_json: &str) -> Result<Value, CliError> {
    let doc: IntertwineDoc = parse_json(doc_json)?;
    match doc {
        IntertwineDoc::Pair { x, y } => {
            let c = intertwine_count(&x, &y)?;
            Ok(json!({ "count": c }))
        }
        IntertwineDoc::Blocks { blocks, colours } => {
            let pairs = unbounded_colour_witness(&blocks, colours)?;
            let rows: Vec<Value> = pairs
                .iter()
                .enumerate()
                .map(|(i, (x, y))| {
                    json!({
                        "count": i + 1,
                        "x": x,
                        "y": y,
                    })
                })
                .collect();
            Ok(json!({ "colours": colours, "pairs": rows }))
        }
    }
}
