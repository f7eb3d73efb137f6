//! Growth chains of symmetric convex bodies and the tuple colouring into them.
//!
//! A d-pumpkin is an inclusion chain of symmetric convex compact subsets of
//! `Ball_d` that starts at `{0}` and whose last body touches every face of
//! the cube. Chains are stored as breakpoint bodies plus growth directions;
//! stage `k` denotes the one-parameter family `sc(base_k ∪ {t·dir_k})`,
//! `t ∈ [0,1]`, which fills the gaps between breakpoints affinely.
//!
//! [`pp_colour`] maps a finite tuple on the sphere of the sup-normed sequence
//! space to its pumpkin: bases are symmetric hulls of column prefixes and the
//! directions are the columns themselves. [`pumpkin_dist`] is a certified
//! approximation of the Hausdorff distance between two chains, where the
//! distance between chain elements is the (exact) Hausdorff distance between
//! bodies.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{
    point_dist_lower_bound, point_dist_to_gens, point_dist_upper_bound, GeometryError, PointD,
    SymPolytope, MAX_DIM,
};
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PumpkinError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("sphere condition violated in row {row}: max |entry| = {max} != 1")]
    SphereConditionViolated { row: usize, max: Scalar },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("eps must be positive, got {0}")]
    NonPositiveEps(Scalar),
    #[error("pumpkin is not valid: {0}")]
    NotValid(String),
    #[error("malformed tuple: {0}")]
    MalformedTuple(String),
}

/// A finite truncation of a d-tuple of sup-norm-one sequences: a `d × n`
/// matrix whose column `k` is the point `x(k) ∈ Ball_d`. The tail of every
/// sequence is declared zero, so the sphere condition must already be
/// attained inside the truncation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TupleLinf {
    dim: usize,
    len: usize,
    entries: Vec<Vec<Scalar>>,
}

impl TupleLinf {
    pub fn new(entries: Vec<Vec<Scalar>>) -> Result<Self, PumpkinError> {
        let dim = entries.len();
        if dim == 0 || dim > MAX_DIM {
            return Err(PumpkinError::MalformedTuple(format!(
                "arity {dim} outside 1..={MAX_DIM}"
            )));
        }
        let len = entries[0].len();
        if len == 0 {
            return Err(PumpkinError::MalformedTuple("empty rows".into()));
        }
        for row in &entries {
            if row.len() != len {
                return Err(PumpkinError::MalformedTuple("ragged rows".into()));
            }
            for v in row {
                if v.abs() > Scalar::one() {
                    return Err(PumpkinError::Geometry(GeometryError::CoordinateOutOfRange(
                        v.clone(),
                    )));
                }
            }
        }
        Ok(TupleLinf { dim, len, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false // construction requires n >= 1
    }

    pub fn entries(&self) -> &[Vec<Scalar>] {
        &self.entries
    }

    /// Column `k` as a point of `Ball_d`.
    pub fn column(&self, k: usize) -> PointD {
        let coords = self.entries.iter().map(|row| row[k].clone()).collect();
        PointD::new(coords).expect("entries validated at construction")
    }

    /// Row index failing the sphere condition, if any.
    pub fn sphere_violation(&self) -> Option<(usize, Scalar)> {
        for (i, row) in self.entries.iter().enumerate() {
            let m = row.iter().map(Scalar::abs).fold(Scalar::zero(), Scalar::max);
            if m != Scalar::one() {
                return Some((i, m));
            }
        }
        None
    }

    pub fn is_on_sphere(&self) -> bool {
        self.sphere_violation().is_none()
    }

    /// Sup distance between tuples of the same arity, reading both as
    /// infinite matrices with zero tails.
    pub fn sup_distance(&self, other: &TupleLinf) -> Result<Scalar, PumpkinError> {
        if self.dim != other.dim {
            return Err(PumpkinError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let zero = Scalar::zero();
        let n = self.len.max(other.len);
        let mut best = Scalar::zero();
        for i in 0..self.dim {
            for k in 0..n {
                let a = self.entries[i].get(k).unwrap_or(&zero);
                let b = other.entries[i].get(k).unwrap_or(&zero);
                best = best.max((a - b).abs());
            }
        }
        Ok(best)
    }
}

impl Serialize for TupleLinf {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("TupleLinf", 3)?;
        st.serialize_field("d", &self.dim)?;
        st.serialize_field("n", &self.len)?;
        st.serialize_field("entries", &self.entries)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for TupleLinf {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Doc {
            d: usize,
            n: usize,
            entries: Vec<Vec<Scalar>>,
        }
        let doc = Doc::deserialize(deserializer)?;
        let t = TupleLinf::new(doc.entries).map_err(serde::de::Error::custom)?;
        if t.dim != doc.d || t.len != doc.n {
            return Err(serde::de::Error::custom(
                "declared d/n do not match the entries matrix",
            ));
        }
        Ok(t)
    }
}

/// One stage of a pumpkin: the family `sc(base ∪ {t·direction})`, `t ∈ [0,1]`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Stage {
    pub base: SymPolytope,
    pub direction: PointD,
}

/// An inclusion chain of symmetric convex bodies, from `{0}` to `final`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Pumpkin {
    dim: usize,
    stages: Vec<Stage>,
    #[serde(rename = "final")]
    final_body: SymPolytope,
}

impl Pumpkin {
    /// Assemble a pumpkin from raw parts, checking only dimensional
    /// consistency. Deep structural checks live in [`pumpkin_valid`].
    pub fn from_parts(
        dim: usize,
        stages: Vec<Stage>,
        final_body: SymPolytope,
    ) -> Result<Self, PumpkinError> {
        if dim == 0 || dim > MAX_DIM {
            return Err(PumpkinError::Geometry(GeometryError::UnsupportedDimension(
                dim,
            )));
        }
        for st in &stages {
            if st.base.dim() != dim || st.direction.dim() != dim {
                return Err(PumpkinError::DimensionMismatch {
                    left: dim,
                    right: st.base.dim().max(st.direction.dim()),
                });
            }
        }
        if final_body.dim() != dim {
            return Err(PumpkinError::DimensionMismatch {
                left: dim,
                right: final_body.dim(),
            });
        }
        Ok(Pumpkin {
            dim,
            stages,
            final_body,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn final_body(&self) -> &SymPolytope {
        &self.final_body
    }
}

impl<'de> Deserialize<'de> for Pumpkin {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Doc {
            dim: usize,
            stages: Vec<Stage>,
            #[serde(rename = "final")]
            final_body: SymPolytope,
        }
        let doc = Doc::deserialize(deserializer)?;
        Pumpkin::from_parts(doc.dim, doc.stages, doc.final_body)
            .map_err(serde::de::Error::custom)
    }
}

/// Approximation parameters for pumpkin-space computations.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PumpkinSpaceParams {
    eps: Scalar,
}

impl PumpkinSpaceParams {
    pub fn new(eps: Scalar) -> Result<Self, PumpkinError> {
        if !eps.is_positive() {
            return Err(PumpkinError::NonPositiveEps(eps));
        }
        Ok(PumpkinSpaceParams { eps })
    }

    pub fn eps(&self) -> &Scalar {
        &self.eps
    }
}

/// Outcome of the structural check: `Partial` means only the face-touching
/// condition on the final body fails.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PumpkinDiagnosis {
    Valid,
    Partial { missing_faces: Vec<usize> },
    Malformed { reason: String },
}

/// The colouring of sphere tuples by pumpkins: stage `k` is the symmetric
/// hull of the first `k` columns growing towards column `k`, and the final
/// body is the hull of all columns.
pub fn pp_colour(x: &TupleLinf) -> Result<Pumpkin, PumpkinError> {
    if let Some((row, max)) = x.sphere_violation() {
        return Err(PumpkinError::SphereConditionViolated { row, max });
    }
    let dim = x.dim();
    let mut stages = Vec::with_capacity(x.len());
    let mut base = SymPolytope::origin(dim);
    for k in 0..x.len() {
        let col = x.column(k);
        let mut pts: Vec<PointD> = base.generators().to_vec();
        pts.push(col.clone());
        let next = SymPolytope::sc_hull(&pts)?;
        stages.push(Stage {
            base,
            direction: col,
        });
        base = next;
    }
    Ok(Pumpkin {
        dim,
        stages,
        final_body: base,
    })
}

/// The unique 1-pumpkin `{[-a, a] : a ∈ [0, 1]}`.
pub fn canonical_pum1() -> Pumpkin {
    let one = PointD::new(vec![Scalar::one()]).expect("1 is in the ball");
    Pumpkin {
        dim: 1,
        stages: vec![Stage {
            base: SymPolytope::origin(1),
            direction: one.clone(),
        }],
        final_body: SymPolytope::sc_hull(&[one]).expect("nonempty"),
    }
}

/// Structural diagnosis of a pumpkin. `Malformed` reports the first broken
/// invariant; `Partial` means the chain is sound but the final body misses
/// some cube face; `Valid` is everything the colouring produces.
pub fn pumpkin_valid(p: &Pumpkin) -> PumpkinDiagnosis {
    if p.stages.is_empty() {
        return PumpkinDiagnosis::Malformed {
            reason: "no stages".into(),
        };
    }
    if !p.stages[0].base.is_origin_only() {
        return PumpkinDiagnosis::Malformed {
            reason: "first stage base is not {0}".into(),
        };
    }
    for k in 0..p.stages.len() {
        let mut pts: Vec<PointD> = p.stages[k].base.generators().to_vec();
        pts.push(p.stages[k].direction.clone());
        let endpoint = match SymPolytope::sc_hull(&pts) {
            Ok(b) => b,
            Err(e) => {
                return PumpkinDiagnosis::Malformed {
                    reason: format!("stage {k}: {e}"),
                }
            }
        };
        let next = if k + 1 < p.stages.len() {
            &p.stages[k + 1].base
        } else {
            &p.final_body
        };
        if *next != endpoint {
            let what = if k + 1 < p.stages.len() {
                format!("stage {} base is not the endpoint of stage {k}", k + 1)
            } else {
                format!("final body is not the endpoint of stage {k}")
            };
            return PumpkinDiagnosis::Malformed { reason: what };
        }
    }
    let one = Scalar::one();
    let missing: Vec<usize> = (0..p.dim)
        .filter(|&i| p.final_body.proj_radius(i) != one)
        .collect();
    if missing.is_empty() {
        PumpkinDiagnosis::Valid
    } else {
        PumpkinDiagnosis::Partial {
            missing_faces: missing,
        }
    }
}

/// A sphere tuple whose colouring reproduces `p` exactly: the stage
/// directions, taken in chain order (the tightest possible net of the
/// evolution). Requires a `Valid` pumpkin.
pub fn pumpkin_witness(p: &Pumpkin, eps: &Scalar) -> Result<TupleLinf, PumpkinError> {
    if !eps.is_positive() {
        return Err(PumpkinError::NonPositiveEps(eps.clone()));
    }
    match pumpkin_valid(p) {
        PumpkinDiagnosis::Valid => {}
        PumpkinDiagnosis::Partial { missing_faces } => {
            return Err(PumpkinError::NotValid(format!(
                "partial: final body misses faces {missing_faces:?}"
            )))
        }
        PumpkinDiagnosis::Malformed { reason } => return Err(PumpkinError::NotValid(reason)),
    }
    let entries: Vec<Vec<Scalar>> = (0..p.dim)
        .map(|i| {
            p.stages
                .iter()
                .map(|st| st.direction.coord(i).clone())
                .collect()
        })
        .collect();
    TupleLinf::new(entries)
}

// ---------------------------------------------------------------------------
// Canonical chain form.
// ---------------------------------------------------------------------------

/// One strictly-growing piece of a chain: bodies `sc(base ∪ {t·dir})` for
/// `t ∈ [t_lo, 1]`, where `t_lo` is the absorption threshold (`body(t_lo)`
/// is `base` itself). A point arc (`t_lo = 1`, zero direction) is a single
/// isolated body.
#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct Arc {
    pub(crate) base: SymPolytope,
    pub(crate) dir: PointD,
    pub(crate) t_lo: Scalar,
}

impl Arc {
    fn body_gens(&self, t: &Scalar) -> Vec<PointD> {
        let mut gens = self.base.generators().to_vec();
        if !self.dir.is_zero() && !t.is_zero() {
            gens.push(self.dir.scaled(t));
        }
        gens
    }
}

/// Canonical form of the chain set: constant stages elided, consecutive
/// collinear growth merged. Two pumpkins denote the same chain set iff their
/// canonical chains are equal (used as an exact zero-distance shortcut).
#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct Chain {
    pub(crate) dim: usize,
    pub(crate) arcs: Vec<Arc>,
}

/// `dir = s · longer` for some `0 < s ≤ 1`, both nonzero? Returns `s`.
fn shrink_factor(dir: &PointD, longer: &PointD) -> Option<Scalar> {
    let d = dir.dim();
    let pivot = (0..d).find(|&i| !longer.coord(i).is_zero())?;
    let s = dir.coord(pivot) / longer.coord(pivot);
    if !s.is_positive() || s > Scalar::one() {
        return None;
    }
    for i in 0..d {
        if dir.coord(i) != &(&s * longer.coord(i)) {
            return None;
        }
    }
    Some(s)
}

pub(crate) fn canonical_chain(p: &Pumpkin) -> Chain {
    let mut arcs: Vec<Arc> = Vec::new();
    for st in &p.stages {
        let dir = st.direction.sign_normalized();
        if dir.is_zero() {
            continue;
        }
        let gauge = crate::geometry::gauge_in_gens(&dir, st.base.generators());
        let t_lo = match gauge {
            Some(g) if g <= Scalar::one() => continue, // constant stage
            Some(g) => g.recip().expect("gauge > 1"),
            None => Scalar::zero(),
        };
        // Merge with the previous arc when this stage continues the same ray.
        if let Some(prev) = arcs.last_mut() {
            if let Some(s) = shrink_factor(&prev.dir, &dir) {
                let prev_endpoint = {
                    let mut pts = prev.base.generators().to_vec();
                    pts.push(prev.dir.clone());
                    SymPolytope::sc_hull(&pts).expect("arc endpoint")
                };
                if prev_endpoint == st.base {
                    prev.t_lo = &prev.t_lo * &s;
                    prev.dir = dir;
                    continue;
                }
            }
        }
        arcs.push(Arc {
            base: st.base.clone(),
            dir,
            t_lo,
        });
    }
    if arcs.is_empty() {
        // Degenerate chain: just the starting body.
        let start = p
            .stages
            .first()
            .map(|st| st.base.clone())
            .unwrap_or_else(|| SymPolytope::origin(p.dim));
        arcs.push(Arc {
            base: start,
            dir: PointD::origin(p.dim),
            t_lo: Scalar::one(),
        });
    }
    // The final body joins as an isolated point when the stages do not
    // already reach it (hand-built chains with a gap).
    let last_endpoint = {
        let last = arcs.last().expect("nonempty");
        SymPolytope::sc_hull(&last.body_gens(&Scalar::one())).expect("endpoint")
    };
    if last_endpoint != p.final_body {
        arcs.push(Arc {
            base: p.final_body.clone(),
            dir: PointD::origin(p.dim),
            t_lo: Scalar::one(),
        });
    }
    Chain { dim: p.dim, arcs }
}

// ---------------------------------------------------------------------------
// Certified chain distance.
// ---------------------------------------------------------------------------

#[derive(Clone, PartialEq, Eq, Hash)]
struct BodyKey {
    side: bool,
    arc: usize,
    t: Scalar,
}

/// A chain element: its generator list plus a hashable identity.
struct BodyAt {
    key: BodyKey,
    gens: Vec<PointD>,
}

struct DistEngine<'a> {
    left: &'a Chain,
    right: &'a Chain,
    /// memoized exact point-to-body distances
    cache: HashMap<(PointD, BodyKey), Scalar>,
}

impl<'a> DistEngine<'a> {
    fn new(left: &'a Chain, right: &'a Chain) -> Self {
        DistEngine {
            left,
            right,
            cache: HashMap::new(),
        }
    }

    fn chain(&self, side: bool) -> &Chain {
        if side {
            self.right
        } else {
            self.left
        }
    }

    fn body(&self, side: bool, arc: usize, t: Scalar) -> BodyAt {
        let gens = self.chain(side).arcs[arc].body_gens(&t);
        BodyAt {
            key: BodyKey { side, arc, t },
            gens,
        }
    }

    fn point_to_body(&mut self, p: &PointD, body: &BodyAt) -> Scalar {
        let k = (p.clone(), body.key.clone());
        if let Some(v) = self.cache.get(&k) {
            return v.clone();
        }
        let d = point_dist_to_gens(p, &body.gens);
        self.cache.insert(k, d.clone());
        d
    }

    /// Exact directed gap `sup_{x ∈ X} d(x, Y)`, resolved lazily: generators
    /// are tried in decreasing order of a cheap upper bound, stopping once no
    /// remaining bound can beat the best exact value. Cheap lower bounds seed
    /// `best` so dominated generators skip their LP entirely.
    fn directed_gap(&mut self, from: &BodyAt, to: &BodyAt) -> Scalar {
        let mut order: Vec<(Scalar, &PointD)> = from
            .gens
            .iter()
            .map(|g| (point_dist_upper_bound(g, &to.gens), g))
            .collect();
        order.sort_by(|a, b| b.0.cmp(&a.0));
        // Seeding with lower bounds is still exact: any generator whose true
        // distance exceeds `best` has an upper bound exceeding it, so it is
        // never skipped.
        let mut best = order
            .iter()
            .map(|(_, g)| point_dist_lower_bound(g, &to.gens))
            .fold(Scalar::zero(), Scalar::max);
        for (ub, g) in order {
            if ub <= best {
                break;
            }
            let d = self.point_to_body(g, to);
            if d > best {
                best = d;
            }
        }
        best
    }

    /// Bounds `(lb, ub)` on `inf_{t ∈ arc} max(e(hi, B(t)), e(B(t), lo))`
    /// for one arc of the `side` chain, where `hi ⊇ lo` are two bodies of
    /// the other chain. The first gap is nonincreasing and the second
    /// nondecreasing along the arc, so bisection brackets the crossing.
    ///
    /// Stops early (returning a certified partial bracket) once `lb > cutoff`
    /// or `ub - lb ≤ tol`.
    fn arc_inf(
        &mut self,
        hi: &BodyAt,
        lo: &BodyAt,
        side: bool,
        arc: usize,
        tol: &Scalar,
        cutoff: Option<&Scalar>,
    ) -> (Scalar, Scalar) {
        let a = &self.chain(side).arcs[arc];
        let t0 = a.t_lo.clone();
        let t1 = Scalar::one();

        let eval = |eng: &mut Self, t: &Scalar| -> (Scalar, Scalar) {
            let b = eng.body(side, arc, t.clone());
            (eng.directed_gap(hi, &b), eng.directed_gap(&b, lo))
        };

        let (g0, h0) = eval(self, &t0);
        if h0 >= g0 {
            // The rising gap already dominates at the arc start: minimum here.
            let v = g0.max(h0);
            return (v.clone(), v);
        }
        if t0 == t1 {
            let v = g0.max(h0);
            return (v.clone(), v);
        }
        let (g1, h1) = eval(self, &t1);
        if g1 >= h1 {
            let v = g1.max(h1);
            return (v.clone(), v);
        }

        // Bracket: g > h at lo end, h > g at hi end.
        let mut lo_t = t0;
        let mut hi_t = t1;
        let mut g_lo = g0;
        let mut h_lo = h0;
        let mut g_hi = g1;
        let mut h_hi = h1;
        for _ in 0..64 {
            let ub = g_lo.clone().max(h_lo.clone()).min(g_hi.clone().max(h_hi.clone()));
            let lb = g_hi.clone().max(h_lo.clone());
            if &(&ub - &lb) <= tol {
                return (lb, ub);
            }
            if let Some(c) = cutoff {
                if &lb > c {
                    return (lb, ub);
                }
            }
            let mid = (&lo_t + &hi_t) * Scalar::ratio(1, 2);
            let (gm, hm) = eval(self, &mid);
            if gm >= hm {
                lo_t = mid;
                g_lo = gm;
                h_lo = hm;
            } else {
                hi_t = mid;
                g_hi = gm;
                h_hi = hm;
            }
        }
        let ub = g_lo
            .max(h_lo.clone())
            .min(g_hi.clone().max(h_hi));
        let lb = g_hi.max(h_lo);
        (lb, ub)
    }

    /// Bounds on `inf_{B ∈ other chain} max(e(hi, B), e(B, lo))`.
    fn inf_over_chain(
        &mut self,
        hi: &BodyAt,
        lo: &BodyAt,
        side: bool,
        tol: &Scalar,
        cutoff: Option<&Scalar>,
    ) -> (Scalar, Scalar) {
        let n_arcs = self.chain(side).arcs.len();
        let mut best_lb: Option<Scalar> = None;
        let mut best_ub: Option<Scalar> = None;
        for arc in 0..n_arcs {
            let arc_cutoff = match (&best_ub, cutoff) {
                (Some(u), Some(c)) => Some(u.clone().min(c.clone())),
                (Some(u), None) => Some(u.clone()),
                (None, Some(c)) => Some(c.clone()),
                (None, None) => None,
            };
            let (lb, ub) = self.arc_inf(hi, lo, side, arc, tol, arc_cutoff.as_ref());
            best_lb = Some(match best_lb {
                None => lb,
                Some(b) => b.min(lb),
            });
            best_ub = Some(match best_ub {
                None => ub,
                Some(b) => b.min(ub),
            });
        }
        (
            best_lb.expect("chain has arcs"),
            best_ub.expect("chain has arcs"),
        )
    }

    /// Certified bounds on `sup_{A ∈ from} inf_{B ∈ to} d_H(A, B)` with
    /// `ub - lb ≤ eps`, by branch-and-bound over the `from` chain.
    ///
    /// Interval upper bound: for `s ∈ [s0, s1]` inside one arc, every body
    /// sits between `A(s0)` and `A(s1)`, so
    /// `d_H(A(s), B) ≤ max(e(A(s1), B), e(B, A(s0)))` for any `B`; taking the
    /// inf over `B` bounds the sup over the subinterval.
    fn sup_inf(&mut self, from_side: bool, eps: &Scalar) -> (Scalar, Scalar) {
        let to_side = !from_side;
        let tol = eps * Scalar::ratio(1, 4);
        let n_arcs = self.chain(from_side).arcs.len();

        // Node: (arc, s0, s1, ub-on-interval).
        let mut global_lb = Scalar::zero();
        let mut nodes: Vec<(usize, Scalar, Scalar, Scalar)> = Vec::new();

        let eval_f = |eng: &mut Self, arc: usize, s: &Scalar, lb: &mut Scalar| -> Scalar {
            let a = eng.body(from_side, arc, s.clone());
            let (flb, fub) = eng.inf_over_chain(&a, &a, to_side, &tol, None);
            if flb > *lb {
                *lb = flb;
            }
            fub
        };

        for arc in 0..n_arcs {
            let s0 = self.chain(from_side).arcs[arc].t_lo.clone();
            let s1 = Scalar::one();
            eval_f(self, arc, &s0, &mut global_lb);
            if s0 != s1 {
                eval_f(self, arc, &s1, &mut global_lb);
                let a_hi = self.body(from_side, arc, s1.clone());
                let a_lo = self.body(from_side, arc, s0.clone());
                let (_, ub) = self.inf_over_chain(&a_hi, &a_lo, to_side, &tol, None);
                nodes.push((arc, s0, s1, ub));
            }
        }

        loop {
            // Pop the widest upper bound.
            let top = nodes
                .iter()
                .enumerate()
                .max_by(|a, b| a.1 .3.cmp(&b.1 .3))
                .map(|(i, _)| i);
            let (arc, s0, s1, ub) = match top {
                Some(i) => nodes.swap_remove(i),
                None => break,
            };
            if ub <= &global_lb + eps {
                // Every surviving interval is certified below lb + eps.
                let certified = ub.max(global_lb.clone());
                return (global_lb, certified);
            }
            let mid = (&s0 + &s1) * Scalar::ratio(1, 2);
            eval_f(self, arc, &mid, &mut global_lb);
            for (a, b) in [(s0, mid.clone()), (mid, s1)] {
                let a_hi = self.body(from_side, arc, b.clone());
                let a_lo = self.body(from_side, arc, a.clone());
                let (_, sub_ub) = self.inf_over_chain(&a_hi, &a_lo, to_side, &tol, None);
                nodes.push((arc, a, b, sub_ub));
            }
        }
        (global_lb.clone(), global_lb)
    }
}

/// Distance between the chains of two pumpkins, as compact subsets of the
/// space of bodies under the Hausdorff metric. Returns a certified value `v`
/// with `true ≤ v ≤ true + eps`.
///
/// Canonically equal chains short-circuit to an exact zero; otherwise the
/// value comes from adaptive branch-and-bound whose interval bounds follow
/// from inclusion monotonicity along each growth arc (the uniform `eps`-grid
/// is the worst case of this refinement, never the starting point).
pub fn pumpkin_dist(p: &Pumpkin, q: &Pumpkin, eps: &Scalar) -> Result<Scalar, PumpkinError> {
    if p.dim != q.dim {
        return Err(PumpkinError::DimensionMismatch {
            left: p.dim,
            right: q.dim,
        });
    }
    if !eps.is_positive() {
        return Err(PumpkinError::NonPositiveEps(eps.clone()));
    }
    let cp = canonical_chain(p);
    let cq = canonical_chain(q);
    if cp == cq {
        return Ok(Scalar::zero());
    }
    let mut engine = DistEngine::new(&cp, &cq);
    let (_, ub_pq) = engine.sup_inf(false, eps);
    let (_, ub_qp) = engine.sup_inf(true, eps);
    Ok(ub_pq.max(ub_qp))
}
