//! Exact geometry of symmetric convex polytopes in the sup-normed cube.
//!
//! Bodies live in `Ball_d = [-1,1]^d` for `d ∈ {1..4}` and are represented by
//! reduced generator sets: the body is the symmetric convex hull
//! `conv(G ∪ -G)`. All arithmetic is exact rational. Point-to-body and
//! Hausdorff distances are taken in the sup norm.
//!
//! Distance dispatch: dimension 1 and collinear generator sets have closed
//! forms, dimension 2 goes through an exact polygon dual, and everything else
//! falls back to the exact simplex in [`crate::simplex`].

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::scalar::Scalar;
use crate::simplex::{solve_min, Constraint, LpOutcome, Rel, Tableau};

/// Supported ambient dimensions.
pub const MAX_DIM: usize = 4;
/// Cap on generator counts, to keep the linear programs trivial.
pub const MAX_GENERATORS: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("empty input point set")]
    EmptyInput,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("unsupported dimension {0} (supported: 1..={MAX_DIM})")]
    UnsupportedDimension(usize),
    #[error("coordinate {0} outside [-1, 1]")]
    CoordinateOutOfRange(Scalar),
    #[error("coordinate index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("too many generators: {count} (cap {MAX_GENERATORS})")]
    TooManyGenerators { count: usize },
}

/// A point of `Ball_d`: `d` exact coordinates, each in `[-1, 1]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PointD {
    coords: Vec<Scalar>,
}

impl PointD {
    pub fn new(coords: Vec<Scalar>) -> Result<Self, GeometryError> {
        if coords.is_empty() || coords.len() > MAX_DIM {
            return Err(GeometryError::UnsupportedDimension(coords.len()));
        }
        let one = Scalar::one();
        for c in &coords {
            if c.abs() > one {
                return Err(GeometryError::CoordinateOutOfRange(c.clone()));
            }
        }
        Ok(PointD { coords })
    }

    pub fn origin(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim));
        PointD {
            coords: vec![Scalar::zero(); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &Scalar {
        &self.coords[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    pub fn sup_norm(&self) -> Scalar {
        self.coords
            .iter()
            .map(Scalar::abs)
            .fold(Scalar::zero(), Scalar::max)
    }

    pub fn sup_dist(&self, other: &PointD) -> Result<Scalar, GeometryError> {
        if self.dim() != other.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self
            .coords
            .iter()
            .zip(other.coords.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(Scalar::zero(), Scalar::max))
    }

    pub fn negated(&self) -> PointD {
        PointD {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    /// `t · self` for `|t| ≤ 1`, which stays inside the ball.
    pub fn scaled(&self, t: &Scalar) -> PointD {
        debug_assert!(t.abs() <= Scalar::one());
        PointD {
            coords: self.coords.iter().map(|c| c * t).collect(),
        }
    }

    /// Flip signs so the first nonzero coordinate is positive.
    pub fn sign_normalized(&self) -> PointD {
        match self.coords.iter().find(|c| !c.is_zero()) {
            Some(c) if c.is_negative() => self.negated(),
            _ => self.clone(),
        }
    }
}

impl Serialize for PointD {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.coords.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PointD {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let coords = Vec::<Scalar>::deserialize(deserializer)?;
        PointD::new(coords).map_err(serde::de::Error::custom)
    }
}

/// A closed subinterval of `[-1, 1]`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Interval {
    lo: Scalar,
    hi: Scalar,
}

impl Interval {
    pub fn new(lo: Scalar, hi: Scalar) -> Result<Self, GeometryError> {
        if lo > hi {
            return Err(GeometryError::CoordinateOutOfRange(lo));
        }
        let one = Scalar::one();
        if lo < -&one || hi > one {
            return Err(GeometryError::CoordinateOutOfRange(if lo < -Scalar::one() {
                lo
            } else {
                hi
            }));
        }
        Ok(Interval { lo, hi })
    }

    pub fn lo(&self) -> &Scalar {
        &self.lo
    }

    pub fn hi(&self) -> &Scalar {
        &self.hi
    }
}

/// A symmetric convex polytope `conv(G ∪ -G) ⊆ Ball_d` in canonical form:
/// generators are sign-normalized, sorted, and reduced (no generator lies in
/// the symmetric convex hull of the others). Canonical form is the equality
/// notion for bodies.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SymPolytope {
    dim: usize,
    generators: Vec<PointD>,
}

impl SymPolytope {
    /// The symmetric convex hull of a finite nonempty point set.
    pub fn sc_hull(points: &[PointD]) -> Result<Self, GeometryError> {
        if points.is_empty() {
            return Err(GeometryError::EmptyInput);
        }
        let dim = points[0].dim();
        for p in points {
            if p.dim() != dim {
                return Err(GeometryError::DimensionMismatch {
                    expected: dim,
                    got: p.dim(),
                });
            }
        }
        let mut pts: Vec<PointD> = points.iter().map(PointD::sign_normalized).collect();
        pts.sort();
        pts.dedup();
        if pts.len() > 1 {
            pts.retain(|p| !p.is_zero());
        }
        if pts.len() > MAX_GENERATORS {
            return Err(GeometryError::TooManyGenerators { count: pts.len() });
        }
        // Reduction: drop every point inside the hull of the survivors.
        // Removals never change the body, so one pass reaches the extreme
        // points regardless of order.
        let mut i = 0;
        while i < pts.len() && pts.len() > 1 {
            let mut others = Vec::with_capacity(pts.len() - 1);
            for (j, p) in pts.iter().enumerate() {
                if j != i {
                    others.push(p.clone());
                }
            }
            let redundant = matches!(gauge_in_gens(&pts[i], &others), Some(g) if g <= Scalar::one());
            if redundant {
                pts.remove(i);
            } else {
                i += 1;
            }
        }
        Ok(SymPolytope {
            dim,
            generators: pts,
        })
    }

    /// The degenerate body `{0}`.
    pub fn origin(dim: usize) -> Self {
        SymPolytope {
            dim,
            generators: vec![PointD::origin(dim)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[PointD] {
        &self.generators
    }

    pub fn is_origin_only(&self) -> bool {
        self.generators.len() == 1 && self.generators[0].is_zero()
    }

    fn check_dim(&self, v: &PointD) -> Result<(), GeometryError> {
        if v.dim() != self.dim {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim,
                got: v.dim(),
            });
        }
        Ok(())
    }

    /// Exact membership: `v ∈ conv(G ∪ -G)`.
    pub fn contains(&self, v: &PointD) -> Result<bool, GeometryError> {
        self.check_dim(v)?;
        Ok(matches!(gauge_in_gens(v, &self.generators), Some(g) if g <= Scalar::one()))
    }

    /// Minkowski gauge of `v` with respect to this body: the least `Σ|c|`
    /// writing `v = Σ c_j g_j`, or `None` when `v` is outside the linear
    /// span of the generators.
    pub fn gauge(&self, v: &PointD) -> Result<Option<Scalar>, GeometryError> {
        self.check_dim(v)?;
        Ok(gauge_in_gens(v, &self.generators))
    }

    /// Exact sup-norm distance from a point to the body.
    pub fn point_dist(&self, v: &PointD) -> Result<Scalar, GeometryError> {
        self.check_dim(v)?;
        Ok(point_dist_to_gens(v, &self.generators))
    }

    /// Exact Hausdorff distance between two bodies in the sup metric.
    ///
    /// `x ↦ d(x, Q)` is convex, hence maximized at an extreme point, and
    /// extreme points sit among `±G`; symmetry of the bodies collapses the
    /// sign, so scanning generators is enough.
    pub fn hausdorff(&self, other: &SymPolytope) -> Result<Scalar, GeometryError> {
        if self.dim != other.dim {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut best = Scalar::zero();
        for g in &self.generators {
            best = best.max(point_dist_to_gens(g, &other.generators));
        }
        for h in &other.generators {
            best = best.max(point_dist_to_gens(h, &self.generators));
        }
        Ok(best)
    }

    /// Range of the `i`-th coordinate over the body (0-based index).
    /// Always symmetric: `[-m, m]` with `m = max_g |g_i|`.
    pub fn proj_range(&self, i: usize) -> Result<Interval, GeometryError> {
        if i >= self.dim {
            return Err(GeometryError::IndexOutOfRange {
                index: i,
                dim: self.dim,
            });
        }
        let m = self.proj_radius(i);
        Interval::new(-&m, m)
    }

    /// `max_g |g_i|`, the half-width of the `i`-th coordinate projection.
    pub fn proj_radius(&self, i: usize) -> Scalar {
        self.generators
            .iter()
            .map(|g| g.coord(i).abs())
            .fold(Scalar::zero(), Scalar::max)
    }

    /// Sup-norm radius of the body (= Hausdorff distance from `{0}`).
    pub fn radius(&self) -> Scalar {
        self.generators
            .iter()
            .map(PointD::sup_norm)
            .fold(Scalar::zero(), Scalar::max)
    }
}

impl Serialize for SymPolytope {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.generators.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SymPolytope {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let pts = Vec::<PointD>::deserialize(deserializer)?;
        SymPolytope::sc_hull(&pts).map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Distance and gauge kernels over raw generator slices.
//
// The pumpkin distance engine works on unreduced generator sets (redundant
// generators do not change any of the quantities below), so these run on
// slices rather than on `SymPolytope`.
// ---------------------------------------------------------------------------

/// If every generator is a rational multiple of a common direction, return
/// the segment endpoint `w` with the body equal to `{ s·w : |s| ≤ 1 }`.
fn collinear_endpoint(gens: &[PointD]) -> Option<PointD> {
    let u = gens.iter().find(|g| !g.is_zero())?;
    let dim = u.dim();
    let pivot = (0..dim).find(|&i| !u.coord(i).is_zero())?;
    let mut endpoint: Option<(Scalar, &PointD)> = None;
    for g in gens {
        // g = λ·u requires every coordinate to scale by the same factor.
        let lambda = g.coord(pivot) / u.coord(pivot);
        for i in 0..dim {
            if g.coord(i) != &(&lambda * u.coord(i)) {
                return None;
            }
        }
        let mag = lambda.abs();
        if endpoint.as_ref().is_none_or(|(m, _)| mag > *m) {
            endpoint = Some((mag, g));
        }
    }
    endpoint.map(|(_, g)| g.clone())
}

/// Exact distance from `v` to the segment `{ s·w : |s| ≤ 1 }` in the sup
/// norm: the minimum of the convex piecewise-linear `s ↦ max_i |v_i - s w_i|`
/// is attained at a kink or crossing, all of which are enumerated.
fn dist_to_segment(v: &PointD, w: &PointD) -> Scalar {
    let d = v.dim();
    let one = Scalar::one();
    let mut candidates = vec![-&one, one.clone()];
    let mut push = |s: Scalar| {
        if s.abs() <= one {
            candidates.push(s);
        }
    };
    for i in 0..d {
        if !w.coord(i).is_zero() {
            push(v.coord(i) / w.coord(i));
        }
        for j in (i + 1)..d {
            let den_minus = w.coord(i) - w.coord(j);
            if !den_minus.is_zero() {
                push((v.coord(i) - v.coord(j)) / den_minus);
            }
            let den_plus = w.coord(i) + w.coord(j);
            if !den_plus.is_zero() {
                push((v.coord(i) + v.coord(j)) / den_plus);
            }
        }
    }
    let eval = |s: &Scalar| -> Scalar {
        (0..d)
            .map(|i| (v.coord(i) - &(s * w.coord(i))).abs())
            .fold(Scalar::zero(), Scalar::max)
    };
    candidates
        .iter()
        .map(eval)
        .min()
        .expect("candidate list is nonempty")
}

/// Exact sup-norm distance from `v` to `conv(G ∪ -G)`.
pub fn point_dist_to_gens(v: &PointD, gens: &[PointD]) -> Scalar {
    debug_assert!(!gens.is_empty());
    let d = v.dim();
    if d == 1 {
        let r = gens
            .iter()
            .map(PointD::sup_norm)
            .fold(Scalar::zero(), Scalar::max);
        let gap = v.coord(0).abs() - r;
        return if gap.is_negative() { Scalar::zero() } else { gap };
    }
    if let Some(w) = collinear_endpoint(gens) {
        return dist_to_segment(v, &w);
    }
    if gens.iter().all(PointD::is_zero) {
        return v.sup_norm();
    }
    if d == 2 {
        return dist_polygon_dual(v, gens);
    }
    point_dist_lp(v, gens)
}

/// Cheap exact lower bound: per-coordinate projection gaps.
pub fn point_dist_lower_bound(v: &PointD, gens: &[PointD]) -> Scalar {
    let d = v.dim();
    let mut best = Scalar::zero();
    for i in 0..d {
        let m = gens
            .iter()
            .map(|g| g.coord(i).abs())
            .fold(Scalar::zero(), Scalar::max);
        let gap = v.coord(i).abs() - m;
        if gap > best {
            best = gap;
        }
    }
    best
}

/// Cheap exact upper bound: nearest of `±G ∪ {0}`.
pub fn point_dist_upper_bound(v: &PointD, gens: &[PointD]) -> Scalar {
    let mut best = v.sup_norm();
    for g in gens {
        best = best.min(v.sup_dist(g).expect("same dimension"));
        best = best.min(v.sup_dist(&g.negated()).expect("same dimension"));
    }
    best
}

/// Minkowski gauge of `v` with respect to `conv(G ∪ -G)`:
/// `min { Σ|c| : v = Σ c_j g_j }`, or `None` if `v` is outside the span.
pub fn gauge_in_gens(v: &PointD, gens: &[PointD]) -> Option<Scalar> {
    let d = v.dim();
    if v.is_zero() {
        return Some(Scalar::zero());
    }
    if d == 1 {
        let r = gens
            .iter()
            .map(PointD::sup_norm)
            .fold(Scalar::zero(), Scalar::max);
        return if r.is_zero() {
            None
        } else {
            Some(v.coord(0).abs() / r)
        };
    }
    if let Some(w) = collinear_endpoint(gens) {
        // v must be a multiple of the segment endpoint.
        if w.is_zero() {
            return None;
        }
        let pivot = (0..d).find(|&i| !w.coord(i).is_zero()).expect("w is nonzero");
        let lambda = v.coord(pivot) / w.coord(pivot);
        for i in 0..d {
            if v.coord(i) != &(&lambda * w.coord(i)) {
                return None;
            }
        }
        return Some(lambda.abs());
    }
    gauge_lp(v, gens)
}

// ---------------------------------------------------------------------------
// Dimension-2 polygon dual.
// ---------------------------------------------------------------------------

fn cross(o: &PointD, a: &PointD, b: &PointD) -> Scalar {
    let ax = a.coord(0) - o.coord(0);
    let ay = a.coord(1) - o.coord(1);
    let bx = b.coord(0) - o.coord(0);
    let by = b.coord(1) - o.coord(1);
    &ax * &by - &ay * &bx
}

/// Counterclockwise convex hull (Andrew's monotone chain, exact
/// orientations, collinear points dropped). Input must be full-dimensional.
fn hull_2d(points: &[PointD]) -> Vec<PointD> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    let n = pts.len();
    debug_assert!(n >= 3);
    let mut lower: Vec<PointD> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive()
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<PointD> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive()
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Exact distance from `v` to a full-dimensional planar body via the dual
/// form `max_u (⟨u,v⟩ - h(u)) / ‖u‖₁`: the maximizer is an extreme ray of a
/// normal-fan cone intersected with a quadrant, i.e. a facet normal or `±e_i`.
fn dist_polygon_dual(v: &PointD, gens: &[PointD]) -> Scalar {
    let mut signed: Vec<PointD> = Vec::with_capacity(gens.len() * 2);
    for g in gens {
        if !g.is_zero() {
            signed.push(g.clone());
            signed.push(g.negated());
        }
    }
    let hull = hull_2d(&signed);
    let k = hull.len();
    let mut candidates: Vec<(Scalar, Scalar)> = Vec::with_capacity(k + 4);
    for i in 0..k {
        let p = &hull[i];
        let q = &hull[(i + 1) % k];
        // Outward normal of the ccw edge p→q.
        let nx = q.coord(1) - p.coord(1);
        let ny = p.coord(0) - q.coord(0);
        candidates.push((nx, ny));
    }
    let one = Scalar::one();
    candidates.push((one.clone(), Scalar::zero()));
    candidates.push((-&one, Scalar::zero()));
    candidates.push((Scalar::zero(), one.clone()));
    candidates.push((Scalar::zero(), -&one));

    let mut best = Scalar::zero();
    for (ux, uy) in &candidates {
        let l1 = ux.abs() + uy.abs();
        if l1.is_zero() {
            continue;
        }
        let dot_v = ux * v.coord(0) + uy * v.coord(1);
        let support = gens
            .iter()
            .map(|g| (ux * g.coord(0) + uy * g.coord(1)).abs())
            .fold(Scalar::zero(), Scalar::max);
        let val = (dot_v - support) / l1;
        if val > best {
            best = val;
        }
    }
    best
}

// ---------------------------------------------------------------------------
// LP fallbacks.
// ---------------------------------------------------------------------------

/// `min t` s.t. `|v_i - Σ_j c_j g_j[i]| ≤ t`, `Σ|c_j| ≤ 1`, split `c = λ - μ`.
///
/// Runs a single simplex phase from the known feasible vertex
/// `λ = μ = 0, t = ‖v‖∞`, skipping artificial variables entirely.
fn point_dist_lp(v: &PointD, gens: &[PointD]) -> Scalar {
    let d = v.dim();
    let m = gens.len();
    let t0 = v.sup_norm();
    if t0.is_zero() {
        return Scalar::zero(); // the origin is in every body
    }
    // Columns: λ_1..λ_m, μ_1..μ_m, t, s1_1..s1_d, s2_1..s2_d, u.
    let cols = 2 * m + 1 + 2 * d + 1;
    let t_col = 2 * m;
    let s1_col = |i: usize| 2 * m + 1 + i;
    let s2_col = |i: usize| 2 * m + 1 + d + i;
    let u_col = cols - 1;

    let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(2 * d + 1);
    for i in 0..d {
        // Ge_i:  Σ(λ-μ)g_i + t - s1_i = v_i
        let mut ge = vec![Scalar::zero(); cols + 1];
        // Le_i:  Σ(λ-μ)g_i - t + s2_i = v_i
        let mut le = vec![Scalar::zero(); cols + 1];
        for (j, g) in gens.iter().enumerate() {
            ge[j] = g.coord(i).clone();
            ge[m + j] = -g.coord(i);
            le[j] = g.coord(i).clone();
            le[m + j] = -g.coord(i);
        }
        ge[t_col] = Scalar::one();
        ge[s1_col(i)] = -Scalar::one();
        ge[cols] = v.coord(i).clone();
        le[t_col] = -Scalar::one();
        le[s2_col(i)] = Scalar::one();
        le[cols] = v.coord(i).clone();
        rows.push(ge);
        rows.push(le);
    }
    let mut budget = vec![Scalar::zero(); cols + 1];
    for j in 0..2 * m {
        budget[j] = Scalar::one();
    }
    budget[u_col] = Scalar::one();
    budget[cols] = Scalar::one();
    rows.push(budget);

    let n_rows = rows.len();
    let mut t = Tableau {
        rows,
        obj: vec![Scalar::zero(); cols + 1],
        basis: vec![usize::MAX; n_rows],
        cols,
    };

    // Make t basic on the row of the coordinate attaining ‖v‖∞, then the
    // designated slack basic on every other row. Pivoting normalizes signs.
    let i_star = (0..d)
        .max_by(|&a, &b| v.coord(a).abs().cmp(&v.coord(b).abs()))
        .expect("d >= 1");
    let r_star = if v.coord(i_star).is_negative() {
        2 * i_star + 1 // Le row: -t carries positive value after sign flip
    } else {
        2 * i_star // Ge row
    };
    t.pivot(r_star, t_col);
    for i in 0..d {
        if 2 * i != r_star {
            t.pivot(2 * i, s1_col(i));
        }
        if 2 * i + 1 != r_star {
            t.pivot(2 * i + 1, s2_col(i));
        }
    }
    t.pivot(2 * d, u_col);
    debug_assert!(t.rows.iter().all(|r| !r[cols].is_negative()));

    // Reduced costs for min t: subtract the basic t row from e_t.
    t.obj[t_col] = Scalar::one();
    let t_row = t.rows[t.basis.iter().position(|&b| b == t_col).expect("t is basic")].clone();
    for (o, p) in t.obj.iter_mut().zip(t_row.iter()) {
        if !p.is_zero() {
            *o = &*o - p;
        }
    }
    if t.run().is_err() {
        unreachable!("distance objective is bounded below by zero");
    }
    let x = t.solution(cols);
    x[t_col].clone()
}

/// `min Σ(λ+μ)` s.t. `Σ (λ_j - μ_j) g_j = v`; `None` when `v ∉ span(G)`.
fn gauge_lp(v: &PointD, gens: &[PointD]) -> Option<Scalar> {
    let d = v.dim();
    let m = gens.len();
    let cols = 2 * m;
    let objective = vec![Scalar::one(); cols];
    let mut constraints = Vec::with_capacity(d);
    for i in 0..d {
        let mut row = vec![Scalar::zero(); cols];
        for (j, g) in gens.iter().enumerate() {
            row[j] = g.coord(i).clone();
            row[m + j] = -g.coord(i);
        }
        constraints.push(Constraint::new(row, Rel::Eq, v.coord(i).clone()));
    }
    match solve_min(&objective, &constraints) {
        LpOutcome::Optimal { value, .. } => Some(value),
        LpOutcome::Infeasible => None,
        LpOutcome::Unbounded => unreachable!("gauge objective is bounded below"),
    }
}
