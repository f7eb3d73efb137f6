//! Finite metric spaces and the 1-Lipschitz-surjection quasiorder.
//!
//! `K ≤ L` when some 1-Lipschitz surjection `L → K` exists; the searches
//! here are exhaustive backtracking over assignment tables and always return
//! the lexicographically least witness, so results are deterministic.
//! Finite colourings (1-Lipschitz maps into a finite target) support the
//! sup distance and the factorization search behind universality checks.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LipschitzError {
    #[error("distance matrix is {rows}x{cols}, expected square of side {labels}")]
    ShapeMismatch {
        labels: usize,
        rows: usize,
        cols: usize,
    },
    #[error("empty space")]
    Empty,
    #[error("nonzero diagonal at {0}")]
    NonzeroDiagonal(usize),
    #[error("asymmetric distances between {0} and {1}")]
    Asymmetric(usize, usize),
    #[error("negative distance between {0} and {1}")]
    Negative(usize, usize),
    #[error("triangle inequality fails on ({0}, {1}, {2})")]
    TriangleViolation(usize, usize, usize),
    #[error("map table has {got} entries, domain has {expected}")]
    TableSize { expected: usize, got: usize },
    #[error("table value {value} out of range (codomain size {size})")]
    TableValue { value: usize, size: usize },
    #[error("colouring is not 1-Lipschitz at pair ({0}, {1})")]
    NotLipschitz(usize, usize),
    #[error("colourings are not over the same domain")]
    DomainMismatch,
    #[error("colourings do not share a target space")]
    TargetMismatch,
    #[error("subdomain index {0} out of range")]
    BadSubdomain(usize),
    #[error("eps must be nonnegative")]
    NegativeEps,
}

/// A finite (pseudo)metric space: labelled points and an exact symmetric
/// distance matrix satisfying the triangle inequality. Zero distances
/// between distinct points are allowed; degenerate spaces are legal.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<Vec<Scalar>>,
}

impl FiniteMetricSpace {
    pub fn new(labels: Vec<String>, dist: Vec<Vec<Scalar>>) -> Result<Self, LipschitzError> {
        let n = labels.len();
        if n == 0 {
            return Err(LipschitzError::Empty);
        }
        if dist.len() != n || dist.iter().any(|r| r.len() != n) {
            return Err(LipschitzError::ShapeMismatch {
                labels: n,
                rows: dist.len(),
                cols: dist.first().map_or(0, Vec::len),
            });
        }
        for i in 0..n {
            if !dist[i][i].is_zero() {
                return Err(LipschitzError::NonzeroDiagonal(i));
            }
            for j in 0..n {
                if dist[i][j].is_negative() {
                    return Err(LipschitzError::Negative(i, j));
                }
                if dist[i][j] != dist[j][i] {
                    return Err(LipschitzError::Asymmetric(i, j));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if dist[i][j] > &dist[i][k] + &dist[k][j] {
                        return Err(LipschitzError::TriangleViolation(i, j, k));
                    }
                }
            }
        }
        Ok(FiniteMetricSpace { labels, dist })
    }

    /// Space with `n` unnamed points (labels `p0..`), useful in tests.
    pub fn from_matrix(dist: Vec<Vec<Scalar>>) -> Result<Self, LipschitzError> {
        let labels = (0..dist.len()).map(|i| format!("p{i}")).collect();
        FiniteMetricSpace::new(labels, dist)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false // constructor rejects empty spaces
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dist(&self, i: usize, j: usize) -> &Scalar {
        &self.dist[i][j]
    }

    pub fn diameter(&self) -> Scalar {
        let mut m = Scalar::zero();
        for row in &self.dist {
            for v in row {
                m = m.max(v.clone());
            }
        }
        m
    }

    /// The sub-metric-space on the given point indices, in the given order.
    pub fn restriction(&self, points: &[usize]) -> Result<FiniteMetricSpace, LipschitzError> {
        for &p in points {
            if p >= self.len() {
                return Err(LipschitzError::TableValue {
                    value: p,
                    size: self.len(),
                });
            }
        }
        let labels = points.iter().map(|&p| self.labels[p].clone()).collect();
        let dist = points
            .iter()
            .map(|&a| points.iter().map(|&b| self.dist[a][b].clone()).collect())
            .collect();
        Ok(FiniteMetricSpace { labels, dist })
    }
}

impl<'de> Deserialize<'de> for FiniteMetricSpace {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let doc = MetricSpaceDoc::deserialize(deserializer)?;
        FiniteMetricSpace::new(doc.labels, doc.dist).map_err(serde::de::Error::custom)
    }
}

/// Raw wire form of a metric space, prior to axiom checking. The CLI parses
/// this first so that axiom violations surface as semantic errors, not parse
/// errors.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MetricSpaceDoc {
    pub labels: Vec<String>,
    pub dist: Vec<Vec<Scalar>>,
}

/// A total map between two finite metric spaces, as an index table.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PointMap {
    pub domain: FiniteMetricSpace,
    pub codomain: FiniteMetricSpace,
    pub table: Vec<usize>,
}

impl PointMap {
    pub fn new(
        domain: FiniteMetricSpace,
        codomain: FiniteMetricSpace,
        table: Vec<usize>,
    ) -> Result<Self, LipschitzError> {
        if table.len() != domain.len() {
            return Err(LipschitzError::TableSize {
                expected: domain.len(),
                got: table.len(),
            });
        }
        for &v in &table {
            if v >= codomain.len() {
                return Err(LipschitzError::TableValue {
                    value: v,
                    size: codomain.len(),
                });
            }
        }
        Ok(PointMap {
            domain,
            codomain,
            table,
        })
    }
}

/// `d(f(a), f(b)) ≤ d(a, b)` for every pair, decided exactly.
pub fn is_one_lipschitz(f: &PointMap) -> bool {
    let n = f.domain.len();
    for a in 0..n {
        for b in (a + 1)..n {
            if f.codomain.dist(f.table[a], f.table[b]) > f.domain.dist(a, b) {
                return false;
            }
        }
    }
    true
}

/// The quasiorder `K ≤ L`: the lexicographically least 1-Lipschitz
/// surjection `L → K`, or `None`.
pub fn leq(k: &FiniteMetricSpace, l: &FiniteMetricSpace) -> Option<PointMap> {
    if k.len() > l.len() {
        return None; // no surjection at all
    }
    let mut table = vec![0usize; l.len()];
    let mut hit = vec![0usize; k.len()];
    if search_surjection(k, l, &mut table, &mut hit, 0) {
        Some(PointMap::new(l.clone(), k.clone(), table).expect("search built a valid table"))
    } else {
        None
    }
}

fn search_surjection(
    k: &FiniteMetricSpace,
    l: &FiniteMetricSpace,
    table: &mut Vec<usize>,
    hit: &mut Vec<usize>,
    pos: usize,
) -> bool {
    let nl = l.len();
    let nk = k.len();
    if pos == nl {
        return hit.iter().all(|&c| c > 0);
    }
    // Surjectivity prune: the unfilled tail must cover the unhit values.
    let unhit = hit.iter().filter(|&&c| c == 0).count();
    if unhit > nl - pos {
        return false;
    }
    'candidates: for v in 0..nk {
        for prev in 0..pos {
            if k.dist(v, table[prev]) > l.dist(pos, prev) {
                continue 'candidates;
            }
        }
        table[pos] = v;
        hit[v] += 1;
        if search_surjection(k, l, table, hit, pos + 1) {
            return true;
        }
        hit[v] -= 1;
    }
    false
}

/// Does a distance-preserving bijection exist?
pub fn isometric(k: &FiniteMetricSpace, l: &FiniteMetricSpace) -> bool {
    if k.len() != l.len() {
        return false;
    }
    let n = k.len();
    let mut table = vec![0usize; n];
    let mut used = vec![false; n];
    search_isometry(k, l, &mut table, &mut used, 0, n)
}

fn search_isometry(
    k: &FiniteMetricSpace,
    l: &FiniteMetricSpace,
    table: &mut Vec<usize>,
    used: &mut Vec<bool>,
    pos: usize,
    n: usize,
) -> bool {
    if pos == n {
        return true;
    }
    'candidates: for v in 0..n {
        if used[v] {
            continue;
        }
        for prev in 0..pos {
            if k.dist(v, table[prev]) != l.dist(pos, prev) {
                continue 'candidates;
            }
        }
        table[pos] = v;
        used[v] = true;
        if search_isometry(k, l, table, used, pos + 1, n) {
            return true;
        }
        used[v] = false;
    }
    false
}

/// A colouring: a 1-Lipschitz map from a finite domain into a finite target
/// space, checked at construction.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ColouringTable {
    domain: FiniteMetricSpace,
    target: FiniteMetricSpace,
    table: Vec<usize>,
}

impl ColouringTable {
    pub fn new(
        domain: FiniteMetricSpace,
        target: FiniteMetricSpace,
        table: Vec<usize>,
    ) -> Result<Self, LipschitzError> {
        let map = PointMap::new(domain, target, table)?;
        let n = map.domain.len();
        for a in 0..n {
            for b in (a + 1)..n {
                if map.codomain.dist(map.table[a], map.table[b]) > map.domain.dist(a, b) {
                    return Err(LipschitzError::NotLipschitz(a, b));
                }
            }
        }
        Ok(ColouringTable {
            domain: map.domain,
            target: map.codomain,
            table: map.table,
        })
    }

    pub fn domain(&self) -> &FiniteMetricSpace {
        &self.domain
    }

    pub fn target(&self) -> &FiniteMetricSpace {
        &self.target
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn value(&self, x: usize) -> usize {
        self.table[x]
    }

    /// Distinct target indices in the image, ascending.
    pub fn image(&self) -> Vec<usize> {
        let mut img: Vec<usize> = self.table.clone();
        img.sort_unstable();
        img.dedup();
        img
    }
}

impl<'de> Deserialize<'de> for ColouringTable {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let doc = ColouringDoc::deserialize(deserializer)?;
        let domain = FiniteMetricSpace::new(doc.domain.labels, doc.domain.dist)
            .map_err(serde::de::Error::custom)?;
        let target = FiniteMetricSpace::new(doc.target.labels, doc.target.dist)
            .map_err(serde::de::Error::custom)?;
        ColouringTable::new(domain, target, doc.table).map_err(serde::de::Error::custom)
    }
}

/// Raw wire form of a colouring.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ColouringDoc {
    pub domain: MetricSpaceDoc,
    pub target: MetricSpaceDoc,
    pub table: Vec<usize>,
}

/// `max_x d(χ(x), ψ(x))` for colourings over the same domain into the same
/// declared target space.
pub fn sup_dist(chi: &ColouringTable, psi: &ColouringTable) -> Result<Scalar, LipschitzError> {
    if chi.domain != psi.domain {
        return Err(LipschitzError::DomainMismatch);
    }
    if chi.target != psi.target {
        return Err(LipschitzError::TargetMismatch);
    }
    let mut m = Scalar::zero();
    for x in 0..chi.domain.len() {
        m = m.max(chi.target.dist(chi.table[x], psi.table[x]).clone());
    }
    Ok(m)
}

/// Search for a subdomain `S` and a 1-Lipschitz map `f` from the image of
/// `χ` (as a sub-metric-space of its target) into `ψ`'s target with
/// `sup_{x ∈ S} d(ψ(x), f(χ(x))) ≤ eps`.
///
/// Subdomains are tried in the given order; maps lexicographically over
/// assignments to the (ascending) image points. The first hit is returned.
pub fn factorization_search(
    chi: &ColouringTable,
    psi: &ColouringTable,
    subdomains: &[Vec<usize>],
    eps: &Scalar,
) -> Result<Option<(usize, PointMap)>, LipschitzError> {
    if chi.domain != psi.domain {
        return Err(LipschitzError::DomainMismatch);
    }
    if eps.is_negative() {
        return Err(LipschitzError::NegativeEps);
    }
    let n = chi.domain.len();
    for (si, sub) in subdomains.iter().enumerate() {
        for &x in sub {
            if x >= n {
                return Err(LipschitzError::BadSubdomain(si));
            }
        }
    }

    let image = chi.image();
    let image_space = chi.target.restriction(&image)?;
    // Position of each image point in the ascending image list.
    let pos_of = |t: usize| image.binary_search(&t).expect("t is in the image");

    for (si, sub) in subdomains.iter().enumerate() {
        let mut table = vec![0usize; image.len()];
        if search_factor(
            chi,
            psi,
            sub,
            eps,
            &image,
            &image_space,
            &pos_of,
            &mut table,
            0,
        ) {
            let map = PointMap::new(image_space.clone(), psi.target.clone(), table)?;
            return Ok(Some((si, map)));
        }
    }
    Ok(None)
}

#[allow(clippy::too_many_arguments)]
fn search_factor(
    chi: &ColouringTable,
    psi: &ColouringTable,
    sub: &[usize],
    eps: &Scalar,
    image: &[usize],
    image_space: &FiniteMetricSpace,
    pos_of: &dyn Fn(usize) -> usize,
    table: &mut Vec<usize>,
    pos: usize,
) -> bool {
    if pos == image.len() {
        return true;
    }
    let nt = psi.target().len();
    'candidates: for v in 0..nt {
        // 1-Lipschitz against already-assigned image points.
        for prev in 0..pos {
            if psi.target().dist(v, table[prev]) > image_space.dist(pos, prev) {
                continue 'candidates;
            }
        }
        // Closeness on the subdomain for every x whose χ-image is this point.
        for &x in sub {
            if pos_of(chi.value(x)) == pos
                && psi.target().dist(psi.value(x), v) > eps
            {
                continue 'candidates;
            }
        }
        table[pos] = v;
        if search_factor(chi, psi, sub, eps, image, image_space, pos_of, table, pos + 1) {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    fn space(dist: &[&[(i64, i64)]]) -> FiniteMetricSpace {
        FiniteMetricSpace::from_matrix(
            dist.iter()
                .map(|r| r.iter().map(|&(n, d)| s(n, d)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn singleton() -> FiniteMetricSpace {
        space(&[&[(0, 1)]])
    }

    fn two_points(n: i64, d: i64) -> FiniteMetricSpace {
        space(&[&[(0, 1), (n, d)], &[(n, d), (0, 1)]])
    }

    #[test]
    fn constructor_enforces_axioms() {
        assert!(matches!(
            FiniteMetricSpace::from_matrix(vec![vec![s(1, 2)]]),
            Err(LipschitzError::NonzeroDiagonal(0))
        ));
        let asym = FiniteMetricSpace::from_matrix(vec![
            vec![s(0, 1), s(1, 2)],
            vec![s(1, 4), s(0, 1)],
        ]);
        assert!(matches!(asym, Err(LipschitzError::Asymmetric(0, 1))));
        let tri = FiniteMetricSpace::from_matrix(vec![
            vec![s(0, 1), s(1, 1), s(1, 4)],
            vec![s(1, 1), s(0, 1), s(1, 4)],
            vec![s(1, 4), s(1, 4), s(0, 1)],
        ]);
        assert!(matches!(tri, Err(LipschitzError::TriangleViolation(..))));
    }

    #[test]
    fn lipschitz_check_examples() {
        let k = two_points(1, 2);
        let ident = PointMap::new(k.clone(), k.clone(), vec![0, 1]).unwrap();
        assert!(is_one_lipschitz(&ident));
        let constant = PointMap::new(k.clone(), k.clone(), vec![0, 0]).unwrap();
        assert!(is_one_lipschitz(&constant));
        // Sending a 1/2-distant pair onto a 1-distant pair stretches.
        let big = two_points(1, 1);
        let stretch = PointMap::new(k, big, vec![0, 1]).unwrap();
        assert!(!is_one_lipschitz(&stretch));
    }

    #[test]
    fn leq_examples() {
        let k = singleton();
        let l = two_points(1, 2);
        let w = leq(&k, &l).expect("constant witness");
        assert_eq!(w.table, vec![0, 0]);

        let w = leq(&l, &l).expect("identity or earlier");
        assert_eq!(w.table, vec![0, 1]); // lexicographically least surjection

        // K two points at distance 1, L two points at distance 1/2: none.
        let big = two_points(1, 1);
        assert!(leq(&big, &l).is_none());
        // The other way round shrinks, which is fine.
        assert!(leq(&l, &big).is_some());
    }

    #[test]
    fn leq_witness_is_lexicographically_least() {
        // Exhaustive cross-check on a 3-point pair.
        let k = space(&[
            &[(0, 1), (1, 2), (1, 1)],
            &[(1, 2), (0, 1), (1, 2)],
            &[(1, 1), (1, 2), (0, 1)],
        ]);
        let witness = leq(&k, &k).unwrap();
        let mut best: Option<Vec<usize>> = None;
        let n = k.len();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let table = vec![a, b, c];
                    let pm = PointMap::new(k.clone(), k.clone(), table.clone()).unwrap();
                    let mut hit = vec![false; n];
                    table.iter().for_each(|&v| hit[v] = true);
                    if hit.iter().all(|&h| h)
                        && is_one_lipschitz(&pm)
                        && best.as_ref().is_none_or(|b| table < *b)
                    {
                        best = Some(table);
                    }
                }
            }
        }
        assert_eq!(witness.table, best.unwrap());
    }

    #[test]
    fn isometric_examples() {
        let l = two_points(1, 2);
        let relabelled = FiniteMetricSpace::new(
            vec!["x".into(), "y".into()],
            vec![vec![s(0, 1), s(1, 2)], vec![s(1, 2), s(0, 1)]],
        )
        .unwrap();
        assert!(isometric(&l, &relabelled));
        assert!(!isometric(&l, &singleton()));
        assert!(!isometric(&l, &two_points(1, 1)));
    }

    #[test]
    fn quasiorder_antisymmetry_on_small_cases() {
        let spaces = [
            singleton(),
            two_points(1, 2),
            two_points(1, 1),
            space(&[
                &[(0, 1), (1, 2), (1, 2)],
                &[(1, 2), (0, 1), (1, 1)],
                &[(1, 2), (1, 1), (0, 1)],
            ]),
        ];
        for k in &spaces {
            for l in &spaces {
                let both = leq(k, l).is_some() && leq(l, k).is_some();
                assert_eq!(both, isometric(k, l));
            }
        }
    }

    #[test]
    fn leq_is_reflexive_and_transitive() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(37);
        let values = [s(1, 4), s(1, 2), s(3, 4), s(1, 1)];
        let draw = |rng: &mut rand_chacha::ChaCha8Rng| loop {
            let n = rng.gen_range(1..=3usize);
            let mut dist = vec![vec![s(0, 1); n]; n];
            for a in 0..n {
                for b in (a + 1)..n {
                    let v = values[rng.gen_range(0..values.len())].clone();
                    dist[a][b] = v.clone();
                    dist[b][a] = v;
                }
            }
            if let Ok(space) = FiniteMetricSpace::from_matrix(dist) {
                return space;
            }
        };
        for _ in 0..30 {
            let k = draw(&mut rng);
            let l = draw(&mut rng);
            let m = draw(&mut rng);
            assert!(leq(&k, &k).is_some(), "reflexivity");
            if let (Some(f), Some(g)) = (leq(&k, &l), leq(&l, &m)) {
                // f: L → K, g: M → L; the composite M → K is a 1-Lipschitz
                // surjection, so K ≤ M must hold.
                let composite: Vec<usize> = g.table.iter().map(|&v| f.table[v]).collect();
                let pm = PointMap::new(m.clone(), k.clone(), composite).unwrap();
                assert!(is_one_lipschitz(&pm), "composite is 1-Lipschitz");
                assert!(leq(&k, &m).is_some(), "transitivity");
            }
        }
    }

    #[test]
    fn sup_dist_examples() {
        let dom = two_points(1, 2);
        let target = space(&[
            &[(0, 1), (1, 4), (1, 2)],
            &[(1, 4), (0, 1), (1, 2)],
            &[(1, 2), (1, 2), (0, 1)],
        ]);
        let chi = ColouringTable::new(dom.clone(), target.clone(), vec![0, 2]).unwrap();
        let psi = ColouringTable::new(dom.clone(), target.clone(), vec![1, 2]).unwrap();
        assert_eq!(sup_dist(&chi, &chi).unwrap(), s(0, 1));
        assert_eq!(sup_dist(&chi, &psi).unwrap(), s(1, 4));

        let other_dom = two_points(1, 1);
        let rho = ColouringTable::new(other_dom, target, vec![0, 2]).unwrap();
        assert!(matches!(
            sup_dist(&chi, &rho),
            Err(LipschitzError::DomainMismatch)
        ));
    }

    #[test]
    fn factorization_finds_postcomposition() {
        // ψ = g ∘ χ for a 1-Lipschitz g, eps = 0.
        let dom = space(&[
            &[(0, 1), (1, 2), (1, 1)],
            &[(1, 2), (0, 1), (1, 2)],
            &[(1, 1), (1, 2), (0, 1)],
        ]);
        let target = space(&[
            &[(0, 1), (1, 2), (1, 1)],
            &[(1, 2), (0, 1), (1, 2)],
            &[(1, 1), (1, 2), (0, 1)],
        ]);
        let chi = ColouringTable::new(dom.clone(), target.clone(), vec![0, 1, 2]).unwrap();
        // g collapses everything onto point 1.
        let psi = ColouringTable::new(dom.clone(), target.clone(), vec![1, 1, 1]).unwrap();
        let subdomains = vec![vec![0, 1, 2]];
        let hit = factorization_search(&chi, &psi, &subdomains, &Scalar::zero())
            .unwrap()
            .expect("g itself factors");
        assert_eq!(hit.0, 0);
        assert_eq!(hit.1.table, vec![1, 1, 1]);
        assert!(is_one_lipschitz(&hit.1));
    }

    #[test]
    fn factorization_fails_when_psi_spreads_wider_than_eps() {
        // χ constant, ψ with image diameter > 2·eps on every subdomain.
        let dom = two_points(1, 1);
        let target = two_points(1, 1);
        let chi = ColouringTable::new(dom.clone(), target.clone(), vec![0, 0]).unwrap();
        let psi = ColouringTable::new(dom.clone(), target.clone(), vec![0, 1]).unwrap();
        let subdomains = vec![vec![0, 1]];
        let eps = s(1, 4);
        assert!(factorization_search(&chi, &psi, &subdomains, &eps)
            .unwrap()
            .is_none());
    }

    /// Naive oracle: try every map from the χ-image into ψ's target.
    fn factorization_oracle(
        chi: &ColouringTable,
        psi: &ColouringTable,
        subdomains: &[Vec<usize>],
        eps: &Scalar,
    ) -> Option<(usize, Vec<usize>)> {
        let image = chi.image();
        let image_space = chi.target().restriction(&image).unwrap();
        let nt = psi.target().len();
        let total = nt.pow(image.len() as u32);
        for (si, sub) in subdomains.iter().enumerate() {
            for code in 0..total {
                // Lexicographic over tables: position 0 is the slowest digit.
                let table: Vec<usize> = (0..image.len())
                    .map(|i| {
                        let shift = image.len() - 1 - i;
                        (code / nt.pow(shift as u32)) % nt
                    })
                    .collect();
                let pm =
                    PointMap::new(image_space.clone(), psi.target().clone(), table.clone())
                        .unwrap();
                if !is_one_lipschitz(&pm) {
                    continue;
                }
                let ok = sub.iter().all(|&x| {
                    let fpos = image.binary_search(&chi.value(x)).unwrap();
                    psi.target().dist(psi.value(x), table[fpos]) <= eps
                });
                if ok {
                    return Some((si, table));
                }
            }
        }
        None
    }

    #[test]
    fn factorization_agrees_with_naive_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let values = [s(0, 1), s(1, 4), s(1, 2), s(3, 4), s(1, 1)];
        for _ in 0..40 {
            let nd = rng.gen_range(1..=4usize);
            let nt = rng.gen_range(1..=3usize);
            // Random ultrametric-ish matrices are easiest to make triangle-safe:
            // draw from {1/2, 3/4, 1} off-diagonal.
            let mut draw_space = |n: usize| {
                let mut dist = vec![vec![s(0, 1); n]; n];
                for a in 0..n {
                    for b in (a + 1)..n {
                        let v = values[rng.gen_range(2..5)].clone();
                        dist[a][b] = v.clone();
                        dist[b][a] = v;
                    }
                }
                FiniteMetricSpace::from_matrix(dist).unwrap()
            };
            let dom = draw_space(nd);
            let target = draw_space(nt);
            // Constant-ish tables are guaranteed 1-Lipschitz with these values
            // only when distances dominate; retry until both tables pass.
            let chi = loop {
                let table: Vec<usize> = (0..nd).map(|_| rng.gen_range(0..nt)).collect();
                if let Ok(c) = ColouringTable::new(dom.clone(), target.clone(), table) {
                    break c;
                }
            };
            let psi = loop {
                let table: Vec<usize> = (0..nd).map(|_| rng.gen_range(0..nt)).collect();
                if let Ok(c) = ColouringTable::new(dom.clone(), target.clone(), table) {
                    break c;
                }
            };
            let n_subs = rng.gen_range(1..=2usize);
            let subdomains: Vec<Vec<usize>> = (0..n_subs)
                .map(|_| (0..nd).filter(|_| rng.gen_bool(0.6)).collect())
                .collect();
            let eps = values[rng.gen_range(0..values.len())].clone();
            let fast = factorization_search(&chi, &psi, &subdomains, &eps).unwrap();
            let slow = factorization_oracle(&chi, &psi, &subdomains, &eps);
            match (fast, slow) {
                (None, None) => {}
                (Some((si, pm)), Some((sj, table))) => {
                    assert_eq!(si, sj);
                    assert_eq!(pm.table, table);
                }
                (a, b) => panic!("disagreement: fast={a:?} slow={b:?}"),
            }
        }
    }

    #[test]
    fn metric_json_round_trip() {
        let k = two_points(1, 2);
        let json = serde_json::to_string(&k).unwrap();
        let back: FiniteMetricSpace = serde_json::from_str(&json).unwrap();
        assert_eq!(k, back);
        let bad = r#"{"labels":["a","b"],"dist":[["0","1"],["1/2","0"]]}"#;
        assert!(serde_json::from_str::<FiniteMetricSpace>(bad).is_err());
    }
}
