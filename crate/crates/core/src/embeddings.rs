//! Linear isometric embeddings between finite sup-normed spaces.
//!
//! A matrix embeds `ℓ∞^m` into `ℓ∞^n` isometrically exactly when every row
//! lies in the closed ℓ1 ball and every coordinate functional `±e_j` appears
//! among the rows. Soundness: ℓ1 rows give `‖Tx‖∞ ≤ ‖x‖∞`, the signed
//! coordinate rows give the reverse. Necessity: `‖T e_j‖∞ = 1` forces a row
//! with `|r_j| = 1`, which under the ℓ1 bound must be `±e_j`.
//!
//! The module also houses the disjoint-support machinery of `c0`: the
//! intertwining count of a pair of disjointly supported vectors and the
//! block construction that realizes any prescribed number of changeovers,
//! which is what defeats universal compacta in arity two and above.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pumpkin::{PumpkinError, TupleLinf};
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EmbeddingError {
    #[error("matrix is not a linear isometric embedding: {0}")]
    NotAnEmbedding(String),
    #[error("codomain dimension {n} is smaller than domain dimension {m}")]
    CodomainTooSmall { m: usize, n: usize },
    #[error("shape mismatch: embedding consumes {expected} columns, tuple has {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Tuple(#[from] PumpkinError),
    #[error("supports overlap at index {0}")]
    OverlappingSupports(usize),
    #[error("empty support")]
    EmptySupport,
    #[error("support entries must be strictly increasing and nonzero")]
    MalformedSupport,
    #[error("block {0} is not sup-norm one")]
    BlockNotNormOne(usize),
    #[error("blocks {0} and {1} are not consecutively supported")]
    BlocksNotConsecutive(usize, usize),
    #[error("not enough blocks: need {need}, have {have}")]
    NotEnoughBlocks { need: usize, have: usize },
}

/// Row-wise checks for a linear isometric embedding `ℓ∞^m → ℓ∞^n`:
/// every row has ℓ1 norm at most 1, and every `j < m` has a `±e_j` row.
pub fn validate_embedding(rows: &[Vec<Scalar>], m: usize) -> bool {
    if m == 0 || rows.len() < m || rows.iter().any(|r| r.len() != m) {
        return false;
    }
    let one = Scalar::one();
    for row in rows {
        let l1 = row.iter().map(Scalar::abs).fold(Scalar::zero(), |a, b| a + b);
        if l1 > one {
            return false;
        }
    }
    (0..m).all(|j| rows.iter().any(|r| is_signed_unit(r, j)))
}

fn is_signed_unit(row: &[Scalar], j: usize) -> bool {
    row.iter().enumerate().all(|(i, v)| {
        if i == j {
            v.abs() == Scalar::one()
        } else {
            v.is_zero()
        }
    })
}

/// When `validate_embedding` rejects, produce a concrete vector whose sup
/// norm the matrix fails to preserve: a sign vector for an oversized row,
/// otherwise the coordinate vector of a missing functional. (A sign-vector
/// witness need not exist in the second case: rows `(1/2, ±1/2)` preserve
/// all of `{-1,1}^2` yet contract `e_1`.)
pub fn falsifying_vector(rows: &[Vec<Scalar>], m: usize) -> Option<Vec<Scalar>> {
    if validate_embedding(rows, m) {
        return None;
    }
    let one = Scalar::one();
    for row in rows {
        if row.len() != m {
            return None; // shape junk: nothing meaningful to witness
        }
        let l1 = row.iter().map(Scalar::abs).fold(Scalar::zero(), |a, b| a + b);
        if l1 > one {
            let signs = row
                .iter()
                .map(|v| if v.is_negative() { -Scalar::one() } else { Scalar::one() })
                .collect();
            return Some(signs);
        }
    }
    let j = (0..m).find(|&j| !rows.iter().any(|r| is_signed_unit(r, j)))?;
    let mut e = vec![Scalar::zero(); m];
    e[j] = Scalar::one();
    Some(e)
}

/// A validated linear isometric embedding `ℓ∞^m → ℓ∞^n`, stored as its
/// `n × m` row matrix.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct IsoEmbedding {
    m: usize,
    n: usize,
    rows: Vec<Vec<Scalar>>,
}

impl IsoEmbedding {
    pub fn new(m: usize, rows: Vec<Vec<Scalar>>) -> Result<Self, EmbeddingError> {
        let n = rows.len();
        if n < m {
            return Err(EmbeddingError::CodomainTooSmall { m, n });
        }
        if !validate_embedding(&rows, m) {
            return Err(EmbeddingError::NotAnEmbedding(
                "rows must lie in the l1 ball and include every signed coordinate functional"
                    .into(),
            ));
        }
        Ok(IsoEmbedding { m, n, rows })
    }

    pub fn domain_dim(&self) -> usize {
        self.m
    }

    pub fn codomain_dim(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }
}

impl<'de> Deserialize<'de> for IsoEmbedding {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Doc {
            m: usize,
            n: usize,
            rows: Vec<Vec<Scalar>>,
        }
        let doc = Doc::deserialize(deserializer)?;
        if doc.rows.len() != doc.n {
            return Err(serde::de::Error::custom("row count does not match n"));
        }
        IsoEmbedding::new(doc.m, doc.rows).map_err(serde::de::Error::custom)
    }
}

/// A random ℓ1-ball row with denominator 8, deterministic in the generator.
fn random_l1_row(rng: &mut ChaCha8Rng, m: usize) -> Vec<Scalar> {
    let mut budget = 8i64;
    let mut row = Vec::with_capacity(m);
    for _ in 0..m {
        let c = rng.gen_range(-budget..=budget);
        budget -= c.abs();
        row.push(Scalar::ratio(c, 8));
    }
    row
}

/// Deterministic embedding generator: signed coordinate rows at sampled
/// positions, remaining rows filled from the ℓ1 ball. All randomness flows
/// from a ChaCha8 stream seeded with `seed`.
pub fn random_embedding(m: usize, n: usize, seed: u64) -> Result<IsoEmbedding, EmbeddingError> {
    if n < m {
        return Err(EmbeddingError::CodomainTooSmall { m, n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Sample m distinct row positions for the coordinate functionals.
    let mut positions: Vec<usize> = (0..n).collect();
    for i in 0..m {
        let j = rng.gen_range(i..n);
        positions.swap(i, j);
    }
    let mut assigned: Vec<Option<(usize, bool)>> = vec![None; n];
    for (j, &pos) in positions[..m].iter().enumerate() {
        assigned[pos] = Some((j, rng.gen_bool(0.5)));
    }
    let rows = assigned
        .into_iter()
        .map(|slot| match slot {
            Some((j, neg)) => {
                let mut row = vec![Scalar::zero(); m];
                row[j] = if neg { -Scalar::one() } else { Scalar::one() };
                row
            }
            None => random_l1_row(&mut rng, m),
        })
        .collect();
    IsoEmbedding::new(m, rows)
}

/// Deterministic spread embedding: rows read top to bottom are
/// `+e_0, …, +e_{m-1}`, with extra rows after each `e_j` supported on
/// coordinates `≤ j`. Transported tuples grow by columns that already lie
/// in the current hull, so the chain of the colouring is unchanged.
pub fn random_spread_embedding(
    m: usize,
    n: usize,
    seed: u64,
) -> Result<IsoEmbedding, EmbeddingError> {
    if n < m {
        return Err(EmbeddingError::CodomainTooSmall { m, n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Distribute the n - m fill rows among the m gaps (after each e_j).
    let mut fills = vec![0usize; m];
    for _ in 0..n - m {
        let g = rng.gen_range(0..m);
        fills[g] += 1;
    }
    let mut rows = Vec::with_capacity(n);
    for j in 0..m {
        let mut e = vec![Scalar::zero(); m];
        e[j] = Scalar::one();
        rows.push(e);
        for _ in 0..fills[j] {
            let mut row = random_l1_row(&mut rng, j + 1);
            row.resize(m, Scalar::zero());
            rows.push(row);
        }
    }
    IsoEmbedding::new(m, rows)
}

/// Transport a tuple along an embedding: output column `k` is the image of
/// the input columns under row `k`. Consumes `T.m` columns, emits `T.n`.
pub fn apply(t: &IsoEmbedding, x: &TupleLinf) -> Result<TupleLinf, EmbeddingError> {
    if x.len() != t.m {
        return Err(EmbeddingError::ShapeMismatch {
            expected: t.m,
            got: x.len(),
        });
    }
    let entries: Vec<Vec<Scalar>> = (0..x.dim())
        .map(|i| {
            t.rows
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(x.entries()[i].iter())
                        .fold(Scalar::zero(), |acc, (a, b)| acc + a * b)
                })
                .collect()
        })
        .collect();
    Ok(TupleLinf::new(entries)?)
}

/// A finitely supported vector: strictly increasing indices with nonzero
/// values. Sphere vectors additionally have `max |value| = 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SupportedVector {
    entries: Vec<(usize, Scalar)>,
}

impl SupportedVector {
    pub fn new(entries: Vec<(usize, Scalar)>) -> Result<Self, EmbeddingError> {
        if entries.is_empty() {
            return Err(EmbeddingError::EmptySupport);
        }
        for w in entries.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(EmbeddingError::MalformedSupport);
            }
        }
        if entries.iter().any(|(_, v)| v.is_zero()) {
            return Err(EmbeddingError::MalformedSupport);
        }
        Ok(SupportedVector { entries })
    }

    pub fn entries(&self) -> &[(usize, Scalar)] {
        &self.entries
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|(i, _)| *i)
    }

    pub fn sup_norm(&self) -> Scalar {
        self.entries
            .iter()
            .map(|(_, v)| v.abs())
            .fold(Scalar::zero(), Scalar::max)
    }

    pub fn min_index(&self) -> usize {
        self.entries[0].0
    }

    pub fn max_index(&self) -> usize {
        self.entries[self.entries.len() - 1].0
    }

    /// Sum of disjointly supported vectors.
    fn disjoint_sum(parts: &[&SupportedVector]) -> Result<SupportedVector, EmbeddingError> {
        let mut entries: Vec<(usize, Scalar)> = parts
            .iter()
            .flat_map(|p| p.entries.iter().cloned())
            .collect();
        entries.sort_by_key(|(i, _)| *i);
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(EmbeddingError::OverlappingSupports(w[0].0));
            }
        }
        SupportedVector::new(entries)
    }
}

impl Serialize for SupportedVector {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        #[derive(Serialize)]
        struct Entry<'a>(usize, &'a Scalar);
        let support: Vec<Entry> = self.entries.iter().map(|(i, v)| Entry(*i, v)).collect();
        let mut st = serializer.serialize_struct("SupportedVector", 1)?;
        st.serialize_field("support", &support)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for SupportedVector {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Doc {
            support: Vec<(usize, Scalar)>,
        }
        let doc = Doc::deserialize(deserializer)?;
        SupportedVector::new(doc.support).map_err(serde::de::Error::custom)
    }
}

/// The number of ownership changeovers when both supports are merged in
/// increasing order: (number of maximal constant runs) − 1.
pub fn intertwine_count(
    x: &SupportedVector,
    y: &SupportedVector,
) -> Result<usize, EmbeddingError> {
    let mut merged: Vec<(usize, bool)> = x
        .support()
        .map(|i| (i, false))
        .chain(y.support().map(|i| (i, true)))
        .collect();
    merged.sort_by_key(|(i, _)| *i);
    for w in merged.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(EmbeddingError::OverlappingSupports(w[0].0));
        }
    }
    let runs = 1 + merged.windows(2).filter(|w| w[0].1 != w[1].1).count();
    Ok(runs - 1)
}

/// From a sequence of disjointly, consecutively supported norm-one blocks,
/// build pairs `(x_k, y_k)` of ±1-combinations with `intertwine_count = k`
/// for `k = 1..=n_colours`: blocks `0..=k` alternate ownership, one block
/// per run.
pub fn unbounded_colour_witness(
    blocks: &[SupportedVector],
    n_colours: usize,
) -> Result<Vec<(SupportedVector, SupportedVector)>, EmbeddingError> {
    for (i, b) in blocks.iter().enumerate() {
        if b.sup_norm() != Scalar::one() {
            return Err(EmbeddingError::BlockNotNormOne(i));
        }
    }
    for i in 1..blocks.len() {
        if blocks[i - 1].max_index() >= blocks[i].min_index() {
            return Err(EmbeddingError::BlocksNotConsecutive(i - 1, i));
        }
    }
    let budget = blocks.len().saturating_sub(1) / 2;
    if n_colours > budget {
        return Err(EmbeddingError::NotEnoughBlocks {
            need: 2 * n_colours + 1,
            have: blocks.len(),
        });
    }
    let mut pairs = Vec::with_capacity(n_colours);
    for k in 1..=n_colours {
        let xs: Vec<&SupportedVector> = (0..=k).step_by(2).map(|j| &blocks[j]).collect();
        let ys: Vec<&SupportedVector> = (1..=k).step_by(2).map(|j| &blocks[j]).collect();
        let x = SupportedVector::disjoint_sum(&xs)?;
        let y = SupportedVector::disjoint_sum(&ys)?;
        pairs.push((x, y));
    }
    Ok(pairs)
}
