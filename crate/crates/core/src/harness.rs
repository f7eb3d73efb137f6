//! Discrete combinatorics: rigid surjections, combinatorial lines, and
//! brute-force colour counts over copy systems.
//!
//! Everything here is exhaustive search with explicit guards. The guards are
//! the honesty mechanism: an instance is either fully enumerated or rejected
//! up front, never sampled.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default cap on exhaustive colouring enumerations (`k^|X|` and friends).
pub const DEFAULT_MAX_COLOURINGS: u128 = 1 << 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HarnessError {
    #[error("instance too large: needs {need} colourings, guard allows {max}")]
    GuardExceeded { need: u128, max: u128 },
    #[error("invalid range: need 1 <= n <= m, got m={m}, n={n}")]
    BadRange { m: usize, n: usize },
    #[error("word length {got} does not match expected {expected}")]
    WordLength { expected: usize, got: usize },
    #[error("letter {letter} outside alphabet of size {alphabet}")]
    BadLetter { letter: usize, alphabet: usize },
    #[error("table is not a rigid surjection: {0}")]
    NotRigid(String),
    #[error("alphabet must have at least two letters, got {0}")]
    AlphabetTooSmall(usize),
    #[error("need at least one colour")]
    NoColours,
    #[error("empty objects")]
    EmptyObjects,
    #[error("subcopy {copy} mentions object {index}, but there are {size}")]
    BadSubcopy {
        copy: usize,
        index: usize,
        size: usize,
    },
    #[error("no subcopies")]
    NoSubcopies,
    #[error("colouring table has {got} entries for {expected} objects")]
    ColouringSize { expected: usize, got: usize },
    #[error("colour {value} out of range [0, {k})")]
    ColourRange { value: usize, k: usize },
}

/// A finite word over the alphabet `{0, …, alphabet-1}`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Word {
    alphabet: usize,
    letters: Vec<usize>,
}

impl Word {
    pub fn new(alphabet: usize, letters: Vec<usize>) -> Result<Self, HarnessError> {
        for &l in &letters {
            if l >= alphabet {
                return Err(HarnessError::BadLetter {
                    letter: l,
                    alphabet,
                });
            }
        }
        Ok(Word { alphabet, letters })
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

/// A surjection `[m] → [n]` whose values' first occurrences are increasing,
/// i.e. a restricted growth table. These compose as a monoid.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RigidSurjection {
    m: usize,
    n: usize,
    table: Vec<usize>,
}

impl RigidSurjection {
    pub fn new(m: usize, n: usize, table: Vec<usize>) -> Result<Self, HarnessError> {
        if table.len() != m {
            return Err(HarnessError::NotRigid(format!(
                "table length {} != m = {m}",
                table.len()
            )));
        }
        if n == 0 || n > m {
            return Err(HarnessError::BadRange { m, n });
        }
        let mut seen_max: Option<usize> = None;
        for (i, &v) in table.iter().enumerate() {
            if v >= n {
                return Err(HarnessError::NotRigid(format!(
                    "value {v} at position {i} exceeds n = {n}"
                )));
            }
            let next_allowed = seen_max.map_or(0, |mx| mx + 1);
            if v > next_allowed {
                return Err(HarnessError::NotRigid(format!(
                    "first occurrence of {v} at position {i} skips {next_allowed}"
                )));
            }
            if v == next_allowed {
                seen_max = Some(v);
            }
        }
        if seen_max != Some(n - 1) {
            return Err(HarnessError::NotRigid(format!("not onto [{n}]")));
        }
        Ok(RigidSurjection { m, n, table })
    }

    pub fn identity(n: usize) -> Result<Self, HarnessError> {
        RigidSurjection::new(n, n, (0..n).collect())
    }

    pub fn domain_size(&self) -> usize {
        self.m
    }

    pub fn range_size(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// `self ∘ other` as index maps: first apply `self : [m] → [n]`, then
    /// `other : [n] → [p]`. Rigidity is preserved (first occurrences of the
    /// composite are still increasing); the constructor re-checks it.
    pub fn compose(&self, other: &RigidSurjection) -> Result<RigidSurjection, HarnessError> {
        if self.n != other.m {
            return Err(HarnessError::BadRange {
                m: other.m,
                n: self.n,
            });
        }
        let table = self.table.iter().map(|&v| other.table[v]).collect();
        RigidSurjection::new(self.m, other.n, table)
    }
}

/// All rigid surjections `[m] → [n]` in lexicographic table order. Their
/// number is the Stirling number of the second kind `S(m, n)`.
pub fn enumerate_rigid_surjections(
    m: usize,
    n: usize,
) -> Result<Vec<RigidSurjection>, HarnessError> {
    if n == 0 || n > m {
        return Err(HarnessError::BadRange { m, n });
    }
    let mut out = Vec::new();
    let mut table = vec![0usize; m];
    fill_rigid(m, n, &mut table, 0, 0, &mut out);
    Ok(out)
}

fn fill_rigid(
    m: usize,
    n: usize,
    table: &mut Vec<usize>,
    pos: usize,
    used: usize,
    out: &mut Vec<RigidSurjection>,
) {
    if pos == m {
        if used == n {
            out.push(RigidSurjection {
                m,
                n,
                table: table.clone(),
            });
        }
        return;
    }
    // Values still to be introduced must fit into the remaining slots.
    let remaining = m - pos;
    if n - used > remaining {
        return;
    }
    let top = used.min(n - 1);
    for v in 0..=top {
        table[pos] = v;
        let next_used = if v == used { used + 1 } else { used };
        fill_rigid(m, n, table, pos + 1, next_used, out);
    }
}

/// Precomposition action on words: `act(s, w)[i] = w[s(i)]`.
pub fn act(s: &RigidSurjection, w: &Word) -> Result<Word, HarnessError> {
    if w.len() != s.n {
        return Err(HarnessError::WordLength {
            expected: s.n,
            got: w.len(),
        });
    }
    let letters = s.table.iter().map(|&i| w.letters[i]).collect();
    Word::new(w.alphabet, letters)
}

/// Does every `colours`-colouring of the length-`len` words over an
/// `alphabet`-letter alphabet admit a monochromatic combinatorial line?
/// Fully exhaustive over colourings and lines; the guard bounds
/// `colours^(alphabet^len)`.
pub fn hj_line_check(
    alphabet: usize,
    colours: usize,
    len: usize,
    max_colourings: u128,
) -> Result<bool, HarnessError> {
    if alphabet < 2 {
        return Err(HarnessError::AlphabetTooSmall(alphabet));
    }
    if colours == 0 {
        return Err(HarnessError::NoColours);
    }
    if len == 0 {
        return Err(HarnessError::WordLength {
            expected: 1,
            got: 0,
        });
    }
    let n_words = checked_pow(alphabet as u128, len as u32)
        .filter(|&w| w <= 1 << 24)
        .ok_or(HarnessError::GuardExceeded {
            need: u128::MAX,
            max: max_colourings,
        })?;
    let n_colourings =
        checked_pow(colours as u128, n_words as u32).ok_or(HarnessError::GuardExceeded {
            need: u128::MAX,
            max: max_colourings,
        })?;
    if n_colourings > max_colourings {
        return Err(HarnessError::GuardExceeded {
            need: n_colourings,
            max: max_colourings,
        });
    }
    if colours == 1 {
        return Ok(true); // one colour: any line is monochromatic
    }

    let n_words = n_words as usize;
    // Lines: patterns over alphabet ∪ {*} with at least one star; the star
    // slots all take the same letter.
    let mut lines: Vec<Vec<usize>> = Vec::new();
    let n_patterns = (alphabet + 1).pow(len as u32);
    for code in 0..n_patterns {
        let mut c = code;
        let mut slots = Vec::with_capacity(len);
        let mut has_star = false;
        for _ in 0..len {
            let digit = c % (alphabet + 1);
            c /= alphabet + 1;
            if digit == alphabet {
                has_star = true;
            }
            slots.push(digit);
        }
        if !has_star {
            continue;
        }
        let mut line = Vec::with_capacity(alphabet);
        for letter in 0..alphabet {
            let mut idx = 0usize;
            for &d in slots.iter().rev() {
                let l = if d == alphabet { letter } else { d };
                idx = idx * alphabet + l;
            }
            line.push(idx);
        }
        lines.push(line);
    }

    let mut colouring = vec![0usize; n_words];
    loop {
        let mono = lines.iter().any(|line| {
            let first = colouring[line[0]];
            line.iter().all(|&w| colouring[w] == first)
        });
        if !mono {
            return Ok(false);
        }
        // Next colouring in base-`colours` counting order.
        let mut i = 0;
        loop {
            if i == n_words {
                return Ok(true);
            }
            colouring[i] += 1;
            if colouring[i] < colours {
                break;
            }
            colouring[i] = 0;
            i += 1;
        }
    }
}

fn checked_pow(base: u128, exp: u32) -> Option<u128> {
    base.checked_pow(exp)
}

/// A finite set of objects with a nonempty list of subcopies (extensional
/// sub-index-sets) and a declared colour count.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CopySystem {
    pub objects: Vec<String>,
    pub subcopies: Vec<Vec<usize>>,
    pub k: usize,
}

impl CopySystem {
    pub fn new(
        objects: Vec<String>,
        subcopies: Vec<Vec<usize>>,
        k: usize,
    ) -> Result<Self, HarnessError> {
        if objects.is_empty() {
            return Err(HarnessError::EmptyObjects);
        }
        if subcopies.is_empty() {
            return Err(HarnessError::NoSubcopies);
        }
        if k == 0 {
            return Err(HarnessError::NoColours);
        }
        for (ci, copy) in subcopies.iter().enumerate() {
            for &i in copy {
                if i >= objects.len() {
                    return Err(HarnessError::BadSubcopy {
                        copy: ci,
                        index: i,
                        size: objects.len(),
                    });
                }
            }
        }
        Ok(CopySystem {
            objects,
            subcopies,
            k,
        })
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        CopySystem::new(self.objects.clone(), self.subcopies.clone(), self.k).map(|_| ())
    }
}

/// A total colouring of the objects with colours `0..k`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DiscreteColouring {
    pub table: Vec<usize>,
}

impl DiscreteColouring {
    pub fn for_system(system: &CopySystem, table: Vec<usize>) -> Result<Self, HarnessError> {
        if table.len() != system.objects.len() {
            return Err(HarnessError::ColouringSize {
                expected: system.objects.len(),
                got: table.len(),
            });
        }
        for &v in &table {
            if v >= system.k {
                return Err(HarnessError::ColourRange {
                    value: v,
                    k: system.k,
                });
            }
        }
        Ok(DiscreteColouring { table })
    }
}

/// The least `t` such that every `k`-colouring of the objects attains at
/// most `t` distinct colours on some subcopy: `max_χ min_S |χ(S)|`,
/// exhaustive over all `k^|X|` colourings.
pub fn min_colours_over_subcopies(
    system: &CopySystem,
    max_colourings: u128,
) -> Result<usize, HarnessError> {
    system.validate()?;
    let n = system.objects.len();
    let k = system.k;
    let need = checked_pow(k as u128, n as u32).ok_or(HarnessError::GuardExceeded {
        need: u128::MAX,
        max: max_colourings,
    })?;
    if need > max_colourings {
        return Err(HarnessError::GuardExceeded {
            need,
            max: max_colourings,
        });
    }
    assert!(k <= 64, "colour sets are tracked in a u64 bitmask");

    let mut worst = 0usize;
    let mut colouring = vec![0usize; n];
    loop {
        let mut best_here = usize::MAX;
        for copy in &system.subcopies {
            let mut mask = 0u64;
            for &i in copy {
                mask |= 1 << colouring[i];
            }
            best_here = best_here.min(mask.count_ones() as usize);
            if best_here <= worst {
                break; // cannot raise the maximum
            }
        }
        worst = worst.max(best_here);
        let mut i = 0;
        loop {
            if i == n {
                return Ok(worst);
            }
            colouring[i] += 1;
            if colouring[i] < k {
                break;
            }
            colouring[i] = 0;
            i += 1;
        }
    }
}

/// Does the colouring attain all `k` declared colours on every subcopy?
pub fn is_persistent_colouring(
    system: &CopySystem,
    chi: &DiscreteColouring,
) -> Result<bool, HarnessError> {
    system.validate()?;
    DiscreteColouring::for_system(system, chi.table.clone())?;
    let full: u64 = if system.k == 64 {
        u64::MAX
    } else {
        (1u64 << system.k) - 1
    };
    for copy in &system.subcopies {
        let mut mask = 0u64;
        for &i in copy {
            mask |= 1 << chi.table[i];
        }
        if mask != full {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The edges of the complete graph `K_v` as a copy system: objects are
/// edges, subcopies are the edge sets of all `r`-point subsets.
pub fn complete_graph_edge_system(v: usize, r: usize, k: usize) -> Result<CopySystem, HarnessError> {
    if v < 2 || r < 2 || r > v {
        return Err(HarnessError::BadRange { m: v, n: r });
    }
    let mut edges = Vec::new();
    let mut edge_index = vec![vec![usize::MAX; v]; v];
    for a in 0..v {
        for b in (a + 1)..v {
            edge_index[a][b] = edges.len();
            edges.push(format!("{a}-{b}"));
        }
    }
    let mut subcopies = Vec::new();
    let mut subset: Vec<usize> = (0..r).collect();
    loop {
        let mut copy = Vec::new();
        for i in 0..r {
            for j in (i + 1)..r {
                copy.push(edge_index[subset[i]][subset[j]]);
            }
        }
        subcopies.push(copy);
        // next r-subset of [v]
        let mut i = r;
        loop {
            if i == 0 {
                return CopySystem::new(edges, subcopies, k);
            }
            i -= 1;
            if subset[i] != i + v - r {
                subset[i] += 1;
                for j in i + 1..r {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Stirling numbers of the second kind by the standard recurrence.
    fn stirling2(m: usize, n: usize) -> u128 {
        if n == 0 {
            return u128::from(m == 0);
        }
        if n > m {
            return 0;
        }
        let mut row = vec![0u128; n + 1];
        row[0] = 1; // S(0,0)
        for i in 1..=m {
            let hi = n.min(i);
            for j in (1..=hi).rev() {
                row[j] = row[j - 1] + (j as u128) * row[j];
            }
            row[0] = 0;
        }
        row[n]
    }

    #[test]
    fn rigid_surjection_construction() {
        assert!(RigidSurjection::new(3, 2, vec![0, 0, 1]).is_ok());
        assert!(RigidSurjection::new(3, 2, vec![1, 0, 1]).is_err()); // 1 before 0
        assert!(RigidSurjection::new(3, 2, vec![0, 0, 0]).is_err()); // not onto
        assert!(RigidSurjection::new(3, 4, vec![0, 1, 2]).is_err()); // n > m
    }

    #[test]
    fn enumeration_examples() {
        let bij = enumerate_rigid_surjections(4, 4).unwrap();
        assert_eq!(bij.len(), 1);
        assert_eq!(bij[0].table(), &[0, 1, 2, 3]);

        let three_two = enumerate_rigid_surjections(3, 2).unwrap();
        let tables: Vec<&[usize]> = three_two.iter().map(|s| s.table()).collect();
        assert_eq!(tables, vec![&[0, 0, 1][..], &[0, 1, 0][..], &[0, 1, 1][..]]);

        assert_eq!(enumerate_rigid_surjections(4, 2).unwrap().len(), 7);
        assert!(enumerate_rigid_surjections(2, 3).is_err());
    }

    #[test]
    fn enumeration_counts_match_stirling_recurrence() {
        for m in 1..=7 {
            for n in 1..=m {
                let count = enumerate_rigid_surjections(m, n).unwrap().len() as u128;
                assert_eq!(count, stirling2(m, n), "m={m} n={n}");
            }
        }
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let list = enumerate_rigid_surjections(5, 3).unwrap();
        for w in list.windows(2) {
            assert!(w[0].table() < w[1].table());
        }
    }

    #[test]
    fn act_examples() {
        let w = Word::new(3, vec![0, 1]).unwrap();
        let id = RigidSurjection::identity(2).unwrap();
        assert_eq!(act(&id, &w).unwrap(), w);

        let s = RigidSurjection::new(3, 2, vec![0, 0, 1]).unwrap();
        let out = act(&s, &w).unwrap();
        assert_eq!(out.letters(), &[0, 0, 1]);

        assert!(act(&s, &Word::new(3, vec![0, 1, 2]).unwrap()).is_err());
    }

    #[test]
    fn act_is_a_monoid_action() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let p = rng.gen_range(1..=4usize);
            let n = rng.gen_range(p..=5usize);
            let m = rng.gen_range(n..=6usize);
            let ss = enumerate_rigid_surjections(m, n).unwrap();
            let ts = enumerate_rigid_surjections(n, p).unwrap();
            let s = &ss[rng.gen_range(0..ss.len())];
            let t = &ts[rng.gen_range(0..ts.len())];
            let w = Word::new(2, (0..p).map(|_| rng.gen_range(0..2)).collect()).unwrap();
            let lhs = act(&s.compose(t).unwrap(), &w).unwrap();
            let rhs = act(s, &act(t, &w).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn hj_examples() {
        let max = DEFAULT_MAX_COLOURINGS;
        assert!(!hj_line_check(2, 2, 1, max).unwrap());
        assert!(hj_line_check(2, 2, 2, max).unwrap());
        assert!(hj_line_check(2, 1, 3, max).unwrap());
        assert!(hj_line_check(3, 1, 2, max).unwrap());
        assert!(matches!(
            hj_line_check(3, 2, 3, max),
            Err(HarnessError::GuardExceeded { .. })
        ));
        assert!(hj_line_check(1, 2, 1, max).is_err());
    }

    #[test]
    fn hj_lines_lift_to_longer_words() {
        let max = DEFAULT_MAX_COLOURINGS;
        // (2,2,2) true ⇒ (2,2,3) true, within the guard.
        assert!(hj_line_check(2, 2, 2, max).unwrap());
        assert!(hj_line_check(2, 2, 3, max).unwrap());
    }

    #[test]
    fn min_colours_trivial_system() {
        let sys = CopySystem::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![vec![0, 1, 2]],
            2,
        )
        .unwrap();
        assert_eq!(
            min_colours_over_subcopies(&sys, DEFAULT_MAX_COLOURINGS).unwrap(),
            2
        );
    }

    #[test]
    fn ramsey_r33_ground_truth() {
        // R(3,3) = 6: on K6 every 2-colouring has a monochromatic triangle;
        // on K5 the pentagon colouring is the extremal witness.
        let k6 = complete_graph_edge_system(6, 3, 2).unwrap();
        assert_eq!(k6.objects.len(), 15);
        assert_eq!(k6.subcopies.len(), 20);
        assert_eq!(
            min_colours_over_subcopies(&k6, DEFAULT_MAX_COLOURINGS).unwrap(),
            1
        );

        let k5 = complete_graph_edge_system(5, 3, 2).unwrap();
        assert_eq!(
            min_colours_over_subcopies(&k5, DEFAULT_MAX_COLOURINGS).unwrap(),
            2
        );
    }

    #[test]
    fn min_colours_monotonicity() {
        // Adding subcopies can only lower the answer; raising k can only
        // raise it.
        let base = CopySystem::new(
            (0..4).map(|i| i.to_string()).collect(),
            vec![vec![0, 1, 2, 3]],
            2,
        )
        .unwrap();
        let more = CopySystem::new(
            (0..4).map(|i| i.to_string()).collect(),
            vec![vec![0, 1, 2, 3], vec![0, 1]],
            2,
        )
        .unwrap();
        let wider = CopySystem::new(
            (0..4).map(|i| i.to_string()).collect(),
            vec![vec![0, 1, 2, 3]],
            3,
        )
        .unwrap();
        let m = DEFAULT_MAX_COLOURINGS;
        let v_base = min_colours_over_subcopies(&base, m).unwrap();
        assert!(min_colours_over_subcopies(&more, m).unwrap() <= v_base);
        assert!(min_colours_over_subcopies(&wider, m).unwrap() >= v_base);
    }

    #[test]
    fn persistence_examples() {
        let sys = CopySystem::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![vec![0, 1], vec![1, 2]],
            1,
        )
        .unwrap();
        let chi = DiscreteColouring::for_system(&sys, vec![0, 0, 0]).unwrap();
        assert!(is_persistent_colouring(&sys, &chi).unwrap());

        let sys2 = CopySystem::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![vec![0, 1], vec![1, 2]],
            2,
        )
        .unwrap();
        // Colour 1 never appears on the second subcopy.
        let chi2 = DiscreteColouring::for_system(&sys2, vec![1, 0, 0]).unwrap();
        assert!(!is_persistent_colouring(&sys2, &chi2).unwrap());
        let chi3 = DiscreteColouring::for_system(&sys2, vec![1, 0, 1]).unwrap();
        assert!(is_persistent_colouring(&sys2, &chi3).unwrap());
    }

    #[test]
    fn persistence_agrees_with_direct_scan() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..50 {
            let n = rng.gen_range(1..=6usize);
            let k = rng.gen_range(1..=3usize);
            let n_copies = rng.gen_range(1..=3usize);
            let subcopies: Vec<Vec<usize>> = (0..n_copies)
                .map(|_| (0..n).filter(|_| rng.gen_bool(0.7)).collect())
                .collect();
            let sys = CopySystem::new(
                (0..n).map(|i| i.to_string()).collect(),
                subcopies.clone(),
                k,
            )
            .unwrap();
            let table: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
            let chi = DiscreteColouring::for_system(&sys, table.clone()).unwrap();
            // Direct scan: every subcopy must contain every colour.
            let expected = subcopies.iter().all(|copy| {
                (0..k).all(|c| copy.iter().any(|&i| table[i] == c))
            });
            assert_eq!(is_persistent_colouring(&sys, &chi).unwrap(), expected);
        }
    }

    #[test]
    fn guard_rejects_oversized_instances() {
        let sys = CopySystem::new(
            (0..30).map(|i| i.to_string()).collect(),
            vec![(0..30).collect()],
            2,
        )
        .unwrap();
        assert!(matches!(
            min_colours_over_subcopies(&sys, DEFAULT_MAX_COLOURINGS),
            Err(HarnessError::GuardExceeded { .. })
        ));
    }
}
