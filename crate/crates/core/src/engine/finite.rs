use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::tuple;
use crate::error::{Error, Result};

/// A map `U^k_in -> U^k_out` on `U = {0, …, q-1}`, stored as a full table.
///
/// Row `i` holds the image of the `i`-th input tuple in lexicographic order
/// (first argument most significant). Ordering compares `(q, k_in, k_out)`
/// and then the table row by row.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "MapJson", into = "MapJson")]
pub struct FiniteMap {
    q: u32,
    k_in: usize,
    k_out: usize,
    table: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct MapJson {
    q: u32,
    k_in: usize,
    k_out: usize,
    table: Vec<Vec<u32>>,
}

impl From<FiniteMap> for MapJson {
    fn from(m: FiniteMap) -> Self {
        let table = m.rows().map(<[u32]>::to_vec).collect();
        MapJson { q: m.q, k_in: m.k_in, k_out: m.k_out, table }
    }
}

impl TryFrom<MapJson> for FiniteMap {
    type Error = Error;

    fn try_from(j: MapJson) -> Result<Self> {
        FiniteMap::from_rows(j.q, j.k_in, j.k_out, j.table)
    }
}

impl FiniteMap {
    /// Builds a map from its flattened table, validating shape and entries.
    pub fn from_flat(q: u32, k_in: usize, k_out: usize, table: Vec<u32>) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidMap("carrier size must be at least 1".into()));
        }
        let rows = tuple::count(q, k_in).ok_or_else(|| Error::InvalidMap("table too large".into()))?;
        if table.len() != rows * k_out {
            return Err(Error::InvalidMap(format!(
                "expected {rows} rows of {k_out} entries, got {} entries",
                table.len()
            )));
        }
        if let Some(x) = table.iter().find(|&&x| x >= q) {
            return Err(Error::InvalidMap(format!("entry {x} outside carrier of size {q}")));
        }
        Ok(FiniteMap { q, k_in, k_out, table })
    }

    pub fn from_rows(q: u32, k_in: usize, k_out: usize, rows: Vec<Vec<u32>>) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != k_out) {
            return Err(Error::InvalidMap(format!("row {r:?} does not have {k_out} entries")));
        }
        Self::from_flat(q, k_in, k_out, rows.concat())
    }

    /// Tabulates `f` over all inputs.
    pub fn from_fn(q: u32, k_in: usize, k_out: usize, f: impl Fn(&[u32]) -> Vec<u32>) -> Result<Self> {
        let mut table = Vec::new();
        for input in tuple::Odometer::uniform(q, k_in) {
            let out = f(&input);
            if out.len() != k_out {
                return Err(Error::Arity { expected: k_out.to_string(), got: out.len().to_string() });
            }
            table.extend(out);
        }
        Self::from_flat(q, k_in, k_out, table)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn k_in(&self) -> usize {
        self.k_in
    }

    pub fn k_out(&self) -> usize {
        self.k_out
    }

    pub fn arity(&self) -> (usize, usize) {
        (self.k_in, self.k_out)
    }

    pub fn row_count(&self) -> usize {
        tuple::count(self.q, self.k_in).expect("validated on construction")
    }

    pub fn flat(&self) -> &[u32] {
        &self.table
    }

    pub fn row(&self, index: usize) -> &[u32] {
        &self.table[index * self.k_out..(index + 1) * self.k_out]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> + '_ {
        (0..self.row_count()).map(move |i| self.row(i))
    }

    /// Image of `input`; panics if the input is out of range.
    pub fn image(&self, input: &[u32]) -> &[u32] {
        debug_assert_eq!(input.len(), self.k_in);
        self.row(tuple::encode(input, self.q))
    }

    /// Checked image of `input`.
    pub fn apply(&self, input: &[u32]) -> Result<&[u32]> {
        if input.len() != self.k_in {
            return Err(Error::Arity { expected: self.k_in.to_string(), got: input.len().to_string() });
        }
        if let Some(x) = input.iter().find(|&&x| x >= self.q) {
            return Err(Error::Carrier(format!("value {x} outside carrier of size {}", self.q)));
        }
        Ok(self.image(input))
    }

    /// Keeps the output coordinates listed in `keep`, in that order.
    pub fn select_outputs(&self, keep: &[usize]) -> FiniteMap {
        let table = self.rows().flat_map(|r| keep.iter().map(move |&i| r[i])).collect();
        FiniteMap { q: self.q, k_in: self.k_in, k_out: keep.len(), table }
    }

    /// The `i`-th output coordinate as a map with one output.
    pub fn component(&self, i: usize) -> FiniteMap {
        self.select_outputs(&[i])
    }

    /// Whether the map is onto `U^k_out`.
    pub fn is_surjective(&self) -> bool {
        let Some(total) = tuple::count(self.q, self.k_out) else { return false };
        let mut seen = vec![false; total];
        for r in self.rows() {
            seen[tuple::encode(r, self.q)] = true;
        }
        seen.into_iter().all(|s| s)
    }

    /// Whether the map ignores argument `i` (0-based).
    pub fn is_degenerate_in(&self, i: usize) -> bool {
        if i >= self.k_in {
            return false;
        }
        tuple::Odometer::uniform(self.q, self.k_in).all(|mut t| {
            let img = self.image(&t).to_vec();
            t[i] = 0;
            self.image(&t) == img.as_slice()
        })
    }

    /// Composition `self ∘ other`.
    pub fn compose(&self, other: &FiniteMap) -> Result<FiniteMap> {
        if self.q != other.q || self.k_in != other.k_out {
            return Err(Error::Arity {
                expected: format!("q={}, k_out={}", self.q, self.k_in),
                got: format!("q={}, k_out={}", other.q, other.k_out),
            });
        }
        let table = other.rows().flat_map(|r| self.image(r).iter().copied()).collect::<Vec<_>>();
        Ok(FiniteMap { q: self.q, k_in: other.k_in, k_out: self.k_out, table })
    }

    /// `T(u, …, u)`.
    pub fn diagonal(&self, u: u32) -> &[u32] {
        self.image(&vec![u; self.k_in])
    }
}

/// A table drawn uniformly from a seeded ChaCha8 stream.
pub fn random_map(q: u32, k_in: usize, k_out: usize, seed: u64) -> Result<FiniteMap> {
    if q == 0 {
        return Err(Error::InvalidMap("carrier size must be at least 1".into()));
    }
    let rows = tuple::count(q, k_in).ok_or_else(|| Error::InvalidMap("table too large".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let table = (0..rows * k_out).map(|_| rng.gen_range(0..q)).collect();
    FiniteMap::from_flat(q, k_in, k_out, table)
}

/// Every map of the given shape, in table order. Only for tiny shapes.
pub fn all_maps(q: u32, k_in: usize, k_out: usize) -> impl Iterator<Item = FiniteMap> {
    let rows = tuple::count(q, k_in).expect("tiny shape");
    tuple::Odometer::uniform(q, rows * k_out)
        .map(move |table| FiniteMap { q, k_in, k_out, table })
}
