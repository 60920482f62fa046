use std::collections::BTreeMap;

use super::{tuple, FiniteMap, MapFamily};
use crate::combinat::{subsets, Label};
use crate::eqcompiler::window;
use crate::error::{Error, Result};

/// A finite map between products of carriers of varying sizes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SortedMap {
    in_sizes: Vec<u32>,
    out_sizes: Vec<u32>,
    table: Vec<u32>,
}

impl SortedMap {
    pub fn from_fn(in_sizes: &[u32], out_sizes: &[u32], f: impl Fn(&[u32]) -> Vec<u32>) -> Result<Self> {
        let mut table = Vec::new();
        for input in tuple::Odometer::new(in_sizes.to_vec()) {
            let out = f(&input);
            if out.len() != out_sizes.len() || out.iter().zip(out_sizes).any(|(&x, &r)| x >= r) {
                return Err(Error::InvalidMap(format!("image {out:?} of {input:?} outside {out_sizes:?}")));
            }
            table.extend(out);
        }
        Ok(SortedMap { in_sizes: in_sizes.to_vec(), out_sizes: out_sizes.to_vec(), table })
    }

    pub fn from_finite(t: &FiniteMap) -> Self {
        SortedMap {
            in_sizes: vec![t.q(); t.k_in()],
            out_sizes: vec![t.q(); t.k_out()],
            table: t.flat().to_vec(),
        }
    }

    pub fn in_sizes(&self) -> &[u32] {
        &self.in_sizes
    }

    pub fn out_sizes(&self) -> &[u32] {
        &self.out_sizes
    }

    pub fn image(&self, input: &[u32]) -> &[u32] {
        let k = self.out_sizes.len();
        let i = tuple::encode_mixed(input, &self.in_sizes);
        &self.table[i * k..(i + 1) * k]
    }

    pub fn apply(&self, input: &[u32]) -> Result<&[u32]> {
        if input.len() != self.in_sizes.len() {
            return Err(Error::Arity { expected: self.in_sizes.len().to_string(), got: input.len().to_string() });
        }
        if input.iter().zip(&self.in_sizes).any(|(&x, &r)| x >= r) {
            return Err(Error::Carrier(format!("{input:?} outside {:?}", self.in_sizes)));
        }
        Ok(self.image(input))
    }

    /// Whether the image ignores input slot `i`.
    pub fn ignores(&self, i: usize) -> bool {
        tuple::Odometer::new(self.in_sizes.clone()).all(|mut t| {
            let img = self.image(&t).to_vec();
            t[i] = 0;
            self.image(&t) == img.as_slice()
        })
    }
}

/// Maps `T_K` for all `(N-1)`-subsets `K` of `[N]` between carriers `U_J`
/// indexed by `(N-2)`-subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledSystem {
    n: usize,
    dual: bool,
    carriers: BTreeMap<Label, u32>,
    maps: BTreeMap<Label, SortedMap>,
}

/// Input and output slot sizes that `T_K` must have.
fn slot_sizes(k: &Label, dual: bool, carriers: &BTreeMap<Label, u32>) -> Result<(Vec<u32>, Vec<u32>)> {
    let (consume, emit) = window(k, dual)?;
    let size = |j: &Label| carriers.get(j).copied().ok_or_else(|| Error::InvalidLabel(format!("no carrier for {j}")));
    Ok((consume.iter().map(size).collect::<Result<_>>()?, emit.iter().map(size).collect::<Result<_>>()?))
}

impl LabeledSystem {
    /// Builds a system from a carrier size per `(N-2)`-subset and a map per
    /// `(N-1)`-subset; `map` receives `K` and the required slot sizes.
    pub fn build(
        n: usize,
        dual: bool,
        carrier: impl Fn(&Label) -> u32,
        map: impl Fn(&Label, &[u32], &[u32]) -> Result<SortedMap>,
    ) -> Result<Self> {
        let carriers: BTreeMap<Label, u32> = subsets(n, n - 2).into_iter().map(|j| {
            let q = carrier(&j);
            (j, q)
        }).collect();
        if let Some((j, _)) = carriers.iter().find(|(_, &q)| q == 0) {
            return Err(Error::InvalidMap(format!("empty carrier U_{j}")));
        }
        let mut maps = BTreeMap::new();
        for k in subsets(n, n - 1) {
            let (ins, outs) = slot_sizes(&k, dual, &carriers)?;
            maps.insert(k.clone(), map(&k, &ins, &outs)?);
        }
        Self::new(n, dual, carriers, maps)
    }

    /// Validates and wraps explicit carriers and maps.
    pub fn new(n: usize, dual: bool, carriers: BTreeMap<Label, u32>, maps: BTreeMap<Label, SortedMap>) -> Result<Self> {
        crate::combinat::check_n(n)?;
        let expect_j = subsets(n, n - 2);
        if carriers.keys().ne(expect_j.iter()) {
            return Err(Error::InvalidMap(format!("carriers must be indexed by the {}-subsets of [{n}]", n - 2)));
        }
        let expect_k = subsets(n, n - 1);
        if maps.keys().ne(expect_k.iter()) {
            return Err(Error::InvalidMap(format!("maps must be indexed by the {}-subsets of [{n}]", n - 1)));
        }
        for (k, m) in &maps {
            let (ins, outs) = slot_sizes(k, dual, &carriers)?;
            if m.in_sizes != ins || m.out_sizes != outs {
                return Err(Error::Carrier(format!(
                    "T_{k} acts {:?} -> {:?}, expected {ins:?} -> {outs:?}",
                    m.in_sizes, m.out_sizes
                )));
            }
        }
        Ok(LabeledSystem { n, dual, carriers, maps })
    }

    /// Every carrier of size `t.q()` and every map equal to `t`.
    pub fn uniform(n: usize, dual: bool, t: &FiniteMap) -> Result<Self> {
        let m = SortedMap::from_finite(t);
        Self::build(n, dual, |_| t.q(), |_, _, _| Ok(m.clone()))
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn dual(&self) -> bool {
        self.dual
    }

    pub fn carrier(&self, j: &Label) -> u32 {
        self.carriers[j]
    }

    pub fn carriers(&self) -> &BTreeMap<Label, u32> {
        &self.carriers
    }

    pub fn map(&self, k: &Label) -> &SortedMap {
        &self.maps[k]
    }

    pub fn maps(&self) -> &BTreeMap<Label, SortedMap> {
        &self.maps
    }
}

impl MapFamily for LabeledSystem {
    type Value = u32;

    fn apply(&self, k: Option<&Label>, args: &[u32]) -> Result<Vec<u32>> {
        let k = k.ok_or_else(|| Error::MalformedProgram("labeled evaluation needs map indices".into()))?;
        let m = self.maps.get(k).ok_or_else(|| Error::InvalidLabel(format!("no map T_{k}")))?;
        m.apply(args).map(<[u32]>::to_vec)
    }
}
