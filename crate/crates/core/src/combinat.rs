//! Subset and packet combinatorics.
//!
//! A [`Label`] is a sorted subset of `[N] = {1, ..., N}`. Equation slots are
//! `(N-2)`-subsets, map indices are `(N-1)`-subsets. The packet of a set `M`
//! is the family of its `(|M|-1)`-subsets; its lexicographic order and the
//! odd/even split of that order drive everything downstream.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported ambient size. Labels mirror their elements in a `u32` mask.
pub const MAX_AMBIENT: usize = 31;

/// A strictly increasing subset of `1..=ambient`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Label {
    ambient: u8,
    elems: Vec<u8>,
    mask: u32,
}

impl Label {
    pub fn new(ambient: usize, elems: &[usize]) -> Result<Self> {
        if ambient == 0 || ambient > MAX_AMBIENT {
            return Err(Error::InvalidLabel(format!("ambient {ambient} out of range")));
        }
        let mut mask = 0u32;
        let mut prev = 0usize;
        for &e in elems {
            if e == 0 || e > ambient {
                return Err(Error::InvalidLabel(format!("element {e} not in 1..={ambient}")));
            }
            if e <= prev {
                return Err(Error::InvalidLabel(format!("{elems:?} is not strictly increasing")));
            }
            prev = e;
            mask |= 1 << e;
        }
        Ok(Label {
            ambient: ambient as u8,
            elems: elems.iter().map(|&e| e as u8).collect(),
            mask,
        })
    }

    fn from_mask(ambient: usize, mask: u32) -> Self {
        let elems = (1..=ambient).filter(|&e| mask & (1 << e) != 0).map(|e| e as u8).collect();
        Label { ambient: ambient as u8, elems, mask }
    }

    /// The full set `[n]`.
    pub fn full(n: usize) -> Result<Self> {
        Label::new(n, &(1..=n).collect::<Vec<_>>())
    }

    /// The complement `[n] \ {k}`.
    pub fn hat(n: usize, k: usize) -> Result<Self> {
        let elems: Vec<usize> = (1..=n).filter(|&e| e != k).collect();
        if elems.len() == n {
            return Err(Error::InvalidLabel(format!("{k} not in 1..={n}")));
        }
        Label::new(n, &elems)
    }

    pub fn ambient(&self) -> usize {
        self.ambient as usize
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elems(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.elems.iter().map(|&e| e as usize)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.elems().collect()
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn contains(&self, e: usize) -> bool {
        e < 32 && self.mask & (1 << e) != 0
    }

    pub fn is_subset(&self, other: &Label) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn without(&self, e: usize) -> Label {
        Label::from_mask(self.ambient(), self.mask & !(1 << e))
    }

    pub fn with(&self, e: usize) -> Result<Label> {
        if e == 0 || e > self.ambient() {
            return Err(Error::InvalidLabel(format!("element {e} not in 1..={}", self.ambient)));
        }
        Ok(Label::from_mask(self.ambient(), self.mask | (1 << e)))
    }

    /// Same elements viewed inside a different ambient set.
    pub fn with_ambient(&self, ambient: usize) -> Result<Label> {
        Label::new(ambient, &self.to_vec())
    }

    /// Adds `delta` to every element (and to the ambient size).
    pub fn shifted(&self, delta: isize) -> Result<Label> {
        let ambient = self.ambient() as isize + delta;
        let elems: Vec<usize> = self.elems().map(|e| (e as isize + delta).max(0) as usize).collect();
        Label::new(ambient.max(0) as usize, &elems)
    }

    /// For `K = [n] \ {k}` returns `k`.
    pub fn missing_one(&self) -> Option<usize> {
        if self.len() + 1 != self.ambient() {
            return None;
        }
        (1..=self.ambient()).find(|&e| !self.contains(e))
    }
}

impl Ord for Label {
    fn cmp(&self, other: &Self) -> Ordering {
        self.elems.cmp(&other.elems).then(self.ambient.cmp(&other.ambient))
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ambient() < 10 {
            for e in self.elems() {
                write!(f, "{e}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.elems().map(|e| e.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{{{self}}}")
    }
}

// Labels travel as plain integer arrays; the ambient size is supplied by the
// enclosing document (program or system).
impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.elems.serialize(s)
    }
}

/// Deserialized labels get the smallest ambient that contains them; callers
/// re-home them with [`Label::with_ambient`].
impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let elems: Vec<usize> = Vec::deserialize(d)?;
        let ambient = elems.iter().copied().max().unwrap_or(1).max(1);
        Label::new(ambient, &elems).map_err(serde::de::Error::custom)
    }
}

/// An ordered list of pairwise distinct labels over one ambient set.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LabelSequence {
    ambient: usize,
    items: Vec<Label>,
}

impl LabelSequence {
    pub fn new(ambient: usize, items: Vec<Label>) -> Result<Self> {
        for (i, l) in items.iter().enumerate() {
            if l.ambient() != ambient {
                return Err(Error::InvalidLabel(format!(
                    "label {l} has ambient {}, expected {ambient}",
                    l.ambient()
                )));
            }
            if items[..i].contains(l) {
                return Err(Error::InvalidLabel(format!("duplicate label {l}")));
            }
        }
        Ok(LabelSequence { ambient, items })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn items(&self) -> &[Label] {
        &self.items
    }

    pub fn into_items(self) -> Vec<Label> {
        self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Label> {
        self.items.iter()
    }

    pub fn reversed(&self) -> LabelSequence {
        let mut items = self.items.clone();
        items.reverse();
        LabelSequence { ambient: self.ambient, items }
    }
}

impl fmt::Display for LabelSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.items.iter().map(|l| l.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// All `(|m|-1)`-subsets of `m`, lexicographically ordered.
pub fn packet(m: &Label) -> Result<LabelSequence> {
    if m.len() < 2 {
        return Err(Error::PacketTooSmall(m.len()));
    }
    // Dropping the largest element gives the lexicographically smallest subset.
    let items = m.to_vec().into_iter().rev().map(|e| m.without(e)).collect();
    LabelSequence::new(m.ambient(), items)
}

/// Odd and even positions (1-based) of the lexicographic packet.
pub fn half_packets(k: &Label) -> Result<(LabelSequence, LabelSequence)> {
    let p = packet(k)?;
    let (mut odd, mut even) = (Vec::new(), Vec::new());
    for (i, l) in p.into_items().into_iter().enumerate() {
        if i % 2 == 0 {
            odd.push(l);
        } else {
            even.push(l);
        }
    }
    Ok((LabelSequence::new(k.ambient(), odd)?, LabelSequence::new(k.ambient(), even)?))
}

/// Whether two `(N-2)`-subsets may be exchanged: no `(N-1)`-subset contains both.
pub fn commutes(j: &Label, j2: &Label) -> Result<bool> {
    let n = j.ambient();
    if j2.ambient() != n || j.len() + 2 != n || j2.len() + 2 != n {
        return Err(Error::InvalidLabel(format!(
            "commutes needs two ({})-subsets of [{n}], got {j} and {j2}",
            n.saturating_sub(2)
        )));
    }
    if j == j2 {
        return Err(Error::InvalidLabel(format!("commutes needs distinct labels, got {j} twice")));
    }
    Ok((j.mask() | j2.mask()).count_ones() as usize == n)
}

/// All `k`-subsets of `[n]` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Label> {
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Label>) {
        if cur.len() == k {
            out.push(Label::new(n, cur).expect("valid subset"));
            return;
        }
        for e in start..=n {
            if n - e + 1 < k - cur.len() {
                break;
            }
            cur.push(e);
            rec(n, k, e + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(n, k, 1, &mut Vec::new(), &mut out);
    }
    out
}

/// 1-based position of `j` in the lexicographic packet of `k`; `j` must be
/// `k` minus one element.
fn packet_position(j: &Label, k: &Label) -> usize {
    let removed = (k.mask() & !j.mask()).trailing_zeros() as usize;
    let rank = k.elems().position(|e| e == removed).expect("j is k minus one element") + 1;
    k.len() - rank + 1
}

/// `J` is blue in the lexicographic boundary order iff it is odd in the
/// packet of both `(N-1)`-supersets; in the reverse order iff it is even in both.
fn is_blue(j: &Label, odd: bool) -> bool {
    let n = j.ambient();
    (1..=n).filter(|&e| !j.contains(e)).all(|e| {
        let k = j.with(e).expect("element in range");
        (packet_position(j, &k) % 2 == 1) == odd
    })
}

pub fn check_n(n: usize) -> Result<()> {
    if !(3..=MAX_AMBIENT).contains(&n) {
        return Err(Error::PolygonTooSmall(n));
    }
    Ok(())
}

/// Input slots of the N-gon equation.
pub fn blue_alpha(n: usize) -> Result<LabelSequence> {
    check_n(n)?;
    let items = subsets(n, n - 2).into_iter().filter(|j| is_blue(j, true)).collect();
    LabelSequence::new(n, items)
}

/// Output slots of the N-gon equation.
pub fn blue_omega(n: usize) -> Result<LabelSequence> {
    check_n(n)?;
    let items = subsets(n, n - 2).into_iter().rev().filter(|j| is_blue(j, false)).collect();
    LabelSequence::new(n, items)
}

/// Input slots of the dual N-gon equation.
pub fn red_alpha(n: usize) -> Result<LabelSequence> {
    Ok(blue_omega(n)?.reversed())
}

/// Output slots of the dual N-gon equation.
pub fn red_omega(n: usize) -> Result<LabelSequence> {
    Ok(blue_alpha(n)?.reversed())
}
