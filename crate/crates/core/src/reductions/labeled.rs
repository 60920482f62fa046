//! Reductions of multi-sorted systems on `[N+1]` to systems on `[N]`, by
//! keeping the maps `T_K` with `k ∈ K` for `k = 1` or `k = N+1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::combinat::{check_n, Label};
use crate::engine::{LabeledSystem, SortedMap};
use crate::eqcompiler::window;
use crate::error::{Error, Result};

/// Which element every kept map index must contain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Projection {
    /// `1 ∈ K`; carriers `U_J := U_{{1} ∪ J}` after renumbering. Keeps duality.
    First,
    /// `N+1 ∈ K`; carriers `U_J := U_{J ∪ {N+1}}`. Swaps duality.
    Last,
}

/// The six reductions, by source equation and the slot that disappears.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Reduction {
    /// Even (N+1)-gon, k = 1: ignored last input.
    #[serde(rename = "4.1")]
    FirstIgnoreLastInput,
    /// Odd (N+1)-gon, k = 1: first output cut.
    #[serde(rename = "4.2")]
    FirstCutFirstOutput,
    /// Odd dual (N+1)-gon, k = 1: ignored last input.
    #[serde(rename = "4.3")]
    DualFirstIgnoreLastInput,
    /// Even dual (N+1)-gon, k = 1: first output cut.
    #[serde(rename = "4.4")]
    DualFirstCutFirstOutput,
    /// (N+1)-gon, k = N+1: ignored first input, dual N-gon result.
    #[serde(rename = "4.5")]
    LastIgnoreFirstInput,
    /// Dual (N+1)-gon, k = N+1: last output cut, N-gon result.
    #[serde(rename = "4.6")]
    DualLastCutLastOutput,
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Reduction::*;
        f.write_str(match self {
            FirstIgnoreLastInput => "4.1",
            FirstCutFirstOutput => "4.2",
            DualFirstIgnoreLastInput => "4.3",
            DualFirstCutFirstOutput => "4.4",
            LastIgnoreFirstInput => "4.5",
            DualLastCutLastOutput => "4.6",
        })
    }
}

impl Reduction {
    /// The reduction that applies to a system of order `m` (its own `N+1`).
    pub fn for_source(m: usize, dual: bool, proj: Projection) -> Reduction {
        use Reduction::*;
        match (proj, dual, m % 2) {
            (Projection::First, false, 0) => FirstIgnoreLastInput,
            (Projection::First, false, _) => FirstCutFirstOutput,
            (Projection::First, true, 1) => DualFirstIgnoreLastInput,
            (Projection::First, true, _) => DualFirstCutFirstOutput,
            (Projection::Last, false, _) => LastIgnoreFirstInput,
            (Projection::Last, true, _) => DualLastCutLastOutput,
        }
    }

    /// Whether the removed slot is an input the maps must ignore; only
    /// those reductions can be reversed by a degenerate extension.
    pub fn removes_input(self) -> bool {
        use Reduction::*;
        matches!(self, FirstIgnoreLastInput | DualFirstIgnoreLastInput | LastIgnoreFirstInput)
    }
}

struct Frame {
    /// Order of the larger system.
    m: usize,
    k: usize,
    proj: Projection,
}

impl Frame {
    fn new(m: usize, proj: Projection) -> Self {
        let k = if proj == Projection::First { 1 } else { m };
        Frame { m, k, proj }
    }

    /// Label on `[N]` for a label on `[N+1]` containing `k`.
    fn down(&self, j: &Label) -> Result<Label> {
        match self.proj {
            Projection::First => j.without(1).shifted(-1),
            Projection::Last => j.without(self.m).with_ambient(self.m - 1),
        }
    }

    fn up(&self, j: &Label) -> Result<Label> {
        match self.proj {
            Projection::First => j.shifted(1)?.with(1),
            Projection::Last => j.with_ambient(self.m)?.with(self.m),
        }
    }

    fn target_dual(&self, source_dual: bool) -> bool {
        source_dual ^ (self.proj == Projection::Last)
    }

    /// For `T_K` with `k ∈ K`: whether the label `K \ {k}` sits in the
    /// input window, and at which slot.
    fn dropped_slot(&self, big: &Label, dual: bool) -> Result<(bool, usize)> {
        let gone = big.without(self.k);
        let (consume, emit) = window(big, dual)?;
        if let Some(i) = consume.iter().position(|j| *j == gone) {
            return Ok((true, i));
        }
        let i = emit.iter().position(|j| *j == gone).expect("K \\ {k} is in the packet of K");
        Ok((false, i))
    }
}

/// Reduces a system on `[N+1]` to one on `[N]`.
///
/// Maps whose input slot disappears must ignore it (checked, reported as
/// [`Error::Hypothesis`]). Nothing is assumed about whether `sys` solves
/// its equation.
pub fn labeled_reduce(sys: &LabeledSystem, proj: Projection) -> Result<(Reduction, LabeledSystem)> {
    let m = sys.ambient();
    check_n(m.saturating_sub(1))?;
    let frame = Frame::new(m, proj);
    let dual = sys.dual();
    let target_dual = frame.target_dual(dual);
    let n = m - 1;
    let carriers = crate::combinat::subsets(n, n - 2)
        .into_iter()
        .map(|j| Ok((j.clone(), sys.carrier(&frame.up(&j)?))))
        .collect::<Result<_>>()?;
    let mut maps = std::collections::BTreeMap::new();
    for small in crate::combinat::subsets(n, n - 1) {
        let big = frame.up(&small)?;
        let t = sys.map(&big);
        let (is_input, i) = frame.dropped_slot(&big, dual)?;
        let reduced = if is_input {
            if !t.ignores(i) {
                return Err(Error::Hypothesis(format!("T_{big} depends on input slot {}", i + 1)));
            }
            let mut ins = t.in_sizes().to_vec();
            ins.remove(i);
            SortedMap::from_fn(&ins, t.out_sizes(), |x| {
                let mut full = x.to_vec();
                full.insert(i, 0);
                t.image(&full).to_vec()
            })?
        } else {
            let mut outs = t.out_sizes().to_vec();
            outs.remove(i);
            SortedMap::from_fn(t.in_sizes(), &outs, |x| {
                let mut img = t.image(x).to_vec();
                img.remove(i);
                img
            })?
        };
        // The surviving slots, renamed, must be exactly the window of the smaller index.
        let (consume, emit) = window(&big, dual)?;
        let gone = big.without(frame.k);
        let rename = |seq: &crate::combinat::LabelSequence| -> Result<Vec<Label>> {
            seq.iter().filter(|j| **j != gone).map(|j| frame.down(j)).collect()
        };
        let (want_in, want_out) = window(&small, target_dual)?;
        if rename(&consume)? != want_in.items() || rename(&emit)? != want_out.items() {
            return Err(Error::Routing { context: format!("reducing T_{big}"), state: format!("{consume} -> {emit}") });
        }
        maps.insert(small, reduced);
    }
    let reduced = LabeledSystem::new(n, target_dual, carriers, maps)?;
    Ok((Reduction::for_source(m, dual, proj), reduced))
}

/// Extends a system on `[N]` to a degenerate system on `[N+1]` whose
/// [`labeled_reduce`] along `proj` gives `sys` back.
///
/// New carriers (labels without `k`) get size `filler_q`, and the one new
/// map `T_{[N+1] \ {k}}` is constant 0. Only reductions that remove an
/// input can be reversed this way.
pub fn labeled_extend(sys: &LabeledSystem, proj: Projection, filler_q: u32) -> Result<(Reduction, LabeledSystem)> {
    let n = sys.ambient();
    let m = n + 1;
    check_n(n)?;
    let frame = Frame::new(m, proj);
    let source_dual = frame.target_dual(sys.dual());
    let kind = Reduction::for_source(m, source_dual, proj);
    if !kind.removes_input() {
        return Err(Error::Parity(format!("reduction {kind} cuts an output and has no degenerate extension")));
    }
    let ext = LabeledSystem::build(
        m,
        source_dual,
        |j| if j.contains(frame.k) { sys.carrier(&frame.down(j).expect("label contains k")) } else { filler_q },
        |big, ins, outs| {
            if !big.contains(frame.k) {
                return SortedMap::from_fn(ins, outs, |_| vec![0; outs.len()]);
            }
            let t = sys.map(&frame.down(big)?);
            let (_, i) = frame.dropped_slot(big, source_dual)?;
            SortedMap::from_fn(ins, outs, |x| {
                let mut rest = x.to_vec();
                rest.remove(i);
                t.image(&rest).to_vec()
            })
        },
    )?;
    Ok((kind, ext))
}
