//! Compilation of (dual) N-gon equations into straight-line programs.
//!
//! A side of the N-gon equation applies one map `T_K` per `(N-1)`-subset `K`
//! of one half-packet of `[N]`. Each application needs its input labels
//! contiguous and lexicographically ordered; commuting neighbours are
//! exchanged by explicit [`Step::Swap`] steps to get there. Steps are stored
//! in execution order, the reverse of the composition order used in
//! [`render_text`].

mod reference;
mod route;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::combinat::{
    blue_alpha, blue_omega, commutes, half_packets, red_alpha, red_omega, Label, LabelSequence,
};
use crate::error::{Error, Result};

pub use reference::reference_program;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lhs,
    Rhs,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Lhs => "lhs",
            Side::Rhs => "rhs",
        })
    }
}

/// One instruction. Positions are 1-based slot indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Step {
    /// Exchange slots `pos` and `pos + 1`.
    Swap(usize),
    /// Apply the map indexed by `k` (or the single map when `k` is absent)
    /// to the slots starting at `pos`.
    Apply {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        k: Option<Label>,
        pos: usize,
    },
}

/// One side of a (dual) N-gon equation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ProgramJson", into = "ProgramJson")]
pub struct Program {
    pub n: usize,
    pub dual: bool,
    pub side: Side,
    pub steps: Vec<Step>,
    pub inputs: LabelSequence,
    pub outputs: LabelSequence,
}

#[derive(Serialize, Deserialize)]
struct ProgramJson {
    n: usize,
    dual: bool,
    side: Side,
    steps: Vec<Step>,
    inputs: Vec<Vec<usize>>,
    outputs: Vec<Vec<usize>>,
}

impl From<Program> for ProgramJson {
    fn from(p: Program) -> Self {
        ProgramJson {
            n: p.n,
            dual: p.dual,
            side: p.side,
            steps: p.steps,
            inputs: p.inputs.iter().map(Label::to_vec).collect(),
            outputs: p.outputs.iter().map(Label::to_vec).collect(),
        }
    }
}

impl TryFrom<ProgramJson> for Program {
    type Error = Error;

    fn try_from(j: ProgramJson) -> Result<Self> {
        let n = j.n;
        let seq = |v: Vec<Vec<usize>>| -> Result<LabelSequence> {
            let items = v.iter().map(|e| Label::new(n, e)).collect::<Result<Vec<_>>>()?;
            LabelSequence::new(n, items)
        };
        let steps = j
            .steps
            .into_iter()
            .map(|s| match s {
                Step::Apply { k: Some(k), pos } => Ok(Step::Apply { k: Some(k.with_ambient(n)?), pos }),
                other => Ok(other),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Program { n, dual: j.dual, side: j.side, steps, inputs: seq(j.inputs)?, outputs: seq(j.outputs)? })
    }
}

impl Program {
    /// Number of `Apply` steps.
    pub fn apply_count(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s, Step::Apply { .. })).count()
    }

    /// The map indices in application order (compiled programs only).
    pub fn map_indices(&self) -> Vec<Label> {
        self.steps
            .iter()
            .filter_map(|s| match s {
                Step::Apply { k: Some(k), .. } => Some(k.clone()),
                _ => None,
            })
            .collect()
    }

    /// Replays the steps on the input labels, checking that every swap is
    /// legal and every application sees its half-packet. Returns the final
    /// label sequence.
    pub fn simulate(&self) -> Result<LabelSequence> {
        let (k_in, k_out) = map_arity(self.n, self.dual);
        let mut state: Vec<Label> = self.inputs.items().to_vec();
        for (i, step) in self.steps.iter().enumerate() {
            match step {
                Step::Swap(pos) => {
                    if *pos == 0 || *pos >= state.len() {
                        return Err(Error::MalformedProgram(format!("step {i}: swap at {pos}")));
                    }
                    if !commutes(&state[pos - 1], &state[*pos])? {
                        return Err(Error::MalformedProgram(format!(
                            "step {i}: {} and {} do not commute",
                            state[pos - 1],
                            state[*pos]
                        )));
                    }
                    state.swap(pos - 1, *pos);
                }
                Step::Apply { k, pos } => {
                    if *pos == 0 || pos - 1 + k_in > state.len() {
                        return Err(Error::MalformedProgram(format!("step {i}: apply at {pos}")));
                    }
                    let Some(k) = k else {
                        return Err(Error::MalformedProgram(format!(
                            "step {i}: single-map programs carry no labels to simulate"
                        )));
                    };
                    let (consume, emit) = window(k, self.dual)?;
                    if state[pos - 1..pos - 1 + k_in] != *consume.items() {
                        return Err(Error::MalformedProgram(format!(
                            "step {i}: T_{k} expects {consume} at {pos}"
                        )));
                    }
                    debug_assert_eq!(emit.len(), k_out);
                    state.splice(pos - 1..pos - 1 + k_in, emit.into_items());
                }
            }
        }
        LabelSequence::new(self.n, state)
    }
}

/// `(k_in, k_out)` of the maps in the (dual) N-gon equation.
pub fn map_arity(n: usize, dual: bool) -> (usize, usize) {
    let odd = n / 2; // ceil((n-1)/2)
    let even = (n - 1) / 2;
    if dual {
        (even, odd)
    } else {
        (odd, even)
    }
}

/// Labels consumed (lexicographic) and emitted (reverse lexicographic) by `T_K`.
pub fn window(k: &Label, dual: bool) -> Result<(LabelSequence, LabelSequence)> {
    let (odd, even) = half_packets(k)?;
    Ok(if dual { (even, odd.reversed()) } else { (odd, even.reversed()) })
}

fn compile(n: usize, dual: bool) -> Result<(Program, Program)> {
    let full = Label::full(n)?;
    let (odd, even) = half_packets(&full)?;
    let (inputs, outputs) =
        if dual { (red_alpha(n)?, red_omega(n)?) } else { (blue_alpha(n)?, blue_omega(n)?) };
    // Non-dual: odd half-packet lexicographically against the even one reversed.
    // Dual: odd half-packet reversed against the even one lexicographically.
    let (lhs_maps, rhs_maps) = if dual {
        (odd.reversed().into_items(), even.into_items())
    } else {
        (odd.into_items(), even.reversed().into_items())
    };
    let lhs = build_side(n, dual, Side::Lhs, &lhs_maps, &inputs, &outputs)?;
    let rhs = build_side(n, dual, Side::Rhs, &rhs_maps, &inputs, &outputs)?;
    Ok((lhs, rhs))
}

fn build_side(
    n: usize,
    dual: bool,
    side: Side,
    maps: &[Label],
    inputs: &LabelSequence,
    outputs: &LabelSequence,
) -> Result<Program> {
    let mut state = inputs.items().to_vec();
    let mut steps = Vec::new();
    for k in maps {
        let (consume, emit) = window(k, dual)?;
        route::gather(&mut state, &mut steps, consume.items(), &format!("T_{k}"))?;
        let pos = state.iter().position(|l| *l == consume.items()[0]).expect("gathered");
        state.splice(pos..pos + consume.len(), emit.into_items());
        steps.push(Step::Apply { k: Some(k.clone()), pos: pos + 1 });
    }
    route::arrange(&mut state, &mut steps, outputs.items())?;
    let program = Program { n, dual, side, steps, inputs: inputs.clone(), outputs: outputs.clone() };
    debug_assert_eq!(program.simulate().as_ref(), Ok(outputs));
    Ok(program)
}

/// Both sides of the N-gon equation.
pub fn compile_gon(n: usize) -> Result<(Program, Program)> {
    compile(n, false)
}

/// Both sides of the dual N-gon equation. The left side is the one built
/// from the odd half-packet, matching the position-index displays.
pub fn compile_dual_gon(n: usize) -> Result<(Program, Program)> {
    compile(n, true)
}

type Cache = Mutex<HashMap<(usize, bool), Arc<(Program, Program)>>>;

/// Memoized [`compile_gon`] / [`compile_dual_gon`].
pub fn compiled(n: usize, dual: bool) -> Result<Arc<(Program, Program)>> {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().expect("cache poisoned").get(&(n, dual)) {
        return Ok(p.clone());
    }
    let p = Arc::new(compile(n, dual)?);
    cache.lock().expect("cache poisoned").insert((n, dual), p.clone());
    Ok(p)
}

/// Drops the map indices: every application refers to one map `T`.
pub fn specialize_single(p: &Program) -> Program {
    let steps = p
        .steps
        .iter()
        .map(|s| match s {
            Step::Apply { pos, .. } => Step::Apply { k: None, pos: *pos },
            Step::Swap(pos) => Step::Swap(*pos),
        })
        .collect();
    Program { steps, ..p.clone() }
}

fn subscript(s: &str) -> String {
    if s.chars().count() == 1 {
        format!("_{s}")
    } else {
        format!("_{{{s}}}")
    }
}

/// Composition-order text, e.g. `T_{1̂,1} T_{3̂,2} T_{5̂,1}` or `T_2 P_1 T_2`.
pub fn render_text(p: &Program) -> String {
    let t = if p.dual { "T\u{303}" } else { "T" };
    let parts: Vec<String> = p
        .steps
        .iter()
        .rev()
        .map(|s| match s {
            Step::Swap(pos) => format!("P{}", subscript(&pos.to_string())),
            Step::Apply { k: None, pos } => format!("{t}{}", subscript(&pos.to_string())),
            Step::Apply { k: Some(k), pos } => {
                let name = match k.missing_one() {
                    Some(m) if p.n >= 5 => format!("{m}\u{302}"),
                    _ => k.to_string(),
                };
                format!("{t}_{{{name},{pos}}}")
            }
        })
        .collect();
    parts.join(" ")
}

/// `lhs = rhs` in composition order.
pub fn render_equation(lhs: &Program, rhs: &Program) -> String {
    format!("{} = {}", render_text(lhs), render_text(rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hat(n: usize, k: usize) -> Option<Label> {
        Some(Label::hat(n, k).unwrap())
    }

    fn lab(n: usize, e: &[usize]) -> Option<Label> {
        Some(Label::new(n, e).unwrap())
    }

    #[test]
    fn pentagon_steps() {
        let (lhs, rhs) = compile_gon(5).unwrap();
        assert_eq!(
            lhs.steps,
            vec![
                Step::Apply { k: hat(5, 5), pos: 1 },
                Step::Apply { k: hat(5, 3), pos: 2 },
                Step::Apply { k: hat(5, 1), pos: 1 },
            ]
        );
        assert_eq!(
            rhs.steps,
            vec![
                Step::Apply { k: hat(5, 2), pos: 2 },
                Step::Swap(1),
                Step::Apply { k: hat(5, 4), pos: 2 },
            ]
        );
    }

    #[test]
    fn tetragon_and_trigon_steps() {
        let (lhs, rhs) = compile_gon(4).unwrap();
        assert_eq!(
            lhs.steps,
            vec![Step::Apply { k: hat(4, 4), pos: 1 }, Step::Apply { k: hat(4, 2), pos: 1 }]
        );
        assert_eq!(
            rhs.steps,
            vec![Step::Apply { k: hat(4, 1), pos: 2 }, Step::Apply { k: hat(4, 3), pos: 1 }]
        );
        let (lhs, rhs) = compile_gon(3).unwrap();
        assert_eq!(
            lhs.steps,
            vec![Step::Apply { k: lab(3, &[1, 2]), pos: 1 }, Step::Apply { k: lab(3, &[2, 3]), pos: 1 }]
        );
        assert_eq!(rhs.steps, vec![Step::Apply { k: lab(3, &[1, 3]), pos: 1 }]);
    }

    #[test]
    fn dual_low_orders() {
        let (lhs, rhs) = compile_dual_gon(4).unwrap();
        assert_eq!(
            lhs.steps,
            vec![Step::Apply { k: lab(4, &[1, 3, 4]), pos: 1 }, Step::Apply { k: lab(4, &[1, 2, 3]), pos: 2 }]
        );
        assert_eq!(
            rhs.steps,
            vec![Step::Apply { k: lab(4, &[1, 2, 4]), pos: 1 }, Step::Apply { k: lab(4, &[2, 3, 4]), pos: 1 }]
        );
        let (lhs, rhs) = compile_dual_gon(3).unwrap();
        assert_eq!(
            lhs.steps,
            vec![Step::Apply { k: lab(3, &[2, 3]), pos: 1 }, Step::Apply { k: lab(3, &[1, 2]), pos: 1 }]
        );
        assert_eq!(rhs.steps, vec![Step::Apply { k: lab(3, &[1, 3]), pos: 1 }]);
        let (lhs, rhs) = compile_dual_gon(5).unwrap();
        assert_eq!(render_text(&lhs), "T\u{303}_{5\u{302},2} T\u{303}_{3\u{302},1} T\u{303}_{1\u{302},2}");
        assert_eq!(render_text(&rhs), "T\u{303}_{2\u{302},1} P_2 T\u{303}_{4\u{302},1}");
    }

    #[test]
    fn rendering() {
        let (lhs, rhs) = compile_gon(5).unwrap();
        assert_eq!(render_text(&lhs), "T_{1\u{302},1} T_{3\u{302},2} T_{5\u{302},1}");
        assert_eq!(render_text(&specialize_single(&rhs)), "T_2 P_1 T_2");
        let (_, rhs) = compile_gon(4).unwrap();
        assert_eq!(render_text(&rhs), "T_{124,1} T_{234,2}");
    }

    #[test]
    fn specialization_keeps_positions() {
        let (lhs, _) = compile_gon(5).unwrap();
        let s = specialize_single(&lhs);
        let pos: Vec<_> = s
            .steps
            .iter()
            .map(|st| match st {
                Step::Apply { k: None, pos } => *pos,
                _ => panic!("unexpected {st:?}"),
            })
            .collect();
        assert_eq!(pos, [1, 2, 1]);
        let (lhs, _) = compile_gon(3).unwrap();
        assert_eq!(render_text(&specialize_single(&lhs)), "T_1 T_1");
    }

    #[test]
    fn arities() {
        assert_eq!(map_arity(5, false), (2, 2));
        assert_eq!(map_arity(6, false), (3, 2));
        assert_eq!(map_arity(8, true), (3, 4));
        assert_eq!(map_arity(3, false), (1, 1));
        assert_eq!(map_arity(4, true), (1, 2));
    }

    #[test]
    fn compile_rejects_small_n() {
        assert!(compile_gon(2).is_err());
        assert!(compile_dual_gon(1).is_err());
    }

    #[test]
    fn program_json_shape() {
        let (lhs, rhs) = compile_gon(5).unwrap();
        let json = serde_json::to_string(&rhs).unwrap();
        assert!(json.starts_with(
            r#"{"n":5,"dual":false,"side":"rhs","steps":[{"apply":{"k":[1,3,4,5],"pos":2}},{"swap":1},"#
        ));
        assert!(json.ends_with(r#""inputs":[[1,2,3],[1,3,4],[1,4,5]],"outputs":[[3,4,5],[2,3,5],[1,2,5]]}"#));
        let back: Program = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rhs);
        let single = specialize_single(&lhs);
        let back: Program = serde_json::from_str(&serde_json::to_string(&single).unwrap()).unwrap();
        assert_eq!(back, single);
    }

    #[test]
    fn simulate_rejects_bad_programs() {
        let (mut lhs, _) = compile_gon(5).unwrap();
        lhs.steps.insert(0, Step::Swap(1));
        assert!(matches!(lhs.simulate(), Err(Error::MalformedProgram(_))));
        let (mut rhs, _) = compile_gon(5).unwrap();
        rhs.steps[0] = Step::Apply { k: hat(5, 2), pos: 3 };
        assert!(rhs.simulate().is_err());
    }
}
