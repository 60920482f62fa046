//! Projections, degenerate extensions and constructors relating solutions
//! of neighbouring (dual) polygon equations.
//!
//! Nothing here verifies its output: callers check the target equation
//! when they need to (see `verifier`).

mod conjectures;
mod labeled;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::engine::FiniteMap;
use crate::eqcompiler::map_arity;
use crate::error::{Error, Result};

pub use conjectures::{check_conjectures, ConjectureReport, FirstFailure};
pub use labeled::{labeled_extend, labeled_reduce, Projection, Reduction};

fn expect_arity(t: &FiniteMap, n: usize, dual: bool) -> Result<()> {
    let want = map_arity(n, dual);
    if t.arity() != want {
        let eq = if dual { "dual " } else { "" };
        return Err(Error::Arity { expected: format!("{want:?} for the {eq}{n}-gon"), got: format!("{:?}", t.arity()) });
    }
    Ok(())
}

/// Drops the last output of a dual `(N+1)`-gon map, giving an N-gon map.
pub fn project_cut_last_codomain(t: &FiniteMap, n: usize) -> Result<FiniteMap> {
    expect_arity(t, n + 1, true)?;
    Ok(t.select_outputs(&(0..t.k_out() - 1).collect::<Vec<_>>()))
}

/// Drops the first output of an `(N+1)`-gon map (N even, giving an N-gon
/// map) or of a dual `(N+1)`-gon map (N odd, giving a dual N-gon map).
pub fn project_cut_first_codomain(t: &FiniteMap, n: usize, dual: bool) -> Result<FiniteMap> {
    match (dual, n % 2) {
        (false, 1) => return Err(Error::Parity(format!("cutting the first output of an {}-gon map needs N even", n + 1))),
        (true, 0) => return Err(Error::Parity(format!("cutting the first output of a dual {}-gon map needs N odd", n + 1))),
        _ => {}
    }
    expect_arity(t, n + 1, dual)?;
    Ok(t.select_outputs(&(1..t.k_out()).collect::<Vec<_>>()))
}

/// Which end of the argument list a degenerate map ignores.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum End {
    First,
    Last,
}

/// Drops an ignored argument. Fails if the map depends on it.
pub fn drop_argument(t: &FiniteMap, end: End) -> Result<FiniteMap> {
    if t.k_in() < 2 {
        return Err(Error::Arity { expected: "at least 2 arguments".into(), got: t.k_in().to_string() });
    }
    let i = match end {
        End::First => 0,
        End::Last => t.k_in() - 1,
    };
    if !t.is_degenerate_in(i) {
        return Err(Error::Hypothesis(format!("argument {} of {}", i + 1, t.k_in())));
    }
    FiniteMap::from_fn(t.q(), t.k_in() - 1, t.k_out(), |x| {
        let mut full = x.to_vec();
        full.insert(i, 0);
        t.image(&full).to_vec()
    })
}

/// Adds an argument that the map ignores.
pub fn add_argument(t: &FiniteMap, end: End) -> Result<FiniteMap> {
    FiniteMap::from_fn(t.q(), t.k_in() + 1, t.k_out(), |x| match end {
        End::First => t.image(&x[1..]).to_vec(),
        End::Last => t.image(&x[..x.len() - 1]).to_vec(),
    })
}

/// The four ways to extend a solution to a degenerate solution one order up.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Extension {
    /// Odd N-gon map, new last argument, (N+1)-gon map.
    #[serde(rename = "7.4")]
    OddGonLast,
    /// Odd dual N-gon map, new first argument, (N+1)-gon map.
    #[serde(rename = "7.5")]
    OddDualFirst,
    /// Even dual N-gon map, new first argument, (N+1)-gon map.
    #[serde(rename = "7.6")]
    EvenDualFirst,
    /// Even dual N-gon map, new last argument, dual (N+1)-gon map.
    #[serde(rename = "7.7")]
    EvenDualLast,
}

impl Extension {
    pub const ALL: [Extension; 4] =
        [Extension::OddGonLast, Extension::OddDualFirst, Extension::EvenDualFirst, Extension::EvenDualLast];

    /// Whether the source is a dual map, and the parity its order must have.
    pub fn source(self) -> (bool, usize) {
        match self {
            Extension::OddGonLast => (false, 1),
            Extension::OddDualFirst => (true, 1),
            Extension::EvenDualFirst => (true, 0),
            Extension::EvenDualLast => (true, 0),
        }
    }

    /// Whether the target is a dual map.
    pub fn target_dual(self) -> bool {
        self == Extension::EvenDualLast
    }

    pub fn end(self) -> End {
        match self {
            Extension::OddGonLast | Extension::EvenDualLast => End::Last,
            Extension::OddDualFirst | Extension::EvenDualFirst => End::First,
        }
    }

    fn check_order(self, n: usize) -> Result<()> {
        let (dual, parity) = self.source();
        if n % 2 != parity {
            let eq = if dual { "dual " } else { "" };
            let want = if parity == 1 { "odd" } else { "even" };
            return Err(Error::Parity(format!("extension {self} needs an {want} {eq}N-gon map, got N = {n}")));
        }
        Ok(())
    }
}

impl fmt::Display for Extension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Extension::OddGonLast => "7.4",
            Extension::OddDualFirst => "7.5",
            Extension::EvenDualFirst => "7.6",
            Extension::EvenDualLast => "7.7",
        })
    }
}

impl FromStr for Extension {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Extension::ALL
            .into_iter()
            .find(|e| e.to_string() == s)
            .ok_or_else(|| Error::Parse(format!("unknown extension `{s}` (expected 7.4, 7.5, 7.6 or 7.7)")))
    }
}

/// Extends a solution of the source equation of order `n` to a degenerate
/// map of order `n + 1`.
pub fn extend_degenerate(t: &FiniteMap, n: usize, kind: Extension) -> Result<FiniteMap> {
    kind.check_order(n)?;
    expect_arity(t, n, kind.source().0)?;
    add_argument(t, kind.end())
}

/// Inverse of [`extend_degenerate`]: `t` is a map of order `n + 1` ignoring
/// the argument `kind` adds.
pub fn retract_degenerate(t: &FiniteMap, n: usize, kind: Extension) -> Result<FiniteMap> {
    kind.check_order(n)?;
    expect_arity(t, n + 1, kind.target_dual())?;
    drop_argument(t, kind.end())
}

/// What fills the new output coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Filler {
    /// A copy of the first or last argument.
    Arg(End),
    /// A constant.
    Const(u32),
}

/// `(f, T(x))`, with no checks on the result.
pub fn prepend_output(t: &FiniteMap, f: Filler) -> Result<FiniteMap> {
    widen(t, f, End::First)
}

/// `(T(x), f)`, with no checks on the result.
pub fn append_output(t: &FiniteMap, f: Filler) -> Result<FiniteMap> {
    widen(t, f, End::Last)
}

fn widen(t: &FiniteMap, f: Filler, at: End) -> Result<FiniteMap> {
    if let Filler::Const(u) = f {
        if u >= t.q() {
            return Err(Error::Carrier(format!("constant {u} outside carrier of size {}", t.q())));
        }
    }
    FiniteMap::from_fn(t.q(), t.k_in(), t.k_out() + 1, |x| {
        let extra = match f {
            Filler::Arg(End::First) => x[0],
            Filler::Arg(End::Last) => x[x.len() - 1],
            Filler::Const(u) => u,
        };
        let mut out = t.image(x).to_vec();
        match at {
            End::First => out.insert(0, extra),
            End::Last => out.push(extra),
        }
        out
    })
}

/// Whether `T(u, …, u) = (u, …, u)`, checked exactly.
pub fn fixed_point(t: &FiniteMap, u: u32) -> Result<()> {
    if u >= t.q() {
        return Err(Error::Carrier(format!("constant {u} outside carrier of size {}", t.q())));
    }
    let image = t.diagonal(u);
    if image.iter().any(|&x| x != u) {
        return Err(Error::FixedPoint { u, image: image.to_vec() });
    }
    Ok(())
}

/// `(T1(a), T2(a))` for two commuting self-maps of the carrier.
pub fn dual_tetragon_from_pair(t1: &FiniteMap, t2: &FiniteMap) -> Result<FiniteMap> {
    expect_arity(t1, 3, false)?;
    expect_arity(t2, 3, false)?;
    if t1.q() != t2.q() {
        return Err(Error::Carrier(format!("carrier sizes {} and {} differ", t1.q(), t2.q())));
    }
    let at = |t: &FiniteMap, a: u32| t.image(&[a])[0];
    if let Some(a) = (0..t1.q()).find(|&a| at(t1, at(t2, a)) != at(t2, at(t1, a))) {
        return Err(Error::NotCommuting(a));
    }
    FiniteMap::from_fn(t1.q(), 1, 2, |x| vec![at(t1, x[0]), at(t2, x[0])])
}

/// The constructors that add one output coordinate to a solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Construction {
    /// `(b, T(a, b))`.
    PentagonFromTetragon,
    /// `(T(a, b), a)`.
    DualPentagonFromTetragon,
    /// `(T(a, b), a)`.
    DualHexagonFromPentagon,
    /// `(b, T(a, b))`.
    DualHexagonFromDualPentagon,
    /// `(c, T(a, b, c))`.
    HeptagonFromHexagon,
    /// `(T(a, b, c), a)`.
    DualHeptagonFromHexagon,
    /// `(T(a, b, c), a)`.
    DualOctagonFromHeptagon,
    /// `(c, T(a, b, c))`.
    DualOctagonFromDualHeptagon,
}

impl Construction {
    pub const ALL: [Construction; 8] = [
        Construction::PentagonFromTetragon,
        Construction::DualPentagonFromTetragon,
        Construction::DualHexagonFromPentagon,
        Construction::DualHexagonFromDualPentagon,
        Construction::HeptagonFromHexagon,
        Construction::DualHeptagonFromHexagon,
        Construction::DualOctagonFromHeptagon,
        Construction::DualOctagonFromDualHeptagon,
    ];

    /// `(N, dual)` of the source equation.
    pub fn source(self) -> (usize, bool) {
        use Construction::*;
        match self {
            PentagonFromTetragon | DualPentagonFromTetragon => (4, false),
            DualHexagonFromPentagon => (5, false),
            DualHexagonFromDualPentagon => (5, true),
            HeptagonFromHexagon | DualHeptagonFromHexagon => (6, false),
            DualOctagonFromHeptagon => (7, false),
            DualOctagonFromDualHeptagon => (7, true),
        }
    }

    /// `(N, dual)` of the target equation.
    pub fn target(self) -> (usize, bool) {
        use Construction::*;
        match self {
            PentagonFromTetragon => (5, false),
            DualPentagonFromTetragon => (5, true),
            DualHexagonFromPentagon | DualHexagonFromDualPentagon => (6, true),
            HeptagonFromHexagon => (7, false),
            DualHeptagonFromHexagon => (7, true),
            DualOctagonFromHeptagon | DualOctagonFromDualHeptagon => (8, true),
        }
    }

    /// Where the new output goes and which argument it copies.
    fn shape(self) -> (End, End) {
        use Construction::*;
        match self {
            PentagonFromTetragon | DualHexagonFromDualPentagon | HeptagonFromHexagon | DualOctagonFromDualHeptagon => {
                (End::First, End::Last)
            }
            _ => (End::Last, End::First),
        }
    }

    pub fn name(self) -> &'static str {
        use Construction::*;
        match self {
            PentagonFromTetragon => "pentagon-from-tetragon",
            DualPentagonFromTetragon => "dual-pentagon-from-tetragon",
            DualHexagonFromPentagon => "dual-hexagon-from-pentagon",
            DualHexagonFromDualPentagon => "dual-hexagon-from-dual-pentagon",
            HeptagonFromHexagon => "heptagon-from-hexagon",
            DualHeptagonFromHexagon => "dual-heptagon-from-hexagon",
            DualOctagonFromHeptagon => "dual-octagon-from-heptagon",
            DualOctagonFromDualHeptagon => "dual-octagon-from-dual-heptagon",
        }
    }

    /// The construction copying an argument.
    pub fn build(self, t: &FiniteMap) -> Result<FiniteMap> {
        let (n, dual) = self.source();
        expect_arity(t, n, dual)?;
        let (at, arg) = self.shape();
        widen(t, Filler::Arg(arg), at)
    }

    /// The construction with a constant, without the fixed-point check.
    pub fn build_const_raw(self, t: &FiniteMap, u: u32) -> Result<FiniteMap> {
        let (n, dual) = self.source();
        expect_arity(t, n, dual)?;
        widen(t, Filler::Const(u), self.shape().0)
    }

    /// The construction with a constant; fails unless `T(u, …, u) = (u, …, u)`,
    /// the condition under which the result solves the target equation.
    pub fn build_const(self, t: &FiniteMap, u: u32) -> Result<FiniteMap> {
        let out = self.build_const_raw(t, u)?;
        fixed_point(t, u)?;
        Ok(out)
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Construction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Construction::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown construction `{s}`")))
    }
}

pub fn pentagon_from_tetragon_last(t4: &FiniteMap) -> Result<FiniteMap> {
    Construction::PentagonFromTetragon.build(t4)
}

pub fn pentagon_from_tetragon_const(t4: &FiniteMap, u: u32) -> Result<FiniteMap> {
    Construction::PentagonFromTetragon.build_const(t4, u)
}

pub fn dual_pentagon_from_tetragon(t4: &FiniteMap) -> Result<FiniteMap> {
    Construction::DualPentagonFromTetragon.build(t4)
}

pub fn dual_pentagon_from_tetragon_const(t4: &FiniteMap, u: u32) -> Result<FiniteMap> {
    Construction::DualPentagonFromTetragon.build_const(t4, u)
}

pub fn dual_hexagon_from_pentagon(t5: &FiniteMap) -> Result<FiniteMap> {
    Construction::DualHexagonFromPentagon.build(t5)
}

pub fn dual_hexagon_from_pentagon_const(t5: &FiniteMap, u: u32) -> Result<FiniteMap> {
    Construction::DualHexagonFromPentagon.build_const(t5, u)
}

pub fn dual_hexagon_from_dual_pentagon(t5: &FiniteMap) -> Result<FiniteMap> {
    Construction::DualHexagonFromDualPentagon.build(t5)
}

pub fn dual_hexagon_from_dual_pentagon_const(t5: &FiniteMap, u: u32) -> Result<FiniteMap> {
    Construction::DualHexagonFromDualPentagon.build_const(t5, u)
}

pub fn heptagon_from_hexagon(t6: &FiniteMap) -> Result<FiniteMap> {
    Construction::HeptagonFromHexagon.build(t6)
}

pub fn heptagon_from_hexagon_const(t6: &FiniteMap, u: u32) -> Result<FiniteMap> {
    Construction::HeptagonFromHexagon.build_const(t6, u)
}

pub fn dual_heptagon_from_hexagon(t6: &FiniteMap) -> Result<FiniteMap> {
    Construction::DualHeptagonFromHexagon.build(t6)
}

pub fn dual_heptagon_from_hexagon_const(t6: &FiniteMap, u: u32) -> Result<FiniteMap> {
    Construction::DualHeptagonFromHexagon.build_const(t6, u)
}

pub fn dual_octagon_from_heptagon(t7: &FiniteMap) -> Result<FiniteMap> {
    Construction::DualOctagonFromHeptagon.build(t7)
}

pub fn dual_octagon_from_heptagon_const(t7: &FiniteMap, u: u32) -> Result<FiniteMap> {
    Construction::DualOctagonFromHeptagon.build_const(t7, u)
}

pub fn dual_octagon_from_dual_heptagon(t7: &FiniteMap) -> Result<FiniteMap> {
    Construction::DualOctagonFromDualHeptagon.build(t7)
}

pub fn dual_octagon_from_dual_heptagon_const(t7: &FiniteMap, u: u32) -> Result<FiniteMap> {
    Construction::DualOctagonFromDualHeptagon.build_const(t7, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::engine::all_maps;
    use crate::search::{enumerate, SearchSpec};
    use crate::verifier::check_single;

    fn solves(n: usize, dual: bool, t: &FiniteMap) -> bool {
        check_single(n, dual, t).unwrap().holds
    }

    fn solutions(n: usize, dual: bool) -> Vec<FiniteMap> {
        enumerate(&SearchSpec::new(n, dual, 2)).unwrap().solutions
    }

    fn and2() -> FiniteMap {
        FiniteMap::from_fn(2, 2, 1, |x| vec![x[0] & x[1]]).unwrap()
    }

    #[test]
    fn cut_first_of_pentagon_is_associative() {
        // (a*b, a·b) with a*b = b and · = AND.
        let t = pentagon_from_tetragon_last(&and2()).unwrap();
        assert!(solves(5, false, &t));
        let cut = project_cut_first_codomain(&t, 4, false).unwrap();
        assert_eq!(cut, and2());
        assert!(solves(4, false, &cut));
    }

    #[test]
    fn cut_first_of_total_inversion() {
        let cut = project_cut_first_codomain(&catalog::total_inversion(2).unwrap(), 6, false).unwrap();
        assert_eq!(cut.image(&[0, 1, 1]), &[1, 0]);
        assert!(solves(6, false, &cut));
    }

    #[test]
    fn cut_last_of_dual_pentagon() {
        let t = dual_pentagon_from_tetragon(&and2()).unwrap();
        assert!(solves(5, true, &t));
        let cut = project_cut_last_codomain(&t, 4).unwrap();
        assert_eq!(cut, and2());
    }

    #[test]
    fn projections_of_dual_hexagon_solutions() {
        for t in solutions(6, true) {
            assert!(solves(5, false, &project_cut_last_codomain(&t, 5).unwrap()));
        }
    }

    #[test]
    fn trivial_carrier() {
        let t = FiniteMap::from_fn(1, 2, 3, |_| vec![0; 3]).unwrap();
        assert_eq!(project_cut_last_codomain(&t, 5).unwrap().flat(), &[0, 0]);
        let t = FiniteMap::from_fn(1, 2, 2, |_| vec![0; 2]).unwrap();
        assert_eq!(project_cut_first_codomain(&t, 4, false).unwrap().flat(), &[0]);
    }

    #[test]
    fn projection_errors() {
        let p = catalog::transposition(2).unwrap();
        assert!(matches!(project_cut_last_codomain(&p, 5), Err(Error::Arity { .. })));
        assert!(matches!(project_cut_first_codomain(&p, 5, false), Err(Error::Parity(_))));
        assert!(matches!(project_cut_first_codomain(&p, 4, true), Err(Error::Parity(_))));
    }

    #[test]
    fn extensions_from_low_orders() {
        for t in solutions(5, false) {
            let e = extend_degenerate(&t, 5, Extension::OddGonLast).unwrap();
            assert_eq!(e.image(&[1, 0, 1]), t.image(&[1, 0]));
            assert!(solves(6, false, &e));
            assert_eq!(retract_degenerate(&e, 5, Extension::OddGonLast).unwrap(), t);
        }
        for t in solutions(5, true) {
            let e = extend_degenerate(&t, 5, Extension::OddDualFirst).unwrap();
            assert_eq!(e.image(&[1, 0, 1]), t.image(&[0, 1]));
            assert!(solves(6, false, &e));
        }
        for t in solutions(6, true) {
            assert!(solves(7, false, &extend_degenerate(&t, 6, Extension::EvenDualFirst).unwrap()));
            assert!(solves(7, true, &extend_degenerate(&t, 6, Extension::EvenDualLast).unwrap()));
        }
    }

    #[test]
    fn extension_errors() {
        let p = catalog::transposition(2).unwrap();
        assert!(matches!(extend_degenerate(&p, 4, Extension::OddGonLast), Err(Error::Parity(_))));
        assert!(matches!(extend_degenerate(&p, 5, Extension::OddDualFirst), Ok(_)));
        assert!(matches!(extend_degenerate(&p, 6, Extension::EvenDualFirst), Err(Error::Arity { .. })));
        let t = FiniteMap::from_fn(2, 3, 2, |x| vec![x[2], x[0]]).unwrap();
        assert!(matches!(retract_degenerate(&t, 5, Extension::OddGonLast), Err(Error::Hypothesis(_))));
        assert_eq!("7.6".parse::<Extension>().unwrap(), Extension::EvenDualFirst);
        assert!("7.8".parse::<Extension>().is_err());
    }

    #[test]
    fn commuting_pair() {
        let id = FiniteMap::from_fn(2, 1, 1, |x| vec![x[0]]).unwrap();
        let zero = FiniteMap::from_fn(2, 1, 1, |_| vec![0]).unwrap();
        let one = FiniteMap::from_fn(2, 1, 1, |_| vec![1]).unwrap();
        let t = dual_tetragon_from_pair(&id, &zero).unwrap();
        assert!(solves(4, true, &t));
        assert_eq!(dual_tetragon_from_pair(&zero, &one), Err(Error::NotCommuting(0)));
    }

    #[test]
    fn pair_condition_is_exact() {
        let trigons = catalog::idempotent_trigons(3);
        for a in &trigons {
            for b in &trigons {
                match dual_tetragon_from_pair(a, b) {
                    Ok(t) => assert!(solves(4, true, &t)),
                    Err(e) => {
                        assert!(matches!(e, Error::NotCommuting(_)));
                        let raw = FiniteMap::from_fn(3, 1, 2, |x| vec![a.image(x)[0], b.image(x)[0]]).unwrap();
                        assert!(!solves(4, true, &raw));
                    }
                }
            }
        }
    }

    #[test]
    fn tetragon_constructions() {
        let t = pentagon_from_tetragon_last(&and2()).unwrap();
        assert_eq!(t.image(&[1, 0]), &[0, 0]);
        assert_eq!(t.image(&[1, 1]), &[1, 1]);
        assert!(solves(5, false, &pentagon_from_tetragon_const(&and2(), 1).unwrap()));
        let nand = FiniteMap::from_fn(2, 2, 1, |x| vec![1 - (x[0] & x[1])]).unwrap();
        assert!(matches!(pentagon_from_tetragon_const(&nand, 1), Err(Error::FixedPoint { u: 1, .. })));
        assert!(matches!(pentagon_from_tetragon_const(&and2(), 2), Err(Error::Carrier(_))));
    }

    #[test]
    fn constructions_solve_targets() {
        for c in Construction::ALL {
            let (n, dual) = c.source();
            let (m, target_dual) = c.target();
            let sources: Vec<FiniteMap> = if n == 4 { all_maps(2, 2, 1).filter(|t| solves(4, false, t)).collect() } else { solutions(n, dual) };
            assert!(!sources.is_empty(), "{c}");
            for t in &sources {
                assert!(solves(m, target_dual, &c.build(t).unwrap()), "{c}");
                for u in 0..2 {
                    let raw = c.build_const_raw(t, u).unwrap();
                    let fixed = fixed_point(t, u).is_ok();
                    assert_eq!(solves(m, target_dual, &raw), fixed, "{c} u={u}");
                    assert_eq!(c.build_const(t, u).is_ok(), fixed);
                }
            }
            assert_eq!(c.name().parse::<Construction>().unwrap(), c);
        }
    }
}
