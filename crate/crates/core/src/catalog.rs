//! Concrete solutions: finite tables and exact rational maps.

use num::{BigInt, One};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::{all_maps, FiniteMap, PointMap, Rational};
use crate::error::{Error, Result};

/// Names accepted by [`emit`], in listing order.
pub const FINITE_NAMES: [&str; 5] =
    ["transposition", "total-inversion", "cyclic-group-right", "cyclic-group-inverse", "idempotent-trigon"];

/// Built-in rational maps (not serializable as tables).
pub const RATIONAL_NAMES: [&str; 2] = ["projective-pentagon", "dilog-dual-hexagon"];

/// `P(a, b) = (b, a)`: solves the pentagon and dual pentagon equations.
pub fn transposition(q: u32) -> Result<FiniteMap> {
    FiniteMap::from_fn(q, 2, 2, |t| vec![t[1], t[0]])
}

/// `(a, b, c) ↦ (c, b, a)`: solves the heptagon and dual heptagon equations.
pub fn total_inversion(q: u32) -> Result<FiniteMap> {
    FiniteMap::from_fn(q, 3, 3, |t| vec![t[2], t[1], t[0]])
}

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    order: u32,
    mul: Vec<u32>,
    identity: u32,
    inverse: Vec<u32>,
}

impl GroupTable {
    /// Validates associativity, a two-sided identity and inverses.
    pub fn new(order: u32, mul: Vec<u32>) -> Result<Self> {
        let n = order as usize;
        if order == 0 || mul.len() != n * n || mul.iter().any(|&x| x >= order) {
            return Err(Error::NotAGroup(format!("not a {order}x{order} table over 0..{order}")));
        }
        let m = |a: u32, b: u32| mul[a as usize * n + b as usize];
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if m(m(a, b), c) != m(a, m(b, c)) {
                        return Err(Error::NotAGroup(format!("({a}{b}){c} != {a}({b}{c})")));
                    }
                }
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|a| m(e, a) == a && m(a, e) == a))
            .ok_or_else(|| Error::NotAGroup("no identity".into()))?;
        let inverse = (0..order)
            .map(|a| {
                (0..order)
                    .find(|&b| m(a, b) == identity && m(b, a) == identity)
                    .ok_or_else(|| Error::NotAGroup(format!("{a} has no inverse")))
            })
            .collect::<Result<_>>()?;
        Ok(GroupTable { order, mul, identity, inverse })
    }

    /// The integers modulo `n` under addition.
    pub fn cyclic(n: u32) -> Result<Self> {
        let mul = (0..n).flat_map(|a| (0..n).map(move |b| (a + b) % n)).collect();
        Self::new(n, mul)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.order + b) as usize]
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn inverse(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }
}

/// `T(a, b) = (b, a·b)`.
pub fn group_pentagon_right(g: &GroupTable) -> Result<FiniteMap> {
    FiniteMap::from_fn(g.order(), 2, 2, |t| vec![t[1], g.mul(t[0], t[1])])
}

/// `T(a, b) = (a⁻¹·b, a)`.
pub fn group_pentagon_inverse(g: &GroupTable) -> Result<FiniteMap> {
    FiniteMap::from_fn(g.order(), 2, 2, |t| vec![g.mul(g.inverse(t[0]), t[1]), t[0]])
}

fn one() -> Rational {
    Rational::one()
}

/// `T(a, b) = ((1-a)b / (1-ab), ab)` on `(0, 1)²`.
pub fn projective_pentagon() -> PointMap {
    PointMap::on_unit_interval("projective-pentagon", 2, 2, |x| {
        let (a, b) = (&x[0], &x[1]);
        let ab = a * b;
        vec![(one() - a) * b / (one() - &ab), ab]
    })
}

/// `(a, b) ↦ ((1-a)b / (1-ab), ab, a(1-b) / (1-ab))` on `(0, 1)²`.
pub fn dilog_dual_hexagon() -> PointMap {
    PointMap::on_unit_interval("dilog-dual-hexagon", 2, 3, |x| {
        let (a, b) = (&x[0], &x[1]);
        let ab = a * b;
        let d = one() - &ab;
        vec![(one() - a) * b / &d, ab, a * (one() - b) / &d]
    })
}

/// All idempotent self-maps of `{0, …, q-1}`, in table order.
pub fn idempotent_trigons(q: u32) -> Vec<FiniteMap> {
    all_maps(q, 1, 1).filter(|t| (0..q).all(|u| t.image(t.image(&[u])) == t.image(&[u]))).collect()
}

/// Seeded points of `(0, 1)^k` with denominators up to `max_den`.
pub fn unit_samples(count: usize, k: usize, max_den: u32, seed: u64) -> Vec<Vec<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..k)
                .map(|_| {
                    let d = rng.gen_range(2..=max_den.max(2));
                    let n = rng.gen_range(1..d);
                    Rational::new(BigInt::from(n), BigInt::from(d))
                })
                .collect()
        })
        .collect()
}

/// A named finite catalog entry at carrier size `q`. `index` selects among
/// the idempotent trigon maps.
pub fn emit(name: &str, q: u32, index: usize) -> Result<FiniteMap> {
    match name {
        "transposition" => transposition(q),
        "total-inversion" => total_inversion(q),
        "cyclic-group-right" => group_pentagon_right(&GroupTable::cyclic(q)?),
        "cyclic-group-inverse" => group_pentagon_inverse(&GroupTable::cyclic(q)?),
        "idempotent-trigon" => {
            let all = idempotent_trigons(q);
            let n = all.len();
            all.into_iter().nth(index).ok_or_else(|| Error::Parse(format!("index {index} out of {n} idempotent maps")))
        }
        other => Err(Error::Parse(format!("unknown catalog entry `{other}`"))),
    }
}

/// The equations a finite catalog entry solves, as `(N, dual)`.
pub fn declared_equations(name: &str) -> &'static [(usize, bool)] {
    match name {
        "transposition" => &[(5, false), (5, true)],
        "total-inversion" => &[(7, false), (7, true)],
        "cyclic-group-right" | "cyclic-group-inverse" => &[(5, false)],
        "idempotent-trigon" => &[(3, false)],
        _ => &[],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn group_examples() {
        let z3 = GroupTable::cyclic(3).unwrap();
        assert_eq!(group_pentagon_right(&z3).unwrap().image(&[1, 2]), &[2, 0]);
        let z2 = GroupTable::cyclic(2).unwrap();
        assert_eq!(group_pentagon_inverse(&z2).unwrap().image(&[1, 1]), &[0, 1]);
        assert_eq!(group_pentagon_right(&GroupTable::cyclic(1).unwrap()).unwrap().flat(), &[0, 0]);
        assert!(matches!(GroupTable::new(2, vec![0, 0, 0, 0]), Err(Error::NotAGroup(_))));
        assert!(matches!(GroupTable::new(2, vec![0, 1, 1, 1]), Err(Error::NotAGroup(_))));
        // Left projection is associative but has no identity.
        assert!(matches!(GroupTable::new(2, vec![0, 0, 1, 1]), Err(Error::NotAGroup(_))));
    }

    #[test]
    fn rational_examples() {
        assert_eq!(projective_pentagon().eval(&[r(1, 2), r(1, 3)]).unwrap(), vec![r(1, 5), r(1, 6)]);
        assert_eq!(projective_pentagon().eval(&[r(1, 2), r(1, 2)]).unwrap(), vec![r(1, 3), r(1, 4)]);
        assert_eq!(dilog_dual_hexagon().eval(&[r(1, 2), r(1, 3)]).unwrap(), vec![r(1, 5), r(1, 6), r(2, 5)]);
        assert!(projective_pentagon().eval(&[r(1, 1), r(1, 2)]).is_err());
        for x in unit_samples(100, 2, 1000, 9) {
            let p = projective_pentagon().eval(&x).unwrap();
            let d = dilog_dual_hexagon().eval(&x).unwrap();
            assert_eq!(p[..], d[..2]);
            // a ⋄ b = b ∗ a
            let swapped = projective_pentagon().eval(&[x[1].clone(), x[0].clone()]).unwrap();
            assert_eq!(d[2], swapped[0]);
        }
    }

    #[test]
    fn idempotent_counts() {
        assert_eq!(idempotent_trigons(1).len(), 1);
        assert_eq!(idempotent_trigons(2).len(), 3);
        assert_eq!(idempotent_trigons(3).len(), 10);
    }

    #[test]
    fn emit_by_name() {
        assert_eq!(emit("total-inversion", 3, 0).unwrap().image(&[0, 1, 2]), &[2, 1, 0]);
        assert_eq!(emit("transposition", 1, 0).unwrap().flat(), &[0, 0]);
        assert!(emit("idempotent-trigon", 2, 3).is_err());
        assert!(emit("nothing", 2, 0).is_err());
    }
}
