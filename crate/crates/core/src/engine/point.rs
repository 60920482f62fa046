use std::fmt;
use std::sync::Arc;

use num::{BigInt, BigRational, One, ToPrimitive, Zero};

use super::{FiniteMap, MapFamily};
use crate::combinat::Label;
use crate::error::{Error, Result};

pub type Rational = BigRational;

type Rule = dyn Fn(&[Rational]) -> Vec<Rational> + Send + Sync;
type Domain = dyn Fn(&Rational) -> bool + Send + Sync;

/// A map on tuples of exact rationals restricted to a coordinate-wise domain.
#[derive(Clone)]
pub struct PointMap {
    name: String,
    k_in: usize,
    k_out: usize,
    rule: Arc<Rule>,
    domain: Arc<Domain>,
}

impl fmt::Debug for PointMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PointMap({}: {} -> {})", self.name, self.k_in, self.k_out)
    }
}

fn show(t: &[Rational]) -> String {
    let parts: Vec<String> = t.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

impl PointMap {
    pub fn new(
        name: impl Into<String>,
        k_in: usize,
        k_out: usize,
        rule: impl Fn(&[Rational]) -> Vec<Rational> + Send + Sync + 'static,
        domain: impl Fn(&Rational) -> bool + Send + Sync + 'static,
    ) -> Self {
        PointMap { name: name.into(), k_in, k_out, rule: Arc::new(rule), domain: Arc::new(domain) }
    }

    /// Domain `(0, 1)` in every coordinate.
    pub fn on_unit_interval(
        name: impl Into<String>,
        k_in: usize,
        k_out: usize,
        rule: impl Fn(&[Rational]) -> Vec<Rational> + Send + Sync + 'static,
    ) -> Self {
        Self::new(name, k_in, k_out, rule, |x: &Rational| x > &Rational::zero() && x < &Rational::one())
    }

    /// The finite map read on the integers `0..q` embedded in the rationals.
    pub fn from_finite(t: &FiniteMap) -> Self {
        let t = t.clone();
        let q = t.q();
        let (k_in, k_out) = t.arity();
        Self::new(
            "finite",
            k_in,
            k_out,
            move |x: &[Rational]| {
                let idx: Vec<u32> = x.iter().map(|v| v.to_integer().to_u32().expect("in domain")).collect();
                t.image(&idx).iter().map(|&v| Rational::from_integer(BigInt::from(v))).collect()
            },
            move |x: &Rational| x.is_integer() && x >= &Rational::zero() && x < &Rational::from_integer(q.into()),
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn k_in(&self) -> usize {
        self.k_in
    }

    pub fn k_out(&self) -> usize {
        self.k_out
    }

    pub fn in_domain(&self, x: &Rational) -> bool {
        (self.domain)(x)
    }

    pub fn check_domain(&self, t: &[Rational]) -> Result<()> {
        if t.iter().all(|x| self.in_domain(x)) {
            Ok(())
        } else {
            Err(Error::Domain(show(t)))
        }
    }

    /// Applies the rule, checking the domain on both sides.
    pub fn eval(&self, input: &[Rational]) -> Result<Vec<Rational>> {
        if input.len() != self.k_in {
            return Err(Error::Arity { expected: self.k_in.to_string(), got: input.len().to_string() });
        }
        self.check_domain(input)?;
        let out = (self.rule)(input);
        if out.len() != self.k_out {
            return Err(Error::Arity { expected: self.k_out.to_string(), got: out.len().to_string() });
        }
        self.check_domain(&out).map_err(|_| Error::Domain(format!("{} -> {}", show(input), show(&out))))?;
        Ok(out)
    }
}

impl MapFamily for PointMap {
    type Value = Rational;

    fn apply(&self, _k: Option<&Label>, args: &[Rational]) -> Result<Vec<Rational>> {
        self.eval(args)
    }
}
