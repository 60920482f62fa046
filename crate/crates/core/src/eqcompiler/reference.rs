//! Hand-written single-map pipelines for 4 <= N <= 8, kept as an
//! independent cross-check of the compiler. Each string lists the steps in
//! composition order (rightmost acts first): `T<i>` applies the map at slot
//! `i`, `P<i>` exchanges slots `i` and `i + 1`. The left side is always the
//! one built from the odd half-packet of `[N]`.

use super::{Program, Side, Step};
use crate::combinat::{blue_alpha, blue_omega, red_alpha, red_omega};
use crate::error::{Error, Result};

const GON: [(&str, &str); 5] = [
    ("T1 T1", "T1 T2"),
    ("T1 T2 T1", "T2 P1 T2"),
    ("T1 P3 T2 T1 P3", "T2 P1 T2 T4"),
    ("T1 T3 P5 P2 T3 T1 P3", "P3 T4 P3 P2 P1 T3 P2 P3 T4"),
    (
        "T1 P4 P5 P6 T3 P6 P5 P2 T3 P6 T1 P4 P5 P6 P3",
        "P3 T4 P3 P2 P1 T3 P6 P2 P3 T4 T7",
    ),
];

const DUAL_GON: [(&str, &str); 5] = [
    ("T2 T1", "T1 T1"),
    ("T2 T1 T2", "T1 P2 T1"),
    // Displayed with the sides the other way round; stored here by half-packet.
    ("P3 T4 T2 P1 T2", "T1 T2 P3 T1"),
    ("P3 T4 T2 P4 P1 T2 T4", "T1 P3 P4 T2 P5 P4 P3 T1 P3"),
    (
        "P4 P7 P5 P6 T7 P3 T4 P6 P3 P2 T3 P1 P2 P3 T4",
        "T1 T3 P5 P6 P2 T3 P6 P5 P4 T1 P3",
    ),
];

fn parse(text: &str) -> Result<Vec<Step>> {
    let mut steps = text
        .split_whitespace()
        .map(|tok| {
            let (head, num) = tok.split_at(1);
            let pos: usize = num.parse().map_err(|_| Error::Parse(tok.to_string()))?;
            match head {
                "T" => Ok(Step::Apply { k: None, pos }),
                "P" => Ok(Step::Swap(pos)),
                _ => Err(Error::Parse(tok.to_string())),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    steps.reverse();
    Ok(steps)
}

/// The transcribed single-map pipeline for one side of the (dual) N-gon
/// equation, in execution order.
pub fn reference_program(n: usize, dual: bool, side: Side) -> Result<Program> {
    if !(4..=8).contains(&n) {
        return Err(Error::NoReference(n));
    }
    let (lhs, rhs) = if dual { DUAL_GON[n - 4] } else { GON[n - 4] };
    let text = match side {
        Side::Lhs => lhs,
        Side::Rhs => rhs,
    };
    let (inputs, outputs) =
        if dual { (red_alpha(n)?, red_omega(n)?) } else { (blue_alpha(n)?, blue_omega(n)?) };
    Ok(Program { n, dual, side, steps: parse(text)?, inputs, outputs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_in_execution_order() {
        let p = reference_program(5, false, Side::Rhs).unwrap();
        assert_eq!(
            p.steps,
            vec![Step::Apply { k: None, pos: 2 }, Step::Swap(1), Step::Apply { k: None, pos: 2 }]
        );
        assert!(matches!(reference_program(9, false, Side::Lhs), Err(Error::NoReference(9))));
        assert!(matches!(reference_program(3, true, Side::Lhs), Err(Error::NoReference(3))));
    }
}
