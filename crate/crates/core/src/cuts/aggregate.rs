use num_traits::{Signed, Zero};

use super::cut::{Cut, Provenance};
use crate::error::{Error, Result};
use crate::geometry::polytope::Sense;
use crate::instance::MilpInstance;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AggregateOptions {
    /// Common sense to orient rows into; rows of the opposite sense are
    /// negated. `None` requires all inequality rows to share one sense.
    pub orientation: Option<Sense>,
    /// Allow negative multipliers on equality rows.
    pub free_equalities: bool,
}

impl AggregateOptions {
    pub fn le() -> Self {
        AggregateOptions {
            orientation: Some(Sense::Le),
            free_equalities: false,
        }
    }

    pub fn ge() -> Self {
        AggregateOptions {
            orientation: Some(Sense::Ge),
            free_equalities: false,
        }
    }
}

/// The single row `(lambda^T A) x  sense  lambda^T b` after orienting rows.
pub fn aggregate(inst: &MilpInstance, lambda: &[Rational], opts: AggregateOptions) -> Result<Cut> {
    if lambda.len() != inst.m() {
        return Err(Error::DimensionMismatch {
            expected: inst.m(),
            got: lambda.len(),
        });
    }
    let target = match opts.orientation {
        Some(Sense::Eq) => return Err(Error::Invalid("orientation must be <= or >=".into())),
        Some(s) => s,
        None => {
            let senses: std::collections::BTreeSet<Sense> = inst
                .rows
                .iter()
                .map(|r| r.sense)
                .filter(|&s| s != Sense::Eq)
                .collect();
            match senses.len() {
                0 => Sense::Le,
                1 => *senses.iter().next().expect("one sense"),
                _ => {
                    return Err(Error::Invalid(
                        "rows have mixed senses; choose an orientation".into(),
                    ))
                }
            }
        }
    };
    let mut coeffs = rational::zeros(inst.n);
    let mut rhs = Rational::zero();
    for (i, (row, l)) in inst.rows.iter().zip(lambda).enumerate() {
        if l.is_negative() && !(opts.free_equalities && row.sense == Sense::Eq) {
            return Err(Error::Invalid(format!("multiplier {i} is negative")));
        }
        if l.is_zero() {
            continue;
        }
        let flip = row.sense != Sense::Eq && row.sense != target;
        let f = if flip { -l.clone() } else { l.clone() };
        for (c, a) in coeffs.iter_mut().zip(&row.coeffs) {
            if !a.is_zero() {
                *c += &f * a;
            }
        }
        rhs += &f * &row.rhs;
    }
    let rows = (0..inst.m()).filter(|&i| !lambda[i].is_zero()).collect();
    Cut::new(
        coeffs,
        target,
        rhs,
        Provenance::new("aggregation")
            .with_rows(rows)
            .with_multipliers(lambda.to_vec()),
    )
}

/// Row `i` of the instance as a cut-shaped single row (inequality rows only).
pub fn row_as_cut(inst: &MilpInstance, i: usize) -> Result<Cut> {
    let r = &inst.rows[i];
    Cut::new(
        r.coeffs.clone(),
        r.sense,
        r.rhs.clone(),
        Provenance::new("row").with_rows(vec![i]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::polytope::Constraint;
    use crate::rational::int;

    fn two_row() -> MilpInstance {
        MilpInstance::pure_integer(
            "two-row",
            vec![
                Constraint::le(vec![int(1), int(2)], int(2)),
                Constraint::le(vec![int(2), int(1)], int(2)),
            ],
            vec![int(1), int(1)],
            int(2),
        )
        .unwrap()
    }

    #[test]
    fn sum_of_rows() {
        let c = aggregate(&two_row(), &[int(1), int(1)], AggregateOptions::default()).unwrap();
        assert_eq!(c.coeffs, vec![int(3), int(3)]);
        assert_eq!(c.rhs, int(4));
        assert_eq!(c.sense, Sense::Le);
        assert_eq!(c.provenance.multipliers, Some(vec![int(1), int(1)]));
    }

    #[test]
    fn unit_and_zero() {
        let inst = two_row();
        let c = aggregate(&inst, &[int(0), int(1)], AggregateOptions::default()).unwrap();
        assert_eq!(c.coeffs, inst.rows[1].coeffs);
        let z = aggregate(&inst, &[int(0), int(0)], AggregateOptions::default()).unwrap();
        assert!(z.coeffs.iter().all(Zero::is_zero) && z.rhs.is_zero());
    }

    #[test]
    fn negative_multiplier_rejected() {
        assert!(aggregate(&two_row(), &[int(-1), int(1)], AggregateOptions::default()).is_err());
    }

    #[test]
    fn mixed_senses_need_orientation() {
        let inst = MilpInstance::pure_integer(
            "mixed",
            vec![
                Constraint::le(vec![int(1), int(1)], int(2)),
                Constraint::ge(vec![int(1), int(0)], int(1)),
            ],
            vec![int(1), int(1)],
            int(2),
        )
        .unwrap();
        assert!(aggregate(&inst, &[int(1), int(1)], AggregateOptions::default()).is_err());
        let c = aggregate(&inst, &[int(1), int(1)], AggregateOptions::le()).unwrap();
        assert_eq!(c.coeffs, vec![int(0), int(1)]);
        assert_eq!(c.rhs, int(1));
    }
}
