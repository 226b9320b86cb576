use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use super::model::{MilpInstance, Tag};
use crate::geometry::polytope::Sense;

fn all_data_nonneg(inst: &MilpInstance) -> bool {
    inst.rows
        .iter()
        .all(|r| !r.rhs.is_negative() && r.coeffs.iter().all(|a| !a.is_negative()))
        && inst.objective.iter().all(|c| !c.is_negative())
}

/// Every column's nonzero coefficients share one sign once `>=` rows are
/// negated into `<=` form. A column touched by an equality row has both signs
/// in the oriented system and disqualifies the instance.
pub fn is_sign_pattern(inst: &MilpInstance) -> bool {
    if !inst.lower_bounds_nonneg() {
        return false;
    }
    let mut sign = vec![0i8; inst.n];
    for r in &inst.rows {
        for (j, a) in r.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if r.sense == Sense::Eq {
                return false;
            }
            let s = match (a.is_positive(), r.sense == Sense::Ge) {
                (true, false) | (false, true) => 1,
                _ => -1,
            };
            if sign[j] == 0 {
                sign[j] = s;
            } else if sign[j] != s {
                return false;
            }
        }
    }
    true
}

/// All structural labels that apply to `inst`.
pub fn classify(inst: &MilpInstance) -> BTreeSet<Tag> {
    let mut tags = BTreeSet::new();
    let nonneg = all_data_nonneg(inst);
    if nonneg
        && inst.rows.iter().all(|r| r.sense == Sense::Le)
        && inst.vars.iter().all(|v| v.lb.is_zero())
    {
        tags.insert(Tag::Packing);
    }
    if nonneg
        && inst.rows.iter().all(|r| r.sense == Sense::Ge)
        && inst.lower_bounds_nonneg()
    {
        tags.insert(Tag::Covering);
    }
    if is_sign_pattern(inst) {
        tags.insert(Tag::SignPattern);
    } else {
        tags.insert(Tag::General);
    }
    if inst.is_pure_integer() {
        tags.insert(Tag::PureInteger);
    }
    tags
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::polytope::Constraint;
    use crate::rational::int;

    fn inst(rows: Vec<Constraint>, c: Vec<i64>) -> MilpInstance {
        MilpInstance::pure_integer("t", rows, c.into_iter().map(int).collect(), int(3)).unwrap()
    }

    #[test]
    fn packing_nests() {
        let i = inst(vec![Constraint::le(vec![int(1), int(2)], int(3))], vec![1, 1]);
        assert_eq!(
            i.tags,
            [Tag::Packing, Tag::SignPattern, Tag::PureInteger].into_iter().collect()
        );
    }

    #[test]
    fn mixed_column_signs_are_general() {
        let i = inst(
            vec![
                Constraint::le(vec![int(2), int(0)], int(3)),
                Constraint::le(vec![int(-1), int(1)], int(3)),
            ],
            vec![1, 1],
        );
        assert!(i.has_tag(Tag::General));
        assert!(!i.has_tag(Tag::SignPattern));
    }

    #[test]
    fn per_column_signs() {
        let i = inst(
            vec![
                Constraint::le(vec![int(2), int(-3)], int(1)),
                Constraint::le(vec![int(1), int(-1)], int(1)),
            ],
            vec![1, 0],
        );
        assert!(i.has_tag(Tag::SignPattern));
        assert!(!i.has_tag(Tag::Packing));
    }

    #[test]
    fn covering_is_sign_pattern() {
        let i = inst(vec![Constraint::ge(vec![int(2), int(3)], int(4))], vec![1, 1]);
        assert!(i.has_tag(Tag::Covering));
        assert!(i.has_tag(Tag::SignPattern));
    }
}
