use num_traits::Signed;

use super::model::{MilpInstance, Tag};
use crate::error::{Error, Result};
use crate::geometry::polytope::Constraint;

/// `0 <= A_ij <= b_i` for every row and integer column.
pub fn is_preprocessed(inst: &MilpInstance) -> bool {
    inst.has_tag(Tag::Packing)
        && inst.rows.iter().all(|r| {
            r.coeffs
                .iter()
                .zip(&inst.vars)
                .all(|(a, v)| !a.is_negative() && (!v.is_integer() || *a <= r.rhs))
        })
}

/// Fix to zero and drop every integer variable with `A_ij > b_i` in some
/// row. Returns the reduced instance and, for each old index, its new index.
pub fn preprocess_packing(inst: &MilpInstance) -> Result<(MilpInstance, Vec<Option<usize>>)> {
    if !inst.has_tag(Tag::Packing) {
        return Err(Error::WrongClass("packing"));
    }
    let keep: Vec<bool> = (0..inst.n)
        .map(|j| !inst.vars[j].is_integer() || inst.rows.iter().all(|r| r.coeffs[j] <= r.rhs))
        .collect();
    let mut map = Vec::with_capacity(inst.n);
    let mut next = 0;
    for &k in &keep {
        map.push(if k {
            next += 1;
            Some(next - 1)
        } else {
            None
        });
    }
    let pick = |v: &[crate::rational::Rational]| -> Vec<_> {
        v.iter()
            .zip(&keep)
            .filter(|(_, k)| **k)
            .map(|(a, _)| a.clone())
            .collect()
    };
    let rows = inst
        .rows
        .iter()
        .map(|r| Constraint::new(pick(&r.coeffs), r.sense, r.rhs.clone()))
        .collect();
    let vars = inst
        .vars
        .iter()
        .zip(&keep)
        .filter(|(_, k)| **k)
        .map(|(v, _)| v.clone())
        .collect();
    let out = MilpInstance::new(inst.name.clone(), vars, rows, pick(&inst.objective))?;
    Ok((out, map))
}

/// Embed a point of the reduced instance back into the original space.
pub fn expand_point(
    x: &[crate::rational::Rational],
    map: &[Option<usize>],
) -> Vec<crate::rational::Rational> {
    map.iter()
        .map(|m| m.map_or_else(num_traits::Zero::zero, |k| x[k].clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn oversized_coefficient_removed() {
        let inst = MilpInstance::pure_integer(
            "p",
            vec![Constraint::le(vec![int(3), int(1)], int(2))],
            vec![int(1), int(1)],
            int(2),
        )
        .unwrap();
        let (out, map) = preprocess_packing(&inst).unwrap();
        assert_eq!(out.n, 1);
        assert_eq!(out.rows[0].coeffs, vec![int(1)]);
        assert_eq!(map, vec![None, Some(0)]);
        assert!(is_preprocessed(&out));
    }

    #[test]
    fn idempotent() {
        let inst = MilpInstance::pure_integer(
            "p",
            vec![Constraint::le(vec![int(1), int(2)], int(2))],
            vec![int(1), int(1)],
            int(2),
        )
        .unwrap();
        let (out, _) = preprocess_packing(&inst).unwrap();
        assert_eq!(out, inst);
    }

    #[test]
    fn zero_rhs_clears_support() {
        let inst = MilpInstance::pure_integer(
            "p",
            vec![Constraint::le(vec![int(1), int(0), int(2)], int(0))],
            vec![int(1), int(1), int(1)],
            int(2),
        )
        .unwrap();
        let (out, map) = preprocess_packing(&inst).unwrap();
        assert_eq!(map, vec![None, Some(0), None]);
        assert_eq!(out.n, 1);
    }

    #[test]
    fn rejects_non_packing() {
        let inst = MilpInstance::pure_integer(
            "c",
            vec![Constraint::ge(vec![int(1)], int(1))],
            vec![int(1)],
            int(2),
        )
        .unwrap();
        assert_eq!(preprocess_packing(&inst).unwrap_err(), Error::WrongClass("packing"));
    }
}
