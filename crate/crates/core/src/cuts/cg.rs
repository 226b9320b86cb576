use num_traits::{Signed, Zero};

use super::cut::Cut;
use crate::error::{Error, Result};
use crate::geometry::polytope::Sense;
use crate::instance::Variable;

/// Chvátal-Gomory rounding of a single valid row: `floor` both sides of a
/// `<=` row, `ceil` both sides of a `>=` row. Every variable in the support
/// must be integer-kind with a nonnegative lower bound.
pub fn cg_cut(row: &Cut, vars: &[Variable]) -> Result<Cut> {
    if row.dim() != vars.len() {
        return Err(Error::DimensionMismatch {
            expected: vars.len(),
            got: row.dim(),
        });
    }
    for j in row.support() {
        if !vars[j].is_integer() {
            return Err(Error::ChvatalGomory(format!(
                "continuous variable {j} in the support"
            )));
        }
        if vars[j].lb.is_negative() {
            return Err(Error::ChvatalGomory(format!(
                "variable {j} may be negative"
            )));
        }
    }
    let prov = row.provenance.derived("cg");
    Ok(match row.sense {
        Sense::Le => Cut::le(
            row.coeffs.iter().map(|a| a.floor()).collect(),
            row.rhs.floor(),
            prov,
        ),
        Sense::Ge => Cut::ge(
            row.coeffs.iter().map(|a| a.ceil()).collect(),
            row.rhs.ceil(),
            prov,
        ),
        Sense::Eq => return Err(Error::ChvatalGomory("equality rows must be oriented first".into())),
    })
}

/// True when rounding changes nothing, i.e. the row is already integral.
pub fn is_integral_row(row: &Cut) -> bool {
    row.rhs.is_integer() && row.coeffs.iter().all(|a| a.is_integer() || a.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cuts::Provenance;
    use crate::rational::{int, rat};

    fn ints(n: usize) -> Vec<Variable> {
        vec![Variable::int(int(0), int(5)); n]
    }

    #[test]
    fn floor_form() {
        let row = Cut::le(vec![int(1), int(1)], rat(3, 2), Provenance::new("row"));
        let c = cg_cut(&row, &ints(2)).unwrap();
        assert_eq!((c.coeffs.clone(), c.rhs.clone()), (vec![int(1), int(1)], int(1)));
        assert_eq!(c.provenance.generator, "cg");
    }

    #[test]
    fn integral_row_unchanged() {
        let row = Cut::le(vec![int(2), int(3)], int(4), Provenance::new("row"));
        let c = cg_cut(&row, &ints(2)).unwrap();
        assert_eq!(c.coeffs, row.coeffs);
        assert_eq!(c.rhs, row.rhs);
        assert!(is_integral_row(&row));
    }

    #[test]
    fn ceil_form() {
        let row = Cut::ge(vec![rat(1, 2)], rat(1, 2), Provenance::new("row"));
        let c = cg_cut(&row, &ints(1)).unwrap();
        assert_eq!((c.coeffs.clone(), c.rhs.clone()), (vec![int(1)], int(1)));
    }

    #[test]
    fn continuous_rejected() {
        let vars = vec![Variable::int(int(0), int(3)), Variable::cont(int(0), int(3))];
        let row = Cut::le(vec![int(1), int(1)], rat(1, 2), Provenance::new("row"));
        assert!(matches!(cg_cut(&row, &vars), Err(Error::ChvatalGomory(_))));
    }
}
