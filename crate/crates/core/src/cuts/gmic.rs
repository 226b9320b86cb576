use num_traits::{One, Zero};

use super::cut::{Cut, Provenance};
use crate::error::{Error, Result};
use crate::geometry::lp::{ColumnRole, Tableau};
use crate::geometry::polytope::HPolytope;
use crate::instance::Variable;
use crate::rational::{self, Rational};

/// One tableau row `sum_c coeffs[c] * col_c = rhs` over nonnegative columns,
/// with `basic` the basic column and `integer[c]` marking integer columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableauRow {
    pub coeffs: Vec<Rational>,
    pub integer: Vec<bool>,
    pub rhs: Rational,
    pub basic: usize,
}

/// Gomory mixed-integer cut in the row's column space:
/// `sum_int min{f_j/f_0, (1-f_j)/(1-f_0)} col_j
///   + sum_cont max{g_j/f_0, -g_j/(1-f_0)} col_j >= 1`.
pub fn gmic(row: &TableauRow) -> Result<Cut> {
    if !row.integer.get(row.basic).copied().unwrap_or(false) {
        return Err(Error::Gmic("basic variable is not integer".into()));
    }
    let f0 = rational::frac(&row.rhs);
    if f0.is_zero() {
        return Err(Error::Gmic("right-hand side is integral".into()));
    }
    let one_minus = Rational::one() - &f0;
    let coeffs = row
        .coeffs
        .iter()
        .zip(&row.integer)
        .map(|(a, &is_int)| {
            if is_int {
                let fj = rational::frac(a);
                let up = &fj / &f0;
                let down = (Rational::one() - &fj) / &one_minus;
                up.min(down)
            } else {
                let up = a / &f0;
                let down = -a / &one_minus;
                up.max(down)
            }
        })
        .collect();
    let mut prov = Provenance::new("gmic");
    prov.basic_var = Some(row.basic);
    Ok(Cut::ge(coeffs, Rational::one(), prov))
}

/// Which tableau columns are integer-valued on integer points: integer
/// structural columns, and slacks of rows with integral data over integer
/// variables only.
pub fn column_integrality(poly: &HPolytope, vars: &[Variable], tableau: &Tableau) -> Vec<bool> {
    tableau
        .columns
        .iter()
        .map(|role| match *role {
            ColumnRole::Structural(j) => vars[j].is_integer(),
            ColumnRole::NegativePart(_) => false,
            ColumnRole::Slack(i) => {
                let r = &poly.rows[i];
                r.rhs.is_integer()
                    && r.coeffs
                        .iter()
                        .zip(vars)
                        .all(|(a, v)| a.is_zero() || (a.is_integer() && v.is_integer()))
            }
        })
        .collect()
}

/// GMIC from tableau row `r`, mapped back to the structural variables.
pub fn gmic_from_tableau(
    poly: &HPolytope,
    vars: &[Variable],
    tableau: &Tableau,
    r: usize,
) -> Result<Cut> {
    let row = TableauRow {
        coeffs: tableau.rows[r].clone(),
        integer: column_integrality(poly, vars, tableau),
        rhs: tableau.rhs[r].clone(),
        basic: tableau.basis[r],
    };
    let c = gmic(&row)?;
    let (a, b) = tableau.to_structural(poly, &c.coeffs, &c.rhs);
    Ok(Cut::ge(a, b, c.provenance.with_rows(vec![r])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn mixed_row_example() {
        // x1 + x2/2 + 3y1/10 - y2/5 = 13/5, x1 basic.
        let row = TableauRow {
            coeffs: vec![int(1), rat(1, 2), rat(3, 10), rat(-1, 5)],
            integer: vec![true, true, false, false],
            rhs: rat(13, 5),
            basic: 0,
        };
        let c = gmic(&row).unwrap();
        assert_eq!(c.coeffs, vec![int(0), rat(5, 6), rat(1, 2), rat(1, 2)]);
        assert_eq!(c.rhs, int(1));
    }

    #[test]
    fn integral_coefficient_gives_zero() {
        let row = TableauRow {
            coeffs: vec![int(1), int(2)],
            integer: vec![true, true],
            rhs: rat(1, 2),
            basic: 0,
        };
        assert_eq!(gmic(&row).unwrap().coeffs, vec![int(0), int(0)]);
    }

    #[test]
    fn equal_fractions_give_ones() {
        let row = TableauRow {
            coeffs: vec![int(1), rat(1, 3), rat(4, 3)],
            integer: vec![true, true, true],
            rhs: rat(7, 3),
            basic: 0,
        };
        assert_eq!(gmic(&row).unwrap().coeffs, vec![int(0), int(1), int(1)]);
    }

    #[test]
    fn errors() {
        let mut row = TableauRow {
            coeffs: vec![int(1)],
            integer: vec![true],
            rhs: int(2),
            basic: 0,
        };
        assert!(matches!(gmic(&row), Err(Error::Gmic(_))));
        row.rhs = rat(1, 2);
        row.integer = vec![false];
        assert!(matches!(gmic(&row), Err(Error::Gmic(_))));
    }
}
