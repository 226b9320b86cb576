use num_traits::{One, Signed, Zero};

use super::cut::{Cut, Provenance};
use crate::error::{Error, Result};
use crate::geometry::polytope::Sense;
use crate::instance::Variable;
use crate::rational::{self, Rational};

/// `x + y >= rhs` where `x = x_coeffs · v` is integer-valued and
/// `y = y_coeffs · v` is nonnegative on the feasible set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MirForm {
    pub x_coeffs: Vec<Rational>,
    pub y_coeffs: Vec<Rational>,
    pub rhs: Rational,
    pub embedding: String,
}

/// How a `>=` row `a · v >= b` is split into the MIR form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Embedding {
    /// Integer columns rounded up into `x`; positive continuous terms in `y`;
    /// negative continuous terms dropped.
    Direct,
    /// Integer columns with `frac(a_j) <= frac(b)` contribute `floor(a_j)` to
    /// `x` and their fractional part `frac(a_j) v_j` to `y`; the others are
    /// rounded up into `x`. Continuous terms as in `Direct`.
    SlackComplement,
}

impl Embedding {
    pub fn name(self) -> &'static str {
        match self {
            Embedding::Direct => "direct",
            Embedding::SlackComplement => "slack-complement",
        }
    }
}

/// Split a valid `>=` row over nonnegative variables into MIR form.
pub fn embed(row: &Cut, vars: &[Variable], embedding: Embedding) -> Result<MirForm> {
    if row.sense != Sense::Ge {
        return Err(Error::Invalid("MIR embeddings start from a >= row".into()));
    }
    if let Some(j) = row.support().into_iter().find(|&j| vars[j].lb.is_negative()) {
        return Err(Error::Invalid(format!("variable {j} may be negative")));
    }
    let n = vars.len();
    let f = rational::frac(&row.rhs);
    let mut x = rational::zeros(n);
    let mut y = rational::zeros(n);
    for (j, a) in row.coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        if vars[j].is_integer() {
            let fj = rational::frac(a);
            match embedding {
                Embedding::SlackComplement if fj <= f => {
                    x[j] = a.floor();
                    y[j] = fj;
                }
                _ => x[j] = a.ceil(),
            }
        } else if a.is_positive() {
            y[j] = a.clone();
        }
    }
    Ok(MirForm {
        x_coeffs: x,
        y_coeffs: y,
        rhs: row.rhs.clone(),
        embedding: embedding.name().to_string(),
    })
}

/// `x + (1/f) y >= ceil(rhs)` with `f = frac(rhs) > 0`.
pub fn mir_cut(form: &MirForm, vars: &[Variable], provenance: Provenance) -> Result<Cut> {
    let n = vars.len();
    if form.x_coeffs.len() != n || form.y_coeffs.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: form.x_coeffs.len().max(form.y_coeffs.len()),
        });
    }
    for j in 0..n {
        let xj = &form.x_coeffs[j];
        if !xj.is_zero() && (!vars[j].is_integer() || !xj.is_integer()) {
            return Err(Error::Invalid(format!(
                "x part must use integer variables with integral coefficients (column {j})"
            )));
        }
        let yj = &form.y_coeffs[j];
        if !yj.is_zero() && (yj.is_negative() || vars[j].lb.is_negative()) {
            return Err(Error::Invalid(format!("y part is not provably nonnegative (column {j})")));
        }
    }
    let f = rational::frac(&form.rhs);
    if f.is_zero() {
        return Err(Error::MirIntegralRhs);
    }
    let inv = Rational::one() / f;
    let coeffs = form
        .x_coeffs
        .iter()
        .zip(&form.y_coeffs)
        .map(|(x, y)| x + y * &inv)
        .collect();
    let prov = Provenance {
        generator: "mir".into(),
        note: Some(format!("embedding={}", form.embedding)),
        ..provenance
    };
    Ok(Cut::ge(coeffs, form.rhs.ceil(), prov))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn xy() -> Vec<Variable> {
        vec![Variable::int(int(0), int(3)), Variable::cont(int(0), int(3))]
    }

    fn basic(rhs: Rational) -> MirForm {
        MirForm {
            x_coeffs: vec![int(1), int(0)],
            y_coeffs: vec![int(0), int(1)],
            rhs,
            embedding: "direct".into(),
        }
    }

    #[test]
    fn half() {
        let c = mir_cut(&basic(rat(5, 2)), &xy(), Provenance::default()).unwrap();
        assert_eq!(c.coeffs, vec![int(1), int(2)]);
        assert_eq!(c.rhs, int(3));
        assert_eq!(c.sense, Sense::Ge);
    }

    #[test]
    fn third() {
        let c = mir_cut(&basic(rat(7, 3)), &xy(), Provenance::default()).unwrap();
        assert_eq!(c.coeffs, vec![int(1), int(3)]);
        assert_eq!(c.rhs, int(3));
    }

    #[test]
    fn integral_rhs_rejected() {
        assert_eq!(
            mir_cut(&basic(int(2)), &xy(), Provenance::default()),
            Err(Error::MirIntegralRhs)
        );
        assert_eq!(Error::MirIntegralRhs.to_string(), "MIR undefined for integral rhs");
    }

    #[test]
    fn pure_integer_direct_equals_ceiling_cg() {
        let vars = vec![Variable::int(int(0), int(3)); 2];
        let row = Cut::ge(vec![rat(1, 2), rat(3, 2)], rat(5, 4), Provenance::new("row"));
        let form = embed(&row, &vars, Embedding::Direct).unwrap();
        assert!(form.y_coeffs.iter().all(Zero::is_zero));
        let m = mir_cut(&form, &vars, Provenance::default()).unwrap();
        let cg = crate::cuts::cg_cut(&row, &vars).unwrap();
        assert_eq!((m.coeffs, m.rhs), (cg.coeffs, cg.rhs));
    }

    #[test]
    fn slack_complement_split() {
        let vars = vec![Variable::int(int(0), int(3)); 2];
        let row = Cut::ge(vec![rat(1, 4), rat(5, 4)], rat(1, 2), Provenance::new("row"));
        let form = embed(&row, &vars, Embedding::SlackComplement).unwrap();
        assert_eq!(form.x_coeffs, vec![int(0), int(1)]);
        assert_eq!(form.y_coeffs, vec![rat(1, 4), rat(1, 4)]);
        let c = mir_cut(&form, &vars, Provenance::default()).unwrap();
        assert_eq!(c.coeffs, vec![rat(1, 2), rat(3, 2)]);
        assert_eq!(c.rhs, int(1));
    }
}
