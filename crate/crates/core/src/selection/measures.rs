use num_traits::{Signed, Zero};

use crate::cuts::Cut;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

fn nonzero(coeffs: &[Rational]) -> Result<Rational> {
    let n = rational::sq_norm(coeffs);
    if n.is_zero() {
        return Err(Error::Invalid("cut has a zero coefficient vector".into()));
    }
    Ok(n)
}

/// Squared Euclidean depth `(alpha·x - beta)^2 / ‖alpha‖^2` of a separating
/// cut; zero when `x` satisfies the cut.
pub fn sq_depth(cut: &Cut, x: &[Rational]) -> Result<Rational> {
    let (a, b) = cut.as_le();
    let norm = nonzero(&a)?;
    let v = rational::dot(&a, x) - b;
    if v.is_positive() {
        Ok(&v * &v / norm)
    } else {
        Ok(Rational::zero())
    }
}

/// Squared cosine between two coefficient vectors, in `[0, 1]`.
pub fn sq_parallelism(c1: &Cut, c2: &Cut) -> Result<Rational> {
    sq_cosine(&c1.coeffs, &c2.coeffs)
}

pub fn sq_cosine(a: &[Rational], b: &[Rational]) -> Result<Rational> {
    let na = nonzero(a)?;
    let nb = nonzero(b)?;
    let d = rational::dot(a, b);
    Ok(&d * &d / (na * nb))
}

/// Largest over smallest absolute nonzero coefficient.
pub fn dynamism(cut: &Cut) -> Result<Rational> {
    let abs: Vec<Rational> = cut
        .coeffs
        .iter()
        .filter(|a| !a.is_zero())
        .map(|a| a.abs())
        .collect();
    let max = abs.iter().max().ok_or_else(|| Error::Invalid("cut has empty support".into()))?;
    let min = abs.iter().min().expect("nonempty");
    Ok(max / min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cuts::Provenance;
    use crate::rational::{int, rat};

    fn cut(a: &[Rational], b: Rational) -> Cut {
        Cut::le(a.to_vec(), b, Provenance::new("t"))
    }

    #[test]
    fn depth_examples() {
        let x = [int(1), int(1)];
        assert_eq!(sq_depth(&cut(&[int(1), int(1)], int(1)), &x).unwrap(), rat(1, 2));
        assert_eq!(sq_depth(&cut(&[int(1), int(1)], int(3)), &x).unwrap(), int(0));
        assert_eq!(sq_depth(&cut(&[int(2), int(2)], int(2)), &x).unwrap(), rat(1, 2));
        assert!(sq_depth(&cut(&[int(0), int(0)], int(1)), &x).is_err());
    }

    #[test]
    fn parallelism_examples() {
        let c = cut(&[int(1), int(1)], int(1));
        assert_eq!(sq_parallelism(&c, &c).unwrap(), int(1));
        let e1 = cut(&[int(1), int(0)], int(1));
        let e2 = cut(&[int(0), int(1)], int(1));
        assert_eq!(sq_parallelism(&e1, &e2).unwrap(), int(0));
        assert_eq!(sq_parallelism(&c, &e1).unwrap(), rat(1, 2));
    }

    #[test]
    fn dynamism_examples() {
        assert_eq!(dynamism(&cut(&[int(4), int(-1), int(0)], int(0))).unwrap(), int(4));
        assert_eq!(dynamism(&cut(&[int(2), int(2)], int(0))).unwrap(), int(1));
        assert_eq!(dynamism(&cut(&[rat(1, 3), int(3)], int(0))).unwrap(), int(9));
        assert!(dynamism(&cut(&[int(0)], int(0))).is_err());
    }
}
