use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::polytope::{Constraint, Sense};
use crate::rational::{self, Rational};

/// Where a cut came from.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Provenance {
    pub generator: String,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "rational::serde_str::opt_vec"
    )]
    pub multipliers: Option<Vec<Rational>>,
    #[serde(default)]
    pub source_rows: Vec<usize>,
    /// Tableau column of the basic variable, for tableau-derived cuts.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basic_var: Option<usize>,
    /// Free-form detail such as the MIR embedding used.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Provenance {
    pub fn new(generator: impl Into<String>) -> Self {
        Provenance {
            generator: generator.into(),
            ..Default::default()
        }
    }

    pub fn with_rows(mut self, rows: Vec<usize>) -> Self {
        self.source_rows = rows;
        self
    }

    pub fn with_multipliers(mut self, m: Vec<Rational>) -> Self {
        self.multipliers = Some(m);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Same origin, new generator name.
    pub fn derived(&self, generator: &str) -> Self {
        Provenance {
            generator: generator.to_string(),
            ..self.clone()
        }
    }
}

/// `coeffs · x  sense  rhs` with `sense` either `<=` or `>=`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cut {
    #[serde(with = "rational::serde_str::vec")]
    pub coeffs: Vec<Rational>,
    pub sense: Sense,
    #[serde(with = "rational::serde_str")]
    pub rhs: Rational,
    pub provenance: Provenance,
}

impl Cut {
    pub fn new(coeffs: Vec<Rational>, sense: Sense, rhs: Rational, provenance: Provenance) -> Result<Cut> {
        if sense == Sense::Eq {
            return Err(Error::Invalid("a cut is an inequality".into()));
        }
        Ok(Cut {
            coeffs,
            sense,
            rhs,
            provenance,
        })
    }

    pub fn le(coeffs: Vec<Rational>, rhs: Rational, provenance: Provenance) -> Cut {
        Cut {
            coeffs,
            sense: Sense::Le,
            rhs,
            provenance,
        }
    }

    pub fn ge(coeffs: Vec<Rational>, rhs: Rational, provenance: Provenance) -> Cut {
        Cut {
            coeffs,
            sense: Sense::Ge,
            rhs,
            provenance,
        }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len())
            .filter(|&j| !self.coeffs[j].is_zero())
            .collect()
    }

    pub fn nnz(&self) -> usize {
        rational::nnz(&self.coeffs)
    }

    /// The cut as `alpha · x <= beta`.
    pub fn as_le(&self) -> (Vec<Rational>, Rational) {
        match self.sense {
            Sense::Ge => (self.coeffs.iter().map(|a| -a).collect(), -self.rhs.clone()),
            _ => (self.coeffs.clone(), self.rhs.clone()),
        }
    }

    /// Same cut rewritten in `<=` form.
    pub fn to_le(&self) -> Cut {
        let (coeffs, rhs) = self.as_le();
        Cut::le(coeffs, rhs, self.provenance.clone())
    }

    pub fn is_satisfied(&self, x: &[Rational]) -> bool {
        self.sense.holds(&rational::dot(&self.coeffs, x), &self.rhs)
    }

    /// `alpha · x - beta` in `<=` orientation; positive iff `x` violates.
    pub fn violation(&self, x: &[Rational]) -> Rational {
        let (a, b) = self.as_le();
        rational::dot(&a, x) - b
    }

    pub fn separates(&self, x: &[Rational]) -> bool {
        self.violation(x).is_positive()
    }

    pub fn to_constraint(&self) -> Constraint {
        Constraint::new(self.coeffs.clone(), self.sense, self.rhs.clone())
    }

    /// Multiply both sides by a positive scalar.
    pub fn scaled(&self, s: &Rational) -> Result<Cut> {
        if !s.is_positive() {
            return Err(Error::Invalid("cuts may only be scaled by positive factors".into()));
        }
        Ok(Cut {
            coeffs: rational::scale(&self.coeffs, s),
            sense: self.sense,
            rhs: &self.rhs * s,
            provenance: self.provenance.clone(),
        })
    }

    /// Canonical `<=` form with coprime integer data, for comparing cuts up to
    /// positive scaling.
    pub fn normalized_key(&self) -> Vec<num_bigint::BigInt> {
        let (mut a, b) = self.as_le();
        a.push(b);
        rational::primitive_integer(&a)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}
