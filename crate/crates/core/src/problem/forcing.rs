//! Right-hand sides `f(t)`. Closed-form variants reduce to vector
//! trigonometric polynomials so reference solutions can integrate them exactly.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{StateVector, SymMatrix};

/// `c + Σ_j (a_j cos(ω_j t) + b_j sin(ω_j t))` with scalar coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarTrig {
    pub constant: f64,
    /// `(ω, cos coefficient, sin coefficient)`
    pub terms: Vec<(f64, f64, f64)>,
}

impl ScalarTrig {
    pub fn eval(&self, t: f64) -> f64 {
        self.terms.iter().fold(self.constant, |acc, &(w, a, b)| {
            acc + a * (w * t).cos() + b * (w * t).sin()
        })
    }

    pub fn derivative(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(w, a, b)| w * (b * (w * t).cos() - a * (w * t).sin()))
            .sum()
    }

    pub fn second_derivative(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(w, a, b)| -w * w * (a * (w * t).cos() + b * (w * t).sin()))
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrigTerm {
    pub omega: f64,
    pub cos: StateVector,
    pub sin: StateVector,
}

/// `f(t) = c + Σ_j (a_j cos(ω_j t) + b_j sin(ω_j t))` with vector coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigForcing {
    pub constant: StateVector,
    pub terms: Vec<TrigTerm>,
}

impl TrigForcing {
    pub fn zero(dim: usize) -> Self {
        TrigForcing {
            constant: StateVector::zeros(dim),
            terms: Vec::new(),
        }
    }

    pub fn eval(&self, t: f64) -> StateVector {
        let mut out = self.constant.clone();
        for term in &self.terms {
            out.axpy((term.omega * t).cos(), &term.cos);
            out.axpy((term.omega * t).sin(), &term.sin);
        }
        out
    }

    /// Scalar trigonometric polynomial `(f(t), q)`.
    pub fn project(&self, q: &[f64]) -> ScalarTrig {
        let dot = |v: &StateVector| v.iter().zip(q).map(|(a, b)| a * b).sum::<f64>();
        ScalarTrig {
            constant: dot(&self.constant),
            terms: self
                .terms
                .iter()
                .map(|t| (t.omega, dot(&t.cos), dot(&t.sin)))
                .collect(),
        }
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        self.constant.expect_dim(dim)?;
        for t in &self.terms {
            t.cos.expect_dim(dim)?;
            t.sin.expect_dim(dim)?;
            if !t.omega.is_finite() {
                return Err(Error::InvalidParameter("non-finite frequency".into()));
            }
        }
        Ok(())
    }
}

/// Forcing that makes `u(t) = g(t) w` an exact solution: `f = g'(t) B w + g(t) A w`.
#[derive(Debug, Clone, PartialEq)]
pub struct Manufactured {
    pub profile: ScalarTrig,
    pub shape: StateVector,
    expanded: TrigForcing,
}

impl Manufactured {
    pub fn new(
        profile: ScalarTrig,
        shape: StateVector,
        a: &SymMatrix,
        b: &SymMatrix,
    ) -> Result<Self> {
        let aw = a.apply(&shape)?;
        let bw = b.apply(&shape)?;
        let terms = profile
            .terms
            .iter()
            .map(|&(w, ca, cb)| TrigTerm {
                omega: w,
                cos: StateVector::lincomb(ca, &aw, cb * w, &bw),
                sin: StateVector::lincomb(cb, &aw, -ca * w, &bw),
            })
            .collect();
        let expanded = TrigForcing {
            constant: aw.scaled(profile.constant),
            terms,
        };
        Ok(Manufactured {
            profile,
            shape,
            expanded,
        })
    }

    /// The manufactured exact solution `g(t) w`.
    pub fn solution(&self, t: f64) -> StateVector {
        self.shape.scaled(self.profile.eval(t))
    }

    pub fn as_trig(&self) -> &TrigForcing {
        &self.expanded
    }
}

#[derive(Clone)]
pub struct CustomForcing(pub Arc<dyn Fn(f64) -> StateVector + Send + Sync>);

impl fmt::Debug for CustomForcing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("CustomForcing(..)")
    }
}

#[derive(Debug, Clone)]
pub enum Forcing {
    Zero,
    Trig(TrigForcing),
    Manufactured(Manufactured),
    /// Evaluation only; no closed form.
    Custom(CustomForcing),
}

impl Forcing {
    pub fn custom(f: impl Fn(f64) -> StateVector + Send + Sync + 'static) -> Self {
        Forcing::Custom(CustomForcing(Arc::new(f)))
    }

    pub fn constant(v: StateVector) -> Self {
        Forcing::Trig(TrigForcing {
            constant: v,
            terms: Vec::new(),
        })
    }

    pub fn eval(&self, t: f64, dim: usize) -> StateVector {
        match self {
            Forcing::Zero => StateVector::zeros(dim),
            Forcing::Trig(tf) => tf.eval(t),
            Forcing::Manufactured(m) => m.as_trig().eval(t),
            Forcing::Custom(c) => (c.0)(t),
        }
    }

    pub fn closed_form(&self, dim: usize) -> Result<TrigForcing> {
        match self {
            Forcing::Zero => Ok(TrigForcing::zero(dim)),
            Forcing::Trig(tf) => Ok(tf.clone()),
            Forcing::Manufactured(m) => Ok(m.as_trig().clone()),
            Forcing::Custom(_) => Err(Error::NoClosedForm),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Forcing::Zero)
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        match self {
            Forcing::Zero | Forcing::Custom(_) => Ok(()),
            Forcing::Trig(tf) => tf.check_dim(dim),
            Forcing::Manufactured(m) => {
                m.shape.expect_dim(dim)?;
                m.as_trig().check_dim(dim)
            }
        }
    }
}
