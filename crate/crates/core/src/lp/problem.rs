use std::fmt;

use num_traits::{One, Signed, Zero};

use super::{fmt_rational, Rational};

pub type VarId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    LessEq,
    GreaterEq,
    Equal,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::LessEq => "<=",
            Relation::GreaterEq => ">=",
            Relation::Equal => "=",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub lower: Rational,
    pub upper: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(VarId, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn lhs_value(&self, values: &[Rational]) -> Rational {
        self.terms
            .iter()
            .fold(Rational::zero(), |acc, (v, c)| acc + c * &values[*v])
    }

    pub fn is_satisfied(&self, values: &[Rational]) -> bool {
        let lhs = self.lhs_value(values);
        match self.relation {
            Relation::LessEq => lhs <= self.rhs,
            Relation::GreaterEq => lhs >= self.rhs,
            Relation::Equal => lhs == self.rhs,
        }
    }
}

/// Minimization LP over exact rationals.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LpProblem {
    variables: Vec<Variable>,
    constraints: Vec<Constraint>,
    objective: Vec<(VarId, Rational)>,
}

impl LpProblem {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a variable with `lower ≤ v (≤ upper)`.
    pub fn add_variable(
        &mut self,
        name: impl Into<String>,
        lower: Rational,
        upper: Option<Rational>,
    ) -> VarId {
        self.variables.push(Variable {
            name: name.into(),
            lower,
            upper,
        });
        self.variables.len() - 1
    }

    pub fn add_nonneg(&mut self, name: impl Into<String>) -> VarId {
        self.add_variable(name, Rational::zero(), None)
    }

    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        terms: Vec<(VarId, Rational)>,
        relation: Relation,
        rhs: Rational,
    ) {
        for (v, _) in &terms {
            assert!(*v < self.variables.len(), "undeclared variable {v}");
        }
        self.constraints.push(Constraint {
            name: name.into(),
            terms,
            relation,
            rhs,
        });
    }

    pub fn set_objective(&mut self, terms: Vec<(VarId, Rational)>) {
        for (v, _) in &terms {
            assert!(*v < self.variables.len(), "undeclared variable {v}");
        }
        self.objective = terms;
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective(&self) -> &[(VarId, Rational)] {
        &self.objective
    }

    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn objective_value(&self, values: &[Rational]) -> Rational {
        self.objective
            .iter()
            .fold(Rational::zero(), |acc, (v, c)| acc + c * &values[*v])
    }

    /// Names of bounds and constraints violated by `values`.
    pub fn violations(&self, values: &[Rational]) -> Vec<String> {
        let mut out = Vec::new();
        for (v, var) in self.variables.iter().enumerate() {
            if values[v] < var.lower {
                out.push(format!("{} >= {}", var.name, fmt_rational(&var.lower)));
            }
            if let Some(up) = &var.upper {
                if &values[v] > up {
                    out.push(format!("{} <= {}", var.name, fmt_rational(up)));
                }
            }
        }
        for c in &self.constraints {
            if !c.is_satisfied(values) {
                out.push(c.name.clone());
            }
        }
        out
    }

    pub fn is_feasible(&self, values: &[Rational]) -> bool {
        values.len() == self.variables.len() && self.violations(values).is_empty()
    }
}

fn write_terms(
    f: &mut fmt::Formatter<'_>,
    lp: &LpProblem,
    terms: &[(VarId, Rational)],
) -> fmt::Result {
    if terms.is_empty() {
        return f.write_str("0");
    }
    for (k, (v, c)) in terms.iter().enumerate() {
        let sign = if c.is_negative() { "-" } else { "+" };
        if k > 0 || c.is_negative() {
            write!(f, "{sign} ")?;
        }
        let mag = c.abs();
        if mag.is_one() {
            write!(f, "{} ", lp.variables[*v].name)?;
        } else {
            write!(f, "{} {} ", fmt_rational(&mag), lp.variables[*v].name)?;
        }
    }
    Ok(())
}

/// Debug listing; not a stable format.
impl fmt::Display for LpProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("minimize ")?;
        write_terms(f, self, &self.objective)?;
        writeln!(f)?;
        for var in &self.variables {
            write!(f, "var {} >= {}", var.name, fmt_rational(&var.lower))?;
            if let Some(up) = &var.upper {
                write!(f, " <= {}", fmt_rational(up))?;
            }
            writeln!(f)?;
        }
        for c in &self.constraints {
            write!(f, "{}: ", c.name)?;
            write_terms(f, self, &c.terms)?;
            writeln!(f, "{} {}", c.relation, fmt_rational(&c.rhs))?;
        }
        Ok(())
    }
}
