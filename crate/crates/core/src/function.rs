use std::fmt;
use std::sync::Arc;

use crate::expr::{Expr, Variable};

/// Functions whose conformable derivative is known in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedForm {
    /// `t^p`
    Power(f64),
    /// `λ`
    Constant(f64),
    /// `e^{c t}`
    Exponential(f64),
    /// `e^{t^β / β}`, the eigenfunction of the order-β derivative.
    AlphaExponential(f64),
}

impl ClosedForm {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            ClosedForm::Power(p) => t.powf(p),
            ClosedForm::Constant(c) => c,
            ClosedForm::Exponential(c) => (c * t).exp(),
            ClosedForm::AlphaExponential(beta) => (t.powf(beta) / beta).exp(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arity {
    /// `t ↦ f(t)`
    One,
    /// `(t, x) ↦ f(t, x)`
    Two,
}

type HostFn = dyn Fn(f64, f64) -> f64 + Send + Sync;

/// An evaluable real function of `t` or of `(t, x)`.
///
/// Arity-one functions ignore the state argument.
#[derive(Clone)]
pub enum ScalarFn {
    Closed(ClosedForm),
    Expr { tree: Arc<Expr>, arity: Arity },
    Host { f: Arc<HostFn>, arity: Arity },
}

impl ScalarFn {
    pub fn constant(c: f64) -> Self {
        ScalarFn::Closed(ClosedForm::Constant(c))
    }

    pub fn power(p: f64) -> Self {
        ScalarFn::Closed(ClosedForm::Power(p))
    }

    pub fn exponential(c: f64) -> Self {
        ScalarFn::Closed(ClosedForm::Exponential(c))
    }

    pub fn alpha_exponential(alpha: f64) -> Self {
        ScalarFn::Closed(ClosedForm::AlphaExponential(alpha))
    }

    /// Wraps a parsed expression. The arity is two when the tree references `x`.
    pub fn from_expr(tree: Expr) -> Self {
        let arity = if tree.references(Variable::X) {
            Arity::Two
        } else {
            Arity::One
        };
        ScalarFn::Expr {
            tree: Arc::new(tree),
            arity,
        }
    }

    pub fn of_t(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        ScalarFn::Host {
            f: Arc::new(move |t, _| f(t)),
            arity: Arity::One,
        }
    }

    pub fn of_tx(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        ScalarFn::Host {
            f: Arc::new(f),
            arity: Arity::Two,
        }
    }

    pub fn arity(&self) -> Arity {
        match self {
            ScalarFn::Closed(_) => Arity::One,
            ScalarFn::Expr { arity, .. } | ScalarFn::Host { arity, .. } => *arity,
        }
    }

    #[inline]
    pub fn eval(&self, t: f64, x: f64) -> f64 {
        match self {
            ScalarFn::Closed(form) => form.eval(t),
            ScalarFn::Expr { tree, .. } => tree.eval(t, x),
            ScalarFn::Host { f, .. } => f(t, x),
        }
    }

    #[inline]
    pub fn at(&self, t: f64) -> f64 {
        self.eval(t, 0.0)
    }

    pub fn as_closed(&self) -> Option<&ClosedForm> {
        match self {
            ScalarFn::Closed(form) => Some(form),
            _ => None,
        }
    }
}

impl fmt::Debug for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarFn::Closed(form) => write!(f, "Closed({form:?})"),
            ScalarFn::Expr { tree, .. } => write!(f, "Expr({tree})"),
            ScalarFn::Host { arity, .. } => write!(f, "Host({arity:?})"),
        }
    }
}

impl From<ClosedForm> for ScalarFn {
    fn from(form: ClosedForm) -> Self {
        ScalarFn::Closed(form)
    }
}

impl From<Expr> for ScalarFn {
    fn from(tree: Expr) -> Self {
        ScalarFn::from_expr(tree)
    }
}
