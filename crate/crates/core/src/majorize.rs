//! Majorization on probability vectors, T-transform chains, and the catalog of
//! symmetric concave functionals.
//!
//! Vectors of different length are compared after padding the shorter one with
//! zeros. Entropies are in bits.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::qstate::DensityMatrix;
use crate::scalar::Real;

/// Default absolute tolerance on partial sums.
pub const MAJORIZATION_TOL: f64 = 1e-9;

/// Nonnegative vector summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbVector<T> {
    entries: Vec<T>,
}

impl<T: Real> ProbVector<T> {
    pub fn new(entries: Vec<T>) -> Result<Self> {
        check_entries(&entries)?;
        let s: T = entries.iter().copied().sum();
        if (s - T::one()).abs() > T::tol(1e-9) {
            return Err(Error::Validation {
                invariant: "sums_to_one",
                detail: format!("entries sum to {s}"),
            });
        }
        Ok(Self { entries })
    }

    /// Wraps entries known to form a distribution up to rounding.
    pub(crate) fn from_raw(entries: Vec<T>) -> Self {
        Self { entries }
    }

    pub fn uniform(d: usize) -> Self {
        Self::from_raw(vec![T::one() / T::from_count(d); d])
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<T> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn sorted_desc(&self) -> Vec<T> {
        sorted_desc(&self.entries)
    }

    pub fn padded(&self, n: usize) -> Vec<T> {
        let mut v = self.entries.clone();
        if v.len() < n {
            v.resize(n, T::zero());
        }
        v
    }

    /// Number of entries above `tol`.
    pub fn support(&self, tol: T) -> usize {
        self.entries.iter().filter(|&&x| x > tol).count()
    }
}

fn check_entries<T: Real>(v: &[T]) -> Result<()> {
    if let Some((i, x)) = v.iter().enumerate().find(|(_, x)| !x.is_finite() || **x < -T::tol(1e-12)) {
        return Err(Error::Validation {
            invariant: "nonnegative",
            detail: format!("entry {i} is {x}"),
        });
    }
    Ok(())
}

pub(crate) fn sorted_desc<T: Real>(v: &[T]) -> Vec<T> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
    s
}

fn padded_sorted_pair<T: Real>(x: &[T], y: &[T]) -> (Vec<T>, Vec<T>) {
    let n = x.len().max(y.len());
    let mut xs = sorted_desc(x);
    let mut ys = sorted_desc(y);
    xs.resize(n, T::zero());
    ys.resize(n, T::zero());
    (xs, ys)
}

/// Smallest value of `Σ_{i≤k} y↓_i − Σ_{i≤k} x↓_i` over all prefixes, also
/// counting `−|Σx − Σy|`. Nonnegative iff `x ≺ y` exactly.
pub fn majorization_slack<T: Real>(x: &[T], y: &[T]) -> Result<T> {
    check_entries(x)?;
    check_entries(y)?;
    let (xs, ys) = padded_sorted_pair(x, y);
    let mut px = T::zero();
    let mut py = T::zero();
    let mut slack = T::infinity();
    for (a, b) in xs.iter().zip(&ys) {
        px = px + *a;
        py = py + *b;
        slack = slack.min(py - px);
    }
    Ok(slack.min(-(px - py).abs()))
}

/// Whether `x ≺ y` (x is majorized by y) within `tol` on partial sums.
pub fn majorizes<T: Real>(x: &[T], y: &[T], tol: T) -> Result<bool> {
    Ok(majorization_slack(x, y)? >= -tol)
}

/// `x ≃ y`: same nonzero components up to permutation.
pub fn equiv<T: Real>(x: &[T], y: &[T], tol: T) -> Result<bool> {
    Ok(majorizes(x, y, tol)? && majorizes(y, x, tol)?)
}

/// Two-coordinate doubly stochastic map `[[a, 1−a], [1−a, a]]` on `(i, j)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TTransform<T> {
    pub i: usize,
    pub j: usize,
    pub a: T,
}

impl<T: Real> TTransform<T> {
    pub fn new(i: usize, j: usize, a: T) -> Result<Self> {
        if i == j || !(a >= T::zero() && a <= T::one()) {
            return Err(Error::Parameter(format!(
                "T-transform needs distinct indices and a in [0,1], got ({i},{j}) a={a}"
            )));
        }
        Ok(Self { i, j, a })
    }

    pub fn apply(&self, v: &mut [T]) {
        let (x, y) = (v[self.i], v[self.j]);
        let b = T::one() - self.a;
        v[self.i] = self.a * x + b * y;
        v[self.j] = b * x + self.a * y;
    }
}

/// T-transforms `T_1, …, T_k` with `T_k ⋯ T_1 source↓ = target↓`.
///
/// Indices refer to the descending rearrangements of the (zero-padded) vectors.
/// At most `len − 1` transforms are returned.
pub fn t_transform_chain<T: Real>(target: &[T], source: &[T]) -> Result<Vec<TTransform<T>>> {
    if !majorizes(target, source, T::tol(MAJORIZATION_TOL))? {
        return Err(Error::NotMajorized(
            "target is not majorized by source".into(),
        ));
    }
    let (y, mut x) = padded_sorted_pair(target, source);
    let n = x.len();
    let eps = T::tol(1e-14);
    let mut chain = Vec::new();
    for _ in 0..n {
        let Some(j) = (0..n).rev().find(|&l| x[l] > y[l] + eps) else {
            break;
        };
        let Some(k) = ((j + 1)..n).find(|&l| x[l] < y[l] - eps) else {
            break;
        };
        let down = x[j] - y[j];
        let up = y[k] - x[k];
        let delta = down.min(up);
        let a = (T::one() - delta / (x[j] - x[k])).max(T::zero()).min(T::one());
        let total = x[j] + x[k];
        if down <= up {
            x[j] = y[j];
            x[k] = total - y[j];
        } else {
            x[k] = y[k];
            x[j] = total - y[k];
        }
        chain.push(TTransform { i: j, j: k, a });
    }
    Ok(chain)
}

/// Whether a catalog functional is concave or only Schur concave.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConcavityClass {
    Concave,
    SchurConcaveOnly,
}

/// Symmetric concave functionals on the probability simplex.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Functional {
    /// `−Σ p log₂ p`
    Shannon,
    /// `1 − max p`
    OneMinusMax,
    /// `d (Π p)^{1/d}`; the dimension is part of the definition.
    Gc { d: usize },
    /// Rényi entropy of order `0 ≤ α ≤ 1`, in bits.
    Renyi { alpha: f64 },
    /// Sum of all but the `m` largest entries.
    Tail { m: usize },
}

impl Functional {
    pub fn gc(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Parameter("gc needs d >= 1".into()));
        }
        Ok(Self::Gc { d })
    }

    pub fn renyi(alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::Parameter(format!("renyi order must lie in [0,1], got {alpha}")));
        }
        Ok(Self::Renyi { alpha })
    }

    pub fn tail(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Parameter("tail needs m >= 1".into()));
        }
        Ok(Self::Tail { m })
    }

    pub fn concavity_class(&self) -> ConcavityClass {
        ConcavityClass::Concave
    }

    /// Catalog functionals whose value ignores appended zeros.
    pub fn is_padding_invariant(&self) -> bool {
        !matches!(self, Self::Gc { .. })
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Self::Gc { d: 0 } => Err(Error::Parameter("gc needs d >= 1".into())),
            Self::Renyi { alpha } if !(0.0..=1.0).contains(&alpha) => {
                Err(Error::Parameter(format!("renyi order must lie in [0,1], got {alpha}")))
            }
            Self::Tail { m: 0 } => Err(Error::Parameter("tail needs m >= 1".into())),
            _ => Ok(()),
        }
    }

    /// Value on a probability vector. Entries are sorted first so the result is
    /// bitwise independent of their order.
    pub fn evaluate<T: Real>(&self, p: &[T]) -> Result<T> {
        self.validate()?;
        check_entries(p)?;
        let s = sorted_desc(p);
        Ok(match *self {
            Self::Shannon => shannon(&s),
            Self::OneMinusMax => T::one() - s.first().copied().unwrap_or_else(T::zero),
            Self::Gc { d } => {
                if s.len() > d {
                    return Err(Error::Dimension(format!(
                        "gc({d}) evaluated on a vector of length {}",
                        s.len()
                    )));
                }
                if s.len() < d || s.iter().any(|&x| x <= T::zero()) {
                    T::zero()
                } else {
                    let mean_log = s.iter().map(|x| x.ln()).sum::<T>() / T::from_count(d);
                    T::from_count(d) * mean_log.exp()
                }
            }
            Self::Renyi { alpha } => {
                if alpha == 1.0 {
                    shannon(&s)
                } else if alpha == 0.0 {
                    T::from_count(s.iter().filter(|&&x| x > T::zero()).count()).log2()
                } else {
                    let a = T::lit(alpha);
                    let total: T = s.iter().filter(|&&x| x > T::zero()).map(|x| x.powf(a)).sum();
                    total.log2() / (T::one() - a)
                }
            }
            Self::Tail { m } => s.iter().skip(m).copied().sum(),
        })
    }

    /// Lift to a unitarily invariant function of density matrices via the spectrum.
    pub fn evaluate_spectral<T: Real>(&self, rho: &DensityMatrix<T>) -> Result<T> {
        let vals: Vec<T> = rho.eig().values.into_iter().map(|x| x.max(T::zero())).collect();
        self.evaluate(&vals)
    }
}

fn shannon<T: Real>(sorted: &[T]) -> T {
    -sorted
        .iter()
        .filter(|&&x| x > T::zero())
        .map(|&x| x * x.log2())
        .sum::<T>()
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Shannon => write!(f, "shannon"),
            Self::OneMinusMax => write!(f, "geom"),
            Self::Gc { d } => write!(f, "gc:{d}"),
            Self::Renyi { alpha } => write!(f, "renyi:{alpha}"),
            Self::Tail { m } => write!(f, "tail:{m}"),
        }
    }
}

/// Parses `shannon`, `geom` (alias `one_minus_max`), `gc:d`, `renyi:α`, `tail:m`.
impl FromStr for Functional {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let need = |what: &str| Error::Parameter(format!("`{name}` needs a {what} argument, e.g. {name}:<{what}>"));
        let bad = |a: &str| Error::Parameter(format!("cannot parse `{a}` for `{name}`"));
        match (name, arg) {
            ("shannon", None) => Ok(Self::Shannon),
            ("geom" | "one_minus_max", None) => Ok(Self::OneMinusMax),
            ("gc", Some(a)) => Self::gc(a.parse().map_err(|_| bad(a))?),
            ("gc", None) => Err(need("dimension")),
            ("renyi", Some(a)) => Self::renyi(a.parse().map_err(|_| bad(a))?),
            ("renyi", None) => Err(need("order")),
            ("tail", Some(a)) => Self::tail(a.parse().map_err(|_| bad(a))?),
            ("tail", None) => Err(need("count")),
            _ => Err(Error::Parameter(format!("unknown functional `{s}`"))),
        }
    }
}
