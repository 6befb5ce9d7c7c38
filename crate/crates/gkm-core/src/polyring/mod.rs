//! Exact sparse multivariate polynomials, rational functions with
//! linear-form denominators, and dense rational linear algebra over a fixed
//! finite-dimensional rational vector space.

mod linalg;
mod poly;
mod ratfn;

pub use linalg::{solve_affine, AffineSolution, RatMatrix};
pub use poly::{graded_dim, monomials_of_degree, Monomial, MultiPoly, UniPoly};
pub use ratfn::RationalFn;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{GkmError, Result};

/// Shorthand for small integer rationals.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `p/q` as an exact rational. Panics if `q == 0`.
pub fn ratq(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p/q"` or `"p"`; accepts non-reduced input and normalizes.
pub fn parse_rat(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let p: BigInt = num
        .parse()
        .map_err(|_| GkmError::Schema(format!("bad rational {s:?}")))?;
    let q: BigInt = den
        .parse()
        .map_err(|_| GkmError::Schema(format!("bad rational {s:?}")))?;
    if q.is_zero() {
        return Err(GkmError::Schema(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(p, q))
}

/// Canonical string form: reduced, `q > 0`, denominator omitted when 1.
pub fn format_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// The ambient space: dimension and the names of the chosen basis covectors.
/// Everything downstream (weights, polynomials) is expressed in coordinates
/// relative to this basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceCtx {
    pub dim: usize,
    pub basis_labels: Vec<String>,
}

impl SpaceCtx {
    pub fn new(dim: usize, basis_labels: Vec<String>) -> Result<Self> {
        if dim == 0 {
            return Err(GkmError::Invalid("space dimension must be >= 1".into()));
        }
        if basis_labels.len() != dim {
            return Err(GkmError::DimMismatch {
                expected: dim,
                got: basis_labels.len(),
            });
        }
        let mut sorted = basis_labels.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != dim {
            return Err(GkmError::Invalid("basis labels must be distinct".into()));
        }
        Ok(SpaceCtx { dim, basis_labels })
    }

    /// `dim` anonymous labels `x1..xdim`.
    pub fn anonymous(dim: usize) -> Self {
        SpaceCtx::new(dim, (1..=dim).map(|i| format!("x{i}")).collect()).unwrap()
    }
}

/// A coordinate vector: an element of the space or of its dual, depending on
/// context. The pairing of a covector with a vector is the coordinate dot
/// product.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vector {
    pub coords: Vec<BigRational>,
}

impl std::fmt::Debug for Vector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rat(c))?;
        }
        write!(f, "]")
    }
}

impl Vector {
    pub fn new(coords: Vec<BigRational>) -> Self {
        Vector { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Vector::new(coords.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        Vector::new(vec![BigRational::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Vector) -> Vector {
        assert_eq!(self.dim(), other.dim());
        Vector::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        assert_eq!(self.dim(), other.dim());
        Vector::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn neg(&self) -> Vector {
        Vector::new(self.coords.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, c: &BigRational) -> Vector {
        Vector::new(self.coords.iter().map(|a| a * c).collect())
    }

    /// Pairing with a vector of the dual space (coordinate dot product).
    pub fn dot(&self, other: &Vector) -> BigRational {
        assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .fold(BigRational::zero(), |acc, t| acc + t)
    }

    /// True when `other = c * self` for some rational `c` (zero counts as
    /// parallel to everything).
    pub fn is_parallel(&self, other: &Vector) -> bool {
        assert_eq!(self.dim(), other.dim());
        for i in 0..self.dim() {
            for j in (i + 1)..self.dim() {
                let det = &self.coords[i] * &other.coords[j] - &self.coords[j] * &other.coords[i];
                if !det.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// The unique positive multiple with coprime integer coordinates and
    /// positive first nonzero coordinate. Panics on the zero vector.
    pub fn primitive(&self) -> Vector {
        assert!(!self.is_zero(), "primitive form of the zero vector");
        let mut lcm = BigInt::one();
        for c in &self.coords {
            lcm = num::integer::lcm(lcm, c.denom().clone());
        }
        let ints: Vec<BigInt> = self
            .coords
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let mut gcd = BigInt::zero();
        for v in &ints {
            gcd = num::integer::gcd(gcd, v.clone());
        }
        let mut out: Vec<BigRational> = ints
            .into_iter()
            .map(|v| BigRational::from_integer(v / &gcd))
            .collect();
        if let Some(first) = out.iter().find(|c| !c.is_zero()) {
            if first.is_negative() {
                out = out.into_iter().map(|c| -c).collect();
            }
        }
        Vector::new(out)
    }

    /// The defining linear form of this covector in the polynomial ring.
    pub fn as_linear_form(&self) -> MultiPoly {
        MultiPoly::linear_form(self)
    }
}
