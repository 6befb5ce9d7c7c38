use std::collections::BTreeMap;

use num::rational::BigRational;
use num::{One, Signed, Zero};

use super::{format_rat, SpaceCtx, Vector};
use crate::error::{GkmError, Result};

/// An exponent vector, ordered by graded lexicographic order (total degree
/// first, then lex). This order fixes canonical forms everywhere.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// `dim S^j` of an `n`-dimensional space: the number of degree-`j` monomials
/// in `n` variables, i.e. `binom(j+n-1, n-1)`; zero for negative `j`.
pub fn graded_dim(j: i64, n: usize) -> usize {
    assert!(n >= 1, "graded_dim needs n >= 1");
    if j < 0 {
        return 0;
    }
    let (j, k) = (j as u128, (n - 1) as u128);
    // binom(j + k, k)
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc * (j + i) / i;
    }
    acc as usize
}

/// All degree-`d` monomials in `nvars` variables, in descending lex order of
/// the exponent vector. The order is fixed; matrix columns index into it.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    fn rec(nvars: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if nvars == 1 {
            prefix.push(d);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            rec(nvars - 1, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::with_capacity(graded_dim(d as i64, nvars));
    rec(nvars, d, &mut Vec::new(), &mut out);
    out
}

/// A sparse multivariate polynomial with exact rational coefficients over a
/// fixed number of variables. No zero coefficients are stored; terms are kept
/// in graded-lex order.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = MultiPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        MultiPoly::constant(nvars, BigRational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut p = MultiPoly::zero(nvars);
        p.terms.insert(Monomial::var(nvars, i), BigRational::one());
        p
    }

    /// The degree-1 polynomial with the coordinates of `v` as coefficients.
    pub fn linear_form(v: &Vector) -> Self {
        let nvars = v.dim();
        let mut p = MultiPoly::zero(nvars);
        for (i, c) in v.coords.iter().enumerate() {
            if !c.is_zero() {
                p.terms.insert(Monomial::var(nvars, i), c.clone());
            }
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: Vec<(Monomial, BigRational)>) -> Self {
        let mut p = MultiPoly::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), nvars);
            p.add_term(&m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Leading (greatest) term under graded lex.
    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, m: &Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(m);
                }
            }
            None => {
                self.terms.insert(m.clone(), c);
            }
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars, "context mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars, "context mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars, "context mismatch");
        let mut out = MultiPoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(&ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut out = MultiPoly::one(self.nvars);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d0) => degs.all(|d| d == d0),
        }
    }

    pub fn homogeneous_component(&self, d: u32) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.nvars);
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t *= &point[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes `expr` for variable `x_i`; `expr` must not involve `x_i`.
    pub fn subst_var(&self, i: usize, expr: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, expr.nvars, "context mismatch");
        assert!(
            expr.terms.keys().all(|m| m.0[i] == 0),
            "substitution expression involves the substituted variable"
        );
        let parts = self.coeffs_in_var(i);
        let mut out = MultiPoly::zero(self.nvars);
        let mut power = MultiPoly::one(self.nvars);
        for p in parts {
            out = out.add(&p.mul(&power));
            power = power.mul(expr);
        }
        out
    }

    /// Substitutes every variable simultaneously: `x_i -> images[i]`, a ring
    /// morphism into the (possibly different) context of the images.
    pub fn subst_all(&self, images: &[MultiPoly]) -> MultiPoly {
        assert_eq!(images.len(), self.nvars);
        let target = images
            .first()
            .map(|p| p.nvars)
            .unwrap_or(self.nvars);
        let mut out = MultiPoly::zero(target);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&images[i].pow(e));
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Writes `self = sum_k c_k(other vars) * x_i^k` and returns `[c_0, c_1, ...]`
    /// (each free of `x_i`).
    fn coeffs_in_var(&self, i: usize) -> Vec<MultiPoly> {
        let top = self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0) as usize;
        let mut parts = vec![MultiPoly::zero(self.nvars); top + 1];
        for (m, c) in &self.terms {
            let k = m.0[i] as usize;
            let mut e = m.clone();
            e.0[i] = 0;
            parts[k].add_term(&e, c.clone());
        }
        parts
    }

    /// Pivot variable of a nonzero linear form: the first nonzero coordinate.
    fn pivot_of(l: &Vector) -> Result<usize> {
        l.coords
            .iter()
            .position(|c| !c.is_zero())
            .ok_or(GkmError::ZeroVector)
    }

    /// Division with remainder by the linear form of `l`: returns `(q, r)` with
    /// `self = l * q + r` and `r` free of the pivot variable of `l`.
    pub fn divrem_linear(&self, l: &Vector) -> Result<(MultiPoly, MultiPoly)> {
        assert_eq!(self.nvars, l.dim(), "context mismatch");
        let j = Self::pivot_of(l)?;
        let cj = l.coords[j].clone();
        // On l = 0 the pivot variable equals `a`, a linear form in the others.
        let mut rest = l.clone();
        rest.coords[j] = BigRational::zero();
        let a = MultiPoly::linear_form(&rest.scale(&(-BigRational::one() / &cj)));

        let parts = self.coeffs_in_var(j);
        let top = parts.len() - 1;
        if top == 0 {
            return Ok((MultiPoly::zero(self.nvars), self.clone()));
        }
        // Synthetic division by (x_j - a), then scale by 1/c_j.
        let mut q = vec![MultiPoly::zero(self.nvars); top];
        q[top - 1] = parts[top].clone();
        for k in (1..top).rev() {
            q[k - 1] = parts[k].add(&a.mul(&q[k]));
        }
        let r = parts[0].add(&a.mul(&q[0]));
        let xj = MultiPoly::var(self.nvars, j);
        let mut quot = MultiPoly::zero(self.nvars);
        let mut power = MultiPoly::one(self.nvars);
        let inv = BigRational::one() / cj;
        for qk in q {
            quot = quot.add(&qk.scale(&inv).mul(&power));
            power = power.mul(&xj);
        }
        Ok((quot, r))
    }

    /// Exact division by the linear form of `l`: `Some(q)` with `self = l * q`
    /// when `l` divides exactly, otherwise `None`.
    pub fn div_exact_linear(&self, l: &Vector) -> Result<Option<MultiPoly>> {
        let (q, r) = self.divrem_linear(l)?;
        Ok(if r.is_zero() { Some(q) } else { None })
    }

    /// The image in the quotient by `l`, represented concretely by
    /// eliminating the pivot variable of `l`. Two polynomials have the same
    /// image iff their difference is divisible by `l`.
    pub fn mod_linear(&self, l: &Vector) -> Result<MultiPoly> {
        Ok(self.divrem_linear(l)?.1)
    }

    /// Serialization per the wire format: a list of `{exponents, coeff}`.
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(m, c)| {
                serde_json::json!({
                    "exponents": m.0,
                    "coeff": format_rat(c),
                })
            })
            .collect();
        serde_json::Value::Array(terms)
    }

    pub fn from_json(nvars: usize, v: &serde_json::Value) -> Result<MultiPoly> {
        let arr = v
            .as_array()
            .ok_or_else(|| GkmError::Schema("polynomial must be a list of terms".into()))?;
        let mut out = MultiPoly::zero(nvars);
        for t in arr {
            let exps = t
                .get("exponents")
                .and_then(|e| e.as_array())
                .ok_or_else(|| GkmError::Schema("term missing exponents".into()))?;
            if exps.len() != nvars {
                return Err(GkmError::DimMismatch {
                    expected: nvars,
                    got: exps.len(),
                });
            }
            let e: Vec<u32> = exps
                .iter()
                .map(|x| {
                    x.as_u64()
                        .map(|u| u as u32)
                        .ok_or_else(|| GkmError::Schema("bad exponent".into()))
                })
                .collect::<Result<_>>()?;
            let c = t
                .get("coeff")
                .and_then(|c| c.as_str())
                .ok_or_else(|| GkmError::Schema("term missing coeff".into()))?;
            out.add_term(&Monomial(e), super::parse_rat(c)?);
        }
        Ok(out)
    }

    /// Human-readable form with the context's variable labels, terms in
    /// descending graded-lex order.
    pub fn display(&self, ctx: &SpaceCtx) -> String {
        assert_eq!(ctx.dim, self.nvars);
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || m.degree() == 0 {
                factors.push(format_rat(&mag));
            }
            for (i, &e) in m.0.iter().enumerate() {
                if e == 1 {
                    factors.push(ctx.basis_labels[i].clone());
                } else if e > 1 {
                    factors.push(format!("{}^{}", ctx.basis_labels[i], e));
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl std::fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.display(&SpaceCtx::anonymous(self.nvars.max(1))))
    }
}

/// A univariate polynomial whose coefficients are multivariate polynomials,
/// `P(Y) = sum_k coeffs[k] * Y^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    pub coeffs: Vec<MultiPoly>,
}

impl UniPoly {
    pub fn new(coeffs: Vec<MultiPoly>) -> Self {
        UniPoly { coeffs }
    }

    pub fn constant(c: MultiPoly) -> Self {
        UniPoly { coeffs: vec![c] }
    }

    /// `Y^n` over a context of `nvars` variables.
    pub fn y_power(nvars: usize, n: usize) -> Self {
        let mut coeffs = vec![MultiPoly::zero(nvars); n + 1];
        coeffs[n] = MultiPoly::one(nvars);
        UniPoly { coeffs }
    }

    pub fn eval(&self, value: &MultiPoly) -> MultiPoly {
        let nvars = value.nvars();
        let mut acc = MultiPoly::zero(nvars);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(value).add(c);
        }
        acc
    }

    fn nvars(&self) -> usize {
        self.coeffs.first().map(MultiPoly::nvars).unwrap_or(0)
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let nvars = self.nvars().max(other.nvars());
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![MultiPoly::zero(nvars); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] = coeffs[i].add(c);
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i] = coeffs[i].add(c);
        }
        UniPoly { coeffs }
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        let nvars = self.nvars().max(other.nvars());
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return UniPoly { coeffs: vec![] };
        }
        let mut coeffs =
            vec![MultiPoly::zero(nvars); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        UniPoly { coeffs }
    }

    pub fn scale_poly(&self, p: &MultiPoly) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| c.mul(p)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{rat, ratq};
    use proptest::prelude::*;

    fn x(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i)
    }

    #[test]
    fn graded_dim_examples() {
        assert_eq!(graded_dim(0, 2), 1);
        assert_eq!(graded_dim(-3, 5), 0);
        assert_eq!(graded_dim(2, 2), 3);
        assert_eq!(graded_dim(5, 1), 1);
        assert_eq!(graded_dim(3, 3), 10);
    }

    #[test]
    fn graded_dim_pascal_recurrence() {
        for n in 2..=6 {
            for j in 0..=9i64 {
                assert_eq!(
                    graded_dim(j, n),
                    graded_dim(j, n - 1) + graded_dim(j - 1, n),
                    "lambda({j},{n})"
                );
            }
        }
    }

    #[test]
    fn monomial_enumeration_matches_graded_dim() {
        for n in 1..=4 {
            for d in 0..=5u32 {
                let ms = monomials_of_degree(n, d);
                assert_eq!(ms.len(), graded_dim(d as i64, n));
                assert!(ms.iter().all(|m| m.degree() == d));
                let mut dedup = ms.clone();
                dedup.sort();
                dedup.dedup();
                assert_eq!(dedup.len(), ms.len());
            }
        }
    }

    #[test]
    fn arithmetic_basics() {
        // (x+y)(x-y) = x^2 - y^2
        let sum = x(2, 0).add(&x(2, 1));
        let diff = x(2, 0).sub(&x(2, 1));
        let prod = sum.mul(&diff);
        let expected = x(2, 0).pow(2).sub(&x(2, 1).pow(2));
        assert_eq!(prod, expected);
        assert_eq!(prod.degree(), Some(2));
        assert!(prod.is_homogeneous());
    }

    #[test]
    fn divide_difference_of_squares() {
        // (x^2 - y^2) / (x - y) = x + y
        let p = x(2, 0).pow(2).sub(&x(2, 1).pow(2));
        let l = Vector::from_ints(&[1, -1]);
        let q = p.div_exact_linear(&l).unwrap().unwrap();
        assert_eq!(q, x(2, 0).add(&x(2, 1)));

        // x^2 + y^2 is not divisible by x - y
        let p2 = x(2, 0).pow(2).add(&x(2, 1).pow(2));
        assert!(p2.div_exact_linear(&l).unwrap().is_none());

        // 0 / l = 0
        let z = MultiPoly::zero(2);
        assert_eq!(z.div_exact_linear(&l).unwrap().unwrap(), z);

        // division by zero form errors
        assert!(p.div_exact_linear(&Vector::zero(2)).is_err());
    }

    #[test]
    fn mod_linear_examples() {
        // x*y mod (x) = 0
        let p = x(2, 0).mul(&x(2, 1));
        assert!(p.mod_linear(&Vector::from_ints(&[1, 0])).unwrap().is_zero());
        // (x + y) mod (x - y) = 2y with pivot x
        let s = x(2, 0).add(&x(2, 1));
        let r = s.mod_linear(&Vector::from_ints(&[1, -1])).unwrap();
        assert_eq!(r, x(2, 1).scale(&rat(2)));
    }

    #[test]
    fn subst_var_examples() {
        // x^2 with x -> y gives y^2
        let p = x(2, 0).pow(2);
        let out = p.subst_var(0, &x(2, 1));
        assert_eq!(out, x(2, 1).pow(2));
        // (x - b) with x -> b gives 0
        let b = x(2, 1).scale(&ratq(2, 3));
        let q = x(2, 0).sub(&b);
        assert!(q.subst_var(0, &b).is_zero());
    }

    #[test]
    fn json_round_trip() {
        let p = x(2, 0)
            .pow(3)
            .scale(&ratq(-7, 2))
            .add(&x(2, 1).scale(&rat(5)));
        let v = p.to_json();
        let q = MultiPoly::from_json(2, &v).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn display_reads_naturally() {
        let ctx = SpaceCtx::new(2, vec!["a1".into(), "a2".into()]).unwrap();
        let p = x(2, 0)
            .mul(&x(2, 1))
            .neg()
            .add(&MultiPoly::constant(2, ratq(1, 2)));
        assert_eq!(p.display(&ctx), "-a1*a2 + 1/2");
        assert_eq!(MultiPoly::zero(2).display(&ctx), "0");
    }

    fn arb_poly(nvars: usize, max_terms: usize) -> impl Strategy<Value = MultiPoly> {
        proptest::collection::vec(
            (
                proptest::collection::vec(0u32..4, nvars),
                -6i64..=6,
                1i64..=3,
            ),
            0..max_terms,
        )
        .prop_map(move |terms| {
            MultiPoly::from_terms(
                nvars,
                terms
                    .into_iter()
                    .map(|(e, p, q)| (Monomial(e), ratq(p, q)))
                    .collect(),
            )
        })
    }

    fn arb_nonzero_vec(nvars: usize) -> impl Strategy<Value = Vector> {
        proptest::collection::vec(-4i64..=4, nvars)
            .prop_map(|c| Vector::from_ints(&c))
            .prop_filter("nonzero", |v| !v.is_zero())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn ring_axioms(a in arb_poly(3, 5), b in arb_poly(3, 5), c in arb_poly(3, 5)) {
            // associativity and distributivity, exactly
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.sub(&a), MultiPoly::zero(3));
        }

        #[test]
        fn exact_division_inverts_multiplication(p in arb_poly(3, 5), l in arb_nonzero_vec(3)) {
            let prod = p.mul(&MultiPoly::linear_form(&l));
            let q = prod.div_exact_linear(&l).unwrap();
            prop_assert_eq!(q.unwrap(), p);
        }

        #[test]
        fn quotient_rep_agrees_with_divisibility(
            p in arb_poly(3, 4),
            q in arb_poly(3, 4),
            l in arb_nonzero_vec(3),
        ) {
            let same_image = p.mod_linear(&l).unwrap() == q.mod_linear(&l).unwrap();
            let divisible = p.sub(&q).div_exact_linear(&l).unwrap().is_some();
            prop_assert_eq!(same_image, divisible);
        }

        #[test]
        fn homogeneous_mul_adds_degrees(
            da in 0u32..3, db in 0u32..3,
            a in arb_poly(2, 4), b in arb_poly(2, 4),
        ) {
            let ha = a.homogeneous_component(da);
            let hb = b.homogeneous_component(db);
            let prod = ha.mul(&hb);
            prop_assert!(prod.is_homogeneous());
            if !prod.is_zero() {
                prop_assert_eq!(prod.degree(), Some(da + db));
            }
        }
    }
}
