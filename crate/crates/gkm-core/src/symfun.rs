//! Symmetric-function identities, partial-fraction reduction, closed-form
//! Vandermonde inverses, and the finite-set cohomology built on them. All
//! exact; the symbolic paths run over polynomial values (variables or linear
//! forms), the numeric paths over plain rationals.

use num::rational::BigRational;
use num::{One, Zero};

use crate::error::{GkmError, Result};
use crate::polyring::{
    graded_dim, monomials_of_degree, rat, solve_affine, Monomial, MultiPoly, RatMatrix,
    RationalFn, UniPoly, Vector,
};

/// Elementary symmetric polynomials `sigma_0..sigma_m` of the given values,
/// read off the coefficient expansion of `prod (T + X_i)`.
pub fn elem_sym(values: &[MultiPoly]) -> Vec<MultiPoly> {
    let nvars = values.first().map(MultiPoly::nvars).unwrap_or(0);
    let mut e = vec![MultiPoly::zero(nvars); values.len() + 1];
    e[0] = MultiPoly::one(nvars);
    for (i, x) in values.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            let bump = e[k - 1].mul(x);
            e[k] = e[k].add(&bump);
        }
    }
    e
}

pub fn elem_sym_scalars(values: &[BigRational]) -> Vec<BigRational> {
    let mut e = vec![BigRational::zero(); values.len() + 1];
    e[0] = BigRational::one();
    for (i, x) in values.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            let bump = &e[k - 1] * x;
            e[k] += bump;
        }
    }
    e
}

/// Complete homogeneous sum of degree `deg` in the given values:
/// `sum X_1^{i_1} ... X_m^{i_m}` over nonnegative exponents summing to `deg`.
pub fn complete_hom(values: &[MultiPoly], deg: i64) -> MultiPoly {
    let nvars = values.first().map(MultiPoly::nvars).unwrap_or(0);
    if deg < 0 {
        return MultiPoly::zero(nvars);
    }
    // h[k] over the first j values, extended one value at a time
    let mut h = vec![MultiPoly::zero(nvars); deg as usize + 1];
    h[0] = MultiPoly::one(nvars);
    for x in values {
        for k in 1..h.len() {
            let bump = h[k - 1].mul(x);
            h[k] = h[k].add(&bump);
        }
    }
    h[deg as usize].clone()
}

pub fn complete_hom_scalars(values: &[BigRational], deg: i64) -> BigRational {
    if deg < 0 {
        return BigRational::zero();
    }
    let mut h = vec![BigRational::zero(); deg as usize + 1];
    h[0] = BigRational::one();
    for x in values {
        for k in 1..h.len() {
            let bump = &h[k - 1] * x;
            h[k] += bump;
        }
    }
    h[deg as usize].clone()
}

fn check_distinct(values: &[BigRational]) -> Result<()> {
    for i in 0..values.len() {
        for j in (i + 1)..values.len() {
            if values[i] == values[j] {
                return Err(GkmError::GenericityViolation(format!(
                    "repeated value at positions {i} and {j}"
                )));
            }
        }
    }
    Ok(())
}

/// Symbolic form of the power-sum identity: over `m` formal variables,
/// `sum_k X_k^N / prod_{j != k} (X_k - X_j)` reduces to the complete
/// homogeneous sum of degree `N - m + 1`. Returns both sides and the verdict.
pub fn hom_sym_identity_symbolic(m: usize, n_deg: u32) -> (RationalFn, MultiPoly, bool) {
    let vars: Vec<MultiPoly> = (0..m).map(|i| MultiPoly::var(m, i)).collect();
    let mut lhs = RationalFn::zero(m);
    for k in 0..m {
        let mut factors = Vec::new();
        for j in 0..m {
            if j != k {
                let mut coords = vec![BigRational::zero(); m];
                coords[k] = BigRational::one();
                coords[j] = -BigRational::one();
                factors.push((Vector::new(coords), 1));
            }
        }
        lhs = lhs.add(&RationalFn::over_linear_factors(
            vars[k].pow(n_deg),
            &factors,
        ));
    }
    let rhs = complete_hom(&vars, n_deg as i64 - m as i64 + 1);
    let verdict = lhs.as_poly() == Some(&rhs);
    (lhs, rhs, verdict)
}

/// Numeric form of the same identity at distinct rational values.
pub fn hom_sym_identity_numeric(
    values: &[BigRational],
    n_deg: u32,
) -> Result<(BigRational, BigRational, bool)> {
    check_distinct(values)?;
    let m = values.len();
    let mut lhs = BigRational::zero();
    for k in 0..m {
        let mut num = BigRational::one();
        for _ in 0..n_deg {
            num *= &values[k];
        }
        let mut den = BigRational::one();
        for j in 0..m {
            if j != k {
                den *= &values[k] - &values[j];
            }
        }
        lhs += num / den;
    }
    let rhs = complete_hom_scalars(values, n_deg as i64 - m as i64 + 1);
    let ok = lhs == rhs;
    Ok((lhs, rhs, ok))
}

/// `sum_k P(X_k) / prod_{j != k}(X_k - X_j)` for polynomial-valued `P`;
/// the sum always reduces to a polynomial. Values must be polynomials of
/// degree at most one with pairwise differences nonzero.
pub fn partial_fraction_reduce(p: &UniPoly, values: &[MultiPoly]) -> Result<MultiPoly> {
    let total = finite_integral_of(values, &|k| p.eval(&values[k]))?;
    total
        .as_poly()
        .cloned()
        .ok_or_else(|| GkmError::Invalid("partial fraction sum failed to reduce".into()))
}

/// Difference of two affine-linear polynomials as a covector; errors when
/// the inputs collide or are not linear.
fn linear_difference(a: &MultiPoly, b: &MultiPoly) -> Result<Vector> {
    let diff = a.sub(b);
    if diff.is_zero() {
        return Err(GkmError::GenericityViolation(
            "repeated values in a finite integral".into(),
        ));
    }
    if diff.degree() != Some(1) {
        return Err(GkmError::Invalid(
            "finite integrals need values with linear differences".into(),
        ));
    }
    let nv = diff.nvars();
    let mut coords = vec![BigRational::zero(); nv];
    for (mon, c) in diff.terms() {
        match mon.degree() {
            0 => {
                return Err(GkmError::Invalid(
                    "finite integrals need homogeneous linear differences".into(),
                ))
            }
            1 => {
                let i = mon.0.iter().position(|&e| e == 1).unwrap();
                coords[i] = c.clone();
            }
            _ => unreachable!(),
        }
    }
    Ok(Vector::new(coords))
}

fn finite_integral_of(
    taus: &[MultiPoly],
    value_at: &dyn Fn(usize) -> MultiPoly,
) -> Result<RationalFn> {
    let nvars = taus.first().map(MultiPoly::nvars).unwrap_or(0);
    let mut total = RationalFn::zero(nvars);
    for k in 0..taus.len() {
        let mut factors = Vec::new();
        for j in 0..taus.len() {
            if j != k {
                factors.push((linear_difference(&taus[k], &taus[j])?, 1));
            }
        }
        total = total.add(&RationalFn::over_linear_factors(value_at(k), &factors));
    }
    Ok(total)
}

/// The finite-set integral `sum_k g(v_k) / prod_{j != k}(tau_k - tau_j)`.
pub fn finite_integral(taus: &[MultiPoly], g: &[MultiPoly]) -> Result<RationalFn> {
    assert_eq!(taus.len(), g.len());
    finite_integral_of(taus, &|k| g[k].clone())
}

/// Row polynomials of the closed-form Vandermonde inverse: `P_i` with
/// `(A^{-1})_{ij} = P_i(X_j) / prod_{k != j}(X_j - X_k)`, here 0-indexed as
/// `rows[i] = P_{i+1}`. Works over any commutative value ring.
pub fn inverse_rows(values: &[MultiPoly]) -> Vec<UniPoly> {
    let m = values.len();
    let nvars = values.first().map(MultiPoly::nvars).unwrap_or(0);
    let sigma = elem_sym(values);
    (1..=m)
        .map(|i| {
            let mut coeffs = Vec::with_capacity(m - i + 1);
            for k in 0..=(m - i) {
                let sign = if (m + i + k).is_multiple_of(2) { 1 } else { -1 };
                coeffs.push(sigma[m - i - k].scale(&rat(sign)));
            }
            UniPoly::new(if coeffs.is_empty() {
                vec![MultiPoly::zero(nvars)]
            } else {
                coeffs
            })
        })
        .collect()
}

#[derive(Debug)]
pub struct VandermondeInverse {
    pub matrix: RatMatrix,
    /// Coefficient lists of the row polynomials `P_1..P_m`.
    pub row_formulas: Vec<Vec<BigRational>>,
}

/// Inverse of the Vandermonde matrix `A[j][k] = X_j^k` at distinct rational
/// values, computed three ways (direct elimination, the signed
/// sub-symmetric formula, and the expanded row polynomials) with all three
/// asserted equal, plus `A * A^{-1} = I` and the product-of-differences
/// determinant.
pub fn vandermonde_inverse(values: &[BigRational]) -> Result<VandermondeInverse> {
    check_distinct(values)?;
    let m = values.len();
    let a = RatMatrix::new(
        values
            .iter()
            .map(|x| {
                let mut row = Vec::with_capacity(m);
                let mut p = BigRational::one();
                for _ in 0..m {
                    row.push(p.clone());
                    p *= x;
                }
                row
            })
            .collect(),
        m,
    );

    // way 1: direct elimination
    let direct = a.inverse().ok_or_else(|| {
        GkmError::Invalid("vandermonde matrix unexpectedly singular".into())
    })?;

    // determinant cross-check: prod_{k < l} (X_l - X_k)
    let mut det = BigRational::one();
    for k in 0..m {
        for l in (k + 1)..m {
            det *= &values[l] - &values[k];
        }
    }
    if a.det() != det {
        return Err(GkmError::Invalid("determinant mismatch".into()));
    }

    // way 2: signed sub-symmetric polynomials sigma^j (values without X_j)
    let mut by_sigma = RatMatrix::zero(m, m);
    for j in 0..m {
        let without: Vec<BigRational> = values
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != j)
            .map(|(_, v)| v.clone())
            .collect();
        let sig_j = elem_sym_scalars(&without);
        let mut den = BigRational::one();
        for k in 0..m {
            if k != j {
                den *= &values[j] - &values[k];
            }
        }
        for i in 1..=m {
            let sign = if (m + i).is_multiple_of(2) { rat(1) } else { rat(-1) };
            by_sigma.rows[i - 1][j] = sign * &sig_j[m - i] / &den;
        }
    }

    // way 3: the expanded row polynomials over the full value list
    let sigma = elem_sym_scalars(values);
    let mut row_formulas = Vec::with_capacity(m);
    for i in 1..=m {
        let mut coeffs = Vec::with_capacity(m - i + 1);
        for k in 0..=(m - i) {
            let sign = if (m + i + k).is_multiple_of(2) { rat(1) } else { rat(-1) };
            coeffs.push(sign * &sigma[m - i - k]);
        }
        row_formulas.push(coeffs);
    }
    let mut by_rows = RatMatrix::zero(m, m);
    for j in 0..m {
        let mut den = BigRational::one();
        for k in 0..m {
            if k != j {
                den *= &values[j] - &values[k];
            }
        }
        for (i, formula) in row_formulas.iter().enumerate() {
            let mut acc = BigRational::zero();
            let mut pow = BigRational::one();
            for c in formula {
                acc += c * &pow;
                pow *= &values[j];
            }
            by_rows.rows[i][j] = acc / &den;
        }
    }

    if direct != by_sigma || direct != by_rows {
        return Err(GkmError::Invalid(
            "vandermonde inverse formulas disagree".into(),
        ));
    }
    if a.mul(&direct) != RatMatrix::identity(m) {
        return Err(GkmError::Invalid("inverse does not invert".into()));
    }
    Ok(VandermondeInverse {
        matrix: direct,
        row_formulas,
    })
}

/// Expresses a symmetric polynomial in the elementary symmetric polynomials
/// of its variables: the result has one "variable" per elementary symmetric
/// polynomial. Errors when the input is not symmetric.
pub fn to_elementary(p0: &MultiPoly) -> Result<MultiPoly> {
    let m = p0.nvars();
    // symmetry check on adjacent transpositions
    for i in 0..m.saturating_sub(1) {
        let mut images: Vec<MultiPoly> = (0..m).map(|k| MultiPoly::var(m, k)).collect();
        images.swap(i, i + 1);
        if p0.subst_all(&images) != *p0 {
            return Err(GkmError::Invalid(format!(
                "polynomial is not symmetric (transposition {i},{}))",
                i + 1
            )));
        }
    }
    let elementary: Vec<MultiPoly> = elem_sym(
        &(0..m).map(|k| MultiPoly::var(m, k)).collect::<Vec<_>>(),
    )[1..]
        .to_vec();
    let mut rest = p0.clone();
    let mut result = MultiPoly::zero(m);
    while !rest.is_zero() {
        let (lead, coeff) = rest.leading().unwrap();
        let lambda = lead.0.clone();
        if lambda.windows(2).any(|w| w[0] < w[1]) {
            return Err(GkmError::Invalid(
                "leading exponent not dominant; polynomial is not symmetric".into(),
            ));
        }
        // e_1^{l_1 - l_2} e_2^{l_2 - l_3} ... e_m^{l_m}
        let mut e_exps = vec![0u32; m];
        for i in 0..m {
            let next = if i + 1 < m { lambda[i + 1] } else { 0 };
            e_exps[i] = lambda[i] - next;
        }
        let c = coeff.clone();
        result = result.add(&MultiPoly::from_terms(
            m,
            vec![(Monomial(e_exps.clone()), c.clone())],
        ));
        let mut expanded = MultiPoly::constant(m, c);
        for (i, &k) in e_exps.iter().enumerate() {
            if k > 0 {
                expanded = expanded.mul(&elementary[i].pow(k));
            }
        }
        rest = rest.sub(&expanded);
    }
    Ok(result)
}

/// Extends a symmetric polynomial in `m-1` variables to a one-variable
/// polynomial over the symmetric functions of `m` variables: substituting
/// the last variable back recovers the input. Constructive through
/// `sigma_k(without X_m) = sum_l (-1)^l sigma_{k-l} X_m^l`.
pub fn symmetric_extend(p0: &MultiPoly) -> Result<UniPoly> {
    let m = p0.nvars() + 1;
    let in_elementary = to_elementary(p0)?;
    // the substituted elementary symmetric polynomials as Y-polynomials
    let sigma_full = elem_sym(&(0..m).map(|k| MultiPoly::var(m, k)).collect::<Vec<_>>());
    let subs: Vec<UniPoly> = (1..m)
        .map(|k| {
            let coeffs: Vec<MultiPoly> = (0..=k)
                .map(|l| {
                    let sign = if l % 2 == 0 { 1 } else { -1 };
                    sigma_full[k - l].scale(&rat(sign))
                })
                .collect();
            UniPoly::new(coeffs)
        })
        .collect();
    let mut out = UniPoly::new(vec![MultiPoly::zero(m)]);
    for (mon, c) in in_elementary.terms() {
        let mut term = UniPoly::new(vec![MultiPoly::constant(m, c.clone())]);
        for (i, &e) in mon.0.iter().enumerate() {
            for _ in 0..e {
                term = term.mul(&subs[i]);
            }
        }
        out = out.add(&term);
    }
    // verify the defining property exactly: P(X_m) = P0 lifted to m variables
    let lift = p0.subst_all(
        &(0..m - 1)
            .map(|k| MultiPoly::var(m, k))
            .collect::<Vec<_>>(),
    );
    if out.eval(&MultiPoly::var(m, m - 1)) != lift {
        return Err(GkmError::Invalid(
            "symmetric extension failed verification".into(),
        ));
    }
    Ok(out)
}

/// Membership in the finite-set cohomology: `g` decomposes as
/// `sum_{k < |values|} g_k tau^k` with polynomial coefficients iff `g` lies
/// in the space; returns the coefficients when it does. The closed-form
/// inverse rows produce the candidate, an independent coefficient-wise
/// linear solve cross-checks it, and re-substitution certifies the result.
pub fn finite_coh_decompose(
    taus: &[MultiPoly],
    g: &[MultiPoly],
) -> Result<Option<Vec<MultiPoly>>> {
    assert_eq!(taus.len(), g.len());
    let d = taus.len();
    let nvars = taus.first().map(MultiPoly::nvars).unwrap_or(0);
    if d == 0 {
        return Ok(Some(vec![]));
    }
    let rows = inverse_rows(taus);
    let mut coeffs = Vec::with_capacity(d);
    let mut all_polynomial = true;
    for row in &rows {
        let gi = finite_integral_of(taus, &|k| g[k].mul(&row.eval(&taus[k])))?;
        match gi.as_poly() {
            Some(p) => coeffs.push(p.clone()),
            None => {
                all_polynomial = false;
                break;
            }
        }
    }
    let direct = decompose_direct(taus, g);
    match (all_polynomial, &direct) {
        (true, Some(other)) => {
            if &coeffs != other {
                return Err(GkmError::Invalid(
                    "decomposition routes disagree".into(),
                ));
            }
            // certify by re-substitution
            for (j, tau) in taus.iter().enumerate() {
                let mut acc = MultiPoly::zero(nvars);
                let mut pow = MultiPoly::one(nvars);
                for c in &coeffs {
                    acc = acc.add(&c.mul(&pow));
                    pow = pow.mul(tau);
                }
                if acc != g[j] {
                    return Err(GkmError::Invalid(
                        "decomposition fails re-substitution".into(),
                    ));
                }
            }
            Ok(Some(coeffs))
        }
        (false, None) => Ok(None),
        _ => Err(GkmError::Invalid(
            "decomposition routes disagree on membership".into(),
        )),
    }
}

/// Independent route: solve for polynomial coefficients degree by degree.
fn decompose_direct(taus: &[MultiPoly], g: &[MultiPoly]) -> Option<Vec<MultiPoly>> {
    let d = taus.len();
    let nvars = taus.first().map(MultiPoly::nvars).unwrap_or(0);
    let degrees: std::collections::BTreeSet<u32> = g
        .iter()
        .flat_map(|p| p.terms().map(|(mon, _)| mon.degree()).collect::<Vec<_>>())
        .collect();
    let mut out = vec![MultiPoly::zero(nvars); d];
    for &big_d in &degrees {
        // unknowns: coefficients of the degree-(D - k) part of g_k
        let mut layout = Vec::new(); // (k, monomial)
        for (k, _) in taus.iter().enumerate().take(d) {
            if big_d >= k as u32 {
                for mon in monomials_of_degree(nvars, big_d - k as u32) {
                    layout.push((k, mon));
                }
            }
        }
        let tau_pows: Vec<Vec<MultiPoly>> = taus
            .iter()
            .map(|t| {
                let mut pows = vec![MultiPoly::one(nvars)];
                for k in 1..d {
                    pows.push(pows[k - 1].mul(t));
                }
                pows
            })
            .collect();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for (j, gj) in g.iter().enumerate() {
            let target = gj.homogeneous_component(big_d);
            let mut row_of: std::collections::BTreeMap<Monomial, usize> = Default::default();
            let mut local_rows: Vec<Vec<BigRational>> = Vec::new();
            let mut local_rhs: Vec<BigRational> = Vec::new();
            for (col, (k, mon)) in layout.iter().enumerate() {
                let contrib = MultiPoly::from_terms(
                    nvars,
                    vec![(mon.clone(), BigRational::one())],
                )
                .mul(&tau_pows[j][*k]);
                for (cm, cc) in contrib.terms() {
                    let r = *row_of.entry(cm.clone()).or_insert_with(|| {
                        local_rows.push(vec![BigRational::zero(); layout.len()]);
                        local_rhs.push(BigRational::zero());
                        local_rows.len() - 1
                    });
                    local_rows[r][col] += cc;
                }
            }
            for (tm, tc) in target.terms() {
                let r = *row_of.entry(tm.clone()).or_insert_with(|| {
                    local_rows.push(vec![BigRational::zero(); layout.len()]);
                    local_rhs.push(BigRational::zero());
                    local_rows.len() - 1
                });
                local_rhs[r] = tc.clone();
            }
            rows.extend(local_rows);
            rhs.extend(local_rhs);
        }
        let sol = solve_affine(&RatMatrix::new(rows, layout.len()), &rhs)?;
        for (col, (k, mon)) in layout.iter().enumerate() {
            if !sol.particular[col].is_zero() {
                out[*k] = out[*k].add(&MultiPoly::from_terms(
                    nvars,
                    vec![(mon.clone(), sol.particular[col].clone())],
                ));
            }
        }
    }
    Some(out)
}

/// Dimension of the degree-`m` piece of the finite-set cohomology, verified
/// by exhibiting the monomial-times-power basis and checking its rank.
pub fn finite_coh_dim_check(taus: &[MultiPoly], m: u32) -> (usize, usize, bool) {
    let d = taus.len();
    let nvars = taus.first().map(MultiPoly::nvars).unwrap_or(0);
    let formula: usize = (0..d)
        .map(|k| graded_dim(m as i64 - k as i64, nvars))
        .sum();
    // rows: for each k <= m, each monomial of degree m-k, the evaluation
    // vector (coefficients of mon * tau_j^k across j)
    let eval_monomials = monomials_of_degree(nvars, m);
    let mut rows = Vec::new();
    for k in 0..d.min(m as usize + 1) {
        for mon in monomials_of_degree(nvars, m - k as u32) {
            let base = MultiPoly::from_terms(nvars, vec![(mon, BigRational::one())]);
            let mut row = Vec::with_capacity(taus.len() * eval_monomials.len());
            for tau in taus {
                let val = base.mul(&tau.pow(k as u32));
                for em in &eval_monomials {
                    row.push(val.coeff(em));
                }
            }
            rows.push(row);
        }
    }
    let rank = RatMatrix::new(rows, taus.len() * eval_monomials.len()).rank();
    (rank, formula, rank == formula)
}
