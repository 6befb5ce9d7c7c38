use std::collections::BTreeMap;

use num::rational::BigRational;
use num::{One, Zero};

use super::{MultiPoly, SpaceCtx, Vector};

/// A rational function whose denominator is a product of linear forms. This
/// covers every denominator the integration operators produce (products of
/// axial values and slope differences), and keeps reduction exact: a linear
/// form divides the numerator or it does not.
///
/// Stored reduced: denominator factors are primitive covectors (first
/// nonzero coordinate positive, coprime integer coordinates) with all scalars
/// folded into the numerator, and no factor divides the numerator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalFn {
    num: MultiPoly,
    den: BTreeMap<Vector, u32>,
}

impl RationalFn {
    pub fn zero(nvars: usize) -> Self {
        RationalFn {
            num: MultiPoly::zero(nvars),
            den: BTreeMap::new(),
        }
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        RationalFn {
            num: p,
            den: BTreeMap::new(),
        }
    }

    /// `num / prod(factors)`. Each factor is a nonzero covector, interpreted
    /// as its linear form; scalars are normalized away into the numerator.
    pub fn over_linear_factors(num: MultiPoly, factors: &[(Vector, u32)]) -> Self {
        let mut scale = BigRational::one();
        let mut den: BTreeMap<Vector, u32> = BTreeMap::new();
        for (v, mult) in factors {
            if *mult == 0 {
                continue;
            }
            assert!(!v.is_zero(), "zero linear form in denominator");
            let prim = v.primitive();
            // v = c * prim with c = v_i / prim_i at any nonzero coordinate
            let i = prim.coords.iter().position(|c| !c.is_zero()).unwrap();
            let c = &v.coords[i] / &prim.coords[i];
            for _ in 0..*mult {
                scale *= &c;
            }
            *den.entry(prim).or_insert(0) += mult;
        }
        let mut out = RationalFn {
            num: num.scale(&(BigRational::one() / scale)),
            den,
        };
        out.reduce();
        out
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den_factors(&self) -> &BTreeMap<Vector, u32> {
        &self.den
    }

    /// The denominator as an expanded polynomial (leading coefficient
    /// positive by the primitivity of the factors).
    pub fn den_poly(&self) -> MultiPoly {
        let mut d = MultiPoly::one(self.nvars());
        for (v, mult) in &self.den {
            d = d.mul(&MultiPoly::linear_form(v).pow(*mult));
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_poly(&self) -> Option<&MultiPoly> {
        self.den.is_empty().then_some(&self.num)
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let factors: Vec<Vector> = self.den.keys().cloned().collect();
        for f in factors {
            while self.den.get(&f).copied().unwrap_or(0) > 0 {
                match self.num.div_exact_linear(&f).unwrap() {
                    Some(q) => {
                        self.num = q;
                        let m = self.den.get_mut(&f).unwrap();
                        *m -= 1;
                        if *m == 0 {
                            self.den.remove(&f);
                        }
                    }
                    None => break,
                }
            }
        }
    }

    pub fn neg(&self) -> Self {
        RationalFn {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return RationalFn::zero(self.nvars());
        }
        RationalFn {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &RationalFn) -> Self {
        assert_eq!(self.nvars(), other.nvars(), "context mismatch");
        // common denominator = per-factor max multiplicity
        let mut common: BTreeMap<Vector, u32> = self.den.clone();
        for (f, m) in &other.den {
            let e = common.entry(f.clone()).or_insert(0);
            *e = (*e).max(*m);
        }
        let lift = |num: &MultiPoly, den: &BTreeMap<Vector, u32>| {
            let mut n = num.clone();
            for (f, m) in &common {
                let have = den.get(f).copied().unwrap_or(0);
                for _ in have..*m {
                    n = n.mul(&MultiPoly::linear_form(f));
                }
            }
            n
        };
        let num = lift(&self.num, &self.den).add(&lift(&other.num, &other.den));
        let mut out = RationalFn { num, den: common };
        out.reduce();
        out
    }

    pub fn sub(&self, other: &RationalFn) -> Self {
        self.add(&other.neg())
    }

    pub fn mul_poly(&self, p: &MultiPoly) -> Self {
        let mut out = RationalFn {
            num: self.num.mul(p),
            den: self.den.clone(),
        };
        out.reduce();
        out
    }

    pub fn mul(&self, other: &RationalFn) -> Self {
        assert_eq!(self.nvars(), other.nvars(), "context mismatch");
        let mut den = self.den.clone();
        for (f, m) in &other.den {
            *den.entry(f.clone()).or_insert(0) += m;
        }
        let mut out = RationalFn {
            num: self.num.mul(&other.num),
            den,
        };
        out.reduce();
        out
    }

    pub fn display(&self, ctx: &SpaceCtx) -> String {
        if self.is_polynomial() {
            return self.num.display(ctx);
        }
        let den: Vec<String> = self
            .den
            .iter()
            .map(|(f, m)| {
                let base = format!("({})", MultiPoly::linear_form(f).display(ctx));
                if *m == 1 {
                    base
                } else {
                    format!("{base}^{m}")
                }
            })
            .collect();
        format!("({}) / ({})", self.num.display(ctx), den.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{rat, ratq};

    fn x(i: usize) -> MultiPoly {
        MultiPoly::var(2, i)
    }

    #[test]
    fn reduction_cancels_linear_factors() {
        // (x^2 - y^2) / (x - y) reduces to the polynomial x + y
        let num = x(0).pow(2).sub(&x(1).pow(2));
        let f = RationalFn::over_linear_factors(num, &[(Vector::from_ints(&[1, -1]), 1)]);
        assert!(f.is_polynomial());
        assert_eq!(f.as_poly().unwrap(), &x(0).add(&x(1)));
    }

    #[test]
    fn scalar_factors_fold_into_numerator() {
        // x / (2x) = 1/2
        let f = RationalFn::over_linear_factors(x(0), &[(Vector::from_ints(&[2, 0]), 1)]);
        assert!(f.is_polynomial());
        assert_eq!(f.as_poly().unwrap(), &MultiPoly::constant(2, ratq(1, 2)));
    }

    #[test]
    fn antisymmetric_sum_vanishes() {
        // c/a + c/(-a) = 0
        let c = MultiPoly::constant(2, rat(7));
        let a = Vector::from_ints(&[1, 0]);
        let f = RationalFn::over_linear_factors(c.clone(), &[(a.clone(), 1)]);
        let g = RationalFn::over_linear_factors(c, &[(a.neg(), 1)]);
        assert!(f.add(&g).is_zero());
    }

    #[test]
    fn addition_finds_common_denominator() {
        // 1/x + 1/y = (x + y)/(x y)
        let one = MultiPoly::one(2);
        let fx = RationalFn::over_linear_factors(one.clone(), &[(Vector::from_ints(&[1, 0]), 1)]);
        let fy = RationalFn::over_linear_factors(one, &[(Vector::from_ints(&[0, 1]), 1)]);
        let s = fx.add(&fy);
        assert!(!s.is_polynomial());
        assert_eq!(s.num(), &x(0).add(&x(1)));
        assert_eq!(s.den_poly(), x(0).mul(&x(1)));
    }

    #[test]
    fn product_reduces_across_factors() {
        // (x/(y)) * (y/(x)) = 1
        let f = RationalFn::over_linear_factors(x(0), &[(Vector::from_ints(&[0, 1]), 1)]);
        let g = RationalFn::over_linear_factors(x(1), &[(Vector::from_ints(&[1, 0]), 1)]);
        let p = f.mul(&g);
        assert_eq!(p.as_poly().unwrap(), &MultiPoly::one(2));
    }

    #[test]
    fn zero_clears_denominator() {
        let f = RationalFn::over_linear_factors(x(0), &[(Vector::from_ints(&[0, 1]), 2)]);
        let z = f.sub(&f);
        assert!(z.is_zero());
        assert!(z.is_polynomial());
    }
}
