//! The ring R_k = K[x,y]/<x^k>.
//!
//! An element is stored as an explicit valuation v together with a
//! valuation-zero part: P = x^v * body, where body is a vector of series of
//! precision k - v indexed by y-degree. The zero polynomial has v = k and an
//! empty body. Canonical representatives keep every coefficient of x-degree
//! below k - v, the top y-coefficient nonzero, and at least one y-coefficient
//! with a nonzero constant term.

use crate::error::{Error, Result};
use crate::field::{FieldElem, PrimeField};
use crate::ntt;
use crate::upoly::{TruncSeries, UPoly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RkPoly {
    k: usize,
    v: usize,
    body: Vec<TruncSeries>,
}

impl RkPoly {
    pub fn zero(k: usize) -> Self {
        RkPoly { k, v: k, body: Vec::new() }
    }

    pub fn one(k: usize) -> Self {
        RkPoly::from_series(k, TruncSeries::one(k))
    }

    /// `x^e` in R_k.
    pub fn x_pow(k: usize, e: usize) -> Self {
        if e >= k {
            return RkPoly::zero(k);
        }
        RkPoly { k, v: e, body: vec![TruncSeries::one(k - e)] }
    }

    /// Lift of a y-polynomial (constant in x).
    pub fn from_upoly(k: usize, p: &UPoly) -> Self {
        let body = p
            .coeffs()
            .iter()
            .map(|&c| TruncSeries::constant(k, c))
            .collect();
        RkPoly::canonical(k, 0, body)
    }

    /// A y-free element given by its series of coefficients.
    pub fn from_series(k: usize, s: TruncSeries) -> Self {
        RkPoly::canonical(k, 0, vec![s.with_precision(k)])
    }

    /// Builds from y-indexed series of precision `k` (absolute coefficients)
    /// and canonicalizes.
    pub fn from_y_series(k: usize, body: Vec<TruncSeries>) -> Self {
        RkPoly::canonical(k, 0, body)
    }

    /// Builds from a term list `(coefficient, x_exp, y_exp)`. Coefficients
    /// must be reduced; terms at x_exp >= k are dropped, duplicates summed.
    pub fn from_terms(f: &PrimeField, k: usize, terms: &[(FieldElem, usize, usize)]) -> Self {
        let dy = terms
            .iter()
            .filter(|t| t.0 != 0 && t.1 < k)
            .map(|t| t.2)
            .max();
        let Some(dy) = dy else { return RkPoly::zero(k) };
        let mut body = vec![TruncSeries::zero(k); dy + 1];
        for &(c, xe, ye) in terms {
            if c == 0 || xe >= k {
                continue;
            }
            let mut coeffs = body[ye].coeffs().to_vec();
            coeffs[xe] = f.add(coeffs[xe], c);
            body[ye] = TruncSeries::from_coeffs(k, coeffs);
        }
        RkPoly::canonical(k, 0, body)
    }

    /// Canonicalizes `x^base * body` where each series has precision `k - base`.
    fn canonical(k: usize, base: usize, mut body: Vec<TruncSeries>) -> Self {
        debug_assert!(body.iter().all(|s| s.precision() == k - base));
        while body.last().map_or(false, |s| s.is_zero()) {
            body.pop();
        }
        if body.is_empty() {
            return RkPoly::zero(k);
        }
        let w = body.iter().map(|s| s.valuation()).min().unwrap();
        if w == 0 {
            return RkPoly { k, v: base, body };
        }
        let v = base + w;
        if v >= k {
            return RkPoly::zero(k);
        }
        let mut shifted: Vec<TruncSeries> = body.iter().map(|s| s.shift_down(w)).collect();
        while shifted.last().map_or(false, |s| s.is_zero()) {
            shifted.pop();
        }
        if shifted.is_empty() {
            return RkPoly::zero(k);
        }
        RkPoly { k, v, body: shifted }
    }

    pub fn precision(&self) -> usize {
        self.k
    }

    /// The valuation, with v(0) = k by convention.
    pub fn valuation(&self) -> usize {
        self.v
    }

    pub fn is_zero(&self) -> bool {
        self.v == self.k
    }

    /// Degree in y; `None` for the zero polynomial.
    pub fn deg_y(&self) -> Option<usize> {
        self.body.len().checked_sub(1)
    }

    /// The valuation-zero part `P / x^v` (series of precision k - v).
    pub fn body(&self) -> &[TruncSeries] {
        &self.body
    }

    /// Coefficient of `x^xe y^ye`.
    pub fn coeff(&self, xe: usize, ye: usize) -> FieldElem {
        if self.is_zero() || xe < self.v || ye >= self.body.len() {
            return 0;
        }
        self.body[ye].coeff(xe - self.v)
    }

    /// The slice operator: coefficient of x^i as a polynomial in y.
    pub fn xi(&self, i: usize) -> UPoly {
        if self.is_zero() || i < self.v || i >= self.k {
            return UPoly::zero();
        }
        UPoly::from_coeffs(self.body.iter().map(|s| s.coeff(i - self.v)).collect())
    }

    /// Truncation at absolute x-degree `m`: keeps monomials with x-exponent
    /// below `m`.
    pub fn truncate_x(&self, m: usize) -> Self {
        if self.is_zero() || m >= self.k {
            return self.clone();
        }
        if m <= self.v {
            return RkPoly::zero(self.k);
        }
        let body = self
            .body
            .iter()
            .map(|s| s.truncate_degree(m - self.v))
            .collect();
        RkPoly::canonical(self.k, self.v, body)
    }

    /// The projection: truncation at n terms past the valuation,
    /// `P rem_x x^(v+n)` capped at the ring precision.
    pub fn pi(&self, n: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.truncate_x((self.v + n).min(self.k))
    }

    /// Reinterprets in R_k2 for k2 <= k, truncating.
    pub fn reduce_precision(&self, k2: usize) -> Self {
        debug_assert!(k2 <= self.k);
        if self.v >= k2 {
            return RkPoly::zero(k2);
        }
        let body = self
            .body
            .iter()
            .map(|s| s.with_precision(k2 - self.v))
            .collect();
        RkPoly::canonical(k2, self.v, body)
    }

    /// Reinterprets the canonical representative in R_k2 for k2 >= k.
    pub fn lift_precision(&self, k2: usize) -> Self {
        debug_assert!(k2 >= self.k);
        if self.is_zero() {
            return RkPoly::zero(k2);
        }
        let body = self
            .body
            .iter()
            .map(|s| s.with_precision(k2 - self.v))
            .collect();
        RkPoly::canonical(k2, self.v, body)
    }

    pub fn add(&self, f: &PrimeField, other: &Self) -> Result<Self> {
        self.check_precision(other)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let v = self.v.min(other.v);
        let prec = self.k - v;
        let ny = self.body.len().max(other.body.len());
        let mut body = Vec::with_capacity(ny);
        for j in 0..ny {
            let a = self.y_coeff_at(j, v, prec);
            let b = other.y_coeff_at(j, v, prec);
            body.push(a.add(f, &b));
        }
        Ok(RkPoly::canonical(self.k, v, body))
    }

    pub fn sub(&self, f: &PrimeField, other: &Self) -> Result<Self> {
        self.add(f, &other.neg(f))
    }

    pub fn neg(&self, f: &PrimeField) -> Self {
        RkPoly {
            k: self.k,
            v: self.v,
            body: self.body.iter().map(|s| s.neg(f)).collect(),
        }
    }

    /// Series coefficient of y^j re-based at valuation `base` and precision
    /// `prec`, i.e. the coefficient of y^j in `P / x^base`.
    fn y_coeff_at(&self, j: usize, base: usize, prec: usize) -> TruncSeries {
        debug_assert!(base <= self.v);
        match self.body.get(j) {
            None => TruncSeries::zero(prec),
            Some(s) => s.with_precision(prec).shift_up(self.v - base),
        }
    }

    pub fn scale(&self, f: &PrimeField, c: FieldElem) -> Self {
        if c == 0 {
            return RkPoly::zero(self.k);
        }
        RkPoly {
            k: self.k,
            v: self.v,
            body: self.body.iter().map(|s| s.scale(f, c)).collect(),
        }
    }

    /// Multiplication by `x^e`.
    pub fn mul_x_pow(&self, e: usize) -> Self {
        if self.is_zero() || self.v + e >= self.k {
            return RkPoly::zero(self.k);
        }
        let v = self.v + e;
        let body = self
            .body
            .iter()
            .map(|s| s.with_precision(self.k - v))
            .collect();
        RkPoly::canonical(self.k, v, body)
    }

    /// The canonical representative of `P / x^v`: same body at valuation 0,
    /// zero-padded to full precision.
    pub fn shift_to_valuation_zero(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let body = self.body.iter().map(|s| s.with_precision(self.k)).collect();
        RkPoly::canonical(self.k, 0, body)
    }

    /// Exact division by `x^e` for `e <= v`, taking the canonical
    /// (zero-padded) representative.
    pub fn div_x_pow(&self, e: usize) -> Self {
        if self.is_zero() || e == 0 {
            return self.clone();
        }
        debug_assert!(e <= self.v);
        let v = self.v - e;
        let body = self
            .body
            .iter()
            .map(|s| s.with_precision(self.k - v))
            .collect();
        RkPoly::canonical(self.k, v, body)
    }

    /// Product in R_k via Kronecker substitution: both bodies are packed into
    /// univariate polynomials with stride 2m - 1 where m is the output body
    /// precision, so product blocks cannot overlap.
    pub fn mul(&self, f: &PrimeField, other: &Self) -> Result<Self> {
        self.check_precision(other)?;
        if self.is_zero() || other.is_zero() || self.v + other.v >= self.k {
            return Ok(RkPoly::zero(self.k));
        }
        let v = self.v + other.v;
        let m = self.k - v;
        let body = body_mul(f, &self.body, &other.body, m);
        // Gauss: the product of two valuation-zero bodies has valuation zero.
        let out = RkPoly::canonical(self.k, v, body);
        debug_assert_eq!(out.valuation(), v);
        Ok(out)
    }

    /// Whether the leading y-coefficient is `c * x^v` for a nonzero constant c.
    pub fn is_normal(&self) -> bool {
        match self.body.last() {
            None => false,
            Some(s) => s.valuation() == 0 && s.coeffs().iter().skip(1).all(|&c| c == 0),
        }
    }

    /// Leading y-coefficient of the body (constant for normal polynomials).
    pub fn leading_constant(&self) -> Option<FieldElem> {
        if self.is_normal() {
            Some(self.body.last().unwrap().coeff(0))
        } else {
            None
        }
    }

    /// Euclidean division in y by a normal polynomial: `self = U * P + R`
    /// with deg_y R < deg_y P, U the unique quotient with x-degree below
    /// k - v(P), and R unique. Requires v(self) >= v(P).
    pub fn divrem_y(&self, f: &PrimeField, div: &Self) -> Result<(Self, Self)> {
        self.check_precision(div)?;
        if !div.is_normal() {
            return Err(Error::NotNormal);
        }
        if self.valuation() < div.valuation() {
            return Err(Error::ValuationTooLow);
        }
        if self.is_zero() {
            return Ok((RkPoly::zero(self.k), RkPoly::zero(self.k)));
        }
        let dv = div.deg_y().unwrap();
        let m = self.k - div.v; // working precision of the division
        let lc_inv = f.inv(div.leading_constant().unwrap())?;

        // Dividend re-based at x^{v(div)}: series of precision m per y-degree.
        let mut rem: Vec<TruncSeries> = (0..self.body.len())
            .map(|j| self.y_coeff_at(j, div.v, m))
            .collect();
        if rem.len() <= dv {
            return Ok((RkPoly::zero(self.k), self.clone()));
        }
        let mut quot: Vec<TruncSeries> = vec![TruncSeries::zero(m); rem.len() - dv];
        for j in (dv..rem.len()).rev() {
            let factor = rem[j].scale(f, lc_inv);
            if factor.is_zero() {
                continue;
            }
            for (i, ds) in div.body.iter().enumerate() {
                let t = factor.mul(f, &ds.with_precision(m));
                rem[j - dv + i] = rem[j - dv + i].sub(f, &t);
            }
            quot[j - dv] = factor;
        }
        rem.truncate(dv);
        let q = RkPoly::canonical_padded(self.k, quot);
        let r = RkPoly::canonical(self.k, div.v, rem);
        Ok((q, r))
    }

    /// Canonicalizes a body of short series (precision <= k) given at
    /// valuation 0, zero-padding to full precision.
    fn canonical_padded(k: usize, body: Vec<TruncSeries>) -> Self {
        let padded = body.into_iter().map(|s| s.with_precision(k)).collect();
        RkPoly::canonical(k, 0, padded)
    }

    /// Remainder of the Euclidean division in y.
    pub fn rem_y(&self, f: &PrimeField, div: &Self) -> Result<Self> {
        Ok(self.divrem_y(f, div)?.1)
    }

    /// Normalization P = Lc * N with N normal of the same valuation and Lc a
    /// unit with constant term 1, both computed to `n` x-terms (Hensel lifting
    /// with doubling precision). Requires 1 <= n <= k - v(P).
    pub fn normalize(&self, f: &PrimeField, n: usize) -> Result<(Self, Self)> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        debug_assert!(n >= 1 && n <= self.k - self.v);
        let (lc_body, t_body) = normalize_body(f, &self.body, n);
        let lc = RkPoly::canonical_padded(self.k, lc_body);
        let nrm = RkPoly::canonical(
            self.k,
            self.v,
            t_body.into_iter().map(|s| s.with_precision(self.k - self.v)).collect(),
        );
        Ok((lc, nrm))
    }

    /// Formal partial derivative in x. The result is exact modulo x^(k-1);
    /// its top coefficient slot stays zero.
    pub fn deriv_x(&self, f: &PrimeField) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let terms: Vec<(FieldElem, usize, usize)> = self
            .terms()
            .into_iter()
            .filter(|&(_, xe, _)| xe > 0)
            .map(|(c, xe, ye)| (f.mul(c, f.from_u128(xe as u128)), xe - 1, ye))
            .collect();
        RkPoly::from_terms(f, self.k, &terms)
    }

    /// Formal partial derivative in y.
    pub fn deriv_y(&self, f: &PrimeField) -> Self {
        if self.body.len() <= 1 {
            return RkPoly::zero(self.k);
        }
        let body: Vec<TruncSeries> = self
            .body
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, s)| s.scale(f, f.from_u128(j as u128)))
            .collect();
        RkPoly::canonical(self.k, self.v, body)
    }

    /// Coefficient reversal in y with respect to a declared degree `m >= deg_y`.
    pub fn reciprocal_y(&self, m: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        debug_assert!(m + 1 >= self.body.len());
        let prec = self.k - self.v;
        let mut body = vec![TruncSeries::zero(prec); m + 1];
        for (j, s) in self.body.iter().enumerate() {
            body[m - j] = s.clone();
        }
        RkPoly::canonical(self.k, self.v, body)
    }

    /// Evaluates x at a point, giving a polynomial in y.
    pub fn eval_x(&self, f: &PrimeField, x: FieldElem) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let xv = f.pow(x, self.v as u64);
        UPoly::from_coeffs(
            self.body
                .iter()
                .map(|s| f.mul(xv, s.eval(f, x)))
                .collect(),
        )
    }

    /// Multiplies every y-coefficient by the series (a y-free factor).
    pub fn mul_series(&self, f: &PrimeField, s: &TruncSeries) -> Result<Self> {
        self.mul(f, &RkPoly::from_series(self.k, s.clone()))
    }

    /// Inverse of a unit modulo (modulus, x^prec) by Newton iteration in x,
    /// with every product reduced in y against the normal valuation-zero
    /// modulus so degrees stay bounded. Requires a nonzero constant term.
    pub fn inverse_mod(&self, f: &PrimeField, modulus: &Self, prec: usize) -> Result<Self> {
        let c0 = self.xi(0);
        if self.v != 0 || c0.degree() != Some(0) {
            return Err(Error::ZeroInverse);
        }
        let red = |x: &RkPoly, m: usize| -> Result<RkPoly> {
            Ok(x.rem_y(f, modulus)?.truncate_x(m))
        };
        let mut w = RkPoly::from_upoly(self.k, &UPoly::constant(f.inv(c0.coeff(0))?));
        let two = RkPoly::from_upoly(self.k, &UPoly::constant(2 % f.modulus()));
        let mut m = 1usize;
        while m < prec {
            m = (2 * m).min(prec);
            let uw = red(&self.truncate_x(m).mul(f, &w)?, m)?;
            let corr = two.sub(f, &uw)?;
            w = red(&w.mul(f, &corr)?, m)?;
        }
        Ok(w)
    }

    /// Inverse of a unit of R_k to x-precision `prec` by Newton iteration in x
    /// (no reduction in y, so degrees grow; intended for reference paths).
    pub fn unit_inverse(&self, f: &PrimeField, prec: usize) -> Result<Self> {
        let c0 = self.xi(0);
        if self.v != 0 || c0.degree() != Some(0) {
            return Err(Error::ZeroInverse);
        }
        let mut inv = RkPoly::from_upoly(self.k, &UPoly::constant(f.inv(c0.coeff(0))?));
        let mut m = 1usize;
        let two = RkPoly::from_upoly(self.k, &UPoly::constant(2 % f.modulus()));
        while m < prec {
            m = (2 * m).min(prec);
            let prod = self.truncate_x(m).mul(f, &inv)?;
            let corr = two.sub(f, &prod)?;
            inv = inv.mul(f, &corr)?.truncate_x(m);
        }
        Ok(inv)
    }

    fn check_precision(&self, other: &Self) -> Result<()> {
        if self.k != other.k {
            return Err(Error::PrecisionMismatch { left: self.k, right: other.k });
        }
        Ok(())
    }

    /// Term list `(coeff, x_exp, y_exp)` of the canonical representative.
    pub fn terms(&self) -> Vec<(FieldElem, usize, usize)> {
        let mut out = Vec::new();
        for (j, s) in self.body.iter().enumerate() {
            for (i, &c) in s.coeffs().iter().enumerate() {
                if c != 0 {
                    out.push((c, self.v + i, j));
                }
            }
        }
        out
    }
}

/// Kronecker product of two valuation-zero bodies, truncated to precision `m`.
fn body_mul(f: &PrimeField, a: &[TruncSeries], b: &[TruncSeries], m: usize) -> Vec<TruncSeries> {
    if m == 0 {
        return Vec::new();
    }
    let stride = 2 * m - 1;
    let pack = |body: &[TruncSeries]| {
        let mut packed = vec![0u64; body.len() * stride];
        for (j, s) in body.iter().enumerate() {
            for (i, &c) in s.coeffs().iter().take(m).enumerate() {
                packed[j * stride + i] = c;
            }
        }
        packed
    };
    let pa = pack(a);
    let pb = pack(b);
    let conv = ntt::convolve_mod(&pa, &pb, f.modulus());
    let ny = a.len() + b.len() - 1;
    let mut out = Vec::with_capacity(ny);
    for j in 0..ny {
        let base = j * stride;
        let mut coeffs = vec![0u64; m];
        for (i, c) in coeffs.iter_mut().enumerate() {
            if base + i < conv.len() {
                *c = conv[base + i];
            }
        }
        out.push(TruncSeries::from_coeffs(m, coeffs));
    }
    out
}

/// Hensel lifting of the factorization body = U * T with T normal (constant
/// leading coefficient) and U a unit with constant term 1, to x-precision n.
/// Musser-style doubling: each round solves the linear correction modulo the
/// current T using a Newton-updated inverse of U modulo (T, x^m).
fn normalize_body(
    f: &PrimeField,
    body: &[TruncSeries],
    n: usize,
) -> (Vec<TruncSeries>, Vec<TruncSeries>) {
    let k = n;
    let to_rk = |src: &[TruncSeries], prec: usize| -> RkPoly {
        RkPoly::canonical_padded(
            prec,
            src.iter().map(|s| s.with_precision(prec)).collect(),
        )
    };
    let p = to_rk(body, k);
    debug_assert_eq!(p.valuation(), 0);

    // Precision-1 data: T = constant slice, U = 1.
    let slice0 = p.xi(0);
    let mut t = RkPoly::from_upoly(k, &slice0);
    let mut u = RkPoly::one(k);
    // Inverse of U modulo (T, x^m), maintained by Newton iteration.
    let mut w = RkPoly::one(k);
    let mut m = 1usize;
    while m < n {
        let m2 = (2 * m).min(n);
        // w <- w * (2 - u * w) mod (T, x^m2)
        let uw = u.truncate_x(m2).mul(f, &w).unwrap().rem_y(f, &t).unwrap().truncate_x(m2);
        let two = RkPoly::from_upoly(k, &UPoly::constant(2 % f.modulus()));
        let corr = two.sub(f, &uw).unwrap();
        w = w.mul(f, &corr).unwrap().rem_y(f, &t).unwrap().truncate_x(m2);

        // E = P - U*T mod x^m2, valuation >= m.
        let e = p
            .truncate_x(m2)
            .sub(f, &u.mul(f, &t).unwrap().truncate_x(m2))
            .unwrap();
        debug_assert!(e.is_zero() || e.valuation() >= m);
        // dT = (W * E) rem_y T, truncated; has valuation >= m and low y-degree.
        let e_red = e.rem_y(f, &t).unwrap().truncate_x(m2);
        let dt = w.mul(f, &e_red).unwrap().rem_y(f, &t).unwrap().truncate_x(m2);
        // dU = (E - U*dT) / T exactly.
        let num = e.sub(f, &u.mul(f, &dt).unwrap().truncate_x(m2)).unwrap();
        let (du, rem) = num.divrem_y(f, &t).unwrap();
        debug_assert!(rem.truncate_x(m2).is_zero());
        t = t.add(f, &dt).unwrap();
        u = u.add(f, &du.truncate_x(m2)).unwrap();
        m = m2;
    }
    let collect = |q: &RkPoly, ny: usize| -> Vec<TruncSeries> {
        (0..ny)
            .map(|j| {
                TruncSeries::from_coeffs(
                    n,
                    (0..n).map(|i| q.coeff(i, j)).collect(),
                )
            })
            .collect()
    };
    let dt = t.deg_y().map_or(1, |d| d + 1);
    let du = u.deg_y().map_or(1, |d| d + 1);
    (collect(&u, du), collect(&t, dt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn f7() -> PrimeField {
        PrimeField::new(7).unwrap()
    }

    fn from_terms(f: &PrimeField, k: usize, t: &[(u64, usize, usize)]) -> RkPoly {
        RkPoly::from_terms(f, k, t)
    }

    #[test]
    fn valuation_examples() {
        let f = f7();
        assert_eq!(RkPoly::zero(5).valuation(), 5);
        assert_eq!(from_terms(&f, 5, &[(1, 0, 1), (1, 1, 0)]).valuation(), 0);
        // x^2 y + x^3
        assert_eq!(from_terms(&f, 5, &[(1, 2, 1), (1, 3, 0)]).valuation(), 2);
    }

    #[test]
    fn pi_examples() {
        let f = f7();
        // pi_1(x^2(y+3) + x^4) keeps x-degree < 3
        let p = from_terms(&f, 5, &[(1, 2, 1), (3, 2, 0), (1, 4, 0)]);
        let t = p.pi(1);
        assert_eq!(t, from_terms(&f, 5, &[(1, 2, 1), (3, 2, 0)]));
        assert_eq!(RkPoly::zero(4).pi(3), RkPoly::zero(4));
    }

    #[test]
    fn xi_examples() {
        let f = f7();
        let p = from_terms(&f, 4, &[(1, 0, 1), (1, 1, 2)]);
        assert_eq!(p.xi(0), UPoly::from_coeffs(vec![0, 1]));
        assert_eq!(p.xi(1), UPoly::from_coeffs(vec![0, 0, 1]));
        assert_eq!(from_terms(&f, 4, &[(1, 0, 1)]).xi(3), UPoly::zero());
    }

    #[test]
    fn mul_examples() {
        let f = f7();
        // (y+x)(y-x) = y^2 at k=2
        let a = from_terms(&f, 2, &[(1, 0, 1), (1, 1, 0)]);
        let b = from_terms(&f, 2, &[(1, 0, 1), (6, 1, 0)]);
        assert_eq!(a.mul(&f, &b).unwrap(), from_terms(&f, 2, &[(1, 0, 2)]));
        // x * x = 0 at k=2 (Gauss clause)
        let x = RkPoly::x_pow(2, 1);
        assert!(x.mul(&f, &x).unwrap().is_zero());
        // (y+x)^2 = y^2 + 2xy + x^2 at k=3
        let c = from_terms(&f, 3, &[(1, 0, 1), (1, 1, 0)]);
        assert_eq!(
            c.mul(&f, &c).unwrap(),
            from_terms(&f, 3, &[(1, 0, 2), (2, 1, 1), (1, 2, 0)])
        );
        let bad = RkPoly::one(4).mul(&f, &RkPoly::one(3));
        assert!(matches!(bad, Err(Error::PrecisionMismatch { .. })));
    }

    #[test]
    fn gauss_valuation_random() {
        let f = PrimeField::new(65537).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..500 {
            let k = rng.gen_range(1..9);
            let a = random_rk(&f, &mut rng, k, 3);
            let b = random_rk(&f, &mut rng, k, 3);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let prod = a.mul(&f, &b).unwrap();
            if a.valuation() + b.valuation() < k {
                assert_eq!(prod.valuation(), a.valuation() + b.valuation());
            } else {
                assert!(prod.is_zero());
            }
        }
    }

    #[test]
    fn kronecker_matches_schoolbook() {
        let f = PrimeField::new(65537).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(22);
        for _ in 0..500 {
            let k = rng.gen_range(1..8);
            let a = random_rk(&f, &mut rng, k, 4);
            let b = random_rk(&f, &mut rng, k, 4);
            let fast = a.mul(&f, &b).unwrap();
            let slow = schoolbook_mul(&f, &a, &b);
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn divrem_examples() {
        let f = f7();
        // y^2 = (y-x)(y+x) + x^2 at k=3
        let q = from_terms(&f, 3, &[(1, 0, 2)]);
        let p = from_terms(&f, 3, &[(1, 0, 1), (1, 1, 0)]);
        let (u, r) = q.divrem_y(&f, &p).unwrap();
        assert_eq!(u, from_terms(&f, 3, &[(1, 0, 1), (6, 1, 0)]));
        assert_eq!(r, RkPoly::x_pow(3, 2));
        // (x y, y) -> U = x, R = 0
        let (u, r) = from_terms(&f, 3, &[(1, 1, 1)])
            .divrem_y(&f, &from_terms(&f, 3, &[(1, 0, 1)]))
            .unwrap();
        assert_eq!(u, RkPoly::x_pow(3, 1));
        assert!(r.is_zero());
        // degree too small: y by y^2 + x (normal divisor)
        let (u, r) = from_terms(&f, 3, &[(1, 0, 1)])
            .divrem_y(&f, &from_terms(&f, 3, &[(1, 0, 2), (1, 1, 0)]))
            .unwrap();
        assert!(u.is_zero());
        assert_eq!(r, from_terms(&f, 3, &[(1, 0, 1)]));
        // errors
        let not_normal = from_terms(&f, 3, &[(1, 1, 1), (1, 0, 0)]); // xy + 1
        assert_eq!(
            from_terms(&f, 3, &[(1, 0, 0)]).divrem_y(&f, &not_normal),
            Err(Error::NotNormal)
        );
        let vlow = from_terms(&f, 3, &[(1, 0, 0)])
            .divrem_y(&f, &from_terms(&f, 3, &[(1, 1, 1)]));
        assert_eq!(vlow, Err(Error::ValuationTooLow));
    }

    #[test]
    fn divrem_matches_naive_and_roundtrip() {
        let f = PrimeField::new(65537).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..500 {
            let k = rng.gen_range(1..8);
            let dv = rng.gen_range(0..4);
            let div = random_normal(&f, &mut rng, k, dv);
            if div.is_zero() {
                continue;
            }
            let mut q = random_rk(&f, &mut rng, k, 5);
            if q.valuation() < div.valuation() {
                q = q.mul_x_pow(div.valuation() - q.valuation());
            }
            let (u, r) = q.divrem_y(&f, &div).unwrap();
            // round-trip
            let back = u.mul(&f, &div).unwrap().add(&f, &r).unwrap();
            assert_eq!(back, q);
            assert!(r.deg_y().map_or(true, |d| d < div.deg_y().unwrap()));
            // R matches an independent absolute-coefficient long division
            let (nu, nr) = naive_divrem(&f, &q, &div);
            assert_eq!(r, nr);
            assert_eq!(u, nu);
        }
    }

    #[test]
    fn normalize_examples() {
        let f = f7();
        // (1+x)(y+x) at k=3, n=2
        let lc_expect = from_terms(&f, 3, &[(1, 0, 0), (1, 1, 0)]);
        let n_expect = from_terms(&f, 3, &[(1, 0, 1), (1, 1, 0)]);
        let p = lc_expect.mul(&f, &n_expect).unwrap();
        let (lc, nn) = p.normalize(&f, 2).unwrap();
        assert_eq!(
            lc.mul(&f, &nn).unwrap().pi(2),
            p.pi(2)
        );
        assert!(nn.is_normal());
        // already normal: 2y
        let p = from_terms(&f, 3, &[(2, 0, 1)]);
        let (lc, nn) = p.normalize(&f, 3).unwrap();
        assert_eq!(lc, RkPoly::one(3));
        assert_eq!(nn, p);
        // 2y + x y^2 at n=2: Lc = 1 + 4xy, N = 2y
        let p = from_terms(&f, 3, &[(2, 0, 1), (1, 1, 2)]);
        let (lc, nn) = p.normalize(&f, 2).unwrap();
        assert_eq!(lc, from_terms(&f, 3, &[(1, 0, 0), (4, 1, 1)]));
        assert_eq!(nn, from_terms(&f, 3, &[(2, 0, 1)]));
        // zero input rejected
        assert_eq!(RkPoly::zero(3).normalize(&f, 1), Err(Error::ZeroInput));
    }

    #[test]
    fn normalize_random() {
        let f = PrimeField::new(65537).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(24);
        for _ in 0..300 {
            let k = rng.gen_range(1..9);
            let p = random_rk(&f, &mut rng, k, 4);
            if p.is_zero() {
                continue;
            }
            let nmax = k - p.valuation();
            let n = rng.gen_range(1..=nmax);
            let (lc, nn) = p.normalize(&f, n).unwrap();
            assert_eq!(lc.mul(&f, &nn).unwrap().pi(n), p.pi(n));
            assert!(nn.is_normal());
            assert_eq!(nn.valuation(), p.valuation());
            assert_eq!(lc.xi(0), UPoly::one());
            // slice-by-slice normality: deg_y Xi_v > deg_y Xi_i for i > v
            let dv = nn.xi(nn.valuation()).degree().unwrap();
            for i in nn.valuation() + 1..k {
                let di = nn.xi(i).degree();
                assert!(di.map_or(true, |d| d < dv) || dv == 0 && di.is_none());
            }
            // truncation bound on Lc
            for (c, xe, _) in lc.terms() {
                assert!(c == 0 || xe < n);
            }
        }
    }

    #[test]
    fn canonical_representation_idempotent() {
        let f = PrimeField::new(65537).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(25);
        for _ in 0..200 {
            let k = rng.gen_range(1..8);
            let p = random_rk(&f, &mut rng, k, 4);
            let again = RkPoly::from_terms(&f, k, &p.terms());
            assert_eq!(p, again);
        }
    }

    #[test]
    fn derivative_examples() {
        let f = f7();
        // d/dx (y + x^2) = 2x
        let p = from_terms(&f, 4, &[(1, 0, 1), (1, 2, 0)]);
        assert_eq!(p.deriv_x(&f), from_terms(&f, 4, &[(2, 1, 0)]));
        // d/dy (y^2 + x) = 2y
        let p = from_terms(&f, 4, &[(1, 0, 2), (1, 1, 0)]);
        assert_eq!(p.deriv_y(&f), from_terms(&f, 4, &[(2, 0, 1)]));
        // d/dx (y) = 0
        assert!(from_terms(&f, 4, &[(1, 0, 1)]).deriv_x(&f).is_zero());
    }

    // helpers

    pub(crate) fn random_rk(
        f: &PrimeField,
        rng: &mut rand_chacha::ChaCha8Rng,
        k: usize,
        max_dy: usize,
    ) -> RkPoly {
        let dy = rng.gen_range(0..=max_dy);
        let mut terms = Vec::new();
        for ye in 0..=dy {
            for xe in 0..k {
                if rng.gen_bool(0.6) {
                    terms.push((rng.gen_range(0..f.modulus()), xe, ye));
                }
            }
        }
        RkPoly::from_terms(f, k, &terms)
    }

    pub(crate) fn random_normal(
        f: &PrimeField,
        rng: &mut rand_chacha::ChaCha8Rng,
        k: usize,
        dy: usize,
    ) -> RkPoly {
        let v = rng.gen_range(0..k);
        let mut terms = vec![(rng.gen_range(1..f.modulus()), v, dy)];
        for ye in 0..dy {
            for xe in v..k {
                if rng.gen_bool(0.6) {
                    terms.push((rng.gen_range(0..f.modulus()), xe, ye));
                }
            }
        }
        RkPoly::from_terms(f, k, &terms)
    }

    fn schoolbook_mul(f: &PrimeField, a: &RkPoly, b: &RkPoly) -> RkPoly {
        let k = a.precision();
        let mut terms = Vec::new();
        for (ca, xa, ya) in a.terms() {
            for (cb, xb, yb) in b.terms() {
                if xa + xb < k {
                    terms.push((f.mul(ca, cb), xa + xb, ya + yb));
                }
            }
        }
        RkPoly::from_terms(f, k, &terms)
    }

    fn naive_divrem(f: &PrimeField, q: &RkPoly, p: &RkPoly) -> (RkPoly, RkPoly) {
        // Absolute-coefficient long division in y, coefficient arithmetic in
        // K[x]/x^(k - v(p)) after shifting out x^(v(p)).
        let k = q.precision();
        let m = k - p.valuation();
        let dv = p.deg_y().unwrap();
        let ny = q.deg_y().map_or(0, |d| d + 1);
        let coeff = |r: &RkPoly, xe: usize, ye: usize| r.coeff(xe + p.valuation(), ye);
        let mut rem: Vec<Vec<u64>> = (0..ny)
            .map(|ye| (0..m).map(|xe| coeff(q, xe, ye)).collect())
            .collect();
        let lc_inv = f.inv(p.leading_constant().unwrap()).unwrap();
        let mut quot: Vec<Vec<u64>> = vec![vec![0; m]; ny.saturating_sub(dv)];
        for j in (dv..ny).rev() {
            for xe in 0..m {
                let c = rem[j][xe];
                if c == 0 {
                    continue;
                }
                let qc = f.mul(c, lc_inv);
                quot[j - dv][xe] = qc;
                for (i, ds) in p.body().iter().enumerate() {
                    for (xd, &dc) in ds.coeffs().iter().enumerate() {
                        if xe + xd < m {
                            let t = f.mul(qc, dc);
                            rem[j - dv + i][xe + xd] = f.sub(rem[j - dv + i][xe + xd], t);
                        }
                    }
                }
            }
        }
        let mut qterms = Vec::new();
        for (ye, row) in quot.iter().enumerate() {
            for (xe, &c) in row.iter().enumerate() {
                qterms.push((c, xe, ye));
            }
        }
        let mut rterms = Vec::new();
        for (ye, row) in rem.iter().take(dv).enumerate() {
            for (xe, &c) in row.iter().enumerate() {
                rterms.push((c, xe + p.valuation(), ye));
            }
        }
        (
            RkPoly::from_terms(f, k, &qterms),
            RkPoly::from_terms(f, k, &rterms),
        )
    }
}
