//! Dense univariate polynomials over F_p and truncated power series K[x]/<x^k>.
//!
//! `UPoly` serves both variable roles: polynomials in y (slice gcds,
//! resultants of slices) and polynomials in x (Kronecker-packed products).

use crate::error::{Error, Result};
use crate::field::{FieldElem, PrimeField};
use crate::ntt;

/// Dense polynomial; index = degree, last stored coefficient nonzero.
/// The empty coefficient vector is the zero polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UPoly {
    coeffs: Vec<FieldElem>,
}

impl UPoly {
    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: FieldElem) -> Self {
        UPoly::from_coeffs(vec![c])
    }

    pub fn one() -> Self {
        UPoly::constant(1)
    }

    /// `y` as a polynomial.
    pub fn gen() -> Self {
        UPoly::from_coeffs(vec![0, 1])
    }

    /// Normalizes trailing zeros away. Coefficients must be reduced mod p.
    pub fn from_coeffs(mut coeffs: Vec<FieldElem>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    /// Coefficient of `y^i`, zero beyond the stored length.
    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` is the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> FieldElem {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn add(&self, f: &PrimeField, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(f.add(self.coeff(i), other.coeff(i)));
        }
        UPoly::from_coeffs(out)
    }

    pub fn sub(&self, f: &PrimeField, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(f.sub(self.coeff(i), other.coeff(i)));
        }
        UPoly::from_coeffs(out)
    }

    pub fn neg(&self, f: &PrimeField) -> Self {
        UPoly::from_coeffs(self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn scale(&self, f: &PrimeField, c: FieldElem) -> Self {
        UPoly::from_coeffs(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, f: &PrimeField, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        UPoly::from_coeffs(ntt::convolve_mod(&self.coeffs, &other.coeffs, f.modulus()))
    }

    /// Multiplies by `y^e`.
    pub fn shift_up(&self, e: usize) -> Self {
        if self.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![0; e];
        out.extend_from_slice(&self.coeffs);
        UPoly { coeffs: out }
    }

    pub fn monic(&self, f: &PrimeField) -> Result<Self> {
        let lc = self.leading_coeff();
        if lc == 0 {
            return Err(Error::DivisionByZeroPoly);
        }
        let inv = f.inv(lc)?;
        Ok(self.scale(f, inv))
    }

    /// Euclidean division: `self = q * other + r` with `deg r < deg other`.
    pub fn divrem(&self, f: &PrimeField, other: &Self) -> Result<(Self, Self)> {
        if other.is_zero() {
            return Err(Error::DivisionByZeroPoly);
        }
        let db = other.degree().unwrap();
        if self.coeffs.len() <= db {
            return Ok((UPoly::zero(), self.clone()));
        }
        let lc_inv = f.inv(other.leading_coeff())?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0; rem.len() - db];
        for i in (db..rem.len()).rev() {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            let qc = f.mul(c, lc_inv);
            quot[i - db] = qc;
            for j in 0..=db {
                let t = f.mul(qc, other.coeff(j));
                rem[i - db + j] = f.sub(rem[i - db + j], t);
            }
        }
        Ok((UPoly::from_coeffs(quot), UPoly::from_coeffs(rem)))
    }

    pub fn rem(&self, f: &PrimeField, other: &Self) -> Result<Self> {
        Ok(self.divrem(f, other)?.1)
    }

    pub fn eval(&self, f: &PrimeField, x: FieldElem) -> FieldElem {
        let mut acc = 0;
        for &c in self.coeffs.iter().rev() {
            acc = f.add(f.mul(acc, x), c);
        }
        acc
    }

    /// Extended Euclid returning the monic gcd `g` and an invertible matrix `G`
    /// with `G * (p, q)^T = (g, 0)^T` and constant determinant. When `q = 0`
    /// the matrix is the identity and `g` is `p` made monic.
    pub fn gcd_matrix(&self, f: &PrimeField, other: &Self) -> Result<(Self, [[Self; 2]; 2])> {
        let id = [
            [UPoly::one(), UPoly::zero()],
            [UPoly::zero(), UPoly::one()],
        ];
        if other.is_zero() {
            let g = if self.is_zero() { UPoly::zero() } else { self.monic(f)? };
            return Ok((g, id));
        }
        if self.is_zero() {
            // swap matrix scaled to make the gcd monic
            let inv = f.inv(other.leading_coeff())?;
            let g = other.scale(f, inv);
            let gmat = [
                [UPoly::zero(), UPoly::constant(inv)],
                [UPoly::constant(f.neg(1)), UPoly::zero()],
            ];
            return Ok((g, gmat));
        }
        // Rows track (poly, u, v) with poly = u*self + v*other.
        let mut r0 = (self.clone(), UPoly::one(), UPoly::zero());
        let mut r1 = (other.clone(), UPoly::zero(), UPoly::one());
        while !r1.0.is_zero() {
            let (q, rem) = r0.0.divrem(f, &r1.0)?;
            let u = r0.1.sub(f, &q.mul(f, &r1.1));
            let v = r0.2.sub(f, &q.mul(f, &r1.2));
            r0 = r1;
            r1 = (rem, u, v);
        }
        let lc_inv = f.inv(r0.0.leading_coeff())?;
        let g = r0.0.scale(f, lc_inv);
        let u = r0.1.scale(f, lc_inv);
        let v = r0.2.scale(f, lc_inv);
        // Second row spans the syzygy of (self, other): (-other/g, self/g).
        let (qg, rem) = other.divrem(f, &g)?;
        debug_assert!(rem.is_zero());
        let (pg, rem) = self.divrem(f, &g)?;
        debug_assert!(rem.is_zero());
        Ok((g, [[u, v], [qg.neg(f), pg]]))
    }

    /// Resultant with the Sylvester convention via the Euclidean recursion
    /// `Res(p, q) = lc(q)^(deg p - deg r) * (-1)^(deg p * deg q) * Res(q, r)`.
    /// Any zero argument yields 0; `Res(p, c) = c^(deg p)` for constants.
    pub fn resultant(&self, f: &PrimeField, other: &Self) -> FieldElem {
        if self.is_zero() || other.is_zero() {
            return 0;
        }
        let mut a = self.clone();
        let mut b = other.clone();
        let mut acc = f.one();
        loop {
            let da = a.degree().unwrap();
            let db = b.degree().unwrap();
            if da == 0 {
                return f.mul(acc, f.pow(a.coeff(0), db as u64));
            }
            if db == 0 {
                return f.mul(acc, f.pow(b.coeff(0), da as u64));
            }
            let r = match a.divrem(f, &b) {
                Ok((_, r)) => r,
                Err(_) => unreachable!("b is nonzero"),
            };
            if r.is_zero() {
                return 0;
            }
            let dr = r.degree().unwrap();
            acc = f.mul(acc, f.pow(b.leading_coeff(), (da - dr) as u64));
            if da % 2 == 1 && db % 2 == 1 {
                acc = f.neg(acc);
            }
            a = b;
            b = r;
        }
    }

    /// Lagrange interpolation through pairwise distinct abscissae.
    pub fn interpolate(f: &PrimeField, points: &[(FieldElem, FieldElem)]) -> Result<Self> {
        for (i, (xi, _)) in points.iter().enumerate() {
            for (xj, _) in points.iter().take(i) {
                if xi == xj {
                    return Err(Error::DuplicateAbscissa);
                }
            }
        }
        // Newton's divided differences.
        let n = points.len();
        let mut coef: Vec<FieldElem> = points.iter().map(|&(_, y)| y).collect();
        for j in 1..n {
            for i in (j..n).rev() {
                let num = f.sub(coef[i], coef[i - 1]);
                let den = f.sub(points[i].0, points[i - j].0);
                coef[i] = f.mul(num, f.inv(den)?);
            }
        }
        let mut out = UPoly::zero();
        for i in (0..n).rev() {
            // out = out * (y - x_i) + coef[i]
            let mut next = out.shift_up(1);
            let shifted = out.scale(f, f.neg(points[i].0));
            next = next.add(f, &shifted);
            out = next.add(f, &UPoly::constant(coef[i]));
        }
        Ok(out)
    }
}

/// Element of K[x]/<x^k>: exactly `prec` stored coefficients, index = x-degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncSeries {
    prec: usize,
    coeffs: Vec<FieldElem>,
}

impl TruncSeries {
    pub fn zero(prec: usize) -> Self {
        TruncSeries { prec, coeffs: vec![0; prec] }
    }

    pub fn one(prec: usize) -> Self {
        let mut s = TruncSeries::zero(prec);
        if prec > 0 {
            s.coeffs[0] = 1;
        }
        s
    }

    pub fn constant(prec: usize, c: FieldElem) -> Self {
        let mut s = TruncSeries::zero(prec);
        if prec > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    /// `x^e` at the given precision (zero when `e >= prec`).
    pub fn monomial(prec: usize, e: usize) -> Self {
        let mut s = TruncSeries::zero(prec);
        if e < prec {
            s.coeffs[e] = 1;
        }
        s
    }

    /// Pads or truncates the coefficient list to the precision.
    pub fn from_coeffs(prec: usize, mut coeffs: Vec<FieldElem>) -> Self {
        coeffs.resize(prec, 0);
        TruncSeries { prec, coeffs }
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Index of the first nonzero coefficient; `prec` for the zero series.
    pub fn valuation(&self) -> usize {
        self.coeffs.iter().position(|&c| c != 0).unwrap_or(self.prec)
    }

    pub fn add(&self, f: &PrimeField, other: &Self) -> Self {
        debug_assert_eq!(self.prec, other.prec);
        TruncSeries {
            prec: self.prec,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, f: &PrimeField, other: &Self) -> Self {
        debug_assert_eq!(self.prec, other.prec);
        TruncSeries {
            prec: self.prec,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f.sub(a, b))
                .collect(),
        }
    }

    pub fn neg(&self, f: &PrimeField) -> Self {
        TruncSeries {
            prec: self.prec,
            coeffs: self.coeffs.iter().map(|&a| f.neg(a)).collect(),
        }
    }

    pub fn scale(&self, f: &PrimeField, c: FieldElem) -> Self {
        TruncSeries {
            prec: self.prec,
            coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    pub fn mul(&self, f: &PrimeField, other: &Self) -> Self {
        debug_assert_eq!(self.prec, other.prec);
        if self.prec == 0 {
            return TruncSeries::zero(0);
        }
        let conv = ntt::convolve_mod(&self.coeffs, &other.coeffs, f.modulus());
        TruncSeries::from_coeffs(self.prec, conv)
    }

    pub fn pow(&self, f: &PrimeField, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = TruncSeries::one(self.prec);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base);
            }
            base = base.mul(f, &base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a unit (nonzero constant term) by Newton iteration.
    pub fn inverse(&self, f: &PrimeField) -> Result<Self> {
        if self.prec == 0 {
            return Ok(TruncSeries::zero(0));
        }
        let c0 = self.coeffs[0];
        if c0 == 0 {
            return Err(Error::ZeroInverse);
        }
        let mut inv = vec![f.inv(c0)?];
        let mut m = 1usize;
        while m < self.prec {
            let m2 = (2 * m).min(self.prec);
            // inv <- inv * (2 - self * inv) mod x^m2
            let cur = TruncSeries::from_coeffs(m2, inv.clone());
            let trunc = TruncSeries::from_coeffs(m2, self.coeffs[..m2.min(self.coeffs.len())].to_vec());
            let prod = trunc.mul(f, &cur);
            let two_minus = TruncSeries::constant(m2, 2 % f.modulus()).sub(f, &prod);
            inv = cur.mul(f, &two_minus).coeffs;
            m = m2;
        }
        Ok(TruncSeries::from_coeffs(self.prec, inv))
    }

    /// Reinterprets at a new precision, truncating or zero-padding.
    pub fn with_precision(&self, prec: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(prec, 0);
        TruncSeries { prec, coeffs }
    }

    /// Truncates in place: zeroes coefficients of degree >= m.
    pub fn truncate_degree(&self, m: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        for c in coeffs.iter_mut().skip(m) {
            *c = 0;
        }
        TruncSeries { prec: self.prec, coeffs }
    }

    /// Exact division by `x^m`; the dropped low coefficients must be zero.
    /// The precision shrinks by `m`.
    pub fn shift_down(&self, m: usize) -> Self {
        debug_assert!(self.coeffs.iter().take(m).all(|&c| c == 0));
        TruncSeries {
            prec: self.prec.saturating_sub(m),
            coeffs: self.coeffs.iter().skip(m).copied().collect(),
        }
    }

    /// Multiplication by `x^m` at unchanged precision.
    pub fn shift_up(&self, m: usize) -> Self {
        let mut coeffs = vec![0; m.min(self.prec)];
        coeffs.extend(self.coeffs.iter().take(self.prec.saturating_sub(m)));
        TruncSeries { prec: self.prec, coeffs }
    }

    pub fn eval(&self, f: &PrimeField, x: FieldElem) -> FieldElem {
        let mut acc = 0;
        for &c in self.coeffs.iter().rev() {
            acc = f.add(f.mul(acc, x), c);
        }
        acc
    }

    /// Formal derivative; precision drops by one conceptually but the result
    /// is padded back to the input precision with a zero top coefficient.
    pub fn derivative(&self, f: &PrimeField) -> Self {
        let mut coeffs = Vec::with_capacity(self.prec);
        for i in 1..self.prec {
            coeffs.push(f.mul(self.coeffs[i], f.from_u128(i as u128)));
        }
        TruncSeries::from_coeffs(self.prec, coeffs)
    }
}
