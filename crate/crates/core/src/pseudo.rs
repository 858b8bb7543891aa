//! The pseudo-division operator on pairs of S_k.
//!
//! A pair (P, Q) with v(P) < v(Q) is transformed in three stages: a Euclidean
//! division against the truncated normal part of P (matrix D), a gcd of the
//! leading slices (matrix G), and a renormalization of the first entry
//! (matrix N). The composition raises the pair valuation by exactly eta(s)
//! while preserving the generated ideal below that level.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::rk::RkPoly;
use crate::upoly::UPoly;

/// Pair of S_k: v(first) < v(second), or both zero. v(0) = k, so a nonzero
/// first entry with a zero second entry is a valid member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairS {
    first: RkPoly,
    second: RkPoly,
}

impl PairS {
    pub fn new(first: RkPoly, second: RkPoly) -> Result<Self> {
        if first.precision() != second.precision() {
            return Err(Error::PrecisionMismatch {
                left: first.precision(),
                right: second.precision(),
            });
        }
        if !(first.is_zero() && second.is_zero())
            && first.valuation() >= second.valuation()
        {
            return Err(Error::ValuationTooLow);
        }
        Ok(PairS { first, second })
    }

    pub fn zero(k: usize) -> Self {
        PairS { first: RkPoly::zero(k), second: RkPoly::zero(k) }
    }

    pub fn first(&self) -> &RkPoly {
        &self.first
    }

    pub fn second(&self) -> &RkPoly {
        &self.second
    }

    pub fn precision(&self) -> usize {
        self.first.precision()
    }

    pub fn is_zero(&self) -> bool {
        self.first.is_zero() && self.second.is_zero()
    }

    /// Pair valuation: the minimum of the two, i.e. v(first).
    pub fn valuation(&self) -> usize {
        self.first.valuation()
    }

    /// Pair projection: truncates both entries at x^(v(s)+n).
    pub fn pi(&self, n: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let cut = (self.valuation() + n).min(self.precision());
        PairS {
            first: self.first.truncate_x(cut),
            second: self.second.truncate_x(cut),
        }
    }

    pub fn reduce_precision(&self, k2: usize) -> Self {
        PairS {
            first: self.first.reduce_precision(k2),
            second: self.second.reduce_precision(k2),
        }
    }
}

/// min(eta(s), n) together with a flag marking that the division saw no
/// nonzero remainder at the working precision. When clipped at a precision
/// below the ring's, the true eta may exceed the value; when clipped at full
/// precision the value is exactly eta under the v(0) = k convention, and the
/// pair is terminal for the iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EtaResult {
    pub eta: usize,
    pub clipped: bool,
}

/// Computes min(eta(s), n) where eta(s) = v(Q rem_y N(P)) - v(P), working at
/// x-precision n past the pair valuation.
pub fn eta(f: &PrimeField, s: &PairS, n: usize) -> Result<EtaResult> {
    if s.is_zero() {
        return Err(Error::ZeroPair);
    }
    debug_assert!(n >= 1);
    let p = s.first();
    let k = p.precision();
    let vp = p.valuation();
    let m = n.min(k - vp);
    let clipped_result = EtaResult { eta: m, clipped: true };

    let p0 = p.shift_to_valuation_zero().reduce_precision(m);
    let q0 = s.second().div_x_pow(vp).reduce_precision(m);
    if q0.is_zero() {
        return Ok(clipped_result);
    }
    let (_, nrm) = p0.normalize(f, m)?;
    let r = q0.rem_y(f, &nrm)?;
    if r.is_zero() {
        Ok(clipped_result)
    } else {
        Ok(EtaResult { eta: r.valuation(), clipped: false })
    }
}

/// Exact eta(s), using the v(0) = k convention when the remainder vanishes.
pub fn eta_exact(f: &PrimeField, s: &PairS) -> Result<usize> {
    let p = s.first();
    let r = eta(f, s, p.precision() - p.valuation())?;
    debug_assert!(!r.clipped || r.eta == p.precision() - p.valuation());
    Ok(r.eta)
}

/// 2x2 matrix over R_k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat2Rk {
    pub e: [[RkPoly; 2]; 2],
}

impl Mat2Rk {
    pub fn identity(k: usize) -> Self {
        Mat2Rk {
            e: [
                [RkPoly::one(k), RkPoly::zero(k)],
                [RkPoly::zero(k), RkPoly::one(k)],
            ],
        }
    }

    pub fn new(e11: RkPoly, e12: RkPoly, e21: RkPoly, e22: RkPoly) -> Self {
        Mat2Rk { e: [[e11, e12], [e21, e22]] }
    }

    pub fn precision(&self) -> usize {
        self.e[0][0].precision()
    }

    pub fn is_identity(&self) -> bool {
        let k = self.precision();
        *self == Mat2Rk::identity(k)
    }

    pub fn mul(&self, f: &PrimeField, rhs: &Self) -> Result<Self> {
        let mut rows = Vec::with_capacity(2);
        for i in 0..2 {
            let mut row = Vec::with_capacity(2);
            for j in 0..2 {
                let a = self.e[i][0].mul(f, &rhs.e[0][j])?;
                let b = self.e[i][1].mul(f, &rhs.e[1][j])?;
                row.push(a.add(f, &b)?);
            }
            rows.push(row);
        }
        let mut it = rows.into_iter();
        let mut r0 = it.next().unwrap().into_iter();
        let mut r1 = it.next().unwrap().into_iter();
        Ok(Mat2Rk::new(
            r0.next().unwrap(),
            r0.next().unwrap(),
            r1.next().unwrap(),
            r1.next().unwrap(),
        ))
    }

    pub fn apply_raw(&self, f: &PrimeField, p: &RkPoly, q: &RkPoly) -> Result<(RkPoly, RkPoly)> {
        let a = self.e[0][0].mul(f, p)?.add(f, &self.e[0][1].mul(f, q)?)?;
        let b = self.e[1][0].mul(f, p)?.add(f, &self.e[1][1].mul(f, q)?)?;
        Ok((a, b))
    }

    pub fn apply(&self, f: &PrimeField, s: &PairS) -> Result<(RkPoly, RkPoly)> {
        self.apply_raw(f, s.first(), s.second())
    }

    pub fn det(&self, f: &PrimeField) -> Result<RkPoly> {
        let ad = self.e[0][0].mul(f, &self.e[1][1])?;
        let bc = self.e[0][1].mul(f, &self.e[1][0])?;
        ad.sub(f, &bc)
    }

    pub fn adjugate(&self, f: &PrimeField) -> Self {
        Mat2Rk::new(
            self.e[1][1].clone(),
            self.e[0][1].neg(f),
            self.e[1][0].neg(f),
            self.e[0][0].clone(),
        )
    }

    pub fn reduce_precision(&self, k2: usize) -> Self {
        self.map(|p| p.reduce_precision(k2))
    }

    pub fn lift_precision(&self, k2: usize) -> Self {
        self.map(|p| p.lift_precision(k2))
    }

    pub fn map(&self, mut op: impl FnMut(&RkPoly) -> RkPoly) -> Self {
        Mat2Rk::new(
            op(&self.e[0][0]),
            op(&self.e[0][1]),
            op(&self.e[1][0]),
            op(&self.e[1][1]),
        )
    }
}

/// Lifts a constant gcd matrix from K[y] into R_k.
fn lift_mat(k: usize, m: &[[UPoly; 2]; 2]) -> Mat2Rk {
    Mat2Rk::new(
        RkPoly::from_upoly(k, &m[0][0]),
        RkPoly::from_upoly(k, &m[0][1]),
        RkPoly::from_upoly(k, &m[1][0]),
        RkPoly::from_upoly(k, &m[1][1]),
    )
}

/// The division matrix D_s with entries x^eta, Lc_eta(P) on the diagonal and
/// the eta-truncated quotient below.
pub fn mat_d(f: &PrimeField, s: &PairS) -> Result<Mat2Rk> {
    let (m, _, _) = d_parts(f, s)?;
    Ok(m)
}

fn d_parts(f: &PrimeField, s: &PairS) -> Result<(Mat2Rk, RkPoly, usize)> {
    if s.is_zero() {
        return Err(Error::ZeroPair);
    }
    let p = s.first();
    let q = s.second();
    let k = p.precision();
    let et = eta_exact(f, s)?;
    let (lc, nrm) = p.normalize(f, et)?;
    let quot = q.divrem_y(f, &nrm)?.0.truncate_x(et);
    let d = Mat2Rk::new(
        RkPoly::x_pow(k, et),
        RkPoly::zero(k),
        quot.neg(f),
        lc,
    );
    // second row applied to the pair
    let q_tilde = d.e[1][0].mul(f, p)?.add(f, &d.e[1][1].mul(f, q)?)?;
    Ok((d, q_tilde, et))
}

/// The slice gcd matrix for a pair with equal valuations (or a zero second
/// entry, which per convention maps to the identity).
pub fn mat_g(f: &PrimeField, p: &RkPoly, q: &RkPoly) -> Result<Mat2Rk> {
    let k = p.precision();
    if p.is_zero() && q.is_zero() {
        return Ok(Mat2Rk::identity(k));
    }
    if q.is_zero() {
        return Ok(Mat2Rk::identity(k));
    }
    debug_assert_eq!(p.valuation(), q.valuation());
    let v = p.valuation();
    let (_, gm) = p.xi(v).gcd_matrix(f, &q.xi(v))?;
    Ok(lift_mat(k, &gm))
}

/// The renormalization matrix N_s for s = (P, Q) in S_k; identity when P = 0.
/// The inverse of Lc(P) is expanded in full within R_k (reference path).
pub fn mat_n(f: &PrimeField, s: &PairS) -> Result<Mat2Rk> {
    let p = s.first();
    let k = p.precision();
    if p.is_zero() {
        return Ok(Mat2Rk::identity(k));
    }
    let (lc, nrm) = p.normalize(f, k - p.valuation())?;
    let w = lc.unit_inverse(f, k)?;
    let quot = s.second().divrem_y(f, &nrm)?.0;
    let n21 = w.mul(f, &quot)?.neg(f);
    Ok(Mat2Rk::new(w, RkPoly::zero(k), n21, RkPoly::one(k)))
}

/// Shared factorization of one pseudo-division step.
pub(crate) struct QParts {
    pub eta: usize,
    pub dmat: Mat2Rk,
    pub gmat: Mat2Rk,
    /// Lc of the first entry of G * D * s (a unit), or None when the step
    /// annihilated the pair.
    pub lc_a: Option<RkPoly>,
    /// Quotient (B div_y N(A)) for the off-diagonal entry of N.
    pub n_off: Option<RkPoly>,
    pub out: PairS,
}

pub(crate) fn q_op_parts(f: &PrimeField, s: &PairS) -> Result<QParts> {
    let (dmat, q_tilde, et) = d_parts(f, s)?;
    let k = s.precision();
    let first = s.first().mul_x_pow(et);
    if first.is_zero() {
        debug_assert!(q_tilde.is_zero());
        return Ok(QParts {
            eta: et,
            dmat,
            gmat: Mat2Rk::identity(k),
            lc_a: None,
            n_off: None,
            out: PairS::zero(k),
        });
    }
    debug_assert_eq!(q_tilde.valuation(), s.valuation() + et);
    let gmat = mat_g(f, &first, &q_tilde)?;
    let (a, b) = gmat.apply_raw(f, &first, &q_tilde)?;
    debug_assert_eq!(a.valuation(), s.valuation() + et);
    debug_assert!(b.is_zero() || b.valuation() > a.valuation());
    let (lc_a, n_a) = a.normalize(f, k - a.valuation())?;
    let (n_off, b_rem) = b.divrem_y(f, &n_a)?;
    let out = PairS::new(n_a, b_rem)?;
    Ok(QParts {
        eta: et,
        dmat,
        gmat,
        lc_a: Some(lc_a),
        n_off: Some(n_off),
        out,
    })
}

/// Composes the exact transition matrix N * G * D from the parts.
pub(crate) fn q_matrix_exact(f: &PrimeField, parts: &QParts) -> Result<Mat2Rk> {
    let k = parts.dmat.precision();
    let n = match (&parts.lc_a, &parts.n_off) {
        (Some(lc_a), Some(n_off)) => {
            let va = parts.out.first().valuation();
            let w = lc_a.unit_inverse(f, k - va)?;
            let n21 = w.mul(f, n_off)?.neg(f);
            Mat2Rk::new(w, RkPoly::zero(k), n21, RkPoly::one(k))
        }
        _ => Mat2Rk::identity(k),
    };
    n.mul(f, &parts.gmat)?.mul(f, &parts.dmat)
}

/// One pseudo-division step at input precision grade n (requires n >= eta(s)).
/// Returns the exact transition matrix and the truncated transformed pair
/// Pi_(n - eta)(Q(s) * s). The zero pair maps to (Id, zero).
pub fn q_op(f: &PrimeField, s: &PairS, n: usize) -> Result<(Mat2Rk, PairS)> {
    let k = s.precision();
    if s.is_zero() {
        return Ok((Mat2Rk::identity(k), PairS::zero(k)));
    }
    let probe = eta(f, s, n.saturating_add(1))?;
    if probe.eta > n {
        return Err(Error::PrecisionTooLow { needed: probe.eta, available: n });
    }
    let parts = q_op_parts(f, s)?;
    debug_assert_eq!(parts.eta, probe.eta);
    let m = q_matrix_exact(f, &parts)?;
    Ok((m, parts.out.pi(n - parts.eta)))
}

/// Reference iteration of the pseudo-division: applies Q repeatedly while the
/// valuation gain stays within n, accumulating the transition matrix at full
/// precision. Iteration stops on terminal pairs (second entry an exact
/// multiple of the normal part), where the sequence stabilizes.
pub fn q_iter(f: &PrimeField, s: &PairS, n: usize) -> Result<(Mat2Rk, PairS)> {
    let k = s.precision();
    let mut acc = Mat2Rk::identity(k);
    let mut cur = s.clone();
    if s.is_zero() || n == 0 {
        return Ok((acc, cur));
    }
    loop {
        if cur.is_zero() {
            break;
        }
        let vp = cur.first().valuation();
        let probe = eta(f, &cur, k - vp)?;
        if probe.clipped {
            break;
        }
        let parts = q_op_parts(f, &cur)?;
        let gained = parts.out.valuation().min(k) - s.valuation();
        if gained > n {
            break;
        }
        let step = q_matrix_exact(f, &parts)?;
        acc = step.mul(f, &acc)?;
        cur = parts.out;
    }
    Ok((acc, cur))
}
