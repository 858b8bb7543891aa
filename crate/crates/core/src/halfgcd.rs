//! Generalized half-gcd over R_k and pseudo-inverse extraction.
//!
//! The divide-and-conquer recursion halves the valuation budget, applies one
//! pseudo-division step in the middle, and controls the y-degree of the
//! accumulated transition matrix with a column-wise reduction against the
//! normal parts of the input pair. Reduced arithmetic is carried out modulo
//! (N_u(P), x^l) and (N_u(Q), x^l) separately; the final matrix concatenates
//! the valid column of each product, which is what keeps inverse series from
//! inflating degrees.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::pseudo::{self, Mat2Rk, PairS, QParts};
use crate::rk::RkPoly;

/// Which pseudo-inverse machinery drives a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    /// Divide-and-conquer half-gcd (the fast path).
    HalfGcd,
    /// Full-precision iteration of the pseudo-division operator.
    Iterative,
}

#[derive(Debug, Clone)]
pub struct HalfGcdResult {
    pub matrix: Mat2Rk,
    pub valuation_gain: usize,
}

/// Runs the half-gcd at budget `n` and reports the achieved valuation gain.
pub fn generic_half_gcd(f: &PrimeField, n: usize, s: &PairS) -> Result<HalfGcdResult> {
    let matrix = half_gcd_matrix(f, n, s)?;
    let gain = if s.is_zero() {
        0
    } else {
        let (a, b) = matrix.apply(f, s)?;
        a.valuation().min(b.valuation()).min(s.precision()) - s.valuation()
    };
    debug_assert!(gain <= n);
    Ok(HalfGcdResult { matrix, valuation_gain: gain })
}

/// The recursive core: returns the transition matrix only.
pub fn half_gcd_matrix(f: &PrimeField, n: usize, s: &PairS) -> Result<Mat2Rk> {
    let ks = s.precision();
    let st_full = s.pi(n + 1);
    if n == 0 || st_full.is_zero() {
        return Ok(Mat2Rk::identity(ks));
    }
    // All work below only depends on the truncation, so drop the ambient
    // precision to what the budget can see.
    let k2 = ks.min(st_full.valuation() + n + 1);
    let st = st_full.reduce_precision(k2);

    let r = half_gcd_matrix(f, n / 2, &st)?;
    let (ra, rb) = r.apply(f, &st)?;
    let v_rst = ra.valuation().min(rb.valuation()).min(k2);
    if st_full != *s {
        // The recursion only saw a truncation; its action on the full pair
        // must reach the same valuation.
        let (fa, fb) = r.lift_precision(ks).apply(f, s)?;
        let v_full = fa.valuation().min(fb.valuation()).min(k2);
        assert_eq!(v_full, v_rst, "half-gcd truncation changed the valuation");
    }
    let gain0 = v_rst - st.valuation();
    assert!(gain0 <= n / 2, "first recursion exceeded its budget");
    let np = n - gain0;
    let ut = PairS::new(ra, rb)?.pi(np + 1);
    debug_assert!(!ut.is_zero());

    let e = pseudo::eta(f, &ut, np + 1)?;
    if e.eta > np || e.clipped {
        // Budget exhausted, or the pair is terminal (no remainder in sight).
        return Ok(r.lift_precision(ks));
    }
    let parts = pseudo::q_op_parts(f, &ut)?;
    debug_assert_eq!(parts.eta, e.eta);
    let tt = parts.out.pi(np - e.eta + 1);
    let v_tt = tt.valuation().min(k2);
    debug_assert!(v_tt >= st.valuation());
    let n1 = n - (v_tt - st.valuation());
    assert!(n1 <= n / 2, "second recursion exceeded its budget");

    let smat = half_gcd_matrix(f, n1, &tt)?;
    let (sa, sb) = smat.apply(f, &tt)?;
    let j = sa.valuation().min(sb.valuation()).min(k2) - st.valuation();
    assert!(j >= 1);

    let m = compose_reduced(f, &st, j, &smat, &parts, &r)?;
    debug_assert!(column_degrees_ok(&st, &m));
    Ok(m.lift_precision(ks))
}

fn column_degrees_ok(st: &PairS, m: &Mat2Rk) -> bool {
    if st.second().is_zero() {
        return true;
    }
    let dp = st.first().deg_y().unwrap();
    let dq = st.second().deg_y().unwrap();
    let col_ok = |col: usize, bound: usize| {
        (0..2).all(|row| m.e[row][col].deg_y().map_or(true, |d| bound > 0 && d <= bound - 1))
    };
    col_ok(0, dq) && col_ok(1, dp)
}

/// The size-control map: reduces each matrix column against the normal part
/// of the opposite pair entry and truncates at x^(n+1). Degenerate clause:
/// identity when Q = 0 or when the matrix action gains no valuation.
pub fn phi(f: &PrimeField, s: &PairS, n: usize, m: &Mat2Rk) -> Result<Mat2Rk> {
    let k = s.precision();
    if s.second().is_zero() {
        return Ok(Mat2Rk::identity(k));
    }
    let (a, b) = m.apply(f, s)?;
    if a.valuation().min(b.valuation()) == s.valuation() {
        return Ok(Mat2Rk::identity(k));
    }
    let red = ColumnReducers::new(f, s, n + 1)?;
    Ok(Mat2Rk::new(
        red.col1(f, &m.e[0][0])?,
        red.col2(f, &m.e[0][1])?,
        red.col1(f, &m.e[1][0])?,
        red.col2(f, &m.e[1][1])?,
    ))
}

/// Normal parts and unit factors of a pair, truncated to a working precision;
/// implements the two column transforms of the size-control map.
struct ColumnReducers {
    lc_p: RkPoly,
    nu_p: RkPoly,
    lc_q: RkPoly,
    nu_q: RkPoly,
    prec: usize,
}

impl ColumnReducers {
    fn new(f: &PrimeField, s: &PairS, prec: usize) -> Result<Self> {
        let k = s.precision();
        let prec = prec.min(k);
        let p = s.first();
        let q = s.second();
        let np = prec.min(k - p.valuation());
        let (lc_p, n_p) = p.normalize(f, np)?;
        let nu_p = n_p.div_x_pow(p.valuation());
        let nq = prec.min(k - q.valuation());
        let (lc_q, n_q) = q.normalize(f, nq)?;
        let nu_q = n_q.div_x_pow(q.valuation());
        Ok(ColumnReducers { lc_p, nu_p, lc_q, nu_q, prec })
    }

    /// First column: L_Q * (L_P * entry rem_y N_u(Q)) rem_x x^prec.
    fn col1(&self, f: &PrimeField, entry: &RkPoly) -> Result<RkPoly> {
        let r = self.lc_p.mul(f, entry)?.rem_y(f, &self.nu_q)?;
        Ok(self.lc_q.mul(f, &r)?.truncate_x(self.prec))
    }

    /// Second column: L_P * (L_Q * entry rem_y N_u(P)) rem_x x^prec.
    fn col2(&self, f: &PrimeField, entry: &RkPoly) -> Result<RkPoly> {
        let r = self.lc_q.mul(f, entry)?.rem_y(f, &self.nu_p)?;
        Ok(self.lc_p.mul(f, &r)?.truncate_x(self.prec))
    }
}

/// Assembles phi(S * Q(u) * R) without ever forming the unreduced product:
/// the middle matrix is evaluated modulo (N_u(P), x^(j+1)) for the second
/// column and modulo (N_u(Q), x^(j+1)) for the first, and the two reduced
/// products each contribute the column their modulus makes valid.
fn compose_reduced(
    f: &PrimeField,
    st: &PairS,
    j: usize,
    smat: &Mat2Rk,
    parts: &QParts,
    r: &Mat2Rk,
) -> Result<Mat2Rk> {
    let k = st.precision();
    if st.second().is_zero() {
        return Ok(Mat2Rk::identity(k));
    }
    let red = ColumnReducers::new(f, st, j + 1)?;
    let prec = red.prec;

    let q1 = q_matrix_mod(f, parts, &red.nu_p, prec)?;
    let q2 = q_matrix_mod(f, parts, &red.nu_q, prec)?;
    let m1 = mat_mul_mod(f, &mat_mul_mod(f, smat, &q1, &red.nu_p, prec)?, r, &red.nu_p, prec)?;
    let m2 = mat_mul_mod(f, &mat_mul_mod(f, smat, &q2, &red.nu_q, prec)?, r, &red.nu_q, prec)?;

    Ok(Mat2Rk::new(
        red.col1(f, &m2.e[0][0])?,
        red.col2(f, &m1.e[0][1])?,
        red.col1(f, &m2.e[1][0])?,
        red.col2(f, &m1.e[1][1])?,
    ))
}

fn reduce_entry(f: &PrimeField, x: &RkPoly, nu: &RkPoly, prec: usize) -> Result<RkPoly> {
    Ok(x.rem_y(f, nu)?.truncate_x(prec))
}

fn mat_mul_mod(
    f: &PrimeField,
    a: &Mat2Rk,
    b: &Mat2Rk,
    nu: &RkPoly,
    prec: usize,
) -> Result<Mat2Rk> {
    let entry = |i: usize, j: usize| -> Result<RkPoly> {
        let s = a.e[i][0].mul(f, &b.e[0][j])?.add(f, &a.e[i][1].mul(f, &b.e[1][j])?)?;
        reduce_entry(f, &s, nu, prec)
    };
    Ok(Mat2Rk::new(entry(0, 0)?, entry(0, 1)?, entry(1, 0)?, entry(1, 1)?))
}

/// The transition matrix of one pseudo-division step with all entries reduced
/// modulo (nu, x^prec). The unit inverse inside N is computed by Newton
/// iteration in the quotient, so entry degrees stay below deg nu.
fn q_matrix_mod(f: &PrimeField, parts: &QParts, nu: &RkPoly, prec: usize) -> Result<Mat2Rk> {
    let k = parts.dmat.precision();
    let n = match (&parts.lc_a, &parts.n_off) {
        (Some(lc_a), Some(n_off)) => {
            let w = lc_a.inverse_mod(f, nu, prec)?;
            let n21 = reduce_entry(f, &w.mul(f, n_off)?, nu, prec)?.neg(f);
            Mat2Rk::new(w, RkPoly::zero(k), n21, RkPoly::one(k))
        }
        _ => Mat2Rk::identity(k),
    };
    mat_mul_mod(f, &mat_mul_mod(f, &n, &parts.gmat, nu, prec)?, &parts.dmat, nu, prec)
}

/// Cofactors U, V with U*P + V*Q = x^t mod x^(t+1) for the minimal t such
/// that <P,Q> meets <x^t> in all of <x^t>.
#[derive(Debug, Clone)]
pub struct PseudoInverse {
    pub u: RkPoly,
    pub v: RkPoly,
    pub t: usize,
}

#[derive(Debug, Clone)]
pub enum PseudoInverseOutcome {
    Found(PseudoInverse),
    /// No t below the precision reaches a unit; the resultant vanishes mod x^k.
    NoUnitReached,
}

pub fn pseudo_inverse(f: &PrimeField, p: &RkPoly, q: &RkPoly) -> Result<PseudoInverseOutcome> {
    pseudo_inverse_with(f, Engine::HalfGcd, p, q)
}

pub fn pseudo_inverse_with(
    f: &PrimeField,
    engine: Engine,
    p: &RkPoly,
    q: &RkPoly,
) -> Result<PseudoInverseOutcome> {
    if p.is_zero() && q.is_zero() {
        return Err(Error::BothZero);
    }
    let k = p.precision();
    if k != q.precision() {
        return Err(Error::PrecisionMismatch { left: k, right: q.precision() });
    }
    // Order within the identity is symmetric; reduce to v(P) <= v(Q).
    let swapped = p.valuation() > q.valuation();
    let (p0, q0) = if swapped { (q, p) } else { (p, q) };

    // Equal valuations are resolved by one slice gcd step up front.
    let (s, pre) = if !q0.is_zero() && p0.valuation() == q0.valuation() {
        let g = pseudo::mat_g(f, p0, q0)?;
        let (a, b) = g.apply_raw(f, p0, q0)?;
        (PairS::new(a, b)?, Some(g))
    } else {
        (PairS::new(p0.clone(), q0.clone())?, None)
    };

    let v0 = s.valuation();
    debug_assert!(v0 < k);
    // Budgets double, capped below k - v0 so the stabilized readout is never
    // annihilated by a final valuation jump to k.
    let nmax = k - 1 - v0;
    let mut budgets = vec![0usize];
    let mut b = 2usize;
    while budgets.last() != Some(&nmax) && nmax > 0 {
        budgets.push(b.min(nmax));
        b *= 2;
    }

    for n in budgets {
        let h = match engine {
            Engine::HalfGcd => half_gcd_matrix(f, n, &s)?,
            Engine::Iterative => pseudo::q_iter(f, &s, n)?.0,
        };
        let (a, _) = h.apply(f, &s)?;
        if a.is_zero() {
            continue;
        }
        let t = a.valuation();
        let slice = a.xi(t);
        if slice.degree() != Some(0) {
            continue;
        }
        let c_inv = f.inv(slice.coeff(0))?;
        let mut u = h.e[0][0].scale(f, c_inv);
        let mut v = h.e[0][1].scale(f, c_inv);
        if let Some(g) = &pre {
            let nu = u.mul(f, &g.e[0][0])?.add(f, &v.mul(f, &g.e[1][0])?)?;
            let nv = u.mul(f, &g.e[0][1])?.add(f, &v.mul(f, &g.e[1][1])?)?;
            u = nu;
            v = nv;
        }
        if swapped {
            std::mem::swap(&mut u, &mut v);
        }
        let (u, v) = reduce_cofactors(f, p, q, &u, &v, t)?;
        // The defining identity must hold bit-exactly.
        let lhs = u.mul(f, p)?.add(f, &v.mul(f, q)?)?.truncate_x((t + 1).min(k));
        assert_eq!(lhs, RkPoly::x_pow(k, t), "pseudo-inverse identity failed");
        return Ok(PseudoInverseOutcome::Found(PseudoInverse { u, v, t }));
    }
    Ok(PseudoInverseOutcome::NoUnitReached)
}

/// Final degree reduction of raw cofactors: U <- L_Q(L_P U rem_y N_u(Q)) and
/// V <- L_P(L_Q V rem_y N_u(P)), both mod x^(t+1), giving deg_y U < deg_y Q
/// and deg_y V < deg_y P without disturbing the identity. The cancellation
/// argument behind the reduction needs deg N_u(P) + deg N_u(Q) >= 1; when
/// both normal parts are constants the sides are units times monomials, and
/// a single constant cofactor against the lower-valuation side serves.
fn reduce_cofactors(
    f: &PrimeField,
    p: &RkPoly,
    q: &RkPoly,
    u: &RkPoly,
    v: &RkPoly,
    t: usize,
) -> Result<(RkPoly, RkPoly)> {
    let k = p.precision();
    let prec = (t + 1).min(k);
    if p.is_zero() || q.is_zero() {
        return Ok((u.truncate_x(prec), v.truncate_x(prec)));
    }
    // The reducers only need the normal parts, not the S_k order.
    let np = prec.min(k - p.valuation());
    let (lc_p, n_p) = p.normalize(f, np)?;
    let nq = prec.min(k - q.valuation());
    let (lc_q, n_q) = q.normalize(f, nq)?;
    let red = ColumnReducers {
        nu_p: n_p.div_x_pow(p.valuation()),
        lc_p,
        nu_q: n_q.div_x_pow(q.valuation()),
        lc_q,
        prec,
    };
    if red.nu_p.deg_y() == Some(0) && red.nu_q.deg_y() == Some(0) {
        let (vp, vq) = (p.valuation(), q.valuation());
        debug_assert_eq!(t, vp.min(vq));
        if vp <= vq {
            let a = p.xi(vp).coeff(0);
            return Ok((
                RkPoly::from_upoly(k, &crate::upoly::UPoly::constant(f.inv(a)?)),
                RkPoly::zero(k),
            ));
        }
        let a = q.xi(vq).coeff(0);
        return Ok((
            RkPoly::zero(k),
            RkPoly::from_upoly(k, &crate::upoly::UPoly::constant(f.inv(a)?)),
        ));
    }
    Ok((red.col1(f, u)?, red.col2(f, v)?))
}
