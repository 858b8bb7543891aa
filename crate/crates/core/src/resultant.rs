//! Top-level pipeline for Res_y(P, Q) mod x^k.
//!
//! The input is first truncated against its declared y-degrees (padded
//! Sylvester bookkeeping), then reduced to two monic pairs through the
//! unit/normal factorization. For each monic pair, the first nonzero
//! coefficient of the resultant is found by a degree-reducing recursion on
//! pseudo-inverse cofactors, and the remaining coefficients are reconstructed
//! from the linear differential equation x R' = R * F_tilde.

use crate::error::{Error, Result};
use crate::field::{FieldElem, PrimeField};
use crate::halfgcd::{self, Engine, PseudoInverse, PseudoInverseOutcome};
use crate::rk::RkPoly;
use crate::upoly::TruncSeries;

/// A bivariate polynomial as handed to the pipeline: its reduction mod x^k
/// together with the declared y-degree and leading y-coefficient of the
/// untruncated polynomial (mod x^k), which the padded Sylvester convention
/// needs when leading coefficients vanish under truncation.
#[derive(Debug, Clone)]
pub struct BivariateInput {
    pub poly: RkPoly,
    /// Declared degree in y; `None` iff the exact polynomial is zero.
    pub y_degree: Option<usize>,
    /// Coefficient of y^y_degree of the exact polynomial, reduced mod x^k.
    pub lead_coeff: TruncSeries,
}

impl BivariateInput {
    /// Treats an R_k element as exact: declared data read off the element.
    pub fn from_rk(p: &RkPoly) -> Self {
        let k = p.precision();
        match p.deg_y() {
            None => BivariateInput {
                poly: p.clone(),
                y_degree: None,
                lead_coeff: TruncSeries::zero(k),
            },
            Some(d) => {
                let lead = TruncSeries::from_coeffs(k, (0..k).map(|i| p.coeff(i, d)).collect());
                BivariateInput { poly: p.clone(), y_degree: Some(d), lead_coeff: lead }
            }
        }
    }

    /// Builds from a raw term list with arbitrary exponents; terms at
    /// x-exponent >= k contribute to the declared degree and leading
    /// coefficient but not to the truncated polynomial. Coefficients need
    /// not be reduced.
    pub fn from_terms(f: &PrimeField, k: usize, terms: &[(u64, usize, usize)]) -> Self {
        use std::collections::BTreeMap;
        let mut sums: BTreeMap<(usize, usize), FieldElem> = BTreeMap::new();
        for &(c, xe, ye) in terms {
            let c = f.from_u128(c as u128);
            let entry = sums.entry((ye, xe)).or_insert(0);
            *entry = f.add(*entry, c);
        }
        sums.retain(|_, c| *c != 0);
        let y_degree = sums.keys().map(|&(ye, _)| ye).max();
        let mut lead = TruncSeries::zero(k);
        let mut reduced = Vec::new();
        if let Some(dy) = y_degree {
            let mut lead_coeffs = vec![0u64; k];
            for (&(ye, xe), &c) in &sums {
                if ye == dy && xe < k {
                    lead_coeffs[xe] = c;
                }
                if xe < k {
                    reduced.push((c, xe, ye));
                }
            }
            lead = TruncSeries::from_coeffs(k, lead_coeffs);
        }
        BivariateInput {
            poly: RkPoly::from_terms(f, k, &reduced),
            y_degree,
            lead_coeff: lead,
        }
    }

    pub fn precision(&self) -> usize {
        self.poly.precision()
    }
}

/// Outcome of the declared-degree reduction.
#[derive(Debug, Clone)]
pub enum DegreeCapReduced {
    /// The padded resultant is identically zero mod x^k.
    Zero,
    /// The resultant collapses to a closed-form series (an input was y-free).
    Value(TruncSeries),
    /// Compute the true-degree resultant of the pair and multiply by adjust.
    Pair { p: RkPoly, q: RkPoly, adjust: TruncSeries },
}

/// Relates the padded resultant at declared degrees to the resultant of the
/// truncations at their true degrees. Covers the three leading-coefficient
/// cases: both alive (adjust 1), both dead (zero), and one dead (a power of
/// the surviving leading coefficient, with a sign when it is P's).
pub fn degree_cap_reduce(
    f: &PrimeField,
    pin: &BivariateInput,
    qin: &BivariateInput,
) -> Result<DegreeCapReduced> {
    let k = pin.precision();
    if k != qin.precision() {
        return Err(Error::PrecisionMismatch { left: k, right: qin.precision() });
    }
    let (Some(dp), Some(dq)) = (pin.y_degree, qin.y_degree) else {
        return Ok(DegreeCapReduced::Zero);
    };
    // y-free inputs: Res_(dp,0)(P, q) = q^dp regardless of the other input.
    if dq == 0 {
        return Ok(DegreeCapReduced::Value(qin.lead_coeff.pow(f, dp as u64)));
    }
    if dp == 0 {
        return Ok(DegreeCapReduced::Value(pin.lead_coeff.pow(f, dq as u64)));
    }
    let p_dead = pin.lead_coeff.is_zero();
    let q_dead = qin.lead_coeff.is_zero();
    if p_dead && q_dead {
        return Ok(DegreeCapReduced::Zero);
    }
    if pin.poly.is_zero() || qin.poly.is_zero() {
        // A whole side vanished mod x^k while declared degrees are >= 1.
        return Ok(DegreeCapReduced::Zero);
    }
    let p = pin.poly.clone();
    let q = qin.poly.clone();
    if !p_dead && !q_dead {
        debug_assert_eq!(p.deg_y(), Some(dp));
        debug_assert_eq!(q.deg_y(), Some(dq));
        return Ok(DegreeCapReduced::Pair { p, q, adjust: TruncSeries::one(k) });
    }
    if q_dead {
        // Res_(dp,dq)(Pk, Qk) = p0^(dq - deg Qk) * Res(Pk, Qk)
        let e = dq - q.deg_y().unwrap();
        let adjust = pin.lead_coeff.pow(f, e as u64);
        return Ok(DegreeCapReduced::Pair { p, q, adjust });
    }
    // P's leading coefficient died: swap through the resultant symmetry,
    // picking up (-1)^(dp dq + deg Pk * deg Qk).
    let e = dp - p.deg_y().unwrap();
    let mut adjust = qin.lead_coeff.pow(f, e as u64);
    let sign = (dp & dq & 1) ^ (p.deg_y().unwrap() & q.deg_y().unwrap() & 1);
    if sign == 1 {
        adjust = adjust.neg(f);
    }
    Ok(DegreeCapReduced::Pair { p, q, adjust })
}

/// Monic reduction data: Res(P, Q) = u * Res(A, B) * Res(C, D) with A, B
/// monic of equal degree and C, D monic of equal degree.
#[derive(Debug, Clone)]
pub struct MonicReduction {
    pub a: RkPoly,
    pub b: RkPoly,
    pub c: RkPoly,
    pub d: RkPoly,
    pub u: TruncSeries,
}

/// Splits Res(P, Q) through P = Lc(P) * N(P): the unit factor contributes
/// via the reciprocal trick (A, B), the normal factor directly (C, D).
pub fn monic_reduce(f: &PrimeField, p: &RkPoly, q: &RkPoly) -> Result<MonicReduction> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::ZeroInput);
    }
    let k = p.precision();
    let vp = p.valuation();
    let (lc, nrm) = p.normalize(f, k - vp)?;
    let d_c = lc.deg_y().unwrap();
    let d_q = q.deg_y().unwrap();

    // Branch 1: Res(Lc(P), Q) = (-1)^(d_c d_q) c0^(d_q) Res(A, B).
    let p_rec = lc.reciprocal_y(d_c);
    let q_rec = q.reciprocal_y(d_q);
    let c0 = y_coeff_series(&p_rec, d_c);
    let c0_inv = c0.inverse(f)?;
    let a = p_rec.mul_series(f, &c0_inv)?;
    let b = if a.deg_y() == Some(0) {
        a.clone()
    } else {
        q_rec.rem_y(f, &a)?.add(f, &a)?
    };
    let mut u = c0.pow(f, d_q as u64);
    if d_c & d_q & 1 == 1 {
        u = u.neg(f);
    }

    // Branch 2: N(P) = n0 * x^(v) * C with C monic.
    let nu = nrm.div_x_pow(vp);
    let n0 = nu.leading_constant().ok_or(Error::NotNormal)?;
    let c = nu.scale(f, f.inv(n0)?);
    let d = if c.deg_y() == Some(0) {
        c.clone()
    } else {
        q.rem_y(f, &c)?.add(f, &c)?
    };
    let mut n0_pow = TruncSeries::constant(k, f.pow(n0, d_q as u64));
    if vp > 0 {
        // the x^vp inside N(P) contributes x^(vp * d_q)
        n0_pow = n0_pow.shift_up(vp * d_q);
    }
    u = u.mul(f, &n0_pow);
    Ok(MonicReduction { a, b, c, d, u })
}

/// Series of the coefficient of y^j at full precision.
fn y_coeff_series(p: &RkPoly, j: usize) -> TruncSeries {
    let k = p.precision();
    TruncSeries::from_coeffs(k, (0..k).map(|i| p.coeff(i, j)).collect())
}

/// First nonzero coefficient of the resultant, or a marker that the
/// resultant vanishes modulo x^k.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FirstCoeff {
    Present { mu: usize, c: FieldElem },
    Absent,
}

/// Finds the valuation and leading coefficient of Res(P, Q) for P normal,
/// by the cofactor recursion: each level pulls out the slice resultant or
/// descends to (N, M) built from a pseudo-inverse, shrinking both the degree
/// in y and the remaining precision budget.
pub fn first_nonzero_coeff(
    f: &PrimeField,
    engine: Engine,
    p: &RkPoly,
    q: &RkPoly,
) -> Result<FirstCoeff> {
    let k = p.precision();
    if (f.modulus() as u128) < k as u128 {
        return Err(Error::CharacteristicTooSmall { p: f.modulus(), k });
    }
    match fnzc_rec(f, engine, p, q, k as i64)? {
        None => Ok(FirstCoeff::Absent),
        Some((mu, c)) => Ok(FirstCoeff::Present { mu, c }),
    }
}

fn fnzc_rec(
    f: &PrimeField,
    engine: Engine,
    p: &RkPoly,
    q: &RkPoly,
    tau: i64,
) -> Result<Option<(usize, FieldElem)>> {
    if tau <= 0 || q.is_zero() {
        return Ok(None);
    }
    debug_assert!(p.is_normal(), "recursion requires a normal first entry");
    let a = p.valuation();
    let b = q.valuation();
    let dp = p.deg_y().unwrap();
    let dq = q.deg_y().unwrap();
    let shift = a * dq + b * dp;
    let tau = tau - shift as i64;
    if tau <= 0 {
        return Ok(None);
    }
    let p0 = p.div_x_pow(a);
    let q0 = q.div_x_pow(b);

    // Base case: the padded x^0 slice of the resultant.
    let sp = p0.xi(0);
    let sq = q0.xi(0);
    let p_lead = p0.leading_constant().expect("p0 is normal of valuation 0");
    let r0 = sp.resultant(f, &sq);
    if r0 != 0 {
        let pad = f.pow(p_lead, (dq - sq.degree().unwrap()) as u64);
        return Ok(Some((shift, f.mul(pad, r0))));
    }

    let pinv = match halfgcd::pseudo_inverse_with(f, engine, &p0, &q0)? {
        PseudoInverseOutcome::NoUnitReached => return Ok(None),
        PseudoInverseOutcome::Found(pi) => pi,
    };
    let t = pinv.t;
    if t as i64 >= tau {
        return Ok(None);
    }
    // Minimality of t forces the Q-cofactor to have valuation zero.
    assert_eq!(pinv.v.valuation(), 0, "cofactor valuation violates minimality");

    // Next pair: N = N_u(V) and M = (U / Lc(V)) rem_y N_u(Q), both mod x^(t+1).
    let k = p.precision();
    let prec = (t + 1).min(k);
    let (lc_v, n_v) = pinv.v.normalize(f, prec)?;
    let (_, n_q) = q0.normalize(f, prec.min(k - q0.valuation()))?;
    let nu_q = n_q.div_x_pow(q0.valuation());
    let a_inv = lc_v.inverse_mod(f, &nu_q, prec)?;
    let m = pinv
        .u
        .mul(f, &a_inv)?
        .rem_y(f, &nu_q)?
        .truncate_x(prec);
    let d_n = n_v.deg_y().unwrap();
    debug_assert!(d_n < dp);
    if cfg!(debug_assertions) {
        // M * P + N * Q = x^t * (unit with constant slice 1) mod x^(t+1)
        let e = m.mul(f, &p0)?.add(f, &n_v.mul(f, &q0)?)?;
        debug_assert_eq!(e.truncate_x(prec), RkPoly::x_pow(k, t));
    }

    let sub = fnzc_rec(f, engine, &n_v, &m, tau - (t * (dp - d_n)) as i64)?;
    let Some((mu_sub, c_sub)) = sub else { return Ok(None) };

    let n0 = n_v.leading_constant().expect("N is normal");
    let d_m = m.deg_y().map_or(0, |d| d);
    let mu = shift + t * (dp - d_n) + mu_sub;
    let num = f.pow(p_lead, (d_n + dq) as u64);
    let den = f.pow(n0, (d_m + dp) as u64);
    let mut c = f.mul(c_sub, f.mul(num, f.inv(den)?));
    if d_n & dp & 1 == 1 {
        c = f.neg(c);
    }
    Ok(Some((mu, c)))
}

/// Differential-equation data: x R' = R * F_tilde mod x^k with the initial
/// condition (mu, c).
#[derive(Debug, Clone)]
pub struct OdeData {
    pub f_tilde: TruncSeries,
    pub mu: usize,
    pub c: FieldElem,
}

/// Builds F_tilde from the trace formula. The pseudo-inverse is lifted to the
/// congruence U'P + V'Q = x^t mod x^(2t+k-1) by Newton inversion of the unit
/// 1 + xW modulo Q and modulo P; the two trace terms are the y^(d-1)
/// coefficients of the reduced products, taken mod x^(t+k-1) and divided by
/// x^(t-1).
pub fn compute_f(
    f: &PrimeField,
    p: &RkPoly,
    q: &RkPoly,
    pinv: &PseudoInverse,
    mu: usize,
    c: FieldElem,
) -> Result<OdeData> {
    let k = p.precision();
    let t = pinv.t;
    let kp = (2 * t + k - 1).max(k); // working precision; inputs are exact lifts
    let pl = p.lift_precision(kp);
    let ql = q.lift_precision(kp);
    let ul = pinv.u.lift_precision(kp);
    let vl = pinv.v.lift_precision(kp);
    let dp = p.deg_y().unwrap();
    let dq = q.deg_y().unwrap();

    // s0 = U P + V Q = x^t (1 + x W)
    let s0 = ul.mul(f, &pl)?.add(f, &vl.mul(f, &ql)?)?;
    if s0.truncate_x(t + 1) != RkPoly::x_pow(kp, t) {
        return Err(Error::InconsistentData);
    }
    let unit = s0.div_x_pow(t); // 1 + x W, a unit with constant slice 1
    let a_inv = unit.inverse_mod(f, &ql, kp)?;
    let b_inv = unit.inverse_mod(f, &pl, kp)?;
    let u_lift = ul.mul(f, &a_inv)?.rem_y(f, &ql)?;
    let v_lift = vl.mul(f, &b_inv)?.rem_y(f, &pl)?;
    if cfg!(debug_assertions) {
        let check = u_lift.mul(f, &pl)?.add(f, &v_lift.mul(f, &ql)?)?;
        debug_assert_eq!(check, RkPoly::x_pow(kp, t), "lifted congruence failed");
    }

    // F = coeff(U' dP/dx dQ/dy rem_y Q, y^(dq-1))
    //   + coeff(V' dQ/dx dP/dy rem_y P, y^(dp-1)), mod x^(t+k-1)
    let fprec = t + k - 1;
    let term1 = u_lift
        .mul(f, &pl.deriv_x(f))?
        .mul(f, &ql.deriv_y(f))?
        .rem_y(f, &ql)?;
    let term2 = v_lift
        .mul(f, &ql.deriv_x(f))?
        .mul(f, &pl.deriv_y(f))?
        .rem_y(f, &pl)?;
    let s1 = y_coeff_series(&term1, dq - 1).with_precision(fprec);
    let s2 = y_coeff_series(&term2, dp - 1).with_precision(fprec);
    let fser = s1.add(f, &s2);

    if t >= 1 && !fser.is_zero() && fser.valuation() < t - 1 {
        return Err(Error::ValuationViolation);
    }
    let f_tilde = if t >= 1 {
        let dropped = fser.shift_down(t - 1);
        dropped.with_precision(k)
    } else {
        fser.with_precision(k).shift_up(1)
    };
    Ok(OdeData { f_tilde, mu, c })
}

/// Solves x R' = R F_tilde mod x^k for R = c x^mu + ... via the coefficient
/// recurrence (n - mu) r_n = sum_(j=1)^(n-mu) f_j r_(n-j). Requires p >= k so
/// every divisor n - mu < k is invertible.
pub fn solve_ode(f: &PrimeField, data: &OdeData, k: usize) -> Result<TruncSeries> {
    if (f.modulus() as u128) < k as u128 {
        return Err(Error::CharacteristicTooSmall { p: f.modulus(), k });
    }
    let mu = data.mu;
    debug_assert!(mu < k);
    if data.f_tilde.coeff(0) != f.from_u128(mu as u128) {
        return Err(Error::InconsistentData);
    }
    let mut r = vec![0u64; k];
    r[mu] = data.c;
    for n in mu + 1..k {
        let mut sum = 0u64;
        for j in 1..=(n - mu) {
            sum = f.add(sum, f.mul(data.f_tilde.coeff(j), r[n - j]));
        }
        let div = f.inv(f.from_u128((n - mu) as u128))?;
        r[n] = f.mul(sum, div);
    }
    Ok(TruncSeries::from_coeffs(k, r))
}

/// Resultant of a monic pair via first coefficient + ODE reconstruction.
fn monic_pair_resultant(
    f: &PrimeField,
    engine: Engine,
    p: &RkPoly,
    q: &RkPoly,
) -> Result<TruncSeries> {
    let k = p.precision();
    if p.deg_y() == Some(0) || q.deg_y() == Some(0) {
        // monic of degree zero is the constant 1
        return Ok(TruncSeries::one(k));
    }
    match first_nonzero_coeff(f, engine, p, q)? {
        FirstCoeff::Absent => Ok(TruncSeries::zero(k)),
        FirstCoeff::Present { mu, c } => {
            let pinv = match halfgcd::pseudo_inverse_with(f, engine, p, q)? {
                PseudoInverseOutcome::Found(pi) => pi,
                PseudoInverseOutcome::NoUnitReached => return Err(Error::InconsistentData),
            };
            if mu == k - 1 {
                // no recurrence steps would run; skip the lift
                let mut r = vec![0u64; k];
                r[mu] = c;
                return Ok(TruncSeries::from_coeffs(k, r));
            }
            let ode = compute_f(f, p, q, &pinv, mu, c)?;
            solve_ode(f, &ode, k)
        }
    }
}

/// True-degree resultant of two nonzero R_k elements.
fn resultant_rk(f: &PrimeField, engine: Engine, p: &RkPoly, q: &RkPoly) -> Result<TruncSeries> {
    let k = p.precision();
    let dp = p.deg_y().unwrap();
    let dq = q.deg_y().unwrap();
    // y-free short-circuits: Res(P, q(x)) = q^deg P
    if dq == 0 {
        return Ok(y_free_series(q).pow(f, dp as u64));
    }
    if dp == 0 {
        return Ok(y_free_series(p).pow(f, dq as u64));
    }
    let a = p.valuation();
    let b = q.valuation();
    let shift = a * dq + b * dp;
    if shift >= k {
        return Ok(TruncSeries::zero(k));
    }
    let p0 = p.div_x_pow(a);
    let q0 = q.div_x_pow(b);
    let mr = monic_reduce(f, &p0, &q0)?;
    let r1 = monic_pair_resultant(f, engine, &mr.a, &mr.b)?;
    let r2 = monic_pair_resultant(f, engine, &mr.c, &mr.d)?;
    Ok(mr.u.mul(f, &r1).mul(f, &r2).shift_up(shift))
}

fn y_free_series(p: &RkPoly) -> TruncSeries {
    y_coeff_series(p, 0)
}

pub fn truncated_resultant(
    f: &PrimeField,
    pin: &BivariateInput,
    qin: &BivariateInput,
) -> Result<TruncSeries> {
    truncated_resultant_with(f, Engine::HalfGcd, pin, qin)
}

/// Full pipeline: characteristic guard, declared-degree reduction, valuation
/// extraction, monic reduction, first coefficient, ODE reconstruction.
pub fn truncated_resultant_with(
    f: &PrimeField,
    engine: Engine,
    pin: &BivariateInput,
    qin: &BivariateInput,
) -> Result<TruncSeries> {
    let k = pin.precision();
    if (f.modulus() as u128) < k as u128 {
        return Err(Error::CharacteristicTooSmall { p: f.modulus(), k });
    }
    if pin.y_degree.is_none() && qin.y_degree.is_none() {
        return Err(Error::BothZero);
    }
    match degree_cap_reduce(f, pin, qin)? {
        DegreeCapReduced::Zero => Ok(TruncSeries::zero(k)),
        DegreeCapReduced::Value(s) => Ok(s),
        DegreeCapReduced::Pair { p, q, adjust } => {
            let r = resultant_rk(f, engine, &p, &q)?;
            Ok(r.mul(f, &adjust))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;
    use crate::oracle;
    use rand::{Rng, SeedableRng};

    fn f65537() -> PrimeField {
        PrimeField::new(65537).unwrap()
    }

    fn f7() -> PrimeField {
        PrimeField::new(7).unwrap()
    }

    fn rk(f: &PrimeField, k: usize, t: &[(u64, usize, usize)]) -> RkPoly {
        RkPoly::from_terms(f, k, t)
    }

    fn series(k: usize, c: &[u64]) -> TruncSeries {
        TruncSeries::from_coeffs(k, c.to_vec())
    }

    #[test]
    fn degree_cap_examples() {
        let f = f65537();
        // both leading coefficients alive
        let p = BivariateInput::from_rk(&rk(&f, 3, &[(1, 0, 1)]));
        let q = BivariateInput::from_rk(&rk(&f, 3, &[(1, 0, 1), (1, 1, 0)]));
        match degree_cap_reduce(&f, &p, &q).unwrap() {
            DegreeCapReduced::Pair { adjust, .. } => assert_eq!(adjust, TruncSeries::one(3)),
            _ => panic!(),
        }
        // both leading coefficients beyond x^k
        let terms_p = [(1u64, 5usize, 2usize), (1, 0, 0)];
        let terms_q = [(1u64, 7usize, 1usize), (1, 0, 0)];
        let p = BivariateInput::from_terms(&f, 3, &terms_p);
        let q = BivariateInput::from_terms(&f, 3, &terms_q);
        assert!(matches!(
            degree_cap_reduce(&f, &p, &q).unwrap(),
            DegreeCapReduced::Zero
        ));
        // only Q's leading coefficient dies, P monic: adjust = 1^... = 1
        let p = BivariateInput::from_rk(&rk(&f, 3, &[(1, 0, 2), (3, 1, 0)]));
        let q = BivariateInput::from_terms(&f, 3, &[(1, 4, 2), (1, 0, 1), (2, 0, 0)]);
        match degree_cap_reduce(&f, &p, &q).unwrap() {
            DegreeCapReduced::Pair { adjust, q: qk, .. } => {
                assert_eq!(adjust, TruncSeries::one(3));
                assert_eq!(qk.deg_y(), Some(1));
            }
            _ => panic!(),
        }
    }

    #[test]
    fn monic_reduce_examples() {
        let f = f7();
        // P = 2y + 2x, Q = y, k = 3: degenerate unit branch, u * Res(C,D) = -2x
        let p = rk(&f, 3, &[(2, 0, 1), (2, 1, 0)]);
        let q = rk(&f, 3, &[(1, 0, 1)]);
        let mr = monic_reduce(&f, &p, &q).unwrap();
        assert_eq!(mr.a, RkPoly::one(3));
        assert_eq!(mr.b, RkPoly::one(3));
        assert_eq!(mr.u, series(3, &[2, 0, 0]));
        assert_eq!(mr.c, rk(&f, 3, &[(1, 0, 1), (1, 1, 0)]));
        assert_eq!(mr.d, rk(&f, 3, &[(1, 0, 1)]));
        // P monic already: A = B = 1, C = P, D = (Q rem P) + P, u = 1
        let p = rk(&f, 3, &[(1, 0, 2), (1, 1, 0)]);
        let q = rk(&f, 3, &[(1, 0, 1), (3, 0, 0)]);
        let mr = monic_reduce(&f, &p, &q).unwrap();
        assert_eq!(mr.a, RkPoly::one(3));
        assert_eq!(mr.c, p);
        assert_eq!(mr.u, TruncSeries::one(3));
        let expect_d = q.rem_y(&f, &p).unwrap().add(&f, &p).unwrap();
        assert_eq!(mr.d, expect_d);
    }

    #[test]
    fn monic_reduce_invariant_random() {
        let f = f65537();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(61);
        let mut done = 0;
        for _ in 0..200 {
            let k = rng.gen_range(1..=8usize);
            let p = instances::random_rk(&f, &mut rng, k, 4);
            let q = instances::random_rk(&f, &mut rng, k, 4);
            if p.is_zero() || q.is_zero() || p.valuation() > 0 {
                continue;
            }
            if p.deg_y() == Some(0) || q.deg_y() == Some(0) {
                continue;
            }
            let mr = monic_reduce(&f, &p, &q).unwrap();
            // A,B and C,D monic of equal degrees
            for pair in [(&mr.a, &mr.b), (&mr.c, &mr.d)] {
                assert_eq!(pair.0.deg_y(), pair.1.deg_y());
                assert_eq!(pair.0.leading_constant(), Some(1));
                assert_eq!(pair.1.leading_constant(), Some(1));
            }
            // u * Res(A,B) * Res(C,D) = oracle Res(P,Q)
            let r1 = oracle::oracle_resultant(
                &f,
                &BivariateInput::from_rk(&mr.a),
                &BivariateInput::from_rk(&mr.b),
            )
            .unwrap();
            let r2 = oracle::oracle_resultant(
                &f,
                &BivariateInput::from_rk(&mr.c),
                &BivariateInput::from_rk(&mr.d),
            )
            .unwrap();
            let lhs = mr.u.mul(&f, &r1).mul(&f, &r2);
            let rhs = oracle::oracle_resultant(
                &f,
                &BivariateInput::from_rk(&p),
                &BivariateInput::from_rk(&q),
            )
            .unwrap();
            assert_eq!(lhs, rhs);
            done += 1;
        }
        assert!(done > 40, "only {done} cases");
    }

    #[test]
    fn first_coeff_examples() {
        let f = f65537();
        // (y^2 - x, y^2 + x), k = 5 -> (2, 4)
        let p = rk(&f, 5, &[(1, 0, 2), (65536, 1, 0)]);
        let q = rk(&f, 5, &[(1, 0, 2), (1, 1, 0)]);
        assert_eq!(
            first_nonzero_coeff(&f, Engine::HalfGcd, &p, &q).unwrap(),
            FirstCoeff::Present { mu: 2, c: 4 }
        );
        // (y, y + x), k = 3 -> (1, 1)
        let p = rk(&f, 3, &[(1, 0, 1)]);
        let q = rk(&f, 3, &[(1, 0, 1), (1, 1, 0)]);
        assert_eq!(
            first_nonzero_coeff(&f, Engine::HalfGcd, &p, &q).unwrap(),
            FirstCoeff::Present { mu: 1, c: 1 }
        );
        // (y, y) -> Absent
        let p = rk(&f, 3, &[(1, 0, 1)]);
        assert_eq!(
            first_nonzero_coeff(&f, Engine::HalfGcd, &p, &p.clone()).unwrap(),
            FirstCoeff::Absent
        );
        // characteristic guard
        let f7 = f7();
        let p = rk(&f7, 10, &[(1, 0, 1)]);
        assert!(matches!(
            first_nonzero_coeff(&f7, Engine::HalfGcd, &p, &p.clone()),
            Err(Error::CharacteristicTooSmall { .. })
        ));
    }

    #[test]
    fn compute_f_examples() {
        let f = f65537();
        // P = y, Q = y + x, k = 3: t = 1, F = 1, F_tilde = 1
        let p = rk(&f, 3, &[(1, 0, 1)]);
        let q = rk(&f, 3, &[(1, 0, 1), (1, 1, 0)]);
        let pinv = match halfgcd::pseudo_inverse(&f, &p, &q).unwrap() {
            PseudoInverseOutcome::Found(pi) => pi,
            _ => panic!(),
        };
        let ode = compute_f(&f, &p, &q, &pinv, 1, 1).unwrap();
        assert_eq!(ode.f_tilde, TruncSeries::one(3));
        // P = y^2 - x, Q = y^2 + x, k = 4: F_tilde has constant term 2
        let p = rk(&f, 4, &[(1, 0, 2), (65536, 1, 0)]);
        let q = rk(&f, 4, &[(1, 0, 2), (1, 1, 0)]);
        let pinv = match halfgcd::pseudo_inverse(&f, &p, &q).unwrap() {
            PseudoInverseOutcome::Found(pi) => pi,
            _ => panic!(),
        };
        let ode = compute_f(&f, &p, &q, &pinv, 2, 4).unwrap();
        assert_eq!(ode.f_tilde.coeff(0), 2);
        // inputs constant in x: F = 0
        let p = rk(&f, 3, &[(1, 0, 2), (2, 0, 0)]);
        let q = rk(&f, 3, &[(1, 0, 1), (1, 0, 0)]);
        let pinv = match halfgcd::pseudo_inverse(&f, &p, &q).unwrap() {
            PseudoInverseOutcome::Found(pi) => pi,
            _ => panic!(),
        };
        let ode = compute_f(&f, &p, &q, &pinv, 0, f.sub(2, 1)).unwrap();
        assert!(ode.f_tilde.is_zero());
    }

    #[test]
    fn solve_ode_examples() {
        let f = f65537();
        // (F = 2, mu = 2, c = 4, k = 5) -> 4x^2
        let data = OdeData { f_tilde: series(5, &[2]), mu: 2, c: 4 };
        assert_eq!(solve_ode(&f, &data, 5).unwrap(), series(5, &[0, 0, 4, 0, 0]));
        // (F = 1, mu = 1, c = 1, k = 4) -> x
        let data = OdeData { f_tilde: series(4, &[1]), mu: 1, c: 1 };
        assert_eq!(solve_ode(&f, &data, 4).unwrap(), series(4, &[0, 1, 0, 0]));
        // (F = 1 + x, mu = 1, c = 1, k = 3) -> x + x^2
        let data = OdeData { f_tilde: series(3, &[1, 1]), mu: 1, c: 1 };
        assert_eq!(solve_ode(&f, &data, 3).unwrap(), series(3, &[0, 1, 1]));
        // inconsistent constant term
        let data = OdeData { f_tilde: series(3, &[2, 1]), mu: 1, c: 1 };
        assert!(matches!(solve_ode(&f, &data, 3), Err(Error::InconsistentData)));
        // characteristic guard
        let f7 = f7();
        let data = OdeData { f_tilde: series(10, &[0]), mu: 0, c: 1 };
        assert!(matches!(
            solve_ode(&f7, &data, 10),
            Err(Error::CharacteristicTooSmall { .. })
        ));
    }

    #[test]
    fn pipeline_examples() {
        let f = f65537();
        // (y, y+x), k = 4 -> x
        let p = BivariateInput::from_rk(&rk(&f, 4, &[(1, 0, 1)]));
        let q = BivariateInput::from_rk(&rk(&f, 4, &[(1, 0, 1), (1, 1, 0)]));
        assert_eq!(
            truncated_resultant(&f, &p, &q).unwrap(),
            series(4, &[0, 1, 0, 0])
        );
        // (y^2 - x, y^2 + x), k = 5 -> 4x^2
        let p = BivariateInput::from_rk(&rk(&f, 5, &[(1, 0, 2), (65536, 1, 0)]));
        let q = BivariateInput::from_rk(&rk(&f, 5, &[(1, 0, 2), (1, 1, 0)]));
        assert_eq!(
            truncated_resultant(&f, &p, &q).unwrap(),
            series(5, &[0, 0, 4, 0, 0])
        );
        // (2y + 2x, y), k = 3, p = 7 -> 5x
        let f7 = f7();
        let p = BivariateInput::from_rk(&rk(&f7, 3, &[(2, 0, 1), (2, 1, 0)]));
        let q = BivariateInput::from_rk(&rk(&f7, 3, &[(1, 0, 1)]));
        assert_eq!(
            truncated_resultant(&f7, &p, &q).unwrap(),
            series(3, &[0, 5, 0])
        );
        // both zero is an error
        let z = BivariateInput::from_rk(&RkPoly::zero(3));
        assert!(matches!(
            truncated_resultant(&f, &z, &z.clone()),
            Err(Error::BothZero)
        ));
    }

    #[test]
    fn pipeline_matches_oracle_random() {
        let f = f65537();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(62);
        for idx in 0..300 {
            let inst = instances::criterion1_instance(&f, &mut rng, idx);
            let fast = truncated_resultant_with(&f, Engine::HalfGcd, &inst.p, &inst.q);
            let slow = oracle::oracle_resultant(&f, &inst.p, &inst.q);
            match (fast, slow) {
                (Ok(a), Ok(b)) => assert_eq!(a, b, "mismatch on instance {idx}"),
                (a, b) => panic!("instance {idx}: fast {a:?} oracle {b:?}"),
            }
        }
    }

    #[test]
    fn multiplicativity_mod_xk() {
        let f = f65537();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(63);
        let mut done = 0;
        for _ in 0..120 {
            let k = rng.gen_range(1..=8usize);
            let p = instances::random_rk(&f, &mut rng, k, 3);
            if p.is_zero() {
                continue;
            }
            let dq = rng.gen_range(1..=3);
            let ds = rng.gen_range(1..=3);
            let q = instances::random_monic(&f, &mut rng, k, dq);
            let s = instances::random_monic(&f, &mut rng, k, ds);
            let qs = q.mul(&f, &s).unwrap();
            if qs.deg_y() != Some(q.deg_y().unwrap() + s.deg_y().unwrap()) {
                continue;
            }
            let pin = BivariateInput::from_rk(&p);
            let lhs = truncated_resultant(&f, &pin, &BivariateInput::from_rk(&qs)).unwrap();
            let r1 = truncated_resultant(&f, &pin, &BivariateInput::from_rk(&q)).unwrap();
            let r2 = truncated_resultant(&f, &pin, &BivariateInput::from_rk(&s)).unwrap();
            assert_eq!(lhs, r1.mul(&f, &r2));
            done += 1;
        }
        assert!(done > 40);
    }

    #[test]
    fn ode_residual_on_random_instances() {
        // x R' - R F_tilde = 0 mod x^k for monic pairs with nonzero resultant
        let f = f65537();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(64);
        let mut done = 0;
        for _ in 0..150 {
            let k = rng.gen_range(2..=8usize);
            let dp = rng.gen_range(1..=4);
            let dq = rng.gen_range(1..=4);
            let p = instances::random_monic(&f, &mut rng, k, dp);
            let q = instances::random_monic(&f, &mut rng, k, dq);
            let fc = first_nonzero_coeff(&f, Engine::HalfGcd, &p, &q).unwrap();
            let FirstCoeff::Present { mu, c } = fc else { continue };
            let pinv = match halfgcd::pseudo_inverse(&f, &p, &q).unwrap() {
                PseudoInverseOutcome::Found(pi) => pi,
                _ => continue,
            };
            let ode = compute_f(&f, &p, &q, &pinv, mu, c).unwrap();
            let r = solve_ode(&f, &ode, k).unwrap();
            let xr = r.derivative(&f).shift_up(1);
            let rhs = r.mul(&f, &ode.f_tilde);
            assert_eq!(xr, rhs, "residual nonzero");
            // and R matches the oracle
            let orc = oracle::oracle_resultant(
                &f,
                &BivariateInput::from_rk(&p),
                &BivariateInput::from_rk(&q),
            )
            .unwrap();
            assert_eq!(r, orc);
            done += 1;
        }
        assert!(done > 50, "only {done} cases");
    }

    #[test]
    fn recurrence_identity_small() {
        // One recursion level: valuations and leading constants of
        // Res(P, Q) and Res(N, M) relate by the displayed constant.
        let f = f65537();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(65);
        let mut done = 0;
        for _ in 0..800 {
            let k = rng.gen_range(2..=6usize);
            let dp = rng.gen_range(1..=3usize);
            let dq = rng.gen_range(1..=3usize);
            let p = instances::random_monic(&f, &mut rng, k, dp);
            let q = instances::random_monic(&f, &mut rng, k, dq);
            // need the slice resultant to vanish and a usable pseudo-inverse
            if p.xi(0).resultant(&f, &q.xi(0)) != 0 {
                continue;
            }
            let pinv = match halfgcd::pseudo_inverse(&f, &p, &q).unwrap() {
                PseudoInverseOutcome::Found(pi) => pi,
                _ => continue,
            };
            let t = pinv.t;
            if t + 1 >= k {
                continue;
            }
            let prec = t + 1;
            let (lc_v, n_v) = pinv.v.normalize(&f, prec).unwrap();
            let (_, nu_q) = q.normalize(&f, prec).unwrap();
            let a_inv = lc_v.inverse_mod(&f, &nu_q, prec).unwrap();
            let m = pinv.u.mul(&f, &a_inv).unwrap().rem_y(&f, &nu_q).unwrap().truncate_x(prec);
            if m.is_zero() {
                continue;
            }
            let res_pq = oracle::oracle_resultant(
                &f,
                &BivariateInput::from_rk(&p),
                &BivariateInput::from_rk(&q),
            )
            .unwrap();
            let res_nm = oracle::oracle_resultant(
                &f,
                &BivariateInput::from_rk(&n_v),
                &BivariateInput::from_rk(&m),
            )
            .unwrap();
            if res_pq.is_zero() || res_nm.is_zero() {
                continue;
            }
            let d_n = n_v.deg_y().unwrap();
            let d_m = m.deg_y().unwrap();
            let p0 = p.leading_constant().unwrap();
            let n0 = n_v.leading_constant().unwrap();
            // valuations
            assert_eq!(res_pq.valuation(), t * (dp - d_n) + res_nm.valuation());
            // leading constants per the displayed factor
            let num = f.pow(p0, (d_n + dq) as u64);
            let den = f.pow(n0, (d_m + dp) as u64);
            let mut expect = f.mul(
                res_nm.coeff(res_nm.valuation()),
                f.mul(num, f.inv(den).unwrap()),
            );
            if d_n & dp & 1 == 1 {
                expect = f.neg(expect);
            }
            assert_eq!(res_pq.coeff(res_pq.valuation()), expect);
            done += 1;
        }
        assert!(done > 20, "only {done} cases");
    }
}
