//! Seeded property suite reused by the `selftest` CLI command. Each check
//! runs a batch of randomized cases and reports pass/fail counts instead of
//! panicking, so the binary can print a summary and exit accordingly.

use rand::SeedableRng;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::field::PrimeField;
use crate::halfgcd::{self, Engine, PseudoInverseOutcome};
use crate::instances;
use crate::oracle;
use crate::pseudo;
use crate::resultant::{self, BivariateInput};

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }
}

/// Runs the full suite with a seeded generator.
pub fn run_all(seed: u64) -> Vec<CheckReport> {
    vec![
        check_pseudo_ideal_witness(seed),
        check_pseudo_online(seed ^ 0x9e37_79b9),
        check_eta_ideal_structure(seed ^ 0x51f1_5ead),
        check_halfgcd_vs_iterative(seed ^ 0xc0ff_ee11),
        check_pseudo_inverse_contract(seed ^ 0xdead_beef),
        check_resultant_oracle_agreement(seed ^ 0x1234_5678),
        check_ode_residual(seed ^ 0x0bad_cafe),
        check_multiplicativity(seed ^ 0xfeed_face),
    ]
}

fn field() -> PrimeField {
    PrimeField::new(65537).unwrap()
}

pub fn check_pseudo_ideal_witness(seed: u64) -> CheckReport {
    let f = field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = 0;
    let mut failures = 0;
    for _ in 0..200 {
        let k = rng.gen_range(1..=8usize);
        let Some(s) = instances::random_pair_s(&f, &mut rng, k, 4) else { continue };
        if s.is_zero() {
            continue;
        }
        cases += 1;
        let ok = (|| -> crate::Result<bool> {
            let parts = pseudo::q_op_parts(&f, &s)?;
            let m = pseudo::q_matrix_exact(&f, &parts)?;
            let (a, b) = m.apply(&f, &s)?;
            if (&a, &b) != (parts.out.first(), parts.out.second()) {
                return Ok(false);
            }
            let det = m.det(&f)?;
            let adj = m.adjugate(&f);
            let (x, y) = adj.apply_raw(&f, &a, &b)?;
            Ok(x == det.mul(&f, s.first())? && y == det.mul(&f, s.second())?)
        })();
        if !matches!(ok, Ok(true)) {
            failures += 1;
        }
    }
    CheckReport { name: "pseudo: ideal witness adj(M)*out = det(M)*s", cases, failures }
}

pub fn check_pseudo_online(seed: u64) -> CheckReport {
    let f = field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = 0;
    let mut failures = 0;
    for _ in 0..200 {
        let k = rng.gen_range(2..=8usize);
        let Some(s) = instances::random_pair_s(&f, &mut rng, k, 3) else { continue };
        if s.is_zero() {
            continue;
        }
        let Ok(et) = pseudo::eta_exact(&f, &s) else { continue };
        cases += 1;
        let ok = (|| -> crate::Result<bool> {
            for i in 1..=et.min(k - s.valuation()) {
                let st = s.pi(i);
                if st.is_zero() {
                    continue;
                }
                let parts = pseudo::q_op_parts(&f, &st)?;
                if parts.out.valuation().min(k) - s.valuation() < i {
                    return Ok(false);
                }
            }
            Ok(true)
        })();
        if !matches!(ok, Ok(true)) {
            failures += 1;
        }
    }
    CheckReport { name: "pseudo: online truncation property", cases, failures }
}

pub fn check_eta_ideal_structure(seed: u64) -> CheckReport {
    let f = field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = 0;
    let mut failures = 0;
    for _ in 0..100 {
        let k = rng.gen_range(2..=4usize);
        let Some(s) = instances::random_pair_s(&f, &mut rng, k, 3) else { continue };
        if s.is_zero() || s.valuation() > 0 {
            continue;
        }
        let Ok(et) = pseudo::eta_exact(&f, &s) else { continue };
        cases += 1;
        let ok = (|| -> crate::Result<bool> {
            let base = oracle::ideal_slice(&f, &s, 0)?;
            for t in 1..k - s.valuation() {
                let cur = oracle::ideal_slice(&f, &s, t)?;
                let same = cur == base;
                if t < et && !same {
                    return Ok(false);
                }
                if t == et && same {
                    return Ok(false);
                }
                if t >= et {
                    break;
                }
            }
            Ok(true)
        })();
        if !matches!(ok, Ok(true)) {
            failures += 1;
        }
    }
    CheckReport { name: "pseudo: ideal slices jump exactly at eta", cases, failures }
}

pub fn check_halfgcd_vs_iterative(seed: u64) -> CheckReport {
    let f = field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = 0;
    let mut failures = 0;
    for _ in 0..200 {
        let k = rng.gen_range(1..=10usize);
        let Some(s) = instances::random_pair_s(&f, &mut rng, k, 5) else { continue };
        if s.is_zero() {
            continue;
        }
        let n = rng.gen_range(0..k);
        cases += 1;
        let ok = (|| -> crate::Result<bool> {
            let h = halfgcd::half_gcd_matrix(&f, n, &s)?;
            let (_, qout) = pseudo::q_iter(&f, &s, n)?;
            let (ha, hb) = h.apply(&f, &s)?;
            let qa = qout.first();
            let hv = ha.valuation().min(hb.valuation()).min(k);
            let qv = qa.valuation().min(qout.second().valuation()).min(k);
            if hv != qv {
                return Ok(false);
            }
            if !qa.is_zero() {
                let v = qa.valuation();
                let s1 = ha.xi(v);
                let s2 = qa.xi(v);
                if s1.degree() != s2.degree() {
                    return Ok(false);
                }
                let d = s1.degree().unwrap();
                let c = f.mul(s2.coeff(d), f.inv(s1.coeff(d))?);
                if s1.scale(&f, c) != s2 {
                    return Ok(false);
                }
                if !hb.pi(1).is_zero() && hb.valuation() <= v {
                    return Ok(false);
                }
            }
            Ok(true)
        })();
        if !matches!(ok, Ok(true)) {
            failures += 1;
        }
    }
    CheckReport { name: "halfgcd: equivalent to the iterated operator", cases, failures }
}

pub fn check_pseudo_inverse_contract(seed: u64) -> CheckReport {
    let f = field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = 0;
    let mut failures = 0;
    for _ in 0..200 {
        let k = rng.gen_range(1..=8usize);
        let p = instances::random_rk(&f, &mut rng, k, 4);
        let q = instances::random_rk(&f, &mut rng, k, 4);
        if p.is_zero() && q.is_zero() {
            continue;
        }
        cases += 1;
        let ok = (|| -> crate::Result<bool> {
            match halfgcd::pseudo_inverse(&f, &p, &q)? {
                PseudoInverseOutcome::NoUnitReached => Ok(true),
                PseudoInverseOutcome::Found(pi) => {
                    let lhs = pi
                        .u
                        .mul(&f, &p)?
                        .add(&f, &pi.v.mul(&f, &q)?)?
                        .truncate_x((pi.t + 1).min(k));
                    if lhs != crate::rk::RkPoly::x_pow(k, pi.t) {
                        return Ok(false);
                    }
                    let du_ok = pi.u.is_zero()
                        || q.deg_y().map_or(true, |d| pi.u.deg_y().unwrap() < d.max(1));
                    let dv_ok = pi.v.is_zero()
                        || p.deg_y().map_or(true, |d| pi.v.deg_y().unwrap() < d.max(1));
                    Ok(du_ok && dv_ok)
                }
            }
        })();
        if !matches!(ok, Ok(true)) {
            failures += 1;
        }
    }
    CheckReport { name: "halfgcd: pseudo-inverse identity and degrees", cases, failures }
}

pub fn check_resultant_oracle_agreement(seed: u64) -> CheckReport {
    let f = field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = 0;
    let mut failures = 0;
    for idx in 0..100 {
        let inst = instances::criterion1_instance(&f, &mut rng, idx);
        cases += 1;
        let fast = resultant::truncated_resultant_with(&f, Engine::HalfGcd, &inst.p, &inst.q);
        let iter = resultant::truncated_resultant_with(&f, Engine::Iterative, &inst.p, &inst.q);
        let slow = oracle::oracle_resultant(&f, &inst.p, &inst.q);
        match (fast, iter, slow) {
            (Ok(a), Ok(b), Ok(c)) => {
                if a != c || b != c {
                    failures += 1;
                }
            }
            _ => failures += 1,
        }
    }
    CheckReport { name: "resultant: fast = iterative = oracle", cases, failures }
}

pub fn check_ode_residual(seed: u64) -> CheckReport {
    let f = field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = 0;
    let mut failures = 0;
    for _ in 0..100 {
        let k = rng.gen_range(2..=8usize);
        let dp = rng.gen_range(1..=4);
        let dq = rng.gen_range(1..=4);
        let p = instances::random_monic(&f, &mut rng, k, dp);
        let q = instances::random_monic(&f, &mut rng, k, dq);
        let ok = (|| -> crate::Result<Option<bool>> {
            let fc = resultant::first_nonzero_coeff(&f, Engine::HalfGcd, &p, &q)?;
            let resultant::FirstCoeff::Present { mu, c } = fc else { return Ok(None) };
            let pi = match halfgcd::pseudo_inverse(&f, &p, &q)? {
                PseudoInverseOutcome::Found(pi) => pi,
                _ => return Ok(None),
            };
            let ode = resultant::compute_f(&f, &p, &q, &pi, mu, c)?;
            let r = resultant::solve_ode(&f, &ode, k)?;
            let lhs = r.derivative(&f).shift_up(1);
            Ok(Some(lhs == r.mul(&f, &ode.f_tilde)))
        })();
        match ok {
            Ok(None) => {}
            Ok(Some(true)) => cases += 1,
            _ => {
                cases += 1;
                failures += 1;
            }
        }
    }
    CheckReport { name: "resultant: ODE residual x R' = R F~", cases, failures }
}

pub fn check_multiplicativity(seed: u64) -> CheckReport {
    let f = field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = 0;
    let mut failures = 0;
    for _ in 0..80 {
        let k = rng.gen_range(1..=8usize);
        let p = instances::random_rk(&f, &mut rng, k, 3);
        if p.is_zero() {
            continue;
        }
        let dq = rng.gen_range(1..=3);
        let ds = rng.gen_range(1..=3);
        let q = instances::random_monic(&f, &mut rng, k, dq);
        let s = instances::random_monic(&f, &mut rng, k, ds);
        let Ok(qs) = q.mul(&f, &s) else { continue };
        if qs.deg_y() != Some(q.deg_y().unwrap() + s.deg_y().unwrap()) {
            continue;
        }
        cases += 1;
        let ok = (|| -> crate::Result<bool> {
            let pin = BivariateInput::from_rk(&p);
            let lhs = resultant::truncated_resultant(&f, &pin, &BivariateInput::from_rk(&qs))?;
            let r1 = resultant::truncated_resultant(&f, &pin, &BivariateInput::from_rk(&q))?;
            let r2 = resultant::truncated_resultant(&f, &pin, &BivariateInput::from_rk(&s))?;
            Ok(lhs == r1.mul(&f, &r2))
        })();
        if !matches!(ok, Ok(true)) {
            failures += 1;
        }
    }
    CheckReport { name: "resultant: multiplicative in the second argument", cases, failures }
}
