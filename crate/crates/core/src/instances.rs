//! Seeded random instance generators shared by the property suite, the
//! selftest command and the benchmark driver.

use rand::Rng;

use crate::field::PrimeField;
use crate::pseudo::PairS;
use crate::resultant::BivariateInput;
use crate::rk::RkPoly;
use crate::upoly::TruncSeries;

pub fn random_series<R: Rng>(f: &PrimeField, rng: &mut R, prec: usize) -> TruncSeries {
    TruncSeries::from_coeffs(prec, (0..prec).map(|_| rng.gen_range(0..f.modulus())).collect())
}

/// Random element of R_k with y-degree up to `max_dy`, about 60% dense.
pub fn random_rk<R: Rng>(f: &PrimeField, rng: &mut R, k: usize, max_dy: usize) -> RkPoly {
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

/// Random normal polynomial of exact y-degree `dy` (constant leading
/// coefficient at a random valuation).
pub fn random_normal<R: Rng>(f: &PrimeField, rng: &mut R, k: usize, dy: usize) -> RkPoly {
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

/// Random monic polynomial in y of exact degree `dy`, valuation 0.
pub fn random_monic<R: Rng>(f: &PrimeField, rng: &mut R, k: usize, dy: usize) -> RkPoly {
    let mut terms = vec![(1, 0, dy)];
    for ye in 0..dy {
        for xe in 0..k {
            if rng.gen_bool(0.7) {
                terms.push((rng.gen_range(0..f.modulus()), xe, ye));
            }
        }
    }
    RkPoly::from_terms(f, k, &terms)
}

/// Random unit of R_k with constant slice 1 (the shape of Lc factors).
pub fn random_unit<R: Rng>(f: &PrimeField, rng: &mut R, k: usize, max_dy: usize) -> RkPoly {
    let mut terms = vec![(1, 0, 0)];
    let dy = rng.gen_range(0..=max_dy);
    for ye in 0..=dy {
        for xe in 1..k {
            if rng.gen_bool(0.5) {
                terms.push((rng.gen_range(0..f.modulus()), xe, ye));
            }
        }
    }
    RkPoly::from_terms(f, k, &terms)
}

/// Random member of S_k (strict valuation order), or None when the draw
/// cannot be repaired into one.
pub fn random_pair_s<R: Rng>(
    f: &PrimeField,
    rng: &mut R,
    k: usize,
    max_dy: usize,
) -> Option<PairS> {
    let p = random_rk(f, rng, k, max_dy);
    let q = random_rk(f, rng, k, max_dy);
    if p.is_zero() && q.is_zero() {
        return Some(PairS::zero(k));
    }
    let (a, b) = if p.valuation() < q.valuation() {
        (p, q)
    } else if q.valuation() < p.valuation() {
        (q, p)
    } else {
        let shifted = q.mul_x_pow(1);
        if p.valuation() < shifted.valuation() {
            (p, shifted)
        } else {
            return None;
        }
    };
    if a.is_zero() {
        return None;
    }
    PairS::new(a, b).ok()
}

/// One randomized pipeline instance, cycling through the degenerate families
/// that exercise every reduction branch.
pub struct PipelineInstance {
    pub p: BivariateInput,
    pub q: BivariateInput,
    pub k: usize,
    pub family: &'static str,
}

pub use PipelineInstance as Criterion1Instance;

/// Instance generator for the oracle-equivalence suite: d in [1,6],
/// k in [1,12], with degenerate families interleaved.
pub fn criterion1_instance<R: Rng>(
    f: &PrimeField,
    rng: &mut R,
    idx: usize,
) -> PipelineInstance {
    let k = rng.gen_range(1..=12usize);
    let dp = rng.gen_range(1..=6usize);
    let dq = rng.gen_range(1..=6usize);
    let dense = |rng: &mut R, dy: usize| -> RkPoly {
        let mut terms = Vec::new();
        for ye in 0..=dy {
            for xe in 0..k {
                if rng.gen_bool(0.7) {
                    terms.push((rng.gen_range(0..f.modulus()), xe, ye));
                }
            }
        }
        RkPoly::from_terms(f, k, &terms)
    };
    let family = idx % 8;
    let (mut p, q, name) = match family {
        0 | 1 | 2 => (dense(rng, dp), dense(rng, dq), "generic"),
        3 => {
            // common factor y - x
            let fac = RkPoly::from_terms(f, k, &[(1, 0, 1), (f.modulus() - 1, 1, 0)]);
            let p = dense(rng, dp.saturating_sub(1)).mul(f, &fac).unwrap();
            let q = dense(rng, dq.saturating_sub(1)).mul(f, &fac).unwrap();
            (p, q, "common-factor")
        }
        4 => {
            let p = dense(rng, dp);
            (p.clone(), p, "equal")
        }
        5 => {
            let p = dense(rng, dp);
            let u = random_unit(f, rng, k, 1);
            let q = p.mul(f, &u).unwrap();
            (p, q, "unit-multiple")
        }
        6 => {
            // positive valuations on both sides
            let p = dense(rng, dp);
            let q = dense(rng, dq);
            if k >= 2 {
                let a = rng.gen_range(1..k);
                let b = rng.gen_range(1..k);
                (p.mul_x_pow(a), q.mul_x_pow(b), "positive-valuation")
            } else {
                (p, q, "generic")
            }
        }
        _ => {
            // leading-coefficient drop: declared degree above the truncated one
            let p = dense(rng, dp);
            let q = dense(rng, dq);
            let extra = rng.gen_range(1..=2usize);
            let qin = BivariateInput {
                poly: q.clone(),
                y_degree: Some(dq + extra),
                lead_coeff: TruncSeries::zero(k),
            };
            let pin = if rng.gen_bool(0.3) {
                // both leading coefficients beyond x^k
                BivariateInput {
                    poly: p,
                    y_degree: Some(dp + 1),
                    lead_coeff: TruncSeries::zero(k),
                }
            } else {
                BivariateInput::from_rk(&p)
            };
            return PipelineInstance { p: pin, q: qin, k, family: "lead-drop" };
        }
    };
    if p.is_zero() && q.is_zero() {
        // the pipeline rejects the all-zero pair; keep instances comparable
        p = RkPoly::from_terms(f, k, &[(1, 0, 1)]);
    }
    PipelineInstance {
        p: BivariateInput::from_rk(&p),
        q: BivariateInput::from_rk(&q),
        k,
        family: name,
    }
}

/// Dense benchmark pair of exact y-degree d with unit constant slices, the
/// stable-timing shape for scaling measurements.
pub fn bench_pair<R: Rng>(
    f: &PrimeField,
    rng: &mut R,
    k: usize,
    d: usize,
) -> (BivariateInput, BivariateInput) {
    let gen_one = |rng: &mut R| -> RkPoly {
        let mut terms = Vec::new();
        for ye in 0..=d {
            for xe in 0..k {
                // nonzero leading slice keeps the pair in the generic branch
                let c = if ye == d && xe == 0 {
                    rng.gen_range(1..f.modulus())
                } else {
                    rng.gen_range(0..f.modulus())
                };
                terms.push((c, xe, ye));
            }
        }
        RkPoly::from_terms(f, k, &terms)
    };
    let p = gen_one(rng);
    let q = gen_one(rng);
    (BivariateInput::from_rk(&p), BivariateInput::from_rk(&q))
}
