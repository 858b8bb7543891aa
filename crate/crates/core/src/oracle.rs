//! Independent reference implementations: the truncated resultant by
//! evaluation and interpolation of padded Sylvester determinants, and
//! brute-force ideal computations used by the property suite.

use crate::error::{Error, Result};
use crate::field::{FieldElem, PrimeField};
use crate::pseudo::PairS;
use crate::resultant::BivariateInput;
use crate::rk::RkPoly;
use crate::upoly::{TruncSeries, UPoly};

/// Determinant of the Sylvester matrix padded to declared degrees (m, n):
/// the matrix is (m+n) x (m+n) even if the actual leading coefficients are
/// zero, which makes it stable under evaluation of x.
pub fn padded_sylvester_det(
    f: &PrimeField,
    a: &UPoly,
    m: usize,
    b: &UPoly,
    n: usize,
) -> FieldElem {
    let dim = m + n;
    if dim == 0 {
        return f.one();
    }
    let mut mat = vec![vec![0u64; dim]; dim];
    for i in 0..n {
        for c in i..=(i + m) {
            mat[i][c] = a.coeff(m - (c - i));
        }
    }
    for j in 0..m {
        for c in j..=(j + n) {
            mat[n + j][c] = b.coeff(n - (c - j));
        }
    }
    det_in_place(f, &mut mat)
}

fn det_in_place(f: &PrimeField, mat: &mut [Vec<u64>]) -> FieldElem {
    let dim = mat.len();
    let mut det = f.one();
    for col in 0..dim {
        let pivot = (col..dim).find(|&r| mat[r][col] != 0);
        let Some(pivot) = pivot else { return 0 };
        if pivot != col {
            mat.swap(pivot, col);
            det = f.neg(det);
        }
        let pv = mat[col][col];
        det = f.mul(det, pv);
        let pv_inv = f.inv(pv).expect("pivot is nonzero");
        for r in col + 1..dim {
            if mat[r][col] == 0 {
                continue;
            }
            let factor = f.mul(mat[r][col], pv_inv);
            for c in col..dim {
                let t = f.mul(factor, mat[col][c]);
                mat[r][c] = f.sub(mat[r][c], t);
            }
        }
    }
    det
}

/// Ground truth for the truncated resultant: evaluates x at 0, 1, 2, ...,
/// takes the padded Sylvester determinant at every point, interpolates the
/// exact polynomial and truncates to k. Exact at every point, so no
/// randomization is needed.
pub fn oracle_resultant(
    f: &PrimeField,
    pin: &BivariateInput,
    qin: &BivariateInput,
) -> Result<TruncSeries> {
    let k = pin.poly.precision();
    debug_assert_eq!(k, qin.poly.precision());
    let (Some(dp), Some(dq)) = (pin.y_degree, qin.y_degree) else {
        // A zero input has resultant 0 under the shared convention.
        return Ok(TruncSeries::zero(k));
    };
    if dp + dq == 0 {
        return Ok(TruncSeries::one(k));
    }
    let xdeg = |p: &RkPoly| -> usize {
        p.terms().iter().map(|t| t.1).max().unwrap_or(0)
    };
    let bound = dp * xdeg(&qin.poly) + dq * xdeg(&pin.poly);
    if f.modulus() <= bound as u64 {
        return Err(Error::FieldTooSmall { p: f.modulus(), needed: bound as u64 + 1 });
    }
    let mut points = Vec::with_capacity(bound + 1);
    for x in 0..=bound as u64 {
        let pa = pin.poly.eval_x(f, x);
        let qa = qin.poly.eval_x(f, x);
        points.push((x, padded_sylvester_det(f, &pa, dp, &qa, dq)));
    }
    let res = UPoly::interpolate(f, &points)?;
    Ok(TruncSeries::from_coeffs(
        k,
        res.coeffs().iter().take(k).copied().collect(),
    ))
}

/// Basis (reduced row echelon, by increasing degree) of the ideal slice
/// I_t(s) = sigma_0(<P,Q> : x^(v(s)+t)) in K[y], computed by linear algebra
/// over the coefficient space of bounded-degree combinations.
pub fn ideal_slice(f: &PrimeField, s: &PairS, t: usize) -> Result<Vec<UPoly>> {
    if s.is_zero() {
        return Ok(Vec::new());
    }
    let k = s.precision();
    debug_assert!(t < k);
    slice_of_span(f, s.first(), s.second(), s.valuation() + t)
}

/// Smallest absolute order t with x^t contained in <P, Q>, or None when no
/// t below the precision qualifies.
pub fn minimal_unit_order(f: &PrimeField, p: &RkPoly, q: &RkPoly) -> Result<Option<usize>> {
    let k = p.precision();
    for t in 0..k {
        let basis = slice_of_span(f, p, q, t)?;
        if basis.iter().any(|b| b.degree() == Some(0)) {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// Slices the K-span of { x^a y^b P, x^a y^b Q } at x-order `cut`: returns an
/// echelon basis of { Xi_cut(W) : W in <P,Q>, v(W) >= cut } in K[y].
fn slice_of_span(f: &PrimeField, p: &RkPoly, q: &RkPoly, cut: usize) -> Result<Vec<UPoly>> {
    let k = p.precision();
    if cut >= k {
        return Ok(Vec::new());
    }
    let d = p.deg_y().unwrap_or(0).max(q.deg_y().unwrap_or(0));
    // Multiplier degree budget for the brute force; generous at the small
    // sizes this is used for, guarded against blow-ups.
    let ymult = 2 * (d + 1) * (k + 1);
    let ydim = ymult + d + 1;
    let cols = ydim * k;
    let rows = 2 * k * ymult;
    if cols * rows > 4_000_000 {
        return Err(Error::TooLarge);
    }

    // Coordinate key: x-degree major, ascending, so the echelon rows whose
    // pivots sit at x-degree >= cut span exactly the high-valuation part.
    let key = |xe: usize, ye: usize| xe * ydim + ye;
    let mut rows_vec: Vec<Vec<u64>> = Vec::with_capacity(rows);
    for gen in [p, q] {
        if gen.is_zero() {
            continue;
        }
        for a in 0..k {
            for b in 0..ymult {
                let mut row = vec![0u64; cols];
                let mut nonzero = false;
                for (c, xe, ye) in gen.terms() {
                    if xe + a < k {
                        row[key(xe + a, ye + b)] = c;
                        nonzero = true;
                    }
                }
                if nonzero {
                    rows_vec.push(row);
                }
            }
        }
    }
    echelonize(f, &mut rows_vec);

    // Rows with pivot at x-degree >= cut; read their slice at x = cut.
    let mut slices: Vec<Vec<u64>> = Vec::new();
    for row in &rows_vec {
        let pivot = row.iter().position(|&c| c != 0);
        let Some(pivot) = pivot else { continue };
        if pivot / ydim < cut {
            continue;
        }
        let slice: Vec<u64> = (0..ydim).map(|ye| row[key(cut, ye)]).collect();
        if slice.iter().any(|&c| c != 0) {
            slices.push(slice);
        }
    }
    echelonize(f, &mut slices);
    // An ideal of K[y] is principal: report the monic gcd of the slice
    // subspace as its basis.
    let mut gen: Option<UPoly> = None;
    for row in slices {
        if row.iter().all(|&c| c == 0) {
            continue;
        }
        let p = UPoly::from_coeffs(row);
        gen = Some(match gen {
            None => p,
            Some(g) => poly_gcd(f, &g, &p)?,
        });
    }
    match gen {
        None => Ok(Vec::new()),
        Some(g) => Ok(vec![g.monic(f)?]),
    }
}

fn poly_gcd(f: &PrimeField, a: &UPoly, b: &UPoly) -> Result<UPoly> {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_zero() {
        let r = a.rem(f, &b)?;
        a = b;
        b = r;
    }
    Ok(a)
}

/// In-place reduced row echelon form over F_p; zero rows are dropped.
fn echelonize(f: &PrimeField, rows: &mut Vec<Vec<u64>>) {
    let mut pivots: Vec<(usize, Vec<u64>)> = Vec::new();
    for row in rows.drain(..) {
        let mut row = row;
        loop {
            let Some(lead) = row.iter().position(|&c| c != 0) else { break };
            if let Some((_, basis_row)) = pivots.iter().find(|(p, _)| *p == lead) {
                let factor = row[lead];
                for (dst, src) in row.iter_mut().zip(basis_row.iter()) {
                    *dst = f.sub(*dst, f.mul(factor, *src));
                }
            } else {
                let inv = f.inv(row[lead]).expect("leading entry nonzero");
                for c in row.iter_mut() {
                    *c = f.mul(*c, inv);
                }
                pivots.push((lead, row));
                break;
            }
        }
    }
    pivots.sort_by_key(|(p, _)| *p);
    // back-substitute for a canonical reduced form
    for i in (0..pivots.len()).rev() {
        let (lead, row) = pivots[i].clone();
        for (_, other) in pivots.iter_mut().take(i) {
            let factor = other[lead];
            if factor != 0 {
                for (dst, src) in other.iter_mut().zip(row.iter()) {
                    *dst = f.sub(*dst, f.mul(factor, *src));
                }
            }
        }
    }
    *rows = pivots.into_iter().map(|(_, r)| r).collect();
}
