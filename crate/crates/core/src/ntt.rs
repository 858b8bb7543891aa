//! Dense coefficient multiplication mod p.
//!
//! Small products use schoolbook with delayed reduction. Large products run a
//! number-theoretic transform modulo three fixed primes with large power-of-two
//! subgroups, then recombine with Garner's algorithm. The three-prime product
//! exceeds 2^183, which covers exact integer convolutions of length up to 2^24
//! for any working modulus below 2^62.

/// NTT-friendly primes `c * 2^a + 1` with a primitive root each.
const Q1: u64 = 4_179_340_454_199_820_289; // 29 * 2^57 + 1
const G1: u64 = 3;
const Q2: u64 = 1_945_555_039_024_054_273; // 27 * 2^56 + 1
const G2: u64 = 5;
const Q3: u64 = 2_053_641_430_080_946_177; // 57 * 2^55 + 1
const G3: u64 = 7;

const SCHOOLBOOK_CUTOFF: usize = 32;

#[inline]
fn mulmod<const Q: u64>(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % Q as u128) as u64
}

fn powmod<const Q: u64>(mut a: u64, mut e: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod::<Q>(acc, a);
        }
        a = mulmod::<Q>(a, a);
        e >>= 1;
    }
    acc
}

/// In-place iterative Cooley-Tukey transform of power-of-two length.
fn ntt<const Q: u64, const G: u64>(a: &mut [u64], invert: bool) {
    let n = a.len();
    debug_assert!(n.is_power_of_two());
    debug_assert!((Q - 1) % n as u64 == 0);

    // Bit-reversal permutation.
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }

    let mut len = 2;
    while len <= n {
        let mut w = powmod::<Q>(G, (Q - 1) / len as u64);
        if invert {
            w = powmod::<Q>(w, Q - 2);
        }
        for block in a.chunks_mut(len) {
            let (lo, hi) = block.split_at_mut(len / 2);
            let mut wn = 1u64;
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                let u = *x;
                let v = mulmod::<Q>(*y, wn);
                *x = if u + v >= Q { u + v - Q } else { u + v };
                *y = if u >= v { u - v } else { u + Q - v };
                wn = mulmod::<Q>(wn, w);
            }
        }
        len <<= 1;
    }

    if invert {
        let n_inv = powmod::<Q>(n as u64, Q - 2);
        for x in a.iter_mut() {
            *x = mulmod::<Q>(*x, n_inv);
        }
    }
}

fn convolve_prime<const Q: u64, const G: u64>(a: &[u64], b: &[u64], out_len: usize) -> Vec<u64> {
    let n = out_len.next_power_of_two();
    let mut fa = vec![0u64; n];
    let mut fb = vec![0u64; n];
    for (dst, &src) in fa.iter_mut().zip(a) {
        *dst = src % Q;
    }
    for (dst, &src) in fb.iter_mut().zip(b) {
        *dst = src % Q;
    }
    ntt::<Q, G>(&mut fa, false);
    ntt::<Q, G>(&mut fb, false);
    for (x, y) in fa.iter_mut().zip(fb.iter()) {
        *x = mulmod::<Q>(*x, *y);
    }
    ntt::<Q, G>(&mut fa, true);
    fa.truncate(out_len);
    fa
}

/// Exact convolution of two coefficient slices, reduced mod `p`.
/// Inputs must already be reduced mod `p`. Empty inputs yield an empty output.
pub fn convolve_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let out_len = a.len() + b.len() - 1;
    if a.len().min(b.len()) <= SCHOOLBOOK_CUTOFF {
        return schoolbook(a, b, p);
    }

    // Exactness bound: min(len) * (p-1)^2 must fit below Q1*Q2*Q3.
    let terms_bits = 64 - (a.len().min(b.len()) as u64).leading_zeros();
    let p_bits = 64 - (p - 1).leading_zeros();
    assert!(
        terms_bits + 2 * p_bits <= 183,
        "convolution values exceed the CRT modulus"
    );

    let c1 = convolve_prime::<Q1, G1>(a, b, out_len);
    let c2 = convolve_prime::<Q2, G2>(a, b, out_len);
    let c3 = convolve_prime::<Q3, G3>(a, b, out_len);

    // Garner recombination: x = x1 + t1*Q1 + t2*Q1*Q2 with t1 mod Q2, t2 mod Q3.
    let q1_inv_q2 = powmod::<Q2>(Q1 % Q2, Q2 - 2);
    let q1q2_inv_q3 = powmod::<Q3>(mulmod::<Q3>(Q1 % Q3, Q2 % Q3), Q3 - 2);
    let q1_mod_p = Q1 % p;
    let q1q2_mod_p = ((Q1 % p) as u128 * (Q2 % p) as u128 % p as u128) as u64;
    let modp = |x: u128| (x % p as u128) as u64;

    let mut out = Vec::with_capacity(out_len);
    for i in 0..out_len {
        let x1 = c1[i];
        let t1 = {
            let d = if c2[i] >= x1 % Q2 { c2[i] - x1 % Q2 } else { c2[i] + Q2 - x1 % Q2 };
            mulmod::<Q2>(d, q1_inv_q2)
        };
        let t2 = {
            let partial = (x1 % Q3 + mulmod::<Q3>(t1 % Q3, Q1 % Q3)) % Q3;
            let d = if c3[i] >= partial { c3[i] - partial } else { c3[i] + Q3 - partial };
            mulmod::<Q3>(d, q1q2_inv_q3)
        };
        let r = modp(x1 as u128)
            + modp(t1 as u128 * q1_mod_p as u128)
            + modp(t2 as u128 * q1q2_mod_p as u128);
        out.push(r % p);
    }
    out
}

fn schoolbook(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as u128 + ai as u128 * bj as u128) % p as u128) as u64;
        }
    }
    out
}
