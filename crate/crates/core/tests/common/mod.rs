#![allow(dead_code)]

use std::collections::BTreeMap;

use divweyl::{FpConfig, MultiIndex, Poly, WeylElement, Word};
use num_bigint::BigUint;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn field(p: u64) -> FpConfig {
    FpConfig::new(p).expect("prime")
}

/// Exact binomial coefficient reduced mod `p`, computed over the integers.
pub fn exact_binom_mod(m: u64, r: u64, p: u64) -> u32 {
    if r > m {
        return 0;
    }
    let mut acc = BigUint::from(1u32);
    for i in 0..r {
        acc *= BigUint::from(m - i);
        acc /= BigUint::from(i + 1);
    }
    let rem = acc % BigUint::from(p);
    rem.to_u32_digits().first().copied().unwrap_or(0)
}

/// All exponent vectors of length `n` with total degree at most `bound`.
pub fn monomials_up_to(n: usize, bound: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if i == cur.len() {
            out.push(MultiIndex::from(cur.clone()));
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, bound, &mut cur, &mut out);
    out
}

pub fn random_index(rng: &mut ChaCha8Rng, n: usize, max_total: u32) -> MultiIndex {
    let mut left = rng.gen_range(0..=max_total);
    let mut v = vec![0u32; n];
    for slot in v.iter_mut() {
        let e = rng.gen_range(0..=left);
        *slot = e;
        left -= e;
    }
    MultiIndex::from(v)
}

pub fn random_word(rng: &mut ChaCha8Rng, n: usize, max_degree: u32) -> Word {
    let total = rng.gen_range(0..=max_degree);
    let split = rng.gen_range(0..=total);
    Word::new(
        random_index(rng, n, split),
        random_index(rng, n, total - split),
    )
}

pub fn random_element(
    rng: &mut ChaCha8Rng,
    n: usize,
    cfg: &FpConfig,
    max_degree: u32,
    max_terms: usize,
) -> WeylElement {
    let terms = rng.gen_range(1..=max_terms);
    let p = cfg.p();
    WeylElement::from_terms(
        n,
        cfg,
        (0..terms)
            .map(|_| (random_word(rng, n, max_degree), rng.gen_range(0..p)))
            .collect::<Vec<_>>(),
    )
}

/// Element whose divided powers all stay below `p^r`, so it lies in `D_r`.
pub fn random_level_element(
    rng: &mut ChaCha8Rng,
    n: usize,
    cfg: &FpConfig,
    r: u32,
    max_x_degree: u32,
    max_terms: usize,
) -> WeylElement {
    let p = cfg.p();
    let bound = (cfg.p()).pow(r);
    let terms = rng.gen_range(1..=max_terms);
    let mut out = Vec::new();
    for _ in 0..terms {
        let x = random_index(rng, n, max_x_degree);
        let d = MultiIndex::from((0..n).map(|_| rng.gen_range(0..bound)).collect::<Vec<_>>());
        out.push((Word::new(x, d), rng.gen_range(0..p)));
    }
    WeylElement::from_terms(n, cfg, out)
}

pub fn random_poly(
    rng: &mut ChaCha8Rng,
    n: usize,
    cfg: &FpConfig,
    max_degree: u32,
    max_terms: usize,
) -> Poly {
    let terms = rng.gen_range(1..=max_terms);
    let p = cfg.p();
    Poly::from_terms(
        n,
        cfg,
        (0..terms)
            .map(|_| (random_index(rng, n, max_degree), rng.gen_range(0..p)))
            .collect::<Vec<_>>(),
    )
}

/// Sparse polynomial as a plain map, used by the oracles below.
pub type Dense = BTreeMap<Vec<u32>, u64>;

pub fn to_dense(f: &Poly) -> Dense {
    f.terms()
        .map(|(m, c)| (m.as_slice().to_vec(), c as u64))
        .collect()
}

fn insert(out: &mut Dense, key: Vec<u32>, c: u64, p: u64) {
    let e = out.entry(key.clone()).or_insert(0);
    *e = (*e + c) % p;
    if *e == 0 {
        out.remove(&key);
    }
}

/// Applies `x^a ∂^{[b]}` to a polynomial straight from the definition
/// `∂^{[b]} x^m = C(m, b) x^{m-b}`, with exact integer binomials.
pub fn oracle_apply_word(a: &[u32], b: &[u32], f: &Dense, p: u64) -> Dense {
    let mut out = Dense::new();
    for (m, &c) in f {
        let mut coeff = c % p;
        let mut key = Vec::with_capacity(m.len());
        let mut dead = false;
        for i in 0..m.len() {
            if b[i] > m[i] {
                dead = true;
                break;
            }
            coeff = coeff * exact_binom_mod(m[i] as u64, b[i] as u64, p) as u64 % p;
            key.push(m[i] - b[i] + a[i]);
        }
        if !dead && coeff != 0 {
            insert(&mut out, key, coeff, p);
        }
    }
    out
}

pub fn oracle_apply(d: &WeylElement, f: &Dense, p: u64) -> Dense {
    let mut out = Dense::new();
    for (w, c) in d.terms() {
        for (k, v) in oracle_apply_word(w.x.as_slice(), w.d.as_slice(), f, p) {
            insert(&mut out, k, v * c as u64 % p, p);
        }
    }
    out
}

pub fn monomial_dense(m: &MultiIndex) -> Dense {
    let mut out = Dense::new();
    out.insert(m.as_slice().to_vec(), 1);
    out
}

/// Rank of a matrix over `F_p` by plain Gaussian elimination.
pub fn rank_mod(rows: &[Vec<u64>], p: u64) -> usize {
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|v| v % p).collect())
        .collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = pow_mod(m[rank][c], p - 2, p);
        for v in m[rank].iter_mut() {
            *v = *v * inv % p;
        }
        for i in 0..m.len() {
            if i != rank && m[i][c] != 0 {
                let f = m[i][c];
                let pivot = m[rank].clone();
                for (dst, src) in m[i].iter_mut().zip(&pivot) {
                    *dst = (*dst + p * p - f * src) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Dimension of the kernel of `Σ_j h_j g_j` over tuples `(h_j)` with
/// `deg h_j ≤ bound`, where each `g_j` is a tuple of polynomials.
pub fn poly_kernel_dim(rows: &[Vec<Dense>], n: usize, bound: u32, p: u64) -> usize {
    let monos = monomials_up_to(n, bound);
    let mut target: BTreeMap<(usize, Vec<u32>), usize> = BTreeMap::new();
    let mut images = Vec::new();
    for g in rows {
        for m in &monos {
            let mut img = Vec::new();
            for (pos, comp) in g.iter().enumerate() {
                for (e, &c) in comp {
                    let key: Vec<u32> = e.iter().zip(m.as_slice()).map(|(a, b)| a + b).collect();
                    let next = target.len();
                    let idx = *target.entry((pos, key)).or_insert(next);
                    img.push((idx, c));
                }
            }
            images.push(img);
        }
    }
    let mut mat = vec![vec![0u64; target.len()]; images.len()];
    for (r, img) in images.iter().enumerate() {
        for &(i, c) in img {
            mat[r][i] = (mat[r][i] + c) % p;
        }
    }
    images.len()
        - if target.is_empty() {
            0
        } else {
            rank_mod(&mat, p)
        }
}
