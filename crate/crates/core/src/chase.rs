//! The Frobenius filtration `A = D_0 ⊆ D_1 ⊆ … ⊆ D`, where `D_r` is the ring of
//! `A_r`-linear endomorphisms of `A`, and the identification of `D_r` with the
//! matrix ring `M_q(A_r)`, `q = p^{rn}`.
//!
//! Matrices use the column-action convention: `d(x^{a_β}) = Σ_α M[α][β]·x^{a_α}`
//! with coefficients in `A_r`, so `M(uv) = M(u)·M(v)`. The basis
//! `{x^a : 0 ≤ a_i < p^r}` is listed in colex order, first variable fastest.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{FpConfig, MultiIndex};
use crate::error::{Error, Result};
use crate::poly::{prime_power, Poly};
use crate::weyl::{WeylElement, Word};

/// A filtration level `r`; `D_0` is `A` itself.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
pub struct Level(pub u32);

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The smallest `r` with every divided-power exponent below `p^r`.
pub fn level_of(d: &WeylElement) -> Level {
    level_for_exponent(d.config().p(), d.max_divided_power())
}

pub(crate) fn level_for_exponent(p: u32, b: u32) -> Level {
    let mut r = 0;
    let mut q = 1u64;
    while q <= b as u64 {
        q *= p as u64;
        r += 1;
    }
    Level(r)
}

/// Checks `[d, x_i^{p^r}] = 0` for every `i`, the defining property of
/// `End_{A_r}(A)` restricted to generators of `A_r`.
pub fn commutes_with_frobenius(d: &WeylElement, r: Level) -> bool {
    let n = d.n();
    let cfg = d.config();
    let q = prime_power(cfg.p(), r.0).expect("level too large") as u32;
    (0..n).all(|i| {
        let xq = WeylElement::word(
            cfg,
            Word::new(MultiIndex::unit(n, i, q), MultiIndex::zero(n)),
            1,
        );
        d.commutator(&xq).expect("same algebra").is_zero()
    })
}

/// Basis exponents `a` with `0 ≤ a_i < p^r`, colex with `a_1` fastest.
pub fn standard_basis(r: Level, n: usize, cfg: &FpConfig) -> Vec<MultiIndex> {
    let side = prime_power(cfg.p(), r.0).expect("level too large") as u32;
    let q = (side as usize).pow(n as u32);
    let mut out = Vec::with_capacity(q);
    let mut cur = vec![0u32; n];
    for _ in 0..q {
        out.push(MultiIndex::from(cur.clone()));
        for e in cur.iter_mut() {
            *e += 1;
            if *e < side {
                break;
            }
            *e = 0;
        }
    }
    out
}

/// Position of `a` in [`standard_basis`].
fn basis_index(a: &MultiIndex, side: u64) -> usize {
    a.as_slice()
        .iter()
        .rev()
        .fold(0u64, |acc, &e| acc * side + e as u64) as usize
}

/// A `q × q` matrix over `A_r`, entries written in the Frobenius variables
/// `y_i = x_i^{p^r}`.
#[derive(Clone, PartialEq, Eq)]
pub struct MatrixRep {
    level: Level,
    n: usize,
    cfg: FpConfig,
    basis: Vec<MultiIndex>,
    entries: Vec<Poly>,
}

impl MatrixRep {
    /// Builds a matrix from row-major entries, checking the shape.
    pub fn new(level: Level, n: usize, cfg: &FpConfig, entries: Vec<Poly>) -> Result<Self> {
        let basis = standard_basis(level, n, cfg);
        let q = basis.len();
        if entries.len() != q * q {
            return Err(Error::MalformedMatrix(format!(
                "expected {} entries for q = {q}, got {}",
                q * q,
                entries.len()
            )));
        }
        for e in &entries {
            cfg.check_same(e.config())?;
            if e.n() != n {
                return Err(Error::ArityMismatch(n, e.n()));
            }
        }
        Ok(MatrixRep {
            level,
            n,
            cfg: cfg.clone(),
            basis,
            entries,
        })
    }

    pub fn zero(level: Level, n: usize, cfg: &FpConfig) -> Self {
        let q = standard_basis(level, n, cfg).len();
        Self::new(level, n, cfg, vec![Poly::zero(n, cfg); q * q]).expect("well-formed")
    }

    pub fn identity(level: Level, n: usize, cfg: &FpConfig) -> Self {
        let mut m = Self::zero(level, n, cfg);
        let q = m.q();
        for i in 0..q {
            m.entries[i * q + i] = Poly::one(n, cfg);
        }
        m
    }

    pub fn level(&self) -> Level {
        self.level
    }

    /// `q = p^{rn}`, the rank of `A` over `A_r`.
    pub fn q(&self) -> usize {
        self.basis.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn config(&self) -> &FpConfig {
        &self.cfg
    }

    pub fn basis(&self) -> &[MultiIndex] {
        &self.basis
    }

    pub fn entry(&self, row: usize, col: usize) -> &Poly {
        &self.entries[row * self.q() + col]
    }

    pub fn set_entry(&mut self, row: usize, col: usize, value: Poly) {
        let q = self.q();
        self.entries[row * q + col] = value;
    }

    pub fn row(&self, row: usize) -> &[Poly] {
        let q = self.q();
        &self.entries[row * q..(row + 1) * q]
    }

    fn check_same_shape(&self, other: &MatrixRep) -> Result<()> {
        self.cfg.check_same(&other.cfg)?;
        if self.n != other.n {
            return Err(Error::ArityMismatch(self.n, other.n));
        }
        if self.level != other.level {
            return Err(Error::MalformedMatrix(format!(
                "levels differ: {} vs {}",
                self.level, other.level
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &MatrixRep) -> Result<MatrixRep> {
        self.check_same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        MatrixRep::new(self.level, self.n, &self.cfg, entries)
    }

    pub fn try_mul(&self, other: &MatrixRep) -> Result<MatrixRep> {
        self.check_same_shape(other)?;
        let q = self.q();
        let mut out = MatrixRep::zero(self.level, self.n, &self.cfg);
        for i in 0..q {
            for k in 0..q {
                let a = self.entry(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..q {
                    let b = other.entry(k, j);
                    if !b.is_zero() {
                        let cur = &out.entries[i * q + j] + &(a * b);
                        out.entries[i * q + j] = cur;
                    }
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for MatrixRep {
    /// Header `level=r q=…`, then one row per line; multi-term entries are
    /// parenthesized so that entries stay space-separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "level={} q={}", self.level, self.q())?;
        for i in 0..self.q() {
            writeln!(f)?;
            let cells: Vec<String> = self.row(i).iter().map(matrix_cell).collect();
            f.write_str(&cells.join(" "))?;
        }
        Ok(())
    }
}

/// One matrix entry in `y`-variables, parenthesized when it has several terms.
pub fn matrix_cell(p: &Poly) -> String {
    let s = p.display_with("y").to_string();
    if p.num_terms() > 1 {
        format!("({s})")
    } else {
        s
    }
}

impl fmt::Debug for MatrixRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The matrix of `d ∈ D_r` acting on `A = ⊕_a A_r·x^a`.
pub fn matrix_of(d: &WeylElement, r: Level) -> Result<MatrixRep> {
    let found = level_of(d);
    if found > r {
        return Err(Error::LevelTooLow {
            found: found.0,
            requested: r.0,
        });
    }
    let (n, cfg) = (d.n(), d.config());
    let side = prime_power(cfg.p(), r.0).expect("level too large");
    let mut m = MatrixRep::zero(r, n, cfg);
    let basis = m.basis.clone();
    for (beta, a) in basis.iter().enumerate() {
        let image = d.apply(&Poly::monomial(cfg, a.clone(), 1))?;
        for (key, g) in image.frobenius_decompose(r.0).components() {
            m.set_entry(basis_index(key, side), beta, g.clone());
        }
    }
    Ok(m)
}

/// Inverse of [`matrix_of`]: the unique `d ∈ D_r` whose matrix is `m`.
///
/// Writes `d = Σ g_{ab}(x^{p^r}) x^a ∂^{[b]}` over `a, b < p^r`. Since
/// `∂^{[b]}(x^c)` vanishes unless `b ≤ c` and equals `1` at `b = c`, the
/// coefficients `g_{·c}` are read off column `c` after removing the
/// contribution of all `b < c`, processing columns in colex order.
pub fn operator_of(m: &MatrixRep) -> Result<WeylElement> {
    let (n, cfg, r) = (m.n, &m.cfg, m.level);
    if prime_power(cfg.p(), r.0).is_none() {
        return Err(Error::MalformedMatrix("level too large".into()));
    }
    if m.entries.len() != m.q() * m.q() {
        return Err(Error::MalformedMatrix(
            "entry count does not match q".into(),
        ));
    }
    let q = m.q();
    // solved[b] holds the polynomial Σ_a g_{ab}(x^{p^r}) x^a
    let mut solved: Vec<Poly> = Vec::with_capacity(q);
    for (c_idx, c) in m.basis.iter().enumerate() {
        let column = crate::poly::FrobeniusCoords::new(
            r.0,
            n,
            cfg,
            m.basis
                .iter()
                .enumerate()
                .map(|(alpha, a)| (a.clone(), m.entry(alpha, c_idx).clone())),
        )?;
        let mut residual = column.recompose();
        for (b_idx, b) in m.basis[..c_idx].iter().enumerate() {
            let Some(lowered) = c.checked_sub(b) else {
                continue;
            };
            let k = b.iter().zip(c.iter()).fold(1u32, |acc, (bi, ci)| {
                cfg.mul(acc, cfg.binom(ci as u64, bi as u64))
            });
            if k == 0 || solved[b_idx].is_zero() {
                continue;
            }
            residual = &residual - &solved[b_idx].mul_monomial(&lowered, k);
        }
        solved.push(residual);
    }
    let mut out = WeylElement::zero(n, cfg);
    for (b, g) in m.basis.iter().zip(&solved) {
        for (mono, c) in g.terms() {
            out.add_term(Word::new(mono.clone(), b.clone()), c);
        }
    }
    if level_of(&out) > r {
        return Err(Error::Internal("reconstructed operator leaves D_r".into()));
    }
    Ok(out)
}
