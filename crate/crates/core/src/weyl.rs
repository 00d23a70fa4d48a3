//! The Weyl algebra `A_n(F_p)` of differential operators on `F_p[x_1, …, x_n]`,
//! spanned by the normal-form words `x^a ∂^{[b]}` with all divided powers to the
//! right.
//!
//! Multiplication of words uses the closed commutation rule
//! `∂^{[r]} x^s = Σ_j C(s, j) x^{s-j} ∂^{[r-j]}` together with
//! `∂^{[r]} ∂^{[s]} = C(r+s, r) ∂^{[r+s]}`, one variable at a time. Both rules
//! are checked against the action on polynomials in the test suite.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::arith::{FpConfig, MultiIndex};
use crate::error::{Error, Result};
use crate::poly::{write_term, MonomialOrder, Poly};

/// The word `x^x · ∂^{[d]}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Word {
    pub x: MultiIndex,
    pub d: MultiIndex,
}

impl Word {
    pub fn new(x: MultiIndex, d: MultiIndex) -> Self {
        debug_assert_eq!(x.len(), d.len());
        Word { x, d }
    }

    pub fn one(n: usize) -> Self {
        Word::new(MultiIndex::zero(n), MultiIndex::zero(n))
    }

    /// `|a| + |b|`.
    pub fn degree(&self) -> u64 {
        self.x.total_degree() + self.d.total_degree()
    }

    /// The concatenated exponent pair `(a, b)`, used for printing order.
    fn concat(&self) -> MultiIndex {
        MultiIndex::new(self.x.iter().chain(self.d.iter()))
    }
}

/// A canonical `F_p`-linear combination of normal-form words.
#[derive(Clone, PartialEq, Eq)]
pub struct WeylElement {
    n: usize,
    cfg: FpConfig,
    terms: BTreeMap<Word, u32>,
}

impl WeylElement {
    pub fn zero(n: usize, cfg: &FpConfig) -> Self {
        WeylElement {
            n,
            cfg: cfg.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize, cfg: &FpConfig) -> Self {
        Self::constant(n, cfg, 1)
    }

    pub fn constant(n: usize, cfg: &FpConfig, c: u64) -> Self {
        Self::word(cfg, Word::one(n), c)
    }

    pub fn word(cfg: &FpConfig, w: Word, c: u64) -> Self {
        let mut out = Self::zero(w.x.len(), cfg);
        out.add_term(w, (c % cfg.p() as u64) as u32);
        out
    }

    /// The generator `x_{i+1}`.
    pub fn x(n: usize, cfg: &FpConfig, i: usize) -> Self {
        Self::word(
            cfg,
            Word::new(MultiIndex::unit(n, i, 1), MultiIndex::zero(n)),
            1,
        )
    }

    /// The divided power `∂_{i+1}^{[r]}`.
    pub fn d(n: usize, cfg: &FpConfig, i: usize, r: u32) -> Self {
        Self::word(
            cfg,
            Word::new(MultiIndex::zero(n), MultiIndex::unit(n, i, r)),
            1,
        )
    }

    /// Multiplication by a polynomial, the inclusion `A ⊂ D`.
    pub fn from_poly(f: &Poly) -> Self {
        let n = f.n();
        let mut out = Self::zero(n, f.config());
        for (m, c) in f.terms() {
            out.add_term(Word::new(m.clone(), MultiIndex::zero(n)), c);
        }
        out
    }

    pub fn from_terms(
        n: usize,
        cfg: &FpConfig,
        terms: impl IntoIterator<Item = (Word, u32)>,
    ) -> Self {
        let mut out = Self::zero(n, cfg);
        for (w, c) in terms {
            out.add_term(w, c % cfg.p());
        }
        out
    }

    pub(crate) fn add_term(&mut self, w: Word, c: u32) {
        if c == 0 {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = self.cfg.add(*e.get(), c);
                if s == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn config(&self) -> &FpConfig {
        &self.cfg
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, u32)> + '_ {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    pub fn coeff(&self, w: &Word) -> u32 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    /// Largest `|a| + |b|` over the terms; `None` for zero.
    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().map(Word::degree).max()
    }

    /// Largest divided-power exponent appearing in any variable.
    pub fn max_divided_power(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|w| w.d.iter())
            .max()
            .unwrap_or(0)
    }

    /// The polynomial this element multiplies by, if it has no `∂` part.
    pub fn as_poly(&self) -> Option<Poly> {
        if self.terms.keys().any(|w| !w.d.is_zero()) {
            return None;
        }
        Some(Poly::from_terms(
            self.n,
            &self.cfg,
            self.terms.iter().map(|(w, &c)| (w.x.clone(), c)),
        ))
    }

    fn check_compatible(&self, n: usize, cfg: &FpConfig) -> Result<()> {
        self.cfg.check_same(cfg)?;
        if self.n != n {
            return Err(Error::ArityMismatch(self.n, n));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &WeylElement) -> Result<WeylElement> {
        self.check_compatible(other.n, &other.cfg)?;
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.add_term(w.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &WeylElement) -> Result<WeylElement> {
        self.check_compatible(other.n, &other.cfg)?;
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.add_term(w.clone(), self.cfg.neg(c));
        }
        Ok(out)
    }

    pub fn scale(&self, c: u32) -> WeylElement {
        let c = c % self.cfg.p();
        let mut out = Self::zero(self.n, &self.cfg);
        if c != 0 {
            out.terms = self
                .terms
                .iter()
                .map(|(w, &v)| (w.clone(), self.cfg.mul(v, c)))
                .collect();
        }
        out
    }

    pub fn try_mul(&self, other: &WeylElement) -> Result<WeylElement> {
        self.check_compatible(other.n, &other.cfg)?;
        let mut out = Self::zero(self.n, &self.cfg);
        for (u, cu) in self.terms() {
            for (v, cv) in other.terms() {
                let c = self.cfg.mul(cu, cv);
                mul_words(&self.cfg, u, v, |w, k| out.add_term(w, self.cfg.mul(c, k)));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> WeylElement {
        let mut acc = Self::one(self.n, &self.cfg);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `uv − vu`.
    pub fn commutator(&self, other: &WeylElement) -> Result<WeylElement> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    /// Applies the operator to a polynomial:
    /// `x^a ∂^{[b]}(x^m) = ∏_i C(m_i, b_i) · x^{a+m-b}`.
    pub fn apply(&self, f: &Poly) -> Result<Poly> {
        self.check_compatible(f.n(), f.config())?;
        let mut out = Poly::zero(self.n, &self.cfg);
        for (w, c) in self.terms() {
            for (m, cm) in f.terms() {
                if let Some((image, k)) = apply_word(&self.cfg, w, m) {
                    out.add_term(image, self.cfg.mul(self.cfg.mul(c, cm), k));
                }
            }
        }
        Ok(out)
    }

    /// The anti-automorphism fixing each `x_i` and sending `∂_i^{[r]}` to
    /// `(−1)^r ∂_i^{[r]}`.
    pub fn transpose(&self) -> WeylElement {
        let n = self.n;
        let mut out = Self::zero(n, &self.cfg);
        for (w, c) in self.terms() {
            // τ(x^a ∂^{[b]}) = (−1)^{|b|} ∂^{[b]} x^a
            let sign = if w.d.total_degree() % 2 == 1 {
                self.cfg.neg(c)
            } else {
                c
            };
            let left = Word::new(MultiIndex::zero(n), w.d.clone());
            let right = Word::new(w.x.clone(), MultiIndex::zero(n));
            mul_words(&self.cfg, &left, &right, |v, k| {
                out.add_term(v, self.cfg.mul(sign, k))
            });
        }
        out
    }

    /// Words in canonical print order: decreasing total degree, then
    /// decreasing degrevlex on the concatenated exponent pair.
    pub fn terms_canonical(&self) -> Vec<(&Word, u32)> {
        let mut v: Vec<_> = self.terms().collect();
        v.sort_by_cached_key(|(w, _)| std::cmp::Reverse(CanonicalKey(w.concat())));
        v
    }
}

#[derive(PartialEq, Eq)]
struct CanonicalKey(MultiIndex);

impl PartialOrd for CanonicalKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CanonicalKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        MonomialOrder::DegRevLex.compare(&self.0, &other.0)
    }
}

/// Image of the monomial `x^m` under a word, with its coefficient.
pub(crate) fn apply_word(cfg: &FpConfig, w: &Word, m: &MultiIndex) -> Option<(MultiIndex, u32)> {
    let mut k = 1u32;
    for (mi, bi) in m.iter().zip(w.d.iter()) {
        k = cfg.mul(k, cfg.binom(mi as u64, bi as u64));
        if k == 0 {
            return None;
        }
    }
    let lowered = m.checked_sub(&w.d)?;
    Some((lowered.add(&w.x), k))
}

/// Expands `(x^a ∂^{[b]})(x^c ∂^{[d]})` into normal-form words, feeding
/// `(word, coefficient)` pairs with nonzero coefficient to `emit`.
pub(crate) fn mul_words(cfg: &FpConfig, u: &Word, v: &Word, mut emit: impl FnMut(Word, u32)) {
    let n = u.x.len();
    // Per variable: ∂^{[b]} x^c = Σ_j C(c, j) x^{c-j} ∂^{[b-j]}, then
    // ∂^{[b-j]} ∂^{[d]} = C(b-j+d, d) ∂^{[b-j+d]}.
    let mut factors: Vec<Vec<(u32, u32, u32)>> = Vec::with_capacity(n);
    for i in 0..n {
        let (a, b, c, d) = (u.x.get(i), u.d.get(i), v.x.get(i), v.d.get(i));
        let mut opts = Vec::new();
        for j in 0..=b.min(c) {
            let k1 = cfg.binom(c as u64, j as u64);
            if k1 == 0 {
                continue;
            }
            let k2 = cfg.binom((b - j + d) as u64, d as u64);
            if k2 == 0 {
                continue;
            }
            opts.push((a + c - j, b - j + d, cfg.mul(k1, k2)));
        }
        if opts.is_empty() {
            return;
        }
        factors.push(opts);
    }
    let mut idx = vec![0usize; n];
    loop {
        let mut coeff = 1u32;
        let mut xs = Vec::with_capacity(n);
        let mut ds = Vec::with_capacity(n);
        for (i, opts) in factors.iter().enumerate() {
            let (xe, de, k) = opts[idx[i]];
            xs.push(xe);
            ds.push(de);
            coeff = cfg.mul(coeff, k);
        }
        emit(Word::new(MultiIndex::from(xs), MultiIndex::from(ds)), coeff);
        // odometer
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            idx[i] += 1;
            if idx[i] < factors[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (w, c)) in self.terms_canonical().into_iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write_divided_term(f, c, w)?;
        }
        Ok(())
    }
}

fn write_divided_term(f: &mut fmt::Formatter<'_>, c: u32, w: &Word) -> fmt::Result {
    // `d1` abbreviates `d1[1]`, so exponent 1 prints bare in both blocks
    write_term(f, c, &[("x", &w.x, false), ("d", &w.d, true)])
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Weyl[p={}, n={}]({})", self.cfg.p(), self.n, self)
    }
}

macro_rules! weyl_binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr<&WeylElement> for &WeylElement {
            type Output = WeylElement;
            /// Panics if the operands live in different algebras.
            fn $method(self, rhs: &WeylElement) -> WeylElement {
                self.$try(rhs).expect("Weyl algebra mismatch")
            }
        }
    };
}

weyl_binop!(Add, add, try_add);
weyl_binop!(Sub, sub, try_sub);
weyl_binop!(Mul, mul, try_mul);

impl Neg for &WeylElement {
    type Output = WeylElement;
    fn neg(self) -> WeylElement {
        self.scale(self.cfg.p() - 1)
    }
}
