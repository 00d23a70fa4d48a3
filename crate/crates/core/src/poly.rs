//! Sparse multivariate polynomials over `F_p`, monomial orders, and the
//! decomposition of `A = F_p[x]` as a free module over a Frobenius subring
//! `A_r = F_p[x_1^{p^r}, …, x_n^{p^r}]`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::arith::{FpConfig, FpScalar, MultiIndex};
use crate::error::{Error, Result};

/// Monomial orders on `N^n` with `x_1 > x_2 > … > x_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonomialOrder {
    #[default]
    DegRevLex,
    Lex,
}

impl MonomialOrder {
    pub fn compare(&self, a: &MultiIndex, b: &MultiIndex) -> Ordering {
        debug_assert_eq!(a.len(), b.len());
        match self {
            MonomialOrder::Lex => a.as_slice().cmp(b.as_slice()),
            MonomialOrder::DegRevLex => a.total_degree().cmp(&b.total_degree()).then_with(|| {
                for (x, y) in a.as_slice().iter().zip(b.as_slice()).rev() {
                    if x != y {
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            }),
        }
    }
}

/// `p^r`, or `None` when it does not fit in 64 bits (then every exponent is a
/// "digit").
pub(crate) fn prime_power(p: u32, r: u32) -> Option<u64> {
    (p as u64).checked_pow(r)
}

/// A polynomial in `n` variables over `F_p`, stored without zero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    n: usize,
    cfg: FpConfig,
    coeffs: BTreeMap<MultiIndex, u32>,
}

impl Poly {
    pub fn zero(n: usize, cfg: &FpConfig) -> Self {
        Poly {
            n,
            cfg: cfg.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(n: usize, cfg: &FpConfig) -> Self {
        Self::constant(n, cfg, 1)
    }

    pub fn constant(n: usize, cfg: &FpConfig, c: u64) -> Self {
        Self::monomial(cfg, MultiIndex::zero(n), c)
    }

    pub fn monomial(cfg: &FpConfig, m: MultiIndex, c: u64) -> Self {
        let mut out = Poly::zero(m.len(), cfg);
        let c = (c % cfg.p() as u64) as u32;
        if c != 0 {
            out.coeffs.insert(m, c);
        }
        out
    }

    /// The variable `x_{i+1}` (zero-based `i`).
    pub fn var(n: usize, cfg: &FpConfig, i: usize) -> Self {
        Self::monomial(cfg, MultiIndex::unit(n, i, 1), 1)
    }

    /// Collects terms, summing repeated monomials.
    pub fn from_terms(
        n: usize,
        cfg: &FpConfig,
        terms: impl IntoIterator<Item = (MultiIndex, u32)>,
    ) -> Self {
        let mut out = Poly::zero(n, cfg);
        for (m, c) in terms {
            debug_assert_eq!(m.len(), n);
            out.add_term(m, c % cfg.p());
        }
        out
    }

    pub(crate) fn add_term(&mut self, m: MultiIndex, c: u32) {
        if c == 0 {
            return;
        }
        let p = &self.cfg;
        match self.coeffs.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = p.add(*e.get(), c);
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
        self.coeffs.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Terms in storage order (lexicographic on exponents, ascending).
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, u32)> + '_ {
        self.coeffs.iter().map(|(m, &c)| (m, c))
    }

    /// Terms sorted decreasingly under `ord`.
    pub fn terms_desc(&self, ord: MonomialOrder) -> Vec<(&MultiIndex, u32)> {
        let mut v: Vec<_> = self.terms().collect();
        v.sort_by(|a, b| ord.compare(b.0, a.0));
        v
    }

    pub fn coeff(&self, m: &MultiIndex) -> FpScalar {
        self.cfg
            .scalar(self.coeffs.get(m).copied().unwrap_or(0) as u64)
    }

    /// Highest total degree of a term, `None` for zero.
    pub fn degree(&self) -> Option<u64> {
        self.coeffs.keys().map(MultiIndex::total_degree).max()
    }

    pub fn leading_term(&self, ord: MonomialOrder) -> Option<(&MultiIndex, u32)> {
        self.terms().max_by(|a, b| ord.compare(a.0, b.0))
    }

    /// Returns the constant value if this polynomial has degree ≤ 0.
    pub fn as_constant(&self) -> Option<u32> {
        match self.coeffs.len() {
            0 => Some(0),
            1 => {
                let (m, &c) = self.coeffs.iter().next().unwrap();
                m.is_zero().then_some(c)
            }
            _ => None,
        }
    }

    fn check_compatible(&self, other: &Poly) -> Result<()> {
        self.cfg.check_same(&other.cfg)?;
        if self.n != other.n {
            return Err(Error::ArityMismatch(self.n, other.n));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), self.cfg.neg(c));
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_compatible(other)?;
        let mut out = Poly::zero(self.n, &self.cfg);
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                out.add_term(a.add(b), self.cfg.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: u32) -> Poly {
        let c = c % self.cfg.p();
        if c == 0 {
            return Poly::zero(self.n, &self.cfg);
        }
        Poly {
            n: self.n,
            cfg: self.cfg.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(m, &v)| (m.clone(), self.cfg.mul(v, c)))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &MultiIndex, c: u32) -> Poly {
        let c = c % self.cfg.p();
        if c == 0 {
            return Poly::zero(self.n, &self.cfg);
        }
        Poly {
            n: self.n,
            cfg: self.cfg.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, &v)| (k.add(m), self.cfg.mul(v, c)))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.n, &self.cfg);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Writes `self = Σ_a g_a(x^{p^r})·x^a` with every `a_i < p^r`.
    pub fn frobenius_decompose(&self, r: u32) -> FrobeniusCoords {
        let modulus = prime_power(self.cfg.p(), r);
        let mut components: BTreeMap<MultiIndex, Poly> = BTreeMap::new();
        for (m, c) in self.terms() {
            let (digit, high) = split_exponent(m, modulus);
            components
                .entry(digit)
                .or_insert_with(|| Poly::zero(self.n, &self.cfg))
                .add_term(high, c);
        }
        components.retain(|_, g| !g.is_zero());
        FrobeniusCoords {
            level: r,
            n: self.n,
            cfg: self.cfg.clone(),
            components,
        }
    }

    /// Renders with variables `<var>1 … <var>n`.
    pub fn display_with<'a>(&'a self, var: &'a str) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, var }
    }
}

/// Splits `m = a + p^r·μ` with `0 ≤ a_i < p^r`.
pub(crate) fn split_exponent(m: &MultiIndex, modulus: Option<u64>) -> (MultiIndex, MultiIndex) {
    match modulus {
        None => (m.clone(), MultiIndex::zero(m.len())),
        Some(q) => (
            MultiIndex::new(m.iter().map(|e| (e as u64 % q) as u32)),
            MultiIndex::new(m.iter().map(|e| (e as u64 / q) as u32)),
        ),
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    var: &'a str,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self
            .poly
            .terms_desc(MonomialOrder::DegRevLex)
            .into_iter()
            .enumerate()
        {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write_term(f, c, &[(self.var, m, false)])?;
        }
        Ok(())
    }
}

/// Writes `c*v1^e1*…` for each `(prefix, exponents, bracketed)` block;
/// bracketed blocks render as `d1[r]`.
pub(crate) fn write_term(
    f: &mut fmt::Formatter<'_>,
    c: u32,
    blocks: &[(&str, &MultiIndex, bool)],
) -> fmt::Result {
    let mut factors: Vec<String> = Vec::new();
    for (prefix, m, bracketed) in blocks {
        for (i, e) in m.iter().enumerate() {
            match (e, bracketed) {
                (0, _) => {}
                (1, _) => factors.push(format!("{prefix}{}", i + 1)),
                (e, false) => factors.push(format!("{prefix}{}^{e}", i + 1)),
                (e, true) => factors.push(format!("{prefix}{}[{e}]", i + 1)),
            }
        }
    }
    if factors.is_empty() {
        write!(f, "{c}")
    } else if c == 1 {
        f.write_str(&factors.join("*"))
    } else {
        write!(f, "{c}*{}", factors.join("*"))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.display_with("x").fmt(f)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.cfg.p(), self)
    }
}

macro_rules! poly_binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr<&Poly> for &Poly {
            type Output = Poly;
            /// Panics if the operands live in different rings.
            fn $method(self, rhs: &Poly) -> Poly {
                self.$try(rhs).expect("polynomial ring mismatch")
            }
        }
    };
}

poly_binop!(Add, add, try_add);
poly_binop!(Sub, sub, try_sub);
poly_binop!(Mul, mul, try_mul);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(self.cfg.p() - 1)
    }
}

/// Coordinates of a polynomial in the basis `{x^a : a_i < p^r}` of `A` over
/// `A_r`. Each component is a polynomial in `y_i`, standing for `x_i^{p^r}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FrobeniusCoords {
    level: u32,
    n: usize,
    cfg: FpConfig,
    components: BTreeMap<MultiIndex, Poly>,
}

impl FrobeniusCoords {
    /// Builds coordinates from explicit components, dropping zero ones.
    pub fn new(
        level: u32,
        n: usize,
        cfg: &FpConfig,
        components: impl IntoIterator<Item = (MultiIndex, Poly)>,
    ) -> Result<Self> {
        let modulus = prime_power(cfg.p(), level);
        let mut out = BTreeMap::new();
        for (a, g) in components {
            if a.len() != n || g.n() != n {
                return Err(Error::ArityMismatch(n, a.len().max(g.n())));
            }
            cfg.check_same(g.config())?;
            if let Some(q) = modulus {
                if a.iter().any(|e| e as u64 >= q) {
                    return Err(Error::MalformedMatrix(format!(
                        "basis exponent {a:?} is not below p^{level}"
                    )));
                }
            }
            if !g.is_zero() {
                out.insert(a, g);
            }
        }
        Ok(FrobeniusCoords {
            level,
            n,
            cfg: cfg.clone(),
            components: out,
        })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn components(&self) -> &BTreeMap<MultiIndex, Poly> {
        &self.components
    }

    pub fn component(&self, a: &MultiIndex) -> Poly {
        self.components
            .get(a)
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.n, &self.cfg))
    }

    /// Substitutes `y_i ← x_i^{p^r}` and multiplies by `x^a`.
    pub fn recompose(&self) -> Poly {
        let q = prime_power(self.cfg.p(), self.level).expect("level too large to recompose");
        let mut out = Poly::zero(self.n, &self.cfg);
        for (a, g) in &self.components {
            for (mu, c) in g.terms() {
                let m = MultiIndex::new(
                    a.iter()
                        .zip(mu.iter())
                        .map(|(ai, mi)| (ai as u64 + q * mi as u64) as u32),
                );
                out.add_term(m, c);
            }
        }
        out
    }
}
