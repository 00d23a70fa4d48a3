//! Prime-field scalars, exponent multi-indices, and binomial coefficients
//! reduced modulo the characteristic.

use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Largest characteristic accepted by [`FpConfig::new`].
pub const MAX_PRIME: u64 = 1 << 16;

/// The prime field `F_p`, with factorial tables for the digit binomials.
#[derive(Clone)]
pub struct FpConfig {
    p: u32,
    fact: Arc<[u32]>,
    inv_fact: Arc<[u32]>,
}

impl FpConfig {
    /// Validates `p` by trial division and builds the field.
    pub fn new(p: u64) -> Result<Self> {
        if p > MAX_PRIME {
            return Err(Error::PrimeTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let p = p as u32;
        let mut fact = vec![1u32; p as usize];
        for i in 1..p as usize {
            fact[i] = mul_mod(fact[i - 1], i as u32, p);
        }
        let mut inv_fact = vec![1u32; p as usize];
        inv_fact[p as usize - 1] = pow_mod(fact[p as usize - 1], p - 2, p);
        for i in (1..p as usize).rev() {
            inv_fact[i - 1] = mul_mod(inv_fact[i], i as u32, p);
        }
        Ok(FpConfig {
            p,
            fact: fact.into(),
            inv_fact: inv_fact.into(),
        })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn check_same(&self, other: &FpConfig) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.p, other.p))
        }
    }

    pub fn scalar(&self, value: u64) -> FpScalar {
        FpScalar {
            value: (value % self.p as u64) as u32,
            cfg: self.clone(),
        }
    }

    /// Reduces a signed integer into `0..p`.
    #[inline]
    pub fn reduce(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        mul_mod(a, b, self.p)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a.is_multiple_of(self.p) {
            None
        } else {
            Some(pow_mod(a, self.p - 2, self.p))
        }
    }

    /// `C(m, r) mod p` for `m, r` below `p`.
    #[inline]
    fn small_binom(&self, m: u32, r: u32) -> u32 {
        if r > m {
            return 0;
        }
        let num = self.fact[m as usize];
        self.mul(
            num,
            self.mul(self.inv_fact[r as usize], self.inv_fact[(m - r) as usize]),
        )
    }

    /// `C(m, r) mod p` by Lucas' rule: the product of the digitwise
    /// binomials in base `p`. Zero whenever `r > m`.
    pub fn binom(&self, mut m: u64, mut r: u64) -> u32 {
        if r > m {
            return 0;
        }
        let p = self.p as u64;
        let mut acc = 1u32;
        while r > 0 {
            let (md, rd) = ((m % p) as u32, (r % p) as u32);
            if rd > md {
                return 0;
            }
            acc = self.mul(acc, self.small_binom(md, rd));
            m /= p;
            r /= p;
        }
        acc
    }
}

impl PartialEq for FpConfig {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
    }
}

impl Eq for FpConfig {}

impl fmt::Debug for FpConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

/// `C(m, r)` in `F_p`, the image of the integer binomial coefficient.
pub fn binom_mod_p(m: u64, r: u64, cfg: &FpConfig) -> FpScalar {
    FpScalar {
        value: cfg.binom(m, r),
        cfg: cfg.clone(),
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[inline]
fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

fn pow_mod(mut base: u32, mut exp: u32, p: u32) -> u32 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// An element of `F_p` that remembers its field.
#[derive(Clone, PartialEq, Eq)]
pub struct FpScalar {
    value: u32,
    cfg: FpConfig,
}

impl FpScalar {
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn config(&self) -> &FpConfig {
        &self.cfg
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn combine(
        &self,
        other: &FpScalar,
        op: impl Fn(&FpConfig, u32, u32) -> u32,
    ) -> Result<FpScalar> {
        self.cfg.check_same(&other.cfg)?;
        Ok(FpScalar {
            value: op(&self.cfg, self.value, other.value),
            cfg: self.cfg.clone(),
        })
    }

    pub fn add(&self, other: &FpScalar) -> Result<FpScalar> {
        self.combine(other, FpConfig::add)
    }

    pub fn sub(&self, other: &FpScalar) -> Result<FpScalar> {
        self.combine(other, FpConfig::sub)
    }

    pub fn mul(&self, other: &FpScalar) -> Result<FpScalar> {
        self.combine(other, FpConfig::mul)
    }

    pub fn div(&self, other: &FpScalar) -> Result<FpScalar> {
        self.cfg.check_same(&other.cfg)?;
        let inv = self
            .cfg
            .inv(other.value)
            .ok_or(Error::DivisionByZero(self.cfg.p))?;
        Ok(FpScalar {
            value: self.cfg.mul(self.value, inv),
            cfg: self.cfg.clone(),
        })
    }

    pub fn neg(&self) -> FpScalar {
        FpScalar {
            value: self.cfg.neg(self.value),
            cfg: self.cfg.clone(),
        }
    }
}

impl fmt::Debug for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.cfg.p)
    }
}

impl fmt::Display for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// An exponent tuple in `N^n`.
///
/// The derived `Ord` is plain lexicographic comparison of the tuples and is
/// only used for storage; monomial orders live in [`crate::poly::MonomialOrder`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(SmallVec<[u32; 4]>);

impl MultiIndex {
    pub fn new(exponents: impl IntoIterator<Item = u32>) -> Self {
        MultiIndex(exponents.into_iter().collect())
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(SmallVec::from_elem(0, n))
    }

    /// `r·ε_i` in `N^n`.
    pub fn unit(n: usize, i: usize, r: u32) -> Self {
        let mut m = Self::zero(n);
        m.0[i] = r;
        m
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    #[inline]
    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn check_len(&self, other: &MultiIndex) -> Result<()> {
        if self.len() == other.len() {
            Ok(())
        } else {
            Err(Error::ArityMismatch(self.len(), other.len()))
        }
    }

    pub fn try_add(&self, other: &MultiIndex) -> Result<MultiIndex> {
        self.check_len(other)?;
        Ok(self.add(other))
    }

    /// Componentwise difference, `None` when some entry would go negative.
    pub fn try_sub(&self, other: &MultiIndex) -> Result<Option<MultiIndex>> {
        self.check_len(other)?;
        Ok(self.checked_sub(other))
    }

    pub fn try_min(&self, other: &MultiIndex) -> Result<MultiIndex> {
        self.check_len(other)?;
        Ok(self.component_min(other))
    }

    /// Componentwise sum. Lengths must agree.
    #[inline]
    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.len(), other.len());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    #[inline]
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        debug_assert_eq!(self.len(), other.len());
        let mut out = SmallVec::with_capacity(self.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            out.push(a.checked_sub(*b)?);
        }
        Some(MultiIndex(out))
    }

    pub fn component_min(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }

    pub fn component_max(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    /// True when `self ≤ other` componentwise.
    #[inline]
    pub fn divides(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v.into())
    }
}

impl<const N: usize> From<[u32; N]> for MultiIndex {
    fn from(v: [u32; N]) -> Self {
        MultiIndex(v.iter().copied().collect())
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}
