//! Finite presentations of finitely generated one-sided ideals of `D = A_n(F_p)`.
//!
//! A finite set of generators lives in some `D_r ≅ M_q(A_r)`. There, a left
//! syzygy `Σ_j U_j·M(d_j) = 0` splits row by row into syzygies over the
//! polynomial ring `A_r` of the stacked rows of the `M(d_j)`, which the Gröbner
//! engine computes. Each polynomial syzygy is placed in the first row of a
//! matrix tuple and converted back to operators. Right ideals are handled
//! through the transpose anti-involution.
//!
//! Two independent checks accompany the pipeline: [`truncated_syzygy_oracle`]
//! solves for all syzygies of bounded degree by dense linear algebra, and
//! [`presentation_span`] computes which bounded-degree tuples lie in the
//! submodule generated by a presentation.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{FpConfig, MultiIndex};
use crate::chase::{level_for_exponent, level_of, matrix_of, operator_of, Level, MatrixRep};
use crate::error::{Error, Result};
use crate::groebner::{module_syzygies, GroebnerBasis, ModuleOrder, ModuleVector};
use crate::linalg::{same_span, DenseMatrix};
use crate::poly::{MonomialOrder, Poly};
use crate::weyl::{WeylElement, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

impl std::str::FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            other => Err(Error::Parse {
                pos: 0,
                msg: format!("unknown side `{other}` (expected left or right)"),
            }),
        }
    }
}

/// Generators of an ideal together with generators of its syzygy module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<WeylElement>,
    pub syzygies: Vec<Vec<WeylElement>>,
    pub level: Level,
    pub side: Side,
}

impl Presentation {
    pub fn k(&self) -> usize {
        self.generators.len()
    }
}

/// `Σ_j u_j d_j` (left) or `Σ_j d_j u_j` (right).
pub fn relation_value(
    side: Side,
    gens: &[WeylElement],
    tuple: &[WeylElement],
) -> Result<WeylElement> {
    let first = gens.first().ok_or(Error::EmptyGenerators)?;
    if tuple.len() != gens.len() {
        return Err(Error::LengthMismatch(gens.len(), tuple.len()));
    }
    let mut acc = WeylElement::zero(first.n(), first.config());
    for (d, u) in gens.iter().zip(tuple) {
        let term = match side {
            Side::Left => u.try_mul(d)?,
            Side::Right => d.try_mul(u)?,
        };
        acc = acc.try_add(&term)?;
    }
    Ok(acc)
}

fn check_generators(gens: &[WeylElement]) -> Result<(usize, FpConfig)> {
    let first = gens.first().ok_or(Error::EmptyGenerators)?;
    for g in gens {
        first.config().check_same(g.config())?;
        if g.n() != first.n() {
            return Err(Error::ArityMismatch(first.n(), g.n()));
        }
    }
    Ok((first.n(), first.config().clone()))
}

/// The smallest level containing every generator.
pub fn lift_level(gens: &[WeylElement]) -> Result<Level> {
    check_generators(gens)?;
    Ok(gens.iter().map(level_of).max().expect("nonempty"))
}

/// A finite generating set of the left syzygies of `gens`, computed at level
/// `level` (default: the smallest level containing the generators).
pub fn present_left_ideal(gens: &[WeylElement], level: Option<Level>) -> Result<Presentation> {
    let (n, cfg) = check_generators(gens)?;
    let minimal = lift_level(gens)?;
    let r = level.unwrap_or(minimal);
    if r < minimal {
        return Err(Error::LevelTooLow {
            found: minimal.0,
            requested: r.0,
        });
    }
    let mats: Vec<MatrixRep> = gens
        .iter()
        .map(|d| matrix_of(d, r))
        .collect::<Result<_>>()?;
    let q = mats[0].q();
    let k = gens.len();
    let rows: Vec<ModuleVector> = mats
        .iter()
        .flat_map(|m| (0..q).map(move |alpha| ModuleVector::new(m.row(alpha).to_vec())))
        .collect();
    let polys = module_syzygies(&rows, &ModuleOrder::top(MonomialOrder::DegRevLex))?;

    let mut syzygies = Vec::with_capacity(polys.len());
    for s in polys {
        let comps = s.components();
        let mut tuple = Vec::with_capacity(k);
        for j in 0..k {
            let mut u = MatrixRep::zero(r, n, &cfg);
            for beta in 0..q {
                u.set_entry(0, beta, comps[j * q + beta].clone());
            }
            tuple.push(operator_of(&u)?);
        }
        if !relation_value(Side::Left, gens, &tuple)?.is_zero() {
            return Err(Error::Internal(
                "reassembled syzygy does not annihilate the generators".into(),
            ));
        }
        syzygies.push(tuple);
    }
    Ok(Presentation {
        generators: gens.to_vec(),
        syzygies,
        level: r,
        side: Side::Left,
    })
}

/// Right-ideal version of [`present_left_ideal`], through the transpose.
pub fn present_right_ideal(gens: &[WeylElement], level: Option<Level>) -> Result<Presentation> {
    let flipped: Vec<WeylElement> = gens.iter().map(WeylElement::transpose).collect();
    let left = present_left_ideal(&flipped, level)?;
    let syzygies: Vec<Vec<WeylElement>> = left
        .syzygies
        .iter()
        .map(|t| t.iter().map(WeylElement::transpose).collect())
        .collect();
    for t in &syzygies {
        if !relation_value(Side::Right, gens, t)?.is_zero() {
            return Err(Error::Internal(
                "transposed syzygy does not annihilate the generators".into(),
            ));
        }
    }
    Ok(Presentation {
        generators: gens.to_vec(),
        syzygies,
        level: left.level,
        side: Side::Right,
    })
}

pub fn present_ideal(
    side: Side,
    gens: &[WeylElement],
    level: Option<Level>,
) -> Result<Presentation> {
    match side {
        Side::Left => present_left_ideal(gens, level),
        Side::Right => present_right_ideal(gens, level),
    }
}

/// Outcome of re-checking a presentation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub level: Level,
    pub side: Side,
    /// One entry per syzygy: whether it annihilates the generators.
    pub checks: Vec<bool>,
    /// Whether every generator lies in the stated level.
    pub level_ok: bool,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.level_ok && self.checks.iter().all(|&c| c)
    }
}

/// Re-checks every syzygy identity exactly.
pub fn verify_presentation(pres: &Presentation) -> VerificationReport {
    let checks = pres
        .syzygies
        .iter()
        .map(|t| {
            relation_value(pres.side, &pres.generators, t)
                .map(|v| v.is_zero())
                .unwrap_or(false)
        })
        .collect();
    VerificationReport {
        level: pres.level,
        side: pres.side,
        checks,
        level_ok: pres.generators.iter().all(|g| level_of(g) <= pres.level),
    }
}

/// All words `x^a ∂^{[b]}` with `|a| + |b| ≤ bound`, in a fixed order.
pub fn words_up_to(n: usize, bound: u64) -> Vec<Word> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; 2 * n];
    fn rec(i: usize, left: u64, cur: &mut Vec<u32>, n: usize, out: &mut Vec<Word>) {
        if i == 2 * n {
            out.push(Word::new(
                MultiIndex::new(cur[..n].iter().copied()),
                MultiIndex::new(cur[n..].iter().copied()),
            ));
            return;
        }
        for e in 0..=left {
            cur[i] = e as u32;
            rec(i + 1, left - e, cur, n, out);
        }
        cur[i] = 0;
    }
    rec(0, bound, &mut cur, n, &mut out);
    out
}

/// A basis of a space of syzygy tuples whose components have degree ≤ `bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedKernel {
    pub bound: u64,
    pub side: Side,
    pub basis: Vec<Vec<WeylElement>>,
}

impl TruncatedKernel {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of the basis tuples over `(slot, word)` pairs.
    fn coordinates(&self, n: usize, k: usize) -> (usize, Vec<Vec<u32>>) {
        let words = words_up_to(n, self.bound);
        let index: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let dim = words.len() * k;
        let vecs = self
            .basis
            .iter()
            .map(|t| {
                let mut v = vec![0u32; dim];
                for (j, u) in t.iter().enumerate() {
                    for (w, c) in u.terms() {
                        let i = index[w];
                        v[j * words.len() + i] = c;
                    }
                }
                v
            })
            .collect();
        (dim, vecs)
    }

    /// True when both kernels span the same space of tuples.
    pub fn same_span(&self, other: &TruncatedKernel, gens: &[WeylElement]) -> bool {
        let Ok((n, cfg)) = check_generators(gens) else {
            return false;
        };
        if self.bound != other.bound || self.side != other.side {
            return false;
        }
        let (dim, a) = self.coordinates(n, gens.len());
        let (_, b) = other.coordinates(n, gens.len());
        same_span(&cfg, dim, &a, &b)
    }
}

/// All syzygies with components of degree ≤ `bound`, by dense elimination.
pub fn truncated_syzygy_oracle(
    gens: &[WeylElement],
    bound: u64,
    side: Side,
) -> Result<TruncatedKernel> {
    let (n, cfg) = check_generators(gens)?;
    let words = words_up_to(n, bound);
    let k = gens.len();
    let mut images: Vec<Vec<(usize, u32)>> = Vec::with_capacity(words.len() * k);
    let mut targets: HashMap<Word, usize> = HashMap::new();
    for d in gens {
        for w in &words {
            let u = WeylElement::word(&cfg, w.clone(), 1);
            let img = match side {
                Side::Left => u.try_mul(d)?,
                Side::Right => d.try_mul(&u)?,
            };
            let col = img
                .terms()
                .map(|(t, c)| {
                    let next = targets.len();
                    (*targets.entry(t.clone()).or_insert(next), c)
                })
                .collect();
            images.push(col);
        }
    }
    let mut m = DenseMatrix::zeros(targets.len(), images.len());
    for (col, entries) in images.iter().enumerate() {
        for &(row, c) in entries {
            m.add_at(&cfg, row, col, c);
        }
    }
    let basis = m
        .kernel(&cfg)
        .into_iter()
        .map(|v| tuple_from_coordinates(&v, &words, k, n, &cfg))
        .collect();
    Ok(TruncatedKernel { bound, side, basis })
}

fn tuple_from_coordinates(
    v: &[u32],
    words: &[Word],
    k: usize,
    n: usize,
    cfg: &FpConfig,
) -> Vec<WeylElement> {
    (0..k)
        .map(|j| {
            WeylElement::from_terms(
                n,
                cfg,
                words
                    .iter()
                    .enumerate()
                    .map(|(i, w)| (w.clone(), v[j * words.len() + i])),
            )
        })
        .collect()
}

/// The tuples of degree ≤ `bound` lying in the submodule generated by the
/// presentation's syzygies (left multiples for a left presentation).
///
/// Works at a level `r'` containing every word of degree ≤ `bound`. A tuple
/// `t` is a left `D_{r'}`-combination of the syzygies exactly when every row
/// of `[M(t_1) | … | M(t_k)]` lies in the `A_{r'}`-module spanned by the rows
/// of the corresponding matrices of the syzygies. Membership is decided by
/// normal forms against a Gröbner basis of that row module; normal forms are
/// linear, so the admissible tuples form the kernel of a dense matrix.
pub fn presentation_span(pres: &Presentation, bound: u64) -> Result<TruncatedKernel> {
    if pres.side == Side::Right {
        let flipped = Presentation {
            generators: pres.generators.iter().map(WeylElement::transpose).collect(),
            syzygies: pres
                .syzygies
                .iter()
                .map(|t| t.iter().map(WeylElement::transpose).collect())
                .collect(),
            level: pres.level,
            side: Side::Left,
        };
        let left = presentation_span(&flipped, bound)?;
        return Ok(TruncatedKernel {
            bound,
            side: Side::Right,
            basis: left
                .basis
                .iter()
                .map(|t| t.iter().map(WeylElement::transpose).collect())
                .collect(),
        });
    }

    let (n, cfg) = check_generators(&pres.generators)?;
    let k = pres.k();
    let r = pres
        .level
        .max(level_for_exponent(cfg.p(), bound as u32))
        .max(
            pres.syzygies
                .iter()
                .flatten()
                .map(level_of)
                .max()
                .unwrap_or_default(),
        );
    let q = crate::chase::standard_basis(r, n, &cfg).len();

    let mut row_gens: Vec<ModuleVector> = Vec::new();
    for t in &pres.syzygies {
        let mats: Vec<MatrixRep> = t.iter().map(|u| matrix_of(u, r)).collect::<Result<_>>()?;
        for alpha in 0..q {
            let comps: Vec<Poly> = mats
                .iter()
                .flat_map(|m| m.row(alpha).iter().cloned())
                .collect();
            let v = ModuleVector::new(comps);
            if !v.is_zero() {
                row_gens.push(v);
            }
        }
    }
    let gb = if row_gens.is_empty() {
        None
    } else {
        Some(GroebnerBasis::compute(
            &row_gens,
            &ModuleOrder::top(MonomialOrder::DegRevLex),
        )?)
    };

    let words = words_up_to(n, bound);
    let mut coords: HashMap<(usize, usize, MultiIndex), usize> = HashMap::new();
    let mut columns: Vec<Vec<(usize, u32)>> = Vec::with_capacity(words.len() * k);
    for j in 0..k {
        for w in &words {
            let m = matrix_of(&WeylElement::word(&cfg, w.clone(), 1), r)?;
            let mut col: Vec<(usize, u32)> = Vec::new();
            for alpha in 0..q {
                let row: Vec<(usize, MultiIndex, u32)> = m
                    .row(alpha)
                    .iter()
                    .enumerate()
                    .flat_map(|(beta, e)| {
                        e.terms()
                            .map(move |(mono, c)| (j * q + beta, mono.clone(), c))
                    })
                    .collect();
                if row.is_empty() {
                    continue;
                }
                let nf = match &gb {
                    Some(gb) => gb.normal_form_sparse(row),
                    None => row,
                };
                for (pos, mono, c) in nf {
                    let next = coords.len();
                    let idx = *coords.entry((alpha, pos, mono)).or_insert(next);
                    col.push((idx, c));
                }
            }
            columns.push(col);
        }
    }
    let mut dense = DenseMatrix::zeros(coords.len(), columns.len());
    for (c, entries) in columns.iter().enumerate() {
        for &(row, v) in entries {
            dense.add_at(&cfg, row, c, v);
        }
    }
    let basis = dense
        .kernel(&cfg)
        .into_iter()
        .map(|v| tuple_from_coordinates(&v, &words, k, n, &cfg))
        .collect();
    Ok(TruncatedKernel {
        bound,
        side: Side::Left,
        basis,
    })
}
