//! Buchberger's algorithm for submodules of `R^ℓ`, `R = F_p[y_1, …, y_n]`, and
//! syzygies of finitely many vectors by the tag (elimination) method.
//!
//! Module terms are compared term-over-position: monomials first, ties broken
//! so that a lower component index is larger. An optional elimination block
//! makes every term in the first `k` components larger than every term after
//! them.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap, HashSet};
use std::fmt;

use crate::arith::{FpConfig, MultiIndex};
use crate::error::{Error, Result};
use crate::poly::{MonomialOrder, Poly};

/// An element of the free module `R^ℓ`.
#[derive(Clone, PartialEq, Eq)]
pub struct ModuleVector {
    comps: Vec<Poly>,
}

impl ModuleVector {
    /// Panics on an empty component list or components from different rings.
    pub fn new(comps: Vec<Poly>) -> Self {
        assert!(
            !comps.is_empty(),
            "module vectors have at least one component"
        );
        let (n, p) = (comps[0].n(), comps[0].config().p());
        assert!(
            comps.iter().all(|c| c.n() == n && c.config().p() == p),
            "components must share a ring"
        );
        ModuleVector { comps }
    }

    pub fn zero(len: usize, n: usize, cfg: &FpConfig) -> Self {
        ModuleVector::new(vec![Poly::zero(n, cfg); len])
    }

    /// The standard basis vector `e_i` of `R^len`.
    pub fn unit(len: usize, i: usize, n: usize, cfg: &FpConfig) -> Self {
        let mut v = Self::zero(len, n, cfg);
        v.comps[i] = Poly::one(n, cfg);
        v
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn components(&self) -> &[Poly] {
        &self.comps
    }

    pub fn into_components(self) -> Vec<Poly> {
        self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Poly::is_zero)
    }

    pub fn n(&self) -> usize {
        self.comps[0].n()
    }

    pub fn config(&self) -> &FpConfig {
        self.comps[0].config()
    }

    /// Largest total degree among the components; `None` for zero.
    pub fn degree(&self) -> Option<u64> {
        self.comps.iter().filter_map(Poly::degree).max()
    }

    pub fn scale_by(&self, f: &Poly) -> ModuleVector {
        ModuleVector::new(self.comps.iter().map(|c| c * f).collect())
    }

    pub fn try_add(&self, other: &ModuleVector) -> Result<ModuleVector> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch(self.len(), other.len()));
        }
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.try_add(b))
            .collect::<Result<_>>()?;
        Ok(ModuleVector { comps })
    }

    /// `Σ_j self_j · rows_j` for vectors `rows` of a common length.
    pub fn combine(&self, rows: &[ModuleVector]) -> Result<ModuleVector> {
        if self.len() != rows.len() {
            return Err(Error::LengthMismatch(self.len(), rows.len()));
        }
        let mut acc: Option<ModuleVector> = None;
        for (c, row) in self.comps.iter().zip(rows) {
            let term = row.scale_by(c);
            acc = Some(match acc {
                None => term,
                Some(a) => a.try_add(&term)?,
            });
        }
        acc.ok_or(Error::EmptyGenerators)
    }
}

impl fmt::Display for ModuleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .comps
            .iter()
            .map(|c| c.display_with("y").to_string())
            .collect();
        write!(f, "⟨{}⟩", parts.join(", "))
    }
}

impl fmt::Debug for ModuleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Term-over-position order with an optional elimination block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ModuleOrder {
    pub base: MonomialOrder,
    /// When set, components `0..k` are eliminated: their terms dominate.
    pub elim: Option<usize>,
}

impl ModuleOrder {
    pub fn top(base: MonomialOrder) -> Self {
        ModuleOrder { base, elim: None }
    }

    pub fn eliminating(base: MonomialOrder, block: usize) -> Self {
        ModuleOrder {
            base,
            elim: Some(block),
        }
    }

    #[inline]
    fn block(&self, pos: u32) -> u8 {
        match self.elim {
            Some(k) if (pos as usize) < k => 1,
            _ => 0,
        }
    }

    #[inline]
    fn cmp_terms(&self, a: &Term, b: &Term) -> Ordering {
        self.block(a.pos)
            .cmp(&self.block(b.pos))
            .then_with(|| self.base.compare(&a.exp, &b.exp))
            .then_with(|| b.pos.cmp(&a.pos))
    }

    /// A lexicographically comparable key realizing `cmp_terms`.
    fn key(&self, t: &Term) -> Vec<i64> {
        let mut k = Vec::with_capacity(t.exp.len() + 3);
        k.push(self.block(t.pos) as i64);
        match self.base {
            MonomialOrder::DegRevLex => {
                k.push(t.exp.total_degree() as i64);
                k.extend(t.exp.as_slice().iter().rev().map(|&e| -(e as i64)));
            }
            MonomialOrder::Lex => k.extend(t.exp.iter().map(|e| e as i64)),
        }
        k.push(-(t.pos as i64));
        k
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
struct Term {
    pos: u32,
    exp: MultiIndex,
}

/// Sparse module element; terms sorted ascending, leading term last.
#[derive(Clone, Debug)]
struct SVec {
    terms: Vec<(Term, u32)>,
}

impl SVec {
    fn from_vector(v: &ModuleVector, ord: &ModuleOrder) -> SVec {
        let mut terms: Vec<(Term, u32)> = v
            .comps
            .iter()
            .enumerate()
            .flat_map(|(pos, c)| {
                c.terms().map(move |(m, k)| {
                    (
                        Term {
                            pos: pos as u32,
                            exp: m.clone(),
                        },
                        k,
                    )
                })
            })
            .collect();
        terms.sort_by(|a, b| ord.cmp_terms(&a.0, &b.0));
        SVec { terms }
    }

    fn to_vector(&self, len: usize, n: usize, cfg: &FpConfig) -> ModuleVector {
        let mut comps = vec![Poly::zero(n, cfg); len];
        for (t, c) in &self.terms {
            comps[t.pos as usize].add_term(t.exp.clone(), *c);
        }
        ModuleVector { comps }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lead(&self) -> Option<&(Term, u32)> {
        self.terms.last()
    }

    fn make_monic(&mut self, cfg: &FpConfig) {
        if let Some(&(_, lc)) = self.lead() {
            if lc != 1 {
                let inv = cfg.inv(lc).expect("nonzero leading coefficient");
                for (_, c) in self.terms.iter_mut() {
                    *c = cfg.mul(*c, inv);
                }
            }
        }
    }

    /// `self − k·x^shift·g`, merging the sorted term lists.
    fn sub_scaled(
        &self,
        k: u32,
        shift: &MultiIndex,
        g: &SVec,
        ord: &ModuleOrder,
        cfg: &FpConfig,
    ) -> SVec {
        let neg = cfg.neg(k);
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = g
            .terms
            .iter()
            .map(|(t, c)| {
                (
                    Term {
                        pos: t.pos,
                        exp: t.exp.add(shift),
                    },
                    cfg.mul(*c, neg),
                )
            })
            .peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => out.push(b.next().unwrap()),
                (Some(x), Some(y)) => match ord.cmp_terms(&x.0, &y.0) {
                    Ordering::Less => out.push(a.next().unwrap().clone()),
                    Ordering::Greater => out.push(b.next().unwrap()),
                    Ordering::Equal => {
                        let (t, c1) = a.next().unwrap().clone();
                        let (_, c2) = b.next().unwrap();
                        let s = cfg.add(c1, c2);
                        if s != 0 {
                            out.push((t, s));
                        }
                    }
                },
            }
        }
        SVec { terms: out }
    }
}

/// A list of reducers indexed by leading position.
struct ReducerSet<'a> {
    elems: Vec<&'a SVec>,
    by_pos: HashMap<u32, Vec<usize>>,
}

impl<'a> ReducerSet<'a> {
    fn new() -> Self {
        ReducerSet {
            elems: Vec::new(),
            by_pos: HashMap::new(),
        }
    }

    fn push(&mut self, g: &'a SVec) {
        let pos = g.lead().expect("nonzero reducer").0.pos;
        self.by_pos.entry(pos).or_default().push(self.elems.len());
        self.elems.push(g);
    }

    fn find(&self, t: &Term) -> Option<&'a SVec> {
        let bucket = self.by_pos.get(&t.pos)?;
        bucket
            .iter()
            .map(|&i| self.elems[i])
            .find(|g| g.lead().unwrap().0.exp.divides(&t.exp))
    }

    fn normal_form(&self, f: SVec, ord: &ModuleOrder, cfg: &FpConfig) -> SVec {
        normal_form_by(|t| self.find(t), f, ord, cfg)
    }
}

/// Full normal form: no remaining term is divisible by a leading term.
fn normal_form_by<'g>(
    find: impl Fn(&Term) -> Option<&'g SVec>,
    f: SVec,
    ord: &ModuleOrder,
    cfg: &FpConfig,
) -> SVec {
    let mut f = f;
    let mut rem: Vec<(Term, u32)> = Vec::new();
    while let Some((t, c)) = f.terms.last().cloned() {
        match find(&t) {
            Some(g) => {
                let (gt, gc) = g.lead().unwrap();
                let shift = t.exp.checked_sub(&gt.exp).expect("divides");
                let k = cfg.mul(c, cfg.inv(*gc).expect("nonzero"));
                f = f.sub_scaled(k, &shift, g, ord, cfg);
            }
            None => {
                rem.push(f.terms.pop().unwrap());
            }
        }
    }
    rem.reverse();
    SVec { terms: rem }
}

fn check_lengths(vs: &[ModuleVector]) -> Result<Option<(usize, usize, FpConfig)>> {
    let Some(first) = vs.first() else {
        return Ok(None);
    };
    for v in vs {
        if v.len() != first.len() {
            return Err(Error::LengthMismatch(first.len(), v.len()));
        }
        first.config().check_same(v.config())?;
        if v.n() != first.n() {
            return Err(Error::ArityMismatch(first.n(), v.n()));
        }
    }
    Ok(Some((first.len(), first.n(), first.config().clone())))
}

/// A normal form of `f` modulo `g`: the current leading term is always
/// reduced by the first eligible element of `g` in list order.
pub fn reduce(f: &ModuleVector, g: &[ModuleVector], ord: &ModuleOrder) -> Result<ModuleVector> {
    check_lengths(std::slice::from_ref(f))?;
    if let Some((len, n, cfg)) = check_lengths(g)? {
        if len != f.len() {
            return Err(Error::LengthMismatch(len, f.len()));
        }
        f.config().check_same(&cfg)?;
        if n != f.n() {
            return Err(Error::ArityMismatch(n, f.n()));
        }
    }
    let cfg = f.config().clone();
    let gs: Vec<SVec> = g
        .iter()
        .map(|v| SVec::from_vector(v, ord))
        .filter(|s| !s.is_zero())
        .collect();
    let mut set = ReducerSet::new();
    for s in &gs {
        set.push(s);
    }
    let nf = set.normal_form(SVec::from_vector(f, ord), ord, &cfg);
    Ok(nf.to_vector(f.len(), f.n(), &cfg))
}

/// The S-vector of `f` and `g`, or `None` when their leading terms sit in
/// different components (or either is zero).
pub fn s_vector(f: &ModuleVector, g: &ModuleVector, ord: &ModuleOrder) -> Option<ModuleVector> {
    let cfg = f.config().clone();
    let (a, b) = (SVec::from_vector(f, ord), SVec::from_vector(g, ord));
    spair(&a, &b, ord, &cfg).map(|s| s.to_vector(f.len(), f.n(), &cfg))
}

fn spair(a: &SVec, b: &SVec, ord: &ModuleOrder, cfg: &FpConfig) -> Option<SVec> {
    let (ta, ca) = a.lead()?;
    let (tb, cb) = b.lead()?;
    if ta.pos != tb.pos {
        return None;
    }
    let lcm = ta.exp.component_max(&tb.exp);
    let sa = lcm.checked_sub(&ta.exp).unwrap();
    let sb = lcm.checked_sub(&tb.exp).unwrap();
    // (1/ca)·x^sa·a − (1/cb)·x^sb·b
    let zero = SVec { terms: Vec::new() };
    let left = zero.sub_scaled(cfg.neg(cfg.inv(*ca).unwrap()), &sa, a, ord, cfg);
    Some(left.sub_scaled(cfg.inv(*cb).unwrap(), &sb, b, ord, cfg))
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct PairEntry {
    key: Vec<i64>,
    i: usize,
    j: usize,
}

/// Work counters from one Buchberger run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuchbergerStats {
    pub pairs_created: usize,
    pub pairs_reduced: usize,
    pub chain_skipped: usize,
    pub zero_reductions: usize,
}

struct Engine {
    ord: ModuleOrder,
    cfg: FpConfig,
    basis: Vec<SVec>,
    by_pos: HashMap<u32, Vec<usize>>,
    queue: BinaryHeap<Reverse<PairEntry>>,
    pending: HashSet<(usize, usize)>,
    stats: BuchbergerStats,
}

impl Engine {
    fn new(ord: ModuleOrder, cfg: FpConfig) -> Self {
        Engine {
            ord,
            cfg,
            basis: Vec::new(),
            by_pos: HashMap::new(),
            queue: BinaryHeap::new(),
            pending: HashSet::new(),
            stats: BuchbergerStats::default(),
        }
    }

    fn normal_form(&self, f: SVec) -> SVec {
        let find = |t: &Term| {
            self.by_pos.get(&t.pos).and_then(|bucket| {
                bucket
                    .iter()
                    .map(|&i| &self.basis[i])
                    .find(|g| g.lead().unwrap().0.exp.divides(&t.exp))
            })
        };
        normal_form_by(find, f, &self.ord, &self.cfg)
    }

    fn insert(&mut self, mut h: SVec) {
        h.make_monic(&self.cfg);
        let m = self.basis.len();
        let lead = h.lead().unwrap().0.clone();
        let bucket = self.by_pos.entry(lead.pos).or_default();
        for &i in bucket.iter() {
            let lcm = Term {
                pos: lead.pos,
                exp: self.basis[i].lead().unwrap().0.exp.component_max(&lead.exp),
            };
            self.queue.push(Reverse(PairEntry {
                key: self.ord.key(&lcm),
                i,
                j: m,
            }));
            self.pending.insert((i, m));
            self.stats.pairs_created += 1;
        }
        bucket.push(m);
        self.basis.push(h);
    }

    /// Buchberger's chain criterion, applied only when both companion pairs
    /// have already been treated.
    fn chain_skip(&self, i: usize, j: usize) -> bool {
        let (ti, tj) = (
            &self.basis[i].lead().unwrap().0,
            &self.basis[j].lead().unwrap().0,
        );
        let lcm = ti.exp.component_max(&tj.exp);
        self.by_pos[&ti.pos].iter().any(|&k| {
            k != i
                && k != j
                && self.basis[k].lead().unwrap().0.exp.divides(&lcm)
                && !self.pending.contains(&(i.min(k), i.max(k)))
                && !self.pending.contains(&(j.min(k), j.max(k)))
        })
    }

    fn run(&mut self) {
        while let Some(Reverse(PairEntry { i, j, .. })) = self.queue.pop() {
            self.pending.remove(&(i, j));
            if self.chain_skip(i, j) {
                self.stats.chain_skipped += 1;
                continue;
            }
            let s = spair(&self.basis[i], &self.basis[j], &self.ord, &self.cfg)
                .expect("pairs share a leading position");
            self.stats.pairs_reduced += 1;
            let h = self.normal_form(s);
            if h.is_zero() {
                self.stats.zero_reductions += 1;
            } else {
                self.insert(h);
            }
        }
    }

    /// Minimal, tail-reduced, monic basis sorted by decreasing leading term.
    fn reduced(&self) -> Vec<SVec> {
        let leads: Vec<&Term> = self.basis.iter().map(|g| &g.lead().unwrap().0).collect();
        let keep: Vec<usize> = (0..self.basis.len())
            .filter(|&i| {
                !(0..self.basis.len()).any(|j| {
                    j != i
                        && leads[j].pos == leads[i].pos
                        && leads[j].exp.divides(&leads[i].exp)
                        && (leads[j].exp != leads[i].exp || j < i)
                })
            })
            .collect();
        let mut out: Vec<SVec> = Vec::with_capacity(keep.len());
        for &i in &keep {
            let mut set = ReducerSet::new();
            for &j in &keep {
                if j != i {
                    set.push(&self.basis[j]);
                }
            }
            let mut g = set.normal_form(self.basis[i].clone(), &self.ord, &self.cfg);
            g.make_monic(&self.cfg);
            out.push(g);
        }
        out.sort_by(|a, b| {
            self.ord
                .cmp_terms(&b.lead().unwrap().0, &a.lead().unwrap().0)
        });
        out
    }
}

fn run_buchberger(
    gens: Vec<SVec>,
    ord: ModuleOrder,
    cfg: &FpConfig,
) -> (Vec<SVec>, BuchbergerStats) {
    let mut engine = Engine::new(ord, cfg.clone());
    for g in gens {
        let h = engine.normal_form(g);
        if !h.is_zero() {
            engine.insert(h);
        }
    }
    engine.run();
    (engine.reduced(), engine.stats)
}

/// The reduced Gröbner basis of the submodule generated by `gens`.
pub fn buchberger(gens: &[ModuleVector], ord: &ModuleOrder) -> Result<Vec<ModuleVector>> {
    Ok(buchberger_with_stats(gens, ord)?.0)
}

pub fn buchberger_with_stats(
    gens: &[ModuleVector],
    ord: &ModuleOrder,
) -> Result<(Vec<ModuleVector>, BuchbergerStats)> {
    let Some((len, n, cfg)) = check_lengths(gens)? else {
        return Ok((Vec::new(), BuchbergerStats::default()));
    };
    let svecs = gens.iter().map(|g| SVec::from_vector(g, ord)).collect();
    let (basis, stats) = run_buchberger(svecs, *ord, &cfg);
    Ok((
        basis.iter().map(|g| g.to_vector(len, n, &cfg)).collect(),
        stats,
    ))
}

/// Checks that every S-vector of `basis` reduces to zero modulo `basis`.
pub fn is_groebner_basis(basis: &[ModuleVector], ord: &ModuleOrder) -> bool {
    let Ok(Some((_, _, cfg))) = check_lengths(basis) else {
        return basis.is_empty();
    };
    let svecs: Vec<SVec> = basis
        .iter()
        .map(|g| SVec::from_vector(g, ord))
        .filter(|s| !s.is_zero())
        .collect();
    let mut set = ReducerSet::new();
    for s in &svecs {
        set.push(s);
    }
    for i in 0..svecs.len() {
        for j in i + 1..svecs.len() {
            if let Some(s) = spair(&svecs[i], &svecs[j], ord, &cfg) {
                if !set.normal_form(s, ord, &cfg).is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

/// A Gröbner basis kept in reducer form for repeated normal forms.
pub struct GroebnerBasis {
    ord: ModuleOrder,
    cfg: FpConfig,
    len: usize,
    n: usize,
    elems: Vec<SVec>,
}

impl GroebnerBasis {
    pub fn compute(gens: &[ModuleVector], ord: &ModuleOrder) -> Result<Self> {
        let (len, n, cfg) = check_lengths(gens)?.ok_or(Error::EmptyGenerators)?;
        let svecs = gens.iter().map(|g| SVec::from_vector(g, ord)).collect();
        let (elems, _) = run_buchberger(svecs, *ord, &cfg);
        Ok(GroebnerBasis {
            ord: *ord,
            cfg,
            len,
            n,
            elems,
        })
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elements(&self) -> Vec<ModuleVector> {
        self.elems
            .iter()
            .map(|g| g.to_vector(self.len, self.n, &self.cfg))
            .collect()
    }

    pub fn normal_form(&self, f: &ModuleVector) -> ModuleVector {
        let mut set = ReducerSet::new();
        for g in &self.elems {
            set.push(g);
        }
        set.normal_form(SVec::from_vector(f, &self.ord), &self.ord, &self.cfg)
            .to_vector(self.len, self.n, &self.cfg)
    }

    /// Normal form of a vector given as sparse `(component, monomial, coeff)`
    /// triples, returned the same way.
    pub fn normal_form_sparse(
        &self,
        terms: impl IntoIterator<Item = (usize, MultiIndex, u32)>,
    ) -> Vec<(usize, MultiIndex, u32)> {
        let mut v: Vec<(Term, u32)> = terms
            .into_iter()
            .filter(|t| t.2 % self.cfg.p() != 0)
            .map(|(pos, exp, c)| {
                (
                    Term {
                        pos: pos as u32,
                        exp,
                    },
                    c % self.cfg.p(),
                )
            })
            .collect();
        v.sort_by(|a, b| self.ord.cmp_terms(&a.0, &b.0));
        // merge duplicates
        let mut merged: Vec<(Term, u32)> = Vec::with_capacity(v.len());
        for (t, c) in v {
            match merged.last_mut() {
                Some((lt, lc)) if *lt == t => *lc = self.cfg.add(*lc, c),
                _ => merged.push((t, c)),
            }
        }
        merged.retain(|(_, c)| *c != 0);
        let mut set = ReducerSet::new();
        for g in &self.elems {
            set.push(g);
        }
        set.normal_form(SVec { terms: merged }, &self.ord, &self.cfg)
            .terms
            .into_iter()
            .map(|(t, c)| (t.pos as usize, t.exp, c))
            .collect()
    }
}

/// Generators of `{v ∈ R^k : Σ_j v_j·rows_j = 0}`.
///
/// Runs Buchberger on `(rows_j | e_j) ∈ R^{ℓ+k}` with the first block
/// eliminated; the tag parts of basis elements whose first block vanishes
/// form a Gröbner basis of the syzygy module for the term-over-position order
/// on `R^k`. Every returned vector is checked against the defining identity.
pub fn module_syzygies(rows: &[ModuleVector], ord: &ModuleOrder) -> Result<Vec<ModuleVector>> {
    let (ell, n, cfg) = check_lengths(rows)?.ok_or(Error::EmptyGenerators)?;
    let k = rows.len();
    let elim = ModuleOrder::eliminating(ord.base, ell);
    let tagged: Vec<SVec> = rows
        .iter()
        .enumerate()
        .map(|(j, row)| {
            let mut comps = row.comps.clone();
            comps.extend((0..k).map(|t| {
                if t == j {
                    Poly::one(n, &cfg)
                } else {
                    Poly::zero(n, &cfg)
                }
            }));
            SVec::from_vector(&ModuleVector { comps }, &elim)
        })
        .collect();
    let (basis, _) = run_buchberger(tagged, elim, &cfg);
    let mut out = Vec::new();
    for g in basis {
        if g.lead().unwrap().0.pos as usize >= ell {
            let full = g.to_vector(ell + k, n, &cfg);
            let syz = ModuleVector {
                comps: full.comps[ell..].to_vec(),
            };
            if !syz.combine(rows)?.is_zero() {
                return Err(Error::Internal(format!(
                    "syzygy {syz} does not annihilate its rows"
                )));
            }
            out.push(syz);
        }
    }
    Ok(out)
}
