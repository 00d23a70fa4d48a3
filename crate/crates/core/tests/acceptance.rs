//! Acceptance suite. Each criterion prints a single `PASS`/`FAIL` line with
//! its wall time; the process exits nonzero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use divweyl::coherence::words_up_to;
use divweyl::groebner::is_groebner_basis;
use divweyl::*;
use rand::Rng;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Check,
}

fn gen_x(n: usize, cfg: &FpConfig, i: usize) -> WeylElement {
    WeylElement::x(n, cfg, i)
}

fn gen_d(n: usize, cfg: &FpConfig, i: usize, r: u32) -> WeylElement {
    WeylElement::d(n, cfg, i, r)
}

fn relations() -> Check {
    let mut count = 0usize;
    for p in [2u64, 3, 5] {
        let cfg = field(p);
        let top = (p * p) as u32;
        for n in 1..=2usize {
            for i in 0..n {
                ensure!(
                    gen_d(n, &cfg, i, 0) == WeylElement::one(n, &cfg),
                    "d[0] is not 1 at p={p}"
                );
                for j in 0..n {
                    let xi = gen_x(n, &cfg, i);
                    let xj = gen_x(n, &cfg, j);
                    ensure!(
                        xi.commutator(&xj).unwrap().is_zero(),
                        "[x{i}, x{j}] != 0 at p={p}"
                    );
                    count += 1;
                    for r in 0..=top {
                        let dr = gen_d(n, &cfg, i, r);
                        let expected = if i == j && r >= 1 {
                            gen_d(n, &cfg, i, r - 1)
                        } else {
                            WeylElement::zero(n, &cfg)
                        };
                        ensure!(
                            dr.commutator(&xj).unwrap() == expected,
                            "[d{i}[{r}], x{j}] wrong at p={p}, n={n}"
                        );
                        count += 1;
                        for s in 0..=top {
                            let ds = gen_d(n, &cfg, j, s);
                            if i == j {
                                let c = exact_binom_mod((r + s) as u64, r as u64, p);
                                let expected = gen_d(n, &cfg, i, r + s).scale(c);
                                ensure!(
                                    dr.try_mul(&ds).unwrap() == expected,
                                    "d{i}[{r}]*d{i}[{s}] wrong at p={p}, n={n}"
                                );
                            }
                            ensure!(
                                dr.commutator(&ds).unwrap().is_zero(),
                                "[d{i}[{r}], d{j}[{s}]] != 0 at p={p}, n={n}"
                            );
                            count += 2;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{count} identities"))
}

fn action_oracle() -> Check {
    let mut rng = rng(0xac7);
    let mut pairs = 0;
    let mut evaluations = 0;
    let settings = [(2u64, 1usize), (2, 2), (3, 1), (3, 2), (5, 1), (5, 2)];
    for round in 0..510 {
        let (p, n) = settings[round % settings.len()];
        let cfg = field(p);
        let u = random_element(&mut rng, n, &cfg, 4, 4);
        let v = random_element(&mut rng, n, &cfg, 4, 4);
        let uv = u.try_mul(&v).map_err(|e| e.to_string())?;
        for m in monomials_up_to(n, 8) {
            let f = monomial_dense(&m);
            let lhs = oracle_apply(&uv, &f, p);
            let rhs = oracle_apply(&u, &oracle_apply(&v, &f, p), p);
            ensure!(
                lhs == rhs,
                "(u*v)(x^{m:?}) differs from u(v(x^{m:?})) for u={u}, v={v}, p={p}"
            );
            let lib = uv
                .apply(&Poly::monomial(&cfg, m.clone(), 1))
                .map_err(|e| e.to_string())?;
            ensure!(
                to_dense(&lib) == lhs,
                "apply disagrees with the definition on {uv} at x^{m:?}"
            );
            evaluations += 1;
        }
        pairs += 1;
    }
    Ok(format!("{pairs} pairs, {evaluations} evaluations"))
}

fn divided_powers() -> Check {
    let mut checks = 0;
    for p in [2u64, 3, 5] {
        let cfg = field(p);
        for n in 1..=2usize {
            for i in 0..n {
                let d = gen_d(n, &cfg, i, 1);
                let mut factorial = 1u64;
                for r in 0..p as u32 {
                    if r > 0 {
                        factorial = factorial * r as u64 % p;
                    }
                    let lhs = gen_d(n, &cfg, i, r).scale(factorial as u32);
                    ensure!(lhs == d.pow(r), "{r}!*d[{r}] != d^{r} at p={p}");
                    checks += 1;
                }
                ensure!(d.pow(p as u32).is_zero(), "d^p != 0 at p={p}");
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} identities"))
}

/// Expands `Σ_α x^α M[α][β](x^{p^r})` for one column of a matrix.
fn column_polynomial(m: &MatrixRep, beta: usize, shift: &MultiIndex) -> Dense {
    let p = m.config().p() as u64;
    let pr = (m.config().p()).pow(m.level().0);
    let mut out = Dense::new();
    for (alpha, a) in m.basis().iter().enumerate() {
        for (mu, c) in m.entry(alpha, beta).terms() {
            let key: Vec<u32> = (0..a.len())
                .map(|i| a.get(i) + pr * mu.get(i) + shift.get(i))
                .collect();
            let e = out.entry(key).or_insert(0);
            *e = (*e + c as u64) % p;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn matrix_identification() -> Check {
    let mut rng = rng(0x3a7);
    let mut elements = 0;
    for p in [2u64, 3] {
        let cfg = field(p);
        for n in 1..=2usize {
            for r in 0..=2u32 {
                let q = standard_basis(Level(r), n, &cfg).len();
                ensure!(
                    q as u64 == p.pow(r * n as u32),
                    "q = {q} != p^(rn) at p={p}, n={n}, r={r}"
                );
                let per = if p == 3 && n == 2 && r == 2 { 10 } else { 20 };
                for _ in 0..per {
                    let u = random_level_element(&mut rng, n, &cfg, r, 3, 3);
                    let v = random_level_element(&mut rng, n, &cfg, r, 3, 3);
                    let mu = matrix_of(&u, Level(r)).map_err(|e| e.to_string())?;
                    let mv = matrix_of(&v, Level(r)).map_err(|e| e.to_string())?;
                    ensure!(mu.q() == q, "matrix size {} != {q}", mu.q());
                    let muv =
                        matrix_of(&u.try_mul(&v).unwrap(), Level(r)).map_err(|e| e.to_string())?;
                    ensure!(
                        muv == mu.try_mul(&mv).unwrap(),
                        "M(uv) != M(u)M(v) for u={u}, v={v}"
                    );
                    ensure!(
                        matrix_of(&(&u + &v), Level(r)).unwrap() == mu.try_add(&mv).unwrap(),
                        "M(u+v) != M(u)+M(v)"
                    );
                    ensure!(
                        operator_of(&mu).map_err(|e| e.to_string())? == u,
                        "operator_of(M(u)) != u for {u}"
                    );
                    let back = matrix_of(&operator_of(&muv).unwrap(), Level(r)).unwrap();
                    ensure!(back == muv, "M(operator_of(M)) != M");
                    let pr = (cfg.p()).pow(r);
                    for (beta, b) in mu.basis().iter().enumerate() {
                        for i in 0..=n {
                            let shift = if i == n {
                                MultiIndex::zero(n)
                            } else {
                                MultiIndex::unit(n, i, pr)
                            };
                            let source = monomial_dense(&b.add(&shift));
                            ensure!(
                                oracle_apply(&u, &source, p)
                                    == column_polynomial(&mu, beta, &shift),
                                "column {beta} of M({u}) disagrees with the action"
                            );
                        }
                    }
                    elements += 1;
                }
            }
        }
        ensure!(
            matrix_of(&gen_d(1, &cfg, 0, cfg.p()), Level(1)).is_err(),
            "d[p] accepted at level 1"
        );
    }
    Ok(format!("{elements} elements"))
}

fn brute_force_level(d: &WeylElement) -> u32 {
    let (n, cfg) = (d.n(), d.config());
    let mut r = 0;
    loop {
        let pr = (cfg.p()).pow(r);
        let commutes = (0..n).all(|i| {
            let xq = WeylElement::word(
                cfg,
                Word::new(MultiIndex::unit(n, i, pr), MultiIndex::zero(n)),
                1,
            );
            (&(d * &xq) - &(&xq * d)).is_zero()
        });
        if commutes {
            return r;
        }
        r += 1;
    }
}

fn filtration() -> Check {
    let mut rng = rng(0xf17);
    let mut count = 0;
    for round in 0..600 {
        let p = [2u64, 3, 5][round % 3];
        let n = 1 + round % 2;
        let cfg = field(p);
        let d = random_element(&mut rng, n, &cfg, 9, 3);
        let level = level_of(&d);
        let brute = brute_force_level(&d);
        ensure!(
            level.0 == brute,
            "level_of({d}) = {level}, commutation gives {brute}"
        );
        ensure!(
            commutes_with_frobenius(&d, level),
            "{d} fails the commutation test at its level"
        );
        if level.0 > 0 {
            ensure!(
                !commutes_with_frobenius(&d, Level(level.0 - 1)),
                "{d} passes the commutation test below its level"
            );
        }
        count += 1;
    }
    Ok(format!("{count} elements"))
}

fn random_module(rng: &mut rand_chacha::ChaCha8Rng) -> (FpConfig, usize, Vec<ModuleVector>) {
    let p = [2u64, 3, 5][rng.gen_range(0..3)];
    let cfg = field(p);
    let n = rng.gen_range(1..=2);
    let len = rng.gen_range(1..=2);
    let k = rng.gen_range(1..=4);
    let rows = (0..k)
        .map(|_| {
            ModuleVector::new(
                (0..len)
                    .map(|_| {
                        if rng.gen_bool(0.2) {
                            Poly::zero(n, &cfg)
                        } else {
                            random_poly(rng, n, &cfg, 2, 3)
                        }
                    })
                    .collect(),
            )
        })
        .collect();
    (cfg, n, rows)
}

fn groebner() -> Check {
    const BOUND: u32 = 4;
    let mut rng = rng(0x6b);
    let ord = ModuleOrder::top(MonomialOrder::DegRevLex);
    let mut instances = 0;
    let mut total_syzygies = 0;
    let mut nontrivial = 0;
    while instances < 80 {
        let (cfg, n, rows) = random_module(&mut rng);
        let p = cfg.p() as u64;
        let gb = buchberger(&rows, &ord).map_err(|e| e.to_string())?;
        ensure!(
            is_groebner_basis(&gb, &ord),
            "emitted basis fails the S-vector check"
        );
        for r in &rows {
            ensure!(
                reduce(r, &gb, &ord).unwrap().is_zero(),
                "input {r} does not reduce to zero"
            );
        }
        let syz = module_syzygies(&rows, &ord).map_err(|e| e.to_string())?;
        if !syz.is_empty() {
            ensure!(
                is_groebner_basis(&syz, &ord),
                "syzygy basis fails the S-vector check"
            );
        }
        for s in &syz {
            let mut acc = vec![Poly::zero(n, &cfg); rows[0].len()];
            for (h, row) in s.components().iter().zip(&rows) {
                for (slot, g) in acc.iter_mut().zip(row.components()) {
                    *slot = &*slot + &(h * g);
                }
            }
            ensure!(
                acc.iter().all(Poly::is_zero),
                "syzygy {s} does not annihilate the rows"
            );
        }
        let dense_rows: Vec<Vec<Dense>> = rows
            .iter()
            .map(|r| r.components().iter().map(to_dense).collect())
            .collect();
        let kernel = poly_kernel_dim(&dense_rows, n, BOUND, p);
        let monos = monomials_up_to(n, BOUND);
        let index: std::collections::HashMap<Vec<u32>, usize> = monos
            .iter()
            .enumerate()
            .map(|(i, m)| (m.as_slice().to_vec(), i))
            .collect();
        let mut vectors = Vec::new();
        for s in &syz {
            let deg = s.degree().unwrap_or(0) as u32;
            if deg > BOUND {
                continue;
            }
            for m in monomials_up_to(n, BOUND - deg) {
                let mut v = vec![0u64; rows.len() * monos.len()];
                for (j, h) in s.components().iter().enumerate() {
                    for (e, c) in h.terms() {
                        v[j * monos.len() + index[e.add(&m).as_slice()]] = c as u64;
                    }
                }
                vectors.push(v);
            }
        }
        let span = if vectors.is_empty() {
            0
        } else {
            rank_mod(&vectors, p)
        };
        ensure!(
            span == kernel,
            "truncated syzygy span has dimension {span}, dense kernel {kernel} (p={p}, n={n}, rows={rows:?})"
        );
        total_syzygies += syz.len();
        nontrivial += usize::from(!syz.is_empty());
        instances += 1;
    }
    Ok(format!(
        "{instances} instances ({nontrivial} with syzygies), {total_syzygies} syzygies"
    ))
}

fn random_generators(
    rng: &mut rand_chacha::ChaCha8Rng,
    n: usize,
    cfg: &FpConfig,
    k: usize,
) -> Vec<WeylElement> {
    let mut gens = Vec::new();
    while gens.len() < k {
        let g = random_element(rng, n, cfg, 2, 3);
        if !g.is_zero() {
            gens.push(g);
        }
    }
    gens
}

fn coherence() -> Check {
    const BOUND: u64 = 4;
    let mut rng = rng(0xc0e);
    let mut ideals = 0;
    let mut syzygies = 0;
    for p in [2u64, 3] {
        let cfg = field(p);
        for n in 1..=2usize {
            for k in 1..=3usize {
                let reps = if n == 2 && k == 3 { 2 } else { 3 };
                for _ in 0..reps {
                    let gens = random_generators(&mut rng, n, &cfg, k);
                    for side in [Side::Left, Side::Right] {
                        let label = format!(
                            "{side} ideal {:?} at p={p}",
                            gens.iter().map(|g| g.to_string()).collect::<Vec<_>>()
                        );
                        let pres = present_ideal(side, &gens, None)
                            .map_err(|e| format!("{label}: {e}"))?;
                        let report = verify_presentation(&pres);
                        ensure!(report.all_passed(), "{label}: verification failed");
                        for s in &pres.syzygies {
                            ensure!(
                                relation_value_is_zero(side, &gens, s),
                                "{label}: syzygy does not vanish"
                            );
                        }
                        let oracle = truncated_syzygy_oracle(&gens, BOUND, side)
                            .map_err(|e| e.to_string())?;
                        let span = presentation_span(&pres, BOUND).map_err(|e| e.to_string())?;
                        ensure!(
                            span.same_span(&oracle, &gens),
                            "{label}: span {} vs oracle {}",
                            span.dim(),
                            oracle.dim()
                        );
                        let lifted = present_ideal(side, &gens, Some(Level(pres.level.0 + 1)))
                            .map_err(|e| format!("{label}: {e}"))?;
                        ensure!(
                            verify_presentation(&lifted).all_passed(),
                            "{label}: lifted verification failed"
                        );
                        let lifted_span =
                            presentation_span(&lifted, BOUND).map_err(|e| e.to_string())?;
                        ensure!(
                            lifted_span.same_span(&span, &gens),
                            "{label}: level {} and level {} spans differ",
                            pres.level,
                            lifted.level
                        );
                        ideals += 1;
                        syzygies += pres.syzygies.len();
                    }
                }
            }
        }
    }
    Ok(format!("{ideals} ideals, {syzygies} syzygies"))
}

fn relation_value_is_zero(side: Side, gens: &[WeylElement], tuple: &[WeylElement]) -> bool {
    let mut acc = WeylElement::zero(gens[0].n(), gens[0].config());
    for (d, u) in gens.iter().zip(tuple) {
        let term = match side {
            Side::Left => u * d,
            Side::Right => d * u,
        };
        acc = &acc + &term;
    }
    acc.is_zero()
}

fn golden() -> Check {
    const BOUND: u64 = 4;
    let cfg = field(2);
    let d = gen_d(1, &cfg, 0, 1);
    let gens = vec![d.clone()];
    // u·∂ = Σ c (b+1) x^a ∂^[b+1] vanishes exactly when every b is odd
    let expected: Vec<Vec<WeylElement>> = words_up_to(1, BOUND)
        .into_iter()
        .filter(|w| w.d.get(0) % 2 == 1)
        .map(|w| vec![WeylElement::word(&cfg, w, 1)])
        .collect();
    ensure!(
        expected.len() == 6,
        "expected 6 annihilating words, built {}",
        expected.len()
    );
    for side in [Side::Left, Side::Right] {
        let pres = present_ideal(side, &gens, None).map_err(|e| e.to_string())?;
        ensure!(
            pres.syzygies == vec![vec![d.clone()]],
            "{side} presentation is {:?}",
            pres.syzygies
        );
        let oracle = truncated_syzygy_oracle(&gens, BOUND, side).map_err(|e| e.to_string())?;
        // ∂u = 0 iff τ(u)∂ = 0, so the right annihilator is the transpose of the left one
        let basis = match side {
            Side::Left => expected.clone(),
            Side::Right => expected.iter().map(|t| vec![t[0].transpose()]).collect(),
        };
        let reference = TruncatedKernel {
            bound: BOUND,
            side,
            basis,
        };
        ensure!(
            oracle.same_span(&reference, &gens),
            "{side} oracle kernel has dimension {}",
            oracle.dim()
        );
        let span = presentation_span(&pres, BOUND).map_err(|e| e.to_string())?;
        ensure!(
            span.same_span(&reference, &gens),
            "{side} presentation span differs"
        );
    }
    Ok("Ann(d1) = D*d1 on both sides".into())
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            name: "generator relations",
            limit: Some(Duration::from_secs(10)),
            run: relations,
        },
        Criterion {
            id: 2,
            name: "action oracle",
            limit: Some(Duration::from_secs(60)),
            run: action_oracle,
        },
        Criterion {
            id: 3,
            name: "divided-power identity",
            limit: None,
            run: divided_powers,
        },
        Criterion {
            id: 4,
            name: "matrix identification",
            limit: Some(Duration::from_secs(60)),
            run: matrix_identification,
        },
        Criterion {
            id: 5,
            name: "filtration level",
            limit: None,
            run: filtration,
        },
        Criterion {
            id: 6,
            name: "groebner certificates",
            limit: Some(Duration::from_secs(300)),
            run: groebner,
        },
        Criterion {
            id: 7,
            name: "coherence witness",
            limit: Some(Duration::from_secs(600)),
            run: coherence,
        },
        Criterion {
            id: 8,
            name: "golden annihilator",
            limit: None,
            run: golden,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!("exceeded {limit:?}")),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!(
                "PASS criterion {} ({}): {detail} [{elapsed:.2?}]",
                c.id, c.name
            ),
            Err(why) => {
                failed += 1;
                println!(
                    "FAIL criterion {} ({}): {why} [{elapsed:.2?}]",
                    c.id, c.name
                );
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
