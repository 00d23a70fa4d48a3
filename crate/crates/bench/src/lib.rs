//! Fixed workloads shared by the benchmarks.

use divweyl::{parse_operator, FpConfig, ModuleVector, MultiIndex, Poly, WeylElement};

pub fn field(p: u64) -> FpConfig {
    FpConfig::new(p).expect("prime")
}

pub fn operator(text: &str, n: usize, cfg: &FpConfig) -> WeylElement {
    parse_operator(text, n, cfg).expect("valid fixture")
}

/// A pair of dense-ish operators whose product exercises carries in the
/// divided powers.
pub fn product_pair(p: u64) -> (FpConfig, WeylElement, WeylElement) {
    let cfg = field(p);
    let u = operator("x1^3*d1[5]*d2[2] + x2^2*d1[3] + x1*x2*d2[4] + 1", 2, &cfg);
    let v = operator("x1^4*x2*d1[2] + x2^3*d2[3] + x1^2*d1 + x2", 2, &cfg);
    (cfg, u, v)
}

/// Rows of a small polynomial module in two variables.
pub fn module_rows(p: u64) -> Vec<ModuleVector> {
    let cfg = field(p);
    let poly = |terms: &[([u32; 2], u32)]| {
        Poly::from_terms(
            2,
            &cfg,
            terms.iter().map(|&(m, c)| (MultiIndex::from(m), c)),
        )
    };
    vec![
        ModuleVector::new(vec![
            poly(&[([2, 0], 1), ([0, 1], 1)]),
            poly(&[([1, 1], 1)]),
        ]),
        ModuleVector::new(vec![
            poly(&[([1, 1], 1), ([0, 0], 1)]),
            poly(&[([0, 2], 1), ([1, 0], 1)]),
        ]),
        ModuleVector::new(vec![
            poly(&[([0, 2], 1)]),
            poly(&[([2, 0], 1), ([0, 0], 1)]),
        ]),
    ]
}

/// Generators of a left ideal at level one.
pub fn ideal_generators(p: u64) -> (FpConfig, Vec<WeylElement>) {
    let cfg = field(p);
    let gens = ["x1*d1 + x2*d2", "d1*d2 + x2", "x1^2 + d2"]
        .iter()
        .map(|t| operator(t, 2, &cfg))
        .collect();
    (cfg, gens)
}
