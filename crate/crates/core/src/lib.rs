//! Computer algebra for the Weyl algebra `A_n(F_p)` in positive
//! characteristic, presented by the variables `x_i` and the divided powers
//! `∂_i^{[r]}`.
//!
//! The crate provides:
//!
//! - canonical normal forms and multiplication of differential operators
//!   ([`weyl`]), checked against their action on `F_p[x_1, …, x_n]`;
//! - the Frobenius filtration `D_0 ⊆ D_1 ⊆ …` and the identification of `D_r`
//!   with `q × q` matrices over `A_r = F_p[x^{p^r}]` ([`chase`]);
//! - a module Gröbner engine over polynomial rings ([`groebner`]);
//! - finite presentations of finitely generated left and right ideals
//!   ([`coherence`]), with an independent truncated linear-algebra oracle;
//! - the text formats used by the command-line tool ([`text`]).
//!
//! ```
//! use divweyl::{parse_operator, present_left_ideal, FpConfig};
//!
//! let cfg = FpConfig::new(2)?;
//! let d = parse_operator("d1", 1, &cfg)?;
//! assert!((&d * &d).is_zero());
//!
//! let pres = present_left_ideal(&[d.clone()], None)?;
//! assert_eq!(pres.syzygies, vec![vec![d]]);
//! # Ok::<(), divweyl::Error>(())
//! ```

pub mod arith;
pub mod chase;
pub mod coherence;
pub mod error;
pub mod groebner;
pub mod linalg;
pub mod poly;
pub mod text;
pub mod weyl;

pub use arith::{binom_mod_p, FpConfig, FpScalar, MultiIndex};
pub use chase::{
    commutes_with_frobenius, level_of, matrix_of, operator_of, standard_basis, Level, MatrixRep,
};
pub use coherence::{
    lift_level, present_ideal, present_left_ideal, present_right_ideal, presentation_span,
    truncated_syzygy_oracle, verify_presentation, Presentation, Side, TruncatedKernel,
    VerificationReport,
};
pub use error::{Error, Result};
pub use groebner::{buchberger, module_syzygies, reduce, ModuleOrder, ModuleVector};
pub use poly::{FrobeniusCoords, MonomialOrder, Poly};
pub use text::{format_operator, parse_operator, parse_polynomial, OperatorFile};
pub use weyl::{WeylElement, Word};
