//! Bundled example tuples.

use crate::error::{Error, Result};
use crate::io;
use crate::opsys::OperatorTuple;
use crate::scalar::C64;

/// Name of the `n = 7`, `d = 4` real symmetric tuple.
pub const PAPER_N7_D4: &str = "paper-n7-d4";

const PAPER_N7_D4_JSON: &str = include_str!("../fixtures/paper_n7_d4.json");

/// Names accepted by [`fixture_json`].
pub const NAMES: &[&str] = &[PAPER_N7_D4];

/// Canonical bytes of a bundled fixture.
pub fn fixture_json(name: &str) -> Result<&'static str> {
    match name {
        PAPER_N7_D4 | "paper_n7_d4" => Ok(PAPER_N7_D4_JSON),
        other => Err(Error::InvalidInput(format!(
            "unknown fixture {other:?}; available: {}",
            NAMES.join(", ")
        ))),
    }
}

/// The fixture as printed, six significant digits per entry.
///
/// The digits are rounded, so traces are of order `1e-6`; use
/// [`OperatorTuple::traceless_part`] before certifying.
pub fn fixture_tuple(name: &str) -> Result<OperatorTuple<C64>> {
    io::tuple_from_value(&io::parse(fixture_json(name)?)?)
}

pub fn paper_n7_d4() -> OperatorTuple<C64> {
    fixture_tuple(PAPER_N7_D4).expect("bundled fixture parses")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::TolerancePolicy;

    #[test]
    fn fixture_is_canonical() {
        let t = paper_n7_d4();
        assert_eq!((t.n(), t.d()), (7, 4));
        let tol = TolerancePolicy::default();
        assert_eq!(io::canonical(&io::tuple_to_value(&t, &tol)), PAPER_N7_D4_JSON);
    }

    #[test]
    fn fixture_is_nearly_orthonormal_under_plain_trace() {
        let t = paper_n7_d4();
        for (i, x) in t.matrices().iter().enumerate() {
            assert!(x.is_hermitian(0.0));
            assert!(x.trace().norm() < 1e-5);
            for (j, y) in t.matrices().iter().enumerate() {
                let g = (x * y).trace().re;
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((g - target).abs() < 5e-6, "({i},{j}) {g}");
            }
        }
    }

    #[test]
    fn unknown_fixture() {
        assert!(fixture_json("nope").is_err());
    }
}
