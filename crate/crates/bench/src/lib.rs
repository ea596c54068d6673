//! Inputs shared by the workbench benchmarks.

use llwb::lambda::{app, church, Term};
use llwb::syntax::{parse_sequent, Sequent};

/// `plus m n` on Church numerals.
pub fn church_sum(m: usize, n: usize) -> Term {
    let plus = Term::parse(r"\m. \n. \f. \x. m f (n f x)").expect("plus");
    app(app(plus, church(m)), church(n))
}

/// `mult m n` on Church numerals.
pub fn church_product(m: usize, n: usize) -> Term {
    let mult = Term::parse(r"\m. \n. \f. m (n f)").expect("mult");
    app(app(mult, church(m)), church(n))
}

/// MALL sequents of growing difficulty, provable and not.
pub fn prover_inputs() -> Vec<(&'static str, Sequent)> {
    [
        ("distributivity", "|- (a * (b + c))^, (a * b) + (a * c)"),
        ("menu", "|- ((q & s) * (c & f) * (b & t))^, (q & s) * (c & f) * (b & (p + t))"),
        ("no_contraction", "|- a^, a^, a * a * a"),
        ("wide_tensor", "|- a^, b^, a^, b^, a^, (a * b) * (a * b) * a"),
        ("wide_refuted", "|- a^, b^, a^, b^, b^, (a * b) * (a * b) * a"),
    ]
    .into_iter()
    .map(|(n, s)| (n, parse_sequent(s).expect("bench sequent")))
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use llwb::lambda::{beta_normalize, church_value};

    #[test]
    fn arithmetic_inputs() {
        assert_eq!(church_value(&beta_normalize(&church_sum(2, 3), 1000).term), Some(5));
        assert_eq!(church_value(&beta_normalize(&church_product(2, 3), 1000).term), Some(6));
        assert_eq!(prover_inputs().len(), 5);
    }
}
